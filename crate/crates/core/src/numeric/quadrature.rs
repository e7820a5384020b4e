//! Globally adaptive Gauss–Kronrod (10/21) quadrature.
//!
//! The error estimate follows the QUADPACK `qk21` heuristic. Subintervals are
//! refined in order of decreasing error estimate until the pooled estimate
//! satisfies `max(abs_tol, rel_tol·|I|)`.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689,
    0.973_906_528_517_171_720_077_964_012_084,
    0.930_157_491_355_708_226_001_207_180_059,
    0.865_063_366_688_984_510_732_096_688_423,
    0.780_817_726_586_416_897_063_717_578_345,
    0.679_409_568_299_024_406_234_327_365_114,
    0.562_757_134_668_604_683_339_000_099_272,
    0.433_395_394_129_247_190_799_265_943_165,
    0.294_392_862_701_460_198_131_126_603_103,
    0.148_874_338_981_631_210_884_826_001_129,
    0.0,
];
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062,
    0.032_558_162_307_964_727_478_818_972_459,
    0.054_755_896_574_351_996_031_381_300_244,
    0.075_039_674_810_919_952_767_043_140_916,
    0.093_125_454_583_697_605_535_065_465_083,
    0.109_387_158_802_297_641_899_210_590_325,
    0.123_491_976_262_065_851_077_208_685_040,
    0.134_709_217_311_473_325_928_054_001_771,
    0.142_775_938_577_060_080_797_094_273_138,
    0.147_739_104_901_338_491_374_841_515_972,
    0.149_445_554_002_916_905_664_936_468_389,
];
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893,
    0.149_451_349_150_580_593_145_776_339_657,
    0.219_086_362_515_982_043_995_534_934_228,
    0.269_266_719_309_996_355_091_226_921_569,
    0.295_524_224_714_752_870_173_892_994_651,
];

/// Tolerances and limits for adaptive integration.
#[derive(Debug, Clone, Copy)]
pub struct QuadSettings<T> {
    pub abs_tol: T,
    pub rel_tol: T,
    pub max_subdivisions: usize,
}

impl<T: Scalar> QuadSettings<T> {
    pub fn new(abs_tol: T, rel_tol: T) -> Self {
        Self {
            abs_tol,
            rel_tol,
            max_subdivisions: 2000,
        }
    }

    pub fn with_max_subdivisions(mut self, n: usize) -> Self {
        self.max_subdivisions = n;
        self
    }
}

impl<T: Scalar> Default for QuadSettings<T> {
    fn default() -> Self {
        let eps = T::epsilon();
        // 1e-10 in f64, ~1e-5 in f32
        let tol = (eps * T::lit(1.0e6)).max(T::lit(1.0e-10));
        Self::new(tol, tol)
    }
}

#[derive(Debug, Clone, Copy)]
pub struct QuadResult<T> {
    pub value: T,
    pub error: T,
    pub evaluations: usize,
}

struct Segment<T> {
    a: T,
    b: T,
    value: T,
    error: T,
}

impl<T: Scalar> PartialEq for Segment<T> {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl<T: Scalar> Eq for Segment<T> {}
impl<T: Scalar> PartialOrd for Segment<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl<T: Scalar> Ord for Segment<T> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error
            .partial_cmp(&other.error)
            .unwrap_or(Ordering::Equal)
    }
}

fn kronrod21<T: Scalar, F: FnMut(T) -> T>(f: &mut F, a: T, b: T) -> (T, T) {
    let half = T::lit(0.5);
    let center = half * (a + b);
    let half_len = half * (b - a);
    let abs_half = half_len.abs();

    let f_center = f(center);
    let mut res_k = f_center * T::lit(WGK[10]);
    let mut res_abs = res_k.abs();
    let mut res_g = T::zero();
    let mut fv1 = [T::zero(); 10];
    let mut fv2 = [T::zero(); 10];
    for j in 0..10 {
        let dx = half_len * T::lit(XGK[j]);
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        let w = T::lit(WGK[j]);
        res_k += w * (f1 + f2);
        res_abs += w * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            res_g += T::lit(WG[j / 2]) * (f1 + f2);
        }
    }
    let mean = res_k * half;
    let mut res_asc = T::lit(WGK[10]) * (f_center - mean).abs();
    for j in 0..10 {
        res_asc += T::lit(WGK[j]) * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let result = res_k * half_len;
    res_abs = res_abs * abs_half;
    res_asc = res_asc * abs_half;
    let mut err = ((res_k - res_g) * half_len).abs();
    if res_asc != T::zero() && err != T::zero() {
        let scale = (T::lit(200.0) * err / res_asc).powf(T::lit(1.5));
        err = res_asc * scale.min(T::one());
    }
    let round_off = T::lit(50.0) * T::epsilon() * res_abs;
    if res_abs > T::min_positive_value() / (T::lit(50.0) * T::epsilon()) {
        err = err.max(round_off);
    }
    (result, err)
}

/// Integrates `f` over the union of consecutive intervals delimited by `points`.
///
/// Breakpoints let the caller pin down known kinks so the adaptive refinement
/// never has to discover them.
pub fn integrate_breaks<T, F>(mut f: F, points: &[T], settings: QuadSettings<T>) -> Result<QuadResult<T>>
where
    T: Scalar,
    F: FnMut(T) -> T,
{
    if points.len() < 2 {
        return Ok(QuadResult {
            value: T::zero(),
            error: T::zero(),
            evaluations: 0,
        });
    }
    let mut heap = BinaryHeap::new();
    let mut total = T::zero();
    let mut total_err = T::zero();
    let mut evaluations = 0;
    for w in points.windows(2) {
        if w[1] == w[0] {
            continue;
        }
        let (v, e) = kronrod21(&mut f, w[0], w[1]);
        evaluations += 21;
        total += v;
        total_err += e;
        heap.push(Segment {
            a: w[0],
            b: w[1],
            value: v,
            error: e,
        });
    }
    let half = T::lit(0.5);
    let mut subdivisions = heap.len();
    loop {
        let target = settings.abs_tol.max(settings.rel_tol * total.abs());
        if total_err <= target {
            break;
        }
        if subdivisions >= settings.max_subdivisions {
            // accept when the remaining error is pure round-off
            if total_err <= T::lit(100.0) * T::epsilon() * total.abs().max(T::one()) {
                break;
            }
            return Err(Error::QuadratureNonConvergence {
                estimate: total.as_f64(),
                error: total_err.as_f64(),
                evaluations,
            });
        }
        let Some(worst) = heap.pop() else { break };
        let mid = half * (worst.a + worst.b);
        if mid <= worst.a.min(worst.b) || mid >= worst.a.max(worst.b) {
            // interval cannot be split further
            heap.push(worst);
            if total_err <= T::lit(1.0e3) * target {
                break;
            }
            return Err(Error::QuadratureNonConvergence {
                estimate: total.as_f64(),
                error: total_err.as_f64(),
                evaluations,
            });
        }
        let (v1, e1) = kronrod21(&mut f, worst.a, mid);
        let (v2, e2) = kronrod21(&mut f, mid, worst.b);
        evaluations += 42;
        subdivisions += 1;
        total += v1 + v2 - worst.value;
        total_err += e1 + e2 - worst.error;
        heap.push(Segment {
            a: worst.a,
            b: mid,
            value: v1,
            error: e1,
        });
        heap.push(Segment {
            a: mid,
            b: worst.b,
            value: v2,
            error: e2,
        });
    }
    // recompute sums to shed accumulated drift
    let (value, error) = heap
        .iter()
        .fold((T::zero(), T::zero()), |(v, e), s| (v + s.value, e + s.error));
    Ok(QuadResult {
        value,
        error,
        evaluations,
    })
}

/// Integrates `f` over `[a, b]`.
pub fn integrate<T, F>(f: F, a: T, b: T, settings: QuadSettings<T>) -> Result<QuadResult<T>>
where
    T: Scalar,
    F: FnMut(T) -> T,
{
    integrate_breaks(f, &[a, b], settings)
}

/// Integrates `f` over `[a, ∞)` through the substitution `x = a + (1 − t)/t`.
pub fn integrate_to_infinity<T, F>(mut f: F, a: T, settings: QuadSettings<T>) -> Result<QuadResult<T>>
where
    T: Scalar,
    F: FnMut(T) -> T,
{
    let g = move |t: T| {
        if t <= T::zero() {
            return T::zero();
        }
        let x = a + (T::one() - t) / t;
        let v = f(x) / (t * t);
        if v.is_finite() {
            v
        } else {
            T::zero()
        }
    };
    integrate_breaks(g, &[T::zero(), T::one()], settings)
}

/// Integrates over `[points[0], ∞)` with finite breakpoints in `points`.
pub fn integrate_breaks_to_infinity<T, F>(
    mut f: F,
    points: &[T],
    settings: QuadSettings<T>,
) -> Result<QuadResult<T>>
where
    T: Scalar,
    F: FnMut(T) -> T,
{
    let last = *points.last().ok_or(Error::Empty("breakpoints"))?;
    let split = QuadSettings {
        abs_tol: settings.abs_tol * T::lit(0.5),
        ..settings
    };
    let finite = integrate_breaks(&mut f, points, split)?;
    let tail = integrate_to_infinity(&mut f, last, split)?;
    Ok(QuadResult {
        value: finite.value + tail.value,
        error: finite.error + tail.error,
        evaluations: finite.evaluations + tail.evaluations,
    })
}
