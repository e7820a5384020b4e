use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// Largest n accepted by [`partitions`].
pub const PARTITION_CAP: u32 = 12;

/// Integer partition with parts in non-increasing order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Partition {
    pub parts: Vec<u32>,
}

impl Partition {
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn total(&self) -> u32 {
        self.parts.iter().sum()
    }
}

/// All partitions of `n`, largest first part first: (n), (n−1, 1), …, (1, …, 1).
pub fn partitions(n: u32) -> Result<Vec<Partition>> {
    if n == 0 || n > PARTITION_CAP {
        return Err(invalid("n", format!("must lie in 1..={PARTITION_CAP}, got {n}")));
    }
    let mut out = Vec::new();
    let mut current = Vec::new();
    extend(n, n, &mut current, &mut out);
    Ok(out)
}

fn extend(remaining: u32, max_part: u32, current: &mut Vec<u32>, out: &mut Vec<Partition>) {
    if remaining == 0 {
        out.push(Partition { parts: current.clone() });
        return;
    }
    for p in (1..=max_part.min(remaining)).rev() {
        current.push(p);
        extend(remaining - p, p, current, out);
        current.pop();
    }
}
