//! Brute-force oracles shared by the integration suites. Everything here
//! is deliberately independent of the library's computational paths:
//! enumeration instead of linear algebra, direct distance checks instead
//! of window formulas.

// Each integration target compiles its own copy and uses a subset.
#![allow(dead_code)]

use thermo_neutral_core::{LocallyConstantPotential, Sft};

/// All simple cycles of the adjacency graph as vertex lists (closing edge
/// implied), deduplicated by rooting each cycle at its smallest vertex.
pub fn simple_cycles(sft: &Sft) -> Vec<Vec<usize>> {
    let k = sft.k();
    let mut cycles = Vec::new();
    for root in 0..k {
        let mut path = vec![root];
        let mut on_path = vec![false; k];
        on_path[root] = true;
        explore(sft, root, root, &mut path, &mut on_path, &mut cycles);
    }
    cycles
}

fn explore(
    sft: &Sft,
    root: usize,
    current: usize,
    path: &mut Vec<usize>,
    on_path: &mut Vec<bool>,
    cycles: &mut Vec<Vec<usize>>,
) {
    for next in 0..sft.k() {
        if !sft.is_allowed(current, next) {
            continue;
        }
        if next == root {
            cycles.push(path.clone());
        } else if next > root && !on_path[next] {
            path.push(next);
            on_path[next] = true;
            explore(sft, root, next, path, on_path, cycles);
            on_path[next] = false;
            path.pop();
        }
    }
}

/// Mean of a potential along a simple cycle.
pub fn cycle_mean(phi: &LocallyConstantPotential, cycle: &[usize]) -> f64 {
    let len = cycle.len();
    let total: f64 = (0..len)
        .map(|i| phi.edge_value(cycle[i], cycle[(i + 1) % len]))
        .sum();
    total / len as f64
}

/// Extreme cycle means by exhaustive enumeration.
pub fn cycle_mean_extremes(sft: &Sft, phi: &LocallyConstantPotential) -> (f64, f64) {
    let cycles = simple_cycles(sft);
    assert!(!cycles.is_empty(), "valid SFT must carry a cycle");
    let means: Vec<f64> = cycles.iter().map(|c| cycle_mean(phi, c)).collect();
    (
        means.iter().cloned().fold(f64::INFINITY, f64::min),
        means.iter().cloned().fold(f64::NEG_INFINITY, f64::max),
    )
}

/// Direct membership test for the neutralized ball on a finite model:
/// `x` and `y` are symbol assignments on window coordinates
/// `minidx..minidx+len`, considered to agree everywhere outside. Checks
/// `d_theta(shift^i x, shift^i y) < e^(-n r)` for `0 <= i < n` by scanning
/// disagreement offsets.
pub fn in_neutralized_ball(
    x: &[u8],
    y: &[u8],
    minidx: i64,
    n: usize,
    r: f64,
    theta: f64,
) -> bool {
    let radius = (-(n as f64) * r).exp();
    for i in 0..n as i64 {
        // Distinguished time of shift^i x vs shift^i y.
        let mut nxy = i64::MAX;
        for (off, (&a, &b)) in x.iter().zip(y).enumerate() {
            if a != b {
                let j = (minidx + off as i64) - i;
                nxy = nxy.min(j.abs());
            }
        }
        let dist = if nxy == i64::MAX {
            0.0
        } else {
            theta.powi(nxy as i32)
        };
        if dist >= radius {
            return false;
        }
    }
    true
}

/// Splitmix-style deterministic pseudo-random stream for test inputs.
pub struct TestRng(u64);

impl TestRng {
    pub fn new(seed: u64) -> Self {
        TestRng(seed)
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    /// Uniform draw in [0, 1).
    pub fn unit(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }

    /// Uniform draw in [lo, hi).
    pub fn range(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.unit()
    }
}
