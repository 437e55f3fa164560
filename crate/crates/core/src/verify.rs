//! Empirical and exact verification of the symbolic neutralized-entropy
//! formulas.
//!
//! On a shift with metric `d_theta`, the neutralized ball of an orbit
//! segment is exactly a cylinder, so its measure under a Markov measure
//! is a finite product: local entropies are computed without estimation
//! error beyond the orbit draw itself. The module offers the sampled
//! local-entropy statistic, the spanning-count realization of the
//! neutralized topological entropy, covering counts against a measure,
//! and the variational gap between the two sides.

use crate::sft::{
    cylinder_log_measure_symbols, sample_two_sided_orbit, Sft, SftError, ShiftMetric,
    TwoSidedOrbit,
};
use crate::thermo::{markov_entropy, MarkovMeasure};
use rayon::prelude::*;
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum VerifyError {
    #[error("orbit covers {have_min}..{have_end} but the window needs {need_min}..{need_end}")]
    OrbitTooShort {
        need_min: i64,
        need_end: i64,
        have_min: i64,
        have_end: i64,
    },
    #[error("window of {len} coordinates exceeds the exact enumeration cap of {cap}")]
    WindowTooLarge { len: usize, cap: usize },
    #[error(transparent)]
    Sft(#[from] SftError),
}

/// Exact enumeration cap on the ball-window length.
pub const ENUMERATION_CAP: usize = 34;

/// Sampled statistics of the exact local entropy, together with the
/// predicted value `(1 - 2r / log theta) * h` of the chain.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalEntropyEstimate {
    pub r: f64,
    pub theta: f64,
    pub n: usize,
    pub samples: usize,
    pub mean: f64,
    pub stddev: f64,
    pub predicted: f64,
}

/// The exact local statistic `-(1/n) log mu(B(x, n, e^(-n r)))` at the
/// sampled point: the ball is the cylinder on the window coordinates, so
/// the log-measure is a finite sum.
pub fn exact_local_entropy(
    measure: &MarkovMeasure,
    metric: &ShiftMetric,
    r: f64,
    orbit: &TwoSidedOrbit,
    n: usize,
) -> Result<f64, VerifyError> {
    let window = metric.ball_window(n, r);
    let from = window.start();
    let len = window.total_len();
    let symbols = orbit
        .window_symbols(from, len)
        .ok_or(VerifyError::OrbitTooShort {
            need_min: from,
            need_end: from + len as i64,
            have_min: orbit.min_index(),
            have_end: orbit.end_index(),
        })?;
    Ok(-cylinder_log_measure_symbols(measure, &symbols) / n as f64)
}

/// Mean and standard deviation of the exact local entropy over
/// independently sampled stationary orbits (sample `i` uses `seed + i`),
/// plus the predicted value from the chain entropy.
pub fn estimate_neutralized_entropy(
    measure: &MarkovMeasure,
    metric: &ShiftMetric,
    r: f64,
    n: usize,
    samples: usize,
    seed: u64,
) -> Result<LocalEntropyEstimate, VerifyError> {
    assert!(samples >= 1, "at least one sample required");
    let window = metric.ball_window(n, r);
    let values = (0..samples)
        .into_par_iter()
        .map(|i| {
            let orbit = sample_two_sided_orbit(
                measure,
                window.m,
                window.n + window.m,
                seed.wrapping_add(i as u64),
            );
            exact_local_entropy(measure, metric, r, &orbit, n)
        })
        .collect::<Result<Vec<_>, _>>()?;
    // Identical samples have mean equal to the common value and zero
    // variance exactly; the accumulation formulas would otherwise pick up
    // rounding noise.
    let all_equal = values.iter().all(|v| *v == values[0]);
    let mean = if all_equal {
        values[0]
    } else {
        values.iter().sum::<f64>() / samples as f64
    };
    let var = if samples > 1 && !all_equal {
        values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (samples - 1) as f64
    } else {
        0.0
    };
    let predicted = (1.0 - 2.0 * r / metric.log_theta()) * markov_entropy(measure);
    Ok(LocalEntropyEstimate {
        r,
        theta: metric.theta(),
        n,
        samples,
        mean,
        stddev: var.sqrt(),
        predicted,
    })
}

/// Minimal cardinality of a family of neutralized balls covering the
/// whole shift. Balls are cylinders and cylinders of a fixed window tile
/// the space, so the count is exactly the number of admissible words of
/// the window length.
pub fn spanning_count(
    sft: &Sft,
    metric: &ShiftMetric,
    r: f64,
    n: usize,
) -> Result<u128, VerifyError> {
    let window = metric.ball_window(n, r);
    Ok(sft.count_words(window.total_len())?)
}

/// Growth-rate estimate `log S(n) / n` of the spanning count, computed in
/// log space so arbitrarily long windows are fine.
pub fn neutralized_top_entropy_estimate(
    sft: &Sft,
    metric: &ShiftMetric,
    r: f64,
    n: usize,
) -> f64 {
    let window = metric.ball_window(n, r);
    sft.log_count_words(window.total_len()) / n as f64
}

/// Minimal number of neutralized balls whose union has measure at least
/// `1 - delta`: cylinder masses are aggregated by type class (start
/// symbol and edge-count vector), sorted descending, and accumulated.
pub fn katok_count(
    measure: &MarkovMeasure,
    metric: &ShiftMetric,
    r: f64,
    n: usize,
    delta: f64,
) -> Result<u64, VerifyError> {
    assert!(delta > 0.0 && delta < 1.0, "delta must lie in (0, 1)");
    let window = metric.ball_window(n, r);
    let len = window.total_len();
    if len > ENUMERATION_CAP {
        return Err(VerifyError::WindowTooLarge {
            len,
            cap: ENUMERATION_CAP,
        });
    }
    let k = measure.k();

    // Paths of the support graph grouped by (start symbol, current
    // symbol, edge-count vector); all words of a class have the same
    // cylinder measure.
    type Counts = Vec<u16>;
    let mut states: BTreeMap<(u8, u8, Counts), u64> = BTreeMap::new();
    for s in 0..k {
        if measure.stationary()[s] > 0.0 {
            states.insert((s as u8, s as u8, vec![0; k * k]), 1);
        }
    }
    for _ in 1..len {
        let mut next: BTreeMap<(u8, u8, Counts), u64> = BTreeMap::new();
        for ((start, cur, counts), ways) in &states {
            for j in 0..k {
                if measure.transition(*cur as usize, j) > 0.0 {
                    let mut c = counts.clone();
                    c[*cur as usize * k + j] += 1;
                    *next.entry((*start, j as u8, c)).or_insert(0) += ways;
                }
            }
        }
        states = next;
    }

    // Merge over the final symbol; the measure only sees the start symbol
    // and the edge counts.
    let mut classes: BTreeMap<(u8, Counts), u64> = BTreeMap::new();
    for ((start, _, counts), ways) in states {
        *classes.entry((start, counts)).or_insert(0) += ways;
    }
    let mut masses: Vec<(f64, u64)> = classes
        .into_iter()
        .map(|((start, counts), ways)| {
            let mut logm = measure.stationary()[start as usize].ln();
            for i in 0..k {
                for j in 0..k {
                    let c = counts[i * k + j];
                    if c > 0 {
                        logm += c as f64 * measure.transition(i, j).ln();
                    }
                }
            }
            (logm, ways)
        })
        .collect();
    masses.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap());

    let target = 1.0 - delta;
    let mut acc = 0.0;
    let mut used: u64 = 0;
    for (logm, ways) in masses {
        if acc >= target - 1e-12 {
            break;
        }
        let m = logm.exp();
        let remaining = target - acc;
        let ratio = remaining / m;
        let need = if (ratio - ratio.round()).abs() < 1e-9 * ratio.max(1.0) {
            ratio.round() as u64
        } else {
            ratio.ceil() as u64
        }
        .max(1);
        if need <= ways {
            used += need;
            break;
        }
        used += ways;
        acc += ways as f64 * m;
    }
    Ok(used)
}

/// Comparison of the spanning-side estimate against the best sampled
/// measure-side estimate; the gap closes when the measure of maximal
/// entropy is among the candidates.
#[derive(Debug, Clone, PartialEq)]
pub struct VariationalGapReport {
    pub top_estimate: f64,
    pub best_measure_mean: f64,
    pub gap: f64,
    pub estimates: Vec<LocalEntropyEstimate>,
}

/// Measure `i` draws its orbits from `seed + 1_000_003 * i`.
pub fn variational_gap(
    sft: &Sft,
    metric: &ShiftMetric,
    r: f64,
    n: usize,
    measures: &[MarkovMeasure],
    samples: usize,
    seed: u64,
) -> Result<VariationalGapReport, VerifyError> {
    assert!(!measures.is_empty(), "at least one measure required");
    let top = neutralized_top_entropy_estimate(sft, metric, r, n);
    let estimates = measures
        .iter()
        .enumerate()
        .map(|(i, m)| {
            estimate_neutralized_entropy(
                m,
                metric,
                r,
                n,
                samples,
                seed.wrapping_add(1_000_003u64.wrapping_mul(i as u64)),
            )
        })
        .collect::<Result<Vec<_>, _>>()?;
    let best = estimates
        .iter()
        .map(|e| e.mean)
        .fold(f64::NEG_INFINITY, f64::max);
    Ok(VariationalGapReport {
        top_estimate: top,
        best_measure_mean: best,
        gap: top - best,
        estimates,
    })
}
