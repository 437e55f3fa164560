//! Topological pressure and equilibrium measures for locally constant
//! potentials on primitive subshifts of finite type.
//!
//! For a potential depending on one or two coordinates, the pressure is
//! the log of the spectral radius of the weighted transfer matrix
//! `L[i][j] = A[i][j] exp(phi(i, j))`, and the equilibrium measure is the
//! Markov measure obtained by stochasticizing `L` with its Perron
//! eigenvectors. Both are computed by simultaneous left/right power
//! iteration; primitivity guarantees a simple dominant eigenvalue.

use crate::sft::{is_primitive_pattern, Sft};
use thiserror::Error;

/// Default relative residual for the dominant-eigenpair iteration.
pub const DEFAULT_PRESSURE_TOL: f64 = 1e-13;
/// Default iteration cap for the power method.
pub const DEFAULT_MAX_ITERS: usize = 1_000_000;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ThermoError {
    #[error("operation requires a primitive subshift")]
    NotPrimitive,
    #[error("power iteration did not reach tolerance {tol} within {iterations} iterations")]
    NoConvergence { iterations: usize, tol: f64 },
    #[error("matrix iterate lost positivity; input is degenerate")]
    PositivityViolated,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("transfer matrix entry ({row}, {col}) is negative")]
    NegativeEntry { row: usize, col: usize },
    #[error("row {row} of the transition matrix sums to {sum}, not 1")]
    RowSumInvalid { row: usize, sum: f64 },
    #[error("stationary vector fails pi P = pi (residual {residual})")]
    StationarityViolated { residual: f64 },
}

/// A real-valued potential depending on the first one or two coordinates
/// of a sequence. Depth-2 values are only meaningful on allowed edges.
#[derive(Debug, Clone, PartialEq)]
pub enum LocallyConstantPotential {
    /// Value depends on the current symbol.
    Depth1(Vec<f64>),
    /// Value depends on the current symbol and its successor.
    Depth2(Vec<Vec<f64>>),
}

impl LocallyConstantPotential {
    pub fn constant(k: usize, value: f64) -> Self {
        LocallyConstantPotential::Depth1(vec![value; k])
    }

    pub fn k(&self) -> usize {
        match self {
            LocallyConstantPotential::Depth1(v) => v.len(),
            LocallyConstantPotential::Depth2(m) => m.len(),
        }
    }

    pub fn depth(&self) -> u8 {
        match self {
            LocallyConstantPotential::Depth1(_) => 1,
            LocallyConstantPotential::Depth2(_) => 2,
        }
    }

    /// Value on the edge `from -> to`; depth-1 potentials read the source
    /// symbol only.
    pub fn edge_value(&self, from: usize, to: usize) -> f64 {
        match self {
            LocallyConstantPotential::Depth1(v) => v[from],
            LocallyConstantPotential::Depth2(m) => m[from][to],
        }
    }

    /// Rewrites the potential as a depth-2 edge function.
    pub fn to_depth2(&self) -> Self {
        let k = self.k();
        LocallyConstantPotential::Depth2(
            (0..k)
                .map(|i| (0..k).map(|j| self.edge_value(i, j)).collect())
                .collect(),
        )
    }

    /// Pointwise linear combination `sum coeff * potential`. The result is
    /// depth 1 when every term is, otherwise everything is recoded onto
    /// edges.
    pub fn linear_combination(terms: &[(f64, &LocallyConstantPotential)]) -> Self {
        assert!(!terms.is_empty(), "empty linear combination");
        let k = terms[0].1.k();
        assert!(
            terms.iter().all(|(_, p)| p.k() == k),
            "alphabet sizes differ"
        );
        if terms
            .iter()
            .all(|(_, p)| matches!(p, LocallyConstantPotential::Depth1(_)))
        {
            let mut out = vec![0.0; k];
            for (c, p) in terms {
                if let LocallyConstantPotential::Depth1(v) = p {
                    for (o, x) in out.iter_mut().zip(v) {
                        *o += c * x;
                    }
                }
            }
            LocallyConstantPotential::Depth1(out)
        } else {
            let mut out = vec![vec![0.0; k]; k];
            for (c, p) in terms {
                for (i, row) in out.iter_mut().enumerate() {
                    for (j, o) in row.iter_mut().enumerate() {
                        *o += c * p.edge_value(i, j);
                    }
                }
            }
            LocallyConstantPotential::Depth2(out)
        }
    }
}

/// Nonnegative square matrix with a primitive support pattern; the Ruelle
/// transfer matrix of a locally constant potential is the main instance.
#[derive(Debug, Clone, PartialEq)]
pub struct TransferMatrix {
    k: usize,
    rows: Vec<Vec<f64>>,
}

impl TransferMatrix {
    /// Validates nonnegativity and primitivity of the support pattern.
    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self, ThermoError> {
        let k = rows.len();
        for (i, row) in rows.iter().enumerate() {
            if row.len() != k {
                return Err(ThermoError::DimensionMismatch {
                    expected: k,
                    got: row.len(),
                });
            }
            for (j, &v) in row.iter().enumerate() {
                if v < 0.0 {
                    return Err(ThermoError::NegativeEntry { row: i, col: j });
                }
            }
        }
        if !is_primitive_pattern(k, |i, j| rows[i][j] > 0.0) {
            return Err(ThermoError::NotPrimitive);
        }
        Ok(TransferMatrix { k, rows })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn entry(&self, i: usize, j: usize) -> f64 {
        self.rows[i][j]
    }

    fn mul_vec(&self, v: &[f64]) -> Vec<f64> {
        (0..self.k)
            .map(|i| (0..self.k).map(|j| self.rows[i][j] * v[j]).sum())
            .collect()
    }

    fn tr_mul_vec(&self, u: &[f64]) -> Vec<f64> {
        (0..self.k)
            .map(|j| (0..self.k).map(|i| self.rows[i][j] * u[i]).sum())
            .collect()
    }
}

/// Weighted transfer matrix `L[i][j] = A[i][j] exp(phi(i, j))` of a
/// locally constant potential on a primitive subshift.
pub fn transfer_matrix(
    sft: &Sft,
    phi: &LocallyConstantPotential,
) -> Result<TransferMatrix, ThermoError> {
    if !sft.is_primitive() {
        return Err(ThermoError::NotPrimitive);
    }
    let k = sft.k();
    if phi.k() != k {
        return Err(ThermoError::DimensionMismatch {
            expected: k,
            got: phi.k(),
        });
    }
    let rows = (0..k)
        .map(|i| {
            (0..k)
                .map(|j| {
                    if sft.is_allowed(i, j) {
                        phi.edge_value(i, j).exp()
                    } else {
                        0.0
                    }
                })
                .collect()
        })
        .collect();
    TransferMatrix::from_rows(rows)
}

/// Dominant eigenpair data of a transfer matrix. `pressure` is the log of
/// the spectral radius; the Perron vectors are normalized so the right
/// vector sums to 1 and `left . right = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct PressureResult {
    pub pressure: f64,
    pub right_vec: Vec<f64>,
    pub left_vec: Vec<f64>,
    pub iterations: usize,
    pub residual: f64,
}

/// Topological pressure by simultaneous left/right power iteration with
/// l1 normalization; converges when both eigen-residuals fall below `tol`
/// relative to the spectral radius.
pub fn pressure(l: &TransferMatrix, tol: f64) -> Result<PressureResult, ThermoError> {
    pressure_with_limit(l, tol, DEFAULT_MAX_ITERS)
}

pub fn pressure_with_limit(
    l: &TransferMatrix,
    tol: f64,
    max_iters: usize,
) -> Result<PressureResult, ThermoError> {
    let k = l.k;
    let mut v = vec![1.0 / k as f64; k];
    let mut u = v.clone();
    for iter in 1..=max_iters {
        let lv = l.mul_vec(&v);
        let lu = l.tr_mul_vec(&u);
        let uv: f64 = u.iter().zip(&v).map(|(a, b)| a * b).sum();
        let ulv: f64 = u.iter().zip(&lv).map(|(a, b)| a * b).sum();
        if uv.is_nan() || uv <= 0.0 || ulv.is_nan() || ulv <= 0.0 {
            return Err(ThermoError::PositivityViolated);
        }
        let rho = ulv / uv;
        let scale_v = v.iter().cloned().fold(0.0, f64::max) * rho;
        let scale_u = u.iter().cloned().fold(0.0, f64::max) * rho;
        let resid_v = lv
            .iter()
            .zip(&v)
            .map(|(a, b)| (a - rho * b).abs())
            .fold(0.0, f64::max)
            / scale_v;
        let resid_u = lu
            .iter()
            .zip(&u)
            .map(|(a, b)| (a - rho * b).abs())
            .fold(0.0, f64::max)
            / scale_u;
        let residual = resid_v.max(resid_u);
        if residual <= tol {
            let sum_v: f64 = v.iter().sum();
            let right: Vec<f64> = v.iter().map(|x| x / sum_v).collect();
            let dot: f64 = u.iter().zip(&right).map(|(a, b)| a * b).sum();
            let left: Vec<f64> = u.iter().map(|x| x / dot).collect();
            return Ok(PressureResult {
                pressure: rho.ln(),
                right_vec: right,
                left_vec: left,
                iterations: iter,
                residual,
            });
        }
        let sv: f64 = lv.iter().sum();
        let su: f64 = lu.iter().sum();
        if sv.is_nan() || sv <= 0.0 || su.is_nan() || su <= 0.0 {
            return Err(ThermoError::PositivityViolated);
        }
        v = lv.into_iter().map(|x| x / sv).collect();
        u = lu.into_iter().map(|x| x / su).collect();
    }
    Err(ThermoError::NoConvergence {
        iterations: max_iters,
        tol,
    })
}

/// Stationary Markov chain: a row-stochastic transition matrix together
/// with its stationary probability vector.
#[derive(Debug, Clone, PartialEq)]
pub struct MarkovMeasure {
    p: Vec<Vec<f64>>,
    pi: Vec<f64>,
}

impl MarkovMeasure {
    /// Validates stochasticity (row sums within 1e-12), nonnegativity and
    /// stationarity (`pi P = pi` within 1e-10), then renormalizes rows and
    /// `pi` exactly.
    pub fn new(p: Vec<Vec<f64>>, pi: Vec<f64>) -> Result<Self, ThermoError> {
        let k = p.len();
        if pi.len() != k {
            return Err(ThermoError::DimensionMismatch {
                expected: k,
                got: pi.len(),
            });
        }
        let mut p = p;
        for (i, row) in p.iter_mut().enumerate() {
            if row.len() != k {
                return Err(ThermoError::DimensionMismatch {
                    expected: k,
                    got: row.len(),
                });
            }
            for (j, &v) in row.iter().enumerate() {
                if v < 0.0 {
                    return Err(ThermoError::NegativeEntry { row: i, col: j });
                }
            }
            let sum: f64 = row.iter().sum();
            if (sum - 1.0).abs() > 1e-12 {
                return Err(ThermoError::RowSumInvalid { row: i, sum });
            }
            for v in row.iter_mut() {
                *v /= sum;
            }
        }
        let mut pi = pi;
        for (i, &v) in pi.iter().enumerate() {
            if v < 0.0 {
                return Err(ThermoError::NegativeEntry { row: i, col: i });
            }
        }
        let total: f64 = pi.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(ThermoError::RowSumInvalid {
                row: usize::MAX,
                sum: total,
            });
        }
        for v in pi.iter_mut() {
            *v /= total;
        }
        let residual = (0..k)
            .map(|j| {
                let x: f64 = (0..k).map(|i| pi[i] * p[i][j]).sum();
                (x - pi[j]).abs()
            })
            .fold(0.0, f64::max);
        if residual > 1e-10 {
            return Err(ThermoError::StationarityViolated { residual });
        }
        Ok(MarkovMeasure { p, pi })
    }

    /// Builds the stationary measure of a row-stochastic matrix, computing
    /// the stationary vector by damped power iteration.
    pub fn from_transition_matrix(p: Vec<Vec<f64>>) -> Result<Self, ThermoError> {
        let k = p.len();
        let mut pi = vec![1.0 / k as f64; k];
        for _ in 0..DEFAULT_MAX_ITERS {
            let mut next: Vec<f64> = (0..k)
                .map(|j| (0..k).map(|i| pi[i] * p[i][j]).sum())
                .collect();
            // Damping handles periodic chains.
            for (n, old) in next.iter_mut().zip(&pi) {
                *n = 0.5 * *n + 0.5 * old;
            }
            let s: f64 = next.iter().sum();
            for n in next.iter_mut() {
                *n /= s;
            }
            let diff = next
                .iter()
                .zip(&pi)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max);
            pi = next;
            if diff < 1e-15 {
                break;
            }
        }
        MarkovMeasure::new(p, pi)
    }

    /// Product measure with i.i.d. symbol distribution `probs`.
    pub fn bernoulli(probs: Vec<f64>) -> Result<Self, ThermoError> {
        let rows = vec![probs.clone(); probs.len()];
        MarkovMeasure::new(rows, probs)
    }

    pub fn k(&self) -> usize {
        self.pi.len()
    }

    pub fn transition(&self, from: usize, to: usize) -> f64 {
        self.p[from][to]
    }

    pub fn row(&self, from: usize) -> &[f64] {
        &self.p[from]
    }

    pub fn stationary(&self) -> &[f64] {
        &self.pi
    }

    /// Whether every positive transition is an allowed edge of `sft`.
    pub fn supported_on(&self, sft: &Sft) -> bool {
        self.k() == sft.k()
            && (0..self.k()).all(|i| {
                (0..self.k()).all(|j| self.p[i][j] == 0.0 || sft.is_allowed(i, j))
            })
    }
}

/// Equilibrium Markov measure of a transfer matrix: the stochasticization
/// `P[i][j] = L[i][j] v_j / (rho v_i)` with stationary vector
/// `pi_i = u_i v_i / (u . v)` built from the Perron eigenpair.
pub fn gibbs_markov(
    l: &TransferMatrix,
    eig: &PressureResult,
) -> Result<MarkovMeasure, ThermoError> {
    let k = l.k;
    let rho = eig.pressure.exp();
    let v = &eig.right_vec;
    let u = &eig.left_vec;
    let mut p = vec![vec![0.0; k]; k];
    for i in 0..k {
        for j in 0..k {
            p[i][j] = l.rows[i][j] * v[j] / (rho * v[i]);
        }
        let sum: f64 = p[i].iter().sum();
        for x in p[i].iter_mut() {
            *x /= sum;
        }
    }
    let mut pi: Vec<f64> = (0..k).map(|i| u[i] * v[i]).collect();
    let total: f64 = pi.iter().sum();
    for x in pi.iter_mut() {
        *x /= total;
    }
    MarkovMeasure::new(p, pi)
}

/// Entropy of a stationary Markov chain,
/// `-sum_i pi_i sum_j P[i][j] log P[i][j]`, with `0 log 0 = 0`.
pub fn markov_entropy(m: &MarkovMeasure) -> f64 {
    let k = m.k();
    let mut h = 0.0;
    for i in 0..k {
        for j in 0..k {
            let p = m.p[i][j];
            if p > 0.0 {
                h -= m.pi[i] * p * p.ln();
            }
        }
    }
    h
}

/// Integral of a locally constant potential against a stationary Markov
/// measure: `sum pi_i phi(i)` at depth 1, `sum pi_i P[i][j] phi(i, j)` at
/// depth 2.
pub fn integrate(phi: &LocallyConstantPotential, m: &MarkovMeasure) -> f64 {
    let k = m.k();
    assert_eq!(phi.k(), k, "potential and measure dimensions differ");
    match phi {
        LocallyConstantPotential::Depth1(v) => (0..k).map(|i| m.pi[i] * v[i]).sum(),
        LocallyConstantPotential::Depth2(mat) => (0..k)
            .map(|i| {
                (0..k)
                    .map(|j| {
                        let p = m.p[i][j];
                        if p > 0.0 {
                            m.pi[i] * p * mat[i][j]
                        } else {
                            0.0
                        }
                    })
                    .sum::<f64>()
            })
            .sum(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sft::Sft;

    const GOLDEN: f64 = 1.618033988749894848204586834365638118;

    fn pressure_of(rows: Vec<Vec<f64>>) -> PressureResult {
        pressure(&TransferMatrix::from_rows(rows).unwrap(), DEFAULT_PRESSURE_TOL).unwrap()
    }

    #[test]
    fn transfer_matrix_examples() {
        let full = Sft::full_shift(2);
        let zero = LocallyConstantPotential::constant(2, 0.0);
        let l = transfer_matrix(&full, &zero).unwrap();
        assert_eq!(
            (l.entry(0, 0), l.entry(0, 1), l.entry(1, 0), l.entry(1, 1)),
            (1.0, 1.0, 1.0, 1.0)
        );

        let gm = Sft::golden_mean();
        let l = transfer_matrix(&gm, &zero).unwrap();
        assert_eq!(l.entry(1, 1), 0.0);
        assert_eq!(l.entry(1, 0), 1.0);

        let phi = LocallyConstantPotential::Depth1(vec![2.0f64.ln(), 3.0f64.ln()]);
        let l = transfer_matrix(&full, &phi).unwrap();
        assert!((l.entry(0, 0) - 2.0).abs() < 1e-14);
        assert!((l.entry(1, 1) - 3.0).abs() < 1e-14);
    }

    #[test]
    fn transfer_matrix_requires_primitivity() {
        let split = Sft::new(vec![vec![1, 0], vec![0, 1]]).unwrap();
        let zero = LocallyConstantPotential::constant(2, 0.0);
        assert_eq!(
            transfer_matrix(&split, &zero),
            Err(ThermoError::NotPrimitive)
        );
    }

    #[test]
    fn pressure_of_simple_matrices() {
        let full = pressure_of(vec![vec![1.0, 1.0], vec![1.0, 1.0]]);
        assert!((full.pressure - 2.0f64.ln()).abs() < 1e-13);
        assert!(full.residual <= DEFAULT_PRESSURE_TOL);

        // Characteristic polynomial x^2 - x - 1: spectral radius is golden.
        let gm = pressure_of(vec![vec![1.0, 1.0], vec![1.0, 0.0]]);
        assert!((gm.pressure - GOLDEN.ln()).abs() < 1e-12);

        // Rank-1 matrix: spectral radius 2 + 3.
        let rank1 = pressure_of(vec![vec![2.0, 2.0], vec![3.0, 3.0]]);
        assert!((rank1.pressure - 5.0f64.ln()).abs() < 1e-13);
    }

    #[test]
    fn pressure_reports_non_convergence() {
        let l = TransferMatrix::from_rows(vec![vec![1.0, 1.0], vec![1.0, 0.0]]).unwrap();
        assert_eq!(
            pressure_with_limit(&l, 1e-13, 2),
            Err(ThermoError::NoConvergence {
                iterations: 2,
                tol: 1e-13
            })
        );
    }

    #[test]
    fn perron_vectors_are_positive_and_normalized() {
        let res = pressure_of(vec![vec![1.0, 1.0], vec![1.0, 0.0]]);
        assert!(res.right_vec.iter().all(|&x| x > 0.0));
        assert!(res.left_vec.iter().all(|&x| x > 0.0));
        let sum: f64 = res.right_vec.iter().sum();
        assert!((sum - 1.0).abs() < 1e-14);
        let dot: f64 = res
            .left_vec
            .iter()
            .zip(&res.right_vec)
            .map(|(a, b)| a * b)
            .sum();
        assert!((dot - 1.0).abs() < 1e-14);
    }

    #[test]
    fn gibbs_markov_of_full_shift_is_uniform() {
        let l = TransferMatrix::from_rows(vec![vec![1.0, 1.0], vec![1.0, 1.0]]).unwrap();
        let res = pressure(&l, DEFAULT_PRESSURE_TOL).unwrap();
        let m = gibbs_markov(&l, &res).unwrap();
        for i in 0..2 {
            assert!((m.stationary()[i] - 0.5).abs() < 1e-14);
            for j in 0..2 {
                assert!((m.transition(i, j) - 0.5).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn gibbs_markov_of_golden_mean_is_parry() {
        let l = TransferMatrix::from_rows(vec![vec![1.0, 1.0], vec![1.0, 0.0]]).unwrap();
        let res = pressure(&l, DEFAULT_PRESSURE_TOL).unwrap();
        let m = gibbs_markov(&l, &res).unwrap();
        // Closed-form Perron vectors (golden, 1): P00 = 1/golden,
        // P01 = 1/golden^2, P10 = 1.
        assert!((m.transition(0, 0) - 1.0 / GOLDEN).abs() < 1e-12);
        assert!((m.transition(0, 1) - 1.0 / (GOLDEN * GOLDEN)).abs() < 1e-12);
        assert!((m.transition(1, 0) - 1.0).abs() < 1e-12);
        assert_eq!(m.transition(1, 1), 0.0);
        let denom = GOLDEN * GOLDEN + 1.0;
        assert!((m.stationary()[0] - GOLDEN * GOLDEN / denom).abs() < 1e-12);
    }

    #[test]
    fn gibbs_markov_of_rank_one_matrix() {
        let l = TransferMatrix::from_rows(vec![vec![2.0, 2.0], vec![3.0, 3.0]]).unwrap();
        let res = pressure(&l, DEFAULT_PRESSURE_TOL).unwrap();
        let m = gibbs_markov(&l, &res).unwrap();
        for i in 0..2 {
            assert!((m.transition(i, 0) - 0.4).abs() < 1e-13);
            assert!((m.transition(i, 1) - 0.6).abs() < 1e-13);
        }
        assert!((m.stationary()[0] - 0.4).abs() < 1e-13);
        assert!((m.stationary()[1] - 0.6).abs() < 1e-13);
    }

    #[test]
    fn entropy_examples() {
        let uniform = MarkovMeasure::bernoulli(vec![0.5, 0.5]).unwrap();
        assert!((markov_entropy(&uniform) - 2.0f64.ln()).abs() < 1e-15);

        // 0 log 0 = 0
        let point = MarkovMeasure::bernoulli(vec![1.0, 0.0]).unwrap();
        assert_eq!(markov_entropy(&point), 0.0);

        // Parry entropy equals topological entropy of the shift.
        let l = TransferMatrix::from_rows(vec![vec![1.0, 1.0], vec![1.0, 0.0]]).unwrap();
        let res = pressure(&l, DEFAULT_PRESSURE_TOL).unwrap();
        let parry = gibbs_markov(&l, &res).unwrap();
        assert!((markov_entropy(&parry) - GOLDEN.ln()).abs() < 1e-12);
        // Cross-check against the word-count growth rate.
        let gm = Sft::golden_mean();
        let growth = gm.log_count_words(4000) / 4000.0;
        assert!((markov_entropy(&parry) - growth).abs() < 1e-3);
    }

    #[test]
    fn integrate_examples() {
        let uniform = MarkovMeasure::bernoulli(vec![0.25, 0.75]).unwrap();
        let c = LocallyConstantPotential::constant(2, 1.7);
        assert!((integrate(&c, &uniform) - 1.7).abs() < 1e-15);

        let phi = LocallyConstantPotential::Depth1(vec![3.0, -1.0]);
        assert!((integrate(&phi, &uniform) - (0.25 * 3.0 - 0.75)).abs() < 1e-15);

        // Indicator integrates to the stationary mass.
        let parry = MarkovMeasure::new(
            vec![vec![0.5, 0.5], vec![1.0, 0.0]],
            vec![2.0 / 3.0, 1.0 / 3.0],
        )
        .unwrap();
        let indicator = LocallyConstantPotential::Depth1(vec![1.0, 0.0]);
        assert!((integrate(&indicator, &parry) - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn markov_measure_validation() {
        assert!(matches!(
            MarkovMeasure::new(vec![vec![0.6, 0.6], vec![0.5, 0.5]], vec![0.5, 0.5]),
            Err(ThermoError::RowSumInvalid { row: 0, .. })
        ));
        assert!(matches!(
            MarkovMeasure::new(
                vec![vec![0.5, 0.5], vec![0.5, 0.5]],
                vec![0.9, 0.1]
            ),
            Err(ThermoError::StationarityViolated { .. })
        ));
        assert!(matches!(
            MarkovMeasure::new(vec![vec![1.5, -0.5], vec![0.5, 0.5]], vec![0.5, 0.5]),
            Err(ThermoError::NegativeEntry { .. })
        ));
    }

    #[test]
    fn stationary_vector_from_transitions() {
        let m =
            MarkovMeasure::from_transition_matrix(vec![vec![0.5, 0.5], vec![1.0, 0.0]]).unwrap();
        assert!((m.stationary()[0] - 2.0 / 3.0).abs() < 1e-12);
        // Periodic chain: damped iteration still finds (1/2, 1/2).
        let swap =
            MarkovMeasure::from_transition_matrix(vec![vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        assert!((swap.stationary()[0] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn support_check() {
        let gm = Sft::golden_mean();
        let parry = MarkovMeasure::new(
            vec![vec![0.5, 0.5], vec![1.0, 0.0]],
            vec![2.0 / 3.0, 1.0 / 3.0],
        )
        .unwrap();
        assert!(parry.supported_on(&gm));
        let uniform = MarkovMeasure::bernoulli(vec![0.5, 0.5]).unwrap();
        assert!(!uniform.supported_on(&gm));
        assert!(uniform.supported_on(&Sft::full_shift(2)));
    }
}
