//! Two-sided subshifts of finite type, the shift metric `d_theta`,
//! cylinder words, and exact/sampled orbit machinery for Markov measures.
//!
//! The central geometric fact used downstream: in the metric
//! `d_theta(x, y) = theta^(N(x, y))`, where `N` is the smallest `|n|` with
//! `x_n != y_n`, the ball of radius `e^(-n r)` around an orbit segment of
//! length `n` is exactly the two-sided cylinder fixing coordinates
//! `-m .. n+m-1` with `m = floor(-r n / log theta)`.

use crate::thermo::MarkovMeasure;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SftError {
    #[error("adjacency matrix is empty")]
    EmptyAlphabet,
    #[error("adjacency row {row} has {len} entries, expected {expected}")]
    NonSquare {
        row: usize,
        len: usize,
        expected: usize,
    },
    #[error("adjacency entry ({row}, {col}) is {value}; entries must be 0 or 1")]
    InvalidEntry { row: usize, col: usize, value: u8 },
    #[error("symbol {symbol} has no {} edge", if *.outgoing { "outgoing" } else { "incoming" })]
    EmptyRowOrColumn { symbol: usize, outgoing: bool },
    #[error("word count for length {n} overflows exact integer arithmetic")]
    CountOverflow { n: usize },
    #[error("shift metric requires theta in (0, 1), got {theta}")]
    InvalidTheta { theta: f64 },
}

/// A subshift of finite type: bi-infinite symbol sequences over `0..k`
/// whose consecutive pairs are allowed by a 0/1 adjacency matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Sft {
    k: usize,
    adjacency: Vec<Vec<u8>>,
    primitive: bool,
}

impl Sft {
    /// Validates the adjacency matrix: square, entries in {0, 1}, every
    /// symbol with at least one successor and one predecessor. Primitivity
    /// (some power of the adjacency entrywise positive) is computed once
    /// and stored.
    pub fn new(adjacency: Vec<Vec<u8>>) -> Result<Self, SftError> {
        let k = adjacency.len();
        if k == 0 {
            return Err(SftError::EmptyAlphabet);
        }
        for (row, r) in adjacency.iter().enumerate() {
            if r.len() != k {
                return Err(SftError::NonSquare {
                    row,
                    len: r.len(),
                    expected: k,
                });
            }
            for (col, &v) in r.iter().enumerate() {
                if v > 1 {
                    return Err(SftError::InvalidEntry { row, col, value: v });
                }
            }
        }
        for (i, row) in adjacency.iter().enumerate() {
            if row.iter().all(|&v| v == 0) {
                return Err(SftError::EmptyRowOrColumn {
                    symbol: i,
                    outgoing: true,
                });
            }
            if adjacency.iter().all(|r| r[i] == 0) {
                return Err(SftError::EmptyRowOrColumn {
                    symbol: i,
                    outgoing: false,
                });
            }
        }
        let primitive = is_primitive_pattern(k, |i, j| adjacency[i][j] == 1);
        Ok(Sft {
            k,
            adjacency,
            primitive,
        })
    }

    /// The full shift on `k` symbols (all transitions allowed).
    pub fn full_shift(k: usize) -> Self {
        Sft::new(vec![vec![1; k]; k]).expect("full shift is a valid SFT")
    }

    /// The golden-mean shift: binary sequences with no adjacent 1s.
    pub fn golden_mean() -> Self {
        Sft::new(vec![vec![1, 1], vec![1, 0]]).expect("golden-mean shift is a valid SFT")
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn adjacency(&self) -> &[Vec<u8>] {
        &self.adjacency
    }

    pub fn is_allowed(&self, from: usize, to: usize) -> bool {
        self.adjacency[from][to] == 1
    }

    pub fn is_primitive(&self) -> bool {
        self.primitive
    }

    /// Whether consecutive symbols of `symbols` all respect the adjacency.
    pub fn is_admissible(&self, symbols: &[u8]) -> bool {
        symbols.iter().all(|&s| (s as usize) < self.k)
            && symbols
                .windows(2)
                .all(|w| self.is_allowed(w[0] as usize, w[1] as usize))
    }

    /// Number of admissible words of length `n`, i.e. the sum of all entries
    /// of the (n-1)-th power of the adjacency matrix, in exact integer
    /// arithmetic. Fails with `CountOverflow` once the count leaves `u128`.
    pub fn count_words(&self, n: usize) -> Result<u128, SftError> {
        assert!(n >= 1, "word length must be at least 1");
        let mut v: Vec<u128> = vec![1; self.k];
        for _ in 1..n {
            let mut next = vec![0u128; self.k];
            for (target, row) in next.iter_mut().zip(&self.adjacency) {
                for (&a, &count) in row.iter().zip(&v) {
                    if a == 1 {
                        *target = target
                            .checked_add(count)
                            .ok_or(SftError::CountOverflow { n })?;
                    }
                }
            }
            v = next;
        }
        let mut total: u128 = 0;
        for x in v {
            total = total
                .checked_add(x)
                .ok_or(SftError::CountOverflow { n })?;
        }
        Ok(total)
    }

    /// Natural log of the number of admissible words of length `n`,
    /// computed in normalized (log-space) arithmetic so that arbitrarily
    /// long words are supported.
    pub fn log_count_words(&self, n: usize) -> f64 {
        assert!(n >= 1, "word length must be at least 1");
        let mut v: Vec<f64> = vec![1.0 / self.k as f64; self.k];
        let mut log_scale = (self.k as f64).ln();
        for _ in 1..n {
            let mut next = vec![0.0; self.k];
            for (target, row) in next.iter_mut().zip(&self.adjacency) {
                for (&a, &mass) in row.iter().zip(&v) {
                    if a == 1 {
                        *target += mass;
                    }
                }
            }
            let s: f64 = next.iter().sum();
            for x in &mut next {
                *x /= s;
            }
            log_scale += s.ln();
            v = next;
        }
        log_scale
    }

    /// Visits every admissible word of length `len` in lexicographic order.
    pub fn for_each_word<F: FnMut(&[u8])>(&self, len: usize, mut visit: F) {
        assert!(len >= 1);
        let mut word = vec![0u8; len];
        self.visit_words(&mut word, 0, &mut visit);
    }

    fn visit_words<F: FnMut(&[u8])>(&self, word: &mut Vec<u8>, depth: usize, visit: &mut F) {
        if depth == word.len() {
            visit(word);
            return;
        }
        for s in 0..self.k as u8 {
            if depth > 0 && !self.is_allowed(word[depth - 1] as usize, s as usize) {
                continue;
            }
            word[depth] = s;
            self.visit_words(word, depth + 1, visit);
        }
    }

    /// All admissible words of length `len`; intended for small lengths.
    pub fn words(&self, len: usize) -> Vec<Vec<u8>> {
        let mut out = Vec::new();
        self.for_each_word(len, |w| out.push(w.to_vec()));
        out
    }
}

/// Primitivity test on a boolean pattern: some power of the matrix is
/// entrywise positive. The Wielandt bound (k-1)^2 + 1 caps the exponent.
pub(crate) fn is_primitive_pattern<F: Fn(usize, usize) -> bool>(k: usize, edge: F) -> bool {
    let mut a = vec![vec![false; k]; k];
    for (i, row) in a.iter_mut().enumerate() {
        for (j, v) in row.iter_mut().enumerate() {
            *v = edge(i, j);
        }
    }
    let bound = (k - 1) * (k - 1) + 1;
    let mut power = a.clone();
    for _ in 0..bound {
        if power.iter().all(|row| row.iter().all(|&v| v)) {
            return true;
        }
        let mut next = vec![vec![false; k]; k];
        for i in 0..k {
            for j in 0..k {
                next[i][j] = (0..k).any(|l| power[i][l] && a[l][j]);
            }
        }
        power = next;
    }
    power.iter().all(|row| row.iter().all(|&v| v))
}

/// The metric `d_theta(x, y) = theta^(N(x, y))` on a two-sided shift,
/// where `N(x, y) = min { |n| : x_n != y_n }` and `d_theta(x, x) = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShiftMetric {
    theta: f64,
    log_theta: f64,
}

impl ShiftMetric {
    pub fn new(theta: f64) -> Result<Self, SftError> {
        if !(theta > 0.0 && theta < 1.0) {
            return Err(SftError::InvalidTheta { theta });
        }
        Ok(ShiftMetric {
            theta,
            log_theta: theta.ln(),
        })
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn log_theta(&self) -> f64 {
        self.log_theta
    }

    /// Window identifying the neutralized ball `B(x, n, e^(-n r))` with a
    /// cylinder: the ball equals the set of sequences agreeing with `x` on
    /// coordinates `-m .. n+m-1`, where `m = floor(-r n / log theta)`.
    /// At `r = 0` the window degenerates to the forward cylinder and the
    /// classical (non-neutralized) quantities are recovered.
    ///
    /// The quotient is snapped to the nearest integer when it is within
    /// 1e-9 relative distance of one, so that exactly-integer values (for
    /// instance theta = 1/e with r = 1) are not pushed down a whole step
    /// by a one-ulp rounding error.
    pub fn ball_window(&self, n: usize, r: f64) -> BallWindow {
        assert!(n >= 1, "orbit length must be at least 1");
        assert!(r >= 0.0, "neutralization rate must be nonnegative");
        let t = -(r * n as f64) / self.log_theta;
        let nearest = t.round();
        let m = if (t - nearest).abs() <= 1e-9 * nearest.abs().max(1.0) {
            nearest
        } else {
            t.floor()
        };
        BallWindow {
            n,
            m: m as usize,
        }
    }
}

/// Coordinate window of a neutralized Bowen ball: the orbit length `n`
/// plus the same two-sided padding `m` on both sides.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BallWindow {
    pub n: usize,
    pub m: usize,
}

impl BallWindow {
    pub fn total_len(&self) -> usize {
        self.n + 2 * self.m
    }

    /// First coordinate of the window, i.e. `-m`.
    pub fn start(&self) -> i64 {
        -(self.m as i64)
    }
}

/// A finite symbol block positioned in the integer coordinate line;
/// `base_index` is the coordinate of the first symbol.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Word {
    pub symbols: Vec<u8>,
    pub base_index: i64,
}

impl Word {
    pub fn new(symbols: Vec<u8>, base_index: i64) -> Self {
        Word {
            symbols,
            base_index,
        }
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }
}

/// Log of the measure of the cylinder fixed by `symbols` under a
/// stationary Markov measure: `log pi_(w0) + sum log P_(wi, wi+1)`.
/// Forbidden transitions give `-inf` (measure zero). Stationarity makes
/// the result independent of the word's base coordinate. Accumulation is
/// compensated so that very long windows lose no precision.
pub fn cylinder_log_measure_symbols(measure: &MarkovMeasure, symbols: &[u8]) -> f64 {
    if symbols.is_empty() {
        return 0.0;
    }
    let first = symbols[0] as usize;
    let pi0 = measure.stationary()[first];
    if pi0 <= 0.0 {
        return f64::NEG_INFINITY;
    }
    let mut sum = pi0.ln();
    let mut comp = 0.0;
    for w in symbols.windows(2) {
        let p = measure.transition(w[0] as usize, w[1] as usize);
        if p <= 0.0 {
            return f64::NEG_INFINITY;
        }
        // Kahan step.
        let y = p.ln() - comp;
        let t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    sum
}

/// Log-measure of a positioned word; see [`cylinder_log_measure_symbols`].
pub fn cylinder_log_measure(measure: &MarkovMeasure, word: &Word) -> f64 {
    cylinder_log_measure_symbols(measure, &word.symbols)
}

/// Measure of the cylinder fixed by `word`; zero for forbidden words.
pub fn cylinder_measure(measure: &MarkovMeasure, word: &Word) -> f64 {
    cylinder_log_measure(measure, word).exp()
}

fn draw_categorical<R: Rng>(rng: &mut R, probs: &[f64]) -> u8 {
    let u: f64 = rng.random();
    let mut acc = 0.0;
    let mut last_positive = 0u8;
    for (i, &p) in probs.iter().enumerate() {
        if p > 0.0 {
            last_positive = i as u8;
            acc += p;
            if u < acc {
                return i as u8;
            }
        }
    }
    last_positive
}

/// Samples `length` symbols with the initial symbol drawn from the
/// stationary vector and transitions from the chain. Deterministic for a
/// fixed seed.
pub fn sample_orbit(measure: &MarkovMeasure, length: usize, seed: u64) -> Vec<u8> {
    assert!(length >= 1, "orbit length must be at least 1");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(length);
    let mut current = draw_categorical(&mut rng, measure.stationary());
    out.push(current);
    for _ in 1..length {
        current = draw_categorical(&mut rng, measure.row(current as usize));
        out.push(current);
    }
    out
}

/// A sampled stationary orbit covering coordinates `-back .. forward-1`.
///
/// Negative coordinates are drawn by running the time-reversed chain
/// `P*[j][i] = pi_i P[i][j] / pi_j` backwards from the symbol at zero;
/// stationarity makes the joint law of any window exactly the cylinder
/// measure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwoSidedOrbit {
    backward: Vec<u8>,
    forward: Vec<u8>,
}

impl TwoSidedOrbit {
    pub fn from_parts(backward: Vec<u8>, forward: Vec<u8>) -> Self {
        assert!(!forward.is_empty(), "orbit must cover coordinate 0");
        TwoSidedOrbit { backward, forward }
    }

    /// Smallest covered coordinate.
    pub fn min_index(&self) -> i64 {
        -(self.backward.len() as i64)
    }

    /// One past the largest covered coordinate.
    pub fn end_index(&self) -> i64 {
        self.forward.len() as i64
    }

    pub fn symbol(&self, index: i64) -> Option<u8> {
        if index >= 0 {
            self.forward.get(index as usize).copied()
        } else {
            self.backward.get((-index - 1) as usize).copied()
        }
    }

    /// The symbols on coordinates `from .. from+len`, or `None` if the
    /// orbit does not cover them.
    pub fn window_symbols(&self, from: i64, len: usize) -> Option<Vec<u8>> {
        (0..len as i64)
            .map(|off| self.symbol(from + off))
            .collect()
    }
}

/// Samples a stationary two-sided orbit on coordinates `-back .. forward-1`.
pub fn sample_two_sided_orbit(
    measure: &MarkovMeasure,
    back: usize,
    forward: usize,
    seed: u64,
) -> TwoSidedOrbit {
    assert!(forward >= 1, "orbit must cover coordinate 0");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let k = measure.k();

    let mut fwd = Vec::with_capacity(forward);
    let mut current = draw_categorical(&mut rng, measure.stationary());
    fwd.push(current);
    for _ in 1..forward {
        current = draw_categorical(&mut rng, measure.row(current as usize));
        fwd.push(current);
    }

    let reversed: Vec<Vec<f64>> = (0..k)
        .map(|j| {
            let pj = measure.stationary()[j];
            (0..k)
                .map(|i| {
                    if pj > 0.0 {
                        measure.stationary()[i] * measure.transition(i, j) / pj
                    } else {
                        0.0
                    }
                })
                .collect()
        })
        .collect();

    let mut bwd = Vec::with_capacity(back);
    let mut left = fwd[0];
    for _ in 0..back {
        left = draw_categorical(&mut rng, &reversed[left as usize]);
        bwd.push(left);
    }
    TwoSidedOrbit {
        backward: bwd,
        forward: fwd,
    }
}
