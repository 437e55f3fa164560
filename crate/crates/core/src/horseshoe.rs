//! Two-dimensional linear horseshoe with contraction rates
//! `(eta1, eta2)`, `eta1 + eta2 < 1`.
//!
//! The map is conjugate to the full 2-shift, so every invariant quantity
//! is computed symbolically: the derivative is diagonal with expansion
//! `1/eta1` and contraction `eta2` on one branch and `1/eta2`, `eta1` on
//! the other, giving depth-1 potentials `phi_u = (-log eta1, -log eta2)`
//! and `phi_s = (log eta2, log eta1)`. On Bernoulli measures everything
//! is closed-form, and the ergodic maximizers of `h + r * dim` are
//! Bernoulli, so the maximizer search is one-dimensional.

use crate::sft::Sft;
use crate::surface::TwoPotentialSystem;
use crate::thermo::LocallyConstantPotential;
use thiserror::Error;

#[derive(Debug, Error, Clone, Copy, PartialEq)]
pub enum HorseshoeError {
    #[error("contraction rates must satisfy 0 < eta < 1 and eta1 + eta2 < 1, got ({eta1}, {eta2})")]
    InvalidContraction { eta1: f64, eta2: f64 },
}

/// Linear horseshoe geometry.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Horseshoe {
    eta1: f64,
    eta2: f64,
}

/// Closed-form data of the Bernoulli measure with weight `p` on the first
/// branch, evaluated at a neutralization rate `r`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BernoulliStats {
    pub p: f64,
    pub h: f64,
    pub lambda1: f64,
    pub lambda2: f64,
    pub dim: f64,
    pub hr: f64,
}

fn xlogx(p: f64) -> f64 {
    if p > 0.0 {
        p * p.ln()
    } else {
        0.0
    }
}

/// Binary entropy with the convention `0 log 0 = 0`.
fn entropy(p: f64) -> f64 {
    let h = -xlogx(p) - xlogx(1.0 - p);
    // Normalize the negative zero at the endpoints.
    if h == 0.0 {
        0.0
    } else {
        h
    }
}

const ENDPOINT_MARGIN: f64 = 1e-9;

impl Horseshoe {
    pub fn new(eta1: f64, eta2: f64) -> Result<Self, HorseshoeError> {
        if !(eta1 > 0.0 && eta1 < 1.0 && eta2 > 0.0 && eta2 < 1.0 && eta1 + eta2 < 1.0) {
            return Err(HorseshoeError::InvalidContraction { eta1, eta2 });
        }
        Ok(Horseshoe { eta1, eta2 })
    }

    pub fn eta1(&self) -> f64 {
        self.eta1
    }

    pub fn eta2(&self) -> f64 {
        self.eta2
    }

    fn logs(&self) -> (f64, f64) {
        (self.eta1.ln(), self.eta2.ln())
    }

    /// Symbolic model: the full 2-shift with the branch expansion and
    /// contraction log-rates as depth-1 potentials.
    pub fn induced_system(&self) -> TwoPotentialSystem {
        let (l1, l2) = self.logs();
        TwoPotentialSystem::new(
            Sft::full_shift(2),
            LocallyConstantPotential::Depth1(vec![-l1, -l2]),
            LocallyConstantPotential::Depth1(vec![l2, l1]),
        )
        .expect("a linear horseshoe induces a hyperbolic system")
    }

    /// Entropy, exponents, dimension, and neutralized entropy of the
    /// Bernoulli measure with weight `p`, all in closed form.
    pub fn bernoulli_stats(&self, p: f64, r: f64) -> BernoulliStats {
        assert!((0.0..=1.0).contains(&p), "weight must lie in [0, 1]");
        assert!(r >= 0.0, "neutralization rate must be nonnegative");
        let (l1, l2) = self.logs();
        let h = entropy(p);
        let lambda1 = -p * l1 - (1.0 - p) * l2;
        let lambda2 = p * l2 + (1.0 - p) * l1;
        let dim = h * (1.0 / lambda1 - 1.0 / lambda2);
        BernoulliStats {
            p,
            h,
            lambda1,
            lambda2,
            dim,
            hr: h + r * dim,
        }
    }

    /// Derivative in `p` of the dimension `h (1/lambda1 - 1/lambda2)`.
    fn dim_derivative(&self, p: f64) -> f64 {
        let (l1, l2) = self.logs();
        let a = p * l1 + (1.0 - p) * l2;
        let b = p * l2 + (1.0 - p) * l1;
        let lp = p.ln();
        let lq = (1.0 - p).ln();
        (-lq * l1 + lp * l2) / (a * a) + (-lq * l2 + lp * l1) / (b * b)
    }

    /// Derivative in `p` of the neutralized entropy of the Bernoulli
    /// family at rate `r`.
    pub fn hr_derivative(&self, p: f64, r: f64) -> f64 {
        ((1.0 - p).ln() - p.ln()) + r * self.dim_derivative(p)
    }

    /// First and second derivative of `p -> h + r dim` at `p = 1/2`. The
    /// first vanishes identically by symmetry; the second is the closed
    /// form `-4 + 16 r ((L1+L2)^2 - 2 log 2 (L1-L2)^2) / (L1+L2)^3` with
    /// `Li = log eta_i`.
    pub fn hr_derivatives_at_half(&self, r: f64) -> (f64, f64) {
        assert!(r >= 0.0, "neutralization rate must be nonnegative");
        let (l1, l2) = self.logs();
        let s = l1 + l2;
        let d = l1 - l2;
        let second = -4.0 + 16.0 * r * (s * s - 2.0 * 2.0f64.ln() * d * d) / (s * s * s);
        (0.0, second)
    }

    /// All local maxima of the Bernoulli neutralized entropy on (0, 1):
    /// coarse grid scan with plateau merging, then golden-section
    /// shrinking of each bracket, finished by bisection on the closed-form
    /// derivative so paired maxima mirror each other to full precision.
    /// Returned sorted by `p`.
    pub fn find_bernoulli_maximizers(&self, r: f64, grid_n: usize) -> Vec<BernoulliStats> {
        assert!(grid_n >= 100, "grid must have at least 100 points");
        let value = |p: f64| self.bernoulli_stats(p, r).hr;
        let slope = |p: f64| self.hr_derivative(p, r);
        let maxima = local_maxima_1d(&value, &slope, grid_n);
        maxima
            .into_iter()
            .map(|p| self.bernoulli_stats(p, r))
            .collect()
    }

    /// Argmax of the Bernoulli-measure dimension; mirrored maxima agree in
    /// value up to rounding, in which case the smaller weight is returned.
    pub fn mmhd_bernoulli(&self) -> f64 {
        let value = |p: f64| self.bernoulli_stats(p, 0.0).dim;
        let slope = |p: f64| self.dim_derivative(p);
        let maxima = local_maxima_1d(&value, &slope, 200_001);
        let best = maxima
            .iter()
            .map(|&p| value(p))
            .fold(f64::NEG_INFINITY, f64::max);
        maxima
            .into_iter()
            .filter(|&p| value(p) >= best - 1e-12)
            .fold(f64::INFINITY, f64::min)
    }

    /// Locates the rate at which the second derivative of the neutralized
    /// entropy at `p = 1/2` changes sign on `(0, r_max]`, by scan and
    /// bisection; `None` when no sign change occurs.
    pub fn critical_r_scan(&self, r_max: f64) -> Option<f64> {
        assert!(r_max > 0.0);
        let f = |r: f64| self.hr_derivatives_at_half(r).1;
        let steps = 256;
        let mut lo = 0.0;
        let mut flo = f(0.0);
        let mut bracket = None;
        for i in 1..=steps {
            let hi = r_max * i as f64 / steps as f64;
            let fhi = f(hi);
            if flo < 0.0 && fhi >= 0.0 {
                bracket = Some((lo, hi));
                break;
            }
            lo = hi;
            flo = fhi;
        }
        let (mut lo, mut hi) = bracket?;
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if f(mid) < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
            if hi - lo < 1e-12 * hi.max(1.0) {
                break;
            }
        }
        Some(0.5 * (lo + hi))
    }
}

/// Interior local maxima of a smooth function on (0, 1). Grid candidates
/// (strict maxima, with plateaus of width below 1e-14 merged into one
/// candidate) are refined by golden-section shrinking and finished with
/// bisection on the derivative when it brackets a sign change.
fn local_maxima_1d(
    value: &dyn Fn(f64) -> f64,
    slope: &dyn Fn(f64) -> f64,
    grid_n: usize,
) -> Vec<f64> {
    const PLATEAU_EPS: f64 = 1e-14;
    let lo = ENDPOINT_MARGIN;
    let hi = 1.0 - ENDPOINT_MARGIN;
    let at = |i: usize| lo + (hi - lo) * i as f64 / (grid_n - 1) as f64;
    let vals: Vec<f64> = (0..grid_n).map(|i| value(at(i))).collect();

    let mut brackets: Vec<(f64, f64)> = Vec::new();
    let mut i = 1;
    while i + 1 < grid_n {
        if vals[i] > vals[i - 1] + PLATEAU_EPS {
            // Ascent arrived at i; absorb any flat run.
            let mut j = i;
            while j + 1 < grid_n && (vals[j + 1] - vals[i]).abs() <= PLATEAU_EPS {
                j += 1;
            }
            if j + 1 < grid_n && vals[j + 1] < vals[i] - PLATEAU_EPS {
                brackets.push((at(i - 1), at(j + 1)));
            }
            i = j + 1;
        } else {
            i += 1;
        }
    }

    let mut maxima: Vec<f64> = brackets
        .into_iter()
        .map(|(mut a, mut b)| {
            // Golden-section shrink keeps the maximum bracketed.
            let inv_phi = 0.618_033_988_749_894_9_f64;
            let mut c = b - inv_phi * (b - a);
            let mut d = a + inv_phi * (b - a);
            let mut fc = value(c);
            let mut fd = value(d);
            while b - a > 1e-6 {
                if fc > fd {
                    b = d;
                    d = c;
                    fd = fc;
                    c = b - inv_phi * (b - a);
                    fc = value(c);
                } else {
                    a = c;
                    c = d;
                    fc = fd;
                    d = a + inv_phi * (b - a);
                    fd = value(d);
                }
            }
            // Derivative bisection pins the position beyond the resolving
            // power of value comparisons.
            let (mut a, mut b) = (a, b);
            if slope(a) > 0.0 && slope(b) < 0.0 {
                for _ in 0..200 {
                    let mid = 0.5 * (a + b);
                    let s = slope(mid);
                    if s > 0.0 {
                        a = mid;
                    } else {
                        b = mid;
                    }
                    if b - a < 1e-15 {
                        break;
                    }
                }
            }
            0.5 * (a + b)
        })
        .collect();

    maxima.sort_by(|a, b| a.partial_cmp(b).unwrap());
    maxima.dedup_by(|a, b| (*a - *b).abs() < 1e-8);
    maxima
}
