//! The two-parameter pressure surface of a hyperbolic two-potential
//! system and the fields it induces.
//!
//! For expansion/contraction potentials `phi_u > 0 > phi_s` (in cycle
//! mean), the surface is `Q(p, q) = P(-p phi_u + q phi_s)`. Each point
//! carries the equilibrium measure of that potential, its Lyapunov
//! exponents `lambda_u = int phi_u`, `lambda_s = int phi_s`, the entropy
//! recovered from `Q = h - p lambda_u + q lambda_s`, and the dimension
//! `h/lambda_u - h/lambda_s`. Exponent extremes over all invariant
//! measures are min/max cycle means of the potential, computed with
//! Karp's algorithm per strongly connected component; a potential is
//! cohomologous to a constant exactly when that range degenerates.

use crate::sft::Sft;
use crate::thermo::{
    gibbs_markov, integrate, pressure, transfer_matrix, LocallyConstantPotential, MarkovMeasure,
    ThermoError, DEFAULT_PRESSURE_TOL,
};
use thiserror::Error;

/// Absolute tolerance on cycle means below which an exponent interval is
/// considered to have empty interior.
pub const TOL_COHOMOLOGY: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SurfaceError {
    #[error(transparent)]
    Thermo(#[from] ThermoError),
    #[error("potential dimension {got} does not match alphabet size {expected}")]
    PotentialMismatch { expected: usize, got: usize },
    #[error("{which:?} potential violates hyperbolicity: extreme cycle mean {mean}")]
    NotHyperbolic { which: Subbundle, mean: f64 },
    #[error("target {target} lies outside the open exponent interval ({min}, {max})")]
    TargetOutOfRange { target: f64, min: f64, max: f64 },
    #[error("potential is cohomologous to a constant; exponent is not adjustable")]
    Degenerate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subbundle {
    Unstable,
    Stable,
}

/// Closed range of cycle means of a potential, with a flag marking a
/// degenerate (empty-interior) interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExponentInterval {
    pub min: f64,
    pub max: f64,
    pub empty_interior: bool,
}

impl ExponentInterval {
    fn from_bounds(min: f64, max: f64) -> Self {
        ExponentInterval {
            min,
            max,
            empty_interior: (max - min).abs() < TOL_COHOMOLOGY,
        }
    }

    pub fn width(&self) -> f64 {
        self.max - self.min
    }

    pub fn contains_strictly(&self, x: f64) -> bool {
        x > self.min && x < self.max
    }
}

/// Min and max mean of `phi` over the cycles of the adjacency graph.
/// For locally constant potentials these are the extremes of the integral
/// of `phi` over all shift-invariant measures.
pub fn cycle_mean_range(sft: &Sft, phi: &LocallyConstantPotential) -> ExponentInterval {
    let k = sft.k();
    assert_eq!(phi.k(), k, "potential and shift dimensions differ");
    let mut min = f64::INFINITY;
    let mut max = f64::NEG_INFINITY;
    for comp in strongly_connected_components(sft) {
        if let Some(lo) = karp_extreme_mean(sft, phi, &comp, false) {
            min = min.min(lo);
            let hi = karp_extreme_mean(sft, phi, &comp, true)
                .expect("component with a minimum cycle mean has a maximum too");
            max = max.max(hi);
        }
    }
    assert!(
        min.is_finite() && max.is_finite(),
        "valid SFT has at least one cycle"
    );
    ExponentInterval::from_bounds(min, max)
}

fn strongly_connected_components(sft: &Sft) -> Vec<Vec<usize>> {
    // Kosaraju on at most a handful of vertices.
    let k = sft.k();
    let mut visited = vec![false; k];
    let mut order = Vec::with_capacity(k);
    for start in 0..k {
        if !visited[start] {
            dfs_order(sft, start, &mut visited, &mut order, false);
        }
    }
    let mut assigned = vec![false; k];
    let mut comps = Vec::new();
    for &v in order.iter().rev() {
        if !assigned[v] {
            let mut comp = Vec::new();
            dfs_order(sft, v, &mut assigned, &mut comp, true);
            comps.push(comp);
        }
    }
    comps
}

fn dfs_order(sft: &Sft, start: usize, seen: &mut [bool], out: &mut Vec<usize>, reversed: bool) {
    let k = sft.k();
    let mut stack = vec![(start, 0usize)];
    seen[start] = true;
    if reversed {
        out.push(start);
    }
    while let Some(&mut (v, ref mut next)) = stack.last_mut() {
        if *next == k {
            stack.pop();
            if !reversed {
                out.push(v);
            }
            continue;
        }
        let w = *next;
        *next += 1;
        let edge = if reversed {
            sft.is_allowed(w, v)
        } else {
            sft.is_allowed(v, w)
        };
        if edge && !seen[w] {
            seen[w] = true;
            if reversed {
                out.push(w);
            }
            stack.push((w, 0));
        }
    }
}

/// Karp's minimum (or maximum) mean-cycle value restricted to one
/// strongly connected component; `None` when the component carries no
/// cycle (a single vertex without a self-loop).
fn karp_extreme_mean(
    sft: &Sft,
    phi: &LocallyConstantPotential,
    comp: &[usize],
    maximize: bool,
) -> Option<f64> {
    let s = comp.len();
    let index_of = |v: usize| comp.iter().position(|&c| c == v).unwrap();
    let sign = if maximize { -1.0 } else { 1.0 };
    let has_edges = comp
        .iter()
        .any(|&a| comp.iter().any(|&b| sft.is_allowed(a, b)));
    if !has_edges {
        return None;
    }

    // dist[k][v]: minimum weight over walks of exactly k edges from the
    // source to v, inside the component.
    let mut dist = vec![vec![f64::INFINITY; s]; s + 1];
    dist[0][0] = 0.0;
    for step in 1..=s {
        for (ai, &a) in comp.iter().enumerate() {
            if !dist[step - 1][ai].is_finite() {
                continue;
            }
            for &b in comp {
                if sft.is_allowed(a, b) {
                    let w = sign * phi.edge_value(a, b);
                    let bi = index_of(b);
                    let cand = dist[step - 1][ai] + w;
                    if cand < dist[step][bi] {
                        dist[step][bi] = cand;
                    }
                }
            }
        }
    }

    let mut best = f64::INFINITY;
    for v in 0..s {
        let full_walk = dist[s][v];
        if !full_walk.is_finite() {
            continue;
        }
        let mut worst = f64::NEG_INFINITY;
        for (k, row) in dist.iter().enumerate().take(s) {
            if row[v].is_finite() {
                worst = worst.max((full_walk - row[v]) / (s - k) as f64);
            }
        }
        best = best.min(worst);
    }
    if best.is_finite() {
        Some(sign * best)
    } else {
        None
    }
}

/// A primitive subshift together with an expansion potential (positive
/// cycle means) and a contraction potential (negative cycle means).
#[derive(Debug, Clone, PartialEq)]
pub struct TwoPotentialSystem {
    sft: Sft,
    phi_u: LocallyConstantPotential,
    phi_s: LocallyConstantPotential,
    eigen_tol: f64,
}

/// Equilibrium data at one parameter pair of the pressure surface.
#[derive(Debug, Clone, PartialEq)]
pub struct EquilibriumPoint {
    pub p: f64,
    pub q: f64,
    /// Pressure `Q(p, q)` of the combined potential.
    pub pressure: f64,
    pub lambda_u: f64,
    pub lambda_s: f64,
    pub h: f64,
    pub d_u: f64,
    pub d_s: f64,
    pub dim: f64,
    pub measure: MarkovMeasure,
}

impl EquilibriumPoint {
    /// Neutralized entropy `h + r * dim` of the equilibrium measure.
    pub fn neutralized_entropy(&self, r: f64) -> f64 {
        assert!(r >= 0.0, "neutralization rate must be nonnegative");
        self.h + r * self.dim
    }
}

impl TwoPotentialSystem {
    pub fn new(
        sft: Sft,
        phi_u: LocallyConstantPotential,
        phi_s: LocallyConstantPotential,
    ) -> Result<Self, SurfaceError> {
        if !sft.is_primitive() {
            return Err(SurfaceError::Thermo(ThermoError::NotPrimitive));
        }
        for phi in [&phi_u, &phi_s] {
            if phi.k() != sft.k() {
                return Err(SurfaceError::PotentialMismatch {
                    expected: sft.k(),
                    got: phi.k(),
                });
            }
        }
        let range_u = cycle_mean_range(&sft, &phi_u);
        if range_u.min.is_nan() || range_u.min <= 0.0 {
            return Err(SurfaceError::NotHyperbolic {
                which: Subbundle::Unstable,
                mean: range_u.min,
            });
        }
        let range_s = cycle_mean_range(&sft, &phi_s);
        if range_s.max.is_nan() || range_s.max >= 0.0 {
            return Err(SurfaceError::NotHyperbolic {
                which: Subbundle::Stable,
                mean: range_s.max,
            });
        }
        Ok(TwoPotentialSystem {
            sft,
            phi_u,
            phi_s,
            eigen_tol: DEFAULT_PRESSURE_TOL,
        })
    }

    pub fn with_eigen_tol(mut self, tol: f64) -> Self {
        self.eigen_tol = tol;
        self
    }

    pub fn sft(&self) -> &Sft {
        &self.sft
    }

    pub fn phi_u(&self) -> &LocallyConstantPotential {
        &self.phi_u
    }

    pub fn phi_s(&self) -> &LocallyConstantPotential {
        &self.phi_s
    }

    pub fn eigen_tol(&self) -> f64 {
        self.eigen_tol
    }

    fn combined(&self, p: f64, q: f64) -> LocallyConstantPotential {
        LocallyConstantPotential::linear_combination(&[(-p, &self.phi_u), (q, &self.phi_s)])
    }

    /// Pressure `Q(p, q)` alone, without building the equilibrium measure.
    pub fn pressure_at(&self, p: f64, q: f64) -> Result<f64, SurfaceError> {
        let l = transfer_matrix(&self.sft, &self.combined(p, q))?;
        Ok(pressure(&l, self.eigen_tol)?.pressure)
    }

    /// Equilibrium point of the potential `-p phi_u + q phi_s`: pressure,
    /// Gibbs measure, exponents as Gibbs integrals, entropy from the
    /// pressure identity, and the induced dimensions.
    pub fn eval_point(&self, p: f64, q: f64) -> Result<EquilibriumPoint, SurfaceError> {
        let l = transfer_matrix(&self.sft, &self.combined(p, q))?;
        let eig = pressure(&l, self.eigen_tol)?;
        let measure = gibbs_markov(&l, &eig)?;
        let lambda_u = integrate(&self.phi_u, &measure);
        let lambda_s = integrate(&self.phi_s, &measure);
        let mut h = eig.pressure + p * lambda_u - q * lambda_s;
        if h < 0.0 && h > -1e-12 {
            h = 0.0;
        }
        let d_u = h / lambda_u;
        let d_s = -h / lambda_s;
        Ok(EquilibriumPoint {
            p,
            q,
            pressure: eig.pressure,
            lambda_u,
            lambda_s,
            h,
            d_u,
            d_s,
            dim: d_u + d_s,
            measure,
        })
    }

    /// Central-difference residuals of the derivative identities
    /// `lambda_u = -dQ/dp` and `lambda_s = dQ/dq`.
    pub fn derivative_check(&self, p: f64, q: f64, step: f64) -> Result<(f64, f64), SurfaceError> {
        assert!(step > 0.0, "step must be positive");
        let point = self.eval_point(p, q)?;
        let dq_dp =
            (self.pressure_at(p + step, q)? - self.pressure_at(p - step, q)?) / (2.0 * step);
        let dq_dq =
            (self.pressure_at(p, q + step)? - self.pressure_at(p, q - step)?) / (2.0 * step);
        Ok(((point.lambda_u + dq_dp).abs(), (point.lambda_s - dq_dq).abs()))
    }

    /// Range of the chosen exponent over all invariant measures.
    pub fn exponent_range(&self, which: Subbundle) -> ExponentInterval {
        let phi = match which {
            Subbundle::Unstable => &self.phi_u,
            Subbundle::Stable => &self.phi_s,
        };
        cycle_mean_range(&self.sft, phi)
    }

    /// Whether the chosen potential is cohomologous to a constant, i.e.
    /// all its cycle means coincide.
    pub fn is_cohomologous_to_constant(&self, which: Subbundle) -> bool {
        self.exponent_range(which).empty_interior
    }

    /// Solves `lambda_s(p, q) = b` for `q` at fixed `p` by bisection on an
    /// expanding bracket; valid because the stable exponent is strictly
    /// increasing in `q` with horizontal asymptotes at the interval ends.
    pub fn gamma_s(&self, p: f64, b: f64) -> Result<f64, SurfaceError> {
        let range = self.exponent_range(Subbundle::Stable);
        if range.empty_interior {
            return Err(SurfaceError::Degenerate);
        }
        if !range.contains_strictly(b) {
            return Err(SurfaceError::TargetOutOfRange {
                target: b,
                min: range.min,
                max: range.max,
            });
        }
        let f = |q: f64| -> Result<f64, SurfaceError> {
            Ok(self.eval_point(p, q)?.lambda_s - b)
        };
        self.bisect_monotone(&f, true)
    }

    /// Solves `lambda_u(p, q) = a` for `p` at fixed `q`; the unstable
    /// exponent is strictly decreasing in `p`.
    pub fn gamma_u(&self, q: f64, a: f64) -> Result<f64, SurfaceError> {
        let range = self.exponent_range(Subbundle::Unstable);
        if range.empty_interior {
            return Err(SurfaceError::Degenerate);
        }
        if !range.contains_strictly(a) {
            return Err(SurfaceError::TargetOutOfRange {
                target: a,
                min: range.min,
                max: range.max,
            });
        }
        let f = |p: f64| -> Result<f64, SurfaceError> {
            Ok(self.eval_point(p, q)?.lambda_u - a)
        };
        self.bisect_monotone(&f, false)
    }

    /// Root of a monotone function of one surface parameter: the bracket
    /// [-1, 1] is doubled until a sign change appears (capped at 1e6,
    /// beyond which the target is unreachable), then bisected until the
    /// residual drops below 1e-10.
    fn bisect_monotone(
        &self,
        f: &dyn Fn(f64) -> Result<f64, SurfaceError>,
        increasing: bool,
    ) -> Result<f64, SurfaceError> {
        const CAP: f64 = 1e6;
        const RESIDUAL: f64 = 1e-10;
        let mut lo = -1.0;
        let mut hi = 1.0;
        let orient = |x: f64| if increasing { x } else { -x };
        let mut flo = orient(f(lo)?);
        let mut fhi = orient(f(hi)?);
        while flo > 0.0 || fhi < 0.0 {
            if lo <= -CAP || hi >= CAP {
                return Err(SurfaceError::TargetOutOfRange {
                    target: 0.0,
                    min: flo,
                    max: fhi,
                });
            }
            if flo > 0.0 {
                lo *= 2.0;
                flo = orient(f(lo)?);
            }
            if fhi < 0.0 {
                hi *= 2.0;
                fhi = orient(f(hi)?);
            }
        }
        if flo == 0.0 {
            return Ok(lo);
        }
        if fhi == 0.0 {
            return Ok(hi);
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            let fm = orient(f(mid)?);
            if fm.abs() < RESIDUAL {
                return Ok(mid);
            }
            if fm < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
            if (hi - lo).abs() < f64::EPSILON * mid.abs().max(1.0) {
                return Ok(mid);
            }
        }
        Ok(0.5 * (lo + hi))
    }
}
