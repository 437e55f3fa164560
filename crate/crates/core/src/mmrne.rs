//! Search for measures maximizing the neutralized entropy `h + r * dim`
//! over the two-parameter equilibrium family of a hyperbolic system,
//! sweeps across neutralization rates, and the pressure-side rigidity
//! criteria deciding when the measure of maximal entropy can be such a
//! maximizer.

use crate::surface::{
    cycle_mean_range, ExponentInterval, Subbundle, SurfaceError, TwoPotentialSystem,
};
use crate::thermo::LocallyConstantPotential;
use rayon::prelude::*;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MmrneError {
    #[error(transparent)]
    Surface(#[from] SurfaceError),
    #[error("alternating exponent-matching stalled after {rounds} rounds (residual {residual})")]
    NoConvergence { rounds: usize, residual: f64 },
}

/// Best equilibrium-family point found for one neutralization rate.
/// `edge_hit` marks an argmax pinned to the search box boundary, the
/// regime in which the supremum may not be attained inside the family.
#[derive(Debug, Clone, PartialEq)]
pub struct RSweepRecord {
    pub r: f64,
    pub argmax: (f64, f64),
    pub hr_max: f64,
    pub h: f64,
    pub dim: f64,
    pub edge_hit: bool,
}

/// Knobs of the two-parameter maximizer search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchOptions {
    /// Half-width of the square search box around the origin.
    pub box_halfwidth: f64,
    /// Coarse grid resolution per axis.
    pub coarse_per_axis: usize,
    /// Rounds of coordinate-wise golden-section refinement.
    pub rounds: usize,
    /// Parameter tolerance of the refinement stages.
    pub param_tol: f64,
    /// Objective improvements below this threshold are treated as ties,
    /// which resolve toward the origin.
    pub tie_eps: f64,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            box_halfwidth: 5.0,
            coarse_per_axis: 41,
            rounds: 3,
            param_tol: 1e-8,
            tie_eps: 1e-10,
        }
    }
}

/// Objective used by the search: the neutralized entropy for a finite
/// rate, or the dimension alone for the infinite-rate (maximal Hausdorff
/// dimension) endpoint.
#[derive(Debug, Clone, Copy, PartialEq)]
enum Objective {
    Neutralized(f64),
    DimensionOnly,
}

impl Objective {
    fn eval(&self, sys: &TwoPotentialSystem, p: f64, q: f64) -> Result<f64, SurfaceError> {
        let point = sys.eval_point(p, q)?;
        Ok(match self {
            Objective::Neutralized(r) => point.h + r * point.dim,
            Objective::DimensionOnly => point.dim,
        })
    }
}

/// Maximizes `h + r * dim` over the equilibrium family inside the search
/// box: parallel coarse grid, coordinate-wise golden-section rounds, and
/// a final simplex polish. Ties (flat objective) resolve toward the
/// origin so that constant-potential systems report the measure of
/// maximal entropy.
pub fn maximize_over_family(
    sys: &TwoPotentialSystem,
    r: f64,
    opts: &SearchOptions,
) -> Result<RSweepRecord, MmrneError> {
    assert!(r >= 0.0, "neutralization rate must be nonnegative");
    let (argmax, _) = search(sys, Objective::Neutralized(r), opts)?;
    let point = sys.eval_point(argmax.0, argmax.1)?;
    let b = opts.box_halfwidth;
    Ok(RSweepRecord {
        r,
        argmax,
        hr_max: point.h + r * point.dim,
        h: point.h,
        dim: point.dim,
        edge_hit: argmax.0.abs() >= b - 1e-6 || argmax.1.abs() >= b - 1e-6,
    })
}

/// Infinite-rate endpoint: maximizes the dimension alone. The record
/// carries `r = inf` and stores the maximal dimension in `hr_max`.
pub fn maximize_dimension(
    sys: &TwoPotentialSystem,
    opts: &SearchOptions,
) -> Result<RSweepRecord, MmrneError> {
    let (argmax, best) = search(sys, Objective::DimensionOnly, opts)?;
    let point = sys.eval_point(argmax.0, argmax.1)?;
    let b = opts.box_halfwidth;
    Ok(RSweepRecord {
        r: f64::INFINITY,
        argmax,
        hr_max: best,
        h: point.h,
        dim: point.dim,
        edge_hit: argmax.0.abs() >= b - 1e-6 || argmax.1.abs() >= b - 1e-6,
    })
}

/// One record per rate, rates processed independently in parallel and
/// returned in ascending order.
pub fn sweep(
    sys: &TwoPotentialSystem,
    r_values: &[f64],
    opts: &SearchOptions,
) -> Result<Vec<RSweepRecord>, MmrneError> {
    assert!(!r_values.is_empty(), "rate grid must be nonempty");
    let mut records = r_values
        .par_iter()
        .map(|&r| maximize_over_family(sys, r, opts))
        .collect::<Result<Vec<_>, _>>()?;
    records.sort_by(|a, b| a.r.partial_cmp(&b.r).unwrap());
    Ok(records)
}

/// A sampled point of the objective: parameters and value.
type Candidate = ((f64, f64), f64);

fn search(
    sys: &TwoPotentialSystem,
    objective: Objective,
    opts: &SearchOptions,
) -> Result<((f64, f64), f64), MmrneError> {
    let b = opts.box_halfwidth;
    let n = opts.coarse_per_axis.max(3);
    let coords: Vec<f64> = (0..n)
        .map(|i| -b + 2.0 * b * i as f64 / (n - 1) as f64)
        .collect();
    let grid: Vec<Candidate> = coords
        .par_iter()
        .map(|&p| -> Result<Vec<Candidate>, MmrneError> {
            coords
                .iter()
                .map(|&q| Ok(((p, q), objective.eval(sys, p, q)?)))
                .collect()
        })
        .collect::<Result<Vec<_>, _>>()?
        .into_iter()
        .flatten()
        .collect();

    // Multistart: refine the tie-aware incumbent (ties resolve toward the
    // origin) plus the best few grid points in separated basins, so a
    // narrow secondary maximum next to a broad one is not lost.
    let cell = 2.0 * b / (n - 1) as f64;
    let mut incumbent = grid[0];
    for cand in grid.iter().skip(1) {
        if better(*cand, incumbent, opts.tie_eps) {
            incumbent = *cand;
        }
    }
    let mut order: Vec<usize> = (0..grid.len()).collect();
    order.sort_by(|&a, &c| {
        let ((pa, qa), va) = grid[a];
        let ((pc, qc), vc) = grid[c];
        vc.total_cmp(&va)
            .then(pa.abs().total_cmp(&pc.abs()))
            .then(qa.abs().total_cmp(&qc.abs()))
            .then(pa.total_cmp(&pc))
            .then(qa.total_cmp(&qc))
    });
    let mut starts: Vec<Candidate> = vec![incumbent];
    for idx in order {
        let cand = grid[idx];
        let separated = starts.iter().all(|((sp, sq), _)| {
            (cand.0 .0 - sp).abs().max((cand.0 .1 - sq).abs()) > 1.5 * cell
        });
        if separated {
            starts.push(cand);
        }
        if starts.len() == 4 {
            break;
        }
    }

    let mut best: Option<Candidate> = None;
    for start in starts {
        let refined = refine_from(sys, objective, start, cell, opts)?;
        best = Some(match best {
            None => refined,
            Some(current) if better(refined, current, opts.tie_eps) => refined,
            Some(current) => current,
        });
    }
    Ok(best.expect("coarse grid is nonempty"))
}

fn refine_from(
    sys: &TwoPotentialSystem,
    objective: Objective,
    start: Candidate,
    cell: f64,
    opts: &SearchOptions,
) -> Result<Candidate, MmrneError> {
    let b = opts.box_halfwidth;
    let ((mut p, mut q), mut val) = start;

    // Coordinate-wise golden-section rounds; the bracket spans one coarse
    // cell on each side, clipped to the box.
    for _ in 0..opts.rounds {
        let (np, nv) = golden_axis(
            |x| objective.eval(sys, x, q),
            (p - cell).max(-b),
            (p + cell).min(b),
            opts.param_tol,
        )?;
        if nv > val + opts.tie_eps {
            p = np;
            val = nv;
        }
        let (nq, nv) = golden_axis(
            |x| objective.eval(sys, p, x),
            (q - cell).max(-b),
            (q + cell).min(b),
            opts.param_tol,
        )?;
        if nv > val + opts.tie_eps {
            q = nq;
            val = nv;
        }
    }

    // Simplex polish on the final cell.
    let scale = (cell / 8.0).max(opts.param_tol * 100.0);
    let (polished, pval) = nelder_mead(
        |x, y| objective.eval(sys, x, y),
        (p, q),
        scale,
        b,
        opts.param_tol,
    )?;
    if pval > val + opts.tie_eps {
        p = polished.0;
        q = polished.1;
        val = pval;
    }
    Ok(((p, q), val))
}

/// Tie-aware comparison: a candidate wins on a clear objective gain, and
/// ties go to the point closer to the origin (then to the smaller
/// coordinates, for determinism).
fn better(cand: Candidate, best: Candidate, tie_eps: f64) -> bool {
    let ((cp, cq), cv) = cand;
    let ((bp, bq), bv) = best;
    if cv > bv + tie_eps {
        return true;
    }
    if cv < bv - tie_eps {
        return false;
    }
    let ckey = (cp.abs(), cq.abs(), cp, cq);
    let bkey = (bp.abs(), bq.abs(), bp, bq);
    ckey < bkey
}

fn golden_axis<F: FnMut(f64) -> Result<f64, SurfaceError>>(
    mut f: F,
    mut a: f64,
    mut b: f64,
    tol: f64,
) -> Result<(f64, f64), MmrneError> {
    let inv_phi = 0.618_033_988_749_894_9_f64;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = f(c)?;
    let mut fd = f(d)?;
    while b - a > tol {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d)?;
        }
    }
    let mid = 0.5 * (a + b);
    let fm = f(mid)?;
    if fc > fd && fc > fm {
        Ok((c, fc))
    } else if fd >= fc && fd > fm {
        Ok((d, fd))
    } else {
        Ok((mid, fm))
    }
}

/// Minimal deterministic Nelder-Mead maximization clipped to the box.
fn nelder_mead<F: FnMut(f64, f64) -> Result<f64, SurfaceError>>(
    mut f: F,
    start: (f64, f64),
    scale: f64,
    box_halfwidth: f64,
    tol: f64,
) -> Result<((f64, f64), f64), MmrneError> {
    let clip = |x: f64| x.clamp(-box_halfwidth, box_halfwidth);
    let mut simplex = vec![
        (clip(start.0), clip(start.1)),
        (clip(start.0 + scale), clip(start.1)),
        (clip(start.0), clip(start.1 + scale)),
    ];
    let mut values = Vec::with_capacity(3);
    for &(x, y) in &simplex {
        values.push(f(x, y)?);
    }
    for _ in 0..200 {
        // Sort descending by value (maximization).
        let mut order = [0usize, 1, 2];
        order.sort_by(|&i, &j| values[j].partial_cmp(&values[i]).unwrap());
        let (bi, mi, wi) = (order[0], order[1], order[2]);
        let spread = (simplex[bi].0 - simplex[wi].0)
            .abs()
            .max((simplex[bi].1 - simplex[wi].1).abs());
        if spread < tol {
            break;
        }
        let centroid = (
            0.5 * (simplex[bi].0 + simplex[mi].0),
            0.5 * (simplex[bi].1 + simplex[mi].1),
        );
        let reflect = (
            clip(centroid.0 + (centroid.0 - simplex[wi].0)),
            clip(centroid.1 + (centroid.1 - simplex[wi].1)),
        );
        let fr = f(reflect.0, reflect.1)?;
        if fr > values[bi] {
            let expand = (
                clip(centroid.0 + 2.0 * (centroid.0 - simplex[wi].0)),
                clip(centroid.1 + 2.0 * (centroid.1 - simplex[wi].1)),
            );
            let fe = f(expand.0, expand.1)?;
            if fe > fr {
                simplex[wi] = expand;
                values[wi] = fe;
            } else {
                simplex[wi] = reflect;
                values[wi] = fr;
            }
        } else if fr > values[mi] {
            simplex[wi] = reflect;
            values[wi] = fr;
        } else {
            let contract = (
                clip(centroid.0 + 0.5 * (simplex[wi].0 - centroid.0)),
                clip(centroid.1 + 0.5 * (simplex[wi].1 - centroid.1)),
            );
            let fc = f(contract.0, contract.1)?;
            if fc > values[wi] {
                simplex[wi] = contract;
                values[wi] = fc;
            } else {
                // Shrink toward the best vertex.
                for i in 0..3 {
                    if i != bi {
                        simplex[i] = (
                            0.5 * (simplex[i].0 + simplex[bi].0),
                            0.5 * (simplex[i].1 + simplex[bi].1),
                        );
                        values[i] = f(simplex[i].0, simplex[i].1)?;
                    }
                }
            }
        }
    }
    let mut best = 0;
    for i in 1..3 {
        if values[i] > values[best] {
            best = i;
        }
    }
    Ok((simplex[best], values[best]))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RigidityBranch {
    /// Both potentials are cohomologous to constants.
    BothConstant,
    /// Neither is, but `-phi_u + alpha phi_s` is, with
    /// `alpha = lambda_u(0,0)^2 / lambda_s(0,0)^2`.
    CombinationConstant,
    /// Neither branch of the dichotomy holds.
    None,
}

/// Outcome of the pressure-side rigidity test: the measure of maximal
/// entropy can maximize the neutralized entropy only in one of the two
/// dichotomy branches.
#[derive(Debug, Clone, PartialEq)]
pub struct RigidityReport {
    pub alpha: f64,
    pub phi_u_range: ExponentInterval,
    pub phi_s_range: ExponentInterval,
    pub psi_range: ExponentInterval,
    pub phi_u_cohomologous: bool,
    pub phi_s_cohomologous: bool,
    pub psi_cohomologous: bool,
    pub branch: RigidityBranch,
    pub mme_can_maximize: bool,
}

/// Evaluates the dichotomy at the measure of maximal entropy: computes
/// `alpha` from the exponents at the origin, forms
/// `psi = -phi_u + alpha phi_s`, and reduces each cohomology question to
/// the degeneracy of a cycle-mean range.
pub fn rigidity_mme_criterion(sys: &TwoPotentialSystem) -> Result<RigidityReport, MmrneError> {
    let mme = sys.eval_point(0.0, 0.0)?;
    let alpha = (mme.lambda_u * mme.lambda_u) / (mme.lambda_s * mme.lambda_s);
    let psi =
        LocallyConstantPotential::linear_combination(&[(-1.0, sys.phi_u()), (alpha, sys.phi_s())]);
    let phi_u_range = sys.exponent_range(Subbundle::Unstable);
    let phi_s_range = sys.exponent_range(Subbundle::Stable);
    let psi_range = cycle_mean_range(sys.sft(), &psi);
    let u_coh = phi_u_range.empty_interior;
    let s_coh = phi_s_range.empty_interior;
    let psi_coh = psi_range.empty_interior;
    let branch = if u_coh && s_coh {
        RigidityBranch::BothConstant
    } else if !u_coh && !s_coh && psi_coh {
        RigidityBranch::CombinationConstant
    } else {
        RigidityBranch::None
    };
    Ok(RigidityReport {
        alpha,
        phi_u_range,
        phi_s_range,
        psi_range,
        phi_u_cohomologous: u_coh,
        phi_s_cohomologous: s_coh,
        psi_cohomologous: psi_coh,
        branch,
        mme_can_maximize: branch != RigidityBranch::None,
    })
}

/// Finds the equilibrium parameters whose exponents match the targets,
/// by alternating the one-dimensional exponent-matching curves. Both
/// targets must lie strictly inside their exponent intervals.
pub fn equality_criterion(
    sys: &TwoPotentialSystem,
    target: (f64, f64),
) -> Result<(f64, f64), MmrneError> {
    const RESIDUAL: f64 = 1e-8;
    const MAX_ROUNDS: usize = 200;
    let (target_u, target_s) = target;
    let range_u = sys.exponent_range(Subbundle::Unstable);
    let range_s = sys.exponent_range(Subbundle::Stable);
    // A degenerate direction is matched by every measure, but only at its
    // constant value; non-degenerate directions are solved for.
    let solve_u = !range_u.empty_interior;
    let solve_s = !range_s.empty_interior;
    if solve_u && !range_u.contains_strictly(target_u) {
        return Err(SurfaceError::TargetOutOfRange {
            target: target_u,
            min: range_u.min,
            max: range_u.max,
        }
        .into());
    }
    if !solve_u && (target_u - range_u.min).abs() > RESIDUAL {
        return Err(SurfaceError::TargetOutOfRange {
            target: target_u,
            min: range_u.min,
            max: range_u.max,
        }
        .into());
    }
    if solve_s && !range_s.contains_strictly(target_s) {
        return Err(SurfaceError::TargetOutOfRange {
            target: target_s,
            min: range_s.min,
            max: range_s.max,
        }
        .into());
    }
    if !solve_s && (target_s - range_s.max).abs() > RESIDUAL {
        return Err(SurfaceError::TargetOutOfRange {
            target: target_s,
            min: range_s.min,
            max: range_s.max,
        }
        .into());
    }
    let mut p = 0.0;
    let mut q = 0.0;
    let mut residual = f64::INFINITY;
    for round in 1..=MAX_ROUNDS {
        if solve_u {
            p = sys.gamma_u(q, target_u)?;
        }
        if solve_s {
            q = sys.gamma_s(p, target_s)?;
        }
        let point = sys.eval_point(p, q)?;
        let ru = if solve_u {
            (point.lambda_u - target_u).abs()
        } else {
            0.0
        };
        let rs = if solve_s {
            (point.lambda_s - target_s).abs()
        } else {
            0.0
        };
        residual = ru.max(rs);
        if residual < RESIDUAL {
            return Ok((p, q));
        }
        let _ = round;
    }
    Err(MmrneError::NoConvergence {
        rounds: MAX_ROUNDS,
        residual,
    })
}
