//! Thermodynamic-formalism toolkit for subshifts of finite type and
//! two-dimensional linear horseshoes.
//!
//! The crate computes topological pressure via weighted transfer matrices,
//! builds the associated equilibrium (Gibbs) Markov measures, evaluates
//! entropy / Lyapunov exponents / Hausdorff dimension of measures, and
//! searches for measures maximizing the neutralized entropy
//! `h + r * dim` over equilibrium and Bernoulli families. The `verify`
//! module cross-checks the symbolic entropy formulas by exact cylinder
//! measures, spanning counts, and covering counts.
//!
//! ```
//! use thermo_neutral_core::{Horseshoe, Subbundle};
//!
//! let hs = Horseshoe::new(0.4, 0.2)?;
//! let sys = hs.induced_system();
//!
//! // Pressure of the zero potential is the topological entropy, log 2.
//! let mme = sys.eval_point(0.0, 0.0)?;
//! assert!((mme.pressure - 2.0f64.ln()).abs() < 1e-12);
//!
//! // The unstable exponent ranges between the two branch rates.
//! let range = sys.exponent_range(Subbundle::Unstable);
//! assert!((range.min + 0.4f64.ln()).abs() < 1e-12);
//! assert!((range.max + 0.2f64.ln()).abs() < 1e-12);
//! # Ok::<(), Box<dyn std::error::Error>>(())
//! ```

pub mod horseshoe;
pub mod mmrne;
pub mod sft;
pub mod surface;
pub mod thermo;
pub mod verify;

pub use horseshoe::{BernoulliStats, Horseshoe, HorseshoeError};
pub use mmrne::{MmrneError, RSweepRecord, RigidityBranch, RigidityReport, SearchOptions};
pub use sft::{BallWindow, SftError, ShiftMetric, Sft, TwoSidedOrbit, Word};
pub use surface::{
    cycle_mean_range, EquilibriumPoint, ExponentInterval, Subbundle, SurfaceError,
    TwoPotentialSystem,
};
pub use thermo::{
    gibbs_markov, integrate, markov_entropy, pressure, transfer_matrix,
    LocallyConstantPotential, MarkovMeasure, PressureResult, ThermoError, TransferMatrix,
};
pub use verify::{LocalEntropyEstimate, VariationalGapReport, VerifyError};
