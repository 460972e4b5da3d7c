//! Nonclassical correlations of two-mode continuous-variable Werner states.

pub mod bounds;
pub mod error;
pub mod exact;
pub mod fock;
pub mod gaussian;
pub mod nongauss;
pub mod ppt;
pub mod report;
pub mod states;
pub mod verify;

pub use bounds::{bounds, BoundsReport, Region};
pub use error::{Error, Result};
pub use exact::{discord_rho0, Rho0Report};
pub use fock::{FockCutoff, Mode, OneModeState, Spectrum, TwoModeState};
pub use gaussian::{gaussian_discord_rho0, GaussianPovmParams, OptimizerConfig, QuadratureGrid};
pub use nongauss::{discord_gap, GapReport};
pub use ppt::{ppt_bounds, PptReport};
pub use report::{compute, Measure, MeasureReport, Param, PointInputs, Settings};
pub use states::{Truncation, WernerParams};
pub use verify::{run_all, CheckResult, VerifyConfig};
