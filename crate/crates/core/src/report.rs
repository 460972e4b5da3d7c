//! Named measures evaluated at a single parameter point, with their inputs,
//! results and error budget collected into one serializable record.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::bounds::{bounds, pt_min_eigenvalue, region_of, separability_region, Region};
use crate::error::{Error, Result};
use crate::exact::discord_rho0;
use crate::gaussian::{
    conditional_entropy_gaussian_detailed, gaussian_discord_rho0, monte_carlo_conditional_entropy,
    GaussianPovmParams, OptimizerConfig, QuadratureGrid,
};
use crate::nongauss::{discord_gap, nongaussianity_delta0, symplectic_eigenvalue_rho0};
use crate::ppt::ppt_bounds;
use crate::states::{truncation_deficit, Truncation, WernerParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Measure {
    /// Exact discord of `rho0`.
    Discord0,
    /// Gaussian discord of `rho0` with the optimal measurement.
    GaussianDiscord,
    /// Gaussian conditional entropy for a fixed measurement `(t, phi)`.
    ConditionalGaussian,
    /// Monte-Carlo estimate of the same quantity.
    ConditionalGaussianMc,
    /// Non-Gaussianity of `rho0`.
    Delta0,
    /// Non-Gaussianity, discord gap and their low-squeezing forms.
    Gap,
    /// `U`, `L` and MID of a general Werner state.
    Bounds,
    /// Bounds of the PPT state.
    PptBounds,
    /// Separability region of the `lambda = mu^4` family.
    Region,
    /// Smallest eigenvalue of the partial transpose.
    PtMin,
}

impl Measure {
    pub const ALL: [Measure; 10] = [
        Measure::Discord0,
        Measure::GaussianDiscord,
        Measure::ConditionalGaussian,
        Measure::ConditionalGaussianMc,
        Measure::Delta0,
        Measure::Gap,
        Measure::Bounds,
        Measure::PptBounds,
        Measure::Region,
        Measure::PtMin,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Measure::Discord0 => "discord0",
            Measure::GaussianDiscord => "gaussian-discord",
            Measure::ConditionalGaussian => "conditional-gaussian",
            Measure::ConditionalGaussianMc => "conditional-gaussian-mc",
            Measure::Delta0 => "delta0",
            Measure::Gap => "gap",
            Measure::Bounds => "bounds",
            Measure::PptBounds => "ppt-bounds",
            Measure::Region => "region",
            Measure::PtMin => "pt-min",
        }
    }

    /// Parameters the measure reads, in output order.
    pub fn parameters(self) -> &'static [Param] {
        match self {
            Measure::Discord0 | Measure::GaussianDiscord | Measure::Delta0 | Measure::Gap => {
                &[Param::P, Param::Lambda]
            }
            Measure::ConditionalGaussian | Measure::ConditionalGaussianMc => {
                &[Param::P, Param::Lambda, Param::T, Param::Phi]
            }
            Measure::Bounds | Measure::PtMin => &[Param::P, Param::Lambda, Param::Mu],
            Measure::PptBounds => &[Param::Lambda],
            Measure::Region => &[Param::P, Param::Mu],
        }
    }
}

impl fmt::Display for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Measure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Measure::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::UnknownMeasure(s.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Param {
    P,
    Lambda,
    Mu,
    T,
    Phi,
}

impl Param {
    pub const ALL: [Param; 5] = [Param::P, Param::Lambda, Param::Mu, Param::T, Param::Phi];

    pub fn name(self) -> &'static str {
        match self {
            Param::P => "p",
            Param::Lambda => "lambda",
            Param::Mu => "mu",
            Param::T => "t",
            Param::Phi => "phi",
        }
    }
}

/// Parameter values of one point; unused ones may be absent.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct PointInputs {
    pub p: Option<f64>,
    pub lambda: Option<f64>,
    pub mu: Option<f64>,
    pub t: Option<f64>,
    pub phi: Option<f64>,
}

impl PointInputs {
    pub fn get(&self, param: Param) -> Option<f64> {
        match param {
            Param::P => self.p,
            Param::Lambda => self.lambda,
            Param::Mu => self.mu,
            Param::T => self.t,
            Param::Phi => self.phi,
        }
    }

    pub fn set(&mut self, param: Param, value: f64) {
        let slot = match param {
            Param::P => &mut self.p,
            Param::Lambda => &mut self.lambda,
            Param::Mu => &mut self.mu,
            Param::T => &mut self.t,
            Param::Phi => &mut self.phi,
        };
        *slot = Some(value);
    }

    fn require(&self, measure: Measure, param: Param) -> Result<f64> {
        self.get(param).ok_or(Error::MissingParameter {
            measure: measure.name(),
            name: param.name(),
        })
    }
}

/// Numerical settings shared by every measure.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Settings {
    pub truncation: Truncation,
    pub grid: QuadratureGrid,
    pub optimizer: OptimizerConfig,
    /// Seed and sample count of the Monte-Carlo estimate.
    pub seed: u64,
    pub mc_samples: usize,
}

impl Default for Settings {
    fn default() -> Self {
        Settings {
            truncation: Truncation::default(),
            grid: QuadratureGrid::default(),
            optimizer: OptimizerConfig::default(),
            seed: 0,
            mc_samples: 100_000,
        }
    }
}

/// Known error contributions of a result; zero where a source does not apply.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct ErrorBudget {
    /// Trace missing from the truncated state.
    pub truncation_tail: f64,
    /// Normalization tolerance enforced on the outcome-plane quadrature.
    pub quadrature: f64,
    /// Neglected tail of analytic series.
    pub series_tail: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasureReport {
    pub measure: Measure,
    pub inputs: BTreeMap<String, f64>,
    /// Results in nats.
    pub results: BTreeMap<String, f64>,
    pub region: Option<Region>,
    pub cutoff: Option<usize>,
    pub error_budget: ErrorBudget,
    pub wall_time_s: f64,
}

impl MeasureReport {
    fn new(measure: Measure, inputs: &PointInputs) -> Self {
        let inputs = measure
            .parameters()
            .iter()
            .filter_map(|&q| inputs.get(q).map(|v| (q.name().to_string(), v)))
            .collect();
        MeasureReport {
            measure,
            inputs,
            results: BTreeMap::new(),
            region: None,
            cutoff: None,
            error_budget: ErrorBudget::default(),
            wall_time_s: 0.0,
        }
    }

    fn put(&mut self, name: &str, value: f64) {
        self.results.insert(name.to_string(), value);
    }

    pub fn result(&self, name: &str) -> Option<f64> {
        self.results.get(name).copied()
    }
}

/// Evaluates `measure` at one point.
pub fn compute(
    measure: Measure,
    inputs: &PointInputs,
    settings: &Settings,
) -> Result<MeasureReport> {
    let start = Instant::now();
    let mut report = MeasureReport::new(measure, inputs);
    let arg = |q: Param| inputs.require(measure, q);
    let eps_int = settings.optimizer.eps_int;
    match measure {
        Measure::Discord0 => {
            let r = discord_rho0(arg(Param::P)?, arg(Param::Lambda)?)?;
            report.put("discord", r.discord);
            report.put("s_global", r.s_global);
            report.put("s_reduced", r.s_reduced);
        }
        Measure::GaussianDiscord => {
            let (p, lambda) = (arg(Param::P)?, arg(Param::Lambda)?);
            let g = gaussian_discord_rho0(p, lambda, &settings.grid, &settings.optimizer)?;
            report.put("gaussian_discord", g.value);
            report.put("discord", g.value - g.conditional_entropy);
            report.put("conditional_entropy", g.conditional_entropy);
            report.put("t_opt", g.argmin.t);
            report.put("phi_opt", g.argmin.phi);
            report.error_budget.quadrature = eps_int;
        }
        Measure::ConditionalGaussian => {
            let povm = GaussianPovmParams::new(arg(Param::T)?, arg(Param::Phi)?)?;
            let r = conditional_entropy_gaussian_detailed(
                arg(Param::P)?,
                arg(Param::Lambda)?,
                &povm,
                &settings.grid,
                eps_int,
            )?;
            report.put("conditional_entropy", r.entropy);
            report.put("normalization", r.normalization);
            report.error_budget.quadrature = (r.normalization - 1.0).abs();
        }
        Measure::ConditionalGaussianMc => {
            let povm = GaussianPovmParams::new(arg(Param::T)?, arg(Param::Phi)?)?;
            let r = monte_carlo_conditional_entropy(
                arg(Param::P)?,
                arg(Param::Lambda)?,
                &povm,
                settings.mc_samples,
                settings.seed,
            )?;
            report.put("conditional_entropy", r.mean);
            report.put("std_error", r.std_error);
        }
        Measure::Delta0 => {
            let (p, lambda) = (arg(Param::P)?, arg(Param::Lambda)?);
            report.put("delta0", nongaussianity_delta0(p, lambda)?);
            report.put("nu", symplectic_eigenvalue_rho0(p, lambda)?);
        }
        Measure::Gap => {
            let (p, lambda) = (arg(Param::P)?, arg(Param::Lambda)?);
            let g = discord_gap(p, lambda, &settings.grid, &settings.optimizer)?;
            report.put("nu", g.nu);
            report.put("delta0", g.delta0);
            report.put("gap", g.gap);
            report.put("gap_normalized", g.gap_normalized);
            report.put("phi_lambda", g.phi_lambda);
            report.put("delta0_approx", g.delta0_approx);
            report.put("gap_approx", g.gap_approx);
            report.put("discord", g.discord);
            report.put("gaussian_discord", g.gaussian_discord);
            report.put("t_opt", g.argmin.t);
            report.error_budget.quadrature = eps_int;
        }
        Measure::Bounds => {
            let params = WernerParams::new(arg(Param::P)?, arg(Param::Lambda)?, arg(Param::Mu)?)?;
            let b = bounds(&params, &settings.truncation)?;
            report.put("s_b", b.s_b);
            report.put("s_global", b.s_global);
            report.put("h_eig", b.h_eig);
            report.put("U", b.upper);
            report.put("L", b.lower);
            report.put("clipped", b.lower_clipped());
            report.put("mid", b.mid);
            report.region = Some(b.region);
            report.cutoff = Some(b.n_max);
            report.error_budget.truncation_tail = b.tail_budget;
        }
        Measure::PptBounds => {
            let r = ppt_bounds(arg(Param::Lambda)?)?;
            report.put("norm_const", r.norm_const);
            report.put("s_global", r.s_global);
            report.put("s_reduced", r.s_reduced);
            report.put("h_eig", r.h_eig);
            report.put("U", r.upper);
            report.put("L", r.lower);
            report.put("clipped", r.lower.max(0.0));
            report.put("mid", r.mid);
            report.error_budget.series_tail = r.tail_budget;
        }
        Measure::Region => {
            let (p, mu) = (arg(Param::P)?, arg(Param::Mu)?);
            report.region = Some(match inputs.lambda {
                Some(lambda) => region_of(&WernerParams::new(p, lambda, mu)?)?,
                None => separability_region(p, mu)?,
            });
        }
        Measure::PtMin => {
            let params = WernerParams::new(arg(Param::P)?, arg(Param::Lambda)?, arg(Param::Mu)?)?;
            let cutoff = settings.truncation.resolve(&params)?;
            report.put("pt_min_eigenvalue", pt_min_eigenvalue(&params, cutoff)?);
            report.cutoff = Some(cutoff.n_max());
            report.error_budget.truncation_tail = truncation_deficit(&params, cutoff.n_max());
        }
    }
    if let Some(&value) = report.results.values().find(|v| !v.is_finite()) {
        return Err(Error::Domain {
            name: "result",
            value,
            domain: "finite",
        });
    }
    report.wall_time_s = start.elapsed().as_secs_f64();
    Ok(report)
}
