use serde::{Deserialize, Serialize};

use super::{
    conditional_entropy_gaussian, GaussianPovmParams, QuadratureGrid, DEFAULT_EPS_INT,
    HOMODYNE_PROXY_T,
};
use crate::error::{check_domain, Error, Result};
use crate::exact::discord_rho0;

/// `(1 + sqrt 5)/2 - 1`
const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Minimizer, minimum and every evaluation `(x, f(x))`.
pub type GoldenSection = (f64, f64, Vec<(f64, f64)>);

/// Golden-section search for a minimum of `f` on `[a, b]`.
///
/// Returns `(x_min, f(x_min), trace)`, where `trace` records every
/// evaluation. Fails if the bracket is not narrowed below `tol` within
/// `max_iter` iterations.
pub fn golden_section_minimize<F>(
    mut f: F,
    a: f64,
    b: f64,
    tol: f64,
    max_iter: usize,
) -> Result<GoldenSection>
where
    F: FnMut(f64) -> Result<f64>,
{
    let (mut a, mut b) = (a.min(b), a.max(b));
    let mut trace = Vec::new();
    let mut eval = |x: f64, trace: &mut Vec<(f64, f64)>| -> Result<f64> {
        let y = f(x)?;
        trace.push((x, y));
        Ok(y)
    };
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = eval(c, &mut trace)?;
    let mut fd = eval(d, &mut trace)?;
    for _ in 0..max_iter {
        if (b - a).abs() <= tol {
            let (x, fx) = if fc <= fd { (c, fc) } else { (d, fd) };
            return Ok((x, fx, trace));
        }
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = eval(c, &mut trace)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = eval(d, &mut trace)?;
        }
    }
    Err(Error::NoConvergence {
        iterations: max_iter,
        trace,
    })
}

/// Coarse scan over `t in {0, step, ..., t_max}` and the listed phases,
/// followed by golden-section refinement in `t` at the best phase.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimizerConfig {
    pub t_max: f64,
    pub t_step: f64,
    pub phases: Vec<f64>,
    pub t_tol: f64,
    pub max_iter: usize,
    pub eps_int: f64,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        OptimizerConfig {
            t_max: HOMODYNE_PROXY_T,
            t_step: 0.5,
            phases: vec![
                0.0,
                std::f64::consts::FRAC_PI_4,
                std::f64::consts::FRAC_PI_2,
            ],
            t_tol: 1e-3,
            max_iter: 100,
            eps_int: DEFAULT_EPS_INT,
        }
    }
}

/// Gaussian discord of `rho0` and the minimizing measurement.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GaussianDiscord {
    pub value: f64,
    /// Minimal Gaussian conditional entropy; equals `value - discord`.
    pub conditional_entropy: f64,
    pub argmin: GaussianPovmParams,
    /// `(t, phi, H)` for every point of the coarse scan.
    pub scan: Vec<(f64, f64, f64)>,
}

pub fn gaussian_discord_rho0(
    p: f64,
    lambda: f64,
    grid: &QuadratureGrid,
    config: &OptimizerConfig,
) -> Result<GaussianDiscord> {
    check_domain("t_max", config.t_max, config.t_max > 0.0, "(0, inf)")?;
    check_domain("t_step", config.t_step, config.t_step > 0.0, "(0, inf)")?;
    check_domain(
        "phases",
        config.phases.len() as f64,
        !config.phases.is_empty(),
        ">= 1",
    )?;
    let exact = discord_rho0(p, lambda)?;
    let h = |t: f64, phi: f64| -> Result<f64> {
        let povm = GaussianPovmParams::new(t, phi)?;
        conditional_entropy_gaussian(p, lambda, &povm, grid, config.eps_int)
    };

    let steps = (config.t_max / config.t_step).round() as usize;
    let mut ts: Vec<f64> = (0..=steps)
        .map(|i| (i as f64 * config.t_step).min(config.t_max))
        .collect();
    if ts.last().copied() != Some(config.t_max) {
        ts.push(config.t_max);
    }
    let mut scan = Vec::with_capacity(ts.len() * config.phases.len());
    for &phi in &config.phases {
        for &t in &ts {
            scan.push((t, phi, h(t, phi)?));
        }
    }
    let &(t_best, phi_best, h_best) = scan
        .iter()
        .min_by(|a, b| a.2.total_cmp(&b.2))
        .expect("scan is nonempty");

    let lo = (t_best - config.t_step).max(0.0);
    let hi = (t_best + config.t_step).min(config.t_max);
    let (t_ref, h_ref, _) =
        golden_section_minimize(|t| h(t, phi_best), lo, hi, config.t_tol, config.max_iter)?;

    let (t_min, h_min) = if h_ref < h_best {
        (t_ref, h_ref)
    } else {
        (t_best, h_best)
    };
    Ok(GaussianDiscord {
        value: exact.discord + h_min,
        conditional_entropy: h_min,
        argmin: GaussianPovmParams::new(t_min, phi_best)?,
        scan,
    })
}
