//! End-to-end acceptance checks. Each check reports a pass flag and a
//! one-line diagnostic instead of panicking, so a full run always completes.

use std::f64::consts::{FRAC_PI_4, LN_2, PI};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::{
    bounds, bounds_from_state, conditional_entropy_eig, p_ppt, p_sep, pt_min_eigenvalue,
};
use crate::error::Result;
use crate::exact::{
    discord_rho0, discord_rho0_truncated, nonclassicality_triple_rho0, reduced_spectrum_rho0,
    rho0_global_eigenvalues,
};
use crate::fock::{is_more_mixed, Spectrum};
use crate::gaussian::{
    conditional_entropy_gaussian_detailed, gaussian_discord_rho0, GaussianPovmParams,
    OptimizerConfig, QuadratureGrid, DEFAULT_EPS_INT,
};
use crate::nongauss::{discord_gap, nongaussianity_delta0};
use crate::ppt::{ppt_bounds, ppt_global_entropy};
use crate::states::{
    ppt_spectrum_closed_form, ppt_werner, ppt_werner_params, BuildOptions, Truncation, WernerParams,
};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyConfig {
    pub truncation: Truncation,
    pub eps_int: f64,
    pub grid: QuadratureGrid,
    /// Seed of the random test points.
    pub seed: u64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            truncation: Truncation::default(),
            eps_int: DEFAULT_EPS_INT,
            grid: QuadratureGrid::default(),
            seed: 20_240_917,
        }
    }
}

impl VerifyConfig {
    fn optimizer(&self) -> OptimizerConfig {
        OptimizerConfig {
            eps_int: self.eps_int,
            ..OptimizerConfig::default()
        }
    }

    fn random_points(&self, stream: u64, count: usize, lambda_max: f64) -> Vec<(f64, f64)> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(stream);
        (0..count)
            .map(|_| {
                (
                    rng.random_range(0.0..1.0),
                    rng.random_range(0.02..lambda_max),
                )
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub id: usize,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed_s: f64,
}

impl std::fmt::Display for CheckResult {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "[{}] {:>2} {:<34} {} ({:.2} s)",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.detail,
            self.elapsed_s
        )
    }
}

/// Outcome of one check body: pass flag and diagnostic.
type Outcome = Result<(bool, String)>;

pub struct Check {
    pub id: usize,
    pub name: &'static str,
    /// Wall-time budget; exceeding it fails the check.
    pub budget: Option<Duration>,
    run: fn(&VerifyConfig) -> Outcome,
}

impl Check {
    pub fn run(&self, config: &VerifyConfig) -> CheckResult {
        let start = Instant::now();
        let outcome = (self.run)(config);
        let elapsed = start.elapsed();
        let (mut passed, mut detail) = match outcome {
            Ok(pair) => pair,
            Err(err) => (false, format!("error: {err}")),
        };
        if let Some(budget) = self.budget {
            if elapsed > budget {
                passed = false;
                detail = format!("{detail}; over time budget {} s", budget.as_secs());
            }
        }
        CheckResult {
            id: self.id,
            name: self.name,
            passed,
            detail,
            elapsed_s: elapsed.as_secs_f64(),
        }
    }
}

pub fn checks() -> Vec<Check> {
    vec![
        Check {
            id: 1,
            name: "exact discord vs truncated matrices",
            budget: Some(Duration::from_secs(30)),
            run: exact_discord_oracle,
        },
        Check {
            id: 2,
            name: "photon counting optimal at mu=0",
            budget: Some(Duration::from_secs(300)),
            run: photon_counting_optimality,
        },
        Check {
            id: 3,
            name: "low-squeezing ratio limit",
            budget: None,
            run: low_squeezing_ratio,
        },
        Check {
            id: 4,
            name: "trivial points",
            budget: None,
            run: trivial_points,
        },
        Check {
            id: 5,
            name: "MID equals upper bound",
            budget: Some(Duration::from_secs(600)),
            run: mid_identity,
        },
        Check {
            id: 6,
            name: "bound ordering",
            budget: None,
            run: bound_ordering,
        },
        Check {
            id: 7,
            name: "separability thresholds",
            budget: None,
            run: separability_thresholds,
        },
        Check {
            id: 8,
            name: "PPT state analytics",
            budget: None,
            run: ppt_analytics,
        },
        Check {
            id: 9,
            name: "quadrature robustness",
            budget: None,
            run: quadrature_robustness,
        },
        Check {
            id: 10,
            name: "majorization and AMID",
            budget: None,
            run: majorization_and_amid,
        },
    ]
}

/// Runs every check in order.
pub fn run_all(config: &VerifyConfig) -> Vec<CheckResult> {
    checks().iter().map(|c| c.run(config)).collect()
}

fn max_abs<I: IntoIterator<Item = f64>>(values: I) -> f64 {
    values.into_iter().fold(0.0, |a, b| a.max(b.abs()))
}

fn exact_discord_oracle(config: &VerifyConfig) -> Outcome {
    let points = config.random_points(1, 50, 0.95);
    let deviations = points
        .par_iter()
        .map(|&(p, lambda)| -> Result<(f64, usize)> {
            let cutoff = config.truncation.resolve(&WernerParams::rho0(p, lambda)?)?;
            let closed = discord_rho0(p, lambda)?.discord;
            let truncated = discord_rho0_truncated(p, lambda, cutoff)?;
            Ok(((closed - truncated).abs(), cutoff.n_max()))
        })
        .collect::<Result<Vec<_>>>()?;
    let worst = max_abs(deviations.iter().map(|d| d.0));
    let n_max = deviations.iter().map(|d| d.1).max().unwrap_or(0);
    let mut detail = format!(
        "max |closed - truncated| = {worst:.3e} over 50 points (tol 1e-8, n_max <= {n_max})"
    );
    if worst > 1e-8 {
        detail.push_str("; truncation too coarse, raise the cutoff");
    }
    Ok((worst <= 1e-8, detail))
}

fn photon_counting_optimality(config: &VerifyConfig) -> Outcome {
    let points = config.random_points(2, 20, 0.9);
    let rows = points
        .par_iter()
        .map(|&(p, lambda)| -> Result<(f64, f64)> {
            let params = WernerParams::rho0(p, lambda)?;
            let cutoff = config.truncation.resolve(&params)?;
            let h = conditional_entropy_eig(&params, cutoff)?;
            let u = bounds(&params, &config.truncation)?.upper;
            Ok((h, u - discord_rho0(p, lambda)?.discord))
        })
        .collect::<Result<Vec<_>>>()?;
    let h_worst = max_abs(rows.iter().map(|r| r.0));
    let u_worst = max_abs(rows.iter().map(|r| r.1));
    let g = gaussian_discord_rho0(0.5, 0.5, &config.grid, &config.optimizer())?;
    let excess = g.conditional_entropy;
    let passed = h_worst <= 1e-12 && u_worst <= 1e-8 && excess > 1e-3;
    Ok((
        passed,
        format!(
            "max |H_eig| = {h_worst:.1e}, max |U - D| = {u_worst:.1e}; D_G - D at (0.5,0.5) = {excess:.6} (t* = {:.2})",
            g.argmin.t
        ),
    ))
}

fn low_squeezing_ratio(config: &VerifyConfig) -> Outcome {
    let optimizer = config.optimizer();
    let mut ratios = Vec::new();
    for &lambda in &[0.2, 0.05] {
        let g = discord_gap(0.5, lambda, &config.grid, &optimizer)?;
        ratios.push((lambda, g.delta0 / g.gap, g.phi_lambda));
    }
    let (_, r_far, _) = ratios[0];
    let (_, r_near, phi_near) = ratios[1];
    let rel = (r_near - phi_near).abs() / phi_near;
    let trend = (r_near - PI).abs() < (r_far - PI).abs();
    let mut detail = format!(
        "delta0/gap = {r_far:.4} at lambda=0.2, {r_near:.4} at 0.05; predicted {phi_near:.4} (rel dev {rel:.3}, tol 0.05)"
    );
    if (r_near - 1.0).abs() < (r_near - PI).abs() {
        detail.push_str("; measured ratio tends to 1, not pi");
    }
    Ok((rel < 0.05 && trend, detail))
}

fn trivial_points(config: &VerifyConfig) -> Outcome {
    let optimizer = config.optimizer();
    let lambda = 0.5;
    let mut values = vec![
        ("discord", discord_rho0(0.0, lambda)?.discord),
        ("delta0", nongaussianity_delta0(0.0, lambda)?),
        (
            "gap",
            discord_gap(0.0, lambda, &config.grid, &optimizer)?.gap,
        ),
        ("delta0(p=1)", nongaussianity_delta0(1.0, lambda)?),
    ];
    for &mu in &[0.0, 0.5] {
        let b = bounds(&WernerParams::new(0.0, lambda, mu)?, &config.truncation)?;
        values.push(("U", b.upper));
        values.push(("L clipped", b.lower_clipped()));
        values.push(("MID", b.mid));
    }
    let (name, worst) = values
        .iter()
        .map(|&(n, v)| (n, v.abs()))
        .max_by(|a, b| a.1.total_cmp(&b.1))
        .expect("nonempty");
    Ok((
        worst <= 1e-10,
        format!(
            "{} quantities, largest |value| = {worst:.1e} ({name}), tol 1e-10",
            values.len()
        ),
    ))
}

fn bound_grid() -> Vec<(f64, f64, f64)> {
    let ps = [0.0, 0.25, 0.5, 0.75, 1.0];
    let ls = [0.0, 0.2, 0.4, 0.6, 0.8];
    let mut out = Vec::with_capacity(125);
    for &p in &ps {
        for &lambda in &ls {
            for &mu in &ls {
                out.push((p, lambda, mu));
            }
        }
    }
    out
}

fn grid_bounds(config: &VerifyConfig) -> Result<Vec<crate::bounds::BoundsReport>> {
    bound_grid()
        .par_iter()
        .map(|&(p, lambda, mu)| bounds(&WernerParams::new(p, lambda, mu)?, &config.truncation))
        .collect()
}

fn mid_identity(config: &VerifyConfig) -> Outcome {
    let reports = grid_bounds(config)?;
    let worst = max_abs(reports.iter().map(|r| r.mid - r.upper));
    let n_max = reports.iter().map(|r| r.n_max).max().unwrap_or(0);
    Ok((
        worst <= 1e-8 && n_max <= 80,
        format!("max |MID - U| = {worst:.2e} on 125 points (tol 1e-8), n_max <= {n_max}"),
    ))
}

fn bound_ordering(config: &VerifyConfig) -> Outcome {
    let reports = grid_bounds(config)?;
    let violation = reports
        .iter()
        .map(|r| r.lower_clipped() - r.upper)
        .fold(f64::NEG_INFINITY, f64::max);
    let at_one = max_abs(
        reports
            .iter()
            .filter(|r| r.p == 1.0)
            .map(|r| r.lower - r.upper),
    );
    Ok((
        violation <= 1e-10 && at_one <= 1e-8,
        format!("max(max(L,0) - U) = {violation:.2e}; max |L - U| at p=1 = {at_one:.2e}"),
    ))
}

fn separability_thresholds(config: &VerifyConfig) -> Outcome {
    let mu: f64 = 0.8;
    let (ps, pp) = (p_sep(mu)?, p_ppt(mu)?);
    let closed_ok = (ps - 0.084199).abs() <= 1e-6 && (pp - 0.195704).abs() <= 1e-6;
    let step = 0.005;
    let grid: Vec<f64> = (0..=100).map(|i| i as f64 * step).collect();
    let signs = grid
        .par_iter()
        .map(|&p| -> Result<f64> {
            let params = WernerParams::new(p, mu.powi(4), mu)?;
            pt_min_eigenvalue(&params, config.truncation.resolve(&params)?)
        })
        .collect::<Result<Vec<_>>>()?;
    let first_negative = signs.iter().position(|&e| e < -1e-10);
    let bracket = first_negative
        .filter(|&i| i > 0)
        .map(|i| (grid[i - 1], grid[i]));
    let bracket_ok = bracket.is_some_and(|(lo, hi)| lo <= pp && pp <= hi);
    let where_ = match bracket {
        Some((lo, hi)) => format!("sign change in [{lo:.3}, {hi:.3}]"),
        None => "no sign change found".to_string(),
    };
    Ok((
        closed_ok && bracket_ok,
        format!("p_sep = {ps:.6}, p_PPT = {pp:.6}; {where_}"),
    ))
}

fn ppt_analytics(config: &VerifyConfig) -> Outcome {
    let mut u_dev: f64 = 0.0;
    let mut spec_dev: f64 = 0.0;
    let mut s_dev: f64 = 0.0;
    for &lambda in &[0.2, 0.5, 0.8] {
        let cutoff = config.truncation.resolve(&ppt_werner_params(lambda)?)?;
        let rho = ppt_werner(lambda, cutoff, BuildOptions::default())?;
        let numeric = bounds_from_state(&rho)?;
        u_dev = u_dev.max((numeric.upper - lambda * LN_2).abs());
        let mut values = rho.spectrum()?.nonzero().values().to_vec();
        let closed = ppt_spectrum_closed_form(lambda, cutoff.n_max());
        values.truncate(closed.len());
        if values.len() != closed.len() {
            spec_dev = f64::INFINITY;
        }
        spec_dev = spec_dev.max(max_abs(values.iter().zip(&closed).map(|(a, b)| a - b)));
        s_dev = s_dev.max((rho.entropy()? - ppt_global_entropy(lambda)?).abs());
    }
    let l_half = ppt_bounds(0.5)?.lower;
    let u_edge = ppt_bounds(0.999)?.upper;
    let passed = u_dev <= 1e-6
        && spec_dev <= 1e-10
        && s_dev <= 1e-6
        && (l_half - 0.165).abs() <= 2e-3
        && u_edge > 0.692;
    Ok((
        passed,
        format!(
            "max |U - lambda ln2| = {u_dev:.1e}, spectrum dev = {spec_dev:.1e}, entropy dev = {s_dev:.1e}, L(0.5) = {l_half:.6}, U(0.999) = {u_edge:.6}"
        ),
    ))
}

fn quadrature_robustness(config: &VerifyConfig) -> Outcome {
    let (p, lambda) = (0.5, 0.5);
    let povm = GaussianPovmParams::new(2.0, 0.0)?;
    let base =
        conditional_entropy_gaussian_detailed(p, lambda, &povm, &config.grid, config.eps_int)?;
    let fine = conditional_entropy_gaussian_detailed(
        p,
        lambda,
        &povm,
        &config.grid.refined()?,
        config.eps_int,
    )?;
    let refine_dev = (base.entropy - fine.entropy).abs();
    let norm_dev = (base.normalization - 1.0).abs();
    let mut phase_dev: f64 = 0.0;
    for &phi in &[FRAC_PI_4, 1.0, 2.5] {
        let rotated = GaussianPovmParams::new(2.0, phi)?;
        let h = conditional_entropy_gaussian_detailed(
            p,
            lambda,
            &rotated,
            &config.grid,
            config.eps_int,
        )?;
        phase_dev = phase_dev.max((h.entropy - base.entropy).abs());
    }
    let passed = refine_dev < 1e-6 && norm_dev <= 1e-7 && phase_dev < 1e-6;
    Ok((
        passed,
        format!(
            "refinement change {refine_dev:.1e}, |int q - 1| = {norm_dev:.1e} (margin {:.1e} below eps_int {:.0e}), phase spread {phase_dev:.1e}",
            config.eps_int - norm_dev,
            config.eps_int
        ),
    ))
}

fn majorization_and_amid(config: &VerifyConfig) -> Outcome {
    let grid: Vec<(f64, f64)> = (0..10)
        .flat_map(|i| (0..10).map(move |j| ((i as f64 + 0.5) / 10.0, (j as f64 + 0.5) / 10.0)))
        .collect();
    let majorized = grid
        .par_iter()
        .map(|&(p, lambda)| -> Result<bool> {
            let n = config
                .truncation
                .resolve(&WernerParams::rho0(p, lambda)?)?
                .n_max();
            let reduced = reduced_spectrum_rho0(p, lambda, n)?;
            let (a, b) = rho0_global_eigenvalues(p, lambda)?;
            Ok(is_more_mixed(&reduced, &Spectrum::new(vec![a, b])?))
        })
        .collect::<Result<Vec<_>>>()?;
    let count = majorized.iter().filter(|&&m| m).count();
    let points = config.random_points(10, 10, 0.9);
    let deviations = points
        .par_iter()
        .map(|&(p, lambda)| -> Result<f64> {
            let cutoff = config.truncation.resolve(&WernerParams::rho0(p, lambda)?)?;
            let t = nonclassicality_triple_rho0(p, lambda, cutoff)?;
            Ok((t.amid - t.discord).abs().max((t.req - t.discord).abs()))
        })
        .collect::<Result<Vec<_>>>()?;
    let worst = max_abs(deviations);
    Ok((
        count == grid.len() && worst <= 1e-8,
        format!(
            "majorization holds at {count}/100 points; max |AMID - D|, |REQ - D| = {worst:.1e}"
        ),
    ))
}
