//! Entropic non-Gaussianity of `rho0` and the gap between its Gaussian and
//! unrestricted discord.

use nalgebra::{Matrix2, Matrix4};
use serde::{Deserialize, Serialize};

use crate::error::{check_probability, check_unit_interval_open, Error, Result};
use crate::exact::discord_rho0;
use crate::gaussian::{gaussian_discord_rho0, GaussianPovmParams, OptimizerConfig, QuadratureGrid};

/// Euler-Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Below this `nu - 1` the `(nu-1) ln((nu-1)/2)` term is replaced by its limit 0.
const NU_PURE_TOL: f64 = 1e-12;

/// Covariance matrix (vacuum = identity) of a symmetric two-mode state with
/// diagonal `c` and correlation blocks `diag(s, -s)`, in the ordering
/// `(x_A, p_A, x_B, p_B)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CovarianceMatrix4 {
    pub c: f64,
    pub s: f64,
}

impl CovarianceMatrix4 {
    pub fn matrix(&self) -> Matrix4<f64> {
        let (c, s) = (self.c, self.s);
        Matrix4::new(
            c, 0.0, s, 0.0, //
            0.0, c, 0.0, -s, //
            s, 0.0, c, 0.0, //
            0.0, -s, 0.0, c,
        )
    }

    /// `C^2 - S^2`, the squared (doubly degenerate) symplectic eigenvalue.
    pub fn nu_squared(&self) -> f64 {
        (self.c - self.s) * (self.c + self.s)
    }

    pub fn is_physical(&self) -> bool {
        self.c >= 1.0 && self.nu_squared() >= 1.0 - 1e-14
    }
}

pub fn covariance_rho0(p: f64, lambda: f64) -> Result<CovarianceMatrix4> {
    check_probability("p", p)?;
    check_unit_interval_open("lambda", lambda)?;
    let l2 = lambda * lambda;
    let cosh2r = (1.0 + l2) / (1.0 - l2);
    let sinh2r = 2.0 * lambda / (1.0 - l2);
    Ok(CovarianceMatrix4 {
        c: p * cosh2r + 1.0 - p,
        s: p * sinh2r,
    })
}

/// Symplectic eigenvalues `(nu_-, nu_+)` of a general two-mode covariance
/// matrix from its local invariants `Delta = det A + det B + 2 det C` and
/// `det Gamma`.
pub fn symplectic_eigenvalues(gamma: &Matrix4<f64>) -> (f64, f64) {
    let block =
        |r: usize, c: usize| -> Matrix2<f64> { gamma.fixed_view::<2, 2>(r, c).into_owned() };
    let delta =
        block(0, 0).determinant() + block(2, 2).determinant() + 2.0 * block(0, 2).determinant();
    let det = gamma.determinant();
    let disc = (delta * delta - 4.0 * det).max(0.0).sqrt();
    (
        ((delta - disc) / 2.0).max(0.0).sqrt(),
        ((delta + disc) / 2.0).sqrt(),
    )
}

/// `nu - 1` for `rho0`, as `4p(1-p) lambda^2 / [(1-lambda^2)(nu+1)]`.
fn nu_minus_one(p: f64, lambda: f64) -> f64 {
    let l2 = lambda * lambda;
    let nu_sq_minus_one = 4.0 * p * (1.0 - p) * l2 / (1.0 - l2);
    nu_sq_minus_one / ((1.0 + nu_sq_minus_one).sqrt() + 1.0)
}

/// Doubly degenerate symplectic eigenvalue of the covariance matrix of `rho0`.
pub fn symplectic_eigenvalue_rho0(p: f64, lambda: f64) -> Result<f64> {
    check_probability("p", p)?;
    check_unit_interval_open("lambda", lambda)?;
    Ok(1.0 + nu_minus_one(p, lambda))
}

/// Entropy of a two-mode Gaussian state whose symplectic eigenvalues are both `1 + x`.
fn gaussian_entropy_degenerate(x: f64) -> f64 {
    let plus = (2.0 + x) * (0.5 * x).ln_1p();
    if x < NU_PURE_TOL {
        plus
    } else {
        plus - x * (0.5 * x).ln()
    }
}

/// Entropy of the Gaussian state with the same first and second moments as `rho0`.
pub fn gaussian_reference_entropy(p: f64, lambda: f64) -> Result<f64> {
    check_probability("p", p)?;
    check_unit_interval_open("lambda", lambda)?;
    Ok(gaussian_entropy_degenerate(nu_minus_one(p, lambda)))
}

/// Non-Gaussianity `delta0 = S(tau0) - S(rho0)`.
pub fn nongaussianity_delta0(p: f64, lambda: f64) -> Result<f64> {
    let s_tau = gaussian_reference_entropy(p, lambda)?;
    let s_rho = discord_rho0(p, lambda)?.s_global;
    Ok((s_tau - s_rho).max(0.0))
}

/// Ratio `delta0 / gap` predicted at low squeezing; tends to `pi` as
/// `lambda -> 0`.
pub fn phi_lambda(lambda: f64) -> Result<f64> {
    check_unit_interval_open("lambda", lambda)?;
    if lambda == 0.0 {
        return Ok(std::f64::consts::PI);
    }
    let l2 = lambda * lambda;
    Ok(std::f64::consts::PI * ((4.0 / l2).ln() + 1.0) / ((8.0 / l2).ln() + EULER_GAMMA - 1.0))
}

/// Leading low-squeezing behavior of `delta0`.
pub fn delta0_low_squeezing(p: f64, lambda: f64) -> Result<f64> {
    check_probability("p", p)?;
    check_unit_interval_open("lambda", lambda)?;
    if p == 0.0 || p == 1.0 || lambda == 0.0 {
        return Ok(0.0);
    }
    let l2 = lambda * lambda;
    Ok((p - 1.0) * p * l2 * (-1.0 + (p * (1.0 - p)).ln() + 2.0 * lambda.ln()))
}

/// Leading low-squeezing behavior of the discord gap.
pub fn gap_low_squeezing(p: f64, lambda: f64) -> Result<f64> {
    check_probability("p", p)?;
    check_unit_interval_open("lambda", lambda)?;
    if p == 0.0 || p == 1.0 || lambda == 0.0 {
        return Ok(0.0);
    }
    let l2 = lambda * lambda;
    let bracket =
        1.0 - EULER_GAMMA - std::f64::consts::LN_2 + (p * (1.0 - p)).ln() + 2.0 * lambda.ln();
    Ok((p - 1.0) * p * l2 * bracket / std::f64::consts::PI)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GapReport {
    pub p: f64,
    pub lambda: f64,
    pub nu: f64,
    pub delta0: f64,
    /// Gaussian discord minus discord, i.e. the minimal Gaussian conditional entropy.
    pub gap: f64,
    pub gap_normalized: f64,
    pub phi_lambda: f64,
    pub delta0_approx: f64,
    pub gap_approx: f64,
    pub discord: f64,
    pub gaussian_discord: f64,
    pub argmin: GaussianPovmParams,
}

/// Non-Gaussianity, discord gap and their low-squeezing approximants.
///
/// The gap is taken as the minimal Gaussian conditional entropy; the
/// difference of the two discords is returned alongside and must agree.
pub fn discord_gap(
    p: f64,
    lambda: f64,
    grid: &QuadratureGrid,
    config: &OptimizerConfig,
) -> Result<GapReport> {
    let exact = discord_rho0(p, lambda)?;
    let nu = symplectic_eigenvalue_rho0(p, lambda)?;
    let delta0 = nongaussianity_delta0(p, lambda)?;
    let phi = phi_lambda(lambda)?;
    let gaussian = gaussian_discord_rho0(p, lambda, grid, config)?;
    let gap = gaussian.conditional_entropy.max(0.0);
    let by_difference = gaussian.value - exact.discord;
    let diff = (by_difference - gap).abs();
    if diff > 1e-10 {
        return Err(Error::CrossCheck {
            context: "discord gap vs difference of discords",
            lhs: gap,
            rhs: by_difference,
            diff,
            tolerance: 1e-10,
        });
    }
    Ok(GapReport {
        p,
        lambda,
        nu,
        delta0,
        gap,
        gap_normalized: phi * gap,
        phi_lambda: phi,
        delta0_approx: delta0_low_squeezing(p, lambda)?,
        gap_approx: gap_low_squeezing(p, lambda)?,
        discord: exact.discord,
        gaussian_discord: gaussian.value,
        argmin: gaussian.argmin,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    #[test]
    fn covariance_examples() {
        let vac = covariance_rho0(0.0, 0.7).unwrap();
        assert_eq!(vac.matrix(), Matrix4::identity());
        let tmsv = covariance_rho0(1.0, 0.5).unwrap();
        assert_abs_diff_eq!(tmsv.c, 5.0 / 3.0, epsilon = 1e-15);
        assert_abs_diff_eq!(tmsv.s, 4.0 / 3.0, epsilon = 1e-15);
        let mix = covariance_rho0(0.5, 0.5).unwrap();
        assert_abs_diff_eq!(mix.c, 4.0 / 3.0, epsilon = 1e-15);
        assert_abs_diff_eq!(mix.s, 2.0 / 3.0, epsilon = 1e-15);
        assert!(mix.is_physical());
    }

    #[test]
    fn delta0_example() {
        assert_abs_diff_eq!(
            symplectic_eigenvalue_rho0(0.5, 0.5).unwrap(),
            (4.0f64 / 3.0).sqrt(),
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(
            gaussian_reference_entropy(0.5, 0.5).unwrap(),
            0.5564773354,
            epsilon = 1e-9
        );
        assert_abs_diff_eq!(
            nongaussianity_delta0(0.5, 0.5).unwrap(),
            0.3107019687,
            epsilon = 1e-9
        );
        for &lambda in &[0.0, 0.3, 0.9] {
            assert_eq!(nongaussianity_delta0(0.0, lambda).unwrap(), 0.0);
            assert!(nongaussianity_delta0(1.0, lambda).unwrap().abs() < 1e-12);
        }
    }

    #[test]
    fn phi_lambda_values() {
        assert_abs_diff_eq!(phi_lambda(0.05).unwrap(), 3.4413031967, epsilon = 1e-9);
        assert_abs_diff_eq!(
            phi_lambda(1e-150).unwrap(),
            std::f64::consts::PI,
            epsilon = 1e-2
        );
        assert_abs_diff_eq!(
            delta0_low_squeezing(0.5, 0.05).unwrap(),
            0.0052360993,
            epsilon = 1e-10
        );
        assert_abs_diff_eq!(
            gap_low_squeezing(0.5, 0.05).unwrap(),
            0.0015215455,
            epsilon = 1e-10
        );
    }

    #[test]
    fn delta0_approximant_at_low_squeezing() {
        let full = nongaussianity_delta0(0.5, 0.05).unwrap();
        let approx = delta0_low_squeezing(0.5, 0.05).unwrap();
        assert!(((full - approx) / full).abs() < 0.02, "{full} vs {approx}");
    }

    #[test]
    fn delta0_is_concave_in_p_and_grows_with_lambda() {
        for &lambda in &[0.2, 0.5, 0.8] {
            let values: Vec<f64> = (0..=40)
                .map(|i| nongaussianity_delta0(i as f64 / 40.0, lambda).unwrap())
                .collect();
            for w in values.windows(3) {
                assert!(w[0] + w[2] - 2.0 * w[1] <= 1e-12);
            }
        }
        let mut prev = 0.0;
        for i in 1..20 {
            let d = nongaussianity_delta0(0.5, i as f64 / 20.0).unwrap();
            assert!(d > prev);
            prev = d;
        }
    }

    #[test]
    fn gap_report_at_moderate_squeezing() {
        let grid = QuadratureGrid::default();
        let config = OptimizerConfig::default();
        let zero = discord_gap(0.0, 0.5, &grid, &config).unwrap();
        assert_eq!((zero.delta0, zero.gap, zero.gap_approx), (0.0, 0.0, 0.0));
        let mid = discord_gap(0.5, 0.5, &grid, &config).unwrap();
        assert!(mid.gap > 1e-3);
        assert_abs_diff_eq!(mid.gaussian_discord - mid.discord, mid.gap, epsilon = 1e-10);
        // the gap closes towards infinite squeezing while delta0 diverges
        let high: Vec<GapReport> = [0.9, 0.95, 0.99]
            .iter()
            .map(|&l| discord_gap(0.5, l, &grid, &config).unwrap())
            .collect();
        for w in high.windows(2) {
            assert!(w[1].gap < w[0].gap);
            assert!(w[1].delta0 > w[0].delta0);
        }
        assert!(high[2].gap < mid.gap);
    }

    #[test]
    fn low_squeezing_gap_scale() {
        // The numerical gap follows p(1-p) lambda^2 [gamma + ln 2 - 1 - ln(p(1-p)) - 2 ln lambda],
        // i.e. pi times the tabulated approximant.
        let r = discord_gap(
            0.5,
            0.05,
            &QuadratureGrid::default(),
            &OptimizerConfig::default(),
        )
        .unwrap();
        let ratio = r.gap / r.gap_approx;
        assert!((ratio - std::f64::consts::PI).abs() < 0.01, "{ratio}");
        assert!((r.delta0 / r.gap - 1.0).abs() < 0.1);
    }

    proptest! {
        #[test]
        fn two_routes_to_nu_agree(p in 0.0f64..=1.0, lambda in 0.0f64..0.95) {
            let gamma = covariance_rho0(p, lambda).unwrap();
            let (lo, hi) = symplectic_eigenvalues(&gamma.matrix());
            let nu = symplectic_eigenvalue_rho0(p, lambda).unwrap();
            prop_assert!(nu >= 1.0);
            prop_assert!((lo - nu).abs() < 1e-6 * nu);
            prop_assert!((hi - nu).abs() < 1e-6 * nu);
            prop_assert!((gamma.nu_squared().sqrt() - nu).abs() < 1e-10 * nu);
            prop_assert!(nongaussianity_delta0(p, lambda).unwrap() >= 0.0);
        }
    }
}
