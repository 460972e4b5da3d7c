//! Gaussian measurements on mode B of `rho0` and the resulting Gaussian
//! discord.
//!
//! The POVM elements are `|alpha, xi><alpha, xi| / pi` with
//! `|alpha, xi> = D(alpha) S(xi) |0>`, `xi = t e^{i 2 phi}` and
//! `S(xi) = exp[(xi a^dag^2 - xi^* a^2)/2]`. Heterodyne is `t = 0`; homodyne is
//! the `t -> inf` limit, evaluated at the finite proxy [`HOMODYNE_PROXY_T`].
//!
//! Conditioned on outcome `alpha`, mode A is left in the mixture
//! `zeta1 |beta, s e^{-i2phi}><...| + zeta2 |0><0|`, whose entropy follows
//! from the two-component mixture spectrum. Averaging it over the outcome
//! density `q(alpha)` gives the Gaussian conditional entropy.

mod optimize;
mod quadrature;

pub use optimize::{
    gaussian_discord_rho0, golden_section_minimize, GaussianDiscord, OptimizerConfig,
};
pub use quadrature::QuadratureGrid;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{check_domain, check_probability, check_unit_interval_open, Error, Result};
use crate::fock::{entropy_term, mixture_eigenvalues};

/// Measurement squeezing used in place of the homodyne limit; `e^{-2t}` is
/// below `4e-11` here.
pub const HOMODYNE_PROXY_T: f64 = 12.0;

/// Default tolerance on the quadrature normalization `int q d^2alpha = 1`.
pub const DEFAULT_EPS_INT: f64 = 1e-7;

/// Squeezing `t >= 0` and phase `phi` in `[0, pi)` of a Gaussian POVM.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaussianPovmParams {
    pub t: f64,
    pub phi: f64,
}

impl GaussianPovmParams {
    pub fn new(t: f64, phi: f64) -> Result<Self> {
        check_domain("t", t, t >= 0.0, "[0, inf)")?;
        check_domain(
            "phi",
            phi,
            (0.0..std::f64::consts::PI).contains(&phi),
            "[0, pi)",
        )?;
        Ok(GaussianPovmParams { t, phi })
    }

    pub fn heterodyne() -> Self {
        GaussianPovmParams { t: 0.0, phi: 0.0 }
    }

    pub fn homodyne_proxy(phi: f64) -> Result<Self> {
        Self::new(HOMODYNE_PROXY_T, phi)
    }
}

/// `tanh t` together with `1 - tanh t` and `1 + tanh t` evaluated without
/// cancellation.
#[derive(Debug, Clone, Copy)]
struct Tanh {
    value: f64,
    one_minus: f64,
    one_plus: f64,
    ln_cosh: f64,
}

impl Tanh {
    fn new(t: f64) -> Self {
        let e = (-2.0 * t).exp();
        Tanh {
            value: (1.0 - e) / (1.0 + e),
            one_minus: 2.0 * e / (1.0 + e),
            one_plus: 2.0 / (1.0 + e),
            ln_cosh: t + e.ln_1p() - std::f64::consts::LN_2,
        }
    }
}

/// Squeezing, displacement and auxiliary factors of the conditional state of
/// mode A after the outcome `alpha` on the squeezed-vacuum component.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConditionalGaussianParams {
    pub s: f64,
    pub beta: Complex64,
    pub z_plus: f64,
    pub z_minus: f64,
}

/// `cosh 2r` and `sinh 2r` from `lambda = tanh r`.
fn hyperbolic_2r(lambda: f64) -> (f64, f64) {
    let l2 = lambda * lambda;
    ((1.0 + l2) / (1.0 - l2), 2.0 * lambda / (1.0 - l2))
}

pub fn conditional_params(
    lambda: f64,
    povm: &GaussianPovmParams,
    alpha: Complex64,
) -> Result<ConditionalGaussianParams> {
    check_unit_interval_open("lambda", lambda)?;
    Ok(conditional_params_unchecked(lambda, povm, alpha))
}

fn conditional_params_unchecked(
    lambda: f64,
    povm: &GaussianPovmParams,
    alpha: Complex64,
) -> ConditionalGaussianParams {
    let (cosh2r, sinh2r) = hyperbolic_2r(lambda);
    let e = (-2.0 * povm.t).exp();
    // numerator and denominator multiplied by e^{-2t}
    let s = 0.5 * ((e + cosh2r) / (cosh2r * e + 1.0)).ln();
    let z_plus = e / (cosh2r * e + 1.0);
    let z_minus = 1.0 / (cosh2r + e);
    let phase = Complex64::from_polar(1.0, -2.0 * povm.phi);
    let beta =
        0.5 * sinh2r * ((z_plus + z_minus) * alpha.conj() + (z_plus - z_minus) * phase * alpha);
    ConditionalGaussianParams {
        s: s.max(0.0),
        beta,
        z_plus,
        z_minus,
    }
}

/// `ln |<0| alpha, t e^{i 2 phi}>|^2`.
pub fn ln_vacuum_overlap_sq(alpha: Complex64, t: f64, phi: f64) -> f64 {
    let th = Tanh::new(t);
    let rotated = Complex64::from_polar(1.0, 2.0 * phi) * alpha.conj() * alpha.conj();
    -alpha.norm_sqr() + th.value * rotated.re - th.ln_cosh
}

/// `|<0| beta, s e^{-i 2 phi}>|^2`, the overlap of the two components of the
/// conditional state.
pub fn conditional_overlap_sq(params: &ConditionalGaussianParams, phi: f64) -> f64 {
    ln_vacuum_overlap_sq(params.beta, params.s, -phi).exp()
}

/// Outcome weights: `u = <alpha,xi| th(lambda) |alpha,xi>`,
/// `v = |<0|alpha,xi>|^2` and the density `q = [p u + (1-p) v] / pi`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeightDensities {
    pub u: f64,
    pub v: f64,
    pub q: f64,
}

/// Gaussian envelopes of `u` and `v` in the frame rotated by `phi`, where
/// both are `exp(-cx x^2 - cy y^2)` times a prefactor.
#[derive(Debug, Clone, Copy)]
struct Envelopes {
    ln_u_prefactor: f64,
    u_cx: f64,
    u_cy: f64,
    ln_v_prefactor: f64,
    v_cx: f64,
    v_cy: f64,
}

impl Envelopes {
    fn new(lambda: f64, t: f64) -> Self {
        let th = Tanh::new(t);
        let l2 = lambda * lambda;
        let minus = 1.0 - l2 * th.value;
        let plus = 1.0 + l2 * th.value;
        // 1 - lambda^4 tanh^2 t = (1 - lambda^2 tanh t)(1 + lambda^2 tanh t)
        let ln_u_prefactor = (1.0 - l2).ln() - th.ln_cosh - 0.5 * (minus.ln() + plus.ln());
        Envelopes {
            ln_u_prefactor,
            u_cx: (1.0 - l2) * th.one_minus / minus,
            u_cy: (1.0 - l2) * th.one_plus / plus,
            ln_v_prefactor: -th.ln_cosh,
            v_cx: th.one_minus,
            v_cy: th.one_plus,
        }
    }

    /// `(ln u, ln v)` at frame coordinates `(x, y)`.
    #[inline]
    fn ln_weights(&self, x: f64, y: f64) -> (f64, f64) {
        let (x2, y2) = (x * x, y * y);
        (
            self.ln_u_prefactor - self.u_cx * x2 - self.u_cy * y2,
            self.ln_v_prefactor - self.v_cx * x2 - self.v_cy * y2,
        )
    }
}

/// Weight densities at the outcome `alpha`.
///
/// The exponents are evaluated along the principal axes of the POVM (the
/// frame rotated by `phi`), which is algebraically identical to the
/// `|alpha|^2`, `Re(e^{i2phi} alpha*^2)` form but avoids cancellation at large
/// `t`. Prefactors are kept in log form.
pub fn weight_densities(
    p: f64,
    lambda: f64,
    povm: &GaussianPovmParams,
    alpha: Complex64,
) -> Result<WeightDensities> {
    check_probability("p", p)?;
    check_unit_interval_open("lambda", lambda)?;
    let env = Envelopes::new(lambda, povm.t);
    let frame = Complex64::from_polar(1.0, -povm.phi) * alpha;
    let (ln_u, ln_v) = env.ln_weights(frame.re, frame.im);
    let (u, v) = (ln_u.exp(), ln_v.exp());
    Ok(WeightDensities {
        u,
        v,
        q: (p * u + (1.0 - p) * v) / std::f64::consts::PI,
    })
}

/// One evaluation of the integrand: weight fraction of the squeezed-vacuum
/// component and the entropy of the conditional state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConditionalPoint {
    pub zeta1: f64,
    pub zeta2: f64,
    pub overlap_sq: f64,
    pub entropy: f64,
}

/// Precomputed per-`(p, lambda, povm)` data for fast integrand evaluation.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Integrand {
    p: f64,
    lambda: f64,
    povm: GaussianPovmParams,
    env: Envelopes,
}

impl Integrand {
    pub(crate) fn new(p: f64, lambda: f64, povm: GaussianPovmParams) -> Self {
        Integrand {
            p,
            lambda,
            povm,
            env: Envelopes::new(lambda, povm.t),
        }
    }

    /// Mixture weight and principal-axis widths `1/sqrt(cx)`, `1/sqrt(cy)` of
    /// the `u` and `v` envelopes.
    pub(crate) fn components(&self) -> [(f64, f64, f64); 2] {
        let env = &self.env;
        [
            (self.p, 1.0 / env.u_cx.sqrt(), 1.0 / env.u_cy.sqrt()),
            (1.0 - self.p, 1.0 / env.v_cx.sqrt(), 1.0 / env.v_cy.sqrt()),
        ]
    }

    pub(crate) fn phi(&self) -> f64 {
        self.povm.phi
    }

    /// `(ln u, ln v)` at frame coordinates.
    #[inline]
    pub(crate) fn ln_weights(&self, x: f64, y: f64) -> (f64, f64) {
        self.env.ln_weights(x, y)
    }

    /// Conditional-state entropy at the lab-frame outcome `alpha`, with the
    /// already computed `ln u`, `ln v` at that point.
    #[inline]
    pub(crate) fn point(&self, alpha: Complex64, ln_u: f64, ln_v: f64) -> ConditionalPoint {
        let p = self.p;
        if p == 0.0 || p == 1.0 {
            return ConditionalPoint {
                zeta1: p,
                zeta2: 1.0 - p,
                overlap_sq: 1.0,
                entropy: 0.0,
            };
        }
        // zeta1 = p u / (p u + (1-p) v), in log form
        let log_ratio = ((1.0 - p).ln() + ln_v) - (p.ln() + ln_u);
        let zeta1 = 1.0 / (1.0 + log_ratio.exp());
        let zeta2 = 1.0 / (1.0 + (-log_ratio).exp());
        let cond = conditional_params_unchecked(self.lambda, &self.povm, alpha);
        let ln_overlap = ln_vacuum_overlap_sq(cond.beta, cond.s, -self.povm.phi).min(0.0);
        let one_minus_overlap = -ln_overlap.exp_m1();
        let (nu1, nu2) = mixture_eigenvalues(zeta1 * zeta2, one_minus_overlap);
        ConditionalPoint {
            zeta1,
            zeta2,
            overlap_sq: ln_overlap.exp(),
            entropy: entropy_term(nu1) + entropy_term(nu2),
        }
    }
}

/// Conditional-state quantities at the outcome `alpha`.
pub fn conditional_point(
    p: f64,
    lambda: f64,
    povm: &GaussianPovmParams,
    alpha: Complex64,
) -> Result<ConditionalPoint> {
    check_probability("p", p)?;
    check_unit_interval_open("lambda", lambda)?;
    let integrand = Integrand::new(p, lambda, *povm);
    let frame = Complex64::from_polar(1.0, -povm.phi) * alpha;
    let (ln_u, ln_v) = integrand.ln_weights(frame.re, frame.im);
    Ok(integrand.point(alpha, ln_u, ln_v))
}

/// Result of integrating over the outcome plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaussianConditionalEntropy {
    pub entropy: f64,
    /// `int q d^2alpha` on the same grid.
    pub normalization: f64,
}

/// Gaussian conditional entropy `int q(alpha) S(rho_A|alpha) d^2alpha`.
///
/// Refuses to return a value when the grid does not reproduce
/// `int q d^2alpha = 1` within `eps_int`.
pub fn conditional_entropy_gaussian(
    p: f64,
    lambda: f64,
    povm: &GaussianPovmParams,
    grid: &QuadratureGrid,
    eps_int: f64,
) -> Result<f64> {
    Ok(conditional_entropy_gaussian_detailed(p, lambda, povm, grid, eps_int)?.entropy)
}

pub fn conditional_entropy_gaussian_detailed(
    p: f64,
    lambda: f64,
    povm: &GaussianPovmParams,
    grid: &QuadratureGrid,
    eps_int: f64,
) -> Result<GaussianConditionalEntropy> {
    check_probability("p", p)?;
    check_unit_interval_open("lambda", lambda)?;
    check_domain("eps_int", eps_int, eps_int > 0.0, "(0, inf)")?;
    let integrand = Integrand::new(p, lambda, *povm);
    let result = grid.integrate(&integrand);
    let deviation = (result.normalization - 1.0).abs();
    if deviation > eps_int {
        return Err(Error::QuadratureNormalization {
            integral: result.normalization,
            deviation,
            eps_int,
            radial: grid.radial_nodes(),
            angular: grid.angular_nodes(),
            r_max: grid.r_max(),
        });
    }
    Ok(result)
}

/// Monte-Carlo estimate of the Gaussian conditional entropy with its
/// standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MonteCarloEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub samples: usize,
}

/// Samples outcomes directly from `q(alpha)` (a two-component Gaussian
/// mixture) and averages the conditional entropy. Independent of the
/// quadrature grid; used to cross-check it.
pub fn monte_carlo_conditional_entropy(
    p: f64,
    lambda: f64,
    povm: &GaussianPovmParams,
    samples: usize,
    seed: u64,
) -> Result<MonteCarloEstimate> {
    check_probability("p", p)?;
    check_unit_interval_open("lambda", lambda)?;
    check_domain("samples", samples as f64, samples >= 2, ">= 2")?;
    let integrand = Integrand::new(p, lambda, *povm);
    let env = integrand.env;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rotation = Complex64::from_polar(1.0, povm.phi);
    let (mut sum, mut sum_sq) = (0.0, 0.0);
    for _ in 0..samples {
        // u/pi and v/pi are normalized Gaussians with variance 1/(2c) per axis.
        let (cx, cy) = if rng.random::<f64>() < p {
            (env.u_cx, env.u_cy)
        } else {
            (env.v_cx, env.v_cy)
        };
        let gx: f64 = rng.sample(StandardNormal);
        let gy: f64 = rng.sample(StandardNormal);
        let (x, y) = (gx / (2.0 * cx).sqrt(), gy / (2.0 * cy).sqrt());
        let alpha = rotation * Complex64::new(x, y);
        let (ln_u, ln_v) = env.ln_weights(x, y);
        let s = integrand.point(alpha, ln_u, ln_v).entropy;
        sum += s;
        sum_sq += s * s;
    }
    let n = samples as f64;
    let mean = sum / n;
    let var = (sum_sq / n - mean * mean).max(0.0) * n / (n - 1.0);
    Ok(MonteCarloEstimate {
        mean,
        std_error: (var / n).sqrt(),
        samples,
    })
}
