//! Constructors for the CV Werner family and its relatives.
//!
//! All states are built on a truncated Fock space. By default they are not
//! renormalized, so the trace deficit reports the truncation error directly.

pub mod io;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{check_domain, check_probability, check_unit_interval_open, Error, Result};
use crate::fock::{eig_spectrum, FockCutoff, OneModeState, TwoModeState, NEG_EIGENVALUE_TOL};

/// Mixing probability `p`, squeezing factor `lambda = tanh r` and thermal
/// factor `mu` of the state `p |psi(lambda)><psi(lambda)| + (1-p) th(mu) x th(mu)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WernerParams {
    pub p: f64,
    pub lambda: f64,
    pub mu: f64,
}

impl WernerParams {
    pub fn new(p: f64, lambda: f64, mu: f64) -> Result<Self> {
        check_probability("p", p)?;
        check_unit_interval_open("lambda", lambda)?;
        check_unit_interval_open("mu", mu)?;
        Ok(WernerParams { p, lambda, mu })
    }

    /// The `mu = 0` member: squeezed vacuum mixed with the vacuum.
    pub fn rho0(p: f64, lambda: f64) -> Result<Self> {
        Self::new(p, lambda, 0.0)
    }

    /// Squeezing parameter `r = artanh(lambda)`.
    pub fn squeezing(&self) -> f64 {
        self.lambda.atanh()
    }

    /// Mean thermal photon number `mu^2 / (1 - mu^2)` of each mode.
    pub fn mean_thermal_photons(&self) -> f64 {
        self.mu * self.mu / (1.0 - self.mu * self.mu)
    }
}

/// Trace lost by truncating the Werner state to `n_max` levels per mode.
pub fn truncation_deficit(params: &WernerParams, n_max: usize) -> f64 {
    let n = n_max as i32;
    let tmsv_tail = (params.lambda * params.lambda).powi(n);
    let thermal_tail = (params.mu * params.mu).powi(n);
    // 1 - (1 - x)^2 = x (2 - x)
    params.p * tmsv_tail + (1.0 - params.p) * thermal_tail * (2.0 - thermal_tail)
}

/// Smallest `n_max >= 2` whose truncation deficit is below `eps_tail`.
pub fn choose_cutoff(params: &WernerParams, eps_tail: f64) -> Result<FockCutoff> {
    check_domain("eps_tail", eps_tail, eps_tail > 0.0, "(0, inf)")?;
    check_unit_interval_open("lambda", params.lambda)?;
    check_unit_interval_open("mu", params.mu)?;
    // Start from the geometric-tail estimate and walk to the exact minimum.
    let x = (params.lambda * params.lambda).max(params.mu * params.mu);
    let mut n = if x > 0.0 {
        ((eps_tail / 2.0).ln() / x.ln()).floor().max(2.0) as usize
    } else {
        2
    };
    while n > 2 && truncation_deficit(params, n - 1) < eps_tail {
        n -= 1;
    }
    while truncation_deficit(params, n) >= eps_tail {
        n += 1;
    }
    FockCutoff::new(n.max(2))
}

/// How the working cutoff is picked: automatically from `eps_tail`, or a
/// fixed `n_max` for convergence studies.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Truncation {
    pub eps_tail: f64,
    pub cutoff_override: Option<usize>,
}

impl Default for Truncation {
    fn default() -> Self {
        Truncation {
            eps_tail: 1e-12,
            cutoff_override: None,
        }
    }
}

impl Truncation {
    pub fn with_eps(eps_tail: f64) -> Self {
        Truncation {
            eps_tail,
            cutoff_override: None,
        }
    }

    pub fn resolve(&self, params: &WernerParams) -> Result<FockCutoff> {
        match self.cutoff_override {
            Some(n) => FockCutoff::new(n),
            None => choose_cutoff(params, self.eps_tail),
        }
    }
}

/// Construction flags.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BuildOptions {
    /// Divide by the truncated trace. Off by default so the trace deficit
    /// stays visible.
    pub renormalize: bool,
}

fn finish(state: TwoModeState, options: BuildOptions) -> TwoModeState {
    if options.renormalize {
        let tr = state.trace();
        state.scaled(1.0 / tr)
    } else {
        state
    }
}

/// Two-mode squeezed vacuum `sqrt(1 - lambda^2) sum_n lambda^n |n, n>`.
#[derive(Debug, Clone, PartialEq)]
pub struct TmsvState {
    cutoff: FockCutoff,
    lambda: f64,
    /// Amplitudes on `|n, n>`.
    amplitudes: Vec<f64>,
}

impl TmsvState {
    pub fn cutoff(&self) -> FockCutoff {
        self.cutoff
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    /// Amplitude `<m, n|psi>`.
    pub fn amplitude(&self, m: usize, n: usize) -> f64 {
        if m == n {
            self.amplitudes[m]
        } else {
            0.0
        }
    }

    pub fn diagonal_amplitudes(&self) -> &[f64] {
        &self.amplitudes
    }

    pub fn norm_sq(&self) -> f64 {
        self.amplitudes.iter().map(|a| a * a).sum()
    }

    pub fn projector(&self) -> TwoModeState {
        let cutoff = self.cutoff;
        let mut state = TwoModeState::zeros(cutoff);
        for (m, &am) in self.amplitudes.iter().enumerate() {
            for (n, &an) in self.amplitudes.iter().enumerate() {
                state.add(
                    cutoff.index(m, m),
                    cutoff.index(n, n),
                    Complex64::new(am * an, 0.0),
                );
            }
        }
        state
    }
}

pub fn tmsv(lambda: f64, cutoff: FockCutoff) -> Result<TmsvState> {
    check_unit_interval_open("lambda", lambda)?;
    let norm = (1.0 - lambda * lambda).sqrt();
    let amplitudes = (0..cutoff.n_max())
        .map(|n| norm * lambda.powi(n as i32))
        .collect();
    Ok(TmsvState {
        cutoff,
        lambda,
        amplitudes,
    })
}

/// Thermal weights `(1 - mu^2) mu^(2n)` for `n < n_max`.
pub fn thermal_weights(mu: f64, n_max: usize) -> Vec<f64> {
    let x = mu * mu;
    (0..n_max).map(|n| (1.0 - x) * x.powi(n as i32)).collect()
}

pub fn thermal(mu: f64, cutoff: FockCutoff) -> Result<OneModeState> {
    check_unit_interval_open("mu", mu)?;
    Ok(OneModeState::from_diagonal(&thermal_weights(
        mu,
        cutoff.n_max(),
    )))
}

/// Entropy of the thermal state with factor `mu`, summed in closed form.
pub fn thermal_entropy(mu: f64) -> f64 {
    let x = mu * mu;
    if x == 0.0 {
        return 0.0;
    }
    -(1.0 - x).ln() / (1.0 - x) - x / (1.0 - x) * (x / (1.0 - x)).ln()
}

pub fn werner(params: &WernerParams, cutoff: FockCutoff, options: BuildOptions) -> TwoModeState {
    let n = cutoff.n_max();
    let lam2 = params.lambda * params.lambda;
    let th = thermal_weights(params.mu, n);
    let mut state = TwoModeState::zeros(cutoff);
    let tmsv_coeff = params.p * (1.0 - lam2);
    let powers: Vec<f64> = (0..n).map(|k| params.lambda.powi(k as i32)).collect();
    for m in 0..n {
        for k in 0..n {
            state.add(
                cutoff.index(m, m),
                cutoff.index(k, k),
                Complex64::new(tmsv_coeff * powers[m] * powers[k], 0.0),
            );
        }
    }
    let thermal_coeff = 1.0 - params.p;
    for m in 0..n {
        for k in 0..n {
            let i = cutoff.index(m, k);
            state.add(i, i, Complex64::new(thermal_coeff * th[m] * th[k], 0.0));
        }
    }
    finish(state, options)
}

/// Coefficients `q_mn` of a maximally correlated state `sum q_mn |mm><nn|`.
#[derive(Debug, Clone, PartialEq)]
pub struct MaxCorrCoeffs {
    q: DMatrix<Complex64>,
}

impl MaxCorrCoeffs {
    /// Validates Hermiticity, unit trace within `eps_tail` and positivity of `q`.
    pub fn new(q: DMatrix<Complex64>, eps_tail: f64) -> Result<Self> {
        let spectrum = eig_spectrum(&q).map_err(|err| match err {
            Error::InvalidSpectrum { value } => Error::NotPositive {
                min_eigenvalue: value,
            },
            other => other,
        })?;
        let min = spectrum.values().last().copied().unwrap_or(0.0);
        if min < -NEG_EIGENVALUE_TOL {
            return Err(Error::NotPositive {
                min_eigenvalue: min,
            });
        }
        let trace: f64 = q.diagonal().iter().map(|z| z.re).sum();
        if (trace - 1.0).abs() > eps_tail {
            return Err(Error::Truncation {
                context: "maximally correlated coefficients",
                deviation: (trace - 1.0).abs(),
                tolerance: eps_tail,
                n_max: q.nrows(),
            });
        }
        Ok(MaxCorrCoeffs { q })
    }

    /// `q_mn = sum_i p_i (1 - lambda_i^2) lambda_i^(m+n)`: a convex mixture of
    /// squeezed vacua.
    pub fn tmsv_mixture(components: &[(f64, f64)], n_max: usize, eps_tail: f64) -> Result<Self> {
        for &(p, lambda) in components {
            check_probability("p_i", p)?;
            check_unit_interval_open("lambda_i", lambda)?;
        }
        let q = DMatrix::from_fn(n_max, n_max, |m, n| {
            let v: f64 = components
                .iter()
                .map(|&(p, l)| p * (1.0 - l * l) * l.powi((m + n) as i32))
                .sum();
            Complex64::new(v, 0.0)
        });
        Self::new(q, eps_tail)
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.q
    }
}

pub fn maximally_correlated(q: &MaxCorrCoeffs, cutoff: FockCutoff) -> Result<TwoModeState> {
    let n = q.q.nrows();
    if n > cutoff.n_max() {
        return Err(Error::Domain {
            name: "q dimension",
            value: n as f64,
            domain: "<= n_max",
        });
    }
    let mut state = TwoModeState::zeros(cutoff);
    for m in 0..n {
        for k in 0..n {
            state.add(cutoff.index(m, m), cutoff.index(k, k), q.q[(m, k)]);
        }
    }
    Ok(state)
}

/// Werner parameters whose partial transpose is the PPT state built by
/// [`ppt_werner`]: `p = (1 - lambda)/2`, `mu = sqrt(lambda)`.
pub fn ppt_werner_params(lambda: f64) -> Result<WernerParams> {
    check_unit_interval_open("lambda", lambda)?;
    WernerParams::new((1.0 - lambda) / 2.0, lambda, lambda.sqrt())
}

/// Normalization `(1 - lambda^2)(1 - lambda)/2` of the PPT state.
pub fn ppt_norm(lambda: f64) -> f64 {
    (1.0 - lambda * lambda) * (1.0 - lambda) / 2.0
}

/// `N sum_{m,n} lambda^(m+n) (|n,m><m,n| + |m,n><m,n|)`.
pub fn ppt_werner(lambda: f64, cutoff: FockCutoff, options: BuildOptions) -> Result<TwoModeState> {
    check_unit_interval_open("lambda", lambda)?;
    let norm = ppt_norm(lambda);
    let n = cutoff.n_max();
    let mut state = TwoModeState::zeros(cutoff);
    for m in 0..n {
        for k in 0..n {
            let w = Complex64::new(norm * lambda.powi((m + k) as i32), 0.0);
            state.add(cutoff.index(k, m), cutoff.index(m, k), w);
            let i = cutoff.index(m, k);
            state.add(i, i, w);
        }
    }
    Ok(finish(state, options))
}

/// Closed-form nonzero spectrum of the PPT state: `2N lambda^(2m)` and
/// `2N lambda^(m+n)` for `m > n`, all indices below `n_max`.
pub fn ppt_spectrum_closed_form(lambda: f64, n_max: usize) -> Vec<f64> {
    let two_n = 2.0 * ppt_norm(lambda);
    let mut values = Vec::with_capacity(n_max * (n_max + 1) / 2);
    for m in 0..n_max {
        values.push(two_n * lambda.powi(2 * m as i32));
        for k in 0..m {
            values.push(two_n * lambda.powi((m + k) as i32));
        }
    }
    values.sort_by(|a, b| b.total_cmp(a));
    values
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::Mode;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn cut(n: usize) -> FockCutoff {
        FockCutoff::new(n).unwrap()
    }

    #[test]
    fn cutoff_examples() {
        let vac = WernerParams::new(1.0, 0.0, 0.0).unwrap();
        assert_eq!(choose_cutoff(&vac, 1e-12).unwrap().n_max(), 2);

        let half = WernerParams::new(0.5, 0.5, 0.5).unwrap();
        let n = choose_cutoff(&half, 1e-12).unwrap().n_max();
        assert!(n >= 20);
        assert!(truncation_deficit(&half, n) < 1e-12);
        assert!(truncation_deficit(&half, n - 1) >= 1e-12);

        let strong = WernerParams::new(1.0, 0.9, 0.0).unwrap();
        assert!(choose_cutoff(&strong, 1e-10).unwrap().n_max() >= 110);

        assert!(choose_cutoff(&half, 0.0).is_err());
        assert!(WernerParams::new(0.5, 1.0, 0.0).is_err());
        assert!(WernerParams::new(0.5, 0.5, 1.0).is_err());
        assert!(WernerParams::new(1.5, 0.5, 0.0).is_err());
    }

    #[test]
    fn deficit_matches_constructed_trace() {
        let params = WernerParams::new(0.3, 0.7, 0.6).unwrap();
        for n in [3, 8, 20] {
            let rho = werner(&params, cut(n), BuildOptions::default());
            assert_abs_diff_eq!(
                1.0 - rho.trace(),
                truncation_deficit(&params, n),
                epsilon = 1e-14
            );
        }
        let renorm = werner(&params, cut(5), BuildOptions { renormalize: true });
        assert_abs_diff_eq!(renorm.trace(), 1.0, epsilon = 1e-14);
    }

    #[test]
    fn tmsv_amplitudes() {
        let vac = tmsv(0.0, cut(4)).unwrap();
        assert_eq!(vac.diagonal_amplitudes(), &[1.0, 0.0, 0.0, 0.0]);
        let psi = tmsv(0.5, cut(30)).unwrap();
        assert_abs_diff_eq!(psi.amplitude(1, 1), 0.433013, epsilon = 1e-6);
        assert_eq!(psi.amplitude(1, 2), 0.0);
        assert_abs_diff_eq!(psi.norm_sq(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn tmsv_reduced_state_is_thermal() {
        let c = cut(40);
        let reduced = tmsv(0.5, c).unwrap().projector().partial_trace(Mode::A);
        let th = thermal(0.5, c).unwrap();
        let diff = (reduced.matrix() - th.matrix())
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        assert!(diff < 1e-12);
        // <n> = lambda^2 / (1 - lambda^2)
        let mean: f64 = reduced
            .diagonal()
            .iter()
            .enumerate()
            .map(|(n, w)| n as f64 * w)
            .sum();
        assert_abs_diff_eq!(mean, 0.25 / 0.75, epsilon = 1e-12);
    }

    #[test]
    fn thermal_examples() {
        assert_eq!(
            thermal(0.0, cut(3)).unwrap().diagonal(),
            vec![1.0, 0.0, 0.0]
        );
        let th = thermal(0.5, cut(3)).unwrap().diagonal();
        assert_abs_diff_eq!(th[0], 0.75, epsilon = 1e-15);
        assert_abs_diff_eq!(th[1], 0.1875, epsilon = 1e-15);
        let big = thermal(0.5, cut(60)).unwrap();
        assert_abs_diff_eq!(
            big.entropy().unwrap(),
            thermal_entropy(0.5),
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(thermal_entropy(0.5), 0.7497801929, epsilon = 1e-9);
    }

    #[test]
    fn werner_limits() {
        let c = cut(30);
        let product = werner(
            &WernerParams::new(0.0, 0.5, 0.4).unwrap(),
            c,
            BuildOptions::default(),
        );
        let th = thermal_weights(0.4, 30);
        assert_abs_diff_eq!(
            product.element((2, 3), (2, 3)).re,
            th[2] * th[3],
            epsilon = 1e-16
        );
        assert_eq!(product.element((1, 1), (2, 2)).re, 0.0);

        let pure = werner(
            &WernerParams::new(1.0, 0.5, 0.3).unwrap(),
            c,
            BuildOptions::default(),
        );
        assert!(pure.entropy().unwrap().abs() < 1e-10);

        let rho0 = werner(
            &WernerParams::rho0(0.4, 0.5).unwrap(),
            c,
            BuildOptions::default(),
        );
        let psi = tmsv(0.5, c).unwrap();
        assert_abs_diff_eq!(
            rho0.element((0, 0), (0, 0)).re,
            0.4 * psi.amplitude(0, 0).powi(2) + 0.6,
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(
            rho0.element((1, 1), (2, 2)).re,
            0.4 * psi.amplitude(1, 1) * psi.amplitude(2, 2),
            epsilon = 1e-15
        );
    }

    #[test]
    fn werner_reduced_state_is_thermal_mixture() {
        let params = WernerParams::new(0.3, 0.6, 0.5).unwrap();
        let c = choose_cutoff(&params, 1e-13).unwrap();
        let reduced = werner(&params, c, BuildOptions::default()).partial_trace(Mode::A);
        let a = thermal_weights(0.6, c.n_max());
        let b = thermal_weights(0.5, c.n_max());
        for (n, d) in reduced.diagonal().iter().enumerate() {
            assert_abs_diff_eq!(*d, 0.3 * a[n] + 0.7 * b[n], epsilon = 1e-13);
        }
        assert!(reduced.is_diagonal(0.0));
    }

    #[test]
    fn rho0_partial_transpose_is_negative() {
        let rho0 = werner(
            &WernerParams::rho0(0.2, 0.3).unwrap(),
            cut(20),
            BuildOptions::default(),
        );
        assert!(rho0.partial_transpose(Mode::A).min_eigenvalue().unwrap() < 0.0);
    }

    #[test]
    fn maximally_correlated_examples() {
        let c = cut(40);
        let lambda = 0.5;
        let q = MaxCorrCoeffs::tmsv_mixture(&[(1.0, lambda)], 40, 1e-12).unwrap();
        let rho_q = maximally_correlated(&q, c).unwrap();
        let proj = tmsv(lambda, c).unwrap().projector();
        assert!(rho_q.max_abs_diff(&proj) < 1e-15);

        let q = MaxCorrCoeffs::tmsv_mixture(&[(0.3, 0.2), (0.7, 0.6)], 40, 1e-12).unwrap();
        let rho_q = maximally_correlated(&q, c).unwrap();
        rho_q.validate(1e-12).unwrap();
        // Photon counting on B leaves A in the same Fock state.
        for m in 0..5 {
            let block = rho_q.conditional_block_b(m);
            for i in 0..40 {
                for j in 0..40 {
                    if (i, j) != (m, m) {
                        assert_eq!(block[(i, j)].norm(), 0.0);
                    }
                }
            }
            assert!(block[(m, m)].re > 0.0);
        }

        let mut bad = DMatrix::from_element(2, 2, Complex64::new(0.5, 0.0));
        bad[(0, 1)] = Complex64::new(0.9, 0.0);
        bad[(1, 0)] = Complex64::new(0.9, 0.0);
        assert!(matches!(
            MaxCorrCoeffs::new(bad, 1e-12),
            Err(Error::NotPositive { .. })
        ));
    }

    #[test]
    fn ppt_werner_examples() {
        let vac = ppt_werner(0.0, cut(3), BuildOptions::default()).unwrap();
        assert_eq!(vac.nnz(), 1);
        assert_abs_diff_eq!(vac.element((0, 0), (0, 0)).re, 1.0, epsilon = 1e-15);

        let lambda = 0.5;
        let params = ppt_werner_params(lambda).unwrap();
        let c = choose_cutoff(&params, 1e-13).unwrap();
        let rho_t = ppt_werner(lambda, c, BuildOptions::default()).unwrap();
        let from_werner = werner(&params, c, BuildOptions::default()).partial_transpose(Mode::A);
        assert!(rho_t.max_abs_diff(&from_werner) < 1e-12);

        let numeric: Vec<f64> = rho_t.eigenvalues().unwrap();
        let closed = ppt_spectrum_closed_form(lambda, c.n_max());
        for (i, v) in numeric.iter().enumerate() {
            let expected = closed.get(i).copied().unwrap_or(0.0);
            assert!((v - expected).abs() < 1e-10, "{i}: {v} vs {expected}");
        }
        assert!(numeric.last().copied().unwrap() >= -1e-10);
    }

    proptest! {
        #[test]
        fn werner_is_symmetric_and_physical(p in 0.0f64..=1.0, lambda in 0.0f64..0.8, mu in 0.0f64..0.8) {
            let params = WernerParams::new(p, lambda, mu).unwrap();
            let c = choose_cutoff(&params, 1e-12).unwrap();
            let rho = werner(&params, c, BuildOptions::default());
            prop_assert!(rho.max_abs_diff(&rho.swap_modes()) <= 1e-14);
            prop_assert!((rho.trace() - 1.0).abs() <= 2e-12);
            prop_assert!(rho.min_eigenvalue().unwrap() >= -1e-10);
        }

        #[test]
        fn ppt_state_is_physical(lambda in 0.0f64..0.8) {
            let c = choose_cutoff(&ppt_werner_params(lambda).unwrap(), 1e-12).unwrap();
            let rho = ppt_werner(lambda, c, BuildOptions::default()).unwrap();
            prop_assert!((rho.trace() - 1.0).abs() <= 2e-12);
            prop_assert!(rho.min_eigenvalue().unwrap() >= -1e-10);
        }
    }
}
