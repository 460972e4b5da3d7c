//! Closed-form results for the `mu = 0` family
//! `rho0 = p |psi(lambda)><psi(lambda)| + (1-p) |00><00|`.
//!
//! Photon counting on either mode projects the other mode onto the same Fock
//! state, so the conditional entropy vanishes and the discord reduces to
//! `S(rho0_B) - S(rho0)`. The same measurement saturates the AMID and the
//! relative entropy of quantumness, which therefore coincide with it.
//!
//! Every closed form has a truncated-matrix counterpart (`*_truncated`) used
//! as an independent check.

use serde::{Deserialize, Serialize};

use crate::error::{check_probability, check_unit_interval_open, Result};
use crate::fock::{entropy_term, shannon_entropy, FockCutoff, Mode, Spectrum, TwoModeState};
use crate::states::{werner, BuildOptions, WernerParams};

fn check(p: f64, lambda: f64) -> Result<()> {
    check_probability("p", p)?;
    check_unit_interval_open("lambda", lambda)
}

/// Nonzero eigenvalues `(1 +- sqrt(1 - 4p(1-p)lambda^2)) / 2` of `rho0`.
pub fn rho0_global_eigenvalues(p: f64, lambda: f64) -> Result<(f64, f64)> {
    check(p, lambda)?;
    Ok(crate::fock::mixture_eigenvalues(
        p * (1.0 - p),
        lambda * lambda,
    ))
}

pub fn global_entropy_rho0(p: f64, lambda: f64) -> Result<f64> {
    let (a, b) = rho0_global_eigenvalues(p, lambda)?;
    Ok(entropy_term(a) + entropy_term(b))
}

/// Eigenvalues of the reduced state: `1 - p lambda^2` followed by
/// `p (1 - lambda^2) lambda^(2n)` for `0 < n < n_max`.
pub fn reduced_spectrum_rho0(p: f64, lambda: f64, n_max: usize) -> Result<Spectrum> {
    check(p, lambda)?;
    let lam2 = lambda * lambda;
    let mut values = Vec::with_capacity(n_max);
    values.push(1.0 - p * lam2);
    values.extend((1..n_max).map(|n| p * (1.0 - lam2) * lam2.powi(n as i32)));
    Spectrum::new(values)
}

pub fn reduced_entropy_rho0(p: f64, lambda: f64) -> Result<f64> {
    check(p, lambda)?;
    if p == 0.0 || lambda == 0.0 {
        return Ok(0.0);
    }
    let lam2 = lambda * lambda;
    let pl = p * lam2;
    let s = -((1.0 - pl).ln()
        + pl * (p * (1.0 - lam2) / (1.0 - pl)).ln()
        + 2.0 * pl * lambda.ln() / (1.0 - lam2));
    Ok(s.max(0.0))
}

/// Spectra, entropies and discord of `rho0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rho0Report {
    pub p: f64,
    pub lambda: f64,
    pub nu1: f64,
    pub nu2: f64,
    pub s_global: f64,
    pub s_reduced: f64,
    /// Conditional entropy under photon counting; zero for this family.
    pub photon_counting_conditional_entropy: f64,
    pub discord: f64,
}

pub fn discord_rho0(p: f64, lambda: f64) -> Result<Rho0Report> {
    let (nu1, nu2) = rho0_global_eigenvalues(p, lambda)?;
    let s_global = entropy_term(nu1) + entropy_term(nu2);
    let s_reduced = reduced_entropy_rho0(p, lambda)?;
    Ok(Rho0Report {
        p,
        lambda,
        nu1,
        nu2,
        s_global,
        s_reduced,
        photon_counting_conditional_entropy: 0.0,
        discord: (s_reduced - s_global).max(0.0),
    })
}

pub fn rho0_state(p: f64, lambda: f64, cutoff: FockCutoff) -> Result<TwoModeState> {
    Ok(werner(
        &WernerParams::rho0(p, lambda)?,
        cutoff,
        BuildOptions::default(),
    ))
}

/// `S(rho0)` by diagonalizing the truncated matrix.
pub fn global_entropy_rho0_truncated(p: f64, lambda: f64, cutoff: FockCutoff) -> Result<f64> {
    rho0_state(p, lambda, cutoff)?.entropy()
}

/// `S(rho0_B)` by diagonalizing the partial trace of the truncated matrix.
pub fn reduced_entropy_rho0_truncated(p: f64, lambda: f64, cutoff: FockCutoff) -> Result<f64> {
    rho0_state(p, lambda, cutoff)?
        .partial_trace(Mode::A)
        .entropy()
}

/// `S(rho_B) - S(rho)` of the truncated `rho0`.
pub fn discord_rho0_truncated(p: f64, lambda: f64, cutoff: FockCutoff) -> Result<f64> {
    let rho = rho0_state(p, lambda, cutoff)?;
    Ok(rho.partial_trace(Mode::A).entropy()? - rho.entropy()?)
}

/// Marginal and joint Shannon entropies of the photon-number statistics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhotonCountingEntropies {
    pub h_a: f64,
    pub h_b: f64,
    pub h_ab: f64,
}

impl PhotonCountingEntropies {
    pub fn mutual_information(&self) -> f64 {
        self.h_a + self.h_b - self.h_ab
    }
}

pub fn photon_counting_entropies(rho: &TwoModeState) -> Result<PhotonCountingEntropies> {
    let n = rho.n_max();
    let joint = rho.joint_photon_distribution();
    let mut p_a = vec![0.0; n];
    let mut p_b = vec![0.0; n];
    for (i, &w) in joint.iter().enumerate() {
        let (m, k) = rho.cutoff().labels(i);
        p_a[m] += w;
        p_b[k] += w;
    }
    Ok(PhotonCountingEntropies {
        h_a: shannon_entropy(&p_a)?,
        h_b: shannon_entropy(&p_b)?,
        h_ab: shannon_entropy(&joint)?,
    })
}

/// Classical mutual information of the joint photon-number distribution.
pub fn classical_mutual_info_photon_counting(rho: &TwoModeState) -> Result<f64> {
    Ok(photon_counting_entropies(rho)?.mutual_information())
}

/// Discord, AMID and relative entropy of quantumness of `rho0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NonclassicalityTriple {
    pub discord: f64,
    pub amid: f64,
    pub req: f64,
}

/// Discord from the closed forms; AMID as `I_q - I(p_AB)` and REQ as
/// `H(p_AB) - S(rho0)`, both from the truncated state under photon counting.
pub fn nonclassicality_triple_rho0(
    p: f64,
    lambda: f64,
    cutoff: FockCutoff,
) -> Result<NonclassicalityTriple> {
    let discord = discord_rho0(p, lambda)?.discord;
    let rho = rho0_state(p, lambda, cutoff)?;
    let s_global = rho.entropy()?;
    let s_a = rho.partial_trace(Mode::B).entropy()?;
    let s_b = rho.partial_trace(Mode::A).entropy()?;
    let counts = photon_counting_entropies(&rho)?;
    let quantum_mi = s_a + s_b - s_global;
    Ok(NonclassicalityTriple {
        discord,
        amid: quantum_mi - counts.mutual_information(),
        req: counts.h_ab - s_global,
    })
}
