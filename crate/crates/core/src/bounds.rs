//! Upper and lower bounds on the discord of general Werner states, the
//! measurement-induced disturbance, and the separability classification of
//! the `lambda = mu^4` family.
//!
//! Everything is evaluated with photon counting on mode B, which is a
//! measurement in the eigenbasis of the (Fock-diagonal) reduced state.

use std::fmt;

use nalgebra::{DMatrix, SymmetricEigen};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{check_probability, check_unit_interval_open, Error, Result};
use crate::fock::{
    eig_spectrum, entropy_term, shannon_entropy, FockCutoff, Mode, Spectrum, TwoModeState,
};
use crate::states::{
    thermal_entropy, truncation_deficit, werner, BuildOptions, Truncation, WernerParams,
};

/// Tolerance of the internal closed-form vs direct comparisons.
pub const CROSS_CHECK_TOL: f64 = 1e-8;

/// Per-`m` terms with `p_B(m)` below this are dropped.
const P_B_FLOOR: f64 = 1e-16;

/// Weight `(1-p)(1-mu^2)^2` of the product-thermal part.
fn thermal_product_weight(params: &WernerParams) -> f64 {
    let mu2 = params.mu * params.mu;
    (1.0 - params.p) * (1.0 - mu2) * (1.0 - mu2)
}

/// `g_m = p (1-lambda^2) lambda^{2m} + (1-p)(1-mu^2) mu^{2m}` for `m < n_max`.
fn marginal_weights(params: &WernerParams, n_max: usize) -> Vec<f64> {
    let (l2, m2) = (params.lambda * params.lambda, params.mu * params.mu);
    let (a, b) = (params.p * (1.0 - l2), (1.0 - params.p) * (1.0 - m2));
    let (mut lp, mut mp) = (1.0, 1.0);
    (0..n_max)
        .map(|_| {
            let g = a * lp + b * mp;
            lp *= l2;
            mp *= m2;
            g
        })
        .collect()
}

/// Eigenvalues `g_m` of the reduced state of either mode.
pub fn reduced_spectrum_gm(params: &WernerParams, cutoff: FockCutoff) -> Result<Spectrum> {
    Spectrum::new(marginal_weights(params, cutoff.n_max()))
}

/// Joint photon-number distribution
/// `p(m, n) = p (1-lambda^2) lambda^{2m} delta_mn + (1-p)(1-mu^2)^2 mu^{2(m+n)}`,
/// row-major in `(m, n)`.
pub fn joint_photon_distribution(params: &WernerParams, cutoff: FockCutoff) -> Vec<f64> {
    let n = cutoff.n_max();
    let (l2, m2) = (params.lambda * params.lambda, params.mu * params.mu);
    let k = thermal_product_weight(params);
    let th: Vec<f64> = (0..n).map(|i| m2.powi(i as i32)).collect();
    let mut out = Vec::with_capacity(n * n);
    for m in 0..n {
        for j in 0..n {
            let mut v = k * th[m] * th[j];
            if m == j {
                v += params.p * (1.0 - l2) * l2.powi(m as i32);
            }
            out.push(v);
        }
    }
    out
}

/// Entropy of the conditional state of mode A after `m` photons in mode B,
/// with the sum over the thermal branch taken in closed form.
fn conditional_entropy_closed(params: &WernerParams, m: usize, p_b: f64) -> f64 {
    let (l2, m2) = (params.lambda * params.lambda, params.mu * params.mu);
    let k = thermal_product_weight(params);
    let m2m = m2.powi(m as i32);
    let eta_mm = (params.p * (1.0 - l2) * l2.powi(m as i32) + k * m2m * m2m) / p_b;
    let a = k * m2m / p_b;
    let thermal = if a > 0.0 && m2 > 0.0 {
        let mf = m as f64;
        let one = 1.0 - m2;
        // sum over n != m of eta_n ln eta_n, eta_n = a mu^{2n}
        let count = 1.0 / one - m2m;
        let weighted = mf / one + m2 / (one * one) - 2.0 * mf * m2m;
        -a * ((k / p_b).ln() * count + m2.ln() * weighted)
    } else {
        0.0
    };
    thermal + entropy_term(eta_mm)
}

/// Same entropy from the truncated conditional spectrum `eta_n`, `n < n_max`.
fn conditional_entropy_direct(params: &WernerParams, m: usize, p_b: f64, n_max: usize) -> f64 {
    let (l2, m2) = (params.lambda * params.lambda, params.mu * params.mu);
    let k = thermal_product_weight(params);
    let m2m = m2.powi(m as i32);
    let mut mp = 1.0;
    let mut s = 0.0;
    for n in 0..n_max {
        let mut eta = k * m2m * mp;
        if n == m {
            eta += params.p * (1.0 - l2) * l2.powi(m as i32);
        }
        s += entropy_term(eta / p_b);
        mp *= m2;
    }
    s
}

/// Photon-counting conditional entropy `H_eig = sum_m p_B(m) S(rho_{A|m})`
/// from the closed form and from direct spectra, as `(closed, direct)`.
pub fn conditional_entropy_eig_both(params: &WernerParams, cutoff: FockCutoff) -> (f64, f64) {
    let n = cutoff.n_max();
    let g = marginal_weights(params, n);
    g.par_iter()
        .enumerate()
        .filter(|(_, &pb)| pb >= P_B_FLOOR)
        .map(|(m, &pb)| {
            (
                pb * conditional_entropy_closed(params, m, pb),
                pb * conditional_entropy_direct(params, m, pb, n),
            )
        })
        .reduce(|| (0.0, 0.0), |a, b| (a.0 + b.0, a.1 + b.1))
}

/// Photon-counting conditional entropy; fails if the closed form and the
/// direct spectra disagree by more than [`CROSS_CHECK_TOL`].
pub fn conditional_entropy_eig(params: &WernerParams, cutoff: FockCutoff) -> Result<f64> {
    let (closed, direct) = conditional_entropy_eig_both(params, cutoff);
    cross_check(
        "conditional entropy closed form vs direct",
        closed,
        direct,
        CROSS_CHECK_TOL,
    )?;
    Ok(closed.max(0.0))
}

fn cross_check(context: &'static str, lhs: f64, rhs: f64, tolerance: f64) -> Result<()> {
    let diff = (lhs - rhs).abs();
    if diff > tolerance || !diff.is_finite() {
        Err(Error::CrossCheck {
            context,
            lhs,
            rhs,
            diff,
            tolerance,
        })
    } else {
        Ok(())
    }
}

/// Global spectrum split into the off-diagonal thermal branch `e_mn` (summed
/// in closed form over all `m != n`) and the eigenvalues `f_l` of the
/// truncated matrix `M` on the `|m, m>` subspace.
#[derive(Debug, Clone, PartialEq)]
pub struct GlobalSpectrum {
    pub e_sum: f64,
    pub e_entropy: f64,
    pub f: Spectrum,
}

impl GlobalSpectrum {
    pub fn entropy(&self) -> f64 {
        self.e_entropy + self.f.entropy()
    }

    pub fn total(&self) -> f64 {
        self.e_sum + self.f.sum()
    }
}

pub fn global_spectrum(params: &WernerParams, cutoff: FockCutoff) -> Result<GlobalSpectrum> {
    let n = cutoff.n_max();
    let (l2, m2) = (params.lambda * params.lambda, params.mu * params.mu);
    let k = thermal_product_weight(params);
    let (e_sum, e_entropy) = if k > 0.0 && m2 > 0.0 {
        let sum = 2.0 * m2 * (1.0 - params.p) / (1.0 + m2);
        // sum (m+n) x^{m+n} / sum x^{m+n} over m != n, x = mu^2
        let mean_level = (1.0 + m2 + 2.0 * m2 * m2) / ((1.0 - m2) * (1.0 + m2));
        (sum, -sum * (k.ln() + m2.ln() * mean_level))
    } else {
        (0.0, 0.0)
    };
    let a = params.p * (1.0 - l2);
    let powers: Vec<f64> = (0..n).map(|i| params.lambda.powi(i as i32)).collect();
    let mat = DMatrix::from_fn(n, n, |i, j| {
        let mut v = a * powers[i] * powers[j];
        if i == j {
            v += k * m2.powi(2 * i as i32);
        }
        v
    });
    let f = Spectrum::new(
        SymmetricEigen::new(mat)
            .eigenvalues
            .iter()
            .copied()
            .collect(),
    )?;
    Ok(GlobalSpectrum {
        e_sum,
        e_entropy,
        f,
    })
}

/// Global entropy; fails when the branch weights miss unit trace by more
/// than `eps_tail`.
pub fn global_entropy_general(
    params: &WernerParams,
    cutoff: FockCutoff,
    eps_tail: f64,
) -> Result<f64> {
    let spec = global_spectrum(params, cutoff)?;
    let deviation = (spec.total() - 1.0).abs();
    if deviation > eps_tail {
        return Err(Error::Truncation {
            context: "global spectrum trace",
            deviation,
            tolerance: eps_tail,
            n_max: cutoff.n_max(),
        });
    }
    Ok(spec.entropy())
}

/// Where a state of the `lambda = mu^4` family sits with respect to the
/// separability thresholds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Region {
    #[serde(rename = "separable")]
    Separable,
    #[serde(rename = "PPT-unknown")]
    PptUnknown,
    #[serde(rename = "entangled-nonPPT")]
    EntangledNonPpt,
    #[serde(rename = "not-classified")]
    NotClassified,
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Region::Separable => "separable",
            Region::PptUnknown => "PPT-unknown",
            Region::EntangledNonPpt => "entangled-nonPPT",
            Region::NotClassified => "not-classified",
        })
    }
}

/// Below this `p` the `lambda = mu^4` state is separable.
pub fn p_sep(mu: f64) -> Result<f64> {
    check_unit_interval_open("mu", mu)?;
    let m2 = mu * mu;
    let one = 1.0 - m2;
    Ok(one * one / (2.0 * (one + m2 * m2)))
}

/// Above this `p` the partial transpose of the `lambda = mu^4` state has a
/// negative eigenvalue (in the `m + n = 1` block).
pub fn p_ppt(mu: f64) -> Result<f64> {
    check_unit_interval_open("mu", mu)?;
    let m2 = mu * mu;
    let one = 1.0 - m2;
    Ok(one * one / (one * one + (1.0 - m2.powi(4)) * m2))
}

/// Classification of the `lambda = mu^4` member with mixing probability `p`.
pub fn separability_region(p: f64, mu: f64) -> Result<Region> {
    check_probability("p", p)?;
    check_unit_interval_open("mu", mu)?;
    if mu == 0.0 || p == 0.0 {
        return Ok(Region::Separable);
    }
    Ok(if p <= p_sep(mu)? {
        Region::Separable
    } else if p <= p_ppt(mu)? {
        Region::PptUnknown
    } else {
        Region::EntangledNonPpt
    })
}

/// Region for arbitrary parameters: classified on the `lambda = mu^4` family
/// and for `mu = 0`, otherwise [`Region::NotClassified`].
pub fn region_of(params: &WernerParams) -> Result<Region> {
    if params.mu == 0.0 {
        return Ok(if params.p == 0.0 || params.lambda == 0.0 {
            Region::Separable
        } else {
            Region::EntangledNonPpt
        });
    }
    if (params.lambda - params.mu.powi(4)).abs() <= 1e-12 {
        separability_region(params.p, params.mu)
    } else {
        Ok(Region::NotClassified)
    }
}

/// Sufficient condition for strictly positive discord: some off-diagonal
/// block `<i|rho|j>_B` is not normal, which happens iff `p > 0` and
/// `0 < lambda < 1`.
pub fn discord_positive_witness(p: f64, lambda: f64) -> bool {
    p > 0.0 && lambda > 0.0 && lambda < 1.0
}

/// Smallest eigenvalue of the partial transpose (on mode B) of the truncated state.
pub fn pt_min_eigenvalue(params: &WernerParams, cutoff: FockCutoff) -> Result<f64> {
    werner(params, cutoff, BuildOptions::default())
        .partial_transpose(Mode::B)
        .min_eigenvalue()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundsReport {
    pub p: f64,
    pub lambda: f64,
    pub mu: f64,
    pub n_max: usize,
    pub s_b: f64,
    pub s_global: f64,
    pub h_eig: f64,
    pub upper: f64,
    /// Signed; may be negative.
    pub lower: f64,
    pub mid: f64,
    pub region: Region,
    /// Trace missing from the truncated state.
    pub tail_budget: f64,
}

impl BoundsReport {
    pub fn lower_clipped(&self) -> f64 {
        self.lower.max(0.0)
    }
}

/// Upper bound `U`, lower bound `L` and MID of a general Werner state.
///
/// `MID = H(p_AB) - S(rho)` is computed from the joint photon statistics
/// and must agree with `U` within [`CROSS_CHECK_TOL`].
pub fn bounds(params: &WernerParams, truncation: &Truncation) -> Result<BoundsReport> {
    let cutoff = truncation.resolve(params)?;
    let n = cutoff.n_max();
    let s_b = reduced_spectrum_gm(params, cutoff)?.entropy();
    let s_global = global_entropy_general(params, cutoff, truncation.eps_tail)?;
    let h_eig = conditional_entropy_eig(params, cutoff)?;
    let upper = (s_b - s_global + h_eig).max(0.0);
    let lower = s_b - s_global + (1.0 - params.p) * thermal_entropy(params.mu);
    let h_ab = shannon_entropy(&joint_photon_distribution(params, cutoff))?;
    let mid = (h_ab - s_global).max(0.0);
    cross_check("MID vs upper bound", mid, upper, CROSS_CHECK_TOL)?;
    Ok(BoundsReport {
        p: params.p,
        lambda: params.lambda,
        mu: params.mu,
        n_max: n,
        s_b,
        s_global,
        h_eig,
        upper,
        lower,
        mid,
        region: region_of(params)?,
        tail_budget: truncation_deficit(params, n),
    })
}

pub fn upper_bound_u(params: &WernerParams, truncation: &Truncation) -> Result<f64> {
    Ok(bounds(params, truncation)?.upper)
}

pub fn lower_bound_l(params: &WernerParams, truncation: &Truncation) -> Result<f64> {
    Ok(bounds(params, truncation)?.lower)
}

pub fn mid(params: &WernerParams, truncation: &Truncation) -> Result<f64> {
    Ok(bounds(params, truncation)?.mid)
}

/// Photon-counting quantities of an arbitrary truncated state whose reduced
/// state on B is Fock-diagonal.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StateBounds {
    pub s_b: f64,
    pub s_global: f64,
    pub h_eig: f64,
    pub h_ab: f64,
    pub upper: f64,
    pub mid: f64,
}

/// `U`, `H_eig` and MID of `rho` from its matrix elements alone.
pub fn bounds_from_state(rho: &TwoModeState) -> Result<StateBounds> {
    let rho_b = rho.partial_trace(Mode::A);
    let off = {
        let m = rho_b.matrix();
        let mut worst: f64 = 0.0;
        for i in 0..m.nrows() {
            for j in 0..m.ncols() {
                if i != j {
                    worst = worst.max(m[(i, j)].norm());
                }
            }
        }
        worst
    };
    if off > 1e-12 {
        return Err(Error::Domain {
            name: "off-diagonal of reduced state",
            value: off,
            domain: "Fock-diagonal reduced state required",
        });
    }
    let p_b = rho_b.diagonal();
    let s_b = shannon_entropy(&p_b.iter().map(|&x| x.max(0.0)).collect::<Vec<_>>())?;
    let s_global = rho.entropy()?;
    let h_eig = (0..rho.n_max())
        .into_par_iter()
        .map(|m| -> Result<f64> {
            let pb = p_b[m];
            if pb < P_B_FLOOR {
                return Ok(0.0);
            }
            let block = rho.conditional_block_b(m);
            let values = eig_spectrum(&block)?;
            Ok(values
                .values()
                .iter()
                .map(|&x| entropy_term(x))
                .sum::<f64>()
                + pb * pb.ln())
        })
        .collect::<Result<Vec<f64>>>()?
        .into_iter()
        .sum::<f64>();
    let h_ab = shannon_entropy(
        &rho.joint_photon_distribution()
            .into_iter()
            .map(|x| x.max(0.0))
            .collect::<Vec<_>>(),
    )?;
    Ok(StateBounds {
        s_b,
        s_global,
        h_eig,
        h_ab,
        upper: s_b - s_global + h_eig,
        mid: h_ab - s_global,
    })
}
