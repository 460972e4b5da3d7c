//! Closed-form correlations of the partially transposed Werner state
//! `rho~(lambda)`, the member `p = (1-lambda)/2`, `mu = sqrt(lambda)` of the
//! Werner family with its partial transpose taken. Its spectrum is
//! `a_m = 2N lambda^{2m}` and `b_mn = 2N lambda^{m+n}` (`m > n`) with
//! `N = (1-lambda^2)(1-lambda)/2`.

use std::f64::consts::LN_2;

use serde::{Deserialize, Serialize};

use crate::error::{check_domain, check_unit_interval_open, Error, Result};
use crate::fock::entropy_term;
use crate::states::{ppt_norm, thermal_entropy};

/// Default truncation tolerance of the series below.
pub const DEFAULT_SERIES_TOL: f64 = 1e-10;

/// `lambda ln lambda` and friends vanish at `lambda = 0`.
fn ln_or_zero(lambda: f64) -> f64 {
    if lambda > 0.0 {
        lambda.ln()
    } else {
        0.0
    }
}

/// `S(rho~) = -[ln(2N) + lambda (1 + 3 lambda) ln(lambda) / (1 - lambda^2)]`.
pub fn ppt_global_entropy(lambda: f64) -> Result<f64> {
    check_unit_interval_open("lambda", lambda)?;
    let n = ppt_norm(lambda);
    let l2 = lambda * lambda;
    Ok(-((2.0 * n).ln() + lambda * (1.0 + 3.0 * lambda) * ln_or_zero(lambda) / (1.0 - l2)))
}

/// A series value together with a bound on the neglected tail.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeriesValue {
    pub value: f64,
    pub tail_bound: f64,
    pub terms: usize,
}

/// `p~_B(m) = N lambda^m (lambda^m + 1/(1-lambda))`.
pub fn ppt_reduced_probability(lambda: f64, m: usize) -> f64 {
    let lm = lambda.powi(m as i32);
    ppt_norm(lambda) * lm * (lm + 1.0 / (1.0 - lambda))
}

/// Entropy of the reduced state of either mode, summed until the geometric
/// tail bound drops below `tol`.
pub fn ppt_reduced_entropy(lambda: f64, tol: f64) -> Result<SeriesValue> {
    check_unit_interval_open("lambda", lambda)?;
    check_domain("tol", tol, tol > 0.0, "(0, inf)")?;
    if lambda == 0.0 {
        return Ok(SeriesValue {
            value: 0.0,
            tail_bound: 0.0,
            terms: 0,
        });
    }
    let n = ppt_norm(lambda);
    let inv = 1.0 / (1.0 - lambda);
    let l2 = lambda * lambda;
    let log_cap = (1.0 + inv).ln();
    let tail = |lm: f64| n * log_cap * (lm * lm / (1.0 - l2) + lm * inv * inv);
    let mut sum = 0.0;
    let mut lm = 1.0;
    let mut terms = 0;
    while tail(lm) >= tol {
        sum += (lm * lm + lm * inv) * (lm + inv).ln();
        lm *= lambda;
        terms += 1;
        if terms > 10_000_000 {
            return Err(Error::NoConvergence {
                iterations: terms,
                trace: vec![(terms as f64, sum)],
            });
        }
    }
    let value =
        -(n * sum + n.ln() + lambda * (1.0 + 3.0 * lambda) * lambda.ln() / (2.0 * (1.0 - l2)));
    Ok(SeriesValue {
        value,
        tail_bound: tail(lm),
        terms,
    })
}

/// Photon-counting conditional entropy by direct summation over the
/// conditional spectra, each summed over `n` in closed form.
fn conditional_entropy_direct(lambda: f64) -> f64 {
    if lambda == 0.0 {
        return 0.0;
    }
    let n = ppt_norm(lambda);
    let ln_l = lambda.ln();
    let inv = 1.0 / (1.0 - lambda);
    let mut total = 0.0;
    let mut lm = 1.0;
    let mut m = 0usize;
    loop {
        let pb = n * lm * (lm + inv);
        if pb < 1e-300 || (m > 0 && pb * (1.0 + m as f64) < 1e-18) {
            break;
        }
        // entries a lambda^k for k != m and 2 a lambda^m, normalized by pb
        let a = n * lm / pb;
        let mf = m as f64;
        let all_but_m = -a * a.ln() * (inv - lm) - a * ln_l * (lambda * inv * inv - mf * lm);
        let s = all_but_m + entropy_term(2.0 * a * lm);
        total += pb * s;
        lm *= lambda;
        m += 1;
    }
    total
}

/// `H~_eig = S(rho~) - S(rho~_B) + lambda ln 2`, checked against the direct
/// sum over conditional states within `1e-8`.
pub fn ppt_conditional_entropy(lambda: f64) -> Result<f64> {
    let s = ppt_global_entropy(lambda)?;
    let s_b = ppt_reduced_entropy(lambda, DEFAULT_SERIES_TOL)?.value;
    let analytic = s - s_b + lambda * LN_2;
    let direct = conditional_entropy_direct(lambda);
    let diff = (analytic - direct).abs();
    if diff > 1e-8 || !diff.is_finite() {
        return Err(Error::CrossCheck {
            context: "conditional entropy of the PPT state",
            lhs: analytic,
            rhs: direct,
            diff,
            tolerance: 1e-8,
        });
    }
    Ok(analytic.max(0.0))
}

/// Shannon entropy of the joint photon statistics
/// `p~(m, n) = N lambda^{m+n} (1 + delta_mn)`, summed over `k = m + n`.
pub fn ppt_joint_shannon_entropy(lambda: f64, tol: f64) -> Result<SeriesValue> {
    check_unit_interval_open("lambda", lambda)?;
    check_domain("tol", tol, tol > 0.0, "(0, inf)")?;
    if lambda == 0.0 {
        return Ok(SeriesValue {
            value: 0.0,
            tail_bound: 0.0,
            terms: 0,
        });
    }
    let n = ppt_norm(lambda);
    let mut sum = 0.0;
    let mut lk = 1.0;
    let mut k = 0usize;
    // each term at level j is at most (j + 2) x_j (-ln x_j), x_j = N lambda^j
    let (a, b) = (-n.ln(), -lambda.ln());
    let q = 1.0 - lambda;
    let tail = |k: usize, lk: f64| {
        let kf = k as f64;
        let s0 = lk / q;
        let s1 = lk * (kf / q + lambda / (q * q));
        let s2 = lk
            * (kf * kf / q
                + (2.0 * kf + 1.0) * lambda / (q * q)
                + 2.0 * lambda * lambda / (q * q * q));
        n * (b * s2 + (a + 2.0 * b) * s1 + 2.0 * a * s0)
    };
    loop {
        let x = n * lk;
        let diag = if k.is_multiple_of(2) { 1.0 } else { 0.0 };
        sum += (k as f64 + 1.0 - diag) * entropy_term(x) + diag * entropy_term(2.0 * x);
        lk *= lambda;
        k += 1;
        let t = tail(k, lk);
        if t < tol || lk == 0.0 {
            return Ok(SeriesValue {
                value: sum,
                tail_bound: t.max(0.0),
                terms: k,
            });
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PptReport {
    pub lambda: f64,
    pub norm_const: f64,
    pub s_global: f64,
    pub s_reduced: f64,
    pub h_eig: f64,
    pub upper: f64,
    /// Signed.
    pub lower: f64,
    pub mid: f64,
    /// Sum of the neglected series tails.
    pub tail_budget: f64,
}

/// All bounds of the PPT state. `U = lambda ln 2` in closed form; MID is
/// obtained independently from the joint photon statistics.
pub fn ppt_bounds(lambda: f64) -> Result<PptReport> {
    let s_global = ppt_global_entropy(lambda)?;
    let reduced = ppt_reduced_entropy(lambda, DEFAULT_SERIES_TOL)?;
    let h_eig = ppt_conditional_entropy(lambda)?;
    let joint = ppt_joint_shannon_entropy(lambda, DEFAULT_SERIES_TOL)?;
    let upper = lambda * LN_2;
    let lower = reduced.value - s_global + 0.5 * (1.0 + lambda) * thermal_entropy(lambda.sqrt());
    Ok(PptReport {
        lambda,
        norm_const: ppt_norm(lambda),
        s_global,
        s_reduced: reduced.value,
        h_eig,
        upper,
        lower,
        mid: joint.value - s_global,
        tail_budget: reduced.tail_bound + joint.tail_bound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::bounds_from_state;
    use crate::fock::Mode;
    use crate::states::{
        choose_cutoff, ppt_spectrum_closed_form, ppt_werner, ppt_werner_params, BuildOptions,
    };
    use approx::assert_abs_diff_eq;

    // Brute-force sums over a large square of (m, n), independent of the
    // closed forms above.
    fn brute_force(lambda: f64) -> (f64, f64, f64) {
        let n = ppt_norm(lambda);
        let size = 600;
        let (mut s, mut s_b, mut h_ab) = (0.0, 0.0, 0.0);
        for m in 0..size {
            s += entropy_term(2.0 * n * lambda.powi(2 * m as i32));
            for k in 0..m {
                s += entropy_term(2.0 * n * lambda.powi((m + k) as i32));
            }
            s_b += entropy_term(ppt_reduced_probability(lambda, m));
            for k in 0..size {
                let mult = if m == k { 2.0 } else { 1.0 };
                h_ab += entropy_term(mult * n * lambda.powi((m + k) as i32));
            }
        }
        (s, s_b, h_ab)
    }

    #[test]
    fn closed_forms_match_brute_force() {
        for &lambda in &[0.2, 0.5, 0.8] {
            let (s, s_b, h_ab) = brute_force(lambda);
            assert_abs_diff_eq!(ppt_global_entropy(lambda).unwrap(), s, epsilon = 1e-10);
            assert_abs_diff_eq!(
                ppt_reduced_entropy(lambda, 1e-12).unwrap().value,
                s_b,
                epsilon = 1e-10
            );
            assert_abs_diff_eq!(
                ppt_joint_shannon_entropy(lambda, 1e-12).unwrap().value,
                h_ab,
                epsilon = 1e-10
            );
            assert_abs_diff_eq!(h_ab - s, lambda * LN_2, epsilon = 1e-10);
        }
    }

    #[test]
    fn examples_at_half() {
        assert_abs_diff_eq!(
            ppt_global_entropy(0.5).unwrap(),
            2.1360745539,
            epsilon = 1e-9
        );
        assert_abs_diff_eq!(
            ppt_reduced_entropy(0.5, 1e-8).unwrap().value,
            1.2616471742,
            epsilon = 1e-8
        );
        assert_abs_diff_eq!(
            ppt_conditional_entropy(0.5).unwrap(),
            1.2210009700,
            epsilon = 1e-9
        );
        let r = ppt_bounds(0.5).unwrap();
        assert_abs_diff_eq!(r.upper, 0.5 * LN_2, epsilon = 1e-15);
        assert_abs_diff_eq!(r.lower, 0.165, epsilon = 2e-3);
        assert_abs_diff_eq!(r.lower, 0.1652933911, epsilon = 1e-9);
        assert_abs_diff_eq!(r.mid, r.upper, epsilon = 1e-8);
        assert_abs_diff_eq!(thermal_entropy(0.5f64.sqrt()), 1.3862943611, epsilon = 1e-9);
    }

    #[test]
    fn endpoints() {
        let r = ppt_bounds(0.0).unwrap();
        assert_eq!(
            (r.s_global, r.s_reduced, r.h_eig, r.upper, r.mid),
            (0.0, 0.0, 0.0, 0.0, 0.0)
        );
        assert!(r.lower.abs() < 1e-15);
        assert!(ppt_bounds(0.999).unwrap().upper > 0.692);
    }

    #[test]
    fn grid_properties() {
        let mut prev = -1.0;
        for i in 1..=99 {
            let lambda = i as f64 / 100.0;
            let r = ppt_bounds(lambda).unwrap();
            assert!(r.s_reduced > prev);
            prev = r.s_reduced;
            assert!(r.h_eig >= 0.0);
            assert!(r.lower > 0.0, "lambda={lambda}: L={}", r.lower);
            assert!(r.lower <= r.upper);
            assert!((r.mid - r.upper).abs() < 1e-8);
        }
    }

    #[test]
    fn truncated_state_agrees() {
        for &lambda in &[0.2, 0.5, 0.8] {
            let c = choose_cutoff(&ppt_werner_params(lambda).unwrap(), 1e-12).unwrap();
            let rho = ppt_werner(lambda, c, BuildOptions::default()).unwrap();
            let mut numeric = rho.spectrum().unwrap().nonzero().values().to_vec();
            let mut closed = ppt_spectrum_closed_form(lambda, c.n_max());
            closed.sort_by(|a, b| b.total_cmp(a));
            numeric.truncate(closed.len());
            for (a, b) in numeric.iter().zip(&closed) {
                assert!((a - b).abs() < 1e-10);
            }
            assert_abs_diff_eq!(
                rho.entropy().unwrap(),
                ppt_global_entropy(lambda).unwrap(),
                epsilon = 1e-8
            );
            assert_abs_diff_eq!(
                rho.partial_trace(Mode::A).entropy().unwrap(),
                ppt_reduced_entropy(lambda, 1e-12).unwrap().value,
                epsilon = 1e-8
            );
            let b = bounds_from_state(&rho).unwrap();
            assert_abs_diff_eq!(b.upper, lambda * LN_2, epsilon = 1e-6);
            assert_abs_diff_eq!(b.mid, lambda * LN_2, epsilon = 1e-6);
        }
    }
}
