use gauss_quad::legendre::GaussLegendre;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{GaussianConditionalEntropy, Integrand};
use crate::error::{check_domain, Error, Result};

/// Polar product rule on the outcome plane.
///
/// The outcome density is a mixture of two Gaussian envelopes. Each term is
/// integrated on its own normalized frame: the plane is rotated by the POVM
/// phase and each principal axis is scaled by that envelope's width, so the
/// envelope becomes `exp(-R^2)` whatever the measurement squeezing. Radial nodes are Gauss-Legendre on `[0, R_max]`,
/// angular nodes are uniform (exact for the periodic angular integrand).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuadratureGrid {
    radial: Vec<(f64, f64)>,
    angular: usize,
    r_max: f64,
}

impl Default for QuadratureGrid {
    fn default() -> Self {
        QuadratureGrid::new(96, 64, 6.0).expect("default grid is valid")
    }
}

impl QuadratureGrid {
    /// `exp(-R_max^2)` is the tail mass of the normalized envelope left
    /// outside the grid; the default `R_max = 6` leaves about `2e-16`.
    pub fn new(radial_nodes: usize, angular_nodes: usize, r_max: f64) -> Result<Self> {
        check_domain(
            "radial nodes",
            radial_nodes as f64,
            radial_nodes >= 2,
            ">= 2",
        )?;
        check_domain(
            "angular nodes",
            angular_nodes as f64,
            angular_nodes >= 4,
            ">= 4",
        )?;
        check_domain("R_max", r_max, r_max > 0.0, "(0, inf)")?;
        let rule = GaussLegendre::new(radial_nodes).map_err(|_| Error::Domain {
            name: "radial nodes",
            value: radial_nodes as f64,
            domain: ">= 2",
        })?;
        let half = 0.5 * r_max;
        let radial = rule
            .into_node_weight_pairs()
            .into_iter()
            .map(|(x, w)| (half * (x + 1.0), half * w))
            .collect();
        Ok(QuadratureGrid {
            radial,
            angular: angular_nodes,
            r_max,
        })
    }

    /// Same `R_max` with twice the radial and angular nodes.
    pub fn refined(&self) -> Result<Self> {
        QuadratureGrid::new(2 * self.radial.len(), 2 * self.angular, self.r_max)
    }

    pub fn radial_nodes(&self) -> usize {
        self.radial.len()
    }

    pub fn angular_nodes(&self) -> usize {
        self.angular
    }

    pub fn r_max(&self) -> f64 {
        self.r_max
    }

    /// Tail mass of the normalized envelope beyond `R_max`.
    pub fn envelope_tail(&self) -> f64 {
        (-self.r_max * self.r_max).exp()
    }

    pub(crate) fn integrate(&self, integrand: &Integrand) -> GaussianConditionalEntropy {
        let rotation = Complex64::from_polar(1.0, integrand.phi());
        let dtheta = std::f64::consts::TAU / self.angular as f64;
        let angles: Vec<(f64, f64)> = (0..self.angular)
            .map(|j| {
                let theta = (j as f64 + 0.5) * dtheta;
                (theta.cos(), theta.sin())
            })
            .collect();
        let mut total = GaussianConditionalEntropy {
            entropy: 0.0,
            normalization: 0.0,
        };
        // q = [p u + (1-p) v]/pi; each term is integrated in its own frame.
        for (k, (weight, sx, sy)) in integrand.components().into_iter().enumerate() {
            if weight == 0.0 {
                continue;
            }
            let ln_jacobian = (sx * sy).ln() - std::f64::consts::PI.ln();
            let (entropy, normalization) = self
                .radial
                .par_iter()
                .map(|&(r, wr)| {
                    let (mut s_acc, mut w_acc) = (0.0, 0.0);
                    for &(c, s) in &angles {
                        let (x, y) = (sx * r * c, sy * r * s);
                        let (ln_u, ln_v) = integrand.ln_weights(x, y);
                        let ln_w = if k == 0 { ln_u } else { ln_v };
                        let w = (ln_w + ln_jacobian).exp();
                        if w == 0.0 {
                            continue;
                        }
                        let point = integrand.point(rotation * Complex64::new(x, y), ln_u, ln_v);
                        s_acc += w * point.entropy;
                        w_acc += w;
                    }
                    let dw = wr * r * dtheta;
                    (dw * s_acc, dw * w_acc)
                })
                .reduce(|| (0.0, 0.0), |a, b| (a.0 + b.0, a.1 + b.1));
            total.entropy += weight * entropy;
            total.normalization += weight * normalization;
        }
        total
    }
}
