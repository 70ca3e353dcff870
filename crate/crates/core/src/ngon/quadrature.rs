//! Polygon volumes from the chain integral
//! `∫_{(0,1)^{n-3}} Π 1/(1 - y_i y_{i+1})` by transfer-kernel contraction.

use rayon::prelude::*;
use rug::Float;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::quad::gauss_legendre;
use crate::ring::precision::up;
use crate::ring::PrecisionValue;

/// Discretisation of (0, 1): Gauss-Legendre panels graded geometrically
/// toward 1, where the kernel is singular.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct QuadratureSpec {
    /// Gauss nodes per panel at the first refinement level.
    pub nodes_per_panel: usize,
    /// Number of panels at the first refinement level.
    pub panels: usize,
    /// Ratio between consecutive panel widths, measured as distance to 1.
    pub ratio: f64,
    pub precision_bits: u32,
    /// Relative tolerance on the difference of successive levels.
    pub tolerance: f64,
    pub max_levels: u32,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            nodes_per_panel: 10,
            panels: 16,
            ratio: 0.2,
            precision_bits: 64,
            tolerance: 1e-10,
            max_levels: 5,
        }
    }
}

/// Result of a quadrature estimate with the level that produced it.
#[derive(Clone, Debug)]
pub struct QuadratureEstimate {
    pub value: PrecisionValue,
    pub nodes_per_panel: usize,
    pub panels: usize,
    pub levels: u32,
}

impl QuadratureSpec {
    fn validate(&self) -> Result<()> {
        if self.nodes_per_panel < 2 || self.panels < 1 {
            return Err(Error::InvalidArgument("quadrature needs at least 2 nodes and 1 panel".into()));
        }
        if !(self.ratio > 0.0 && self.ratio < 1.0) {
            return Err(Error::InvalidArgument(format!("panel ratio must lie in (0, 1), got {}", self.ratio)));
        }
        if self.precision_bits < 24 {
            return Err(Error::InvalidArgument("quadrature precision must be at least 24 bits".into()));
        }
        Ok(())
    }

    /// Node count growth by √2 per dimension, doubling the total per level.
    fn level(&self, k: u32) -> (usize, usize) {
        let f = std::f64::consts::SQRT_2.powi(k as i32);
        (
            (self.nodes_per_panel as f64 * f).round() as usize,
            (self.panels as f64 * f).round() as usize,
        )
    }
}

/// Nodes as (distance to 1, √weight).
fn nodes(p: usize, m: usize, ratio: f64, prec: u32) -> Vec<(Float, Float)> {
    let rule = gauss_legendre(p, prec);
    let sigma = Float::with_val(prec, ratio);
    let mut out = Vec::with_capacity(p * m);
    let mut hi = Float::with_val(prec, 1);
    for k in 0..m {
        let lo = if k + 1 == m { Float::new(prec) } else { Float::with_val(prec, &hi * &sigma) };
        let width = Float::with_val(prec, &hi - &lo);
        for (x, w) in rule.iter() {
            let r = Float::with_val(prec, &lo + Float::with_val(prec, &width * x));
            let sw = Float::with_val(prec, &width * w).sqrt();
            out.push((r, sw));
        }
        hi = lo;
    }
    out
}

fn contract(n: u32, p: usize, m: usize, spec: &QuadratureSpec) -> Float {
    let prec = spec.precision_bits + 16;
    let nd = nodes(p, m, spec.ratio, prec);
    let q = nd.len();
    // M[a][b] = √(w_a w_b) / (1 - t_a t_b) with 1 - t_a t_b = r_a + r_b - r_a r_b
    let matrix: Vec<Vec<Float>> = (0..q)
        .into_par_iter()
        .map(|a| {
            let (ra, sa) = &nd[a];
            nd.iter()
                .map(|(rb, sb)| {
                    let denom = Float::with_val(prec, ra + rb) - Float::with_val(prec, ra * rb);
                    Float::with_val(prec, sa * sb) / denom
                })
                .collect()
        })
        .collect();
    let e: Vec<Float> = nd.iter().map(|(_, s)| s.clone()).collect();
    let mut v = e.clone();
    for _ in 0..n - 4 {
        v = matrix
            .par_iter()
            .map(|row| {
                let mut acc = Float::new(prec);
                for (mij, vj) in row.iter().zip(&v) {
                    acc += Float::with_val(prec, mij * vj);
                }
                acc
            })
            .collect();
    }
    let mut acc = Float::new(prec);
    for (ei, vi) in e.iter().zip(&v) {
        acc += Float::with_val(prec, ei * vi);
    }
    acc
}

/// Volume of the moduli space of ideal `n`-gons, `n ≥ 5`, by transfer-kernel
/// contraction with successive refinement. The error is the difference
/// between the last two levels.
pub fn ngon_volume_quadrature(n: u32, spec: &QuadratureSpec) -> Result<QuadratureEstimate> {
    if n < 5 {
        return Err(Error::InvalidArgument(format!(
            "quadrature needs n >= 5; the {n}-gon volume is the exact constant 1"
        )));
    }
    spec.validate()?;
    let (p0, m0) = spec.level(0);
    let mut prev = contract(n, p0, m0, spec);
    let mut last_diff = None;
    for k in 1..=spec.max_levels {
        let (p, m) = spec.level(k);
        let cur = contract(n, p, m, spec);
        let diff = Float::with_val(spec.precision_bits, &cur - &prev).abs();
        let scale = Float::with_val(64, cur.abs_ref()).max(&Float::with_val(64, 1));
        let rel = Float::with_val(64, &diff / &scale);
        if rel <= spec.tolerance && k >= 2 {
            let out = Float::with_val(spec.precision_bits, &cur);
            let floor = up(Float::with_val(64, cur.abs_ref()) >> (spec.precision_bits - 8));
            return Ok(QuadratureEstimate {
                value: PrecisionValue::new(out, up(diff) + floor),
                nodes_per_panel: p,
                panels: m,
                levels: k + 1,
            });
        }
        last_diff = Some(rel.to_f64());
        prev = cur;
    }
    Err(Error::NonConvergence(format!(
        "{n}-gon quadrature: relative change {:.3e} after {} levels exceeds tolerance {:.1e}",
        last_diff.unwrap_or(f64::NAN),
        spec.max_levels + 1,
        spec.tolerance
    )))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pentagon_is_zeta2() {
        let est = ngon_volume_quadrature(5, &QuadratureSpec::default()).unwrap();
        let truth = std::f64::consts::PI.powi(2) / 6.0;
        assert!((est.value.to_f64() - truth).abs() < 1e-10, "{}", est.value);
        assert!(est.value.abs_error_f64() < 1e-8);
    }

    #[test]
    fn small_n_rejected() {
        assert!(ngon_volume_quadrature(4, &QuadratureSpec::default()).is_err());
        let bad = QuadratureSpec { ratio: 1.5, ..QuadratureSpec::default() };
        assert!(ngon_volume_quadrature(6, &bad).is_err());
    }
}
