//! Monte Carlo estimates of polygon volumes.
//!
//! Samples are split over a fixed number of independent ChaCha streams and
//! the per-stream sums are combined in stream order, so the result depends on
//! the seed and sample count but not on the worker count.

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::ring::PrecisionValue;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct McSpec {
    pub samples: u64,
    pub seed: u64,
    pub streams: u32,
}

impl Default for McSpec {
    fn default() -> Self {
        McSpec { samples: 1_000_000, seed: 0, streams: 64 }
    }
}

/// Sample mean with its standard error. `estimate` carries one standard
/// error as its uncertainty, which is statistical rather than a bound.
#[derive(Clone, Debug)]
pub struct McEstimate {
    pub estimate: PrecisionValue,
    pub stderr: f64,
    pub samples: u64,
}

/// Uniform double in the open interval (0, 1).
fn open_unit(rng: &mut ChaCha8Rng) -> f64 {
    ((rng.next_u64() >> 11) as f64 + 0.5) * (1.0 / (1u64 << 53) as f64)
}

fn run<F>(dim: usize, spec: &McSpec, f: F) -> Result<(f64, f64)>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    if spec.samples < 2 || spec.streams == 0 {
        return Err(Error::InvalidArgument("Monte Carlo needs at least 2 samples and 1 stream".into()));
    }
    let streams = spec.streams as u64;
    let per = spec.samples / streams;
    let extra = spec.samples % streams;
    let parts: Vec<(f64, f64)> = (0..streams)
        .into_par_iter()
        .map(|s| {
            let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
            rng.set_stream(s);
            let count = per + u64::from(s < extra);
            let mut u = vec![0.0; dim];
            let (mut sum, mut sq) = (0.0, 0.0);
            for _ in 0..count {
                for x in u.iter_mut() {
                    *x = open_unit(&mut rng);
                }
                let w = f(&u);
                sum += w;
                sq += w * w;
            }
            (sum, sq)
        })
        .collect();
    let (sum, sq) = parts.iter().fold((0.0, 0.0), |(a, b), (c, d)| (a + c, b + d));
    let n = spec.samples as f64;
    let mean = sum / n;
    let var = ((sq / n - mean * mean) * n / (n - 1.0)).max(0.0);
    Ok((mean, (var / n).sqrt()))
}

/// Weight in shear coordinates,
/// `exp(S/2) / (1 + Σ_j exp(s_1 + ⋯ + s_j))` with `S = Σ s_i`,
/// evaluated with a log-sum-exp. Equals `1/(n-2)` at the origin.
pub fn shear_weight(s: &[f64]) -> f64 {
    let mut partial = 0.0;
    let mut exps = Vec::with_capacity(s.len() + 1);
    exps.push(0.0);
    for x in s {
        partial += x;
        exps.push(partial);
    }
    let top = exps.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let lse = top + exps.iter().map(|e| (e - top).exp()).sum::<f64>().ln();
    (partial / 2.0 - lse).exp()
}

/// `V = π^{n-3} E[W(s)]` with shears drawn from the density
/// `1/(2π cosh(s/2))`, sampled as `s = 2 ln tan(πu/2)`.
pub fn ngon_volume_mc(n: u32, spec: &McSpec) -> Result<McEstimate> {
    if n < 4 {
        return Err(Error::InvalidArgument(format!("Monte Carlo needs n >= 4, got {n}")));
    }
    let dim = (n - 3) as usize;
    let (mean, se) = run(dim, spec, |u| {
        let s: Vec<f64> = u.iter().map(|&x| 2.0 * (std::f64::consts::FRAC_PI_2 * x).tan().ln()).collect();
        shear_weight(&s)
    })?;
    let scale = std::f64::consts::PI.powi(n as i32 - 3);
    Ok(McEstimate {
        estimate: PrecisionValue::from_f64(mean * scale, se * scale, 53),
        stderr: se * scale,
        samples: spec.samples,
    })
}

/// `Q_j(u_1, …, u_j) = u_1 Q_{j-1}(u_2, …, u_j) + Π (1 - u_i)` with `Q_1 = 1`.
pub fn q_value(u: &[f64]) -> f64 {
    if u.is_empty() {
        return 1.0;
    }
    let mut q = 1.0;
    let mut tail = 1.0 - u[u.len() - 1];
    for i in (0..u.len() - 1).rev() {
        tail *= 1.0 - u[i];
        q = u[i] * q + tail;
    }
    q
}

/// `V = ∫_{(0,1)^{n-3}} du / Q_{n-3}(u)` by plain sampling. The integrand is
/// unbounded near the corners, so the variance is large.
pub fn ngon_volume_u_mc(n: u32, spec: &McSpec) -> Result<McEstimate> {
    if n < 4 {
        return Err(Error::InvalidArgument(format!("Monte Carlo needs n >= 4, got {n}")));
    }
    let dim = (n - 3) as usize;
    let (mean, se) = run(dim, spec, |u| 1.0 / q_value(u))?;
    Ok(McEstimate {
        estimate: PrecisionValue::from_f64(mean, se, 53),
        stderr: se,
        samples: spec.samples,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weight_at_origin() {
        for n in 4..12 {
            let w = shear_weight(&vec![0.0; n - 3]);
            assert!((w - 1.0 / (n as f64 - 2.0)).abs() < 1e-15);
        }
    }

    #[test]
    fn weight_stays_bounded_for_large_shears() {
        let w = shear_weight(&[800.0, -900.0, 700.0]);
        assert!(w.is_finite() && (0.0..=0.5).contains(&w));
    }

    #[test]
    fn q_at_half_and_small_cases() {
        for j in 1..10 {
            let q = q_value(&vec![0.5; j]);
            assert!((q - (j as f64 + 1.0) / 2f64.powi(j as i32)).abs() < 1e-15);
        }
        let (a, b) = (0.3, 0.7);
        assert!((q_value(&[a, b]) - (1.0 - b + a * b)).abs() < 1e-15);
    }

    #[test]
    fn square_is_one() {
        let est = ngon_volume_mc(4, &McSpec { samples: 200_000, seed: 3, streams: 8 }).unwrap();
        assert!((est.estimate.to_f64() - 1.0).abs() < 4.0 * est.stderr);
    }
}
