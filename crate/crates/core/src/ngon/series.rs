//! Polygon volumes from the multiple series
//! `Σ 1/(k_1 (k_1+k_2-1) ⋯ (k_{n-5}+k_{n-4}-1) k_{n-4})`,
//! evaluated as `⟨v, T^{n-5} v⟩` with `v_k = 1/k` and `T_{kk'} = 1/(k+k'-1)`.

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::ring::PrecisionValue;

/// Series estimate. The error is a heuristic from the extrapolation, not a bound.
#[derive(Clone, Debug)]
pub struct SeriesEstimate {
    pub value: PrecisionValue,
    pub cutoff: usize,
    pub extrapolated: bool,
    /// Levels used by the extrapolation, largest first.
    pub levels: Vec<usize>,
}

/// Truncated sum with every index at most `cutoff`.
pub fn series_partial_sum(n: u32, cutoff: usize) -> Result<f64> {
    if n < 5 {
        return Err(Error::InvalidArgument(format!("the series covers n >= 5, got {n}")));
    }
    if cutoff == 0 {
        return Err(Error::InvalidArgument("series cutoff must be positive".into()));
    }
    let inv: Vec<f64> = (0..2 * cutoff).map(|j| 1.0 / (j + 1) as f64).collect();
    let v: Vec<f64> = inv[..cutoff].to_vec();
    let mut w = v.clone();
    for _ in 0..n - 5 {
        w = (0..cutoff)
            .into_par_iter()
            .map(|i| inv[i..i + cutoff].iter().zip(&w).map(|(a, b)| a * b).sum())
            .collect();
    }
    Ok(v.iter().zip(&w).map(|(a, b)| a * b).sum())
}

/// Extrapolates `S(K) = S + Σ_j (ln K)^j (a_j/K + c_j/K²)` for `j ≤ l`
/// through the given levels; needs exactly `2l + 3` of them.
fn extrapolate(levels: &[usize], sums: &[f64], l: usize) -> Option<f64> {
    let m = 2 * l + 3;
    debug_assert_eq!(levels.len(), m);
    let top = (levels[0] as f64).ln();
    let mut a = DMatrix::<f64>::zeros(m, m);
    let b = DVector::from_column_slice(sums);
    for (row, &k) in levels.iter().enumerate() {
        let kf = k as f64;
        let x = kf.ln() / top;
        a[(row, 0)] = 1.0;
        for j in 0..=l {
            let lj = x.powi(j as i32);
            a[(row, 1 + j)] = lj / kf;
            a[(row, 2 + l + j)] = lj / (kf * kf);
        }
    }
    a.lu().solve(&b).map(|s| s[0])
}

/// Series estimate of the `n`-gon volume, `n ≥ 5`. With `extrapolate`, the
/// partial sums at `K, K/2, K/4, …` are fitted by a tail model carrying
/// powers of `ln K` up to `n - 5` (fewer when the cutoff is too small), and
/// the error is the change when the whole ladder is shifted down one level.
pub fn ngon_volume_series(n: u32, cutoff: usize, extrapolate_tail: bool) -> Result<SeriesEstimate> {
    let s_top = series_partial_sum(n, cutoff)?;
    if !extrapolate_tail {
        let s_half = series_partial_sum(n, (cutoff / 2).max(1))?;
        return Ok(SeriesEstimate {
            value: PrecisionValue::from_f64(s_top, (s_top - s_half).abs() * 2.0, 53),
            cutoff,
            extrapolated: false,
            levels: vec![cutoff],
        });
    }
    // smallest level must stay at or above 8 for the asymptotic model
    let max_shifts = ((cutoff as f64 / 8.0).log2().floor() as i64).max(0) as usize;
    if max_shifts < 3 {
        return Err(Error::InvalidArgument(format!("cutoff {cutoff} too small to extrapolate")));
    }
    // 2l + 3 levels plus one for the shifted ladder
    let l = ((max_shifts - 3) / 2).min(n as usize - 5);
    let m = 2 * l + 3;
    let levels: Vec<usize> = (0..=m).map(|i| cutoff >> i).collect();
    let mut sums = vec![s_top];
    for &k in &levels[1..] {
        sums.push(series_partial_sum(n, k)?);
    }
    let fail = || Error::NonConvergence("singular extrapolation system".into());
    let a = extrapolate(&levels[..m], &sums[..m], l).ok_or_else(fail)?;
    let b = extrapolate(&levels[1..], &sums[1..], l).ok_or_else(fail)?;
    let err = (a - b).abs() + a.abs() * 1e-13;
    Ok(SeriesEstimate {
        value: PrecisionValue::from_f64(a, err, 53),
        cutoff,
        extrapolated: true,
        levels: levels[..m].to_vec(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pentagon_partial_sum() {
        let s = series_partial_sum(5, 4).unwrap();
        assert!((s - (1.0 + 0.25 + 1.0 / 9.0 + 1.0 / 16.0)).abs() < 1e-15);
    }

    #[test]
    fn hexagon_small_cutoff_by_hand() {
        // K = 2: Σ 1/(k1 (k1+k2-1) k2) = 1 + 1/4 + 1/4 + 1/12
        let s = series_partial_sum(6, 2).unwrap();
        assert!((s - (1.0 + 0.5 + 1.0 / 12.0)).abs() < 1e-15);
    }

    #[test]
    fn extrapolated_pentagon() {
        let est = ngon_volume_series(5, 4096, true).unwrap();
        let truth = std::f64::consts::PI.powi(2) / 6.0;
        assert!((est.value.to_f64() - truth).abs() < 1e-10);
        assert!(est.value.to_f64() - truth <= est.value.abs_error_f64() * 10.0 + 1e-12);
    }
}
