//! Quadrature rules at arbitrary precision: tanh-sinh for integrals with
//! endpoint singularities and Gauss-Legendre for smooth panels.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use rug::float::Constant as MpfrConstant;
use rug::ops::Pow;
use rug::Float;

use crate::error::{Error, Result};
use crate::ring::precision::{up, PrecisionValue};

/// Point handed to a tanh-sinh integrand: the abscissa together with its
/// distances to both endpoints, each computed without cancellation.
pub struct Node<'a> {
    pub x: &'a Float,
    pub from_a: &'a Float,
    pub to_b: &'a Float,
}

/// Budget for [`tanh_sinh`].
#[derive(Clone, Debug)]
pub struct TanhSinh {
    pub prec: u32,
    /// Absolute tolerance on successive-level differences.
    pub tol: f64,
    pub max_level: u32,
}

impl TanhSinh {
    pub fn new(prec: u32, tol: f64) -> Self {
        TanhSinh { prec, tol, max_level: 12 }
    }
}

/// `∫_a^b f` by the double-exponential rule, refining the step until two
/// successive levels differ by less than the tolerance. The reported error is
/// that last difference, which for this rule overestimates the true error.
pub fn tanh_sinh<F>(f: F, a: &Float, b: &Float, cfg: &TanhSinh) -> Result<PrecisionValue>
where
    F: Fn(&Node<'_>) -> Float,
{
    let p = cfg.prec;
    let c = Float::with_val(p, Float::with_val(p, b - a) / 2u32);
    let half_pi = Float::with_val(p, MpfrConstant::Pi) / 2u32;
    let hard_stop = Float::with_val(p, 1) >> (3 * p);

    // Contribution of nodes ±t, or only t = 0 when `t` is zero.
    let pair = |t: &Float| -> Float {
        let s = Float::with_val(p, t.sinh_ref()) * &half_pi;
        let e2s = Float::with_val(p, (-Float::with_val(p, &s * 2u32)).exp());
        // q = 1 - tanh(s) = 2 e^{-2s} / (1 + e^{-2s})
        let q = Float::with_val(p, &e2s * 2u32) / Float::with_val(p, &e2s + 1u32);
        let cosh_s = Float::with_val(p, s.cosh_ref());
        let w = Float::with_val(p, t.cosh_ref()) * &half_pi / Float::with_val(p, cosh_s.square_ref()) * &c;
        let near = Float::with_val(p, &c * &q);
        let far = Float::with_val(p, &c * Float::with_val(p, 2u32 - &q));
        let xr = Float::with_val(p, b - &near);
        let right = f(&Node { x: &xr, from_a: &far, to_b: &near });
        if t.is_zero() {
            return w * right;
        }
        let xl = Float::with_val(p, a + &near);
        let left = f(&Node { x: &xl, from_a: &near, to_b: &far });
        w * (right + left)
    };
    let negligible = |t: &Float| -> bool {
        let s = Float::with_val(p, t.sinh_ref()) * &half_pi;
        let q = Float::with_val(p, (-Float::with_val(p, &s * 2u32)).exp()) * 2u32;
        q < hard_stop
    };

    let mut h = Float::with_val(p, 1);
    let mut raw = pair(&Float::new(p));
    let mut j = 1u32;
    loop {
        let t = Float::with_val(p, &h * j);
        if negligible(&t) {
            break;
        }
        let v = pair(&t);
        let small = Float::with_val(p, v.abs_ref()) < Float::with_val(p, raw.abs_ref()) >> (p + 8);
        raw += v;
        if small && j > 4 {
            break;
        }
        j += 1;
    }
    let mut prev = Float::with_val(p, &raw * &h);
    for _level in 1..=cfg.max_level {
        h /= 2u32;
        let mut j = 1u32;
        loop {
            let t = Float::with_val(p, &h * j);
            if negligible(&t) {
                break;
            }
            let v = pair(&t);
            let small = Float::with_val(p, v.abs_ref()) < Float::with_val(p, raw.abs_ref()) >> (p + 8);
            raw += v;
            if small && j > 8 {
                break;
            }
            j += 2;
        }
        let cur = Float::with_val(p, &raw * &h);
        let diff = up(Float::with_val(p, &cur - &prev).abs());
        if diff <= cfg.tol {
            let floor = up(Float::with_val(p, cur.abs_ref()) >> (p - 4));
            return Ok(PrecisionValue::new(cur, up(diff + floor)));
        }
        prev = cur;
    }
    Err(Error::NonConvergence(format!("tanh-sinh did not reach tolerance {:e}", cfg.tol)))
}

type Rule = Arc<Vec<(Float, Float)>>;

/// Gauss-Legendre rule with `n` nodes on [0, 1], nodes ascending.
pub fn gauss_legendre(n: usize, prec: u32) -> Rule {
    static CACHE: OnceLock<Mutex<HashMap<(usize, u32), Rule>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(r) = cache.lock().expect("quadrature cache poisoned").get(&(n, prec)) {
        return r.clone();
    }
    let rule = Arc::new(compute_gauss_legendre(n, prec));
    cache.lock().expect("quadrature cache poisoned").insert((n, prec), rule.clone());
    rule
}

fn compute_gauss_legendre(n: usize, prec: u32) -> Vec<(Float, Float)> {
    assert!(n >= 1, "Gauss-Legendre rule needs at least one node");
    let wp = prec + 32;
    let tol = Float::with_val(wp, 1) >> (prec + 8);
    let mut out = Vec::with_capacity(n);
    for i in 1..=n {
        let guess = (std::f64::consts::PI * (i as f64 - 0.25) / (n as f64 + 0.5)).cos();
        let mut x = Float::with_val(wp, guess);
        let mut dp = Float::new(wp);
        for _ in 0..200 {
            let (p, d) = legendre(n, &x, wp);
            let dx = Float::with_val(wp, &p / &d);
            x -= &dx;
            dp = d;
            if dx.abs() < tol {
                let (_, d) = legendre(n, &x, wp);
                dp = d;
                break;
            }
        }
        // w = 2 / ((1 - x²) P'(x)²) on [-1, 1]; halve for [0, 1].
        let one_minus = Float::with_val(wp, 1u32 - Float::with_val(wp, x.square_ref()));
        let w = Float::with_val(wp, 1u32) / (one_minus * dp.square());
        let node = Float::with_val(prec, (Float::with_val(wp, 1u32) - &x) / 2u32);
        out.push((node, Float::with_val(prec, w)));
    }
    out.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite nodes"));
    out
}

fn legendre(n: usize, x: &Float, wp: u32) -> (Float, Float) {
    let mut p0 = Float::with_val(wp, 1);
    let mut p1 = x.clone();
    for k in 2..=n {
        let kf = k as u32;
        let p2 = (Float::with_val(wp, x * &p1) * (2 * kf - 1) - Float::with_val(wp, &p0 * (kf - 1))) / kf;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (Float::with_val(wp, 1), Float::new(wp));
    }
    let denom = Float::with_val(wp, x.square_ref()) - 1u32;
    let d = Float::with_val(wp, Float::with_val(wp, x * &p1) - &p0) * n as u32 / denom;
    (p1, d)
}

/// Integral over [0, ∞) of a function decaying like `C ℓ^m e^{-αℓ}`: tanh-sinh
/// over [0, L] on unit-width panels plus an analytic bound for the tail.
pub fn semi_infinite<F>(f: F, tail: TailBound, prec: u32, tol: f64) -> Result<PrecisionValue>
where
    F: Fn(&Float) -> Float + Sync,
{
    let l = tail.cutoff(tol / 4.0);
    let panels = (l / 4.0).ceil().max(1.0) as usize;
    let width = l / panels as f64;
    let cfg = TanhSinh::new(prec, tol / (4.0 * panels as f64));
    let mut acc = PrecisionValue::zero(prec);
    for i in 0..panels {
        let a = Float::with_val(prec, width * i as f64);
        let b = Float::with_val(prec, width * (i + 1) as f64);
        let part = tanh_sinh(|n| f(n.x), &a, &b, &cfg)?;
        acc = acc.add(&part);
    }
    Ok(acc.widen(&Float::with_val(64, tail.bound(l))))
}

/// `|f(ℓ)| ≤ c ℓ^m e^{-αℓ}` for `ℓ ≥ 1`.
#[derive(Clone, Copy, Debug)]
pub struct TailBound {
    pub c: f64,
    pub m: f64,
    pub alpha: f64,
}

impl TailBound {
    /// Upper bound on `∫_L^∞ c ℓ^m e^{-αℓ}` valid once `αL > 2m`.
    pub fn bound(&self, l: f64) -> f64 {
        let denom = self.alpha - self.m / l;
        self.c * l.powf(self.m) * (-self.alpha * l).exp() / denom
    }

    pub fn cutoff(&self, tol: f64) -> f64 {
        let mut l = (2.0 * self.m / self.alpha).max(4.0);
        while self.bound(l) > tol {
            l *= 1.1;
        }
        l
    }
}

/// `x^k` for a nonnegative integer power, at the precision of `x`.
pub fn powu(x: &Float, k: u32) -> Float {
    Float::with_val(x.prec(), x.pow(k))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_legendre_integrates_polynomials_exactly() {
        let rule = gauss_legendre(7, 128);
        // ∫_0^1 x^13 = 1/14
        let mut s = Float::new(128);
        for (x, w) in rule.iter() {
            s += powu(x, 13) * w;
        }
        let err = Float::with_val(128, s - Float::with_val(128, 1) / 14u32).abs();
        assert!(err < Float::with_val(64, 1) >> 120u32);
    }

    #[test]
    fn tanh_sinh_handles_endpoint_singularity() {
        // ∫_0^1 -ln(x) / sqrt(x) dx = 4, written through the distance to a.
        let a = Float::with_val(128, 0);
        let b = Float::with_val(128, 1);
        let r = tanh_sinh(
            |n| {
                let x = n.from_a;
                -Float::with_val(128, x.ln_ref()) / Float::with_val(128, x.sqrt_ref())
            },
            &a,
            &b,
            &TanhSinh::new(128, 1e-25),
        )
        .unwrap();
        assert!((r.to_f64() - 4.0).abs() < 1e-15);
        assert!(r.contains(&Float::with_val(128, 4)));
    }

    #[test]
    fn semi_infinite_exponential() {
        // ∫_0^∞ ℓ e^{-ℓ} = 1
        let r = semi_infinite(
            |l| Float::with_val(128, l * Float::with_val(128, -l).exp()),
            TailBound { c: 1.0, m: 1.0, alpha: 1.0 },
            128,
            1e-22,
        )
        .unwrap();
        assert!(r.contains(&Float::with_val(128, 1)), "{r}");
        assert!(r.abs_error_f64() < 1e-21);
    }
}
