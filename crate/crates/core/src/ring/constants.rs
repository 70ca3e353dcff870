//! High-precision evaluation of π, log 2, odd zeta values and even Dirichlet
//! beta values, each by two unrelated algorithms.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use rug::float::{Constant as MpfrConstant, Round};
use rug::ops::Pow;
use rug::{Float, Integer};

use super::monomial::Constant;
use super::precision::{up, PrecisionValue, ERR_PREC};
use crate::error::{Error, Result};

const GUARD_BITS: u32 = 16;

fn check(kind: Constant, precision_bits: u32) -> Result<()> {
    if precision_bits < 16 {
        return Err(Error::InvalidArgument(format!("precision {precision_bits} bits is below the minimum of 16")));
    }
    kind.validate().map(|_| ())
}

/// Evaluates a ring generator with relative error at most `2^-precision_bits`.
/// Results are memoised; repeated calls return identical values.
pub fn eval_constant(kind: Constant, precision_bits: u32) -> Result<PrecisionValue> {
    static CACHE: OnceLock<Mutex<HashMap<(Constant, u32), PrecisionValue>>> = OnceLock::new();
    check(kind, precision_bits)?;
    let cache = CACHE.get_or_init(Default::default);
    if let Some(v) = cache.lock().expect("constant cache poisoned").get(&(kind, precision_bits)) {
        return Ok(v.clone());
    }
    let wp = precision_bits + 40;
    let (v, e) = match kind {
        Constant::Pi => correctly_rounded(Float::with_val(wp, MpfrConstant::Pi)),
        Constant::Log2 => correctly_rounded(Float::with_val(wp, MpfrConstant::Log2)),
        Constant::Zeta(s) => zeta_alternating(s, wp),
        Constant::Beta(s) => beta_alternating(s, wp),
    };
    let out = finish(v, e, precision_bits);
    cache.lock().expect("constant cache poisoned").insert((kind, precision_bits), out.clone());
    Ok(out)
}

/// Same contract as [`eval_constant`] computed by a second, independent
/// algorithm (Machin's formula, a binary log series, Euler-Maclaurin for
/// Hurwitz zeta). Not cached; meant for cross-checks.
pub fn eval_constant_alt(kind: Constant, precision_bits: u32) -> Result<PrecisionValue> {
    check(kind, precision_bits)?;
    let wp = precision_bits + 40;
    let (v, e) = match kind {
        Constant::Pi => pi_machin(wp),
        Constant::Log2 => log2_series(wp),
        Constant::Zeta(s) => zeta_euler_maclaurin(s, wp),
        Constant::Beta(s) => beta_euler_maclaurin(s, wp),
    };
    Ok(finish(v, e, precision_bits))
}

fn correctly_rounded(v: Float) -> (Float, Float) {
    let e = super::precision::ulp(&v);
    (v, e)
}

fn finish(v: Float, err: Float, precision_bits: u32) -> PrecisionValue {
    let (out, ord) = Float::with_val_round(precision_bits + GUARD_BITS, &v, Round::Nearest);
    let mut e = err;
    if ord != std::cmp::Ordering::Equal {
        e = up(&e + &super::precision::ulp(&out));
    }
    PrecisionValue::new(out, e)
}

fn pow2(e: i32) -> Float {
    Float::with_val(ERR_PREC, 1) << e
}

/// Sum of `Σ (-1)^k a_k` for `a_k` the moments of a positive measure on
/// [0, 1], by the Cohen-Rodriguez Villegas-Zagier acceleration. Returns the
/// value and an error bound assuming `a_0 <= 1`.
fn alternating(a: impl Fn(u64, u32) -> Float, wp: u32) -> (Float, Float) {
    let target = wp - 20;
    let n = ((target as f64 + 4.0) * std::f64::consts::LN_2 / (3.0 + 8f64.sqrt()).ln()).ceil() as u64 + 1;
    let inner = wp + (64 - n.leading_zeros()) + 4;
    let base = Float::with_val(inner, 3) + Float::with_val(inner, 8).sqrt();
    let dn = base.pow(n);
    let d = (dn.clone() + dn.recip()) / 2u32;
    let mut b = Float::with_val(inner, -1);
    let mut c = Float::with_val(inner, -&d);
    let mut s = Float::with_val(inner, 0);
    for k in 0..n {
        c = Float::with_val(inner, &b - &c);
        s += Float::with_val(inner, &c * &a(k, inner));
        let num = Integer::from((k + n) as i64) * Integer::from(k as i64 - n as i64) * 2u32;
        let den = Integer::from(2 * k + 1) * Integer::from(k + 1);
        b *= num;
        b /= den;
    }
    let v = Float::with_val(wp, s / d);
    // Truncation 2/(3+√8)^n plus accumulated rounding in the recurrence.
    let err = up(pow2(-(target as i32) - 3) + pow2(-(inner as i32) + 8) * (n as f64 * 4.0 + 4.0));
    (v, err)
}

fn zeta_alternating(s: u32, wp: u32) -> (Float, Float) {
    // η(s) = Σ (-1)^k (k+1)^-s, ζ(s) = η(s) / (1 - 2^(1-s)).
    let (eta, e) = alternating(|k, p| Float::with_val(p, k + 1).pow(-(s as i32)), wp);
    let factor = Float::with_val(wp, 1) - (Float::with_val(wp, 1) >> (s - 1));
    let v = Float::with_val(wp, eta / factor);
    (v, up(e * 2u32))
}

fn beta_alternating(s: u32, wp: u32) -> (Float, Float) {
    alternating(|k, p| Float::with_val(p, 2 * k + 1).pow(-(s as i32)), wp)
}

fn arctan_recip(x: u32, wp: u32) -> (Float, Float) {
    let p = Float::with_val(wp, x).recip();
    let p2 = Float::with_val(wp, &p * &p);
    let mut pow = p;
    let mut sum = Float::with_val(wp, 0);
    let mut k = 0u32;
    let tiny = pow2(-(wp as i32));
    loop {
        let term = Float::with_val(wp, &pow / (2 * k + 1));
        if term < tiny {
            // Alternating with decreasing terms: tail below the first omitted one.
            let err = up(tiny * (4 * k + 8));
            return (sum, err);
        }
        if k.is_multiple_of(2) {
            sum += term;
        } else {
            sum -= term;
        }
        pow *= &p2;
        k += 1;
    }
}

fn pi_machin(wp: u32) -> (Float, Float) {
    let (a, ea) = arctan_recip(5, wp);
    let (b, eb) = arctan_recip(239, wp);
    let v = Float::with_val(wp, a * 16u32 - b * 4u32);
    (v, up(ea * 16u32 + eb * 4u32 + pow2(-(wp as i32) + 6)))
}

fn log2_series(wp: u32) -> (Float, Float) {
    // log 2 = Σ_{k≥1} 1 / (k 2^k); tail after N terms is below 2^-N.
    let n = wp + 4;
    let mut sum = Float::with_val(wp, 0);
    for k in 1..=n {
        sum += Float::with_val(wp, Float::with_val(wp, 1) >> k) / k;
    }
    (sum, up(pow2(-(n as i32)) + pow2(-(wp as i32)) * (2 * n + 4)))
}

fn bernoulli_table(m: usize) -> Vec<rug::Rational> {
    static TABLE: OnceLock<Mutex<Vec<rug::Rational>>> = OnceLock::new();
    let table = TABLE.get_or_init(|| Mutex::new(vec![rug::Rational::from(1)]));
    let mut t = table.lock().expect("bernoulli table poisoned");
    while t.len() <= m {
        let n = t.len();
        // B_n = -1/(n+1) Σ_{k<n} C(n+1, k) B_k
        let mut acc = rug::Rational::new();
        let mut binom = Integer::from(1);
        for (k, bk) in t.iter().enumerate() {
            if k > 1 && k % 2 == 1 {
                binom = binom * (n + 1 - k) as u64 / (k + 1) as u64;
                continue;
            }
            acc += rug::Rational::from(bk * &binom);
            binom = binom * (n + 1 - k) as u64 / (k + 1) as u64;
        }
        t.push(-acc / rug::Rational::from(n + 1));
    }
    t[..=m].to_vec()
}

/// Bernoulli number `B_n` (with `B_1 = -1/2`).
pub fn bernoulli(n: usize) -> rug::Rational {
    bernoulli_table(n).pop().expect("nonempty table")
}

/// Hurwitz `ζ(s, a)` for integer `s ≥ 2` and `a = num/4`, by Euler-Maclaurin.
fn hurwitz(s: u32, a_quarters: u32, wp: u32) -> (Float, Float) {
    let m = (wp / 3 + 10) as usize;
    let n = m as u32 + s + 10;
    let b = bernoulli_table(2 * m + 2);
    let a = Float::with_val(wp, a_quarters) / 4u32;
    let si = s as i32;
    let mut sum = Float::with_val(wp, 0);
    for k in 0..n {
        let x = Float::with_val(wp, &a + k);
        sum += x.pow(-si);
    }
    let x = Float::with_val(wp, &a + n);
    sum += Float::with_val(wp, x.clone().pow(1 - si)) / (s - 1);
    sum += Float::with_val(wp, x.clone().pow(-si)) / 2u32;
    let x2 = Float::with_val(wp, &x * &x);
    // t_j = (s)_{2j-1} x^{-s-2j+1}; t_1 = s x^{-s-1}
    let mut t = Float::with_val(wp, x.clone().pow(-si - 1)) * s;
    let mut fact = Integer::from(2);
    let mut last = Float::new(wp);
    for j in 1..=m + 1 {
        let coeff = Float::with_val(wp, &b[2 * j]) / &fact;
        let term = Float::with_val(wp, &coeff * &t);
        if j == m + 1 {
            last = term;
            break;
        }
        sum += term;
        let j2 = 2 * j as u32;
        t *= (s + j2 - 1) * (s + j2);
        t /= &x2;
        fact *= (j2 + 1) * (j2 + 2);
    }
    let scale = Float::with_val(ERR_PREC, 4u32).pow(si) + 2u32;
    let round = up(pow2(-(wp as i32)) * scale * ((n + m as u32) * 4 + 8));
    let err = up(last.abs() * 2u32 + round);
    (sum, err)
}

fn zeta_euler_maclaurin(s: u32, wp: u32) -> (Float, Float) {
    hurwitz(s, 4, wp)
}

fn beta_euler_maclaurin(s: u32, wp: u32) -> (Float, Float) {
    // β(s) = 4^-s (ζ(s, 1/4) - ζ(s, 3/4))
    let (a, ea) = hurwitz(s, 1, wp);
    let (b, eb) = hurwitz(s, 3, wp);
    let scale = Float::with_val(wp, 4u32).pow(-(s as i32));
    let v = Float::with_val(wp, (a - b) * &scale);
    (v, up((ea + eb) * scale + pow2(-(wp as i32) + 2)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn all_kinds() -> Vec<Constant> {
        vec![
            Constant::Pi,
            Constant::Log2,
            Constant::Zeta(3),
            Constant::Zeta(5),
            Constant::Zeta(11),
            Constant::Beta(2),
            Constant::Beta(4),
            Constant::Beta(8),
        ]
    }

    #[test]
    fn requested_relative_accuracy() {
        for k in all_kinds() {
            for bits in [16, 64, 200] {
                let v = eval_constant(k, bits).unwrap();
                let bound = Float::with_val(ERR_PREC, v.value().abs_ref()) >> bits;
                assert!(*v.abs_error() <= bound, "{k} at {bits} bits");
                let v = eval_constant_alt(k, bits).unwrap();
                let bound = Float::with_val(ERR_PREC, v.value().abs_ref()) >> bits;
                assert!(*v.abs_error() <= bound, "{k} alt at {bits} bits");
            }
        }
    }

    #[test]
    fn two_algorithms_agree_at_128_bits() {
        for k in all_kinds() {
            let a = eval_constant(k, 128).unwrap();
            let b = eval_constant_alt(k, 128).unwrap();
            assert!(a.agrees_with(&b, 0.0), "{k}: {a} vs {b}");
            let diff = Float::with_val(200, a.value() - b.value()).abs();
            let rel = diff / Float::with_val(200, a.value());
            assert!(rel < Float::with_val(64, 1) >> 127u32, "{k}");
        }
    }

    #[test]
    fn against_mpfr_special_functions() {
        let z3 = eval_constant(Constant::Zeta(3), 200).unwrap();
        let truth = Float::with_val(260, 3u32).zeta();
        assert!(z3.contains(&truth));
        let cat = eval_constant(Constant::Beta(2), 200).unwrap();
        let truth = Float::with_val(260, MpfrConstant::Catalan);
        assert!(cat.contains(&truth));
    }

    #[test]
    fn known_decimals() {
        let b2 = eval_constant(Constant::Beta(2), 64).unwrap().to_f64();
        assert!((b2 - 0.915_965_594_177_219).abs() < 1e-15);
        let z3 = eval_constant(Constant::Zeta(3), 64).unwrap().to_f64();
        assert!((z3 - 1.202_056_903_159_594).abs() < 1e-15);
        let pi = eval_constant(Constant::Pi, 64).unwrap().to_f64();
        assert_eq!(pi, std::f64::consts::PI);
    }

    #[test]
    fn deterministic_and_validated() {
        let a = eval_constant_alt(Constant::Zeta(5), 96).unwrap();
        let b = eval_constant_alt(Constant::Zeta(5), 96).unwrap();
        assert_eq!(a, b);
        assert!(eval_constant(Constant::Zeta(4), 64).is_err());
        assert!(eval_constant(Constant::Beta(3), 64).is_err());
        assert!(eval_constant(Constant::Pi, 8).is_err());
    }

    #[test]
    fn bernoulli_values() {
        assert_eq!(bernoulli(1), rug::Rational::from((-1, 2)));
        assert_eq!(bernoulli(2), rug::Rational::from((1, 6)));
        assert_eq!(bernoulli(12), rug::Rational::from((-691, 2730)));
        assert_eq!(bernoulli(13), rug::Rational::new());
    }
}
