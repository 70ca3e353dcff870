use std::cmp::Ordering;
use std::fmt;

use rug::float::Round;
use rug::ops::{AssignRound, CompleteRound, Pow};
use rug::Float;

use super::rational::Rational;
use crate::error::{Error, Result};

/// Precision used for error bounds; they are always rounded upward.
pub const ERR_PREC: u32 = 64;

/// Arbitrary-precision float with an absolute error bound. The true quantity
/// lies in `[value - abs_error, value + abs_error]`.
#[derive(Clone, Debug, PartialEq)]
pub struct PrecisionValue {
    value: Float,
    abs_error: Float,
}

pub(crate) fn up<T>(v: T) -> Float
where
    Float: rug::Assign<T> + rug::ops::AssignRound<T, Round = Round, Ordering = Ordering>,
{
    Float::with_val_round(ERR_PREC, v, Round::Up).0
}

pub(crate) fn down<T>(v: T) -> Float
where
    Float: rug::Assign<T> + rug::ops::AssignRound<T, Round = Round, Ordering = Ordering>,
{
    Float::with_val_round(ERR_PREC, v, Round::Down).0
}

fn abs_up(x: &Float) -> Float {
    up(x.abs_ref())
}

/// Unit in the last place of `x` at its own precision; zero for zero.
pub(crate) fn ulp(x: &Float) -> Float {
    match x.get_exp() {
        Some(e) => Float::with_val(ERR_PREC, 1) << (e - x.prec() as i32),
        None => Float::new(ERR_PREC),
    }
}

/// Error bound after rounding a result: `ulp/2` unless rounding was exact.
fn rounding(x: &Float, ord: Ordering) -> Float {
    if ord == Ordering::Equal {
        Float::new(ERR_PREC)
    } else {
        ulp(x) >> 1
    }
}

impl PrecisionValue {
    pub fn new(value: Float, abs_error: Float) -> Self {
        let abs_error = abs_up(&abs_error);
        assert!(!abs_error.is_nan(), "error bound is NaN");
        PrecisionValue { value, abs_error }
    }

    pub fn exact(value: Float) -> Self {
        PrecisionValue { value, abs_error: Float::new(ERR_PREC) }
    }

    pub fn zero(prec: u32) -> Self {
        Self::exact(Float::new(prec))
    }

    pub fn from_int(n: i64, prec: u32) -> Self {
        let (v, ord) = Float::with_val_round(prec, n, Round::Nearest);
        let err = rounding(&v, ord);
        PrecisionValue { value: v, abs_error: err }
    }

    pub fn from_rational(r: &Rational, prec: u32) -> Self {
        let (v, ord) = Float::with_val_round(prec, r.as_rug(), Round::Nearest);
        let err = rounding(&v, ord);
        PrecisionValue { value: v, abs_error: err }
    }

    pub fn from_f64(v: f64, err: f64, prec: u32) -> Self {
        assert!(err >= 0.0 && err.is_finite(), "invalid error bound {err}");
        PrecisionValue { value: Float::with_val(prec, v), abs_error: up(err) }
    }

    /// Parses `"1.2345"`, `"1.2345 ± 1e-4"` or `"1.2345 +- 1e-4"`. A bare
    /// decimal carries half a unit in its last written digit as error.
    pub fn parse(s: &str, prec: u32) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Parse(format!("not a numeric value: {s:?}"));
        let (v, e) = match s.split_once('±').or_else(|| s.split_once("+-")) {
            Some((v, e)) => (v.trim(), Some(e.trim())),
            None => (s, None),
        };
        let parsed = Float::parse(v).map_err(|_| bad())?;
        let digits_prec = prec.max((v.len() as f64 * 3.33) as u32 + 16);
        let (value, ord) = Float::with_val_round(digits_prec, parsed, Round::Nearest);
        let mut err = rounding(&value, ord);
        match e {
            Some(e) => {
                let e = Float::parse(e).map_err(|_| bad())?;
                let e = up(e);
                if e.is_sign_negative() || !e.is_finite() {
                    return Err(bad());
                }
                err = up(&err + &e);
            }
            None => {
                let mantissa = v.split(['e', 'E']).next().unwrap_or(v);
                let exp10: i32 = match v.split_once(['e', 'E']) {
                    Some((_, x)) => x.parse().map_err(|_| bad())?,
                    None => 0,
                };
                let frac = mantissa.split_once('.').map(|(_, f)| f.len() as i32).unwrap_or(0);
                let half_unit = up(Float::with_val(ERR_PREC, 10).pow(exp10 - frac)) >> 1;
                err = up(&err + &half_unit);
            }
        }
        if !value.is_finite() {
            return Err(bad());
        }
        Ok(PrecisionValue { value, abs_error: err })
    }

    pub fn value(&self) -> &Float {
        &self.value
    }

    pub fn abs_error(&self) -> &Float {
        &self.abs_error
    }

    pub fn prec(&self) -> u32 {
        self.value.prec()
    }

    pub fn to_f64(&self) -> f64 {
        self.value.to_f64()
    }

    pub fn abs_error_f64(&self) -> f64 {
        self.abs_error.to_f64_round(Round::Up)
    }

    /// `abs_error / |value|`, infinite for a zero value with nonzero error.
    pub fn relative_error(&self) -> f64 {
        if self.abs_error.is_zero() {
            return 0.0;
        }
        let v = down(self.value.abs_ref());
        if v.is_zero() {
            return f64::INFINITY;
        }
        up(&self.abs_error / &v).to_f64()
    }

    /// Number of correct significant decimal digits implied by the bound.
    pub fn correct_digits(&self) -> f64 {
        let r = self.relative_error();
        if r == 0.0 {
            f64::INFINITY
        } else {
            -r.log10()
        }
    }

    pub fn contains(&self, x: &Float) -> bool {
        let diff = up((&self.value - x).complete(self.prec().max(x.prec()) + 8).abs());
        diff <= self.abs_error
    }

    /// True when the two enclosures overlap after widening by `slack`.
    pub fn agrees_with(&self, other: &PrecisionValue, slack: f64) -> bool {
        let prec = self.prec().max(other.prec()) + 8;
        let diff = Float::with_val(prec, &self.value - &other.value).abs();
        let budget = up(&self.abs_error + &other.abs_error) + slack;
        diff <= budget
    }

    /// Copy with the error widened by `extra`.
    pub fn widen(&self, extra: &Float) -> Self {
        PrecisionValue { value: self.value.clone(), abs_error: up(&self.abs_error + extra) }
    }

    pub fn with_prec(&self, prec: u32) -> Self {
        let (v, ord) = Float::with_val_round(prec, &self.value, Round::Nearest);
        let err = up(&self.abs_error + &rounding(&v, ord));
        PrecisionValue { value: v, abs_error: err }
    }

    fn out_prec(&self, other: &PrecisionValue) -> u32 {
        self.prec().max(other.prec())
    }

    pub fn add(&self, other: &PrecisionValue) -> Self {
        let (v, ord) = Float::with_val_round(self.out_prec(other), &self.value + &other.value, Round::Nearest);
        let err = up(&self.abs_error + &other.abs_error);
        let err = up(&err + &rounding(&v, ord));
        PrecisionValue { value: v, abs_error: err }
    }

    pub fn sub(&self, other: &PrecisionValue) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        PrecisionValue { value: Float::with_val(self.prec(), -&self.value), abs_error: self.abs_error.clone() }
    }

    pub fn mul(&self, other: &PrecisionValue) -> Self {
        let (v, ord) = Float::with_val_round(self.out_prec(other), &self.value * &other.value, Round::Nearest);
        let a = abs_up(&self.value);
        let b = abs_up(&other.value);
        let mut err = up(&a * &other.abs_error);
        err = up(&err + &up(&b * &self.abs_error));
        err = up(&err + &up(&self.abs_error * &other.abs_error));
        err = up(&err + &rounding(&v, ord));
        PrecisionValue { value: v, abs_error: err }
    }

    pub fn scale(&self, r: &Rational) -> Self {
        self.mul(&PrecisionValue::from_rational(r, self.prec()))
    }

    /// Division; fails when the divisor's enclosure contains zero.
    pub fn div(&self, other: &PrecisionValue) -> Result<Self> {
        let b = down(other.value.abs_ref());
        let b_low = down(&b - &other.abs_error);
        if b_low <= 0 {
            return Err(Error::InvalidArgument("division by a value whose enclosure contains zero".into()));
        }
        let (v, ord) = Float::with_val_round(self.out_prec(other), &self.value / &other.value, Round::Nearest);
        let a = abs_up(&self.value);
        let b_up = abs_up(&other.value);
        let num = up(&up(&a * &other.abs_error) + &up(&b_up * &self.abs_error));
        let den = down(&b * &b_low);
        let err = up(&up(&num / &den) + &rounding(&v, ord));
        Ok(PrecisionValue { value: v, abs_error: err })
    }

    pub fn powi(&self, e: u32) -> Self {
        let mut acc = PrecisionValue::from_int(1, self.prec());
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Applies a correctly rounded function whose derivative on the
    /// enclosure is bounded in absolute value by `lipschitz`.
    fn map(&self, f: impl Fn(&Float) -> Float, lipschitz: Float) -> Self {
        let v = f(&self.value);
        let err = up(&up(&lipschitz * &self.abs_error) + &ulp(&v));
        PrecisionValue { value: v, abs_error: err }
    }

    fn radius_up(&self) -> Float {
        up(&abs_up(&self.value) + &self.abs_error)
    }

    pub fn exp(&self) -> Self {
        let hi = up(&self.value + &self.abs_error);
        let l = up(hi.exp_ref());
        self.map(|x| Float::with_val(x.prec(), x.exp_ref()), l)
    }

    pub fn sinh(&self) -> Self {
        let l = up(self.radius_up().cosh_ref());
        self.map(|x| Float::with_val(x.prec(), x.sinh_ref()), l)
    }

    pub fn cosh(&self) -> Self {
        let l = up(self.radius_up().sinh_ref());
        self.map(|x| Float::with_val(x.prec(), x.cosh_ref()), l)
    }

    pub fn ln(&self) -> Result<Self> {
        let lo = down(&self.value - &self.abs_error);
        if lo <= 0 {
            return Err(Error::InvalidArgument("logarithm of a non-positive enclosure".into()));
        }
        let l = up(lo.recip_ref());
        Ok(self.map(|x| Float::with_val(x.prec(), x.ln_ref()), l))
    }

    pub fn sqrt(&self) -> Result<Self> {
        let lo = down(&self.value - &self.abs_error);
        if lo <= 0 {
            return Err(Error::InvalidArgument("square root of a non-positive enclosure".into()));
        }
        let l = up(lo.sqrt().recip() >> 1u32);
        Ok(self.map(|x| Float::with_val(x.prec(), x.sqrt_ref()), l))
    }

    pub fn is_sign_negative(&self) -> bool {
        self.value.is_sign_negative() && !self.value.is_zero()
    }

    /// Lower end of the enclosure.
    pub fn lower(&self) -> Float {
        let mut f = Float::new(self.prec() + 8);
        f.assign_round(&self.value - &self.abs_error, Round::Down);
        f
    }

    /// Upper end of the enclosure.
    pub fn upper(&self) -> Float {
        let mut f = Float::new(self.prec() + 8);
        f.assign_round(&self.value + &self.abs_error, Round::Up);
        f
    }

    /// Decimal rendering with `digits` significant digits.
    pub fn to_decimal(&self, digits: usize) -> String {
        format_sig(&self.value, digits)
    }

    /// Number of significant digits worth printing given the error bound.
    pub fn display_digits(&self) -> usize {
        let d = self.correct_digits();
        let max = (self.prec() as f64 * std::f64::consts::LOG10_2).floor() as usize;
        if d.is_infinite() {
            max.max(1)
        } else {
            ((d.floor() as i64 + 1).max(1) as usize).min(max.max(1))
        }
    }
}

/// Formats `x` with `digits` significant digits in positional notation when
/// the exponent is moderate, scientific otherwise.
pub fn format_sig(x: &Float, digits: usize) -> String {
    if x.is_zero() {
        return "0".to_string();
    }
    let digits = digits.max(1);
    let (neg, mant, exp) = x.to_sign_string_exp(10, Some(digits));
    let mut mant = mant.trim_end_matches('0').to_string();
    if mant.is_empty() {
        mant.push('0');
    }
    let exp = exp.unwrap_or(0);
    let sign = if neg { "-" } else { "" };
    let len = mant.len() as i32;
    let body = if (-6..=0).contains(&exp) {
        format!("0.{}{}", "0".repeat((-exp) as usize), mant)
    } else if exp > 0 && exp <= 30 {
        if exp >= len {
            format!("{}{}", mant, "0".repeat((exp - len) as usize))
        } else {
            format!("{}.{}", &mant[..exp as usize], &mant[exp as usize..])
        }
    } else if mant.len() > 1 {
        format!("{}.{}e{}", &mant[..1], &mant[1..], exp - 1)
    } else {
        format!("{}e{}", mant, exp - 1)
    };
    format!("{sign}{body}")
}

impl fmt::Display for PrecisionValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v = self.to_decimal(self.display_digits());
        if self.abs_error.is_zero() {
            f.write_str(&v)
        } else {
            write!(f, "{} ± {}", v, format_sig(&self.abs_error, 2))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pv(x: f64, e: f64) -> PrecisionValue {
        PrecisionValue::from_f64(x, e, 128)
    }

    #[test]
    fn add_and_mul_propagate() {
        let a = pv(1.5, 1e-10);
        let b = pv(2.0, 1e-12);
        let s = a.add(&b);
        assert_eq!(s.to_f64(), 3.5);
        assert!(s.abs_error_f64() >= 1.01e-10);
        let p = a.mul(&b);
        assert_eq!(p.to_f64(), 3.0);
        assert!(p.abs_error_f64() >= 2e-10 + 1.5e-12);
    }

    #[test]
    fn division_by_uncertain_zero_fails() {
        assert!(pv(1.0, 0.0).div(&pv(0.0, 1e-3)).is_err());
        let q = pv(1.0, 0.0).div(&pv(3.0, 0.0)).unwrap();
        assert!((q.to_f64() - 1.0 / 3.0).abs() < 1e-16);
        assert!(q.abs_error_f64() < 1e-37);
    }

    #[test]
    fn enclosure_contains_truth_for_transcendentals() {
        let x = PrecisionValue::from_rational(&Rational::new(1, 3), 96);
        let s = x.sinh();
        let truth = Float::with_val(300, Float::with_val(300, 1) / 3u32).sinh();
        assert!(s.contains(&truth));
        let c = x.cosh();
        let truth = Float::with_val(300, Float::with_val(300, 1) / 3u32).cosh();
        assert!(c.contains(&truth));
    }

    #[test]
    fn parse_decimal_and_plus_minus() {
        let v = PrecisionValue::parse("1.25", 64).unwrap();
        assert_eq!(v.to_f64(), 1.25);
        assert!((v.abs_error_f64() - 0.005).abs() < 1e-12);
        let v = PrecisionValue::parse("17.316 ± 1e-6", 64).unwrap();
        assert!(v.abs_error_f64() >= 1e-6);
        assert!(PrecisionValue::parse("abc", 64).is_err());
    }

    #[test]
    fn sig_formatting() {
        let x = Float::with_val(64, 2.4674011002723395);
        assert_eq!(format_sig(&x, 11), "2.4674011003");
        assert_eq!(format_sig(&Float::with_val(64, 1e-9), 2), "1e-9");
        assert_eq!(format_sig(&Float::with_val(64, 0.0674), 3), "0.0674");
    }
}
