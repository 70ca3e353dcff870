//! Closed-form moments `∫_0^∞ ℓ^p / D(ℓ) dℓ` for the hyperbolic denominators
//! that occur in volume integrals, and the linear reducer built on them.

use std::fmt;

use rug::Float;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quad::{semi_infinite, TailBound};
use crate::ring::{GradedMonomial, PiPolynomial, PrecisionValue, Rational, SymbolicValue};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum DenomKind {
    /// `sinh(ℓ)`
    SinhFull,
    /// `sinh²(ℓ/2)`
    SinhSqHalf,
    /// `cosh²(ℓ/2)`
    CoshSqHalf,
    /// `sinh(ℓ/2)`
    SinhHalf,
    /// `cosh(ℓ/2)`
    CoshHalf,
    /// `sinh(ℓ/2)·cosh(ℓ/2)`, equal to `sinh(ℓ)/2`
    SinhHalfCoshHalf,
}

impl DenomKind {
    pub const ALL: [DenomKind; 6] = [
        DenomKind::SinhFull,
        DenomKind::SinhSqHalf,
        DenomKind::CoshSqHalf,
        DenomKind::SinhHalf,
        DenomKind::CoshHalf,
        DenomKind::SinhHalfCoshHalf,
    ];

    /// The denominator evaluated at `l`.
    pub fn eval(self, l: &Float) -> Float {
        let p = l.prec();
        let half = Float::with_val(p, l / 2u32);
        match self {
            DenomKind::SinhFull => Float::with_val(p, l.sinh_ref()),
            DenomKind::SinhSqHalf => Float::with_val(p, half.sinh_ref()).square(),
            DenomKind::CoshSqHalf => Float::with_val(p, half.cosh_ref()).square(),
            DenomKind::SinhHalf => Float::with_val(p, half.sinh_ref()),
            DenomKind::CoshHalf => Float::with_val(p, half.cosh_ref()),
            DenomKind::SinhHalfCoshHalf => {
                Float::with_val(p, half.sinh_ref()) * Float::with_val(p, half.cosh_ref())
            }
        }
    }

    /// Smallest admissible power and required parity (`true` = even).
    fn admissible(self) -> (u32, bool) {
        match self {
            DenomKind::SinhFull | DenomKind::SinhHalf | DenomKind::SinhHalfCoshHalf => (2, true),
            DenomKind::SinhSqHalf => (3, false),
            DenomKind::CoshSqHalf | DenomKind::CoshHalf => (1, false),
        }
    }

    /// Exponential decay rate of `1/D(ℓ)` and its prefactor bound for ℓ ≥ 1.
    fn decay(self) -> (f64, f64) {
        match self {
            DenomKind::SinhFull => (1.0, 2.4),
            DenomKind::SinhSqHalf => (1.0, 10.1),
            DenomKind::CoshSqHalf => (1.0, 4.0),
            DenomKind::SinhHalf => (0.5, 3.2),
            DenomKind::CoshHalf => (0.5, 2.0),
            DenomKind::SinhHalfCoshHalf => (1.0, 4.7),
        }
    }
}

impl fmt::Display for DenomKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DenomKind::SinhFull => "sinh(l)",
            DenomKind::SinhSqHalf => "sinh^2(l/2)",
            DenomKind::CoshSqHalf => "cosh^2(l/2)",
            DenomKind::SinhHalf => "sinh(l/2)",
            DenomKind::CoshHalf => "cosh(l/2)",
            DenomKind::SinhHalfCoshHalf => "sinh(l/2)cosh(l/2)",
        })
    }
}

fn factorial(n: u32) -> Rational {
    let mut r = rug::Integer::from(1);
    for k in 2..=n {
        r *= k;
    }
    Rational::from_integer(r)
}

fn pow2(e: i64) -> Rational {
    if e >= 0 {
        Rational::from_integer(rug::Integer::from(1) << e as u32)
    } else {
        Rational::checked_new(rug::Integer::from(1), rug::Integer::from(1) << (-e) as u32).expect("nonzero")
    }
}

fn zeta_term(c: Rational, j: u32) -> SymbolicValue {
    SymbolicValue::term(GradedMonomial::zeta(j), c)
}

/// `∫ t^{2k} / sinh t = 2 (2k)! (1 - 2^{-2k-1}) ζ(2k+1)`
fn sinh_full(p: u32) -> SymbolicValue {
    let c = Rational::from_int(2) * factorial(p) * (Rational::one() - pow2(-(p as i64) - 1));
    zeta_term(c, p + 1)
}

/// `∫ t^{2k+1} / sinh² t = (2k+1)! / 2^{2k} ζ(2k+1)`
fn sinh_sq_full(p: u32) -> SymbolicValue {
    zeta_term(factorial(p) * pow2(1 - p as i64), p)
}

/// `∫ t / cosh² t = log 2`, `∫ t^{2k+1} / cosh² t = (2k+1)!/2^{2k} (1 - 2^{-2k}) ζ(2k+1)`
fn cosh_sq_full(p: u32) -> SymbolicValue {
    if p == 1 {
        return SymbolicValue::term(GradedMonomial::log2(), Rational::one());
    }
    let c = factorial(p) * pow2(1 - p as i64) * (Rational::one() - pow2(1 - p as i64));
    zeta_term(c, p)
}

/// `∫ t^{2k-1} / cosh t = 2 (2k-1)! β(2k)`
fn cosh_full(p: u32) -> SymbolicValue {
    SymbolicValue::term(GradedMonomial::beta(p + 1), Rational::from_int(2) * factorial(p))
}

/// `∫_0^∞ ℓ^power / denom(ℓ) dℓ` exactly. Half-argument denominators are
/// reduced to full-argument ones by `ℓ = 2t`.
pub fn moment(power: u32, denom: DenomKind) -> Result<SymbolicValue> {
    let (min, even) = denom.admissible();
    if power.is_multiple_of(2) != even {
        return Err(Error::WrongParity { power, denom });
    }
    if power < min {
        return Err(Error::DivergentMoment { power, denom });
    }
    let half = pow2(power as i64 + 1);
    Ok(match denom {
        DenomKind::SinhFull => sinh_full(power),
        DenomKind::SinhSqHalf => sinh_sq_full(power).scale(&half),
        DenomKind::CoshSqHalf => cosh_sq_full(power).scale(&half),
        DenomKind::SinhHalf => sinh_full(power).scale(&half),
        DenomKind::CoshHalf => cosh_full(power).scale(&half),
        DenomKind::SinhHalfCoshHalf => sinh_full(power).scale(&Rational::from_int(2)),
    })
}

/// `∫_0^∞ numerator(ℓ) / denom(ℓ) dℓ` by linearity over monomials.
pub fn reduce_integral(numerator: &PiPolynomial, denom: DenomKind) -> Result<SymbolicValue> {
    let mut out = SymbolicValue::zero();
    for (&(pi2, k), c) in numerator.terms() {
        let m = moment(k, denom)?;
        out = out.ring_add(&m.mul_monomial(&GradedMonomial::pi_pow(2 * pi2)).scale(c));
    }
    Ok(out)
}

/// Direct numeric quadrature of the defining integral, independent of the
/// closed forms.
pub fn numeric_moment(power: u32, denom: DenomKind, prec: u32, tol: f64) -> Result<PrecisionValue> {
    let (alpha, c) = denom.decay();
    let f = move |l: &Float| -> Float {
        if l.is_zero() {
            return Float::new(l.prec());
        }
        Float::with_val(l.prec(), crate::quad::powu(l, power)) / denom.eval(l)
    };
    semi_infinite(f, TailBound { c, m: power as f64, alpha }, prec, tol)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(c: (i64, i64), j: u32) -> SymbolicValue {
        SymbolicValue::term(GradedMonomial::zeta(j), Rational::new(c.0, c.1))
    }

    #[test]
    fn tabulated_examples() {
        assert_eq!(moment(2, DenomKind::SinhFull).unwrap(), z((7, 2), 3));
        assert_eq!(
            moment(1, DenomKind::CoshSqHalf).unwrap(),
            SymbolicValue::term(GradedMonomial::log2(), Rational::from_int(4))
        );
        assert_eq!(
            moment(1, DenomKind::CoshHalf).unwrap(),
            SymbolicValue::term(GradedMonomial::beta(2), Rational::from_int(8))
        );
        assert_eq!(moment(3, DenomKind::SinhSqHalf).unwrap(), z((24, 1), 3));
        assert_eq!(moment(2, DenomKind::SinhHalf).unwrap(), z((28, 1), 3));
    }

    #[test]
    fn invalid_requests() {
        assert_eq!(
            moment(0, DenomKind::SinhFull),
            Err(Error::DivergentMoment { power: 0, denom: DenomKind::SinhFull })
        );
        assert_eq!(
            moment(1, DenomKind::SinhSqHalf),
            Err(Error::DivergentMoment { power: 1, denom: DenomKind::SinhSqHalf })
        );
        assert!(matches!(moment(3, DenomKind::SinhFull), Err(Error::WrongParity { .. })));
        assert!(matches!(moment(2, DenomKind::CoshHalf), Err(Error::WrongParity { .. })));
    }

    #[test]
    fn half_angle_substitution() {
        for k in 1..6 {
            let full = moment(2 * k, DenomKind::SinhFull).unwrap();
            let half = moment(2 * k, DenomKind::SinhHalf).unwrap();
            assert_eq!(half, full.scale(&pow2(2 * k as i64 + 1)));
            let mixed = moment(2 * k, DenomKind::SinhHalfCoshHalf).unwrap();
            assert_eq!(mixed, full.scale(&Rational::from_int(2)));
        }
    }

    #[test]
    fn reduce_mixed_numerator() {
        // (ℓ³ + π² ℓ) / cosh²(ℓ/2) -> 18 ζ(3) + 4 π² log 2
        let p = PiPolynomial::monomial("l", 0, 3, Rational::one())
            .add(&PiPolynomial::monomial("l", 1, 1, Rational::one()));
        let r = reduce_integral(&p, DenomKind::CoshSqHalf).unwrap();
        let expect = z((18, 1), 3).ring_add(&SymbolicValue::term(
            GradedMonomial::pi_pow(2).mul(&GradedMonomial::log2()),
            Rational::from_int(4),
        ));
        assert_eq!(r, expect);
        let bad = PiPolynomial::monomial("l", 0, 0, Rational::one());
        assert!(reduce_integral(&bad, DenomKind::SinhFull).is_err());
    }

    #[test]
    fn numeric_agreement_low_powers() {
        for (p, d) in [(2, DenomKind::SinhFull), (1, DenomKind::CoshHalf), (3, DenomKind::SinhSqHalf)] {
            let exact = moment(p, d).unwrap().eval_const(128).unwrap();
            let num = numeric_moment(p, d, 128, 1e-24).unwrap();
            assert!(exact.agrees_with(&num, 0.0), "{p} {d}: {exact} vs {num}");
        }
    }
}
