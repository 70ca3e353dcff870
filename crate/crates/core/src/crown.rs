//! Closed forms for crowns and polygons: fixed-neck crown volumes, total
//! crown volumes, both generating functions, the conjectural polygon formula
//! and the polygon upper bound.

use std::fmt;

use rug::Float;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::moments::DenomKind;
use crate::ring::precision::{up, ulp};
use crate::ring::{GradedMonomial, PiPolynomial, PrecisionValue, Rational, SymbolicValue};

/// `prefactor · numerator(d) / D(d)` with `D` either `sinh(d/2)` (even `n`)
/// or `cosh(d/2)` (odd `n`). For even `n` the numerator carries the explicit
/// factor `d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CrownVolume {
    pub n: u32,
    pub numerator: PiPolynomial,
    pub denom: DenomKind,
    pub prefactor: Rational,
}

fn factorial(n: u32) -> rug::Integer {
    let mut r = rug::Integer::from(1);
    for k in 2..=n {
        r *= k;
    }
    r
}

/// `k!!` with `(-1)!! = 0!! = 1`.
pub fn double_factorial(k: i64) -> rug::Integer {
    let mut r = rug::Integer::from(1);
    let mut j = k;
    while j > 1 {
        r *= j as u64;
        j -= 2;
    }
    r
}

/// Fixed-neck volume of the `n`-crown as a factored closed form.
pub fn crown_volume_fixed_neck(n: u32) -> Result<CrownVolume> {
    if n == 0 {
        return Err(Error::InvalidArgument("crown needs at least one tine".into()));
    }
    let prefactor = Rational::from_integer(factorial(n - 1) * 2u32).recip().expect("nonzero");
    let mut numerator = PiPolynomial::one("d");
    if n.is_multiple_of(2) {
        for j in 1..n / 2 {
            let factor = PiPolynomial::monomial("d", 0, 2, Rational::one())
                .add(&PiPolynomial::monomial("d", 1, 0, Rational::from_int(4 * (j * j) as i64)));
            numerator = numerator.mul(&factor);
        }
        numerator = numerator.shift(1);
        Ok(CrownVolume { n, numerator, denom: DenomKind::SinhHalf, prefactor })
    } else {
        for j in 1..=n / 2 {
            let odd = (2 * j - 1) as i64;
            let factor = PiPolynomial::monomial("d", 0, 2, Rational::one())
                .add(&PiPolynomial::monomial("d", 1, 0, Rational::from_int(odd * odd)));
            numerator = numerator.mul(&factor);
        }
        Ok(CrownVolume { n, numerator, denom: DenomKind::CoshHalf, prefactor })
    }
}

/// `d / sinh(d/2)`, equal to 2 at `d = 0`.
pub fn d_over_sinh_half(d: &PrecisionValue) -> PrecisionValue {
    let p = d.prec() + 16;
    let v = if d.value().is_zero() {
        Float::with_val(p, 2)
    } else {
        let half = Float::with_val(p, d.value() / 2u32);
        Float::with_val(p, d.value() / Float::with_val(p, half.sinh_ref()))
    };
    // The map is 1/2-Lipschitz; four ulps cover the rounding.
    let err = up(d.abs_error() / 2u32) + up(ulp(&v) * 4u32);
    PrecisionValue::new(v, err)
}

/// `1 / cosh(d/2)`.
pub fn sech_half(d: &PrecisionValue) -> PrecisionValue {
    let p = d.prec() + 16;
    let half = Float::with_val(p, d.value() / 2u32);
    let v = Float::with_val(p, half.cosh_ref()).recip();
    let err = up(d.abs_error() / 2u32) + up(ulp(&v) * 4u32);
    PrecisionValue::new(v, err)
}

fn check_length(d: &PrecisionValue) -> Result<()> {
    if d.value().is_sign_negative() && !d.value().is_zero() {
        return Err(Error::InvalidArgument(format!("neck length must be nonnegative, got {d}")));
    }
    Ok(())
}

impl CrownVolume {
    /// Numeric value at neck length `d ≥ 0`.
    pub fn eval(&self, d: &PrecisionValue, precision_bits: u32) -> Result<PrecisionValue> {
        check_length(d)?;
        let pre = PrecisionValue::from_rational(&self.prefactor, precision_bits + 16);
        let v = match self.denom {
            DenomKind::SinhHalf => {
                let rest = self.numerator.unshift(1).expect("even crown numerator has a factor d");
                rest.eval(d, precision_bits + 16)?.mul(&d_over_sinh_half(d))
            }
            _ => self.numerator.eval(d, precision_bits + 16)?.mul(&sech_half(d)),
        };
        Ok(v.mul(&pre).with_prec(precision_bits))
    }

    /// Graded degree of the numerator.
    pub fn degree(&self) -> u32 {
        self.numerator.homogeneous_degree().unwrap_or(0)
    }

    fn denom_text(&self, latex: bool) -> String {
        let inv = self.prefactor.recip().expect("nonzero prefactor");
        let f = match (self.denom, latex) {
            (DenomKind::SinhHalf, false) => "sinh(d/2)",
            (_, false) => "cosh(d/2)",
            (DenomKind::SinhHalf, true) => "\\sinh(d/2)",
            (_, true) => "\\cosh(d/2)",
        };
        if inv == Rational::one() {
            f.to_string()
        } else {
            format!("{inv} {f}")
        }
    }

    fn numerator_text(&self, latex: bool) -> String {
        let render = |p: &PiPolynomial| if latex { p.render_latex() } else { p.render_plain() };
        let wrap = |p: &PiPolynomial| {
            if p.terms().count() > 1 {
                format!("({})", render(p))
            } else {
                render(p)
            }
        };
        if self.denom == DenomKind::SinhHalf {
            let rest = self.numerator.unshift(1).expect("even crown numerator has a factor d");
            if rest == PiPolynomial::one("d") {
                "d".to_string()
            } else {
                format!("d{}{}", if latex { " " } else { "*" }, wrap(&rest))
            }
        } else {
            wrap(&self.numerator)
        }
    }

    /// `(d^2 + pi^2) / (4 cosh(d/2))`
    pub fn render_plain(&self) -> String {
        format!("{} / ({})", self.numerator_text(false), self.denom_text(false))
    }

    pub fn render_latex(&self) -> String {
        format!("\\frac{{{}}}{{{}}}", self.numerator_text(true), self.denom_text(true))
    }
}

impl fmt::Display for CrownVolume {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render_plain())
    }
}

/// Total volume `π^n / 2` of the `n`-crown moduli space.
pub fn crown_total_volume(n: u32) -> Result<SymbolicValue> {
    if n == 0 {
        return Err(Error::InvalidArgument("crown needs at least one tine".into()));
    }
    Ok(SymbolicValue::term(GradedMonomial::pi_pow(n), Rational::new(1, 2)))
}

/// Exact coefficient of `x^n` in the crown generating function:
/// `cosh_part(d) / cosh(d/2) + sinh_part(d) · d / sinh(d/2)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CrownGfTerm {
    pub n: u32,
    pub cosh_part: PiPolynomial,
    pub sinh_part: PiPolynomial,
}

impl CrownGfTerm {
    pub fn eval(&self, d: &PrecisionValue, precision_bits: u32) -> Result<PrecisionValue> {
        check_length(d)?;
        let p = precision_bits + 16;
        let a = self.cosh_part.eval(d, p)?.mul(&sech_half(d));
        let b = self.sinh_part.eval(d, p)?.mul(&d_over_sinh_half(d));
        Ok(a.add(&b).with_prec(precision_bits))
    }
}

type Series = Vec<PiPolynomial>;

fn series_zero(order: usize) -> Series {
    vec![PiPolynomial::zero("d"); order + 1]
}

fn series_mul(a: &Series, b: &Series) -> Series {
    let order = a.len() - 1;
    let mut out = series_zero(order);
    for (i, ai) in a.iter().enumerate() {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate().take(order + 1 - i) {
            if !bj.is_zero() {
                out[i + j] = out[i + j].add(&ai.mul(bj));
            }
        }
    }
    out
}

/// `(2j)! / (4^j (j!)^2 (2j+1))`, the coefficient of `y^{2j+1}` in `arcsin y`.
fn arcsin_coeff(j: u32) -> Rational {
    let num = factorial(2 * j);
    let den = (rug::Integer::from(1) << (2 * j)) * factorial(j).square() * (2 * j + 1);
    Rational::checked_new(num, den).expect("nonzero")
}

/// `(2j)! / (4^j (j!)^2)`, the coefficient of `y^{2j}` in `1/sqrt(1-y²)`.
fn inv_sqrt_coeff(j: u32) -> Rational {
    let num = factorial(2 * j);
    let den = (rug::Integer::from(1) << (2 * j)) * factorial(j).square();
    Rational::checked_new(num, den).expect("nonzero")
}

/// Exact coefficients of `x^1..x^order` of
/// `x/√(1-π²x²) · sinh(d/2 + (d/π) arcsin(πx)) / sinh(d)`.
pub fn crown_gf_symbolic(order: u32) -> Result<Vec<CrownGfTerm>> {
    if order == 0 {
        return Err(Error::InvalidArgument("generating function order must be at least 1".into()));
    }
    let n = order as usize;
    // S = arcsin(πx)/π and the prefactor x/√(1-π²x²)
    let mut s = series_zero(n);
    let mut pre = series_zero(n);
    for j in 0..=order / 2 {
        let k = (2 * j + 1) as usize;
        if k <= n {
            s[k] = PiPolynomial::monomial("d", j, 0, arcsin_coeff(j));
            pre[k] = PiPolynomial::monomial("d", j, 0, inv_sqrt_coeff(j));
        }
    }
    // cosh(dS) = Σ d^{2m} S^{2m}/(2m)!,  sinh(dS)/d = Σ d^{2m} S^{2m+1}/(2m+1)!
    let mut c = series_zero(n);
    let mut h = series_zero(n);
    c[0] = PiPolynomial::one("d");
    let mut power = s.clone();
    let mut m = 1u32;
    while m <= order {
        let fact = Rational::from_integer(factorial(m)).recip().expect("nonzero");
        let dpow = if m.is_multiple_of(2) { m } else { m - 1 };
        let target = if m.is_multiple_of(2) { &mut c } else { &mut h };
        for (k, coeff) in power.iter().enumerate() {
            if !coeff.is_zero() {
                target[k] = target[k].add(&coeff.shift(dpow).scale(&fact));
            }
        }
        power = series_mul(&power, &s);
        m += 1;
    }
    let half = Rational::new(1, 2);
    let cosh_series = series_mul(&pre, &c);
    let sinh_series = series_mul(&pre, &h);
    Ok((1..=order)
        .map(|k| CrownGfTerm {
            n: k,
            cosh_part: cosh_series[k as usize].scale(&half),
            sinh_part: sinh_series[k as usize].scale(&half),
        })
        .collect())
}

/// Numeric coefficients of `x^1..x^order` of the crown generating function
/// at neck length `d`.
pub fn crown_gf_coefficients(order: u32, d: &PrecisionValue, precision_bits: u32) -> Result<Vec<PrecisionValue>> {
    check_length(d)?;
    crown_gf_symbolic(order)?.iter().map(|t| t.eval(d, precision_bits)).collect()
}

/// A value stated as a conjecture; every rendering carries a visible tag.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Conjectural<T> {
    pub value: T,
}

impl<T: fmt::Display> fmt::Display for Conjectural<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} [CONJECTURE]", self.value)
    }
}

fn check_polygon(n: u32) -> Result<()> {
    if n < 3 {
        return Err(Error::InvalidArgument(format!("a polygon needs at least 3 vertices, got {n}")));
    }
    Ok(())
}

/// Conjectured volume of the moduli space of ideal `n`-gons:
/// `(n-4)!!/((n-2)(n-3)!!) π^{n-3}` for odd `n`, twice that with `π^{n-4}`
/// for even `n`.
pub fn ngon_conjecture_volume(n: u32) -> Result<Conjectural<SymbolicValue>> {
    check_polygon(n)?;
    let ni = n as i64;
    let ratio = Rational::checked_new(double_factorial(ni - 4), double_factorial(ni - 3)).expect("nonzero");
    let (c, pi) = if n % 2 == 1 {
        (ratio * Rational::new(1, ni - 2), n - 3)
    } else {
        (ratio * Rational::new(2, ni - 2), n - 4)
    };
    Ok(Conjectural { value: SymbolicValue::term(GradedMonomial::pi_pow(pi), c) })
}

/// Upper bound for the `n`-gon volume, equal to the `(n-2)`-crown volume at
/// zero neck length.
pub fn ngon_upper_bound(n: u32) -> Result<SymbolicValue> {
    check_polygon(n)?;
    let ni = n as i64;
    let ratio = Rational::checked_new(double_factorial(ni - 4), double_factorial(ni - 3)).expect("nonzero");
    Ok(if n.is_multiple_of(2) {
        SymbolicValue::term(GradedMonomial::pi_pow(n - 4), ratio)
    } else {
        SymbolicValue::term(GradedMonomial::pi_pow(n - 3), ratio * Rational::new(1, 2))
    })
}

/// The crown volume at `d = 0` as an exact ring element.
pub fn crown_volume_at_zero(n: u32) -> Result<SymbolicValue> {
    let cv = crown_volume_fixed_neck(n)?;
    let (poly, factor) = match cv.denom {
        // d / sinh(d/2) -> 2
        DenomKind::SinhHalf => (cv.numerator.unshift(1).expect("factor d"), Rational::from_int(2)),
        _ => (cv.numerator.clone(), Rational::one()),
    };
    let c0 = SymbolicValue::from_terms(
        poly.terms().filter(|((_, k), _)| *k == 0).map(|(&(a, _), c)| (GradedMonomial::pi_pow(2 * a), c.clone())),
    );
    Ok(c0.scale(&(factor * cv.prefactor)))
}

/// Exact coefficients of `x^0..x^order` of
/// `arcsin(πx)/(πx) + x (arcsin(πx)/(πx))²`; the coefficient of `x^k`
/// corresponds to the `(k+3)`-gon.
pub fn ngon_gf_coefficients(order: u32) -> Vec<SymbolicValue> {
    let n = order as usize;
    // arcsin(y)/y = Σ a_j y^{2j}; coefficients stored by power of y.
    let mut f = vec![Rational::zero(); n + 1];
    for j in 0..=order / 2 {
        f[2 * j as usize] = arcsin_coeff(j);
    }
    let mut sq = vec![Rational::zero(); n + 1];
    for i in 0..=n {
        for j in 0..=n - i {
            if !f[i].is_zero() && !f[j].is_zero() {
                let t = &f[i] * &f[j];
                sq[i + j] += &t;
            }
        }
    }
    (0..=n)
        .map(|k| {
            if k % 2 == 0 {
                SymbolicValue::term(GradedMonomial::pi_pow(k as u32), f[k].clone())
            } else {
                SymbolicValue::term(GradedMonomial::pi_pow(k as u32 - 1), sq[k - 1].clone())
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pv(x: f64) -> PrecisionValue {
        PrecisionValue::from_f64(x, 0.0, 128)
    }

    #[test]
    fn small_crowns_render() {
        assert_eq!(crown_volume_fixed_neck(1).unwrap().render_plain(), "1 / (2 cosh(d/2))");
        assert_eq!(crown_volume_fixed_neck(2).unwrap().render_plain(), "d / (2 sinh(d/2))");
        assert_eq!(crown_volume_fixed_neck(3).unwrap().render_plain(), "(d^2 + pi^2) / (4 cosh(d/2))");
        assert_eq!(crown_volume_fixed_neck(4).unwrap().render_plain(), "d*(d^2 + 4*pi^2) / (12 sinh(d/2))");
        assert!(crown_volume_fixed_neck(0).is_err());
    }

    #[test]
    fn evaluation_and_limits() {
        let v = crown_volume_fixed_neck(2).unwrap().eval(&pv(0.0), 128).unwrap();
        assert_eq!(v.to_f64(), 1.0);
        let v = crown_volume_fixed_neck(3).unwrap().eval(&pv(0.0), 128).unwrap();
        assert!((v.to_f64() - std::f64::consts::PI.powi(2) / 4.0).abs() < 1e-15);
        let v = crown_volume_fixed_neck(1).unwrap().eval(&pv(2.0), 128).unwrap();
        assert!((v.to_f64() - 0.5 / 1f64.cosh()).abs() < 1e-16);
        assert!(crown_volume_fixed_neck(1).unwrap().eval(&pv(-1.0), 64).is_err());
    }

    #[test]
    fn gf_matches_closed_forms_exactly() {
        let gf = crown_gf_symbolic(14).unwrap();
        for t in gf {
            let cv = crown_volume_fixed_neck(t.n).unwrap();
            if t.n % 2 == 1 {
                assert!(t.sinh_part.is_zero());
                assert_eq!(t.cosh_part, cv.numerator.scale(&cv.prefactor), "n = {}", t.n);
            } else {
                assert!(t.cosh_part.is_zero());
                assert_eq!(t.sinh_part, cv.numerator.unshift(1).unwrap().scale(&cv.prefactor), "n = {}", t.n);
            }
        }
    }

    #[test]
    fn gf_low_coefficients_at_zero() {
        let c = crown_gf_coefficients(3, &pv(0.0), 128).unwrap();
        assert_eq!(c[0].to_f64(), 0.5);
        assert_eq!(c[1].to_f64(), 1.0);
        assert!((c[2].to_f64() - std::f64::consts::PI.powi(2) / 4.0).abs() < 1e-15);
    }

    #[test]
    fn conjecture_and_bound_values() {
        let pi = |e: u32, p: i64, q: i64| SymbolicValue::term(GradedMonomial::pi_pow(e), Rational::new(p, q));
        assert_eq!(ngon_conjecture_volume(3).unwrap().value, pi(0, 1, 1));
        assert_eq!(ngon_conjecture_volume(4).unwrap().value, pi(0, 1, 1));
        assert_eq!(ngon_conjecture_volume(5).unwrap().value, pi(2, 1, 6));
        assert_eq!(ngon_conjecture_volume(7).unwrap().value, pi(4, 3, 40));
        assert_eq!(ngon_conjecture_volume(8).unwrap().value, pi(4, 8, 45));
        assert_eq!(ngon_conjecture_volume(9).unwrap().value, pi(6, 5, 112));
        assert_eq!(ngon_conjecture_volume(9).unwrap().to_string(), "5/112 * pi^6 [CONJECTURE]");
        assert_eq!(ngon_upper_bound(6).unwrap(), pi(2, 2, 3));
        assert_eq!(ngon_upper_bound(5).unwrap(), pi(2, 1, 4));
        assert_eq!(ngon_upper_bound(4).unwrap(), pi(0, 1, 1));
        assert!(ngon_conjecture_volume(2).is_err());
    }

    #[test]
    fn bound_is_crown_at_zero() {
        for n in 3..=20 {
            assert_eq!(ngon_upper_bound(n).unwrap(), crown_volume_at_zero(n - 2).unwrap(), "n = {n}");
            let ratio = Rational::new(2, n as i64 - 2);
            assert_eq!(ngon_conjecture_volume(n).unwrap().value, ngon_upper_bound(n).unwrap().scale(&ratio));
        }
    }

    #[test]
    fn ngon_gf_matches_conjecture() {
        let gf = ngon_gf_coefficients(17);
        for (k, c) in gf.iter().enumerate() {
            assert_eq!(*c, ngon_conjecture_volume(k as u32 + 3).unwrap().value, "n = {}", k + 3);
        }
    }

    #[test]
    fn double_factorials() {
        assert_eq!(double_factorial(-1), 1);
        assert_eq!(double_factorial(0), 1);
        assert_eq!(double_factorial(5), 15);
        assert_eq!(double_factorial(6), 48);
    }
}
