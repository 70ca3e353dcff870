use std::collections::BTreeMap;
use std::fmt;

use super::monomial::GradedMonomial;
use super::precision::PrecisionValue;
use super::rational::Rational;
use super::symbolic::SymbolicValue;
use crate::error::Result;
use crate::ring::constants::eval_constant;
use crate::ring::monomial::Constant;

/// Polynomial in `Q[π², v]` for a single named variable `v`. Keys are
/// `(power of π², power of v)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PiPolynomial {
    var: String,
    coeffs: BTreeMap<(u32, u32), Rational>,
}

impl PiPolynomial {
    pub fn zero(var: &str) -> Self {
        PiPolynomial { var: var.to_string(), coeffs: BTreeMap::new() }
    }

    pub fn constant(var: &str, c: Rational) -> Self {
        Self::monomial(var, 0, 0, c)
    }

    pub fn one(var: &str) -> Self {
        Self::constant(var, Rational::one())
    }

    /// `c · π^(2·pi2) · v^k`.
    pub fn monomial(var: &str, pi2: u32, k: u32, c: Rational) -> Self {
        let mut p = Self::zero(var);
        p.add_term(pi2, k, c);
        p
    }

    pub fn var_name(&self) -> &str {
        &self.var
    }

    pub fn add_term(&mut self, pi2: u32, k: u32, c: Rational) {
        if c.is_zero() {
            return;
        }
        let key = (pi2, k);
        let e = self.coeffs.entry(key).or_default();
        *e += &c;
        if e.is_zero() {
            self.coeffs.remove(&key);
        }
    }

    /// Terms as `((pi2, k), coefficient)`.
    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &Rational)> {
        self.coeffs.iter()
    }

    pub fn coefficient(&self, pi2: u32, k: u32) -> Rational {
        self.coeffs.get(&(pi2, k)).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn add(&self, other: &PiPolynomial) -> PiPolynomial {
        let mut out = self.clone();
        for (&(a, k), c) in &other.coeffs {
            out.add_term(a, k, c.clone());
        }
        out
    }

    pub fn mul(&self, other: &PiPolynomial) -> PiPolynomial {
        let mut out = Self::zero(&self.var);
        for (&(a1, k1), c1) in &self.coeffs {
            for (&(a2, k2), c2) in &other.coeffs {
                out.add_term(a1 + a2, k1 + k2, c1 * c2);
            }
        }
        out
    }

    pub fn scale(&self, r: &Rational) -> PiPolynomial {
        let mut out = Self::zero(&self.var);
        for (&(a, k), c) in &self.coeffs {
            out.add_term(a, k, c * r);
        }
        out
    }

    /// Multiplies by `v^k`.
    pub fn shift(&self, k: u32) -> PiPolynomial {
        PiPolynomial {
            var: self.var.clone(),
            coeffs: self.coeffs.iter().map(|(&(a, j), c)| ((a, j + k), c.clone())).collect(),
        }
    }

    /// Divides by `v^k` if every term is divisible.
    pub fn unshift(&self, k: u32) -> Option<PiPolynomial> {
        if self.coeffs.keys().any(|&(_, j)| j < k) {
            return None;
        }
        Some(PiPolynomial {
            var: self.var.clone(),
            coeffs: self.coeffs.iter().map(|(&(a, j), c)| ((a, j - k), c.clone())).collect(),
        })
    }

    pub fn rename(&self, var: &str) -> PiPolynomial {
        PiPolynomial { var: var.to_string(), coeffs: self.coeffs.clone() }
    }

    /// Graded degree `2·pi2 + k` if all terms agree.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut degs = self.coeffs.keys().map(|&(a, k)| 2 * a + k);
        let first = degs.next()?;
        degs.all(|d| d == first).then_some(first)
    }

    pub fn var_degree(&self) -> u32 {
        self.coeffs.keys().map(|&(_, k)| k).max().unwrap_or(0)
    }

    /// Every term has an even power of the variable.
    pub fn is_even(&self) -> bool {
        self.coeffs.keys().all(|&(_, k)| k % 2 == 0)
    }

    pub fn all_positive(&self) -> bool {
        self.coeffs.values().all(Rational::is_positive)
    }

    /// Substitutes `v = c·v` (used for the half-angle substitution).
    pub fn rescale_var(&self, c: &Rational) -> PiPolynomial {
        let mut out = Self::zero(&self.var);
        for (&(a, k), coeff) in &self.coeffs {
            out.add_term(a, k, coeff * &c.pow(k));
        }
        out
    }

    pub fn to_symbolic(&self) -> SymbolicValue {
        SymbolicValue::from_terms(
            self.coeffs
                .iter()
                .map(|(&(a, k), c)| (GradedMonomial::pi_pow(2 * a).with_var(&self.var, k), c.clone())),
        )
    }

    /// Numeric value at `v = x`.
    pub fn eval(&self, x: &PrecisionValue, precision_bits: u32) -> Result<PrecisionValue> {
        let pi = eval_constant(Constant::Pi, precision_bits + 16)?;
        let pi2 = pi.mul(&pi);
        let mut acc = PrecisionValue::zero(precision_bits);
        for (&(a, k), c) in &self.coeffs {
            let t = PrecisionValue::from_rational(c, precision_bits).mul(&pi2.powi(a)).mul(&x.powi(k));
            acc = acc.add(&t);
        }
        Ok(acc)
    }

    /// `v^3 + pi^2*v` style rendering, descending in the variable.
    pub fn render_plain(&self) -> String {
        self.render(false)
    }

    pub fn render_latex(&self) -> String {
        self.render(true)
    }

    fn render(&self, latex: bool) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut keys: Vec<_> = self.coeffs.iter().collect();
        keys.sort_by(|(a, _), (b, _)| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
        let mut s = String::new();
        for (i, (&(a, k), c)) in keys.into_iter().enumerate() {
            let mag = c.abs();
            if i > 0 {
                s.push_str(if c.is_negative() { " - " } else { " + " });
            } else if c.is_negative() {
                s.push('-');
            }
            let mut factors = Vec::new();
            if a > 0 {
                factors.push(match (latex, a) {
                    (false, _) => format!("pi^{}", 2 * a),
                    (true, _) => format!("\\pi^{{{}}}", 2 * a),
                });
            }
            if k > 0 {
                factors.push(match (latex, k) {
                    (_, 1) => self.var.clone(),
                    (false, _) => format!("{}^{}", self.var, k),
                    (true, _) => format!("{}^{{{}}}", self.var, k),
                });
            }
            let body = factors.join(if latex { " " } else { "*" });
            let coeff = if latex && !mag.is_integer() {
                format!("\\frac{{{}}}{{{}}}", mag.numer(), mag.denom())
            } else {
                mag.to_string()
            };
            match (body.is_empty(), mag == Rational::one()) {
                (true, _) => s.push_str(&coeff),
                (false, true) => s.push_str(&body),
                (false, false) => s.push_str(&format!("{}{}{}", coeff, if latex { " " } else { "*" }, body)),
            }
        }
        s
    }
}

impl fmt::Display for PiPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render_plain())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_and_render() {
        let p = PiPolynomial::monomial("d", 0, 2, Rational::one()).add(&PiPolynomial::monomial("d", 1, 0, Rational::one()));
        assert_eq!(p.render_plain(), "d^2 + pi^2");
        let q = p.mul(&p);
        assert_eq!(q.coefficient(1, 2), Rational::from_int(2));
        assert_eq!(q.homogeneous_degree(), Some(4));
        assert!(q.is_even());
    }

    #[test]
    fn shift_and_rescale() {
        let p = PiPolynomial::monomial("l", 1, 1, Rational::new(1, 3));
        let s = p.shift(2);
        assert_eq!(s.coefficient(1, 3), Rational::new(1, 3));
        assert_eq!(s.unshift(3).unwrap().coefficient(1, 0), Rational::new(1, 3));
        assert!(s.unshift(4).is_none());
        let r = s.rescale_var(&Rational::from_int(2));
        assert_eq!(r.coefficient(1, 3), Rational::new(8, 3));
    }
}
