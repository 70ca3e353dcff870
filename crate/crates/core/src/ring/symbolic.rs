use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde_json::{json, Map, Value};

use super::constants::eval_constant;
use super::monomial::{Constant, GradedMonomial};
use super::precision::PrecisionValue;
use super::rational::Rational;
use crate::error::{Error, Result};

/// Element of the graded ring: a finite map from monomials to nonzero
/// rational coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct SymbolicValue {
    terms: BTreeMap<GradedMonomial, Rational>,
}

/// Result of [`SymbolicValue::homogeneous_degree`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Homogeneity {
    /// The zero element, homogeneous of every degree.
    Zero,
    Degree(u32),
    NotHomogeneous,
}

impl SymbolicValue {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::term(GradedMonomial::one(), c)
    }

    pub fn term(m: GradedMonomial, c: Rational) -> Self {
        let mut v = Self::zero();
        v.add_term(m, c);
        v
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (GradedMonomial, Rational)>) -> Self {
        let mut v = Self::zero();
        for (m, c) in terms {
            v.add_term(m, c);
        }
        v
    }

    /// Adds `c·m` in place, keeping the map canonical.
    pub fn add_term(&mut self, m: GradedMonomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        let remove = {
            let entry = self.terms.entry(m.clone()).or_default();
            *entry += &c;
            entry.is_zero()
        };
        if remove {
            self.terms.remove(&m);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&GradedMonomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &GradedMonomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.is_zero()
    }

    pub fn ring_add(&self, other: &SymbolicValue) -> SymbolicValue {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn ring_mul(&self, other: &SymbolicValue) -> SymbolicValue {
        let mut out = SymbolicValue::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }

    pub fn scale(&self, r: &Rational) -> SymbolicValue {
        SymbolicValue::from_terms(self.terms.iter().map(|(m, c)| (m.clone(), c * r)))
    }

    pub fn mul_monomial(&self, m: &GradedMonomial) -> SymbolicValue {
        SymbolicValue::from_terms(self.terms.iter().map(|(k, c)| (k.mul(m), c.clone())))
    }

    pub fn homogeneous_degree(&self) -> Homogeneity {
        let mut degrees = self.terms.keys().map(GradedMonomial::degree);
        match degrees.next() {
            None => Homogeneity::Zero,
            Some(d) => {
                if degrees.all(|e| e == d) {
                    Homogeneity::Degree(d)
                } else {
                    Homogeneity::NotHomogeneous
                }
            }
        }
    }

    /// Highest exponent of `var` over all terms.
    pub fn var_degree(&self, var: &str) -> u32 {
        self.terms.keys().map(|m| m.var_exp(var)).max().unwrap_or(0)
    }

    pub fn has_vars(&self) -> bool {
        self.terms.keys().any(GradedMonomial::has_vars)
    }

    /// Evaluates numerically; every variable must be assigned.
    pub fn eval(&self, assignments: &BTreeMap<String, PrecisionValue>, precision_bits: u32) -> Result<PrecisionValue> {
        let mut acc = PrecisionValue::zero(precision_bits);
        for (m, c) in &self.terms {
            let mut t = PrecisionValue::from_rational(c, precision_bits);
            for (k, e) in m.constants() {
                let g = eval_constant(k, precision_bits + 16)?;
                t = t.mul(&g.powi(e));
            }
            for (v, &e) in m.var_exps() {
                let x = assignments.get(v).ok_or_else(|| Error::UnassignedVariable(v.clone()))?;
                t = t.mul(&x.powi(e));
            }
            acc = acc.add(&t);
        }
        Ok(acc)
    }

    /// Evaluates a variable-free value.
    pub fn eval_const(&self, precision_bits: u32) -> Result<PrecisionValue> {
        self.eval(&BTreeMap::new(), precision_bits)
    }

    /// Canonical JSON: array of term objects in canonical order.
    pub fn to_json(&self) -> Value {
        Value::Array(
            self.terms
                .iter()
                .map(|(m, c)| {
                    let zeta: Map<String, Value> =
                        m.zeta_exps().iter().map(|(k, e)| (k.to_string(), json!(e))).collect();
                    let beta: Map<String, Value> =
                        m.beta_exps().iter().map(|(k, e)| (k.to_string(), json!(e))).collect();
                    let vars: Map<String, Value> =
                        m.var_exps().iter().map(|(k, e)| (k.clone(), json!(e))).collect();
                    json!({
                        "coeff": c.to_string(),
                        "pi": m.pi_exp(),
                        "log2": m.log2_exp(),
                        "zeta": zeta,
                        "beta": beta,
                        "vars": vars,
                    })
                })
                .collect(),
        )
    }

    pub fn from_json(v: &Value) -> Result<SymbolicValue> {
        let bad = |p: String, msg: &str| Error::Parse(format!("{msg} at {p}"));
        let arr = v.as_array().ok_or_else(|| bad(String::new(), "expected an array of terms"))?;
        let mut out = SymbolicValue::zero();
        for (i, t) in arr.iter().enumerate() {
            let p = format!("/{i}");
            let obj = t.as_object().ok_or_else(|| bad(p.clone(), "expected a term object"))?;
            let coeff: Rational = obj
                .get("coeff")
                .and_then(Value::as_str)
                .ok_or_else(|| bad(format!("{p}/coeff"), "missing coefficient string"))?
                .parse()?;
            let exp = |key: &str| -> Result<u32> {
                match obj.get(key) {
                    None => Ok(0),
                    Some(x) => x
                        .as_u64()
                        .and_then(|x| u32::try_from(x).ok())
                        .ok_or_else(|| bad(format!("{p}/{key}"), "expected a nonnegative integer")),
                }
            };
            let map = |key: &str| -> Result<Vec<(String, u32)>> {
                match obj.get(key) {
                    None => Ok(Vec::new()),
                    Some(Value::Object(o)) => o
                        .iter()
                        .map(|(k, x)| {
                            let e = x
                                .as_u64()
                                .and_then(|x| u32::try_from(x).ok())
                                .ok_or_else(|| bad(format!("{p}/{key}/{k}"), "expected a nonnegative integer"))?;
                            Ok((k.clone(), e))
                        })
                        .collect(),
                    Some(_) => Err(bad(format!("{p}/{key}"), "expected an object")),
                }
            };
            let mut m = GradedMonomial::constant(Constant::Pi, exp("pi")?)?
                .mul(&GradedMonomial::constant(Constant::Log2, exp("log2")?)?);
            for (k, e) in map("zeta")? {
                let j: u32 = k.parse().map_err(|_| bad(format!("{p}/zeta/{k}"), "bad zeta argument"))?;
                m = m.mul(&GradedMonomial::constant(Constant::Zeta(j), e)?);
            }
            for (k, e) in map("beta")? {
                let j: u32 = k.parse().map_err(|_| bad(format!("{p}/beta/{k}"), "bad beta argument"))?;
                m = m.mul(&GradedMonomial::constant(Constant::Beta(j), e)?);
            }
            for (k, e) in map("vars")? {
                m = m.with_var(&k, e);
            }
            out.add_term(m, coeff);
        }
        Ok(out)
    }

    /// `7/4 * zeta(3) + 1/2 * pi^2*log(2)`; zero renders as `0`.
    pub fn render_plain(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut s = String::new();
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let mag = c.abs();
            if i == 0 {
                if c.is_negative() {
                    s.push('-');
                }
            } else {
                s.push_str(if c.is_negative() { " - " } else { " + " });
            }
            if m.is_one() {
                s.push_str(&mag.to_string());
            } else if mag == Rational::one() {
                s.push_str(&m.render_plain());
            } else {
                s.push_str(&format!("{} * {}", mag, m.render_plain()));
            }
        }
        s
    }

    pub fn render_latex(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut s = String::new();
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let mag = c.abs();
            if i == 0 {
                if c.is_negative() {
                    s.push('-');
                }
            } else {
                s.push_str(if c.is_negative() { " - " } else { " + " });
            }
            let coeff = if mag.is_integer() {
                mag.to_string()
            } else {
                format!("\\frac{{{}}}{{{}}}", mag.numer(), mag.denom())
            };
            if m.is_one() {
                s.push_str(&coeff);
            } else if mag == Rational::one() {
                s.push_str(&m.render_latex());
            } else {
                s.push_str(&format!("{} {}", coeff, m.render_latex()));
            }
        }
        s
    }
}

impl fmt::Display for SymbolicValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render_plain())
    }
}

impl Add for &SymbolicValue {
    type Output = SymbolicValue;
    fn add(self, rhs: &SymbolicValue) -> SymbolicValue {
        self.ring_add(rhs)
    }
}

impl Sub for &SymbolicValue {
    type Output = SymbolicValue;
    fn sub(self, rhs: &SymbolicValue) -> SymbolicValue {
        self.ring_add(&-rhs)
    }
}

impl Mul for &SymbolicValue {
    type Output = SymbolicValue;
    fn mul(self, rhs: &SymbolicValue) -> SymbolicValue {
        self.ring_mul(rhs)
    }
}

impl Neg for &SymbolicValue {
    type Output = SymbolicValue;
    fn neg(self) -> SymbolicValue {
        self.scale(&Rational::from_int(-1))
    }
}
