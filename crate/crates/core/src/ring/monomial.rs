use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};

/// Transcendental generators of the constant ring.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Constant {
    Pi,
    Log2,
    /// `ζ(j)`, `j` odd and at least 3.
    Zeta(u32),
    /// Dirichlet `β(k)`, `k` even and at least 2.
    Beta(u32),
}

impl Constant {
    pub fn validate(self) -> Result<Self> {
        match self {
            Constant::Zeta(j) if j < 3 || j % 2 == 0 => Err(Error::UnsupportedConstant(format!(
                "zeta({j}): only odd arguments >= 3 are ring generators"
            ))),
            Constant::Beta(k) if k < 2 || k % 2 == 1 => Err(Error::UnsupportedConstant(format!(
                "beta({k}): only even arguments >= 2 are ring generators"
            ))),
            c => Ok(c),
        }
    }

    /// Weight in the grading.
    pub fn degree(self) -> u32 {
        match self {
            Constant::Pi | Constant::Log2 => 1,
            Constant::Zeta(j) => j,
            Constant::Beta(k) => k,
        }
    }
}

impl fmt::Display for Constant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Constant::Pi => f.write_str("pi"),
            Constant::Log2 => f.write_str("log(2)"),
            Constant::Zeta(j) => write!(f, "zeta({j})"),
            Constant::Beta(k) => write!(f, "beta({k})"),
        }
    }
}

impl std::str::FromStr for Constant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let arg = |prefix: &str| -> Option<u32> {
            s.strip_prefix(prefix)?.strip_suffix(')')?.trim().parse().ok()
        };
        let c = match s {
            "pi" => Constant::Pi,
            "log2" | "log(2)" => Constant::Log2,
            _ => {
                if let Some(j) = arg("zeta(") {
                    Constant::Zeta(j)
                } else if let Some(k) = arg("beta(") {
                    Constant::Beta(k)
                } else {
                    return Err(Error::Parse(format!("unknown constant {s:?}")));
                }
            }
        };
        c.validate()
    }
}

/// Monomial in π, log 2, odd zeta values, even beta values and named formal
/// variables. Zero exponents are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct GradedMonomial {
    pi: u32,
    log2: u32,
    zeta: BTreeMap<u32, u32>,
    beta: BTreeMap<u32, u32>,
    vars: BTreeMap<String, u32>,
}

impl GradedMonomial {
    pub fn one() -> Self {
        Self::default()
    }

    pub fn constant(c: Constant, exp: u32) -> Result<Self> {
        let mut m = Self::one();
        m.mul_constant(c.validate()?, exp);
        Ok(m)
    }

    pub fn pi_pow(exp: u32) -> Self {
        GradedMonomial { pi: exp, ..Self::default() }
    }

    pub fn log2() -> Self {
        GradedMonomial { log2: 1, ..Self::default() }
    }

    /// Panics on an even or too-small argument; see [`GradedMonomial::constant`].
    pub fn zeta(j: u32) -> Self {
        Self::constant(Constant::Zeta(j), 1).expect("invalid zeta argument")
    }

    /// Panics on an odd or too-small argument; see [`GradedMonomial::constant`].
    pub fn beta(k: u32) -> Self {
        Self::constant(Constant::Beta(k), 1).expect("invalid beta argument")
    }

    pub fn var(name: &str, exp: u32) -> Self {
        let mut m = Self::one();
        if exp > 0 {
            m.vars.insert(name.to_string(), exp);
        }
        m
    }

    pub fn with_pi(mut self, exp: u32) -> Self {
        self.pi += exp;
        self
    }

    pub fn with_var(mut self, name: &str, exp: u32) -> Self {
        if exp > 0 {
            *self.vars.entry(name.to_string()).or_insert(0) += exp;
        }
        self
    }

    fn mul_constant(&mut self, c: Constant, exp: u32) {
        if exp == 0 {
            return;
        }
        match c {
            Constant::Pi => self.pi += exp,
            Constant::Log2 => self.log2 += exp,
            Constant::Zeta(j) => *self.zeta.entry(j).or_insert(0) += exp,
            Constant::Beta(k) => *self.beta.entry(k).or_insert(0) += exp,
        }
    }

    pub fn pi_exp(&self) -> u32 {
        self.pi
    }

    pub fn log2_exp(&self) -> u32 {
        self.log2
    }

    pub fn zeta_exps(&self) -> &BTreeMap<u32, u32> {
        &self.zeta
    }

    pub fn beta_exps(&self) -> &BTreeMap<u32, u32> {
        &self.beta
    }

    pub fn var_exps(&self) -> &BTreeMap<String, u32> {
        &self.vars
    }

    pub fn var_exp(&self, name: &str) -> u32 {
        self.vars.get(name).copied().unwrap_or(0)
    }

    pub fn is_one(&self) -> bool {
        *self == Self::one()
    }

    pub fn has_vars(&self) -> bool {
        !self.vars.is_empty()
    }

    /// Constant generators with their exponents, in canonical order.
    pub fn constants(&self) -> Vec<(Constant, u32)> {
        let mut out = Vec::new();
        if self.pi > 0 {
            out.push((Constant::Pi, self.pi));
        }
        if self.log2 > 0 {
            out.push((Constant::Log2, self.log2));
        }
        out.extend(self.zeta.iter().map(|(&j, &e)| (Constant::Zeta(j), e)));
        out.extend(self.beta.iter().map(|(&k, &e)| (Constant::Beta(k), e)));
        out
    }

    pub fn degree(&self) -> u32 {
        self.constants().iter().map(|(c, e)| c.degree() * e).sum::<u32>()
            + self.vars.values().sum::<u32>()
    }

    /// Splits off variable `name`, returning its exponent and the rest.
    pub fn split_var(&self, name: &str) -> (u32, GradedMonomial) {
        let mut rest = self.clone();
        let e = rest.vars.remove(name).unwrap_or(0);
        (e, rest)
    }

    pub fn mul(&self, other: &GradedMonomial) -> GradedMonomial {
        let mut m = self.clone();
        for (c, e) in other.constants() {
            m.mul_constant(c, e);
        }
        for (v, &e) in &other.vars {
            *m.vars.entry(v.clone()).or_insert(0) += e;
        }
        m
    }

    fn factors(&self) -> Vec<(String, String, u32)> {
        let mut out: Vec<(String, String, u32)> = self
            .constants()
            .into_iter()
            .map(|(c, e)| {
                let latex = match c {
                    Constant::Pi => "\\pi".to_string(),
                    Constant::Log2 => "\\log 2".to_string(),
                    Constant::Zeta(j) => format!("\\zeta({j})"),
                    Constant::Beta(k) => format!("\\beta({k})"),
                };
                (c.to_string(), latex, e)
            })
            .collect();
        for (v, &e) in &self.vars {
            out.push((v.clone(), latex_var(v), e));
        }
        out
    }

    /// `pi^2*log(2)*zeta(3)*d^2`; the empty monomial renders as `1`.
    pub fn render_plain(&self) -> String {
        let parts: Vec<String> = self
            .factors()
            .into_iter()
            .map(|(p, _, e)| if e == 1 { p } else { format!("{p}^{e}") })
            .collect();
        if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join("*")
        }
    }

    pub fn render_latex(&self) -> String {
        let parts: Vec<String> = self
            .factors()
            .into_iter()
            .map(|(p, l, e)| match (e, p.as_str()) {
                (1, _) => l,
                (_, "log(2)") => format!("\\log^{{{e}}} 2"),
                _ => format!("{l}^{{{e}}}"),
            })
            .collect();
        if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join(" ")
        }
    }
}

fn latex_var(v: &str) -> String {
    match v {
        "l" | "ell" => "\\ell".to_string(),
        _ => {
            let split = v.find(|c: char| c.is_ascii_digit());
            match split {
                Some(i) if i > 0 && v[i..].chars().all(|c| c.is_ascii_digit()) => {
                    format!("{}_{{{}}}", &v[..i], &v[i..])
                }
                _ => v.to_string(),
            }
        }
    }
}

impl Ord for GradedMonomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then(self.pi.cmp(&other.pi))
            .then(self.log2.cmp(&other.log2))
            .then_with(|| self.zeta.iter().cmp(other.zeta.iter()))
            .then_with(|| self.beta.iter().cmp(other.beta.iter()))
            .then_with(|| self.vars.iter().cmp(other.vars.iter()))
    }
}

impl PartialOrd for GradedMonomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for GradedMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render_plain())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degree_weights() {
        let m = GradedMonomial::pi_pow(2)
            .mul(&GradedMonomial::log2())
            .mul(&GradedMonomial::zeta(3))
            .mul(&GradedMonomial::beta(2))
            .with_var("d", 2);
        assert_eq!(m.degree(), 2 + 1 + 3 + 2 + 2);
        assert_eq!(m.render_plain(), "pi^2*log(2)*zeta(3)*beta(2)*d^2");
    }

    #[test]
    fn rejects_non_generators() {
        assert!(GradedMonomial::constant(Constant::Zeta(2), 1).is_err());
        assert!(GradedMonomial::constant(Constant::Zeta(1), 1).is_err());
        assert!(GradedMonomial::constant(Constant::Beta(3), 1).is_err());
        assert!(GradedMonomial::constant(Constant::Beta(0), 1).is_err());
    }

    #[test]
    fn ordering_is_graded_first() {
        let z3 = GradedMonomial::zeta(3);
        let pi2l = GradedMonomial::pi_pow(2).mul(&GradedMonomial::log2());
        let pi = GradedMonomial::pi_pow(1);
        assert!(pi < z3);
        assert!(z3 < pi2l);
    }

    #[test]
    fn parse_constants() {
        assert_eq!("zeta(5)".parse::<Constant>().unwrap(), Constant::Zeta(5));
        assert_eq!("log2".parse::<Constant>().unwrap(), Constant::Log2);
        assert!("zeta(4)".parse::<Constant>().is_err());
    }

    #[test]
    fn latex_rendering() {
        let m = GradedMonomial::pi_pow(4).mul(&GradedMonomial::log2()).with_var("b1", 2);
        assert_eq!(m.render_latex(), "\\pi^{4} \\log 2 b_{1}^{2}");
    }
}
