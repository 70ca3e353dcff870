//! Volumes of annuli with two crowns and of general crowned surfaces,
//! assembled from crown factors and Weil-Petersson polynomials.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde_json::Value;

use crate::crown::{crown_volume_fixed_neck, d_over_sinh_half, sech_half, CrownVolume};
use crate::error::{Error, Result, SchemaError, SchemaErrorKind};
use crate::moments::{reduce_integral, DenomKind};
use crate::ring::{GradedMonomial, PiPolynomial, PrecisionValue, Rational, SymbolicValue};

/// `prefactor · numerator(d) / D(d)` for the annulus with crowns of `a1` and
/// `a2` tines, `D` one of `cosh²(d/2)`, `sinh²(d/2)`, `sinh(d/2)cosh(d/2)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AnnulusVolume {
    pub a1: u32,
    pub a2: u32,
    pub numerator: PiPolynomial,
    pub denom: DenomKind,
    pub prefactor: Rational,
}

fn check_tines(a: u32) -> Result<()> {
    if a == 0 {
        return Err(Error::InvalidArgument("each crown needs at least one tine".into()));
    }
    Ok(())
}

/// Fixed-neck annulus volume `d · V_{A_{a1}}(d) · V_{A_{a2}}(d)`.
pub fn annulus_volume_fixed_neck(a1: u32, a2: u32) -> Result<AnnulusVolume> {
    check_tines(a1)?;
    check_tines(a2)?;
    let c1 = crown_volume_fixed_neck(a1)?;
    let c2 = crown_volume_fixed_neck(a2)?;
    let denom = match (a1 % 2, a2 % 2) {
        (0, 0) => DenomKind::SinhSqHalf,
        (1, 1) => DenomKind::CoshSqHalf,
        _ => DenomKind::SinhHalfCoshHalf,
    };
    Ok(AnnulusVolume {
        a1,
        a2,
        numerator: c1.numerator.mul(&c2.numerator).shift(1),
        denom,
        prefactor: &c1.prefactor * &c2.prefactor,
    })
}

impl AnnulusVolume {
    pub fn eval(&self, d: &PrecisionValue, precision_bits: u32) -> Result<PrecisionValue> {
        if d.is_sign_negative() {
            return Err(Error::InvalidArgument(format!("neck length must be nonnegative, got {d}")));
        }
        let p = precision_bits + 16;
        // Trade each factor d of the numerator for a d/sinh(d/2).
        let (strip, hyper) = match self.denom {
            DenomKind::SinhSqHalf => (2, d_over_sinh_half(d).powi(2)),
            DenomKind::CoshSqHalf => (0, sech_half(d).powi(2)),
            _ => (1, d_over_sinh_half(d).mul(&sech_half(d))),
        };
        let rest = self.numerator.unshift(strip).expect("annulus numerator divisible by d");
        let v = rest.eval(d, p)?.mul(&hyper).mul(&PrecisionValue::from_rational(&self.prefactor, p));
        Ok(v.with_prec(precision_bits))
    }

    fn parts(&self, latex: bool) -> (String, String) {
        let num = if latex { self.numerator.render_latex() } else { self.numerator.render_plain() };
        let num = if self.numerator.terms().count() > 1 { format!("({num})") } else { num };
        let inv = self.prefactor.recip().expect("nonzero");
        let f = match (self.denom, latex) {
            (DenomKind::SinhSqHalf, false) => "sinh^2(d/2)",
            (DenomKind::CoshSqHalf, false) => "cosh^2(d/2)",
            (_, false) => "sinh(d/2)cosh(d/2)",
            (DenomKind::SinhSqHalf, true) => "\\sinh^{2}(d/2)",
            (DenomKind::CoshSqHalf, true) => "\\cosh^{2}(d/2)",
            (_, true) => "\\sinh(d/2)\\cosh(d/2)",
        };
        (num, format!("{inv} {f}"))
    }

    /// `d / (4 cosh^2(d/2))`
    pub fn render_plain(&self) -> String {
        let (n, d) = self.parts(false);
        format!("{n} / ({d})")
    }

    pub fn render_latex(&self) -> String {
        let (n, d) = self.parts(true);
        format!("\\frac{{{n}}}{{{d}}}")
    }
}

impl fmt::Display for AnnulusVolume {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render_plain())
    }
}

/// Free-neck annulus volume `∫_0^∞ ℓ V_{A_{a1}}(ℓ) V_{A_{a2}}(ℓ) dℓ`.
pub fn annulus_volume(a1: u32, a2: u32) -> Result<SymbolicValue> {
    let fixed = annulus_volume_fixed_neck(a1, a2)?;
    let integral = reduce_integral(&fixed.numerator.rename("l"), fixed.denom)?;
    Ok(integral.scale(&fixed.prefactor))
}

/// Externally supplied Weil-Petersson polynomial `V_{g,n}` in `π²` and the
/// squares of its boundary variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WpPolynomial {
    pub genus: u32,
    pub vars: Vec<String>,
    /// `(power of π², per-variable powers) -> coefficient`
    pub terms: BTreeMap<(u32, Vec<u32>), Rational>,
}

fn schema(kind: SchemaErrorKind, pointer: impl Into<String>, msg: impl Into<String>) -> Error {
    Error::Schema(SchemaError::new(kind, pointer, msg))
}

fn malformed(pointer: impl Into<String>, msg: impl Into<String>) -> Error {
    schema(SchemaErrorKind::Malformed, pointer, msg)
}

impl WpPolynomial {
    /// `V_{0,3} = 1` on boundary variables `b1, b2, b3`.
    pub fn v03() -> Self {
        let mut terms = BTreeMap::new();
        terms.insert((0, vec![0, 0, 0]), Rational::one());
        WpPolynomial { genus: 0, vars: vec!["b1".into(), "b2".into(), "b3".into()], terms }
    }

    /// Expected homogeneous degree `6g - 6 + 2n`.
    pub fn expected_degree(&self) -> i64 {
        6 * self.genus as i64 - 6 + 2 * self.vars.len() as i64
    }

    pub fn to_symbolic(&self) -> SymbolicValue {
        SymbolicValue::from_terms(self.terms.iter().map(|((pi2, pows), c)| {
            let mut m = GradedMonomial::pi_pow(2 * pi2);
            for (v, &e) in self.vars.iter().zip(pows) {
                m = m.with_var(v, e);
            }
            (m, c.clone())
        }))
    }

    pub fn to_json(&self) -> Value {
        let terms: Vec<Value> = self
            .terms
            .iter()
            .map(|((pi2, pows), c)| serde_json::json!({"pi2": pi2, "pows": pows, "coeff": c.to_string()}))
            .collect();
        serde_json::json!({"genus": self.genus, "vars": self.vars, "terms": terms})
    }
}

fn as_u32(v: &Value, pointer: &str) -> Result<u32> {
    v.as_u64()
        .and_then(|x| u32::try_from(x).ok())
        .ok_or_else(|| malformed(pointer, "expected a nonnegative integer"))
}

/// Parses and validates a Weil-Petersson polynomial document:
/// `{"genus": g, "vars": [..], "terms": [{"pi2": a, "pows": [..], "coeff": "p/q"}]}`.
pub fn load_wp_polynomial(doc: &Value) -> Result<WpPolynomial> {
    let obj = doc.as_object().ok_or_else(|| malformed("", "expected an object"))?;
    for key in obj.keys() {
        if !["genus", "vars", "terms"].contains(&key.as_str()) {
            return Err(malformed(format!("/{key}"), "unknown field"));
        }
    }
    let genus = as_u32(obj.get("genus").ok_or_else(|| malformed("/genus", "missing field"))?, "/genus")?;
    let vars_v = obj.get("vars").and_then(Value::as_array).ok_or_else(|| malformed("/vars", "expected an array of names"))?;
    let mut vars = Vec::new();
    let mut seen = BTreeSet::new();
    for (i, v) in vars_v.iter().enumerate() {
        let name = v.as_str().ok_or_else(|| malformed(format!("/vars/{i}"), "expected a string"))?;
        let valid = !name.is_empty()
            && name.chars().next().is_some_and(|c| c.is_ascii_alphabetic())
            && name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
        if !valid {
            return Err(malformed(format!("/vars/{i}"), format!("invalid variable name {name:?}")));
        }
        if !seen.insert(name.to_string()) {
            return Err(malformed(format!("/vars/{i}"), format!("duplicate variable {name:?}")));
        }
        vars.push(name.to_string());
    }
    let expected = 6 * genus as i64 - 6 + 2 * vars.len() as i64;
    if expected < 0 {
        return Err(malformed("/vars", format!("genus {genus} with {} boundaries is not hyperbolic", vars.len())));
    }
    let terms_v = obj.get("terms").and_then(Value::as_array).ok_or_else(|| malformed("/terms", "expected an array"))?;
    let mut terms: BTreeMap<(u32, Vec<u32>), Rational> = BTreeMap::new();
    for (i, t) in terms_v.iter().enumerate() {
        let p = format!("/terms/{i}");
        let t = t.as_object().ok_or_else(|| malformed(&p, "expected a term object"))?;
        for key in t.keys() {
            if !["pi2", "pows", "coeff"].contains(&key.as_str()) {
                return Err(malformed(format!("{p}/{key}"), "unknown field"));
            }
        }
        let pi2 = as_u32(t.get("pi2").ok_or_else(|| malformed(format!("{p}/pi2"), "missing field"))?, &format!("{p}/pi2"))?;
        let pows_v = t
            .get("pows")
            .and_then(Value::as_array)
            .ok_or_else(|| malformed(format!("{p}/pows"), "expected an array"))?;
        if pows_v.len() != vars.len() {
            return Err(malformed(
                format!("{p}/pows"),
                format!("expected {} exponents, got {}", vars.len(), pows_v.len()),
            ));
        }
        let mut pows = Vec::with_capacity(pows_v.len());
        for (j, e) in pows_v.iter().enumerate() {
            let e = as_u32(e, &format!("{p}/pows/{j}"))?;
            if e % 2 == 1 {
                return Err(schema(
                    SchemaErrorKind::OddPower,
                    format!("{p}/pows/{j}"),
                    format!("odd power {e} of {}", vars[j]),
                ));
            }
            pows.push(e);
        }
        let coeff: Rational = match t.get("coeff") {
            Some(Value::String(s)) => s.parse().map_err(|_| malformed(format!("{p}/coeff"), "expected \"p/q\""))?,
            Some(Value::Number(n)) if n.is_i64() => Rational::from_int(n.as_i64().expect("checked")),
            _ => return Err(malformed(format!("{p}/coeff"), "expected a rational string \"p/q\"")),
        };
        if coeff.is_negative() {
            return Err(schema(SchemaErrorKind::NegativeCoefficient, format!("{p}/coeff"), format!("coefficient {coeff}")));
        }
        let degree = 2 * pi2 as i64 + pows.iter().map(|&e| e as i64).sum::<i64>();
        if degree != expected {
            return Err(schema(
                SchemaErrorKind::NotHomogeneous,
                p,
                format!("term has degree {degree}, expected 6g-6+2n = {expected}"),
            ));
        }
        let e = terms.entry((pi2, pows)).or_default();
        *e += &coeff;
    }
    terms.retain(|_, c| !c.is_zero());
    Ok(WpPolynomial { genus, vars, terms })
}

/// Parses a Weil-Petersson polynomial from JSON text.
pub fn parse_wp_polynomial(text: &str) -> Result<WpPolynomial> {
    let doc: Value = serde_json::from_str(text).map_err(|e| malformed("", format!("invalid JSON: {e}")))?;
    load_wp_polynomial(&doc)
}

/// Genus `g`, `m` cuffs and crowns with the given tine counts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurfaceSpec {
    pub genus: u32,
    pub cuffs: u32,
    pub crowns: Vec<u32>,
}

impl SurfaceSpec {
    /// Checks that the spec describes a surface whose core (crowns cut off
    /// along their necks) is hyperbolic; disks and annuli are rejected and
    /// belong to the crown and annulus operations.
    pub fn validate(&self) -> Result<()> {
        for &a in &self.crowns {
            check_tines(a)?;
        }
        let l = self.crowns.len() as i64;
        let euler = 2 * self.genus as i64 - 2 + self.cuffs as i64 + l;
        if euler <= 0 {
            let hint = match (self.genus, self.cuffs, l) {
                (0, 0, 1) => "a disk with one crown is a polygon",
                (0, 1, 1) => "a cylinder with one crown is a crown",
                (0, 0, 2) => "two crowns on a cylinder form an annulus",
                _ => "the surface core is not hyperbolic",
            };
            return Err(Error::SpecialSurface(format!(
                "genus {} with {} cuffs and {} crowns: {hint}",
                self.genus, self.cuffs, l
            )));
        }
        Ok(())
    }

    /// Real dimension of the moduli space: `6g - 6 + 2m + 3l + Σ a_k`.
    pub fn dimension(&self) -> i64 {
        6 * self.genus as i64 - 6 + 2 * self.cuffs as i64 + 3 * self.crowns.len() as i64
            + self.crowns.iter().map(|&a| a as i64).sum::<i64>()
    }

    /// Upper bound on the degree in each cuff length: `6g - 6 + 2(m + l)`.
    pub fn cuff_degree_bound(&self) -> i64 {
        6 * self.genus as i64 - 6 + 2 * (self.cuffs as i64 + self.crowns.len() as i64)
    }

    fn check_wp(&self, wp: &WpPolynomial) -> Result<()> {
        self.validate()?;
        let want = self.cuffs as usize + self.crowns.len();
        if wp.vars.len() != want {
            return Err(Error::VariableCount { expected: want, got: wp.vars.len() });
        }
        if wp.genus != self.genus {
            return Err(Error::InvalidArgument(format!(
                "polynomial has genus {}, surface has genus {}",
                wp.genus, self.genus
            )));
        }
        Ok(())
    }
}

/// Product `V_{g,m+l}(b, d) · Π d_k V_{A_{a_k}}(d_k)` kept with its
/// hyperbolic denominators. Cuff variables come first in the polynomial's
/// variable list, then one neck variable per crown.
#[derive(Clone, Debug, PartialEq)]
pub struct SurfaceFixedVolume {
    pub wp: SymbolicValue,
    pub cuffs: Vec<String>,
    /// Neck variable and its crown factor.
    pub necks: Vec<(String, CrownVolume)>,
}

impl SurfaceFixedVolume {
    /// Exact numerator: the polynomial times `d_k · numerator_k · prefactor_k`.
    pub fn numerator(&self) -> SymbolicValue {
        let mut out = self.wp.clone();
        for (v, cv) in &self.necks {
            let f = cv.numerator.rename(v).to_symbolic().scale(&cv.prefactor);
            out = out.ring_mul(&f).mul_monomial(&GradedMonomial::var(v, 1));
        }
        out
    }

    pub fn eval(&self, assignments: &BTreeMap<String, PrecisionValue>, precision_bits: u32) -> Result<PrecisionValue> {
        let p = precision_bits + 16;
        let mut v = self.wp.eval(assignments, p)?;
        for (name, cv) in &self.necks {
            let d = assignments.get(name).ok_or_else(|| Error::UnassignedVariable(name.clone()))?;
            v = v.mul(d).mul(&cv.eval(d, p)?);
        }
        Ok(v.with_prec(precision_bits))
    }

    /// Numerator without the crown prefactors, and the product of their
    /// reciprocals.
    fn split_prefactor(&self) -> (SymbolicValue, Rational) {
        let mut den = Rational::one();
        for (_, cv) in &self.necks {
            den = den * cv.prefactor.recip().expect("nonzero");
        }
        (self.numerator().scale(&den), den)
    }

    /// `b3 / (2 cosh(b3/2))`
    pub fn render_plain(&self) -> String {
        if self.necks.is_empty() {
            return self.wp.render_plain();
        }
        let (num, den) = self.split_prefactor();
        let num_s = if num.len() > 1 { format!("({})", num.render_plain()) } else { num.render_plain() };
        let mut factors = Vec::new();
        if den != Rational::one() {
            factors.push(den.to_string());
        }
        for (v, cv) in &self.necks {
            let f = if cv.denom == DenomKind::SinhHalf { "sinh" } else { "cosh" };
            factors.push(format!("{f}({v}/2)"));
        }
        format!("{num_s} / ({})", factors.join(" "))
    }

    pub fn render_latex(&self) -> String {
        if self.necks.is_empty() {
            return self.wp.render_latex();
        }
        let (num, den) = self.split_prefactor();
        let mut factors = Vec::new();
        if den != Rational::one() {
            factors.push(den.to_string());
        }
        for (v, cv) in &self.necks {
            let f = if cv.denom == DenomKind::SinhHalf { "\\sinh" } else { "\\cosh" };
            factors.push(format!("{f}({v}/2)"));
        }
        format!("\\frac{{{}}}{{{}}}", num.render_latex(), factors.join(" "))
    }
}

/// Fixed-neck volume of a crowned surface by the product formula.
pub fn surface_volume_fixed(spec: &SurfaceSpec, wp: &WpPolynomial) -> Result<SurfaceFixedVolume> {
    spec.check_wp(wp)?;
    let m = spec.cuffs as usize;
    let necks = spec
        .crowns
        .iter()
        .enumerate()
        .map(|(k, &a)| Ok((wp.vars[m + k].clone(), crown_volume_fixed_neck(a)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(SurfaceFixedVolume { wp: wp.to_symbolic(), cuffs: wp.vars[..m].to_vec(), necks })
}

/// Integrates `∫_0^∞ P · ℓ · V_{A_a}(ℓ) dℓ` over the variable `var` of `P`.
fn integrate_neck(p: &SymbolicValue, var: &str, a: u32) -> Result<SymbolicValue> {
    let cv = crown_volume_fixed_neck(a)?;
    let mut by_power: BTreeMap<u32, SymbolicValue> = BTreeMap::new();
    for (m, c) in p.terms() {
        let (e, rest) = m.split_var(var);
        by_power.entry(e).or_default().add_term(rest, c.clone());
    }
    let mut out = SymbolicValue::zero();
    for (e, rest) in by_power {
        let numerator = cv.numerator.rename("l").shift(e + 1);
        let moment = reduce_integral(&numerator, cv.denom)?.scale(&cv.prefactor);
        out = out.ring_add(&rest.ring_mul(&moment));
    }
    Ok(out)
}

/// Free-neck volume: every neck length integrated out, crowns in ascending
/// index order.
pub fn surface_volume_free(spec: &SurfaceSpec, wp: &WpPolynomial) -> Result<SymbolicValue> {
    surface_volume_free_ordered(spec, wp, &(0..spec.crowns.len()).collect::<Vec<_>>())
}

/// As [`surface_volume_free`] with an explicit integration order.
pub fn surface_volume_free_ordered(spec: &SurfaceSpec, wp: &WpPolynomial, order: &[usize]) -> Result<SymbolicValue> {
    spec.check_wp(wp)?;
    let mut sorted = order.to_vec();
    sorted.sort_unstable();
    if sorted != (0..spec.crowns.len()).collect::<Vec<_>>() {
        return Err(Error::InvalidArgument("integration order must be a permutation of the crowns".into()));
    }
    let m = spec.cuffs as usize;
    let mut p = wp.to_symbolic();
    for &k in order {
        p = integrate_neck(&p, &wp.vars[m + k], spec.crowns[k])?;
    }
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::Homogeneity;

    fn zeta(c: (i64, i64), j: u32) -> SymbolicValue {
        SymbolicValue::term(GradedMonomial::zeta(j), Rational::new(c.0, c.1))
    }

    #[test]
    fn fixed_neck_annuli() {
        assert_eq!(annulus_volume_fixed_neck(1, 1).unwrap().render_plain(), "d / (4 cosh^2(d/2))");
        assert_eq!(annulus_volume_fixed_neck(2, 2).unwrap().render_plain(), "d^3 / (4 sinh^2(d/2))");
        let a12 = annulus_volume_fixed_neck(1, 2).unwrap();
        let one = PrecisionValue::from_int(1, 128);
        let expect = 1.0 / (2.0 * 1f64.sinh());
        assert!((a12.eval(&one, 128).unwrap().to_f64() - expect).abs() < 1e-15);
    }

    #[test]
    fn small_free_annuli() {
        assert_eq!(annulus_volume(1, 1).unwrap(), SymbolicValue::term(GradedMonomial::log2(), Rational::one()));
        assert_eq!(annulus_volume(1, 2).unwrap(), zeta((7, 4), 3));
        assert_eq!(annulus_volume(2, 2).unwrap(), zeta((6, 1), 3));
        assert_eq!(annulus_volume(2, 3).unwrap(), annulus_volume(3, 2).unwrap());
    }

    #[test]
    fn wp_schema() {
        let ok = serde_json::json!({"genus":0, "vars":["b1","b2","b3"], "terms":[{"pi2":0,"pows":[0,0,0],"coeff":"1"}]});
        assert_eq!(load_wp_polynomial(&ok).unwrap(), WpPolynomial::v03());
        let odd = serde_json::json!({"genus":0, "vars":["b1","b2","b3"], "terms":[{"pi2":0,"pows":[1,0,0],"coeff":"1"}]});
        match load_wp_polynomial(&odd) {
            Err(Error::Schema(e)) => {
                assert_eq!(e.kind, SchemaErrorKind::OddPower);
                assert_eq!(e.pointer, "/terms/0/pows/0");
            }
            other => panic!("unexpected {other:?}"),
        }
        let inhom = serde_json::json!({"genus":0, "vars":["b1","b2","b3","b4"],
            "terms":[{"pi2":1,"pows":[0,0,0,0],"coeff":"2"}, {"pi2":0,"pows":[4,0,0,0],"coeff":"1"}]});
        assert!(matches!(load_wp_polynomial(&inhom), Err(Error::Schema(SchemaError { kind: SchemaErrorKind::NotHomogeneous, .. }))));
        let missing = serde_json::json!({"vars":[], "terms":[]});
        assert!(matches!(load_wp_polynomial(&missing), Err(Error::Schema(_))));
    }

    #[test]
    fn pants_with_one_crown() {
        let spec = SurfaceSpec { genus: 0, cuffs: 2, crowns: vec![1] };
        let wp = WpPolynomial::v03();
        let fixed = surface_volume_fixed(&spec, &wp).unwrap();
        assert_eq!(fixed.render_plain(), "b3 / (2 cosh(b3/2))");
        assert_eq!(
            surface_volume_free(&spec, &wp).unwrap(),
            SymbolicValue::term(GradedMonomial::beta(2), Rational::from_int(4))
        );
        let spec2 = SurfaceSpec { genus: 0, cuffs: 2, crowns: vec![2] };
        assert_eq!(surface_volume_free(&spec2, &wp).unwrap(), zeta((14, 1), 3));
        let v = surface_volume_free(&spec2, &wp).unwrap();
        assert_eq!(v.homogeneous_degree(), Homogeneity::Degree(spec2.dimension() as u32));
    }

    #[test]
    fn spec_validation() {
        let wp = WpPolynomial::v03();
        let bad = SurfaceSpec { genus: 0, cuffs: 1, crowns: vec![1] };
        assert!(matches!(surface_volume_free(&bad, &wp), Err(Error::SpecialSurface(_))));
        let mismatch = SurfaceSpec { genus: 0, cuffs: 3, crowns: vec![1] };
        assert_eq!(
            surface_volume_free(&mismatch, &wp),
            Err(Error::VariableCount { expected: 4, got: 3 })
        );
    }
}
