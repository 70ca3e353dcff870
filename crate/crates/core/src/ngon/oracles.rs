//! Independent numerical checks of the crown closed forms.

use std::cell::RefCell;
use std::collections::BTreeMap;
use std::fmt::Write as _;

use rug::Float;

use crate::crown::crown_volume_fixed_neck;
use crate::error::{Error, Result};
use crate::moments::DenomKind;
use crate::quad::{semi_infinite, tanh_sinh, Node, TailBound, TanhSinh};
use crate::ring::{PrecisionValue, Rational};

fn sech_kernel(s: f64) -> f64 {
    0.5 / (s / 2.0).cosh()
}

fn convolve_trapezoid(n: u32, d: f64, h: f64, half_width: f64) -> f64 {
    if n == 1 {
        return sech_kernel(d);
    }
    let m = (half_width / h).ceil() as i64;
    let grid: Vec<f64> = (-m..=m).map(|i| i as f64 * h).collect();
    let kernel: Vec<f64> = (-2 * m..=2 * m).map(|i| sech_kernel(i as f64 * h)).collect();
    let mut g: Vec<f64> = grid.iter().map(|&x| sech_kernel(x)).collect();
    let len = grid.len();
    for _ in 2..n {
        g = (0..len)
            .map(|i| h * (0..len).map(|j| g[j] * kernel[i + len - 1 - j]).sum::<f64>())
            .collect();
    }
    h * grid.iter().zip(&g).map(|(x, gj)| gj * sech_kernel(d - x)).sum::<f64>()
}

/// `n`-fold convolution of `1/(2cosh(s/2))` evaluated at `d`, by iterated
/// trapezoidal quadrature in double precision. The error is the change
/// from halving the step plus a rounding allowance.
pub fn crown_convolution_check(n: u32, d: &PrecisionValue) -> Result<PrecisionValue> {
    if n == 0 {
        return Err(Error::InvalidArgument("convolution needs at least one factor".into()));
    }
    let d = d.to_f64();
    if !d.is_finite() {
        return Err(Error::InvalidArgument("neck length must be finite".into()));
    }
    let half_width = 120.0 + d.abs();
    let coarse = convolve_trapezoid(n, d, 0.5, half_width);
    let fine = convolve_trapezoid(n, d, 0.25, half_width);
    let err = (fine - coarse).abs() + fine.abs() * 1e-14 * n as f64;
    Ok(PrecisionValue::from_f64(fine, err, 53))
}

/// `∫_0^∞ V_{A_n}(d) dd` by tanh-sinh panels plus a tail bound.
pub fn crown_marginal_integral(n: u32, precision_bits: u32, tol: f64) -> Result<PrecisionValue> {
    let crown = crown_volume_fixed_neck(n)?;
    let pi2 = std::f64::consts::PI.powi(2);
    let coeff_sum: f64 = crown.numerator.terms().map(|((a, _), c)| c.to_f64().abs() * pi2.powi(*a as i32)).sum();
    let denom_const = if crown.denom == DenomKind::SinhHalf { 3.2 } else { 2.0 };
    let tail = TailBound {
        c: crown.prefactor.to_f64() * coeff_sum * denom_const,
        m: crown.degree() as f64,
        alpha: 0.5,
    };
    let failure = std::sync::Mutex::new(None);
    let prec = precision_bits + 16;
    let v = semi_infinite(
        |x| match crown.eval(&PrecisionValue::exact(x.clone()), prec) {
            Ok(v) => v.value().clone(),
            Err(e) => {
                failure.lock().expect("poisoned").get_or_insert(e);
                Float::with_val(prec, rug::float::Special::Nan)
            }
        },
        tail,
        prec,
        tol,
    );
    if let Some(e) = failure.into_inner().expect("poisoned") {
        return Err(e);
    }
    Ok(v?.with_prec(precision_bits))
}

/// Budget for the nested simplex quadrature.
#[derive(Clone, Debug)]
pub struct SimplexSpec {
    pub precision_bits: u32,
    /// Absolute tolerance of the outermost integral; inner levels use a
    /// tighter one.
    pub tolerance: f64,
}

impl Default for SimplexSpec {
    fn default() -> Self {
        SimplexSpec { precision_bits: 64, tolerance: 1e-9 }
    }
}

struct Simplex<'a> {
    n: usize,
    prec: u32,
    numer: Float,
    cfg: Vec<TanhSinh>,
    failure: &'a RefCell<Option<Error>>,
    top_error: RefCell<Option<Float>>,
}

impl Simplex<'_> {
    fn leaf(&self, deltas: &[Float]) -> Float {
        let p = self.prec;
        let mut denom = Float::with_val(p, 1);
        for i in 0..self.n {
            let s = Float::with_val(p, &deltas[i] + &deltas[(i + 1) % self.n]);
            denom *= s.exp_m1();
        }
        Float::with_val(p, &self.numer / denom)
    }

    // δ's chosen so far, integrating the next one over (0, remaining).
    fn level(&self, deltas: &mut Vec<Float>, remaining: &Float) -> Float {
        let depth = deltas.len();
        let zero = Float::new(self.prec);
        let last = depth + 2 == self.n;
        let cell = RefCell::new(std::mem::take(deltas));
        let f = |node: &Node<'_>| -> Float {
            let mut ds = cell.borrow_mut();
            ds.push(node.from_a.clone());
            let v = if last {
                ds.push(node.to_b.clone());
                let v = self.leaf(&ds);
                ds.pop();
                v
            } else {
                let mut inner = std::mem::take(&mut *ds);
                let v = self.level(&mut inner, node.to_b);
                *ds = inner;
                v
            };
            ds.pop();
            v
        };
        let r = tanh_sinh(f, &zero, remaining, &self.cfg[depth]);
        *deltas = cell.into_inner();
        match r {
            Ok(v) => {
                if depth == 0 {
                    *self.top_error.borrow_mut() = Some(v.abs_error().clone());
                }
                v.value().clone()
            }
            Err(e) => {
                self.failure.borrow_mut().get_or_insert(e);
                Float::with_val(self.prec, rug::float::Special::Nan)
            }
        }
    }
}

/// Integral of `e^{P/2}(e^P - 1) / Π_i (e^{δ_i + δ_{i+1}} - 1)` over the
/// simplex `δ_i > 0, Σ δ_i = P` with cyclic indices, by nested tanh-sinh in
/// `δ_1, …, δ_{n-1}`. Endpoint distances are passed down so that every
/// `δ_i` is known without cancellation.
pub fn simplex_crown_integral(n: u32, p: &PrecisionValue, spec: &SimplexSpec) -> Result<PrecisionValue> {
    if n < 2 {
        return Err(Error::InvalidArgument("the simplex integral needs n >= 2".into()));
    }
    if p.value().is_sign_negative() || p.value().is_zero() {
        return Err(Error::InvalidArgument(format!("P must be positive, got {p}")));
    }
    let prec = spec.precision_bits + 16;
    let pv = Float::with_val(prec, p.value());
    let numer = Float::with_val(prec, &pv / 2u32).exp() * Float::with_val(prec, pv.exp_m1_ref());
    let cfg = (0..n - 1)
        .map(|k| TanhSinh::new(prec, spec.tolerance * 10f64.powi(-2 * k as i32)))
        .collect();
    let failure = RefCell::new(None);
    let s = Simplex { n: n as usize, prec, numer, cfg, failure: &failure, top_error: RefCell::new(None) };
    let mut deltas = Vec::new();
    let value = s.level(&mut deltas, &pv);
    let top = s.top_error.take();
    drop(s);
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    let err = top.unwrap_or_else(|| Float::with_val(64, spec.tolerance));
    Ok(PrecisionValue::new(value, err).with_prec(spec.precision_bits))
}

/// `∫_0^∞ dx / ((x + cosh(d/2))² - sinh²(d/2))`, written as
/// `∫_0^∞ dx / (x² + 2x cosh(d/2) + 1)` and mapped to (0, 1) by `x = t/(1-t)`.
pub fn two_crown_lambda_integral(d: &PrecisionValue, precision_bits: u32) -> Result<PrecisionValue> {
    if d.value().is_sign_negative() || d.value().is_zero() {
        return Err(Error::InvalidArgument(format!("neck length must be positive, got {d}")));
    }
    let prec = precision_bits + 16;
    let c = Float::with_val(prec, d.value() / 2u32).cosh();
    let two_c = Float::with_val(prec, &c * 2u32);
    let zero = Float::new(prec);
    let one = Float::with_val(prec, 1);
    let tol = Float::with_val(64, 1) >> precision_bits;
    let v = tanh_sinh(
        |node| {
            let t = node.from_a;
            let s = node.to_b;
            let q = Float::with_val(prec, t.square_ref())
                + Float::with_val(prec, s.square_ref())
                + Float::with_val(prec, &two_c * Float::with_val(prec, t * s));
            Float::with_val(prec, q.recip_ref())
        },
        &zero,
        &one,
        &TanhSinh::new(prec, tol.to_f64()),
    )?;
    Ok(v.with_prec(precision_bits))
}

/// Polynomial in `u_1, …, u_j` with rational coefficients; keys are exponent
/// vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QPolynomial {
    pub vars: usize,
    terms: BTreeMap<Vec<u32>, Rational>,
}

impl QPolynomial {
    fn constant(vars: usize, c: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(vec![0; vars], c);
        }
        QPolynomial { vars, terms }
    }

    fn var(vars: usize, i: usize) -> Self {
        let mut e = vec![0; vars];
        e[i] = 1;
        QPolynomial { vars, terms: BTreeMap::from([(e, Rational::one())]) }
    }

    fn add(&self, other: &Self) -> Self {
        let mut terms = self.terms.clone();
        for (e, c) in &other.terms {
            let s = terms.remove(e).unwrap_or_else(Rational::zero) + c;
            if !s.is_zero() {
                terms.insert(e.clone(), s);
            }
        }
        QPolynomial { vars: self.vars, terms }
    }

    fn mul(&self, other: &Self) -> Self {
        let mut out = Self::constant(self.vars, Rational::zero());
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out = out.add(&QPolynomial { vars: self.vars, terms: BTreeMap::from([(e, c1 * c2)]) });
            }
        }
        out
    }

    /// `1 - u_i`.
    fn one_minus(vars: usize, i: usize) -> Self {
        Self::constant(vars, Rational::one()).add(&Self::var(vars, i).scale(&Rational::from_int(-1)))
    }

    fn scale(&self, c: &Rational) -> Self {
        Self::constant(self.vars, c.clone()).mul(self)
    }

    /// Shifts variable `u_i` to `u_{i+1}`, adding a new first variable.
    fn shift_vars(&self) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| {
                let mut ne = vec![0];
                ne.extend_from_slice(e);
                (ne, c.clone())
            })
            .collect();
        QPolynomial { vars: self.vars + 1, terms }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Rational)> {
        self.terms.iter()
    }

    pub fn eval(&self, u: &[Rational]) -> Result<Rational> {
        if u.len() != self.vars {
            return Err(Error::VariableCount { expected: self.vars, got: u.len() });
        }
        let mut acc = Rational::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (x, k) in u.iter().zip(e) {
                t = t * x.pow(*k);
            }
            acc = acc + t;
        }
        Ok(acc)
    }

    /// Expanded form such as `1 - u2 + u1*u2`.
    pub fn render_plain(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut items: Vec<_> = self.terms.iter().collect();
        items.sort_by_key(|(e, _)| (e.iter().sum::<u32>(), std::cmp::Reverse((*e).clone())));
        let mut out = String::new();
        for (i, (e, c)) in items.into_iter().enumerate() {
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, k)| **k > 0)
                .map(|(v, k)| if *k == 1 { format!("u{}", v + 1) } else { format!("u{}^{k}", v + 1) })
                .collect();
            let neg = c.is_negative();
            let mag = c.abs();
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            match (mono.is_empty(), mag == Rational::one()) {
                (true, _) => write!(out, "{mag}").unwrap(),
                (false, true) => out.push_str(&mono.join("*")),
                (false, false) => write!(out, "{mag}*{}", mono.join("*")).unwrap(),
            }
        }
        out
    }
}

/// `Q_j` from the recursion `Q_j = u_1 Q_{j-1}(u_2, …) + Π (1 - u_i)`, `Q_1 = 1`.
pub fn q_polynomial(j: u32) -> Result<QPolynomial> {
    if j == 0 {
        return Err(Error::InvalidArgument("Q_j needs j >= 1".into()));
    }
    let mut q = QPolynomial::constant(1, Rational::one());
    for k in 2..=j as usize {
        let prod = (0..k).fold(QPolynomial::constant(k, Rational::one()), |acc, i| {
            acc.mul(&QPolynomial::one_minus(k, i))
        });
        q = QPolynomial::var(k, 0).mul(&q.shift_vars()).add(&prod);
    }
    Ok(q)
}

/// `Q_j` as the sum over `i = 0..j` of `u_1⋯u_i (1-u_{i+1})⋯(1-u_j)`.
pub fn q_polynomial_products(j: u32) -> Result<QPolynomial> {
    if j == 0 {
        return Err(Error::InvalidArgument("Q_j needs j >= 1".into()));
    }
    let k = j as usize;
    if k == 1 {
        return Ok(QPolynomial::constant(1, Rational::one()));
    }
    let mut sum = QPolynomial::constant(k, Rational::zero());
    for i in 0..=k {
        let mut t = QPolynomial::constant(k, Rational::one());
        for v in 0..k {
            t = t.mul(&if v < i { QPolynomial::var(k, v) } else { QPolynomial::one_minus(k, v) });
        }
        sum = sum.add(&t);
    }
    Ok(sum)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn q_two_variables() {
        let q = q_polynomial(2).unwrap();
        assert_eq!(q.render_plain(), "1 - u2 + u1*u2");
        assert_eq!(q_polynomial(1).unwrap().render_plain(), "1");
    }

    #[test]
    fn q_recursion_matches_products() {
        for j in 1..7 {
            assert_eq!(q_polynomial(j).unwrap(), q_polynomial_products(j).unwrap(), "j = {j}");
        }
    }

    #[test]
    fn q_at_half() {
        for j in 1..8u32 {
            let half = vec![Rational::new(1, 2); j as usize];
            let v = q_polynomial(j).unwrap().eval(&half).unwrap();
            assert_eq!(v, Rational::new(j as i64 + 1, 1 << j));
        }
    }

    #[test]
    fn convolution_of_one_factor() {
        let v = crown_convolution_check(1, &PrecisionValue::from_f64(2.0, 0.0, 53)).unwrap();
        assert!((v.to_f64() - 0.5 / 1f64.cosh()).abs() < 1e-16);
    }

    #[test]
    fn convolution_square_at_one() {
        let v = crown_convolution_check(2, &PrecisionValue::from_f64(1.0, 0.0, 53)).unwrap();
        assert!((v.to_f64() - 0.5 / 0.5f64.sinh()).abs() < 1e-12);
    }

    #[test]
    fn lambda_integral_closed_form() {
        for d in [1.0, 10.0, 1e-3] {
            let v = two_crown_lambda_integral(&PrecisionValue::from_f64(d, 0.0, 64), 64).unwrap();
            let truth = (d / 2.0) / (d / 2.0).sinh();
            assert!((v.to_f64() - truth).abs() < 1e-14, "d = {d}: {v}");
        }
    }

    #[test]
    fn simplex_two_tines() {
        let p = PrecisionValue::from_f64(1.0, 0.0, 64);
        let v = simplex_crown_integral(2, &p, &SimplexSpec::default()).unwrap();
        assert!((v.to_f64() - 0.5 / 0.5f64.sinh()).abs() < 1e-10);
    }
}
