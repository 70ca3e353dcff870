//! Checks of the conjectured coefficients of `A_{1,k}` annulus volumes and
//! of the conjectured polygon volumes.

use serde::Serialize;

use crate::crown::{double_factorial, ngon_conjecture_volume};
use crate::error::{Error, Result};
use crate::ngon::{ngon_volume_quadrature, QuadratureSpec};
use crate::ring::{GradedMonomial, PrecisionValue, Rational};
use crate::surface::annulus_volume;

#[derive(Clone, Debug, Serialize)]
pub struct Counterexample {
    pub k: u32,
    pub monomial: String,
    pub expected: String,
    pub got: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct ConjectureReport {
    pub name: String,
    pub statement: String,
    pub k_min: u32,
    pub checked: Vec<u32>,
    pub passed: bool,
    pub counterexample: Option<Counterexample>,
}

fn r(n: i64) -> Rational {
    Rational::from_int(n)
}

fn factorial(n: i64) -> Rational {
    (2..=n).fold(r(1), |acc, k| acc * r(k))
}

/// Leading term of `A_{1,k}`.
fn leading_term(k: u32) -> (GradedMonomial, Rational) {
    let h = (k / 2) as i64;
    if k % 2 == 1 {
        let c = Rational::from_integer(double_factorial(2 * h - 1))
            * Rational::from_integer(double_factorial(2 * h)).recip().expect("nonzero");
        (GradedMonomial::pi_pow(2 * h as u32).mul(&GradedMonomial::log2()), c)
    } else {
        let c = Rational::new(7, 4)
            * Rational::from_integer(double_factorial(2 * h - 2))
            * Rational::from_integer(double_factorial(2 * h - 1)).recip().expect("nonzero");
        (GradedMonomial::pi_pow(2 * h as u32 - 2).mul(&GradedMonomial::zeta(3)), c)
    }
}

/// Polynomial prefactor of the `π^{2i}` term, divided by the factorial.
fn tail_prefactor(i: u32, k: i64) -> Rational {
    match i {
        0 => r(k),
        1 => r(k * (k - 2)) * factorial(3).recip().unwrap(),
        2 => r(2 * k * (k - 4) * (5 * k + 2)) * factorial(6).recip().unwrap(),
        3 => r(8 * k * (k - 6) * (35 * k * k + 42 * k + 16)) * factorial(9).recip().unwrap(),
        4 => {
            r(88 * k * (k - 8) * (5 * k + 4)) * r(35 * k * k + 56 * k + 36) * factorial(12).recip().unwrap()
        }
        5 => {
            let quartic = 385 * k.pow(4) + 1540 * k.pow(3) + 2684 * k * k + 2288 * k + 768;
            r(3640 * k * (k - 10)) * r(quartic) * factorial(15).recip().unwrap()
        }
        _ => unreachable!("only six trailing terms are conjectured"),
    }
}

/// Coefficient of `π^{2i} ζ(2⌊k/2⌋ + 1 - 2i)` in `A_{1,k}`.
fn trailing_term(i: u32, k: u32) -> (GradedMonomial, Rational) {
    let shift = if k % 2 == 1 { 1 + 2 * i as i64 - k as i64 } else { 2 * i as i64 - 1 - k as i64 };
    let two_pow = Rational::new(1, 2).pow((-shift) as u32);
    let c = tail_prefactor(i, k as i64) * (r(1) - two_pow);
    let zeta = 2 * (k / 2) + 1 - 2 * i;
    (GradedMonomial::pi_pow(2 * i).mul(&GradedMonomial::zeta(zeta)), c)
}

struct Conjecture {
    name: &'static str,
    statement: &'static str,
    k_min: u32,
    term: Box<dyn Fn(u32) -> (GradedMonomial, Rational)>,
}

fn conjectures() -> Vec<Conjecture> {
    let mut out = vec![Conjecture {
        name: "leading term",
        statement: "odd k = 2h+1: (2h-1)!!/(2h)!! pi^(2h) log 2; even k = 2h: 7/4 (2h-2)!!/(2h-1)!! pi^(2h-2) zeta(3)",
        k_min: 1,
        term: Box::new(leading_term),
    }];
    let statements = [
        "k (1 - 2^(1-k) | 1 - 2^(-1-k)) zeta(2[k/2]+1)",
        "k(k-2)/3! (1 - 2^(3-k) | 1 - 2^(1-k)) pi^2 zeta(2[k/2]-1)",
        "2k(k-4)(5k+2)/6! (1 - 2^(5-k) | 1 - 2^(3-k)) pi^4 zeta(2[k/2]-3)",
        "8k(k-6)(35k^2+42k+16)/9! (1 - 2^(7-k) | 1 - 2^(5-k)) pi^6 zeta(2[k/2]-5)",
        "88k(k-8)(5k+4)(35k^2+56k+36)/12! (1 - 2^(9-k) | 1 - 2^(7-k)) pi^8 zeta(2[k/2]-7)",
        "3640k(k-10)(385k^4+1540k^3+2684k^2+2288k+768)/15! (1 - 2^(11-k) | 1 - 2^(9-k)) pi^10 zeta(2[k/2]-9)",
    ];
    let names = ["last term", "second-last term", "third-last term", "fourth-last term", "fifth-last term", "sixth-last term"];
    for (i, (name, statement)) in names.iter().zip(statements).enumerate() {
        let i = i as u32;
        out.push(Conjecture { name, statement, k_min: 2 * i + 2, term: Box::new(move |k| trailing_term(i, k)) });
    }
    out
}

/// Compares the exact `A_{1,k}` volumes for `k ≤ k_max` with each
/// conjectured coefficient over the range where it is claimed.
pub fn verify_annuli_conjectures(k_max: u32) -> Result<Vec<ConjectureReport>> {
    if k_max < 2 {
        return Err(Error::InvalidArgument(format!("k_max must be at least 2, got {k_max}")));
    }
    let volumes: Vec<_> = (1..=k_max).map(|k| annulus_volume(1, k)).collect::<Result<_>>()?;
    Ok(conjectures()
        .into_iter()
        .map(|c| {
            let mut checked = Vec::new();
            let mut counterexample = None;
            for k in c.k_min..=k_max {
                let (m, expected) = (c.term)(k);
                let got = volumes[k as usize - 1].coefficient(&m);
                checked.push(k);
                if got != expected && counterexample.is_none() {
                    counterexample = Some(Counterexample {
                        k,
                        monomial: m.render_plain(),
                        expected: expected.to_string(),
                        got: got.to_string(),
                    });
                }
            }
            ConjectureReport {
                name: c.name.to_string(),
                statement: c.statement.to_string(),
                k_min: c.k_min,
                passed: counterexample.is_none(),
                checked,
                counterexample,
            }
        })
        .collect())
}

/// One polygon compared with its conjectured volume. Agreement is
/// consistency evidence, not proof.
#[derive(Clone, Debug, Serialize)]
pub struct NgonConjectureRow {
    pub n: u32,
    pub conjecture: String,
    pub conjecture_value: f64,
    pub estimate: f64,
    pub estimate_error: f64,
    pub agreement_digits: f64,
    pub passed: bool,
}

/// Quadrature estimates against the conjectured volumes. A row passes when
/// the relative difference shows at least `tolerance_digits` digits.
pub fn verify_ngon_conjecture(
    ns: impl IntoIterator<Item = u32>,
    tolerance_digits: f64,
    spec: &QuadratureSpec,
) -> Result<Vec<NgonConjectureRow>> {
    let mut rows = Vec::new();
    for n in ns {
        let conj = ngon_conjecture_volume(n)?.value;
        let cv = conj.eval_const(spec.precision_bits)?;
        let est = if n < 5 {
            PrecisionValue::from_int(1, spec.precision_bits)
        } else {
            ngon_volume_quadrature(n, spec)?.value
        };
        let diff = est.sub(&cv);
        let rel = (diff.to_f64() / cv.to_f64()).abs();
        let agreement = if rel == 0.0 { f64::INFINITY } else { -rel.log10() };
        rows.push(NgonConjectureRow {
            n,
            conjecture: conj.render_plain(),
            conjecture_value: cv.to_f64(),
            estimate: est.to_f64(),
            estimate_error: est.abs_error_f64(),
            agreement_digits: agreement,
            passed: agreement >= tolerance_digits,
        });
    }
    Ok(rows)
}
