//! Recognition of numeric values as rational combinations of constant
//! monomials, and checks of the conjectural closed forms.

pub mod basis;
pub mod conjectures;
pub mod lll;

use rug::ops::Pow;
use rug::{Float, Integer};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::ring::precision::up;
use crate::ring::{PrecisionValue, Rational, SymbolicValue};

pub use basis::{enumerate_basis, BasisFlags, MonomialBasis};
pub use conjectures::{verify_annuli_conjectures, verify_ngon_conjecture, ConjectureReport, NgonConjectureRow};
pub use lll::lll_reduce;

/// Decimal digits kept beyond the relation-size estimate.
pub const GUARD_DIGITS: f64 = 3.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum RecognitionStatus {
    Found,
    NotFound,
}

#[derive(Clone, Debug)]
pub struct RecognitionResult {
    pub status: RecognitionStatus,
    /// The recognized value; zero when nothing was found.
    pub value: SymbolicValue,
    /// `value - x` with its uncertainty, when a candidate exists.
    pub residual: Option<PrecisionValue>,
    /// Largest numerator or denominator among the coefficients.
    pub coefficient_height: Integer,
    /// Largest entry of the primitive integer relation.
    pub relation_height: Integer,
    pub digits_used: u32,
}

impl RecognitionResult {
    pub fn found(&self) -> bool {
        self.status == RecognitionStatus::Found
    }

    fn not_found(digits_used: u32) -> Self {
        RecognitionResult {
            status: RecognitionStatus::NotFound,
            value: SymbolicValue::zero(),
            residual: None,
            coefficient_height: Integer::new(),
            relation_height: Integer::new(),
            digits_used,
        }
    }
}

/// Absolute decimal digits available in `x`.
pub fn available_digits(x: &PrecisionValue) -> f64 {
    let err = if x.abs_error().is_zero() {
        let mag = Float::with_val(64, x.value().abs_ref()).max(&Float::with_val(64, 1));
        up(mag >> x.prec())
    } else {
        x.abs_error().clone()
    };
    -err.to_f64().log10()
}

/// Digits needed before a relation of entries up to `max_height` among
/// `terms` numbers can be trusted.
pub fn required_digits(terms: usize, max_height: &Integer) -> f64 {
    let h = max_height.to_f64().max(2.0).log10();
    terms as f64 * h + GUARD_DIGITS
}

/// Shortest integer relation found by lattice reduction at `digits` decimal
/// digits, with the coefficient of `x` made positive.
fn find_relation(values: &[Float], digits: u32) -> Option<Vec<Integer>> {
    let m = values.len();
    let prec = values[0].prec();
    let scale = Float::with_val(prec, Integer::from(10).pow(digits));
    let mut rows: Vec<Vec<Integer>> = (0..m)
        .map(|i| {
            let mut row = vec![Integer::new(); m + 1];
            row[i] = Integer::from(1);
            let scaled = Float::with_val(prec, &values[i] * &scale);
            row[m] = scaled.to_integer().expect("finite value");
            row
        })
        .collect();
    lll_reduce(&mut rows);
    let row = rows.into_iter().find(|r| r[0] != 0)?;
    let mut rel: Vec<Integer> = row[..m].to_vec();
    if rel[0] < 0 {
        rel.iter_mut().for_each(|c| *c = Integer::from(-&*c));
    }
    let g = rel.iter().fold(Integer::new(), |g, c| g.gcd(c));
    rel.iter_mut().for_each(|c| *c /= &g);
    Some(rel)
}

/// Searches for an integer relation between `x` and the basis values.
///
/// The search runs at 80% of the available digits and is repeated at the
/// full count; `Found` needs both runs to give the same relation, entries
/// at most `max_height`, and `|value - x| ≤ 100 · x.abs_error`. Refuses with
/// [`Error::InsufficientPrecision`] when `x` has fewer digits than
/// [`required_digits`] asks for.
pub fn recognize_value(x: &PrecisionValue, basis: &MonomialBasis, max_height: &Integer) -> Result<RecognitionResult> {
    if basis.is_empty() {
        return Err(Error::InvalidArgument("empty basis".into()));
    }
    let have = available_digits(x);
    let need = required_digits(basis.len() + 1, max_height);
    if have.is_nan() || have < need {
        return Err(Error::InsufficientPrecision { have: have.max(0.0).floor() as u32, need: need.ceil() as u32 });
    }
    let digits = have.floor() as u32;
    let prec = ((digits as f64 + 20.0) * std::f64::consts::LOG2_10) as u32 + 64;
    let mut values = vec![Float::with_val(prec, x.value())];
    for m in &basis.monomials {
        values.push(SymbolicValue::term(m.clone(), Rational::one()).eval_const(prec)?.value().clone());
    }
    let coarse_digits = ((digits as f64) * 0.8).floor() as u32;
    let (Some(coarse), Some(fine)) = (find_relation(&values, coarse_digits), find_relation(&values, digits)) else {
        return Ok(RecognitionResult::not_found(digits));
    };
    if coarse != fine {
        return Ok(RecognitionResult::not_found(digits));
    }
    let relation_height = fine.iter().map(|c| c.clone().abs()).max().unwrap_or_default();
    if relation_height > *max_height {
        return Ok(RecognitionResult::not_found(digits));
    }
    let c0 = fine[0].clone();
    let value = SymbolicValue::from_terms(basis.monomials.iter().zip(&fine[1..]).filter(|(_, c)| **c != 0).map(
        |(m, c)| {
            let q = Rational::checked_new(Integer::from(-c), c0.clone()).expect("nonzero leading coefficient");
            (m.clone(), q)
        },
    ));
    let eval = value.eval_const(prec)?;
    let residual = eval.sub(&x.with_prec(prec));
    let allowed = Float::with_val(64, x.abs_error() * 100u32)
        + up(Float::with_val(64, x.value().abs_ref()) >> (x.prec().saturating_sub(4)));
    let status = if Float::with_val(64, residual.value().abs_ref()) <= allowed {
        RecognitionStatus::Found
    } else {
        RecognitionStatus::NotFound
    };
    if status == RecognitionStatus::NotFound {
        return Ok(RecognitionResult::not_found(digits));
    }
    let coefficient_height = value
        .terms()
        .map(|(_, c)| c.height())
        .max()
        .unwrap_or_default();
    Ok(RecognitionResult {
        status,
        value,
        residual: Some(residual),
        coefficient_height,
        relation_height,
        digits_used: digits,
    })
}
