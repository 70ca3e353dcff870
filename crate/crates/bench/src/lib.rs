//! Shared fixtures for the criterion benchmarks.

use crownvol::{PrecisionValue, SymbolicValue};

/// `value` evaluated at `digits` decimal digits and carrying that many
/// digits of uncertainty, as a recognition target.
pub fn target(value: &SymbolicValue, digits: u32) -> PrecisionValue {
    let bits = (digits as f64 * std::f64::consts::LOG2_10) as u32 + 64;
    let exact = value.eval_const(bits).expect("constant value");
    let err = rug::Float::with_val(bits, rug::Float::i_pow_u(10, digits)).recip();
    PrecisionValue::new(exact.value().clone(), err)
}
