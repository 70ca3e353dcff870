//! Numerical estimates of polygon volumes and oracles for the crown closed
//! forms.

pub mod mc;
pub mod oracles;
pub mod quadrature;
pub mod series;

pub use mc::{ngon_volume_mc, ngon_volume_u_mc, q_value, shear_weight, McEstimate, McSpec};
pub use oracles::{
    simplex_crown_integral, crown_convolution_check, crown_marginal_integral, q_polynomial,
    q_polynomial_products, two_crown_lambda_integral, QPolynomial, SimplexSpec,
};
pub use quadrature::{ngon_volume_quadrature, QuadratureEstimate, QuadratureSpec};
pub use series::{ngon_volume_series, series_partial_sum, SeriesEstimate};

use crate::error::{Error, Result};
use crate::ring::SymbolicValue;

/// Triangles and squares have volume exactly 1; larger polygons have no
/// exact value here and must be estimated.
pub fn ngon_volume_small(n: u32) -> Result<SymbolicValue> {
    match n {
        3 | 4 => Ok(SymbolicValue::one()),
        _ => Err(Error::InvalidArgument(format!("no exact volume for the {n}-gon; use an estimator"))),
    }
}
