//! Volumes of moduli spaces of crowned hyperbolic surfaces: exact closed
//! forms in the graded ring `Q[π, log 2, ζ(odd), β(even)]`, high-precision
//! numerical estimators for ideal polygons, and integer-relation recognition
//! of numeric results.

pub mod crown;
pub mod error;
pub mod moments;
pub mod ngon;
pub mod quad;
pub mod recognize;
pub mod ring;
pub mod surface;
pub mod verify;

pub use error::{Error, Result};
pub use moments::{moment, reduce_integral, DenomKind};
pub use ring::{
    eval_constant, Constant, GradedMonomial, Homogeneity, PiPolynomial, PrecisionValue, Rational, SymbolicValue,
};
pub use crown::{crown_total_volume, crown_volume_fixed_neck, ngon_conjecture_volume, ngon_upper_bound, Conjectural, CrownVolume};
pub use recognize::{enumerate_basis, recognize_value, BasisFlags, MonomialBasis, RecognitionResult};
pub use surface::{
    annulus_volume, annulus_volume_fixed_neck, surface_volume_fixed, surface_volume_free, SurfaceSpec, WpPolynomial,
};
