//! Scalar abstraction shared by every numerical routine in the crate.

use std::fmt::{Debug, Display};

use nalgebra::RealField;

/// Floating point type the library is generic over (`f32` or `f64`).
///
/// The tolerance hooks let each precision pick thresholds that sit well
/// above its own rounding noise.
pub trait Scalar: RealField + Copy + Debug + Display + Send + Sync + 'static {
    /// Relative threshold under which an eigenvalue is treated as zero.
    fn zero_tolerance() -> Self;

    /// Relative tolerance for checking closure constants of compositions.
    fn conformance_tolerance() -> Self;

    /// Relative tolerance for structural checks such as symmetry.
    fn structural_tolerance() -> Self;

    fn to_f64(self) -> f64;
}

impl Scalar for f64 {
    fn zero_tolerance() -> Self {
        1e-9
    }

    fn conformance_tolerance() -> Self {
        1e-8
    }

    fn structural_tolerance() -> Self {
        1e-12
    }

    fn to_f64(self) -> f64 {
        self
    }
}

impl Scalar for f32 {
    fn zero_tolerance() -> Self {
        1e-4
    }

    fn conformance_tolerance() -> Self {
        1e-4
    }

    fn structural_tolerance() -> Self {
        1e-6
    }

    fn to_f64(self) -> f64 {
        self as f64
    }
}

/// Converts an `f64` literal into the working scalar type.
#[inline]
pub fn lit<T: Scalar>(v: f64) -> T {
    nalgebra::convert(v)
}
