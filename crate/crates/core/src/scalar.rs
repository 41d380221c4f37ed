//! Floating point scalars the toolkit is generic over.

use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive};

/// Real scalar type usable by every numerical routine in the crate: `f32` or `f64`.
pub trait Scalar:
    Float + FloatConst + FromPrimitive + Debug + Display + Default + Send + Sync + 'static
{
    /// Base step of central finite differences; scaled up with the magnitude of the point.
    const FD_STEP: f64;
    /// Threshold on `|r_u x r_v|` below which a surface normal is considered degenerate.
    const DEGENERACY_EPS: f64;

    /// Converts an `f64` literal into the scalar type.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal representable in scalar type")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    /// Central-difference step for a point whose coordinates have magnitude `scale`.
    #[inline]
    fn fd_step(scale: Self) -> Self {
        let base = Self::lit(Self::FD_STEP);
        base.max(base * scale.abs())
    }
}

impl Scalar for f64 {
    const FD_STEP: f64 = 1e-6;
    const DEGENERACY_EPS: f64 = 1e-9;
}

impl Scalar for f32 {
    // cube root of f32 epsilon
    const FD_STEP: f64 = 4.9e-3;
    const DEGENERACY_EPS: f64 = 1e-5;
}
