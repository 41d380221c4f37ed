//! Numerical verification of Green's and Stokes' theorems on parametric surfaces.
//!
//! The left side of every identity is a line integral of a pulled-back one-form around
//! the boundary of the parameter region; the right side is a double integral over the
//! region. Surfaces need not be embedded or orientable: the Möbius band and a
//! self-intersecting spanning surface are part of the scenario catalog.
//!
//! Everything is generic over [`Scalar`] (`f32` or `f64`); the aliases below fix `f64`.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod analysis;
pub mod catalog;
pub mod cli;
pub mod error;
pub mod geometry;
pub mod quadrature;
pub mod scalar;
pub mod stokes;

pub use error::{Error, Result};
pub use geometry::{
    BoundaryPath, Normal, ParamBox, ParamSurface, PlanarRegion, Profile, Segment, Vec2, Vec3,
};
pub use quadrature::{IntegralResult, QuadratureSpec};
pub use scalar::Scalar;
pub use stokes::{Mat3, PullbackOneForm, VectorField2to3, VectorField3, VerificationReport};

pub type Vec2d = Vec2<f64>;
pub type Vec3d = Vec3<f64>;
pub type Region = PlanarRegion<f64>;
pub type Surface = ParamSurface<f64>;
pub type Field3 = VectorField3<f64>;
pub type Field2to3 = VectorField2to3<f64>;
pub type OneForm = PullbackOneForm<f64>;
pub type Report = VerificationReport<f64>;
pub type Integral = IntegralResult<f64>;
