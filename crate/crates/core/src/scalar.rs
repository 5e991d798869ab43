//! Floating point abstraction for the whole crate.
//!
//! Everything numeric is generic over [`Scalar`] so the solver can run in
//! `f32` or `f64`. The crate root exports `f64` aliases for the common case.

use num_traits::{Float, FloatConst, FromPrimitive, NumAssign, ToPrimitive};

/// Real scalar type backing statevectors, costs and problem data.
///
/// This is a trait alias; any type satisfying the bounds (in practice `f32`
/// and `f64`) gets the implementation for free.
pub trait Scalar:
    Float
    + FloatConst
    + NumAssign
    + FromPrimitive
    + ToPrimitive
    + std::iter::Sum
    + std::fmt::Debug
    + std::fmt::Display
    + std::fmt::LowerExp
    + Default
    + Send
    + Sync
    + 'static
{
    /// Lossy conversion from `f64`, for tolerances and literals.
    fn from_f64_lossy(value: f64) -> Self {
        Self::from_f64(value).expect("finite f64 literal converts to any Scalar")
    }
}

impl<T> Scalar for T where
    T: Float
        + FloatConst
        + NumAssign
        + FromPrimitive
        + ToPrimitive
        + std::iter::Sum
        + std::fmt::Debug
        + std::fmt::Display
        + std::fmt::LowerExp
        + Default
        + Send
        + Sync
        + 'static
{
}

/// Complex number over the crate scalar.
pub type Complex<T> = num_complex::Complex<T>;
