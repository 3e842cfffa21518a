//! Floating-point scalar abstraction shared by every module.

use nalgebra::RealField;
use num_traits::{FloatConst, FromPrimitive, ToPrimitive};
use serde::de::DeserializeOwned;
use serde::Serialize;
use std::fmt::{Debug, Display};

/// Real scalar type the simulator is generic over (`f32` or `f64`).
///
/// Tolerances scale with the precision of the type, so validation that is
/// tight in `f64` stays usable in `f32`.
pub trait Real:
    RealField
    + Copy
    + FromPrimitive
    + ToPrimitive
    + FloatConst
    + Default
    + Debug
    + Display
    + Serialize
    + DeserializeOwned
    + Send
    + Sync
    + 'static
{
    /// Tolerance for hermiticity and trace checks on density matrices.
    fn state_tol() -> Self;

    /// Slack allowed below zero for density-matrix eigenvalues.
    fn psd_slack() -> Self;

    /// Converts an `f64` literal into this type.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    /// Converts to `f64` for reporting and serialization.
    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().expect("finite scalar")
    }

    /// Converts a count into this type.
    #[inline]
    fn from_count(n: usize) -> Self {
        Self::from_usize(n).expect("count representable")
    }
}

impl Real for f64 {
    fn state_tol() -> Self {
        1e-12
    }
    fn psd_slack() -> Self {
        1e-10
    }
}

impl Real for f32 {
    fn state_tol() -> Self {
        1e-4
    }
    fn psd_slack() -> Self {
        1e-5
    }
}
