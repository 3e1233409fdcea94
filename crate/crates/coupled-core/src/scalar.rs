use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FromPrimitive};

/// Scalar type for objective values and matrix entries.
///
/// Everything in this crate is generic over the floating-point width;
/// the experiment harness pins `f64`, but the solvers and the information
/// recursion work equally at `f32`.
pub trait Scalar: Float + FromPrimitive + Sum + Debug + Display + 'static {}

impl<T> Scalar for T where T: Float + FromPrimitive + Sum + Debug + Display + 'static {}

/// Converts an `f64` constant (tolerances, ridge terms, ...) into `T`.
pub fn scalar<T: Scalar>(v: f64) -> T {
    T::from_f64(v).expect("constant not representable in scalar type")
}
