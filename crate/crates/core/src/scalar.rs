use std::fmt::{Debug, Display};

use num_integer::Integer;
use num_traits::{FromPrimitive, Signed, ToPrimitive};

/// Integer scalar usable by the exact linear algebra.
///
/// Every operation is exact; fixed-width types such as `i64` are accepted
/// but can overflow on large inputs, so the crate-level aliases use
/// [`num_bigint::BigInt`].
pub trait Scalar:
    Integer + Signed + Clone + Debug + Display + FromPrimitive + ToPrimitive + Send + Sync + 'static
{
}

impl<T> Scalar for T where
    T: Integer
        + Signed
        + Clone
        + Debug
        + Display
        + FromPrimitive
        + ToPrimitive
        + Send
        + Sync
        + 'static
{
}

/// `value` as a scalar. Panics only if the scalar cannot represent an `i64`.
pub(crate) fn from_i64<T: Scalar>(value: i64) -> T {
    T::from_i64(value).expect("scalar type cannot represent i64 value")
}
