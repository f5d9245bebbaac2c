//! Scalar traits for the generic algebraic layers.

use std::fmt::{Debug, Display};
use std::hash::Hash;

use num_traits::{Num, Signed, ToPrimitive};

/// Integer-like coefficient ring for Laurent polynomials and Hecke algebra
/// elements. Implemented for every signed primitive integer and for
/// [`num_bigint::BigInt`].
pub trait Coefficient:
    Clone + Debug + Display + Eq + Ord + Hash + Num + Signed + ToPrimitive + Send + Sync + 'static
{
    fn from_i64(value: i64) -> Self;
}

macro_rules! impl_coefficient {
    ($($t:ty),*) => {
        $(
            impl Coefficient for $t {
                fn from_i64(value: i64) -> Self {
                    <$t as num_traits::NumCast>::from(value).expect("coefficient out of range")
                }
            }
        )*
    };
}

impl_coefficient!(i32, i64, i128);

impl Coefficient for num_bigint::BigInt {
    fn from_i64(value: i64) -> Self {
        num_bigint::BigInt::from(value)
    }
}

/// Field of scalars for the polynomial ring of a realisation. Needs exact
/// division by small integers.
pub trait Field: Clone + Debug + Display + PartialEq + Num + Signed + Send + Sync + 'static {
    fn from_i64(value: i64) -> Self;
}

impl<T> Field for num_rational::Ratio<T>
where
    T: Coefficient + num_integer::Integer,
{
    fn from_i64(value: i64) -> Self {
        num_rational::Ratio::from_integer(T::from_i64(value))
    }
}

impl Field for f64 {
    fn from_i64(value: i64) -> Self {
        value as f64
    }
}
