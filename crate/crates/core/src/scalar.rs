//! Integer scalar used for gas arithmetic.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{FromPrimitive, PrimInt, ToPrimitive, Unsigned};

/// Unsigned integer type gas values are computed in.
pub trait GasScalar:
    PrimInt + Unsigned + FromPrimitive + ToPrimitive + Sum + Debug + Display + Send + Sync + 'static
{
    /// Lifts a constant; every constant in the model fits in 32 bits.
    fn lit(v: u64) -> Self {
        Self::from_u64(v).expect("gas constant exceeds scalar range")
    }
}

impl<T> GasScalar for T where
    T: PrimInt + Unsigned + FromPrimitive + ToPrimitive + Sum + Debug + Display + Send + Sync + 'static
{
}
