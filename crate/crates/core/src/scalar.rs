//! Integer scalars for the exact lattice computations.
//!
//! Everything in [`crate::lattice`] and [`crate::counts`] is generic over
//! [`Scalar`]. Fixed-width types (`i64`, `i128`) run fast and report
//! [`Error::Overflow`] instead of wrapping; `BigInt` never overflows.

use std::fmt::{Debug, Display};
use std::hash::Hash;

use num_integer::Integer;
use num_traits::{CheckedAdd, CheckedMul, CheckedSub, FromPrimitive, Signed, ToPrimitive};

use crate::error::{Error, Result};

pub trait Scalar:
    Integer
    + Signed
    + CheckedAdd
    + CheckedSub
    + CheckedMul
    + FromPrimitive
    + ToPrimitive
    + Clone
    + Debug
    + Display
    + Hash
    + Send
    + Sync
    + 'static
{
    fn lit(v: i64) -> Self {
        <Self as FromPrimitive>::from_i64(v).expect("every scalar holds an i64")
    }

    fn is_unit(&self) -> bool {
        self.abs().is_one()
    }
}

impl<T> Scalar for T where
    T: Integer
        + Signed
        + CheckedAdd
        + CheckedSub
        + CheckedMul
        + FromPrimitive
        + ToPrimitive
        + Clone
        + Debug
        + Display
        + Hash
        + Send
        + Sync
        + 'static
{
}

#[inline]
pub(crate) fn add<T: Scalar>(a: &T, b: &T, ctx: &'static str) -> Result<T> {
    a.checked_add(b).ok_or(Error::Overflow(ctx))
}

#[inline]
pub(crate) fn sub<T: Scalar>(a: &T, b: &T, ctx: &'static str) -> Result<T> {
    a.checked_sub(b).ok_or(Error::Overflow(ctx))
}

#[inline]
pub(crate) fn mul<T: Scalar>(a: &T, b: &T, ctx: &'static str) -> Result<T> {
    a.checked_mul(b).ok_or(Error::Overflow(ctx))
}

/// `a - f * b`, checked.
#[inline]
pub(crate) fn sub_mul<T: Scalar>(a: &T, f: &T, b: &T, ctx: &'static str) -> Result<T> {
    sub(a, &mul(f, b, ctx)?, ctx)
}

/// Negation that fails on `T::MIN` for fixed-width types.
#[inline]
pub(crate) fn neg<T: Scalar>(a: &T, ctx: &'static str) -> Result<T> {
    T::zero().checked_sub(a).ok_or(Error::Overflow(ctx))
}
