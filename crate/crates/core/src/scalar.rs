//! Scalar traits the generic arithmetic is written against.

use std::fmt::Debug;
use std::ops::Neg;

use num_bigint::BigInt;

use num_rational::BigRational;
use num_traits::{FromPrimitive, Num, Signed, Zero};

/// Commutative ring elements: enough for polynomial evaluation,
/// multiplication and derivatives.
pub trait Ring: Clone + PartialEq + Debug + Num + Neg<Output = Self> + FromPrimitive {}

impl<T> Ring for T where T: Clone + PartialEq + Debug + Num + Neg<Output = T> + FromPrimitive {}

/// Marker for rings in which every nonzero element is invertible. Division
/// in `Num` is assumed exact for implementors.
pub trait Field: Ring {}

impl Field for f32 {}
impl Field for f64 {}
impl Field for BigRational {}
impl Field for num_rational::Rational64 {}

/// Exact `k`-th root of a rational, if it exists.
pub fn rational_root(q: &BigRational, k: u32) -> Option<BigRational> {
    if q.is_zero() {
        return Some(BigRational::zero());
    }
    let negative = q.is_negative();
    if negative && k.is_multiple_of(2) {
        return None;
    }
    let root = |n: &BigInt| -> Option<BigInt> {
        let r = n.abs().nth_root(k);
        (num_traits::pow(r.clone(), k as usize) == n.abs()).then_some(r)
    };
    let num = root(q.numer())?;
    let den = root(q.denom())?;
    let r = BigRational::new(num, den);
    Some(if negative { -r } else { r })
}
