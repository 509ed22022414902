//! Scalar abstractions.
//!
//! Numerical code is written against [`Real`] (any `nalgebra::RealField`
//! that is `Copy`), exact lattice code against [`Int`] (any primitive signed
//! integer). The crate root re-exports `f64` / `i64` aliases for everyday use.

use std::fmt::{Debug, Display};
use std::hash::Hash;

use nalgebra::{Complex, RealField};
use num_integer::Integer;
use num_traits::{PrimInt, Signed};

/// Real scalar used by the representation-theoretic and conic code.
pub trait Real: RealField + Copy + Send + Sync {
    /// Lossy conversion from an `f64` literal.
    fn lit(x: f64) -> Self {
        nalgebra::convert(x)
    }

    /// Lossy conversion to `f64`, for reporting.
    fn as_f64(self) -> f64 {
        nalgebra::try_convert(self).unwrap_or(f64::NAN)
    }

    fn from_count(n: usize) -> Self {
        Self::lit(n as f64)
    }
}

impl<T: RealField + Copy + Send + Sync> Real for T {}

/// Complex numbers over a [`Real`].
pub type Cx<T> = Complex<T>;

pub fn cx<T: Real>(re: T, im: T) -> Cx<T> {
    Complex::new(re, im)
}

pub fn cre<T: Real>(re: T) -> Cx<T> {
    Complex::new(re, T::zero())
}

/// Modulus of a complex number.
pub fn cabs<T: Real>(z: Cx<T>) -> T {
    z.norm_sqr().sqrt()
}

/// Exact integer scalar used by the lattice code.
pub trait Int:
    PrimInt + Signed + Integer + Hash + Debug + Display + Send + Sync + 'static
{
    fn from_i64(x: i64) -> Self {
        <Self as num_traits::NumCast>::from(x).expect("integer literal out of range")
    }

    fn as_i64(self) -> i64 {
        <i64 as num_traits::NumCast>::from(self).expect("integer out of i64 range")
    }
}

impl<T> Int for T where
    T: PrimInt + Signed + Integer + Hash + Debug + Display + Send + Sync + 'static
{
}
