//! Scalar types the linear algebra is generic over.
//!
//! Certification only ever runs on [`ExactScalar`] types, where a zero test
//! is a genuine equality. Floating point types implement [`Scalar`] with a
//! tolerance so representations can be inspected numerically.

use std::fmt::Debug;
use std::ops::Neg;

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{FromPrimitive, Num, Signed, Zero};

use crate::linalg::{nullspace, Vector};

pub trait Scalar:
    Clone + Debug + PartialEq + Num + Neg<Output = Self> + FromPrimitive + Send + Sync
{
    /// Zero test used by elimination and pattern checks.
    fn is_negligible(&self) -> bool;

    fn from_int(v: i64) -> Self {
        Self::from_i64(v).expect("every scalar type represents small integers")
    }

    fn to_f64_lossy(&self) -> f64;
}

pub const REDUCE_ABOVE_BITS: u64 = 48;

/// Fields with exact arithmetic.
pub trait ExactScalar: Scalar {
    /// Rescales a vector without changing which inner products vanish.
    fn normalize(v: Vector<Self>) -> Vector<Self> {
        v
    }

    /// Basis of the common orthogonal complement of `constraints`.
    fn kernel_basis(constraints: &[Vector<Self>], dim: usize) -> Vec<Vector<Self>> {
        nullspace(constraints, dim).into_iter().map(Self::normalize).collect()
    }
}

impl Scalar for BigRational {
    fn is_negligible(&self) -> bool {
        self.is_zero()
    }

    fn to_f64_lossy(&self) -> f64 {
        use num_traits::ToPrimitive;
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl ExactScalar for BigRational {
    fn normalize(v: Vector<Self>) -> Vector<Self> {
        v.to_primitive_integer()
    }

    /// Switches to an LLL-reduced integer kernel basis once constraint
    /// entries exceed [`REDUCE_ABOVE_BITS`].
    fn kernel_basis(constraints: &[Vector<Self>], dim: usize) -> Vec<Vector<Self>> {
        let bits = constraints.iter().map(Vector::max_bits).max().unwrap_or(0);
        if bits <= REDUCE_ABOVE_BITS {
            return nullspace(constraints, dim).into_iter().map(Self::normalize).collect();
        }
        let rows: Vec<Vec<BigRational>> = constraints.iter().map(|c| c.0.clone()).collect();
        match crate::lattice::reduced_integer_kernel(&rows, dim) {
            Some(k) => k
                .into_iter()
                .map(|r| Vector(r.into_iter().map(BigRational::from_integer).collect()))
                .collect(),
            None => nullspace(constraints, dim).into_iter().map(Self::normalize).collect(),
        }
    }
}

impl Scalar for Ratio<i128> {
    fn is_negligible(&self) -> bool {
        self.is_zero()
    }

    fn to_f64_lossy(&self) -> f64 {
        *self.numer() as f64 / *self.denom() as f64
    }
}

impl ExactScalar for Ratio<i128> {}

macro_rules! impl_float_scalar {
    ($t:ty, $eps:expr) => {
        impl Scalar for $t {
            fn is_negligible(&self) -> bool {
                self.abs() <= $eps
            }

            fn to_f64_lossy(&self) -> f64 {
                *self as f64
            }
        }
    };
}

impl_float_scalar!(f64, 1e-9);
impl_float_scalar!(f32, 1e-4);

/// Formats an exact rational as `p/q`, always with an explicit denominator.
pub fn rational_to_string(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Parses `p/q` or a bare integer `p`.
pub fn rational_from_str(s: &str) -> Option<BigRational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().ok()?;
            let q: BigInt = q.trim().parse().ok()?;
            if q.is_zero() {
                return None;
            }
            Some(BigRational::new(p, q))
        }
        None => Some(BigRational::from_integer(s.parse().ok()?)),
    }
}

pub(crate) fn abs_bits(r: &BigRational) -> u64 {
    r.numer().abs().bits() + r.denom().bits()
}
