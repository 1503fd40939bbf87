use std::cmp::Ordering;
use std::fmt::Debug;

use num_traits::{One, Zero};

use crate::exact::Rational;

/// Field operations the simplex needs. `sign` is where a floating-point
/// implementation applies its tolerance.
pub trait Scalar: Clone + Debug + Send + Sync {
    fn nil() -> Self;
    fn unit() -> Self;
    fn from_rational(r: &Rational) -> Self;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn div(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn sign(&self) -> Ordering;
    /// Approximate absolute value, used only to choose pivots.
    fn magnitude(&self) -> f64;

    fn vanishes(&self) -> bool {
        self.sign() == Ordering::Equal
    }

    fn exceeds_zero(&self) -> bool {
        self.sign() == Ordering::Greater
    }

    fn below_zero(&self) -> bool {
        self.sign() == Ordering::Less
    }

    fn compare(&self, o: &Self) -> Ordering {
        self.sub(o).sign()
    }

    /// Feasibility slack for a two-pass ratio test, if the arithmetic is
    /// inexact and needs one.
    fn harris_tolerance() -> Option<Self> {
        None
    }
}

impl Scalar for Rational {
    fn nil() -> Self {
        Zero::zero()
    }
    fn unit() -> Self {
        One::one()
    }
    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn div(&self, o: &Self) -> Self {
        self / o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn sign(&self) -> Ordering {
        self.signum().cmp(&0)
    }
    fn magnitude(&self) -> f64 {
        self.to_f64().abs()
    }
    fn vanishes(&self) -> bool {
        Zero::is_zero(self)
    }
    fn compare(&self, o: &Self) -> Ordering {
        self.cmp(o)
    }
}

/// Values with magnitude below this are treated as zero in float mode.
pub const FLOAT_TOLERANCE: f64 = 1e-9;

impl Scalar for f64 {
    fn nil() -> Self {
        0.0
    }
    fn unit() -> Self {
        1.0
    }
    fn from_rational(r: &Rational) -> Self {
        r.to_f64()
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn div(&self, o: &Self) -> Self {
        self / o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn sign(&self) -> Ordering {
        if *self > FLOAT_TOLERANCE {
            Ordering::Greater
        } else if *self < -FLOAT_TOLERANCE {
            Ordering::Less
        } else {
            Ordering::Equal
        }
    }

    fn magnitude(&self) -> f64 {
        self.abs()
    }

    fn harris_tolerance() -> Option<Self> {
        Some(FLOAT_TOLERANCE)
    }
}
