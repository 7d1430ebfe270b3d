use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Zero};

/// Coefficient field of a series: `Q` or a finite extension of it.
pub trait Coefficient:
    Clone + PartialEq + fmt::Debug + fmt::Display + Send + Sync + Zero + One + 'static
{
    fn from_rational(r: &BigRational) -> Self;
    fn add_assign_ref(&mut self, other: &Self);
    fn mul_ref(&self, other: &Self) -> Self;
    fn neg_ref(&self) -> Self;
    fn scale(&self, r: &BigRational) -> Self;
}

impl Coefficient for BigRational {
    fn from_rational(r: &BigRational) -> Self {
        r.clone()
    }

    fn add_assign_ref(&mut self, other: &Self) {
        *self += other;
    }

    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }

    fn neg_ref(&self) -> Self {
        -self
    }

    fn scale(&self, r: &BigRational) -> Self {
        self * r
    }
}
