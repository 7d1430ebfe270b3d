//! Exact integer and rational linear algebra.

mod cone;
mod matrix;
mod normal_form;
mod solve;

use num_rational::BigRational;
use thiserror::Error;

pub use cone::{cone_contains, cone_contains_int};
pub use matrix::IntMatrix;
pub use normal_form::{
    hermite_normal_form, integer_kernel, is_saturated, smith_normal_form, solve_integer, SmithForm,
};
pub use solve::{coordinates_in, rational_rank, solve_rat_rows, solve_rational};

pub(crate) use solve::{dot_rat, int_vec_to_rat, rref, to_rat};

/// A vector over `Q`. `BigRational` keeps every entry reduced with a positive denominator.
pub type RatVector = Vec<BigRational>;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("linear system has no solution")]
    NoSolution,
    #[error("linear system is underdetermined: rank {rank} for {unknowns} unknowns")]
    AmbiguousSolution { rank: usize, unknowns: usize },
}
