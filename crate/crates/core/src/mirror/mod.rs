//! Hypergeometric A-series, the toric mirror map and disk generating functions.

mod chart;
mod disk;
mod map;

use thiserror::Error;

use crate::lattice::LatticeError;
use crate::series::SeriesError;
use crate::stacky::StackyError;
use crate::suborb::SuborbError;

pub use chart::{Chart, OmegaSet};
pub use disk::{
    assemble_potential, disk_generating_function, DiskGeneratingFunction, InvariantEntry, ParentData, PotentialData,
};
pub use map::{invert_mirror_map, mirror_map_forward, round_trip, ForwardMap, InverseMap};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MirrorError {
    #[error("weight of the extra divisor {0} is not positive")]
    NonPositiveWeight(usize),
    #[error("exponent {0} does not correspond to a chart monomial")]
    OffGrid(String),
    #[error("the matrix ⟨p_a, D_j^∨⟩ over the extra vectors is singular")]
    DegenerateExponentMatrix,
    #[error("insertion {0:?} is not a twisted sector of the chosen chart")]
    UnsupportedInsertions(Vec<i64>),
    #[error("{0:?} is not an age-one sector with a parameter")]
    UnknownSector(Vec<i64>),
    #[error("requested degree {requested} exceeds truncation order {available}")]
    OrderTooLow { requested: String, available: String },
    #[error("normalization cone invalid: {0}")]
    NormalizationConeInvalid(String),
    #[error("class {0:?} does not lie in H2 of the ambient orbifold")]
    NotACurveClass(Vec<String>),
    #[error("the fan is not Gorenstein")]
    NotGorenstein,
    #[error("the fan is not semi-Fano")]
    NotSemiFano,
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Stacky(#[from] StackyError),
    #[error(transparent)]
    Suborb(#[from] SuborbError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}
