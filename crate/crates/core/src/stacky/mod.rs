//! Stacky fans and their combinatorics.

mod boxes;
mod polytope;
mod sequence;
mod walls;

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::lattice::{self, cone_contains_int, IntMatrix, LatticeError, RatVector};

pub use boxes::{parallelepiped_points, BoxElement, GorensteinWitness};
pub use polytope::{Face, Facet};
pub use sequence::{DualClass, FanSequenceData};
pub use walls::{DiskClassKind, DiskClassSymbol, SemiFanoReport, WallClass};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum StackyError {
    #[error("malformed fan: {0}")]
    Malformed(String),
    #[error("fan is not complete")]
    NotComplete,
    #[error("no valid basis of the dual kernel lattice found: {0}")]
    NoValidBasisFound(String),
    #[error("vector {0} is not an extra vector")]
    NotAnExtraVector(usize),
    #[error("point {0:?} is not on the boundary of the fan polytope")]
    PointNotOnBoundary(Vec<i64>),
    #[error("point {0:?} is not in the support of the fan")]
    NotInSupport(Vec<i64>),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

/// A simplicial stacky fan with optional extra vectors.
///
/// Indices `0..m` address the stacky vectors (rays) and `m..m'` the extra
/// vectors. Maximal cones are sorted index lists into the rays.
#[derive(Clone, PartialEq, Eq)]
pub struct StackyFan {
    dim: usize,
    rays: Vec<Vec<i64>>,
    extras: Vec<Vec<i64>>,
    max_cones: Vec<Vec<usize>>,
}

/// One failed fan invariant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ValidationFailure {
    NotSimplicial { cone: Vec<usize> },
    RedundantCone { cone: Vec<usize>, inside: Vec<usize> },
    FanCondition { first: Vec<usize>, second: Vec<usize> },
    ExtraOutsideSupport { index: usize },
    NotSurjective { index: BigInt },
}

impl fmt::Display for ValidationFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::NotSimplicial { cone } => write!(f, "cone {cone:?} is not simplicial"),
            Self::RedundantCone { cone, inside } => write!(f, "cone {cone:?} is a face of {inside:?}"),
            Self::FanCondition { first, second } => {
                write!(f, "cones {first:?} and {second:?} do not meet in a common face")
            }
            Self::ExtraOutsideSupport { index } => write!(f, "extra vector {index} is outside the support"),
            Self::NotSurjective { index } => {
                write!(f, "vectors generate a sublattice of index {index}")
            }
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub failures: Vec<ValidationFailure>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.failures.is_empty()
    }
}

impl StackyFan {
    /// Checks shapes and indices only; geometric checks live in [`StackyFan::validate`].
    pub fn new(
        dim: usize,
        rays: Vec<Vec<i64>>,
        max_cones: Vec<Vec<usize>>,
        extras: Vec<Vec<i64>>,
    ) -> Result<Self, StackyError> {
        if dim == 0 {
            return Err(StackyError::Malformed("dimension must be positive".into()));
        }
        if rays.is_empty() {
            return Err(StackyError::Malformed("no rays".into()));
        }
        for (i, v) in rays.iter().chain(&extras).enumerate() {
            if v.len() != dim {
                return Err(StackyError::Malformed(format!("vector {i} has length {} instead of {dim}", v.len())));
            }
        }
        for (i, v) in rays.iter().enumerate() {
            if v.iter().all(|&x| x == 0) {
                return Err(StackyError::Malformed(format!("ray {i} is zero")));
            }
        }
        if max_cones.is_empty() {
            return Err(StackyError::Malformed("no maximal cones".into()));
        }
        let mut cones = Vec::with_capacity(max_cones.len());
        for c in max_cones {
            let mut c = c;
            c.sort_unstable();
            if c.is_empty() {
                return Err(StackyError::Malformed("empty maximal cone".into()));
            }
            if c.windows(2).any(|w| w[0] == w[1]) {
                return Err(StackyError::Malformed(format!("cone {c:?} repeats a ray")));
            }
            if let Some(&bad) = c.iter().find(|&&i| i >= rays.len()) {
                return Err(StackyError::Malformed(format!("cone index {bad} out of range")));
            }
            cones.push(c);
        }
        cones.sort();
        cones.dedup();
        Ok(Self {
            dim,
            rays,
            extras,
            max_cones: cones,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of stacky vectors `m`.
    pub fn m(&self) -> usize {
        self.rays.len()
    }

    /// Number of all vectors `m'`.
    pub fn m_prime(&self) -> usize {
        self.rays.len() + self.extras.len()
    }

    pub fn rays(&self) -> &[Vec<i64>] {
        &self.rays
    }

    pub fn extras(&self) -> &[Vec<i64>] {
        &self.extras
    }

    pub fn max_cones(&self) -> &[Vec<usize>] {
        &self.max_cones
    }

    /// `b_i` for `i < m'`.
    pub fn vector(&self, i: usize) -> &[i64] {
        if i < self.m() {
            &self.rays[i]
        } else {
            &self.extras[i - self.m()]
        }
    }

    pub fn all_vectors(&self) -> Vec<Vec<i64>> {
        self.rays.iter().chain(&self.extras).cloned().collect()
    }

    pub fn with_extras(&self, extras: Vec<Vec<i64>>) -> Result<Self, StackyError> {
        Self::new(self.dim, self.rays.clone(), self.max_cones.clone(), extras)
    }

    pub(crate) fn cone_vectors(&self, cone: &[usize]) -> Vec<Vec<i64>> {
        cone.iter().map(|&i| self.vector(i).to_vec()).collect()
    }

    /// Every cone of the fan (all faces of maximal cones, the zero cone included).
    pub fn cones(&self) -> BTreeSet<Vec<usize>> {
        let mut out = BTreeSet::new();
        for c in &self.max_cones {
            let k = c.len();
            for mask in 0u64..(1 << k) {
                let face: Vec<usize> = (0..k).filter(|b| mask >> b & 1 == 1).map(|b| c[b]).collect();
                out.insert(face);
            }
        }
        out
    }

    pub fn is_cone(&self, indices: &[usize]) -> bool {
        let mut s = indices.to_vec();
        s.sort_unstable();
        self.max_cones.iter().any(|c| s.iter().all(|i| c.binary_search(i).is_ok()))
    }

    /// Minimal cone containing `point`, with the coefficients of `point` on its rays.
    pub fn minimal_cone(&self, point: &[BigRational]) -> Option<(Vec<usize>, Vec<BigRational>)> {
        for c in &self.max_cones {
            let gens: Vec<RatVector> = self.cone_vectors(c).iter().map(|v| lattice::int_vec_to_rat(v)).collect();
            if let Some(l) = lattice::cone_contains(&gens, point) {
                let (idx, coef): (Vec<usize>, Vec<BigRational>) =
                    c.iter().zip(l).filter(|(_, x)| !x.is_zero()).map(|(i, x)| (*i, x)).unzip();
                return Some((idx, coef));
            }
        }
        None
    }

    pub fn minimal_cone_int(&self, point: &[i64]) -> Option<(Vec<usize>, Vec<BigRational>)> {
        self.minimal_cone(&lattice::int_vec_to_rat(point))
    }

    pub fn in_support(&self, point: &[i64]) -> bool {
        self.max_cones
            .iter()
            .any(|c| cone_contains_int(&self.cone_vectors(c), point).is_some())
    }

    pub fn validate(&self) -> ValidationReport {
        let mut failures = Vec::new();
        for c in &self.max_cones {
            let m = IntMatrix::from_columns(self.dim, &self.cone_vectors(c));
            if m.rank() != c.len() {
                failures.push(ValidationFailure::NotSimplicial { cone: c.clone() });
            }
        }
        for a in &self.max_cones {
            if let Some(b) = self
                .max_cones
                .iter()
                .find(|b| *b != a && a.iter().all(|i| b.binary_search(i).is_ok()))
            {
                failures.push(ValidationFailure::RedundantCone {
                    cone: a.clone(),
                    inside: b.clone(),
                });
            }
        }
        if failures.is_empty() {
            for (x, a) in self.max_cones.iter().enumerate() {
                for b in &self.max_cones[x + 1..] {
                    if !self.meet_in_common_face(a, b) {
                        failures.push(ValidationFailure::FanCondition {
                            first: a.clone(),
                            second: b.clone(),
                        });
                    }
                }
            }
        }
        for (k, e) in self.extras.iter().enumerate() {
            if !self.in_support(e) {
                failures.push(ValidationFailure::ExtraOutsideSupport { index: self.m() + k });
            }
        }
        let all = IntMatrix::from_columns(self.dim, &self.all_vectors());
        let sf = lattice::smith_normal_form(&all);
        let index: BigInt = if sf.rank() < self.dim {
            BigInt::zero()
        } else {
            sf.invariant_factors.iter().product()
        };
        if !index.is_one() {
            failures.push(ValidationFailure::NotSurjective { index });
        }
        ValidationReport { failures }
    }

    /// Simplicial cones `a`, `b` meet in the cone over their common rays iff no
    /// ray `b_i` of `a` outside `b` lies in `cone(b ∪ {−b_k : k ∈ a, k ≠ i})`.
    fn meet_in_common_face(&self, a: &[usize], b: &[usize]) -> bool {
        for &i in a.iter().filter(|i| b.binary_search(i).is_err()) {
            let mut gens = self.cone_vectors(b);
            for &k in a.iter().filter(|&&k| k != i) {
                gens.push(self.rays[k].iter().map(|x| -x).collect());
            }
            if cone_contains_int(&gens, &self.rays[i]).is_some() {
                return false;
            }
        }
        true
    }

    /// Codimension-one faces of full-dimensional maximal cones, with the
    /// maximal cones containing each.
    pub(crate) fn walls(&self) -> Vec<(Vec<usize>, Vec<usize>)> {
        let mut out: Vec<(Vec<usize>, Vec<usize>)> = Vec::new();
        for (ci, c) in self.max_cones.iter().enumerate() {
            if c.len() != self.dim {
                continue;
            }
            for drop in 0..c.len() {
                let wall: Vec<usize> = c.iter().enumerate().filter(|(k, _)| *k != drop).map(|(_, &i)| i).collect();
                match out.iter_mut().find(|(w, _)| *w == wall) {
                    Some((_, owners)) => owners.push(ci),
                    None => out.push((wall, vec![ci])),
                }
            }
        }
        out
    }

    /// Complete iff all maximal cones are full-dimensional and every wall is
    /// shared by exactly two of them.
    pub fn is_complete(&self) -> bool {
        self.max_cones.iter().all(|c| c.len() == self.dim) && self.walls().iter().all(|(_, o)| o.len() == 2)
    }

    /// `|det|` of a full-dimensional cone; the lattice index of its rays in general.
    pub fn multiplicity(&self, cone: &[usize]) -> BigInt {
        let m = IntMatrix::from_columns(self.dim, &self.cone_vectors(cone));
        let sf = lattice::smith_normal_form(&m);
        sf.invariant_factors.iter().product::<BigInt>().abs()
    }
}

/// All `k`-subsets of `0..n` in lexicographic order.
pub(crate) fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut c: Vec<usize> = (0..k).collect();
    loop {
        out.push(c.clone());
        let mut i = k;
        while i > 0 && c[i - 1] == n - k + i - 1 {
            i -= 1;
        }
        if i == 0 {
            return out;
        }
        c[i - 1] += 1;
        for j in i..k {
            c[j] = c[j - 1] + 1;
        }
    }
}

impl fmt::Debug for StackyFan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("StackyFan")
            .field("dim", &self.dim)
            .field("rays", &self.rays)
            .field("extras", &self.extras)
            .field("max_cones", &self.max_cones)
            .finish()
    }
}

/// Small library of fans used across tests and the CLI examples.
pub mod examples {
    use super::StackyFan;

    pub fn p1() -> StackyFan {
        StackyFan::new(1, vec![vec![1], vec![-1]], vec![vec![0], vec![1]], vec![]).unwrap()
    }

    pub fn p2() -> StackyFan {
        StackyFan::new(
            2,
            vec![vec![1, 0], vec![0, 1], vec![-1, -1]],
            vec![vec![0, 1], vec![1, 2], vec![0, 2]],
            vec![],
        )
        .unwrap()
    }

    pub fn p1xp1() -> StackyFan {
        StackyFan::new(
            2,
            vec![vec![1, 0], vec![0, 1], vec![-1, 0], vec![0, -1]],
            vec![vec![0, 1], vec![1, 2], vec![2, 3], vec![0, 3]],
            vec![],
        )
        .unwrap()
    }

    pub fn hirzebruch(k: i64) -> StackyFan {
        StackyFan::new(
            2,
            vec![vec![1, 0], vec![0, 1], vec![-1, k], vec![0, -1]],
            vec![vec![0, 1], vec![1, 2], vec![2, 3], vec![0, 3]],
            vec![],
        )
        .unwrap()
    }

    /// `P²/Z₃` without extra vectors.
    pub fn p2z3_bare() -> StackyFan {
        StackyFan::new(
            2,
            vec![vec![-1, -1], vec![2, -1], vec![-1, 2]],
            vec![vec![0, 1], vec![1, 2], vec![0, 2]],
            vec![],
        )
        .unwrap()
    }

    /// `P²/Z₃` extended by its six age-one box elements.
    pub fn p2z3() -> StackyFan {
        p2z3_bare().with_age_one_extras()
    }

    /// The affine chart `C²/Z₃` with both age-one box elements as extras.
    pub fn c2z3() -> StackyFan {
        StackyFan::new(
            2,
            vec![vec![2, -1], vec![-1, 2]],
            vec![vec![0, 1]],
            vec![vec![1, 0], vec![0, 1]],
        )
        .unwrap()
    }

    /// Total space of `O(−2) → P¹`.
    pub fn local_p1_minus2() -> StackyFan {
        StackyFan::new(2, vec![vec![1, 0], vec![0, 1], vec![-1, 2]], vec![vec![0, 1], vec![1, 2]], vec![]).unwrap()
    }

    /// `C³/Z₃` with the age-one interior point as extra vector.
    pub fn c3z3() -> StackyFan {
        StackyFan::new(
            3,
            vec![vec![1, 0, 1], vec![0, 1, 1], vec![-1, -1, 1]],
            vec![vec![0, 1, 2]],
            vec![vec![0, 0, 1]],
        )
        .unwrap()
    }

    /// Weighted projective plane `P(1,1,3)`, which is not Gorenstein.
    pub fn p113() -> StackyFan {
        StackyFan::new(
            2,
            vec![vec![1, 0], vec![0, 1], vec![-1, -3]],
            vec![vec![0, 1], vec![1, 2], vec![0, 2]],
            vec![],
        )
        .unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::examples::*;
    use super::*;

    #[test]
    fn standard_fans_validate() {
        for f in [p1(), p2(), p1xp1(), hirzebruch(2), p2z3(), c2z3(), local_p1_minus2(), c3z3()] {
            assert!(f.validate().is_valid(), "{f:?}: {:?}", f.validate());
        }
        assert_eq!(
            p2z3_bare().validate().failures,
            vec![ValidationFailure::NotSurjective { index: BigInt::from(3) }]
        );
    }

    #[test]
    fn overlapping_cones_rejected() {
        let f = StackyFan::new(
            2,
            vec![vec![1, 0], vec![0, 1], vec![1, 1]],
            vec![vec![0, 1], vec![1, 2]],
            vec![],
        )
        .unwrap();
        let rep = f.validate();
        assert!(rep.failures.iter().any(|x| matches!(x, ValidationFailure::FanCondition { .. })));
    }

    #[test]
    fn non_surjective_rejected() {
        let f = StackyFan::new(2, vec![vec![2, 0], vec![0, 2]], vec![vec![0, 1]], vec![]).unwrap();
        let rep = f.validate();
        assert_eq!(rep.failures, vec![ValidationFailure::NotSurjective { index: BigInt::from(4) }]);
    }

    #[test]
    fn extra_outside_support_rejected() {
        let f = StackyFan::new(2, vec![vec![1, 0], vec![0, 1]], vec![vec![0, 1]], vec![vec![-1, 0]]).unwrap();
        assert!(f.validate().failures.contains(&ValidationFailure::ExtraOutsideSupport { index: 2 }));
    }

    #[test]
    fn malformed_input() {
        assert!(StackyFan::new(2, vec![vec![1, 0]], vec![vec![3]], vec![]).is_err());
        assert!(StackyFan::new(2, vec![vec![1, 0, 0]], vec![vec![0]], vec![]).is_err());
    }

    #[test]
    fn completeness() {
        assert!(p1().is_complete());
        assert!(p2z3().is_complete());
        assert!(!c2z3().is_complete());
        assert!(!local_p1_minus2().is_complete());
    }

    #[test]
    fn minimal_cone_of_box_point() {
        let (c, t) = c2z3().minimal_cone_int(&[1, 0]).unwrap();
        assert_eq!(c, vec![0, 1]);
        assert_eq!(t, vec![BigRational::new(2.into(), 3.into()), BigRational::new(1.into(), 3.into())]);
        assert_eq!(p2().minimal_cone_int(&[0, 0]).unwrap().0, Vec::<usize>::new());
    }
}
