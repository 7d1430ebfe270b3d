use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::{StackyError, StackyFan};
use crate::lattice::{integer_kernel, IntMatrix, RatVector};

/// Curve class of a wall `τ = σ ∩ σ'`: the primitive relation among the rays
/// of `σ ∪ σ'`, positive on the two rays opposite the wall.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WallClass {
    pub wall: Vec<usize>,
    pub cones: (Vec<usize>, Vec<usize>),
    /// Relation vector of length `m'`.
    pub class: Vec<BigInt>,
    /// `c₁ · C`, the sum of the relation coefficients.
    pub c1: BigInt,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SemiFanoReport {
    pub semi_fano: bool,
    /// First wall with `c₁ · C < 0`.
    pub violation: Option<WallClass>,
    /// Walls with `c₁ · C = 0`.
    pub zero_walls: Vec<WallClass>,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum DiskClassKind {
    /// `β_i` for a ray index.
    Smooth(usize),
    /// `β_ν` for a box element given by its lattice point.
    Orbi(Vec<i64>),
}

/// A disk class `β + α` with `α ∈ H₂` given as a relation vector (empty for zero).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiskClassSymbol {
    pub kind: DiskClassKind,
    pub alpha: RatVector,
}

impl DiskClassSymbol {
    pub fn basic(kind: DiskClassKind) -> Self {
        DiskClassSymbol { kind, alpha: vec![] }
    }
}

impl StackyFan {
    /// Wall classes for every wall shared by two maximal cones.
    pub fn wall_curve_classes(&self) -> Vec<WallClass> {
        let mut out = Vec::new();
        for (wall, owners) in self.walls() {
            if owners.len() != 2 {
                continue;
            }
            let a = &self.max_cones()[owners[0]];
            let b = &self.max_cones()[owners[1]];
            let mut idx: Vec<usize> = a.iter().chain(b.iter()).copied().collect();
            idx.sort_unstable();
            idx.dedup();
            let ker = integer_kernel(&IntMatrix::from_columns(self.dim(), &self.cone_vectors(&idx)));
            if ker.rows() != 1 {
                continue;
            }
            let mut rel = ker.row_vec(0);
            let opposite = a.iter().find(|i| !wall.contains(i)).expect("wall has codimension one");
            let pos = idx.iter().position(|i| i == opposite).expect("opposite ray is in the union");
            if rel[pos].is_negative() {
                rel.iter_mut().for_each(|x| *x = -x.clone());
            }
            let mut class = vec![BigInt::zero(); self.m_prime()];
            for (i, x) in idx.iter().zip(rel) {
                class[*i] = x;
            }
            let c1 = class.iter().sum();
            out.push(WallClass {
                wall,
                cones: (a.clone(), b.clone()),
                class,
                c1,
            });
        }
        out
    }

    /// Semi-Fano test `c₁ · C ≥ 0` on all wall classes of a complete fan.
    pub fn semifano_check(&self) -> Result<SemiFanoReport, StackyError> {
        if !self.is_complete() {
            return Err(StackyError::NotComplete);
        }
        let walls = self.wall_curve_classes();
        let violation = walls.iter().find(|w| w.c1.is_negative()).cloned();
        let zero_walls = walls.into_iter().filter(|w| w.c1.is_zero()).collect();
        Ok(SemiFanoReport {
            semi_fano: violation.is_none(),
            violation,
            zero_walls,
        })
    }

    /// Lattice point `b_i` or `ν` carried by the basic class.
    pub fn boundary_point(&self, kind: &DiskClassKind) -> Result<Vec<i64>, StackyError> {
        match kind {
            DiskClassKind::Smooth(i) if *i < self.m() => Ok(self.rays()[*i].clone()),
            DiskClassKind::Smooth(i) => Err(StackyError::Malformed(format!("ray index {i} out of range"))),
            DiskClassKind::Orbi(nu) => Ok(nu.clone()),
        }
    }

    /// `μ(β + α) = 2·age + 2 c₁·α` for orbi classes, `2 + 2 c₁·α` for smooth ones.
    ///
    /// Returned halved, as `age + c₁·α` (resp. `1 + c₁·α`).
    pub fn maslov_index(&self, beta: &DiskClassSymbol) -> Result<BigRational, StackyError> {
        let base = match &beta.kind {
            DiskClassKind::Smooth(i) => {
                self.boundary_point(&DiskClassKind::Smooth(*i))?;
                BigRational::from_integer(1.into())
            }
            DiskClassKind::Orbi(nu) => {
                self.box_elements()
                    .into_iter()
                    .find(|b| &b.point == nu)
                    .ok_or_else(|| StackyError::NotInSupport(nu.clone()))?
                    .age
            }
        };
        let c1: BigRational = beta.alpha.iter().sum();
        Ok(base + c1)
    }
}

#[cfg(test)]
mod tests {
    use super::super::examples::*;
    use super::*;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| x.into()).collect()
    }

    #[test]
    fn p1_wall() {
        let w = p1().wall_curve_classes();
        assert_eq!(w.len(), 1);
        assert_eq!(w[0].class, big(&[1, 1]));
        assert_eq!(w[0].c1, BigInt::from(2));
    }

    #[test]
    fn p2_walls_are_lines() {
        let w = p2().wall_curve_classes();
        assert_eq!(w.len(), 3);
        assert!(w.iter().all(|x| x.class == big(&[1, 1, 1])));
    }

    #[test]
    fn hirzebruch_walls() {
        let mut classes: Vec<Vec<BigInt>> = hirzebruch(2).wall_curve_classes().into_iter().map(|w| w.class).collect();
        classes.sort();
        classes.dedup();
        assert_eq!(classes, vec![big(&[0, 1, 0, 1]), big(&[1, -2, 1, 0]), big(&[1, 0, 1, 2])]);
        let rep = hirzebruch(2).semifano_check().unwrap();
        assert!(rep.semi_fano);
        assert!(!rep.zero_walls.is_empty());
        let rep3 = hirzebruch(3).semifano_check().unwrap();
        assert!(!rep3.semi_fano);
        assert_eq!(rep3.violation.unwrap().c1, BigInt::from(-1));
    }

    #[test]
    fn semifano_needs_complete_fan() {
        assert_eq!(c2z3().semifano_check(), Err(StackyError::NotComplete));
        assert!(p2z3_bare().semifano_check().unwrap().semi_fano);
    }

    #[test]
    fn maslov() {
        let f = p2z3();
        let one = BigRational::from_integer(1.into());
        assert_eq!(f.maslov_index(&DiskClassSymbol::basic(DiskClassKind::Smooth(0))).unwrap(), one);
        assert_eq!(f.maslov_index(&DiskClassSymbol::basic(DiskClassKind::Orbi(vec![0, 1]))).unwrap(), one);
        let b = DiskClassSymbol {
            kind: DiskClassKind::Smooth(1),
            alpha: vec![one.clone(), one.clone(), one.clone()],
        };
        assert_eq!(f.maslov_index(&b).unwrap(), BigRational::from_integer(4.into()));
    }
}
