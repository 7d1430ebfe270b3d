use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::MirrorError;
use crate::lattice::{IntMatrix, RatVector};
use crate::series::{RatSeries, SeriesRing};
use crate::stacky::{DualClass, FanSequenceData, StackyFan};

/// A toric Calabi–Yau chart with its fan sequence and the two series rings:
/// `(y_1..y_{r'}, s_j)` on the B-side and `(q_1..q_{r'}, τ_j)` on the A-side.
///
/// `s_j` stands for `y^{D_j^∨}`; both rings share weights, so the mirror map
/// is weight-preserving at leading order.
#[derive(Clone, Debug)]
pub struct Chart {
    pub fan: StackyFan,
    pub seq: FanSequenceData,
    pub duals: Vec<DualClass>,
    /// `⟨p_a, D_j^∨⟩`, one row per extra vector.
    pub dual_coords: Vec<RatVector>,
    pub modulus: i64,
    pub y_ring: Arc<SeriesRing>,
    pub q_ring: Arc<SeriesRing>,
}

/// `Ω_j` as coordinate vectors `d_a = ⟨p_a, d⟩`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OmegaSet {
    pub j: usize,
    pub elements: Vec<RatVector>,
}

impl Chart {
    pub fn new(fan: &StackyFan, basis_p: Option<Vec<Vec<BigInt>>>, truncation: BigRational) -> Result<Self, MirrorError> {
        let seq = fan.fan_sequence(basis_p)?;
        let duals: Vec<DualClass> = (fan.m()..fan.m_prime())
            .map(|j| fan.dual_class(j))
            .collect::<Result<_, _>>()?;
        let dual_coords: Vec<RatVector> = duals.iter().map(|d| seq.coordinates(&d.class)).collect();

        let mut modulus = BigInt::one();
        for c in fan.max_cones() {
            modulus = modulus.lcm(&fan.multiplicity(c));
        }
        for x in dual_coords.iter().flatten() {
            modulus = modulus.lcm(x.denom());
        }
        let modulus = modulus
            .to_i64()
            .ok_or_else(|| MirrorError::OffGrid("modulus too large".into()))?;

        let rp = seq.r_prime;
        let mut weights = vec![BigRational::one(); rp];
        for (k, row) in dual_coords.iter().enumerate() {
            let w: BigRational = row.iter().sum();
            if !w.is_positive() {
                return Err(MirrorError::NonPositiveWeight(fan.m() + k));
            }
            weights.push(w);
        }
        if !dual_coords.is_empty() {
            let e = dual_coords.len();
            let rows: Vec<RatVector> = dual_coords.iter().map(|r| r[rp..].to_vec()).collect();
            if crate::lattice::rational_rank(&rows) != e {
                return Err(MirrorError::DegenerateExponentMatrix);
            }
        }
        let label = |j: usize| {
            let v = fan.vector(j);
            format!("[{}]", v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","))
        };
        let mut y_names: Vec<String> = (1..=rp).map(|a| format!("y{a}")).collect();
        let mut q_names: Vec<String> = (1..=rp).map(|a| format!("q{a}")).collect();
        for j in fan.m()..fan.m_prime() {
            y_names.push(format!("s{}", label(j)));
            q_names.push(format!("t{}", label(j)));
        }
        let y_ring = SeriesRing::new(y_names, modulus, weights.clone(), truncation.clone())?;
        let q_ring = SeriesRing::new(q_names, modulus, weights, truncation)?;
        Ok(Chart {
            fan: fan.clone(),
            seq,
            duals,
            dual_coords,
            modulus,
            y_ring,
            q_ring,
        })
    }

    pub fn r(&self) -> usize {
        self.seq.r()
    }

    pub fn r_prime(&self) -> usize {
        self.seq.r_prime
    }

    pub fn truncation(&self) -> &BigRational {
        self.y_ring.truncation()
    }

    /// Every `d` with `d_a ∈ (1/M)Z_{≥0}` and `Σ d_a ≤ T`.
    pub fn enumerate_exponents(&self) -> Vec<RatVector> {
        let r = self.r();
        let cap = (self.truncation() * BigRational::from_integer(self.modulus.into()))
            .floor()
            .to_integer()
            .to_i64()
            .expect("grid bound fits in i64");
        let mut out = Vec::new();
        let mut cur = vec![0i64; r];
        fn rec(k: usize, left: i64, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
            if k == cur.len() {
                out.push(cur.clone());
                return;
            }
            for x in 0..=left {
                cur[k] = x;
                rec(k + 1, left - x, cur, out);
            }
            cur[k] = 0;
        }
        let mut raw = Vec::new();
        rec(0, cap, &mut cur, &mut raw);
        let m = BigInt::from(self.modulus);
        for v in raw {
            out.push(v.into_iter().map(|x| BigRational::new(x.into(), m.clone())).collect());
        }
        out
    }

    /// The index `j` with `d ∈ Ω_j`, if any.
    pub fn classify(&self, d: &[BigRational]) -> Option<usize> {
        let rel = self.seq.relation(d);
        let neg_int: Vec<usize> = (0..rel.len())
            .filter(|&i| rel[i].is_integer() && rel[i].is_negative())
            .collect();
        let non_int: Vec<usize> = (0..rel.len()).filter(|&i| !rel[i].is_integer()).collect();
        if non_int.is_empty() {
            return match neg_int.as_slice() {
                [j] if *j < self.fan.m() => Some(*j),
                _ => None,
            };
        }
        if !neg_int.is_empty() || !self.fan.is_cone(&non_int) {
            return None;
        }
        let mut nu = vec![0i64; self.fan.dim()];
        for (i, x) in rel.iter().enumerate() {
            let c = x.ceil().to_integer().to_i64()?;
            for (n, b) in nu.iter_mut().zip(self.fan.vector(i)) {
                *n += c * b;
            }
        }
        (self.fan.m()..self.fan.m_prime()).find(|&j| self.fan.vector(j) == nu.as_slice())
    }

    /// All `Ω_j` up to the truncation order, indexed by `j`.
    pub fn omega_sets(&self) -> Vec<OmegaSet> {
        let mut sets: Vec<OmegaSet> = (0..self.fan.m_prime())
            .map(|j| OmegaSet { j, elements: vec![] })
            .collect();
        for d in self.enumerate_exponents() {
            if let Some(j) = self.classify(&d) {
                sets[j].elements.push(d);
            }
        }
        sets
    }

    pub fn omega_set(&self, j: usize) -> OmegaSet {
        self.omega_sets().swap_remove(j)
    }

    /// Exponent of `y^d` in `(y_1..y_{r'}, s_j)`.
    pub fn y_exponent(&self, d: &[BigRational]) -> Result<RatVector, MirrorError> {
        let rel = self.seq.relation(d);
        let rp = self.r_prime();
        let mut h: RatVector = d[..rp].to_vec();
        let mut k = Vec::with_capacity(self.dual_coords.len());
        for (jj, row) in self.dual_coords.iter().enumerate() {
            let kj = &rel[self.fan.m() + jj];
            if !kj.is_integer() || kj.is_negative() {
                return Err(MirrorError::OffGrid(format!("{d:?}")));
            }
            for (a, x) in h.iter_mut().enumerate() {
                *x -= kj * &row[a];
            }
            k.push(kj.clone());
        }
        if h.iter().any(|x| x.is_negative()) {
            return Err(MirrorError::OffGrid(format!("{d:?}")));
        }
        // the V-part of d must be spanned by the D_j^∨ alone
        for a in rp..self.r() {
            let acc: BigRational = self
                .dual_coords
                .iter()
                .zip(&k)
                .fold(BigRational::zero(), |s, (row, kj)| s + kj * &row[a]);
            if acc != d[a] {
                return Err(MirrorError::OffGrid(format!("{d:?}")));
            }
        }
        h.extend(k);
        Ok(h)
    }

    /// Coefficient of `y^d` in `A_j`.
    pub fn a_coefficient(&self, j: usize, d: &[BigRational]) -> BigRational {
        let rel = self.seq.relation(d);
        if j < self.fan.m() {
            let n = (-rel[j].to_integer()).to_u64().expect("negative pairing");
            let mut c = factorial(n - 1);
            if n.is_multiple_of(2) {
                c = -c;
            }
            let mut den = BigInt::one();
            for (i, x) in rel.iter().enumerate() {
                if i != j {
                    den *= factorial(x.to_integer().to_u64().expect("nonnegative pairing"));
                }
            }
            BigRational::new(c, den)
        } else {
            rel.iter().map(ratio).product()
        }
    }

    /// `A_j(y) = Σ_{d ∈ Ω_j} coefficient · y^d`.
    pub fn a_series(&self, omega: &OmegaSet) -> Result<RatSeries, MirrorError> {
        let mut s = RatSeries::zero(&self.y_ring);
        for d in &omega.elements {
            let e = self.y_exponent(d)?;
            s.add_monomial(&e, self.a_coefficient(omega.j, d))?;
        }
        Ok(s)
    }

    pub fn all_a_series(&self) -> Result<Vec<RatSeries>, MirrorError> {
        self.omega_sets().iter().map(|o| self.a_series(o)).collect()
    }

    /// `Q_{ia}` as a rational.
    pub fn q_entry(&self, i: usize, a: usize) -> BigRational {
        BigRational::from_integer(self.seq.q_matrix[i][a].clone())
    }

    pub fn q_matrix(&self) -> IntMatrix {
        IntMatrix::from_big_rows(self.r(), self.seq.q_matrix.clone())
    }
}

fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

/// `Π_{k≥⌈c⌉}(c−k) / Π_{k≥0}(c−k)` with common factors cancelled.
fn ratio(c: &BigRational) -> BigRational {
    let top = c.ceil().to_integer().to_i64().expect("small pairing");
    let mut acc = BigRational::one();
    if top >= 1 {
        for k in 0..top {
            acc *= c - BigRational::from_integer(k.into());
        }
        acc.recip()
    } else {
        for k in top..0 {
            acc *= c - BigRational::from_integer(k.into());
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::rat;
    use crate::stacky::examples::*;

    #[test]
    fn ratio_values() {
        assert_eq!(ratio(&rat(3, 1)), rat(1, 6));
        assert_eq!(ratio(&rat(0, 1)), rat(1, 1));
        assert_eq!(ratio(&rat(-1, 3)), rat(1, 1));
        assert_eq!(ratio(&rat(-5, 3)), rat(-2, 3));
        assert_eq!(ratio(&rat(2, 3)), rat(3, 2));
    }

    #[test]
    fn grid_counts() {
        let c = Chart::new(&c2z3(), None, rat(1, 1)).unwrap();
        assert_eq!(c.modulus, 3);
        assert_eq!(c.enumerate_exponents().len(), 10);
        let c0 = Chart::new(&c2z3(), None, rat(0, 1)).unwrap();
        assert_eq!(c0.enumerate_exponents(), vec![vec![rat(0, 1), rat(0, 1)]]);
    }

    #[test]
    fn c2z3_omega_contains_dual_class() {
        let c = Chart::new(&c2z3(), None, rat(1, 1)).unwrap();
        let sets = c.omega_sets();
        assert!(sets[0].elements.is_empty() && sets[1].elements.is_empty());
        let d2 = c.seq.coordinates(&c.duals[0].class);
        assert!(sets[2].elements.contains(&d2));
        assert_eq!(c.a_coefficient(2, &d2), rat(1, 1));
        let a2 = c.a_series(&sets[2]).unwrap();
        assert_eq!(a2.coefficient(&[rat(1, 1), rat(0, 1)]), rat(1, 1));
        assert_eq!(a2.valuation(), Some(rat(1, 1)));
    }

    #[test]
    fn local_p1_a_series() {
        let c = Chart::new(&local_p1_minus2(), None, rat(3, 1)).unwrap();
        assert_eq!(c.r_prime(), 1);
        let a = c.all_a_series().unwrap();
        assert!(a[0].is_zero() && a[2].is_zero());
        let expect = RatSeries::from_scaled_terms(&c.y_ring, [(vec![1], rat(-1, 1)), (vec![2], rat(-3, 2)), (vec![3], rat(-10, 3))]);
        assert_eq!(a[1], expect);
    }

    #[test]
    fn c3z3_weight() {
        let c = Chart::new(&c3z3(), None, rat(2, 1)).unwrap();
        assert_eq!(c.y_ring.weights(), &[rat(1, 3)]);
        let a = c.all_a_series().unwrap();
        assert_eq!(a[3].coefficient(&[rat(1, 1)]), rat(1, 1));
        assert_eq!(a[3].coefficient(&[rat(6, 1)]), rat(0, 1));
    }
}
