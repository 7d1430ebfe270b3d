use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use super::StackyFan;
use crate::lattice::{self, IntMatrix};

/// A lattice point `ν = Σ t_k b_{i_k}` with `t_k ∈ (0,1)` on its carrier cone.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoxElement {
    pub point: Vec<i64>,
    pub carrier: Vec<usize>,
    pub coords: Vec<BigRational>,
    pub age: BigRational,
}

impl BoxElement {
    pub fn is_trivial(&self) -> bool {
        self.carrier.is_empty()
    }
}

/// Lattice points of the half-open parallelepiped `{Σ t_k g_k : t_k ∈ [0,1)}`
/// for linearly independent generators, with their coordinates `t`.
///
/// The points are in bijection with `Z^n ∩ span / ⊕ Z g_k`; representatives
/// come from the Smith form `U·G·V = S`: `t = frac(V·(y_i/d_i))`.
pub fn parallelepiped_points(dim: usize, generators: &[Vec<i64>]) -> Vec<(Vec<i64>, Vec<BigRational>)> {
    let k = generators.len();
    if k == 0 {
        return vec![(vec![0; dim], vec![])];
    }
    let g = IntMatrix::from_columns(dim, generators);
    let sf = lattice::smith_normal_form(&g);
    assert_eq!(sf.rank(), k, "generators must be linearly independent");
    let d: Vec<i64> = sf
        .invariant_factors
        .iter()
        .map(|x| x.to_i64().expect("cone multiplicity fits in i64"))
        .collect();
    let total: i64 = d.iter().product();
    let mut out = Vec::with_capacity(total as usize);
    let mut y = vec![0i64; k];
    for _ in 0..total {
        let w: Vec<BigRational> = y
            .iter()
            .zip(&d)
            .map(|(&yi, &di)| BigRational::new(yi.into(), di.into()))
            .collect();
        let t: Vec<BigRational> = sf.v.mul_rat_vec(&w).into_iter().map(|x| &x - x.floor()).collect();
        let point: Vec<i64> = (0..dim)
            .map(|r| {
                let s = (0..k).fold(BigRational::zero(), |acc, c| {
                    acc + BigRational::from_integer(g.get(r, c).clone()) * &t[c]
                });
                debug_assert!(s.is_integer());
                s.to_integer().to_i64().expect("box point fits in i64")
            })
            .collect();
        out.push((point, t));
        for i in 0..k {
            y[i] += 1;
            if y[i] < d[i] {
                break;
            }
            y[i] = 0;
        }
    }
    out
}

/// Witness returned by [`StackyFan::gorenstein_check`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GorensteinWitness {
    /// Integral `u_σ` with `⟨u_σ, b_i⟩ = 1` for every maximal cone, in cone order.
    Supports(Vec<Vec<BigInt>>),
    /// A maximal cone without an integral support vector.
    Offending(Vec<usize>),
}

impl StackyFan {
    /// All box elements of the fan, including `ν = 0`, sorted by point.
    pub fn box_elements(&self) -> Vec<BoxElement> {
        let mut seen: BTreeMap<Vec<i64>, BoxElement> = BTreeMap::new();
        for c in self.max_cones() {
            for (point, t) in parallelepiped_points(self.dim(), &self.cone_vectors(c)) {
                if seen.contains_key(&point) {
                    continue;
                }
                let (carrier, coords): (Vec<usize>, Vec<BigRational>) =
                    c.iter().zip(t).filter(|(_, x)| !x.is_zero()).map(|(i, x)| (*i, x)).unzip();
                let age = coords.iter().sum();
                seen.insert(
                    point.clone(),
                    BoxElement {
                        point,
                        carrier,
                        coords,
                        age,
                    },
                );
            }
        }
        seen.into_values().collect()
    }

    /// Nontrivial box elements of age exactly one, sorted by point.
    pub fn age_one_box_points(&self) -> Vec<Vec<i64>> {
        self.box_elements()
            .into_iter()
            .filter(|b| b.age.is_one())
            .map(|b| b.point)
            .collect()
    }

    /// The same fan with extras replaced by all age-one box elements.
    pub fn with_age_one_extras(&self) -> StackyFan {
        let extras = self.age_one_box_points();
        self.with_extras(extras).expect("box points have the fan dimension")
    }

    /// Integral support vectors `u_σ` with `⟨u_σ, b_i⟩ = 1` on every maximal cone.
    pub fn gorenstein_check(&self) -> (bool, GorensteinWitness) {
        let mut supports = Vec::new();
        for c in self.max_cones() {
            let rows = IntMatrix::from_rows(self.dim(), &self.cone_vectors(c));
            let ones = vec![BigInt::one(); c.len()];
            match lattice::solve_integer(&rows, &ones) {
                Some(u) => supports.push(u),
                None => return (false, GorensteinWitness::Offending(c.clone())),
            }
        }
        (true, GorensteinWitness::Supports(supports))
    }
}

#[cfg(test)]
mod tests {
    use super::super::examples::*;
    use super::*;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn p2z3_box() {
        let boxes = p2z3_bare().box_elements();
        let pts: Vec<Vec<i64>> = boxes.iter().map(|b| b.point.clone()).collect();
        assert_eq!(
            pts,
            vec![vec![-1, 0], vec![-1, 1], vec![0, -1], vec![0, 0], vec![0, 1], vec![1, -1], vec![1, 0]]
        );
        for b in &boxes {
            assert_eq!(b.age, if b.is_trivial() { r(0, 1) } else { r(1, 1) });
        }
    }

    #[test]
    fn c2z3_cone_box() {
        let pts = parallelepiped_points(2, &[vec![2, -1], vec![-1, 2]]);
        assert_eq!(pts.len(), 3);
        assert!(pts.contains(&(vec![1, 0], vec![r(2, 3), r(1, 3)])));
        assert!(pts.contains(&(vec![0, 1], vec![r(1, 3), r(2, 3)])));
        assert!(pts.contains(&(vec![0, 0], vec![r(0, 1), r(0, 1)])));
    }

    #[test]
    fn smooth_cone_has_trivial_box() {
        assert_eq!(parallelepiped_points(2, &[vec![1, 0], vec![1, 1]]), vec![(vec![0, 0], vec![r(0, 1), r(0, 1)])]);
    }

    #[test]
    fn gorenstein() {
        assert!(p2z3_bare().gorenstein_check().0);
        assert!(p2().gorenstein_check().0);
        let (ok, w) = p113().gorenstein_check();
        assert!(!ok);
        assert!(matches!(w, GorensteinWitness::Offending(_)));
        assert!(p113().box_elements().iter().any(|b| b.age == r(2, 3)));
    }

    #[test]
    fn p112_is_gorenstein() {
        let f = StackyFan::new(2, vec![vec![1, 0], vec![0, 1], vec![-1, -2]], vec![vec![0, 1], vec![1, 2], vec![0, 2]], vec![]).unwrap();
        assert!(f.gorenstein_check().0);
        let b: Vec<_> = f.box_elements().into_iter().filter(|b| !b.is_trivial()).collect();
        assert_eq!(b.len(), 1);
        assert_eq!(b[0].point, vec![0, -1]);
        assert_eq!(b[0].age, r(1, 1));
    }
}
