//! Membership in finitely generated rational cones.

use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::{int_vec_to_rat, rref, RatVector};

/// `a · x ≤ b`
#[derive(Clone, Debug, PartialEq, Eq)]
struct Ineq {
    a: Vec<BigRational>,
    b: BigRational,
}

impl Ineq {
    fn normalized(mut self) -> Self {
        if let Some(s) = self.a.iter().find(|x| !x.is_zero()).map(|x| x.abs()) {
            for x in self.a.iter_mut() {
                *x /= &s;
            }
            self.b /= &s;
        }
        self
    }
}

/// Decides whether `point` lies in the cone spanned by `generators`.
///
/// Returns nonnegative coefficients `λ` with `Σ λ_i g_i = point` on success.
/// Linearly independent generators are handled by a direct solve; otherwise
/// the equality system is reduced to inequalities in its free variables and
/// decided by Fourier–Motzkin elimination, with a witness recovered by back
/// substitution.
pub fn cone_contains(generators: &[RatVector], point: &[BigRational]) -> Option<RatVector> {
    let dim = point.len();
    let k = generators.len();
    if k == 0 {
        return point.iter().all(Zero::is_zero).then(Vec::new);
    }
    let rows: Vec<Vec<BigRational>> = (0..dim)
        .map(|i| {
            let mut r: Vec<BigRational> = generators.iter().map(|g| g[i].clone()).collect();
            r.push(point[i].clone());
            r
        })
        .collect();
    let red = rref(rows, k);
    if red.rows.iter().skip(red.pivots.len()).any(|r| !r[k].is_zero()) {
        return None;
    }
    let free: Vec<usize> = (0..k).filter(|c| !red.pivots.contains(c)).collect();
    let nf = free.len();

    // λ_pivot = rhs − Σ_f a_f λ_f ≥ 0  and  λ_f ≥ 0
    let mut system: Vec<Ineq> = Vec::new();
    for (r, _) in red.pivots.iter().enumerate() {
        system.push(Ineq {
            a: free.iter().map(|&f| red.rows[r][f].clone()).collect(),
            b: red.rows[r][k].clone(),
        });
    }
    for v in 0..nf {
        let mut a = vec![BigRational::zero(); nf];
        a[v] = -BigRational::from_integer(1.into());
        system.push(Ineq {
            a,
            b: BigRational::zero(),
        });
    }

    // stages[v] holds the system in variables 0..=v
    let mut stages: Vec<Vec<Ineq>> = vec![Vec::new(); nf];
    let mut current = system;
    for v in (0..nf).rev() {
        stages[v] = current.clone();
        current = eliminate(&current, v);
    }
    if current.iter().any(|q| q.b.is_negative()) {
        return None;
    }

    let mut x: Vec<BigRational> = Vec::with_capacity(nf);
    for (v, stage) in stages.iter().enumerate() {
        let mut lo: Option<BigRational> = None;
        let mut hi: Option<BigRational> = None;
        for q in stage {
            let coef = &q.a[v];
            if coef.is_zero() {
                continue;
            }
            let mut rhs = q.b.clone();
            for (u, xu) in x.iter().enumerate() {
                rhs -= &q.a[u] * xu;
            }
            let bound = rhs / coef;
            if coef.is_positive() {
                if hi.as_ref().is_none_or(|h| bound < *h) {
                    hi = Some(bound);
                }
            } else if lo.as_ref().is_none_or(|l| bound > *l) {
                lo = Some(bound);
            }
        }
        let zero = BigRational::zero();
        let ok_zero = lo.as_ref().is_none_or(|l| *l <= zero) && hi.as_ref().is_none_or(|h| zero <= *h);
        let pick = if ok_zero {
            zero
        } else if let Some(l) = lo {
            l
        } else {
            hi.unwrap_or(zero)
        };
        x.push(pick);
    }

    let mut lambda = vec![BigRational::zero(); k];
    for (f, xf) in free.iter().zip(&x) {
        lambda[*f] = xf.clone();
    }
    for (r, &c) in red.pivots.iter().enumerate() {
        let mut val = red.rows[r][k].clone();
        for (f, xf) in free.iter().zip(&x) {
            val -= &red.rows[r][*f] * xf;
        }
        lambda[c] = val;
    }

    let reconstructs = (0..dim).all(|i| {
        let s = generators
            .iter()
            .zip(&lambda)
            .fold(BigRational::zero(), |acc, (g, l)| acc + &g[i] * l);
        s == point[i]
    });
    (reconstructs && lambda.iter().all(|l| !l.is_negative())).then_some(lambda)
}

fn eliminate(system: &[Ineq], v: usize) -> Vec<Ineq> {
    let mut out: Vec<Ineq> = Vec::new();
    let (mut pos, mut neg) = (Vec::new(), Vec::new());
    for q in system {
        if q.a[v].is_positive() {
            pos.push(q);
        } else if q.a[v].is_negative() {
            neg.push(q);
        } else {
            out.push(q.clone());
        }
    }
    for p in &pos {
        for n in &neg {
            let (cp, cn) = (p.a[v].clone(), -n.a[v].clone());
            let a: Vec<BigRational> = p.a.iter().zip(&n.a).map(|(x, y)| x * &cn + y * &cp).collect();
            let b = &p.b * &cn + &n.b * &cp;
            out.push(Ineq { a, b });
        }
    }
    let mut dedup: Vec<Ineq> = Vec::new();
    for q in out.into_iter().map(Ineq::normalized) {
        if q.a.iter().all(Zero::is_zero) {
            if q.b.is_negative() {
                // infeasible; keep a single witness
                return vec![q];
            }
            continue;
        }
        if !dedup.contains(&q) {
            dedup.push(q);
        }
    }
    dedup
}

/// [`cone_contains`] for machine-integer input.
pub fn cone_contains_int(generators: &[Vec<i64>], point: &[i64]) -> Option<RatVector> {
    let gens: Vec<RatVector> = generators.iter().map(|g| int_vec_to_rat(g)).collect();
    cone_contains(&gens, &int_vec_to_rat(point))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn simplicial_membership() {
        let l = cone_contains_int(&[vec![2, -1], vec![-1, 2]], &[1, 0]).unwrap();
        assert_eq!(l, vec![r(2, 3), r(1, 3)]);
        assert!(cone_contains_int(&[vec![1, 0]], &[-1, 0]).is_none());
        assert_eq!(cone_contains_int(&[vec![1, 0], vec![0, 1]], &[0, 0]).unwrap(), vec![r(0, 1); 2]);
    }

    #[test]
    fn redundant_generators() {
        let gens = vec![vec![1, 0], vec![1, 1], vec![0, 1], vec![-1, 1]];
        let l = cone_contains_int(&gens, &[-1, 3]).unwrap();
        assert!(l.iter().all(|x| !x.is_negative()));
        assert!(cone_contains_int(&gens, &[-1, 0]).is_none());
        assert!(cone_contains_int(&gens, &[0, -1]).is_none());
    }

    #[test]
    fn line_and_halfplane() {
        // cone({±e1, e2}) is the closed upper half-plane
        let gens = vec![vec![1, 0], vec![-1, 0], vec![0, 1]];
        assert!(cone_contains_int(&gens, &[-5, 2]).is_some());
        assert!(cone_contains_int(&gens, &[7, 0]).is_some());
        assert!(cone_contains_int(&gens, &[0, -1]).is_none());
    }

    #[test]
    fn lower_dimensional_cone() {
        let gens = vec![vec![1, 0, 0], vec![0, 1, 0], vec![1, 1, 0]];
        assert!(cone_contains_int(&gens, &[2, 3, 0]).is_some());
        assert!(cone_contains_int(&gens, &[2, 3, 1]).is_none());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn certificate_reconstructs(
                gens in proptest::collection::vec(proptest::collection::vec(-3i64..=3, 3), 1..6),
                coeffs in proptest::collection::vec(0i64..=3, 6),
                probe in proptest::collection::vec(-4i64..=4, 3),
            ) {
                // a nonnegative combination is always a member
                let mut p = vec![0i64; 3];
                for (g, c) in gens.iter().zip(&coeffs) {
                    for i in 0..3 { p[i] += c * g[i]; }
                }
                let l = cone_contains_int(&gens, &p);
                prop_assert!(l.is_some());
                for target in [p, probe] {
                    if let Some(l) = cone_contains_int(&gens, &target) {
                        prop_assert!(l.iter().all(|x| !x.is_negative()));
                        for i in 0..3 {
                            let s = gens.iter().zip(&l).fold(BigRational::zero(), |acc, (g, x)| acc + BigRational::from_integer(g[i].into()) * x);
                            prop_assert_eq!(s, BigRational::from_integer(target[i].into()));
                        }
                    }
                }
            }
        }
    }
}
