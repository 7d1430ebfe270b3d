//! Hermite and Smith normal forms, integer kernels and integer solving.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::IntMatrix;

/// Row Hermite normal form.
///
/// Returns `(h, u)` with `u` unimodular and `u · a = h`. `h` is in reduced row
/// echelon form over `Z`: pivots are positive, entries above each pivot lie in
/// `[0, pivot)`, and zero rows come last.
pub fn hermite_normal_form(a: &IntMatrix) -> (IntMatrix, IntMatrix) {
    let mut h = a.clone();
    let mut u = IntMatrix::identity(a.rows());
    let mut pr = 0;
    for c in 0..h.cols() {
        if pr == h.rows() {
            break;
        }
        loop {
            let best = (pr..h.rows())
                .filter(|&i| !h.get(i, c).is_zero())
                .min_by(|&x, &y| h.get(x, c).abs().cmp(&h.get(y, c).abs()));
            let Some(best) = best else { break };
            h.swap_rows(pr, best);
            u.swap_rows(pr, best);
            let mut clean = true;
            for i in pr + 1..h.rows() {
                if h.get(i, c).is_zero() {
                    continue;
                }
                let q = -(h.get(i, c).div_floor(h.get(pr, c)));
                h.add_row_multiple(i, pr, &q);
                u.add_row_multiple(i, pr, &q);
                if !h.get(i, c).is_zero() {
                    clean = false;
                }
            }
            if clean {
                break;
            }
        }
        if h.get(pr, c).is_zero() {
            continue;
        }
        if h.get(pr, c).is_negative() {
            h.negate_row(pr);
            u.negate_row(pr);
        }
        for i in 0..pr {
            let q = -(h.get(i, c).div_floor(h.get(pr, c)));
            h.add_row_multiple(i, pr, &q);
            u.add_row_multiple(i, pr, &q);
        }
        pr += 1;
    }
    (h, u)
}

/// Smith normal form `u · a · v = s`.
#[derive(Clone, Debug)]
pub struct SmithForm {
    pub s: IntMatrix,
    pub u: IntMatrix,
    pub v: IntMatrix,
    /// Nonzero diagonal entries `d_1 | d_2 | …`, all positive.
    pub invariant_factors: Vec<BigInt>,
}

impl SmithForm {
    pub fn rank(&self) -> usize {
        self.invariant_factors.len()
    }
}

pub fn smith_normal_form(a: &IntMatrix) -> SmithForm {
    let (m, n) = (a.rows(), a.cols());
    let mut s = a.clone();
    let mut u = IntMatrix::identity(m);
    let mut v = IntMatrix::identity(n);
    let mut t = 0;
    while t < m.min(n) {
        // smallest nonzero entry of the trailing block becomes the pivot
        let mut best: Option<(usize, usize)> = None;
        for i in t..m {
            for j in t..n {
                let x = s.get(i, j);
                if !x.is_zero() && best.is_none_or(|(bi, bj)| x.abs() < s.get(bi, bj).abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((bi, bj)) = best else { break };
        s.swap_rows(t, bi);
        u.swap_rows(t, bi);
        s.swap_cols(t, bj);
        v.swap_cols(t, bj);
        loop {
            let mut dirty = false;
            for i in t + 1..m {
                if s.get(i, t).is_zero() {
                    continue;
                }
                let q = -(s.get(i, t).div_floor(s.get(t, t)));
                s.add_row_multiple(i, t, &q);
                u.add_row_multiple(i, t, &q);
                if !s.get(i, t).is_zero() {
                    dirty = true;
                }
            }
            for j in t + 1..n {
                if s.get(t, j).is_zero() {
                    continue;
                }
                let q = -(s.get(t, j).div_floor(s.get(t, t)));
                s.add_col_multiple(j, t, &q);
                v.add_col_multiple(j, t, &q);
                if !s.get(t, j).is_zero() {
                    dirty = true;
                }
            }
            if !dirty {
                // divisibility condition on the trailing block
                let bad = (t + 1..m).find(|&i| {
                    (t + 1..n).any(|j| !s.get(i, j).is_multiple_of(s.get(t, t)))
                });
                match bad {
                    Some(i) => {
                        s.add_row_multiple(t, i, &BigInt::one());
                        u.add_row_multiple(t, i, &BigInt::one());
                    }
                    None => break,
                }
            }
            // move a smaller remainder into the pivot slot
            let mut best = (t, t);
            for i in t..m {
                if !s.get(i, t).is_zero() && s.get(i, t).abs() < s.get(best.0, best.1).abs() {
                    best = (i, t);
                }
            }
            for j in t..n {
                if !s.get(t, j).is_zero() && s.get(t, j).abs() < s.get(best.0, best.1).abs() {
                    best = (t, j);
                }
            }
            if best.0 != t {
                s.swap_rows(t, best.0);
                u.swap_rows(t, best.0);
            }
            if best.1 != t {
                s.swap_cols(t, best.1);
                v.swap_cols(t, best.1);
            }
        }
        if s.get(t, t).is_negative() {
            s.negate_row(t);
            u.negate_row(t);
        }
        t += 1;
    }
    let invariant_factors = (0..m.min(n))
        .map(|i| s.get(i, i).clone())
        .filter(|x| !x.is_zero())
        .collect();
    SmithForm {
        s,
        u,
        v,
        invariant_factors,
    }
}

/// Z-basis (as rows) of `{x ∈ Z^cols : a · x = 0}`.
///
/// The basis spans the full kernel lattice, not a finite-index sublattice,
/// and is returned in Hermite normal form.
pub fn integer_kernel(a: &IntMatrix) -> IntMatrix {
    let n = a.cols();
    if a.rows() == 0 {
        return IntMatrix::identity(n);
    }
    let (h, u) = hermite_normal_form(&a.transpose());
    let kernel_rows: Vec<Vec<BigInt>> = (0..h.rows())
        .filter(|&i| h.row(i).iter().all(Zero::is_zero))
        .map(|i| u.row_vec(i))
        .collect();
    if kernel_rows.is_empty() {
        return IntMatrix::zeros(0, n);
    }
    let k = IntMatrix::from_big_rows(n, kernel_rows);
    let (hk, _) = hermite_normal_form(&k);
    let rows: Vec<Vec<BigInt>> = (0..hk.rows())
        .map(|i| hk.row_vec(i))
        .filter(|r| r.iter().any(|x| !x.is_zero()))
        .collect();
    IntMatrix::from_big_rows(n, rows)
}

/// An integer solution of `a · x = b`, if one exists.
pub fn solve_integer(a: &IntMatrix, b: &[BigInt]) -> Option<Vec<BigInt>> {
    assert_eq!(a.rows(), b.len());
    let sf = smith_normal_form(a);
    // u a v = s  ⇒  a x = b  ⇔  s (v⁻¹ x) = u b
    let ub = sf.u.mul_vec(b);
    let mut y = vec![BigInt::zero(); a.cols()];
    for (i, ubi) in ub.iter().enumerate() {
        let d = if i < a.cols() { sf.s.get(i, i).clone() } else { BigInt::zero() };
        if d.is_zero() {
            if !ubi.is_zero() {
                return None;
            }
        } else {
            let (q, r) = ubi.div_rem(&d);
            if !r.is_zero() {
                return None;
            }
            y[i] = q;
        }
    }
    Some(sf.v.mul_vec(&y))
}

/// True when the rows of `basis` span a saturated sublattice of `Z^cols`,
/// i.e. all elementary divisors equal one.
pub fn is_saturated(basis: &IntMatrix) -> bool {
    let sf = smith_normal_form(basis);
    sf.rank() == basis.rows() && sf.invariant_factors.iter().all(One::is_one)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn is_row_hnf(h: &IntMatrix) -> bool {
        let mut last_pivot: Option<usize> = None;
        let mut seen_zero = false;
        for i in 0..h.rows() {
            let p = (0..h.cols()).find(|&j| !h.get(i, j).is_zero());
            match p {
                None => seen_zero = true,
                Some(c) => {
                    if seen_zero || last_pivot.is_some_and(|lp| c <= lp) {
                        return false;
                    }
                    if !h.get(i, c).is_positive() {
                        return false;
                    }
                    for k in 0..i {
                        let x = h.get(k, c);
                        if x.is_negative() || x >= h.get(i, c) {
                            return false;
                        }
                    }
                    last_pivot = Some(c);
                }
            }
        }
        true
    }

    #[test]
    fn hnf_two_by_two() {
        let a = IntMatrix::from_rows(2, &[[2, 4], [1, 3]]);
        let (h, u) = hermite_normal_form(&a);
        assert_eq!(u.mul(&a), h);
        assert!(u.is_unimodular());
        assert!(is_row_hnf(&h));
        assert_eq!(h, IntMatrix::from_rows(2, &[[1, 1], [0, 2]]));
        // the echelon form [[1,3],[0,2]] is the same lattice, one reduction step away
        let echelon = IntMatrix::from_rows(2, &[[1, 3], [0, 2]]);
        assert_eq!(hermite_normal_form(&echelon).0, h);
    }

    #[test]
    fn hnf_identity_and_zero_row() {
        let i3 = IntMatrix::identity(3);
        let (h, u) = hermite_normal_form(&i3);
        assert_eq!(h, i3);
        assert_eq!(u, i3);
        let z = IntMatrix::from_rows(2, &[[0, 0]]);
        let (h, u) = hermite_normal_form(&z);
        assert_eq!(h, z);
        assert_eq!(u, IntMatrix::identity(1));
    }

    #[test]
    fn kernel_of_p1_fan_map() {
        let a = IntMatrix::from_rows(2, &[[1, -1]]);
        assert_eq!(integer_kernel(&a), IntMatrix::from_rows(2, &[[1, 1]]));
    }

    #[test]
    fn kernel_of_c2z3_chart() {
        let a = IntMatrix::from_columns(2, &[[2, -1], [-1, 2], [1, 0], [0, 1]]);
        let k = integer_kernel(&a);
        assert_eq!(k.rows(), 2);
        assert!(a.mul(&k.transpose()).is_zero());
        assert!(is_saturated(&k));
        for v in [[-2i64, -1, 3, 0], [-1, -2, 0, 3]] {
            let target: Vec<BigInt> = v.iter().map(|&x| x.into()).collect();
            assert!(solve_integer(&k.transpose(), &target).is_some());
        }
        // the two relations above only span an index-3 sublattice
        let sub = IntMatrix::from_rows(4, &[[-2, -1, 3, 0], [-1, -2, 0, 3]]);
        assert!(!is_saturated(&sub));
    }

    #[test]
    fn kernel_of_injective_map_is_empty() {
        let k = integer_kernel(&IntMatrix::identity(3));
        assert_eq!(k.rows(), 0);
    }

    #[test]
    fn smith_of_diagonalizable() {
        let a = IntMatrix::from_rows(2, &[[2, 4], [6, 8]]);
        let sf = smith_normal_form(&a);
        assert_eq!(sf.u.mul(&a).mul(&sf.v), sf.s);
        assert_eq!(sf.invariant_factors, vec![BigInt::from(2), BigInt::from(4)]);
        assert!(sf.u.is_unimodular() && sf.v.is_unimodular());
    }

    #[test]
    fn integer_solve() {
        let a = IntMatrix::from_rows(2, &[[2, 0], [0, 3]]);
        assert!(solve_integer(&a, &[BigInt::from(1), BigInt::from(0)]).is_none());
        let x = solve_integer(&a, &[BigInt::from(4), BigInt::from(-3)]).unwrap();
        assert_eq!(x, vec![BigInt::from(2), BigInt::from(-1)]);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn small_matrix() -> impl Strategy<Value = IntMatrix> {
            (1usize..4, 1usize..5).prop_flat_map(|(r, c)| {
                proptest::collection::vec(-6i64..=6, r * c).prop_map(move |v| {
                    let rows: Vec<Vec<i64>> = v.chunks(c).map(<[i64]>::to_vec).collect();
                    IntMatrix::from_rows(c, &rows)
                })
            })
        }

        proptest! {
            #[test]
            fn hnf_is_unimodular_transform(a in small_matrix()) {
                let (h, u) = hermite_normal_form(&a);
                prop_assert_eq!(u.mul(&a), h.clone());
                prop_assert!(u.is_unimodular());
                prop_assert!(is_row_hnf(&h));
            }

            #[test]
            fn smith_is_equivalence(a in small_matrix()) {
                let sf = smith_normal_form(&a);
                prop_assert_eq!(sf.u.mul(&a).mul(&sf.v), sf.s.clone());
                prop_assert!(sf.u.is_unimodular() && sf.v.is_unimodular());
                for w in sf.invariant_factors.windows(2) {
                    prop_assert!(w[1].is_multiple_of(&w[0]));
                }
                prop_assert_eq!(sf.rank(), a.rank());
            }

            #[test]
            fn kernel_rank_nullity(a in small_matrix()) {
                let k = integer_kernel(&a);
                prop_assert_eq!(a.rank() + k.rows(), a.cols());
                if k.rows() > 0 {
                    prop_assert!(a.mul(&k.transpose()).is_zero());
                    prop_assert!(is_saturated(&k));
                }
            }

            #[test]
            fn integer_solve_roundtrip(a in small_matrix(), seed in proptest::collection::vec(-4i64..=4, 4)) {
                let x0: Vec<BigInt> = seed.iter().take(a.cols()).map(|&v| v.into()).collect();
                prop_assume!(x0.len() == a.cols());
                let b = a.mul_vec(&x0);
                let x = solve_integer(&a, &b).expect("consistent system");
                prop_assert_eq!(a.mul_vec(&x), b);
            }
        }
    }
}
