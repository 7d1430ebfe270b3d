//! Linear systems over `Q`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::{IntMatrix, LatticeError, RatVector};

/// Reduced row echelon form together with the pivot columns.
pub(crate) struct Rref {
    pub rows: Vec<Vec<BigRational>>,
    pub pivots: Vec<usize>,
}

/// Gauss–Jordan elimination of the first `ncols` columns; any further columns
/// (augmented right-hand sides) are carried along but never pivoted on.
pub(crate) fn rref(mut rows: Vec<Vec<BigRational>>, ncols: usize) -> Rref {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].recip();
        for x in rows[r].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, p) in row.iter_mut().zip(&pivot_row) {
                *x -= &f * p;
            }
        }
        pivots.push(c);
        r += 1;
    }
    Rref { rows, pivots }
}

pub(crate) fn to_rat(x: &BigInt) -> BigRational {
    BigRational::from_integer(x.clone())
}

pub(crate) fn int_vec_to_rat(v: &[i64]) -> RatVector {
    v.iter()
        .map(|&x| BigRational::from_integer(BigInt::from(x)))
        .collect()
}

/// Solves `a · x = b` over `Q`.
///
/// Fails with [`LatticeError::NoSolution`] for inconsistent systems and with
/// [`LatticeError::AmbiguousSolution`] when the solution is not unique.
pub fn solve_rational(a: &IntMatrix, b: &[BigRational]) -> Result<RatVector, LatticeError> {
    let rows: Vec<Vec<BigRational>> = (0..a.rows()).map(|i| a.row(i).iter().map(to_rat).collect()).collect();
    solve_rat_rows(rows, a.cols(), b)
}

/// Same as [`solve_rational`] for a matrix already given over `Q`.
pub fn solve_rat_rows(
    rows: Vec<Vec<BigRational>>,
    ncols: usize,
    b: &[BigRational],
) -> Result<RatVector, LatticeError> {
    assert_eq!(rows.len(), b.len(), "right-hand side length mismatch");
    let aug: Vec<Vec<BigRational>> = rows
        .into_iter()
        .zip(b)
        .map(|(mut r, bi)| {
            assert_eq!(r.len(), ncols);
            r.push(bi.clone());
            r
        })
        .collect();
    let red = rref(aug, ncols);
    for row in red.rows.iter().skip(red.pivots.len()) {
        if !row[ncols].is_zero() {
            return Err(LatticeError::NoSolution);
        }
    }
    if red.pivots.len() < ncols {
        return Err(LatticeError::AmbiguousSolution {
            rank: red.pivots.len(),
            unknowns: ncols,
        });
    }
    let mut x = vec![BigRational::zero(); ncols];
    for (r, &c) in red.pivots.iter().enumerate() {
        x[c] = red.rows[r][ncols].clone();
    }
    Ok(x)
}

/// Expresses `target` as a combination of `vectors`, which must be linearly
/// independent.
pub fn coordinates_in(vectors: &[RatVector], target: &[BigRational]) -> Result<RatVector, LatticeError> {
    let dim = target.len();
    let rows: Vec<Vec<BigRational>> = (0..dim)
        .map(|i| vectors.iter().map(|v| v[i].clone()).collect())
        .collect();
    solve_rat_rows(rows, vectors.len(), target)
}

/// Rank of a list of rational vectors.
pub fn rational_rank(vectors: &[RatVector]) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    let n = vectors[0].len();
    rref(vectors.to_vec(), n).pivots.len()
}

pub(crate) fn dot_rat(a: &[BigRational], b: &[BigRational]) -> BigRational {
    a.iter().zip(b).fold(BigRational::zero(), |acc, (x, y)| acc + x * y)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn cone_matrix_solve() {
        let a = IntMatrix::from_rows(2, &[[2, -1], [-1, 2]]);
        let x = solve_rational(&a, &[r(1, 1), r(0, 1)]).unwrap();
        assert_eq!(x, vec![r(2, 3), r(1, 3)]);
    }

    #[test]
    fn identity_solve() {
        let a = IntMatrix::identity(3);
        let b = vec![r(1, 2), r(-7, 3), r(5, 1)];
        assert_eq!(solve_rational(&a, &b).unwrap(), b);
    }

    #[test]
    fn inconsistent_and_ambiguous() {
        let a = IntMatrix::from_rows(2, &[[1, 1], [2, 2]]);
        assert_eq!(
            solve_rational(&a, &[r(1, 1), r(3, 1)]),
            Err(LatticeError::NoSolution)
        );
        assert!(matches!(
            solve_rational(&a, &[r(1, 1), r(2, 1)]),
            Err(LatticeError::AmbiguousSolution { rank: 1, unknowns: 2 })
        ));
    }

    #[test]
    fn overdetermined_consistent() {
        let a = IntMatrix::from_rows(2, &[[1, 0], [0, 1], [1, 1]]);
        let x = solve_rational(&a, &[r(1, 2), r(1, 3), r(5, 6)]).unwrap();
        assert_eq!(x, vec![r(1, 2), r(1, 3)]);
    }
}
