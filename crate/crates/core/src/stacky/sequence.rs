use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::{combinations, StackyError, StackyFan};
use crate::lattice::{self, cone_contains, integer_kernel, solve_integer, to_rat, IntMatrix, RatVector};

/// The fan sequence `0 → 𝕃 → Z^{m'} → N → 0` and a chosen basis of `𝕃^∨`.
///
/// Elements of `𝕃 ⊗ Q` are written as relation vectors in `Q^{m'}`, so that
/// `⟨D_i, d⟩` is simply the `i`-th entry. Elements of `𝕃^∨` are written in the
/// coordinates dual to `kernel_basis`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FanSequenceData {
    pub kernel_basis: IntMatrix,
    pub divisors: Vec<Vec<BigInt>>,
    pub basis_p: Vec<Vec<BigInt>>,
    /// `P_a ∈ Z^{m'}` with `Σ_i P_a[i] D_i = p_a`; pairs with relation vectors by dot product.
    pub p_lifts: Vec<Vec<BigInt>>,
    /// Dual basis `γ_a` as relation vectors.
    pub gamma: Vec<RatVector>,
    /// `q_matrix[i][a] = Q_{ia} = ⟨D_i, γ_a⟩`
    pub q_matrix: Vec<Vec<BigInt>>,
    pub r_prime: usize,
}

/// Data attached to an extra vector `b_j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualClass {
    pub index: usize,
    /// Minimal cone containing `b_j`.
    pub cone: Vec<usize>,
    /// Its complement `I_j`.
    pub anticone: Vec<usize>,
    /// `c_{ji}` for `i` in `cone`.
    pub coefficients: Vec<BigRational>,
    /// `D_j^∨` as a relation vector.
    pub class: RatVector,
}

impl FanSequenceData {
    pub fn r(&self) -> usize {
        self.basis_p.len()
    }

    /// `⟨p_a, d⟩` for a relation vector `d`.
    pub fn pair_p(&self, a: usize, d: &[BigRational]) -> BigRational {
        self.p_lifts[a]
            .iter()
            .zip(d)
            .fold(BigRational::zero(), |acc, (x, y)| acc + to_rat(x) * y)
    }

    /// Coordinates `d_a = ⟨p_a, d⟩`.
    pub fn coordinates(&self, d: &[BigRational]) -> Vec<BigRational> {
        (0..self.r()).map(|a| self.pair_p(a, d)).collect()
    }

    /// Relation vector of `Σ_a d_a γ_a`.
    pub fn relation(&self, coords: &[BigRational]) -> RatVector {
        self.q_matrix
            .iter()
            .map(|row| {
                row.iter()
                    .zip(coords)
                    .fold(BigRational::zero(), |acc, (q, d)| acc + to_rat(q) * d)
            })
            .collect()
    }
}

impl StackyFan {
    /// Complements of all cones, i.e. the anticones.
    pub fn anticones(&self) -> Vec<Vec<usize>> {
        let mut out: Vec<Vec<usize>> = self
            .cones()
            .into_iter()
            .map(|c| (0..self.m_prime()).filter(|i| c.binary_search(i).is_err()).collect())
            .collect();
        out.sort_by(|a: &Vec<usize>, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        out
    }

    pub fn kernel_basis(&self) -> IntMatrix {
        let phi = IntMatrix::from_columns(self.dim(), &self.all_vectors());
        integer_kernel(&phi)
    }

    /// `c_{ji}` and `D_j^∨` for an extra vector `b_j`.
    pub fn dual_class(&self, j: usize) -> Result<DualClass, StackyError> {
        if j < self.m() || j >= self.m_prime() {
            return Err(StackyError::NotAnExtraVector(j));
        }
        let b = self.vector(j);
        let (cone, coefficients) = self
            .minimal_cone_int(b)
            .ok_or_else(|| StackyError::NotInSupport(b.to_vec()))?;
        let mut class = vec![BigRational::zero(); self.m_prime()];
        class[j] = BigRational::one();
        for (i, c) in cone.iter().zip(&coefficients) {
            class[*i] = -c.clone();
        }
        let anticone = (0..self.m_prime()).filter(|i| cone.binary_search(i).is_err()).collect();
        Ok(DualClass {
            index: j,
            cone,
            anticone,
            coefficients,
            class,
        })
    }

    /// Integer relations among the rays alone, as rows in `Z^m`.
    pub fn h2_lattice(&self) -> IntMatrix {
        let phi = IntMatrix::from_columns(self.dim(), self.rays());
        integer_kernel(&phi)
    }

    /// An integral basis of `Hom(H₂, Z)` consisting of nef classes, in the
    /// coordinates dual to [`StackyFan::h2_lattice`].
    ///
    /// Candidates are small vectors pairing nonnegatively with every wall
    /// class; the first unimodular tuple in (norm, lexicographic) order wins.
    pub fn nef_basis(&self) -> Result<Vec<Vec<BigInt>>, StackyError> {
        let l0 = self.h2_lattice();
        let rp = l0.rows();
        if rp == 0 {
            return Ok(vec![]);
        }
        let walls: Vec<Vec<BigInt>> = self
            .wall_curve_classes()
            .into_iter()
            .map(|w| {
                let target: Vec<BigInt> = w.class[..self.m()].to_vec();
                solve_integer(&l0.transpose(), &target).expect("wall classes are ray relations")
            })
            .collect();
        for bound in [1i64, 2, 3, 4, 6] {
            let mut cands: Vec<Vec<i64>> = Vec::new();
            let side = (2 * bound + 1) as usize;
            let total = side.pow(rp as u32);
            for code in 0..total {
                let mut c = code;
                let v: Vec<i64> = (0..rp)
                    .map(|_| {
                        let x = (c % side) as i64 - bound;
                        c /= side;
                        x
                    })
                    .collect();
                if v.iter().all(|&x| x == 0) {
                    continue;
                }
                let nef = walls.iter().all(|w| {
                    let s: BigInt = w.iter().zip(&v).map(|(a, b)| a * BigInt::from(*b)).sum();
                    !s.is_negative()
                });
                if nef {
                    cands.push(v);
                }
            }
            cands.sort_by(|a, b| {
                let na: i64 = a.iter().map(|x| x.abs()).sum();
                let nb: i64 = b.iter().map(|x| x.abs()).sum();
                na.cmp(&nb).then_with(|| b.cmp(a))
            });
            cands.truncate(40);
            for combo in combinations(cands.len(), rp) {
                let rows: Vec<Vec<i64>> = combo.iter().map(|&i| cands[i].clone()).collect();
                if IntMatrix::from_rows(rp, &rows).determinant().abs().is_one() {
                    return Ok(rows
                        .into_iter()
                        .map(|r| r.into_iter().map(BigInt::from).collect())
                        .collect());
                }
            }
        }
        Err(StackyError::NoValidBasisFound("no unimodular nef basis of H^2 among small vectors".into()))
    }

    /// Kernel, divisor classes and a basis `{p_a}` of `𝕃^∨`.
    ///
    /// A supplied basis is validated; otherwise one is constructed: the last
    /// `m' − m` elements span the lattice cut out by the extra divisors inside
    /// `Σ_{j≥m} R_{≥0} D_j`, the first `r'` lift a nef basis of `H²`.
    pub fn fan_sequence(&self, basis_p: Option<Vec<Vec<BigInt>>>) -> Result<FanSequenceData, StackyError> {
        let k = self.kernel_basis();
        let r = k.rows();
        let divisors: Vec<Vec<BigInt>> = (0..self.m_prime()).map(|i| k.column(i)).collect();
        let e = self.m_prime() - self.m();
        let r_prime = r - e;
        let duals: Vec<DualClass> = (self.m()..self.m_prime())
            .map(|j| self.dual_class(j))
            .collect::<Result<_, _>>()?;
        // D_j^∨ in kernel coordinates
        let kt = k.transpose();
        let dual_coords: Vec<RatVector> = duals
            .iter()
            .map(|d| lattice::solve_rational(&kt, &d.class))
            .collect::<Result<_, _>>()?;

        let basis = match basis_p {
            Some(b) => b,
            None => self.search_basis(&k, &divisors, &dual_coords, r_prime)?,
        };
        self.check_basis(&k, &divisors, &basis, r_prime)
    }

    fn search_basis(
        &self,
        k: &IntMatrix,
        divisors: &[Vec<BigInt>],
        dual_coords: &[RatVector],
        r_prime: usize,
    ) -> Result<Vec<Vec<BigInt>>, StackyError> {
        let r = k.rows();
        let m = self.m();
        let extra_divs: Vec<Vec<BigInt>> = divisors[m..].to_vec();
        let e = extra_divs.len();
        let l0 = if e == 0 {
            IntMatrix::identity(r)
        } else {
            integer_kernel(&IntMatrix::from_big_rows(r, extra_divs.clone()))
        };
        let v = integer_kernel(&l0);
        debug_assert_eq!(v.rows(), e);

        let mut upper = self.extra_basis(&v, &extra_divs)?;

        let mut lower: Vec<Vec<BigInt>> = Vec::new();
        if r_prime > 0 {
            let pbar = self.nef_basis()?;
            // coordinates of the chart H₂ basis inside the kernel basis of 𝕃
            let h2 = self.h2_lattice();
            let h2_in_l: Vec<Vec<BigInt>> = (0..h2.rows())
                .map(|i| {
                    let mut rel = h2.row_vec(i);
                    rel.resize(self.m_prime(), BigInt::zero());
                    solve_integer(&k.transpose(), &rel).expect("ray relations lie in the kernel")
                })
                .collect();
            let h2m = IntMatrix::from_big_rows(r, h2_in_l);
            for pb in pbar {
                let mut u = solve_integer(&h2m, &pb).ok_or_else(|| {
                    StackyError::NoValidBasisFound("nef class does not lift integrally".into())
                })?;
                for (jd, dv) in dual_coords.iter().enumerate() {
                    let pairing = u
                        .iter()
                        .zip(dv)
                        .fold(BigRational::zero(), |acc, (a, b)| acc + to_rat(a) * b);
                    let shift = (-pairing).ceil().to_integer();
                    for (x, d) in u.iter_mut().zip(&extra_divs[jd]) {
                        *x += &shift * d;
                    }
                }
                lower.push(u);
            }
        }
        lower.append(&mut upper);
        Ok(lower)
    }

    /// A basis of the lattice `V = Ann(𝕃_0)` inside `cone(D_j : j ≥ m)`.
    ///
    /// Prefers short interior points of the parallelepiped; falls back to the
    /// Hermite basis in cone coordinates, which is always nonnegative.
    fn extra_basis(&self, v: &IntMatrix, extra_divs: &[Vec<BigInt>]) -> Result<Vec<Vec<BigInt>>, StackyError> {
        let e = extra_divs.len();
        if e == 0 {
            return Ok(vec![]);
        }
        let vt = v.transpose();
        let in_v: Vec<Vec<i64>> = extra_divs
            .iter()
            .map(|d| {
                solve_integer(&vt, d)
                    .expect("extra divisors annihilate the H2 lattice")
                    .iter()
                    .map(|x| i64::try_from(x).expect("small coordinates"))
                    .collect()
            })
            .collect();
        let to_kernel = |c: &[BigInt]| vt.mul_vec(c);

        let g = IntMatrix::from_columns(e, &in_v);
        let det = g.determinant().abs();
        if det <= BigInt::from(512) {
            let mut cands: Vec<(Vec<i64>, Vec<BigRational>)> = super::parallelepiped_points(e, &in_v)
                .into_iter()
                .filter(|(p, _)| p.iter().any(|&x| x != 0))
                .collect();
            for (j, d) in in_v.iter().enumerate() {
                let mut t = vec![BigRational::zero(); e];
                t[j] = BigRational::one();
                cands.push((d.clone(), t));
            }
            cands.sort_by(|a, b| {
                let na: i64 = a.0.iter().map(|x| x.abs()).sum();
                let nb: i64 = b.0.iter().map(|x| x.abs()).sum();
                na.cmp(&nb).then_with(|| b.1.cmp(&a.1))
            });
            cands.truncate(24);
            for combo in combinations(cands.len(), e) {
                let rows: Vec<Vec<i64>> = combo.iter().map(|&i| cands[i].0.clone()).collect();
                if IntMatrix::from_rows(e, &rows).determinant().abs().is_one() {
                    return Ok(rows
                        .iter()
                        .map(|r| to_kernel(&r.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>()))
                        .collect());
                }
            }
        }
        // Hermite fallback: the lattice {t : Σ t_j D_j ∈ V} scaled by det
        let adj_rows: Vec<Vec<BigInt>> = (0..e)
            .map(|c| {
                let mut unit = vec![BigRational::zero(); e];
                unit[c] = BigRational::one();
                let t = lattice::solve_rational(&g, &unit).expect("generators are independent");
                t.iter().map(|x| (x * to_rat(&det)).to_integer()).collect()
            })
            .collect();
        let (h, _) = lattice::hermite_normal_form(&IntMatrix::from_big_rows(e, adj_rows));
        Ok((0..e)
            .map(|i| {
                let t = h.row(i);
                let c: Vec<BigInt> = (0..e)
                    .map(|row| {
                        let s = (0..e).fold(BigInt::zero(), |acc, j| acc + g.get(row, j) * &t[j]);
                        s / &det
                    })
                    .collect();
                to_kernel(&c)
            })
            .collect())
    }

    fn check_basis(
        &self,
        k: &IntMatrix,
        divisors: &[Vec<BigInt>],
        basis: &[Vec<BigInt>],
        r_prime: usize,
    ) -> Result<FanSequenceData, StackyError> {
        let r = k.rows();
        let fail = |msg: String| Err(StackyError::NoValidBasisFound(msg));
        if basis.len() != r || basis.iter().any(|p| p.len() != r) {
            return fail(format!("expected {r} vectors of length {r}"));
        }
        let pm = IntMatrix::from_big_rows(r, basis.to_vec());
        if !pm.determinant().abs().is_one() {
            return fail("basis is not unimodular".into());
        }
        let div_rat: Vec<RatVector> = divisors
            .iter()
            .map(|d| d.iter().map(to_rat).collect())
            .collect();
        for (a, p) in basis.iter().enumerate() {
            let prat: RatVector = p.iter().map(to_rat).collect();
            for c in self.max_cones() {
                let gens: Vec<RatVector> = (0..self.m_prime())
                    .filter(|i| c.binary_search(i).is_err())
                    .map(|i| div_rat[i].clone())
                    .collect();
                if cone_contains(&gens, &prat).is_none() {
                    return fail(format!("p_{} lies outside the closed extended Kähler cone (anticone of {c:?})", a + 1));
                }
            }
            if a >= r_prime && cone_contains(&div_rat[self.m()..], &prat).is_none() {
                return fail(format!("p_{} is not in the cone of the extra divisors", a + 1));
            }
        }
        // γ_a: columns of P^{-1} in kernel coordinates, mapped to relation vectors
        let kt = k.transpose();
        let mut gamma = Vec::with_capacity(r);
        for a in 0..r {
            let mut unit = vec![BigRational::zero(); r];
            unit[a] = BigRational::one();
            let x = lattice::solve_rational(&pm, &unit)?;
            gamma.push(kt.mul_rat_vec(&x));
        }
        let q_matrix: Vec<Vec<BigInt>> = (0..self.m_prime())
            .map(|i| gamma.iter().map(|g| g[i].to_integer()).collect())
            .collect();
        for (i, row) in q_matrix.iter().enumerate().skip(self.m()) {
            if row[..r_prime].iter().any(|x| !x.is_zero()) {
                return fail(format!("Q_{{{i}a}} is nonzero for some a ≤ r'"));
            }
        }
        let p_lifts = basis
            .iter()
            .map(|p| solve_integer(k, p).expect("divisors generate the dual lattice"))
            .collect();
        Ok(FanSequenceData {
            kernel_basis: k.clone(),
            divisors: divisors.to_vec(),
            basis_p: basis.to_vec(),
            p_lifts,
            gamma,
            q_matrix,
            r_prime,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::super::examples::*;
    use super::*;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| x.into()).collect()
    }

    #[test]
    fn p1_sequence() {
        let s = p1().fan_sequence(None).unwrap();
        assert_eq!(s.kernel_basis, IntMatrix::from_rows(2, &[[1, 1]]));
        assert_eq!(s.divisors, vec![big(&[1]), big(&[1])]);
        assert_eq!(s.basis_p, vec![big(&[1])]);
        assert_eq!(s.r_prime, 1);
    }

    #[test]
    fn anticones_of_p1_and_c2z3() {
        assert_eq!(p1().anticones(), vec![vec![0], vec![1], vec![0, 1]]);
        assert_eq!(
            c2z3().anticones(),
            vec![vec![2, 3], vec![0, 2, 3], vec![1, 2, 3], vec![0, 1, 2, 3]]
        );
    }

    #[test]
    fn c2z3_sequence() {
        let f = c2z3();
        let s = f.fan_sequence(None).unwrap();
        for (row, l) in s.kernel_basis.row_vecs().iter().enumerate() {
            for i in 0..4 {
                assert_eq!(s.divisors[i][row], l[i]);
            }
        }
        // the index-3 relations lie in the kernel
        for rel in [[-2i64, -1, 3, 0], [-1, -2, 0, 3]] {
            assert!(solve_integer(&s.kernel_basis.transpose(), &big(&rel)).is_some());
        }
        assert_eq!(s.r_prime, 0);
        let d2 = f.dual_class(2).unwrap();
        assert_eq!(d2.coefficients, vec![r(2, 3), r(1, 3)]);
        assert_eq!(d2.class, vec![r(-2, 3), r(-1, 3), r(1, 1), r(0, 1)]);
        let d3 = f.dual_class(3).unwrap();
        assert_eq!(d3.coefficients, vec![r(1, 3), r(2, 3)]);
        // both extras get weight Σ_a ⟨p_a, D_j^∨⟩ = 1
        for d in [&d2, &d3] {
            let w: BigRational = s.coordinates(&d.class).into_iter().sum();
            assert_eq!(w, r(1, 1));
        }
        assert_eq!(f.dual_class(0), Err(StackyError::NotAnExtraVector(0)));
    }

    #[test]
    fn q_matrix_reproduces_divisors() {
        for f in [c2z3(), local_p1_minus2(), c3z3(), p1(), p2z3()] {
            let s = f.fan_sequence(None).unwrap();
            for i in 0..f.m_prime() {
                let mut acc = vec![BigInt::zero(); s.r()];
                for a in 0..s.r() {
                    for (x, p) in acc.iter_mut().zip(&s.basis_p[a]) {
                        *x += &s.q_matrix[i][a] * p;
                    }
                }
                assert_eq!(acc, s.divisors[i]);
            }
            for a in 0..s.r() {
                for b in 0..s.r() {
                    let expect = if a == b { r(1, 1) } else { r(0, 1) };
                    assert_eq!(s.pair_p(a, &s.gamma[b]), expect);
                }
            }
        }
    }

    #[test]
    fn nu_of_dual_class_is_the_extra_vector() {
        for f in [c2z3(), c3z3(), p2z3()] {
            for j in f.m()..f.m_prime() {
                let d = f.dual_class(j).unwrap();
                let mut nu = vec![0i64; f.dim()];
                for (i, x) in d.class.iter().enumerate() {
                    let c = i64::try_from(x.ceil().to_integer()).unwrap();
                    for (n, b) in nu.iter_mut().zip(f.vector(i)) {
                        *n += c * b;
                    }
                }
                assert_eq!(nu, f.vector(j));
            }
        }
    }

    #[test]
    fn supplied_basis_outside_cone_rejected() {
        let f = p1();
        let res = f.fan_sequence(Some(vec![big(&[-1])]));
        assert!(matches!(res, Err(StackyError::NoValidBasisFound(_))));
    }

    #[test]
    fn hirzebruch_nef_basis() {
        let f = hirzebruch(2);
        let pbar = f.nef_basis().unwrap();
        assert_eq!(pbar.len(), 2);
        for w in f.wall_curve_classes() {
            let target: Vec<BigInt> = w.class[..4].to_vec();
            let x = solve_integer(&f.h2_lattice().transpose(), &target).unwrap();
            for p in &pbar {
                let s: BigInt = p.iter().zip(&x).map(|(a, b)| a * b).sum();
                assert!(!s.is_negative());
            }
        }
    }
}
