use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use super::{invert_mirror_map, mirror_map_forward, Chart, InverseMap, MirrorError};
use crate::lattice::{self, solve_integer, to_rat, IntMatrix, RatVector};
use crate::series::{RatSeries, SeriesRing};
use crate::stacky::{DiskClassKind, StackyFan};
use crate::suborb::{build_suborbifold, Suborbifold};

/// Parameters of the ambient orbifold: `q_1..q_{r'}` for a nef basis of `H²`
/// and one `τ` per extra vector, all of weight one.
#[derive(Clone, Debug)]
pub struct ParentData {
    pub fan: StackyFan,
    /// Integer lifts `P̄_b ∈ Z^m` of the nef basis: `q`-exponent of a ray relation `α` is `P̄_b · α`.
    pub nef_lifts: Vec<Vec<BigInt>>,
    /// Ray relations dual to the nef basis.
    pub dual_classes: Vec<RatVector>,
}

impl ParentData {
    pub fn new(fan: &StackyFan) -> Result<Self, MirrorError> {
        let h2 = fan.h2_lattice();
        let pbar = fan.nef_basis()?;
        let nef_lifts = pbar
            .iter()
            .map(|p| solve_integer(&h2, p).expect("H2 lattice is saturated"))
            .collect();
        let rp = pbar.len();
        let pm = IntMatrix::from_big_rows(rp, pbar);
        let mut dual_classes = Vec::with_capacity(rp);
        for b in 0..rp {
            let mut unit = vec![BigRational::zero(); rp];
            unit[b] = BigRational::one();
            let x = lattice::solve_rational(&pm, &unit)?;
            dual_classes.push(h2.transpose().mul_rat_vec(&x));
        }
        Ok(ParentData {
            fan: fan.clone(),
            nef_lifts,
            dual_classes,
        })
    }

    pub fn r_prime(&self) -> usize {
        self.nef_lifts.len()
    }

    /// `q`-exponent of a relation among the parent vectors, which must not involve extras.
    pub fn q_exponent(&self, alpha: &[BigRational]) -> Result<RatVector, MirrorError> {
        let m = self.fan.m();
        if alpha.len() < m || alpha[m..].iter().any(|x| !x.is_zero()) {
            return Err(MirrorError::NotACurveClass(alpha.iter().map(|x| x.to_string()).collect()));
        }
        let sums: Vec<BigRational> = (0..self.fan.dim())
            .map(|c| {
                (0..m).fold(BigRational::zero(), |acc, i| {
                    acc + &alpha[i] * BigRational::from_integer(self.fan.rays()[i][c].into())
                })
            })
            .collect();
        if sums.iter().any(|x| !x.is_zero()) {
            return Err(MirrorError::NotACurveClass(alpha.iter().map(|x| x.to_string()).collect()));
        }
        Ok(self
            .nef_lifts
            .iter()
            .map(|l| l.iter().zip(alpha).fold(BigRational::zero(), |acc, (x, a)| acc + to_rat(x) * a))
            .collect())
    }

    /// The relation `Σ_b e_b γ̄_b` for a `q`-exponent `e`.
    pub fn curve_class(&self, q_exponent: &[BigRational]) -> RatVector {
        let mut out = vec![BigRational::zero(); self.fan.m_prime()];
        for (e, g) in q_exponent.iter().zip(&self.dual_classes) {
            for (o, x) in out.iter_mut().zip(g) {
                *o += e * x;
            }
        }
        out
    }

    pub fn tau_index(&self, point: &[i64]) -> Option<usize> {
        (self.fan.m()..self.fan.m_prime()).find(|&j| self.fan.vector(j) == point)
    }

    pub fn ring(&self, modulus: i64, truncation: BigRational) -> Result<Arc<SeriesRing>, MirrorError> {
        let mut names: Vec<String> = (1..=self.r_prime()).map(|a| format!("q{a}")).collect();
        if self.r_prime() == 1 {
            names[0] = "q".into();
        }
        for j in self.fan.m()..self.fan.m_prime() {
            let v = self.fan.vector(j);
            names.push(format!("t[{}]", v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")));
        }
        let w = vec![BigRational::one(); names.len()];
        Ok(SeriesRing::new(names, modulus, w, truncation)?)
    }
}

/// One value `n` of the generating function.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvariantEntry {
    /// `⟨D_i, α⟩` for every parent index.
    pub alpha: RatVector,
    pub insertions: BTreeMap<Vec<i64>, u32>,
    pub value: BigRational,
}

/// Generating function of a basic class, in the parent `(q, τ)`.
#[derive(Clone, Debug)]
pub struct DiskGeneratingFunction {
    pub class: DiskClassKind,
    pub suborbifold: Suborbifold,
    pub chart: Chart,
    pub inverse: InverseMap,
    /// The generating function in the chart's own variables.
    pub chart_series: RatSeries,
    pub series: RatSeries,
    pub parent: Arc<ParentData>,
}

fn parent_checks(fan: &StackyFan) -> Result<(), MirrorError> {
    if !fan.gorenstein_check().0 {
        return Err(MirrorError::NotGorenstein);
    }
    if !fan.semifano_check()?.semi_fano {
        return Err(MirrorError::NotSemiFano);
    }
    Ok(())
}

/// Runs the chart pipeline for a basic class and relabels into the parent.
pub fn disk_generating_function(
    fan: &StackyFan,
    class: &DiskClassKind,
    facet: Option<&[usize]>,
    truncation: &BigRational,
) -> Result<DiskGeneratingFunction, MirrorError> {
    parent_checks(fan)?;
    let parent = Arc::new(ParentData::new(fan)?);
    generating_function_with(&parent, class, facet, truncation)
}

fn generating_function_with(
    parent: &Arc<ParentData>,
    class: &DiskClassKind,
    facet: Option<&[usize]>,
    truncation: &BigRational,
) -> Result<DiskGeneratingFunction, MirrorError> {
    let sub = build_suborbifold(&parent.fan, class, facet)?;
    let probe = Chart::new(&sub.fan, None, BigRational::zero())?;
    let (push_q, ratio) = push_data(parent, &sub, &probe)?;
    let chart_t = truncation * &ratio;
    let chart = Chart::new(&sub.fan, Some(probe.seq.basis_p.clone()), chart_t)?;
    let forward = mirror_map_forward(&chart)?;
    let inverse = invert_mirror_map(&chart, &forward)?;

    let chart_series = match class {
        DiskClassKind::Smooth(_) => inverse
            .compose(&chart, &forward.a_series[sub.class_index])?
            .neg()
            .exp_series()?,
        DiskClassKind::Orbi(_) => {
            let jj = sub.class_index - sub.fan.m();
            let dual = &chart.duals[jj];
            let mut acc = RatSeries::zero(&chart.q_ring);
            for (i, c) in dual.cone.iter().zip(&dual.coefficients) {
                acc = acc.sub(&inverse.compose(&chart, &forward.a_series[*i])?.scale(c))?;
            }
            inverse.s[jj].mul(&acc.exp_series()?)?
        }
    };

    let ring = parent.ring(chart.modulus, truncation.clone())?;
    let series = relabel(parent, &sub, &chart, &push_q, &chart_series, &ring)?;
    Ok(DiskGeneratingFunction {
        class: class.clone(),
        suborbifold: sub,
        chart,
        inverse,
        chart_series,
        series,
        parent: parent.clone(),
    })
}

/// Parent `q`-exponents of the chart's `q_a`, and the largest ratio of chart
/// weight to parent degree over all chart variables.
fn push_data(parent: &ParentData, sub: &Suborbifold, chart: &Chart) -> Result<(Vec<RatVector>, BigRational), MirrorError> {
    let mut push_q = Vec::new();
    let mut ratio = BigRational::one();
    for a in 0..chart.r_prime() {
        let pushed = sub.push_curve_class(&chart.seq.gamma[a]);
        let e = parent.q_exponent(&pushed)?;
        let deg: BigRational = e.iter().sum();
        if !deg.is_positive() {
            return Err(MirrorError::NotACurveClass(pushed.iter().map(|x| x.to_string()).collect()));
        }
        let w = &chart.q_ring.weights()[a];
        ratio = ratio.max(w / &deg);
        push_q.push(e);
    }
    for w in &chart.q_ring.weights()[chart.r_prime()..] {
        ratio = ratio.max(w.clone());
    }
    Ok((push_q, ratio))
}

fn relabel(
    parent: &ParentData,
    sub: &Suborbifold,
    chart: &Chart,
    push_q: &[RatVector],
    series: &RatSeries,
    ring: &Arc<SeriesRing>,
) -> Result<RatSeries, MirrorError> {
    let rp = chart.r_prime();
    let prp = parent.r_prime();
    let mut out = RatSeries::zero(ring);
    for (e, c) in series.terms() {
        let mut pe = vec![BigRational::zero(); ring.nvars()];
        for (a, x) in e[..rp].iter().enumerate() {
            for (b, y) in push_q[a].iter().enumerate() {
                pe[b] += x * y;
            }
        }
        for (k, x) in e[rp..].iter().enumerate() {
            let parent_j = sub.index_map[sub.fan.m() + k];
            pe[prp + parent_j - parent.fan.m()] = x.clone();
        }
        out.add_monomial(&pe, c.clone())?;
    }
    Ok(out)
}

impl DiskGeneratingFunction {
    /// Box points of the chart's twisted sectors.
    pub fn chart_sectors(&self) -> Vec<Vec<i64>> {
        self.suborbifold.fan.extras().to_vec()
    }

    /// `n` for the class `β + α` with the given insertions: the coefficient
    /// of `q^α Π τ_ν^{a_ν}`.
    pub fn extract_invariant(
        &self,
        alpha: &[BigRational],
        insertions: &BTreeMap<Vec<i64>, u32>,
    ) -> Result<BigRational, MirrorError> {
        let ring = self.series.ring();
        let prp = self.parent.r_prime();
        let mut e = if alpha.iter().all(|x| x.is_zero()) {
            vec![BigRational::zero(); prp]
        } else {
            let mut padded = alpha.to_vec();
            padded.resize(self.parent.fan.m_prime(), BigRational::zero());
            self.parent.q_exponent(&padded)?
        };
        e.resize(ring.nvars(), BigRational::zero());
        let sectors = self.chart_sectors();
        for (nu, &k) in insertions {
            let j = self
                .parent
                .tau_index(nu)
                .ok_or_else(|| MirrorError::UnknownSector(nu.clone()))?;
            if !sectors.contains(nu) {
                return Err(MirrorError::UnsupportedInsertions(nu.clone()));
            }
            e[prp + j - self.parent.fan.m()] = BigRational::from_integer(k.into());
        }
        let deg = ring.weighted_degree(&e);
        if &deg > ring.truncation() {
            return Err(MirrorError::OrderTooLow {
                requested: deg.to_string(),
                available: ring.truncation().to_string(),
            });
        }
        Ok(self.series.coefficient(&e))
    }

    /// All nonzero coefficients, sorted by total degree and then lexicographically.
    pub fn entries(&self) -> Vec<InvariantEntry> {
        let prp = self.parent.r_prime();
        let m = self.parent.fan.m();
        let mut out: Vec<(BigRational, Vec<BigRational>, InvariantEntry)> = self
            .series
            .terms()
            .map(|(e, c)| {
                let alpha = self.parent.curve_class(&e[..prp]);
                let insertions = e[prp..]
                    .iter()
                    .enumerate()
                    .filter(|(_, x)| !x.is_zero())
                    .map(|(k, x)| {
                        (
                            self.parent.fan.vector(m + k).to_vec(),
                            x.to_integer().to_u32().expect("small multiplicity"),
                        )
                    })
                    .collect();
                let deg: BigRational = e.iter().sum();
                (
                    deg,
                    e.clone(),
                    InvariantEntry {
                        alpha,
                        insertions,
                        value: c.clone(),
                    },
                )
            })
            .collect();
        out.sort_by(|a, b| a.0.cmp(&b.0).then_with(|| a.1.cmp(&b.1)));
        out.into_iter().map(|x| x.2).collect()
    }
}

/// `W` as a map from boundary points `∂β` to `q^{area(β)}` times the generating function.
#[derive(Clone, Debug)]
pub struct PotentialData {
    pub cone: usize,
    pub r_prime: usize,
    pub ring: Arc<SeriesRing>,
    pub terms: BTreeMap<Vec<i64>, RatSeries>,
    pub areas: BTreeMap<Vec<i64>, RatVector>,
}

/// Basic classes: one per ray, one per extra vector.
fn basic_classes(fan: &StackyFan) -> Vec<DiskClassKind> {
    let mut out: Vec<DiskClassKind> = (0..fan.m()).map(DiskClassKind::Smooth).collect();
    out.extend(fan.extras().iter().map(|v| DiskClassKind::Orbi(v.clone())));
    out
}

fn areas(parent: &ParentData, cone: usize) -> Result<BTreeMap<Vec<i64>, RatVector>, MirrorError> {
    let fan = &parent.fan;
    let sigma = fan
        .max_cones()
        .get(cone)
        .ok_or_else(|| MirrorError::NormalizationConeInvalid(format!("no maximal cone {cone}")))?
        .clone();
    if sigma.len() != fan.dim() {
        return Err(MirrorError::NormalizationConeInvalid(format!("cone {cone} is not full-dimensional")));
    }
    let basis = IntMatrix::from_columns(fan.dim(), &fan.cone_vectors(&sigma));
    let rp = parent.r_prime();
    let mut ray_area = Vec::with_capacity(fan.m());
    for i in 0..fan.m() {
        if sigma.contains(&i) {
            ray_area.push(vec![BigRational::zero(); rp]);
            continue;
        }
        let c = lattice::solve_rational(&basis, &lattice::int_vec_to_rat(&fan.rays()[i]))?;
        let mut rel = vec![BigRational::zero(); fan.m_prime()];
        rel[i] = BigRational::one();
        for (k, x) in sigma.iter().zip(c) {
            rel[*k] -= x;
        }
        let area = parent.q_exponent(&rel)?;
        if area.iter().any(|x| x.is_negative()) {
            return Err(MirrorError::NormalizationConeInvalid(format!(
                "ray {i} would get negative area {area:?}"
            )));
        }
        ray_area.push(area);
    }
    let mut out = BTreeMap::new();
    for (i, a) in ray_area.iter().enumerate() {
        out.insert(fan.rays()[i].clone(), a.clone());
    }
    for b in fan.box_elements() {
        if !fan.extras().contains(&b.point) {
            continue;
        }
        let mut area = vec![BigRational::zero(); rp];
        for (k, t) in b.carrier.iter().zip(&b.coords) {
            for (x, y) in area.iter_mut().zip(&ray_area[*k]) {
                *x += t * y;
            }
        }
        out.insert(b.point, area);
    }
    Ok(out)
}

/// Assembles `W` with areas normalized to vanish on the rays of `max_cones[cone]`.
pub fn assemble_potential(
    fan: &StackyFan,
    cone: usize,
    truncation: &BigRational,
    parallel: bool,
) -> Result<PotentialData, MirrorError> {
    parent_checks(fan)?;
    let parent = Arc::new(ParentData::new(fan)?);
    let areas = areas(&parent, cone)?;
    let classes = basic_classes(fan);

    let run = |class: &DiskClassKind| -> Result<(Vec<i64>, RatSeries), MirrorError> {
        let g = generating_function_with(&parent, class, None, truncation)?;
        Ok((fan.boundary_point(class)?, g.series))
    };
    let results: Vec<Result<(Vec<i64>, RatSeries), MirrorError>> = if parallel {
        classes.par_iter().map(run).collect()
    } else {
        classes.iter().map(run).collect()
    };
    let results: Vec<(Vec<i64>, RatSeries)> = results.into_iter().collect::<Result<_, _>>()?;

    let mut modulus = BigInt::one();
    for a in areas.values().flatten() {
        modulus = modulus.lcm(a.denom());
    }
    for (_, g) in &results {
        modulus = modulus.lcm(&BigInt::from(g.ring().modulus()));
    }
    let modulus = modulus
        .to_i64()
        .ok_or_else(|| MirrorError::OffGrid("modulus too large".into()))?;
    let ring = parent.ring(modulus, truncation.clone())?;

    let mut terms = BTreeMap::new();
    for (point, g) in results {
        let area = &areas[&point];
        let mut out = RatSeries::zero(&ring);
        for (e, c) in g.terms() {
            let mut shifted = e.clone();
            for (x, a) in shifted.iter_mut().zip(area) {
                *x += a;
            }
            out.add_monomial(&shifted, c.clone())?;
        }
        terms.insert(point, out);
    }
    Ok(PotentialData {
        cone,
        r_prime: parent.r_prime(),
        ring,
        terms,
        areas,
    })
}

impl PotentialData {
    /// Specialization `τ = 0`.
    pub fn at_tau_zero(&self) -> BTreeMap<Vec<i64>, RatSeries> {
        let rp = self.r_prime;
        self.terms
            .iter()
            .map(|(k, s)| {
                let mut out = RatSeries::zero(&self.ring);
                for (e, c) in s.terms() {
                    if e[rp..].iter().all(|x| x.is_zero()) {
                        out.add_monomial(&e, c.clone()).expect("same ring");
                    }
                }
                (k.clone(), out)
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::rat;
    use crate::stacky::examples::*;

    fn t(x: i64) -> BigRational {
        rat(x, 1)
    }

    #[test]
    fn p2_classes_are_trivial() {
        for i in 0..3 {
            let g = disk_generating_function(&p2(), &DiskClassKind::Smooth(i), None, &t(4)).unwrap();
            assert_eq!(g.series, RatSeries::one(g.series.ring()));
        }
    }

    #[test]
    fn p2_potential() {
        let w = assemble_potential(&p2(), 0, &t(2), false).unwrap();
        assert_eq!(w.terms.len(), 3);
        let one = RatSeries::one(&w.ring);
        assert_eq!(w.terms[&vec![1, 0]], one);
        assert_eq!(w.terms[&vec![0, 1]], one);
        assert_eq!(w.terms[&vec![-1, -1]], RatSeries::variable(&w.ring, 0));
    }

    #[test]
    fn p2z3_orbi_leading_terms() {
        let f = p2z3();
        let g = disk_generating_function(&f, &DiskClassKind::Orbi(vec![0, -1]), None, &t(4)).unwrap();
        let mut ins = BTreeMap::new();
        ins.insert(vec![0, -1], 1u32);
        assert_eq!(g.extract_invariant(&[], &ins).unwrap(), t(1));
        let mut ins2 = BTreeMap::new();
        ins2.insert(vec![1, -1], 2u32);
        assert_eq!(g.extract_invariant(&[], &ins2).unwrap(), rat(1, 6));
        let mut ins3 = BTreeMap::new();
        ins3.insert(vec![0, -1], 2u32);
        ins3.insert(vec![1, -1], 1u32);
        assert_eq!(g.extract_invariant(&[], &ins3).unwrap(), rat(-1, 18));
        let mut bad = BTreeMap::new();
        bad.insert(vec![1, 0], 1u32);
        assert_eq!(g.extract_invariant(&[], &bad), Err(MirrorError::UnsupportedInsertions(vec![1, 0])));
        let mut high = BTreeMap::new();
        high.insert(vec![0, -1], 5u32);
        assert!(matches!(g.extract_invariant(&[], &high), Err(MirrorError::OrderTooLow { .. })));
    }

    #[test]
    fn p2z3_potential_areas() {
        let f = p2z3();
        let w = assemble_potential(&f, 0, &t(2), true).unwrap();
        assert_eq!(w.terms.len(), 9);
        assert_eq!(w.areas[&vec![-1, 2]], vec![t(1)]);
        assert_eq!(w.areas[&vec![1, 0]], vec![rat(1, 3)]);
        assert_eq!(w.areas[&vec![0, -1]], vec![t(0)]);
        let zero = w.at_tau_zero();
        assert_eq!(zero[&vec![-1, -1]], RatSeries::one(&w.ring));
        assert!(zero[&vec![0, -1]].is_zero());
    }

    #[test]
    fn hirzebruch_exceptional_correction() {
        let f = hirzebruch(2);
        let g = disk_generating_function(&f, &DiskClassKind::Smooth(1), None, &t(3)).unwrap();
        // exp(−A(y(q))) = 1 + q_E on O(−2) → P¹
        let entries = g.entries();
        assert_eq!(entries.len(), 2);
        assert_eq!(entries[0].value, t(1));
        assert_eq!(entries[1].value, t(1));
        let e: Vec<BigInt> = entries[1].alpha.iter().map(|x| x.to_integer()).collect();
        assert_eq!(e, vec![1, -2, 1, 0].into_iter().map(BigInt::from).collect::<Vec<_>>());
    }
}
