use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{Chart, MirrorError};
use crate::series::{solve_fixed_point, Image, RatSeries};

/// `log q_a − log y_a = Σ_{i<m} Q_{ia} A_i(y)` and `τ_j = A_j(y)`, as series in `y`.
#[derive(Clone, Debug, PartialEq)]
pub struct ForwardMap {
    pub a_series: Vec<RatSeries>,
    pub log_ratios: Vec<RatSeries>,
    pub taus: Vec<RatSeries>,
}

/// `y_a = q_a·exp(logs[a])` and `y^{D_j^∨} = s[j]`, as series in `(q, τ)`.
#[derive(Clone, Debug, PartialEq)]
pub struct InverseMap {
    pub logs: Vec<RatSeries>,
    pub s: Vec<RatSeries>,
}

pub fn mirror_map_forward(chart: &Chart) -> Result<ForwardMap, MirrorError> {
    let a_series = chart.all_a_series()?;
    let m = chart.fan.m();
    let mut log_ratios = Vec::with_capacity(chart.r_prime());
    for a in 0..chart.r_prime() {
        let mut acc = RatSeries::zero(&chart.y_ring);
        for (i, ai) in a_series.iter().enumerate().take(m) {
            let q = chart.q_entry(i, a);
            if !q.is_zero() {
                acc = acc.add(&ai.scale(&q))?;
            }
        }
        log_ratios.push(acc);
    }
    let taus = a_series[m..].to_vec();
    Ok(ForwardMap {
        a_series,
        log_ratios,
        taus,
    })
}

impl InverseMap {
    /// Substitution data for series in the `y`-ring.
    pub fn images(&self, chart: &Chart) -> Vec<Image<BigRational>> {
        let n = chart.q_ring.nvars();
        let mut images = Vec::with_capacity(n);
        for (a, log) in self.logs.iter().enumerate() {
            let mut e = vec![BigRational::zero(); n];
            e[a] = BigRational::one();
            images.push(Image::MonomialUnit {
                monomial: e,
                log: log.clone(),
            });
        }
        images.extend(self.s.iter().cloned().map(Image::Series));
        images
    }

    /// `f(y(q, τ))`.
    pub fn compose(&self, chart: &Chart, f: &RatSeries) -> Result<RatSeries, MirrorError> {
        Ok(f.substitute(&chart.q_ring, &self.images(chart))?)
    }
}

/// Solves the mirror map for `y` by fixed-point iteration.
pub fn invert_mirror_map(chart: &Chart, forward: &ForwardMap) -> Result<InverseMap, MirrorError> {
    let rp = chart.r_prime();
    let e = forward.taus.len();
    let ring = &chart.q_ring;
    let tau: Vec<RatSeries> = (0..e).map(|k| RatSeries::variable(ring, rp + k)).collect();
    let mut initial: Vec<RatSeries> = vec![RatSeries::zero(ring); rp];
    initial.extend(tau.iter().cloned());
    let delta = BigRational::new(1.into(), (chart.modulus * chart.q_ring.degree_unit()).into());
    let m = chart.fan.m();
    let solution = solve_fixed_point::<_, MirrorError, _>(initial, &delta, |cur| {
        let inv = InverseMap {
            logs: cur[..rp].to_vec(),
            s: cur[rp..].to_vec(),
        };
        let images = inv.images(chart);
        let composed: Vec<RatSeries> = forward
            .a_series
            .iter()
            .map(|a| a.substitute(ring, &images))
            .collect::<Result<_, _>>()?;
        let mut next = Vec::with_capacity(rp + e);
        for a in 0..rp {
            let mut acc = RatSeries::zero(ring);
            for (i, ai) in composed.iter().enumerate().take(m) {
                let q = chart.q_entry(i, a);
                if !q.is_zero() {
                    acc = acc.sub(&ai.scale(&q))?;
                }
            }
            next.push(acc);
        }
        for k in 0..e {
            next.push(cur[rp + k].add(&tau[k])?.sub(&composed[m + k])?);
        }
        Ok(next)
    })?;
    Ok(InverseMap {
        logs: solution[..rp].to_vec(),
        s: solution[rp..].to_vec(),
    })
}

/// `forward(inverse(q, τ))` as series in `(q, τ)`: the `q_a` followed by the `τ_j`.
pub fn round_trip(chart: &Chart, forward: &ForwardMap, inverse: &InverseMap) -> Result<Vec<RatSeries>, MirrorError> {
    let ring = &chart.q_ring;
    let mut out = Vec::new();
    for (a, lr) in forward.log_ratios.iter().enumerate() {
        let total = inverse.logs[a].add(&inverse.compose(chart, lr)?)?;
        out.push(RatSeries::variable(ring, a).mul(&total.exp_series()?)?);
    }
    for t in &forward.taus {
        out.push(inverse.compose(chart, t)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::rat;
    use crate::stacky::examples::*;

    fn check_round_trip(chart: &Chart) -> InverseMap {
        let fwd = mirror_map_forward(chart).unwrap();
        let inv = invert_mirror_map(chart, &fwd).unwrap();
        let rt = round_trip(chart, &fwd, &inv).unwrap();
        for (k, s) in rt.iter().enumerate() {
            assert_eq!(*s, RatSeries::variable(&chart.q_ring, k));
        }
        inv
    }

    #[test]
    fn local_p1_inverse() {
        let chart = Chart::new(&local_p1_minus2(), None, rat(3, 1)).unwrap();
        let inv = check_round_trip(&chart);
        let y = RatSeries::variable(&chart.q_ring, 0).mul(&inv.logs[0].exp_series().unwrap()).unwrap();
        let expect = RatSeries::from_scaled_terms(&chart.q_ring, [(vec![1], rat(1, 1)), (vec![2], rat(-2, 1)), (vec![3], rat(3, 1))]);
        assert_eq!(y, expect);
    }

    #[test]
    fn round_trips() {
        check_round_trip(&Chart::new(&c2z3(), None, rat(4, 1)).unwrap());
        check_round_trip(&Chart::new(&c3z3(), None, rat(2, 1)).unwrap());
    }

    #[test]
    fn smooth_chart_is_trivial() {
        let c2 = crate::stacky::StackyFan::new(2, vec![vec![1, 0], vec![0, 1]], vec![vec![0, 1]], vec![]).unwrap();
        let chart = Chart::new(&c2, None, rat(3, 1)).unwrap();
        let fwd = mirror_map_forward(&chart).unwrap();
        assert!(fwd.a_series.iter().all(|a| a.is_zero()));
        let inv = invert_mirror_map(&chart, &fwd).unwrap();
        assert!(inv.logs.is_empty() && inv.s.is_empty());
    }
}
