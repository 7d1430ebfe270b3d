use std::collections::HashMap;
use std::sync::Arc;

use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use super::{Coefficient, SeriesError, SeriesRing, TruncatedSeries};

/// Replacement for one variable in [`TruncatedSeries::substitute`].
#[derive(Clone, Debug)]
pub enum Image<C: Coefficient> {
    /// Any series; the replaced variable must occur with integer exponents only.
    Series(TruncatedSeries<C>),
    /// `y^monomial · exp(log)` where `log` has no constant term. Rational
    /// powers are taken as `y^{h·monomial} · exp(h·log)`.
    MonomialUnit {
        monomial: Vec<BigRational>,
        log: TruncatedSeries<C>,
    },
}

impl<C: Coefficient> Image<C> {
    /// `y^monomial` with no unit factor.
    pub fn monomial(target: &Arc<SeriesRing>, monomial: Vec<BigRational>) -> Self {
        Image::MonomialUnit {
            monomial,
            log: TruncatedSeries::zero(target),
        }
    }
}

impl<C: Coefficient> TruncatedSeries<C> {
    /// Replaces every variable by its image, producing a series in `target`.
    ///
    /// Each image must have weighted degree at least the weight of the
    /// variable it replaces, so that no truncated term could have contributed.
    pub fn substitute(&self, target: &Arc<SeriesRing>, images: &[Image<C>]) -> Result<Self, SeriesError> {
        let src = &self.ring;
        if images.len() != src.nvars() {
            return Err(SeriesError::ImageCount {
                expected: src.nvars(),
                got: images.len(),
            });
        }
        let mut mono_scaled: Vec<Option<Vec<i64>>> = Vec::with_capacity(images.len());
        for (var, img) in images.iter().enumerate() {
            let w = &src.weights()[var];
            match img {
                Image::Series(g) => {
                    if !Arc::ptr_eq(g.ring(), target) && **g.ring() != **target {
                        return Err(SeriesError::RingMismatch);
                    }
                    if g.valuation().is_some_and(|v| v < *w) {
                        return Err(SeriesError::DegreeDecreasingSubstitution { var });
                    }
                    mono_scaled.push(None);
                }
                Image::MonomialUnit { monomial, log } => {
                    if !Arc::ptr_eq(log.ring(), target) && **log.ring() != **target {
                        return Err(SeriesError::RingMismatch);
                    }
                    if !log.constant_term().is_zero() {
                        return Err(SeriesError::NonzeroConstantTerm);
                    }
                    if target.weighted_degree(monomial) < *w {
                        return Err(SeriesError::DegreeDecreasingSubstitution { var });
                    }
                    let m = BigRational::from_integer(target.modulus().into());
                    let mut scaled = Vec::with_capacity(monomial.len());
                    for x in monomial {
                        let s = x * &m;
                        match s.is_integer().then(|| s.to_integer().to_i64()).flatten() {
                            Some(v) => scaled.push(v),
                            None => {
                                return Err(SeriesError::ExponentOffLattice {
                                    var,
                                    exponent: x.clone(),
                                })
                            }
                        }
                    }
                    mono_scaled.push(Some(scaled));
                }
            }
        }

        let ms = src.modulus();
        let mut cache: HashMap<(usize, i64), TruncatedSeries<C>> = HashMap::new();
        let mut out = Self::zero(target);
        for (e, c) in &self.terms {
            let mut acc = Self::constant(target, c.clone());
            for (var, &x) in e.iter().enumerate() {
                if x == 0 {
                    continue;
                }
                let factor = match cache.get(&(var, x)) {
                    Some(f) => f.clone(),
                    None => {
                        let f = power_of_image(target, &images[var], mono_scaled[var].as_deref(), var, x, ms)?;
                        cache.insert((var, x), f.clone());
                        f
                    }
                };
                acc = acc.mul(&factor)?;
                if acc.is_zero() {
                    break;
                }
            }
            for (k, v) in acc.terms {
                out.add_term(k, v);
            }
        }
        Ok(out)
    }
}

/// Image raised to the power `x / ms`.
fn power_of_image<C: Coefficient>(
    target: &Arc<SeriesRing>,
    img: &Image<C>,
    mono: Option<&[i64]>,
    var: usize,
    x: i64,
    ms: i64,
) -> Result<TruncatedSeries<C>, SeriesError> {
    let h = BigRational::new(x.into(), ms.into());
    match img {
        Image::Series(g) => {
            if x % ms != 0 {
                return Err(SeriesError::ExponentOffLattice { var, exponent: h });
            }
            let k = u32::try_from(x / ms).map_err(|_| SeriesError::ExponentOffLattice { var, exponent: h })?;
            Ok(g.pow(k))
        }
        Image::MonomialUnit { log, .. } => {
            let mono = mono.expect("scaled monomial present");
            let mut e = Vec::with_capacity(mono.len());
            for &mk in mono {
                let num = mk * x;
                if !num.is_multiple_of(&ms) {
                    return Err(SeriesError::ExponentOffLattice { var, exponent: h });
                }
                e.push(num / ms);
            }
            let unit = log.scale(&h).exp_series()?;
            let m = TruncatedSeries::from_scaled_terms(target, [(e, C::one())]);
            m.mul(&unit)
        }
    }
}

/// Iterates `y ← step(y)` until a fixed point modulo the truncation order.
///
/// `delta` is the guaranteed gain in agreement order per round; the solver
/// gives up after `⌈T/δ⌉ + 2` rounds.
pub fn solve_fixed_point<C, E, F>(
    initial: Vec<TruncatedSeries<C>>,
    delta: &BigRational,
    mut step: F,
) -> Result<Vec<TruncatedSeries<C>>, E>
where
    C: Coefficient,
    E: From<SeriesError>,
    F: FnMut(&[TruncatedSeries<C>]) -> Result<Vec<TruncatedSeries<C>>, E>,
{
    let Some(first) = initial.first() else {
        return Ok(initial);
    };
    if delta <= &BigRational::zero() {
        return Err(SeriesError::InvalidRing("fixed point gain must be positive".into()).into());
    }
    let t = first.ring().truncation().clone();
    let rounds = (t / delta).ceil().to_integer().to_usize().unwrap_or(usize::MAX - 2) + 2;
    let mut y = initial;
    for _ in 0..rounds {
        let next = step(&y)?;
        if next == y {
            return Ok(y);
        }
        y = next;
    }
    Err(SeriesError::NoConvergence { iterations: rounds }.into())
}

#[cfg(test)]
mod tests {
    use super::super::{rat, RatSeries};
    use super::*;

    #[test]
    fn identity_substitution() {
        let r = SeriesRing::uniform(vec!["a".into(), "b".into()], 2, rat(3, 1)).unwrap();
        let f = RatSeries::from_scaled_terms(&r, [(vec![1, 2], rat(3, 1)), (vec![4, 0], rat(-1, 2)), (vec![0, 0], rat(1, 1))]);
        let images = vec![
            Image::monomial(&r, vec![rat(1, 1), rat(0, 1)]),
            Image::monomial(&r, vec![rat(0, 1), rat(1, 1)]),
        ];
        assert_eq!(f.substitute(&r, &images).unwrap(), f);
    }

    #[test]
    fn square_of_scaled_unit() {
        let src = SeriesRing::uniform(vec!["y".into()], 1, rat(4, 1)).unwrap();
        let dst = SeriesRing::new(vec!["q".into(), "t".into()], 1, vec![rat(1, 1), rat(1, 1)], rat(4, 1)).unwrap();
        let f = RatSeries::variable(&src, 0).pow(2);
        let img = RatSeries::variable(&dst, 0)
            .mul(&RatSeries::one(&dst).add(&RatSeries::variable(&dst, 1)).unwrap())
            .unwrap();
        let got = f.substitute(&dst, &[Image::Series(img)]).unwrap();
        let expect = RatSeries::from_scaled_terms(&dst, [(vec![2, 0], rat(1, 1)), (vec![2, 1], rat(2, 1)), (vec![2, 2], rat(1, 1))]);
        assert_eq!(got, expect);
    }

    #[test]
    fn fractional_power_of_monomial_unit() {
        let src = SeriesRing::uniform(vec!["y".into()], 3, rat(2, 1)).unwrap();
        let dst = SeriesRing::uniform(vec!["q".into()], 3, rat(2, 1)).unwrap();
        let f = RatSeries::monomial(&src, &[rat(1, 3)], rat(1, 1)).unwrap();
        // y = q·exp(q)  ⇒  y^{1/3} = q^{1/3}·exp(q/3)
        let img = Image::MonomialUnit {
            monomial: vec![rat(1, 1)],
            log: RatSeries::variable(&dst, 0),
        };
        let got = f.substitute(&dst, &[img]).unwrap();
        assert_eq!(got.coefficient(&[rat(1, 3)]), rat(1, 1));
        assert_eq!(got.coefficient(&[rat(4, 3)]), rat(1, 3));
        assert_eq!(got.coefficient(&[rat(7, 3)]), rat(0, 1));
        assert_eq!(got.len(), 2);
    }

    #[test]
    fn degree_decreasing_rejected() {
        let src = SeriesRing::new(vec!["y".into()], 1, vec![rat(2, 1)], rat(4, 1)).unwrap();
        let dst = SeriesRing::uniform(vec!["q".into()], 1, rat(4, 1)).unwrap();
        let f = RatSeries::variable(&src, 0);
        let err = f.substitute(&dst, &[Image::Series(RatSeries::variable(&dst, 0))]);
        assert_eq!(err, Err(SeriesError::DegreeDecreasingSubstitution { var: 0 }));
    }

    #[test]
    fn constant_fixed_point() {
        let r = SeriesRing::uniform(vec!["q".into()], 1, rat(5, 1)).unwrap();
        let c = RatSeries::from_scaled_terms(&r, [(vec![0], rat(2, 1)), (vec![3], rat(1, 7))]);
        let target = c.clone();
        let y = solve_fixed_point::<_, SeriesError, _>(vec![RatSeries::zero(&r)], &rat(1, 1), |_| Ok(vec![target.clone()])).unwrap();
        assert_eq!(y, vec![c]);
    }

    #[test]
    fn scalar_lambert_fixed_point() {
        // y = q·exp(−y): coefficients (−k)^{k−1}/k!
        let r = SeriesRing::uniform(vec!["q".into()], 1, rat(3, 1)).unwrap();
        let q = RatSeries::variable(&r, 0);
        let y = solve_fixed_point::<_, SeriesError, _>(vec![RatSeries::zero(&r)], &rat(1, 1), |y| {
            Ok(vec![q.mul(&y[0].neg().exp_series()?)?])
        })
        .unwrap();
        let expect = RatSeries::from_scaled_terms(&r, [(vec![1], rat(1, 1)), (vec![2], rat(-1, 1)), (vec![3], rat(3, 2))]);
        assert_eq!(y[0], expect);
    }

    #[test]
    fn non_contraction_reports_no_convergence() {
        let r = SeriesRing::uniform(vec!["q".into()], 1, rat(2, 1)).unwrap();
        let one = RatSeries::one(&r);
        let res = solve_fixed_point::<_, SeriesError, _>(vec![RatSeries::zero(&r)], &rat(1, 1), |y| Ok(vec![y[0].add(&one)?]));
        assert!(matches!(res, Err(SeriesError::NoConvergence { .. })));
    }
}
