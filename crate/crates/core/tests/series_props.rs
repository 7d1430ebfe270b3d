use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use orbidisk::series::{rat, solve_fixed_point, Image, RatSeries, SeriesError, SeriesRing};
use proptest::prelude::*;

fn ring() -> Arc<SeriesRing> {
    SeriesRing::new(vec!["a".into(), "b".into()], 2, vec![rat(1, 1), rat(3, 2)], rat(3, 1)).unwrap()
}

fn series(constant: bool) -> impl Strategy<Value = RatSeries> {
    prop::collection::vec((0i64..7, 0i64..5, -6i64..7, 1i64..5), 0..7).prop_map(move |terms| {
        let r = ring();
        let terms = terms
            .into_iter()
            .filter(|(e0, e1, _, _)| constant || e0 + e1 > 0)
            .map(|(e0, e1, n, d)| (vec![e0, e1], rat(n, d)));
        RatSeries::from_scaled_terms(&r, terms)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_laws(f in series(true), g in series(true), h in series(true)) {
        prop_assert_eq!(f.add(&g).unwrap(), g.add(&f).unwrap());
        prop_assert_eq!(f.mul(&g).unwrap(), g.mul(&f).unwrap());
        prop_assert_eq!(f.add(&g).unwrap().add(&h).unwrap(), f.add(&g.add(&h).unwrap()).unwrap());
        prop_assert_eq!(f.mul(&g).unwrap().mul(&h).unwrap(), f.mul(&g.mul(&h).unwrap()).unwrap());
        prop_assert_eq!(
            f.mul(&g.add(&h).unwrap()).unwrap(),
            f.mul(&g).unwrap().add(&f.mul(&h).unwrap()).unwrap()
        );
        prop_assert!(f.add(&f.neg()).unwrap().is_zero());
        prop_assert_eq!(f.mul(&RatSeries::one(f.ring())).unwrap(), f.clone());
        prop_assert_eq!(f.sub(&g).unwrap(), f.add(&g.neg()).unwrap());
        prop_assert_eq!(f.pow(3), f.mul(&f).unwrap().mul(&f).unwrap());
    }

    #[test]
    fn exp_log_inverse(f in series(false), g in series(false)) {
        let ef = f.exp_series().unwrap();
        let one = RatSeries::one(f.ring());
        prop_assert_eq!(ef.sub(&one).unwrap().log1p().unwrap(), f.clone());
        prop_assert_eq!(f.log1p().unwrap().exp_series().unwrap(), one.add(&f).unwrap());
        prop_assert_eq!(
            ef.mul(&g.exp_series().unwrap()).unwrap(),
            f.add(&g).unwrap().exp_series().unwrap()
        );
    }

    #[test]
    fn substitution_is_a_homomorphism(f in series(true), g in series(true), u in series(false), v in series(false)) {
        let r = ring();
        let x = RatSeries::variable(&r, 0);
        let a = x.add(&x.mul(&u).unwrap()).unwrap();
        let b = RatSeries::variable(&r, 1).add(&v.mul(&x).unwrap()).unwrap();
        // integer exponents only for plain series images
        let f = integral_part(&f);
        let g = integral_part(&g);
        let images = [Image::Series(a), Image::Series(b)];
        let fg = f.mul(&g).unwrap().substitute(&r, &images).unwrap();
        let prod = f.substitute(&r, &images).unwrap().mul(&g.substitute(&r, &images).unwrap()).unwrap();
        prop_assert_eq!(fg, prod);
    }
}

fn integral_part(f: &RatSeries) -> RatSeries {
    let r = f.ring().clone();
    RatSeries::from_scaled_terms(
        &r,
        f.scaled_terms()
            .filter(|(e, _)| e.iter().all(|x| x % 2 == 0))
            .map(|(e, c)| (e.clone(), c.clone())),
    )
}

#[test]
fn lambert_fixed_point() {
    let r = SeriesRing::uniform(vec!["q".into()], 1, rat(6, 1)).unwrap();
    let q = RatSeries::variable(&r, 0);
    let y = solve_fixed_point::<_, SeriesError, _>(vec![RatSeries::zero(&r)], &rat(1, 1), |cur| {
        Ok(vec![q.mul(&cur[0].neg().exp_series()?)?])
    })
    .unwrap()
    .remove(0);
    let mut fact = BigInt::one();
    for k in 1..=6i64 {
        fact *= k;
        let expect = BigRational::new(BigInt::from(-k).pow((k - 1) as u32), fact.clone());
        assert_eq!(y.coefficient(&[rat(k, 1)]), expect, "coefficient of q^{k}");
    }
    assert!(y.constant_term().is_zero());
    assert_eq!(y.len(), 6);
}

#[test]
fn fractional_monomial_image() {
    let r = SeriesRing::uniform(vec!["q".into()], 3, rat(2, 1)).unwrap();
    let log = RatSeries::variable(&r, 0).scale(&rat(3, 1));
    let img = Image::MonomialUnit { monomial: vec![rat(1, 1)], log };
    let cube_root = RatSeries::monomial(&r, &[rat(1, 3)], rat(1, 1)).unwrap();
    let got = cube_root.substitute(&r, &[img]).unwrap();
    // q^{1/3} exp(q) truncated at weighted degree 2
    let expect = RatSeries::from_scaled_terms(&r, [(vec![1], rat(1, 1)), (vec![4], rat(1, 1))]);
    assert_eq!(got, expect);
}
