use num_rational::BigRational;

use super::{Coefficient, SeriesError, TruncatedSeries};

impl<C: Coefficient> TruncatedSeries<C> {
    fn check_ring(&self, other: &Self) -> Result<(), SeriesError> {
        if std::sync::Arc::ptr_eq(&self.ring, &other.ring) || *self.ring == *other.ring {
            Ok(())
        } else {
            Err(SeriesError::RingMismatch)
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, SeriesError> {
        self.check_ring(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, SeriesError> {
        self.check_ring(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.neg_ref());
        }
        Ok(out)
    }

    pub fn neg(&self) -> Self {
        self.map_coefficients(C::neg_ref)
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        self.map_coefficients(|c| c.scale(r))
    }

    pub fn scale_by(&self, k: &C) -> Self {
        self.map_coefficients(|c| c.mul_ref(k))
    }

    pub fn mul(&self, other: &Self) -> Result<Self, SeriesError> {
        self.check_ring(other)?;
        let cap = self.ring.cap();
        let a = self.graded();
        let b = other.graded();
        let mut out = Self::zero(&self.ring);
        for (da, ea, ca) in &a {
            for (db, eb, cb) in &b {
                if da + db > cap {
                    break;
                }
                let e: Vec<i64> = ea.iter().zip(eb.iter()).map(|(x, y)| x + y).collect();
                out.add_term(e, ca.mul_ref(cb));
            }
        }
        Ok(out)
    }

    fn graded(&self) -> Vec<(i64, &Vec<i64>, &C)> {
        let mut v: Vec<(i64, &Vec<i64>, &C)> =
            self.terms.iter().map(|(e, c)| (self.ring.scaled_degree(e), e, c)).collect();
        v.sort_by_key(|t| t.0);
        v
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut result = Self::one(&self.ring);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                result = result.mul(&base).expect("same ring");
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base).expect("same ring");
            }
        }
        result
    }

    /// `Σ_k f^k / k!`
    pub fn exp_series(&self) -> Result<Self, SeriesError> {
        if !self.constant_term().is_zero() {
            return Err(SeriesError::NonzeroConstantTerm);
        }
        let mut sum = Self::one(&self.ring);
        let mut term = Self::one(&self.ring);
        let mut k = 1i64;
        loop {
            term = term.mul(self)?.scale(&BigRational::new(1.into(), k.into()));
            if term.is_zero() {
                return Ok(sum);
            }
            sum = sum.add(&term)?;
            k += 1;
        }
    }

    /// `Σ_{k≥1} (−1)^{k+1} f^k / k`
    pub fn log1p(&self) -> Result<Self, SeriesError> {
        if !self.constant_term().is_zero() {
            return Err(SeriesError::NonzeroConstantTerm);
        }
        let mut sum = Self::zero(&self.ring);
        let mut power = Self::one(&self.ring);
        let mut k = 1i64;
        loop {
            power = power.mul(self)?;
            if power.is_zero() {
                return Ok(sum);
            }
            let sign = if k % 2 == 1 { 1 } else { -1 };
            sum = sum.add(&power.scale(&BigRational::new(sign.into(), k.into())))?;
            k += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::{rat, RatSeries, SeriesRing};
    use super::*;
    use std::sync::Arc;

    fn ring1(t: i64) -> Arc<super::super::SeriesRing> {
        SeriesRing::uniform(vec!["y".into()], 1, rat(t, 1)).unwrap()
    }

    fn poly(ring: &Arc<SeriesRing>, coeffs: &[(i64, i64, i64)]) -> RatSeries {
        RatSeries::from_scaled_terms(ring, coeffs.iter().map(|&(e, n, d)| (vec![e], rat(n, d))))
    }

    #[test]
    fn identities() {
        let r = ring1(4);
        let f = poly(&r, &[(0, 2, 1), (1, -1, 3), (3, 5, 1)]);
        assert_eq!(f.add(&RatSeries::zero(&r)).unwrap(), f);
        assert_eq!(f.mul(&RatSeries::one(&r)).unwrap(), f);
        let a = poly(&r, &[(0, 1, 1), (1, 1, 1)]);
        let b = poly(&r, &[(0, 1, 1), (1, -1, 1)]);
        assert_eq!(a.add(&b).unwrap(), RatSeries::constant(&r, rat(2, 1)));
        assert_eq!(a.mul(&a).unwrap(), poly(&r, &[(0, 1, 1), (1, 2, 1), (2, 1, 1)]));
    }

    #[test]
    fn fractional_exponents_add() {
        let r = SeriesRing::uniform(vec!["y".into()], 3, rat(2, 1)).unwrap();
        let a = RatSeries::monomial(&r, &[rat(1, 3)], rat(1, 1)).unwrap();
        let b = RatSeries::monomial(&r, &[rat(2, 3)], rat(1, 1)).unwrap();
        assert_eq!(a.mul(&b).unwrap(), RatSeries::variable(&r, 0));
    }

    #[test]
    fn truncation_drops_high_terms() {
        let r = ring1(2);
        let y = RatSeries::variable(&r, 0);
        assert!(y.pow(3).is_zero());
        assert_eq!(y.pow(2).len(), 1);
    }

    #[test]
    fn exp_and_log_of_variable() {
        let r = ring1(3);
        let y = RatSeries::variable(&r, 0);
        assert_eq!(
            y.exp_series().unwrap(),
            poly(&r, &[(0, 1, 1), (1, 1, 1), (2, 1, 2), (3, 1, 6)])
        );
        assert_eq!(RatSeries::zero(&r).exp_series().unwrap(), RatSeries::one(&r));
        let r2 = ring1(2);
        let y2 = RatSeries::variable(&r2, 0);
        assert_eq!(y2.log1p().unwrap(), poly(&r2, &[(1, 1, 1), (2, -1, 2)]));
        assert!(RatSeries::zero(&r2).log1p().unwrap().is_zero());
        assert_eq!(RatSeries::one(&r2).exp_series(), Err(SeriesError::NonzeroConstantTerm));
    }

    #[test]
    fn ring_mismatch() {
        let a = RatSeries::one(&ring1(2));
        let b = RatSeries::one(&ring1(3));
        assert_eq!(a.add(&b), Err(SeriesError::RingMismatch));
        assert_eq!(a.mul(&b), Err(SeriesError::RingMismatch));
    }
}
