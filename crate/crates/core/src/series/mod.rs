//! Truncated multivariate power series with exponents in `(1/M)·Z^r_{≥0}`.
//!
//! Exponents are stored scaled by the ring modulus `M`, so all exponent
//! arithmetic is integral. Truncation is by weighted total degree.

mod coefficient;
mod ops;
mod subst;

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};
use thiserror::Error;

pub use coefficient::Coefficient;
pub use subst::{solve_fixed_point, Image};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum SeriesError {
    #[error("series belong to different rings")]
    RingMismatch,
    #[error("series has a nonzero constant term")]
    NonzeroConstantTerm,
    #[error("substitution for variable {var} lowers weighted degree")]
    DegreeDecreasingSubstitution { var: usize },
    #[error("exponent {exponent} of variable {var} does not fit the target lattice")]
    ExponentOffLattice { var: usize, exponent: BigRational },
    #[error("expected {expected} images, got {got}")]
    ImageCount { expected: usize, got: usize },
    #[error("fixed point iteration did not converge after {iterations} rounds")]
    NoConvergence { iterations: usize },
    #[error("invalid ring: {0}")]
    InvalidRing(String),
}

/// Ambient ring: variable names, modulus, weights and truncation order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeriesRing {
    names: Vec<String>,
    modulus: i64,
    weights: Vec<BigRational>,
    truncation: BigRational,
    int_weights: Vec<i64>,
    cap: i64,
}

impl SeriesRing {
    pub fn new(
        names: Vec<String>,
        modulus: i64,
        weights: Vec<BigRational>,
        truncation: BigRational,
    ) -> Result<Arc<Self>, SeriesError> {
        if modulus <= 0 {
            return Err(SeriesError::InvalidRing("modulus must be positive".into()));
        }
        if names.len() != weights.len() {
            return Err(SeriesError::InvalidRing("one weight per variable required".into()));
        }
        if weights.iter().any(|w| !w.is_positive()) {
            return Err(SeriesError::InvalidRing("weights must be positive".into()));
        }
        if truncation.is_negative() {
            return Err(SeriesError::InvalidRing("truncation order must be nonnegative".into()));
        }
        let l = weights
            .iter()
            .fold(BigInt::one(), |acc, w| acc.lcm(w.denom()));
        let int_weights = weights
            .iter()
            .map(|w| (w * BigRational::from_integer(l.clone())).to_integer().to_i64())
            .collect::<Option<Vec<i64>>>()
            .ok_or_else(|| SeriesError::InvalidRing("weights too large".into()))?;
        let cap = (&truncation * BigRational::from_integer(l * modulus))
            .floor()
            .to_integer()
            .to_i64()
            .ok_or_else(|| SeriesError::InvalidRing("truncation too large".into()))?;
        Ok(Arc::new(Self {
            names,
            modulus,
            weights,
            truncation,
            int_weights,
            cap,
        }))
    }

    /// Ring with unit weights.
    pub fn uniform(names: Vec<String>, modulus: i64, truncation: BigRational) -> Result<Arc<Self>, SeriesError> {
        let w = vec![BigRational::one(); names.len()];
        Self::new(names, modulus, w, truncation)
    }

    /// Same variables and weights, different truncation.
    pub fn with_truncation(&self, truncation: BigRational) -> Result<Arc<Self>, SeriesError> {
        Self::new(self.names.clone(), self.modulus, self.weights.clone(), truncation)
    }

    pub fn nvars(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn modulus(&self) -> i64 {
        self.modulus
    }

    pub fn weights(&self) -> &[BigRational] {
        &self.weights
    }

    pub fn truncation(&self) -> &BigRational {
        &self.truncation
    }

    /// Weighted degree of a scaled exponent, in internal integer units.
    pub(crate) fn scaled_degree(&self, e: &[i64]) -> i64 {
        e.iter().zip(&self.int_weights).map(|(a, w)| a * w).sum()
    }

    pub(crate) fn cap(&self) -> i64 {
        self.cap
    }

    /// Internal units per unit of weighted degree.
    pub(crate) fn degree_unit(&self) -> i64 {
        let l = self.weights.iter().fold(BigInt::one(), |acc, w| acc.lcm(w.denom()));
        l.to_i64().expect("weight denominators fit in i64") * self.modulus
    }

    pub fn weighted_degree(&self, exponent: &[BigRational]) -> BigRational {
        exponent.iter().zip(&self.weights).map(|(e, w)| e * w).sum()
    }

    /// Scales rational exponents by `M`; `None` if off the lattice or negative.
    pub fn scale_exponent(&self, exponent: &[BigRational]) -> Option<Vec<i64>> {
        if exponent.len() != self.nvars() {
            return None;
        }
        let m = BigRational::from_integer(self.modulus.into());
        exponent
            .iter()
            .map(|e| {
                let s = e * &m;
                (s.is_integer() && !s.is_negative()).then(|| s.to_integer().to_i64()).flatten()
            })
            .collect()
    }

    pub fn unscale_exponent(&self, e: &[i64]) -> Vec<BigRational> {
        e.iter()
            .map(|&x| BigRational::new(x.into(), self.modulus.into()))
            .collect()
    }
}

/// A truncated series. Never stores zero coefficients or terms above the
/// ring's truncation order.
#[derive(Clone)]
pub struct TruncatedSeries<C: Coefficient> {
    ring: Arc<SeriesRing>,
    terms: BTreeMap<Vec<i64>, C>,
}

impl<C: Coefficient> PartialEq for TruncatedSeries<C> {
    fn eq(&self, other: &Self) -> bool {
        *self.ring == *other.ring && self.terms == other.terms
    }
}

impl<C: Coefficient> TruncatedSeries<C> {
    pub fn zero(ring: &Arc<SeriesRing>) -> Self {
        Self {
            ring: ring.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(ring: &Arc<SeriesRing>, c: C) -> Self {
        let mut s = Self::zero(ring);
        s.add_term(vec![0; ring.nvars()], c);
        s
    }

    pub fn one(ring: &Arc<SeriesRing>) -> Self {
        Self::constant(ring, C::one())
    }

    pub fn variable(ring: &Arc<SeriesRing>, i: usize) -> Self {
        let mut e = vec![0; ring.nvars()];
        e[i] = ring.modulus();
        let mut s = Self::zero(ring);
        s.add_term(e, C::one());
        s
    }

    /// `c · y^exponent`; `None` when the exponent is off the ring lattice.
    pub fn monomial(ring: &Arc<SeriesRing>, exponent: &[BigRational], c: C) -> Option<Self> {
        let e = ring.scale_exponent(exponent)?;
        let mut s = Self::zero(ring);
        s.add_term(e, c);
        Some(s)
    }

    /// Builds a series from scaled exponents, dropping anything above `T`.
    pub fn from_scaled_terms(ring: &Arc<SeriesRing>, terms: impl IntoIterator<Item = (Vec<i64>, C)>) -> Self {
        let mut s = Self::zero(ring);
        for (e, c) in terms {
            s.add_term(e, c);
        }
        s
    }

    pub fn ring(&self) -> &Arc<SeriesRing> {
        &self.ring
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms keyed by scaled exponent (`M · exponent`), in lexicographic order.
    pub fn scaled_terms(&self) -> impl Iterator<Item = (&Vec<i64>, &C)> {
        self.terms.iter()
    }

    /// Terms with rational exponents, in lexicographic order.
    pub fn terms(&self) -> impl Iterator<Item = (Vec<BigRational>, &C)> + '_ {
        self.terms.iter().map(|(e, c)| (self.ring.unscale_exponent(e), c))
    }

    pub fn coefficient_scaled(&self, e: &[i64]) -> C {
        self.terms.get(e).cloned().unwrap_or_else(C::zero)
    }

    /// Coefficient of `y^exponent`; zero for exponents not on the lattice.
    pub fn coefficient(&self, exponent: &[BigRational]) -> C {
        match self.ring.scale_exponent(exponent) {
            Some(e) => self.coefficient_scaled(&e),
            None => C::zero(),
        }
    }

    pub fn constant_term(&self) -> C {
        self.coefficient_scaled(&vec![0; self.ring.nvars()])
    }

    /// Smallest weighted degree of a stored term.
    pub fn valuation(&self) -> Option<BigRational> {
        self.terms
            .keys()
            .map(|e| self.ring.scaled_degree(e))
            .min()
            .map(|d| BigRational::new(d.into(), self.ring.degree_unit().into()))
    }

    pub(crate) fn add_term(&mut self, e: Vec<i64>, c: C) {
        if c.is_zero() || self.ring.scaled_degree(&e) > self.ring.cap() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                o.get_mut().add_assign_ref(&c);
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// Adds `c · y^exponent`, dropping it silently above the truncation order.
    pub fn add_monomial(&mut self, exponent: &[BigRational], c: C) -> Result<(), SeriesError> {
        if exponent.len() != self.ring.nvars() {
            return Err(SeriesError::ImageCount {
                expected: self.ring.nvars(),
                got: exponent.len(),
            });
        }
        match self.ring.scale_exponent(exponent) {
            Some(e) => {
                self.add_term(e, c);
                Ok(())
            }
            None => {
                let m = BigRational::from_integer(self.ring.modulus().into());
                let var = exponent
                    .iter()
                    .position(|x| !(x * &m).is_integer() || x.is_negative())
                    .unwrap_or(0);
                Err(SeriesError::ExponentOffLattice {
                    var,
                    exponent: exponent[var].clone(),
                })
            }
        }
    }

    /// Re-reads the terms in another ring with the same variables and modulus.
    pub fn retruncate(&self, ring: &Arc<SeriesRing>) -> Result<Self, SeriesError> {
        if ring.nvars() != self.ring.nvars() || ring.modulus() != self.ring.modulus() {
            return Err(SeriesError::RingMismatch);
        }
        Ok(Self::from_scaled_terms(
            ring,
            self.terms.iter().map(|(e, c)| (e.clone(), c.clone())),
        ))
    }

    /// Applies `f` to every coefficient, dropping zeros.
    pub fn map_coefficients<D: Coefficient>(&self, f: impl Fn(&C) -> D) -> TruncatedSeries<D> {
        TruncatedSeries::from_scaled_terms(&self.ring, self.terms.iter().map(|(e, c)| (e.clone(), f(c))))
    }
}

fn fmt_exponent(x: i64, m: i64) -> String {
    let g = x.gcd(&m);
    let (p, q) = (x / g, m / g);
    if q == 1 {
        format!("{p}")
    } else {
        format!("{{{p}/{q}}}")
    }
}

impl<C: Coefficient> TruncatedSeries<C> {
    /// Rendering of one monomial, `1` for the empty product.
    pub fn format_monomial(ring: &SeriesRing, e: &[i64]) -> String {
        let parts: Vec<String> = e
            .iter()
            .zip(ring.names())
            .filter(|(x, _)| **x != 0)
            .map(|(&x, name)| {
                if x == ring.modulus() {
                    name.clone()
                } else {
                    format!("{name}^{}", fmt_exponent(x, ring.modulus()))
                }
            })
            .collect();
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    }
}

impl<C: Coefficient> fmt::Display for TruncatedSeries<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut keys: Vec<&Vec<i64>> = self.terms.keys().collect();
        keys.sort_by_key(|e| (self.ring.scaled_degree(e), std::cmp::Reverse((*e).clone())));
        for (k, e) in keys.into_iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            let mono = Self::format_monomial(&self.ring, e);
            let c = &self.terms[e];
            if mono == "1" {
                write!(f, "{c}")?;
            } else if c.is_one() {
                write!(f, "{mono}")?;
            } else {
                write!(f, "({c})*{mono}")?;
            }
        }
        Ok(())
    }
}

impl<C: Coefficient> fmt::Debug for TruncatedSeries<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Shorthand for `n/d`.
pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

pub type RatSeries = TruncatedSeries<BigRational>;
