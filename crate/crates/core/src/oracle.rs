//! Closed-form reference for `C²/Z₃`: the roots `κ_k` of the local mirror
//! curve, expanded exactly over `Q(ζ)` with `ζ = exp(πi/3)`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::series::{rat, Coefficient, RatSeries, SeriesRing, TruncatedSeries};

/// `a + b·ζ` with `ζ² = ζ − 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Cyclotomic6 {
    pub a: BigRational,
    pub b: BigRational,
}

impl Cyclotomic6 {
    pub fn new(a: BigRational, b: BigRational) -> Self {
        Cyclotomic6 { a, b }
    }

    pub fn zeta() -> Self {
        Cyclotomic6::new(BigRational::zero(), BigRational::one())
    }

    /// `ζ^k` for any integer `k`.
    pub fn zeta_pow(k: i64) -> Self {
        let (z, o) = (BigRational::zero(), BigRational::one());
        match k.rem_euclid(6) {
            0 => Cyclotomic6::new(o, z),
            1 => Cyclotomic6::new(z, o),
            2 => Cyclotomic6::new(-o.clone(), o),
            3 => Cyclotomic6::new(-o, z),
            4 => Cyclotomic6::new(z, -o),
            _ => Cyclotomic6::new(o.clone(), -o),
        }
    }

    /// Image under `ζ ↦ ζ⁻¹ = 1 − ζ`.
    pub fn conjugate(&self) -> Self {
        Cyclotomic6::new(&self.a + &self.b, -self.b.clone())
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }
}

impl fmt::Display for Cyclotomic6 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            write!(f, "{}", self.a)
        } else {
            write!(f, "{} + {}ζ", self.a, self.b)
        }
    }
}

impl Add for Cyclotomic6 {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Cyclotomic6::new(self.a + o.a, self.b + o.b)
    }
}

impl Sub for Cyclotomic6 {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Cyclotomic6::new(self.a - o.a, self.b - o.b)
    }
}

impl Neg for Cyclotomic6 {
    type Output = Self;
    fn neg(self) -> Self {
        Cyclotomic6::new(-self.a, -self.b)
    }
}

impl Mul for Cyclotomic6 {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        self.mul_ref(&o)
    }
}

impl Zero for Cyclotomic6 {
    fn zero() -> Self {
        Cyclotomic6::new(BigRational::zero(), BigRational::zero())
    }
    fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }
}

impl One for Cyclotomic6 {
    fn one() -> Self {
        Cyclotomic6::new(BigRational::one(), BigRational::zero())
    }
}

impl Coefficient for Cyclotomic6 {
    fn from_rational(r: &BigRational) -> Self {
        Cyclotomic6::new(r.clone(), BigRational::zero())
    }

    fn add_assign_ref(&mut self, other: &Self) {
        self.a += &other.a;
        self.b += &other.b;
    }

    fn mul_ref(&self, o: &Self) -> Self {
        let bd = &self.b * &o.b;
        Cyclotomic6::new(&self.a * &o.a - &bd, &self.a * &o.b + &self.b * &o.a + bd)
    }

    fn neg_ref(&self) -> Self {
        -self.clone()
    }

    fn scale(&self, r: &BigRational) -> Self {
        Cyclotomic6::new(&self.a * r, &self.b * r)
    }
}

pub type CycloSeries = TruncatedSeries<Cyclotomic6>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("coefficient {0} is not rational")]
    NonRational(String),
    #[error(transparent)]
    Series(#[from] crate::series::SeriesError),
}

fn tau_ring(order: u32) -> std::sync::Arc<SeriesRing> {
    SeriesRing::uniform(vec!["t1".into(), "t2".into()], 1, rat(order.into(), 1)).expect("valid ring")
}

/// `κ_k = ω·exp(ωτ₁/3)·exp(ω²τ₂/3)` with `ω = ζ^{2k+1}`.
pub fn kappa(k: i64, order: u32) -> CycloSeries {
    let ring = tau_ring(order);
    kappa_in(&ring, k)
}

fn kappa_in(ring: &std::sync::Arc<SeriesRing>, k: i64) -> CycloSeries {
    let w = Cyclotomic6::zeta_pow(2 * k + 1);
    let w2 = Cyclotomic6::zeta_pow(2 * (2 * k + 1));
    let third = rat(1, 3);
    let arg = CycloSeries::variable(ring, 0)
        .scale_by(&w.scale(&third))
        .add(&CycloSeries::variable(ring, 1).scale_by(&w2.scale(&third)))
        .expect("same ring");
    arg.exp_series().expect("no constant term").scale_by(&w)
}

/// `(σ₁, σ₂, σ₃)` of `κ₀, κ₁, κ₂`.
pub fn elementary_symmetric(order: u32) -> (CycloSeries, CycloSeries, CycloSeries) {
    let ring = tau_ring(order);
    let k: Vec<CycloSeries> = (0..3).map(|i| kappa_in(&ring, i)).collect();
    let s1 = k[0].add(&k[1]).and_then(|s| s.add(&k[2])).expect("same ring");
    let p01 = k[0].mul(&k[1]).expect("same ring");
    let p02 = k[0].mul(&k[2]).expect("same ring");
    let p12 = k[1].mul(&k[2]).expect("same ring");
    let s2 = p01.add(&p02).and_then(|s| s.add(&p12)).expect("same ring");
    let s3 = p01.mul(&k[2]).expect("same ring");
    (s1, s2, s3)
}

fn to_rational(s: &CycloSeries) -> Result<RatSeries, OracleError> {
    if let Some((_, c)) = s.scaled_terms().find(|(_, c)| !c.is_rational()) {
        return Err(OracleError::NonRational(c.to_string()));
    }
    Ok(s.map_coefficients(|c| c.a.clone()))
}

/// `g₁₁₂ = σ₂` and `g₁₂₂ = −σ₁`, with all `ζ`-parts checked to cancel.
pub fn oracle_generating_functions(order: u32) -> Result<(RatSeries, RatSeries), OracleError> {
    let (s1, s2, _) = elementary_symmetric(order);
    Ok((to_rational(&s2)?, to_rational(&s1.neg())?))
}

/// `table[b][a]`: coefficient of `τ₁^a τ₂^b` in `g₁₁₂`.
pub fn oracle_table(amax: u32, bmax: u32) -> Result<Vec<Vec<BigRational>>, OracleError> {
    let (g, _) = oracle_generating_functions(amax + bmax)?;
    Ok((0..=bmax)
        .map(|b| {
            (0..=amax)
                .map(|a| g.coefficient(&[rat(a.into(), 1), rat(b.into(), 1)]))
                .collect()
        })
        .collect())
}

/// The published 7×7 window, `PUBLISHED_TABLE[b][a]` as `(numerator, denominator)`.
pub const PUBLISHED_TABLE: [[(i64, i64); 7]; 7] = [
    [(0, 1), (1, 1), (0, 1), (0, 1), (1, 648), (0, 1), (0, 1)],
    [(0, 1), (0, 1), (-1, 18), (0, 1), (0, 1), (-1, 29160), (0, 1)],
    [(1, 6), (0, 1), (0, 1), (1, 972), (0, 1), (0, 1), (1, 3149280)],
    [(0, 1), (-1, 162), (0, 1), (0, 1), (-1, 104976), (0, 1), (0, 1)],
    [(0, 1), (0, 1), (1, 11664), (0, 1), (0, 1), (1, 18895680), (0, 1)],
    [(-1, 9720), (0, 1), (0, 1), (-1, 1574640), (0, 1), (0, 1), (-1, 5101833600)],
    [(0, 1), (1, 524880), (0, 1), (0, 1), (1, 340122240), (0, 1), (0, 1)],
];

pub fn published_table() -> Vec<Vec<BigRational>> {
    PUBLISHED_TABLE
        .iter()
        .map(|row| row.iter().map(|&(n, d)| rat(n, d)).collect())
        .collect()
}
