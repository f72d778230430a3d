//! Truncated overconvergent power series.
//!
//! A [`TruncatedSeries`] stores the coefficients `a_I` with `|I| ≤ D`
//! exactly. An optional geometric tail `|a_I| ≤ C·σ^{-I}` for `|I| > D`
//! marks the series as a germ converging beyond every radius below `σ`.

mod cofinality;
mod norms;
mod ops;

pub use cofinality::{
    cofinality_constant, product_cofinality_constant, restrict_arch, restrict_t_to_s,
    ArchRestriction, CofinalityCertificate,
};
pub use norms::{norm_s, norm_t, torus_points_per_variable};
pub use ops::{base_change, multiply};

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::{total_degree, Exponent, Poly};
use crate::scalars::{serde_rational, BanachRing, Rational};

/// Default truncation degree.
pub const DEFAULT_DEGREE: u32 = 16;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PolyRadius(#[serde(with = "serde_rational::vec")] Vec<Rational>);

impl PolyRadius {
    pub fn new(components: Vec<Rational>) -> Result<Self> {
        if let Some(r) = components.iter().find(|r| !r.is_positive()) {
            return Err(Error::invalid(format!("radius {r} is not positive")));
        }
        Ok(PolyRadius(components))
    }

    pub fn uniform(n: usize, r: Rational) -> Result<Self> {
        Self::new(vec![r; n])
    }

    pub fn components(&self) -> &[Rational] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Every component strictly smaller.
    pub fn strictly_less(&self, other: &PolyRadius) -> bool {
        self.len() == other.len() && self.0.iter().zip(&other.0).all(|(a, b)| a < b)
    }

    /// `ρ^I`.
    pub fn power(&self, e: &[u32]) -> Rational {
        self.0
            .iter()
            .zip(e)
            .fold(Rational::one(), |acc, (r, &k)| acc * num_traits::pow(r.clone(), k as usize))
    }

    pub fn min(&self, other: &PolyRadius) -> PolyRadius {
        PolyRadius(self.0.iter().zip(&other.0).map(|(a, b)| a.clone().min(b.clone())).collect())
    }

    pub fn concat(&self, other: &PolyRadius) -> PolyRadius {
        PolyRadius(self.0.iter().chain(&other.0).cloned().collect())
    }

    pub(crate) fn check_len(&self, n: usize) -> Result<()> {
        if self.len() == n {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected: n,
                found: self.len(),
            })
        }
    }
}

/// `|a_I| ≤ c·σ^{-I}` for every `|I|` beyond the stored degree.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Tail {
    pub c: Rational,
    pub sigma: PolyRadius,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedSeries {
    ring: BanachRing,
    n: usize,
    degree: u32,
    coeffs: BTreeMap<Exponent, Rational>,
    tail: Option<Tail>,
}

impl TruncatedSeries {
    pub fn new(
        ring: BanachRing,
        n: usize,
        degree: u32,
        coeffs: impl IntoIterator<Item = (Exponent, Rational)>,
        tail: Option<Tail>,
    ) -> Result<Self> {
        let mut map: BTreeMap<Exponent, Rational> = BTreeMap::new();
        for (e, c) in coeffs {
            if e.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: e.len(),
                });
            }
            if total_degree(&e) > degree {
                return Err(Error::invalid(format!(
                    "coefficient at {e:?} exceeds degree bound {degree}"
                )));
            }
            ring.check_element(&c)?;
            *map.entry(e).or_insert_with(Rational::zero) += c;
        }
        map.retain(|_, c| !c.is_zero());
        if let Some(t) = &tail {
            t.sigma.check_len(n)?;
            if t.c.is_negative() {
                return Err(Error::invalid("tail constant is negative"));
            }
        }
        Ok(TruncatedSeries {
            ring,
            n,
            degree,
            coeffs: map,
            tail,
        })
    }

    /// A polynomial as an exact series; the degree bound is its degree.
    pub fn from_poly(ring: BanachRing, p: &Poly) -> Result<Self> {
        Self::with_degree(ring, p, p.degree().unwrap_or(0))
    }

    pub fn with_degree(ring: BanachRing, p: &Poly, degree: u32) -> Result<Self> {
        Self::new(
            ring,
            p.nvars(),
            degree,
            p.terms().iter().map(|(e, c)| (e.clone(), c.clone())),
            None,
        )
    }

    pub fn zero(ring: BanachRing, n: usize) -> Self {
        Self::new(ring, n, 0, [], None).unwrap()
    }

    pub fn constant(ring: BanachRing, n: usize, c: Rational) -> Result<Self> {
        Self::new(ring, n, 0, [(vec![0; n], c)], None)
    }

    pub fn monomial(ring: BanachRing, e: Exponent, c: Rational) -> Result<Self> {
        let d = total_degree(&e);
        Self::new(ring, e.len(), d, [(e, c)], None)
    }

    pub fn ring(&self) -> &BanachRing {
        &self.ring
    }

    pub fn nvars(&self) -> usize {
        self.n
    }

    pub fn degree_bound(&self) -> u32 {
        self.degree
    }

    pub fn coeffs(&self) -> &BTreeMap<Exponent, Rational> {
        &self.coeffs
    }

    pub fn coeff(&self, e: &[u32]) -> Rational {
        self.coeffs.get(e).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn tail(&self) -> Option<&Tail> {
        self.tail.as_ref()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty() && self.tail.as_ref().is_none_or(|t| t.c.is_zero())
    }

    /// The stored polynomial part.
    pub fn to_poly(&self) -> Poly {
        Poly::from_terms(self.n, self.coeffs.iter().map(|(e, c)| (e.clone(), c.clone())))
    }

    pub fn with_tail(mut self, tail: Option<Tail>) -> Result<Self> {
        if let Some(t) = &tail {
            t.sigma.check_len(self.n)?;
        }
        self.tail = tail;
        Ok(self)
    }

    pub(crate) fn same_ring(&self, other: &TruncatedSeries) -> Result<()> {
        if self.ring != other.ring {
            return Err(Error::RingMismatch);
        }
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: other.n,
            });
        }
        Ok(())
    }
}

/// `W^n(ρ)/I` for the ideal `I` generated by `relations`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DaggerPresentation {
    ring: BanachRing,
    rho: PolyRadius,
    relations: Vec<TruncatedSeries>,
}

impl DaggerPresentation {
    pub fn new(ring: BanachRing, rho: PolyRadius, relations: Vec<TruncatedSeries>) -> Result<Self> {
        for r in &relations {
            if r.ring() != &ring {
                return Err(Error::RingMismatch);
            }
            if r.nvars() != rho.len() {
                return Err(Error::DimensionMismatch {
                    expected: rho.len(),
                    found: r.nvars(),
                });
            }
        }
        Ok(DaggerPresentation {
            ring,
            rho,
            relations,
        })
    }

    /// The overconvergent polydisc algebra itself, with no relations.
    pub fn polydisc(ring: BanachRing, rho: PolyRadius) -> Self {
        DaggerPresentation {
            ring,
            rho,
            relations: Vec::new(),
        }
    }

    pub fn ring(&self) -> &BanachRing {
        &self.ring
    }

    pub fn nvars(&self) -> usize {
        self.rho.len()
    }

    pub fn rho(&self) -> &PolyRadius {
        &self.rho
    }

    pub fn relations(&self) -> &[TruncatedSeries] {
        &self.relations
    }

    pub fn relation_polys(&self) -> Vec<Poly> {
        self.relations.iter().map(TruncatedSeries::to_poly).collect()
    }
}
