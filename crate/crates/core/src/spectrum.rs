//! Points of the spectrum of `ℤ⟨X/ρ⟩`: places of ℤ, evaluation seminorms on
//! their fibers, fiberwise sups and the spectral seminorm.
//!
//! Places follow Ostrowski's classification: the trivial absolute value,
//! `|·|_∞^ε` for `ε ∈ (0, 1]` and `|·|_p^ε` for `ε > 0`. Only finitely many
//! are visited, on the grid `ε = k/grid`.

use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::scalars::{
    nth_root_interval, pow_interval, primes_up_to, serde_rational, sqrt_lower, valuation, NormValue, Rational,
    RingKind,
};
use crate::series::{norm_s, PolyRadius, TruncatedSeries};
use crate::torus::{torus_max_abs_sq, TORUS_POINT_CAP};

/// Width target for irrational powers and roots.
pub fn root_precision() -> Rational {
    Rational::new(1.into(), (1u64 << 40).into())
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Place {
    Trivial,
    Archimedean {
        #[serde(with = "serde_rational")]
        eps: Rational,
    },
    Padic {
        p: u64,
        #[serde(with = "serde_rational")]
        eps: Rational,
    },
}

impl Place {
    pub fn archimedean(eps: Rational) -> Result<Self> {
        if !eps.is_positive() || eps > Rational::one() {
            return Err(Error::invalid(format!("Archimedean exponent {eps} outside (0, 1]")));
        }
        Ok(Place::Archimedean { eps })
    }

    pub fn padic(p: u64, eps: Rational) -> Result<Self> {
        if !crate::scalars::is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if !eps.is_positive() {
            return Err(Error::invalid(format!("p-adic exponent {eps} is not positive")));
        }
        Ok(Place::Padic { p, eps })
    }

    pub fn non_archimedean(&self) -> bool {
        !matches!(self, Place::Archimedean { .. })
    }

    fn eps(&self) -> Rational {
        match self {
            Place::Trivial => Rational::one(),
            Place::Archimedean { eps } | Place::Padic { eps, .. } => eps.clone(),
        }
    }

    /// The underlying absolute value before raising to ε.
    fn base_abs(&self, x: &Rational) -> Rational {
        if x.is_zero() {
            return Rational::zero();
        }
        match self {
            Place::Trivial => Rational::one(),
            Place::Archimedean { .. } => x.abs(),
            Place::Padic { p, .. } => crate::scalars::pow_signed(&Rational::from_integer((*p).into()), -valuation(x, *p)),
        }
    }

    /// `|x|` at this place.
    pub fn abs(&self, x: &Rational) -> NormValue {
        pow_interval(&NormValue::exact(self.base_abs(x)), &self.eps(), &root_precision())
    }

    /// Exact test of `|x| ≤ bound` for the coordinate check: the ordinary
    /// absolute value at an Archimedean place, `|x|_p^ε` at a p-adic one.
    fn coordinate_within(&self, x: &Rational, bound: &Rational) -> bool {
        let base = self.base_abs(x);
        match self {
            Place::Trivial | Place::Archimedean { .. } => base <= *bound,
            Place::Padic { eps, .. } => {
                // base^(a/b) ≤ bound  ⇔  base^a ≤ bound^b
                let (Some(a), Some(b)) = (eps.numer().to_usize(), eps.denom().to_usize()) else {
                    return false;
                };
                num_traits::pow(base, a) <= num_traits::pow(bound.clone(), b)
            }
        }
    }
}

/// Trivial, then Archimedean by increasing ε, then p-adic by increasing p
/// and ε, with `ε = k/grid` for `k = 1..=grid`.
pub fn enumerate_places(prime_bound: u64, grid: u32) -> Vec<Place> {
    let grid = grid.max(1);
    let eps: Vec<Rational> = (1..=grid)
        .map(|k| Rational::new(k.into(), grid.into()))
        .collect();
    let mut out = vec![Place::Trivial];
    out.extend(eps.iter().map(|e| Place::Archimedean { eps: e.clone() }));
    for p in primes_up_to(prime_bound) {
        out.extend(eps.iter().map(|e| Place::Padic { p, eps: e.clone() }));
    }
    out
}

/// A place with fiber coordinates `c` satisfying `|c_i| ≤ ρ_i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SpectrumPoint {
    place: Place,
    #[serde(with = "serde_rational::vec")]
    coords: Vec<Rational>,
}

impl SpectrumPoint {
    pub fn new(place: Place, coords: Vec<Rational>, rho: &PolyRadius) -> Result<Self> {
        rho.check_len(coords.len())?;
        if let Some(index) = coords
            .iter()
            .zip(rho.components())
            .position(|(c, r)| !place.coordinate_within(c, r))
        {
            return Err(Error::CoordinateOutOfDisk { index });
        }
        Ok(SpectrumPoint { place, coords })
    }

    pub fn place(&self) -> &Place {
        &self.place
    }

    pub fn coords(&self) -> &[Rational] {
        &self.coords
    }
}

fn integer_polynomial(f: &TruncatedSeries) -> Result<Poly> {
    if f.ring().kind() != RingKind::IntegersArchimedean {
        return Err(Error::UnsupportedRing(format!("spectral evaluation needs Z, got {}", f.ring())));
    }
    if f.tail().is_some() {
        return Err(Error::invalid("spectral evaluation takes polynomials; the series has a tail"));
    }
    Ok(f.to_poly())
}

/// `|f(c)|` at the point.
pub fn evaluate_seminorm(f: &TruncatedSeries, pt: &SpectrumPoint) -> Result<NormValue> {
    let p = integer_polynomial(f)?;
    if p.nvars() != pt.coords.len() {
        return Err(Error::DimensionMismatch {
            expected: p.nvars(),
            found: pt.coords.len(),
        });
    }
    Ok(pt.place.abs(&p.eval(&pt.coords)))
}

/// Angles per variable for Archimedean fiber sampling.
pub fn fiber_angles(degree: u32) -> usize {
    8 * (degree as usize + 1)
}

fn term_sizes<'a>(p: &'a Poly, rho: &'a PolyRadius) -> impl Iterator<Item = (Rational, Rational)> + 'a {
    p.terms().iter().map(|(e, c)| (c.abs(), rho.power(e)))
}

/// Sup of `|f|` over the fiber of the place in the polydisc of radius ρ.
///
/// p-adic: the Gauss norm `max |a_I|_p^ε ρ^I`; trivial: `max ρ^I` over the
/// support; Archimedean: `[torus sample, Σ|a_I|ρ^I]^ε` with the torus
/// sampled at the ordinary radii ρ, lower end also bounded by the Cauchy
/// estimate `max |a_I| ρ^I`.
pub fn fiber_sup(f: &TruncatedSeries, place: &Place, rho: &PolyRadius) -> Result<NormValue> {
    let p = integer_polynomial(f)?;
    rho.check_len(p.nvars())?;
    Ok(poly_fiber_sup(&p, place, rho))
}

fn poly_fiber_sup(p: &Poly, place: &Place, rho: &PolyRadius) -> NormValue {
    match place {
        Place::Trivial => NormValue::exact(
            term_sizes(p, rho)
                .map(|(_, r)| r)
                .fold(Rational::zero(), Rational::max),
        ),
        Place::Padic { .. } => term_sizes(p, rho)
            .zip(p.terms().values())
            .map(|((_, r), c)| place.abs(c).scale(&r))
            .fold(NormValue::zero(), |acc, v| acc.max(&v)),
        Place::Archimedean { eps } => {
            let sum: Rational = term_sizes(p, rho).map(|(a, r)| a * r).sum();
            let cauchy = term_sizes(p, rho).map(|(a, r)| a * r).fold(Rational::zero(), Rational::max);
            let per_var = fiber_angles(p.degree().unwrap_or(0));
            let sq = torus_max_abs_sq(p, rho.components(), per_var.min(TORUS_POINT_CAP));
            let lo = sqrt_lower(&sq, &root_precision()).max(cauchy).min(sum.clone());
            let prec = root_precision();
            let lo = pow_interval(&NormValue::exact(lo), eps, &prec).lo().clone();
            let hi = pow_interval(&NormValue::exact(sum), eps, &prec).upper().clone();
            NormValue::new(lo, hi)
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct FiberRow {
    pub place: Place,
    pub sup: NormValue,
}

#[derive(Clone, Debug, Serialize)]
pub struct GlobalSup {
    pub value: NormValue,
    /// First place in enumeration order with the largest lower end.
    pub dominant: Place,
    pub fibers: Vec<FiberRow>,
    /// Primes above the bound need no visit: for integer coefficients
    /// `|a|_p^ε ≤ 1 = |a|_trivial`, so their fibers sit below the trivial one.
    pub unvisited_primes_dominated: bool,
    /// The Archimedean fiber at ε = 1 has lower end ≥ 1, so `x ↦ x^ε` is
    /// increasing there and the ε grid cannot miss a larger value.
    pub eps_sweep_complete: bool,
}

/// `max` of [`fiber_sup`] over [`enumerate_places`].
pub fn global_sup(f: &TruncatedSeries, rho: &PolyRadius, prime_bound: u64, grid: u32) -> Result<GlobalSup> {
    let p = integer_polynomial(f)?;
    rho.check_len(p.nvars())?;
    let places = enumerate_places(prime_bound, grid);
    let fibers: Vec<FiberRow> = places
        .into_par_iter()
        .map(|place| FiberRow {
            sup: poly_fiber_sup(&p, &place, rho),
            place,
        })
        .collect();
    let value = fibers.iter().fold(NormValue::zero(), |acc, r| acc.max(&r.sup));
    let dominant = fibers
        .iter()
        .find(|r| r.sup.lo() == value.lo())
        .map(|r| r.place.clone())
        .unwrap_or(Place::Trivial);
    let arch_one = poly_fiber_sup(&p, &Place::Archimedean { eps: Rational::one() }, rho);
    Ok(GlobalSup {
        value,
        dominant,
        fibers,
        unvisited_primes_dominated: true,
        eps_sweep_complete: p.is_zero() || *arch_one.lo() >= Rational::one(),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct PowersReport {
    /// `ⁿ√‖fⁿ‖_{S,ρ}` for `n = 1..=n_max`.
    pub raw: Vec<NormValue>,
    /// Running minimum of `raw`; non-increasing, and each entry bounds the
    /// spectral seminorm from above.
    pub running_inf: Vec<NormValue>,
}

fn interval_min(a: &NormValue, b: &NormValue) -> NormValue {
    let lo = a.lo().clone().min(b.lo().clone());
    let hi = match (a.hi(), b.hi()) {
        (Some(x), Some(y)) => Some(x.clone().min(y.clone())),
        (Some(x), None) | (None, Some(x)) => Some(x.clone()),
        (None, None) => None,
    };
    NormValue::try_new(lo, hi).expect("ordered ends")
}

/// Upper bounds on the spectral seminorm from powers of f.
///
/// The raw sequence need not be monotone; `running_inf` is.
pub fn spectral_via_powers(f: &TruncatedSeries, rho: &PolyRadius, n_max: u32) -> Result<PowersReport> {
    let p = integer_polynomial(f)?;
    rho.check_len(p.nvars())?;
    if n_max == 0 {
        return Err(Error::invalid("need at least one power"));
    }
    let mut raw = Vec::with_capacity(n_max as usize);
    let mut power = Poly::one(p.nvars());
    for n in 1..=n_max {
        power = power.mul(&p);
        let series = TruncatedSeries::from_poly(f.ring().clone(), &power)?;
        let norm = norm_s(&series, rho)?;
        raw.push(nth_root_interval(&NormValue::exact(norm.upper().clone()), n, &root_precision()));
    }
    let mut running_inf: Vec<NormValue> = Vec::with_capacity(raw.len());
    for v in &raw {
        let next = match running_inf.last() {
            Some(prev) => interval_min(prev, v),
            None => v.clone(),
        };
        running_inf.push(next);
    }
    Ok(PowersReport { raw, running_inf })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict")]
pub enum ShilovVerdict {
    /// Every non-Archimedean fiber lies below the Archimedean one.
    Confirmed,
    /// Intervals overlap; no ordering could be certified.
    Inconclusive,
    Violation { place: Place },
}

#[derive(Clone, Debug, Serialize)]
pub struct ShilovReport {
    pub verdict: ShilovVerdict,
    pub archimedean_sup: NormValue,
    pub max_non_archimedean: NormValue,
    /// `max ρ^I` over the support, which bounds every Gauss norm of an
    /// integer polynomial and is itself at most `max |a_I| ρ^I`.
    #[serde(with = "serde_rational")]
    pub gauss_bound: Rational,
    pub global: GlobalSup,
}

/// Checks that the sup of f over the spectrum is attained on the
/// Archimedean fiber (`ε = 1`), for `ρ ≥ 1` and f nonzero.
pub fn shilov_check(f: &TruncatedSeries, rho: &PolyRadius, prime_bound: u64, grid: u32) -> Result<ShilovReport> {
    let p = integer_polynomial(f)?;
    rho.check_len(p.nvars())?;
    if rho.components().iter().any(|r| *r < Rational::one()) {
        return Err(Error::invalid("the boundary check needs every radius ≥ 1"));
    }
    if p.is_zero() {
        return Err(Error::invalid("the boundary check needs a nonzero series"));
    }
    let global = global_sup(f, rho, prime_bound, grid)?;
    let arch = Place::Archimedean { eps: Rational::one() };
    let archimedean_sup = global
        .fibers
        .iter()
        .find(|r| r.place == arch)
        .map(|r| r.sup.clone())
        .expect("ε = 1 is on every grid");
    let non_arch: Vec<&FiberRow> = global.fibers.iter().filter(|r| r.place.non_archimedean()).collect();
    let max_non_archimedean = non_arch.iter().fold(NormValue::zero(), |acc, r| acc.max(&r.sup));
    let gauss_bound = term_sizes(&p, rho).map(|(_, r)| r).fold(Rational::zero(), Rational::max);
    let verdict = if let Some(row) = non_arch.iter().find(|r| !r.sup.possibly_le(&archimedean_sup)) {
        ShilovVerdict::Violation { place: row.place.clone() }
    } else if max_non_archimedean.certainly_le(&archimedean_sup)
        && NormValue::exact(gauss_bound.clone()).certainly_le(&archimedean_sup)
    {
        ShilovVerdict::Confirmed
    } else {
        ShilovVerdict::Inconclusive
    };
    Ok(ShilovReport {
        verdict,
        archimedean_sup,
        max_non_archimedean,
        gauss_bound,
        global,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::{int, rat, BanachRing};

    fn zpoly(terms: &[(u32, i64)]) -> TruncatedSeries {
        let p = Poly::from_terms(1, terms.iter().map(|&(e, c)| (vec![e], int(c))));
        TruncatedSeries::from_poly(BanachRing::integers(), &p).unwrap()
    }

    fn one() -> PolyRadius {
        PolyRadius::new(vec![int(1)]).unwrap()
    }

    #[test]
    fn place_enumeration() {
        let places = enumerate_places(3, 2);
        assert_eq!(places.len(), 7);
        assert_eq!(places[0], Place::Trivial);
        assert_eq!(places[1], Place::Archimedean { eps: rat(1, 2) });
        assert_eq!(places[6], Place::Padic { p: 3, eps: int(1) });
        assert_eq!(enumerate_places(2, 1).len(), 3);
        assert_eq!(Place::padic(2, int(1)).unwrap().abs(&int(6)), NormValue::exact(rat(1, 2)));
        let half = Place::padic(2, rat(1, 2)).unwrap().abs(&int(4));
        assert_eq!(half, NormValue::exact(rat(1, 2)));
        let irrational = Place::archimedean(rat(1, 2)).unwrap().abs(&int(2));
        assert!(irrational.lo() < irrational.upper() && !irrational.contains(&rat(1414, 1000)));
    }

    #[test]
    fn point_evaluation() {
        let arch = Place::archimedean(int(1)).unwrap();
        let pt = SpectrumPoint::new(arch.clone(), vec![int(1)], &one()).unwrap();
        assert_eq!(evaluate_seminorm(&zpoly(&[(1, 1)]), &pt).unwrap(), NormValue::exact(int(1)));
        assert_eq!(evaluate_seminorm(&zpoly(&[(0, 1), (1, 1)]), &pt).unwrap(), NormValue::exact(int(2)));
        let two_adic = SpectrumPoint::new(Place::padic(2, int(1)).unwrap(), vec![int(3)], &one()).unwrap();
        assert_eq!(evaluate_seminorm(&zpoly(&[(0, 2)]), &two_adic).unwrap(), NormValue::exact(rat(1, 2)));
        assert_eq!(
            SpectrumPoint::new(arch, vec![int(2)], &one()),
            Err(Error::CoordinateOutOfDisk { index: 0 })
        );
    }

    #[test]
    fn fiber_sups() {
        let f = zpoly(&[(0, 1), (1, 1)]);
        for p in [2, 3, 5] {
            assert_eq!(fiber_sup(&f, &Place::padic(p, int(1)).unwrap(), &one()).unwrap(), NormValue::exact(int(1)));
        }
        assert_eq!(fiber_sup(&f, &Place::archimedean(int(1)).unwrap(), &one()).unwrap(), NormValue::exact(int(2)));
        let c = zpoly(&[(0, 12)]);
        assert_eq!(fiber_sup(&c, &Place::padic(2, int(1)).unwrap(), &one()).unwrap(), NormValue::exact(rat(1, 4)));
        assert_eq!(fiber_sup(&c, &Place::Trivial, &one()).unwrap(), NormValue::exact(int(1)));
    }

    #[test]
    fn global_sups() {
        let two = global_sup(&zpoly(&[(0, 2)]), &one(), 50, 4).unwrap();
        assert_eq!(two.value, NormValue::exact(int(2)));
        assert_eq!(two.dominant, Place::Archimedean { eps: int(1) });
        assert_eq!(global_sup(&zpoly(&[(1, 1)]), &one(), 50, 4).unwrap().value, NormValue::exact(int(1)));
        let f = global_sup(&zpoly(&[(0, 1), (1, 1)]), &one(), 50, 4).unwrap();
        assert_eq!(f.value, NormValue::exact(int(2)));
        assert!(f.eps_sweep_complete);
    }

    #[test]
    fn powers() {
        let r = spectral_via_powers(&zpoly(&[(0, 1), (1, 1)]), &one(), 6).unwrap();
        assert!(r.raw.iter().all(|v| *v == NormValue::exact(int(2))));
        let c = spectral_via_powers(&zpoly(&[(0, 3)]), &one(), 4).unwrap();
        assert!(c.raw.iter().all(|v| *v == NormValue::exact(int(3))));
        let z = spectral_via_powers(&zpoly(&[]), &one(), 3).unwrap();
        assert!(z.raw.iter().all(|v| *v == NormValue::zero()));
    }

    #[test]
    fn shilov() {
        for f in [zpoly(&[(0, 1), (1, 1)]), zpoly(&[(1, 7)]), zpoly(&[(0, 1)])] {
            let report = shilov_check(&f, &one(), 20, 2).unwrap();
            assert_eq!(report.verdict, ShilovVerdict::Confirmed);
        }
        assert!(shilov_check(&zpoly(&[]), &one(), 20, 2).is_err());
    }
}
