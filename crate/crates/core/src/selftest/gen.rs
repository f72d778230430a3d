//! Random instances for the property suites.

use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::normed::{NormFlavor, WeightedFreeModule};
use crate::poly::{MonomialSpace, Poly};
use crate::scalars::{BanachRing, Rational};
use crate::series::{PolyRadius, Tail, TruncatedSeries};

pub const PRIMES: [u64; 3] = [2, 3, 5];

pub fn ring<R: Rng>(rng: &mut R) -> BanachRing {
    match rng.gen_range(0..6) {
        0 => BanachRing::integers(),
        1 => BanachRing::integers_trivial(),
        2 => BanachRing::rationals(),
        _ => padic(rng),
    }
}

pub fn padic<R: Rng>(rng: &mut R) -> BanachRing {
    BanachRing::padic(*PRIMES.choose(rng).unwrap()).unwrap()
}

pub fn integer<R: Rng>(rng: &mut R, bound: i64) -> Rational {
    Rational::from_integer(rng.gen_range(-bound..=bound).into())
}

pub fn nonzero_integer<R: Rng>(rng: &mut R, bound: i64) -> Rational {
    loop {
        let x = integer(rng, bound);
        if !x.is_zero() {
            return x;
        }
    }
}

/// An element of the ring: an integer for ℤ, a small fraction for ℚ.
pub fn scalar<R: Rng>(rng: &mut R, ring: &BanachRing) -> Rational {
    if ring.kind().is_integral() {
        integer(rng, 20)
    } else {
        Rational::new(rng.gen_range(-20i64..=20).into(), rng.gen_range(1i64..=12).into())
    }
}

pub fn positive<R: Rng>(rng: &mut R) -> Rational {
    Rational::new(rng.gen_range(1i64..=12).into(), rng.gen_range(1i64..=6).into())
}

pub fn vector<R: Rng>(rng: &mut R, ring: &BanachRing, n: usize) -> Vec<Rational> {
    (0..n).map(|_| scalar(rng, ring)).collect()
}

/// A module with random positive weights; max flavor only where allowed.
pub fn module<R: Rng>(rng: &mut R, ring: &BanachRing, rank: usize) -> WeightedFreeModule {
    let flavor = if ring.non_archimedean() && rng.gen_bool(0.5) {
        NormFlavor::Max
    } else {
        NormFlavor::Sum
    };
    module_with(rng, ring, rank, flavor)
}

pub fn module_with<R: Rng>(rng: &mut R, ring: &BanachRing, rank: usize, flavor: NormFlavor) -> WeightedFreeModule {
    let weights = (0..rank).map(|_| positive(rng)).collect();
    WeightedFreeModule::new(ring.clone(), weights, flavor).unwrap()
}

pub fn poly<R: Rng>(rng: &mut R, ring: &BanachRing, nvars: usize, degree: u32, density: f64) -> Poly {
    let mut terms = Vec::new();
    for e in MonomialSpace::new(nvars, degree).monomials() {
        if rng.gen_bool(density) {
            terms.push((e.clone(), scalar(rng, ring)));
        }
    }
    Poly::from_terms(nvars, terms)
}

pub fn nonzero_poly<R: Rng>(rng: &mut R, ring: &BanachRing, nvars: usize, degree: u32) -> Poly {
    loop {
        let p = poly(rng, ring, nvars, degree, 0.5);
        if !p.is_zero() {
            return p;
        }
    }
}

pub fn radius<R: Rng>(rng: &mut R, n: usize) -> PolyRadius {
    let choices = [Rational::new(1.into(), 2.into()), Rational::from_integer(1.into()), Rational::from_integer(2.into())];
    PolyRadius::new((0..n).map(|_| choices.choose(rng).unwrap().clone()).collect()).unwrap()
}

/// A series converging beyond `rho`; with probability one half it carries a
/// tail with `σ = (5/4)ρ` or `2ρ`.
pub fn series<R: Rng>(rng: &mut R, ring: &BanachRing, rho: &PolyRadius, degree: u32) -> TruncatedSeries {
    let n = rho.len();
    let p = poly(rng, ring, n, degree, 0.5);
    let f = TruncatedSeries::with_degree(ring.clone(), &p, degree).unwrap();
    if rng.gen_bool(0.5) {
        return f;
    }
    let factor = if rng.gen_bool(0.5) {
        Rational::new(5.into(), 4.into())
    } else {
        Rational::from_integer(2.into())
    };
    let sigma = PolyRadius::new(rho.components().iter().map(|r| r * &factor).collect()).unwrap();
    f.with_tail(Some(Tail { c: positive(rng), sigma })).unwrap()
}

/// A series over ℤ with integer coefficients, as the spectrum needs.
pub fn integer_poly<R: Rng>(rng: &mut R, nvars: usize, degree: u32) -> Poly {
    nonzero_poly(rng, &BanachRing::integers(), nvars, degree)
}
