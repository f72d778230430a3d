//! Weierstrass, Laurent and rational localizations of dagger presentations,
//! and exact truncated checks on their Koszul resolutions.
//!
//! All checks here work with the polynomial parts of the series involved:
//! an algebra `W^n(ρ)/I` is replaced by `ℚ[X]/I` in total degree ≤ D,
//! where the ideal is approximated from below by the span of `m·g` with
//! `deg(m·g)` at most a little above D.

mod gluing;
mod koszul;

pub use gluing::{idempotent_split, mayer_vietoris, MayerVietorisReport};
pub use koszul::{
    apply_laurent_operator, koszul_h_check, laurent_kernel_dim, laurent_solve,
    weierstrass_kernel_check, KernelVerdict, KoszulVerdict,
};

use num_traits::{One, Signed};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::poly::{Poly, TruncatedIdeal};
use crate::scalars::{serde_rational, Rational};
use crate::series::{DaggerPresentation, PolyRadius, TruncatedSeries};

/// Largest ideal truncation tried when searching for a unit-ideal witness.
pub const UNIT_SEARCH_DEGREE: u32 = 8;

#[allow(clippy::large_enum_variant)]
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LocalizationSpec {
    /// Adds `X_i` with relations `X_i − f_i`, radii `r`.
    Weierstrass { f: Vec<TruncatedSeries>, r: PolyRadius },
    /// Adds `X_i` with `X_i − f_i` (radii `r`), then `Y_j` with
    /// `g_j Y_j − 1` (radii `s`).
    Laurent {
        f: Vec<TruncatedSeries>,
        r: PolyRadius,
        g: Vec<TruncatedSeries>,
        s: PolyRadius,
    },
    /// Adds `X_i` with `h X_i − f_i`. `witness` holds cofactors
    /// `(c_h, c_1, …)` with `c_h h + Σ c_i f_i ≡ 1` modulo the algebra's
    /// relations; without it a bounded search is run.
    Rational {
        f: Vec<TruncatedSeries>,
        h: TruncatedSeries,
        r: PolyRadius,
        witness: Option<Vec<TruncatedSeries>>,
    },
}

impl LocalizationSpec {
    pub fn weierstrass(f: Vec<TruncatedSeries>, r: PolyRadius) -> Self {
        LocalizationSpec::Weierstrass { f, r }
    }

    pub fn laurent(g: Vec<TruncatedSeries>, s: PolyRadius) -> Self {
        LocalizationSpec::Laurent {
            f: Vec::new(),
            r: PolyRadius::new(Vec::new()).unwrap(),
            g,
            s,
        }
    }

    /// Number of variables the localization adds.
    pub fn added_vars(&self) -> usize {
        match self {
            LocalizationSpec::Weierstrass { f, .. } | LocalizationSpec::Rational { f, .. } => f.len(),
            LocalizationSpec::Laurent { f, g, .. } => f.len() + g.len(),
        }
    }

    /// Radii of the added variables, in order.
    pub fn added_radii(&self) -> PolyRadius {
        match self {
            LocalizationSpec::Weierstrass { r, .. } | LocalizationSpec::Rational { r, .. } => r.clone(),
            LocalizationSpec::Laurent { r, s, .. } => r.concat(s),
        }
    }

    fn series(&self) -> Vec<&TruncatedSeries> {
        match self {
            LocalizationSpec::Weierstrass { f, .. } => f.iter().collect(),
            LocalizationSpec::Laurent { f, g, .. } => f.iter().chain(g).collect(),
            LocalizationSpec::Rational { f, h, witness, .. } => f
                .iter()
                .chain(std::iter::once(h))
                .chain(witness.iter().flatten())
                .collect(),
        }
    }

    fn validate(&self, a: &DaggerPresentation) -> Result<()> {
        match self {
            LocalizationSpec::Weierstrass { f, r } | LocalizationSpec::Rational { f, r, .. } => {
                r.check_len(f.len())?
            }
            LocalizationSpec::Laurent { f, r, g, s } => {
                r.check_len(f.len())?;
                s.check_len(g.len())?;
            }
        }
        for series in self.series() {
            if series.ring() != a.ring() {
                return Err(Error::RingMismatch);
            }
            if series.nvars() != a.nvars() {
                return Err(Error::DimensionMismatch {
                    expected: a.nvars(),
                    found: series.nvars(),
                });
            }
        }
        Ok(())
    }
}

/// Tail radii for variables that no tail term involves.
fn fill_radius(rho: &PolyRadius) -> PolyRadius {
    PolyRadius::new(rho.components().iter().map(|r| r * Rational::from_integer(2.into())).collect())
        .expect("positive radii")
}

fn variable(a: &DaggerPresentation, nvars: usize, i: usize) -> Result<TruncatedSeries> {
    let mut e = vec![0; nvars];
    e[i] = 1;
    TruncatedSeries::monomial(a.ring().clone(), e, Rational::one())
}

/// The presentation of the localized algebra: new variables go after the
/// old ones, their radii are appended, and the defining relations are
/// added after the relations of `a`.
pub fn present_localization(a: &DaggerPresentation, spec: &LocalizationSpec) -> Result<DaggerPresentation> {
    spec.validate(a)?;
    let n = a.nvars();
    let rho = a.rho().concat(&spec.added_radii());
    let total = rho.len();
    let fill = fill_radius(&rho);
    let lift = |s: &TruncatedSeries| s.embed(total, 0, &fill);
    let mut relations = a.relations().iter().map(lift).collect::<Result<Vec<_>>>()?;
    match spec {
        LocalizationSpec::Weierstrass { f, .. } => {
            for (i, fi) in f.iter().enumerate() {
                relations.push(variable(a, total, n + i)?.sub(&lift(fi)?)?);
            }
        }
        LocalizationSpec::Laurent { f, g, .. } => {
            for (i, fi) in f.iter().enumerate() {
                relations.push(variable(a, total, n + i)?.sub(&lift(fi)?)?);
            }
            let one = TruncatedSeries::constant(a.ring().clone(), total, Rational::one())?;
            for (j, gj) in g.iter().enumerate() {
                relations.push(lift(gj)?.shift(n + f.len() + j)?.sub(&one)?);
            }
        }
        LocalizationSpec::Rational { f, h, witness, .. } => {
            unit_ideal_witness(a, h, f, witness.as_deref())?;
            let h = lift(h)?;
            for (i, fi) in f.iter().enumerate() {
                relations.push(h.shift(n + i)?.sub(&lift(fi)?)?);
            }
        }
    }
    DaggerPresentation::new(a.ring().clone(), rho, relations)
}

/// Cofactors `(c_h, c_1, …)` with `c_h h + Σ c_i f_i − 1` in the relation
/// ideal of `a`. A supplied witness is checked; otherwise the truncated
/// ideal `(h, f, relations)` is searched up to [`UNIT_SEARCH_DEGREE`].
pub fn unit_ideal_witness(
    a: &DaggerPresentation,
    h: &TruncatedSeries,
    f: &[TruncatedSeries],
    supplied: Option<&[TruncatedSeries]>,
) -> Result<Vec<Poly>> {
    let n = a.nvars();
    let gens: Vec<Poly> = std::iter::once(h).chain(f).map(TruncatedSeries::to_poly).collect();
    let rels = a.relation_polys();
    if let Some(w) = supplied {
        if w.len() != gens.len() {
            return Err(Error::DimensionMismatch {
                expected: gens.len(),
                found: w.len(),
            });
        }
        let cofactors: Vec<Poly> = w.iter().map(TruncatedSeries::to_poly).collect();
        let residue = cofactors
            .iter()
            .zip(&gens)
            .fold(Poly::one(n).neg(), |acc, (c, g)| acc.add(&c.mul(g)));
        let in_relations = match residue.degree() {
            None => true,
            Some(d) => TruncatedIdeal::new(&rels, n, d + 2).contains(&residue),
        };
        return if in_relations {
            Ok(cofactors)
        } else {
            Err(Error::UnitIdealWitnessMissing)
        };
    }
    let all: Vec<Poly> = gens.iter().chain(&rels).cloned().collect();
    for degree in 0..=UNIT_SEARCH_DEGREE {
        if let Some(mut c) = TruncatedIdeal::new(&all, n, degree).cofactors(&Poly::one(n)) {
            c.truncate(gens.len());
            return Ok(c);
        }
    }
    Err(Error::UnitIdealWitnessMissing)
}

/// A rational localization rewritten as a Laurent step `gY − 1` with radius
/// ε followed by a Weierstrass step `X_i − f_i Y`.
#[derive(Clone, Debug, Serialize)]
pub struct RationalFactorization {
    #[serde(with = "serde_rational")]
    pub epsilon: Rational,
    #[serde(skip)]
    pub laurent: LocalizationSpec,
    #[serde(skip)]
    pub weierstrass: LocalizationSpec,
    #[serde(skip)]
    pub composed: DaggerPresentation,
    /// Each relation of either presentation lies in the ideal of the other
    /// after identifying `Y` with `c_h + Σ c_i X_i`, checked by exact
    /// polynomial identities.
    pub generators_agree: bool,
}

/// Factors a rational localization with denominator `h` given a certified
/// lower bound `0 < σ ≤ |h|_sup`; the Laurent radius is `ε = 1/σ`.
pub fn rational_factor(
    a: &DaggerPresentation,
    spec: &LocalizationSpec,
    sup_lower: &Rational,
) -> Result<RationalFactorization> {
    let LocalizationSpec::Rational { f, h, r, witness } = spec else {
        return Err(Error::invalid("rational_factor needs a rational localization"));
    };
    if !sup_lower.is_positive() {
        return Err(Error::NonPositiveLowerBound);
    }
    spec.validate(a)?;
    let cofactors = unit_ideal_witness(a, h, f, witness.as_deref())?;
    let epsilon = sup_lower.recip();
    let n = a.nvars();
    let laurent = LocalizationSpec::laurent(vec![h.clone()], PolyRadius::new(vec![epsilon.clone()])?);
    let aw = present_localization(a, &laurent)?;
    let fill = fill_radius(aw.rho());
    let quotients = f
        .iter()
        .map(|fi| fi.embed(n + 1, 0, &fill)?.shift(n))
        .collect::<Result<Vec<_>>>()?;
    let weierstrass = LocalizationSpec::weierstrass(quotients, r.clone());
    let composed = present_localization(&aw, &weierstrass)?;
    let generators_agree = check_factorization(a, h, f, &cofactors);
    Ok(RationalFactorization {
        epsilon,
        laurent,
        weierstrass,
        composed,
        generators_agree,
    })
}

/// In variables `(x, Y, X_1..X_m)`: `hX_i − f_i = h(X_i − f_iY) + f_i(hY − 1)`
/// and `X_i − f_iY = Y(hX_i − f_i) − X_i(hY − 1)`; and `h·(c_h + Σ c_i X_i) − 1`
/// lies in the rational presentation's ideal.
fn check_factorization(a: &DaggerPresentation, h: &TruncatedSeries, f: &[TruncatedSeries], cofactors: &[Poly]) -> bool {
    let n = a.nvars();
    let m = f.len();
    let total = n + 1 + m;
    let h = h.to_poly().embed(total, 0);
    let y = Poly::var(total, n);
    let laurent_rel = h.mul(&y).sub(&Poly::one(total));
    let forward = f.iter().enumerate().all(|(i, fi)| {
        let fi = fi.to_poly().embed(total, 0);
        let xi = Poly::var(total, n + 1 + i);
        let rational_rel = h.mul(&xi).sub(&fi);
        let weier_rel = xi.sub(&fi.mul(&y));
        let back = h.mul(&weier_rel).add(&fi.mul(&laurent_rel));
        let there = y.mul(&rational_rel).sub(&xi.mul(&laurent_rel));
        back == rational_rel && there == weier_rel
    });
    // h·(c_h + Σ c_i X_i) − 1 − Σ c_i (hX_i − f_i) = c_h h + Σ c_i f_i − 1
    let lift = |c: &Poly| c.embed(total, 0);
    let inverse = cofactors[1..]
        .iter()
        .enumerate()
        .fold(lift(&cofactors[0]), |acc, (i, c)| acc.add(&lift(c).mul(&Poly::var(total, n + 1 + i))));
    let mut residue = lift(&cofactors[0]).mul(&h).sub(&Poly::one(total));
    let mut shifted = h.mul(&inverse).sub(&Poly::one(total));
    for (i, (fi, c)) in f.iter().zip(&cofactors[1..]).enumerate() {
        let fi = fi.to_poly().embed(total, 0);
        residue = residue.add(&lift(c).mul(&fi));
        let rel = h.mul(&Poly::var(total, n + 1 + i)).sub(&fi);
        shifted = shifted.sub(&lift(c).mul(&rel));
    }
    let residue_in_relations = match residue.degree() {
        None => true,
        Some(d) => {
            let rels: Vec<Poly> = a.relation_polys().iter().map(lift).collect();
            TruncatedIdeal::new(&rels, total, d + 2).contains(&residue)
        }
    };
    forward && shifted == residue && residue_in_relations
}

#[cfg(test)]
mod tests;
