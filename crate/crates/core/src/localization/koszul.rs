use std::collections::HashMap;

use num_traits::{One, Zero};
use serde::Serialize;

use super::LocalizationSpec;
use crate::error::{Error, Result};
use crate::linalg::{EchelonBasis, Matrix, SparseVec};
use crate::poly::{Exponent, MonomialSpace, Poly, TruncatedIdeal};
use crate::scalars::Rational;
use crate::series::{DaggerPresentation, TruncatedSeries};

/// Extra degrees of ideal span used above the working degree.
pub(crate) const IDEAL_SLACK: u32 = 2;

/// `V_D / (J_E ∩ V_D)` with the standard monomials as basis.
pub(crate) struct Quotient {
    nvars: usize,
    ideal: TruncatedIdeal,
    basis: Vec<Exponent>,
    index: HashMap<Exponent, usize>,
}

impl Quotient {
    pub(crate) fn new(relations: &[Poly], nvars: usize, degree: u32, span_degree: u32) -> Self {
        let ideal = TruncatedIdeal::new(relations, nvars, span_degree.max(degree));
        let basis = ideal.standard_monomials(degree);
        let index = basis.iter().enumerate().map(|(i, e)| (e.clone(), i)).collect();
        Quotient {
            nvars,
            ideal,
            basis,
            index,
        }
    }

    pub(crate) fn dim(&self) -> usize {
        self.basis.len()
    }

    pub(crate) fn basis(&self) -> &[Exponent] {
        &self.basis
    }

    /// Coordinates of the class of `p`, or `None` when `p` does not reduce
    /// into the basis.
    pub(crate) fn coords(&self, p: &Poly) -> Option<Vec<Rational>> {
        let nf = self.ideal.normal_form(p)?;
        let mut out = vec![Rational::zero(); self.dim()];
        for (e, c) in nf.terms() {
            out[*self.index.get(e)?] = c.clone();
        }
        Some(out)
    }

    pub(crate) fn element(&self, coords: &[Rational]) -> Poly {
        Poly::from_terms(
            self.nvars,
            self.basis.iter().zip(coords).map(|(e, c)| (e.clone(), c.clone())),
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict")]
pub enum KernelVerdict {
    Injective,
    KernelWitness { element: Poly },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict")]
pub enum KoszulVerdict {
    DerivedConcentratedDegree0 { degree: u32 },
    HMinus1Witness { degree: u32, element: Poly },
}

/// A nonzero class `a` of degree ≤ d with `φ·a ≡ 0`, if any.
fn multiplication_kernel(relations: &[Poly], nvars: usize, phi: &Poly, d: u32) -> Option<Poly> {
    let dphi = phi.degree().unwrap_or(0);
    let domain = Quotient::new(relations, nvars, d, d + IDEAL_SLACK);
    let target = Quotient::new(relations, nvars, d + dphi, d + IDEAL_SLACK + dphi);
    let columns: Vec<Vec<Rational>> = domain
        .basis()
        .iter()
        .map(|m| {
            let image = phi.mul(&Poly::monomial(m.clone(), Rational::one()));
            target.coords(&image).expect("degree within the target truncation")
        })
        .collect();
    if columns.is_empty() {
        return None;
    }
    let matrix = Matrix::from_columns(&columns, target.dim()).expect("consistent column lengths");
    matrix.nullspace().first().map(|v| domain.element(v))
}

/// Kernel of multiplication by `X − f` on `C⟨X⟩` truncated at degree d,
/// where `C` is given by its relations and `X` is a new last variable.
pub fn weierstrass_kernel_check(c: &DaggerPresentation, f: &Poly, d: u32) -> Result<KernelVerdict> {
    let n = c.nvars();
    if f.nvars() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: f.nvars(),
        });
    }
    let rels: Vec<Poly> = c.relation_polys().iter().map(|p| p.embed(n + 1, 0)).collect();
    let phi = Poly::var(n + 1, n).sub(&f.embed(n + 1, 0));
    Ok(match multiplication_kernel(&rels, n + 1, &phi, d) {
        None => KernelVerdict::Injective,
        Some(element) => KernelVerdict::KernelWitness { element },
    })
}

/// The Koszul differential of a one-variable localization, in the
/// variables of `A` followed by the new one.
fn koszul_differential(a: &DaggerPresentation, spec: &LocalizationSpec) -> Result<Poly> {
    if spec.added_vars() != 1 {
        return Err(Error::invalid("the Koszul check handles one added variable at a time"));
    }
    spec.validate(a)?;
    let n = a.nvars();
    let y = Poly::var(n + 1, n);
    match spec {
        LocalizationSpec::Weierstrass { f, .. } | LocalizationSpec::Laurent { f, .. } if f.len() == 1 => {
            Ok(y.sub(&f[0].to_poly().embed(n + 1, 0)))
        }
        LocalizationSpec::Laurent { g, .. } => Ok(g[0].to_poly().embed(n + 1, 0).mul(&y).sub(&Poly::one(n + 1))),
        _ => Err(Error::invalid("the Koszul check handles Weierstrass and Laurent steps")),
    }
}

/// Degree −1 cohomology of `B ⊗_A K`, where `K` is the two-term Koszul
/// complex of the localization and `images` gives the map `A → B` on the
/// variables of `A`. Truncated at degree d and compared with degree d − 2.
pub fn koszul_h_check(
    a: &DaggerPresentation,
    spec: &LocalizationSpec,
    b: &DaggerPresentation,
    images: &[Poly],
    d: u32,
) -> Result<KoszulVerdict> {
    let phi = koszul_differential(a, spec)?;
    if images.len() != a.nvars() {
        return Err(Error::DimensionMismatch {
            expected: a.nvars(),
            found: images.len(),
        });
    }
    let nb = b.nvars();
    if let Some(p) = images.iter().find(|p| p.nvars() != nb) {
        return Err(Error::DimensionMismatch {
            expected: nb,
            found: p.nvars(),
        });
    }
    let mut subst: Vec<Poly> = images.iter().map(|p| p.embed(nb + 1, 0)).collect();
    subst.push(Poly::var(nb + 1, nb));
    let phi_b = phi.substitute_into(&subst, nb + 1);
    let rels: Vec<Poly> = b.relation_polys().iter().map(|p| p.embed(nb + 1, 0)).collect();
    let verdict = |deg: u32| match multiplication_kernel(&rels, nb + 1, &phi_b, deg) {
        None => KoszulVerdict::DerivedConcentratedDegree0 { degree: deg },
        Some(element) => KoszulVerdict::HMinus1Witness { degree: deg, element },
    };
    if d < 2 {
        return Ok(verdict(d));
    }
    let (high, low) = rayon::join(|| verdict(d), || verdict(d - 2));
    let concentrated = |v: &KoszulVerdict| matches!(v, KoszulVerdict::DerivedConcentratedDegree0 { .. });
    if concentrated(&high) != concentrated(&low) {
        return Err(Error::TruncationTooSmall {
            degree: d,
            lower: d - 2,
        });
    }
    Ok(high)
}

/// Splits a polynomial in `n + 1` variables by the degree in the last one.
fn coefficients_in_last(p: &Poly, d: u32) -> Vec<Poly> {
    let n = p.nvars() - 1;
    let mut out = vec![Poly::zero(n); d as usize + 1];
    for (e, c) in p.terms() {
        let k = e[n] as usize;
        if k <= d as usize {
            out[k].add_term(e[..n].to_vec(), c.clone());
        }
    }
    out
}

/// `(gX − 1)·a` modulo `X^{d+1}`, with `X` the last variable of `a`.
pub fn apply_laurent_operator(g: &Poly, a: &Poly, d: u32) -> Poly {
    let n = g.nvars();
    let x = Poly::var(n + 1, n);
    g.embed(n + 1, 0).mul(&x).sub(&Poly::one(n + 1)).mul(a).truncate_in(n, d)
}

/// The unique `a` with `(gX − 1)·a ≡ t` modulo `X^{d+1}`, found by the
/// recursion `a_0 = −t_0`, `a_{i+1} = g·a_i − t_{i+1}` on the coefficients of
/// `X^i`. `g` lives in `n` variables and `t` in `n + 1`, `X` last; only the
/// stored coefficients are used.
pub fn laurent_solve(g: &TruncatedSeries, t: &TruncatedSeries, d: u32) -> Result<TruncatedSeries> {
    if g.ring() != t.ring() {
        return Err(Error::RingMismatch);
    }
    if t.nvars() != g.nvars() + 1 {
        return Err(Error::DimensionMismatch {
            expected: g.nvars() + 1,
            found: t.nvars(),
        });
    }
    let n = g.nvars();
    let gp = g.to_poly();
    let ts = coefficients_in_last(&t.to_poly(), d);
    let mut a = Poly::zero(n + 1);
    let mut current = ts[0].neg();
    for i in 0..=d as usize {
        let mut e_shift = vec![0; n + 1];
        e_shift[n] = i as u32;
        a = a.add(&current.embed(n + 1, 0).mul(&Poly::monomial(e_shift, Rational::one())));
        if i < d as usize {
            current = gp.mul(&current).sub(&ts[i + 1]);
        }
    }
    let degree = a.degree().unwrap_or(0);
    TruncatedSeries::with_degree(g.ring().clone(), &a, degree)
}

/// Dimension of the kernel of `a ↦ (gX − 1)a mod X^{d+1}` on polynomials
/// with coefficients of degree ≤ `coeff_degree` in the variables of `g`.
pub fn laurent_kernel_dim(g: &Poly, coeff_degree: u32, d: u32) -> usize {
    let n = g.nvars();
    let inner = MonomialSpace::new(n, coeff_degree);
    let dg = g.degree().unwrap_or(0);
    let outer = MonomialSpace::new(n + 1, coeff_degree + d * (dg + 1) + d);
    let mut basis = EchelonBasis::new();
    let mut dim = 0;
    for mono in inner.monomials() {
        for k in 0..=d {
            let mut e = mono.clone();
            e.push(k);
            let image = apply_laurent_operator(g, &Poly::monomial(e, Rational::one()), d);
            let v: SparseVec = outer.to_sparse(&image).expect("degree within the space");
            basis.insert(v);
            dim += 1;
        }
    }
    dim - basis.rank()
}
