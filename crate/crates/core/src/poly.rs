//! Sparse multivariate polynomials over ℚ and degree-truncated ideal spans.

use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_traits::{One, Zero};
use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use crate::linalg::{EchelonBasis, Insertion, SparseVec};
use crate::scalars::{format_rational, Rational};

pub type Exponent = Vec<u32>;

pub fn total_degree(e: &[u32]) -> u32 {
    e.iter().sum()
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<Exponent, Rational>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Poly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        Self::monomial(vec![0; nvars], c)
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Rational::one())
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Self::monomial(e, Rational::one())
    }

    pub fn monomial(exp: Exponent, c: Rational) -> Self {
        let mut p = Poly::zero(exp.len());
        p.add_term(exp, c);
        p
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Exponent, Rational)>) -> Self {
        let mut p = Poly::zero(nvars);
        for (e, c) in terms {
            assert_eq!(e.len(), nvars, "exponent length");
            p.add_term(e, c);
        }
        p
    }

    pub fn add_term(&mut self, exp: Exponent, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(exp) {
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
            Entry::Vacant(v) => {
                v.insert(c);
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &BTreeMap<Exponent, Rational> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, e: &[u32]) -> Rational {
        self.terms.get(e).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| total_degree(e)).max()
    }

    /// Largest exponent of variable `i`.
    pub fn degree_in(&self, i: usize) -> u32 {
        self.terms.keys().map(|e| e[i]).max().unwrap_or(0)
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Poly {
        self.scale(&-Rational::one())
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.nvars);
        }
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, x)| (e.clone(), x * c)).collect(),
        }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        self.mul_truncated(other, None)
    }

    /// Product with every monomial of total degree above `max_deg` dropped.
    pub fn mul_truncated(&self, other: &Poly, max_deg: Option<u32>) -> Poly {
        assert_eq!(self.nvars, other.nvars);
        let mut acc: BTreeMap<Exponent, Rational> = BTreeMap::new();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Exponent = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                if max_deg.is_some_and(|d| total_degree(&e) > d) {
                    continue;
                }
                *acc.entry(e).or_insert_with(Rational::zero) += c1 * c2;
            }
        }
        acc.retain(|_, c| !c.is_zero());
        Poly {
            nvars: self.nvars,
            terms: acc,
        }
    }

    pub fn pow(&self, k: u32) -> Poly {
        let mut out = Poly::one(self.nvars);
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    /// Drops monomials of total degree above `d`.
    pub fn truncate(&self, d: u32) -> Poly {
        Poly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| total_degree(e) <= d)
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
        }
    }

    /// Drops monomials whose exponent in variable `i` exceeds `d`.
    pub fn truncate_in(&self, i: usize, d: u32) -> Poly {
        Poly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| e[i] <= d)
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
        }
    }

    /// The same polynomial in `nvars ≥ self.nvars` variables.
    pub fn extend_vars(&self, nvars: usize) -> Poly {
        assert!(nvars >= self.nvars);
        Poly {
            nvars,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| {
                    let mut e = e.clone();
                    e.resize(nvars, 0);
                    (e, c.clone())
                })
                .collect(),
        }
    }

    /// Renames variable `i` to `offset + i` inside `nvars` variables.
    pub fn embed(&self, nvars: usize, offset: usize) -> Poly {
        assert!(offset + self.nvars <= nvars);
        Poly {
            nvars,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| {
                    let mut out = vec![0; nvars];
                    out[offset..offset + e.len()].copy_from_slice(e);
                    (out, c.clone())
                })
                .collect(),
        }
    }

    /// Substitutes `images[i]` for variable `i`.
    pub fn substitute(&self, images: &[Poly]) -> Poly {
        self.substitute_into(images, images.first().map_or(0, Poly::nvars))
    }

    /// [`Poly::substitute`] with the target arity given explicitly, which
    /// matters when there are no images.
    pub fn substitute_into(&self, images: &[Poly], n_out: usize) -> Poly {
        assert_eq!(images.len(), self.nvars);
        let mut cache: HashMap<(usize, u32), Poly> = HashMap::new();
        let mut out = Poly::zero(n_out);
        for (e, c) in &self.terms {
            let mut term = Poly::constant(n_out, c.clone());
            for (i, &k) in e.iter().enumerate() {
                if k > 0 {
                    let p = cache.entry((i, k)).or_insert_with(|| images[i].pow(k));
                    term = term.mul(p);
                }
            }
            out = out.add(&term);
        }
        out
    }

    pub fn eval(&self, point: &[Rational]) -> Rational {
        self.terms
            .iter()
            .map(|(e, c)| {
                e.iter()
                    .zip(point)
                    .fold(c.clone(), |acc, (&k, x)| acc * num_traits::pow(x.clone(), k as usize))
            })
            .sum()
    }
}

/// Serialized as `[[exponent, "n/d"], ...]`.
impl Serialize for Poly {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.terms.len()))?;
        for (e, c) in &self.terms {
            seq.serialize_element(&(e, format_rational(c)))?;
        }
        seq.end()
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (k, (e, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{c}")?;
            for (i, &d) in e.iter().enumerate() {
                match d {
                    0 => {}
                    1 => write!(f, "*x{}", i + 1)?,
                    _ => write!(f, "*x{}^{d}", i + 1)?,
                }
            }
        }
        Ok(())
    }
}

/// All monomials of total degree ≤ `max_deg`, highest degree first.
///
/// Echelon bases over this ordering have a useful property: a vector of
/// the span whose leading monomial has degree ≤ d lies entirely in degree
/// ≤ d, so `J ∩ V_d` is spanned by the rows with such leading monomials.
#[derive(Clone, Debug)]
pub struct MonomialSpace {
    nvars: usize,
    max_deg: u32,
    monos: Vec<Exponent>,
    index: HashMap<Exponent, usize>,
}

fn monomials_of_degree(nvars: usize, d: u32) -> Vec<Exponent> {
    if nvars == 0 {
        return if d == 0 { vec![Vec::new()] } else { Vec::new() };
    }
    let mut out = Vec::new();
    for first in (0..=d).rev() {
        for mut rest in monomials_of_degree(nvars - 1, d - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

impl MonomialSpace {
    pub fn new(nvars: usize, max_deg: u32) -> Self {
        let monos: Vec<Exponent> = (0..=max_deg)
            .rev()
            .flat_map(|d| monomials_of_degree(nvars, d))
            .collect();
        let index = monos.iter().enumerate().map(|(i, m)| (m.clone(), i)).collect();
        MonomialSpace {
            nvars,
            max_deg,
            monos,
            index,
        }
    }

    pub fn dim(&self) -> usize {
        self.monos.len()
    }

    pub fn max_deg(&self) -> u32 {
        self.max_deg
    }

    pub fn monomials(&self) -> &[Exponent] {
        &self.monos
    }

    /// Number of monomials of degree ≤ d.
    pub fn dim_up_to(&self, d: u32) -> usize {
        self.monos.iter().filter(|m| total_degree(m) <= d).count()
    }

    pub fn to_sparse(&self, p: &Poly) -> Option<SparseVec> {
        let mut v: SparseVec = p
            .terms
            .iter()
            .map(|(e, c)| self.index.get(e).map(|&i| (i, c.clone())))
            .collect::<Option<_>>()?;
        v.sort_by_key(|(i, _)| *i);
        Some(v)
    }

    pub fn from_sparse(&self, v: &SparseVec) -> Poly {
        Poly::from_terms(self.nvars, v.iter().map(|(i, c)| (self.monos[*i].clone(), c.clone())))
    }
}

/// The span of `{m·g : g ∈ gens, deg(m·g) ≤ E}`, an approximation of the
/// ideal `(gens)` from below in degree ≤ E.
pub struct TruncatedIdeal {
    space: MonomialSpace,
    basis: EchelonBasis,
    tags: Vec<(usize, Exponent)>,
    ngens: usize,
}

impl TruncatedIdeal {
    pub fn new(gens: &[Poly], nvars: usize, degree: u32) -> Self {
        let space = MonomialSpace::new(nvars, degree);
        let mut basis = EchelonBasis::new();
        let mut tags = Vec::new();
        for (k, g) in gens.iter().enumerate() {
            let Some(dg) = g.degree() else {
                continue;
            };
            if dg > degree {
                continue;
            }
            for mono in space.monomials().iter().filter(|m| total_degree(m) + dg <= degree) {
                let shifted = g.mul(&Poly::monomial(mono.clone(), Rational::one()));
                let v = space.to_sparse(&shifted).expect("degree checked");
                let tag = vec![(tags.len(), Rational::one())];
                tags.push((k, mono.clone()));
                if let Insertion::Added = basis.insert_tagged(v, tag) {}
            }
        }
        TruncatedIdeal {
            space,
            basis,
            tags,
            ngens: gens.len(),
        }
    }

    pub fn space(&self) -> &MonomialSpace {
        &self.space
    }

    pub fn degree(&self) -> u32 {
        self.space.max_deg
    }

    pub fn contains(&self, p: &Poly) -> bool {
        match self.space.to_sparse(p) {
            Some(v) => self.basis.contains(v),
            None => false,
        }
    }

    /// Cofactors `c_k` with `p = Σ c_k g_k`, if `p` lies in the span.
    pub fn cofactors(&self, p: &Poly) -> Option<Vec<Poly>> {
        let v = self.space.to_sparse(p)?;
        let combo = self.basis.express(v)?;
        let mut out = vec![Poly::zero(self.space.nvars); self.ngens];
        for (t, c) in combo {
            let (k, mono) = &self.tags[t];
            out[*k].add_term(mono.clone(), c);
        }
        Some(out)
    }

    /// The canonical remainder of `p` modulo the span (`None` when `p` has
    /// degree above the truncation).
    pub fn normal_form(&self, p: &Poly) -> Option<Poly> {
        let v = self.space.to_sparse(p)?;
        Some(self.space.from_sparse(&self.basis.reduce(v)))
    }

    /// Monomials of degree ≤ d that are not leading monomials of the span;
    /// their classes form a basis of `V_d / (span ∩ V_d)`.
    pub fn standard_monomials(&self, d: u32) -> Vec<Exponent> {
        let pivots: std::collections::HashSet<usize> = self.basis.pivot_columns().collect();
        (0..self.space.dim())
            .filter(|i| !pivots.contains(i) && total_degree(&self.space.monos[*i]) <= d)
            .map(|i| self.space.monos[i].clone())
            .collect()
    }

    /// `dim(span ∩ V_d)` for `d ≤ E`.
    pub fn dim_up_to(&self, d: u32) -> usize {
        self.basis
            .pivot_columns()
            .filter(|&c| total_degree(&self.space.monos[c]) <= d)
            .count()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::int;

    fn x(n: usize, i: usize) -> Poly {
        Poly::var(n, i)
    }

    #[test]
    fn arithmetic() {
        let p = Poly::one(1).add(&x(1, 0));
        let q = Poly::one(1).sub(&x(1, 0));
        let pq = p.mul(&q);
        assert_eq!(pq, Poly::one(1).sub(&x(1, 0).pow(2)));
        assert_eq!(p.pow(3).coeff(&[2]), int(3));
        assert_eq!(p.pow(5).truncate(2).degree(), Some(2));
        assert!(p.sub(&p).is_zero());
        assert_eq!(p.eval(&[int(2)]), int(3));
    }

    #[test]
    fn substitution() {
        // x ↦ y², evaluated on 1 + x
        let p = Poly::one(1).add(&x(1, 0));
        let q = p.substitute(&[x(2, 1).pow(2)]);
        assert_eq!(q, Poly::one(2).add(&x(2, 1).pow(2)));
    }

    #[test]
    fn monomial_order_is_graded() {
        let s = MonomialSpace::new(2, 3);
        assert_eq!(s.dim(), 10);
        let degs: Vec<u32> = s.monomials().iter().map(|m| total_degree(m)).collect();
        assert!(degs.windows(2).all(|w| w[0] >= w[1]));
        assert_eq!(s.dim_up_to(1), 3);
    }

    #[test]
    fn ideal_membership_and_cofactors() {
        // (x - y, y^2 - 1) in two variables
        let g1 = x(2, 0).sub(&x(2, 1));
        let g2 = x(2, 1).pow(2).sub(&Poly::one(2));
        let ideal = TruncatedIdeal::new(&[g1.clone(), g2.clone()], 2, 4);
        let target = x(2, 0).pow(2).sub(&Poly::one(2));
        assert!(ideal.contains(&target));
        let c = ideal.cofactors(&target).unwrap();
        assert_eq!(c[0].mul(&g1).add(&c[1].mul(&g2)), target);
        assert!(!ideal.contains(&x(2, 0)));
        let nf = ideal.normal_form(&x(2, 0).pow(3)).unwrap();
        assert!(ideal.contains(&x(2, 0).pow(3).sub(&nf)));
        assert_eq!(nf.degree(), Some(1));
    }
}
