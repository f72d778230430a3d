use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{ModuleMap, NormFlavor, WeightedFreeModule};
use crate::error::{Error, Result};
use crate::linalg::{column_hermite, smith_invariants, to_integer_matrix, ColumnHermite, Matrix};
use crate::scalars::{NormValue, Rational, RingKind};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Presentation {
    /// `ambient / image(relations)` with the residue norm.
    Cokernel { relations: ModuleMap },
    /// `{x ∈ ambient : map(x) = 0}` with the restricted norm; `basis` spans
    /// it over the ring.
    Kernel {
        map: ModuleMap,
        basis: Vec<Vec<Rational>>,
    },
}

/// A module given as a kernel or cokernel inside a weighted free module.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PresentedModule {
    ambient: WeightedFreeModule,
    presentation: Presentation,
}

impl PresentedModule {
    /// `M` itself, presented as a cokernel of the zero map.
    pub fn free(ambient: WeightedFreeModule) -> Self {
        let zero = WeightedFreeModule::new(ambient.ring().clone(), Vec::new(), ambient.flavor())
            .expect("flavor already validated");
        let relations = ModuleMap::zero(zero, ambient.clone()).unwrap();
        PresentedModule {
            ambient,
            presentation: Presentation::Cokernel { relations },
        }
    }

    pub fn ambient(&self) -> &WeightedFreeModule {
        &self.ambient
    }

    pub fn presentation(&self) -> &Presentation {
        &self.presentation
    }

    pub fn relations(&self) -> Result<&ModuleMap> {
        match &self.presentation {
            Presentation::Cokernel { relations } => Ok(relations),
            Presentation::Kernel { .. } => Err(Error::NotCokernelForm),
        }
    }

    pub fn kernel_basis(&self) -> Option<&[Vec<Rational>]> {
        match &self.presentation {
            Presentation::Kernel { basis, .. } => Some(basis),
            Presentation::Cokernel { .. } => None,
        }
    }

    /// The same presentation with every free module switched to `flavor`.
    pub fn with_flavor(&self, flavor: NormFlavor) -> Result<Self> {
        let presentation = match &self.presentation {
            Presentation::Cokernel { relations } => Presentation::Cokernel {
                relations: relations.with_flavors(flavor, flavor)?,
            },
            Presentation::Kernel { map, basis } => Presentation::Kernel {
                map: map.with_flavors(flavor, map.target().flavor())?,
                basis: basis.clone(),
            },
        };
        Ok(PresentedModule {
            ambient: self.ambient.with_flavor(flavor)?,
            presentation,
        })
    }

    fn relation_hermite(&self) -> Result<ColumnHermite> {
        let rel = self.relations()?;
        if !self.ambient.ring().is_lattice() {
            return Err(Error::UnsupportedRing(self.ambient.ring().to_string()));
        }
        let a = to_integer_matrix(&rel.matrix().to_rows()).expect("ring elements are integers");
        Ok(column_hermite(&a, rel.source().rank()))
    }

    /// Whether `v` represents the zero class (cokernel) or lies in the
    /// module (kernel).
    pub fn class_is_zero(&self, v: &[Rational]) -> Result<bool> {
        self.ambient.check_vector(v)?;
        match &self.presentation {
            Presentation::Kernel { .. } => Ok(v.iter().all(Zero::is_zero)),
            Presentation::Cokernel { relations } => {
                if self.ambient.ring().is_lattice() {
                    let h = self.relation_hermite()?;
                    Ok(h.coordinates(&int_vec(v)).is_some())
                } else {
                    Ok(relations.matrix().solve(v).is_some())
                }
            }
        }
    }

    /// Whether the module is zero.
    pub fn is_zero(&self) -> Result<bool> {
        match &self.presentation {
            Presentation::Kernel { basis, .. } => Ok(basis.is_empty()),
            Presentation::Cokernel { relations } => {
                let n = self.ambient.rank();
                if self.ambient.ring().is_lattice() {
                    Ok(self.elementary_divisors()?.iter().filter(|d| d.is_one()).count() == n)
                } else {
                    Ok(relations.matrix().rank() == n)
                }
            }
        }
    }

    /// Invariant factors of the relation lattice (integer rings only); the
    /// cokernel is `⊕ ℤ/d_i ⊕ ℤ^{n-r}`.
    pub fn elementary_divisors(&self) -> Result<Vec<BigInt>> {
        let rel = self.relations()?;
        if !self.ambient.ring().is_lattice() {
            return Err(Error::UnsupportedRing(self.ambient.ring().to_string()));
        }
        let a = to_integer_matrix(&rel.matrix().to_rows()).unwrap();
        Ok(smith_invariants(&a, rel.source().rank()))
    }

    /// One representative per class when the cokernel is finite, or `None`
    /// when it is infinite or has more than `limit` classes.
    pub fn finite_class_representatives(&self, limit: usize) -> Result<Option<Vec<Vec<Rational>>>> {
        let h = self.relation_hermite()?;
        let n = self.ambient.rank();
        if h.rank < n {
            return Ok(None);
        }
        let diag: Vec<BigInt> = (0..n).map(|t| h.h[t][t].clone()).collect();
        let total = diag.iter().fold(BigInt::one(), |a, d| a * d);
        if total > BigInt::from(limit) {
            return Ok(None);
        }
        let mut reps: Vec<Vec<Rational>> = vec![Vec::new()];
        for d in &diag {
            let d: i64 = d.try_into().unwrap();
            reps = reps
                .into_iter()
                .flat_map(|r| {
                    (0..d).map(move |x| {
                        let mut r = r.clone();
                        r.push(Rational::from_integer(x.into()));
                        r
                    })
                })
                .collect();
        }
        Ok(Some(reps))
    }

    /// Norm of the element represented by `v`: the residue norm for a
    /// cokernel, the ambient norm for a kernel.
    pub fn element_norm(&self, v: &[Rational], search_bound: u32) -> Result<NormValue> {
        match &self.presentation {
            Presentation::Cokernel { .. } => residue_norm(self, v, search_bound),
            Presentation::Kernel { map, .. } => {
                let image = map.apply(v)?;
                if image.iter().any(|x| !x.is_zero()) {
                    return Err(Error::invalid("vector does not lie in the kernel"));
                }
                Ok(NormValue::exact(self.ambient.norm(v)?))
            }
        }
    }
}

fn int_vec(v: &[Rational]) -> Vec<BigInt> {
    v.iter().map(|x| x.to_integer()).collect()
}

fn to_rat(v: &[BigInt]) -> Vec<Rational> {
    v.iter().map(|x| Rational::from_integer(x.clone())).collect()
}

/// The residue norm `inf_k ‖v + R k‖` of the class of `v`.
///
/// Over ℤ with the usual absolute value this runs an exact branch-and-bound
/// over the Hermite basis of the relation lattice; a coordinate range is
/// clipped to `[-search_bound, search_bound]`, and when that happens only
/// the upper bound is certified (`lo = 0`). Over ℤ with the trivial
/// absolute value the norm depends only on supports and is computed
/// exactly.
pub fn residue_norm(m: &PresentedModule, v: &[Rational], search_bound: u32) -> Result<NormValue> {
    m.relations()?;
    let amb = m.ambient();
    amb.check_vector(v)?;
    let ring = amb.ring();
    let h = m.relation_hermite()?;
    let x = int_vec(v);
    if h.coordinates(&x).is_some() {
        return Ok(NormValue::zero());
    }
    let value = match ring.kind() {
        RingKind::IntegersTrivial => {
            let (best, _) = trivial_residue(amb, &m.relations()?.matrix().to_rows(), &x)?;
            return Ok(NormValue::exact(best * ring.scale()));
        }
        RingKind::IntegersArchimedean => {
            let mut search = Search {
                weights: amb.weights(),
                h: &h,
                bound: BigInt::from(search_bound),
                best: amb.scale_free_norm(v),
                best_vec: x.clone(),
                clipped: false,
            };
            let first = h.pivot_rows.first().copied().unwrap_or(x.len());
            let partial = weighted_l1(amb.weights(), &x, 0..first);
            search.run(0, x, partial);
            let hi = search.best * ring.scale();
            if search.clipped {
                NormValue::new(Rational::zero(), hi)
            } else {
                NormValue::exact(hi)
            }
        }
        _ => unreachable!("lattice rings are integer kinds"),
    };
    Ok(value)
}

fn weighted_l1(w: &[Rational], x: &[BigInt], rows: std::ops::Range<usize>) -> Rational {
    rows.filter(|&i| !x[i].is_zero())
        .map(|i| &w[i] * Rational::from_integer(x[i].abs()))
        .sum()
}

struct Search<'a> {
    weights: &'a [Rational],
    h: &'a ColumnHermite,
    bound: BigInt,
    best: Rational,
    best_vec: Vec<BigInt>,
    clipped: bool,
}

impl Search<'_> {
    fn run(&mut self, t: usize, x: Vec<BigInt>, partial: Rational) {
        let h = self.h;
        if t == h.rank {
            if partial < self.best {
                self.best = partial;
                self.best_vec = x;
            }
            return;
        }
        let p = h.pivot_rows[t];
        let next = h.pivot_rows.get(t + 1).copied().unwrap_or(x.len());
        let d = Rational::from_integer(h.h[p][t].clone());
        let a = Rational::from_integer(x[p].clone());
        let reach = (&self.best - &partial) / &self.weights[p];
        if reach.is_negative() {
            return;
        }
        let mut lo = ((-&reach - &a) / &d).ceil().to_integer();
        let mut hi = ((&reach - &a) / &d).floor().to_integer();
        if lo < -&self.bound {
            lo = -&self.bound;
            self.clipped = true;
        }
        if hi > self.bound {
            hi = self.bound.clone();
            self.clipped = true;
        }
        if lo > hi {
            return;
        }
        // closest candidates first so the bound tightens early
        let centre = (-&a / &d).round().to_integer().clamp(lo.clone(), hi.clone());
        let mut order = vec![centre.clone()];
        let mut k = BigInt::one();
        loop {
            let (down, up) = (&centre - &k, &centre + &k);
            let (dn_ok, up_ok) = (down >= lo, up <= hi);
            if !dn_ok && !up_ok {
                break;
            }
            if up_ok {
                order.push(up);
            }
            if dn_ok {
                order.push(down);
            }
            k += 1;
        }
        for y in order {
            let mut x2 = x.clone();
            if !y.is_zero() {
                for (i, xi) in x2.iter_mut().enumerate().skip(p) {
                    *xi += &y * &h.h[i][t];
                }
            }
            let part = &partial + weighted_l1(self.weights, &x2, p..next);
            if part < self.best || (t + 1 == h.rank && part <= self.best) {
                self.run(t + 1, x2, part);
            }
        }
    }
}

/// Exact residue norm over ℤ with the trivial absolute value: the cheapest
/// support pattern reachable inside the coset.
fn trivial_residue(
    amb: &WeightedFreeModule,
    rel_rows: &[Vec<Rational>],
    x: &[BigInt],
) -> Result<(Rational, u32)> {
    let n = x.len();
    if n > 20 {
        return Err(Error::invalid("trivial-norm residue limited to rank 20"));
    }
    let rel = to_integer_matrix(rel_rows).unwrap();
    let k = rel.first().map_or(0, Vec::len);
    let cost = |mask: u32| {
        (0..n)
            .filter(|i| mask >> i & 1 == 1)
            .fold(Rational::zero(), |acc, i| amb.flavor().combine(acc, amb.weights()[i].clone()))
    };
    let mut masks: Vec<(Rational, u32)> = (0..(1u32 << n)).map(|m| (cost(m), m)).collect();
    masks.sort();
    for (c, mask) in masks {
        let outside: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 0).collect();
        let sub: Vec<Vec<BigInt>> = outside.iter().map(|&i| rel[i].clone()).collect();
        let target: Vec<BigInt> = outside.iter().map(|&i| -&x[i]).collect();
        if column_hermite(&sub, k).coordinates(&target).is_some() {
            return Ok((c, mask));
        }
    }
    unreachable!("the full support is always reachable")
}

/// `ker f` with the restricted norm.
///
/// Over ℤ the basis is a canonical basis of the saturated integer kernel;
/// over ℚ it is a basis of the rational nullspace.
pub fn kernel(f: &ModuleMap) -> PresentedModule {
    let n = f.source().rank();
    let basis: Vec<Vec<BigInt>> = if f.source().ring().is_lattice() {
        let a = to_integer_matrix(&f.matrix().to_rows()).unwrap();
        column_hermite(&a, n).kernel_basis()
    } else {
        f.matrix()
            .nullspace()
            .into_iter()
            .map(|v| primitive_integer(&v))
            .collect()
    };
    let basis = canonical_basis(basis, n);
    PresentedModule {
        ambient: f.source().clone(),
        presentation: Presentation::Kernel {
            map: f.clone(),
            basis: basis.iter().map(|v| to_rat(v)).collect(),
        },
    }
}

/// Clears denominators and common factors of a rational vector.
fn primitive_integer(v: &[Rational]) -> Vec<BigInt> {
    let l = v.iter().fold(BigInt::one(), |l, x| l.lcm(x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| (x * Rational::from_integer(l.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    if g.is_zero() {
        ints
    } else {
        ints.into_iter().map(|x| x / &g).collect()
    }
}

/// Hermite-normalizes a list of vectors so equal lattices get equal bases.
fn canonical_basis(vectors: Vec<Vec<BigInt>>, n: usize) -> Vec<Vec<BigInt>> {
    if vectors.is_empty() {
        return vectors;
    }
    let k = vectors.len();
    let a: Vec<Vec<BigInt>> = (0..n).map(|i| vectors.iter().map(|v| v[i].clone()).collect()).collect();
    let h = column_hermite(&a, k);
    (0..h.rank).map(|t| h.basis_column(t)).collect()
}

/// `coker f = target / image(f)` with the residue norm.
pub fn cokernel(f: &ModuleMap) -> PresentedModule {
    PresentedModule {
        ambient: f.target().clone(),
        presentation: Presentation::Cokernel { relations: f.clone() },
    }
}

/// The column space of a kernel basis as a map into the ambient module, so
/// that `ambient / ker f` can be presented as a cokernel.
pub(crate) fn kernel_inclusion(k: &PresentedModule) -> Result<ModuleMap> {
    let basis = k.kernel_basis().ok_or(Error::invalid("not a kernel presentation"))?;
    let amb = k.ambient();
    let src = WeightedFreeModule::unit_weights(amb.ring().clone(), basis.len(), amb.flavor())?;
    let m = Matrix::from_columns(basis, amb.rank())?;
    ModuleMap::new(src, amb.clone(), m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::{int, BanachRing};

    fn ints(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| int(x)).collect()
    }

    fn z_map(src: &[i64], tgt: &[i64], rows: &[&[i64]]) -> ModuleMap {
        let z = BanachRing::integers();
        ModuleMap::from_rows(
            WeightedFreeModule::new(z.clone(), ints(src), NormFlavor::Sum).unwrap(),
            WeightedFreeModule::new(z, ints(tgt), NormFlavor::Sum).unwrap(),
            rows.iter().map(|r| ints(r)).collect(),
        )
        .unwrap()
    }

    #[test]
    fn residue_mod_two() {
        let c = cokernel(&z_map(&[1], &[1], &[&[2]]));
        assert_eq!(residue_norm(&c, &ints(&[1]), 5).unwrap(), NormValue::exact(int(1)));
        assert_eq!(residue_norm(&c, &ints(&[3]), 5).unwrap(), NormValue::exact(int(1)));
        assert_eq!(residue_norm(&c, &ints(&[0]), 5).unwrap(), NormValue::zero());
        assert_eq!(residue_norm(&c, &ints(&[4]), 5).unwrap(), NormValue::zero());
    }

    #[test]
    fn residue_weighted_plane() {
        // lattice spanned by (3, 1); class of (1, 0) has reps (1 + 3k, k)
        let c = cokernel(&z_map(&[1], &[1, 5], &[&[3], &[1]]));
        assert_eq!(residue_norm(&c, &ints(&[1, 0]), 10).unwrap(), NormValue::exact(int(1)));
        let c = cokernel(&z_map(&[1], &[1, 1], &[&[3], &[1]]));
        // (2, 0) -> (-1, -1) has norm 2
        assert_eq!(residue_norm(&c, &ints(&[2, 0]), 10).unwrap(), NormValue::exact(int(2)));
    }

    #[test]
    fn clipped_search_reports_only_upper_bound() {
        let c = cokernel(&z_map(&[1], &[1], &[&[1]]));
        // every class is zero here, so use a lattice that needs a long walk
        assert!(residue_norm(&c, &ints(&[7]), 1).unwrap().is_exact());
        let c = cokernel(&z_map(&[1], &[1, 1], &[&[1], &[1]]));
        let r = residue_norm(&c, &ints(&[9, 0]), 2).unwrap();
        assert_eq!(*r.lo(), int(0));
        assert!(*r.upper() <= int(9));
    }

    #[test]
    fn trivial_ring_residue() {
        let t = BanachRing::integers_trivial();
        let f = ModuleMap::from_rows(
            WeightedFreeModule::new(t.clone(), ints(&[1]), NormFlavor::Sum).unwrap(),
            WeightedFreeModule::new(t, ints(&[2, 3]), NormFlavor::Sum).unwrap(),
            vec![ints(&[1]), ints(&[1])],
        )
        .unwrap();
        let c = cokernel(&f);
        // (0, 1) ~ (-1, 0): cheaper support is the first coordinate
        assert_eq!(residue_norm(&c, &ints(&[0, 1]), 3).unwrap(), NormValue::exact(int(2)));
    }

    #[test]
    fn residue_errors() {
        let k = kernel(&z_map(&[1, 1], &[1], &[&[1, -1]]));
        assert_eq!(residue_norm(&k, &ints(&[1, 1]), 3), Err(Error::NotCokernelForm));
        let q = BanachRing::rationals();
        let m = WeightedFreeModule::unit_weights(q, 1, NormFlavor::Sum).unwrap();
        let c = cokernel(&ModuleMap::identity(&m));
        assert!(matches!(residue_norm(&c, &ints(&[1]), 3), Err(Error::UnsupportedRing(_))));
    }

    #[test]
    fn kernels_and_cokernels() {
        let k = kernel(&z_map(&[1, 1], &[1], &[&[1, -1]]));
        assert_eq!(k.kernel_basis().unwrap(), &[ints(&[1, 1])]);
        let k = kernel(&z_map(&[1, 1], &[1], &[&[2, 4]]));
        assert_eq!(k.kernel_basis().unwrap(), &[ints(&[2, -1])]);

        let c = cokernel(&z_map(&[1], &[1], &[&[2]]));
        let reps = c.finite_class_representatives(100).unwrap().unwrap();
        assert_eq!(reps, vec![ints(&[0]), ints(&[1])]);
        let norms: Vec<_> = reps.iter().map(|r| residue_norm(&c, r, 5).unwrap()).collect();
        assert_eq!(norms, vec![NormValue::zero(), NormValue::exact(int(1))]);
        assert_eq!(c.elementary_divisors().unwrap(), vec![BigInt::from(2)]);

        let id = z_map(&[2, 3], &[2, 3], &[&[1, 0], &[0, 1]]);
        assert!(cokernel(&id).is_zero().unwrap());
        assert!(!c.is_zero().unwrap());
    }

    #[test]
    fn rational_kernel() {
        let q = BanachRing::padic(3).unwrap();
        let f = ModuleMap::from_rows(
            WeightedFreeModule::unit_weights(q.clone(), 2, NormFlavor::Max).unwrap(),
            WeightedFreeModule::unit_weights(q, 1, NormFlavor::Max).unwrap(),
            vec![vec![int(1) / int(2), int(3)]],
        )
        .unwrap();
        let k = kernel(&f);
        assert_eq!(k.kernel_basis().unwrap(), &[ints(&[6, -1])]);
    }
}
