use std::collections::BTreeMap;

use num_traits::{One, Zero};

use super::{DaggerPresentation, PolyRadius, Tail, TruncatedSeries};
use crate::error::{Error, Result};
use crate::poly::total_degree;
use crate::scalars::{BanachRing, Rational, RingKind};

/// Shrink factor applied to a tail radius when two tails share it.
fn shrink() -> Rational {
    Rational::new(15.into(), 16.into())
}

/// `max_k (k+1)θ^k`, so that `(k+1)σ^{-k} ≤ K·(θσ)^{-k}` for all `k`.
fn shrink_constant(theta: &Rational) -> Rational {
    let mut best = Rational::one();
    let mut pw = Rational::one();
    for k in 1u32.. {
        pw *= theta;
        let v = &pw * Rational::from_integer((k + 1).into());
        if v > best {
            best = v;
        } else {
            return best;
        }
    }
    unreachable!()
}

/// `M` with `|a_I| ≤ M·σ^{-I}` for every multi-index.
fn global_majorant(f: &TruncatedSeries, tail: &Tail) -> Rational {
    f.coeffs()
        .iter()
        .map(|(e, c)| f.ring().abs(c).unwrap() * tail.sigma.power(e))
        .fold(tail.c.clone(), Rational::max)
}

/// `Σ |b_K| σ^K` (Archimedean) or `max |b_K| σ^K`.
fn weighted_size(g: &TruncatedSeries, sigma: &PolyRadius) -> Rational {
    let terms = g.coeffs().iter().map(|(e, c)| g.ring().abs(c).unwrap() * sigma.power(e));
    if g.ring().non_archimedean() {
        terms.fold(Rational::zero(), Rational::max)
    } else {
        terms.sum()
    }
}

/// The product `fg`.
///
/// Coefficients up to degree `min(degree, D_f, D_g)` are exact, where a
/// factor's own bound only counts if it carries a tail. When at least one
/// factor has a tail, the result gets a tail majorant valid for all of its
/// coefficients. Without tails the product is taken in `R[X]/(deg > degree)`.
pub fn multiply(f: &TruncatedSeries, g: &TruncatedSeries, degree: u32) -> Result<TruncatedSeries> {
    f.same_ring(g)?;
    let mut d = degree;
    if f.tail().is_some() {
        d = d.min(f.degree_bound());
    }
    if g.tail().is_some() {
        d = d.min(g.degree_bound());
    }
    let product = f.to_poly().mul_truncated(&g.to_poly(), Some(d));
    let ring = f.ring();
    let cr = ring.mul_constant();
    let tail = match (f.tail(), g.tail()) {
        (None, None) => None,
        (Some(t), None) => Some(Tail {
            c: cr * global_majorant(f, t) * weighted_size(g, &t.sigma),
            sigma: t.sigma.clone(),
        }),
        (None, Some(t)) => Some(Tail {
            c: cr * global_majorant(g, t) * weighted_size(f, &t.sigma),
            sigma: t.sigma.clone(),
        }),
        (Some(tf), Some(tg)) => {
            let m = cr * global_majorant(f, tf) * global_majorant(g, tg);
            if ring.non_archimedean() {
                Some(Tail {
                    c: m,
                    sigma: tf.sigma.min(&tg.sigma),
                })
            } else {
                let theta = shrink();
                let k_theta = shrink_constant(&theta);
                let mut c = m;
                let mut sigma = Vec::with_capacity(f.nvars());
                for (a, b) in tf.sigma.components().iter().zip(tg.sigma.components()) {
                    let (s, big) = if a <= b { (a, b) } else { (b, a) };
                    if s < big {
                        c *= Rational::one() / (Rational::one() - s / big);
                        sigma.push(s.clone());
                    } else {
                        c *= &k_theta;
                        sigma.push(s * &theta);
                    }
                }
                Some(Tail {
                    c,
                    sigma: PolyRadius::new(sigma)?,
                })
            }
        }
    };
    TruncatedSeries::with_degree(ring.clone(), &product, d)?.with_tail(tail)
}

/// Moves a series over ℤ with the usual absolute value to another base.
///
/// Coefficients are kept; a tail constant is multiplied by
/// `s_target / s_source`, which is sound because `|a| ≤ |a|_∞` for every
/// nonzero integer under each built-in absolute value.
pub fn base_change(f: &TruncatedSeries, target: &BanachRing) -> Result<TruncatedSeries> {
    if f.ring().kind() != RingKind::IntegersArchimedean {
        return Err(Error::UnsupportedRing(format!(
            "base change starts from Z, got {}",
            f.ring()
        )));
    }
    let tail = f.tail().map(|t| Tail {
        c: &t.c * target.scale() / f.ring().scale(),
        sigma: t.sigma.clone(),
    });
    TruncatedSeries::new(
        target.clone(),
        f.nvars(),
        f.degree_bound(),
        f.coeffs().iter().map(|(e, c)| (e.clone(), c.clone())),
        tail,
    )
}

impl DaggerPresentation {
    /// Relation-wise [`base_change`].
    pub fn base_change(&self, target: &BanachRing) -> Result<DaggerPresentation> {
        let relations = self
            .relations()
            .iter()
            .map(|r| base_change(r, target))
            .collect::<Result<_>>()?;
        DaggerPresentation::new(target.clone(), self.rho().clone(), relations)
    }
}

impl TruncatedSeries {
    /// The series in `nvars` variables with variable `i` renamed to
    /// `offset + i`. Tail radii of the other variables come from `fill`;
    /// any positive value is sound there since no tail term involves them.
    pub fn embed(&self, nvars: usize, offset: usize, fill: &PolyRadius) -> Result<TruncatedSeries> {
        fill.check_len(nvars)?;
        if offset + self.nvars() > nvars {
            return Err(Error::DimensionMismatch {
                expected: nvars,
                found: offset + self.nvars(),
            });
        }
        let tail = self.tail().map(|t| {
            let mut sigma = fill.components().to_vec();
            sigma[offset..offset + self.nvars()].clone_from_slice(t.sigma.components());
            Tail {
                c: t.c.clone(),
                sigma: PolyRadius::new(sigma).expect("positive radii"),
            }
        });
        TruncatedSeries::new(
            self.ring().clone(),
            nvars,
            self.degree_bound(),
            self.coeffs().iter().map(|(e, c)| {
                let mut out = vec![0; nvars];
                out[offset..offset + e.len()].copy_from_slice(e);
                (out, c.clone())
            }),
            tail,
        )
    }

    /// Multiplication by the variable `X_var`.
    pub fn shift(&self, var: usize) -> Result<TruncatedSeries> {
        if var >= self.nvars() {
            return Err(Error::invalid(format!("no variable {var}")));
        }
        let tail = self.tail().map(|t| Tail {
            c: &t.c * &t.sigma.components()[var],
            sigma: t.sigma.clone(),
        });
        TruncatedSeries::new(
            self.ring().clone(),
            self.nvars(),
            self.degree_bound() + 1,
            self.coeffs().iter().map(|(e, c)| {
                let mut e = e.clone();
                e[var] += 1;
                (e, c.clone())
            }),
            tail,
        )
    }

    pub fn neg(&self) -> TruncatedSeries {
        let mut out = self.clone();
        for c in out.coeffs.values_mut() {
            *c = -c.clone();
        }
        out
    }

    /// The sum. Exact up to the smallest degree bound among summands with
    /// a tail; terms above it are absorbed into a common tail at the
    /// componentwise smaller radius.
    pub fn add(&self, other: &TruncatedSeries) -> Result<TruncatedSeries> {
        self.same_ring(other)?;
        let parts = [self, other];
        let exact_degree = self.degree_bound().max(other.degree_bound());
        let degree = parts
            .iter()
            .filter(|p| p.tail().is_some())
            .map(|p| p.degree_bound())
            .fold(exact_degree, u32::min);
        let sigma = parts
            .iter()
            .filter_map(|p| p.tail())
            .map(|t| t.sigma.clone())
            .reduce(|a, b| a.min(&b));
        let mut coeffs = BTreeMap::new();
        for p in parts {
            for (e, c) in p.coeffs() {
                if total_degree(e) <= degree {
                    *coeffs.entry(e.clone()).or_insert_with(Rational::zero) += c;
                }
            }
        }
        let tail = sigma.map(|sigma| {
            let ring = self.ring();
            let c = parts
                .iter()
                .map(|p| {
                    let dropped = p
                        .coeffs()
                        .iter()
                        .filter(|(e, _)| total_degree(e) > degree)
                        .map(|(e, c)| ring.abs(c).unwrap() * sigma.power(e))
                        .fold(Rational::zero(), Rational::max);
                    p.tail().map_or(dropped.clone(), |t| t.c.clone().max(dropped))
                })
                .sum();
            Tail { c, sigma }
        });
        TruncatedSeries::new(self.ring().clone(), self.nvars(), degree, coeffs, tail)
    }

    pub fn sub(&self, other: &TruncatedSeries) -> Result<TruncatedSeries> {
        self.add(&other.neg())
    }
}
