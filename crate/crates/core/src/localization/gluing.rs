use num_traits::{One, Zero};
use rand::Rng;
use serde::Serialize;

use super::koszul::{Quotient, IDEAL_SLACK};
use super::{present_localization, LocalizationSpec};
use crate::error::{Error, Result};
use crate::linalg::{sparse_to_dense, Matrix};
use crate::poly::{MonomialSpace, Poly, TruncatedIdeal};
use crate::scalars::{format_rational, BanachRing, Rational};
use crate::series::{DaggerPresentation, PolyRadius, TruncatedSeries};
use crate::torus::{abs_sq, eval_complex, unit_circle_points, ComplexQ};

/// An idempotent `e` with `eA = I` for `I = (gens)`, found by solving the
/// linear system `e = Σ c_k g_k`, `e·g_j ≡ g_j` over the truncation at
/// degree d. Such an `e` exists exactly when `I = I²` holds at that level.
pub fn idempotent_split(a: &DaggerPresentation, gens: &[Poly], d: u32) -> Result<Option<Poly>> {
    let n = a.nvars();
    if let Some(g) = gens.iter().find(|g| g.nvars() != n) {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: g.nvars(),
        });
    }
    let gdeg = gens.iter().filter_map(Poly::degree).max();
    let Some(gdeg) = gdeg else {
        return Ok(Some(Poly::zero(n)));
    };
    let span = d + 2 * gdeg + IDEAL_SLACK;
    let ideal = TruncatedIdeal::new(&a.relation_polys(), n, span);
    let dim = ideal.space().dim();
    let stacked = |polys: &[Poly]| -> Vec<Rational> {
        let mut out = Vec::with_capacity(polys.len() * dim);
        for p in polys {
            let nf = ideal.normal_form(p).expect("within the span degree");
            out.extend(sparse_to_dense(&ideal.space().to_sparse(&nf).unwrap(), dim));
        }
        out
    };
    let unknowns: Vec<(usize, Poly)> = MonomialSpace::new(n, d)
        .monomials()
        .iter()
        .flat_map(|m| (0..gens.len()).map(move |k| (k, m.clone())))
        .map(|(k, m)| (k, gens[k].mul(&Poly::monomial(m, Rational::one()))))
        .collect();
    let columns: Vec<Vec<Rational>> = unknowns
        .iter()
        .map(|(_, mg)| stacked(&gens.iter().map(|g| mg.mul(g)).collect::<Vec<_>>()))
        .collect();
    let rhs = stacked(gens);
    let matrix = Matrix::from_columns(&columns, rhs.len())?;
    let Some(c) = matrix.solve(&rhs) else {
        return Ok(None);
    };
    let e = unknowns
        .iter()
        .zip(&c)
        .fold(Poly::zero(n), |acc, ((_, mg), ck)| acc.add(&mg.scale(ck)));
    Ok(ideal.normal_form(&e))
}

#[derive(Clone, Debug, Serialize)]
pub struct MayerVietorisReport {
    pub degree: u32,
    pub sampled_points: usize,
    pub diagonal_injective: bool,
    /// The kernel of `(a, b) ↦ a − b` is exactly the diagonal image.
    pub kernel_is_diagonal: bool,
    pub difference_surjective: bool,
    pub random_elements: usize,
    pub split_failures: usize,
    pub exact: bool,
}

/// Sample grid for the cover check: `k/16` of the polyradius.
const COVER_STEPS: i64 = 16;

/// Seminorm of `f` at the sample point of radius `t·ρ`: the Gauss point for
/// a non-Archimedean ring, the point `t·ρ·u` for an Archimedean one.
fn sample_abs_sq(ring: &BanachRing, f: &TruncatedSeries, t: &Rational, rho: &PolyRadius, u: &ComplexQ) -> Rational {
    let radius: Vec<Rational> = rho.components().iter().map(|r| r * t).collect();
    if ring.non_archimedean() {
        let g = f
            .coeffs()
            .iter()
            .map(|(e, c)| {
                ring.abs(c).unwrap() * e.iter().zip(&radius).fold(Rational::one(), |acc, (&k, r)| acc * num_traits::pow(r.clone(), k as usize))
            })
            .fold(Rational::zero(), Rational::max);
        &g * &g
    } else {
        let point: Vec<_> = radius.iter().map(|r| u * r).collect();
        let s = ring.scale();
        s * s * abs_sq(&eval_complex(&f.to_poly(), &point))
    }
}

fn in_piece(spec: &LocalizationSpec, ring: &BanachRing, t: &Rational, rho: &PolyRadius, u: &ComplexQ) -> bool {
    let small = |f: &[TruncatedSeries], r: &PolyRadius| {
        f.iter()
            .zip(r.components())
            .all(|(fi, ri)| sample_abs_sq(ring, fi, t, rho, u) <= ri * ri)
    };
    match spec {
        LocalizationSpec::Weierstrass { f, r } => small(f, r),
        LocalizationSpec::Laurent { f, r, g, s } => {
            small(f, r)
                && g
                    .iter()
                    .zip(s.components())
                    .all(|(gj, sj)| sample_abs_sq(ring, gj, t, rho, u) * sj * sj >= Rational::one())
        }
        LocalizationSpec::Rational { .. } => false,
    }
}

fn check_cover(a: &DaggerPresentation, v1: &LocalizationSpec, v2: &LocalizationSpec) -> Result<usize> {
    let ring = a.ring();
    let directions = if ring.non_archimedean() {
        vec![ComplexQ::new(Rational::one(), Rational::zero())]
    } else {
        unit_circle_points(8)
    };
    let mut count = 0;
    for k in 0..=COVER_STEPS {
        let t = Rational::new(k.into(), COVER_STEPS.into());
        for u in &directions {
            count += 1;
            if !in_piece(v1, ring, &t, a.rho(), u) && !in_piece(v2, ring, &t, a.rho(), u) {
                return Err(Error::NotACover {
                    radius: format_rational(&t),
                });
            }
        }
    }
    Ok(count)
}

fn image_coords(target: &Quotient, p: &Poly) -> Vec<Rational> {
    target.coords(p).expect("degree-preserving map")
}

/// Truncated exactness of `0 → A → A_{V1} × A_{V2} → A_{V1∩V2} → 0` for a
/// polydisc `A`, a Weierstrass piece `V1` and a Laurent piece `V2`, plus
/// `samples` random elements of the intersection split as differences.
pub fn mayer_vietoris<R: Rng>(
    a: &DaggerPresentation,
    v1: &LocalizationSpec,
    v2: &LocalizationSpec,
    d: u32,
    samples: usize,
    rng: &mut R,
) -> Result<MayerVietorisReport> {
    if !matches!(v1, LocalizationSpec::Weierstrass { .. }) || !matches!(v2, LocalizationSpec::Laurent { .. }) {
        return Err(Error::invalid("the gluing check takes a Weierstrass and a Laurent piece"));
    }
    if !a.relations().is_empty() {
        return Err(Error::invalid("the gluing check needs a polydisc algebra"));
    }
    let sampled_points = check_cover(a, v1, v2)?;
    let n = a.nvars();
    let p1 = present_localization(a, v1)?;
    let p2 = present_localization(a, v2)?;
    let (n1, n2) = (p1.nvars(), p2.nvars());
    let total = n1 + n2 - n;
    let into12: Vec<Poly> = (0..n2)
        .map(|k| Poly::var(total, if k < n { k } else { k + n1 - n }))
        .collect();
    let rels12: Vec<Poly> = p1
        .relation_polys()
        .iter()
        .map(|p| p.embed(total, 0))
        .chain(p2.relation_polys().iter().map(|p| p.substitute_into(&into12, total)))
        .collect();
    let span = d + IDEAL_SLACK;
    let qa = Quotient::new(&a.relation_polys(), n, d, span);
    let q1 = Quotient::new(&p1.relation_polys(), n1, d, span);
    let q2 = Quotient::new(&p2.relation_polys(), n2, d, span);
    let q12 = Quotient::new(&rels12, total, d, span);
    let mono = |e: &Vec<u32>| Poly::monomial(e.clone(), Rational::one());

    let diagonal_columns: Vec<Vec<Rational>> = qa
        .basis()
        .iter()
        .map(|e| {
            let p = mono(e);
            let mut col = image_coords(&q1, &p.embed(n1, 0));
            col.extend(image_coords(&q2, &p.embed(n2, 0)));
            col
        })
        .collect();
    let difference_columns: Vec<Vec<Rational>> = q1
        .basis()
        .iter()
        .map(|e| image_coords(&q12, &mono(e).embed(total, 0)))
        .chain(q2.basis().iter().map(|e| {
            image_coords(&q12, &mono(e).substitute_into(&into12, total))
                .into_iter()
                .map(|x| -x)
                .collect()
        }))
        .collect();
    let rows12 = q12.dim();
    let difference = Matrix::from_columns(&difference_columns, rows12)?;
    let diagonal_rank = if diagonal_columns.is_empty() {
        0
    } else {
        Matrix::from_columns(&diagonal_columns, q1.dim() + q2.dim())?.rank()
    };
    let diagonal_injective = diagonal_rank == qa.dim();
    let composite_zero = diagonal_columns
        .iter()
        .all(|col| difference.mul_vec(col).unwrap().iter().all(Zero::is_zero));
    let difference_rank = difference.rank();
    let nullity = q1.dim() + q2.dim() - difference_rank;
    let kernel_is_diagonal = composite_zero && nullity == diagonal_rank;
    let difference_surjective = difference_rank == rows12;

    let mut split_failures = 0;
    for _ in 0..samples {
        let h: Vec<Rational> = (0..rows12)
            .map(|_| Rational::from_integer(rng.gen_range(-5i64..=5).into()))
            .collect();
        match difference.solve(&h) {
            Some(x) if difference.mul_vec(&x).unwrap() == h => {}
            _ => split_failures += 1,
        }
    }
    let exact = diagonal_injective && kernel_is_diagonal && difference_surjective && split_failures == 0;
    Ok(MayerVietorisReport {
        degree: d,
        sampled_points,
        diagonal_injective,
        kernel_is_diagonal,
        difference_surjective,
        random_elements: samples,
        split_failures,
        exact,
    })
}
