use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::scalars::{int, rat, BanachRing};

fn q() -> BanachRing {
    BanachRing::rationals()
}

fn disc(ring: BanachRing, n: usize) -> DaggerPresentation {
    DaggerPresentation::polydisc(ring, PolyRadius::uniform(n, int(1)).unwrap())
}

fn series(ring: &BanachRing, p: &Poly) -> TruncatedSeries {
    TruncatedSeries::from_poly(ring.clone(), p).unwrap()
}

fn radius(v: Rational) -> PolyRadius {
    PolyRadius::new(vec![v]).unwrap()
}

fn x(n: usize, i: usize) -> Poly {
    Poly::var(n, i)
}

#[test]
fn weierstrass_presentation() {
    let a = disc(q(), 1);
    let spec = LocalizationSpec::weierstrass(vec![series(&q(), &x(1, 0).pow(2))], radius(rat(1, 2)));
    let b = present_localization(&a, &spec).unwrap();
    assert_eq!(b.rho().components(), &[int(1), rat(1, 2)]);
    assert_eq!(b.relation_polys(), vec![x(2, 1).sub(&x(2, 0).pow(2))]);
}

#[test]
fn laurent_presentation() {
    let a = disc(q(), 1);
    let spec = LocalizationSpec::laurent(vec![series(&q(), &x(1, 0))], radius(int(1)));
    let b = present_localization(&a, &spec).unwrap();
    assert_eq!(b.relation_polys(), vec![x(2, 0).mul(&x(2, 1)).sub(&Poly::one(2))]);
}

#[test]
fn empty_spec_keeps_the_algebra() {
    let a = disc(q(), 2);
    let spec = LocalizationSpec::weierstrass(Vec::new(), PolyRadius::new(Vec::new()).unwrap());
    assert_eq!(present_localization(&a, &spec).unwrap(), a);
}

#[test]
fn rational_needs_unit_ideal() {
    let a = disc(q(), 1);
    let xs = series(&q(), &x(1, 0));
    let bad = LocalizationSpec::Rational {
        f: vec![xs.clone()],
        h: xs.clone(),
        r: radius(int(1)),
        witness: None,
    };
    assert_eq!(present_localization(&a, &bad), Err(Error::UnitIdealWitnessMissing));
    // (1 + X) and X generate the unit ideal: 1·(1 + X) − 1·X = 1
    let h = series(&q(), &Poly::one(1).add(&x(1, 0)));
    let good = LocalizationSpec::Rational {
        f: vec![xs.clone()],
        h: h.clone(),
        r: radius(int(1)),
        witness: None,
    };
    let b = present_localization(&a, &good).unwrap();
    assert_eq!(
        b.relation_polys(),
        vec![Poly::one(2).add(&x(2, 0)).mul(&x(2, 1)).sub(&x(2, 0))]
    );
    let wrong_witness = LocalizationSpec::Rational {
        f: vec![xs.clone()],
        h,
        r: radius(int(1)),
        witness: Some(vec![series(&q(), &Poly::one(1)), series(&q(), &Poly::one(1))]),
    };
    assert_eq!(present_localization(&a, &wrong_witness), Err(Error::UnitIdealWitnessMissing));
}

#[test]
fn sequential_weierstrass_steps_compose() {
    let a = disc(q(), 1);
    let f1 = series(&q(), &x(1, 0).pow(2));
    let f2 = series(&q(), &x(1, 0).add(&Poly::one(1)));
    let first = present_localization(&a, &LocalizationSpec::weierstrass(vec![f1.clone()], radius(int(1)))).unwrap();
    let f2_lifted = series(&q(), &x(2, 0).add(&Poly::one(2)));
    let two_steps = present_localization(&first, &LocalizationSpec::weierstrass(vec![f2_lifted], radius(int(2)))).unwrap();
    let combined = present_localization(
        &a,
        &LocalizationSpec::weierstrass(vec![f1, f2], PolyRadius::new(vec![int(1), int(2)]).unwrap()),
    )
    .unwrap();
    assert_eq!(two_steps, combined);
}

#[test]
fn laurent_recursion_worked_instance() {
    let g = TruncatedSeries::constant(q(), 0, int(2)).unwrap();
    let t = TruncatedSeries::constant(q(), 1, int(-1)).unwrap();
    let a = laurent_solve(&g, &t, 2).unwrap();
    let expected = Poly::from_terms(1, [(vec![0], int(1)), (vec![1], int(2)), (vec![2], int(4))]);
    assert_eq!(a.to_poly(), expected);
    assert_eq!(apply_laurent_operator(&g.to_poly(), &a.to_poly(), 2), t.to_poly());
}

#[test]
fn laurent_recursion_trivial_cases() {
    let g = series(&q(), &x(1, 0).add(&Poly::one(1)));
    let zero_t = TruncatedSeries::zero(q(), 2);
    assert!(laurent_solve(&g, &zero_t, 5).unwrap().is_zero());
    let t = series(&q(), &x(2, 0).mul(&x(2, 1)).add(&Poly::constant(2, int(3))));
    let zero_g = TruncatedSeries::zero(q(), 1);
    assert_eq!(laurent_solve(&zero_g, &t, 5).unwrap().to_poly(), t.to_poly().neg());
    let a = laurent_solve(&g, &t, 6).unwrap();
    assert_eq!(apply_laurent_operator(&g.to_poly(), &a.to_poly(), 6), t.to_poly());
    assert_eq!(laurent_kernel_dim(&g.to_poly(), 2, 4), 0);
}

#[test]
fn weierstrass_kernels() {
    let qq = disc(q(), 0);
    for f in [Poly::zero(0), Poly::one(0)] {
        assert_eq!(weierstrass_kernel_check(&qq, &f, 4).unwrap(), KernelVerdict::Injective);
    }
    let e = x(1, 0);
    let split = DaggerPresentation::new(q(), radius(int(1)), vec![series(&q(), &e.pow(2).sub(&e))]).unwrap();
    assert_eq!(weierstrass_kernel_check(&split, &e, 4).unwrap(), KernelVerdict::Injective);
}

#[test]
fn koszul_concentration() {
    for ring in [BanachRing::padic(3).unwrap(), q()] {
        let a = disc(ring.clone(), 1);
        let id = vec![x(1, 0)];
        let w = LocalizationSpec::weierstrass(vec![series(&ring, &x(1, 0))], radius(int(1)));
        let l = LocalizationSpec::laurent(vec![series(&ring, &x(1, 0))], radius(int(1)));
        for d in [6, 8, 10] {
            for spec in [&w, &l] {
                assert_eq!(
                    koszul_h_check(&a, spec, &a, &id, d).unwrap(),
                    KoszulVerdict::DerivedConcentratedDegree0 { degree: d }
                );
            }
        }
    }
}

#[test]
fn koszul_on_zero_algebra() {
    let a = disc(q(), 1);
    let zero = DaggerPresentation::new(q(), radius(int(1)), vec![TruncatedSeries::constant(q(), 1, int(1)).unwrap()]).unwrap();
    let l = LocalizationSpec::laurent(vec![series(&q(), &x(1, 0))], radius(int(1)));
    assert!(matches!(
        koszul_h_check(&a, &l, &zero, &[x(1, 0)], 6).unwrap(),
        KoszulVerdict::DerivedConcentratedDegree0 { .. }
    ));
}

#[test]
fn koszul_over_a_nonreduced_base() {
    let b = DaggerPresentation::new(q(), radius(int(1)), vec![series(&q(), &x(1, 0).pow(2))]).unwrap();
    let a = disc(q(), 1);
    let w = LocalizationSpec::weierstrass(vec![series(&q(), &x(1, 0))], radius(int(1)));
    let l = LocalizationSpec::laurent(vec![series(&q(), &x(1, 0))], radius(int(1)));
    for spec in [&w, &l] {
        assert!(matches!(
            koszul_h_check(&a, spec, &b, &[x(1, 0)], 8).unwrap(),
            KoszulVerdict::DerivedConcentratedDegree0 { .. }
        ));
    }
}

#[test]
fn rational_factorization() {
    let a = disc(q(), 1);
    let spec = LocalizationSpec::Rational {
        f: vec![series(&q(), &x(1, 0))],
        h: TruncatedSeries::constant(q(), 1, int(2)).unwrap(),
        r: radius(int(1)),
        witness: None,
    };
    let fac = rational_factor(&a, &spec, &int(2)).unwrap();
    assert_eq!(fac.epsilon, rat(1, 2));
    assert!(fac.generators_agree);
    assert_eq!(fac.composed.nvars(), 3);
    assert_eq!(rational_factor(&a, &spec, &int(0)).unwrap_err(), Error::NonPositiveLowerBound);
    assert_eq!(rational_factor(&a, &spec, &rat(1, 3)).unwrap().epsilon, int(3));
    let unit = LocalizationSpec::Rational {
        f: vec![series(&q(), &x(1, 0))],
        h: TruncatedSeries::constant(q(), 1, int(1)).unwrap(),
        r: radius(int(1)),
        witness: None,
    };
    let fac = rational_factor(&a, &unit, &int(1)).unwrap();
    assert_eq!(fac.epsilon, int(1));
    assert!(fac.generators_agree);
}

#[test]
fn idempotents() {
    let e = x(1, 0);
    let split = DaggerPresentation::new(q(), radius(int(1)), vec![series(&q(), &e.pow(2).sub(&e))]).unwrap();
    assert_eq!(idempotent_split(&split, std::slice::from_ref(&e), 3).unwrap(), Some(e.clone()));
    let complement = Poly::one(1).sub(&e);
    assert_eq!(idempotent_split(&split, std::slice::from_ref(&complement), 3).unwrap(), Some(complement));
    let dual = DaggerPresentation::new(q(), radius(int(1)), vec![series(&q(), &e.pow(2))]).unwrap();
    assert_eq!(idempotent_split(&dual, &[e], 3).unwrap(), None);
}

#[test]
fn disk_and_annulus_glue() {
    let ring = BanachRing::padic(5).unwrap();
    let a = disc(ring.clone(), 1);
    let v1 = LocalizationSpec::weierstrass(vec![series(&ring, &x(1, 0))], radius(rat(1, 2)));
    let v2 = LocalizationSpec::laurent(vec![series(&ring, &x(1, 0))], radius(int(2)));
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let report = mayer_vietoris(&a, &v1, &v2, 8, 20, &mut rng).unwrap();
    assert!(report.exact, "{report:?}");
    let gap = LocalizationSpec::laurent(vec![series(&ring, &x(1, 0))], radius(int(1)));
    assert!(matches!(
        mayer_vietoris(&a, &v1, &gap, 8, 0, &mut rng),
        Err(Error::NotACover { .. })
    ));
}

#[test]
fn whole_space_cover_is_degenerate_but_exact() {
    let a = disc(q(), 1);
    let v1 = LocalizationSpec::weierstrass(vec![series(&q(), &x(1, 0))], radius(int(1)));
    let v2 = LocalizationSpec::laurent(vec![series(&q(), &Poly::one(1))], radius(int(1)));
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let report = mayer_vietoris(&a, &v1, &v2, 6, 10, &mut rng).unwrap();
    assert!(report.exact, "{report:?}");
}
