//! Property tests with oracles written independently of the library.

use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

use dagger_core::normed::{cokernel, residue_norm};
use dagger_core::linalg::Matrix;
use dagger_core::nonarch::pi_free;
use dagger_core::poly::Poly;
use dagger_core::selftest::{closest_vector, IntLattice};
use dagger_core::series::{norm_s, norm_t};
use dagger_core::tensor::{tensor_norm_certified, tensor_norm_upper, TensorElement};
use dagger_core::wire::SeriesJson;
use dagger_core::{BanachRing, ModuleMap, NormFlavor, NormValue, PolyRadius, Rational, TruncatedSeries, WeightedFreeModule};

fn rat(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

fn int(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

/// `|x|_p` by repeated division.
fn padic_abs(x: &Rational, p: i64) -> Rational {
    if x.is_zero() {
        return Rational::zero();
    }
    let p = num_bigint::BigInt::from(p);
    let (mut n, mut d) = (x.numer().abs(), x.denom().clone());
    let mut v = 0i32;
    while n.is_multiple_of(&p) {
        n /= &p;
        v += 1;
    }
    while d.is_multiple_of(&p) {
        d /= &p;
        v -= 1;
    }
    Rational::from_integer(p).pow(-v)
}

fn rational() -> impl Strategy<Value = Rational> {
    (-40i64..=40, 1i64..=12).prop_map(|(n, d)| rat(n, d))
}

fn weight() -> impl Strategy<Value = Rational> {
    (1i64..=12, 1i64..=6).prop_map(|(n, d)| rat(n, d))
}

fn prime() -> impl Strategy<Value = u64> {
    prop::sample::select(vec![2u64, 3, 5, 7])
}

fn q_p(p: u64) -> BanachRing {
    BanachRing::padic(p).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn max_norm_matches_valuation_oracle(
        p in prime(),
        entries in prop::collection::vec((rational(), weight()), 1..5),
    ) {
        let (v, w): (Vec<_>, Vec<_>) = entries.into_iter().unzip();
        let m = WeightedFreeModule::new(q_p(p), w.clone(), NormFlavor::Max).unwrap();
        let expected = v.iter().zip(&w).map(|(x, wi)| padic_abs(x, p as i64) * wi).max().unwrap();
        prop_assert_eq!(m.norm(&v).unwrap(), expected);
    }

    #[test]
    fn sum_norm_triangle_and_homogeneity(
        entries in prop::collection::vec((rational(), rational(), weight()), 1..5),
        lambda in rational(),
    ) {
        let m = WeightedFreeModule::new(
            BanachRing::rationals(),
            entries.iter().map(|e| e.2.clone()).collect(),
            NormFlavor::Sum,
        ).unwrap();
        let x: Vec<Rational> = entries.iter().map(|e| e.0.clone()).collect();
        let y: Vec<Rational> = entries.iter().map(|e| e.1.clone()).collect();
        let sum: Vec<Rational> = x.iter().zip(&y).map(|(a, b)| a + b).collect();
        prop_assert!(m.norm(&sum).unwrap() <= m.norm(&x).unwrap() + m.norm(&y).unwrap());
        let scaled: Vec<Rational> = x.iter().map(|a| a * &lambda).collect();
        prop_assert_eq!(m.norm(&scaled).unwrap(), lambda.abs() * m.norm(&x).unwrap());
    }

    #[test]
    fn max_norm_strong_triangle(
        p in prime(),
        entries in prop::collection::vec((rational(), rational(), weight()), 1..5),
    ) {
        let m = WeightedFreeModule::new(q_p(p), entries.iter().map(|e| e.2.clone()).collect(), NormFlavor::Max).unwrap();
        let x: Vec<Rational> = entries.iter().map(|e| e.0.clone()).collect();
        let y: Vec<Rational> = entries.iter().map(|e| e.1.clone()).collect();
        let sum: Vec<Rational> = x.iter().zip(&y).map(|(a, b)| a + b).collect();
        let (nx, ny) = (m.norm(&x).unwrap(), m.norm(&y).unwrap());
        prop_assert!(m.norm(&sum).unwrap() <= nx.max(ny));
    }

    #[test]
    fn pi_is_idempotent(p in prime(), w in prop::collection::vec(weight(), 0..5)) {
        let m = WeightedFreeModule::new(q_p(p), w, NormFlavor::Sum).unwrap();
        let once = pi_free(&m).unwrap();
        prop_assert_eq!(once.flavor(), NormFlavor::Max);
        prop_assert_eq!(once.weights(), m.weights());
        prop_assert_eq!(pi_free(&once).unwrap(), once);
    }

    #[test]
    fn polynomial_norms_match_closed_forms(
        p in prime(),
        coeffs in prop::collection::vec(rational(), 1..6),
        r in weight(),
    ) {
        // S = Σ |a_i| r^i and, over Q_p, T = max |a_i| r^i
        let poly = Poly::from_terms(1, coeffs.iter().enumerate().map(|(i, c)| (vec![i as u32], c.clone())));
        let f = TruncatedSeries::from_poly(q_p(p), &poly).unwrap();
        let rho = PolyRadius::new(vec![r.clone()]).unwrap();
        let terms: Vec<Rational> = coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| padic_abs(c, p as i64) * r.pow(i as i32))
            .collect();
        let s = terms.iter().fold(Rational::zero(), |a, b| a + b);
        let t = terms.iter().cloned().max().unwrap();
        prop_assert_eq!(norm_s(&f, &rho).unwrap(), NormValue::exact(s));
        prop_assert_eq!(norm_t(&f, &rho).unwrap(), NormValue::exact(t));
    }

    #[test]
    fn series_s_norm_is_subadditive(
        a in prop::collection::vec(rational(), 1..5),
        b in prop::collection::vec(rational(), 1..5),
        r in weight(),
    ) {
        let ring = BanachRing::rationals();
        let series = |c: &[Rational]| {
            let p = Poly::from_terms(1, c.iter().enumerate().map(|(i, x)| (vec![i as u32], x.clone())));
            TruncatedSeries::from_poly(ring.clone(), &p).unwrap()
        };
        let (f, g) = (series(&a), series(&b));
        let rho = PolyRadius::new(vec![r]).unwrap();
        let lhs = norm_s(&f.add(&g).unwrap(), &rho).unwrap();
        let rhs = norm_s(&f, &rho).unwrap().add(&norm_s(&g, &rho).unwrap());
        prop_assert!(lhs.possibly_le(&rhs));
    }

    #[test]
    fn series_json_round_trip(
        coeffs in prop::collection::vec(rational(), 1..6),
        c in weight(),
    ) {
        let ring = BanachRing::integers();
        let p = Poly::from_terms(1, coeffs.iter().enumerate().map(|(i, x)| (vec![i as u32], x.floor())));
        let f = TruncatedSeries::with_degree(ring.clone(), &p, 8).unwrap()
            .with_tail(Some(dagger_core::series::Tail { c, sigma: PolyRadius::new(vec![int(3)]).unwrap() }))
            .unwrap();
        let back = SeriesJson::from_series(&f).to_series(&ring).unwrap();
        prop_assert_eq!(back, f);
    }

    #[test]
    fn generator_tensor_norm_is_weight_product(
        flavor in prop::sample::select(vec![NormFlavor::Sum, NormFlavor::Max]),
        w in prop::collection::vec(weight(), 1..4),
        v in prop::collection::vec(weight(), 1..4),
        i in 0usize..4,
        j in 0usize..4,
    ) {
        let ring = q_p(3);
        let left = WeightedFreeModule::new(ring.clone(), w.clone(), NormFlavor::Max).unwrap();
        let right = WeightedFreeModule::new(ring, v.clone(), NormFlavor::Max).unwrap();
        let (i, j) = (i % w.len(), j % v.len());
        let x = TensorElement::generator(&left, &right, i, j).unwrap();
        let expected = &w[i] * &v[j];
        prop_assert_eq!(tensor_norm_upper(&x, flavor), expected.clone());
        prop_assert_eq!(tensor_norm_certified(&x, flavor, 3, 1).unwrap(), NormValue::exact(expected));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn residue_norm_matches_enumeration(
        n in 1usize..=2,
        cols in prop::collection::vec(prop::collection::vec(-6i64..=6, 2), 1..=2),
        weights in prop::collection::vec(1i64..=3, 2),
        v in prop::collection::vec(-6i64..=6, 2),
    ) {
        let cols: Vec<Vec<i64>> = cols.into_iter().map(|c| c[..n].to_vec()).collect();
        let (weights, v) = (&weights[..n], &v[..n]);
        let z = BanachRing::integers();
        let target = WeightedFreeModule::new(z.clone(), weights.iter().map(|&w| int(w)).collect(), NormFlavor::Sum).unwrap();
        let source = WeightedFreeModule::unit_weights(z, cols.len(), NormFlavor::Sum).unwrap();
        let columns: Vec<Vec<Rational>> = cols.iter().map(|c| c.iter().map(|&x| int(x)).collect()).collect();
        let f = ModuleMap::new(source, target, Matrix::from_columns(&columns, n).unwrap()).unwrap();
        let got = residue_norm(&cokernel(&f), &v.iter().map(|&x| int(x)).collect::<Vec<_>>(), 10_000).unwrap();
        let (num, den) = closest_vector(
            &weights.iter().map(|&w| (w, 1)).collect::<Vec<_>>(),
            &IntLattice::new(n, &cols),
            v,
        );
        prop_assert_eq!(got, NormValue::exact(rat(num, den)));
    }
}

#[test]
fn padic_abs_oracle() {
    assert_eq!(padic_abs(&rat(12, 5), 2), rat(1, 4));
    assert_eq!(padic_abs(&rat(3, 50), 5), int(25));
    assert!(padic_abs(&int(7), 3).is_one());
}
