use num_traits::{One, Signed};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::gen;
use super::oracle::{closest_vector, IntLattice};
use crate::linalg::Matrix;
use crate::localization::{
    apply_laurent_operator, koszul_h_check, laurent_kernel_dim, laurent_solve, mayer_vietoris, present_localization,
    KoszulVerdict, LocalizationSpec,
};
use crate::nonarch::{check_adjunction, pi_commutes_with_cokernel, pi_tensor_check};
use crate::normed::{cokernel, residue_norm, ModuleMap, NormFlavor, WeightedFreeModule};
use crate::poly::{Exponent, Poly};
use crate::scalars::{format_rational, int, rat, valuation, BanachRing, NormValue, Rational};
use crate::series::{
    base_change, cofinality_constant, multiply, norm_s, norm_t, restrict_t_to_s, DaggerPresentation, PolyRadius,
    Tail, TruncatedSeries,
};
use crate::spectrum::{global_sup, spectral_via_powers, Place};
use crate::tensor::{tensor_norm_certified, tensor_norm_upper, TensorElement};

pub type Check = std::result::Result<(), String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Check {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn lib<T>(r: crate::Result<T>) -> std::result::Result<T, String> {
    r.map_err(|e| e.to_string())
}

// ---- norm axioms -------------------------------------------------------

/// Triangle (or strong triangle for max flavor) and `‖λx‖ ≤ |λ|‖x‖` in a
/// random weighted free module.
pub fn vector_norm_axioms(rng: &mut ChaCha8Rng) -> Check {
    let ring = gen::ring(rng);
    let rank = rng.gen_range(1..=4);
    let m = gen::module(rng, &ring, rank);
    let x = gen::vector(rng, &ring, m.rank());
    let y = gen::vector(rng, &ring, m.rank());
    let lambda = gen::scalar(rng, &ring);
    let sum: Vec<Rational> = x.iter().zip(&y).map(|(a, b)| a + b).collect();
    let scaled: Vec<Rational> = x.iter().map(|a| a * &lambda).collect();
    let (nx, ny) = (lib(m.norm(&x))?, lib(m.norm(&y))?);
    let bound = match m.flavor() {
        NormFlavor::Sum => &nx + &ny,
        NormFlavor::Max => nx.clone().max(ny.clone()),
    };
    let nsum = lib(m.norm(&sum))?;
    ensure(nsum <= bound, || format!("{ring}: ‖x+y‖ = {nsum} > {bound}"))?;
    let lhs = lib(m.norm(&scaled))?;
    let rhs = lib(ring.abs(&lambda))? * &nx;
    ensure(lhs <= rhs, || format!("{ring}: ‖λx‖ = {lhs} > |λ|‖x‖ = {rhs}"))
}

fn random_tensor(rng: &mut ChaCha8Rng, left: &WeightedFreeModule, right: &WeightedFreeModule) -> TensorElement {
    let ring = left.ring().clone();
    let terms = (0..rng.gen_range(0..=3))
        .map(|_| (gen::vector(rng, &ring, left.rank()), gen::vector(rng, &ring, right.rank())))
        .collect();
    TensorElement::new(left.clone(), right.clone(), terms).unwrap()
}

/// The representation cost is subadditive and homogeneous, and the
/// certified enclosures are consistent with the triangle inequality.
pub fn tensor_norm_axioms(rng: &mut ChaCha8Rng) -> Check {
    let ring = gen::ring(rng);
    let flavor = if ring.non_archimedean() { NormFlavor::Max } else { NormFlavor::Sum };
    let left_size = rng.gen_range(1..=2);
    let left = gen::module_with(rng, &ring, left_size, flavor);
    let right_size = rng.gen_range(1..=2);
    let right = gen::module_with(rng, &ring, right_size, flavor);
    let x = random_tensor(rng, &left, &right);
    let y = random_tensor(rng, &left, &right);
    let both = TensorElement::new(left.clone(), right.clone(), [x.terms(), y.terms()].concat()).unwrap();
    let (ux, uy, ub) = (
        tensor_norm_upper(&x, flavor),
        tensor_norm_upper(&y, flavor),
        tensor_norm_upper(&both, flavor),
    );
    let combined = match flavor {
        NormFlavor::Sum => &ux + &uy,
        NormFlavor::Max => ux.clone().max(uy.clone()),
    };
    ensure(ub <= combined, || format!("{ring}: representation cost {ub} > {combined}"))?;
    let lambda = gen::scalar(rng, &ring);
    let scaled = lib(x.scaled(&lambda))?;
    let abs_lambda = lib(ring.abs(&lambda))?;
    let us = tensor_norm_upper(&scaled, flavor);
    ensure(us <= &abs_lambda * &ux, || format!("{ring}: ‖λx‖ cost {us} > |λ|·{ux}"))?;

    let cert = |t: &TensorElement| lib(tensor_norm_certified(t, flavor, 1, 1));
    let (cx, cy, cb, cs) = (cert(&x)?, cert(&y)?, cert(&both)?, cert(&scaled)?);
    let hi = match flavor {
        NormFlavor::Sum => cx.upper() + cy.upper(),
        NormFlavor::Max => cx.upper().clone().max(cy.upper().clone()),
    };
    ensure(*cb.lo() <= hi, || format!("{ring}: certified ‖x+y‖ ≥ {} > {hi}", cb.lo()))?;
    ensure(*cs.lo() <= &abs_lambda * cx.upper(), || {
        format!("{ring}: certified ‖λx‖ ≥ {} > |λ|·{}", cs.lo(), cx.upper())
    })?;
    ensure(*cx.upper() <= ux, || format!("{ring}: enclosure {cx} above the stored cost {ux}"))
}

/// Both series norms: triangle (strong for the non-Archimedean sup-norm)
/// and homogeneity, compared through the certified enclosures.
pub fn series_norm_axioms(rng: &mut ChaCha8Rng) -> Check {
    let ring = match rng.gen_range(0..3) {
        0 => BanachRing::integers(),
        1 => BanachRing::rationals(),
        _ => gen::padic(rng),
    };
    let n = rng.gen_range(1..=2);
    let rho = gen::radius(rng, n);
    let degree = rng.gen_range(1..=4);
    let f = gen::series(rng, &ring, &rho, degree);
    let g = gen::series(rng, &ring, &rho, degree);
    let sum = lib(f.add(&g))?;
    let lambda = gen::scalar(rng, &ring);
    let c = lib(TruncatedSeries::constant(ring.clone(), n, lambda.clone()))?;
    let scaled = lib(multiply(&c, &f, degree))?;
    let abs_lambda = lib(ring.abs(&lambda))?;
    for (name, norm) in [("S", norm_s as fn(&_, &_) -> _), ("T", norm_t as fn(&_, &_) -> _)] {
        let (nf, ng, nsum, nscaled): (NormValue, NormValue, NormValue, NormValue) = (
            lib(norm(&f, &rho))?,
            lib(norm(&g, &rho))?,
            lib(norm(&sum, &rho))?,
            lib(norm(&scaled, &rho))?,
        );
        let strong = name == "T" && ring.non_archimedean();
        let bound = if strong {
            nf.upper().clone().max(ng.upper().clone())
        } else {
            nf.upper() + ng.upper()
        };
        ensure(*nsum.lo() <= bound, || format!("{ring}: {name}-norm of f+g ≥ {} > {bound}", nsum.lo()))?;
        let hb = &abs_lambda * nf.upper();
        ensure(*nscaled.lo() <= hb, || format!("{ring}: {name}-norm of λf ≥ {} > {hb}", nscaled.lo()))?;
    }
    Ok(())
}

// ---- cofinality --------------------------------------------------------

/// `‖f‖_{S,(1,1)} ≤ 2·‖f‖_{T,(2,3)}` for a random ℚ_p series.
pub fn cofinality(rng: &mut ChaCha8Rng) -> Check {
    let rho = PolyRadius::new(vec![int(1), int(1)]).unwrap();
    let rho_big = PolyRadius::new(vec![int(2), int(3)]).unwrap();
    let constant = lib(cofinality_constant(&rho, &rho_big))?;
    ensure(constant == int(2), || format!("constant {constant} ≠ 2"))?;
    let ring = gen::padic(rng);
    let degree = rng.gen_range(0..=12);
    let density = rng.gen_range(0.1..0.9);
    let p = gen::poly(rng, &ring, 2, degree, density);
    let f = lib(TruncatedSeries::with_degree(ring.clone(), &p, degree))?;
    let (_, cert) = lib(restrict_t_to_s(&f, &rho_big, &rho))?;
    ensure(cert.holds_max_constant, || {
        format!(
            "{ring}, degree {degree}: ‖f‖_S = {} > 2·‖f‖_T = 2·{}",
            cert.s_norm.upper(),
            cert.t_norm.lo()
        )
    })
}

// ---- Laurent recursion -------------------------------------------------

pub const LAURENT_DEGREE: u32 = 16;

/// The recursion inverts `gX − 1` modulo `X^{D+1}`, and the operator has
/// no kernel on low-degree coefficients.
pub fn laurent_recursion(rng: &mut ChaCha8Rng) -> Check {
    let ring = BanachRing::rationals();
    let g = gen::poly(rng, &ring, 1, 2, 0.6);
    let t = gen::poly(rng, &ring, 2, 3, 0.5);
    let gs = lib(TruncatedSeries::from_poly(ring.clone(), &g))?;
    let ts = lib(TruncatedSeries::from_poly(ring.clone(), &t))?;
    let a = lib(laurent_solve(&gs, &ts, LAURENT_DEGREE))?;
    let back = apply_laurent_operator(&g, &a.to_poly(), LAURENT_DEGREE);
    ensure(back == t.truncate_in(1, LAURENT_DEGREE), || format!("round trip fails for g = {g}, t = {t}"))?;
    let k = laurent_kernel_dim(&g, 2, LAURENT_DEGREE);
    ensure(k == 0, || format!("kernel of dimension {k} for g = {g}"))
}

/// `(2X − 1)a ≡ −1` gives `a = Σ 2^k X^k`.
pub fn laurent_worked_instance() -> Check {
    let ring = BanachRing::rationals();
    let g = lib(TruncatedSeries::constant(ring.clone(), 0, int(2)))?;
    let t = lib(TruncatedSeries::constant(ring, 1, int(-1)))?;
    let a = lib(laurent_solve(&g, &t, LAURENT_DEGREE))?;
    let expected = Poly::from_terms(
        1,
        (0..=LAURENT_DEGREE).map(|k| (vec![k], Rational::from_integer(num_bigint::BigInt::from(2).pow(k)))),
    );
    ensure(a.to_poly() == expected, || format!("a = {}", a.to_poly()))
}

// ---- Koszul ------------------------------------------------------------

/// The Weierstrass and Laurent steps checked for concentration: `(label,
/// spec)` over the closed unit disc in one variable.
pub fn koszul_instances(ring: &BanachRing) -> Vec<(&'static str, LocalizationSpec)> {
    let x = Poly::var(1, 0);
    let s = |p: &Poly| TruncatedSeries::from_poly(ring.clone(), p).unwrap();
    let r = |v: Rational| PolyRadius::new(vec![v]).unwrap();
    vec![
        ("weierstrass |X| ≤ 1/2", LocalizationSpec::weierstrass(vec![s(&x)], r(rat(1, 2)))),
        ("weierstrass |X² − 1| ≤ 1", LocalizationSpec::weierstrass(vec![s(&x.pow(2).sub(&Poly::one(1)))], r(int(1)))),
        ("laurent |X| ≥ 1/2", LocalizationSpec::laurent(vec![s(&x)], r(int(2)))),
        ("laurent |1 + X| ≥ 1", LocalizationSpec::laurent(vec![s(&x.add(&Poly::one(1)))], r(int(1)))),
    ]
}

pub const KOSZUL_DEGREES: [u32; 3] = [6, 8, 10];

/// One instance at every degree: `H⁻¹ = 0` throughout.
pub fn koszul(ring: &BanachRing, spec: &LocalizationSpec) -> Check {
    let a = DaggerPresentation::polydisc(ring.clone(), PolyRadius::new(vec![int(1)]).unwrap());
    let id = [Poly::var(1, 0)];
    for d in KOSZUL_DEGREES {
        match lib(koszul_h_check(&a, spec, &a, &id, d))? {
            KoszulVerdict::DerivedConcentratedDegree0 { .. } => {}
            KoszulVerdict::HMinus1Witness { degree, element } => {
                return Err(format!("{ring}: degree −1 class {element} at D = {degree}"))
            }
        }
    }
    // the presentation itself must be well formed
    lib(present_localization(&a, spec)).map(|_| ())
}

// ---- Mayer–Vietoris ----------------------------------------------------

pub const GLUING_DEGREE: u32 = 8;
pub const GLUING_SAMPLES: usize = 100;

/// `{|X| ≤ 1/2} ∪ {|X| ≥ 1/2}` of the closed unit disc.
pub fn mayer_vietoris_cover(ring: &BanachRing, rng: &mut ChaCha8Rng) -> Check {
    let a = DaggerPresentation::polydisc(ring.clone(), PolyRadius::new(vec![int(1)]).unwrap());
    let x = TruncatedSeries::from_poly(ring.clone(), &Poly::var(1, 0)).unwrap();
    let disk = LocalizationSpec::weierstrass(vec![x.clone()], PolyRadius::new(vec![rat(1, 2)]).unwrap());
    let annulus = LocalizationSpec::laurent(vec![x], PolyRadius::new(vec![int(2)]).unwrap());
    let report = lib(mayer_vietoris(&a, &disk, &annulus, GLUING_DEGREE, GLUING_SAMPLES, rng))?;
    ensure(report.exact, || format!("{ring}: {report:?}"))
}

// ---- residue norm ------------------------------------------------------

/// Library residue norm against box enumeration on a random lattice.
pub fn residue_norm_oracle(rng: &mut ChaCha8Rng) -> Check {
    let n = rng.gen_range(1..=3);
    let k = rng.gen_range(1..=3);
    let cols: Vec<Vec<i64>> = (0..k).map(|_| (0..n).map(|_| rng.gen_range(-10..=10)).collect()).collect();
    let weights: Vec<i64> = (0..n).map(|_| rng.gen_range(1..=3)).collect();
    let v: Vec<i64> = (0..n).map(|_| rng.gen_range(-10..=10)).collect();
    let z = BanachRing::integers();
    let target = WeightedFreeModule::new(z.clone(), weights.iter().map(|&w| int(w)).collect(), NormFlavor::Sum).unwrap();
    let source = WeightedFreeModule::unit_weights(z, k, NormFlavor::Sum).unwrap();
    let matrix = Matrix::from_columns(&cols.iter().map(|c| c.iter().map(|&x| int(x)).collect()).collect::<Vec<_>>(), n)
        .unwrap();
    let m = cokernel(&lib(ModuleMap::new(source, target, matrix))?);
    let got = lib(residue_norm(&m, &v.iter().map(|&x| int(x)).collect::<Vec<_>>(), 10_000))?;
    let lattice = IntLattice::new(n, &cols);
    let (num, den) = closest_vector(&weights.iter().map(|&w| (w, 1)).collect::<Vec<_>>(), &lattice, &v);
    let expected = NormValue::exact(rat(num, den));
    ensure(got == expected, || format!("lattice {cols:?}, weights {weights:?}, v = {v:?}: {got} ≠ {expected}"))
}

// ---- spectrum ----------------------------------------------------------

pub const SPECTRUM_POWERS: u32 = 8;

fn unit_radius(n: usize) -> PolyRadius {
    PolyRadius::uniform(n, Rational::one()).unwrap()
}

/// `1 + X` at `ρ = 1`: sup exactly 2, attained at the Archimedean place.
pub fn spectrum_one_plus_x(prime_bound: u64, grid: u32) -> Check {
    let f = TruncatedSeries::from_poly(BanachRing::integers(), &Poly::one(1).add(&Poly::var(1, 0))).unwrap();
    let g = lib(global_sup(&f, &unit_radius(1), prime_bound, grid))?;
    ensure(g.value == NormValue::exact(int(2)), || format!("global sup {}", g.value))?;
    ensure(g.dominant == Place::Archimedean { eps: Rational::one() }, || {
        format!("dominant place {:?}", g.dominant)
    })?;
    powers_bound_sup(&f, &g.value)
}

fn powers_bound_sup(f: &TruncatedSeries, sup: &NormValue) -> Check {
    let rho = unit_radius(f.nvars());
    let powers = lib(spectral_via_powers(f, &rho, SPECTRUM_POWERS))?;
    for w in powers.running_inf.windows(2) {
        ensure(w[1].upper() <= w[0].upper() && w[1].lo() <= w[0].lo(), || {
            format!("running infimum increases: {} then {}", w[0], w[1])
        })?;
    }
    for (n, r) in powers.raw.iter().enumerate() {
        ensure(r.upper() >= sup.lo(), || {
            format!("‖f^{}‖^(1/{}) ≤ {} below the sup {}", n + 1, n + 1, r.upper(), sup.lo())
        })?;
    }
    Ok(())
}

/// Every p-adic fiber lies below the Archimedean one at the same exponent,
/// and the powers bound the global sup from above.
pub fn spectrum_random(rng: &mut ChaCha8Rng, prime_bound: u64, grid: u32) -> Check {
    let n = rng.gen_range(1..=2);
    let p = gen::integer_poly(rng, n, 3);
    let f = TruncatedSeries::from_poly(BanachRing::integers(), &p).unwrap();
    let g = lib(global_sup(&f, &unit_radius(n), prime_bound, grid))?;
    let arch = |eps: &Rational| {
        g.fibers
            .iter()
            .find(|r| r.place == Place::Archimedean { eps: eps.clone() })
            .map(|r| r.sup.clone())
            .unwrap()
    };
    for row in &g.fibers {
        if let Place::Padic { p: prime, eps } = &row.place {
            let a = arch(eps);
            ensure(row.sup.certainly_le(&a), || {
                format!("f = {p}: fiber at p = {prime}, ε = {} is {} against {a}", format_rational(eps), row.sup)
            })?;
        }
    }
    powers_bound_sup(&f, &g.value)
}

// ---- non-Archimedification ---------------------------------------------

pub fn adjunction(rng: &mut ChaCha8Rng) -> Check {
    let ring = gen::padic(rng);
    let v_size = rng.gen_range(1..=3);
    let v = gen::module_with(rng, &ring, v_size, NormFlavor::Sum);
    let w_size = rng.gen_range(1..=3);
    let w = gen::module_with(rng, &ring, w_size, NormFlavor::Max);
    let rows = (0..w.rank()).map(|_| gen::vector(rng, &ring, v.rank())).collect();
    let a = Matrix::from_rows(rows, v.rank()).unwrap();
    let r = gen::positive(rng);
    let report = lib(check_adjunction(&v, &w, &r, std::slice::from_ref(&a)))?;
    ensure(report.all_equal, || format!("{ring}: {:?}", report.samples[0]))?;
    let f = lib(ModuleMap::new(v.clone(), w.with_flavor(NormFlavor::Sum).unwrap(), a))?;
    ensure(lib(pi_commutes_with_cokernel(&f))?, || format!("{ring}: π and cokernel disagree"))
}

/// `π(U ⊗ V) = π(U) ⊗ π(V)` for ranks `(ru, rv)`.
pub fn pi_tensor(rng: &mut ChaCha8Rng, ru: usize, rv: usize) -> Check {
    let ring = gen::padic(rng);
    let u = gen::module_with(rng, &ring, ru, NormFlavor::Sum);
    let v = gen::module_with(rng, &ring, rv, NormFlavor::Sum);
    let report = lib(pi_tensor_check(&u, &v))?;
    ensure(report.confirmed, || format!("{ring}, ranks ({ru}, {rv}): {report:?}"))
}

// ---- base change -------------------------------------------------------

fn expected_abs(target: &BanachRing, c: &Rational) -> Rational {
    match target.prime() {
        Some(p) => {
            let v = valuation(c, p);
            let base = Rational::from_integer(p.into());
            if v >= 0 {
                Rational::one() / num_traits::pow(base, v as usize)
            } else {
                num_traits::pow(base, (-v) as usize)
            }
        }
        None => c.abs(),
    }
}

/// A presentation over ℤ moved to ℚ₂ and to ℚ with the usual absolute
/// value matches the presentation written directly over the target, and
/// monomial norms change by the new absolute value of the coefficient.
pub fn base_change_instance(rng: &mut ChaCha8Rng) -> Check {
    let z = BanachRing::integers();
    let n = rng.gen_range(1..=2);
    let rho = gen::radius(rng, n);
    let count = rng.gen_range(1..=2);
    let mut relations = Vec::with_capacity(count);
    for _ in 0..count {
        let degree = rng.gen_range(1..=3);
        relations.push(gen::series(rng, &z, &rho, degree));
    }
    let a = lib(DaggerPresentation::new(z.clone(), rho.clone(), relations.clone()))?;
    for target in [BanachRing::padic(2).unwrap(), BanachRing::rationals()] {
        let b = lib(a.base_change(&target))?;
        for (i, (got, src)) in b.relations().iter().zip(&relations).enumerate() {
            let direct = lib(TruncatedSeries::new(
                target.clone(),
                src.nvars(),
                src.degree_bound(),
                src.coeffs().iter().map(|(e, c)| (e.clone(), c.clone())),
                src.tail().map(|t| Tail { c: t.c.clone(), sigma: t.sigma.clone() }),
            ))?;
            ensure(*got == direct, || format!("generator {i} differs over {target}"))?;
        }
        ensure(b.rho() == a.rho(), || "radius changed".into())?;
        let e: Exponent = (0..n).map(|_| rng.gen_range(0..=3)).collect();
        let c = gen::nonzero_integer(rng, 64);
        let mono = lib(TruncatedSeries::monomial(z.clone(), e.clone(), c.clone()))?;
        let moved = lib(base_change(&mono, &target))?;
        let got = lib(norm_s(&moved, &rho))?;
        let want = NormValue::exact(expected_abs(&target, &c) * rho.power(&e));
        ensure(got == want, || format!("‖{c}·X^{e:?}‖ over {target}: {got} ≠ {want}"))?;
    }
    Ok(())
}

/// `‖2X‖ = 2` over ℤ and `1/2` over ℚ₂.
pub fn base_change_example() -> Check {
    let z = BanachRing::integers();
    let rho = PolyRadius::new(vec![int(1)]).unwrap();
    let f = lib(TruncatedSeries::monomial(z, vec![1], int(2)))?;
    let before = lib(norm_s(&f, &rho))?;
    let after = lib(norm_s(&lib(base_change(&f, &BanachRing::padic(2).unwrap()))?, &rho))?;
    ensure(before == NormValue::exact(int(2)) && after == NormValue::exact(rat(1, 2)), || {
        format!("‖2X‖: {before} over ℤ, {after} over ℚ₂")
    })
}
