use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::{NormValue, Rational};

/// Smallest `m` with `2^-m ≤ tol`.
fn bits_for(tol: &Rational) -> u32 {
    assert!(tol.is_positive(), "precision must be positive");
    let need = (tol.denom() + tol.numer() - BigInt::one()) / tol.numer();
    let mut m = 0u32;
    while BigInt::one() << m < need {
        m += 1;
    }
    m
}

/// Returns `(k, exact)` with `k = floor(x^{1/n} · 2^m)` and `exact` set
/// when `k / 2^m` is the root itself.
fn scaled_root(x: &Rational, n: u32, m: u32) -> (BigInt, bool) {
    let shifted = x.numer() << (m as u64 * n as u64);
    let q = &shifted / x.denom();
    let k = q.nth_root(n);
    let exact = num_traits::pow(k.clone(), n as usize) * x.denom() == shifted;
    (k, exact)
}

fn exact_root(x: &Rational, n: u32) -> Option<Rational> {
    let a = x.numer().nth_root(n);
    let b = x.denom().nth_root(n);
    (num_traits::pow(a.clone(), n as usize) == *x.numer()
        && num_traits::pow(b.clone(), n as usize) == *x.denom())
    .then(|| Rational::new(a, b))
}

fn root_bracket(x: &Rational, n: u32, tol: &Rational) -> (Rational, Rational) {
    if x.is_zero() || x.is_one() || n == 1 {
        return (x.clone(), x.clone());
    }
    if let Some(r) = exact_root(x, n) {
        return (r.clone(), r);
    }
    let m = bits_for(tol);
    let (k, _) = scaled_root(x, n, m);
    let den = BigInt::one() << m;
    (
        Rational::new(k.clone(), den.clone()),
        Rational::new(k + 1, den),
    )
}

/// Certified enclosure of `[x.lo^{1/n}, x.hi^{1/n}]`.
///
/// Each endpoint is bracketed on the dyadic grid of mesh `precision / 2`,
/// so an exact input yields width at most `precision / 2`.
pub fn nth_root_interval(x: &NormValue, n: u32, precision: &Rational) -> NormValue {
    assert!(n >= 1, "root index must be positive");
    let tol = precision / Rational::from_integer(2.into());
    let (lo, _) = root_bracket(x.lo(), n, &tol);
    let hi = x.hi().map(|h| root_bracket(h, n, &tol).1);
    NormValue::try_new(lo, hi).expect("root bracket is ordered")
}

/// Certified enclosure of `x^ε` for rational `ε > 0`.
pub fn pow_interval(x: &NormValue, eps: &Rational, precision: &Rational) -> NormValue {
    assert!(eps.is_positive());
    let a: usize = eps.numer().try_into().expect("exponent numerator too large");
    let b: u32 = eps.denom().try_into().expect("exponent denominator too large");
    let powered = NormValue::try_new(
        num_traits::pow(x.lo().clone(), a),
        x.hi().map(|h| num_traits::pow(h.clone(), a)),
    )
    .unwrap();
    nth_root_interval(&powered, b, precision)
}

/// A rational lower bound for `√x` within `precision`.
pub fn sqrt_lower(x: &Rational, precision: &Rational) -> Rational {
    root_bracket(x, 2, precision).0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::{int, rat};

    #[test]
    fn perfect_square_is_exact() {
        let r = nth_root_interval(&NormValue::exact(int(4)), 2, &rat(1, 100));
        assert_eq!(r, NormValue::exact(int(2)));
        let r = nth_root_interval(&NormValue::exact(rat(8, 27)), 3, &rat(1, 100));
        assert_eq!(r, NormValue::exact(rat(2, 3)));
    }

    #[test]
    fn sqrt_two_bracket() {
        let r = nth_root_interval(&NormValue::exact(int(2)), 2, &rat(1, 10));
        // bisection oracle: y^2 = 2 crosses between 7/5 and 3/2
        assert!(*r.lo() >= rat(7, 5));
        assert!(*r.upper() <= rat(3, 2));
        assert!(r.width().unwrap() <= rat(1, 10));
        assert!(r.lo() * r.lo() <= int(2) && r.upper() * r.upper() >= int(2));
    }

    #[test]
    fn one_is_fixed() {
        for k in 1..10 {
            let r = nth_root_interval(&NormValue::exact(int(1)), k, &rat(1, 7));
            assert_eq!(r, NormValue::exact(int(1)));
        }
    }

    #[test]
    fn unbounded_stays_unbounded() {
        let r = nth_root_interval(&NormValue::at_least(int(9)), 2, &rat(1, 10));
        assert_eq!(*r.lo(), int(3));
        assert_eq!(r.hi(), None);
    }

    #[test]
    fn fractional_powers() {
        let r = pow_interval(&NormValue::exact(int(4)), &rat(3, 2), &rat(1, 100));
        assert_eq!(r, NormValue::exact(int(8)));
        let r = pow_interval(&NormValue::exact(int(2)), &rat(1, 2), &rat(1, 1000));
        assert!(r.contains(&rat(14142, 10000)));
    }
}
