use num_traits::{One, Zero};

use super::{PolyRadius, Tail, TruncatedSeries};
use crate::error::{Error, Result};
use crate::scalars::{sqrt_lower, NormValue, Rational};
use crate::torus::torus_max_abs_sq;

/// Torus grid density for the Archimedean T-norm: 64 angles per unit of
/// degree in each variable.
pub fn torus_points_per_variable(degree: u32) -> usize {
    64 * degree.max(1) as usize
}

/// `Σ_{|I| ≤ d} q^I`.
pub(crate) fn partial_geometric(q: &[Rational], d: u32) -> Rational {
    // by_degree[k] = Σ_{|I| = k} q^I over the variables seen so far
    let mut by_degree = vec![Rational::zero(); d as usize + 1];
    by_degree[0] = Rational::one();
    for qi in q {
        let mut next = vec![Rational::zero(); d as usize + 1];
        for k in 0..=d as usize {
            let mut pw = Rational::one();
            for j in 0..=k {
                if !by_degree[k - j].is_zero() {
                    next[k] += &by_degree[k - j] * &pw;
                }
                pw *= qi;
            }
        }
        by_degree = next;
    }
    by_degree.into_iter().sum()
}

fn ratios(tail: &Tail, rho: &PolyRadius) -> Result<Vec<Rational>> {
    if !rho.strictly_less(&tail.sigma) {
        return Err(Error::TailDiverges);
    }
    Ok(rho
        .components()
        .iter()
        .zip(tail.sigma.components())
        .map(|(r, s)| r / s)
        .collect())
}

/// `C·Σ_{|I| > D} (ρ/σ)^I` in closed form.
pub(crate) fn tail_sum(f: &TruncatedSeries, rho: &PolyRadius) -> Result<Rational> {
    let Some(tail) = f.tail() else {
        return Ok(Rational::zero());
    };
    let q = ratios(tail, rho)?;
    let full = q
        .iter()
        .fold(Rational::one(), |acc, qi| acc / (Rational::one() - qi));
    Ok(&tail.c * (full - partial_geometric(&q, f.degree_bound())))
}

/// `C·max_i(ρ_i/σ_i)^{D+1}`, a bound for every single tail term.
fn tail_term_bound(f: &TruncatedSeries, rho: &PolyRadius) -> Result<Rational> {
    let Some(tail) = f.tail() else {
        return Ok(Rational::zero());
    };
    let q = ratios(tail, rho)?;
    let qmax = q.into_iter().fold(Rational::zero(), Rational::max);
    Ok(&tail.c * num_traits::pow(qmax, f.degree_bound() as usize + 1))
}

/// `max |a_I| ρ^I` over the stored coefficients.
pub(crate) fn max_term(f: &TruncatedSeries, rho: &PolyRadius) -> Rational {
    f.coeffs()
        .iter()
        .map(|(e, c)| f.ring().abs(c).unwrap() * rho.power(e))
        .fold(Rational::zero(), Rational::max)
}

/// `‖f‖_S = Σ |a_I| ρ^I`; the tail majorant only widens the upper end.
pub fn norm_s(f: &TruncatedSeries, rho: &PolyRadius) -> Result<NormValue> {
    rho.check_len(f.nvars())?;
    let exact: Rational = f
        .coeffs()
        .iter()
        .map(|(e, c)| f.ring().abs(c).unwrap() * rho.power(e))
        .sum();
    let tail = tail_sum(f, rho)?;
    Ok(NormValue::new(exact.clone(), exact + tail))
}

/// The sup-norm on the polydisc of radius `ρ`.
///
/// Over a non-Archimedean ring this is the Gauss norm `max |a_I| ρ^I`. Over
/// an Archimedean ring the upper end is the S-norm and the lower end is the
/// larger of the Cauchy bound `max |a_I| ρ^I` and the exact maximum of
/// `|f(z)|` on a rational torus grid, less the tail contribution.
pub fn norm_t(f: &TruncatedSeries, rho: &PolyRadius) -> Result<NormValue> {
    rho.check_len(f.nvars())?;
    let gauss = max_term(f, rho);
    if f.ring().non_archimedean() {
        let hi = gauss.clone().max(tail_term_bound(f, rho)?);
        return Ok(NormValue::new(gauss, hi));
    }
    let s = norm_s(f, rho)?;
    let tail = tail_sum(f, rho)?;
    let grid_sq = torus_max_abs_sq(
        &f.to_poly(),
        rho.components(),
        torus_points_per_variable(f.degree_bound()),
    );
    let grid = sqrt_lower(&grid_sq, &Rational::new(1.into(), (1u64 << 40).into())) * f.ring().scale();
    let lo = gauss.max(grid - tail).max(Rational::zero());
    Ok(NormValue::new(lo.min(s.upper().clone()), s.upper().clone()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::{int, rat, BanachRing};

    fn series(ring: BanachRing, terms: &[(u32, i64)]) -> TruncatedSeries {
        let d = terms.iter().map(|t| t.0).max().unwrap_or(0);
        TruncatedSeries::new(ring, 1, d, terms.iter().map(|&(e, c)| (vec![e], int(c))), None).unwrap()
    }

    fn r1(x: Rational) -> PolyRadius {
        PolyRadius::new(vec![x]).unwrap()
    }

    #[test]
    fn s_norm_examples() {
        let f = series(BanachRing::integers(), &[(0, 3), (1, 2)]);
        assert_eq!(norm_s(&f, &r1(int(1))).unwrap(), NormValue::exact(int(5)));
        let p = 7;
        let f = series(BanachRing::padic(p).unwrap(), &[(0, p as i64), (1, 1)]);
        assert_eq!(norm_s(&f, &r1(int(1))).unwrap(), NormValue::exact(rat(1, 7) + int(1)));
        let z = TruncatedSeries::zero(BanachRing::integers(), 1);
        assert_eq!(norm_s(&z, &r1(int(1))).unwrap(), NormValue::zero());
    }

    #[test]
    fn t_norm_examples() {
        let f = series(BanachRing::padic(3).unwrap(), &[(0, 3), (1, 1)]);
        assert_eq!(norm_t(&f, &r1(int(1))).unwrap(), NormValue::exact(int(1)));
        let f = series(BanachRing::rationals(), &[(0, 1), (1, 1)]);
        assert_eq!(norm_t(&f, &r1(int(1))).unwrap(), NormValue::exact(int(2)));
        let c = series(BanachRing::rationals(), &[(0, -5)]);
        assert_eq!(norm_t(&c, &r1(int(1))).unwrap(), NormValue::exact(int(5)));
    }

    #[test]
    fn t_norm_gap_is_reported() {
        // 1 - X on the unit circle peaks at z = -1
        let f = series(BanachRing::rationals(), &[(0, 1), (1, -1)]);
        assert_eq!(norm_t(&f, &r1(int(1))).unwrap(), NormValue::exact(int(2)));
        // 1 + iX-like cancellation does not occur over Q, so try 1 + X²
        // at radius 1: sup 2 reached at z = ±1
        let f = series(BanachRing::rationals(), &[(0, 1), (2, 1)]);
        assert_eq!(norm_t(&f, &r1(int(1))).unwrap(), NormValue::exact(int(2)));
    }

    #[test]
    fn tail_bounds() {
        let f = series(BanachRing::integers(), &[(0, 1)])
            .with_tail(Some(Tail { c: int(1), sigma: r1(int(2)) }))
            .unwrap();
        // Σ_{k≥1} 2^-k = 1
        assert_eq!(norm_s(&f, &r1(int(1))).unwrap(), NormValue::new(int(1), int(2)));
        assert_eq!(norm_s(&f, &r1(int(2))), Err(Error::TailDiverges));
        let g = series(BanachRing::padic(2).unwrap(), &[(0, 1)])
            .with_tail(Some(Tail { c: int(4), sigma: r1(int(2)) }))
            .unwrap();
        assert_eq!(norm_t(&g, &r1(int(1))).unwrap(), NormValue::new(int(1), int(2)));
    }

    #[test]
    fn partial_sums() {
        // two variables, degree ≤ 1: 1 + q1 + q2
        assert_eq!(partial_geometric(&[rat(1, 2), rat(1, 3)], 1), rat(11, 6));
        assert_eq!(partial_geometric(&[rat(1, 2)], 3), rat(15, 8));
    }
}
