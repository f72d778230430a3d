//! Exact evaluation of polynomials on rational grids of a polytorus
//! `|z_i| = ρ_i`.

use num_complex::Complex;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::poly::Poly;
use crate::scalars::Rational;

pub type ComplexQ = Complex<Rational>;

/// Upper limit on grid points for a multivariate torus.
pub const TORUS_POINT_CAP: usize = 4096;

/// `count` (rounded up to a multiple of 4) rational points on the unit
/// circle, from `t = tan(θ/2)` running over `j/q` for `j ∈ [-q, q)` and the
/// antipodes. Contains `±1` and `±i`.
pub fn unit_circle_points(count: usize) -> Vec<ComplexQ> {
    let q = count.div_ceil(4).max(1) as i64;
    let mut out = Vec::with_capacity(4 * q as usize);
    let one = Rational::one();
    for j in -q..q {
        let t = Rational::new(j.into(), q.into());
        let d = &one + &t * &t;
        let re = (&one - &t * &t) / &d;
        let im = (&t + &t) / &d;
        let z = Complex::new(re, im);
        out.push(-z.clone());
        out.push(z);
    }
    out
}

pub fn abs_sq(z: &ComplexQ) -> Rational {
    &z.re * &z.re + &z.im * &z.im
}

pub fn eval_complex(p: &Poly, point: &[ComplexQ]) -> ComplexQ {
    assert_eq!(point.len(), p.nvars());
    let mut acc: ComplexQ = Complex::zero();
    for (e, c) in p.terms() {
        let mut t: ComplexQ = Complex::new(c.clone(), Rational::zero());
        for (z, &k) in point.iter().zip(e) {
            for _ in 0..k {
                t *= z;
            }
        }
        acc += t;
    }
    acc
}

/// Points per variable so that the full grid stays under the cap.
pub fn grid_size(nvars: usize, per_var: usize, cap: usize) -> usize {
    let mut per = per_var.max(4);
    while nvars > 1 && per > 4 && per.saturating_pow(nvars as u32) > cap {
        per -= 4;
    }
    per
}

/// `max |p(z)|²` over the grid `z_i = ρ_i u` with `u` running through
/// `unit_circle_points(per_var)` in every coordinate.
pub fn torus_max_abs_sq(p: &Poly, radii: &[Rational], per_var: usize) -> Rational {
    let n = p.nvars();
    assert_eq!(radii.len(), n);
    if p.is_zero() {
        return Rational::zero();
    }
    if n == 0 {
        let c = p.coeff(&[]);
        return &c * &c;
    }
    let per = grid_size(n, per_var, TORUS_POINT_CAP);
    let circle: Vec<(GaussInt, BigInt)> = unit_circle_points(per).iter().map(split_denominator).collect();
    let m = circle.len();
    // p(ρu) = Σ b_I Π a_i^{e_i} d_i^{D_i − e_i} / (L Π d_i^{D_i}) with u_i = a_i/d_i
    let scaled: Vec<(&Vec<u32>, Rational)> = p
        .terms()
        .iter()
        .map(|(e, c)| (e, c * e.iter().zip(radii).fold(Rational::one(), |acc, (&k, r)| acc * num_traits::pow(r.clone(), k as usize))))
        .collect();
    let l = scaled.iter().fold(BigInt::one(), |acc, (_, c)| acc.lcm(c.denom()));
    let terms: Vec<(&Vec<u32>, BigInt)> = scaled.iter().map(|(e, c)| (*e, (c * Rational::from_integer(l.clone())).to_integer())).collect();
    let tops: Vec<usize> = (0..n).map(|i| p.degree_in(i) as usize).collect();
    // table[i][k][e] = a_k^e d_k^{D_i − e}
    let table: Vec<Vec<Vec<GaussInt>>> = tops
        .iter()
        .map(|&top| {
            circle
                .iter()
                .map(|(a, d)| {
                    let mut a_pow = vec![GaussInt::one()];
                    let mut d_pow = vec![BigInt::one()];
                    for k in 1..=top {
                        a_pow.push(&a_pow[k - 1] * a);
                        d_pow.push(&d_pow[k - 1] * d);
                    }
                    (0..=top).map(|e| a_pow[e].scale(d_pow[top - e].clone())).collect()
                })
                .collect()
        })
        .collect();
    let total = m.pow(n as u32);
    (0..total)
        .into_par_iter()
        .map(|flat| {
            let mut idx = flat;
            let ks: Vec<usize> = (0..n)
                .map(|_| {
                    let k = idx % m;
                    idx /= m;
                    k
                })
                .collect();
            let mut acc = GaussInt::zero();
            for (e, b) in &terms {
                let mut t = GaussInt::new(b.clone(), BigInt::zero());
                for i in 0..n {
                    t *= &table[i][ks[i]][e[i] as usize];
                }
                acc += t;
            }
            let den = ks
                .iter()
                .zip(&tops)
                .fold(l.clone(), |acc, (&k, &top)| acc * num_traits::pow(circle[k].1.clone(), top));
            Rational::new(acc.norm_sqr(), &den * &den)
        })
        .reduce(Rational::zero, |a, b| a.max(b))
}

type GaussInt = Complex<BigInt>;

/// `z = a/d` with `a` a Gaussian integer and `d > 0`.
fn split_denominator(z: &ComplexQ) -> (GaussInt, BigInt) {
    let d = z.re.denom().lcm(z.im.denom());
    let scale = Rational::from_integer(d.clone());
    (Complex::new((&z.re * &scale).to_integer(), (&z.im * &scale).to_integer()), d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::{int, rat};

    #[test]
    fn circle_points_have_unit_modulus() {
        let pts = unit_circle_points(16);
        assert_eq!(pts.len(), 16);
        assert!(pts.iter().all(|z| abs_sq(z) == int(1)));
        assert!(pts.contains(&Complex::new(int(1), int(0))));
        assert!(pts.contains(&Complex::new(int(0), int(1))));
    }

    #[test]
    fn max_of_one_plus_x() {
        let p = Poly::one(1).add(&Poly::var(1, 0));
        assert_eq!(torus_max_abs_sq(&p, &[int(1)], 64), int(4));
        assert_eq!(torus_max_abs_sq(&p, &[rat(1, 2)], 64), rat(9, 4));
    }

    #[test]
    fn grid_is_capped() {
        assert_eq!(grid_size(1, 1024, TORUS_POINT_CAP), 1024);
        assert!(grid_size(2, 1024, TORUS_POINT_CAP).pow(2) <= TORUS_POINT_CAP);
        assert_eq!(grid_size(5, 1024, TORUS_POINT_CAP), 4);
    }
}
