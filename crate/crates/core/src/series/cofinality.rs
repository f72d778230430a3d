use num_traits::{One, Zero};
use serde::Serialize;

use super::{norm_s, norm_t, PolyRadius, TruncatedSeries};
use crate::error::{Error, Result};
use crate::scalars::{serde_rational, NormValue, Rational};

fn check_order(rho: &PolyRadius, rho_big: &PolyRadius) -> Result<()> {
    if rho.strictly_less(rho_big) {
        Ok(())
    } else {
        Err(Error::NotStrictlySmaller)
    }
}

/// `max_i ρ'_i / (ρ'_i − ρ_i)`.
pub fn cofinality_constant(rho: &PolyRadius, rho_big: &PolyRadius) -> Result<Rational> {
    check_order(rho, rho_big)?;
    Ok(rho
        .components()
        .iter()
        .zip(rho_big.components())
        .map(|(r, b)| b / (b - r))
        .fold(Rational::zero(), Rational::max))
}

/// `Π_i ρ'_i / (ρ'_i − ρ_i) = Π_i 1/(1 − ρ_i/ρ'_i)`, the sum of the
/// geometric series `Σ_I (ρ/ρ')^I`.
pub fn product_cofinality_constant(rho: &PolyRadius, rho_big: &PolyRadius) -> Result<Rational> {
    check_order(rho, rho_big)?;
    Ok(rho
        .components()
        .iter()
        .zip(rho_big.components())
        .map(|(r, b)| b / (b - r))
        .product())
}

/// Comparison of `‖f‖_{S,ρ}` against `‖f‖_{T,ρ'}`.
#[derive(Clone, Debug, Serialize)]
pub struct CofinalityCertificate {
    pub s_norm: NormValue,
    pub t_norm: NormValue,
    #[serde(with = "serde_rational")]
    pub max_constant: Rational,
    #[serde(with = "serde_rational")]
    pub product_constant: Rational,
    /// `‖f‖_S.hi ≤ max_constant · ‖f‖_T.lo`.
    pub holds_max_constant: bool,
    /// `‖f‖_S.hi ≤ product_constant · ‖f‖_T.lo`; always true over a
    /// non-Archimedean ring since every term is at most the Gauss norm.
    pub holds_product_constant: bool,
}

/// The restriction `T(ρ') → S(ρ)` over a non-Archimedean ring: identity on
/// coefficients, together with the norm comparison.
pub fn restrict_t_to_s(
    f: &TruncatedSeries,
    rho_big: &PolyRadius,
    rho: &PolyRadius,
) -> Result<(TruncatedSeries, CofinalityCertificate)> {
    if !f.ring().non_archimedean() {
        return Err(Error::ArchimedeanBaseRing);
    }
    let max_constant = cofinality_constant(rho, rho_big)?;
    let product_constant = product_cofinality_constant(rho, rho_big)?;
    let s_norm = norm_s(f, rho)?;
    let t_norm = norm_t(f, rho_big)?;
    let holds_max_constant = *s_norm.upper() <= &max_constant * t_norm.lo();
    let holds_product_constant = *s_norm.upper() <= &product_constant * t_norm.lo();
    Ok((
        f.clone(),
        CofinalityCertificate {
            s_norm,
            t_norm,
            max_constant,
            product_constant,
            holds_max_constant,
            holds_product_constant,
        },
    ))
}

#[derive(Clone, Debug, Serialize)]
pub struct ArchRestriction {
    pub s_norm: NormValue,
    pub t_norm: NormValue,
    #[serde(with = "serde_rational")]
    pub constant: Rational,
    /// `‖f‖_{S,ρ}.hi ≤ constant · ‖f‖_{T,ρ'}.lo`.
    pub holds: bool,
}

/// `‖f‖_{S,ρ} ≤ Π 1/(1 − ρ_i/ρ'_i) · ‖f‖_{T,ρ'}` over an Archimedean ring,
/// from the Cauchy estimates `|a_I| ≤ ‖f‖_sup / ρ'^I`.
pub fn restrict_arch(f: &TruncatedSeries, rho_big: &PolyRadius, rho: &PolyRadius) -> Result<ArchRestriction> {
    if f.ring().non_archimedean() {
        return Err(Error::UnsupportedRing(format!(
            "{} is non-Archimedean",
            f.ring()
        )));
    }
    let constant = product_cofinality_constant(rho, rho_big)?;
    let s_norm = norm_s(f, rho)?;
    let t_norm = norm_t(f, rho_big)?;
    let holds = *s_norm.upper() <= &constant * t_norm.lo();
    Ok(ArchRestriction {
        s_norm,
        t_norm,
        constant,
        holds,
    })
}

impl CofinalityCertificate {
    pub fn trivially_one(&self) -> bool {
        self.max_constant.is_one()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::{int, rat, BanachRing};

    fn r(v: &[i64]) -> PolyRadius {
        PolyRadius::new(v.iter().map(|&x| int(x)).collect()).unwrap()
    }

    #[test]
    fn constants() {
        assert_eq!(cofinality_constant(&r(&[1]), &r(&[2])).unwrap(), int(2));
        assert_eq!(cofinality_constant(&r(&[1, 1]), &r(&[2, 3])).unwrap(), int(2));
        assert_eq!(product_cofinality_constant(&r(&[1, 1]), &r(&[2, 3])).unwrap(), int(3));
        let far = cofinality_constant(&r(&[1]), &r(&[1000])).unwrap();
        assert!(far > int(1) && far < rat(1002, 1000));
        assert_eq!(cofinality_constant(&r(&[2]), &r(&[2])), Err(Error::NotStrictlySmaller));
    }

    #[test]
    fn geometric_sum_example() {
        let q = BanachRing::padic(5).unwrap();
        let f = TruncatedSeries::new(q, 1, 5, (0..=5).map(|i| (vec![i], int(1))), None).unwrap();
        let (_, cert) = restrict_t_to_s(&f, &r(&[2]), &r(&[1])).unwrap();
        assert_eq!(cert.s_norm, NormValue::exact(int(6)));
        assert_eq!(cert.t_norm, NormValue::exact(int(32)));
        assert!(cert.holds_max_constant && cert.holds_product_constant);
    }

    #[test]
    fn arch_restriction() {
        let f = TruncatedSeries::new(BanachRing::rationals(), 1, 1, [(vec![0], int(1)), (vec![1], int(1))], None).unwrap();
        let half = PolyRadius::new(vec![rat(1, 2)]).unwrap();
        let a = restrict_arch(&f, &r(&[1]), &half).unwrap();
        assert_eq!(a.s_norm, NormValue::exact(rat(3, 2)));
        assert_eq!(a.constant, int(2));
        assert!(a.holds);
        assert_eq!(restrict_arch(&f, &half, &r(&[1])).unwrap_err(), Error::NotStrictlySmaller);
    }
}
