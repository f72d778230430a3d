use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{format_rational, is_integer, is_prime, parse_rational, pow_signed, valuation};
use super::{NormValue, Rational};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RingKind {
    /// ℤ with the usual absolute value.
    IntegersArchimedean,
    /// ℤ with the trivial absolute value.
    IntegersTrivial,
    /// ℚ with the p-adic absolute value `p^{-v_p(x)}`.
    RationalsPadic { p: u64 },
    /// ℚ with the usual absolute value.
    RationalsArchimedean,
}

impl RingKind {
    pub fn non_archimedean(self) -> bool {
        matches!(
            self,
            RingKind::IntegersTrivial | RingKind::RationalsPadic { .. }
        )
    }

    pub fn is_integral(self) -> bool {
        matches!(
            self,
            RingKind::IntegersArchimedean | RingKind::IntegersTrivial
        )
    }
}

/// A base ring together with its (possibly rescaled) absolute value.
///
/// Rescaling by `s > 0` replaces `|x|` with `s|x|`; the product inequality
/// then only holds with constant `C = 1/s`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BanachRing {
    kind: RingKind,
    scale: Rational,
    mul_constant: Rational,
}

impl BanachRing {
    pub fn new(kind: RingKind) -> Result<Self> {
        if let RingKind::RationalsPadic { p } = kind {
            if !is_prime(p) {
                return Err(Error::NotPrime(p));
            }
        }
        Ok(BanachRing {
            kind,
            scale: Rational::one(),
            mul_constant: Rational::one(),
        })
    }

    pub fn integers() -> Self {
        Self::new(RingKind::IntegersArchimedean).unwrap()
    }

    pub fn integers_trivial() -> Self {
        Self::new(RingKind::IntegersTrivial).unwrap()
    }

    pub fn rationals() -> Self {
        Self::new(RingKind::RationalsArchimedean).unwrap()
    }

    pub fn padic(p: u64) -> Result<Self> {
        Self::new(RingKind::RationalsPadic { p })
    }

    /// The same ring with `|x|` replaced by `s|x|`.
    pub fn rescaled(&self, s: Rational) -> Result<Self> {
        if !s.is_positive() {
            return Err(Error::invalid("scale must be positive"));
        }
        let scale = &self.scale * &s;
        Ok(BanachRing {
            kind: self.kind,
            mul_constant: scale.recip(),
            scale,
        })
    }

    pub fn kind(&self) -> RingKind {
        self.kind
    }

    pub fn scale(&self) -> &Rational {
        &self.scale
    }

    pub fn mul_constant(&self) -> &Rational {
        &self.mul_constant
    }

    pub fn non_archimedean(&self) -> bool {
        self.kind.non_archimedean()
    }

    /// Whether the carrier is ℤ, so bounded enumeration covers every coset.
    pub fn is_lattice(&self) -> bool {
        self.kind.is_integral()
    }

    pub fn prime(&self) -> Option<u64> {
        match self.kind {
            RingKind::RationalsPadic { p } => Some(p),
            _ => None,
        }
    }

    pub fn contains(&self, x: &Rational) -> bool {
        !self.kind.is_integral() || is_integer(x)
    }

    pub fn check_element(&self, x: &Rational) -> Result<()> {
        if self.contains(x) {
            Ok(())
        } else {
            Err(Error::NonElement {
                value: format_rational(x),
                ring: self.to_string(),
            })
        }
    }

    /// The unscaled absolute value, without the carrier check.
    pub(crate) fn raw_abs(&self, x: &Rational) -> Rational {
        if x.is_zero() {
            return Rational::zero();
        }
        match self.kind {
            RingKind::IntegersArchimedean | RingKind::RationalsArchimedean => x.abs(),
            RingKind::IntegersTrivial => Rational::one(),
            RingKind::RationalsPadic { p } => {
                pow_signed(&Rational::from_integer(p.into()), -valuation(x, p))
            }
        }
    }

    pub fn abs(&self, x: &Rational) -> Result<Rational> {
        self.check_element(x)?;
        Ok(&self.scale * self.raw_abs(x))
    }

    /// Checks `|ab| ≤ C|a||b|` and the (strong) triangle inequality on each
    /// pair; returns the first failing pair.
    pub fn verify_axioms<'a>(
        &self,
        pairs: impl IntoIterator<Item = (&'a Rational, &'a Rational)>,
    ) -> Result<Option<(Rational, Rational)>> {
        for (a, b) in pairs {
            let (na, nb) = (self.abs(a)?, self.abs(b)?);
            let prod_ok = self.abs(&(a * b))? <= &self.mul_constant * &na * &nb;
            let sum = self.abs(&(a + b))?;
            let tri_ok = if self.non_archimedean() {
                sum <= na.clone().max(nb.clone())
            } else {
                sum <= &na + &nb
            };
            if !(prod_ok && tri_ok) {
                return Ok(Some((a.clone(), b.clone())));
            }
        }
        Ok(None)
    }
}

pub fn abs_value(ring: &BanachRing, x: &Rational) -> Result<NormValue> {
    ring.abs(x).map(NormValue::exact)
}

impl fmt::Display for BanachRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            RingKind::IntegersArchimedean => write!(f, "Z")?,
            RingKind::IntegersTrivial => write!(f, "Z (trivial norm)")?,
            RingKind::RationalsPadic { p } => write!(f, "Q_{p}")?,
            RingKind::RationalsArchimedean => write!(f, "Q")?,
        }
        if !self.scale.is_one() {
            write!(f, " scaled by {}", self.scale)?;
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Wire {
    kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    p: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    scale: Option<String>,
}

impl Serialize for BanachRing {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let (kind, p) = match self.kind {
            RingKind::IntegersArchimedean => ("integers", None),
            RingKind::IntegersTrivial => ("integers_trivial", None),
            RingKind::RationalsPadic { p } => ("padic", Some(p)),
            RingKind::RationalsArchimedean => ("rationals", None),
        };
        Wire {
            kind: kind.into(),
            p,
            scale: (!self.scale.is_one()).then(|| format_rational(&self.scale)),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for BanachRing {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error as _;
        let w = Wire::deserialize(d)?;
        let kind = match (w.kind.as_str(), w.p) {
            ("integers", None) => RingKind::IntegersArchimedean,
            ("integers_trivial", None) => RingKind::IntegersTrivial,
            ("rationals", None) => RingKind::RationalsArchimedean,
            ("padic", Some(p)) => RingKind::RationalsPadic { p },
            ("padic", None) => return Err(D::Error::missing_field("p")),
            (k, _) => {
                return Err(D::Error::unknown_variant(
                    k,
                    &["integers", "integers_trivial", "padic", "rationals"],
                ))
            }
        };
        let ring = BanachRing::new(kind).map_err(D::Error::custom)?;
        match w.scale {
            None => Ok(ring),
            Some(s) => {
                let s = parse_rational(&s).map_err(D::Error::custom)?;
                ring.rescaled(s).map_err(D::Error::custom)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::{int, rat};

    #[test]
    fn absolute_values() {
        let z = BanachRing::integers();
        assert_eq!(abs_value(&z, &int(-3)).unwrap(), NormValue::exact(int(3)));
        let q2 = BanachRing::padic(2).unwrap();
        assert_eq!(abs_value(&q2, &int(12)).unwrap(), NormValue::exact(rat(1, 4)));
        assert_eq!(q2.abs(&rat(1, 8)).unwrap(), int(8));
        let t = BanachRing::integers_trivial();
        assert_eq!(abs_value(&t, &int(7)).unwrap(), NormValue::exact(int(1)));
        assert_eq!(t.abs(&int(0)).unwrap(), int(0));
    }

    #[test]
    fn non_elements_rejected() {
        let z = BanachRing::integers();
        assert!(matches!(
            z.abs(&rat(1, 2)),
            Err(Error::NonElement { .. })
        ));
        assert!(BanachRing::rationals().abs(&rat(1, 2)).is_ok());
        assert_eq!(BanachRing::padic(4), Err(Error::NotPrime(4)));
    }

    #[test]
    fn rescaling_sets_constant() {
        let r = BanachRing::integers().rescaled(rat(1, 2)).unwrap();
        assert_eq!(*r.mul_constant(), int(2));
        assert_eq!(r.abs(&int(4)).unwrap(), int(2));
        let pairs = [(int(3), int(5)), (int(-2), int(7))];
        assert_eq!(r.verify_axioms(pairs.iter().map(|(a, b)| (a, b))).unwrap(), None);
    }

    #[test]
    fn ring_json() {
        let r: BanachRing = serde_json::from_str(r#"{"kind":"padic","p":3}"#).unwrap();
        assert_eq!(r.prime(), Some(3));
        assert_eq!(serde_json::to_string(&r).unwrap(), r#"{"kind":"padic","p":3}"#);
        assert!(serde_json::from_str::<BanachRing>(r#"{"kind":"padic"}"#).is_err());
        assert!(serde_json::from_str::<BanachRing>(r#"{"kind":"reals"}"#).is_err());
    }
}
