use std::fmt;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{format_rational, parse_rational, Rational};

/// A closed interval `[lo, hi]` of non-negative rationals certified to
/// contain some real quantity, usually a norm. `hi = None` stands for `+∞`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct NormValue {
    lo: Rational,
    hi: Option<Rational>,
}

impl NormValue {
    /// Panics if `lo < 0` or `lo > hi`.
    pub fn new(lo: Rational, hi: Rational) -> Self {
        assert!(!lo.is_negative(), "negative lower bound {lo}");
        assert!(lo <= hi, "empty interval [{lo}, {hi}]");
        NormValue { lo, hi: Some(hi) }
    }

    pub fn try_new(lo: Rational, hi: Option<Rational>) -> Option<Self> {
        if lo.is_negative() || hi.as_ref().is_some_and(|h| *h < lo) {
            return None;
        }
        Some(NormValue { lo, hi })
    }

    pub fn exact(x: Rational) -> Self {
        Self::new(x.clone(), x)
    }

    pub fn zero() -> Self {
        Self::exact(Rational::zero())
    }

    pub fn at_least(lo: Rational) -> Self {
        Self::try_new(lo, None).expect("negative lower bound")
    }

    pub fn lo(&self) -> &Rational {
        &self.lo
    }

    pub fn hi(&self) -> Option<&Rational> {
        self.hi.as_ref()
    }

    /// The finite upper bound. Panics on an unbounded interval.
    pub fn upper(&self) -> &Rational {
        self.hi.as_ref().expect("unbounded norm value")
    }

    pub fn is_exact(&self) -> bool {
        self.hi.as_ref() == Some(&self.lo)
    }

    pub fn exact_value(&self) -> Option<&Rational> {
        self.is_exact().then_some(&self.lo)
    }

    pub fn width(&self) -> Option<Rational> {
        self.hi.as_ref().map(|h| h - &self.lo)
    }

    pub fn contains(&self, x: &Rational) -> bool {
        *x >= self.lo && self.hi.as_ref().is_none_or(|h| x <= h)
    }

    /// `self ≤ other` holds for every pair of points in the two intervals.
    pub fn certainly_le(&self, other: &NormValue) -> bool {
        self.hi.as_ref().is_some_and(|h| *h <= other.lo)
    }

    /// `self ≤ other` holds for at least one pair of points.
    pub fn possibly_le(&self, other: &NormValue) -> bool {
        other.hi.as_ref().is_none_or(|h| self.lo <= *h)
    }

    pub fn overlaps(&self, other: &NormValue) -> bool {
        self.possibly_le(other) && other.possibly_le(self)
    }

    pub fn add(&self, other: &NormValue) -> NormValue {
        NormValue {
            lo: &self.lo + &other.lo,
            hi: match (&self.hi, &other.hi) {
                (Some(a), Some(b)) => Some(a + b),
                _ => None,
            },
        }
    }

    pub fn mul(&self, other: &NormValue) -> NormValue {
        let hi = match (&self.hi, &other.hi) {
            (Some(a), Some(b)) => Some(a * b),
            (Some(a), None) if a.is_zero() => Some(Rational::zero()),
            (None, Some(b)) if b.is_zero() => Some(Rational::zero()),
            _ => None,
        };
        NormValue {
            lo: &self.lo * &other.lo,
            hi,
        }
    }

    /// Multiplies both endpoints by a non-negative rational.
    pub fn scale(&self, c: &Rational) -> NormValue {
        assert!(!c.is_negative());
        NormValue {
            lo: &self.lo * c,
            hi: self.hi.as_ref().map(|h| h * c),
        }
    }

    pub fn max(&self, other: &NormValue) -> NormValue {
        NormValue {
            lo: self.lo.clone().max(other.lo.clone()),
            hi: match (&self.hi, &other.hi) {
                (Some(a), Some(b)) => Some(a.clone().max(b.clone())),
                _ => None,
            },
        }
    }

    /// Widens the upper end by `extra`.
    pub fn widen_hi(&self, extra: &Rational) -> NormValue {
        NormValue {
            lo: self.lo.clone(),
            hi: self.hi.as_ref().map(|h| h + extra),
        }
    }

    /// The smallest interval containing both.
    pub fn hull(&self, other: &NormValue) -> NormValue {
        NormValue {
            lo: self.lo.clone().min(other.lo.clone()),
            hi: match (&self.hi, &other.hi) {
                (Some(a), Some(b)) => Some(a.clone().max(b.clone())),
                _ => None,
            },
        }
    }

    /// Intersects two enclosures of the same quantity. Returns `None` when
    /// they are disjoint, which means one of them was unsound.
    pub fn intersect(&self, other: &NormValue) -> Option<NormValue> {
        let lo = self.lo.clone().max(other.lo.clone());
        let hi = match (&self.hi, &other.hi) {
            (Some(a), Some(b)) => Some(a.clone().min(b.clone())),
            (Some(a), None) => Some(a.clone()),
            (None, b) => b.clone(),
        };
        Self::try_new(lo, hi)
    }
}

impl fmt::Display for NormValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.hi {
            Some(h) if *h == self.lo => write!(f, "{}", self.lo),
            Some(h) => write!(f, "[{}, {}]", self.lo, h),
            None => write!(f, "[{}, inf]", self.lo),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct Wire {
    lo: String,
    hi: String,
}

impl Serialize for NormValue {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        Wire {
            lo: format_rational(&self.lo),
            hi: self
                .hi
                .as_ref()
                .map_or_else(|| "inf".to_string(), format_rational),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for NormValue {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let w = Wire::deserialize(d)?;
        let lo = parse_rational(&w.lo).map_err(D::Error::custom)?;
        let hi = if w.hi == "inf" {
            None
        } else {
            Some(parse_rational(&w.hi).map_err(D::Error::custom)?)
        };
        NormValue::try_new(lo, hi).ok_or_else(|| D::Error::custom("invalid interval"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::{int, rat};

    #[test]
    fn arithmetic() {
        let a = NormValue::new(int(1), int(2));
        let b = NormValue::exact(int(3));
        assert_eq!(a.add(&b), NormValue::new(int(4), int(5)));
        assert_eq!(a.mul(&b), NormValue::new(int(3), int(6)));
        assert!(a.certainly_le(&b));
        assert!(!b.certainly_le(&a));
        assert_eq!(a.scale(&rat(1, 2)), NormValue::new(rat(1, 2), int(1)));
    }

    #[test]
    fn json_shape() {
        let v = NormValue::new(rat(1, 2), int(3));
        let s = serde_json::to_string(&v).unwrap();
        assert_eq!(s, r#"{"lo":"1/2","hi":"3/1"}"#);
        let back: NormValue = serde_json::from_str(&s).unwrap();
        assert_eq!(back, v);
        let inf: NormValue = serde_json::from_str(r#"{"lo":"0","hi":"inf"}"#).unwrap();
        assert_eq!(inf.hi(), None);
        assert!(serde_json::from_str::<NormValue>(r#"{"lo":"2","hi":"1"}"#).is_err());
    }

    #[test]
    #[should_panic]
    fn rejects_empty_interval() {
        NormValue::new(int(2), int(1));
    }
}
