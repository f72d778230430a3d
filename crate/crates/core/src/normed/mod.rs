//! Weighted free modules over a Banach ring and bounded maps between them.

mod presented;
mod projective;
mod strictness;

pub use presented::{cokernel, kernel, residue_norm, Presentation, PresentedModule};
pub use projective::{standard_projective, StandardProjective};
pub use strictness::{check_strictness, Strictness};

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalars::{BanachRing, NormValue, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NormFlavor {
    /// `‖c‖ = Σ |c_i| w_i`.
    Sum,
    /// `‖c‖ = max |c_i| w_i`; needs a non-Archimedean ring.
    Max,
}

impl NormFlavor {
    pub fn natural_for(ring: &BanachRing) -> Self {
        if ring.non_archimedean() {
            NormFlavor::Max
        } else {
            NormFlavor::Sum
        }
    }

    pub(crate) fn combine(self, acc: Rational, x: Rational) -> Rational {
        match self {
            NormFlavor::Sum => acc + x,
            NormFlavor::Max => acc.max(x),
        }
    }
}

/// `R^n` with `‖e_i‖ = w_i` (up to the ring's scale) in either flavor.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WeightedFreeModule {
    ring: BanachRing,
    weights: Vec<Rational>,
    flavor: NormFlavor,
}

impl WeightedFreeModule {
    pub fn new(ring: BanachRing, weights: Vec<Rational>, flavor: NormFlavor) -> Result<Self> {
        if let Some(w) = weights.iter().find(|w| **w <= Rational::zero()) {
            return Err(Error::invalid(format!("weight {w} is not positive")));
        }
        if flavor == NormFlavor::Max && !ring.non_archimedean() {
            return Err(Error::FlavorMismatch);
        }
        Ok(WeightedFreeModule {
            ring,
            weights,
            flavor,
        })
    }

    pub fn zero(ring: BanachRing, flavor: NormFlavor) -> Result<Self> {
        Self::new(ring, Vec::new(), flavor)
    }

    pub fn unit_weights(ring: BanachRing, rank: usize, flavor: NormFlavor) -> Result<Self> {
        Self::new(ring, vec![Rational::from_integer(1.into()); rank], flavor)
    }

    pub fn ring(&self) -> &BanachRing {
        &self.ring
    }

    pub fn weights(&self) -> &[Rational] {
        &self.weights
    }

    pub fn flavor(&self) -> NormFlavor {
        self.flavor
    }

    pub fn rank(&self) -> usize {
        self.weights.len()
    }

    pub fn with_flavor(&self, flavor: NormFlavor) -> Result<Self> {
        Self::new(self.ring.clone(), self.weights.clone(), flavor)
    }

    pub fn check_vector(&self, v: &[Rational]) -> Result<()> {
        if v.len() != self.rank() {
            return Err(Error::DimensionMismatch {
                expected: self.rank(),
                found: v.len(),
            });
        }
        v.iter().try_for_each(|x| self.ring.check_element(x))
    }

    /// The exact norm as a rational; see [`vector_norm`].
    pub fn norm(&self, v: &[Rational]) -> Result<Rational> {
        self.check_vector(v)?;
        Ok(self.scale_free_norm(v) * self.ring.scale())
    }

    /// The norm computed with the unscaled absolute value.
    pub(crate) fn scale_free_norm(&self, v: &[Rational]) -> Rational {
        v.iter()
            .zip(&self.weights)
            .filter(|(x, _)| !x.is_zero())
            .fold(Rational::zero(), |acc, (x, w)| {
                self.flavor.combine(acc, self.ring.raw_abs(x) * w)
            })
    }
}

pub fn vector_norm(m: &WeightedFreeModule, v: &[Rational]) -> Result<NormValue> {
    m.norm(v).map(NormValue::exact)
}

/// A bounded map given by a `target.rank() × source.rank()` matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuleMap {
    source: WeightedFreeModule,
    target: WeightedFreeModule,
    matrix: Matrix,
}

impl ModuleMap {
    pub fn new(source: WeightedFreeModule, target: WeightedFreeModule, matrix: Matrix) -> Result<Self> {
        if source.ring() != target.ring() {
            return Err(Error::RingMismatch);
        }
        if matrix.rows() != target.rank() {
            return Err(Error::DimensionMismatch {
                expected: target.rank(),
                found: matrix.rows(),
            });
        }
        if matrix.cols() != source.rank() {
            return Err(Error::DimensionMismatch {
                expected: source.rank(),
                found: matrix.cols(),
            });
        }
        for i in 0..matrix.rows() {
            for x in matrix.row(i) {
                source.ring().check_element(x)?;
            }
        }
        Ok(ModuleMap {
            source,
            target,
            matrix,
        })
    }

    pub fn from_rows(
        source: WeightedFreeModule,
        target: WeightedFreeModule,
        rows: Vec<Vec<Rational>>,
    ) -> Result<Self> {
        let m = Matrix::from_rows(rows, source.rank())?;
        Self::new(source, target, m)
    }

    pub fn identity(m: &WeightedFreeModule) -> Self {
        Self::new(m.clone(), m.clone(), Matrix::identity(m.rank())).unwrap()
    }

    pub fn zero(source: WeightedFreeModule, target: WeightedFreeModule) -> Result<Self> {
        let m = Matrix::zeros(target.rank(), source.rank());
        Self::new(source, target, m)
    }

    pub fn source(&self) -> &WeightedFreeModule {
        &self.source
    }

    pub fn target(&self) -> &WeightedFreeModule {
        &self.target
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn apply(&self, v: &[Rational]) -> Result<Vec<Rational>> {
        self.source.check_vector(v)?;
        self.matrix.mul_vec(v)
    }

    /// `self ∘ first`.
    pub fn compose(&self, first: &ModuleMap) -> Result<ModuleMap> {
        if first.target != self.source {
            return Err(Error::invalid("maps are not composable"));
        }
        Self::new(
            first.source.clone(),
            self.target.clone(),
            self.matrix.mul(&first.matrix)?,
        )
    }

    /// The same matrix between re-flavored modules.
    pub fn with_flavors(&self, source: NormFlavor, target: NormFlavor) -> Result<ModuleMap> {
        Self::new(
            self.source.with_flavor(source)?,
            self.target.with_flavor(target)?,
            self.matrix.clone(),
        )
    }
}

/// Operator norm `sup ‖f(x)‖/‖x‖`.
///
/// Exact when the source has sum flavor or both modules have max flavor:
/// the supremum is then attained on a basis vector. For a max source and a
/// sum target the result is the interval between the basis-vector ratio and
/// `Σ_j v_j max_i |a_ji|/w_i`.
pub fn operator_norm(f: &ModuleMap) -> NormValue {
    let (src, tgt) = (&f.source, &f.target);
    let column_ratio = (0..src.rank())
        .map(|i| tgt.scale_free_norm(&f.matrix.column(i)) / &src.weights[i])
        .fold(Rational::zero(), Rational::max);
    match (src.flavor, tgt.flavor) {
        (NormFlavor::Max, NormFlavor::Sum) => {
            let hi = (0..tgt.rank())
                .map(|j| {
                    let m = (0..src.rank())
                        .map(|i| src.ring.raw_abs(f.matrix.get(j, i)) / &src.weights[i])
                        .fold(Rational::zero(), Rational::max);
                    m * &tgt.weights[j]
                })
                .sum();
            NormValue::new(column_ratio, hi)
        }
        _ => NormValue::exact(column_ratio),
    }
}

/// `⊕ M_i` with concatenated weights and the requested flavor.
pub fn direct_sum(
    ring: &BanachRing,
    modules: &[WeightedFreeModule],
    flavor: NormFlavor,
) -> Result<WeightedFreeModule> {
    if modules.iter().any(|m| m.ring() != ring) {
        return Err(Error::RingMismatch);
    }
    if flavor == NormFlavor::Max && !ring.non_archimedean() {
        return Err(Error::FlavorMismatch);
    }
    let weights = modules.iter().flat_map(|m| m.weights.clone()).collect();
    WeightedFreeModule::new(ring.clone(), weights, flavor)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::{int, rat};

    fn module(ring: BanachRing, w: &[i64], flavor: NormFlavor) -> WeightedFreeModule {
        WeightedFreeModule::new(ring, w.iter().map(|&x| int(x)).collect(), flavor).unwrap()
    }

    fn ints(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn vector_norms() {
        let z = module(BanachRing::integers(), &[1, 1], NormFlavor::Sum);
        assert_eq!(vector_norm(&z, &ints(&[3, -2])).unwrap(), NormValue::exact(int(5)));
        let q5 = module(BanachRing::padic(5).unwrap(), &[1, 1], NormFlavor::Max);
        assert_eq!(vector_norm(&q5, &ints(&[5, 1])).unwrap(), NormValue::exact(int(1)));
        assert_eq!(vector_norm(&q5, &ints(&[0, 0])).unwrap(), NormValue::zero());
        assert!(matches!(
            vector_norm(&z, &ints(&[1])),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn max_flavor_needs_non_archimedean_ring() {
        assert_eq!(
            WeightedFreeModule::new(BanachRing::integers(), ints(&[1]), NormFlavor::Max),
            Err(Error::FlavorMismatch)
        );
        assert_eq!(
            direct_sum(&BanachRing::rationals(), &[], NormFlavor::Max),
            Err(Error::FlavorMismatch)
        );
    }

    #[test]
    fn operator_norms() {
        for flavor in [NormFlavor::Sum, NormFlavor::Max] {
            let m = module(BanachRing::padic(3).unwrap(), &[2, 3], flavor);
            assert_eq!(operator_norm(&ModuleMap::identity(&m)), NormValue::exact(int(1)));
        }
        let qp = BanachRing::padic(7).unwrap();
        let f = ModuleMap::from_rows(
            module(qp.clone(), &[1, 1], NormFlavor::Sum),
            module(qp, &[1], NormFlavor::Max),
            vec![ints(&[1, 1])],
        )
        .unwrap();
        assert_eq!(operator_norm(&f), NormValue::exact(int(1)));
        let z = BanachRing::integers();
        let f = ModuleMap::from_rows(
            module(z.clone(), &[2], NormFlavor::Sum),
            module(z, &[1], NormFlavor::Sum),
            vec![ints(&[6])],
        )
        .unwrap();
        assert_eq!(operator_norm(&f), NormValue::exact(int(3)));
    }

    #[test]
    fn max_to_sum_is_bracketed() {
        let t = BanachRing::integers_trivial();
        let f = ModuleMap::from_rows(
            module(t.clone(), &[1, 1], NormFlavor::Max),
            module(t, &[1], NormFlavor::Sum),
            vec![ints(&[1, 1])],
        )
        .unwrap();
        let n = operator_norm(&f);
        assert_eq!(*n.lo(), int(1));
        assert_eq!(*n.upper(), int(1));
    }

    #[test]
    fn direct_sums() {
        let z = BanachRing::integers();
        let s = direct_sum(
            &z,
            &[module(z.clone(), &[2], NormFlavor::Sum), module(z.clone(), &[3], NormFlavor::Sum)],
            NormFlavor::Sum,
        )
        .unwrap();
        assert_eq!(s.weights(), &ints(&[2, 3])[..]);
        let qp = BanachRing::padic(2).unwrap();
        let one = module(qp.clone(), &[1], NormFlavor::Max);
        let s = direct_sum(&qp, &[one.clone(), one], NormFlavor::Max).unwrap();
        assert_eq!(vector_norm(&s, &ints(&[1, 1])).unwrap(), NormValue::exact(int(1)));
        assert_eq!(direct_sum(&z, &[], NormFlavor::Sum).unwrap().rank(), 0);
    }

    #[test]
    fn rescaled_ring_cancels_in_operator_norm() {
        let r = BanachRing::integers().rescaled(rat(1, 3)).unwrap();
        let m = module(r, &[1, 2], NormFlavor::Sum);
        assert_eq!(m.norm(&ints(&[3, 0])).unwrap(), int(1));
        assert_eq!(operator_norm(&ModuleMap::identity(&m)), NormValue::exact(int(1)));
    }
}
