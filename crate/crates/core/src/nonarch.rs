//! The non-Archimedean reflection `π` on presented modules.
//!
//! On a finite presentation over a non-Archimedean ring, `π` keeps the
//! weights and the relation matrix and replaces every sum norm by the max
//! norm: it fixes each rank-one module and turns sum-coproducts and their
//! cokernels into max-coproducts and theirs.

use num_traits::One;
use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::normed::{cokernel, operator_norm, ModuleMap, NormFlavor, PresentedModule, WeightedFreeModule};
use crate::scalars::{pow_signed, BanachRing, NormValue, Rational};
use crate::tensor::{tensor_modules, tensor_norm_certified, TensorElement};

fn require_non_archimedean(m: &WeightedFreeModule) -> Result<()> {
    if m.ring().non_archimedean() {
        Ok(())
    } else {
        Err(Error::ArchimedeanBaseRing)
    }
}

/// `π(M)`: the same presentation with max flavor. Max-flavored input is
/// returned unchanged, so `π ∘ ι` is the identity.
pub fn pi_module(m: &PresentedModule) -> Result<PresentedModule> {
    require_non_archimedean(m.ambient())?;
    m.with_flavor(NormFlavor::Max)
}

pub fn pi_free(m: &WeightedFreeModule) -> Result<WeightedFreeModule> {
    require_non_archimedean(m)?;
    m.with_flavor(NormFlavor::Max)
}

#[derive(Clone, Debug, Serialize)]
pub struct AdjunctionSample {
    /// Operator norm on the sum-flavored source `V`.
    pub from_v: NormValue,
    /// Operator norm on `π(V)`.
    pub from_pi_v: NormValue,
    pub equal: bool,
    /// Both sides agree on membership in the ball of radius r.
    pub same_ball: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct AdjunctionReport {
    pub samples: Vec<AdjunctionSample>,
    pub all_equal: bool,
}

/// For each matrix `A: V → W` (W max-flavored), compares `‖A‖` on `V` and
/// on `π(V)`. Both are the componentwise maximum `max_i ‖A e_i‖/w_i`, so a
/// map has norm ≤ r on one side exactly when it does on the other.
pub fn check_adjunction(
    v: &WeightedFreeModule,
    w: &WeightedFreeModule,
    r: &Rational,
    matrices: &[Matrix],
) -> Result<AdjunctionReport> {
    require_non_archimedean(v)?;
    if v.ring() != w.ring() {
        return Err(Error::RingMismatch);
    }
    if w.flavor() != NormFlavor::Max {
        return Err(Error::FlavorMismatch);
    }
    let v_sum = v.with_flavor(NormFlavor::Sum)?;
    let v_max = pi_free(v)?;
    let ball = NormValue::exact(r.clone());
    let samples = matrices
        .iter()
        .map(|a| {
            let from_v = operator_norm(&ModuleMap::new(v_sum.clone(), w.clone(), a.clone())?);
            let from_pi_v = operator_norm(&ModuleMap::new(v_max.clone(), w.clone(), a.clone())?);
            Ok(AdjunctionSample {
                equal: from_v == from_pi_v,
                same_ball: from_v.certainly_le(&ball) == from_pi_v.certainly_le(&ball),
                from_v,
                from_pi_v,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let all_equal = samples.iter().all(|s| s.equal && s.same_ball);
    Ok(AdjunctionReport { samples, all_equal })
}

#[derive(Clone, Debug, Serialize)]
pub struct PiTensorReport {
    pub weights_agree: bool,
    pub generators_checked: usize,
    pub norms_agree: bool,
    pub confirmed: bool,
}

/// Compares `π(U ⊗ V)` with `π(U) ⊗ π(V)`: weights generator by generator,
/// and the certified tensor norm of each `e_i ⊗ f_j` in the second against
/// its weight in the first.
pub fn pi_tensor_check(u: &WeightedFreeModule, v: &WeightedFreeModule) -> Result<PiTensorReport> {
    require_non_archimedean(u)?;
    let via_sum = pi_free(&tensor_modules(u, v, NormFlavor::Sum)?)?;
    let (pu, pv) = (pi_free(u)?, pi_free(v)?);
    let via_pi = tensor_modules(&pu, &pv, NormFlavor::Max)?;
    let weights_agree = via_sum.weights() == via_pi.weights() && via_sum.flavor() == via_pi.flavor();
    let mut norms_agree = true;
    let mut checked = 0;
    for i in 0..pu.rank() {
        for j in 0..pv.rank() {
            let g = TensorElement::generator(&pu, &pv, i, j)?;
            let value = tensor_norm_certified(&g, NormFlavor::Max, 1, 1)?;
            let weight = &via_sum.weights()[i * pv.rank() + j];
            norms_agree &= value == NormValue::exact(weight.clone());
            checked += 1;
        }
    }
    Ok(PiTensorReport {
        weights_agree,
        generators_checked: checked,
        norms_agree,
        confirmed: weights_agree && norms_agree,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct PiCheckReport {
    pub samples: usize,
    pub equal: usize,
    pub first_mismatch: Option<AdjunctionSample>,
    pub tensor: PiTensorReport,
    pub confirmed: bool,
}

/// A random ring element `±a·p^k` with `a ≤ 50` and `|k| ≤ 3`.
fn sample_scalar<R: Rng>(ring: &BanachRing, rng: &mut R) -> Rational {
    let a = Rational::from_integer(rng.gen_range(-50i64..=50).into());
    match ring.prime() {
        Some(p) => a * pow_signed(&Rational::from_integer(p.into()), rng.gen_range(-3..=3)),
        None => a,
    }
}

/// [`check_adjunction`] on `samples` random maps `V → π(V)` with `r = 1`,
/// and [`pi_tensor_check`] of `V` with itself.
pub fn pi_check<R: Rng>(v: &WeightedFreeModule, samples: usize, rng: &mut R) -> Result<PiCheckReport> {
    let target = pi_free(v)?;
    let n = v.rank();
    let matrices = (0..samples)
        .map(|_| {
            let rows = (0..n).map(|_| (0..n).map(|_| sample_scalar(v.ring(), rng)).collect()).collect();
            Matrix::from_rows(rows, n)
        })
        .collect::<Result<Vec<_>>>()?;
    let report = check_adjunction(v, &target, &Rational::one(), &matrices)?;
    let tensor = pi_tensor_check(v, v)?;
    let equal = report.samples.iter().filter(|s| s.equal && s.same_ball).count();
    let first_mismatch = report.samples.into_iter().find(|s| !(s.equal && s.same_ball));
    Ok(PiCheckReport {
        samples,
        equal,
        confirmed: first_mismatch.is_none() && tensor.confirmed,
        first_mismatch,
        tensor,
    })
}

/// `π(coker f)` and `coker(π f)` have the same ambient and relation matrix.
pub fn pi_commutes_with_cokernel(f: &ModuleMap) -> Result<bool> {
    let left = pi_module(&cokernel(f))?;
    let right = cokernel(&f.with_flavors(NormFlavor::Max, NormFlavor::Max)?);
    Ok(left.ambient() == right.ambient() && left.relations()?.matrix() == right.relations()?.matrix())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::{int, rat};

    fn qp() -> BanachRing {
        BanachRing::padic(3).unwrap()
    }

    fn module(w: &[i64], flavor: NormFlavor) -> WeightedFreeModule {
        WeightedFreeModule::new(qp(), w.iter().map(|&x| int(x)).collect(), flavor).unwrap()
    }

    #[test]
    fn pi_switches_flavor_only() {
        let m = PresentedModule::free(module(&[1, 2], NormFlavor::Sum));
        let pm = pi_module(&m).unwrap();
        assert_eq!(pm.ambient(), &module(&[1, 2], NormFlavor::Max));
        assert_eq!(pi_module(&pm).unwrap(), pm);
        let zero = PresentedModule::free(WeightedFreeModule::zero(qp(), NormFlavor::Sum).unwrap());
        assert_eq!(pi_module(&zero).unwrap().ambient().rank(), 0);
        let z = PresentedModule::free(WeightedFreeModule::unit_weights(BanachRing::integers(), 1, NormFlavor::Sum).unwrap());
        assert_eq!(pi_module(&z), Err(Error::ArchimedeanBaseRing));
    }

    #[test]
    fn adjunction_examples() {
        let v = module(&[1, 1], NormFlavor::Sum);
        let w = module(&[1], NormFlavor::Max);
        let a = Matrix::from_rows(vec![vec![int(1), int(1)]], 2).unwrap();
        let b = Matrix::from_rows(vec![vec![int(3), int(1)]], 2).unwrap();
        let report = check_adjunction(&v, &w, &int(1), &[a, b, Matrix::zeros(1, 2)]).unwrap();
        assert!(report.all_equal);
        assert_eq!(report.samples[0].from_v, NormValue::exact(int(1)));
        assert_eq!(report.samples[1].from_pi_v, NormValue::exact(int(1)));
        assert_eq!(report.samples[2].from_v, NormValue::zero());
    }

    #[test]
    fn tensor_routes_agree() {
        let r = pi_tensor_check(&module(&[2], NormFlavor::Sum), &module(&[3], NormFlavor::Sum)).unwrap();
        assert!(r.confirmed);
        let u = WeightedFreeModule::new(qp(), vec![rat(1, 3), int(9)], NormFlavor::Sum).unwrap();
        assert!(pi_tensor_check(&u, &module(&[1, 1, 1], NormFlavor::Sum)).unwrap().confirmed);
        let zero = WeightedFreeModule::zero(qp(), NormFlavor::Sum).unwrap();
        let r = pi_tensor_check(&zero, &u).unwrap();
        assert!(r.confirmed && r.generators_checked == 0);
    }

    #[test]
    fn sampled_check() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let v = WeightedFreeModule::new(qp(), vec![rat(1, 3), int(2)], NormFlavor::Sum).unwrap();
        let r = pi_check(&v, 50, &mut rng).unwrap();
        assert!(r.confirmed && r.equal == 50);
    }

    #[test]
    fn cokernels_commute() {
        let f = ModuleMap::new(
            module(&[1], NormFlavor::Sum),
            module(&[1, 2], NormFlavor::Sum),
            Matrix::from_rows(vec![vec![int(3)], vec![int(1)]], 1).unwrap(),
        )
        .unwrap();
        assert!(pi_commutes_with_cokernel(&f).unwrap());
    }
}
