use num_traits::Zero;

use super::{operator_norm, ModuleMap, Presentation, PresentedModule, WeightedFreeModule};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalars::{NormValue, Rational};

/// The finite standard projective `⊕_{m ∈ sample} R_{‖m‖}` with its
/// canonical map `κ(c) = Σ c_m m` into the ambient module of `M`.
#[derive(Clone, Debug)]
pub struct StandardProjective {
    pub module: WeightedFreeModule,
    pub kappa: ModuleMap,
    /// Upper bound for `‖κ‖` measured with the norm of `M`; at most 1.
    pub kappa_norm: NormValue,
}

/// Builds the standard projective on a finite sample of nonzero elements.
///
/// The flavor follows `M`'s ambient module: sum flavor gives the
/// Archimedean coproduct, max flavor the non-Archimedean one.
pub fn standard_projective(
    m: &PresentedModule,
    sample: &[Vec<Rational>],
    search_bound: u32,
) -> Result<StandardProjective> {
    let amb = m.ambient();
    let mut weights = Vec::with_capacity(sample.len());
    let mut ratios = Vec::with_capacity(sample.len());
    for (i, v) in sample.iter().enumerate() {
        let norm = match m.presentation() {
            Presentation::Cokernel { relations } if !amb.ring().is_lattice() => {
                if !relations.matrix().is_zero() {
                    return Err(Error::UnsupportedRing(amb.ring().to_string()));
                }
                NormValue::exact(amb.norm(v)?)
            }
            _ => m.element_norm(v, search_bound)?,
        };
        let w = norm.upper().clone();
        if w.is_zero() {
            return Err(Error::ZeroSampleElement(i));
        }
        ratios.push(norm.upper() / &w);
        weights.push(w);
    }
    let module = WeightedFreeModule::new(amb.ring().clone(), weights, amb.flavor())?;
    let kappa = ModuleMap::new(module.clone(), amb.clone(), Matrix::from_columns(sample, amb.rank())?)?;
    // componentwise criterion, with ‖κ(e_m)‖ = ‖m‖ ≤ weight
    let kappa_norm = NormValue::exact(ratios.into_iter().fold(Rational::zero(), Rational::max));
    debug_assert!(matches!(m.presentation(), Presentation::Cokernel { .. }) || operator_norm(&kappa).certainly_le(&kappa_norm));
    Ok(StandardProjective {
        module,
        kappa,
        kappa_norm,
    })
}
