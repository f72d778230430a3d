use num_traits::{One, Zero};
use serde::Serialize;

use super::presented::kernel_inclusion;
use super::{cokernel, kernel, residue_norm, ModuleMap};
use crate::scalars::{serde_rational, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Strictness {
    /// `c·‖x‖_coim ≤ ‖f(x)‖ ≤ C·‖x‖_coim` on every enumerated class.
    StrictWithConstants {
        #[serde(with = "serde_rational")]
        c: Rational,
        #[serde(rename = "C", with = "serde_rational")]
        big_c: Rational,
        classes_checked: usize,
    },
    /// A nonzero coimage class with zero image.
    NotStrictWitness {
        #[serde(with = "serde_rational::vec")]
        vector: Vec<Rational>,
    },
    Inconclusive { reason: String },
}

const MAX_SAMPLES: usize = 100_000;
// The branch-and-bound is finite on its own; this only guards against
// pathological lattices.
const COIMAGE_SEARCH: u32 = 1 << 20;

/// Compares the coimage (residue) norm with the image norm on all integer
/// source vectors of sup-norm at most `search_bound`.
///
/// The constants are `c = min(1, min ratio)` and `C = max(1, max ratio)`.
/// The verdict is inconclusive when an extreme ratio only shows up on the
/// outer shell of the search box, since it may keep moving further out.
pub fn check_strictness(f: &ModuleMap, search_bound: u32) -> Strictness {
    let src = f.source();
    let n = src.rank();
    let k = kernel(f);
    let has_kernel = !k.kernel_basis().unwrap().is_empty();
    if has_kernel && !src.ring().is_lattice() {
        return Strictness::Inconclusive {
            reason: "coimage residue norm needs an integer base ring".into(),
        };
    }
    let coimage = cokernel(&kernel_inclusion(&k).unwrap());

    let mut bound = search_bound as i64;
    while bound > 0 && (2 * bound as usize + 1).saturating_pow(n as u32) > MAX_SAMPLES {
        bound -= 1;
    }
    let one = Rational::one();
    let mut extremes: Option<[(Rational, bool); 2]> = None;
    let mut classes = 0;
    let mut x = vec![-bound; n];
    if n == 0 || bound == 0 {
        return Strictness::StrictWithConstants {
            c: one.clone(),
            big_c: one,
            classes_checked: 0,
        };
    }
    loop {
        let v: Vec<Rational> = x.iter().map(|&a| Rational::from_integer(a.into())).collect();
        let coim = residue_norm(&coimage, &v, COIMAGE_SEARCH).expect("lattice coimage");
        if !coim.upper().is_zero() {
            if !coim.is_exact() {
                return Strictness::Inconclusive {
                    reason: "coimage norm search was clipped".into(),
                };
            }
            let image = f.target().norm(&f.apply(&v).unwrap()).unwrap();
            if image.is_zero() {
                return Strictness::NotStrictWitness { vector: v };
            }
            classes += 1;
            let ratio = image / coim.upper();
            let interior = x.iter().all(|a| a.abs() < bound);
            match &mut extremes {
                None => extremes = Some([(ratio.clone(), interior), (ratio, interior)]),
                Some([lo, hi]) => {
                    if ratio < lo.0 || (ratio == lo.0 && interior) {
                        *lo = (ratio.clone(), interior || (ratio == lo.0 && lo.1));
                    }
                    if ratio > hi.0 || (ratio == hi.0 && interior) {
                        *hi = (ratio.clone(), interior || (ratio == hi.0 && hi.1));
                    }
                }
            }
        }
        // odometer step
        let mut i = 0;
        while i < n && x[i] == bound {
            x[i] = -bound;
            i += 1;
        }
        if i == n {
            break;
        }
        x[i] += 1;
    }
    match extremes {
        None => Strictness::StrictWithConstants {
            c: one.clone(),
            big_c: one,
            classes_checked: 0,
        },
        Some([(lo, lo_in), (hi, hi_in)]) => {
            let c = lo.min(one.clone());
            let big_c = hi.max(one.clone());
            let needs_lo = c < one;
            let needs_hi = big_c > one;
            if (needs_lo && !lo_in) || (needs_hi && !hi_in) {
                Strictness::Inconclusive {
                    reason: "extreme ratio only reached on the boundary of the search box".into(),
                }
            } else {
                Strictness::StrictWithConstants {
                    c,
                    big_c,
                    classes_checked: classes,
                }
            }
        }
    }
}
