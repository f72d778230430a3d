//! Exact computations in normed modules over Banach rings and in
//! overconvergent power-series algebras.
//!
//! Every norm is returned as a [`NormValue`]: a closed interval of
//! non-negative rationals that certifiably contains the true value. Nothing in
//! this crate uses floating point.
//!
//! The crate is organised bottom-up:
//!
//! * [`scalars`]: rationals, absolute values of the built-in base rings,
//!   certified n-th roots.
//! * [`normed`]: weighted free modules, operator norms, kernels, cokernels,
//!   residue norms, strictness and the standard projectives.
//! * [`tensor`]: Archimedean and non-Archimedean projective tensor products.
//! * [`series`]: truncated overconvergent series with S- and T-norms.
//! * [`localization`]: Weierstrass/Laurent/rational localizations, Koszul
//!   checks, idempotent splitting and the Mayer-Vietoris sequence.
//! * [`spectrum`]: places of the integers, fibre sup-norms and the spectral
//!   seminorm.
//! * [`nonarch`]: the non-Archimedification functor on finite presentations.
//! * [`selftest`]: the deterministic property suite driven by the CLI.

#![allow(clippy::needless_range_loop)]

pub mod config;
pub mod error;
pub mod linalg;
pub mod localization;
pub mod nonarch;
pub mod normed;
pub mod poly;
pub mod scalars;
pub mod selftest;
pub mod series;
pub mod spectrum;
pub mod tensor;
pub mod torus;
pub mod wire;

pub use error::{Error, Result};
pub use normed::{ModuleMap, NormFlavor, PresentedModule, WeightedFreeModule};
pub use scalars::{BanachRing, NormValue, Rational, RingKind};
pub use series::{DaggerPresentation, PolyRadius, TruncatedSeries};
