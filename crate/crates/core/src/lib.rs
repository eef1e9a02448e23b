//! Quasi-arithmetic means `f^{-1}(sum w_i f(a_i))` and the distance
//! `rho(M_f, M_g) = sup |M_f(a, w) - M_g(a, w)|` between two of them.
//!
//! The crate evaluates means, the three-point operator `B_f` and the
//! Arrow-Pratt operator `A_f = f''/f'`, the norms these feed into, four upper
//! bounds on `rho`, and an empirical worst-case search that lower-bounds
//! `rho` so every upper bound can be checked.
//!
//! All numerical code is generic over [`Scalar`] (`f32` or `f64`); the
//! `*64` aliases below fix the common double-precision case.

pub mod bounds;
pub mod error;
pub mod generators;
pub mod means;
pub mod norms;
pub mod operators;
pub mod scalar;
pub mod search;

pub use bounds::{best_bound, bound_cargo_shisha, bound_l1, bound_osc, bound_pales, BoundName, BoundOptions, BoundReport};
pub use error::{QamError, Result};
pub use generators::{Generator, GeneratorKind, Interval};
pub use means::{power_mean, qa_mean, WeightedSample};
pub use norms::{inf_abs_deriv, l1_norm, osc_norm, sup_b_diff, sup_norm, NormEstimate, NormKind};
pub use operators::{arrow_pratt, pales_b, weighted_b_sum, DeltaPoint};
pub use scalar::Scalar;
pub use search::{convergence_diagnostic, rho_lower_bound, ConvergenceReport, RhoEstimate, SearchConfig};

pub type Interval64 = Interval<f64>;
pub type Generator64 = Generator<f64>;
pub type GeneratorKind64 = GeneratorKind<f64>;
pub type WeightedSample64 = WeightedSample<f64>;
pub type DeltaPoint64 = DeltaPoint<f64>;
pub type NormEstimate64 = NormEstimate<f64>;
pub type BoundReport64 = BoundReport<f64>;
pub type RhoEstimate64 = RhoEstimate<f64>;
pub type ConvergenceReport64 = ConvergenceReport<f64>;

pub type Interval32 = Interval<f32>;
pub type Generator32 = Generator<f32>;
pub type WeightedSample32 = WeightedSample<f32>;
