//! Finite-scale workbench for coarse geometry of metric families.
//!
//! The crate works with finite metric spaces and families of them, and
//! provides the constructions that appear when studying asymptotic dimension
//! and decomposition complexity: covers and their Lebesgue numbers,
//! `r`-disjoint decompositions and their certificates, quotients by finite
//! group actions, ℓᵖ products, cones over metric spaces, minimax ultrametrics
//! and ray-tree embeddings.
//!
//! All metric code is generic over [`Scalar`]; use the aliases below for the
//! common cases. The cone construction needs a [`Real`] scalar.

pub mod cone;
pub mod constructions;
pub mod cover;
pub mod decomposition;
pub mod format;
pub mod generators;
pub mod maps;
pub mod metric;
pub mod scalar;
mod union_find;
pub mod verdict;

pub use num_rational::Rational64;

pub use scalar::{Extended, Real, Scalar};
pub use union_find::UnionFind;
pub use verdict::{Check, Status, Verdict};

/// Metric space with floating point distances.
pub type Space = metric::FiniteMetricSpace<f64>;
/// Metric space with exact integer distances.
pub type IntSpace = metric::FiniteMetricSpace<i64>;
/// Metric space with exact rational distances.
pub type RationalSpace = metric::FiniteMetricSpace<Rational64>;
/// Family of floating point metric spaces.
pub type Family = metric::MetricFamily<f64>;
/// Family of integer metric spaces.
pub type IntFamily = metric::MetricFamily<i64>;
/// Cone parameter over `f64`.
pub type Rho = cone::RhoFunction<f64>;
/// Step-function envelope over `f64`.
pub type Envelope = maps::MonotoneEnvelope<f64>;
