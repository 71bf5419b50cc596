//! Finite-dimensional Kuratowski embeddings of compact metric spaces.
//!
//! A finite landmark set `S` of a metric space `(X, d)` induces the map
//! `x ↦ (d(x, s))_{s ∈ S}` into `l^∞(S)`. The map is always 1-Lipschitz; it
//! is `(1 − ε)`-lower-Lipschitz exactly when `S` is *ε-good*: every pair
//! `(x, y)` has a landmark `s` with `(1 − ε)·d(x, y) ≤ |d(x, s) − d(y, s)|`.
//!
//! The crate is organised as:
//!
//! - [`spherical_kernel`]: closed-form geometry of the curvature-1/100 model
//!   space (the round sphere of radius 10) and the witness construction that
//!   makes δ-nets ε-good there.
//! - [`metric_spaces`]: finite samples with analytic, tabulated or
//!   graph-geodesic distance oracles.
//! - [`net_builder`]: farthest-first δ-nets and curvature rescaling.
//! - [`embedding`]: the landmark embedding and its distortion certificate.
//! - [`bounds`]: the closed-form bounds on the size of an ε-good set.
//! - [`cli`]: the command-line front end used by the `kuratowski` binary.

pub mod bounds;
pub mod cli;
pub mod embedding;
mod error;
pub mod metric_spaces;
pub mod model_check;
pub mod net_builder;
pub mod numeric;
pub mod spherical_kernel;

pub use error::{Component, Error, MetricDefect, Result};

/// Upper end of the open ε range on which the curvature bounds are proved: `4 / (5π)`.
pub const EPS_THEORY_MAX: f64 = 4.0 / (5.0 * std::f64::consts::PI);

/// Version stamped into every JSON document the CLI writes.
pub const SCHEMA_VERSION: u32 = 1;
