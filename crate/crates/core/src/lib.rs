//! Spectral laboratory for the linear structurally damped σ-evolution equation
//!
//! ```text
//!   ∂t²u + (−Δ)^σ u + (−Δ)^δ ∂t u = 0,   u(0) = u0,  ∂t u(0) = u1,
//! ```
//!
//! with σ ≥ 1 and δ ∈ (0, σ/2) on ℝⁿ, approximated by a periodic grid.
//!
//! The crate evolves initial data exactly in Fourier space (no time stepping),
//! measures Lᵐ / weighted-Lᵐ / Sobolev norms, evaluates the theoretical decay
//! exponents of the classical and weighted-data estimate families, and
//! numerically exercises the Pitt, Hausdorff–Young and Hölder-product
//! inequalities that drive those estimates.
//!
//! Modules:
//! - [`model`]: characteristic roots and the exact propagator kernels.
//! - [`grid`]: periodic grids, discrete transforms, fractional Laplacian,
//!   exact evolution, cutoff splitting, data generators, serialization.
//! - [`norms`]: Lᵐ, weighted Lᵐ, Sobolev and homogeneous Sobolev norms.
//! - [`rates`]: decay-exponent calculators, the scaled Gamma integral,
//!   a grid-independent radial quadrature oracle, and log–log slope fitting.
//! - [`inequalities`]: admissibility checks and empirical ratio tests.
//! - [`quad`]: adaptive Gauss–Kronrod quadrature used by the oracles.

// Validators use `!(x >= 0.0)` on purpose: the negated form rejects NaN,
// which `x < 0.0` silently admits.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
// Published quadrature/Gamma constants are carried at their full printed
// precision.
#![allow(clippy::excessive_precision)]

pub mod error;
pub mod grid;
pub mod inequalities;
pub mod model;
pub mod norms;
pub mod quad;
pub mod rates;

pub use error::{Error, Result};
pub use grid::{CutoffSpec, GridSpec, RealField, SpectralField};
pub use model::{ModelParams, MultiplierValue, RootPair};
pub use norms::NormSpec;
pub use rates::{Family, RateQuery, RateResult, Term};
