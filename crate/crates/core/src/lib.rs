//! Finite element solver for the quasi-static Biot consolidation model.
//!
//! The library discretizes the two-field poroelasticity system
//!
//! ```text
//!   -div(2 mu eps(u) + lambda div(u) I) + grad p = f     (equilibrium)
//!   -div(du/dt) + div(K grad p)                 = g     (mass conservation)
//! ```
//!
//! with continuous piecewise-linear pressure and one of three displacement
//! spaces: P1 (the equal-order pair), P1 enriched with element bubbles (the
//! MINI element in 2D, Taylor-Hood in 1D), implicit Euler in time, and an
//! optional artificial-diffusion pressure stabilization that restores
//! monotone pressure profiles on meshes too coarse for the unstabilized
//! schemes.
//!
//! Modules mirror the pipeline: [`mesh`] builds interval and structured
//! triangle meshes, [`local_elements`] provides per-simplex geometry and the
//! closed-form bubble condensation matrices, [`assembly`] turns mesh +
//! material data into the global sparse blocks and applies boundary
//! conditions, [`linalg`] holds the CSR/LDLT kernels, [`solver`] runs the
//! time stepping, [`analysis`] audits monotonicity and computes errors, and
//! [`benchmarks`] builds the classical consolidation test problems
//! (Terzaghi's column, a low-permeability layered column, Mandel's problem,
//! the Barry-Mercer source problem) together with their analytic solutions.

pub mod analysis;
pub mod assembly;
pub mod benchmarks;
pub mod error;
pub mod linalg;
pub mod local_elements;
pub mod mesh;
pub mod quadrature;
pub mod solver;

pub use error::{Error, Result};
