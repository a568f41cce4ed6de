//! Numerical laboratory for Vaisman structures on Hopf-type quotients of
//! negative line (orbi)bundles.
//!
//! The pipeline mirrors the classical construction: a positive Hermitian line
//! (orbi)bundle `L` over a projective base carries monomial section spaces of
//! the powers `L^k`; L²-orthonormal bases define Bergman kernels and Kodaira
//! maps; the punctured dual `L⁻¹∖{0}` is a Kähler cone whose quotient by a
//! contraction `γ = φ×q` is a Hopf-type Vaisman manifold. The crate builds
//! these objects numerically, verifies the defining identities on sample
//! grids, and measures how the structures induced by the power-`k` immersions
//! converge back to the reference structure after `Σ_{1/k}` homotheties.
//!
//! Modules follow the pipeline:
//!
//! * [`geometry`] — chart atlases, sampled fields, finite-difference exterior
//!   calculus (`d`, `d^c`, `∂∂̄`) and grid norms;
//! * [`bundle`] — Hermitian bundles, quadrature, Gram matrices, orthonormal
//!   section bases and Bergman kernels;
//! * [`vaisman`] — cone potentials, Vaisman structures, residual checks,
//!   `Σ_a` / type I / type II deformations and the rational Lee-class
//!   approximation;
//! * [`embed`] — Kodaira and weighted Kodaira maps, the cone immersion,
//!   Fubini–Study pullbacks and the extended contraction on the target;
//! * [`converge`] — the convergence experiments and their reports.
//!
//! Grid sweeps and Gram assembly are data-parallel; the `parallel` feature
//! (on by default) backs them with rayon. Reductions always run in a fixed
//! order so results are bit-identical regardless of thread count.

pub mod bundle;
pub mod converge;
pub mod embed;
mod error;
pub mod geometry;
pub(crate) mod linalg;
pub(crate) mod par;
pub mod vaisman;

pub use error::{Error, Result};

/// Complex scalar used throughout.
pub type Cx = num_complex::Complex<f64>;
