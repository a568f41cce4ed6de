//! Sampled scalar and form fields on chart coordinates.
//!
//! Conventions, fixed once and used everywhere:
//!
//! * real (1,1)-forms are reported through their Hermitian component matrix
//!   `H` in units of `(i/2) dw_j ∧ dw̄_k`, so `α = Σ H_jk (i/2) dw_j∧dw̄_k`
//!   (in one variable `(i/2) dw∧dw̄ = dx∧dy`);
//! * `d^c = i(∂̄ − ∂)`, hence `d d^c = 2i ∂∂̄` on functions;
//! * a real 1-form is stored through its `(1,0)`-coefficients `a_j`, the
//!   `(0,1)` part being their conjugates.

use std::sync::Arc;

use nalgebra::DMatrix;

use crate::{linalg, Cx};

type ScalarEval = dyn Fn(usize, &[Cx]) -> Cx + Send + Sync;
type OneFormEval = dyn Fn(usize, &[Cx]) -> OneFormValue + Send + Sync;

/// A scalar field evaluated per chart.
#[derive(Clone)]
pub struct ScalarField {
    pub name: String,
    /// Whether the field is known to be real-valued.
    pub real: bool,
    eval: Arc<ScalarEval>,
}

impl ScalarField {
    pub fn new(
        name: impl Into<String>,
        real: bool,
        eval: impl Fn(usize, &[Cx]) -> Cx + Send + Sync + 'static,
    ) -> Self {
        Self {
            name: name.into(),
            real,
            eval: Arc::new(eval),
        }
    }

    pub fn real_fn(
        name: impl Into<String>,
        eval: impl Fn(usize, &[Cx]) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Self::new(name, true, move |chart, w| Cx::new(eval(chart, w), 0.0))
    }

    pub fn eval(&self, chart: usize, w: &[Cx]) -> Cx {
        (self.eval)(chart, w)
    }
}

/// Value of a complex 1-form: `θ = Σ dw_j·dw[j] + Σ dw̄_j·dwbar[j]`.
#[derive(Clone, Debug)]
pub struct OneFormValue {
    pub dw: Vec<Cx>,
    pub dwbar: Vec<Cx>,
}

impl OneFormValue {
    /// A real 1-form from its (1,0)-coefficients.
    pub fn real_from_dw(dw: Vec<Cx>) -> Self {
        let dwbar = dw.iter().map(|a| a.conj()).collect();
        Self { dw, dwbar }
    }

    /// Max absolute coefficient.
    pub fn max_component(&self) -> f64 {
        self.dw
            .iter()
            .chain(self.dwbar.iter())
            .map(|c| c.norm())
            .fold(0.0, f64::max)
    }

    /// Deviation from reality (`dwbar - conj(dw)`).
    pub fn reality_residual(&self) -> f64 {
        self.dw
            .iter()
            .zip(&self.dwbar)
            .map(|(a, b)| (b - a.conj()).norm())
            .fold(0.0, f64::max)
    }
}

/// A 1-form field evaluated per chart.
#[derive(Clone)]
pub struct OneFormField {
    pub name: String,
    pub real: bool,
    /// Set when the form is asserted closed; verified by d-residual tests.
    pub closed: Option<bool>,
    eval: Arc<OneFormEval>,
}

impl OneFormField {
    pub fn new(
        name: impl Into<String>,
        real: bool,
        eval: impl Fn(usize, &[Cx]) -> OneFormValue + Send + Sync + 'static,
    ) -> Self {
        Self {
            name: name.into(),
            real,
            closed: None,
            eval: Arc::new(eval),
        }
    }

    pub fn closed(mut self, flag: bool) -> Self {
        self.closed = Some(flag);
        self
    }

    pub fn eval(&self, chart: usize, w: &[Cx]) -> OneFormValue {
        (self.eval)(chart, w)
    }
}

/// Value of a 2-form split by (p,q)-type.
///
/// `c20[(i,j)]` with `i<j` are the `dw_i∧dw_j` coefficients, `c11[(i,j)]` the
/// `dw_i∧dw̄_j` coefficients (raw, not `(i/2)`-units), `c02` mirrors `c20`
/// for `dw̄_i∧dw̄_j`.
#[derive(Clone, Debug)]
pub struct TwoFormValue {
    pub c20: Vec<Cx>,
    pub c11: DMatrix<Cx>,
    pub c02: Vec<Cx>,
}

impl TwoFormValue {
    pub fn max_component(&self) -> f64 {
        let a = self.c20.iter().chain(self.c02.iter()).map(|c| c.norm());
        let b = self.c11.iter().map(|c| c.norm());
        a.chain(b).fold(0.0, f64::max)
    }

    /// Hermitian component matrix of the (1,1)-part in `(i/2)`-units
    /// (`H = -2i·c11`, Hermitian-symmetrized).
    pub fn hermitian_h(&self) -> DMatrix<Cx> {
        let h = self.c11.map(|c| Cx::new(0.0, -2.0) * c);
        linalg::hermitian_part(&h)
    }

    /// Conjugate-symmetry residual of the (1,1)-part in `(i/2)`-units.
    pub fn hermitian_residual(&self) -> f64 {
        let h = self.c11.map(|c| Cx::new(0.0, -2.0) * c);
        linalg::hermitian_residual(&h)
    }
}

/// A real (1,1)-form value: Hermitian matrix in `(i/2)`-units together with a
/// positivity flag.
#[derive(Clone, Debug)]
pub struct HermitianValue {
    pub h: DMatrix<Cx>,
    /// Whether `h` is positive definite at this point.
    pub positive: bool,
}

impl HermitianValue {
    pub fn from_matrix(h: DMatrix<Cx>) -> Self {
        let positive = linalg::min_eigenvalue(&h) > 0.0;
        Self { h, positive }
    }

    pub fn max_component(&self) -> f64 {
        linalg::max_abs(&self.h)
    }
}
