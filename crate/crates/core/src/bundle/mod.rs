//! Positive Hermitian line (orbi)bundles over the base, their curvature, and
//! L²-machinery for section spaces of powers `L^k`.
//!
//! A bundle is described per chart by the real potential `ψ` with
//! `|frame|²_h = e^{-ψ}`; its curvature is `ω_X = (√−1/2)∂∂̄ψ` and the volume
//! form is `dV = ω_X^n/n!`. The Fubini–Study default is `ψ = log(1+Σ|w|²)`;
//! the weighted line carries the potential `2 log ρ` of the weighted radius;
//! an optional bounded perturbation `ψ → ψ + ε·u` breaks all symmetries while
//! keeping positivity (checked at runtime).

mod quad;
mod sections;
pub(crate) mod weighted;

pub use quad::{gauss_legendre, QuadNode, QuadratureRule};
pub use sections::{fs_gram_diagonal, monomial_exponents, monomial_value, SectionBasis};

use nalgebra::DMatrix;

use crate::geometry::{BaseKind, ChartAtlas, GridSpec};
use crate::{linalg, Cx, Error, Result};
use weighted::WeightedRadius;

/// Hermitian metric choice on the bundle.
#[derive(Clone, Debug)]
pub enum BundleMetric {
    /// `ψ = log(1 + Σ|w|²)` on every chart of ℂPⁿ.
    FubiniStudy,
    /// Fubini–Study plus `ε·u` with the fixed symmetry-breaking `u`.
    PerturbedFubiniStudy { eps: f64 },
    /// `ψ = 2 log ρ` for the weighted radius on the weighted line.
    WeightedRadius,
}

/// A positive Hermitian line (orbi)bundle over the base atlas.
#[derive(Clone, Debug)]
pub struct HermitianBundle {
    pub atlas: ChartAtlas,
    pub metric: BundleMetric,
}

impl HermitianBundle {
    /// Fubini–Study `O(1)` over ℂPⁿ.
    pub fn fubini_study(dim: usize) -> Result<Self> {
        Ok(Self {
            atlas: ChartAtlas::projective(dim)?,
            metric: BundleMetric::FubiniStudy,
        })
    }

    /// Fubini–Study with the symmetry-breaking perturbation `ψ + ε·u`,
    /// `u([z]) = [Re(z₀z̄₁) + 0.3(|z₀|²−|z₁|²)]/‖z‖²` (on ℂP¹ this is
    /// `Re(w)/(1+|w|²) + 0.3(1−|w|²)/(1+|w|²)` in the standard chart).
    pub fn perturbed_fubini_study(dim: usize, eps: f64) -> Result<Self> {
        if !(0.0..=0.2).contains(&eps) {
            return Err(Error::InvalidParameter(format!(
                "perturbation strength {eps} outside [0, 0.2]"
            )));
        }
        let bundle = Self {
            atlas: ChartAtlas::projective(dim)?,
            metric: BundleMetric::PerturbedFubiniStudy { eps },
        };
        bundle.validate_positivity(&GridSpec::default())?;
        Ok(bundle)
    }

    /// The weighted-radius orbibundle metric on `P(a,b)`.
    pub fn weighted_line(a: u32, b: u32) -> Result<Self> {
        Ok(Self {
            atlas: ChartAtlas::weighted_line(a, b)?,
            metric: BundleMetric::WeightedRadius,
        })
    }

    fn weighted_radius(&self) -> WeightedRadius {
        WeightedRadius::new(self.atlas.homogeneous_weights())
    }

    /// Chart potential `ψ` with `|frame|²_h = e^{-ψ}`.
    pub fn psi(&self, chart: usize, w: &[Cx]) -> f64 {
        match &self.metric {
            BundleMetric::FubiniStudy => log_d(w),
            BundleMetric::PerturbedFubiniStudy { eps } => {
                log_d(w) + eps * self.perturbation_value(chart, w)
            }
            BundleMetric::WeightedRadius => {
                let z = self.atlas.ambient_lift(chart, w);
                2.0 * self.weighted_radius().log_rho(&z)
            }
        }
    }

    /// The perturbation `u` as a function on the base (zero for the
    /// unperturbed metrics).
    pub fn perturbation_value(&self, chart: usize, w: &[Cx]) -> f64 {
        match self.atlas.kind {
            BaseKind::Projective { .. } => {
                let z = self.atlas.ambient_lift(chart, w);
                let d: f64 = z.iter().map(|c| c.norm_sqr()).sum();
                let n = (z[0] * z[1].conj()).re + 0.3 * (z[0].norm_sqr() - z[1].norm_sqr());
                n / d
            }
            BaseKind::WeightedLine { .. } => 0.0,
        }
    }

    /// Analytic gradient `∂ψ/∂w_q`.
    pub fn psi_grad(&self, chart: usize, w: &[Cx]) -> Vec<Cx> {
        match &self.metric {
            BundleMetric::FubiniStudy => fs_grad(w),
            BundleMetric::PerturbedFubiniStudy { eps } => {
                let mut g = fs_grad(w);
                let (ug, _) = self.perturbation_derivatives(chart, w);
                for (gq, uq) in g.iter_mut().zip(ug) {
                    *gq += uq * *eps;
                }
                g
            }
            BundleMetric::WeightedRadius => {
                let z = self.atlas.ambient_lift(chart, w);
                let (grad, _) = self.weighted_radius().psi_derivatives(&z);
                vec![grad[moving_index(chart)]]
            }
        }
    }

    /// Analytic complex Hessian `ψ_{q r̄}`; this is the curvature `ω_X` in
    /// `(i/2)`-units.
    pub fn psi_hessian(&self, chart: usize, w: &[Cx]) -> DMatrix<Cx> {
        match &self.metric {
            BundleMetric::FubiniStudy => fs_hessian(w),
            BundleMetric::PerturbedFubiniStudy { eps } => {
                let mut h = fs_hessian(w);
                let (_, uh) = self.perturbation_derivatives(chart, w);
                h += uh * Cx::new(*eps, 0.0);
                h
            }
            BundleMetric::WeightedRadius => {
                let z = self.atlas.ambient_lift(chart, w);
                let (_, hess) = self.weighted_radius().psi_derivatives(&z);
                let m = moving_index(chart);
                DMatrix::from_element(1, 1, hess[(m, m)])
            }
        }
    }

    /// Gradient and Hessian of the perturbation `u = N/D` on projective
    /// charts, by the quotient rule on the ambient lift.
    fn perturbation_derivatives(&self, chart: usize, w: &[Cx]) -> (Vec<Cx>, DMatrix<Cx>) {
        let z = self.atlas.ambient_lift(chart, w);
        let dim = w.len();
        let d: f64 = z.iter().map(|c| c.norm_sqr()).sum();
        let n_val = (z[0] * z[1].conj()).re + 0.3 * (z[0].norm_sqr() - z[1].norm_sqr());
        // Ambient derivatives of N: only z₀, z₁ enter.
        let n_z = |m: usize| -> Cx {
            match m {
                0 => z[1].conj() * 0.5 + z[0].conj() * 0.3,
                1 => z[0].conj() * 0.5 - z[1].conj() * 0.3,
                _ => Cx::new(0.0, 0.0),
            }
        };
        let n_zzbar = |m: usize, p: usize| -> Cx {
            match (m, p) {
                (0, 0) => Cx::new(0.3, 0.0),
                (1, 1) => Cx::new(-0.3, 0.0),
                (0, 1) | (1, 0) => Cx::new(0.5, 0.0),
                _ => Cx::new(0.0, 0.0),
            }
        };
        // Map chart coordinate q to its ambient index.
        let amb = |q: usize| if q < chart { q } else { q + 1 };
        let grad: Vec<Cx> = (0..dim)
            .map(|q| {
                let m = amb(q);
                n_z(m) / d - z[m].conj() * (n_val / (d * d))
            })
            .collect();
        let hess = DMatrix::from_fn(dim, dim, |q, r| {
            let m = amb(q);
            let p = amb(r);
            let dq = z[m].conj();
            let dr_bar = z[p];
            let delta = if m == p { 1.0 } else { 0.0 };
            n_zzbar(m, p) / d
                - n_z(m) * dr_bar / (d * d)
                - n_z(p).conj() * dq / (d * d)
                - dq * dr_bar * (-2.0 * n_val / (d * d * d))
                - Cx::new(delta * n_val / (d * d), 0.0)
        });
        (grad, hess)
    }

    /// Volume density `det ψ_{q r̄}` of `dV = ω_X^n/n!` in chart measure.
    pub fn volume_density(&self, chart: usize, w: &[Cx]) -> f64 {
        let h = self.psi_hessian(chart, w);
        match h.nrows() {
            1 => h[(0, 0)].re,
            _ => h.determinant().re,
        }
    }

    /// Analytic volume of the reference metric in this c₁-class
    /// (`πⁿ/n!` for ℂPⁿ, `π/(ab)` for the weighted line).
    pub fn reference_volume(&self) -> f64 {
        match self.atlas.kind {
            BaseKind::Projective { dim } => {
                let mut v = 1.0;
                for m in 1..=dim {
                    v *= std::f64::consts::PI / m as f64;
                }
                v
            }
            BaseKind::WeightedLine { a, b } => std::f64::consts::PI / (a as f64 * b as f64),
        }
    }

    /// Check `ω_X > 0` at every grid point.
    pub fn validate_positivity(&self, grid: &GridSpec) -> Result<()> {
        for (chart, points) in grid.atlas_points(&self.atlas) {
            for w in points {
                let h = self.psi_hessian(chart, &w);
                let min = linalg::min_eigenvalue(&h);
                if min <= 0.0 {
                    return Err(Error::NotPositiveDefinite {
                        what: "bundle curvature".into(),
                        where_: format!("chart {chart}, w = {:?}", w),
                        min_eig: min,
                    });
                }
            }
        }
        Ok(())
    }

    /// Norm squared `|s|²_{h^k}` of the monomial section `α` at a chart
    /// point: `|m_α(lift)|² e^{-kψ}`.
    pub fn section_norm_sq(&self, k: u32, alpha: &[u32], chart: usize, w: &[Cx]) -> f64 {
        let z = self.atlas.ambient_lift(chart, w);
        let m = monomial_value(alpha, &z);
        m.norm_sqr() * (-(k as f64) * self.psi(chart, w)).exp()
    }

    /// Quadrature rule at the given resolution.
    pub fn quadrature(&self, radial: usize, angular: usize) -> Result<QuadratureRule> {
        QuadratureRule::for_base(&self.atlas, radial, angular)
    }

    /// `∫ f dV` over the base with this bundle's volume form.
    pub fn integrate<F>(&self, rule: &QuadratureRule, f: F) -> f64
    where
        F: Fn(usize, &[Cx]) -> f64 + Sync + Send,
    {
        rule.integrate(|chart, w| f(chart, w) * self.volume_density(chart, w))
    }
}

/// The weighted-line charts move ambient coordinate 1 (chart 0) resp. 0
/// (chart 1).
fn moving_index(chart: usize) -> usize {
    1 - chart
}

fn log_d(w: &[Cx]) -> f64 {
    (1.0 + w.iter().map(|c| c.norm_sqr()).sum::<f64>()).ln()
}

fn fs_grad(w: &[Cx]) -> Vec<Cx> {
    let d = 1.0 + w.iter().map(|c| c.norm_sqr()).sum::<f64>();
    w.iter().map(|c| c.conj() / d).collect()
}

fn fs_hessian(w: &[Cx]) -> DMatrix<Cx> {
    let n = w.len();
    let d = 1.0 + w.iter().map(|c| c.norm_sqr()).sum::<f64>();
    DMatrix::from_fn(n, n, |q, r| {
        let mut v = -w[q].conj() * w[r] / (d * d);
        if q == r {
            v += Cx::new(1.0 / d, 0.0);
        }
        v
    })
}
