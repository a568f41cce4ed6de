//! The weighted radius on ℂ^{m}∖{0}.
//!
//! For weights `w` the radius `ρ(z)` is the unique positive solution of
//! `Σ |z_j|² ρ^{-2w_j} = 1`; it scales like `ρ(δ_λ z) = |λ| ρ(z)` under the
//! weighted action `δ_λ(z)_j = λ^{w_j} z_j` and is smooth away from the
//! origin. `ρ²` is the cone potential of the quasi-regular Sasakian structure
//! on the weighted sphere; `2 log ρ` restricted to the chart lifts is the
//! bundle potential of the induced Hermitian metric. Gradient and complex
//! Hessian follow from implicit differentiation of the defining identity.

use nalgebra::DMatrix;

use crate::Cx;

#[derive(Clone, Debug)]
pub struct WeightedRadius {
    pub weights: Vec<u32>,
}

impl WeightedRadius {
    pub fn new(weights: Vec<u32>) -> Self {
        assert!(!weights.is_empty() && weights.iter().all(|&w| w > 0));
        Self { weights }
    }

    /// Solve `Σ |z_j|² e^{-2 w_j σ} = 1` for `σ = log ρ` by Newton iteration.
    pub fn log_rho(&self, z: &[Cx]) -> f64 {
        debug_assert_eq!(z.len(), self.weights.len());
        // Initial guess: the max of the single-term solutions; g is strictly
        // decreasing in σ so Newton from the right converges monotonically.
        let mut sigma = z
            .iter()
            .zip(&self.weights)
            .filter(|(zj, _)| zj.norm_sqr() > 0.0)
            .map(|(zj, &wj)| zj.norm().ln() / wj as f64)
            .fold(f64::NEG_INFINITY, f64::max);
        debug_assert!(sigma.is_finite(), "weighted radius of the origin");
        for _ in 0..60 {
            let mut g = -1.0;
            let mut dg = 0.0;
            for (zj, &wj) in z.iter().zip(&self.weights) {
                let term = zj.norm_sqr() * (-2.0 * wj as f64 * sigma).exp();
                g += term;
                dg -= 2.0 * wj as f64 * term;
            }
            let step = g / dg;
            sigma -= step;
            if step.abs() < 1e-15 * (1.0 + sigma.abs()) {
                break;
            }
        }
        sigma
    }

    pub fn rho(&self, z: &[Cx]) -> f64 {
        self.log_rho(z).exp()
    }

    /// `ρ²`, the cone potential.
    pub fn rho_sq(&self, z: &[Cx]) -> f64 {
        (2.0 * self.log_rho(z)).exp()
    }

    /// Gradient and complex Hessian of `ψ = 2 log ρ` in the ambient
    /// holomorphic coordinates, from implicit differentiation:
    /// with `G_j = ρ^{-2w_j}` and `A = 2 Σ w_j |z_j|² G_j`,
    /// `ψ_{z_j} = 2 z̄_j G_j / A` and
    /// `ψ_{z_j z̄_k} = 2δ_{jk}G_j/A − 4(w_j+w_k)G_jG_k z̄_j z_k/A²
    ///               + 2 B G_jG_k z̄_j z_k /A³`, `B = 4 Σ w_j² |z_j|² G_j`.
    pub fn psi_derivatives(&self, z: &[Cx]) -> (Vec<Cx>, DMatrix<Cx>) {
        let n = z.len();
        let rho = self.rho(z);
        let g: Vec<f64> = self
            .weights
            .iter()
            .map(|&wj| rho.powi(-2 * wj as i32))
            .collect();
        let mut a = 0.0;
        let mut b = 0.0;
        for j in 0..n {
            let f = z[j].norm_sqr() * g[j];
            a += 2.0 * self.weights[j] as f64 * f;
            b += 4.0 * (self.weights[j] as f64).powi(2) * f;
        }
        let grad: Vec<Cx> = (0..n).map(|j| z[j].conj() * (2.0 * g[j] / a)).collect();
        let hess = DMatrix::from_fn(n, n, |j, k| {
            let wj = self.weights[j] as f64;
            let wk = self.weights[k] as f64;
            let zz = z[j].conj() * z[k];
            let mut v = zz * (-4.0 * (wj + wk) * g[j] * g[k] / (a * a)
                + 2.0 * b * g[j] * g[k] / (a * a * a));
            if j == k {
                v += Cx::new(2.0 * g[j] / a, 0.0);
            }
            v
        });
        (grad, hess)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::fd::{complex_hessian, wirtinger_grad, FdSteps};
    use approx::assert_relative_eq;

    #[test]
    fn classical_weights_give_the_euclidean_norm() {
        let r = WeightedRadius::new(vec![1, 1]);
        let z = [Cx::new(3.0, 0.0), Cx::new(0.0, 4.0)];
        assert_relative_eq!(r.rho(&z), 5.0, epsilon = 1e-12);
    }

    #[test]
    fn weighted_homogeneity() {
        let r = WeightedRadius::new(vec![1, 2]);
        let z = [Cx::new(0.4, 0.7), Cx::new(-0.3, 0.2)];
        let s = 1.7;
        let scaled = [z[0] * s, z[1] * s * s];
        assert_relative_eq!(r.rho(&scaled), s * r.rho(&z), epsilon = 1e-12);
    }

    #[test]
    fn boundary_values_on_the_axes() {
        let r = WeightedRadius::new(vec![1, 2]);
        // On z₁ = 0 the identity reduces to |z₀|² ρ^{-2} = 1.
        assert_relative_eq!(
            r.rho(&[Cx::new(2.0, 0.0), Cx::new(0.0, 0.0)]),
            2.0,
            epsilon = 1e-12
        );
        // On z₀ = 0: |z₁|² ρ^{-4} = 1.
        assert_relative_eq!(
            r.rho(&[Cx::new(0.0, 0.0), Cx::new(4.0, 0.0)]),
            2.0,
            epsilon = 1e-12
        );
    }

    #[test]
    fn implicit_derivatives_match_finite_differences() {
        let r = WeightedRadius::new(vec![1, 2]);
        let z = [Cx::new(0.8, -0.3), Cx::new(0.5, 0.6)];
        let (grad, hess) = r.psi_derivatives(&z);
        let psi = |p: &[Cx]| Cx::new(2.0 * r.log_rho(p), 0.0);
        let (fd_grad, _) = wirtinger_grad(&psi, &z, FdSteps::default());
        let fd_hess = complex_hessian(&psi, &z, FdSteps::default());
        for j in 0..2 {
            assert_relative_eq!(grad[j].re, fd_grad[j].re, epsilon = 1e-8);
            assert_relative_eq!(grad[j].im, fd_grad[j].im, epsilon = 1e-8);
            for k in 0..2 {
                assert_relative_eq!(hess[(j, k)].re, fd_hess[(j, k)].re, epsilon = 1e-7);
                assert_relative_eq!(hess[(j, k)].im, fd_hess[(j, k)].im, epsilon = 1e-7);
            }
        }
    }
}
