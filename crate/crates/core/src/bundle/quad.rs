//! Quadrature rules realizing `∫_X (·) dV` with `dV = ω_X^n/n!`.
//!
//! Nodes carry plain Euclidean chart measure (divided by the stabilizer order
//! on orbifold cover charts); the bundle's volume density `det ∂∂̄ψ` is a
//! per-node factor, so one rule serves every Hermitian metric on the base.
//!
//! For ℂP¹ the rule lives on a single chart via the substitution
//! `u = |w|²/(1+|w|²)`: Gauss–Legendre in `u` (the Fubini–Study measure is
//! `½ du dφ`, monomial integrands become polynomials in `u`) times a uniform
//! trapezoid in the angle, exact for trigonometric polynomials below the node
//! count. Higher-dimensional projective spaces decompose into the `n+1`
//! max-coordinate unit polydiscs; the weighted line into its two unit cover
//! discs with the stabilizer division.

use crate::geometry::{BaseKind, ChartAtlas};
use crate::{Cx, Error, Result};

/// One quadrature node: a chart point with its Euclidean measure weight.
#[derive(Clone, Debug)]
pub struct QuadNode {
    pub chart: usize,
    pub w: Vec<Cx>,
    pub weight: f64,
}

/// Nodes and weights realizing the base integral.
#[derive(Clone, Debug)]
pub struct QuadratureRule {
    pub nodes: Vec<QuadNode>,
    pub radial: usize,
    pub angular: usize,
}

/// Gauss–Legendre nodes and weights on `[-1, 1]` by Newton iteration on the
/// Legendre recurrence.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, dp) = legendre_and_derivative(n, z);
            let dz = p / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        let (_, dp) = legendre_and_derivative(n, z);
        let weight = 2.0 / ((1.0 - z * z) * dp * dp);
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = weight;
        w[n - 1 - i] = weight;
    }
    (x, w)
}

fn legendre_and_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    // P'_n(x) = n (x P_n - P_{n-1}) / (x² - 1)
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

/// Gauss–Legendre nodes/weights transplanted to `[0, 1]`.
fn gauss_legendre_unit(n: usize) -> (Vec<f64>, Vec<f64>) {
    let (x, w) = gauss_legendre(n);
    (
        x.iter().map(|t| 0.5 * (t + 1.0)).collect(),
        w.iter().map(|v| 0.5 * v).collect(),
    )
}

impl QuadratureRule {
    /// Rule for the given base with `radial` Gauss–Legendre nodes and
    /// `angular` trapezoid nodes per coordinate.
    pub fn for_base(atlas: &ChartAtlas, radial: usize, angular: usize) -> Result<Self> {
        if radial < 2 || angular < 4 {
            return Err(Error::InvalidParameter(
                "quadrature needs at least 2 radial and 4 angular nodes".into(),
            ));
        }
        let tau = 2.0 * std::f64::consts::PI;
        let dphi = tau / angular as f64;
        let mut nodes = Vec::new();
        match atlas.kind {
            BaseKind::Projective { dim: 1 } => {
                // Global substitution u = |w|²/(1+|w|²): dx dy = (1+r²)²·½ du dφ.
                let (u, gw) = gauss_legendre_unit(radial);
                for (ui, wi) in u.iter().zip(&gw) {
                    let r2 = ui / (1.0 - ui);
                    let r = r2.sqrt();
                    let jac = 0.5 * (1.0 + r2) * (1.0 + r2) * wi * dphi;
                    for a in 0..angular {
                        let phi = dphi * a as f64;
                        nodes.push(QuadNode {
                            chart: 0,
                            w: vec![Cx::from_polar(r, phi)],
                            weight: jac,
                        });
                    }
                }
            }
            BaseKind::Projective { dim } => {
                // Max-coordinate polydisc per chart; u_m = r_m² on [0,1].
                let (u, gw) = gauss_legendre_unit(radial);
                for chart in 0..=dim {
                    let mut stack: Vec<(Vec<Cx>, f64)> = vec![(vec![], 1.0)];
                    for _ in 0..dim {
                        let mut next = Vec::with_capacity(stack.len() * radial * angular);
                        for (base, bw) in &stack {
                            for (ui, wi) in u.iter().zip(&gw) {
                                let r = ui.sqrt();
                                for a in 0..angular {
                                    let phi = dphi * a as f64;
                                    let mut p = base.clone();
                                    p.push(Cx::from_polar(r, phi));
                                    next.push((p, bw * 0.5 * wi * dphi));
                                }
                            }
                        }
                        stack = next;
                    }
                    nodes.extend(stack.into_iter().map(|(w, weight)| QuadNode {
                        chart,
                        w,
                        weight,
                    }));
                }
            }
            BaseKind::WeightedLine { a, b } => {
                // Unit disc of each uniformizing cover, divided by the
                // stabilizer order.
                let (u, gw) = gauss_legendre_unit(radial);
                for (chart, stab) in [(0usize, a), (1usize, b)] {
                    let inv_stab = 1.0 / stab as f64;
                    for (ui, wi) in u.iter().zip(&gw) {
                        let r = ui.sqrt();
                        let jac = 0.5 * wi * dphi * inv_stab;
                        for ang in 0..angular {
                            let phi = dphi * ang as f64;
                            nodes.push(QuadNode {
                                chart,
                                w: vec![Cx::from_polar(r, phi)],
                                weight: jac,
                            });
                        }
                    }
                }
            }
        }
        Ok(Self {
            nodes,
            radial,
            angular,
        })
    }

    /// Integrate `f(chart, w) · weight` over the nodes with a fixed summation
    /// order (parallel map, sequential block reduction).
    pub fn integrate<F>(&self, f: F) -> f64
    where
        F: Fn(usize, &[Cx]) -> f64 + Sync + Send,
    {
        let blocks: Vec<&[QuadNode]> = self.nodes.chunks(1024).collect();
        let partial = crate::par::map_collect(&blocks, |block| {
            block
                .iter()
                .map(|n| f(n.chart, &n.w) * n.weight)
                .sum::<f64>()
        });
        partial.iter().sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn gauss_legendre_integrates_polynomials_exactly() {
        let (x, w) = gauss_legendre(8);
        // ∫_{-1}^{1} x^14 dx = 2/15, exact for 8-point GL (degree ≤ 15).
        let s: f64 = x.iter().zip(&w).map(|(xi, wi)| wi * xi.powi(14)).sum();
        assert_relative_eq!(s, 2.0 / 15.0, epsilon = 1e-14);
        let total: f64 = w.iter().sum();
        assert_relative_eq!(total, 2.0, epsilon = 1e-14);
    }

    #[test]
    fn weights_are_positive() {
        let atlas = ChartAtlas::projective(1).unwrap();
        let rule = QuadratureRule::for_base(&atlas, 32, 64).unwrap();
        assert!(rule.nodes.iter().all(|n| n.weight > 0.0));
    }

    #[test]
    fn fubini_study_volume_of_the_line() {
        // ∫ dV_FS = π with density det ∂∂̄ log(1+|w|²) = (1+|w|²)^{-2}.
        let atlas = ChartAtlas::projective(1).unwrap();
        let rule = QuadratureRule::for_base(&atlas, 64, 128).unwrap();
        let vol = rule.integrate(|_, w| {
            let d = 1.0 + w[0].norm_sqr();
            1.0 / (d * d)
        });
        assert_relative_eq!(vol, std::f64::consts::PI, epsilon = 1e-12);
    }

    #[test]
    fn fubini_study_volume_of_the_plane() {
        // Vol(ℂP², FS) = π²/2; density det ∂∂̄ log(1+|w|²) = (1+|w|²)^{-3}.
        let atlas = ChartAtlas::projective(2).unwrap();
        let rule = QuadratureRule::for_base(&atlas, 24, 24).unwrap();
        let vol = rule.integrate(|_, w| {
            let d = 1.0 + w[0].norm_sqr() + w[1].norm_sqr();
            1.0 / (d * d * d)
        });
        assert_relative_eq!(vol, std::f64::consts::PI.powi(2) / 2.0, epsilon = 1e-10);
    }
}
