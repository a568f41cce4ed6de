//! Sample grids on chart coordinate discs and chart-wise C^m norms.

use super::fd::{self, FdSteps, RealDir};
use super::{Chart, ChartAtlas};
use crate::{par, Cx, Error, Result};

/// Per-chart sample lattice: radial × angular nodes on the closed unit disc
/// (tensor lattice for higher-dimensional charts), with finite-difference
/// steps and the exclusion radius around orbifold points.
#[derive(Clone, Copy, Debug)]
pub struct GridSpec {
    /// Radial nodes per coordinate for one-dimensional charts.
    pub radial: usize,
    /// Angular nodes per coordinate for one-dimensional charts.
    pub angular: usize,
    /// Radial × angular nodes per coordinate on charts of dimension ≥ 2.
    pub nd_radial: usize,
    pub nd_angular: usize,
    /// Coordinate discs around orbifold points are excluded up to this radius.
    pub exclusion: f64,
    pub fd: FdSteps,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self {
            radial: 41,
            angular: 64,
            nd_radial: 7,
            nd_angular: 8,
            exclusion: 0.05,
            fd: FdSteps::default(),
        }
    }
}

impl GridSpec {
    pub fn validate(&self) -> Result<()> {
        if self.radial < 2 || self.angular < 4 {
            return Err(Error::InvalidParameter(
                "grid needs at least 2 radial and 4 angular nodes".into(),
            ));
        }
        if self.fd.d1 <= 0.0 || self.fd.d2 <= 0.0 {
            return Err(Error::InvalidParameter(
                "finite-difference steps must be positive".into(),
            ));
        }
        if self.exclusion < 0.0 || self.exclusion >= 1.0 {
            return Err(Error::InvalidParameter(
                "orbifold exclusion radius must lie in [0,1)".into(),
            ));
        }
        Ok(())
    }

    /// Sample points of one chart. Orbifold charts exclude the disc of
    /// radius [`GridSpec::exclusion`] around the cone point.
    pub fn chart_points(&self, chart: &Chart) -> Vec<Vec<Cx>> {
        let (radial, angular) = if chart.dim == 1 {
            (self.radial, self.angular)
        } else {
            (self.nd_radial, self.nd_angular)
        };
        let mut radii: Vec<f64> = (0..radial)
            .map(|i| i as f64 / (radial - 1) as f64)
            .collect();
        if chart.stabilizer > 1 {
            radii.retain(|r| *r >= self.exclusion);
        }
        // 1-d ring values; the origin is a single point, not `angular` copies.
        let ring: Vec<Vec<Cx>> = radii
            .iter()
            .flat_map(|&r| {
                if r == 0.0 {
                    vec![Cx::new(0.0, 0.0)]
                } else {
                    (0..angular)
                        .map(|a| {
                            let phi = 2.0 * std::f64::consts::PI * a as f64 / angular as f64;
                            Cx::from_polar(r, phi)
                        })
                        .collect()
                }
            })
            .map(|c| vec![c])
            .collect();
        if chart.dim == 1 {
            return ring;
        }
        // Tensor lattice for dim ≥ 2.
        let axis: Vec<Cx> = ring.iter().map(|p| p[0]).collect();
        let mut points: Vec<Vec<Cx>> = vec![vec![]];
        for _ in 0..chart.dim {
            points = points
                .into_iter()
                .flat_map(|base| {
                    axis.iter().map(move |&c| {
                        let mut p = base.clone();
                        p.push(c);
                        p
                    })
                })
                .collect();
        }
        points
    }

    /// Grids for every chart of the atlas.
    pub fn atlas_points(&self, atlas: &ChartAtlas) -> Vec<(usize, Vec<Vec<Cx>>)> {
        atlas
            .charts()
            .iter()
            .map(|c| (c.index, self.chart_points(c)))
            .collect()
    }
}

/// Chart-wise C^m grid norm: the supremum over grid points of the absolute
/// values of the field components and their real-coordinate chart derivatives
/// up to order `m`.
///
/// The measurable proxy for C^m distances used throughout the convergence
/// reports; derivatives are central differences with the spec's steps.
pub fn cm_grid_norm<F>(field: F, grids: &[(usize, Vec<Vec<Cx>>)], m: usize, fd: FdSteps) -> Result<f64>
where
    F: Fn(usize, &[Cx]) -> Vec<Cx> + Sync + Send,
{
    if m > 2 {
        return Err(Error::InvalidParameter(
            "cm_grid_norm supports m ≤ 2".into(),
        ));
    }
    if grids.iter().all(|(_, pts)| pts.is_empty()) {
        return Err(Error::EmptyGrid);
    }
    let mut sup: f64 = 0.0;
    for (chart, points) in grids {
        let chart = *chart;
        let per_point = par::map_collect(points, |w| {
            let mut local: f64 = 0.0;
            let value = field(chart, w);
            let ncomp = value.len();
            for v in &value {
                local = local.max(v.norm());
            }
            if m >= 1 {
                let dirs = RealDir::all(w.len());
                for comp in 0..ncomp {
                    let g = |p: &[Cx]| field(chart, p)[comp];
                    for &dir in &dirs {
                        local = local.max(fd::diff1(&g, w, dir, fd).norm());
                        if m >= 2 {
                            for &dir2 in &dirs {
                                local = local.max(fd::diff2(&g, w, dir, dir2, fd).norm());
                            }
                        }
                    }
                }
            }
            local
        });
        for v in per_point {
            if !v.is_finite() {
                return Err(Error::NonFiniteField {
                    name: "cm_grid_norm field".into(),
                    point: vec![],
                });
            }
            sup = sup.max(v);
        }
    }
    Ok(sup)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn disc_chart() -> Chart {
        Chart {
            index: 0,
            dim: 1,
            stabilizer: 1,
            eval_limit: 4.0,
        }
    }

    fn grids(spec: &GridSpec) -> Vec<(usize, Vec<Vec<Cx>>)> {
        vec![(0, spec.chart_points(&disc_chart()))]
    }

    #[test]
    fn zero_and_constant_fields() {
        let spec = GridSpec::default();
        let g = grids(&spec);
        for m in 0..=2 {
            let z = cm_grid_norm(|_, _| vec![Cx::new(0.0, 0.0)], &g, m, spec.fd).unwrap();
            assert!(z < 1e-15);
        }
        let c = cm_grid_norm(|_, _| vec![Cx::new(-2.5, 0.0)], &g, 0, spec.fd).unwrap();
        assert_relative_eq!(c, 2.5, epsilon = 1e-14);
    }

    #[test]
    fn linear_field_c1_norm_is_one() {
        // f = Re w on the unit-disc grid: sup|f| = 1 and |∇f| = (1,0).
        let spec = GridSpec::default();
        let g = grids(&spec);
        let n = cm_grid_norm(
            |_, w| vec![Cx::new(w[0].re, 0.0)],
            &g,
            1,
            spec.fd,
        )
        .unwrap();
        assert_relative_eq!(n, 1.0, epsilon = 1e-9);
    }

    #[test]
    fn empty_grid_is_an_error() {
        let spec = GridSpec::default();
        let err = cm_grid_norm(|_, _| vec![Cx::new(0.0, 0.0)], &[(0, vec![])], 0, spec.fd);
        assert!(matches!(err, Err(Error::EmptyGrid)));
    }

    #[test]
    fn orbifold_chart_excludes_cone_point() {
        let spec = GridSpec::default();
        let chart = Chart {
            index: 1,
            dim: 1,
            stabilizer: 2,
            eval_limit: 4.0,
        };
        let pts = spec.chart_points(&chart);
        assert!(pts.iter().all(|p| p[0].norm() >= spec.exclusion - 1e-12));
        assert!(!pts.is_empty());
    }
}
