//! Chart-based base manifolds/orbifolds and numerical exterior calculus.

pub mod fd;
mod fields;
mod grid;
mod ops;

pub use fd::FdSteps;
pub use fields::{HermitianValue, OneFormField, OneFormValue, ScalarField, TwoFormValue};
pub use grid::{cm_grid_norm, GridSpec};
pub use ops::{d_one_form, d_scalar, dc_one_form, ddbar_scalar};

use crate::{Cx, Error, Result};

/// Which base space the atlas describes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BaseKind {
    /// Complex projective space of the given complex dimension.
    Projective { dim: usize },
    /// Weighted projective line with coprime positive weights.
    WeightedLine { a: u32, b: u32 },
}

/// One chart of the atlas. For orbifold charts the coordinate is the
/// uniformizing-cover coordinate and `stabilizer` is the cyclic order of the
/// local group acting on it.
#[derive(Clone, Copy, Debug)]
pub struct Chart {
    pub index: usize,
    /// Complex dimension of the chart.
    pub dim: usize,
    /// Order of the cyclic stabilizer (1 at manifold points).
    pub stabilizer: u32,
    /// Coordinates are usable for |w| up to this radius; beyond it the chart
    /// representation is considered unreliable and operations error out.
    pub eval_limit: f64,
}

/// Chart atlas for ℂPⁿ or a weighted projective line.
///
/// Projective space carries the `n+1` standard affine charts. The weighted
/// line `P(a,b)` carries two charts centred at `[1:0]` and `[0:1]`; each is
/// presented through its uniformizing-cover coordinate (`v ↦ (1,v)` resp.
/// `y ↦ (y,1)` in weighted-homogeneous coordinates) with cyclic stabilizers
/// of orders `a` and `b`.
#[derive(Clone, Debug)]
pub struct ChartAtlas {
    pub kind: BaseKind,
    charts: Vec<Chart>,
}

/// Margin factor applied beyond the closed unit disc a chart owns; transition
/// tests and finite-difference stencils may wander this far.
const CHART_EVAL_LIMIT: f64 = 4.0;

impl ChartAtlas {
    pub fn projective(dim: usize) -> Result<Self> {
        if dim == 0 || dim > 3 {
            return Err(Error::InvalidParameter(format!(
                "projective base dimension must be 1..=3, got {dim}"
            )));
        }
        let charts = (0..=dim)
            .map(|index| Chart {
                index,
                dim,
                stabilizer: 1,
                eval_limit: CHART_EVAL_LIMIT,
            })
            .collect();
        Ok(Self {
            kind: BaseKind::Projective { dim },
            charts,
        })
    }

    pub fn weighted_line(a: u32, b: u32) -> Result<Self> {
        if a == 0 || b == 0 {
            return Err(Error::InvalidParameter("weights must be positive".into()));
        }
        if gcd(a, b) != 1 {
            return Err(Error::InvalidParameter(format!(
                "weights ({a},{b}) must be coprime"
            )));
        }
        let charts = vec![
            Chart {
                index: 0,
                dim: 1,
                stabilizer: a,
                eval_limit: CHART_EVAL_LIMIT,
            },
            Chart {
                index: 1,
                dim: 1,
                stabilizer: b,
                eval_limit: CHART_EVAL_LIMIT,
            },
        ];
        Ok(Self {
            kind: BaseKind::WeightedLine { a, b },
            charts,
        })
    }

    pub fn charts(&self) -> &[Chart] {
        &self.charts
    }

    pub fn chart(&self, index: usize) -> &Chart {
        &self.charts[index]
    }

    /// Complex dimension of the base.
    pub fn dim(&self) -> usize {
        self.charts[0].dim
    }

    /// Weights of the ambient weighted ℂ*-action on homogeneous coordinates
    /// (all ones in the projective case).
    pub fn homogeneous_weights(&self) -> Vec<u32> {
        match self.kind {
            BaseKind::Projective { dim } => vec![1; dim + 1],
            BaseKind::WeightedLine { a, b } => vec![a, b],
        }
    }

    /// Lift a chart point to weighted-homogeneous ambient coordinates.
    ///
    /// For projective chart `ℓ` this inserts `1` in slot `ℓ`; for the
    /// weighted line the lifts are `v ↦ (1,v)` and `y ↦ (y,1)`.
    pub fn ambient_lift(&self, chart: usize, w: &[Cx]) -> Vec<Cx> {
        match self.kind {
            BaseKind::Projective { dim } => {
                debug_assert_eq!(w.len(), dim);
                let mut z = Vec::with_capacity(dim + 1);
                z.extend_from_slice(&w[..chart]);
                z.insert(chart, Cx::new(1.0, 0.0));
                z.extend_from_slice(&w[chart..]);
                z
            }
            BaseKind::WeightedLine { .. } => {
                debug_assert_eq!(w.len(), 1);
                if chart == 0 {
                    vec![Cx::new(1.0, 0.0), w[0]]
                } else {
                    vec![w[0], Cx::new(1.0, 0.0)]
                }
            }
        }
    }

    /// Pick the chart whose affine coordinates are smallest for the ambient
    /// point `z`, returning `(chart, coords)`.
    pub fn chart_of_ambient(&self, z: &[Cx]) -> Result<(usize, Vec<Cx>)> {
        match self.kind {
            BaseKind::Projective { .. } => {
                let ell = z
                    .iter()
                    .enumerate()
                    .max_by(|x, y| x.1.norm().partial_cmp(&y.1.norm()).unwrap())
                    .map(|(i, _)| i)
                    .unwrap();
                if z[ell].norm() == 0.0 {
                    return Err(Error::InvalidParameter(
                        "ambient point is the origin".into(),
                    ));
                }
                let coords = (0..z.len())
                    .filter(|&m| m != ell)
                    .map(|m| z[m] / z[ell])
                    .collect();
                Ok((ell, coords))
            }
            BaseKind::WeightedLine { a, b } => {
                // Compare the weighted-scale-invariant magnitudes.
                let m0 = z[0].norm().powf(1.0 / a as f64);
                let m1 = z[1].norm().powf(1.0 / b as f64);
                if m0 == 0.0 && m1 == 0.0 {
                    return Err(Error::InvalidParameter(
                        "ambient point is the origin".into(),
                    ));
                }
                if m0 >= m1 {
                    // Normalize z0 to 1 with a weighted scaling λ^a = 1/z0.
                    let lam = root(z[0], a).inv();
                    Ok((0, vec![z[1] * lam.powu(b)]))
                } else {
                    let lam = root(z[1], b).inv();
                    Ok((1, vec![z[0] * lam.powu(a)]))
                }
            }
        }
    }

    /// Transition map between charts on their overlap. For weighted-line
    /// cover coordinates the principal branch of the required root is used;
    /// the result is one of the finitely many deck-equivalent images.
    pub fn transition(&self, from: usize, to: usize, w: &[Cx]) -> Result<Vec<Cx>> {
        if from == to {
            return Ok(w.to_vec());
        }
        match self.kind {
            BaseKind::Projective { .. } => {
                let z = self.ambient_lift(from, w);
                let denom = z[to];
                if denom.norm() < 1e-12 {
                    return Err(Error::ChartBoundary {
                        chart: to,
                        point: w.to_vec(),
                        limit: self.chart(to).eval_limit,
                    });
                }
                Ok((0..z.len())
                    .filter(|&m| m != to)
                    .map(|m| z[m] / denom)
                    .collect())
            }
            BaseKind::WeightedLine { a, b } => {
                let v = w[0];
                if v.norm() < 1e-12 {
                    return Err(Error::ChartBoundary {
                        chart: to,
                        point: w.to_vec(),
                        limit: self.chart(to).eval_limit,
                    });
                }
                // (1,v) ~ (λ^a, λ^b v); pick λ with λ^b v = 1, then y = λ^a,
                // and symmetrically in the other direction.
                if from == 0 {
                    let lam = root(v, b).inv();
                    Ok(vec![lam.powu(a)])
                } else {
                    let lam = root(v, a).inv();
                    Ok(vec![lam.powu(b)])
                }
            }
        }
    }

    /// Jacobian ∂Φ_p/∂w_q of the transition map, by finite differences.
    pub fn transition_jacobian(
        &self,
        from: usize,
        to: usize,
        w: &[Cx],
        steps: FdSteps,
    ) -> Result<nalgebra::DMatrix<Cx>> {
        let dim = self.dim();
        let mut jac = nalgebra::DMatrix::<Cx>::zeros(dim, dim);
        for p in 0..dim {
            let comp = |pt: &[Cx]| -> Cx {
                self.transition(from, to, pt)
                    .map(|im| im[p])
                    .unwrap_or(Cx::new(f64::NAN, 0.0))
            };
            let (dw, dwb) = fd::wirtinger_grad(&comp, w, steps);
            for q in 0..dim {
                if !dw[q].is_finite() {
                    return Err(Error::NonFiniteField {
                        name: format!("transition {from}->{to}"),
                        point: w.to_vec(),
                    });
                }
                jac[(p, q)] = dw[q];
                // Transitions are holomorphic; ∂̄-components only carry FD noise.
                let _ = dwb;
            }
        }
        Ok(jac)
    }
}

/// Principal `n`-th root.
fn root(z: Cx, n: u32) -> Cx {
    z.powf(1.0 / n as f64)
}

pub(crate) fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}
