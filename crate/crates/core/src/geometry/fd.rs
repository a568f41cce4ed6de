//! Central finite differences on chart coordinates.
//!
//! Derivatives are taken in the real coordinates underlying each complex
//! chart coordinate and recombined into Wirtinger derivatives. One optional
//! Richardson level upgrades the O(h²) central stencils to O(h⁴). Steps are
//! relative to the coordinate magnitude.

use nalgebra::DMatrix;

use crate::Cx;

/// Step sizes for first- and second-order differences.
#[derive(Clone, Copy, Debug)]
pub struct FdSteps {
    /// Relative step for first derivatives.
    pub d1: f64,
    /// Relative step for second derivatives.
    pub d2: f64,
    /// Apply one Richardson extrapolation level.
    pub richardson: bool,
}

impl Default for FdSteps {
    fn default() -> Self {
        Self {
            d1: 1e-4,
            d2: 1e-3,
            richardson: true,
        }
    }
}

impl FdSteps {
    /// Same steps without Richardson extrapolation (plain O(h²) stencils).
    pub fn raw(self) -> Self {
        Self {
            richardson: false,
            ..self
        }
    }

    /// Scale both steps by `factor` (used when differentiating fields that
    /// are themselves finite-difference quantities).
    pub fn scaled(self, factor: f64) -> Self {
        Self {
            d1: self.d1 * factor,
            d2: self.d2 * factor,
            richardson: self.richardson,
        }
    }
}

/// A real coordinate direction of a complex chart: the real or imaginary
/// part of coordinate `var`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RealDir {
    pub var: usize,
    pub imag: bool,
}

impl RealDir {
    pub fn all(nvars: usize) -> Vec<RealDir> {
        (0..nvars)
            .flat_map(|var| {
                [
                    RealDir { var, imag: false },
                    RealDir { var, imag: true },
                ]
            })
            .collect()
    }
}

fn shifted(point: &[Cx], dir: RealDir, h: f64) -> Vec<Cx> {
    let mut p = point.to_vec();
    if dir.imag {
        p[dir.var].im += h;
    } else {
        p[dir.var].re += h;
    }
    p
}

fn abs_step(point: &[Cx], dir: RealDir, rel: f64) -> f64 {
    rel * (1.0 + point[dir.var].norm())
}

/// First derivative of `f` along a real chart direction.
pub fn diff1<F: Fn(&[Cx]) -> Cx>(f: &F, point: &[Cx], dir: RealDir, steps: FdSteps) -> Cx {
    let h = abs_step(point, dir, steps.d1);
    let central = |h: f64| (f(&shifted(point, dir, h)) - f(&shifted(point, dir, -h))) / (2.0 * h);
    if steps.richardson {
        (central(h / 2.0) * 4.0 - central(h)) / 3.0
    } else {
        central(h)
    }
}

/// Second derivative of `f` along two real chart directions.
pub fn diff2<F: Fn(&[Cx]) -> Cx>(
    f: &F,
    point: &[Cx],
    d1: RealDir,
    d2: RealDir,
    steps: FdSteps,
) -> Cx {
    if d1 == d2 {
        let h = abs_step(point, d1, steps.d2);
        let f0 = f(point);
        let stencil = |h: f64| {
            (f(&shifted(point, d1, h)) - f0 * 2.0 + f(&shifted(point, d1, -h))) / (h * h)
        };
        if steps.richardson {
            (stencil(h / 2.0) * 4.0 - stencil(h)) / 3.0
        } else {
            stencil(h)
        }
    } else {
        let ha = abs_step(point, d1, steps.d2);
        let hb = abs_step(point, d2, steps.d2);
        let stencil = |s: f64| {
            let (ha, hb) = (ha * s, hb * s);
            let pp = f(&shifted(&shifted(point, d1, ha), d2, hb));
            let pm = f(&shifted(&shifted(point, d1, ha), d2, -hb));
            let mp = f(&shifted(&shifted(point, d1, -ha), d2, hb));
            let mm = f(&shifted(&shifted(point, d1, -ha), d2, -hb));
            (pp - pm - mp + mm) / (4.0 * ha * hb)
        };
        if steps.richardson {
            (stencil(0.5) * 4.0 - stencil(1.0)) / 3.0
        } else {
            stencil(1.0)
        }
    }
}

/// Wirtinger gradient: `(∂f/∂w_j, ∂f/∂w̄_j)` for all `j`.
pub fn wirtinger_grad<F: Fn(&[Cx]) -> Cx>(
    f: &F,
    point: &[Cx],
    steps: FdSteps,
) -> (Vec<Cx>, Vec<Cx>) {
    let i = Cx::new(0.0, 1.0);
    let mut dw = Vec::with_capacity(point.len());
    let mut dwb = Vec::with_capacity(point.len());
    for var in 0..point.len() {
        let fx = diff1(f, point, RealDir { var, imag: false }, steps);
        let fy = diff1(f, point, RealDir { var, imag: true }, steps);
        dw.push((fx - i * fy) * 0.5);
        dwb.push((fx + i * fy) * 0.5);
    }
    (dw, dwb)
}

/// Complex Hessian `H_{jk} = ∂²f/∂w_j∂w̄_k`.
///
/// Each unordered pair of real directions is differenced once, so the result
/// is exactly Hermitian for real-valued `f`.
pub fn complex_hessian<F: Fn(&[Cx]) -> Cx>(
    f: &F,
    point: &[Cx],
    steps: FdSteps,
) -> DMatrix<Cx> {
    let n = point.len();
    let dirs = RealDir::all(n);
    let m = dirs.len();
    // Real Hessian over the 2n real directions.
    let mut real_h = vec![Cx::new(0.0, 0.0); m * m];
    for p in 0..m {
        for q in p..m {
            let v = diff2(f, point, dirs[p], dirs[q], steps);
            real_h[p * m + q] = v;
            real_h[q * m + p] = v;
        }
    }
    let at = |var_a: usize, im_a: usize, var_b: usize, im_b: usize| {
        real_h[(2 * var_a + im_a) * m + (2 * var_b + im_b)]
    };
    let i = Cx::new(0.0, 1.0);
    DMatrix::from_fn(n, n, |j, k| {
        // ∂²/∂w_j∂w̄_k = ¼[(∂x_j∂x_k + ∂y_j∂y_k) + i(∂x_j∂y_k − ∂y_j∂x_k)]
        (at(j, 0, k, 0) + at(j, 1, k, 1) + i * (at(j, 0, k, 1) - at(j, 1, k, 0))) * 0.25
    })
}
