//! Exterior derivative, `d^c`, and `∂∂̄` acting on sampled fields.

use nalgebra::DMatrix;

use super::fd::{self, FdSteps};
use super::fields::{HermitianValue, OneFormField, OneFormValue, ScalarField, TwoFormValue};
use super::Chart;
use crate::{Cx, Error, Result};

fn check_interior(chart: &Chart, w: &[Cx], steps: FdSteps) -> Result<()> {
    let margin = 2.0 * steps.d1.max(steps.d2);
    for c in w {
        if c.norm() + margin > chart.eval_limit {
            return Err(Error::ChartBoundary {
                chart: chart.index,
                point: w.to_vec(),
                limit: chart.eval_limit,
            });
        }
        if !c.is_finite() {
            return Err(Error::NonFiniteField {
                name: "chart point".into(),
                point: w.to_vec(),
            });
        }
    }
    Ok(())
}

fn check_finite_scalar(name: &str, w: &[Cx], v: Cx) -> Result<Cx> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::NonFiniteField {
            name: name.into(),
            point: w.to_vec(),
        })
    }
}

/// `df` of a scalar field: central finite differences, O(step²) (O(step⁴)
/// with the default Richardson level) against analytic derivatives.
pub fn d_scalar(
    field: &ScalarField,
    chart: &Chart,
    w: &[Cx],
    steps: FdSteps,
) -> Result<OneFormValue> {
    check_interior(chart, w, steps)?;
    check_finite_scalar(&field.name, w, field.eval(chart.index, w))?;
    let g = |p: &[Cx]| field.eval(chart.index, p);
    let (dw, dwbar) = fd::wirtinger_grad(&g, w, steps);
    let value = OneFormValue { dw, dwbar };
    if !value.dw.iter().chain(value.dwbar.iter()).all(|c| c.is_finite()) {
        return Err(Error::NonFiniteField {
            name: field.name.clone(),
            point: w.to_vec(),
        });
    }
    Ok(value)
}

/// Wirtinger gradients of every coefficient of a 1-form at once.
struct CoeffGrads {
    /// `d_w[j][i] = ∂(dw-coeff_j)/∂w_i`, `d_wbar[j][i] = ∂(dw-coeff_j)/∂w̄_i`
    a_w: Vec<Vec<Cx>>,
    a_wbar: Vec<Vec<Cx>>,
    b_w: Vec<Vec<Cx>>,
    b_wbar: Vec<Vec<Cx>>,
}

fn coefficient_grads(
    form: &OneFormField,
    chart: &Chart,
    w: &[Cx],
    steps: FdSteps,
) -> Result<CoeffGrads> {
    let n = w.len();
    let mut grads = CoeffGrads {
        a_w: Vec::with_capacity(n),
        a_wbar: Vec::with_capacity(n),
        b_w: Vec::with_capacity(n),
        b_wbar: Vec::with_capacity(n),
    };
    for j in 0..n {
        let fa = |p: &[Cx]| form.eval(chart.index, p).dw[j];
        let (aw, awb) = fd::wirtinger_grad(&fa, w, steps);
        let fb = |p: &[Cx]| form.eval(chart.index, p).dwbar[j];
        let (bw, bwb) = fd::wirtinger_grad(&fb, w, steps);
        for v in aw.iter().chain(awb.iter()).chain(bw.iter()).chain(bwb.iter()) {
            if !v.is_finite() {
                return Err(Error::NonFiniteField {
                    name: form.name.clone(),
                    point: w.to_vec(),
                });
            }
        }
        grads.a_w.push(aw);
        grads.a_wbar.push(awb);
        grads.b_w.push(bw);
        grads.b_wbar.push(bwb);
    }
    Ok(grads)
}

fn pair_index(n: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            out.push((i, j));
        }
    }
    out
}

/// Exterior derivative of a 1-form.
pub fn d_one_form(
    form: &OneFormField,
    chart: &Chart,
    w: &[Cx],
    steps: FdSteps,
) -> Result<TwoFormValue> {
    check_interior(chart, w, steps)?;
    let n = w.len();
    let g = coefficient_grads(form, chart, w, steps)?;
    let pairs = pair_index(n);
    let c20 = pairs
        .iter()
        .map(|&(i, j)| g.a_w[j][i] - g.a_w[i][j])
        .collect();
    let c02 = pairs
        .iter()
        .map(|&(i, j)| g.b_wbar[j][i] - g.b_wbar[i][j])
        .collect();
    let c11 = DMatrix::from_fn(n, n, |i, j| g.b_w[j][i] - g.a_wbar[i][j]);
    Ok(TwoFormValue { c20, c11, c02 })
}

/// `d^c θ = i(∂̄θ − ∂θ)`.
///
/// For the closed real 1-forms this is applied to, the (2,0)/(0,2) parts
/// vanish and the (1,1) part is a real form; on Lee forms `θ = −d log t²` it
/// produces the positive transverse form `2i∂∂̄ log t²`. Note `d^c d = −d d^c`
/// on potentials.
pub fn dc_one_form(
    form: &OneFormField,
    chart: &Chart,
    w: &[Cx],
    steps: FdSteps,
) -> Result<TwoFormValue> {
    check_interior(chart, w, steps)?;
    let n = w.len();
    let i_unit = Cx::new(0.0, 1.0);
    let g = coefficient_grads(form, chart, w, steps)?;
    let pairs = pair_index(n);
    // ∂θ: (2,0) from the dw-coefficients, (1,1) from the dw̄-coefficients.
    // ∂̄θ: (1,1) from the dw-coefficients, (0,2) from the dw̄-coefficients.
    let c20 = pairs
        .iter()
        .map(|&(i, j)| -i_unit * (g.a_w[j][i] - g.a_w[i][j]))
        .collect();
    let c02 = pairs
        .iter()
        .map(|&(i, j)| i_unit * (g.b_wbar[j][i] - g.b_wbar[i][j]))
        .collect();
    let c11 = DMatrix::from_fn(n, n, |i, j| -i_unit * (g.a_wbar[i][j] + g.b_w[j][i]));
    Ok(TwoFormValue { c20, c11, c02 })
}

/// `(√−1/2) ∂∂̄ f` of a scalar potential, as a Hermitian matrix in
/// `(i/2)`-units (entry `(j,k)` equals `∂²f/∂w_j∂w̄_k`).
pub fn ddbar_scalar(
    field: &ScalarField,
    chart: &Chart,
    w: &[Cx],
    steps: FdSteps,
) -> Result<HermitianValue> {
    check_interior(chart, w, steps)?;
    check_finite_scalar(&field.name, w, field.eval(chart.index, w))?;
    let g = |p: &[Cx]| field.eval(chart.index, p);
    let h = fd::complex_hessian(&g, w, steps);
    if !h.iter().all(|c| c.is_finite()) {
        return Err(Error::NonFiniteField {
            name: field.name.clone(),
            point: w.to_vec(),
        });
    }
    Ok(HermitianValue::from_matrix(h))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn unit_chart() -> Chart {
        Chart {
            index: 0,
            dim: 1,
            stabilizer: 1,
            eval_limit: 4.0,
        }
    }

    fn steps() -> FdSteps {
        FdSteps::default()
    }

    #[test]
    fn d_of_modulus_squared() {
        // f = |w|² at w = 0.5: df = w̄ dw + w dw̄ has components (0.5, 0.5).
        let f = ScalarField::real_fn("modsq", |_, p| p[0].norm_sqr());
        let v = d_scalar(&f, &unit_chart(), &[Cx::new(0.5, 0.0)], steps()).unwrap();
        assert_relative_eq!(v.dw[0].re, 0.5, epsilon = 1e-10);
        assert_relative_eq!(v.dwbar[0].re, 0.5, epsilon = 1e-10);
        assert!(v.reality_residual() < 1e-12);
    }

    #[test]
    fn d_of_constant_vanishes() {
        let f = ScalarField::real_fn("const", |_, _| 2.75);
        let v = d_scalar(&f, &unit_chart(), &[Cx::new(0.3, 0.2)], steps()).unwrap();
        assert!(v.max_component() < 1e-12);
    }

    #[test]
    fn d_of_log_potential() {
        // ∂ log(1+|w|²) = w̄/(1+|w|²) dw; at w = 1 the dw-component is 0.5.
        let f = ScalarField::real_fn("log", |_, p| (1.0 + p[0].norm_sqr()).ln());
        let v = d_scalar(&f, &unit_chart(), &[Cx::new(1.0, 0.0)], steps()).unwrap();
        assert_relative_eq!(v.dw[0].re, 0.5, epsilon = 1e-10);
        assert_relative_eq!(v.dw[0].im, 0.0, epsilon = 1e-10);
    }

    #[test]
    fn d_errors_outside_chart() {
        let f = ScalarField::real_fn("modsq", |_, p| p[0].norm_sqr());
        let err = d_scalar(&f, &unit_chart(), &[Cx::new(4.2, 0.0)], steps());
        assert!(matches!(err, Err(Error::ChartBoundary { .. })));
    }

    #[test]
    fn d_errors_on_non_finite_values() {
        let f = ScalarField::real_fn("pole", |_, p| 1.0 / (p[0].norm_sqr() - 0.25));
        let err = d_scalar(&f, &unit_chart(), &[Cx::new(0.5, 0.0)], steps());
        assert!(matches!(err, Err(Error::NonFiniteField { .. })));
    }

    /// dc_operator oracle: d^c(dφ) = −2i∂∂̄φ under d^c = i(∂̄−∂), so for
    /// θ = d(|w|²) the (i/2)-unit component is −4; for θ = −d log(1+|w|²)
    /// at w = 0 it is +4 (the transverse-form sign that makes d^cθ ≥ 0 for
    /// Lee forms).
    #[test]
    fn dc_of_exact_forms() {
        let theta = OneFormField::new("d|w|^2", true, |_, p| {
            OneFormValue::real_from_dw(vec![p[0].conj()])
        });
        let v = dc_one_form(&theta, &unit_chart(), &[Cx::new(0.3, 0.1)], steps()).unwrap();
        let h = v.hermitian_h();
        assert_relative_eq!(h[(0, 0)].re, -4.0, epsilon = 1e-9);
        assert!(v.hermitian_residual() < 1e-10);

        let lee = OneFormField::new("-dlog(1+|w|^2)", true, |_, p| {
            let a = -p[0].conj() / (1.0 + p[0].norm_sqr());
            OneFormValue::real_from_dw(vec![a])
        });
        let v = dc_one_form(&lee, &unit_chart(), &[Cx::new(0.0, 0.0)], steps()).unwrap();
        assert_relative_eq!(v.hermitian_h()[(0, 0)].re, 4.0, epsilon = 1e-9);
    }

    #[test]
    fn dc_of_constant_coefficients_vanishes() {
        let theta = OneFormField::new("const", true, |_, _| {
            OneFormValue::real_from_dw(vec![Cx::new(0.7, -0.2)])
        });
        let v = dc_one_form(&theta, &unit_chart(), &[Cx::new(0.4, 0.2)], steps()).unwrap();
        assert!(v.max_component() < 1e-12);
    }

    #[test]
    fn ddbar_of_potentials() {
        // f = |w|² → component 1; harmonic Re w → 0; f = log(1+|w|²) at 0 → 1
        // (= 1/(1+|w|²)² there).
        let c = unit_chart();
        let f = ScalarField::real_fn("modsq", |_, p| p[0].norm_sqr());
        let v = ddbar_scalar(&f, &c, &[Cx::new(0.2, -0.4)], steps()).unwrap();
        assert_relative_eq!(v.h[(0, 0)].re, 1.0, epsilon = 1e-9);
        assert!(v.positive);

        let f = ScalarField::real_fn("harmonic", |_, p| p[0].re);
        let v = ddbar_scalar(&f, &c, &[Cx::new(0.3, 0.3)], steps()).unwrap();
        assert!(v.max_component() < 1e-10);

        let f = ScalarField::real_fn("log", |_, p| (1.0 + p[0].norm_sqr()).ln());
        let v = ddbar_scalar(&f, &c, &[Cx::new(0.0, 0.0)], steps()).unwrap();
        assert_relative_eq!(v.h[(0, 0)].re, 1.0, epsilon = 1e-9);
    }

    #[test]
    fn d_squared_vanishes_on_smooth_fields() {
        // d(df) = 0 for f = Re(w₀²w̄₁) + |w₁|⁴: the analytic df has
        // ∂f/∂w₀ = w₀w̄₁ and ∂f/∂w₁ = w̄₀²/2 + 2w̄₁|w₁|².
        let theta = OneFormField::new("df", true, |_, p| {
            let a0 = p[0] * p[1].conj();
            let a1 = p[0].conj() * p[0].conj() * 0.5 + p[1].conj() * p[1].norm_sqr() * 2.0;
            OneFormValue::real_from_dw(vec![a0, a1])
        });
        let chart = Chart {
            index: 0,
            dim: 2,
            stabilizer: 1,
            eval_limit: 4.0,
        };
        let v = d_one_form(
            &theta,
            &chart,
            &[Cx::new(0.4, 0.1), Cx::new(-0.2, 0.5)],
            steps(),
        )
        .unwrap();
        assert!(v.max_component() < 1e-6, "{}", v.max_component());
    }
}
