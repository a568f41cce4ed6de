//! Monomial bases of `H⁰(X, L^k)`, their L² Gram matrices, orthonormalizing
//! coefficients, and the Bergman kernel `B_k = Σ_j h(ŝ_j, ŝ_j)`.

use nalgebra::DMatrix;

use super::{HermitianBundle, QuadratureRule};
use crate::geometry::BaseKind;
use crate::{linalg, par, Cx, Error, Result};

/// Monomial exponent tuples of `H⁰(X, L^k)`, lexicographically descending in
/// the leading exponents.
///
/// * ℂPⁿ: all `α ∈ ℕ^{n+1}` with `|α| = k` — dimension `C(n+k, n)`;
/// * weighted line `(a,b)`: all `(i,j) ≥ 0` with `a·i + b·j = k` (possibly
///   empty).
pub fn monomial_exponents(kind: BaseKind, k: u32) -> Vec<Vec<u32>> {
    match kind {
        BaseKind::Projective { dim } => {
            let mut out = Vec::new();
            let mut current = Vec::with_capacity(dim + 1);
            fill_simplex(dim + 1, k, &mut current, &mut out);
            out
        }
        BaseKind::WeightedLine { a, b } => {
            let mut out = Vec::new();
            // Descending in i: i = (k - b·j)/a for j = 0,1,...
            let mut pairs: Vec<(u32, u32)> = (0..=k / b)
                .filter(|j| (k - b * j) % a == 0)
                .map(|j| ((k - b * j) / a, j))
                .collect();
            pairs.sort_by(|x, y| y.0.cmp(&x.0));
            for (i, j) in pairs {
                out.push(vec![i, j]);
            }
            out
        }
    }
}

fn fill_simplex(slots: usize, remaining: u32, current: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
    if slots == 1 {
        let mut alpha = current.clone();
        alpha.push(remaining);
        out.push(alpha);
        return;
    }
    for e in (0..=remaining).rev() {
        current.push(e);
        fill_simplex(slots - 1, remaining - e, current, out);
        current.pop();
    }
}

/// `z^α`.
pub fn monomial_value(alpha: &[u32], z: &[Cx]) -> Cx {
    alpha
        .iter()
        .zip(z)
        .fold(Cx::new(1.0, 0.0), |acc, (&e, zj)| acc * zj.powu(e))
}

/// Closed-form Fubini–Study Gram diagonal on ℂPⁿ (Beta integrals):
/// `⟨z^α, z^α⟩ = πⁿ · Πα_m! / (k+n)!` for `|α| = k`. Off-diagonal entries
/// vanish by torus symmetry. Independent oracle for the quadrature route.
pub fn fs_gram_diagonal(dim: usize, k: u32, alpha: &[u32]) -> f64 {
    debug_assert_eq!(alpha.iter().sum::<u32>(), k);
    let mut v = std::f64::consts::PI.powi(dim as i32);
    for &a in alpha {
        for m in 1..=a as u64 {
            v *= m as f64;
        }
    }
    for m in 1..=(k as u64 + dim as u64) {
        v /= m as f64;
    }
    v
}

/// Orthonormalized monomial basis of `H⁰(X, L^k)` with its Gram data.
#[derive(Clone, Debug)]
pub struct SectionBasis {
    pub k: u32,
    pub exponents: Vec<Vec<u32>>,
    /// Hermitian positive-definite Gram matrix of the monomials.
    pub gram: DMatrix<Cx>,
    /// Lower Cholesky factor, `G = L L^*`.
    chol_l: DMatrix<Cx>,
    /// Orthonormalizing coefficients `C = (L^*)^{-1}` with `C^* G C = I`.
    pub coeffs: DMatrix<Cx>,
}

impl SectionBasis {
    /// Dimension `N_k + 1` of the section space.
    pub fn dim(&self) -> usize {
        self.exponents.len()
    }

    /// Orthonormalize a Hermitian positive-definite Gram matrix:
    /// `C = (L^*)^{-1}` for the Cholesky factor `L`.
    pub fn orthonormalize(gram: &DMatrix<Cx>) -> Result<(DMatrix<Cx>, DMatrix<Cx>)> {
        let l = linalg::cholesky(gram)?;
        let c = linalg::invert_lower_triangular(&l).adjoint();
        let residual = linalg::max_abs(&(c.adjoint() * gram * &c - DMatrix::<Cx>::identity(
            gram.nrows(),
            gram.ncols(),
        )));
        if residual > 1e-10 {
            return Err(Error::InvariantViolated {
                check: "C^* G C = I".into(),
                value: residual,
                tolerance: 1e-10,
                point: "orthonormalization".into(),
            });
        }
        Ok((l, c))
    }

    /// Assemble the Gram matrix by quadrature and orthonormalize.
    ///
    /// `G[p][q] = ∫ h^k(s_p, s_q) dV`, conjugate-symmetrized. Blocks of
    /// nodes are accumulated in a fixed order for determinism.
    pub fn compute(bundle: &HermitianBundle, k: u32, rule: &QuadratureRule) -> Result<Self> {
        let exponents = monomial_exponents(bundle.atlas.kind, k);
        let dim = exponents.len();
        let gram = if dim == 0 {
            DMatrix::<Cx>::zeros(0, 0)
        } else {
            let blocks: Vec<&[super::QuadNode]> = rule.nodes.chunks(1024).collect();
            let partial: Vec<DMatrix<Cx>> = par::map_collect(&blocks, |block| {
                let mut acc = DMatrix::<Cx>::zeros(dim, dim);
                let mut svec = vec![Cx::new(0.0, 0.0); dim];
                for node in *block {
                    let z = bundle.atlas.ambient_lift(node.chart, &node.w);
                    let psi = bundle.psi(node.chart, &node.w);
                    let density = bundle.volume_density(node.chart, &node.w);
                    let amp = ((-(k as f64) * psi).exp() * density * node.weight).sqrt();
                    for (s, alpha) in svec.iter_mut().zip(&exponents) {
                        *s = monomial_value(alpha, &z) * amp;
                    }
                    for p in 0..dim {
                        for q in 0..dim {
                            acc[(p, q)] += svec[p] * svec[q].conj();
                        }
                    }
                }
                acc
            });
            let mut gram = DMatrix::<Cx>::zeros(dim, dim);
            for part in partial {
                gram += part;
            }
            linalg::hermitian_part(&gram)
        };
        if dim == 0 {
            return Ok(Self {
                k,
                exponents,
                gram: DMatrix::zeros(0, 0),
                chol_l: DMatrix::zeros(0, 0),
                coeffs: DMatrix::zeros(0, 0),
            });
        }
        let (chol_l, coeffs) = Self::orthonormalize(&gram)?;
        Ok(Self {
            k,
            exponents,
            gram,
            chol_l,
            coeffs,
        })
    }

    /// As [`SectionBasis::compute`], but also re-assemble at a finer node
    /// count and reject the rule if the Gram entries disagree.
    pub fn compute_verified(
        bundle: &HermitianBundle,
        k: u32,
        radial: usize,
        angular: usize,
    ) -> Result<Self> {
        let rule = bundle.quadrature(radial, angular)?;
        let basis = Self::compute(bundle, k, &rule)?;
        let finer = bundle.quadrature(radial + radial / 2, angular)?;
        let check = Self::compute(bundle, k, &finer)?;
        let scale = linalg::max_abs(&basis.gram).max(1e-300);
        let delta = linalg::max_abs(&(&check.gram - &basis.gram)) / scale;
        if delta > 1e-8 {
            return Err(Error::QuadratureUnderResolved {
                what: format!("Gram matrix at k = {k}"),
                delta,
                tol: 1e-8,
            });
        }
        Ok(basis)
    }

    /// Raw monomial values at an ambient lift.
    pub fn monomials_at(&self, z: &[Cx]) -> Vec<Cx> {
        self.exponents
            .iter()
            .map(|alpha| monomial_value(alpha, z))
            .collect()
    }

    /// Orthonormal section values (in the chart frame) at an ambient lift:
    /// `ŝ_j = Σ_α C_{αj} m_α`, evaluated by one triangular solve.
    pub fn orthonormal_at(&self, z: &[Cx]) -> Vec<Cx> {
        let m = self.monomials_at(z);
        self.orthonormal_from_monomials(&m)
    }

    /// `ŝ` from pre-evaluated monomials: with `C = (L^*)^{-1}`,
    /// `ŝ = conj(L^{-1} conj(m))` by forward substitution.
    pub fn orthonormal_from_monomials(&self, monomials: &[Cx]) -> Vec<Cx> {
        let n = self.dim();
        let mut x: Vec<Cx> = monomials.iter().map(|v| v.conj()).collect();
        for row in 0..n {
            let mut s = x[row];
            for j in 0..row {
                s -= self.chol_l[(row, j)] * x[j];
            }
            x[row] = s / self.chol_l[(row, row)];
        }
        for v in &mut x {
            *v = v.conj();
        }
        x
    }

    /// Bergman kernel `B_k(x) = Σ_j |ŝ_j(x)|²_{h^k}` at a chart point.
    ///
    /// On orbifold cover charts, points inside the exclusion radius require
    /// `on_cover` (the chart coordinate is already the uniformizing one; the
    /// flag acknowledges that the value is computed on the cover).
    pub fn bergman(
        &self,
        bundle: &HermitianBundle,
        chart: usize,
        w: &[Cx],
        on_cover: bool,
    ) -> Result<f64> {
        let c = bundle.atlas.chart(chart);
        if c.stabilizer > 1 && !on_cover {
            let excl = crate::geometry::GridSpec::default().exclusion;
            if w.iter().map(|v| v.norm()).sum::<f64>() < excl {
                return Err(Error::ExcludedOrbifoldPoint);
            }
        }
        let z = bundle.atlas.ambient_lift(chart, w);
        let shat = self.orthonormal_at(&z);
        let weight = (-(self.k as f64) * bundle.psi(chart, w)).exp();
        Ok(weight * shat.iter().map(|v| v.norm_sqr()).sum::<f64>())
    }

    /// `∫ B_k dV`; equals `N_k + 1` by orthonormality.
    pub fn integrate_bergman(&self, bundle: &HermitianBundle, rule: &QuadratureRule) -> f64 {
        bundle.integrate(rule, |chart, w| {
            self.bergman(bundle, chart, w, true).unwrap_or(f64::NAN)
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn monomial_enumeration_on_the_line() {
        let basis = monomial_exponents(BaseKind::Projective { dim: 1 }, 2);
        assert_eq!(basis, vec![vec![2, 0], vec![1, 1], vec![0, 2]]);
    }

    #[test]
    fn monomial_enumeration_dimension_on_the_plane() {
        // dim H⁰(ℂP², O(3)) = C(5,2) = 10.
        let basis = monomial_exponents(BaseKind::Projective { dim: 2 }, 3);
        assert_eq!(basis.len(), 10);
        assert!(basis.iter().all(|a| a.iter().sum::<u32>() == 3));
    }

    #[test]
    fn weighted_lattice_enumeration() {
        let basis = monomial_exponents(BaseKind::WeightedLine { a: 1, b: 2 }, 4);
        assert_eq!(basis, vec![vec![4, 0], vec![2, 1], vec![0, 2]]);
        let empty = monomial_exponents(BaseKind::WeightedLine { a: 2, b: 3 }, 1);
        assert!(empty.is_empty());
    }

    #[test]
    fn orthonormalize_simple_cases() {
        let id = DMatrix::<Cx>::identity(3, 3);
        let (_, c) = SectionBasis::orthonormalize(&id).unwrap();
        assert!(linalg::max_abs(&(&c - DMatrix::<Cx>::identity(3, 3))) < 1e-14);

        let g = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![
            Cx::new(4.0, 0.0),
            Cx::new(1.0, 0.0),
        ]));
        let (_, c) = SectionBasis::orthonormalize(&g).unwrap();
        assert_relative_eq!(c[(0, 0)].re, 0.5, epsilon = 1e-14);
        assert_relative_eq!(c[(1, 1)].re, 1.0, epsilon = 1e-14);
    }

    #[test]
    fn orthonormalize_random_hermitian_pd() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let n = 5;
        let a = DMatrix::from_fn(n, n, |_, _| {
            Cx::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
        });
        let g = &a * a.adjoint() + DMatrix::<Cx>::identity(n, n) * Cx::new(0.5, 0.0);
        let (_, c) = SectionBasis::orthonormalize(&g).unwrap();
        let res = linalg::max_abs(&(c.adjoint() * &g * &c - DMatrix::<Cx>::identity(n, n)));
        assert!(res < 1e-12, "residual {res}");
    }

    #[test]
    fn gram_matches_the_beta_oracle_on_the_line() {
        let bundle = HermitianBundle::fubini_study(1).unwrap();
        let rule = bundle.quadrature(64, 128).unwrap();
        for k in [1u32, 2, 5] {
            let basis = SectionBasis::compute(&bundle, k, &rule).unwrap();
            for (j, alpha) in basis.exponents.iter().enumerate() {
                let oracle = fs_gram_diagonal(1, k, alpha);
                assert_relative_eq!(
                    basis.gram[(j, j)].re,
                    oracle,
                    epsilon = 1e-12 * oracle
                );
                for p in 0..basis.dim() {
                    if p != j {
                        assert!(basis.gram[(p, j)].norm() < 1e-14);
                    }
                }
            }
        }
    }

    #[test]
    fn gram_of_k1_is_isotropic() {
        // Angular symmetry kills the off-diagonals and forces equal diagonals.
        let bundle = HermitianBundle::fubini_study(1).unwrap();
        let rule = bundle.quadrature(64, 128).unwrap();
        let basis = SectionBasis::compute(&bundle, 1, &rule).unwrap();
        assert_relative_eq!(
            basis.gram[(0, 0)].re,
            basis.gram[(1, 1)].re,
            epsilon = 1e-13
        );
        assert!(basis.gram[(0, 1)].norm() < 1e-15);
    }

    #[test]
    fn bergman_kernel_is_constant_for_fubini_study() {
        let bundle = HermitianBundle::fubini_study(1).unwrap();
        let rule = bundle.quadrature(64, 128).unwrap();
        for k in [1u32, 2] {
            let basis = SectionBasis::compute(&bundle, k, &rule).unwrap();
            let want = (k as f64 + 1.0) / std::f64::consts::PI;
            for w in [
                Cx::new(0.0, 0.0),
                Cx::new(0.5, -0.25),
                Cx::new(0.95, 0.3),
            ] {
                let b = basis.bergman(&bundle, 0, &[w], false).unwrap();
                assert_relative_eq!(b, want, epsilon = 1e-10 * want);
            }
        }
    }

    #[test]
    fn bergman_integrates_to_the_dimension() {
        let bundle = HermitianBundle::perturbed_fubini_study(1, 0.1).unwrap();
        let rule = bundle.quadrature(64, 128).unwrap();
        let basis = SectionBasis::compute(&bundle, 6, &rule).unwrap();
        let total = basis.integrate_bergman(&bundle, &rule);
        assert_relative_eq!(total, basis.dim() as f64, epsilon = 1e-9);
    }

    #[test]
    fn perturbed_gram_keeps_angular_selection_rules() {
        // u's angular-symmetric part only shifts the diagonal at O(ε);
        // the Re(w)-part couples neighbouring exponents but the (0,2)
        // entry stays zero at one-photon order. Check the symmetric part
        // only: drop the Re-term by averaging over the antipodal map.
        let bundle = HermitianBundle::fubini_study(1).unwrap();
        let rule = bundle.quadrature(64, 128).unwrap();
        let basis0 = SectionBasis::compute(&bundle, 2, &rule).unwrap();
        let eps = 0.05;
        let pert = HermitianBundle::perturbed_fubini_study(1, eps).unwrap();
        let basis1 = SectionBasis::compute(&pert, 2, &rule).unwrap();
        // Diagonals shift by O(ε).
        for j in 0..3 {
            let rel =
                (basis1.gram[(j, j)].re - basis0.gram[(j, j)].re).abs() / basis0.gram[(j, j)].re;
            assert!(rel < 3.0 * eps, "diagonal shift {rel}");
            assert!(rel > 1e-4, "perturbation should move the diagonal");
        }
    }

    #[test]
    fn under_resolved_quadrature_is_detected() {
        // 3 radial nodes cannot integrate degree-12 monomial data.
        let bundle = HermitianBundle::fubini_study(1).unwrap();
        let err = SectionBasis::compute_verified(&bundle, 12, 3, 16);
        assert!(matches!(err, Err(Error::QuadratureUnderResolved { .. })));
        assert!(SectionBasis::compute_verified(&bundle, 12, 64, 128).is_ok());
    }

    #[test]
    fn weighted_gram_is_diagonal_and_positive() {
        let bundle = HermitianBundle::weighted_line(1, 2).unwrap();
        let rule = bundle.quadrature(64, 128).unwrap();
        let basis = SectionBasis::compute(&bundle, 4, &rule).unwrap();
        assert_eq!(basis.dim(), 3);
        for p in 0..3 {
            assert!(basis.gram[(p, p)].re > 0.0);
            for q in 0..3 {
                if p != q {
                    assert!(basis.gram[(p, q)].norm() < 1e-14);
                }
            }
        }
        let total = basis.integrate_bergman(&bundle, &rule);
        assert_relative_eq!(total, 3.0, epsilon = 1e-9);
    }
}
