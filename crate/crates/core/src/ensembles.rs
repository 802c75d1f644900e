//! Orthogonally invariant Gaussian laws on degree-d forms in n+1 variables,
//! parameterized at the covariance level by mixture weights `β_0..β_{⌊d/2⌋}`:
//!
//! `E f(x) f(y) = Σ_k β_k ‖x‖^{2k} ‖y‖^{2k} ⟨x,y⟩^{d-2k}`,
//!
//! normalized so that `E f(q)^2 = Σ_k β_k = 1` at the base point
//! `q = (1,0,…,0)`. The single scalar `δ = Σ_k β_k (d-2k)` (the mean squared
//! gradient coordinate) determines every expected curvature quantity of the
//! zero set. `β = (1,0,…,0)` is the Kostlan law: independent monomial
//! coefficients with multinomial variances and `δ = d`.
//!
//! By invariance, estimators only ever need the joint law of the 2-jet
//! `(f(q), Df(q), D²f(q))` on the sphere. That law is sampled exactly from
//! six scalar moments, with no polynomial expansion: the gradient is an
//! independent `√δ ×` standard normal vector, and the pair (value, Hessian)
//! decomposes by Gaussian regression as `D²f(q) = W̃ - δ f(q) I` with `W̃`
//! an independent invariant symmetric matrix of parameter `δ(1-δ)`.

use crate::error::{LabError, Result};
use crate::matrices::SymmetricEnsemble;
use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_distr::StandardNormal;

/// Invariant Gaussian ensemble on degree-d forms over `P^n`, stored as
/// normalized harmonic-mixture weights.
#[derive(Debug, Clone, PartialEq)]
pub struct PolynomialEnsemble {
    n: u32,
    d: u32,
    betas: Vec<f64>,
}

/// Second-order moments of the raw 2-jet at the base point: `value = f(q)`,
/// gradient coordinates, and the raw second-derivative array
/// `a_ij = ∂²_{x_i x_j} f(q)` (before the on-sphere correction `-d f(q) I`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JetCovariance {
    /// `E f(q)^2`, fixed to 1 by normalization.
    pub var_value: f64,
    /// `E (∂_i f(q))^2 = Σ β_k (d-2k) = δ`.
    pub var_grad: f64,
    /// `E a_ij^2 = Σ β_k (d-2k)(d-2k-1)` for i ≠ j.
    pub offdiag_hess_var: f64,
    /// `E a_ii^2`, forced by invariance: `E a_11² = E(a_11 a_22) + 2 E a_12²`.
    pub diag_hess_var: f64,
    /// `E (a_ii a_jj) = Σ β_k 4k^2` for i ≠ j.
    pub diag_hess_cov: f64,
    /// `E (f(q) a_ii) = Σ β_k 2k`.
    pub value_hess_diag_cov: f64,
}

/// One sampled 2-jet at the base point: value `f(q)`, tangent gradient
/// `Df(q)`, and the sphere-intrinsic second derivative `D²f(q)`.
#[derive(Debug, Clone)]
pub struct JetSample {
    pub value: f64,
    pub gradient: DVector<f64>,
    pub hessian: DMatrix<f64>,
}

impl PolynomialEnsemble {
    /// Kostlan law of degree d: `β_0 = 1`, parameter `δ = d`.
    pub fn kostlan(n: u32, d: u32) -> Result<Self> {
        let mut betas = vec![0.0; (d / 2) as usize + 1];
        betas[0] = 1.0;
        Self::mixture(n, d, &betas)
    }

    /// General mixture; weights are rescaled so that `Σ β_k = 1`.
    pub fn mixture(n: u32, d: u32, betas: &[f64]) -> Result<Self> {
        if n < 1 || d < 1 {
            return Err(LabError::Domain(format!("need n >= 1 and d >= 1, got n={n}, d={d}")));
        }
        if betas.len() != (d / 2) as usize + 1 {
            return Err(LabError::Dimension(format!(
                "degree {d} takes {} mixture weights, got {}",
                d / 2 + 1,
                betas.len()
            )));
        }
        if betas.iter().any(|&b| b < 0.0 || !b.is_finite()) {
            return Err(LabError::Domain("mixture weights must be nonnegative".into()));
        }
        let total: f64 = betas.iter().sum();
        if total <= 0.0 {
            return Err(LabError::Domain("mixture weights must not all vanish".into()));
        }
        Ok(PolynomialEnsemble { n, d, betas: betas.iter().map(|b| b / total).collect() })
    }

    pub fn ambient_dim(&self) -> u32 {
        self.n
    }

    pub fn degree(&self) -> u32 {
        self.d
    }

    /// Normalized mixture weights (`Σ β_k = 1`).
    pub fn betas(&self) -> &[f64] {
        &self.betas
    }

    pub fn is_kostlan(&self) -> bool {
        self.betas[0] == 1.0
    }

    /// Parameter `δ = Σ β_k (d - 2k) ∈ [d mod 2, d]`.
    pub fn delta(&self) -> f64 {
        self.betas
            .iter()
            .enumerate()
            .map(|(k, b)| b * (self.d as f64 - 2.0 * k as f64))
            .sum()
    }

    /// The same law restricted to a coordinate subspace `R^{n'+1}`: an
    /// invariant ensemble with identical degree, weights, and parameter.
    pub fn restrict(&self, n_prime: u32) -> Result<Self> {
        if n_prime > self.n {
            return Err(LabError::Dimension(format!(
                "restriction target {n_prime} exceeds ambient dimension {}",
                self.n
            )));
        }
        Ok(PolynomialEnsemble { n: n_prime, d: self.d, betas: self.betas.clone() })
    }

    /// All six scalar moments of the raw 2-jet at the base point.
    pub fn jet_covariance(&self) -> JetCovariance {
        let d = self.d as f64;
        let mut var_grad = 0.0;
        let mut offdiag = 0.0;
        let mut diag_cov = 0.0;
        let mut value_diag = 0.0;
        for (k, &b) in self.betas.iter().enumerate() {
            let k = k as f64;
            var_grad += b * (d - 2.0 * k);
            offdiag += b * (d - 2.0 * k) * (d - 2.0 * k - 1.0);
            diag_cov += b * 4.0 * k * k;
            value_diag += b * 2.0 * k;
        }
        JetCovariance {
            var_value: 1.0,
            var_grad,
            offdiag_hess_var: offdiag,
            diag_hess_var: diag_cov + 2.0 * offdiag,
            diag_hess_cov: diag_cov,
            value_hess_diag_cov: value_diag,
        }
    }

    /// The invariant symmetric ensemble of the regression residual
    /// `W̃ = D²f(q) + δ f(q) I`, which is independent of `f(q)` and has
    /// parameter `δ(1-δ)`. Its scales are read off the jet covariance:
    /// off-diagonal variance `Σ β_k (d-2k)(d-2k-1)` and scalar part
    /// `r² = Σ β_k 4k² - (Σ β_k 2k)²`, a variance-like quantity that is
    /// nonnegative for every valid mixture.
    fn residual_ensemble(&self) -> SymmetricEnsemble {
        assert!(self.n >= 2, "jets need an ambient dimension n >= 2");
        let jc = self.jet_covariance();
        let s_off2 = jc.offdiag_hess_var;
        let r2 = jc.diag_hess_cov - jc.value_hess_diag_cov * jc.value_hess_diag_cov;
        assert!(
            r2 > -1e-9 && s_off2 > -1e-9,
            "infeasible jet moments: r^2 = {r2}, s_off^2 = {s_off2}"
        );
        let delta = self.delta();
        debug_assert!((r2.max(0.0) - s_off2.max(0.0) - delta * (1.0 - delta)).abs() < 1e-9);
        SymmetricEnsemble { n: self.n, r: r2.max(0.0).sqrt(), s_off: s_off2.max(0.0).sqrt() }
    }

    /// Draw the exact joint law of `(f(q), Df(q), D²f(q))`, optionally
    /// conditioned on `f(q) = 0`.
    ///
    /// The gradient is independent of the rest; conditioning therefore only
    /// replaces `(u, W̃ - δ u I)` by `(0, W̃)`.
    pub fn sample_jet(&self, conditioned: bool, rng: &mut impl Rng) -> JetSample {
        let n = self.n as usize;
        let delta = self.delta();
        let grad_scale = delta.sqrt();
        let gradient =
            DVector::from_fn(n, |_, _| grad_scale * rng.sample::<f64, _>(StandardNormal));
        let residual = self.residual_ensemble();
        let wt = residual.sample(rng);
        if conditioned {
            JetSample { value: 0.0, gradient, hessian: wt }
        } else {
            let u: f64 = rng.sample(StandardNormal);
            let hessian = wt - DMatrix::identity(n, n) * (delta * u);
            JetSample { value: u, gradient, hessian }
        }
    }

    /// Restriction of the law to a 2-dimensional coordinate subspace, as a
    /// sampler of binary-form coefficients.
    pub fn binary_sampler(&self) -> Result<BinaryFormSampler> {
        BinaryFormSampler::new(self)
    }

    /// Sample a degree-2 law as the symmetric matrix `Q` of the quadratic
    /// form `x ↦ xᵀQx` on `R^{n+1}`. The Kostlan component contributes a
    /// GOE-like part with diagonal variance `β_0` and off-diagonal variance
    /// `β_0/2`; the `‖x‖²‖y‖²` component contributes `√β_1 Z I`.
    pub fn quadric_matrix(&self, rng: &mut impl Rng) -> Result<DMatrix<f64>> {
        if self.d != 2 {
            return Err(LabError::Domain(format!(
                "quadric matrices require degree 2, got {}",
                self.d
            )));
        }
        let size = self.n as usize + 1;
        let (b0, b1) = (self.betas[0], self.betas[1]);
        let z: f64 = rng.sample(StandardNormal);
        let mut q = DMatrix::zeros(size, size);
        for i in 0..size {
            q[(i, i)] = b0.sqrt() * rng.sample::<f64, _>(StandardNormal) + b1.sqrt() * z;
            for j in (i + 1)..size {
                q[(i, j)] = (b0 / 2.0).sqrt() * rng.sample::<f64, _>(StandardNormal);
                q[(j, i)] = q[(i, j)];
            }
        }
        Ok(q)
    }
}

/// Sampler for the binary-form restriction of an invariant ensemble.
///
/// Kostlan laws sample their independent coefficients directly. General
/// mixtures sample the Gaussian vector of values on d+1 equally spaced
/// angles of the half-circle (where the covariance is closed-form) and
/// interpolate back to monomial coefficients.
#[derive(Debug, Clone)]
pub struct BinaryFormSampler {
    d: u32,
    kind: BinarySamplerKind,
}

#[derive(Debug, Clone)]
enum BinarySamplerKind {
    Kostlan { coeff_sd: Vec<f64> },
    Mixture { cov_sqrt: DMatrix<f64>, vandermonde_inv: DMatrix<f64> },
}

impl BinaryFormSampler {
    const MAX_DEGREE: u32 = 30;

    fn new(ensemble: &PolynomialEnsemble) -> Result<Self> {
        let d = ensemble.d;
        if d > Self::MAX_DEGREE {
            return Err(LabError::Unsupported(format!(
                "binary-form sampling is capped at degree {}, got {d}",
                Self::MAX_DEGREE
            )));
        }
        if ensemble.is_kostlan() {
            let coeff_sd = (0..=d).map(|a| binomial(d, a).sqrt()).collect();
            return Ok(BinaryFormSampler { d, kind: BinarySamplerKind::Kostlan { coeff_sd } });
        }
        let m = d as usize + 1;
        let angles: Vec<f64> =
            (0..m).map(|i| std::f64::consts::PI * (2 * i + 1) as f64 / (2 * m) as f64).collect();
        // Covariance of the values at the chosen angles.
        let mut cov = DMatrix::zeros(m, m);
        for i in 0..m {
            for j in 0..m {
                let c = (angles[i] - angles[j]).cos();
                let mut acc = 0.0;
                for (k, &b) in ensemble.betas.iter().enumerate() {
                    acc += b * c.powi(d as i32 - 2 * k as i32);
                }
                cov[(i, j)] = acc;
            }
        }
        // Mixtures with vanishing weights are supported on a strict subspace,
        // so take a symmetric PSD square root instead of a Cholesky factor.
        let eigen = cov.symmetric_eigen();
        let mut cov_sqrt = eigen.eigenvectors.clone();
        for (c, &lambda) in eigen.eigenvalues.iter().enumerate() {
            cov_sqrt.column_mut(c).scale_mut(lambda.max(0.0).sqrt());
        }
        // Evaluation matrix: values of the monomials at each angle.
        let mut v = DMatrix::zeros(m, m);
        for (i, &theta) in angles.iter().enumerate() {
            for a in 0..m {
                v[(i, a)] = theta.cos().powi((d as usize - a) as i32) * theta.sin().powi(a as i32);
            }
        }
        let vandermonde_inv = v
            .clone()
            .try_inverse()
            .ok_or_else(|| LabError::RankDeficient("interpolation matrix is singular".into()))?;
        // Conditioning guard for the interpolation step.
        let cond = matrix_inf_norm(&v) * matrix_inf_norm(&vandermonde_inv);
        if cond > 1e9 {
            return Err(LabError::RankDeficient(format!(
                "interpolation condition {cond:.3e} too large for degree {d}"
            )));
        }
        Ok(BinaryFormSampler { d, kind: BinarySamplerKind::Mixture { cov_sqrt, vandermonde_inv } })
    }

    pub fn degree(&self) -> u32 {
        self.d
    }

    /// Coefficients `c_0..c_d` of `f(X_0,X_1) = Σ_a c_a X_0^{d-a} X_1^a`.
    pub fn sample(&self, rng: &mut impl Rng) -> Vec<f64> {
        match &self.kind {
            BinarySamplerKind::Kostlan { coeff_sd } => coeff_sd
                .iter()
                .map(|sd| sd * rng.sample::<f64, _>(StandardNormal))
                .collect(),
            BinarySamplerKind::Mixture { cov_sqrt, vandermonde_inv } => {
                let m = self.d as usize + 1;
                let xi = DVector::from_fn(m, |_, _| rng.sample::<f64, _>(StandardNormal));
                let values = cov_sqrt * xi;
                (vandermonde_inv * values).iter().copied().collect()
            }
        }
    }
}

fn matrix_inf_norm(m: &DMatrix<f64>) -> f64 {
    (0..m.nrows())
        .map(|i| m.row(i).iter().map(|x| x.abs()).sum::<f64>())
        .fold(0.0, f64::max)
}

pub(crate) fn binomial(n: u32, k: u32) -> f64 {
    let mut b = 1.0;
    for i in 0..k.min(n - k) {
        b = b * (n - i) as f64 / (i + 1) as f64;
    }
    b
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrices::parameter_from_moments;
    use crate::mc::{run_mc, McSettings};
    use rand_chacha::rand_core::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn rng(seed: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(seed)
    }

    #[test]
    fn kostlan_parameter_is_degree() {
        for &(n, d) in &[(2u32, 3u32), (3, 2), (5, 1), (4, 7)] {
            let e = PolynomialEnsemble::kostlan(n, d).unwrap();
            assert_eq!(e.delta(), d as f64);
            assert!(e.is_kostlan());
        }
    }

    #[test]
    fn mixture_parameters() {
        let cases: &[(&[f64], f64)] = &[(&[1.0, 0.0], 2.0), (&[1.0, 1.0], 1.0), (&[1.0, 3.0], 0.5)];
        for &(betas, delta) in cases {
            let e = PolynomialEnsemble::mixture(3, 2, betas).unwrap();
            assert!((e.delta() - delta).abs() < 1e-15);
        }
        assert!(PolynomialEnsemble::mixture(3, 2, &[0.0, 0.0]).is_err());
        assert!(PolynomialEnsemble::mixture(3, 2, &[1.0]).is_err());
        assert!(PolynomialEnsemble::mixture(3, 2, &[1.0, -0.5]).is_err());
    }

    #[test]
    fn normalization_is_scale_invariant() {
        let a = PolynomialEnsemble::mixture(3, 4, &[1.0, 2.0, 0.5]).unwrap();
        let b = PolynomialEnsemble::mixture(3, 4, &[10.0, 20.0, 5.0]).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn restriction_keeps_parameter() {
        let e = PolynomialEnsemble::mixture(5, 4, &[1.0, 0.5, 0.25]).unwrap();
        let r = e.restrict(1).unwrap();
        assert_eq!(r.delta(), e.delta());
        assert_eq!(r.degree(), 4);
        assert!(e.restrict(9).is_err());
    }

    #[test]
    fn jet_covariance_kostlan() {
        let d = 4u32;
        let jc = PolynomialEnsemble::kostlan(3, d).unwrap().jet_covariance();
        assert_eq!(jc.var_value, 1.0);
        assert_eq!(jc.var_grad, d as f64);
        assert_eq!(jc.offdiag_hess_var, (d * (d - 1)) as f64);
        assert_eq!(jc.value_hess_diag_cov, 0.0);
        assert_eq!(jc.diag_hess_cov, 0.0);
    }

    /// The diagonal variance is forced by invariance for every mixture.
    #[test]
    fn jet_covariance_invariance_relation() {
        for betas in [vec![1.0, 0.0, 0.0], vec![0.3, 0.5, 0.2], vec![0.0, 0.0, 1.0]] {
            let jc = PolynomialEnsemble::mixture(4, 4, &betas).unwrap().jet_covariance();
            assert!(
                (jc.diag_hess_var - jc.diag_hess_cov - 2.0 * jc.offdiag_hess_var).abs() < 1e-14
            );
        }
    }

    #[test]
    fn constant_on_sphere_mixture_is_degenerate() {
        // d = 2, all weight on k = 1: f = Z ‖x‖², constant on the sphere.
        let e = PolynomialEnsemble::mixture(3, 2, &[0.0, 1.0]).unwrap();
        assert_eq!(e.delta(), 0.0);
        assert_eq!(e.jet_covariance().var_grad, 0.0);
        let jet = e.sample_jet(false, &mut rng(1));
        assert!(jet.gradient.iter().all(|&g| g == 0.0));
        assert!(jet.hessian.iter().all(|&w| w == 0.0));
    }

    #[test]
    fn linear_forms_have_rigid_hessian() {
        // d = 1: D²f(q) = -f(q) I exactly.
        let e = PolynomialEnsemble::kostlan(3, 1).unwrap();
        let mut r = rng(2);
        for _ in 0..20 {
            let jet = e.sample_jet(false, &mut r);
            let expected = DMatrix::identity(3, 3) * (-jet.value);
            assert!((jet.hessian - expected).norm() < 1e-14);
        }
        let cond = e.sample_jet(true, &mut r);
        assert_eq!(cond.value, 0.0);
        assert!(cond.hessian.norm() == 0.0);
    }

    /// Conditioned Kostlan Hessians have parameter d(1-d).
    #[test]
    fn conditioned_hessian_parameter() {
        for &d in &[2u32, 3] {
            let e = PolynomialEnsemble::kostlan(3, d).unwrap();
            let settings = McSettings::new(100_000, 7 + d as u64);
            let outcome = run_mc(&settings, 0, 2, |rng, out| {
                let jet = e.sample_jet(true, rng);
                let tr = jet.hessian.trace();
                out[0] = tr * tr;
                out[1] = jet.hessian.iter().map(|x| x * x).sum::<f64>();
                true
            });
            let deltas: Vec<f64> = outcome
                .batches
                .iter()
                .map(|b| {
                    parameter_from_moments(3, b.sums[0] / b.count as f64, b.sums[1] / b.count as f64)
                })
                .collect();
            let b = deltas.len() as f64;
            let mean = deltas.iter().sum::<f64>() / b;
            let var = deltas.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (b - 1.0);
            let se = (var / b).sqrt();
            let target = (d as f64) * (1.0 - d as f64);
            assert!((mean - target).abs() <= 3.0 * se, "d={d}: mean {mean} target {target} se {se}");
        }
    }

    /// Unconditioned jets: E(u tr W) = -n δ, and δ(W) = δ.
    #[test]
    fn unconditioned_jet_moments() {
        let e = PolynomialEnsemble::mixture(3, 4, &[0.4, 0.4, 0.2]).unwrap();
        let delta = e.delta();
        let settings = McSettings::new(150_000, 11);
        let outcome = run_mc(&settings, 0, 3, |rng, out| {
            let jet = e.sample_jet(false, rng);
            let tr = jet.hessian.trace();
            out[0] = jet.value * tr;
            out[1] = tr * tr;
            out[2] = jet.hessian.iter().map(|x| x * x).sum::<f64>();
            true
        });
        let (mean_cross, se_cross) = outcome.summarize(0);
        assert!(
            (mean_cross + 3.0 * delta).abs() <= 3.0 * se_cross,
            "cross moment {mean_cross} vs {}",
            -3.0 * delta
        );
        let deltas: Vec<f64> = outcome
            .batches
            .iter()
            .map(|b| parameter_from_moments(3, b.sums[1] / b.count as f64, b.sums[2] / b.count as f64))
            .collect();
        let b = deltas.len() as f64;
        let mean = deltas.iter().sum::<f64>() / b;
        let var = deltas.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (b - 1.0);
        let se = (var / b).sqrt();
        assert!((mean - delta).abs() <= 3.0 * se, "mean {mean} target {delta} se {se}");
    }

    /// Each gradient coordinate is uncorrelated with the value and with
    /// every Hessian entry.
    #[test]
    fn gradient_independent_of_value_and_hessian() {
        let e = PolynomialEnsemble::mixture(2, 4, &[0.5, 0.3, 0.2]).unwrap();
        let settings = McSettings::new(100_000, 13);
        let outcome = run_mc(&settings, 0, 3, |rng, out| {
            let jet = e.sample_jet(false, rng);
            out[0] = jet.gradient[0] * jet.value;
            out[1] = jet.gradient[0] * jet.hessian[(0, 1)];
            out[2] = jet.gradient[1] * jet.hessian[(0, 0)];
            true
        });
        for idx in 0..3 {
            let (mean, se) = outcome.summarize(idx);
            assert!(mean.abs() <= 3.0 * se, "stat {idx}: mean {mean} se {se}");
        }
    }

    #[test]
    fn kostlan_binary_coefficient_variances() {
        let e = PolynomialEnsemble::kostlan(4, 2).unwrap();
        let sampler = e.binary_sampler().unwrap();
        let settings = McSettings::new(100_000, 17);
        let outcome = run_mc(&settings, 0, 3, |rng, out| {
            let c = sampler.sample(rng);
            out[0] = c[0] * c[0];
            out[1] = c[1] * c[1];
            out[2] = c[2] * c[2];
            true
        });
        for (idx, target) in [(0usize, 1.0), (1, 2.0), (2, 1.0)] {
            let (mean, se) = outcome.summarize(idx);
            assert!((mean - target).abs() <= 3.0 * se, "coeff {idx}: mean {mean} vs {target}");
        }
    }

    /// Forcing a Kostlan law through the mixture interpolation path must
    /// reproduce the independent multinomial-variance coefficients.
    #[test]
    fn interpolation_path_matches_kostlan() {
        let d = 3u32;
        // A trace of k=1 weight forces the mixture path while leaving the
        // law unchanged at measurement precision.
        let e = PolynomialEnsemble::mixture(1, d, &[1.0, 1e-12]).unwrap();
        let sampler = e.binary_sampler().unwrap();
        assert!(matches!(sampler.kind, BinarySamplerKind::Mixture { .. }));
        let settings = McSettings::new(100_000, 19);
        let outcome = run_mc(&settings, 0, 6, |rng, out| {
            let c = sampler.sample(rng);
            for a in 0..4 {
                out[a] = c[a] * c[a];
            }
            out[4] = c[0] * c[1];
            out[5] = c[1] * c[2];
            true
        });
        for a in 0..=3u32 {
            let (mean, se) = outcome.summarize(a as usize);
            let target = binomial(d, a);
            assert!((mean - target).abs() <= 3.0 * se, "coeff {a}: {mean} vs {target}");
        }
        for idx in 4..6 {
            let (mean, se) = outcome.summarize(idx);
            assert!(mean.abs() <= 3.0 * se, "cross {idx}: {mean}");
        }
    }

    /// E f(1,0)^2 = 1 for every normalized ensemble.
    #[test]
    fn binary_value_normalization() {
        let e = PolynomialEnsemble::mixture(1, 4, &[0.2, 0.5, 0.3]).unwrap();
        let sampler = e.binary_sampler().unwrap();
        let settings = McSettings::new(100_000, 23);
        let outcome = run_mc(&settings, 0, 1, |rng, out| {
            let c = sampler.sample(rng);
            out[0] = c[0] * c[0];
            true
        });
        let (mean, se) = outcome.summarize(0);
        assert!((mean - 1.0).abs() <= 3.0 * se, "mean {mean} se {se}");
    }

    #[test]
    fn binary_sampler_degree_cap() {
        let e = PolynomialEnsemble::kostlan(1, 31).unwrap();
        assert!(e.binary_sampler().is_err());
    }

    #[test]
    fn quadric_matrix_moments_and_definiteness() {
        // Pure Kostlan quadric: Var(Q_01) = 1/2, Var(Q_00) = 1.
        let kostlan = PolynomialEnsemble::kostlan(3, 2).unwrap();
        let settings = McSettings::new(100_000, 29);
        let outcome = run_mc(&settings, 0, 2, |rng, out| {
            let q = kostlan.quadric_matrix(rng).unwrap();
            out[0] = q[(0, 1)] * q[(0, 1)];
            out[1] = q[(0, 0)] * q[(0, 0)];
            true
        });
        let (m0, s0) = outcome.summarize(0);
        assert!((m0 - 0.5).abs() <= 3.0 * s0);
        let (m1, s1) = outcome.summarize(1);
        assert!((m1 - 1.0).abs() <= 3.0 * s1);
        // Pure scalar quadric: Q = Z I, always definite.
        let scalar = PolynomialEnsemble::mixture(3, 2, &[0.0, 1.0]).unwrap();
        let mut r = rng(5);
        for _ in 0..10 {
            let q = scalar.quadric_matrix(&mut r).unwrap();
            let eig = q.symmetric_eigen().eigenvalues;
            let signs: i32 = eig.iter().map(|&l| l.signum() as i32).sum();
            assert_eq!(signs.abs(), 4, "all eigenvalues share one sign");
        }
        assert!(PolynomialEnsemble::kostlan(3, 3).unwrap().quadric_matrix(&mut r).is_err());
    }

    /// δ of a quadric mixture recovered from the jet of the sampled matrix:
    /// δ = E(∂_k f(q))² / E f(q)² with f = xᵀQx, so ∂_k f(q) = 2 Q_{0k}.
    #[test]
    fn quadric_matrix_parameter() {
        let e = PolynomialEnsemble::mixture(3, 2, &[1.0, 1.0]).unwrap(); // δ = 1
        let settings = McSettings::new(150_000, 31);
        let outcome = run_mc(&settings, 0, 2, |rng, out| {
            let q = e.quadric_matrix(rng).unwrap();
            let g = 2.0 * q[(0, 1)];
            out[0] = g * g;
            out[1] = q[(0, 0)] * q[(0, 0)];
            true
        });
        let ratios: Vec<f64> = outcome.batches.iter().map(|b| b.sums[0] / b.sums[1]).collect();
        let b = ratios.len() as f64;
        let mean = ratios.iter().sum::<f64>() / b;
        let var = ratios.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (b - 1.0);
        let se = (var / b).sqrt();
        assert!((mean - 1.0).abs() <= 3.0 * se, "mean {mean} se {se}");
    }
}
