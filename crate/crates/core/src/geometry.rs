//! Geometry of rectangular Gaussian matrices: Gram-Schmidt frames,
//! parallelepiped volumes, Moore-Penrose inverses, and the closed-form
//! moments behind them.
//!
//! Conventions: `A` is s×n with rows `A_1..A_s`; `A_m^⊥` is the component of
//! `A_m` orthogonal to the span of the earlier rows (its Gram-Schmidt
//! residual), so `vol(A_1..A_m) = vol(A_1..A_{m-1}) ‖A_m^⊥‖`. The frame
//! `(N_1..N_s)` is produced by classical Gram-Schmidt *in row order*; the
//! order matters for the distributional identities, so a QR factorization is
//! not a drop-in replacement.

use crate::error::{LabError, Result};
use crate::special::{gaussian_abs_moment, sphere_volume};
use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_distr::StandardNormal;

/// Relative residual below which a row counts as dependent on its
/// predecessors. Exactly rank-deficient inputs occur with probability zero
/// but show up in floating point.
pub const RANK_TOLERANCE: f64 = 1e-10;

/// An s×n matrix with independent standard Gaussian entries.
pub fn sample_gaussian_matrix(s: usize, n: usize, rng: &mut impl Rng) -> DMatrix<f64> {
    DMatrix::from_fn(s, n, |_, _| rng.sample(StandardNormal))
}

/// Uniform point on `S^{dim-1}`, drawn as a normalized Gaussian vector.
pub fn uniform_unit_vector(dim: usize, rng: &mut impl Rng) -> DVector<f64> {
    loop {
        let v = DVector::from_fn(dim, |_, _| rng.sample::<f64, _>(StandardNormal));
        let norm = v.norm();
        if norm > 1e-100 {
            return v / norm;
        }
    }
}

/// Classical Gram-Schmidt over the rows, one reorthogonalization pass.
/// Returns the orthonormal rows and the residual norms per row; `None` norms
/// are never produced — a residual below tolerance yields `Err`.
fn gram_schmidt_rows(a: &DMatrix<f64>) -> Result<(DMatrix<f64>, Vec<f64>)> {
    let (s, n) = (a.nrows(), a.ncols());
    let mut frame = DMatrix::zeros(s, n);
    let mut residuals = Vec::with_capacity(s);
    for i in 0..s {
        let row = a.row(i).transpose();
        let mut v = row.clone();
        for _ in 0..2 {
            for k in 0..i {
                let nk = frame.row(k).transpose();
                let coeff = v.dot(&nk);
                v -= nk * coeff;
            }
        }
        let norm = v.norm();
        if norm <= RANK_TOLERANCE * row.norm().max(f64::MIN_POSITIVE) {
            return Err(LabError::RankDeficient(format!(
                "row {i} is dependent on its predecessors (residual {norm:.3e})"
            )));
        }
        residuals.push(norm);
        frame.row_mut(i).copy_from(&(v / norm).transpose());
    }
    Ok((frame, residuals))
}

/// Orthonormal frame `(N_1..N_s)` spanning the row space, produced by
/// classical Gram-Schmidt in row order.
pub fn frame(a: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    Ok(gram_schmidt_rows(a)?.0)
}

/// Residual norms `‖A_m^⊥‖` of each row against its predecessors; their
/// partial products are the parallelepiped volumes.
pub fn row_residual_norms(a: &DMatrix<f64>) -> Result<Vec<f64>> {
    Ok(gram_schmidt_rows(a)?.1)
}

/// Volume of the parallelepiped spanned by the first `m` rows, computed as
/// the product of Gram-Schmidt residual norms. Dependent rows give 0.
pub fn gram_volume(a: &DMatrix<f64>, m: usize) -> f64 {
    assert!(m >= 1 && m <= a.nrows(), "need 1 <= m <= row count");
    let n = a.ncols();
    let mut frame = DMatrix::zeros(m, n);
    let mut product = 1.0;
    for i in 0..m {
        let row = a.row(i).transpose();
        let mut v = row.clone();
        for _ in 0..2 {
            for k in 0..i {
                let nk = frame.row(k).transpose();
                let coeff = v.dot(&nk);
                v -= nk * coeff;
            }
        }
        let norm = v.norm();
        product *= norm;
        if norm <= RANK_TOLERANCE * row.norm().max(f64::MIN_POSITIVE) {
            return 0.0;
        }
        frame.row_mut(i).copy_from(&(v / norm).transpose());
    }
    product
}

/// Gram matrix `A Aᵀ` solved by Cholesky; shared by the Moore-Penrose paths.
fn gram_solve(a: &DMatrix<f64>, rhs: &DVector<f64>) -> Result<DVector<f64>> {
    let gram = a * a.transpose();
    // Condition check on the tiny s×s Gram matrix.
    let eigen = gram.clone().symmetric_eigen();
    let max = eigen.eigenvalues.max();
    let min = eigen.eigenvalues.min();
    if !(min > 0.0) || max / min > 1e12 {
        return Err(LabError::RankDeficient(format!(
            "Gram matrix condition {:.3e} exceeds tolerance",
            max / min
        )));
    }
    let chol = gram
        .cholesky()
        .ok_or_else(|| LabError::RankDeficient("Gram matrix is not positive definite".into()))?;
    Ok(chol.solve(rhs))
}

/// Apply the transpose of the Moore-Penrose inverse `A† = Aᵀ(AAᵀ)^{-1}` to a
/// vector `y` of the row space: returns `v = (A†)ᵀ y = (AAᵀ)^{-1} A y`,
/// the unique coefficient vector with `Aᵀ v = y`.
pub fn moore_penrose_transpose_apply(a: &DMatrix<f64>, y: &DVector<f64>) -> Result<DVector<f64>> {
    gram_solve(a, &(a * y))
}

/// Full Moore-Penrose inverse `A† = Aᵀ(AAᵀ)^{-1}` of a full-rank s×n matrix.
pub fn pseudo_inverse(a: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let gram = a * a.transpose();
    let chol = gram
        .cholesky()
        .ok_or_else(|| LabError::RankDeficient("Gram matrix is not positive definite".into()))?;
    Ok(a.transpose() * chol.inverse())
}

/// Orthonormal basis of `ker A` as columns, completing the row-space frame
/// greedily from the standard basis.
pub fn kernel_basis(a: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let (s, n) = (a.nrows(), a.ncols());
    let frame = frame(a)?;
    let mut basis = DMatrix::zeros(n, n - s);
    let mut accepted = 0usize;
    for j in 0..n {
        if accepted == n - s {
            break;
        }
        let mut v = DVector::zeros(n);
        v[j] = 1.0;
        for _ in 0..2 {
            for k in 0..s {
                let nk = frame.row(k).transpose();
                let coeff = v.dot(&nk);
                v -= nk * coeff;
            }
            for k in 0..accepted {
                let bk = basis.column(k).clone_owned();
                let coeff = v.dot(&bk);
                v -= bk * coeff;
            }
        }
        let norm = v.norm();
        if norm > 1e-6 {
            basis.column_mut(accepted).copy_from(&(v / norm));
            accepted += 1;
        }
    }
    if accepted != n - s {
        return Err(LabError::RankDeficient(
            "could not complete the tangent basis from standard vectors".into(),
        ));
    }
    Ok(basis)
}

/// Closed form for `E[vol(A_1..A_{m-1}) ‖A_m^⊥‖^{1-2j}]` over an s×n standard
/// Gaussian matrix: `O_{n-m} γ_n γ_{n-m+1-2j} / (2 (2π)^{(n-m)/2} γ_{n-m+1})`.
pub fn expected_vol_inverse_power(n: u32, m: u32, j: u32) -> Result<f64> {
    if m < 1 || m > n {
        return Err(LabError::Domain(format!("need 1 <= m <= n, got n={n}, m={m}")));
    }
    if 2 * j > n - m {
        return Err(LabError::Domain(format!(
            "need 0 <= j <= (n-m)/2, got j={j} with n-m={}",
            n - m
        )));
    }
    let two_pi = 2.0 * std::f64::consts::PI;
    Ok(sphere_volume(n - m) * gaussian_abs_moment(n) * gaussian_abs_moment(n - m + 1 - 2 * j)
        / (2.0 * two_pi.powf((n - m) as f64 / 2.0) * gaussian_abs_moment(n - m + 1)))
}

/// One draw of a (scalar, s-vector) pair from either pipeline of the
/// distributional identity.
#[derive(Debug, Clone)]
pub struct PipelineSample {
    pub scalar: f64,
    pub vector: DVector<f64>,
}

/// Paired draws from the two constructions that share one law:
///
/// * left: `(√det(AAᵀ), (A†)ᵀ Q_A(u))` with `u` uniform on `S^{s-1}`,
/// * right: `(vol(A_1..A_{s-1}) ‖A_s^⊥‖, w / ‖A_s^⊥‖)` with `w` uniform,
///
/// each from its own independent Gaussian matrix.
#[derive(Debug, Clone)]
pub struct HeurekaDraw {
    pub left: PipelineSample,
    pub right: PipelineSample,
    /// Rank-deficient draws that were redrawn.
    pub resampled: u64,
}

pub fn heureka_pipelines(n: u32, s: u32, rng: &mut impl Rng) -> Result<HeurekaDraw> {
    if s < 1 || s > n {
        return Err(LabError::Dimension(format!("need 1 <= s <= n, got n={n}, s={s}")));
    }
    let (s, n) = (s as usize, n as usize);
    let mut resampled = 0u64;
    let left = loop {
        let a = sample_gaussian_matrix(s, n, rng);
        let u = uniform_unit_vector(s, rng);
        let attempt = (|| -> Result<PipelineSample> {
            let (frame, residuals) = gram_schmidt_rows(&a)?;
            let y = frame.transpose() * &u; // Q_A(u)
            let vector = moore_penrose_transpose_apply(&a, &y)?;
            Ok(PipelineSample { scalar: residuals.iter().product(), vector })
        })();
        match attempt {
            Ok(sample) => break sample,
            Err(_) => resampled += 1,
        }
        assert!(resampled < 10_000, "persistent rank deficiency in pipeline");
    };
    let right = loop {
        let a = sample_gaussian_matrix(s, n, rng);
        let w = uniform_unit_vector(s, rng);
        match gram_schmidt_rows(&a) {
            Ok((_, residuals)) => {
                let partial: f64 = residuals[..s - 1].iter().product();
                let last = residuals[s - 1];
                break PipelineSample { scalar: partial * last, vector: w / last };
            }
            Err(_) => resampled += 1,
        }
        assert!(resampled < 10_000, "persistent rank deficiency in pipeline");
    };
    Ok(HeurekaDraw { left, right, resampled })
}
