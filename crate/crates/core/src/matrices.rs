//! Orthogonally invariant Gaussian ensembles of symmetric matrices.
//!
//! Every centered invariant Gaussian law on symmetric n×n matrices is of the
//! form `W = r Z I_n + s T` with independent `Z ~ N(0,1)` and a GOE-like `T`
//! (independent entries, off-diagonal variance 1, diagonal variance 2).
//! The single scalar
//! `δ(W) = (E(tr W)^2 - E‖W‖_F^2) / (n(n-1))`
//! equals `r^2 - s^2` and controls the expected characteristic polynomial:
//! `E det(I + W) = Σ_j binom(n,2j) γ_{2j} δ^j`, a polynomial in δ that is
//! also meaningful for δ < 0.

use crate::error::{LabError, Result};
use crate::special::gaussian_abs_moment;
use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::StandardNormal;

/// Invariant Gaussian law `W = r Z I_n + s_off T` on symmetric n×n matrices.
///
/// Off-diagonal entries have variance `s_off^2`, diagonal entries variance
/// `r^2 + 2 s_off^2`, and distinct diagonal entries covariance `r^2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymmetricEnsemble {
    pub n: u32,
    pub r: f64,
    pub s_off: f64,
}

impl SymmetricEnsemble {
    pub fn new(n: u32, r: f64, s_off: f64) -> Result<Self> {
        if n < 2 {
            return Err(LabError::Dimension(format!("ensemble needs n >= 2, got {n}")));
        }
        if r < 0.0 || s_off < 0.0 {
            return Err(LabError::Domain("scales r and s_off must be nonnegative".into()));
        }
        Ok(SymmetricEnsemble { n, r, s_off })
    }

    /// Canonical representative of parameter δ: `(r, s_off) = (√δ, 0)` for
    /// δ >= 0 and `(0, √-δ)` for δ < 0. Any representative verifies the
    /// determinant identity, which depends on δ alone.
    pub fn from_delta(n: u32, delta: f64) -> Result<Self> {
        if delta >= 0.0 {
            Self::new(n, delta.sqrt(), 0.0)
        } else {
            Self::new(n, 0.0, (-delta).sqrt())
        }
    }

    /// Parameter `δ(W) = r^2 - s_off^2`; may be negative.
    pub fn delta(&self) -> f64 {
        self.r * self.r - self.s_off * self.s_off
    }

    /// Draw one matrix `r Z I + s_off T`.
    pub fn sample(&self, rng: &mut impl Rng) -> DMatrix<f64> {
        let n = self.n as usize;
        let z: f64 = rng.sample(StandardNormal);
        let mut w = DMatrix::zeros(n, n);
        for i in 0..n {
            let diag: f64 = rng.sample(StandardNormal);
            w[(i, i)] = self.r * z + self.s_off * 2f64.sqrt() * diag;
            for j in (i + 1)..n {
                let t: f64 = rng.sample(StandardNormal);
                w[(i, j)] = self.s_off * t;
                w[(j, i)] = w[(i, j)];
            }
        }
        w
    }
}

/// Sample a GOE-like matrix alone: independent entries, `T_ij ~ N(0,1)` for
/// i != j and `T_ii ~ N(0,2)`.
pub fn sample_goe_like(n: u32, rng: &mut impl Rng) -> DMatrix<f64> {
    SymmetricEnsemble { n, r: 0.0, s_off: 1.0 }.sample(rng)
}

/// Plug-in estimator of `δ(W)` from a sample of matrices: sample means of
/// `(tr W)^2` and `‖W‖_F^2` substituted into the defining ratio.
pub fn parameter_empirical(samples: &[DMatrix<f64>]) -> Result<f64> {
    let first = samples
        .first()
        .ok_or_else(|| LabError::Dimension("need at least 2 samples".into()))?;
    let n = first.nrows();
    if samples.len() < 2 || n < 2 {
        return Err(LabError::Dimension("need >= 2 samples of size n >= 2".into()));
    }
    let mut tr2 = 0.0;
    let mut frob2 = 0.0;
    for w in samples {
        if w.nrows() != n || w.ncols() != n {
            return Err(LabError::Dimension("samples have mixed dimensions".into()));
        }
        let tr = w.trace();
        tr2 += tr * tr;
        frob2 += w.iter().map(|x| x * x).sum::<f64>();
    }
    let count = samples.len() as f64;
    Ok((tr2 / count - frob2 / count) / (n as f64 * (n as f64 - 1.0)))
}

/// Parameter estimate from accumulated moments rather than stored samples.
pub fn parameter_from_moments(n: u32, mean_tr_sq: f64, mean_frob_sq: f64) -> f64 {
    (mean_tr_sq - mean_frob_sq) / (n as f64 * (n as f64 - 1.0))
}

/// Closed form `E det(I_n + W) = Σ_{j=0}^{⌊n/2⌋} binom(n,2j) γ_{2j} δ^j`
/// for an invariant ensemble of parameter δ. Being a polynomial in δ, the
/// right-hand side is well-defined for δ < 0 as well.
pub fn expected_det_identity(n: u32, delta: f64) -> f64 {
    let mut total = 0.0;
    for j in 0..=(n / 2) {
        total += binomial(n, 2 * j) * gaussian_abs_moment(2 * j) * delta.powi(j as i32);
    }
    total
}

fn binomial(n: u32, k: u32) -> f64 {
    let mut b = 1.0;
    for i in 0..k {
        b = b * (n - i) as f64 / (i + 1) as f64;
    }
    b
}

/// Joint law of a scalar `u` and an invariant symmetric matrix `W`,
/// described by the moments that conditioning needs.
#[derive(Debug, Clone, Copy)]
pub struct LinearCoupling {
    pub n: u32,
    /// `E u^2 > 0`.
    pub var_u: f64,
    /// `δ(W)`.
    pub delta_w: f64,
    /// Cross moment `E(u tr W)`.
    pub cross: f64,
}

/// Result of conditioning `W` on `u = 0`.
#[derive(Debug, Clone, Copy)]
pub struct ConditionedEnsemble {
    /// Canonical ensemble with the conditioned parameter.
    pub ensemble: SymmetricEnsemble,
    /// `δ(W_c) = δ(W) - (E(u tr W))^2 / (n^2 E u^2)`.
    pub delta: f64,
    /// Regression coefficient: `W_c` has the law of `W - λ u I` with
    /// `λ = E(u tr W) / (n E u^2)`.
    pub lambda: f64,
}

/// Condition an invariant `(u, W)` pair on `u = 0` by Gaussian regression.
pub fn condition_on_linear(coupling: &LinearCoupling) -> Result<ConditionedEnsemble> {
    if !(coupling.var_u > 0.0) {
        return Err(LabError::Domain("conditioning requires E u^2 > 0".into()));
    }
    let n = coupling.n as f64;
    let lambda = coupling.cross / (n * coupling.var_u);
    let delta = coupling.delta_w - coupling.cross * coupling.cross / (n * n * coupling.var_u);
    Ok(ConditionedEnsemble { ensemble: SymmetricEnsemble::from_delta(coupling.n, delta)?, delta, lambda })
}

/// `det` via LU with partial pivoting; matrices here are tiny (n <= 16).
pub fn determinant(w: &DMatrix<f64>) -> f64 {
    w.clone().lu().determinant()
}
