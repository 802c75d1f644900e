//! Euler characteristic of random projective quadrics via eigenvalue
//! signatures.
//!
//! A degree-2 form `x ↦ xᵀQx` with signature `(p, n+1-p)` has projective
//! zero set diffeomorphic to `(S^{p-1} × S^{n-p}) / ±`, so
//! `χ = χ(S^{p-1}) χ(S^{n-p}) / 2` — a classical topological census used
//! here as an oracle that never touches curvature machinery. For odd n the
//! mean χ is the partial sum `χ_{(n-1)/2}(δ)` of the hypersurface series.

use crate::ensembles::PolynomialEnsemble;
use crate::error::{LabError, Result};
use crate::estimators::ensemble_label;
use crate::mc::{run_mc, EstimateRecord, McSettings};
use crate::series::expected_euler_hypersurface_series;

/// χ of a real projective quadric with `p` positive and `q` negative
/// eigenvalues: 0 when definite (empty zero set), else
/// `χ(S^{p-1}) χ(S^{q-1}) / 2` with `χ(S^k) = 2` for even k and 0 for odd k.
pub fn quadric_euler_from_signature(p: u32, q: u32) -> f64 {
    if p == 0 || q == 0 {
        return 0.0;
    }
    let chi_sphere = |k: u32| if k % 2 == 0 { 2.0 } else { 0.0 };
    chi_sphere(p - 1) * chi_sphere(q - 1) / 2.0
}

pub fn estimate_quadric_euler(
    e: &PolynomialEnsemble,
    settings: &McSettings,
) -> Result<EstimateRecord> {
    let n = e.ambient_dim();
    if e.degree() != 2 {
        return Err(LabError::Domain(format!("quadric experiment needs d = 2, got {}", e.degree())));
    }
    if n % 2 == 0 {
        return Err(LabError::Domain(format!(
            "quadric experiment needs odd n (even-dimensional hypersurface), got {n}"
        )));
    }
    if n + 1 > 12 {
        return Err(LabError::Unsupported(format!("signature census capped at n+1 <= 12, got {n}")));
    }
    let outcome = run_mc(settings, 0, 1, |rng, out| {
        let q = e.quadric_matrix(rng).expect("degree checked above");
        let eigenvalues = q.symmetric_eigen().eigenvalues;
        let scale = eigenvalues.iter().fold(0.0f64, |m, l| m.max(l.abs()));
        if eigenvalues.iter().any(|l| l.abs() <= 1e-10 * scale) {
            return false; // singular quadric: measure-zero, resample
        }
        let pos = eigenvalues.iter().filter(|&&l| l > 0.0).count() as u32;
        out[0] = quadric_euler_from_signature(pos, n + 1 - pos);
        true
    });
    let ell = (n - 1) / 2;
    let target = *expected_euler_hypersurface_series(e.delta(), ell)?
        .last()
        .expect("series is nonempty");
    Ok(EstimateRecord::from_outcome(
        "quadric_euler",
        format!("n={n} {}", ensemble_label(e)),
        settings.seed,
        target,
        &outcome,
        0,
    ))
}
