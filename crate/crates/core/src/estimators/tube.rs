//! Monte Carlo tube volumes around coordinate subspheres of `S^n`.
//!
//! A uniform point `x ∈ S^n` lies within distance α of the subsphere
//! `S^{n-k}` (the locus with the last k coordinates zero) exactly when the
//! norm of its tail-k coordinates is at most sin α. The estimated tube
//! volume `O_n P(dist <= α)` is compared with the closed form
//! `O_{n-k} O_{k-1} J_{n,k}(α)`.

use crate::error::{LabError, Result};
use crate::geometry::uniform_unit_vector;
use crate::mc::{run_mc, EstimateRecord, McSettings};
use crate::special::{sphere_volume, tube_integral};

pub fn estimate_tube_volume_subsphere(
    n: u32,
    k: u32,
    alpha: f64,
    settings: &McSettings,
) -> Result<EstimateRecord> {
    if k < 1 || k > n {
        return Err(LabError::Domain(format!("need 1 <= k <= n, got n={n}, k={k}")));
    }
    if !(0.0 < alpha && alpha < std::f64::consts::FRAC_PI_2) {
        return Err(LabError::Domain(format!("need 0 < alpha < pi/2, got {alpha}")));
    }
    let total = sphere_volume(n);
    let sin_alpha = alpha.sin();
    let dim = n as usize + 1;
    let tail = k as usize;
    let outcome = run_mc(settings, 0, 1, |rng, out| {
        let x = uniform_unit_vector(dim, rng);
        let tail_norm2: f64 = x.iter().rev().take(tail).map(|c| c * c).sum();
        out[0] = if tail_norm2.sqrt() <= sin_alpha { total } else { 0.0 };
        true
    });
    let target = sphere_volume(n - k) * sphere_volume(k - 1) * tube_integral(n, k, alpha)?;
    Ok(EstimateRecord::from_outcome(
        "tube_subsphere",
        format!("n={n} k={k} alpha={alpha}"),
        settings.seed,
        target,
        &outcome,
        0,
    ))
}
