//! Monte Carlo verification battery for the random-matrix identities:
//! expected determinants, Gaussian volume moments, the two-pipeline
//! distributional identity, and jet conditioning.

use crate::ensembles::PolynomialEnsemble;
use crate::error::Result;
use crate::geometry::{
    expected_vol_inverse_power, heureka_pipelines, row_residual_norms, sample_gaussian_matrix,
};
use crate::matrices::{
    determinant, expected_det_identity, parameter_from_moments, sample_goe_like, SymmetricEnsemble,
};
use crate::mc::{run_mc, EstimateRecord, McOutcome, McSettings};
use crate::special::gaussian_abs_moment;
use nalgebra::DMatrix;

const EXPERIMENT: &str = "matrix_identities";

fn record_from_summary(
    params: String,
    seed: u64,
    target: f64,
    outcome: &McOutcome,
    summary: (f64, f64),
) -> EstimateRecord {
    let (mean, std_error) = summary;
    let z_score = if std_error > 0.0 { (mean - target) / std_error } else { 0.0 };
    EstimateRecord {
        experiment: EXPERIMENT.into(),
        params,
        samples: outcome.samples,
        mean,
        std_error,
        target,
        z_score,
        discarded: outcome.discarded,
        seed,
        no_error_bar: false,
    }
}

/// `E det(I + W)` over representatives `(r, s_off) = (√(δ+1), 1)`, which mix
/// a genuine GOE-like part into every cell, including the negative-δ ones.
pub fn expected_det_records(settings: &McSettings) -> Result<Vec<EstimateRecord>> {
    let mut records = Vec::new();
    let mut substream = 0u64;
    for n in 2..=8u32 {
        for &delta in &[-1.0f64, 0.0, 1.0, 3.0] {
            let ensemble = SymmetricEnsemble::new(n, (delta + 1.0).sqrt(), 1.0)?;
            let outcome = run_mc(settings, substream, 1, |rng, out| {
                let w = ensemble.sample(rng);
                out[0] = determinant(&(DMatrix::identity(n as usize, n as usize) + w));
                true
            });
            records.push(record_from_summary(
                format!("E det(I+W): n={n} delta={delta} (r={:.4}, s={:.4})", ensemble.r, ensemble.s_off),
                settings.seed,
                expected_det_identity(n, delta),
                &outcome,
                outcome.summarize(0),
            ));
            substream += 1;
        }
    }
    Ok(records)
}

/// `E det T = (-1)^m γ_{2m}` for even n = 2m, and 0 for odd n.
pub fn goe_det_records(settings: &McSettings) -> Vec<EstimateRecord> {
    let mut records = Vec::new();
    for (idx, n) in (2..=6u32).enumerate() {
        let outcome = run_mc(settings, 100 + idx as u64, 1, |rng, out| {
            out[0] = determinant(&sample_goe_like(n, rng));
            true
        });
        let target = if n % 2 == 0 {
            let m = n / 2;
            (if m % 2 == 0 { 1.0 } else { -1.0 }) * gaussian_abs_moment(2 * m)
        } else {
            0.0
        };
        records.push(record_from_summary(
            format!("E det T: n={n}"),
            settings.seed,
            target,
            &outcome,
            outcome.summarize(0),
        ));
    }
    records
}

/// `E[vol(A_1..A_{m-1}) ‖A_m^⊥‖^{1-2j}]` against its closed form.
pub fn volume_moment_records(settings: &McSettings) -> Result<Vec<EstimateRecord>> {
    let grid: &[(u32, u32, u32)] = &[(3, 1, 0), (3, 2, 0), (4, 2, 0), (4, 2, 1), (5, 3, 0), (6, 3, 1)];
    let mut records = Vec::new();
    for (idx, &(n, m, j)) in grid.iter().enumerate() {
        let outcome = run_mc(settings, 200 + idx as u64, 1, |rng, out| {
            let a = sample_gaussian_matrix(m as usize, n as usize, rng);
            match row_residual_norms(&a) {
                Ok(res) => {
                    let partial: f64 = res[..(m - 1) as usize].iter().product();
                    out[0] = partial * res[(m - 1) as usize].powi(1 - 2 * j as i32);
                    true
                }
                Err(_) => false,
            }
        });
        records.push(record_from_summary(
            format!("E vol_{}(A) power: n={n} m={m} j={j}", m - 1),
            settings.seed,
            expected_vol_inverse_power(n, m, j)?,
            &outcome,
            outcome.summarize(0),
        ));
    }
    Ok(records)
}

/// Paired-moment equality of the two pipeline constructions. Differences of
/// per-draw statistics are tested against zero; moments of `‖V‖` alone enter
/// only where their variance is finite (`2p < n-s+1`).
pub fn heureka_records(settings: &McSettings) -> Vec<EstimateRecord> {
    let grid: &[(u32, u32)] = &[(3, 2), (4, 2), (4, 3)];
    let mut records = Vec::new();
    for (idx, &(n, s)) in grid.iter().enumerate() {
        let su = s as usize;
        let compare_norm = 2 < n - s + 1; // first moment of ‖V‖ has finite variance
        let n_stats = 4 + su + usize::from(compare_norm);
        let outcome = run_mc(settings, 300 + idx as u64 * 8, n_stats, |rng, out| {
            match heureka_pipelines(n, s, rng) {
                Ok(draw) => {
                    let (l, r) = (&draw.left, &draw.right);
                    out[0] = l.scalar; // absolute check
                    out[1] = l.scalar - r.scalar;
                    out[2] = l.scalar * l.scalar - r.scalar * r.scalar;
                    out[3] = l.scalar * l.vector.norm() - r.scalar * r.vector.norm();
                    for i in 0..su {
                        out[4 + i] = l.vector[i] - r.vector[i];
                    }
                    if compare_norm {
                        out[4 + su] = l.vector.norm() - r.vector.norm();
                    }
                    true
                }
                Err(_) => false,
            }
        });
        let scalar_target = gaussian_abs_moment(n) / gaussian_abs_moment(n - s);
        records.push(record_from_summary(
            format!("pipelines n={n} s={s}: E[scalar]"),
            settings.seed,
            scalar_target,
            &outcome,
            outcome.summarize(0),
        ));
        let mut diff_names = vec![
            "diff E[scalar]".to_string(),
            "diff E[scalar^2]".to_string(),
            "diff E[scalar*|V|]".to_string(),
        ];
        for i in 0..su {
            diff_names.push(format!("diff E[V_{i}]"));
        }
        if compare_norm {
            diff_names.push("diff E[|V|]".to_string());
        }
        for (stat, name) in diff_names.into_iter().enumerate() {
            records.push(record_from_summary(
                format!("pipelines n={n} s={s}: {name}"),
                settings.seed,
                0.0,
                &outcome,
                outcome.summarize(stat + 1),
            ));
        }
    }
    records
}

/// Jet-conditioning identities: `δ̂(D²f(q) | f(q)=0) = d(1-d)` for Kostlan
/// laws, and `E(f(q) tr D²f(q)) = -n δ` unconditioned.
pub fn conditioning_records(settings: &McSettings) -> Result<Vec<EstimateRecord>> {
    let n = 3u32;
    let mut records = Vec::new();
    for (idx, &d) in [2u32, 3].iter().enumerate() {
        let e = PolynomialEnsemble::kostlan(n, d)?;
        let outcome = run_mc(settings, 400 + idx as u64, 2, |rng, out| {
            let jet = e.sample_jet(true, rng);
            let tr = jet.hessian.trace();
            out[0] = tr * tr;
            out[1] = jet.hessian.iter().map(|x| x * x).sum::<f64>();
            true
        });
        let summary = outcome.summarize_with(|b| {
            parameter_from_moments(n, b.sums[0] / b.count as f64, b.sums[1] / b.count as f64)
        });
        records.push(record_from_summary(
            format!("conditioned Hessian parameter: n={n} kostlan(d={d})"),
            settings.seed,
            (d as f64) * (1.0 - d as f64),
            &outcome,
            summary,
        ));
    }
    for (idx, &d) in [2u32, 3].iter().enumerate() {
        let e = PolynomialEnsemble::kostlan(n, d)?;
        let outcome = run_mc(settings, 420 + idx as u64, 1, |rng, out| {
            let jet = e.sample_jet(false, rng);
            out[0] = jet.value * jet.hessian.trace();
            true
        });
        records.push(record_from_summary(
            format!("value-trace cross moment: n={n} kostlan(d={d})"),
            settings.seed,
            -(n as f64) * d as f64,
            &outcome,
            outcome.summarize(0),
        ));
    }
    Ok(records)
}

/// The whole battery, in report order.
pub fn run_matrix_identities(settings: &McSettings) -> Result<Vec<EstimateRecord>> {
    let mut records = expected_det_records(settings)?;
    records.extend(goe_det_records(settings));
    records.extend(volume_moment_records(settings)?);
    records.extend(heureka_records(settings));
    records.extend(conditioning_records(settings)?);
    Ok(records)
}
