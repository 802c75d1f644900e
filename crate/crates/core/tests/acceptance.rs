//! Acceptance suite: every closed-form expectation the library claims is
//! verified here at its stated tolerance, one criterion per test, with one
//! printed pass/fail line per checked quantity (run with --nocapture to see
//! them). Sampled criteria use fixed seeds and are fully deterministic.

use varlab_core::ensembles::PolynomialEnsemble;
use varlab_core::estimators::algebra_checks::{run_algebra_identities, EXACT_TOLERANCE};
use varlab_core::estimators::crofton::estimate_crofton_volume;
use varlab_core::estimators::matrix_checks::{
    conditioning_records, expected_det_records, goe_det_records, heureka_records,
    volume_moment_records,
};
use varlab_core::estimators::quadric::estimate_quadric_euler;
use varlab_core::estimators::rice::estimate_rice_curvature;
use varlab_core::estimators::tube::estimate_tube_volume_subsphere;
use varlab_core::estimators::univariate::estimate_univariate_roots;
use varlab_core::mc::{EstimateRecord, McSettings};

struct Criterion {
    id: &'static str,
    failures: Vec<String>,
}

impl Criterion {
    fn new(id: &'static str) -> Self {
        Criterion { id, failures: Vec::new() }
    }

    /// Check one record against a |z| threshold (exact records against the
    /// absolute tolerance) and print its verdict line.
    fn check(&mut self, record: &EstimateRecord, z_limit: f64, exact_tol: f64) {
        let pass = record.passes(z_limit, exact_tol);
        let verdict = if pass { "PASS" } else { "FAIL" };
        let detail = if record.no_error_bar {
            format!("mean {:+.6} target {:+.6} (no error bar)", record.mean, record.target)
        } else if record.std_error > 0.0 {
            format!(
                "mean {:+.6} target {:+.6} z {:+.2}",
                record.mean, record.target, record.z_score
            )
        } else {
            format!("mean {:+.6} target {:+.6} exact", record.mean, record.target)
        };
        println!("[acceptance {}] {}: {} {}", self.id, record.params, detail, verdict);
        if !pass {
            self.failures.push(format!("{}: {}", record.params, detail));
        }
        // Degeneracies must stay measure-zero in every default experiment.
        if record.samples > 0 && (record.discarded as f64) >= 1e-3 * record.samples as f64 {
            let msg = format!(
                "{}: discarded {} of {} samples",
                record.params, record.discarded, record.samples
            );
            println!("[acceptance {}] {} FAIL", self.id, msg);
            self.failures.push(msg);
        }
    }

    fn finish(self) {
        assert!(self.failures.is_empty(), "criterion {} failed:\n{}", self.id, self.failures.join("\n"));
    }
}

/// Criterion 1: expected real-root counts of Kostlan binary forms are √d.
#[test]
fn criterion_01_univariate_kostlan_roots() {
    let mut crit = Criterion::new("1");
    for &d in &[2u32, 4, 9] {
        let start = std::time::Instant::now();
        let e = PolynomialEnsemble::kostlan(1, d).unwrap();
        let record = estimate_univariate_roots(&e, &McSettings::new(100_000, 1_001 + d as u64)).unwrap();
        assert!((record.target - (d as f64).sqrt()).abs() < 1e-15);
        crit.check(&record, 3.0, 1e-10);
        let elapsed = start.elapsed().as_secs_f64();
        assert!(elapsed < 30.0, "d={d} took {elapsed:.1}s (budget 30s)");
    }
    crit.finish();
}

/// Criterion 2: mixture ensembles with δ ∈ {2, 1, 1/2} have mean root count √δ.
#[test]
fn criterion_02_mixture_parameter_roots() {
    let mut crit = Criterion::new("2");
    for (betas, delta) in [(vec![1.0, 0.0], 2.0), (vec![1.0, 1.0], 1.0), (vec![1.0, 3.0], 0.5)] {
        let e = PolynomialEnsemble::mixture(1, 2, &betas).unwrap();
        assert!((e.delta() - delta).abs() < 1e-15);
        let record =
            estimate_univariate_roots(&e, &McSettings::new(100_000, 1_101 + (delta * 4.0) as u64))
                .unwrap();
        assert!((record.target - delta.sqrt()).abs() < 1e-15);
        crit.check(&record, 3.0, 1e-10);
    }
    crit.finish();
}

/// Criterion 3: section counts — lines through a cubic surface (√3) and
/// conic pairs in the plane (2).
#[test]
fn criterion_03_crofton_sections() {
    let mut crit = Criterion::new("3");
    let cubic = PolynomialEnsemble::kostlan(3, 3).unwrap();
    let record = estimate_crofton_volume(&[cubic], 3, &McSettings::new(100_000, 1_201)).unwrap();
    assert!((record.target - 3f64.sqrt()).abs() < 1e-15);
    crit.check(&record, 3.0, 1e-10);

    let conic = PolynomialEnsemble::kostlan(2, 2).unwrap();
    let record =
        estimate_crofton_volume(&[conic.clone(), conic], 2, &McSettings::new(100_000, 1_203))
            .unwrap();
    assert!((record.target - 2.0).abs() < 1e-12);
    crit.check(&record, 3.0, 1e-10);
    crit.finish();
}

/// Criterion 4: quadric Euler characteristics in P³ equal √δ(3-δ)/2.
#[test]
fn criterion_04_quadric_euler() {
    let mut crit = Criterion::new("4");
    for (betas, delta) in [(vec![1.0, 0.0], 2.0f64), (vec![1.0, 1.0], 1.0), (vec![1.0, 3.0], 0.5)] {
        let e = PolynomialEnsemble::mixture(3, 2, &betas).unwrap();
        let record =
            estimate_quadric_euler(&e, &McSettings::new(100_000, 1_301 + (delta * 4.0) as u64))
                .unwrap();
        let expected = delta.sqrt() * (3.0 - delta) / 2.0;
        assert!((record.target - expected).abs() < 1e-12);
        crit.check(&record, 3.0, 1e-10);
    }
    crit.finish();
}

/// Criterion 5: the curvature-coefficient grid. Every integrable E K_{s+2j}
/// matches the closed form within |z| <= 4 at 2·10^5 samples.
#[test]
fn criterion_05_rice_curvature_grid() {
    let mut crit = Criterion::new("5");
    let grid: &[(u32, u32)] = &[(2, 1), (3, 1), (4, 1), (3, 2), (4, 2)];
    let mut seed = 1_401u64;
    for &(n, s) in grid {
        for d in 1..=3u32 {
            let start = std::time::Instant::now();
            let ensembles: Vec<PolynomialEnsemble> =
                (0..s).map(|_| PolynomialEnsemble::kostlan(n, d).unwrap()).collect();
            let settings = McSettings::new(200_000, seed).with_batches(200);
            seed += 1;
            for record in estimate_rice_curvature(&ensembles, n, &settings).unwrap() {
                crit.check(&record, 4.0, 1e-10);
            }
            let elapsed = start.elapsed().as_secs_f64();
            assert!(elapsed < 180.0, "(n={n},s={s},d={d}) took {elapsed:.1}s (budget 180s)");
        }
    }
    // Mixed parameters (2, 1/2) at (n, s) = (4, 2): distinct-δ branch.
    let mixed = vec![
        PolynomialEnsemble::kostlan(4, 2).unwrap(),
        PolynomialEnsemble::mixture(4, 2, &[1.0, 3.0]).unwrap(),
    ];
    let settings = McSettings::new(200_000, 1_499).with_batches(200);
    for record in estimate_rice_curvature(&mixed, 4, &settings).unwrap() {
        crit.check(&record, 4.0, 1e-10);
    }
    crit.finish();
}

/// Criterion 6: random-matrix identities — expected determinants over an
/// (n, δ) grid including δ < 0, pure GOE-like determinants, Gaussian volume
/// moments, and the two-pipeline moment equality.
#[test]
fn criterion_06_matrix_identities() {
    let mut crit = Criterion::new("6");
    let settings = McSettings::new(100_000, 1_501);
    for record in expected_det_records(&settings).unwrap() {
        crit.check(&record, 4.0, 1e-10);
    }
    for record in goe_det_records(&settings) {
        crit.check(&record, 4.0, 1e-10);
    }
    for record in volume_moment_records(&settings).unwrap() {
        crit.check(&record, 4.0, 1e-10);
    }
    for record in heureka_records(&settings) {
        crit.check(&record, 3.0, 1e-10);
    }
    crit.finish();
}

/// Criterion 7: conditioning — δ̂ of conditioned Kostlan jets equals d(1-d)
/// and E(f(q) tr D²f(q)) = -nδ.
#[test]
fn criterion_07_jet_conditioning() {
    let mut crit = Criterion::new("7");
    for record in conditioning_records(&McSettings::new(100_000, 1_601)).unwrap() {
        crit.check(&record, 3.0, 1e-10);
    }
    crit.finish();
}

/// Criterion 8: the exact algebra suite at tolerance 1e-12, no sampling.
#[test]
fn criterion_08_exact_algebra() {
    let mut crit = Criterion::new("8");
    for record in run_algebra_identities().unwrap() {
        crit.check(&record, 0.0, EXACT_TOLERANCE);
    }
    crit.finish();
}

/// Criterion 9: tube volumes around coordinate subspheres across an
/// (n, k, α) grid.
#[test]
fn criterion_09_tube_volumes() {
    let mut crit = Criterion::new("9");
    let grid: &[(u32, u32, f64)] =
        &[(2, 1, 0.5), (3, 1, 1.0), (3, 2, 0.3), (4, 2, 0.7), (5, 3, 0.4)];
    for (idx, &(n, k, alpha)) in grid.iter().enumerate() {
        let record =
            estimate_tube_volume_subsphere(n, k, alpha, &McSettings::new(100_000, 1_701 + idx as u64))
                .unwrap();
        crit.check(&record, 3.0, 1e-10);
    }
    crit.finish();
}

/// Criterion 10: determinism — identical seed and settings give identical
/// records, and the records are independent of the worker count.
#[test]
fn criterion_10_determinism() {
    let e = PolynomialEnsemble::kostlan(1, 4).unwrap();
    let base = McSettings::new(20_000, 1_801);
    let r1 = estimate_univariate_roots(&e, &base).unwrap();
    let r2 = estimate_univariate_roots(&e, &base).unwrap();
    assert_eq!(r1, r2, "rerun with identical settings must be bit-identical");
    for workers in [1usize, 2, 4] {
        let r =
            estimate_univariate_roots(&e, &McSettings { workers: Some(workers), ..base }).unwrap();
        assert_eq!(r1, r, "records must not depend on worker count {workers}");
    }
    let system = vec![PolynomialEnsemble::kostlan(3, 2).unwrap()];
    let rice_base = McSettings::new(10_000, 1_803).with_batches(100);
    let a = estimate_rice_curvature(&system, 3, &rice_base).unwrap();
    let b = estimate_rice_curvature(
        &system,
        3,
        &McSettings { workers: Some(3), ..rice_base },
    )
    .unwrap();
    assert_eq!(a, b);
    println!("[acceptance 10] determinism across reruns and worker counts PASS");
}
