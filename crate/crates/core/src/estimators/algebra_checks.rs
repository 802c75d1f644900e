//! Deterministic identity suite: every record reports the worst residual of
//! an exact algebraic identity, with target 0 and no sampling.

use crate::error::Result;
use crate::mc::EstimateRecord;
use crate::series::{
    euler_characteristic, expected_curvature_polynomial, expected_euler_hypersurface_series,
    kinematic_product, mu_from_tube, tube_from_mu, CurvaturePolynomial, Space, TubeCoefficients,
};
use crate::special::{gaussian_abs_moment, series_coefficient, sphere_volume};
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Tolerance the deterministic records are expected to meet.
pub const EXACT_TOLERANCE: f64 = 1e-12;

const EXPERIMENT: &str = "algebra_identities";

fn residual_record(name: &str, residual: f64) -> EstimateRecord {
    EstimateRecord::exact(EXPERIMENT, name.to_string(), residual, 0.0)
}

/// `O_n γ_n = 2 (2π)^{n/2}` for n ≤ 20, as a max relative residual.
fn sphere_moment_identity() -> EstimateRecord {
    let mut worst = 0.0f64;
    for n in 1..=20u32 {
        let lhs = sphere_volume(n) * gaussian_abs_moment(n);
        let rhs = 2.0 * (2.0 * std::f64::consts::PI).powf(n as f64 / 2.0);
        worst = worst.max(((lhs - rhs) / rhs).abs());
    }
    residual_record("O_n gamma_n = 2 (2pi)^{n/2}, n <= 20", worst)
}

/// The coefficient sequence of `(1-Y)^{-s/2}` is the s-fold convolution of
/// the square-root sequence; checked in exact rational arithmetic.
fn convolution_identity() -> EstimateRecord {
    let max_k = 12usize;
    let mut worst = BigRational::zero();
    for s in 1..=5u32 {
        let mut conv = vec![BigRational::zero(); max_k + 1];
        conv[0] = BigRational::one();
        for _ in 0..s {
            let mut next = vec![BigRational::zero(); max_k + 1];
            for i in 0..=max_k {
                if conv[i].is_zero() {
                    continue;
                }
                for j in 0..=(max_k - i) {
                    next[i + j] += conv[i].clone() * series_coefficient(1, j as u32).unwrap();
                }
            }
            conv = next;
        }
        for (k, c) in conv.iter().enumerate() {
            let diff = c - series_coefficient(s, k as u32).unwrap();
            let abs = if diff < BigRational::zero() { -diff } else { diff };
            if abs > worst {
                worst = abs;
            }
        }
    }
    use num_traits::ToPrimitive;
    residual_record("series coefficients are s-fold convolutions", worst.to_f64().unwrap_or(f64::NAN))
}

/// Truncated products of the single-factor expectations agree with the joint
/// closed form.
fn kinematic_product_identity() -> Result<EstimateRecord> {
    let mut worst = 0.0f64;
    for &(n, d1, d2) in &[(5u32, 2.0f64, 3.0f64), (7, 0.5, 2.0), (6, 1.0, 4.0)] {
        let joint = expected_curvature_polynomial(n, &[d1, d2])?;
        let prod = kinematic_product(
            &expected_curvature_polynomial(n, &[d1])?,
            &expected_curvature_polynomial(n, &[d2])?,
        )?;
        for (a, b) in joint.mu.iter().zip(prod.mu.iter()) {
            worst = worst.max((a - b).abs());
        }
    }
    Ok(residual_record("kinematic product matches joint expectation", worst))
}

/// `(1 - T²) χ(δ;T)` has the coefficients of `√δ (1-(1-δ)T²)^{-1/2}`.
fn generating_function_identity() -> Result<EstimateRecord> {
    let mut worst = 0.0f64;
    for &delta in &[0.5, 1.0, 2.0, 4.0] {
        let chi = expected_euler_hypersurface_series(delta, 10)?;
        let mu = expected_curvature_polynomial(22, &[delta])?;
        for j in 0..=10usize {
            let lhs = if j == 0 { chi[0] } else { chi[j] - chi[j - 1] };
            worst = worst.max((lhs - mu.mu[j]).abs());
        }
    }
    Ok(residual_record("(1-T^2) chi series identity, order <= 20", worst))
}

/// Telescoping: `μ_{2k} = χ_k - χ_{k-1}`, independent of the ambient
/// dimension.
fn telescoping_identity() -> Result<EstimateRecord> {
    let mut worst = 0.0f64;
    for &delta in &[0.25, 2.0, 5.0] {
        let chi = expected_euler_hypersurface_series(delta, 6)?;
        for k in 1..=3u32 {
            for n in (2 * k + 1)..=(2 * k + 4) {
                let mu = expected_curvature_polynomial(n, &[delta])?;
                let diff = chi[k as usize] - chi[k as usize - 1];
                worst = worst.max((mu.coeff(2 * k) - diff).abs());
            }
        }
    }
    Ok(residual_record("expected coefficients telescope the Euler series", worst))
}

/// Gauss-Bonnet evaluation in projective space reproduces the Euler series.
fn gauss_bonnet_identity() -> Result<EstimateRecord> {
    let mut worst = 0.0f64;
    for &delta in &[0.5, 1.0, 3.0] {
        for &n in &[3u32, 5, 7, 9] {
            let mu = expected_curvature_polynomial(n, &[delta])?;
            let chi = expected_euler_hypersurface_series(delta, (n - 1) / 2)?;
            let gb = euler_characteristic(&mu, Space::Projective);
            worst = worst.max((gb - chi[((n - 1) / 2) as usize]).abs());
        }
    }
    Ok(residual_record("Gauss-Bonnet evaluation for odd n", worst))
}

/// Rescaling between tube and curvature coefficients round-trips.
fn rescaling_roundtrip_identity() -> EstimateRecord {
    let mut worst = 0.0f64;
    for &(n, s) in &[(5u32, 1u32), (6, 2), (7, 3)] {
        let m = n - s;
        let mu = CurvaturePolynomial::new(
            n,
            s,
            (0..=(m / 2)).map(|j| 1.0 / (j as f64 + 1.5)).collect(),
        )
        .unwrap();
        let k = tube_from_mu(&mu);
        let back = mu_from_tube(&k);
        for (a, b) in back.mu.iter().zip(mu.mu.iter()) {
            worst = worst.max((a - b).abs());
        }
        // Subsphere: K has the single entry O_{s-1} O_m.
        let mut sub = vec![0.0; (m / 2) as usize + 1];
        sub[0] = sphere_volume(s - 1) * sphere_volume(m);
        let sub_mu = mu_from_tube(&TubeCoefficients { n, s, k: sub });
        worst = worst.max((sub_mu.mu[0] - 1.0).abs());
    }
    residual_record("tube/curvature rescaling round-trip", worst)
}

/// The whole deterministic suite.
pub fn run_algebra_identities() -> Result<Vec<EstimateRecord>> {
    Ok(vec![
        sphere_moment_identity(),
        convolution_identity(),
        kinematic_product_identity()?,
        generating_function_identity()?,
        telescoping_identity()?,
        gauss_bonnet_identity()?,
        rescaling_roundtrip_identity(),
    ])
}
