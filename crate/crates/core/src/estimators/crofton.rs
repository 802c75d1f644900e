//! Section counts of random projective varieties by coordinate subspaces.
//!
//! By invariance, intersecting the zero set with a uniformly random
//! s-dimensional projective subspace is equivalent to restricting the system
//! to the coordinate subspace `P^s` and counting its zeros there; the
//! expected count is `∏_σ √δ_σ`, which pins the constant coefficient of the
//! expected curvature polynomial from the intersection side.
//!
//! Supported shapes: s = 1 (binary-form restriction, counted by Sturm
//! chains) for any system size, and s = 2 with every factor of degree <= 3
//! (restriction to `P²`, common zeros counted by Bernstein subdivision over
//! the three coordinate charts). Degree-2 factors may be arbitrary mixtures
//! (sampled as quadric matrices); higher-degree factors must be Kostlan,
//! whose restricted coefficients have independent multinomial variances.

use crate::ensembles::{binomial, PolynomialEnsemble};
use crate::error::{LabError, Result};
use crate::estimators::system_label;
use crate::mc::{run_mc, EstimateRecord, McSettings};
use crate::roots::count_projective_roots;
use crate::solve2d::{common_zeros_unit_box, BivariatePoly};
use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::StandardNormal;

/// Real ternary form of degree d: coefficients over monomials
/// `X_0^{d-a1-a2} X_1^{a1} X_2^{a2}`, indexed by `(a1, a2)`.
#[derive(Debug, Clone)]
pub struct TernaryForm {
    pub d: u32,
    coeffs: Vec<f64>,
}

impl TernaryForm {
    fn index(d: u32, a1: u32, a2: u32) -> usize {
        // Row-major over a1, each row holding d - a1 + 1 entries.
        let a1 = a1 as usize;
        let d = d as usize;
        a1 * (2 * d + 3 - a1) / 2 + a2 as usize
    }

    pub fn zero(d: u32) -> Self {
        let len = ((d as usize + 1) * (d as usize + 2)) / 2;
        TernaryForm { d, coeffs: vec![0.0; len] }
    }

    pub fn coeff(&self, a1: u32, a2: u32) -> f64 {
        self.coeffs[Self::index(self.d, a1, a2)]
    }

    pub fn coeff_mut(&mut self, a1: u32, a2: u32) -> &mut f64 {
        &mut self.coeffs[Self::index(self.d, a1, a2)]
    }

    /// Kostlan sample: independent coefficients with multinomial variances
    /// `d!/(a0! a1! a2!) = C(d, a1) C(d - a1, a2)`.
    pub fn sample_kostlan(d: u32, rng: &mut impl Rng) -> Self {
        let mut form = Self::zero(d);
        for a1 in 0..=d {
            for a2 in 0..=(d - a1) {
                let var = binomial(d, a1) * binomial(d - a1, a2);
                *form.coeff_mut(a1, a2) = var.sqrt() * rng.sample::<f64, _>(StandardNormal);
            }
        }
        form
    }

    /// Degree-2 form from its symmetric matrix: `xᵀQx`.
    pub fn from_quadric(q: &DMatrix<f64>) -> Self {
        assert_eq!(q.nrows(), 3);
        let mut form = Self::zero(2);
        *form.coeff_mut(0, 0) = q[(0, 0)];
        *form.coeff_mut(1, 0) = 2.0 * q[(0, 1)];
        *form.coeff_mut(0, 1) = 2.0 * q[(0, 2)];
        *form.coeff_mut(2, 0) = q[(1, 1)];
        *form.coeff_mut(1, 1) = 2.0 * q[(1, 2)];
        *form.coeff_mut(0, 2) = q[(2, 2)];
        form
    }

    /// Dehomogenization on chart `k` (coordinate k set to 1), with the two
    /// remaining coordinates in index order as (u, v).
    pub fn chart(&self, k: usize) -> BivariatePoly {
        let d = self.d as usize;
        let mut poly = BivariatePoly::new(d, d, vec![0.0; (d + 1) * (d + 1)]);
        for a1 in 0..=self.d {
            for a2 in 0..=(self.d - a1) {
                let a0 = self.d - a1 - a2;
                let c = self.coeff(a1, a2);
                let (i, j) = match k {
                    0 => (a1, a2),
                    1 => (a0, a2),
                    2 => (a0, a1),
                    _ => unreachable!(),
                };
                poly.coeffs[i as usize + j as usize * (d + 1)] += c;
            }
        }
        poly
    }

    pub fn eval(&self, x: [f64; 3]) -> f64 {
        let mut acc = 0.0;
        for a1 in 0..=self.d {
            for a2 in 0..=(self.d - a1) {
                let a0 = self.d - a1 - a2;
                acc += self.coeff(a1, a2)
                    * x[0].powi(a0 as i32)
                    * x[1].powi(a1 as i32)
                    * x[2].powi(a2 as i32);
            }
        }
        acc
    }
}

/// Chart coordinates back to a point of `S²` with a canonical sign.
fn chart_point(k: usize, u: f64, v: f64) -> [f64; 3] {
    let mut x = match k {
        0 => [1.0, u, v],
        1 => [u, 1.0, v],
        _ => [u, v, 1.0],
    };
    let norm = (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt();
    for c in &mut x {
        *c /= norm;
    }
    // Canonical projective representative: first significantly nonzero
    // coordinate positive.
    let lead = x.iter().find(|c| c.abs() > 1e-6).copied().unwrap_or(1.0);
    if lead < 0.0 {
        for c in &mut x {
            *c = -*c;
        }
    }
    x
}

/// Count the common real projective zeros of two ternary forms, or `None`
/// when the subdivision solver cannot certify the count.
pub fn count_common_zeros_p2(f: &TernaryForm, g: &TernaryForm) -> Option<usize> {
    let mut found: Vec<[f64; 3]> = Vec::new();
    for k in 0..3 {
        let p = f.chart(k);
        let q = g.chart(k);
        let zeros = common_zeros_unit_box(&p, &q)?;
        for (u, v) in zeros {
            let x = chart_point(k, u, v);
            let duplicate = found.iter().any(|y| {
                let d: f64 = x.iter().zip(y.iter()).map(|(a, b)| (a - b) * (a - b)).sum();
                d.sqrt() < 1e-6
            });
            if !duplicate {
                found.push(x);
            }
        }
    }
    Some(found.len())
}

enum FactorSampler {
    TernaryKostlan(u32),
    TernaryQuadric(PolynomialEnsemble),
}

/// Expected section count `∏_σ √δ_σ` of a random codimension-s variety in
/// `P^n` by a random s-plane.
pub fn estimate_crofton_volume(
    ensembles: &[PolynomialEnsemble],
    n: u32,
    settings: &McSettings,
) -> Result<EstimateRecord> {
    let s = ensembles.len() as u32;
    if s < 1 || s > n {
        return Err(LabError::Dimension(format!("need 1 <= s <= n factors, got s={s}, n={n}")));
    }
    for e in ensembles {
        if e.ambient_dim() < n {
            return Err(LabError::Dimension(format!(
                "factor ambient dimension {} below n={n}",
                e.ambient_dim()
            )));
        }
    }
    let target: f64 = ensembles.iter().map(|e| e.delta().sqrt()).product();
    let label = format!("n={n} s={s} {}", system_label(ensembles));

    let outcome = match s {
        1 => {
            let sampler = ensembles[0].restrict(1)?.binary_sampler()?;
            run_mc(settings, 0, 1, |rng, out| {
                let coeffs = sampler.sample(rng);
                match count_projective_roots(&coeffs) {
                    Some(count) => {
                        out[0] = count as f64;
                        true
                    }
                    None => false,
                }
            })
        }
        2 => {
            let samplers: Vec<FactorSampler> = ensembles
                .iter()
                .map(|e| {
                    if e.degree() == 2 {
                        Ok(FactorSampler::TernaryQuadric(e.restrict(2)?))
                    } else if e.is_kostlan() && e.degree() <= 3 {
                        Ok(FactorSampler::TernaryKostlan(e.degree()))
                    } else {
                        Err(LabError::Unsupported(format!(
                            "plane sections support degree-2 mixtures and Kostlan factors of degree <= 3, got {}",
                            system_label(std::slice::from_ref(e))
                        )))
                    }
                })
                .collect::<Result<_>>()?;
            run_mc(settings, 0, 1, |rng, out| {
                let forms: Vec<TernaryForm> = samplers
                    .iter()
                    .map(|s| match s {
                        FactorSampler::TernaryKostlan(d) => TernaryForm::sample_kostlan(*d, rng),
                        FactorSampler::TernaryQuadric(e) => {
                            TernaryForm::from_quadric(&e.quadric_matrix(rng).expect("degree 2"))
                        }
                    })
                    .collect();
                match count_common_zeros_p2(&forms[0], &forms[1]) {
                    Some(count) => {
                        out[0] = count as f64;
                        true
                    }
                    None => false,
                }
            })
        }
        _ => {
            return Err(LabError::Unsupported(format!(
                "section counting is implemented for s = 1 and s = 2, got s={s}"
            )))
        }
    };
    Ok(EstimateRecord::from_outcome(
        "crofton_volume",
        label,
        settings.seed,
        target,
        &outcome,
        0,
    ))
}
