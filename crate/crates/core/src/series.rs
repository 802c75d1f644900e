//! Curvature polynomials of submanifolds of `S^n` (and of `P^n` via the
//! double cover), stored as truncated even power series in `T`.
//!
//! A codimension-s submanifold `M` of `S^n` has tube-volume coefficients
//! `K_{s+e}(M)` for even `e <= m = n - s`, defined by
//! `vol(T(M,α)) = Σ_e K_{s+e}(M) J_{n,s+e}(α)`. Rescaling by
//! `μ_e = K_{s+e} / (O_{m-e} O_{s+e-1})` gives the curvature polynomial
//! `μ(M;T) = Σ μ_e T^e`, which multiplies under random intersection
//! (truncated) and evaluates to the Euler characteristic at `T = 1`.

use crate::error::{LabError, Result};
use crate::special::{series_coefficient_f64, sphere_volume, tube_integral};
use serde::{Deserialize, Serialize};

/// Truncated even power series `μ(M;T) = Σ μ_e T^e` with ambient dimension
/// `n` and codimension `s`; coefficients run over even `e <= m = n - s`.
///
/// Serializes to `{n, s, mu: [..]}` with `mu[j] = μ_{2j}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurvaturePolynomial {
    pub n: u32,
    pub s: u32,
    /// Even coefficients, densely indexed: `mu[j]` is the coefficient of `T^{2j}`.
    pub mu: Vec<f64>,
}

/// Coefficients `K_{s+e}` of the tube-volume expansion in the `J_{n,s+e}`
/// basis, densely indexed by `e/2`.
#[derive(Debug, Clone, PartialEq)]
pub struct TubeCoefficients {
    pub n: u32,
    pub s: u32,
    pub k: Vec<f64>,
}

/// Ambient space carrying the zero set, for Euler-characteristic evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Space {
    Sphere,
    Projective,
}

impl CurvaturePolynomial {
    /// Number of stored even coefficients for intrinsic dimension `m`.
    fn coeff_len(n: u32, s: u32) -> usize {
        ((n - s) / 2) as usize + 1
    }

    pub fn new(n: u32, s: u32, mu: Vec<f64>) -> Result<Self> {
        if s > n || s == 0 {
            return Err(LabError::Dimension(format!(
                "codimension must satisfy 1 <= s <= n, got n={n}, s={s}"
            )));
        }
        if mu.len() != Self::coeff_len(n, s) {
            return Err(LabError::Dimension(format!(
                "expected {} even coefficients for n={n}, s={s}, got {}",
                Self::coeff_len(n, s),
                mu.len()
            )));
        }
        Ok(CurvaturePolynomial { n, s, mu })
    }

    /// The polynomial of the empty variety, `μ(∅;T) = 0`.
    pub fn empty(n: u32, s: u32) -> Self {
        CurvaturePolynomial { n, s, mu: vec![0.0; Self::coeff_len(n, s)] }
    }

    /// `μ(S^m;T) = 1` resp. `μ(P^m;T) = 1`: the polynomial of a subsphere or
    /// projective subspace of codimension s.
    pub fn subsphere(n: u32, s: u32) -> Self {
        let mut poly = Self::empty(n, s);
        poly.mu[0] = 1.0;
        poly
    }

    /// Intrinsic dimension `m = n - s`.
    pub fn intrinsic_dim(&self) -> u32 {
        self.n - self.s
    }

    /// Coefficient of `T^e`; odd and out-of-range indices are zero.
    pub fn coeff(&self, e: u32) -> f64 {
        if e % 2 != 0 {
            return 0.0;
        }
        self.mu.get((e / 2) as usize).copied().unwrap_or(0.0)
    }
}

/// Rescale tube coefficients to curvature coefficients:
/// `μ_e = K_{s+e} / (O_{m-e} O_{s+e-1})`.
pub fn mu_from_tube(k: &TubeCoefficients) -> CurvaturePolynomial {
    let m = k.n - k.s;
    let mu = k
        .k
        .iter()
        .enumerate()
        .map(|(j, &kj)| {
            let e = 2 * j as u32;
            kj / (sphere_volume(m - e) * sphere_volume(k.s + e - 1))
        })
        .collect();
    CurvaturePolynomial { n: k.n, s: k.s, mu }
}

/// Inverse rescaling: `K_{s+e} = μ_e O_{m-e} O_{s+e-1}`.
pub fn tube_from_mu(mu: &CurvaturePolynomial) -> TubeCoefficients {
    let m = mu.intrinsic_dim();
    let k = mu
        .mu
        .iter()
        .enumerate()
        .map(|(j, &mj)| {
            let e = 2 * j as u32;
            mj * sphere_volume(m - e) * sphere_volume(mu.s + e - 1)
        })
        .collect();
    TubeCoefficients { n: mu.n, s: mu.s, k }
}

/// Volume of the tube of radius α: `Σ_e K_{s+e} J_{n,s+e}(α)`.
pub fn tube_volume(k: &TubeCoefficients, alpha: f64) -> Result<f64> {
    if !(0.0 < alpha && alpha < std::f64::consts::FRAC_PI_2) {
        return Err(LabError::Domain(format!(
            "tube radius must lie in (0, pi/2), got {alpha}"
        )));
    }
    let mut total = 0.0;
    for (j, &kj) in k.k.iter().enumerate() {
        let e = 2 * j as u32;
        total += kj * tube_integral(k.n, k.s + e, alpha)?;
    }
    Ok(total)
}

/// Truncated product of curvature polynomials: the expected curvature
/// polynomial of a random intersection. The result has codimension
/// `s_a + s_b` and is truncated mod `T^{m_a + m_b - n + 1}`.
pub fn kinematic_product(
    a: &CurvaturePolynomial,
    b: &CurvaturePolynomial,
) -> Result<CurvaturePolynomial> {
    if a.n != b.n {
        return Err(LabError::Dimension(format!(
            "ambient dimensions differ: {} vs {}",
            a.n, b.n
        )));
    }
    let n = a.n;
    let (ma, mb) = (a.intrinsic_dim(), b.intrinsic_dim());
    if ma + mb < n {
        return Err(LabError::Dimension(format!(
            "intersection dimension {} + {} - {n} is negative",
            ma, mb
        )));
    }
    let s = a.s + b.s;
    let mut out = CurvaturePolynomial::empty(n, s);
    let len = out.mu.len();
    for j in 0..len {
        let mut acc = 0.0;
        for i in 0..=j {
            acc += a.coeff(2 * i as u32) * b.coeff(2 * (j - i) as u32);
        }
        out.mu[j] = acc;
    }
    Ok(out)
}

/// Euler characteristic via generalized Gauss-Bonnet: `2 μ(M;1)` on the
/// sphere, `μ(M;1)` in projective space, and 0 for odd intrinsic dimension
/// (a compact odd-dimensional manifold has vanishing Euler characteristic).
pub fn euler_characteristic(mu: &CurvaturePolynomial, space: Space) -> f64 {
    if mu.intrinsic_dim() % 2 != 0 {
        return 0.0;
    }
    let sum: f64 = mu.mu.iter().sum();
    match space {
        Space::Sphere => 2.0 * sum,
        Space::Projective => sum,
    }
}

/// Expected curvature polynomial of the zero set in `P^n` of `s` independent
/// invariant Gaussian polynomials with parameters `deltas`:
/// the coefficients of `∏_σ δ_σ^{1/2} (1 - (1-δ_σ) T^2)^{-1/2}` truncated
/// mod `T^{n-s+1}`.
pub fn expected_curvature_polynomial(n: u32, deltas: &[f64]) -> Result<CurvaturePolynomial> {
    let s = deltas.len() as u32;
    if s == 0 || s > n {
        return Err(LabError::Dimension(format!(
            "need 1 <= s <= n factors, got s={s}, n={n}"
        )));
    }
    for &d in deltas {
        // δ = 0 is legal: the factor √δ (...)^{-1/2} vanishes and the result
        // is the zero polynomial of the empty variety.
        if d < 0.0 || !d.is_finite() {
            return Err(LabError::Domain(format!("parameters must be nonnegative, got {d}")));
        }
    }
    // Start from the constant series 1 with full truncation depth, multiply
    // in one factor sqrt(δ) Σ_k C_k^(1) (1-δ)^k T^{2k} at a time.
    let len = CurvaturePolynomial::coeff_len(n, s);
    let mut coeffs = vec![0.0; len];
    coeffs[0] = 1.0;
    for &delta in deltas {
        let factor: Vec<f64> = (0..len)
            .map(|k| delta.sqrt() * series_coefficient_f64(1, k as u32) * (1.0 - delta).powi(k as i32))
            .collect();
        let mut next = vec![0.0; len];
        for (i, &ci) in coeffs.iter().enumerate() {
            if ci == 0.0 {
                continue;
            }
            for (j, &fj) in factor.iter().enumerate().take(len - i) {
                next[i + j] += ci * fj;
            }
        }
        coeffs = next;
    }
    CurvaturePolynomial::new(n, s, coeffs)
}

/// Partial sums `χ_0(δ)..χ_L(δ)` of the expected Euler characteristic of a
/// random invariant hypersurface: `χ_ℓ(δ) = δ^{1/2} Σ_{k<=ℓ} C_k^{(1)} (1-δ)^k`
/// is the expectation for a hypersurface of `P^{2ℓ+1}`.
pub fn expected_euler_hypersurface_series(delta: f64, max_ell: u32) -> Result<Vec<f64>> {
    if delta < 0.0 || !delta.is_finite() {
        return Err(LabError::Domain(format!("parameter must be nonnegative, got {delta}")));
    }
    let mut out = Vec::with_capacity(max_ell as usize + 1);
    let mut partial = 0.0;
    for k in 0..=max_ell {
        partial += series_coefficient_f64(1, k) * (1.0 - delta).powi(k as i32);
        out.push(delta.sqrt() * partial);
    }
    Ok(out)
}
