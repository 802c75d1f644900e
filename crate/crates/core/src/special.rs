//! Scalar constants and integrals used throughout the crate.
//!
//! Everything here is exact-formula work: sphere volumes `O_n`, absolute
//! moments `γ_k` of the standard normal, the tube integrals
//! `J_{n,k}(α) = ∫_0^α sin^{k-1}ρ cos^{n-k}ρ dρ`, and the binomial-type
//! series coefficients `C_k^{(s)}` of `(1-Y)^{-s/2}`.

use crate::error::{LabError, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};

/// Lanczos approximation (g = 7, 9 terms), accurate to ~15 significant digits
/// for the half-integer arguments used here.
const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEFFS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// Gamma function Γ(x) for x > 0 (reflection handles the x < 1/2 range).
pub fn gamma(x: f64) -> f64 {
    if x < 0.5 {
        // Reflection formula.
        std::f64::consts::PI / ((std::f64::consts::PI * x).sin() * gamma(1.0 - x))
    } else {
        let z = x - 1.0;
        let mut acc = LANCZOS_COEFFS[0];
        for (i, c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
            acc += c / (z + i as f64);
        }
        let t = z + LANCZOS_G + 0.5;
        (2.0 * std::f64::consts::PI).sqrt() * t.powf(z + 0.5) * (-t).exp() * acc
    }
}

/// Volume `O_n = 2 π^{(n+1)/2} / Γ((n+1)/2)` of the unit n-sphere.
///
/// `O_0 = 2`, `O_1 = 2π`, `O_2 = 4π`.
pub fn sphere_volume(n: u32) -> f64 {
    let half = (n as f64 + 1.0) / 2.0;
    2.0 * std::f64::consts::PI.powf(half) / gamma(half)
}

/// Volume of real projective m-space, `vol(P^m) = O_m / 2`.
pub fn projective_volume(m: u32) -> f64 {
    0.5 * sphere_volume(m)
}

/// k-th absolute moment `γ_k = 2^{k/2} Γ((k+1)/2) / √π` of a standard normal.
///
/// For even k this is the double factorial `1·3·5···(k-1)`.
pub fn gaussian_abs_moment(k: u32) -> f64 {
    let half = (k as f64 + 1.0) / 2.0;
    2f64.powf(k as f64 / 2.0) * gamma(half) / std::f64::consts::PI.sqrt()
}

/// Mean length `E‖X‖ = γ_d / γ_{d-1}` of a standard normal vector in `R^d`.
pub fn mean_norm(d: u32) -> f64 {
    assert!(d >= 1);
    gaussian_abs_moment(d) / gaussian_abs_moment(d - 1)
}

/// Precomputed table of the moments `γ_0..γ_K`.
#[derive(Debug, Clone)]
pub struct MomentTable {
    values: Vec<f64>,
}

impl MomentTable {
    pub fn new(max_index: u32) -> Self {
        let values = (0..=max_index).map(gaussian_abs_moment).collect();
        MomentTable { values }
    }

    pub fn gamma(&self, k: u32) -> f64 {
        self.values[k as usize]
    }

    pub fn max_index(&self) -> u32 {
        self.values.len() as u32 - 1
    }

    /// `K_d = γ_d / γ_{d-1}`, the expected norm of a standard normal in `R^d`.
    pub fn mean_norm(&self, d: u32) -> f64 {
        self.values[d as usize] / self.values[d as usize - 1]
    }
}

/// Tube integral `J_{n,k}(α) = ∫_0^α (sin ρ)^{k-1} (cos ρ)^{n-k} dρ`.
///
/// `O_{n-k} O_{k-1} J_{n,k}(α)` is the volume of the tube of radius α around
/// a subsphere `S^{n-k}` of `S^n`. Evaluated by adaptive Gauss-Kronrod
/// quadrature with absolute tolerance 1e-12.
pub fn tube_integral(n: u32, k: u32, alpha: f64) -> Result<f64> {
    if k < 1 || k > n {
        return Err(LabError::Domain(format!(
            "tube integral requires 1 <= k <= n, got n={n}, k={k}"
        )));
    }
    if !(0.0..std::f64::consts::FRAC_PI_2).contains(&alpha) {
        return Err(LabError::Domain(format!(
            "tube radius must lie in [0, pi/2), got {alpha}"
        )));
    }
    let f = |rho: f64| rho.sin().powi(k as i32 - 1) * rho.cos().powi((n - k) as i32);
    Ok(adaptive_quadrature(&f, 0.0, alpha, 1e-12))
}

// 15-point Kronrod rule with embedded 7-point Gauss rule; positive abscissae.
const XGK: [f64; 8] = [
    0.991_455_371_120_813,
    0.949_107_912_342_759,
    0.864_864_423_359_769,
    0.741_531_185_599_394,
    0.586_087_235_467_691,
    0.405_845_151_377_397,
    0.207_784_955_007_898,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529,
    0.063_092_092_629_979,
    0.104_790_010_322_250,
    0.140_653_259_715_525,
    0.169_004_726_639_267,
    0.190_350_578_064_785,
    0.204_432_940_075_298,
    0.209_482_141_084_728,
];
const WG: [f64; 4] = [
    0.129_484_966_168_870,
    0.279_705_391_489_277,
    0.381_830_050_505_119,
    0.417_959_183_673_469,
];

/// One Gauss-Kronrod 7-15 panel; returns (integral, error estimate).
fn gk15(f: &dyn Fn(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut kronrod = 0.0;
    let mut gauss = 0.0;
    for (i, (&x, &wk)) in XGK.iter().zip(WGK.iter()).enumerate() {
        // The center node enters once, all others as a symmetric pair.
        let pair = if x == 0.0 {
            f(center)
        } else {
            f(center - half * x) + f(center + half * x)
        };
        kronrod += wk * pair;
        // Odd Kronrod indices are the embedded Gauss nodes.
        if i % 2 == 1 {
            gauss += WG[i / 2] * pair;
        }
    }
    (kronrod * half, (kronrod - gauss).abs() * half)
}

/// Adaptive bisection on top of the GK15 panel.
pub(crate) fn adaptive_quadrature(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    fn recurse(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64, depth: u32) -> f64 {
        let (value, err) = gk15(f, a, b);
        if err <= tol || depth >= 40 {
            value
        } else {
            let mid = 0.5 * (a + b);
            recurse(f, a, mid, tol / 2.0, depth + 1) + recurse(f, mid, b, tol / 2.0, depth + 1)
        }
    }
    recurse(f, a, b, tol, 0)
}

/// Coefficient `C_k^{(s)}` of `Y^k` in `(1-Y)^{-s/2}`, as an exact rational:
/// `C_0^{(s)} = 1`, `C_k^{(s)} = s(s+2)(s+4)···(s+2k-2) / (k! 2^k)`.
pub fn series_coefficient(s: u32, k: u32) -> Result<BigRational> {
    if s == 0 {
        return Err(LabError::Domain("series order s must be >= 1".into()));
    }
    let mut numer = BigInt::one();
    let mut denom = BigInt::one();
    for i in 0..k as u64 {
        numer *= BigInt::from(s as u64 + 2 * i);
        denom *= BigInt::from(2 * (i + 1));
    }
    Ok(BigRational::new(numer, denom))
}

/// `C_k^{(s)}` as a float, for use inside numeric formulas.
pub fn series_coefficient_f64(s: u32, k: u32) -> f64 {
    series_coefficient(s, k)
        .expect("s >= 1")
        .to_f64()
        .expect("series coefficient fits in f64")
}
