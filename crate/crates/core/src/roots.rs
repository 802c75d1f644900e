//! Real-root counting for univariate polynomials by Sturm chains.
//!
//! Coefficients are in ascending order, `p(t) = Σ c_a t^a`. The chain is the
//! Euclidean remainder sequence `p, p', -rem(...)`, each element rescaled to
//! unit max-norm (a positive rescaling never changes signs). The number of
//! distinct real roots is the drop in sign variations from -∞ to +∞.
//!
//! Inputs come from continuous distributions, so repeated roots and borderline
//! coefficient cancellations are measure-zero; whenever the chain cannot be
//! trusted (nontrivial gcd, blown-up remainders) counting returns `None` and
//! the caller resamples.

/// Relative threshold below which a coefficient is treated as zero.
const COEFF_EPS: f64 = 1e-12;

/// Drop numerically-zero leading coefficients; `scale` is the max-norm the
/// threshold refers to.
fn trim(coeffs: &mut Vec<f64>, scale: f64) {
    while coeffs.len() > 1 && coeffs.last().unwrap().abs() <= COEFF_EPS * scale {
        coeffs.pop();
    }
    if coeffs.len() == 1 && coeffs[0].abs() <= COEFF_EPS * scale {
        coeffs[0] = 0.0;
    }
}

fn max_norm(coeffs: &[f64]) -> f64 {
    coeffs.iter().fold(0.0, |m, c| m.max(c.abs()))
}

fn normalize(coeffs: &mut [f64]) {
    let m = max_norm(coeffs);
    if m > 0.0 {
        for c in coeffs.iter_mut() {
            *c /= m;
        }
    }
}

fn derivative(coeffs: &[f64]) -> Vec<f64> {
    if coeffs.len() <= 1 {
        return vec![0.0];
    }
    coeffs.iter().enumerate().skip(1).map(|(a, c)| a as f64 * c).collect()
}

/// Remainder of `num / den`; `den` must have nonzero leading coefficient.
fn remainder(num: &[f64], den: &[f64]) -> Vec<f64> {
    let dn = num.len() - 1;
    let dd = den.len() - 1;
    let mut rem = num.to_vec();
    let lead = den[dd];
    for k in (dd..=dn).rev() {
        let factor = rem[k] / lead;
        if factor != 0.0 {
            for i in 0..dd {
                rem[k - dd + i] -= factor * den[i];
            }
        }
        rem[k] = 0.0;
    }
    rem.truncate(dd.max(1));
    rem
}

/// Number of distinct real roots of `p`, or `None` when the Sturm chain is
/// numerically unreliable (near-multiple roots, degenerate coefficients).
pub fn count_real_roots(coeffs: &[f64]) -> Option<usize> {
    let mut p = coeffs.to_vec();
    let scale = max_norm(&p);
    if scale == 0.0 {
        return None; // the zero polynomial
    }
    normalize(&mut p);
    trim(&mut p, 1.0);
    if p.len() == 1 {
        return if p[0] == 0.0 { None } else { Some(0) };
    }
    if p.len() == 2 {
        return Some(1);
    }
    let mut chain: Vec<Vec<f64>> = Vec::with_capacity(p.len());
    let mut d1 = derivative(&p);
    normalize(&mut d1);
    chain.push(p);
    chain.push(d1);
    loop {
        let prev = &chain[chain.len() - 2];
        let cur = &chain[chain.len() - 1];
        if cur.len() == 1 {
            break;
        }
        let mut rem = remainder(prev, cur);
        for c in rem.iter_mut() {
            *c = -*c;
        }
        let m = max_norm(&rem);
        if !m.is_finite() || m > 1e10 {
            return None; // cancellation blow-up; chain untrustworthy
        }
        if m <= 1e-11 {
            break; // remainder is numerically zero: previous entry is the gcd
        }
        normalize(&mut rem);
        trim(&mut rem, 1.0);
        chain.push(rem);
    }
    // Square-free check: the last chain element is (proportional to) the gcd
    // of p and p'. A nonconstant gcd means a multiple root.
    if chain.last().unwrap().len() > 1 {
        return None;
    }
    let variations = |at_minus_inf: bool| {
        let mut count = 0usize;
        let mut last_sign = 0i8;
        for poly in &chain {
            let deg = poly.len() - 1;
            let lead = *poly.last().unwrap();
            if lead == 0.0 {
                continue;
            }
            let mut sign = if lead > 0.0 { 1i8 } else { -1 };
            if at_minus_inf && deg % 2 == 1 {
                sign = -sign;
            }
            if last_sign != 0 && sign != last_sign {
                count += 1;
            }
            last_sign = sign;
        }
        count
    };
    let at_minus = variations(true);
    let at_plus = variations(false);
    at_minus.checked_sub(at_plus)
}

/// Number of real projective roots of the binary form
/// `f(X_0, X_1) = Σ_a c_a X_0^{d-a} X_1^a`.
///
/// When the top coefficient is nonzero the projective roots are exactly the
/// real roots of the dehomogenization `f(1,t)`, which has the same
/// coefficient vector. A numerically vanishing top coefficient would put a
/// root at infinity; that is a measure-zero event and reports `None`.
pub fn count_projective_roots(coeffs: &[f64]) -> Option<usize> {
    let scale = max_norm(coeffs);
    if scale == 0.0 {
        return None;
    }
    let lead = coeffs.last().unwrap().abs();
    if lead < 1e-12 * scale {
        return None;
    }
    count_real_roots(coeffs)
}

/// Expand a polynomial with the given real roots and complex-conjugate pairs
/// `(re, im)`; an independent construction used as a test oracle.
#[cfg(test)]
pub fn from_roots(real: &[f64], complex_pairs: &[(f64, f64)]) -> Vec<f64> {
    let mut coeffs = vec![1.0];
    let mul = |coeffs: &[f64], factor: &[f64]| {
        let mut out = vec![0.0; coeffs.len() + factor.len() - 1];
        for (i, a) in coeffs.iter().enumerate() {
            for (j, b) in factor.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        out
    };
    for &r in real {
        coeffs = mul(&coeffs, &[-r, 1.0]);
    }
    for &(re, im) in complex_pairs {
        coeffs = mul(&coeffs, &[re * re + im * im, -2.0 * re, 1.0]);
    }
    coeffs
}
