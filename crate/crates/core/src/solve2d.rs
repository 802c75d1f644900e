//! Common real zeros of two bivariate polynomials on `[-1,1]²` by Bernstein
//! subdivision with Newton polishing.
//!
//! Both polynomials are converted to the tensor Bernstein basis on the box;
//! the convex-hull property makes the coefficient range a rigorous bound on
//! the value range, so boxes where either range misses zero are pruned.
//! Surviving boxes are split until small, then a 2-d Newton iteration from
//! the box center locates the (transversal) zero to full precision. Boxes
//! that reach the minimum size unresolved indicate a near-tangency or a
//! boundary-case zero; the caller treats the whole sample as degenerate and
//! resamples.

/// Bivariate polynomial in the power basis, `p(u,v) = Σ c[i][j] u^i v^j`,
/// stored row-major with `c[i + j*(du+1)]`.
#[derive(Debug, Clone)]
pub struct BivariatePoly {
    pub du: usize,
    pub dv: usize,
    pub coeffs: Vec<f64>,
}

impl BivariatePoly {
    pub fn new(du: usize, dv: usize, coeffs: Vec<f64>) -> Self {
        assert_eq!(coeffs.len(), (du + 1) * (dv + 1));
        BivariatePoly { du, dv, coeffs }
    }

    #[inline]
    pub fn coeff(&self, i: usize, j: usize) -> f64 {
        self.coeffs[i + j * (self.du + 1)]
    }

    /// Horner evaluation in v of Horner rows in u.
    pub fn eval(&self, u: f64, v: f64) -> f64 {
        let mut acc = 0.0;
        for j in (0..=self.dv).rev() {
            let mut row = 0.0;
            for i in (0..=self.du).rev() {
                row = row * u + self.coeff(i, j);
            }
            acc = acc * v + row;
        }
        acc
    }

    pub fn partial_u(&self) -> BivariatePoly {
        let du = self.du.max(1) - 1;
        let mut coeffs = vec![0.0; (du + 1) * (self.dv + 1)];
        for j in 0..=self.dv {
            for i in 1..=self.du {
                coeffs[(i - 1) + j * (du + 1)] = i as f64 * self.coeff(i, j);
            }
        }
        BivariatePoly { du, dv: self.dv, coeffs }
    }

    pub fn partial_v(&self) -> BivariatePoly {
        let dv = self.dv.max(1) - 1;
        let mut coeffs = vec![0.0; (self.du + 1) * (dv + 1)];
        for j in 1..=self.dv {
            for i in 0..=self.du {
                coeffs[i + (j - 1) * (self.du + 1)] = j as f64 * self.coeff(i, j);
            }
        }
        BivariatePoly { du: self.du, dv, coeffs }
    }

    pub fn coeff_scale(&self) -> f64 {
        self.coeffs.iter().map(|c| c.abs()).sum()
    }
}

fn binomial_table(n: usize) -> Vec<Vec<f64>> {
    let mut rows = vec![vec![1.0]];
    for i in 1..=n {
        let prev = &rows[i - 1];
        let mut row = vec![1.0; i + 1];
        for k in 1..i {
            row[k] = prev[k - 1] + prev[k];
        }
        rows.push(row);
    }
    rows
}

/// Tensor Bernstein coefficients of a polynomial on a box.
#[derive(Debug, Clone)]
struct BernsteinPatch {
    du: usize,
    dv: usize,
    b: Vec<f64>,
}

impl BernsteinPatch {
    /// Convert `p` restricted to `[u0,u1]×[v0,v1]` into the Bernstein basis:
    /// first reparametrize affinely onto the unit square, then apply the
    /// triangular power-to-Bernstein transform along each axis.
    fn from_power(p: &BivariatePoly, u0: f64, u1: f64, v0: f64, v1: f64) -> Self {
        let (du, dv) = (p.du, p.dv);
        let binom = binomial_table(du.max(dv));
        // Affine substitution u = u0 + (u1-u0) t along rows.
        let mut local = vec![0.0; (du + 1) * (dv + 1)];
        for j in 0..=dv {
            for i in 0..=du {
                let c = p.coeff(i, j);
                if c == 0.0 {
                    continue;
                }
                // (u0 + w t)^i expands over t^k.
                let w = u1 - u0;
                let mut pw = 1.0; // w^k accumulates in the k loop
                for k in 0..=i {
                    local[k + j * (du + 1)] += c * binom[i][k] * u0.powi((i - k) as i32) * pw;
                    pw *= w;
                }
            }
        }
        let mut local2 = vec![0.0; (du + 1) * (dv + 1)];
        for i in 0..=du {
            for j in 0..=dv {
                let c = local[i + j * (du + 1)];
                if c == 0.0 {
                    continue;
                }
                let w = v1 - v0;
                let mut pw = 1.0;
                for k in 0..=j {
                    local2[i + k * (du + 1)] += c * binom[j][k] * v0.powi((j - k) as i32) * pw;
                    pw *= w;
                }
            }
        }
        // Power basis on [0,1]² to Bernstein: b_i = Σ_{k<=i} C(i,k)/C(n,k) a_k.
        let mut b = vec![0.0; (du + 1) * (dv + 1)];
        for j in 0..=dv {
            for i in 0..=du {
                let mut acc = 0.0;
                for k in 0..=i {
                    acc += binom[i][k] / binom[du][k] * local2[k + j * (du + 1)];
                }
                b[i + j * (du + 1)] = acc;
            }
        }
        let mut b2 = vec![0.0; (du + 1) * (dv + 1)];
        for i in 0..=du {
            for j in 0..=dv {
                let mut acc = 0.0;
                for k in 0..=j {
                    acc += binom[j][k] / binom[dv][k] * b[i + k * (du + 1)];
                }
                b2[i + j * (du + 1)] = acc;
            }
        }
        BernsteinPatch { du, dv, b: b2 }
    }

    /// Convex-hull range bound: the patch values lie inside [min b, max b].
    fn excludes_zero(&self) -> bool {
        let mut min = f64::INFINITY;
        let mut max = f64::NEG_INFINITY;
        for &c in &self.b {
            min = min.min(c);
            max = max.max(c);
        }
        min > 0.0 || max < 0.0
    }

    /// de Casteljau split at the midpoint along u.
    fn split_u(&self) -> (BernsteinPatch, BernsteinPatch) {
        let (du, dv) = (self.du, self.dv);
        let mut left = vec![0.0; (du + 1) * (dv + 1)];
        let mut right = vec![0.0; (du + 1) * (dv + 1)];
        let mut work = vec![0.0; du + 1];
        for j in 0..=dv {
            for i in 0..=du {
                work[i] = self.b[i + j * (du + 1)];
            }
            left[j * (du + 1)] = work[0];
            right[du + j * (du + 1)] = work[du];
            for level in 1..=du {
                for i in 0..=(du - level) {
                    work[i] = 0.5 * (work[i] + work[i + 1]);
                }
                left[level + j * (du + 1)] = work[0];
                right[(du - level) + j * (du + 1)] = work[du - level];
            }
        }
        (BernsteinPatch { du, dv, b: left }, BernsteinPatch { du, dv, b: right })
    }

    /// de Casteljau split at the midpoint along v.
    fn split_v(&self) -> (BernsteinPatch, BernsteinPatch) {
        let (du, dv) = (self.du, self.dv);
        let mut left = vec![0.0; (du + 1) * (dv + 1)];
        let mut right = vec![0.0; (du + 1) * (dv + 1)];
        let mut work = vec![0.0; dv + 1];
        for i in 0..=du {
            for j in 0..=dv {
                work[j] = self.b[i + j * (du + 1)];
            }
            left[i] = work[0];
            right[i + dv * (du + 1)] = work[dv];
            for level in 1..=dv {
                for j in 0..=(dv - level) {
                    work[j] = 0.5 * (work[j] + work[j + 1]);
                }
                left[i + level * (du + 1)] = work[0];
                right[i + (dv - level) * (du + 1)] = work[dv - level];
            }
        }
        (BernsteinPatch { du, dv, b: left }, BernsteinPatch { du, dv, b: right })
    }
}

/// Box size below which Newton takes over from subdivision.
const NEWTON_SIZE: f64 = 1e-3;
/// Box size below which an unresolved box flags the sample as degenerate.
const MIN_SIZE: f64 = 1e-5;
/// Acceptance radius for two candidates to be the same zero.
const DEDUP_DISTANCE: f64 = 1e-7;

struct Solver<'a> {
    p: &'a BivariatePoly,
    q: &'a BivariatePoly,
    pu: BivariatePoly,
    pv: BivariatePoly,
    qu: BivariatePoly,
    qv: BivariatePoly,
    res_tol_p: f64,
    res_tol_q: f64,
    zeros: Vec<(f64, f64)>,
}

impl<'a> Solver<'a> {
    fn newton(&self, mut u: f64, mut v: f64) -> Option<(f64, f64)> {
        for _ in 0..60 {
            let f = self.p.eval(u, v);
            let g = self.q.eval(u, v);
            let a = self.pu.eval(u, v);
            let b = self.pv.eval(u, v);
            let c = self.qu.eval(u, v);
            let d = self.qv.eval(u, v);
            let det = a * d - b * c;
            if det == 0.0 || !det.is_finite() {
                return None;
            }
            let step_u = (f * d - g * b) / det;
            let step_v = (a * g - c * f) / det;
            u -= step_u;
            v -= step_v;
            if !u.is_finite() || !v.is_finite() || u.abs() > 1e3 || v.abs() > 1e3 {
                return None;
            }
            if step_u.abs() + step_v.abs() <= 1e-14 * (1.0 + u.abs() + v.abs()) {
                let ok = self.p.eval(u, v).abs() <= self.res_tol_p
                    && self.q.eval(u, v).abs() <= self.res_tol_q;
                return ok.then_some((u, v));
            }
        }
        None
    }

    fn record(&mut self, z: (f64, f64)) {
        for existing in &self.zeros {
            if (existing.0 - z.0).abs() + (existing.1 - z.1).abs() < DEDUP_DISTANCE {
                return;
            }
        }
        self.zeros.push(z);
    }

    /// Returns false when an unresolved minimal box makes the count untrustworthy.
    fn descend(
        &mut self,
        bp: BernsteinPatch,
        bq: BernsteinPatch,
        u0: f64,
        u1: f64,
        v0: f64,
        v1: f64,
    ) -> bool {
        if bp.excludes_zero() || bq.excludes_zero() {
            return true;
        }
        let size = (u1 - u0).max(v1 - v0);
        if size < NEWTON_SIZE {
            let margin = 2.0 * size;
            if let Some(z) = self.newton(0.5 * (u0 + u1), 0.5 * (v0 + v1)) {
                if z.0 >= u0 - margin && z.0 <= u1 + margin && z.1 >= v0 - margin && z.1 <= v1 + margin
                {
                    self.record(z);
                    return true;
                }
            }
            if size < MIN_SIZE {
                // Near-tangency or a zero Newton cannot certify: give up on
                // the whole sample rather than risk a miscount.
                return false;
            }
        }
        // Split the longer axis.
        if u1 - u0 >= v1 - v0 {
            let mid = 0.5 * (u0 + u1);
            let (pl, pr) = bp.split_u();
            let (ql, qr) = bq.split_u();
            self.descend(pl, ql, u0, mid, v0, v1) && self.descend(pr, qr, mid, u1, v0, v1)
        } else {
            let mid = 0.5 * (v0 + v1);
            let (pl, pr) = bp.split_v();
            let (ql, qr) = bq.split_v();
            self.descend(pl, ql, u0, u1, v0, mid) && self.descend(pr, qr, u0, u1, mid, v1)
        }
    }
}

/// All common zeros of `p` and `q` in `[-1,1]²`, or `None` when the
/// subdivision could not certify the count (degenerate sample).
pub fn common_zeros_unit_box(p: &BivariatePoly, q: &BivariatePoly) -> Option<Vec<(f64, f64)>> {
    let mut solver = Solver {
        p,
        q,
        pu: p.partial_u(),
        pv: p.partial_v(),
        qu: q.partial_u(),
        qv: q.partial_v(),
        res_tol_p: 1e-9 * p.coeff_scale().max(1e-30),
        res_tol_q: 1e-9 * q.coeff_scale().max(1e-30),
        zeros: Vec::new(),
    };
    let bp = BernsteinPatch::from_power(p, -1.0, 1.0, -1.0, 1.0);
    let bq = BernsteinPatch::from_power(q, -1.0, 1.0, -1.0, 1.0);
    solver.descend(bp, bq, -1.0, 1.0, -1.0, 1.0).then_some(solver.zeros)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quadratic(c: f64, cu: f64, cv: f64, cuu: f64, cuv: f64, cvv: f64) -> BivariatePoly {
        // coefficients of 1, u, v, u², uv, v² laid out on a (2,2) grid.
        let mut coeffs = vec![0.0; 9];
        coeffs[0] = c;
        coeffs[1] = cu;
        coeffs[3] = cv;
        coeffs[2] = cuu;
        coeffs[4] = cuv;
        coeffs[6] = cvv;
        BivariatePoly::new(2, 2, coeffs)
    }

    #[test]
    fn evaluation_and_partials() {
        let p = quadratic(1.0, -2.0, 3.0, 0.5, 1.5, -0.25);
        let (u, v) = (0.4, -0.8);
        let direct = 1.0 - 2.0 * u + 3.0 * v + 0.5 * u * u + 1.5 * u * v - 0.25 * v * v;
        assert!((p.eval(u, v) - direct).abs() < 1e-14);
        let pu = p.partial_u();
        assert!((pu.eval(u, v) - (-2.0 + u + 1.5 * v)).abs() < 1e-14);
        let pv = p.partial_v();
        assert!((pv.eval(u, v) - (3.0 + 1.5 * u - 0.5 * v)).abs() < 1e-14);
    }

    /// Corner Bernstein coefficients are the corner values, and the full
    /// coefficient range brackets the values on a grid (convex hull).
    #[test]
    fn bernstein_corners_and_hull() {
        let p = quadratic(0.3, -1.2, 0.7, 2.0, -0.6, 1.1);
        let (u0, u1, v0, v1) = (-0.7, 0.4, 0.1, 0.9);
        let patch = BernsteinPatch::from_power(&p, u0, u1, v0, v1);
        let corner = |i: usize, j: usize| patch.b[i + j * (patch.du + 1)];
        assert!((corner(0, 0) - p.eval(u0, v0)).abs() < 1e-12);
        assert!((corner(2, 0) - p.eval(u1, v0)).abs() < 1e-12);
        assert!((corner(0, 2) - p.eval(u0, v1)).abs() < 1e-12);
        assert!((corner(2, 2) - p.eval(u1, v1)).abs() < 1e-12);
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for &b in &patch.b {
            lo = lo.min(b);
            hi = hi.max(b);
        }
        for i in 0..=10 {
            for j in 0..=10 {
                let u = u0 + (u1 - u0) * i as f64 / 10.0;
                let v = v0 + (v1 - v0) * j as f64 / 10.0;
                let val = p.eval(u, v);
                assert!(val >= lo - 1e-12 && val <= hi + 1e-12);
            }
        }
    }

    /// Splitting reproduces direct conversion on the half boxes.
    #[test]
    fn de_casteljau_split_agrees_with_reconversion() {
        let p = quadratic(0.2, 1.0, -0.5, -1.5, 0.8, 0.9);
        let whole = BernsteinPatch::from_power(&p, -1.0, 1.0, -1.0, 1.0);
        let (left, right) = whole.split_u();
        let left_direct = BernsteinPatch::from_power(&p, -1.0, 0.0, -1.0, 1.0);
        let right_direct = BernsteinPatch::from_power(&p, 0.0, 1.0, -1.0, 1.0);
        for k in 0..whole.b.len() {
            assert!((left.b[k] - left_direct.b[k]).abs() < 1e-12);
            assert!((right.b[k] - right_direct.b[k]).abs() < 1e-12);
        }
        let (bottom, top) = whole.split_v();
        let bottom_direct = BernsteinPatch::from_power(&p, -1.0, 1.0, -1.0, 0.0);
        let top_direct = BernsteinPatch::from_power(&p, -1.0, 1.0, 0.0, 1.0);
        for k in 0..whole.b.len() {
            assert!((bottom.b[k] - bottom_direct.b[k]).abs() < 1e-12);
            assert!((top.b[k] - top_direct.b[k]).abs() < 1e-12);
        }
    }

    #[test]
    fn crossing_lines_have_one_zero() {
        let p = BivariatePoly::new(1, 1, vec![-0.2, 1.0, 0.0, 0.0]); // u - 0.2
        let q = BivariatePoly::new(1, 1, vec![0.1, 0.0, 1.0, 0.0]); // v + 0.1
        let zeros = common_zeros_unit_box(&p, &q).unwrap();
        assert_eq!(zeros.len(), 1);
        assert!((zeros[0].0 - 0.2).abs() < 1e-10);
        assert!((zeros[0].1 + 0.1).abs() < 1e-10);
    }

    #[test]
    fn intersecting_circles() {
        // u² + v² = 0.5 and (u-0.3)² + v² = 0.5 meet at u = 0.15,
        // v = ±sqrt(0.4775).
        let p = quadratic(-0.5, 0.0, 0.0, 1.0, 0.0, 1.0);
        let q = quadratic(-0.5 + 0.09, -0.6, 0.0, 1.0, 0.0, 1.0);
        let mut zeros = common_zeros_unit_box(&p, &q).unwrap();
        zeros.sort_by(|a, b| a.1.total_cmp(&b.1));
        assert_eq!(zeros.len(), 2);
        let v_expected = 0.4775f64.sqrt();
        assert!((zeros[0].0 - 0.15).abs() < 1e-9);
        assert!((zeros[0].1 + v_expected).abs() < 1e-9);
        assert!((zeros[1].1 - v_expected).abs() < 1e-9);
    }

    #[test]
    fn cubic_meets_line_at_box_corners() {
        // v = u³ and v = u cross at (-1,-1), (0,0), (1,1); two of the three
        // sit exactly on the box boundary.
        let mut pc = vec![0.0; 16];
        pc[3] = -1.0; // -u³
        pc[4] = 1.0; // +v
        let p = BivariatePoly::new(3, 3, pc);
        let mut qc = vec![0.0; 16];
        qc[1] = -1.0; // -u
        qc[4] = 1.0; // +v
        let q = BivariatePoly::new(3, 3, qc);
        let zeros = common_zeros_unit_box(&p, &q).unwrap();
        assert_eq!(zeros.len(), 3);
    }

    #[test]
    fn disjoint_curves_have_no_zeros() {
        let p = quadratic(0.1, 0.0, 0.0, 1.0, 0.0, 1.0); // u² + v² + 0.1 > 0
        let q = quadratic(-0.3, 1.0, 1.0, 0.0, 0.0, 0.0);
        assert_eq!(common_zeros_unit_box(&p, &q).unwrap().len(), 0);
    }
}
