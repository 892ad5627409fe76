//! Poincaré–Sobolev radius constant `C(b)` and the Moser iteration constant.
//!
//! Double precision throughout, with explicit tolerances.

use crate::error::{Error, Result};

/// Tolerance used where a caller does not supply one.
pub const DEFAULT_TOL: f64 = 1e-12;

const MAX_BISECTIONS: usize = 400;
const MAX_DEPTH: usize = 60;

/// `∫_0^π sin^{m−1} t dt` via `I_k = ((k−1)/k) I_{k−2}`, `I_0 = π`, `I_1 = 2`.
///
/// # Panics
/// If `m == 0`.
pub fn wallis(m: u32) -> f64 {
    assert!(m >= 1, "wallis needs m >= 1");
    let k = m - 1;
    let mut i = if k.is_multiple_of(2) { std::f64::consts::PI } else { 2.0 };
    let mut j = if k.is_multiple_of(2) { 2 } else { 3 };
    while j <= k {
        i *= (j - 1) as f64 / j as f64;
        j += 2;
    }
    i
}

/// Adaptive Simpson quadrature to absolute tolerance `tol`.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> f64 {
    let fa = f(a);
    let fb = f(b);
    let mid = 0.5 * (a + b);
    let fm = f(mid);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    simpson_step(&f, a, b, fa, fm, fb, whole, tol, MAX_DEPTH)
}

#[allow(clippy::too_many_arguments)]
fn simpson_step<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64, depth: usize) -> f64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    // below rounding noise further splitting cannot change the estimate
    let floor = 64.0 * f64::EPSILON * (left.abs() + right.abs());
    if depth == 0 || delta.abs() <= 15.0 * tol.max(floor) {
        return left + right + delta / 15.0;
    }
    simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) + simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
}

fn check_m(m: u32) -> Result<()> {
    if m < 2 {
        return Err(Error::InvalidArgument(format!("dimension m must be at least 2, got {m}")));
    }
    Ok(())
}

fn check_positive(name: &str, v: f64) -> Result<()> {
    if !(v > 0.0 && v.is_finite()) {
        return Err(Error::InvalidArgument(format!("{name} must be positive and finite, got {v}")));
    }
    Ok(())
}

/// `x·∫_0^b (cosh t + x sinh t)^{m−1} dt`, integrated to absolute tolerance `tol`.
pub fn sobolev_lhs(m: u32, b: f64, x: f64, tol: f64) -> f64 {
    let e = (m - 1) as i32;
    adaptive_simpson(|t| x * (t.cosh() + x * t.sinh()).powi(e), 0.0, b, tol)
}

/// Unique positive root `x` of `x·∫_0^b (cosh t + x sinh t)^{m−1} dt = wallis(m)`.
///
/// The left side is strictly increasing in `x`, so bisection on
/// `[tiny, wallis/F(0) + 1]` is safe.
pub fn sobolev_c(m: u32, b: f64, tol: f64) -> Result<f64> {
    Ok(sobolev_solve(m, b, tol)?.0)
}

/// `sobolev_c` together with the signed residual `x·F(x) − wallis(m)`.
pub fn sobolev_solve(m: u32, b: f64, tol: f64) -> Result<(f64, f64)> {
    check_m(m)?;
    check_positive("b", b)?;
    check_positive("tol", tol)?;
    let w = wallis(m);
    let qtol = tol / 10.0;
    let e = (m - 1) as i32;
    let f0 = adaptive_simpson(|t| t.cosh().powi(e), 0.0, b, qtol);
    let mut lo = f64::MIN_POSITIVE;
    let mut hi = w / f0 + 1.0;
    for _ in 0..MAX_BISECTIONS {
        let mid = 0.5 * (lo + hi);
        let r = sobolev_lhs(m, b, mid, qtol) - w;
        if r.abs() < tol {
            return Ok((mid, r));
        }
        if r > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
        if hi - lo <= f64::EPSILON * hi {
            break;
        }
    }
    Err(Error::ToleranceNotReached { tol, iterations: MAX_BISECTIONS })
}

/// `R = diam / (b·C(b))`.
pub fn radius_r(diam: f64, b: f64, m: u32) -> Result<f64> {
    check_positive("diam", diam)?;
    Ok(diam / (b * sobolev_c(m, b, DEFAULT_TOL)?))
}

/// `vol(S^m(1))` via `vol S^m = 2π/(m−1)·vol S^{m−2}`.
pub fn sphere_volume(m: u32) -> f64 {
    let mut v = if m.is_multiple_of(2) { 2.0 } else { 2.0 * std::f64::consts::PI };
    let mut k = if m.is_multiple_of(2) { 2 } else { 3 };
    while k <= m {
        v *= 2.0 * std::f64::consts::PI / (k - 1) as f64;
        k += 2;
    }
    v
}

/// `S_{l1,l2} = (V/vol S^m)^{1/l1 − 1/l2}·R·Σ`, for `1 ≤ l1 ≤ m·l2/(m−l2)`.
pub fn poincare_s(l1: f64, l2: f64, v: f64, r: f64, m: u32, sigma: f64) -> Result<f64> {
    check_m(m)?;
    for (name, x) in [("V", v), ("R", r), ("Sigma", sigma)] {
        check_positive(name, x)?;
    }
    if !l1.is_finite() || l1 < 1.0 || l2.is_nan() || l2 < 1.0 {
        return Err(Error::ExponentRangeViolation(format!("need finite l1 >= 1 and l2 >= 1, got l1 = {l1}, l2 = {l2}")));
    }
    let mf = m as f64;
    if l2 < mf && l1 > mf * l2 / (mf - l2) {
        return Err(Error::ExponentRangeViolation(format!("l1 = {l1} exceeds m·l2/(m−l2) = {}", mf * l2 / (mf - l2))));
    }
    Ok((v / sphere_volume(m)).powf(1.0 / l1 - 1.0 / l2) * r * sigma)
}

/// Exponents of the Moser iteration in dimension `m` for `L^p` curvature control.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MoserExponents {
    pub m: u32,
    pub p: f64,
    pub mu: f64,
    pub eps: f64,
    pub k1: f64,
    pub k2: f64,
}

impl MoserExponents {
    /// `μ = m/(m−2)`, `ε = (μ(p−1)−p)/(p(μ−1))`, `K1 = Σ i μ^{−i}`, `K2 = Σ μ^{−i}` in closed form.
    pub fn new(m: u32, p: f64) -> Result<Self> {
        if m < 3 {
            return Err(Error::InvalidArgument(format!("dimension m must be at least 3, got {m}")));
        }
        let mf = m as f64;
        if !p.is_finite() || p <= mf / 2.0 {
            return Err(Error::ExponentRangeViolation(format!("p = {p} must exceed m/2 = {}", mf / 2.0)));
        }
        let mu = mf / (mf - 2.0);
        let eps = (mu * (p - 1.0) - p) / (p * (mu - 1.0));
        let r = 1.0 / mu;
        Ok(MoserExponents { m, p, mu, eps, k1: r / ((1.0 - r) * (1.0 - r)), k2: 1.0 / (1.0 - r) })
    }

    /// `p(μ−1)/(μ(p−1)−p)`.
    pub fn radius_exponent(&self) -> f64 {
        self.p * (self.mu - 1.0) / (self.mu * (self.p - 1.0) - self.p)
    }

    /// `(1/2)(μ−1)/(μ(p−1)−p)`.
    pub fn lambda_exponent(&self) -> f64 {
        0.5 * (self.mu - 1.0) / (self.mu * (self.p - 1.0) - self.p)
    }
}

/// `μ^{2K1·a}·B^{2K2}` with `B = C(m,p)·Λ^{c}·R^{a} + 2`, `a` the radius exponent.
pub fn moser_constant(m: u32, p: f64, r: f64, lambda: f64, cmp: f64) -> Result<f64> {
    let e = MoserExponents::new(m, p)?;
    check_positive("R", r)?;
    check_positive("C(m,p)", cmp)?;
    if !(lambda >= 0.0 && lambda.is_finite()) {
        return Err(Error::InvalidArgument(format!("Lambda must be non-negative and finite, got {lambda}")));
    }
    let a = e.radius_exponent();
    let b = cmp * lambda.powf(e.lambda_exponent()) * r.powf(a) + 2.0;
    Ok(e.mu.powf(2.0 * e.k1 * a) * b.powf(2.0 * e.k2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn wallis_examples() {
        assert_eq!(wallis(2), 2.0);
        assert!((wallis(3) - PI / 2.0).abs() < 1e-15);
        assert!((wallis(5) - 3.0 * PI / 8.0).abs() < 1e-15);
        for m in 1..=20 {
            let q = adaptive_simpson(|t| t.sin().powi(m as i32 - 1), 0.0, PI, 1e-13);
            assert!((wallis(m) - q).abs() < 1e-10, "m={m}");
        }
    }

    #[test]
    fn sphere_volumes() {
        assert!((sphere_volume(2) - 4.0 * PI).abs() < 1e-12);
        assert!((sphere_volume(3) - 2.0 * PI * PI).abs() < 1e-12);
        assert!((sphere_volume(4) - 8.0 * PI * PI / 3.0).abs() < 1e-12);
    }

    #[test]
    fn sobolev_residual_and_monotonicity() {
        let (x, r) = sobolev_solve(16, 1.0, 1e-10).unwrap();
        assert!(r.abs() < 1e-10);
        assert!((sobolev_lhs(16, 1.0, x, 1e-13) - wallis(16)).abs() < 1e-10);
        for m in [2, 3, 7] {
            let cs: Vec<f64> = [0.1, 0.5, 1.0, 2.0, 4.0].iter().map(|&b| sobolev_c(m, b, 1e-11).unwrap()).collect();
            assert!(cs.windows(2).all(|w| w[0] > w[1]), "m={m}: {cs:?}");
        }
        assert!(matches!(sobolev_c(1, 1.0, 1e-8), Err(Error::InvalidArgument(_))));
        assert!(matches!(sobolev_c(3, 0.0, 1e-8), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn small_b_limit() {
        // x·F(x) ≈ ((1+xb)^m − 1)/m once b is small, so b·C(b) → (1 + m·wallis)^{1/m} − 1
        for m in [2u32, 3, 5, 8] {
            let b = 1e-4;
            let bc = b * sobolev_c(m, b, 1e-12).unwrap();
            let limit = (1.0 + m as f64 * wallis(m)).powf(1.0 / m as f64) - 1.0;
            assert!(((bc - limit) / limit).abs() < 1e-3, "m={m}: {bc} vs {limit}");
        }
        let r = radius_r(1.0, 1e-4, 3).unwrap();
        assert!((r - 1.0 / ((1.0 + 3.0 * wallis(3)).cbrt() - 1.0)).abs() < 1e-2);
    }

    #[test]
    fn radius_scales_with_diameter() {
        let a = radius_r(1.0, 0.7, 5).unwrap();
        let b = radius_r(2.0, 0.7, 5).unwrap();
        assert!((b - 2.0 * a).abs() < 1e-12 * b);
    }

    #[test]
    fn poincare_examples() {
        assert!((poincare_s(2.0, 2.0, 3.0, 1.5, 4, 0.7).unwrap() - 1.05).abs() < 1e-15);
        assert!((poincare_s(1.0, 2.0, sphere_volume(4), 1.5, 4, 0.7).unwrap() - 1.05).abs() < 1e-12);
        let s1 = poincare_s(1.5, 2.0, 9.0, 1.0, 4, 0.3).unwrap();
        let s2 = poincare_s(1.5, 2.0, 9.0, 2.0, 4, 0.3).unwrap();
        assert!((s2 - 2.0 * s1).abs() < 1e-12);
        assert!(matches!(poincare_s(5.0, 2.0, 1.0, 1.0, 4, 1.0), Err(Error::ExponentRangeViolation(_))));
        assert!(matches!(poincare_s(0.5, 2.0, 1.0, 1.0, 4, 1.0), Err(Error::ExponentRangeViolation(_))));
        assert!(poincare_s(4.0, 2.0, 1.0, 1.0, 4, 1.0).is_ok());
    }

    #[test]
    fn moser_examples() {
        let e = MoserExponents::new(4, 3.0).unwrap();
        assert_eq!((e.mu, e.k1, e.k2), (2.0, 2.0, 2.0));
        assert!((e.eps - 1.0 / 3.0).abs() < 1e-15);
        for (m, p) in [(3u32, 1.6), (5, 2.6), (10, 7.0), (20, 50.0)] {
            let e = MoserExponents::new(m, p).unwrap();
            assert!(e.eps > 0.0 && e.eps < 1.0);
            let k1: f64 = (0..=2000).map(|i| i as f64 * e.mu.powi(-i)).sum();
            let k2: f64 = (0..=2000).map(|i| e.mu.powi(-i)).sum();
            assert!((k1 - e.k1).abs() < 1e-12 * e.k1.max(1.0));
            assert!((k2 - e.k2).abs() < 1e-12 * e.k2.max(1.0));
        }
        assert!(matches!(MoserExponents::new(4, 2.0), Err(Error::ExponentRangeViolation(_))));

        let a = e.radius_exponent();
        let expect = e.mu.powf(2.0 * e.k1 * a) * 2f64.powf(2.0 * e.k2);
        assert!((moser_constant(4, 3.0, 1.7, 0.0, 123.0).unwrap() - expect).abs() < 1e-12 * expect);

        let rs = [0.5, 1.0, 2.0, 4.0].map(|r| moser_constant(5, 4.0, r, 1.0, 1.0).unwrap());
        assert!(rs.windows(2).all(|w| w[0] < w[1]));
        let ls = [0.1, 1.0, 2.0, 4.0].map(|l| moser_constant(5, 4.0, 1.0, l, 1.0).unwrap());
        assert!(ls.windows(2).all(|w| w[0] < w[1]));
    }
}
