//! Per-root characteristic factors built from the Jacobi theta products.
//!
//! With `x = 2π√−1·v` the normalized ratios become
//!
//! ```text
//! v·θ'(0,τ)/θ(v,τ)     = (x/2)/sinh(x/2) · ∏_m (1−q^m)² / ((1−q^m e^x)(1−q^m e^−x))
//! θ1(v,τ)/θ1(0,τ)      = cosh(x/2)       · ∏_m (1+q^m e^x)(1+q^m e^−x) / (1+q^m)²
//! θ2(v,τ)/θ2(0,τ)      =                   ∏_m (1−q^(m−1/2) e^x)(1−q^(m−1/2) e^−x) / (1−q^(m−1/2))²
//! ```
//!
//! The `q^(1/8)` and `∏(1−q^j)` prefactors cancel in each ratio, so every
//! coefficient is rational and every factor is even in `x`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::One;

use crate::chern::RootSeries;
use crate::error::{Error, Result};
use crate::series::{rat, Rat, USeries};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ThetaKind {
    Theta,
    Theta1,
    Theta2,
}

/// Which genus a per-root factor computes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GenusKind {
    AHat,
    LHat,
    Ell1,
    Ell2,
    Witten,
}

impl GenusKind {
    pub const ALL: [GenusKind; 5] = [GenusKind::AHat, GenusKind::LHat, GenusKind::Ell1, GenusKind::Ell2, GenusKind::Witten];

    pub fn name(self) -> &'static str {
        match self {
            GenusKind::AHat => "ahat",
            GenusKind::LHat => "lhat",
            GenusKind::Ell1 => "ell1",
            GenusKind::Ell2 => "ell2",
            GenusKind::Witten => "witten",
        }
    }

    /// Value of the per-root factor at `x = 0`.
    pub fn unit(self) -> i64 {
        match self {
            GenusKind::Ell1 | GenusKind::LHat => 2,
            _ => 1,
        }
    }
}

impl fmt::Display for GenusKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for GenusKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "ahat" | "a-hat" => Ok(GenusKind::AHat),
            "lhat" | "l-hat" | "signature" => Ok(GenusKind::LHat),
            "ell1" => Ok(GenusKind::Ell1),
            "ell2" => Ok(GenusKind::Ell2),
            "witten" | "w" => Ok(GenusKind::Witten),
            other => Err(Error::Parse(format!("unknown genus {other:?}; expected ahat, lhat, ell1, ell2 or witten"))),
        }
    }
}

fn factorial(k: usize) -> BigInt {
    (1..=k).map(BigInt::from).product()
}

/// `Σ_k (λx)^{2k} / (2k + shift)!`; shift 0 gives `cosh(λx)`, shift 1 gives `sinh(λx)/(λx)`.
fn even_exponential(lambda: &Rat, shift: usize, xdeg: usize, uorder: usize) -> RootSeries {
    let lam2 = lambda * lambda;
    let mut pow = Rat::one();
    let terms = (0..xdeg.div_ceil(2)).map(|k| {
        let c = &pow / Rat::from_integer(factorial(2 * k + shift));
        pow *= &lam2;
        (2 * k, c)
    });
    RootSeries::from_rat_terms(xdeg, uorder, terms.collect::<Vec<_>>())
}

pub fn cosh_series(lambda: &Rat, xdeg: usize, uorder: usize) -> RootSeries {
    even_exponential(lambda, 0, xdeg, uorder)
}

/// `sinh(λx)/(λx)`.
pub fn sinhc_series(lambda: &Rat, xdeg: usize, uorder: usize) -> RootSeries {
    even_exponential(lambda, 1, xdeg, uorder)
}

/// `(x/2)/sinh(x/2)`, the Â per-root factor, with u-independent coefficients.
pub fn ahat_root(xdeg: usize, uorder: usize) -> RootSeries {
    sinhc_series(&rat(1, 2), xdeg, uorder).inv().expect("sinhc has constant term 1")
}

/// `x/tanh(x/2) = 2·cosh(x/2)·(x/2)/sinh(x/2)`.
pub fn lhat_root(xdeg: usize, uorder: usize) -> RootSeries {
    cosh_series(&rat(1, 2), xdeg, uorder).mul(&ahat_root(xdeg, uorder)).scale(&Rat::from_integer(BigInt::from(2)))
}

/// `1 + s·u^w·(e^x + e^−x) + u^{2w}` as a root series.
fn quadratic_in_cosh(sign: i64, w: usize, xdeg: usize, uorder: usize) -> RootSeries {
    let two_cosh = cosh_series(&Rat::one(), xdeg, uorder).scale(&Rat::from_integer(BigInt::from(2 * sign)));
    let shifted = two_cosh.scale_series(&USeries::monomial(w, Rat::one(), uorder));
    shifted
        .add(&RootSeries::one(xdeg, uorder))
        .add(&RootSeries::constant(USeries::monomial(2 * w, Rat::one(), uorder), xdeg))
}

/// `(1 + s·u^w)²` as a u-series.
fn square_binomial(sign: i64, w: usize, uorder: usize) -> USeries {
    let b = USeries::one(uorder).add(&USeries::monomial(w, Rat::from_integer(BigInt::from(sign)), uorder));
    b.mul(&b)
}

/// The m-th product factor of `kind` together with its u-weight.
pub fn theta_product_factor(kind: ThetaKind, m: usize, xdeg: usize, uorder: usize) -> (usize, RootSeries) {
    assert!(m >= 1, "product factors are indexed from 1");
    match kind {
        ThetaKind::Theta => {
            let w = 2 * m;
            let den = quadratic_in_cosh(-1, w, xdeg, uorder).inv().expect("x^0 coefficient is (1-q^m)^2");
            (w, den.scale_series(&square_binomial(-1, w, uorder)))
        }
        ThetaKind::Theta1 => {
            let w = 2 * m;
            let den = square_binomial(1, w, uorder).inv().expect("constant term 1");
            (w, quadratic_in_cosh(1, w, xdeg, uorder).scale_series(&den))
        }
        ThetaKind::Theta2 => {
            let w = 2 * m - 1;
            let den = square_binomial(-1, w, uorder).inv().expect("constant term 1");
            (w, quadratic_in_cosh(-1, w, xdeg, uorder).scale_series(&den))
        }
    }
}

/// Normalized per-root theta factor, even in `x`, equal to 1 at `x = 0`.
pub fn theta_factor(kind: ThetaKind, xdeg: usize, uorder: usize) -> Result<RootSeries> {
    if xdeg == 0 || uorder == 0 {
        return Err(Error::InvalidArgument("xdeg and uorder must be at least 1".into()));
    }
    let prefactor = match kind {
        ThetaKind::Theta => ahat_root(xdeg, uorder),
        ThetaKind::Theta1 => cosh_series(&rat(1, 2), xdeg, uorder),
        ThetaKind::Theta2 => RootSeries::one(xdeg, uorder),
    };
    let factors = (1..).map(move |m| theta_product_factor(kind, m, xdeg, uorder));
    Ok(prefactor.mul(&RootSeries::product(factors, xdeg, uorder)?))
}

/// Per-root factor of a genus; `Ell1` carries the factor 2 per root, so
/// `∏_{j≤2n}` reproduces the global `2^{2n}`.
pub fn genus_root_series(kind: GenusKind, xdeg: usize, uorder: usize) -> Result<RootSeries> {
    if xdeg == 0 || uorder == 0 {
        return Err(Error::InvalidArgument("xdeg and uorder must be at least 1".into()));
    }
    Ok(match kind {
        GenusKind::AHat => ahat_root(xdeg, uorder),
        GenusKind::LHat => lhat_root(xdeg, uorder),
        GenusKind::Ell1 => theta_factor(ThetaKind::Theta, xdeg, uorder)?
            .mul(&theta_factor(ThetaKind::Theta1, xdeg, uorder)?)
            .scale(&Rat::from_integer(BigInt::from(2))),
        GenusKind::Ell2 => theta_factor(ThetaKind::Theta, xdeg, uorder)?.mul(&theta_factor(ThetaKind::Theta2, xdeg, uorder)?),
        GenusKind::Witten => theta_factor(ThetaKind::Theta, xdeg, uorder)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::rat_int;
    use num_traits::Zero;

    /// Bernoulli-free Taylor oracle: coefficients of y/sinh(y) by long division of power series.
    fn y_over_sinh_oracle(terms: usize) -> Vec<Rat> {
        let s: Vec<Rat> = (0..terms).map(|k| Rat::one() / Rat::from_integer(factorial(2 * k + 1))).collect();
        let mut inv = vec![Rat::zero(); terms];
        inv[0] = Rat::one();
        for k in 1..terms {
            let acc: Rat = (1..=k).map(|j| &s[j] * &inv[k - j]).sum();
            inv[k] = -acc;
        }
        inv
    }

    #[test]
    fn theta_u0_is_ahat() {
        let f = theta_factor(ThetaKind::Theta, 9, 6).unwrap();
        assert_eq!(f.coeff(2).coeff(0), rat(-1, 24));
        assert_eq!(f.coeff(4).coeff(0), rat(7, 5760));
        let oracle = y_over_sinh_oracle(5);
        for (k, o) in oracle.iter().enumerate() {
            // (x/2)/sinh(x/2): coefficient of x^{2k} is oracle_k / 4^k
            let expected = o / Rat::from_integer(BigInt::from(4).pow(k as u32));
            assert_eq!(f.coeff(2 * k).coeff(0), expected);
        }
    }

    #[test]
    fn factors_are_one_at_x0() {
        for kind in [ThetaKind::Theta, ThetaKind::Theta1, ThetaKind::Theta2] {
            let f = theta_factor(kind, 7, 10).unwrap();
            assert_eq!(f.coeff(0), USeries::one(10), "{kind:?}");
            assert!(f.is_even());
        }
    }

    #[test]
    fn theta2_first_u_coefficient() {
        // u¹ coefficient is −(e^x + e^−x − 2) = −x² − x⁴/12 − x⁶/360
        let f = theta_factor(ThetaKind::Theta2, 8, 4).unwrap();
        assert_eq!(f.coeff(2).coeff(1), rat_int(-1));
        assert_eq!(f.coeff(4).coeff(1), rat(-1, 12));
        assert_eq!(f.coeff(6).coeff(1), rat(-1, 360));
    }

    #[test]
    fn theta_first_q_coefficient_by_direct_expansion() {
        // m = 1 factor to first order in q: 1 + q(e^x + e^−x − 2); no other factor reaches q¹
        let f = theta_factor(ThetaKind::Theta, 7, 4).unwrap();
        let base = ahat_root(7, 4);
        let two_cosh_minus_two = cosh_series(&Rat::one(), 7, 4).scale(&rat_int(2)).sub(&RootSeries::one(7, 4).scale(&rat_int(2)));
        let expected = base.mul(&two_cosh_minus_two);
        for k in 0..7 {
            assert_eq!(f.coeff(k).coeff(2), expected.coeff(k).coeff(0), "x^{k}");
            assert_eq!(f.coeff(k).coeff(1), Rat::zero());
        }
    }

    #[test]
    fn genus_root_series_examples() {
        let xdeg = 9;
        let ell1 = genus_root_series(GenusKind::Ell1, xdeg, 8).unwrap();
        assert_eq!(ell1.at_u0(), lhat_root(xdeg, 1));
        // x/tanh(x/2) = 2 + x²/6 − x⁴/360 + …
        assert_eq!(ell1.coeff(0).coeff(0), rat_int(2));
        assert_eq!(ell1.coeff(2).coeff(0), rat(1, 6));
        assert_eq!(ell1.coeff(4).coeff(0), rat(-1, 360));

        let ell2 = genus_root_series(GenusKind::Ell2, xdeg, 8).unwrap();
        assert_eq!(ell2.at_u0(), ahat_root(xdeg, 1));

        let witten = genus_root_series(GenusKind::Witten, xdeg, 8).unwrap();
        let theta2 = theta_factor(ThetaKind::Theta2, xdeg, 8).unwrap();
        assert_eq!(witten.mul(&theta2), ell2);
    }

    #[test]
    fn support_and_units() {
        for kind in GenusKind::ALL {
            let f = genus_root_series(kind, 7, 12).unwrap();
            assert!(f.is_even(), "{kind}");
            assert_eq!(f.coeff(0), USeries::constant(rat_int(kind.unit()), 12), "{kind}");
            let integral_q = f.terms().all(|(_, c)| c.has_even_support());
            match kind {
                GenusKind::Ell2 => assert!(!integral_q),
                _ => assert!(integral_q, "{kind}"),
            }
        }
    }

    #[test]
    fn product_factors_respect_weights() {
        for kind in [ThetaKind::Theta, ThetaKind::Theta1, ThetaKind::Theta2] {
            for m in 1..6 {
                let (w, f) = theta_product_factor(kind, m, 7, 14);
                let dev = f.sub(&RootSeries::one(7, 14));
                let min = dev.terms().filter_map(|(_, c)| c.valuation()).min().unwrap();
                assert!(min >= w, "{kind:?} m={m}");
                let expected = if kind == ThetaKind::Theta2 { 2 * m - 1 } else { 2 * m };
                assert_eq!(w, expected);
            }
        }
    }

    #[test]
    fn truncation_consistency() {
        let big = genus_root_series(GenusKind::Ell2, 9, 14).unwrap();
        let small = genus_root_series(GenusKind::Ell2, 7, 6).unwrap();
        assert_eq!(big.truncate(7, 6), small);
    }

    #[test]
    fn parse_names() {
        assert_eq!("Ell2".parse::<GenusKind>().unwrap(), GenusKind::Ell2);
        assert!("ell3".parse::<GenusKind>().is_err());
    }
}
