//! The forms `δ1, ε1` (level `Γ0(2)`) and `δ2, ε2` (level `Γ^0(2)`), the
//! decomposition `Ell2 = Σ h_r (8δ2)^{n−2r} ε2^r`, and the matching `Ell1`.
//!
//! All series are in `u = q^(1/2)`; `δ1, ε1` have even support.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::series::{rat, rat_int, Rat, USeries};

fn divisors(n: u64) -> impl Iterator<Item = u64> {
    (1..=n).filter(move |d| n.is_multiple_of(*d))
}

/// `Σ_{d|n, d odd} d`.
fn sigma_odd(n: u64) -> i64 {
    divisors(n).filter(|d| d % 2 == 1).sum::<u64>() as i64
}

/// `1/4 + 6 Σ σ_odd(n) q^n`.
pub fn delta1(uorder: usize) -> USeries {
    let terms = (1..).map(|k| 2 * k).take_while(|&e| e < uorder).map(|e| (e, rat_int(6 * sigma_odd(e as u64 / 2))));
    USeries::from_terms(uorder, std::iter::once((0, rat(1, 4))).chain(terms))
}

/// `1/16 + Σ (Σ_{d|n} (−1)^d d³) q^n`.
pub fn eps1(uorder: usize) -> USeries {
    let coeff = |n: u64| -> i64 { divisors(n).map(|d| if d % 2 == 0 { 1 } else { -1 } * (d * d * d) as i64).sum() };
    let terms = (1..).map(|k| 2 * k).take_while(|&e| e < uorder).map(|e| (e, rat_int(coeff(e as u64 / 2))));
    USeries::from_terms(uorder, std::iter::once((0, rat(1, 16))).chain(terms))
}

/// `−1/8 − 3 Σ σ_odd(n) q^{n/2}`.
pub fn delta2(uorder: usize) -> USeries {
    let terms = (1..uorder).map(|k| (k, rat_int(-3 * sigma_odd(k as u64))));
    USeries::from_terms(uorder, std::iter::once((0, rat(-1, 8))).chain(terms))
}

/// `Σ (Σ_{d|n, n/d odd} d³) q^{n/2}`.
pub fn eps2(uorder: usize) -> USeries {
    let coeff = |n: u64| -> i64 { divisors(n).filter(|d| (n / d) % 2 == 1).map(|d| (d * d * d) as i64).sum() };
    USeries::from_terms(uorder, (1..uorder).map(|k| (k, rat_int(coeff(k as u64)))))
}

/// Coordinates `h_0…h_{⌊n/2⌋}` of a weight-`2n` form in the basis `(8δ)^{n−2r} ε^r`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModBasisDecomp {
    pub n: usize,
    pub h: Vec<Rat>,
}

impl ModBasisDecomp {
    pub fn new(n: usize, h: Vec<Rat>) -> Result<Self> {
        if h.len() != n / 2 + 1 {
            return Err(Error::InvalidArgument(format!("expected {} basis coordinates for n = {n}, got {}", n / 2 + 1, h.len())));
        }
        Ok(ModBasisDecomp { n, h })
    }

    pub fn is_integral(&self) -> bool {
        self.h.iter().all(|c| c.is_integer())
    }
}

/// `Σ h_r (8δ)^{n−2r} ε^r` for the given pair of forms.
fn combine(n: usize, h: &[Rat], delta: &USeries, eps: &USeries) -> USeries {
    let d8 = delta.scale(&rat_int(8));
    let mut acc = USeries::zero(delta.order());
    for (r, hr) in h.iter().enumerate() {
        if hr.is_zero() {
            continue;
        }
        let basis = d8.pow((n - 2 * r) as i64).expect("non-negative power").mul(&eps.pow(r as i64).expect("non-negative power"));
        acc = acc.add(&basis.scale(hr));
    }
    acc
}

/// `Σ h_r (8δ2)^{n−2r} ε2^r`.
pub fn ell2_from_basis(d: &ModBasisDecomp, uorder: usize) -> USeries {
    combine(d.n, &d.h, &delta2(uorder), &eps2(uorder))
}

/// Solves for `h` from `u^0…u^{⌊n/2⌋}` and checks the remaining coefficients.
pub fn expand_in_basis(e2: &USeries, n: usize) -> Result<ModBasisDecomp> {
    let order = e2.order();
    let top = n / 2;
    if order < top + 1 {
        return Err(Error::InvalidArgument(format!("series order {order} is below the {} coefficients needed for n = {n}", top + 1)));
    }
    let d8 = delta2(order).scale(&rat_int(8));
    let e = eps2(order);
    // basis_r = (−1)^n u^r + O(u^{r+1})
    let basis: Vec<USeries> =
        (0..=top).map(|r| d8.pow((n - 2 * r) as i64).expect("non-negative power").mul(&e.pow(r as i64).expect("non-negative power"))).collect();
    let mut rest = e2.clone();
    let mut h = Vec::with_capacity(top + 1);
    for (r, b) in basis.iter().enumerate() {
        let hr = rest.coeff(r) / b.coeff(r);
        rest = rest.sub(&b.scale(&hr));
        h.push(hr);
    }
    if let Some(k) = rest.valuation() {
        return Err(Error::ResidualNonzero(k));
    }
    Ok(ModBasisDecomp { n, h })
}

/// `2^{2n} Σ h_r (8δ1)^{n−2r} ε1^r`.
pub fn reconstruct_ell1(d: &ModBasisDecomp, uorder: usize) -> USeries {
    let scale = Rat::from_integer(BigInt::from(1) << (2 * d.n));
    combine(d.n, &d.h, &delta1(uorder), &eps1(uorder)).scale(&scale)
}

/// `Σ c_k e^{π√−1 τ k}` with a geometric estimate of the truncation tail.
///
/// The tail bound takes the largest coefficient magnitude among the last
/// quarter of retained terms, inflates it by `((K+1)/K)^4` for polynomial
/// growth, and sums the geometric tail `|u|^K/(1−|u|)`.
pub fn numeric_eval(s: &USeries, tau: Complex64) -> Result<(Complex64, f64)> {
    if tau.im <= 0.0 || !tau.im.is_finite() || !tau.re.is_finite() {
        return Err(Error::NotInUpperHalfPlane);
    }
    let u = (Complex64::i() * std::f64::consts::PI * tau).exp();
    let mut value = Complex64::zero();
    for (k, c) in s.terms() {
        value += c.to_f64().unwrap_or(f64::NAN) * u.powu(k as u32);
    }
    let k = s.order();
    let a = u.norm();
    let tail = if k == 0 {
        0.0
    } else {
        let from = k - k.div_ceil(4);
        let cmax = s.terms().filter(|(e, _)| *e >= from).map(|(_, c)| c.to_f64().unwrap_or(f64::INFINITY).abs()).fold(0.0, f64::max);
        let growth = ((k as f64 + 1.0) / k as f64).powi(4);
        cmax * growth * a.powi(k as i32) / (1.0 - a)
    };
    Ok((value, tail))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::USeries;
    use num_rational::BigRational;

    fn ints(order: usize, v: &[i64]) -> USeries {
        USeries::from_ints(order, v)
    }

    #[test]
    fn printed_coefficients() {
        let d1 = delta1(6);
        assert_eq!([d1.coeff(0), d1.coeff(2), d1.coeff(4)], [rat(1, 4), rat_int(6), rat_int(6)]);
        let e1 = eps1(6);
        assert_eq!([e1.coeff(0), e1.coeff(2), e1.coeff(4)], [rat(1, 16), rat_int(-1), rat_int(7)]);
        let d2 = delta2(3);
        assert_eq!([d2.coeff(0), d2.coeff(1), d2.coeff(2)], [rat(-1, 8), rat_int(-3), rat_int(-3)]);
        let e2 = eps2(4);
        assert_eq!([e2.coeff(0), e2.coeff(1), e2.coeff(2), e2.coeff(3)], [rat_int(0), rat_int(1), rat_int(8), rat_int(28)]);
        assert!(d1.has_even_support() && e1.has_even_support());
    }

    #[test]
    fn decomposition_examples() {
        let k3 = ints(6, &[2, 48]);
        let full = ell2_from_basis(&ModBasisDecomp::new(1, vec![rat_int(-2)]).unwrap(), 6);
        assert_eq!(full.truncate(2), k3.truncate(2));
        let d = expand_in_basis(&full, 1).unwrap();
        assert_eq!(d.h, vec![rat_int(-2)]);
        assert!(d.is_integral());

        let z = expand_in_basis(&USeries::zero(8), 3).unwrap();
        assert!(z.h.iter().all(Zero::is_zero));

        assert!(matches!(expand_in_basis(&ints(4, &[2, 47]), 1), Err(Error::ResidualNonzero(1))));
        assert!(matches!(expand_in_basis(&ints(1, &[2]), 2), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn reconstruct_examples() {
        let d = ModBasisDecomp::new(1, vec![rat_int(-2)]).unwrap();
        let e1 = reconstruct_ell1(&d, 4);
        assert_eq!(e1, ints(4, &[-16, 0, -384]));
        assert!(reconstruct_ell1(&ModBasisDecomp::new(2, vec![rat_int(0), rat_int(0)]).unwrap(), 6).is_zero());
    }

    #[test]
    fn planted_vectors_recovered() {
        let planted: [&[i64]; 4] = [&[3], &[1, -5], &[-7, 2], &[4, 0, 9]];
        for (i, h) in planted.iter().enumerate() {
            let n = [1, 2, 3, 4][i];
            let h: Vec<BigRational> = h.iter().map(|&c| rat_int(c)).collect();
            let d = ModBasisDecomp::new(n, h).unwrap();
            assert_eq!(expand_in_basis(&ell2_from_basis(&d, 12), n).unwrap(), d);
        }
    }

    #[test]
    fn numeric_transformation_laws() {
        let i = Complex64::i();
        let (d1, t1) = numeric_eval(&delta1(40), i).unwrap();
        let (d2, t2) = numeric_eval(&delta2(40), i).unwrap();
        assert!((d2 + d1).norm() < 1e-9 && t1 < 1e-9 && t2 < 1e-9);
        let (e1, _) = numeric_eval(&eps1(40), i).unwrap();
        let (e2, _) = numeric_eval(&eps2(40), i).unwrap();
        assert!((e2 - e1).norm() < 1e-9);

        let (d1, _) = numeric_eval(&delta1(40), 2.0 * i).unwrap();
        let (d2, _) = numeric_eval(&delta2(40), 0.5 * i).unwrap();
        assert!((d2 - (2.0 * i).powu(2) * d1).norm() < 1e-8);
        let (e1, _) = numeric_eval(&eps1(40), 2.0 * i).unwrap();
        let (e2, _) = numeric_eval(&eps2(40), 0.5 * i).unwrap();
        assert!((e2 - (2.0 * i).powu(4) * e1).norm() < 1e-8);

        assert_eq!(numeric_eval(&USeries::constant(rat_int(5), 3), Complex64::new(0.3, 0.7)).unwrap().0, Complex64::new(5.0, 0.0));
        assert!(matches!(numeric_eval(&delta1(4), Complex64::new(0.0, -1.0)), Err(Error::NotInUpperHalfPlane)));
    }
}
