//! Truncated power series in `u = q^(1/2)` with exact rational coefficients.
//!
//! Integral q-series (`Ell1`, the Witten genus, δ₁, ε₁) simply have even
//! support in `u`. A series carries its truncation order `K`: it represents
//! the class of a power series modulo `u^K`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};

/// Exact rational number, always in lowest terms with positive denominator.
pub type Rat = BigRational;

/// Truncation order in `u` used when a caller does not choose one.
pub const DEFAULT_UORDER: usize = 24;

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// `"7"` for integers, `"-3/8"` otherwise.
pub fn fmt_rat(r: &Rat) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn parse_rat(s: &str) -> Result<Rat> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational number: {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Rat::new(n, d))
        }
        None => Ok(Rat::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

/// A power series `Σ c_k u^k` known modulo `u^order`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct USeries {
    order: usize,
    coeffs: BTreeMap<usize, Rat>,
}

impl USeries {
    pub fn zero(order: usize) -> Self {
        USeries { order, coeffs: BTreeMap::new() }
    }

    pub fn one(order: usize) -> Self {
        Self::constant(Rat::one(), order)
    }

    pub fn constant(c: Rat, order: usize) -> Self {
        Self::monomial(0, c, order)
    }

    /// `c·u^k`, or zero when `k >= order`.
    pub fn monomial(k: usize, c: Rat, order: usize) -> Self {
        let mut s = Self::zero(order);
        s.set(k, c);
        s
    }

    /// Builds a series from `(exponent, coefficient)` pairs; repeated exponents add up.
    pub fn from_terms<I: IntoIterator<Item = (usize, Rat)>>(order: usize, terms: I) -> Self {
        let mut s = Self::zero(order);
        for (k, c) in terms {
            let cur = s.coeff(k);
            s.set(k, cur + c);
        }
        s
    }

    /// Dense constructor: `coeffs[k]` is the coefficient of `u^k`.
    pub fn from_dense(order: usize, coeffs: Vec<Rat>) -> Self {
        Self::from_terms(order, coeffs.into_iter().enumerate())
    }

    pub fn from_ints(order: usize, coeffs: &[i64]) -> Self {
        Self::from_terms(order, coeffs.iter().map(|&c| rat_int(c)).enumerate())
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn coeff(&self, k: usize) -> Rat {
        self.coeffs.get(&k).cloned().unwrap_or_else(Rat::zero)
    }

    fn set(&mut self, k: usize, c: Rat) {
        if k >= self.order || c.is_zero() {
            self.coeffs.remove(&k);
        } else {
            self.coeffs.insert(k, c);
        }
    }

    /// Nonzero terms in ascending exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (usize, &Rat)> {
        self.coeffs.iter().map(|(&k, c)| (k, c))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Lowest exponent with a nonzero coefficient.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.keys().next().copied()
    }

    /// True when every nonzero term has an even exponent, i.e. the series is integral in q.
    pub fn has_even_support(&self) -> bool {
        self.coeffs.keys().all(|k| k % 2 == 0)
    }

    pub fn truncate(&self, order: usize) -> Self {
        let order = order.min(self.order);
        USeries {
            order,
            coeffs: self.coeffs.range(..order).map(|(&k, c)| (k, c.clone())).collect(),
        }
    }

    /// Same coefficients declared with a larger order; only sound for series known exactly.
    pub(crate) fn with_order(&self, order: usize) -> Self {
        USeries {
            order,
            coeffs: self.coeffs.range(..order).map(|(&k, c)| (k, c.clone())).collect(),
        }
    }

    pub fn scale(&self, r: &Rat) -> Self {
        if r.is_zero() {
            return Self::zero(self.order);
        }
        USeries {
            order: self.order,
            coeffs: self.coeffs.iter().map(|(&k, c)| (k, c * r)).collect(),
        }
    }

    /// Multiplication by `u^s`.
    pub fn shift(&self, s: usize) -> Self {
        USeries {
            order: self.order,
            coeffs: self
                .coeffs
                .iter()
                .filter(|(&k, _)| k + s < self.order)
                .map(|(&k, c)| (k + s, c.clone()))
                .collect(),
        }
    }

    /// Substitutes `u -> u^2`, turning a q-series written in `u` into the same
    /// coefficients written in `q`. The order becomes `min(2·order, cap)`.
    pub fn stretch(&self, cap: usize) -> Self {
        let order = (2 * self.order).min(cap);
        Self::from_terms(order, self.terms().map(|(k, c)| (2 * k, c.clone())))
    }

    fn dense(&self, len: usize) -> Vec<Rat> {
        let mut v = vec![Rat::zero(); len];
        for (&k, c) in self.coeffs.range(..len) {
            v[k] = c.clone();
        }
        v
    }

    pub fn add(&self, other: &Self) -> Self {
        let order = self.order.min(other.order);
        let mut out = self.truncate(order);
        for (&k, c) in other.coeffs.range(..order) {
            let cur = out.coeff(k);
            out.set(k, cur + c);
        }
        out
    }

    pub fn neg(&self) -> Self {
        USeries {
            order: self.order,
            coeffs: self.coeffs.iter().map(|(&k, c)| (k, -c)).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    /// Cauchy product truncated to the smaller of the two orders.
    pub fn mul(&self, other: &Self) -> Self {
        let order = self.order.min(other.order);
        if order == 0 || self.is_zero() || other.is_zero() {
            return Self::zero(order);
        }
        // dense convolution once both operands fill more than half their span
        let dense_a = 2 * self.coeffs.range(..order).count() > order;
        let dense_b = 2 * other.coeffs.range(..order).count() > order;
        if dense_a && dense_b {
            let a = self.dense(order);
            let b = other.dense(order);
            let mut out = vec![Rat::zero(); order];
            for (i, ai) in a.iter().enumerate() {
                if ai.is_zero() {
                    continue;
                }
                for (j, bj) in b[..order - i].iter().enumerate() {
                    if !bj.is_zero() {
                        out[i + j] += ai * bj;
                    }
                }
            }
            return Self::from_dense(order, out);
        }
        let mut acc: BTreeMap<usize, Rat> = BTreeMap::new();
        for (&i, ai) in self.coeffs.range(..order) {
            for (&j, bj) in other.coeffs.range(..order - i) {
                *acc.entry(i + j).or_insert_with(Rat::zero) += ai * bj;
            }
        }
        acc.retain(|_, c| !c.is_zero());
        USeries { order, coeffs: acc }
    }

    /// Multiplicative inverse; requires a nonzero constant term.
    pub fn inv(&self) -> Result<Self> {
        let a0 = self.coeff(0);
        if a0.is_zero() {
            return Err(Error::ZeroConstantTerm);
        }
        let order = self.order;
        let inv0 = a0.recip();
        let mut out: Vec<Rat> = Vec::with_capacity(order);
        if order > 0 {
            out.push(inv0.clone());
        }
        for k in 1..order {
            let mut s = Rat::zero();
            for (&j, aj) in self.coeffs.range(1..=k) {
                let c = &out[k - j];
                if !c.is_zero() {
                    s += aj * c;
                }
            }
            out.push(-(s * &inv0));
        }
        Ok(Self::from_dense(order, out))
    }

    /// Integer power; negative exponents go through [`USeries::inv`].
    pub fn pow(&self, e: i64) -> Result<Self> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut exp = e.unsigned_abs();
        let mut result = Self::one(self.order);
        let mut sq = base;
        while exp > 0 {
            if exp & 1 == 1 {
                result = result.mul(&sq);
            }
            exp >>= 1;
            if exp > 0 {
                sq = sq.mul(&sq);
            }
        }
        Ok(result)
    }

    /// `exp(a)` for a series with zero constant term.
    pub fn exp(&self) -> Result<Self> {
        if !self.coeff(0).is_zero() {
            return Err(Error::BadConstantTerm("exp needs a zero constant term".into()));
        }
        let order = self.order;
        let mut out: Vec<Rat> = Vec::with_capacity(order);
        if order > 0 {
            out.push(Rat::one());
        }
        // k·b_k = Σ_{j=1..k} j·a_j·b_{k-j}
        for k in 1..order {
            let mut s = Rat::zero();
            for (&j, aj) in self.coeffs.range(1..=k) {
                let b = &out[k - j];
                if !b.is_zero() {
                    s += aj * b * Rat::from_integer(BigInt::from(j));
                }
            }
            out.push(s / Rat::from_integer(BigInt::from(k)));
        }
        Ok(Self::from_dense(order, out))
    }

    /// `log(a)` for a series with constant term 1.
    pub fn log(&self) -> Result<Self> {
        if !self.coeff(0).is_one() {
            return Err(Error::BadConstantTerm("log needs constant term 1".into()));
        }
        let order = self.order;
        let mut out: Vec<Rat> = vec![Rat::zero(); order];
        // k·c_k = k·a_k − Σ_{j=1..k-1} j·c_j·a_{k-j}
        for k in 1..order {
            let mut s = self.coeff(k) * Rat::from_integer(BigInt::from(k));
            for (j, cj) in out.iter().enumerate().take(k).skip(1) {
                if cj.is_zero() {
                    continue;
                }
                let a = self.coeff(k - j);
                if !a.is_zero() {
                    s -= cj * a * Rat::from_integer(BigInt::from(j));
                }
            }
            out[k] = s / Rat::from_integer(BigInt::from(k));
        }
        Ok(Self::from_dense(order, out))
    }

    /// Product of a lazily generated sequence of factors `(weight, factor)`.
    ///
    /// Each factor must equal `1 + O(u^weight)` and weights must strictly
    /// increase. Factors of weight `>= order` are not consumed, so an infinite
    /// generator is fine.
    pub fn product<I>(factors: I, order: usize) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, USeries)>,
    {
        let mut acc = Self::one(order);
        let mut last: Option<usize> = None;
        for (index, (weight, factor)) in factors.into_iter().enumerate() {
            if weight >= order {
                break;
            }
            if let Some(prev) = last {
                if weight <= prev {
                    return Err(Error::WeightViolation { index, weight, found: prev });
                }
            }
            last = Some(weight);
            let dev = factor.sub(&Self::one(factor.order));
            if let Some(found) = dev.valuation() {
                if found < weight {
                    return Err(Error::WeightViolation { index, weight, found });
                }
            }
            acc = acc.mul(&factor);
        }
        Ok(acc)
    }

    /// `{"var":"u","u_means":"q^(1/2)","order":K,"coeffs":[[k,"num/den"],…]}`
    pub fn to_json(&self) -> Value {
        let coeffs: Vec<Value> = self.terms().map(|(k, c)| json!([k, fmt_rat(c)])).collect();
        json!({"var": "u", "u_means": "q^(1/2)", "order": self.order, "coeffs": coeffs})
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let field = |name: &str| v.get(name).ok_or_else(|| Error::Parse(format!("missing field {name:?}")));
        if field("var")?.as_str() != Some("u") {
            return Err(Error::Parse("field \"var\" must be \"u\"".into()));
        }
        let order = field("order")?
            .as_u64()
            .ok_or_else(|| Error::Parse("field \"order\" must be a nonnegative integer".into()))?
            as usize;
        let arr = field("coeffs")?
            .as_array()
            .ok_or_else(|| Error::Parse("field \"coeffs\" must be an array".into()))?;
        let mut s = Self::zero(order);
        let mut prev: Option<u64> = None;
        for (i, item) in arr.iter().enumerate() {
            let bad = || Error::Parse(format!("coeffs[{i}] must be [exponent, \"num/den\"]"));
            let pair = item.as_array().filter(|p| p.len() == 2).ok_or_else(bad)?;
            let k = pair[0].as_u64().ok_or_else(bad)?;
            let c = parse_rat(pair[1].as_str().ok_or_else(bad)?)?;
            if prev.is_some_and(|p| p >= k) {
                return Err(Error::Parse(format!("coeffs[{i}]: exponents must be strictly ascending")));
            }
            if k as usize >= order {
                return Err(Error::Parse(format!("coeffs[{i}]: exponent {k} not below order {order}")));
            }
            prev = Some(k);
            s.set(k as usize, c);
        }
        Ok(s)
    }

    /// Human-readable q-expansion, e.g. `2 + 48 q^(1/2) - 3 q + O(q^2)`.
    pub fn to_q_string(&self) -> String {
        let mut out = String::new();
        for (k, c) in self.terms() {
            let mag = fmt_rat(&c.abs());
            let var = q_power(k);
            let body = match (var.is_empty(), c.abs().is_one()) {
                (true, _) => mag,
                (false, true) => var,
                (false, false) => format!("{mag} {var}"),
            };
            if out.is_empty() {
                if c.is_negative() {
                    out.push('-');
                }
                out.push_str(&body);
            } else {
                out.push_str(if c.is_negative() { " - " } else { " + " });
                out.push_str(&body);
            }
        }
        if out.is_empty() {
            out.push('0');
        }
        out.push_str(&format!(" + O({})", q_power_or_one(self.order)));
        out
    }
}

fn q_power(k: usize) -> String {
    match k {
        0 => String::new(),
        2 => "q".into(),
        k if k % 2 == 0 => format!("q^{}", k / 2),
        k => format!("q^({k}/2)"),
    }
}

fn q_power_or_one(k: usize) -> String {
    if k == 0 {
        "1".into()
    } else {
        q_power(k)
    }
}

impl fmt::Display for USeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_q_string())
    }
}

impl Add for &USeries {
    type Output = USeries;
    fn add(self, rhs: &USeries) -> USeries {
        USeries::add(self, rhs)
    }
}

impl Sub for &USeries {
    type Output = USeries;
    fn sub(self, rhs: &USeries) -> USeries {
        USeries::sub(self, rhs)
    }
}

impl Mul for &USeries {
    type Output = USeries;
    fn mul(self, rhs: &USeries) -> USeries {
        USeries::mul(self, rhs)
    }
}

impl Neg for &USeries {
    type Output = USeries;
    fn neg(self) -> USeries {
        USeries::neg(self)
    }
}
