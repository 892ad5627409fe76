//! Symmetric-function machinery for characteristic numbers.
//!
//! A multiplicative characteristic class is described by an even per-root
//! factor `f(x)` ([`RootSeries`]); [`genus_class`] turns `∏_j f(x_j)` into a
//! polynomial in the Pontryagin classes ([`PontPoly`]) and [`pair`] evaluates
//! it on a [`Manifold`]'s Pontryagin numbers.
//!
//! Roots are normalized as `x = 2π√−1·z`, so `p_i = e_i(x_1², …, x_2n²)` and no
//! transcendental constants appear.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::series::{fmt_rat, parse_rat, Rat, USeries};

/// Weakly decreasing list of positive parts, indexing the monomial `p_λ1·p_λ2⋯`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Partition(Vec<u32>);

impl Partition {
    pub fn new(mut parts: Vec<u32>) -> Result<Self> {
        if parts.contains(&0) {
            return Err(Error::InvalidArgument("partition parts must be positive".into()));
        }
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Ok(Partition(parts))
    }

    pub fn empty() -> Self {
        Partition(Vec::new())
    }

    pub fn single(i: u32) -> Self {
        Partition(vec![i])
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    pub fn weight(&self) -> usize {
        self.0.iter().map(|&p| p as usize).sum()
    }

    /// Multiset union (product of the monomials).
    pub fn merge(&self, other: &Partition) -> Partition {
        let mut parts = self.0.clone();
        parts.extend_from_slice(&other.0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition(parts)
    }

    /// All partitions of `n`, in descending lexicographic order.
    pub fn all_of(n: usize) -> Vec<Partition> {
        fn rec(rest: usize, max: usize, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
            if rest == 0 {
                out.push(Partition(cur.clone()));
                return;
            }
            for p in (1..=max.min(rest)).rev() {
                cur.push(p as u32);
                rec(rest - p, p, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        rec(n, n, &mut Vec::new(), &mut out);
        out
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|p| p.to_string()).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

impl FromStr for Partition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let inner = s
            .trim()
            .strip_prefix('[')
            .and_then(|r| r.strip_suffix(']'))
            .ok_or_else(|| Error::Parse(format!("partition key {s:?} must look like \"[2,1]\"")))?;
        if inner.trim().is_empty() {
            return Ok(Partition::empty());
        }
        let parts = inner
            .split(',')
            .map(|p| p.trim().parse::<u32>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|_| Error::Parse(format!("partition key {s:?} has a non-integer part")))?;
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::Parse(format!("partition key {s:?} is not sorted descending")));
        }
        Partition::new(parts)
    }
}

/// Coefficient ring of a [`PontPoly`]: exact rationals or truncated u-series.
pub trait Coefficient: Clone + PartialEq + fmt::Debug {
    /// Data needed to build constants (the truncation order for series).
    type Ctx: Copy + PartialEq + fmt::Debug;

    fn zero_in(ctx: Self::Ctx) -> Self;
    fn one_in(ctx: Self::Ctx) -> Self;
    fn meet(a: Self::Ctx, b: Self::Ctx) -> Self::Ctx;
    fn vanishes(&self) -> bool;
    fn plus(&self, other: &Self) -> Self;
    fn times(&self, other: &Self) -> Self;
    fn scaled(&self, r: &Rat) -> Self;
    /// Truncates to the context (no-op for exact rationals).
    fn fit(&self, ctx: Self::Ctx) -> Self;
}

impl Coefficient for Rat {
    type Ctx = ();

    fn zero_in(_: ()) -> Self {
        Rat::zero()
    }
    fn one_in(_: ()) -> Self {
        Rat::one()
    }
    fn meet(_: (), _: ()) {}
    fn vanishes(&self) -> bool {
        Zero::is_zero(self)
    }
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn times(&self, other: &Self) -> Self {
        self * other
    }
    fn scaled(&self, r: &Rat) -> Self {
        self * r
    }
    fn fit(&self, _: ()) -> Self {
        self.clone()
    }
}

impl Coefficient for USeries {
    type Ctx = usize;

    fn zero_in(order: usize) -> Self {
        USeries::zero(order)
    }
    fn one_in(order: usize) -> Self {
        USeries::one(order)
    }
    fn meet(a: usize, b: usize) -> usize {
        a.min(b)
    }
    fn vanishes(&self) -> bool {
        USeries::is_zero(self)
    }
    fn plus(&self, other: &Self) -> Self {
        USeries::add(self, other)
    }
    fn times(&self, other: &Self) -> Self {
        USeries::mul(self, other)
    }
    fn scaled(&self, r: &Rat) -> Self {
        USeries::scale(self, r)
    }
    fn fit(&self, order: usize) -> Self {
        self.truncate(order)
    }
}

/// Polynomial in `p_1, p_2, …` truncated above p-weight `nmax` (`p_i` has weight `i`).
#[derive(Clone, Debug, PartialEq)]
pub struct PontPoly<C: Coefficient = USeries> {
    nmax: usize,
    ctx: C::Ctx,
    terms: BTreeMap<Partition, C>,
}

impl<C: Coefficient> PontPoly<C> {
    pub fn zero(nmax: usize, ctx: C::Ctx) -> Self {
        PontPoly { nmax, ctx, terms: BTreeMap::new() }
    }

    pub fn constant(nmax: usize, ctx: C::Ctx, c: C) -> Self {
        Self::from_terms(nmax, ctx, [(Partition::empty(), c)])
    }

    pub fn one(nmax: usize, ctx: C::Ctx) -> Self {
        Self::constant(nmax, ctx, C::one_in(ctx))
    }

    /// The generator `p_i` (zero when `i > nmax`).
    pub fn generator(i: u32, nmax: usize, ctx: C::Ctx) -> Self {
        Self::from_terms(nmax, ctx, [(Partition::single(i), C::one_in(ctx))])
    }

    pub fn from_terms<I: IntoIterator<Item = (Partition, C)>>(nmax: usize, ctx: C::Ctx, terms: I) -> Self {
        let mut p = Self::zero(nmax, ctx);
        for (k, c) in terms {
            p.accumulate(k, c);
        }
        p
    }

    fn accumulate(&mut self, k: Partition, c: C) {
        if k.weight() > self.nmax || c.vanishes() {
            return;
        }
        let c = c.fit(self.ctx);
        let sum = match self.terms.remove(&k) {
            Some(cur) => cur.plus(&c),
            None => c,
        };
        if !sum.vanishes() {
            self.terms.insert(k, sum);
        }
    }

    pub fn nmax(&self) -> usize {
        self.nmax
    }

    pub fn ctx(&self) -> C::Ctx {
        self.ctx
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Partition, &C)> {
        self.terms.iter()
    }

    pub fn coeff(&self, k: &Partition) -> C {
        self.terms.get(k).cloned().unwrap_or_else(|| C::zero_in(self.ctx))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms of p-weight exactly `w`.
    pub fn weight_part(&self, w: usize) -> Self {
        let terms = self.terms.iter().filter(|(k, _)| k.weight() == w).map(|(k, c)| (k.clone(), c.clone()));
        Self::from_terms(self.nmax, self.ctx, terms)
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.nmax.min(other.nmax), C::meet(self.ctx, other.ctx));
        for (k, c) in self.terms.iter().chain(other.terms.iter()) {
            out.accumulate(k.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Rat::one())
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, r: &Rat) -> Self {
        let terms = self.terms.iter().map(|(k, c)| (k.clone(), c.scaled(r)));
        Self::from_terms(self.nmax, self.ctx, terms)
    }

    /// Multiplies every coefficient by the ring element `c`.
    pub fn scale_by(&self, c: &C) -> Self {
        let terms = self.terms.iter().map(|(k, v)| (k.clone(), v.times(c)));
        Self::from_terms(self.nmax, self.ctx, terms)
    }

    pub fn mul(&self, other: &Self) -> Self {
        let nmax = self.nmax.min(other.nmax);
        let mut out = Self::zero(nmax, C::meet(self.ctx, other.ctx));
        for (ka, ca) in &self.terms {
            for (kb, cb) in &other.terms {
                if ka.weight() + kb.weight() <= nmax {
                    out.accumulate(ka.merge(kb), ca.times(cb));
                }
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(self.nmax, self.ctx);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// `exp(P)` for `P` without a weight-0 part; the series stops at weight `nmax`.
    pub fn exp(&self) -> Result<Self> {
        if self.terms.contains_key(&Partition::empty()) {
            return Err(Error::BadConstantTerm("exp needs a zero weight-0 part".into()));
        }
        let mut acc = Self::one(self.nmax, self.ctx);
        let mut power = Self::one(self.nmax, self.ctx);
        for i in 1..=self.nmax {
            power = power.mul(self).scale(&Rat::new(BigInt::one(), BigInt::from(i)));
            if power.is_zero() {
                break;
            }
            acc = acc.add(&power);
        }
        Ok(acc)
    }
}

impl PontPoly<Rat> {
    /// Same polynomial with every coefficient read as a constant u-series.
    pub fn to_series(&self, uorder: usize) -> PontPoly<USeries> {
        let terms = self.terms.iter().map(|(k, c)| (k.clone(), USeries::constant(c.clone(), uorder)));
        PontPoly::from_terms(self.nmax, uorder, terms)
    }
}

impl PontPoly<USeries> {
    pub fn uorder(&self) -> usize {
        self.ctx
    }

    /// Coefficient of `u^k` in every term.
    pub fn u_coeff(&self, k: usize) -> PontPoly<Rat> {
        PontPoly::from_terms(self.nmax, (), self.terms.iter().map(|(p, c)| (p.clone(), c.coeff(k))))
    }

    pub fn u0_part(&self) -> PontPoly<Rat> {
        self.u_coeff(0)
    }
}

impl<C: Coefficient> fmt::Display for PontPoly<C>
where
    C: fmt::Debug,
{
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self.terms.iter().map(|(k, c)| format!("{c:?}·p{k}")).collect();
        f.write_str(&parts.join(" + "))
    }
}

/// `s_k = Σ_j (x_j²)^k` written in `p_1…p_nmax`, terms of weight above `nmax` dropped.
pub fn newton_power_sum(k: usize, nmax: usize) -> PontPoly<Rat> {
    power_sums(k, nmax).pop().unwrap_or_else(|| PontPoly::zero(nmax, ()))
}

/// `[s_1, …, s_k]` via `s_k = Σ_{i<k} (−1)^{i−1} p_i s_{k−i} + (−1)^{k−1} k p_k`.
pub(crate) fn power_sums(k: usize, nmax: usize) -> Vec<PontPoly<Rat>> {
    let mut out: Vec<PontPoly<Rat>> = Vec::with_capacity(k);
    for j in 1..=k {
        let sign = |i: usize| if i % 2 == 1 { Rat::one() } else { -Rat::one() };
        let mut s = PontPoly::generator(j as u32, nmax, ()).scale(&(sign(j) * Rat::from_integer(BigInt::from(j))));
        for i in 1..j {
            let term = PontPoly::generator(i as u32, nmax, ()).mul(&out[j - i - 1]).scale(&sign(i));
            s = s.add(&term);
        }
        out.push(s);
    }
    out
}

/// Even-or-not power series in one Chern root `x`, truncated below `x^xdeg`,
/// with u-series coefficients truncated below `u^uorder`.
#[derive(Clone, Debug, PartialEq)]
pub struct RootSeries {
    xdeg: usize,
    uorder: usize,
    coeffs: BTreeMap<usize, USeries>,
}

impl RootSeries {
    pub fn zero(xdeg: usize, uorder: usize) -> Self {
        RootSeries { xdeg, uorder, coeffs: BTreeMap::new() }
    }

    pub fn one(xdeg: usize, uorder: usize) -> Self {
        Self::constant(USeries::one(uorder), xdeg)
    }

    pub fn constant(c: USeries, xdeg: usize) -> Self {
        let uorder = c.order();
        Self::from_terms(xdeg, uorder, [(0, c)])
    }

    pub fn from_terms<I: IntoIterator<Item = (usize, USeries)>>(xdeg: usize, uorder: usize, terms: I) -> Self {
        let mut r = Self::zero(xdeg, uorder);
        for (k, c) in terms {
            r.accumulate(k, &c);
        }
        r
    }

    /// Series with constant (u-independent) coefficients `Σ c_k x^k`.
    pub fn from_rat_terms<I: IntoIterator<Item = (usize, Rat)>>(xdeg: usize, uorder: usize, terms: I) -> Self {
        Self::from_terms(xdeg, uorder, terms.into_iter().map(|(k, c)| (k, USeries::constant(c, uorder))))
    }

    fn accumulate(&mut self, k: usize, c: &USeries) {
        if k >= self.xdeg {
            return;
        }
        let c = c.truncate(self.uorder);
        let sum = match self.coeffs.remove(&k) {
            Some(cur) => cur.add(&c),
            None => c.with_order(self.uorder),
        };
        if !sum.is_zero() {
            self.coeffs.insert(k, sum);
        }
    }

    pub fn xdeg(&self) -> usize {
        self.xdeg
    }

    pub fn uorder(&self) -> usize {
        self.uorder
    }

    /// Coefficient of `x^k`, a u-series.
    pub fn coeff(&self, k: usize) -> USeries {
        self.coeffs.get(&k).cloned().unwrap_or_else(|| USeries::zero(self.uorder))
    }

    pub fn terms(&self) -> impl Iterator<Item = (usize, &USeries)> {
        self.coeffs.iter().map(|(&k, c)| (k, c))
    }

    pub fn is_even(&self) -> bool {
        self.coeffs.keys().all(|k| k % 2 == 0)
    }

    pub fn check_even(&self) -> Result<()> {
        match self.coeffs.keys().find(|k| *k % 2 == 1) {
            Some(&k) => Err(Error::OddTermPresent(k)),
            None => Ok(()),
        }
    }

    /// Restriction to the u⁰ coefficient (the `q → 0` limit).
    pub fn at_u0(&self) -> Self {
        self.truncate(self.xdeg, 1)
    }

    pub fn truncate(&self, xdeg: usize, uorder: usize) -> Self {
        let xdeg = xdeg.min(self.xdeg);
        let uorder = uorder.min(self.uorder);
        Self::from_terms(xdeg, uorder, self.coeffs.iter().map(|(&k, c)| (k, c.clone())))
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.xdeg.min(other.xdeg), self.uorder.min(other.uorder));
        for (&k, c) in self.coeffs.iter().chain(other.coeffs.iter()) {
            out.accumulate(k, c);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-Rat::one()))
    }

    pub fn scale(&self, r: &Rat) -> Self {
        Self::from_terms(self.xdeg, self.uorder, self.coeffs.iter().map(|(&k, c)| (k, c.scale(r))))
    }

    /// Multiplies every x-coefficient by the u-series `s`.
    pub fn scale_series(&self, s: &USeries) -> Self {
        let uorder = self.uorder.min(s.order());
        Self::from_terms(self.xdeg, uorder, self.coeffs.iter().map(|(&k, c)| (k, c.mul(s))))
    }

    /// `f(λx)` for a rational `λ`.
    pub fn rescale_x(&self, lambda: &Rat) -> Self {
        let mut pow = Rat::one();
        let mut out = Self::zero(self.xdeg, self.uorder);
        for k in 0..self.xdeg {
            if let Some(c) = self.coeffs.get(&k) {
                out.accumulate(k, &c.scale(&pow));
            }
            pow *= lambda;
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let xdeg = self.xdeg.min(other.xdeg);
        let uorder = self.uorder.min(other.uorder);
        let mut out = Self::zero(xdeg, uorder);
        for (&i, a) in self.coeffs.range(..xdeg) {
            for (&j, b) in other.coeffs.range(..xdeg - i) {
                out.accumulate(i + j, &a.mul(b));
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(self.xdeg, self.uorder);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Inverse in `R[[x]]`, where the x⁰ coefficient must be an invertible u-series.
    pub fn inv(&self) -> Result<Self> {
        let c0 = self.coeff(0).inv().map_err(|_| Error::NonUnitConstant)?;
        let mut out: Vec<USeries> = Vec::with_capacity(self.xdeg);
        for k in 0..self.xdeg {
            if k == 0 {
                out.push(c0.clone());
                continue;
            }
            let mut s = USeries::zero(self.uorder);
            for (&j, a) in self.coeffs.range(1..=k) {
                s = s.add(&a.mul(&out[k - j]));
            }
            out.push(s.mul(&c0).neg());
        }
        Ok(Self::from_terms(self.xdeg, self.uorder, out.into_iter().enumerate()))
    }

    /// `log f` for `f` with x⁰ coefficient exactly 1.
    pub fn log(&self) -> Result<Self> {
        if self.coeff(0) != USeries::one(self.uorder) {
            return Err(Error::BadConstantTerm("log needs x^0 coefficient 1".into()));
        }
        let h = self.sub(&Self::one(self.xdeg, self.uorder));
        let mut out = Self::zero(self.xdeg, self.uorder);
        let mut power = Self::one(self.xdeg, self.uorder);
        for i in 1..self.xdeg.max(1) {
            power = power.mul(&h);
            if power.coeffs.is_empty() {
                break;
            }
            let sign = if i % 2 == 1 { Rat::one() } else { -Rat::one() };
            out = out.add(&power.scale(&(sign / Rat::from_integer(BigInt::from(i)))));
        }
        Ok(out)
    }

    /// Product of lazily generated factors `(weight, factor)`, each `1 + O(u^weight)`
    /// in every x-coefficient; weights must strictly increase.
    pub fn product<I>(factors: I, xdeg: usize, uorder: usize) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, RootSeries)>,
    {
        let mut acc = Self::one(xdeg, uorder);
        let mut last: Option<usize> = None;
        for (index, (weight, factor)) in factors.into_iter().enumerate() {
            if weight >= uorder {
                break;
            }
            if let Some(prev) = last {
                if weight <= prev {
                    return Err(Error::WeightViolation { index, weight, found: prev });
                }
            }
            last = Some(weight);
            let dev = factor.sub(&Self::one(factor.xdeg, factor.uorder));
            if let Some(found) = dev.coeffs.values().filter_map(USeries::valuation).min() {
                if found < weight {
                    return Err(Error::WeightViolation { index, weight, found });
                }
            }
            acc = acc.mul(&factor);
        }
        Ok(acc)
    }
}

/// Closed 4n-manifold described by its rational Pontryagin numbers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Manifold {
    name: String,
    dim: usize,
    pont: BTreeMap<Partition, Rat>,
}

impl Manifold {
    pub fn new<I>(name: impl Into<String>, dim: usize, pont: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Partition, Rat)>,
    {
        if dim == 0 || !dim.is_multiple_of(4) {
            return Err(Error::DimNotMultipleOf4(dim));
        }
        let n = dim / 4;
        let mut map = BTreeMap::new();
        for (k, v) in pont {
            if k.weight() != n {
                return Err(Error::DimMismatch(format!("Pontryagin number {k} has weight {} but dim {dim} needs weight {n}", k.weight())));
            }
            if !v.is_zero() {
                map.insert(k, v);
            }
        }
        Ok(Manifold { name: name.into(), dim, pont: map })
    }

    /// All Pontryagin numbers zero (e.g. a sphere).
    pub fn zero(name: impl Into<String>, dim: usize) -> Result<Self> {
        Self::new(name, dim, std::iter::empty())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `dim / 4`.
    pub fn n(&self) -> usize {
        self.dim / 4
    }

    /// Pontryagin number `p_λ[M]`; missing entries are 0.
    pub fn pont(&self, k: &Partition) -> Rat {
        self.pont.get(k).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn pontryagin_numbers(&self) -> impl Iterator<Item = (&Partition, &Rat)> {
        self.pont.iter()
    }

    /// Partitions of `n` with no recorded Pontryagin number.
    pub fn missing_numbers(&self) -> Vec<Partition> {
        Partition::all_of(self.n()).into_iter().filter(|k| !self.pont.contains_key(k)).collect()
    }

    /// `{"name":…,"dim":8,"pontryagin_numbers":{"[1,1]":"8","[2]":"14"}}`; every
    /// partition of `n` is listed, zeros included.
    pub fn to_json(&self) -> Value {
        let mut numbers = Map::new();
        for k in Partition::all_of(self.n()) {
            numbers.insert(k.to_string(), Value::String(fmt_rat(&self.pont(&k))));
        }
        json!({"name": self.name, "dim": self.dim, "pontryagin_numbers": numbers})
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let obj = v.as_object().ok_or_else(|| Error::Parse("manifold must be a JSON object".into()))?;
        let name = match obj.get("name") {
            None => String::new(),
            Some(Value::String(s)) => s.clone(),
            Some(_) => return Err(Error::Parse("field \"name\" must be a string".into())),
        };
        let dim = obj
            .get("dim")
            .ok_or_else(|| Error::Parse("missing field \"dim\"".into()))?
            .as_u64()
            .ok_or_else(|| Error::Parse("field \"dim\" must be a positive integer".into()))? as usize;
        let numbers = match obj.get("pontryagin_numbers") {
            None => Map::new(),
            Some(Value::Object(m)) => m.clone(),
            Some(_) => return Err(Error::Parse("field \"pontryagin_numbers\" must be an object".into())),
        };
        let mut pont = Vec::new();
        for (k, val) in numbers {
            let key: Partition = k.parse()?;
            let value = match val {
                Value::String(s) => parse_rat(&s),
                Value::Number(n) if n.is_i64() => Ok(Rat::from_integer(BigInt::from(n.as_i64().unwrap_or(0)))),
                _ => Err(Error::Parse(format!("pontryagin_numbers[{k:?}] must be a rational string"))),
            }
            .map_err(|e| Error::Parse(format!("pontryagin_numbers[{k:?}]: {e}")))?;
            pont.push((key, value));
        }
        Self::new(name, dim, pont)
    }
}

/// `∏_{j=1}^{2n} f(x_j)` as a polynomial in `p_1…p_n`.
///
/// Computed as `f(0)^{2n}·exp(Σ_k a_k s_k)` with `log(f/f(0)) = Σ_k a_k x^{2k}`.
pub fn genus_class(f: &RootSeries, n: usize) -> Result<PontPoly<USeries>> {
    f.check_even()?;
    if f.xdeg() < 2 * n + 1 {
        return Err(Error::InvalidArgument(format!("xdeg {} too small for n = {n}; need at least {}", f.xdeg(), 2 * n + 1)));
    }
    let c0 = f.coeff(0);
    if c0.coeff(0).is_zero() {
        return Err(Error::NonUnitConstant);
    }
    let uorder = f.uorder();
    let normalized = f.scale_series(&c0.inv()?);
    let log = normalized.log()?;
    let sums = power_sums(n, n);
    let mut exponent = PontPoly::zero(n, uorder);
    for (k, s_k) in sums.iter().enumerate() {
        let a_k = log.coeff(2 * (k + 1));
        if !a_k.is_zero() {
            exponent = exponent.add(&s_k.to_series(uorder).scale_by(&a_k));
        }
    }
    let leading = c0.pow(2 * n as i64)?;
    Ok(exponent.exp()?.scale_by(&leading))
}

/// `ch(T_C M) = Σ_j (e^{x_j} + e^{−x_j}) = 4n + Σ_{k≥1} 2 s_k/(2k)!`, truncated at weight `nmax`.
pub fn ch_tangent(n: usize, nmax: usize) -> PontPoly<Rat> {
    let mut out = PontPoly::constant(nmax, (), Rat::from_integer(BigInt::from(4 * n)));
    let mut fact = Rat::one();
    for (k, s_k) in power_sums(nmax, nmax).iter().enumerate() {
        let k = k + 1;
        fact *= Rat::from_integer(BigInt::from((2 * k - 1) * (2 * k)));
        out = out.add(&s_k.scale(&(Rat::from_integer(BigInt::from(2)) / &fact)));
    }
    out
}

fn check_pairing<C: Coefficient>(c: &PontPoly<C>, m: &Manifold) -> Result<()> {
    if !m.dim().is_multiple_of(4) {
        return Err(Error::DimMismatch(format!("dimension {} is not a multiple of 4", m.dim())));
    }
    if c.nmax() < m.n() {
        return Err(Error::DimMismatch(format!("class truncated at weight {} cannot pair with a {}-manifold", c.nmax(), m.dim())));
    }
    Ok(())
}

/// `⟨c, [M]⟩ = Σ_{|λ| = n} c_λ·p_λ[M]`.
pub fn pair(c: &PontPoly<USeries>, m: &Manifold) -> Result<USeries> {
    check_pairing(c, m)?;
    let mut out = USeries::zero(c.uorder());
    for (k, v) in m.pontryagin_numbers() {
        out = out.add(&c.coeff(k).scale(v));
    }
    Ok(out)
}

/// Rational-coefficient version of [`pair`].
pub fn pair_rat(c: &PontPoly<Rat>, m: &Manifold) -> Result<Rat> {
    check_pairing(c, m)?;
    Ok(m.pontryagin_numbers().map(|(k, v)| c.coeff(k) * v).sum())
}

/// `A ⊔ B`: Pontryagin numbers add.
pub fn disjoint_union(a: &Manifold, b: &Manifold) -> Result<Manifold> {
    if a.dim() != b.dim() {
        return Err(Error::DimMismatch(format!("cannot unite a {}-manifold with a {}-manifold", a.dim(), b.dim())));
    }
    let mut pont = a.pont.clone();
    for (k, v) in &b.pont {
        *pont.entry(k.clone()).or_insert_with(Rat::zero) += v;
    }
    let name = format!("{} ⊔ {}", a.name, b.name);
    Manifold::new(name, a.dim, pont)
}
