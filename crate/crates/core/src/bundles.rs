//! Witten bundles as polynomials in symmetric and exterior powers of `T = T_C M`.
//!
//! With `T̃ = T − C^{4n}` the lambda-ring relations give
//! `S_t(T̃) = S_t(T)·(1−t)^{4n}` and `Λ_t(T̃) = Λ_t(T)·(1+t)^{−4n}`, so
//!
//! ```text
//! Θ(T)  = ⊗_m S_{q^m}(T)           · (1−q^m)^{4n}
//! Θ1(T) = ⊗_m Λ_{q^m}(T)           · (1+q^m)^{−4n}
//! Θ2(T) = ⊗_m Λ_{−q^{m−1/2}}(T)    · (1−q^{m−1/2})^{−4n}
//! ```
//!
//! Monomials live in the free commutative ring on `S^a`, `Λ^b`, except that
//! `S^1` and `Λ^1` (both equal to `T`) are identified and written `Λ^1`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_integer::binomial;
use num_traits::{One, Signed, Zero};

use crate::chern::{power_sums, Manifold, PontPoly};
use crate::error::{Error, Result};
use crate::genera::{genus_class_of, GenusKind};
use crate::series::{Rat, USeries};

/// `S^{a_1}T ⊗ … ⊗ Λ^{b_1}T ⊗ …`, power multisets kept sorted ascending.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct BundleMonomial {
    sym: Vec<u32>,
    ext: Vec<u32>,
}

impl BundleMonomial {
    pub fn new(mut sym: Vec<u32>, mut ext: Vec<u32>) -> Result<Self> {
        if sym.contains(&0) || ext.contains(&0) {
            return Err(Error::InvalidArgument("bundle powers must be at least 1".into()));
        }
        // S^1 T = Λ^1 T = T
        let ones = sym.iter().filter(|&&a| a == 1).count();
        sym.retain(|&a| a != 1);
        ext.extend(std::iter::repeat_n(1, ones));
        sym.sort_unstable();
        ext.sort_unstable();
        Ok(BundleMonomial { sym, ext })
    }

    pub fn trivial() -> Self {
        Self::default()
    }

    pub fn sym(a: u32) -> Self {
        Self::new(vec![a], vec![]).expect("positive power")
    }

    pub fn ext(b: u32) -> Self {
        Self::new(vec![], vec![b]).expect("positive power")
    }

    pub fn sym_powers(&self) -> &[u32] {
        &self.sym
    }

    pub fn ext_powers(&self) -> &[u32] {
        &self.ext
    }

    /// Total tensor power `Σa + Σb`.
    pub fn power(&self) -> u32 {
        self.sym.iter().chain(&self.ext).sum()
    }

    pub fn is_trivial(&self) -> bool {
        self.sym.is_empty() && self.ext.is_empty()
    }

    pub fn times(&self, other: &Self) -> Self {
        let mut sym = self.sym.clone();
        sym.extend_from_slice(&other.sym);
        let mut ext = self.ext.clone();
        ext.extend_from_slice(&other.ext);
        sym.sort_unstable();
        ext.sort_unstable();
        BundleMonomial { sym, ext }
    }

    /// Vanishes identically on a rank-`rank` bundle.
    pub fn vanishes_for_rank(&self, rank: usize) -> bool {
        self.ext.iter().any(|&b| b as usize > rank)
    }

    /// Rank of the monomial evaluated on a bundle of rank `rank`.
    pub fn rank(&self, rank: usize) -> BigInt {
        let r = BigInt::from(rank);
        let s: BigInt = self.sym.iter().map(|&a| binomial(&r + BigInt::from(a) - 1, BigInt::from(a))).product();
        let e: BigInt = self
            .ext
            .iter()
            .map(|&b| if b as usize > rank { BigInt::zero() } else { binomial(r.clone(), BigInt::from(b)) })
            .product();
        s * e
    }
}

impl fmt::Display for BundleMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return f.write_str("1");
        }
        let parts: Vec<String> = self
            .sym
            .iter()
            .map(|a| format!("S^{a}(T)"))
            .chain(self.ext.iter().map(|b| format!("Λ^{b}(T)")))
            .collect();
        f.write_str(&parts.join("⊗"))
    }
}

/// Integer combination of bundle monomials on a manifold of dimension `4n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VirtualBundlePoly {
    n: usize,
    terms: BTreeMap<BundleMonomial, BigInt>,
}

impl VirtualBundlePoly {
    pub fn zero(n: usize) -> Self {
        VirtualBundlePoly { n, terms: BTreeMap::new() }
    }

    pub fn constant(n: usize, c: BigInt) -> Self {
        Self::from_terms(n, [(BundleMonomial::trivial(), c)])
    }

    pub fn from_terms<I: IntoIterator<Item = (BundleMonomial, BigInt)>>(n: usize, terms: I) -> Self {
        let mut p = Self::zero(n);
        for (m, c) in terms {
            p.accumulate(m, c);
        }
        p
    }

    fn accumulate(&mut self, m: BundleMonomial, c: BigInt) {
        if c.is_zero() || m.vanishes_for_rank(4 * self.n) {
            return;
        }
        let e = self.terms.entry(m).or_insert_with(BigInt::zero);
        *e += c;
        if e.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> impl Iterator<Item = (&BundleMonomial, &BigInt)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &BundleMonomial) -> BigInt {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.accumulate(m.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        Self::from_terms(self.n, self.terms.iter().map(|(m, v)| (m.clone(), v * c)))
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.n);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.accumulate(ma.times(mb), ca * cb);
            }
        }
        out
    }

    /// Virtual rank `Σ c·rank(monomial)` on `T` of rank `4n`.
    pub fn rank(&self) -> BigInt {
        self.terms.iter().map(|(m, c)| c * m.rank(4 * self.n)).sum()
    }

    /// Largest tensor power among the monomials (0 for a constant).
    pub fn max_power(&self) -> u32 {
        self.terms.keys().map(BundleMonomial::power).max().unwrap_or(0)
    }
}

impl fmt::Display for VirtualBundlePoly {
    /// `-Λ^1(T) + 8·1`: non-trivial monomials first, the constant last.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let ordered = self.terms.iter().filter(|(m, _)| !m.is_trivial()).chain(self.terms.iter().filter(|(m, _)| m.is_trivial()));
        for (i, (m, c)) in ordered.enumerate() {
            let mag = c.abs();
            let body = if m.is_trivial() {
                format!("{mag}·1")
            } else if mag.is_one() {
                m.to_string()
            } else {
                format!("{mag}·{m}")
            };
            match (i, c.is_negative()) {
                (0, true) => write!(f, "-{body}")?,
                (0, false) => write!(f, "{body}")?,
                (_, true) => write!(f, " - {body}")?,
                (_, false) => write!(f, " + {body}")?,
            }
        }
        Ok(())
    }
}

/// q-series (in `u = q^(1/2)`) with virtual-bundle coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BundleQSeries {
    n: usize,
    order: usize,
    coeffs: BTreeMap<usize, VirtualBundlePoly>,
}

impl BundleQSeries {
    pub fn one(n: usize, order: usize) -> Self {
        Self::from_terms(n, order, [(0, VirtualBundlePoly::constant(n, BigInt::one()))])
    }

    pub fn from_terms<I: IntoIterator<Item = (usize, VirtualBundlePoly)>>(n: usize, order: usize, terms: I) -> Self {
        let mut s = BundleQSeries { n, order, coeffs: BTreeMap::new() };
        for (k, p) in terms {
            if k >= order {
                continue;
            }
            let sum = match s.coeffs.remove(&k) {
                Some(cur) => cur.add(&p),
                None => p,
            };
            if !sum.is_zero() {
                s.coeffs.insert(k, sum);
            }
        }
        s
    }

    /// Integer u-series times the trivial bundle.
    fn scalar(n: usize, s: &USeries) -> Self {
        let terms = s.terms().map(|(k, c)| {
            debug_assert!(c.is_integer());
            (k, VirtualBundlePoly::constant(n, c.to_integer()))
        });
        Self::from_terms(n, s.order(), terms.collect::<Vec<_>>())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Coefficient of `u^k`.
    pub fn coeff(&self, k: usize) -> VirtualBundlePoly {
        self.coeffs.get(&k).cloned().unwrap_or_else(|| VirtualBundlePoly::zero(self.n))
    }

    pub fn mul(&self, other: &Self) -> Self {
        let order = self.order.min(other.order);
        let mut terms = Vec::new();
        for (&i, a) in self.coeffs.range(..order) {
            for (&j, b) in other.coeffs.range(..order - i) {
                terms.push((i + j, a.mul(b)));
            }
        }
        Self::from_terms(self.n, order, terms)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum WittenTwist {
    /// `Θ(T)⊗Θ1(T)`, coefficients `A_k` (only even `u`-powers).
    Theta1Twist,
    /// `Θ(T)⊗Θ2(T)`, coefficients `B_k`.
    Theta2Twist,
}

/// `(1 + s·u^w)^e` as an integer u-series.
fn binomial_power(sign: i64, w: usize, e: i64, order: usize) -> USeries {
    USeries::one(order)
        .add(&USeries::monomial(w, Rat::from_integer(BigInt::from(sign)), order))
        .pow(e)
        .expect("constant term 1")
}

/// `Σ_j sign^j·P^j·u^{w·j}` where `P^j` is `S^j` or `Λ^j`.
fn power_operation(n: usize, order: usize, w: usize, symmetric: bool, sign: i64) -> BundleQSeries {
    let rank = 4 * n;
    let mut terms = vec![(0, VirtualBundlePoly::constant(n, BigInt::one()))];
    let mut j = 1;
    while w * j < order && (symmetric || j <= rank) {
        let m = if symmetric { BundleMonomial::sym(j as u32) } else { BundleMonomial::ext(j as u32) };
        let c = if sign < 0 && j % 2 == 1 { -BigInt::one() } else { BigInt::one() };
        terms.push((w * j, VirtualBundlePoly::from_terms(n, [(m, c)])));
        j += 1;
    }
    BundleQSeries::from_terms(n, order, terms)
}

/// Expands `Θ⊗Θ1` or `Θ⊗Θ2` of a rank-`4n` tangent bundle up to `u^uorder`.
pub fn expand_witten(which: WittenTwist, n: usize, uorder: usize) -> Result<BundleQSeries> {
    if uorder == 0 {
        return Err(Error::InvalidArgument("uorder must be at least 1".into()));
    }
    let r = 4 * n as i64;
    let mut acc = BundleQSeries::one(n, uorder);
    // Θ: weight 2m
    for m in (1..).take_while(|m| 2 * m < uorder) {
        let w = 2 * m;
        acc = acc.mul(&power_operation(n, uorder, w, true, 1));
        acc = acc.mul(&BundleQSeries::scalar(n, &binomial_power(-1, w, r, uorder)));
    }
    match which {
        WittenTwist::Theta1Twist => {
            for m in (1..).take_while(|m| 2 * m < uorder) {
                let w = 2 * m;
                acc = acc.mul(&power_operation(n, uorder, w, false, 1));
                acc = acc.mul(&BundleQSeries::scalar(n, &binomial_power(1, w, -r, uorder)));
            }
        }
        WittenTwist::Theta2Twist => {
            for m in (1..).take_while(|m| 2 * m - 1 < uorder) {
                let w = 2 * m - 1;
                acc = acc.mul(&power_operation(n, uorder, w, false, -1));
                acc = acc.mul(&BundleQSeries::scalar(n, &binomial_power(-1, w, -r, uorder)));
            }
        }
    }
    Ok(acc)
}

/// Chern characters of `Λ^b T` and `S^a T` as Pontryagin polynomials, built
/// lazily from the Adams characters `ψ_k = Σ_j 2cosh(k·x_j)` by Newton's identities.
#[derive(Clone, Debug)]
pub struct ChTable {
    n: usize,
    nmax: usize,
    adams: Vec<PontPoly<Rat>>,
    ext: Vec<PontPoly<Rat>>,
    sym: Vec<PontPoly<Rat>>,
}

impl ChTable {
    pub fn new(n: usize, nmax: usize) -> Self {
        let one = PontPoly::one(nmax, ());
        ChTable { n, nmax, adams: Vec::new(), ext: vec![one.clone()], sym: vec![one] }
    }

    /// `ψ_k = 4n + Σ_{i≥1} 2·k^{2i}·s_i/(2i)!`.
    fn adams(&mut self, k: usize) -> PontPoly<Rat> {
        if self.adams.is_empty() {
            self.adams.push(PontPoly::zero(self.nmax, ()));
        }
        let sums = if self.adams.len() <= k { power_sums(self.nmax, self.nmax) } else { Vec::new() };
        while self.adams.len() <= k {
            let kk = self.adams.len();
            let mut out = PontPoly::constant(self.nmax, (), Rat::from_integer(BigInt::from(4 * self.n)));
            let mut fact = BigInt::one();
            let mut kpow = BigInt::one();
            for (i, s_i) in sums.iter().enumerate() {
                let i = i + 1;
                fact *= BigInt::from((2 * i - 1) * (2 * i));
                kpow *= BigInt::from(kk * kk);
                out = out.add(&s_i.scale(&Rat::new(BigInt::from(2) * &kpow, fact.clone())));
            }
            self.adams.push(out);
        }
        self.adams[k].clone()
    }

    /// `ch(Λ^b T)`; zero for `b > 4n`.
    pub fn ext(&mut self, b: usize) -> PontPoly<Rat> {
        if b > 4 * self.n {
            return PontPoly::zero(self.nmax, ());
        }
        while self.ext.len() <= b {
            let j = self.ext.len();
            let mut acc = PontPoly::zero(self.nmax, ());
            for i in 1..=j {
                let psi = self.adams(i);
                let term = self.ext[j - i].mul(&psi);
                acc = if i % 2 == 1 { acc.add(&term) } else { acc.sub(&term) };
            }
            self.ext.push(acc.scale(&Rat::new(BigInt::one(), BigInt::from(j))));
        }
        self.ext[b].clone()
    }

    /// `ch(S^a T)`.
    pub fn sym(&mut self, a: usize) -> PontPoly<Rat> {
        while self.sym.len() <= a {
            let j = self.sym.len();
            let mut acc = PontPoly::zero(self.nmax, ());
            for i in 1..=j {
                let psi = self.adams(i);
                acc = acc.add(&self.sym[j - i].mul(&psi));
            }
            self.sym.push(acc.scale(&Rat::new(BigInt::one(), BigInt::from(j))));
        }
        self.sym[a].clone()
    }

    pub fn monomial(&mut self, m: &BundleMonomial) -> PontPoly<Rat> {
        let mut acc = PontPoly::one(self.nmax, ());
        for &a in m.sym_powers() {
            acc = acc.mul(&self.sym(a as usize));
        }
        for &b in m.ext_powers() {
            acc = acc.mul(&self.ext(b as usize));
        }
        acc
    }

    pub fn poly(&mut self, v: &VirtualBundlePoly) -> PontPoly<Rat> {
        let mut acc = PontPoly::zero(self.nmax, ());
        for (m, c) in v.terms() {
            acc = acc.add(&self.monomial(m).scale(&Rat::from_integer(c.clone())));
        }
        acc
    }
}

/// `ch` of one monomial on a rank-`4n` tangent bundle, truncated at weight `nmax`.
pub fn ch_monomial(m: &BundleMonomial, n: usize, nmax: usize) -> PontPoly<Rat> {
    ChTable::new(n, nmax).monomial(m)
}

fn check_rank(m: &Manifold, v: &VirtualBundlePoly) -> Result<()> {
    if v.n() != m.n() {
        return Err(Error::DimMismatch(format!("bundle built for dimension {} paired with a {}-manifold", 4 * v.n(), m.dim())));
    }
    Ok(())
}

fn twisted_index(m: &Manifold, v: &VirtualBundlePoly, base: GenusKind) -> Result<Rat> {
    check_rank(m, v)?;
    let mut table = ChTable::new(m.n(), m.n());
    let class = genus_class_of(base, m.n(), 1)?.u0_part();
    crate::chern::pair_rat(&class.mul(&table.poly(v)), m)
}

/// `ind(D ⊗ v) = ⟨Â(TM)·ch(v), [M]⟩`.
pub fn index_bundle(m: &Manifold, v: &VirtualBundlePoly) -> Result<Rat> {
    twisted_index(m, v, GenusKind::AHat)
}

/// `⟨L̂(TM)·ch(v), [M]⟩`, the index of the signature operator twisted by `v`.
pub fn signature_index_bundle(m: &Manifold, v: &VirtualBundlePoly) -> Result<Rat> {
    twisted_index(m, v, GenusKind::LHat)
}

fn via_bundles(m: &Manifold, which: WittenTwist, base: GenusKind, uorder: usize) -> Result<USeries> {
    let n = m.n();
    let series = expand_witten(which, n, uorder)?;
    let class = genus_class_of(base, n, 1)?.u0_part();
    let mut table = ChTable::new(n, n);
    let mut terms = Vec::new();
    for k in 0..uorder {
        let v = series.coeff(k);
        if !v.is_zero() {
            terms.push((k, crate::chern::pair_rat(&class.mul(&table.poly(&v)), m)?));
        }
    }
    Ok(USeries::from_terms(uorder, terms))
}

/// `Ell2(M) = Σ_k ind(D ⊗ B_k)·u^k`.
pub fn ell2_via_bundles(m: &Manifold, uorder: usize) -> Result<USeries> {
    via_bundles(m, WittenTwist::Theta2Twist, GenusKind::AHat, uorder)
}

/// `Ell1(M) = Σ_k ⟨L̂(TM)·ch(A_k), [M]⟩·q^k`.
pub fn ell1_via_bundles(m: &Manifold, uorder: usize) -> Result<USeries> {
    via_bundles(m, WittenTwist::Theta1Twist, GenusKind::LHat, uorder)
}

/// Precomputed bundle expansion for repeated evaluation on manifolds of one dimension.
pub struct Ell2BundleRoute {
    n: usize,
    uorder: usize,
    classes: Vec<(usize, PontPoly<Rat>)>,
}

impl Ell2BundleRoute {
    pub fn new(n: usize, uorder: usize) -> Result<Self> {
        let series = expand_witten(WittenTwist::Theta2Twist, n, uorder)?;
        let ahat = genus_class_of(GenusKind::AHat, n, 1)?.u0_part();
        let mut table = ChTable::new(n, n);
        let mut cache: HashMap<usize, PontPoly<Rat>> = HashMap::new();
        for k in 0..uorder {
            let v = series.coeff(k);
            if !v.is_zero() {
                cache.insert(k, ahat.mul(&table.poly(&v)));
            }
        }
        let mut classes: Vec<_> = cache.into_iter().collect();
        classes.sort_by_key(|(k, _)| *k);
        Ok(Ell2BundleRoute { n, uorder, classes })
    }

    pub fn eval(&self, m: &Manifold) -> Result<USeries> {
        if m.n() != self.n {
            return Err(Error::DimMismatch(format!("route built for dimension {}, got {}", 4 * self.n, m.dim())));
        }
        let terms = self
            .classes
            .iter()
            .map(|(k, c)| crate::chern::pair_rat(c, m).map(|v| (*k, v)))
            .collect::<Result<Vec<_>>>()?;
        Ok(USeries::from_terms(self.uorder, terms))
    }
}
