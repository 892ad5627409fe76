//! Genus pipeline: manifold in, exact q-expansion out.
//!
//! Two independent routes are provided for projective hypersurfaces
//! `X(N; d) ⊂ CP^N`: Pontryagin numbers from `p(X) = (1+x²)^{N+1}/(1+d²x²)`
//! fed through [`genus`], and the residue formula [`hypersurface_genus`].

use num_bigint::BigInt;
use num_traits::One;
use serde_json::{json, Value};

use crate::chern::{ch_tangent, genus_class, pair, pair_rat, Manifold, Partition, PontPoly, RootSeries};
use crate::error::{Error, Result};
use crate::series::{Rat, USeries};
use crate::theta::{ahat_root, cosh_series, genus_root_series, sinhc_series};

pub use crate::theta::GenusKind;

/// Smallest x-truncation that serves pairing on a 4n-manifold.
pub fn default_xdeg(n: usize) -> usize {
    2 * n + 2
}

/// The characteristic class `∏_j f(x_j)` of a genus, truncated at weight `n`.
pub fn genus_class_of(kind: GenusKind, n: usize, uorder: usize) -> Result<PontPoly<USeries>> {
    genus_class(&genus_root_series(kind, default_xdeg(n), uorder)?, n)
}

/// `⟨∏_j f_g(x_j), [M]⟩`, a u-series of order `uorder`. For Â and L̂ the
/// result is a constant series.
pub fn genus(m: &Manifold, kind: GenusKind, uorder: usize) -> Result<USeries> {
    pair(&genus_class_of(kind, m.n(), uorder)?, m)
}

/// Evaluates one genus on many manifolds of the same dimension, building the class once.
pub fn genus_batch(ms: &[Manifold], kind: GenusKind, uorder: usize) -> Result<Vec<USeries>> {
    let Some(first) = ms.first() else { return Ok(Vec::new()) };
    let class = genus_class_of(kind, first.n(), uorder)?;
    ms.iter()
        .map(|m| {
            if m.dim() != first.dim() {
                return Err(Error::DimMismatch("batch manifolds must share a dimension".into()));
            }
            pair(&class, m)
        })
        .collect()
}

/// `⟨Â(TM)·c, [M]⟩` using only the u⁰ part of `c`.
pub fn twisted_ahat(m: &Manifold, c: &PontPoly<USeries>) -> Result<Rat> {
    twisted_ahat_rat(m, &c.u0_part())
}

pub fn twisted_ahat_rat(m: &Manifold, c: &PontPoly<Rat>) -> Result<Rat> {
    let ahat = genus_class_of(GenusKind::AHat, m.n(), 1)?.u0_part();
    pair_rat(&ahat.mul(c), m)
}

/// q-graded index `⟨Â(TM)·c, [M]⟩` keeping every u-coefficient of `c`.
pub fn twisted_ahat_series(m: &Manifold, c: &PontPoly<USeries>) -> Result<USeries> {
    let ahat = genus_class_of(GenusKind::AHat, m.n(), 1)?.u0_part().to_series(c.uorder());
    pair(&ahat.mul(c), m)
}

/// `⟨L̂(TM)·c, [M]⟩` for a rational class.
pub fn twisted_lhat_rat(m: &Manifold, c: &PontPoly<Rat>) -> Result<Rat> {
    let lhat = genus_class_of(GenusKind::LHat, m.n(), 1)?.u0_part();
    pair_rat(&lhat.mul(c), m)
}

/// `σ − (24·Â − ⟨Â·ch(T_C M)⟩)` on the 8-manifold with `p₁²[M] = p11`, `p₂[M] = p2`.
pub fn cancellation_residual(p11: &Rat, p2: &Rat) -> Rat {
    let m = Manifold::new("", 8, [(Partition::single(1).merge(&Partition::single(1)), p11.clone()), (Partition::single(2), p2.clone())])
        .expect("dimension 8 is valid");
    let sigma = genus(&m, GenusKind::LHat, 1).expect("valid manifold").coeff(0);
    let ahat = genus(&m, GenusKind::AHat, 1).expect("valid manifold").coeff(0);
    let twisted = twisted_ahat_rat(&m, &ch_tangent(2, 2)).expect("valid manifold");
    sigma - (Rat::from_integer(BigInt::from(24)) * ahat - twisted)
}

/// Smooth degree-`d` hypersurface in `CP^N`, of real dimension `2(N−1)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Hypersurface {
    ambient: usize,
    degree: u64,
}

impl Hypersurface {
    pub fn new(ambient: usize, degree: u64) -> Result<Self> {
        if ambient < 2 {
            return Err(Error::InvalidHypersurface(format!("ambient dimension {ambient} must be at least 2")));
        }
        if degree == 0 {
            return Err(Error::InvalidHypersurface("degree must be positive".into()));
        }
        Ok(Hypersurface { ambient, degree })
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn degree(&self) -> u64 {
        self.degree
    }

    pub fn real_dim(&self) -> usize {
        2 * (self.ambient - 1)
    }

    /// `dim / 4`, if the real dimension is a multiple of 4.
    pub fn n(&self) -> Option<usize> {
        self.real_dim().is_multiple_of(4).then(|| self.real_dim() / 4)
    }

    pub fn to_json(&self) -> Value {
        json!({"ambient": self.ambient, "degree": self.degree})
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let get = |k: &str| {
            v.get(k)
                .and_then(Value::as_u64)
                .ok_or_else(|| Error::Parse(format!("field {k:?} must be a positive integer")))
        };
        Self::new(get("ambient")? as usize, get("degree")?)
    }
}

/// Pontryagin numbers of `X(N; d)`: `p_λ[X] = d·∏_i c_{λ_i}` where
/// `p(X) = Σ_i c_i x^{2i}` and `⟨x^{N−1}, [X]⟩ = d`.
pub fn hypersurface_pont(h: &Hypersurface) -> Result<Manifold> {
    let n = h.n().ok_or(Error::DimNotMultipleOf4(h.real_dim()))?;
    let xdeg = 2 * n + 1;
    let one_plus_x2 = RootSeries::from_rat_terms(xdeg, 1, [(0, Rat::one()), (2, Rat::one())]);
    let d = Rat::from_integer(BigInt::from(h.degree()));
    let one_plus_d2x2 = RootSeries::from_rat_terms(xdeg, 1, [(0, Rat::one()), (2, &d * &d)]);
    let p = one_plus_x2.pow(h.ambient() as u32 + 1).mul(&one_plus_d2x2.inv()?);
    let c = |i: u32| p.coeff(2 * i as usize).coeff(0);
    let pont = Partition::all_of(n).into_iter().map(|k| {
        let v: Rat = k.parts().iter().map(|&i| c(i)).product::<Rat>() * &d;
        (k, v)
    });
    let name = format!("X({};{})", h.ambient(), h.degree());
    Manifold::new(name, h.real_dim(), pont.collect::<Vec<_>>())
}

/// Residue route: coefficient of `x^N` in `f(x)^{N+1}·(d·x)/f(d·x)`.
///
/// Both `f` conventions work as long as they match the Pontryagin route's
/// (`x/tanh x`, `(x/2)/sinh(x/2)`, or any [`genus_root_series`] output). For
/// `tan`-convention factors use [`hypersurface_genus_tan`].
pub fn hypersurface_genus(h: &Hypersurface, f: &RootSeries) -> Result<USeries> {
    let big_n = h.ambient();
    if f.xdeg() < big_n {
        return Err(Error::InvalidArgument(format!("factor truncated at x^{} but x^{} is needed", f.xdeg(), big_n - 1)));
    }
    let f = f.truncate(big_n, f.uorder());
    let d = Rat::from_integer(BigInt::from(h.degree()));
    let inv = f.rescale_x(&d).inv()?;
    let body = f.pow(big_n as u32 + 1).mul(&inv);
    Ok(body.coeff(big_n - 1).scale(&d))
}

/// Residue route for a `tan`-convention factor `f(x) = g(√−1·x)`.
///
/// Writing the residue with `tan` instead of `tanh` multiplies the degree-`2n`
/// coefficient by `(−1)^n`; this undoes that sign so the result equals the
/// Pontryagin-route genus. Dimensions not divisible by 4 give 0 either way.
pub fn hypersurface_genus_tan(h: &Hypersurface, f: &RootSeries) -> Result<USeries> {
    let raw = hypersurface_genus(h, f)?;
    Ok(match h.n() {
        Some(n) if n % 2 == 1 => raw.neg(),
        _ => raw,
    })
}

/// `f(√−1·x)` for an even series: the `x^{2k}` coefficient picks up `(−1)^k`.
pub fn to_tan_convention(f: &RootSeries) -> Result<RootSeries> {
    f.check_even()?;
    let terms = f.terms().map(|(k, c)| (k, if (k / 2) % 2 == 1 { c.neg() } else { c.clone() }));
    Ok(RootSeries::from_terms(f.xdeg(), f.uorder(), terms.collect::<Vec<_>>()))
}

/// `x/tanh(x)`, the Hirzebruch L per-root factor.
pub fn signature_root(xdeg: usize) -> RootSeries {
    cosh_series(&Rat::one(), xdeg, 1).mul(&sinhc_series(&Rat::one(), xdeg, 1).inv().expect("unit"))
}

/// `x/tan(x)`, the signature factor in the residue normalization.
pub fn signature_root_tan(xdeg: usize) -> RootSeries {
    to_tan_convention(&signature_root(xdeg)).expect("even")
}

/// `(x/2)/sin(x/2)`.
pub fn ahat_root_tan(xdeg: usize) -> RootSeries {
    to_tan_convention(&ahat_root(xdeg, 1)).expect("even")
}

/// Rank of `T_C M` times the unit, i.e. the class `ch(T_C M − C^{4n})`.
pub fn reduced_ch_tangent(n: usize) -> PontPoly<Rat> {
    ch_tangent(n, n).sub(&PontPoly::constant(n, (), Rat::from_integer(BigInt::from(4 * n))))
}

/// True when every coefficient is an integer.
pub fn is_integral(s: &USeries) -> bool {
    s.terms().all(|(_, c)| c.is_integer())
}
