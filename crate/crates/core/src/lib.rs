//! Exact elliptic genera and characteristic numbers of 4n-manifolds.
//!
//! The crate computes the signature, the Â-genus, the two elliptic genera
//! `Ell1`/`Ell2` and the Witten genus as exact rational q-expansions, starting
//! from rational Pontryagin numbers or from a projective hypersurface
//! descriptor. It also checks the identities tying these together: the
//! expansion of the Witten bundles into symmetric and exterior powers, the
//! δ/ε modular basis and the relation between `Ell1` and `Ell2`, and the
//! dimension-8 cancellation formula.
//!
//! Conventions: the formal Chern roots of `T_C M` are `±x_j` with
//! `x_j = 2π√−1·z_j`, `p_i` is the i-th elementary symmetric function of the
//! `x_j²`, and every q-series is stored in the variable `u = q^(1/2)`.

pub mod bundles;
pub mod chern;
pub mod error;
pub mod genera;
pub mod modular;
pub mod series;
pub mod sobolev;
pub mod theta;

pub use chern::{Manifold, Partition, PontPoly, RootSeries};
pub use error::{Error, Result};
pub use genera::Hypersurface;
pub use theta::GenusKind;
pub use series::{Rat, USeries};
