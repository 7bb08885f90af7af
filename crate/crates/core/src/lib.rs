//! Constructive toolkit for horocycle dynamics on Z-covers of hyperbolic surfaces.
//!
//! The crate is organized bottom-up:
//!
//! - [`group`]: PSL(2,R) elements with fixed subgroup conventions, the Bruhat
//!   decomposition and the `δ` projection onto the diagonal part.
//! - [`iet`]: interval exchange transformations in floating or exact rational
//!   arithmetic, Keane-type diagnostics and an eigenvalue-scan statistic.
//! - [`suspension`]: the constant-roof suspension of an IET, its straight-line
//!   flow on the Z-cover strip model and the flat Busemann functions.
//! - [`traintrack`]: measured train tracks, route counting and growth/dimension
//!   estimators.
//! - [`fuchsian`]: a cocompact surface group with a homomorphism to Z, word
//!   enumeration and the samplers built on it.
//!
//! Conventions used everywhere: `a_t = diag(e^{t/2}, e^{-t/2})`, `N` is the lower
//! unipotent subgroup, `U` the upper unipotent subgroup and `ω = [[0,-1],[1,0]]`.

pub mod error;
pub mod fuchsian;
pub mod group;
pub mod iet;
pub mod scalar;
pub mod suspension;
pub mod traintrack;

pub use error::{Error, Result};
pub use fuchsian::{GroupWord, LatticeFilter, Letter, SurfaceGroup};
pub use group::{BruhatFactors, GroupElement, HPoint};
pub use iet::{Iet, KeaneVerdict, Permutation};
pub use scalar::{Rational, Scalar};
pub use suspension::{CoverPoint, Direction, FlatRay, FlowOutcome, TranslationSurface};
pub use traintrack::{TrainTrack, WeightSystem};
