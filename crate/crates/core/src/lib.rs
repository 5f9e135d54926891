//! Exact computation in jet groups of the n-dimensional formal disc.
//!
//! Arithmetic in the truncated automorphism groups `G^(c)(R)` and `K^(c)(R)`
//! over nilpotent extensions `R` of `Q`, the Hopf structure of the coordinate
//! ring of `K^(c)`, truncated derivations and the adjoint action, jets of
//! split etale roofs, and finite-dimensional representations with their
//! `G_m` weights.

pub mod base_ring;
pub mod codec;
pub mod error;
pub mod etale;
pub mod hopf;
pub mod index;
pub mod jet_group;
pub mod lie;
pub mod random;
pub mod rep;
pub mod ring;
pub mod series;
pub mod suite;
pub mod symbolic;

pub use base_ring::{BaseRingDescriptor, BaseRingElement};
pub use error::{Error, Result};
pub use etale::{PolyMap, RoofChart};
pub use index::MultiIndex;
pub use jet_group::{Classification, JetAutomorphism};
pub use lie::Derivation;
pub use rep::Representation;
pub use ring::Ring;
pub use series::{Polynomial, TruncatedSeries};
pub use symbolic::{CoordRingElement, Poly, TensorCoordElement, Var};
