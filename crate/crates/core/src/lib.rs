//! Exact computation in Hecke algebras of Hecke pairs `(G, Γ)`.
//!
//! * [`scalar`]: rationals, Gaussian rationals, q-adic valuations.
//! * [`pair`]: the backend contract and coset counting (`L`, `R`, `Δ`).
//! * [`backends`]: finite permutation pairs, the infinite dihedral pair, the
//!   dyadic affine pair and `(SL₂(Q_q), SL₂(Z_q))`.
//! * [`algebra`]: convolution, involution, `L¹`-norm, right inner product.
//! * [`spherical`]: the characters `π_z` of the spherical Hecke algebra of
//!   `SL₂` and exact non-positivity certificates.
//! * [`growth`]: double coset set products and `L(Aⁿ)` growth reports.
//! * [`verify`]: seeded property suites over all backends.

pub mod algebra;
pub mod backends;
pub mod error;
pub mod fixtures;
pub mod growth;
pub mod json;
pub mod pair;
pub mod scalar;
pub mod spherical;
pub mod verify;

pub use algebra::{CosetFunction, HeckeElement, L1Norm, OracleReport};
pub use error::{Error, Result};
pub use growth::{CosetSet, GrowthReport};
pub use pair::{DoubleCoset, Hecke, HeckePair, LeftCoset, DEFAULT_BUDGET};
pub use scalar::{q_valuation, GaussianRational, Rational, Valuation};
pub use spherical::{PositivityCertificate, SphericalElement};
pub use verify::{Suite, VerifyReport};
