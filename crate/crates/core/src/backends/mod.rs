//! Concrete Hecke pairs.

pub mod dihedral;
pub mod dyadic;
pub mod finite;
pub mod sl2;

pub use dihedral::{Dihedral, DihedralElement};
pub use dyadic::{Dyadic, DyadicElement};
pub use finite::{FinitePair, FinitePairSpec, Perm};
pub use sl2::{Sl2, Sl2Element};
