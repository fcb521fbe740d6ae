//! Exact computations with lattices over group rings `R[C_n]` of finite cyclic
//! groups: Tate cohomology, flabby/coflabby tests, flabby resolutions and the
//! Dedekind `p`-maximality criterion.

pub mod cohomology;
pub mod dedekind;
pub mod exactla;
pub mod flabby;
pub mod groupring;
pub mod lattice;
mod serde_int;

pub use exactla::{AbelianInvariants, ExactError, IntMatrix};
pub use groupring::{BaseRing, CyclicGroup, Subgroup};
pub use lattice::{GroupLattice, LatticeError};
