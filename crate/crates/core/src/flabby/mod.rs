//! Flabby/coflabby classification and the constructions built on it.

mod counterexample;
mod decompose;
mod recognize;
mod resolution;

use serde::Serialize;
use thiserror::Error;

use crate::cohomology::{h_one, tate_minus_one};
use crate::exactla::AbelianInvariants;
use crate::groupring::BaseRing;
use crate::lattice::{GroupLattice, LatticeError, SequenceError};

pub use counterexample::{
    twisted_line_counterexample, gaussian_twisted_line_counterexample, TwistedLineReport, TateSummary, Verdict,
};
pub use decompose::{
    phi_decompose, phi_decompose_with, steinitz_class, DivisorComponent, MobiusTerm, OmegaCheck, PhiDecomposition, SteinitzClass,
    SteinitzDatum, DEFAULT_CLASS_NUMBER_ONE,
};
pub use recognize::{
    permutation_recognize_cp, rational_orbit_multiplicities, NotPermutation, PermutationDecomposition,
};
pub use resolution::{
    flabby_resolution, permutation_cover, split_check, PermutationCover, Resolution, SplitOutcome, SplitWitness,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FlabbyError {
    #[error("expected a lattice over C_{expected}, got C_{found}")]
    WrongGroup { expected: usize, found: usize },
    #[error("base ring {0} is not supported here")]
    UnsupportedBase(BaseRing),
    #[error("prime {0} is not supported")]
    UnsupportedPrime(u64),
    #[error("internal invariant violated: {0}")]
    InvariantViolation(String),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Sequence(#[from] SequenceError),
}

/// A subgroup with a nonzero cohomology group.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub subgroup_order: usize,
    pub group: AbelianInvariants,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub is_flabby: bool,
    pub is_coflabby: bool,
    /// First subgroup with `H^-1 != 0`.
    pub flabby_witness: Option<Witness>,
    /// First subgroup with `H^1 != 0`.
    pub coflabby_witness: Option<Witness>,
}

/// Flabby: `H^-1(h, M) = 0` for every subgroup `h`; coflabby: `H^1(h, M) = 0`.
///
/// For cyclic groups the two agree; a disagreement is reported as an
/// invariant violation.
pub fn classify(m: &GroupLattice) -> Result<Classification, FlabbyError> {
    let mut flabby_witness = None;
    let mut coflabby_witness = None;
    for h in m.group().subgroups() {
        if flabby_witness.is_none() {
            let g = tate_minus_one(m, &h)?;
            if !g.is_zero() {
                flabby_witness = Some(Witness { subgroup_order: h.order(), group: g.invariants });
            }
        }
        if coflabby_witness.is_none() {
            let g = h_one(m, &h)?;
            if !g.is_trivial() {
                coflabby_witness = Some(Witness { subgroup_order: h.order(), group: g });
            }
        }
    }
    let c = Classification {
        is_flabby: flabby_witness.is_none(),
        is_coflabby: coflabby_witness.is_none(),
        flabby_witness,
        coflabby_witness,
    };
    if c.is_flabby != c.is_coflabby {
        return Err(FlabbyError::InvariantViolation(format!(
            "flabby = {} but coflabby = {} over a cyclic group",
            c.is_flabby, c.is_coflabby
        )));
    }
    Ok(c)
}
