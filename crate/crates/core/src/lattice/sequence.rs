use num_traits::One;
use serde::Serialize;
use thiserror::Error;

use super::{regular_lattice, regular_quotient, GroupLattice, LatticeError};
use crate::exactla::{self, IntMatrix};
use crate::groupring::{cyclotomic, BaseRing, CyclicGroup, IntPoly};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SequenceError {
    #[error("{map} has shape {rows}x{cols}, expected {expected_rows}x{expected_cols}")]
    Shape { map: &'static str, rows: usize, cols: usize, expected_rows: usize, expected_cols: usize },
    #[error("lattices in the sequence have different base rings or groups")]
    MismatchedBase,
    #[error("{0} does not commute with the action")]
    NotEquivariant(&'static str),
    #[error("composition of the two maps is nonzero")]
    CompositionNonzero,
    #[error("injection has a nontrivial kernel")]
    NotInjective,
    #[error("image of the injection is not saturated")]
    ImageNotSaturated,
    #[error("surjection is not onto")]
    NotSurjective,
    #[error("ranks do not add up: {left} + {right} != {middle}")]
    RankMismatch { left: usize, middle: usize, right: usize },
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

/// An equivariant homomorphism between lattices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LatticeMap {
    pub source: GroupLattice,
    pub target: GroupLattice,
    pub matrix: IntMatrix,
}

impl LatticeMap {
    pub fn new(source: GroupLattice, target: GroupLattice, matrix: IntMatrix) -> Result<Self, SequenceError> {
        check_map("map", &source, &target, &matrix)?;
        Ok(Self { source, target, matrix })
    }

    pub fn compose(&self, after: &LatticeMap) -> Result<LatticeMap, SequenceError> {
        LatticeMap::new(self.source.clone(), after.target.clone(), &after.matrix * &self.matrix)
    }
}

fn check_map(name: &'static str, source: &GroupLattice, target: &GroupLattice, matrix: &IntMatrix) -> Result<(), SequenceError> {
    if source.base() != target.base() || source.group() != target.group() {
        return Err(SequenceError::MismatchedBase);
    }
    if matrix.rows() != target.z_rank() || matrix.cols() != source.z_rank() {
        return Err(SequenceError::Shape {
            map: name,
            rows: matrix.rows(),
            cols: matrix.cols(),
            expected_rows: target.z_rank(),
            expected_cols: source.z_rank(),
        });
    }
    if !GroupLattice::intertwines(source, target, matrix) {
        return Err(SequenceError::NotEquivariant(name));
    }
    Ok(())
}

/// `0 -> left --inject--> middle --surject--> right -> 0`, verified on construction.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ShortExact {
    pub left: GroupLattice,
    pub middle: GroupLattice,
    pub right: GroupLattice,
    pub inject: IntMatrix,
    pub surject: IntMatrix,
}

impl ShortExact {
    pub fn new(
        left: GroupLattice,
        middle: GroupLattice,
        right: GroupLattice,
        inject: IntMatrix,
        surject: IntMatrix,
    ) -> Result<Self, SequenceError> {
        let s = Self { left, middle, right, inject, surject };
        s.verify()?;
        Ok(s)
    }

    /// Checks equivariance, `surject * inject = 0`, saturated injectivity,
    /// surjectivity and additivity of ranks.
    pub fn verify(&self) -> Result<(), SequenceError> {
        check_map("inject", &self.left, &self.middle, &self.inject)?;
        check_map("surject", &self.middle, &self.right, &self.surject)?;
        if !(&self.surject * &self.inject).is_zero() {
            return Err(SequenceError::CompositionNonzero);
        }
        let (l, m, r) = (self.left.z_rank(), self.middle.z_rank(), self.right.z_rank());
        if l + r != m {
            return Err(SequenceError::RankMismatch { left: l, middle: m, right: r });
        }
        let inj = exactla::smith_invariants(&self.inject);
        if inj.iter().filter(|d| *d != &num_bigint::BigInt::from(0)).count() != l {
            return Err(SequenceError::NotInjective);
        }
        if !inj.iter().all(|d| d.is_one()) {
            return Err(SequenceError::ImageNotSaturated);
        }
        let sur = exactla::smith_invariants(&self.surject);
        if sur.len() != r || !sur.iter().all(|d| d.is_one()) {
            return Err(SequenceError::NotSurjective);
        }
        Ok(())
    }

    /// `0 -> right^* -> middle^* -> left^* -> 0`.
    pub fn dual(&self) -> ShortExact {
        let s = ShortExact {
            left: super::dual(&self.right),
            middle: super::dual(&self.middle),
            right: super::dual(&self.left),
            inject: self.surject.transpose(),
            surject: self.inject.transpose(),
        };
        debug_assert_eq!(s.verify(), Ok(()));
        s
    }
}

/// `0 -> R pi / Phi_n(sigma) --Psi(sigma)--> R pi -> R pi / Psi(sigma) -> 0`
/// with `Psi = (X^n - 1) / Phi_n`.
#[derive(Clone, Debug, Serialize)]
pub struct RegularPhiSequence {
    pub sequence: ShortExact,
    /// `Psi` as a polynomial.
    pub cofactor: IntPoly,
    /// `Some(q)` when `Psi = X^q - 1`, in which case the cokernel is exactly
    /// the permutation lattice with one orbit of size `q`.
    pub cokernel_orbit: Option<usize>,
}

pub fn regular_phi_sequence(base: BaseRing, g: CyclicGroup) -> Result<RegularPhiSequence, SequenceError> {
    let n = g.order();
    let phi = cyclotomic(n).poly;
    let (psi, rem) = IntPoly::x_pow_minus_one(n).div_rem_monic(&phi);
    debug_assert!(rem.is_zero());
    let deg_phi = phi.degree().expect("nonzero");
    let deg_psi = psi.degree().expect("nonzero");
    let k = base.degree();

    // sigma^i -> sigma^i Psi(sigma); degrees stay below n so no reduction is needed
    let mut inject = IntMatrix::zeros(n, deg_phi);
    for i in 0..deg_phi {
        for (j, c) in psi.coeffs().iter().enumerate() {
            inject.set(i + j, i, c.clone());
        }
    }
    // sigma^j -> sigma^j mod Psi
    let mut surject = IntMatrix::zeros(deg_psi, n);
    for j in 0..n {
        let (_, r) = IntPoly::monomial(j).div_rem_monic(&psi);
        for (i, c) in r.coeffs().iter().enumerate() {
            surject.set(i, j, c.clone());
        }
    }
    let id = IntMatrix::identity(k);
    let sequence = ShortExact::new(
        regular_quotient(base, g, &phi),
        regular_lattice(base, g),
        regular_quotient(base, g, &psi),
        inject.kron(&id),
        surject.kron(&id),
    )?;
    let cokernel_orbit = (psi == IntPoly::x_pow_minus_one(deg_psi)).then_some(deg_psi);
    Ok(RegularPhiSequence { sequence, cofactor: psi, cokernel_orbit })
}
