use serde::Serialize;

use super::{classify, FlabbyError};
use crate::exactla::{self, IntMatrix};
use crate::lattice::{
    dual, fixed_sublattice, permutation_dual_basis, permutation_lattice, sublattice, GroupLattice, ShortExact,
};

/// A permutation lattice `Q` with an equivariant map onto `M` that is
/// surjective on `h`-fixed points for every subgroup `h`.
#[derive(Clone, Debug, Serialize)]
pub struct PermutationCover {
    pub lattice: GroupLattice,
    pub orbits: Vec<usize>,
    /// `M`-rank x `Q`-rank.
    pub map: IntMatrix,
}

/// One block `R[pi/h]` for each vector of a `Z`-basis of `M^h`, subgroups in
/// increasing order. Block column `i * phi + j` maps to `sigma^i zeta^j v`.
pub fn permutation_cover(m: &GroupLattice) -> Result<PermutationCover, FlabbyError> {
    let n = m.group().order();
    let phi = m.base().degree();
    let mut orbits = Vec::new();
    let mut columns = Vec::new();
    for h in m.group().subgroups() {
        let fixed = fixed_sublattice(m, &h)?;
        let orbit = n / h.order();
        for c in 0..fixed.cols() {
            orbits.push(orbit);
            let mut v = fixed.column(c);
            for _ in 0..orbit {
                let mut w = v.clone();
                for _ in 0..phi {
                    columns.push(w.clone());
                    if let Some(z) = m.zeta() {
                        w = z.mul_vec(&w);
                    }
                }
                v = m.sigma().mul_vec(&v);
            }
        }
    }
    let map = IntMatrix::from_columns(m.z_rank(), &columns);
    let lattice = permutation_lattice(m.base(), m.group(), &orbits)?;
    if !GroupLattice::intertwines(&lattice, m, &map) {
        return Err(FlabbyError::InvariantViolation("permutation cover is not equivariant".into()));
    }
    Ok(PermutationCover { lattice, orbits, map })
}

/// `0 -> M -> P -> E -> 0` with `P` a permutation lattice and `E` flabby.
#[derive(Clone, Debug, Serialize)]
pub struct Resolution {
    pub sequence: ShortExact,
    /// Orbit sizes of `P`: `P` equals `permutation_lattice(base, group, middle_orbits)`.
    pub middle_orbits: Vec<usize>,
}

impl Resolution {
    pub fn inner(&self) -> &GroupLattice {
        &self.sequence.left
    }

    pub fn middle(&self) -> &GroupLattice {
        &self.sequence.middle
    }

    pub fn outer(&self) -> &GroupLattice {
        &self.sequence.right
    }

    pub fn inject(&self) -> &IntMatrix {
        &self.sequence.inject
    }

    pub fn surject(&self) -> &IntMatrix {
        &self.sequence.surject
    }

    /// Exactness, `P` permutation, `E` flabby.
    pub fn verify(&self) -> Result<(), FlabbyError> {
        self.sequence.verify()?;
        let m = self.inner();
        if &permutation_lattice(m.base(), m.group(), &self.middle_orbits)? != self.middle() {
            return Err(FlabbyError::InvariantViolation("middle term is not the recorded permutation lattice".into()));
        }
        if !classify(self.outer())?.is_flabby {
            return Err(FlabbyError::InvariantViolation("outer term is not flabby".into()));
        }
        Ok(())
    }

    /// The dual sequence `0 -> E^0 -> P -> M^0 -> 0`, with the middle term
    /// rewritten in permutation form.
    pub fn dual_sequence(&self) -> ShortExact {
        let d = self.sequence.dual();
        let (w, w_inv) = permutation_dual_basis(d.middle.base(), d.middle.z_rank());
        let s = ShortExact {
            middle: d.middle.conjugate(&w, &w_inv),
            inject: &w * &d.inject,
            surject: &d.surject * &w_inv,
            left: d.left,
            right: d.right,
        };
        debug_assert_eq!(s.verify(), Ok(()));
        s
    }
}

/// Covers `M^0` by a permutation lattice `Q` (surjective on all fixed
/// points), so the kernel `C` is coflabby, and dualises
/// `0 -> C -> Q -> M^0 -> 0` to `0 -> M -> Q^0 -> C^0 -> 0`.
pub fn flabby_resolution(m: &GroupLattice) -> Result<Resolution, FlabbyError> {
    let m0 = dual(m);
    let cover = permutation_cover(&m0)?;
    let kernel = exactla::kernel_basis(&cover.map);
    let c = sublattice(&cover.lattice, &kernel)?;

    let (w, w_inv) = permutation_dual_basis(m.base(), cover.lattice.z_rank());
    let sequence = ShortExact::new(
        m.clone(),
        cover.lattice,
        dual(&c),
        &w * &cover.map.transpose(),
        &kernel.transpose() * &w_inv,
    )?;
    let r = Resolution { sequence, middle_orbits: cover.orbits };
    r.verify()?;
    Ok(r)
}

/// Equivariant retraction `s` (`s * inject = 1`) and section `t`
/// (`surject * t = 1`) with `s * t = 0`, so `P = M + E`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SplitWitness {
    pub retraction: IntMatrix,
    pub section: IntMatrix,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum SplitOutcome {
    Split(SplitWitness),
    /// The integer system for an equivariant retraction has no solution.
    NoSplit,
}

/// Solves for an equivariant retraction of `inject`:
/// `(inject^T (x) I) vec s = vec I` and `(A_P^T (x) I - I (x) A_M) vec s = 0`
/// for every action `A`.
pub fn split_check(seq: &ShortExact) -> Result<SplitOutcome, FlabbyError> {
    let (rm, rp) = (seq.left.z_rank(), seq.middle.z_rank());
    let id_m = IntMatrix::identity(rm);
    let id_p = IntMatrix::identity(rp);
    let mut blocks = vec![seq.inject.transpose().kron(&id_m)];
    for (ap, am) in seq.middle.actions().into_iter().zip(seq.left.actions()) {
        blocks.push(&ap.transpose().kron(&id_m) - &id_p.kron(am));
    }
    let refs: Vec<&IntMatrix> = blocks.iter().collect();
    let system = IntMatrix::vstack(&refs);
    let mut rhs = id_m.vec_column_major();
    rhs.resize(system.rows(), Default::default());
    let Some(x) = exactla::solve_integer(&system, &rhs) else {
        return Ok(SplitOutcome::NoSplit);
    };
    let s = IntMatrix::from_column_major(rm, rp, &x);

    let lift = exactla::solve_integer_many(&seq.surject, &IntMatrix::identity(seq.right.z_rank()))
        .ok_or_else(|| FlabbyError::InvariantViolation("surjection has no integer right inverse".into()))?;
    let t = &(&id_p - &(&seq.inject * &s)) * &lift;

    let ok = (&s * &seq.inject).is_identity()
        && (&seq.surject * &t).is_identity()
        && (&s * &t).is_zero()
        && GroupLattice::intertwines(&seq.middle, &seq.left, &s)
        && GroupLattice::intertwines(&seq.right, &seq.middle, &t);
    if !ok {
        return Err(FlabbyError::InvariantViolation("splitting maps failed verification".into()));
    }
    Ok(SplitOutcome::Split(SplitWitness { retraction: s, section: t }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groupring::{BaseRing, CyclicGroup};
    use crate::lattice::{augmentation_ideal, regular_lattice, trivial_lattice, twisted_line, zero_lattice};

    fn c(n: usize) -> CyclicGroup {
        CyclicGroup::new(n).unwrap()
    }

    #[test]
    fn cover_orbits() {
        // Z over C_4: fixed points are Z for every subgroup
        let cov = permutation_cover(&trivial_lattice(BaseRing::Integers, c(4))).unwrap();
        assert_eq!(cov.orbits, vec![4, 2, 1]);
    }

    #[test]
    fn resolutions_verify() {
        for n in [2, 3, 4, 6] {
            let g = c(n);
            for m in [
                trivial_lattice(BaseRing::Integers, g),
                regular_lattice(BaseRing::Integers, g),
                augmentation_ideal(BaseRing::Integers, g),
            ] {
                let r = flabby_resolution(&m).unwrap();
                assert_eq!(r.verify(), Ok(()));
                assert_eq!(r.inner(), &m);
            }
        }
    }

    #[test]
    fn cyclotomic_resolution_verifies() {
        let m = twisted_line(BaseRing::Cyclotomic { m: 3 }, c(3), 1).unwrap();
        let r = flabby_resolution(&m).unwrap();
        assert_eq!(r.verify(), Ok(()));
        assert_eq!(r.dual_sequence().verify(), Ok(()));
    }

    #[test]
    fn rank_zero_resolution() {
        let z = zero_lattice(BaseRing::Integers, c(3));
        let r = flabby_resolution(&z).unwrap();
        assert_eq!((r.middle().z_rank(), r.outer().z_rank()), (0, 0));
        assert!(matches!(split_check(&r.sequence).unwrap(), SplitOutcome::Split(_)));
    }

    #[test]
    fn permutation_resolution_splits() {
        let p = regular_lattice(BaseRing::Integers, c(3));
        let r = flabby_resolution(&p).unwrap();
        assert!(matches!(split_check(&r.sequence).unwrap(), SplitOutcome::Split(_)));
        let z = trivial_lattice(BaseRing::Integers, c(2));
        let r = flabby_resolution(&z).unwrap();
        assert!(matches!(split_check(&r.sequence).unwrap(), SplitOutcome::Split(_)));
    }

    #[test]
    fn augmentation_sequence_does_not_split() {
        // 0 -> I -> Z pi -> Z -> 0 splits only if Z were a summand of Z pi
        let g = c(3);
        let seq = ShortExact::new(
            augmentation_ideal(BaseRing::Integers, g),
            regular_lattice(BaseRing::Integers, g),
            trivial_lattice(BaseRing::Integers, g),
            crate::lattice::augmentation_inclusion(BaseRing::Integers, g),
            IntMatrix::from_rows(&[[1, 1, 1]]),
        )
        .unwrap();
        assert_eq!(split_check(&seq).unwrap(), SplitOutcome::NoSplit);
    }
}
