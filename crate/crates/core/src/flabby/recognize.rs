use num_bigint::BigInt;
use serde::Serialize;

use super::{classify, FlabbyError, Witness};
use crate::cohomology::{tate_minus_one, tate_zero};
use crate::exactla::AbelianInvariants;
use crate::groupring::{divisors, euler_phi, is_prime, mobius, BaseRing};
use crate::lattice::{fixed_sublattice, phi_quotient, GroupLattice};

/// `M = Z^a + (Z C_p)^c` over `Z_(p)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct PermutationDecomposition {
    pub trivial: usize,
    pub regular: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "reason", rename_all = "snake_case")]
pub enum NotPermutation {
    NotFlabby { witness: Witness },
    /// `(z_rank - f)` is not a multiple of `p - 1`, or exceeds `(p - 1) f`.
    RankProfile { z_rank: usize, fixed_rank: usize },
    TateMismatch { expected_trivial: usize, h_zero: AbelianInvariants, h_minus_one: AbelianInvariants },
}

/// Recognises flabby `Z_(p) C_p`-lattices as permutation lattices.
///
/// With `f = rank M^pi`: `c = (z_rank - f) / (p - 1)`, `a = f - c`; the
/// profile is then checked against `H^0 = (Z/p)^a` and `H^-1 = 0`.
pub fn permutation_recognize_cp(
    m: &GroupLattice,
    p: u64,
) -> Result<Result<PermutationDecomposition, NotPermutation>, FlabbyError> {
    if !is_prime(p) {
        return Err(FlabbyError::UnsupportedPrime(p));
    }
    let n = m.group().order();
    if n as u64 != p {
        return Err(FlabbyError::WrongGroup { expected: p as usize, found: n });
    }
    let local = match m.base() {
        BaseRing::Integers => m.with_base(BaseRing::LocalizedAtP { p })?,
        BaseRing::LocalizedAtP { p: q } if q == p => m.clone(),
        other => return Err(FlabbyError::UnsupportedBase(other)),
    };
    let cls = classify(&local)?;
    if let Some(witness) = cls.flabby_witness {
        return Ok(Err(NotPermutation::NotFlabby { witness }));
    }
    let whole = local.group().whole();
    let z = local.z_rank();
    let f = fixed_sublattice(&local, &whole)?.cols();
    let pm1 = p as usize - 1;
    if z < f || (z - f) % pm1 != 0 || (z - f) / pm1 > f {
        return Ok(Err(NotPermutation::RankProfile { z_rank: z, fixed_rank: f }));
    }
    let c = (z - f) / pm1;
    let a = f - c;
    let h0 = tate_zero(&local, &whole)?.invariants;
    let hm1 = tate_minus_one(&local, &whole)?.invariants;
    let expected = AbelianInvariants { free_rank: 0, torsion: vec![BigInt::from(p); a] };
    if h0 != expected || !hm1.is_trivial() {
        return Ok(Err(NotPermutation::TateMismatch { expected_trivial: a, h_zero: h0, h_minus_one: hm1 }));
    }
    Ok(Ok(PermutationDecomposition { trivial: a, regular: c }))
}

/// Multiplicities `a_k` (orbit size `k | n`) of the unique rational
/// permutation module with the same `Phi_d`-isotypic ranks as `M`.
///
/// A permutation lattice contributes one `Z[zeta_d]`-rank to each `d | k`
/// per orbit of size `k`, so `a_k = sum_(k | j | n) mu(j/k) r_j`. A negative
/// `a_k` certifies that `M` is not a permutation lattice.
pub fn rational_orbit_multiplicities(m: &GroupLattice) -> Result<Vec<(usize, i64)>, FlabbyError> {
    let n = m.group().order();
    let k_base = m.base().degree();
    let mut r = Vec::new();
    for d in divisors(n) {
        let q = phi_quotient(m, d)?;
        r.push((d, (q.lattice.z_rank() / (euler_phi(d) * k_base)) as i64));
    }
    let rank_of = |j: usize| r.iter().find(|(d, _)| *d == j).map(|(_, x)| *x).unwrap_or(0);
    Ok(divisors(n)
        .into_iter()
        .map(|k| {
            let a = divisors(n)
                .into_iter()
                .filter(|j| j % k == 0)
                .map(|j| i64::from(mobius(j / k)) * rank_of(j))
                .sum();
            (k, a)
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groupring::CyclicGroup;
    use crate::lattice::{
        direct_sum, permutation_lattice, random_lattice_with_record, regular_phi_sequence, zero_lattice, RandomBlock,
    };
    use crate::IntMatrix;

    fn c(n: usize) -> CyclicGroup {
        CyclicGroup::new(n).unwrap()
    }

    #[test]
    fn conjugated_sum_is_recognised() {
        let g = c(3);
        let m = permutation_lattice(BaseRing::Integers, g, &[1, 1, 3]).unwrap();
        let w = IntMatrix::from_rows(&[[1, 2, 0, 0, 1], [0, 1, 0, 0, 0], [0, 0, 1, 1, 0], [0, 0, 0, 1, 0], [0, 0, 0, 0, 1]]);
        let w_inv = crate::exactla::unimodular_inverse(&w).unwrap();
        let conj = m.conjugate(&w, &w_inv);
        assert_eq!(
            permutation_recognize_cp(&conj, 3).unwrap(),
            Ok(PermutationDecomposition { trivial: 2, regular: 1 })
        );
    }

    #[test]
    fn zeta_twist_is_rejected() {
        let companion = crate::groupring::cyclotomic(3).poly.companion();
        let m = GroupLattice::new(BaseRing::Integers, c(3), companion, None).unwrap();
        let out = permutation_recognize_cp(&m, 3).unwrap();
        assert!(matches!(out, Err(NotPermutation::NotFlabby { .. })));
    }

    #[test]
    fn rank_zero_and_wrong_group() {
        let z = zero_lattice(BaseRing::Integers, c(5));
        assert_eq!(permutation_recognize_cp(&z, 5).unwrap(), Ok(PermutationDecomposition { trivial: 0, regular: 0 }));
        assert!(matches!(permutation_recognize_cp(&z, 3), Err(FlabbyError::WrongGroup { .. })));
    }

    #[test]
    fn random_permutation_lattices_match_record() {
        for p in [2usize, 3, 5] {
            for seed in 0..10 {
                let rec = random_lattice_with_record(BaseRing::Integers, c(p), 6, seed).unwrap();
                if rec.blocks.iter().any(|b| matches!(b, RandomBlock::Phi { .. })) {
                    continue;
                }
                let a = rec.blocks.iter().filter(|b| **b == RandomBlock::Orbit { size: 1 }).count();
                let cnt = rec.blocks.len() - a;
                assert_eq!(
                    permutation_recognize_cp(&rec.lattice, p as u64).unwrap(),
                    Ok(PermutationDecomposition { trivial: a, regular: cnt })
                );
            }
        }
    }

    #[test]
    fn orbit_multiplicities() {
        let g = c(6);
        let m = direct_sum(
            &permutation_lattice(BaseRing::Integers, g, &[1, 2]).unwrap(),
            &permutation_lattice(BaseRing::Integers, g, &[6, 3]).unwrap(),
        )
        .unwrap();
        assert_eq!(rational_orbit_multiplicities(&m).unwrap(), vec![(1, 1), (2, 1), (3, 1), (6, 1)]);
        // Z pi / (Phi_1 Phi_2 Phi_3) for n = 6 needs a negative number of fixed orbits
        let right = regular_phi_sequence(BaseRing::Integers, g).unwrap().sequence.right;
        assert_eq!(rational_orbit_multiplicities(&right).unwrap(), vec![(1, -1), (2, 1), (3, 1), (6, 0)]);
    }
}
