use serde::Serialize;

use super::{classify, flabby_resolution, FlabbyError};
use crate::cohomology::{tate_minus_one, tate_zero, TateGroup};
use crate::exactla::AbelianInvariants;
use crate::groupring::{euler_phi, is_prime, validate_hypotheses, BaseRing, CyclicGroup, HypothesisReport};
use crate::lattice::{dual, twisted_line, GroupLattice};

/// An `R`-module `+ R/lambda^(e_i)` with `lambda = 1 - zeta`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TateSummary {
    pub invariants: AbelianInvariants,
    pub blocks: Vec<usize>,
    /// Length over `R`, i.e. `sum e_i`.
    pub length: usize,
}

impl TateSummary {
    fn of(g: &TateGroup) -> Result<Self, FlabbyError> {
        let blocks = g
            .zeta_blocks()
            .ok_or_else(|| FlabbyError::InvariantViolation("no zeta action on the cohomology group".into()))?
            .map_err(|e| FlabbyError::InvariantViolation(format!("block decomposition failed: {e}")))?;
        Ok(Self { invariants: g.invariants.clone(), length: blocks.iter().sum(), blocks })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    /// `H^0(pi, E)` has a block of size other than `e`, so it is not a
    /// summand of any `(R/lambda^e)^m`.
    NotInvertible,
    /// Every block has size `e`; the block test cannot rule out invertibility.
    Inconclusive,
}

/// `0 -> E -> P -> M -> 0` for `M = R u`, obtained by dualising a flabby
/// resolution of `M^0`, and the length count on Tate groups.
#[derive(Clone, Debug, Serialize)]
pub struct TwistedLineReport {
    pub base: BaseRing,
    pub group_order: usize,
    pub hypotheses: HypothesisReport,
    pub rank_m: usize,
    pub rank_p: usize,
    pub rank_e: usize,
    pub p_orbits: Vec<usize>,
    pub e_is_flabby: bool,
    /// Block size of `H^0(pi, R) = R/nR`, which is `R/lambda^e`.
    pub expected_block: usize,
    pub h_minus_one_m: TateSummary,
    pub h_zero_p: TateSummary,
    pub h_zero_e: TateSummary,
    /// `l(H^0 E) = l(H^-1 M) + l(H^0 P)`, from `0 -> H^-1 M -> H^0 E -> H^0 P -> 0`.
    pub lengths_add: bool,
    pub p_blocks_uniform: bool,
    /// `l(H^0 E) mod e`.
    pub length_residue: usize,
    pub verdict: Verdict,
}

/// `R = Z[zeta_p]`, `pi = C_p`, `sigma u = zeta u`, for odd primes `p <= 7`.
pub fn twisted_line_counterexample(p: u64) -> Result<TwistedLineReport, FlabbyError> {
    if !(3..=7).contains(&p) || !is_prime(p) {
        return Err(FlabbyError::UnsupportedPrime(p));
    }
    let base = BaseRing::Cyclotomic { m: p as usize };
    run(base, CyclicGroup::new(p as usize).map_err(crate::lattice::LatticeError::from)?, 1)
}

/// `R = Z[i]`, `pi = C_2`, `sigma u = -u`.
pub fn gaussian_twisted_line_counterexample() -> Result<TwistedLineReport, FlabbyError> {
    let base = BaseRing::Cyclotomic { m: 4 };
    run(base, CyclicGroup::new(2).map_err(crate::lattice::LatticeError::from)?, 2)
}

fn run(base: BaseRing, g: CyclicGroup, zeta_power: usize) -> Result<TwistedLineReport, FlabbyError> {
    let m: GroupLattice = twisted_line(base, g, zeta_power)?;
    let resolution = flabby_resolution(&dual(&m))?;
    let seq = resolution.dual_sequence();
    if seq.right != m {
        return Err(FlabbyError::InvariantViolation("dual sequence does not end in M".into()));
    }
    let (e, p) = (&seq.left, &seq.middle);
    let whole = g.whole();

    let h_minus_one_m = TateSummary::of(&tate_minus_one(&m, &whole)?)?;
    let h_zero_p = TateSummary::of(&tate_zero(p, &whole)?)?;
    let h_zero_e = TateSummary::of(&tate_zero(e, &whole)?)?;

    let BaseRing::Cyclotomic { m: idx } = base else { unreachable!("cyclotomic base") };
    let expected_block = euler_phi(idx);
    let p_blocks_uniform = h_zero_p.blocks.iter().all(|&b| b == expected_block);
    let lengths_add = h_zero_e.length == h_minus_one_m.length + h_zero_p.length;
    let verdict = if h_zero_e.blocks.iter().all(|&b| b == expected_block) {
        Verdict::Inconclusive
    } else {
        Verdict::NotInvertible
    };
    Ok(TwistedLineReport {
        base,
        group_order: g.order(),
        hypotheses: validate_hypotheses(&base, &g),
        rank_m: m.z_rank(),
        rank_p: p.z_rank(),
        rank_e: e.z_rank(),
        p_orbits: resolution.middle_orbits.clone(),
        e_is_flabby: classify(e)?.is_flabby,
        expected_block,
        length_residue: h_zero_e.length % expected_block,
        h_minus_one_m,
        h_zero_p,
        h_zero_e,
        lengths_add,
        p_blocks_uniform,
        verdict,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn p3_is_not_invertible() {
        let r = twisted_line_counterexample(3).unwrap();
        assert_eq!(r.h_minus_one_m.blocks, vec![1]);
        assert!(r.p_blocks_uniform);
        assert!(r.lengths_add);
        assert!(r.e_is_flabby);
        assert_eq!(r.length_residue, 1);
        assert_eq!(r.verdict, Verdict::NotInvertible);
        assert!(!r.hypotheses.all_hold);
    }

    #[test]
    fn unsupported_primes() {
        for p in [2, 9, 11] {
            assert!(matches!(twisted_line_counterexample(p), Err(FlabbyError::UnsupportedPrime(_))));
        }
    }
}
