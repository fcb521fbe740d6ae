mod common;

use flasque::flabby::{
    classify, flabby_resolution, permutation_recognize_cp, phi_decompose, rational_orbit_multiplicities, split_check,
    SplitOutcome,
};
use flasque::groupring::{BaseRing, CyclicGroup};
use flasque::lattice::{permutation_lattice, random_permutation_lattice, regular_phi_sequence};

#[test]
fn resolutions_satisfy_their_contract() {
    for m in common::corpus(&[2, 3, 4, 6], 5, 8, 31) {
        let r = flabby_resolution(&m).unwrap();
        assert_eq!(r.verify(), Ok(()));
        assert_eq!(r.inner(), &m);
        assert!(classify(r.outer()).unwrap().is_flabby);
        let dual = r.dual_sequence();
        assert_eq!(dual.verify(), Ok(()));
    }
}

#[test]
fn resolution_outers_are_permutation_for_prime_order() {
    // flabby Z_(p) C_p-lattices are permutation
    for p in [2u64, 3, 5] {
        for m in common::corpus(&[p as usize], 4, 6, 37) {
            let outer = flabby_resolution(&m).unwrap().outer().clone();
            let d = permutation_recognize_cp(&outer, p).unwrap().expect("flabby outer is permutation");
            assert_eq!(d.trivial + d.regular * p as usize, outer.z_rank());
        }
    }
}

#[test]
fn hidden_permutation_lattices_are_recognised() {
    for p in [2usize, 3, 5] {
        let g = CyclicGroup::new(p).unwrap();
        for seed in 0..10 {
            let r = random_permutation_lattice(BaseRing::Integers, g, 1 + seed as usize % 7, seed).unwrap();
            let trivial = r.blocks.iter().filter(|b| matches!(b, flasque::lattice::RandomBlock::Orbit { size: 1 })).count();
            let d = permutation_recognize_cp(&r.lattice, p as u64).unwrap().unwrap();
            assert_eq!((d.trivial, d.regular), (trivial, r.blocks.len() - trivial));
        }
    }
}

#[test]
fn split_check_on_resolutions() {
    for m in common::corpus(&[2, 3, 4], 4, 5, 41) {
        let r = flabby_resolution(&m).unwrap();
        let p = permutation_lattice(BaseRing::Integers, m.group(), &r.middle_orbits).unwrap();
        assert_eq!(r.middle(), &p);
        let outcome = split_check(&r.sequence).unwrap();
        // a summand of a permutation lattice is coflabby
        if !classify(&m).unwrap().is_coflabby {
            assert!(matches!(outcome, SplitOutcome::NoSplit));
        }
    }
    let g = CyclicGroup::new(6).unwrap();
    for orbits in [vec![1], vec![2, 3], vec![6, 1]] {
        let m = permutation_lattice(BaseRing::Integers, g, &orbits).unwrap();
        let r = flabby_resolution(&m).unwrap();
        assert!(matches!(split_check(&r.sequence).unwrap(), SplitOutcome::Split(_)));
    }
}

#[test]
fn decompositions_satisfy_rank_identity() {
    for m in common::corpus(&[2, 3, 4, 6, 12], 6, 6, 43) {
        let d = phi_decompose(&m).unwrap();
        assert!(d.rank_identity);
        assert!(d.mobius_rank_inversion);
        assert!(d.omega.injective);
    }
}

#[test]
fn orbit_multiplicities_of_permutation_lattices() {
    let g = CyclicGroup::new(12).unwrap();
    let m = permutation_lattice(BaseRing::Integers, g, &[1, 1, 4, 12, 6]).unwrap();
    let a = rational_orbit_multiplicities(&m).unwrap();
    assert_eq!(a, vec![(1, 2), (2, 0), (3, 0), (4, 1), (6, 1), (12, 1)]);
    for n in [6, 12] {
        let s = regular_phi_sequence(BaseRing::Integers, CyclicGroup::new(n).unwrap()).unwrap();
        let a = rational_orbit_multiplicities(&s.sequence.right).unwrap();
        assert!(a.iter().any(|&(_, k)| k < 0), "n = {n}: {a:?}");
    }
}
