#![allow(dead_code)]

use num_bigint::BigInt;

use flasque::exactla::{kernel_basis, quotient_invariants, AbelianInvariants};
use flasque::groupring::{BaseRing, CyclicGroup, Subgroup};
use flasque::lattice::random_lattice;
use flasque::{GroupLattice, IntMatrix};

/// Seeded random lattices over `C_n` for each listed `n`, ranks `1..=max_rank`.
pub fn corpus(orders: &[usize], max_rank: usize, per_order: usize, seed: u64) -> Vec<GroupLattice> {
    let mut out = Vec::new();
    for &n in orders {
        let g = CyclicGroup::new(n).unwrap();
        for i in 0..per_order {
            let rank = 1 + i % max_rank;
            out.push(random_lattice(BaseRing::Integers, g, rank, seed + (n * 1000 + i) as u64).unwrap());
        }
    }
    out
}

/// `H^1(h, M)` from the full crossed-homomorphism system: unknowns `f(T^i)`
/// for every element, equations `f(T^(i+j)) = f(T^i) + T^i f(T^j)` for all
/// pairs, modulo principal cocycles `T^i -> (T^i - 1) m`.
pub fn h_one_crossed_homomorphisms(m: &GroupLattice, h: &Subgroup) -> AbelianInvariants {
    let t = m.subgroup_generator(h).unwrap();
    let d = h.order();
    let r = m.z_rank();
    let powers: Vec<IntMatrix> = (0..d).map(|i| t.pow(i)).collect();
    let id = IntMatrix::identity(r);

    let mut eq = IntMatrix::zeros(d * d * r, d * r);
    for i in 0..d {
        for j in 0..d {
            let row0 = (i * d + j) * r;
            let k = (i + j) % d;
            let mut add = |col_block: usize, a: &IntMatrix, sign: i64| {
                for x in 0..r {
                    for y in 0..r {
                        let v = eq.get(row0 + x, col_block * r + y) + a.get(x, y) * BigInt::from(sign);
                        eq.set(row0 + x, col_block * r + y, v);
                    }
                }
            };
            add(k, &id, 1);
            add(i, &id, -1);
            add(j, &powers[i], -1);
        }
    }
    let cocycles = kernel_basis(&eq);
    let refs: Vec<IntMatrix> = powers.iter().map(|p| p - &id).collect();
    let refs: Vec<&IntMatrix> = refs.iter().collect();
    let coboundaries = IntMatrix::vstack(&refs);
    quotient_invariants(&cocycles, &coboundaries).unwrap()
}
