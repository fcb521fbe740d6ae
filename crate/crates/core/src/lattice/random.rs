use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{cycle_matrix, extend_scalars, GroupLattice, LatticeError};
use crate::exactla::IntMatrix;
use crate::groupring::{cyclotomic, divisors, euler_phi, BaseRing, CyclicGroup};

/// One indecomposable-over-`Q` summand used by the generator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RandomBlock {
    /// Permutation lattice on one orbit of this size.
    Orbit { size: usize },
    /// `Z[zeta_d]` with `sigma = zeta_d`.
    Phi { d: usize },
}

impl RandomBlock {
    fn units(&self) -> usize {
        match *self {
            Self::Orbit { size } => size,
            Self::Phi { d } => euler_phi(d),
        }
    }

    fn action(&self) -> IntMatrix {
        match *self {
            Self::Orbit { size } => cycle_matrix(size),
            Self::Phi { d } => cyclotomic(d).poly.companion(),
        }
    }
}

/// A random lattice and how it was built: `lattice = W (sum of blocks) W^-1`.
#[derive(Clone, Debug)]
pub struct RandomLattice {
    pub lattice: GroupLattice,
    pub blocks: Vec<RandomBlock>,
    pub change_of_basis: IntMatrix,
    pub change_of_basis_inverse: IntMatrix,
}

/// Deterministic random lattice of the given `Z`-rank.
pub fn random_lattice(base: BaseRing, g: CyclicGroup, z_rank: usize, seed: u64) -> Result<GroupLattice, LatticeError> {
    Ok(random_lattice_with_record(base, g, z_rank, seed)?.lattice)
}

/// Direct sum of random permutation orbits and `Z[zeta_d]` blocks (`d | n`),
/// hidden by a random unimodular change of basis built from elementary row
/// operations. The same seed always yields the same lattice.
pub fn random_lattice_with_record(base: BaseRing, g: CyclicGroup, z_rank: usize, seed: u64) -> Result<RandomLattice, LatticeError> {
    generate(base, g, z_rank, seed, true)
}

/// Like [`random_lattice`] but only permutation orbits are used, so the
/// result is a permutation lattice in a hidden basis.
pub fn random_permutation_lattice(
    base: BaseRing,
    g: CyclicGroup,
    z_rank: usize,
    seed: u64,
) -> Result<RandomLattice, LatticeError> {
    generate(base, g, z_rank, seed, false)
}

fn generate(base: BaseRing, g: CyclicGroup, z_rank: usize, seed: u64, with_phi: bool) -> Result<RandomLattice, LatticeError> {
    let k = base.degree();
    if !z_rank.is_multiple_of(k) {
        return Err(LatticeError::RankInfeasible { rank: z_rank, base });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = g.order();
    let mut menu: Vec<RandomBlock> = divisors(n).into_iter().map(|size| RandomBlock::Orbit { size }).collect();
    if with_phi {
        menu.extend(divisors(n).into_iter().filter(|&d| d >= 2).map(|d| RandomBlock::Phi { d }));
    }

    let mut remaining = z_rank / k;
    let mut blocks = Vec::new();
    while remaining > 0 {
        let fits: Vec<RandomBlock> = menu.iter().copied().filter(|b| b.units() <= remaining).collect();
        let b = *fits.choose(&mut rng).expect("the trivial orbit always fits");
        remaining -= b.units();
        blocks.push(b);
    }
    let actions: Vec<IntMatrix> = blocks.iter().map(RandomBlock::action).collect();
    let refs: Vec<&IntMatrix> = actions.iter().collect();
    let (sigma, zeta) = extend_scalars(&base, &IntMatrix::block_diag(&refs));
    let plain = GroupLattice::assemble(base, g, sigma, zeta);

    // W = E_t ... E_1 with E = I + c e_i e_j, so W^-1 = E_1^-1 ... E_t^-1
    let mut w = IntMatrix::identity(z_rank);
    let mut w_inv = IntMatrix::identity(z_rank);
    if z_rank >= 2 {
        let steps = rng.gen_range(0..=z_rank * z_rank);
        for _ in 0..steps {
            let i = rng.gen_range(0..z_rank);
            let mut j = rng.gen_range(0..z_rank - 1);
            if j >= i {
                j += 1;
            }
            let c = BigInt::from(*[-2i64, -1, 1, 2].choose(&mut rng).expect("nonempty"));
            // row_i(W) += c row_j(W)
            for col in 0..z_rank {
                let v = w.get(i, col) + &c * w.get(j, col);
                w.set(i, col, v);
            }
            // col_j(W^-1) -= c col_i(W^-1)
            for row in 0..z_rank {
                let v = w_inv.get(row, j) - &c * w_inv.get(row, i);
                w_inv.set(row, j, v);
            }
        }
    }
    debug_assert!((&w * &w_inv).is_identity());
    let lattice = plain.conjugate(&w, &w_inv);
    Ok(RandomLattice { lattice, blocks, change_of_basis: w, change_of_basis_inverse: w_inv })
}
