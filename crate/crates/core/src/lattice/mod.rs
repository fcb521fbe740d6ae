//! Lattices over `R[C_n]`: free `Z`-modules with a `sigma`-action (and a
//! commuting `zeta`-action when `R = Z[zeta_m]`), plus the standard
//! constructions on them.
//!
//! Sublattices are always saturated, so every quotient built here is again a
//! lattice.

mod random;
mod sequence;

use num_bigint::BigInt;
use num_traits::One;
use serde::Serialize;
use thiserror::Error;

use crate::exactla::{self, ExactError, IntMatrix};
use crate::groupring::{cyclotomic, euler_phi, BaseRing, CyclicGroup, GroupRingError, IntPoly, Subgroup};

pub use random::{random_lattice, random_lattice_with_record, random_permutation_lattice, RandomBlock, RandomLattice};
pub use sequence::{regular_phi_sequence, LatticeMap, RegularPhiSequence, SequenceError, ShortExact};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("action matrix is {rows}x{cols}, expected {rank}x{rank}")]
    ActionShape { rows: usize, cols: usize, rank: usize },
    #[error("sigma^{order} is not the identity")]
    SigmaOrder { order: usize },
    #[error("base ring {0} needs a zeta action")]
    ZetaMissing(BaseRing),
    #[error("base ring {0} carries no zeta action")]
    ZetaUnexpected(BaseRing),
    #[error("zeta action is not a root of Phi_{m}")]
    ZetaNotRoot { m: usize },
    #[error("sigma and zeta actions do not commute")]
    NotCommuting,
    #[error("Z-rank {rank} is not a multiple of phi({m}) = {phi}")]
    RankNotMultiple { rank: usize, m: usize, phi: usize },
    #[error("lattices have different base rings or groups")]
    MismatchedBase,
    #[error("subgroup of {sub} is not a subgroup of {group}")]
    SubgroupMismatch { sub: CyclicGroup, group: CyclicGroup },
    #[error("sublattice is not stable under the action")]
    NotStable,
    #[error("no block combination has Z-rank {rank} over {base}")]
    RankInfeasible { rank: usize, base: BaseRing },
    #[error(transparent)]
    Group(#[from] GroupRingError),
    #[error(transparent)]
    Exact(#[from] ExactError),
}

/// An `R[C_n]`-lattice as a free `Z`-module with action matrices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GroupLattice {
    base: BaseRing,
    group: CyclicGroup,
    sigma: IntMatrix,
    #[serde(skip_serializing_if = "Option::is_none")]
    zeta: Option<IntMatrix>,
}

impl GroupLattice {
    pub fn new(base: BaseRing, group: CyclicGroup, sigma: IntMatrix, zeta: Option<IntMatrix>) -> Result<Self, LatticeError> {
        let m = Self { base, group, sigma, zeta };
        m.validate()?;
        Ok(m)
    }

    /// Skips validation in release builds; for internal constructions whose
    /// invariants hold by construction.
    pub(crate) fn assemble(base: BaseRing, group: CyclicGroup, sigma: IntMatrix, zeta: Option<IntMatrix>) -> Self {
        let m = Self { base, group, sigma, zeta };
        debug_assert_eq!(m.validate(), Ok(()));
        m
    }

    pub fn validate(&self) -> Result<(), LatticeError> {
        let rank = self.sigma.rows();
        let check_shape = |a: &IntMatrix| {
            if a.rows() != rank || a.cols() != rank {
                Err(LatticeError::ActionShape { rows: a.rows(), cols: a.cols(), rank })
            } else {
                Ok(())
            }
        };
        check_shape(&self.sigma)?;
        if !self.sigma.pow(self.group.order()).is_identity() {
            return Err(LatticeError::SigmaOrder { order: self.group.order() });
        }
        match (&self.base, &self.zeta) {
            (BaseRing::Cyclotomic { m }, Some(z)) => {
                check_shape(z)?;
                let phi = euler_phi(*m);
                if !rank.is_multiple_of(phi) {
                    return Err(LatticeError::RankNotMultiple { rank, m: *m, phi });
                }
                if !cyclotomic(*m).poly.eval_matrix(z).is_zero() {
                    return Err(LatticeError::ZetaNotRoot { m: *m });
                }
                if &self.sigma * z != z * &self.sigma {
                    return Err(LatticeError::NotCommuting);
                }
            }
            (BaseRing::Cyclotomic { .. }, None) => return Err(LatticeError::ZetaMissing(self.base)),
            (_, Some(_)) => return Err(LatticeError::ZetaUnexpected(self.base)),
            (_, None) => {}
        }
        Ok(())
    }

    pub fn base(&self) -> BaseRing {
        self.base
    }

    pub fn group(&self) -> CyclicGroup {
        self.group
    }

    pub fn z_rank(&self) -> usize {
        self.sigma.rows()
    }

    pub fn sigma(&self) -> &IntMatrix {
        &self.sigma
    }

    pub fn zeta(&self) -> Option<&IntMatrix> {
        self.zeta.as_ref()
    }

    /// All action matrices: sigma first, then zeta when present.
    pub fn actions(&self) -> Vec<&IntMatrix> {
        std::iter::once(&self.sigma).chain(self.zeta.as_ref()).collect()
    }

    /// Same matrices over a different base ring (only between `Z` and `Z_(p)`).
    pub fn with_base(&self, base: BaseRing) -> Result<Self, LatticeError> {
        Self::new(base, self.group, self.sigma.clone(), self.zeta.clone())
    }

    /// Action of the canonical generator `sigma^(n/d)` of `h`.
    pub fn subgroup_generator(&self, h: &Subgroup) -> Result<IntMatrix, LatticeError> {
        self.check_subgroup(h)?;
        Ok(self.sigma.pow(h.generator_exponent()))
    }

    pub(crate) fn check_subgroup(&self, h: &Subgroup) -> Result<(), LatticeError> {
        if h.parent() != self.group {
            return Err(LatticeError::SubgroupMismatch { sub: h.parent(), group: self.group });
        }
        Ok(())
    }

    /// Change of basis `x -> w x`: actions become `w A w^-1`.
    pub fn conjugate(&self, w: &IntMatrix, w_inv: &IntMatrix) -> Self {
        let conj = |a: &IntMatrix| &(w * a) * w_inv;
        Self::assemble(self.base, self.group, conj(&self.sigma), self.zeta.as_ref().map(conj))
    }

    /// Whether `matrix` (target rank x source rank) intertwines every action.
    pub fn intertwines(source: &Self, target: &Self, matrix: &IntMatrix) -> bool {
        if matrix.rows() != target.z_rank() || matrix.cols() != source.z_rank() {
            return false;
        }
        let pairs = source.actions().into_iter().zip(target.actions());
        source.actions().len() == target.actions().len() && pairs.into_iter().all(|(a, b)| (matrix * a) == (b * matrix))
    }
}

fn same_structure(a: &GroupLattice, b: &GroupLattice) -> Result<(), LatticeError> {
    if a.base != b.base || a.group != b.group {
        return Err(LatticeError::MismatchedBase);
    }
    Ok(())
}

/// Tensor a `Z`-action with the regular representation of the base ring.
fn extend_scalars(base: &BaseRing, sigma: &IntMatrix) -> (IntMatrix, Option<IntMatrix>) {
    match base.zeta_matrix() {
        Some(c) => {
            let k = sigma.rows();
            let phi = c.rows();
            (sigma.kron(&IntMatrix::identity(phi)), Some(IntMatrix::identity(k).kron(&c)))
        }
        None => (sigma.clone(), None),
    }
}

/// Cyclic permutation `e_i -> e_(i+1 mod k)`.
pub fn cycle_matrix(k: usize) -> IntMatrix {
    let mut m = IntMatrix::zeros(k, k);
    for i in 0..k {
        m.set((i + 1) % k, i, BigInt::one());
    }
    m
}

/// Direct sum of `R[pi/pi']` over the listed orbit sizes; an orbit of size
/// `k` is the coset space of the subgroup of order `n/k`, on which `sigma`
/// acts as a `k`-cycle.
pub fn permutation_lattice(base: BaseRing, g: CyclicGroup, orbit_sizes: &[usize]) -> Result<GroupLattice, LatticeError> {
    let mut cycles = Vec::with_capacity(orbit_sizes.len());
    for &k in orbit_sizes {
        if k == 0 || !g.order().is_multiple_of(k) {
            return Err(GroupRingError::BadDivisor { d: k, n: g.order() }.into());
        }
        cycles.push(cycle_matrix(k));
    }
    let refs: Vec<&IntMatrix> = cycles.iter().collect();
    let (sigma, zeta) = extend_scalars(&base, &IntMatrix::block_diag(&refs));
    Ok(GroupLattice::assemble(base, g, sigma, zeta))
}

/// The regular lattice `R pi`.
pub fn regular_lattice(base: BaseRing, g: CyclicGroup) -> GroupLattice {
    permutation_lattice(base, g, &[g.order()]).expect("n divides n")
}

/// `R` with trivial action.
pub fn trivial_lattice(base: BaseRing, g: CyclicGroup) -> GroupLattice {
    permutation_lattice(base, g, &[1]).expect("1 divides n")
}

/// The rank-zero lattice.
pub fn zero_lattice(base: BaseRing, g: CyclicGroup) -> GroupLattice {
    permutation_lattice(base, g, &[]).expect("empty sum")
}

/// Inclusion of the augmentation ideal into `R pi` on the basis
/// `sigma^i - 1`, `1 <= i <= n-1` (tensored with the base ring).
pub fn augmentation_inclusion(base: BaseRing, g: CyclicGroup) -> IntMatrix {
    let n = g.order();
    let mut inc = IntMatrix::zeros(n, n - 1);
    for i in 1..n {
        inc.set(i, i - 1, BigInt::one());
        inc.set(0, i - 1, BigInt::from(-1));
    }
    inc.kron(&IntMatrix::identity(base.degree()))
}

/// The augmentation ideal `ker(R pi -> R)` on the basis `(sigma - 1, ..., sigma^(n-1) - 1)`.
pub fn augmentation_ideal(base: BaseRing, g: CyclicGroup) -> GroupLattice {
    let n = g.order();
    // sigma (sigma^i - 1) = (sigma^(i+1) - 1) - (sigma - 1), with sigma^n - 1 = 0
    let mut s = IntMatrix::zeros(n - 1, n - 1);
    for i in 0..n - 1 {
        if i + 1 < n - 1 {
            s.set(i + 1, i, BigInt::one());
        }
        let v = s.get(0, i) - 1;
        s.set(0, i, v);
    }
    let (sigma, zeta) = extend_scalars(&base, &s);
    GroupLattice::assemble(base, g, sigma, zeta)
}

/// Rank-one `R`-lattice `R u` with `sigma u = zeta^k u`.
pub fn twisted_line(base: BaseRing, g: CyclicGroup, zeta_power: usize) -> Result<GroupLattice, LatticeError> {
    let zeta = base.zeta_matrix().ok_or(LatticeError::ZetaMissing(base))?;
    GroupLattice::new(base, g, zeta.pow(zeta_power), Some(zeta))
}

/// `Hom_R(M, R)`, identified with `Hom_Z(M, Z)` through the trace form:
/// `sigma` acts by the inverse transpose, scalars by the transpose.
pub fn dual(m: &GroupLattice) -> GroupLattice {
    let sigma_inv = m.sigma.pow(m.group.order() - 1);
    GroupLattice::assemble(m.base, m.group, sigma_inv.transpose(), m.zeta.as_ref().map(IntMatrix::transpose))
}

/// Unimodular `W` carrying `dual(permutation_lattice(orbits))` onto
/// `permutation_lattice(orbits)`: `W A^0 W^-1 = A` for every action.
pub fn permutation_dual_basis(base: BaseRing, z_rank: usize) -> (IntMatrix, IntMatrix) {
    match base {
        BaseRing::Cyclotomic { m } => {
            let s = cyclotomic(m).poly.hankel();
            let s_inv = exactla::unimodular_inverse(&s).expect("hankel matrix of a monic polynomial is unimodular");
            let blocks = IntMatrix::identity(z_rank / s.rows());
            (blocks.kron(&s), blocks.kron(&s_inv))
        }
        _ => (IntMatrix::identity(z_rank), IntMatrix::identity(z_rank)),
    }
}

pub fn direct_sum(a: &GroupLattice, b: &GroupLattice) -> Result<GroupLattice, LatticeError> {
    same_structure(a, b)?;
    let sigma = IntMatrix::block_diag(&[&a.sigma, &b.sigma]);
    let zeta = match (&a.zeta, &b.zeta) {
        (Some(x), Some(y)) => Some(IntMatrix::block_diag(&[x, y])),
        _ => None,
    };
    Ok(GroupLattice::assemble(a.base, a.group, sigma, zeta))
}

/// The same module viewed as a lattice over `h`.
pub fn restrict(m: &GroupLattice, h: &Subgroup) -> Result<GroupLattice, LatticeError> {
    let sigma = m.subgroup_generator(h)?;
    Ok(GroupLattice::assemble(m.base, h.as_group(), sigma, m.zeta.clone()))
}

/// Relabels `m` as a lattice over the quotient group `C_k` when `sigma^k = 1`.
pub fn over_quotient_group(m: &GroupLattice, k: usize) -> Result<GroupLattice, LatticeError> {
    let g = CyclicGroup::new(k)?;
    if !m.group.order().is_multiple_of(k) {
        return Err(GroupRingError::BadDivisor { d: k, n: m.group.order() }.into());
    }
    GroupLattice::new(m.base, g, m.sigma.clone(), m.zeta.clone())
}

/// Saturated basis (columns) of the `h`-fixed points.
pub fn fixed_sublattice(m: &GroupLattice, h: &Subgroup) -> Result<IntMatrix, LatticeError> {
    let t = m.subgroup_generator(h)?;
    Ok(exactla::kernel_basis(&(&t - &IntMatrix::identity(m.z_rank()))))
}

/// Lattice on the columns of `basis` (a saturated, stable sublattice) with the
/// restricted actions.
pub fn sublattice(m: &GroupLattice, basis: &IntMatrix) -> Result<GroupLattice, LatticeError> {
    let induce = |a: &IntMatrix| exactla::coordinates(basis, &(a * basis)).map_err(|_| LatticeError::NotStable);
    let sigma = induce(&m.sigma)?;
    let zeta = m.zeta.as_ref().map(induce).transpose()?;
    Ok(GroupLattice::assemble(m.base, m.group, sigma, zeta))
}

/// `M / sat(im a)` with the induced action.
#[derive(Clone, Debug)]
pub struct LatticeQuotient {
    pub lattice: GroupLattice,
    /// Surjection `M -> quotient` (quotient rank x M rank).
    pub projection: IntMatrix,
    /// Torsion of `M / im(a)` before saturation.
    pub torsion: exactla::AbelianInvariants,
}

/// Quotient of `m` by the saturation of the column span of `a`, which must be stable.
pub fn quotient_by_image(m: &GroupLattice, a: &IntMatrix) -> Result<LatticeQuotient, LatticeError> {
    let e = exactla::hermite_with_transform(a);
    let r = e.rank();
    let w = e.transform.expect("transform requested");
    let rows: Vec<usize> = (r..m.z_rank()).collect();
    let proj = w.select_rows(&rows);
    let proj_t = proj.transpose();
    let induce = |act: &IntMatrix| {
        exactla::coordinates(&proj_t, &(&act.transpose() * &proj_t))
            .map(|x| x.transpose())
            .map_err(|_| LatticeError::NotStable)
    };
    let sigma = induce(&m.sigma)?;
    let zeta = m.zeta.as_ref().map(induce).transpose()?;
    let mut torsion = exactla::cokernel_invariants(a);
    torsion.free_rank = 0;
    Ok(LatticeQuotient { lattice: GroupLattice::assemble(m.base, m.group, sigma, zeta), projection: proj, torsion })
}

fn phi_of_sigma(m: &GroupLattice, d: usize) -> Result<IntMatrix, LatticeError> {
    let n = m.group.order();
    if d == 0 || !n.is_multiple_of(d) {
        return Err(GroupRingError::BadDivisor { d, n }.into());
    }
    Ok(cyclotomic(d).poly.eval_matrix(&m.sigma))
}

/// `(M / Phi_d(sigma) M)_0` and the torsion that was discarded.
/// On the result `Phi_d(sigma) = 0`, so it is a module over `R[zeta_d]`.
pub fn phi_quotient(m: &GroupLattice, d: usize) -> Result<LatticeQuotient, LatticeError> {
    let a = phi_of_sigma(m, d)?;
    quotient_by_image(m, &a)
}

/// Saturated basis (columns) of `ker Phi_d(sigma)`.
pub fn phi_kernel_basis(m: &GroupLattice, d: usize) -> Result<IntMatrix, LatticeError> {
    Ok(exactla::kernel_basis(&phi_of_sigma(m, d)?))
}

/// `M' = {u : Phi_d(sigma) u = 0}`.
pub fn kernel_sublattice(m: &GroupLattice, d: usize) -> Result<GroupLattice, LatticeError> {
    sublattice(m, &phi_kernel_basis(m, d)?)
}

/// `M'' = M / M'` with `M'` the `Phi_d(sigma)`-kernel.
pub fn phi_cokernel(m: &GroupLattice, d: usize) -> Result<GroupLattice, LatticeError> {
    Ok(quotient_by_image(m, &phi_kernel_basis(m, d)?)?.lattice)
}

/// `0 -> M' -> M -> M'' -> 0` for the `Phi_d(sigma)`-kernel `M'`.
pub fn phi_kernel_sequence(m: &GroupLattice, d: usize) -> Result<ShortExact, LatticeError> {
    let basis = phi_kernel_basis(m, d)?;
    let left = sublattice(m, &basis)?;
    let q = quotient_by_image(m, &basis)?;
    ShortExact::new(left, m.clone(), q.lattice, basis, q.projection).map_err(|e| match e {
        SequenceError::Lattice(l) => l,
        other => unreachable!("kernel sequence failed verification: {other}"),
    })
}

/// `R pi / <f(sigma)>` on the basis `1, sigma, ..., sigma^(deg f - 1)`, i.e.
/// `sigma` acting as the companion matrix of `f` (for monic `f | X^n - 1`).
pub fn regular_quotient(base: BaseRing, g: CyclicGroup, f: &IntPoly) -> GroupLattice {
    let (sigma, zeta) = extend_scalars(&base, &f.companion());
    GroupLattice::assemble(base, g, sigma, zeta)
}
