use serde::Serialize;

use super::FlabbyError;
use crate::exactla::{self, AbelianInvariants, IntMatrix};
use crate::groupring::{divisors, euler_phi, mobius, BaseRing};
use crate::lattice::{phi_quotient, quotient_by_image, GroupLattice};

/// Indices `d` for which `Z[zeta_d]` has class number one.
pub const DEFAULT_CLASS_NUMBER_ONE: &[usize] = &[
    1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15, 16, 17, 18, 19, 20, 21, 22, 24, 25, 26, 27, 28, 30, 32, 33,
    34, 35, 36, 38, 40, 42, 44, 45, 48, 50, 54, 60, 66, 70, 84, 90,
];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "class", content = "index", rename_all = "snake_case")]
pub enum SteinitzClass {
    Trivial,
    /// The class group is not known to be trivial; no class is computed.
    Unsupported(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SteinitzDatum {
    pub index: usize,
    pub rank: usize,
    pub class: SteinitzClass,
}

/// Steinitz class of a torsion-free module of the given rank over `R[zeta_d]`.
///
/// Over `Z_(p)` every `Z_(p)[zeta_d]` is semilocal, hence a PID. Over `Z` the
/// class is trivial exactly for allowlisted `d`. Other base rings are refused.
pub fn steinitz_class(base: BaseRing, d: usize, rank: usize, allowlist: &[usize]) -> SteinitzDatum {
    let trivial = match base {
        BaseRing::LocalizedAtP { .. } => true,
        BaseRing::Integers => allowlist.contains(&d),
        BaseRing::Cyclotomic { m } => m <= 2 && allowlist.contains(&d),
    };
    let class = if trivial { SteinitzClass::Trivial } else { SteinitzClass::Unsupported(d) };
    SteinitzDatum { index: d, rank, class }
}

/// `(M / Phi_d(sigma) M)_0` for one divisor.
#[derive(Clone, Debug, Serialize)]
pub struct DivisorComponent {
    pub d: usize,
    pub z_rank: usize,
    /// Rank over `R[zeta_d]`, i.e. `z_rank / (phi(d) deg R)`.
    pub rank: usize,
    pub torsion: AbelianInvariants,
    pub steinitz: SteinitzDatum,
}

/// `M / (sigma^d - 1) M` with its Moebius coefficient `mu(n/d)`.
#[derive(Clone, Debug, Serialize)]
pub struct MobiusTerm {
    pub d: usize,
    pub mobius: i32,
    pub z_rank: usize,
    pub torsion: AbelianInvariants,
}

/// The diagonal map `M -> prod_d (M / Phi_d M)_0`.
#[derive(Clone, Debug, Serialize)]
pub struct OmegaCheck {
    pub injective: bool,
    pub cokernel: AbelianInvariants,
}

#[derive(Clone, Debug, Serialize)]
pub struct PhiDecomposition {
    pub components: Vec<DivisorComponent>,
    pub mobius_terms: Vec<MobiusTerm>,
    /// `sum_d phi(d) rank_d = z_rank(M)` (scaled by the base degree).
    pub rank_identity: bool,
    /// For every `e | n`: `rank_Z((M / Phi_e M)_0) = sum_(d | e) mu(e/d) rank_Z(M / (sigma^d - 1) M)`.
    pub mobius_rank_inversion: bool,
    pub omega: OmegaCheck,
}

pub fn phi_decompose(m: &GroupLattice) -> Result<PhiDecomposition, FlabbyError> {
    phi_decompose_with(m, DEFAULT_CLASS_NUMBER_ONE)
}

pub fn phi_decompose_with(m: &GroupLattice, allowlist: &[usize]) -> Result<PhiDecomposition, FlabbyError> {
    let n = m.group().order();
    let k = m.base().degree();
    let mut components = Vec::new();
    let mut projections = Vec::new();
    for d in divisors(n) {
        let q = phi_quotient(m, d)?;
        let z_rank = q.lattice.z_rank();
        let rank = z_rank / (euler_phi(d) * k);
        components.push(DivisorComponent {
            d,
            z_rank,
            rank,
            torsion: q.torsion,
            steinitz: steinitz_class(m.base(), d, rank, allowlist),
        });
        projections.push(q.projection);
    }

    let mut mobius_terms = Vec::new();
    for d in divisors(n) {
        let a = &m.sigma().pow(d) - &IntMatrix::identity(m.z_rank());
        let q = quotient_by_image(m, &a)?;
        mobius_terms.push(MobiusTerm { d, mobius: mobius(n / d), z_rank: q.lattice.z_rank(), torsion: q.torsion });
    }

    let rank_identity = components.iter().map(|c| euler_phi(c.d) * c.rank * k).sum::<usize>() == m.z_rank();
    let term_rank = |d: usize| mobius_terms.iter().find(|t| t.d == d).map_or(0, |t| t.z_rank as i64);
    let mobius_rank_inversion = components.iter().all(|c| {
        let rhs: i64 = divisors(c.d).into_iter().map(|d| i64::from(mobius(c.d / d)) * term_rank(d)).sum();
        rhs == c.z_rank as i64
    });

    let refs: Vec<&IntMatrix> = projections.iter().collect();
    let diagonal = IntMatrix::vstack(&refs);
    let injective = exactla::rank(&diagonal) == m.z_rank();
    let omega = OmegaCheck { injective, cokernel: exactla::cokernel_invariants(&diagonal) };

    Ok(PhiDecomposition { components, mobius_terms, rank_identity, mobius_rank_inversion, omega })
}
