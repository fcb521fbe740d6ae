//! Tate cohomology of cyclic groups acting on lattices.
//!
//! For `H = <T>` of order `d` and the norm `N = 1 + T + ... + T^(d-1)`:
//! `H^-1 = ker N / (T-1)M`, `H^0 = M^H / N M`, and by periodicity
//! `H^1 = H^-1`. Over `Z_(p)` only `p`-primary parts are kept.

use serde::Serialize;

use crate::exactla::{self, AbelianInvariants, ExactError, IntMatrix, ModulePresentation};
use crate::groupring::{prime_power_base, BaseRing, Subgroup};
use crate::lattice::{cycle_matrix, fixed_sublattice, GroupLattice, LatticeError};

/// `1 + T + ... + T^(d-1)` for the generator `T` of `h`.
pub fn norm_matrix(m: &GroupLattice, h: &Subgroup) -> Result<IntMatrix, LatticeError> {
    let t = m.subgroup_generator(h)?;
    let mut acc = IntMatrix::zeros(m.z_rank(), m.z_rank());
    let mut power = IntMatrix::identity(m.z_rank());
    for _ in 0..h.order() {
        acc = &acc + &power;
        power = &power * &t;
    }
    Ok(acc)
}

/// A finite cohomology group together with the `zeta`-action on it (over `Z[zeta_m]`).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TateGroup {
    pub invariants: AbelianInvariants,
    #[serde(skip)]
    presentation: ModulePresentation,
    #[serde(skip)]
    zeta: Option<IntMatrix>,
    #[serde(skip)]
    base: BaseRing,
}

impl TateGroup {
    fn new(base: BaseRing, presentation: ModulePresentation, zeta: Option<IntMatrix>) -> Self {
        let raw = presentation.invariants();
        let invariants = match base.local_prime() {
            Some(p) => raw.p_part(p),
            None => raw,
        };
        Self { invariants, presentation, zeta, base }
    }

    pub fn is_zero(&self) -> bool {
        self.invariants.is_trivial()
    }

    pub fn presentation(&self) -> &ModulePresentation {
        &self.presentation
    }

    /// Decomposition `+ R/lambda^(e_i)` for `R = Z[zeta_(p^k)]`, `lambda = 1 - zeta`,
    /// returned as the sorted exponents `e_i`. `None` for other base rings.
    pub fn zeta_blocks(&self) -> Option<Result<Vec<usize>, ExactError>> {
        let BaseRing::Cyclotomic { m } = self.base else { return None };
        let p = prime_power_base(m)?;
        let zeta = self.zeta.as_ref()?;
        let lambda = &IntMatrix::identity(zeta.rows()) - zeta;
        Some(exactla::nilpotent_block_sizes(&self.presentation, &lambda, p as u64))
    }

    /// `log_p` of the order, for `p`-groups.
    pub fn length(&self, p: u64) -> Option<usize> {
        self.invariants.p_length(p)
    }
}

fn induced_zeta(m: &GroupLattice, basis: &IntMatrix) -> Option<IntMatrix> {
    m.zeta().map(|z| exactla::coordinates(basis, &(z * basis)).expect("zeta preserves sigma-stable sublattices"))
}

/// `H^-1(h, M) = ker N / (T-1)M`, presented on a basis of `ker N`.
pub fn tate_minus_one(m: &GroupLattice, h: &Subgroup) -> Result<TateGroup, LatticeError> {
    let t = m.subgroup_generator(h)?;
    let k = exactla::kernel_basis(&norm_matrix(m, h)?);
    let relations = exactla::coordinates(&k, &(&t - &IntMatrix::identity(m.z_rank())))?;
    let presentation = ModulePresentation::new(k.cols(), relations)?;
    let out = TateGroup::new(m.base(), presentation, induced_zeta(m, &k));
    debug_assert_eq!(out.invariants, localize(m.base(), coinvariant_torsion(m, h)?));
    Ok(out)
}

/// Torsion of the coinvariants `M / (T-1)M`: a second description of `H^-1`.
pub fn coinvariant_torsion(m: &GroupLattice, h: &Subgroup) -> Result<AbelianInvariants, LatticeError> {
    let t = m.subgroup_generator(h)?;
    let mut inv = exactla::cokernel_invariants(&(&t - &IntMatrix::identity(m.z_rank())));
    inv.free_rank = 0;
    Ok(inv)
}

/// `H^0(h, M) = M^h / N M`, presented on a saturated basis of `M^h`.
pub fn tate_zero(m: &GroupLattice, h: &Subgroup) -> Result<TateGroup, LatticeError> {
    let f = fixed_sublattice(m, h)?;
    let relations = exactla::coordinates(&f, &norm_matrix(m, h)?)?;
    let presentation = ModulePresentation::new(f.cols(), relations)?;
    Ok(TateGroup::new(m.base(), presentation, induced_zeta(m, &f)))
}

/// `H^1(h, M)` as norm-zero elements modulo `(T-1)M` (cocycles of a cyclic
/// group are determined by their value on the generator).
pub fn h_one(m: &GroupLattice, h: &Subgroup) -> Result<AbelianInvariants, LatticeError> {
    let t = m.subgroup_generator(h)?;
    let inv = exactla::homology(&(&t - &IntMatrix::identity(m.z_rank())), &norm_matrix(m, h)?)?;
    Ok(localize(m.base(), inv))
}

/// `H^1(h, M)` from `Hom_h(P_*, M)` for the periodic resolution
/// `... -> Zh --N--> Zh --(T-1)--> Zh -> Z`, with `Hom_h(Zh, M)` computed
/// from scratch as the space of intertwiners `X P = T X`.
pub fn h_one_via_periodic_resolution(m: &GroupLattice, h: &Subgroup) -> Result<AbelianInvariants, LatticeError> {
    let t = m.subgroup_generator(h)?;
    let d = h.order();
    let r = m.z_rank();
    let p = cycle_matrix(d);
    let id_r = IntMatrix::identity(r);
    let id_d = IntMatrix::identity(d);

    // vec(X P) = (P^T (x) I) vec X and vec(T X) = (I (x) T) vec X
    let equations = &id_d.kron(&t) - &p.transpose().kron(&id_r);
    let homs = exactla::kernel_basis(&equations);

    let mut norm_p = IntMatrix::zeros(d, d);
    let mut power = IntMatrix::identity(d);
    for _ in 0..d {
        norm_p = &norm_p + &power;
        power = &power * &p;
    }
    // precomposition with a module endomorphism A of Zh
    let precompose = |a: &IntMatrix| -> Result<IntMatrix, ExactError> {
        exactla::coordinates(&homs, &(&a.transpose().kron(&id_r) * &homs))
    };
    let d0 = precompose(&(&p - &id_d))?;
    let d1 = precompose(&norm_p)?;
    Ok(localize(m.base(), exactla::homology(&d0, &d1)?))
}

fn localize(base: BaseRing, inv: AbelianInvariants) -> AbelianInvariants {
    match base.local_prime() {
        Some(p) => inv.p_part(p),
        None => inv,
    }
}

/// Tate groups in degrees -1 and 0 for one subgroup.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SubgroupCohomology {
    pub subgroup_order: usize,
    pub minus_one: TateGroup,
    pub zero: TateGroup,
}

/// Tate groups for every subgroup, in increasing order.
pub fn tate_profile(m: &GroupLattice) -> Result<Vec<SubgroupCohomology>, LatticeError> {
    m.group()
        .subgroups()
        .into_iter()
        .map(|h| {
            Ok(SubgroupCohomology {
                subgroup_order: h.order(),
                minus_one: tate_minus_one(m, &h)?,
                zero: tate_zero(m, &h)?,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use num_bigint::BigInt;

    use super::*;
    use crate::groupring::CyclicGroup;
    use crate::lattice::{augmentation_ideal, regular_lattice, trivial_lattice, twisted_line};

    fn c(n: usize) -> CyclicGroup {
        CyclicGroup::new(n).unwrap()
    }

    fn cyc(orders: &[i64]) -> AbelianInvariants {
        AbelianInvariants { free_rank: 0, torsion: orders.iter().map(|&x| BigInt::from(x)).collect() }
    }

    #[test]
    fn trivial_module() {
        for n in 1..=8 {
            let g = c(n);
            let z = trivial_lattice(BaseRing::Integers, g);
            let expected = if n == 1 { cyc(&[]) } else { cyc(&[n as i64]) };
            assert_eq!(tate_zero(&z, &g.whole()).unwrap().invariants, expected);
            assert!(tate_minus_one(&z, &g.whole()).unwrap().is_zero());
        }
    }

    #[test]
    fn regular_module_is_acyclic() {
        let g = c(6);
        let r = regular_lattice(BaseRing::Integers, g);
        for h in g.subgroups() {
            assert!(tate_zero(&r, &h).unwrap().is_zero());
            assert!(tate_minus_one(&r, &h).unwrap().is_zero());
        }
    }

    #[test]
    fn augmentation_h_one() {
        for n in 2..=12 {
            let g = c(n);
            let i = augmentation_ideal(BaseRing::Integers, g);
            let expected = cyc(&[n as i64]);
            assert_eq!(h_one(&i, &g.whole()).unwrap(), expected);
            assert_eq!(h_one_via_periodic_resolution(&i, &g.whole()).unwrap(), expected);
            assert!(tate_zero(&i, &g.whole()).unwrap().is_zero());
        }
    }

    #[test]
    fn sign_module() {
        let g = c(2);
        let s = GroupLattice::new(BaseRing::Integers, g, IntMatrix::from_rows(&[[-1]]), None).unwrap();
        assert_eq!(tate_minus_one(&s, &g.whole()).unwrap().invariants, cyc(&[2]));
        assert!(tate_zero(&s, &g.whole()).unwrap().is_zero());
    }

    #[test]
    fn localisation_keeps_p_part() {
        let g = c(6);
        let z = trivial_lattice(BaseRing::Integers, g);
        let z2 = z.with_base(BaseRing::LocalizedAtP { p: 2 }).unwrap();
        assert_eq!(tate_zero(&z, &g.whole()).unwrap().invariants, cyc(&[6]));
        assert_eq!(tate_zero(&z2, &g.whole()).unwrap().invariants, cyc(&[2]));
    }

    #[test]
    fn twisted_line_blocks() {
        // M = Z[zeta_p] with sigma = zeta: H^-1 = R/(1 - zeta), H^0 = 0
        for p in [3, 5, 7] {
            let m = twisted_line(BaseRing::Cyclotomic { m: p }, c(p), 1).unwrap();
            let h = c(p).whole();
            let hm1 = tate_minus_one(&m, &h).unwrap();
            assert_eq!(hm1.invariants, cyc(&[p as i64]));
            assert_eq!(hm1.zeta_blocks().unwrap().unwrap(), vec![1]);
            assert!(tate_zero(&m, &h).unwrap().is_zero());
        }
    }

    #[test]
    fn gaussian_sign_line_blocks() {
        // Z[i] with sigma = -1 over C_2: H^-1 = R/2R = R/(1-i)^2
        let m = twisted_line(BaseRing::Cyclotomic { m: 4 }, c(2), 2).unwrap();
        let hm1 = tate_minus_one(&m, &c(2).whole()).unwrap();
        assert_eq!(hm1.invariants, cyc(&[2, 2]));
        assert_eq!(hm1.zeta_blocks().unwrap().unwrap(), vec![2]);
    }

    #[test]
    fn profile_lists_all_subgroups() {
        let g = c(12);
        let prof = tate_profile(&trivial_lattice(BaseRing::Integers, g)).unwrap();
        let orders: Vec<usize> = prof.iter().map(|s| s.subgroup_order).collect();
        assert_eq!(orders, vec![1, 2, 3, 4, 6, 12]);
    }
}
