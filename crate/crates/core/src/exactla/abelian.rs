use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::normal_form::{coordinates, smith_invariants, solve_integer_many};
use super::{ExactError, IntMatrix};

/// Structure of a finitely generated abelian group `Z^free_rank + Z/t_1 + ... + Z/t_k`
/// with `t_1 | t_2 | ... | t_k` and every `t_i >= 2`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize)]
pub struct AbelianInvariants {
    pub free_rank: usize,
    #[serde(serialize_with = "crate::serde_int::bigint_seq")]
    pub torsion: Vec<BigInt>,
}

impl AbelianInvariants {
    pub fn trivial() -> Self {
        Self::default()
    }

    /// From a Smith diagonal of a relation matrix on `generators` generators.
    pub fn from_smith_diagonal(generators: usize, diagonal: &[BigInt]) -> Self {
        let nonzero = diagonal.iter().filter(|d| !d.is_zero()).count();
        let torsion = diagonal.iter().filter(|d| !d.is_zero() && !d.abs().is_one()).map(|d| d.abs()).collect();
        Self { free_rank: generators - nonzero, torsion }
    }

    /// Renormalises an arbitrary list of cyclic orders into invariant-factor form.
    pub fn from_cyclic_orders(free_rank: usize, orders: &[BigInt]) -> Self {
        let nonzero: Vec<BigInt> = orders.iter().filter(|d| !d.is_zero()).cloned().collect();
        let extra_free = orders.len() - nonzero.len();
        let diag = smith_invariants(&IntMatrix::diagonal(&nonzero));
        let mut out = Self::from_smith_diagonal(nonzero.len(), &diag);
        out.free_rank += free_rank + extra_free;
        out
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        let mut orders = self.torsion.clone();
        orders.extend(other.torsion.iter().cloned());
        Self::from_cyclic_orders(self.free_rank + other.free_rank, &orders)
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.free_rank == 0
    }

    /// Order of the torsion subgroup.
    pub fn torsion_order(&self) -> BigInt {
        self.torsion.iter().fold(BigInt::one(), |acc, t| acc * t)
    }

    /// Replaces each invariant factor by its `p`-part (localisation at `p`).
    pub fn p_part(&self, p: u64) -> Self {
        let p = BigInt::from(p);
        let torsion = self
            .torsion
            .iter()
            .map(|t| {
                let mut part = BigInt::one();
                let mut rest = t.clone();
                while rest.is_multiple_of(&p) {
                    rest /= &p;
                    part *= &p;
                }
                part
            })
            .filter(|t| !t.is_one())
            .collect();
        Self { free_rank: self.free_rank, torsion }
    }

    /// `log_p` of the torsion order, if the torsion is a `p`-group.
    pub fn p_length(&self, p: u64) -> Option<usize> {
        let p = BigInt::from(p);
        let mut total = 0;
        for t in &self.torsion {
            let mut rest = t.clone();
            while rest.is_multiple_of(&p) {
                rest /= &p;
                total += 1;
            }
            if !rest.is_one() {
                return None;
            }
        }
        Some(total)
    }
}

impl fmt::Display for AbelianInvariants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "0");
        }
        let mut parts: Vec<String> = Vec::new();
        if self.free_rank > 0 {
            parts.push(if self.free_rank == 1 { "Z".into() } else { format!("Z^{}", self.free_rank) });
        }
        parts.extend(self.torsion.iter().map(|t| format!("Z/{t}")));
        write!(f, "{}", parts.join(" + "))
    }
}

/// Quotient of the lattice spanned by the columns of `ambient_basis` by the
/// sublattice spanned by `sub_generators`. Every sub-generator must lie in the
/// ambient lattice; the ambient columns must be independent.
pub fn quotient_invariants(ambient_basis: &IntMatrix, sub_generators: &IntMatrix) -> Result<AbelianInvariants, ExactError> {
    let coords = coordinates(ambient_basis, sub_generators)?;
    Ok(cokernel_invariants(&coords))
}

/// Structure of `Z^rows / im(a)`.
pub fn cokernel_invariants(a: &IntMatrix) -> AbelianInvariants {
    AbelianInvariants::from_smith_diagonal(a.rows(), &pad_diagonal(a))
}

fn pad_diagonal(a: &IntMatrix) -> Vec<BigInt> {
    let mut diag = smith_invariants(a);
    diag.resize(a.rows(), BigInt::zero());
    diag
}

/// Homology `ker(g) / im(f)` of `Z^a --f--> Z^b --g--> Z^c`; requires `g f = 0`.
pub fn homology(f: &IntMatrix, g: &IntMatrix) -> Result<AbelianInvariants, ExactError> {
    let z = super::normal_form::kernel_basis(g);
    quotient_invariants(&z, f)
}

/// A finitely generated abelian group `Z^generators / im(relations)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModulePresentation {
    pub generators: usize,
    pub relations: IntMatrix,
}

impl ModulePresentation {
    pub fn new(generators: usize, relations: IntMatrix) -> Result<Self, ExactError> {
        if relations.rows() != generators {
            return Err(ExactError::Shape(format!(
                "relation matrix has {} rows for {generators} generators",
                relations.rows()
            )));
        }
        Ok(Self { generators, relations })
    }

    pub fn invariants(&self) -> AbelianInvariants {
        cokernel_invariants(&self.relations)
    }

    /// Order of the quotient `Z^g / (im(relations) + im(extra))`, assumed finite.
    fn quotient_length(&self, extra: &IntMatrix, p: u64) -> Result<usize, ExactError> {
        let stacked = IntMatrix::hstack(&[&self.relations, extra]);
        let inv = cokernel_invariants(&stacked);
        if !inv.is_finite() {
            return Err(ExactError::NotTorsion);
        }
        inv.p_length(p).ok_or(ExactError::NotPrimary { p })
    }
}

/// Cyclic string lengths of a finite `p`-group with a nilpotent endomorphism,
/// sorted ascending.
///
/// With `l_j = log_p |T^j M|`, the number of strings of length at least `j`
/// is `l_{j-1} - l_j`.
pub fn nilpotent_block_sizes(module: &ModulePresentation, nil_op: &IntMatrix, p: u64) -> Result<Vec<usize>, ExactError> {
    let g = module.generators;
    if nil_op.rows() != g || nil_op.cols() != g {
        return Err(ExactError::Shape("operator does not match the generator count".into()));
    }
    let inv = module.invariants();
    if !inv.is_finite() {
        return Err(ExactError::NotTorsion);
    }
    let total = inv.p_length(p).ok_or(ExactError::NotPrimary { p })?;
    if module.relations.cols() > 0 && solve_integer_many(&module.relations, &(nil_op * &module.relations)).is_none() {
        return Err(ExactError::NotEndomorphism);
    }

    // lengths[j] = log_p |T^j M| = total - log_p |Z^g / (R + im T^j)|
    let mut lengths = vec![total];
    let mut power = IntMatrix::identity(g);
    while *lengths.last().expect("nonempty") > 0 {
        power = &power * nil_op;
        let next = total - module.quotient_length(&power, p)?;
        if next == *lengths.last().expect("nonempty") {
            return Err(ExactError::NotNilpotent);
        }
        lengths.push(next);
    }
    let at_least: Vec<usize> = lengths.windows(2).map(|w| w[0] - w[1]).collect();
    let mut sizes = Vec::new();
    for (j, &count) in at_least.iter().enumerate() {
        let longer = at_least.get(j + 1).copied().unwrap_or(0);
        sizes.extend(std::iter::repeat_n(j + 1, count - longer));
    }
    Ok(sizes)
}
