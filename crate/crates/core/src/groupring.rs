//! Cyclic groups and their subgroups, cyclotomic polynomials, elementary
//! number theory, and the base rings `Z`, `Z_(p)`, `Z[zeta_m]`.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::exactla::IntMatrix;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupRingError {
    #[error("group order must be positive")]
    ZeroOrder,
    #[error("{d} does not divide {n}")]
    BadDivisor { d: usize, n: usize },
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("cyclotomic index must be positive")]
    ZeroIndex,
}

pub fn divisors(n: usize) -> Vec<usize> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n.is_multiple_of(d) {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// Distinct prime divisors, ascending.
pub fn prime_factors(mut n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            out.push(p);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

pub fn euler_phi(n: usize) -> usize {
    prime_factors(n).into_iter().fold(n, |acc, p| acc / p * (p - 1))
}

pub fn mobius(k: usize) -> i32 {
    assert!(k >= 1, "mobius is defined on positive integers");
    let mut n = k;
    let mut sign = 1;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            n /= p;
            if n.is_multiple_of(p) {
                return 0;
            }
            sign = -sign;
        }
        p += 1;
    }
    if n > 1 {
        sign = -sign;
    }
    sign
}

/// If `n = p^k` with `k >= 1`, returns `p`.
pub fn prime_power_base(n: usize) -> Option<usize> {
    match prime_factors(n).as_slice() {
        [p] => Some(*p),
        _ => None,
    }
}

/// Finite cyclic group of order `n` generated by `sigma`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct CyclicGroup {
    order: usize,
}

impl CyclicGroup {
    pub fn new(order: usize) -> Result<Self, GroupRingError> {
        if order == 0 {
            return Err(GroupRingError::ZeroOrder);
        }
        Ok(Self { order })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// The unique subgroup of order `d`.
    pub fn subgroup(&self, d: usize) -> Result<Subgroup, GroupRingError> {
        if d == 0 || !self.order.is_multiple_of(d) {
            return Err(GroupRingError::BadDivisor { d, n: self.order });
        }
        Ok(Subgroup { parent: *self, order: d })
    }

    pub fn whole(&self) -> Subgroup {
        Subgroup { parent: *self, order: self.order }
    }

    pub fn trivial_subgroup(&self) -> Subgroup {
        Subgroup { parent: *self, order: 1 }
    }

    /// One subgroup per divisor of the order, ascending.
    pub fn subgroups(&self) -> Vec<Subgroup> {
        divisors(self.order).into_iter().map(|d| Subgroup { parent: *self, order: d }).collect()
    }
}

impl fmt::Display for CyclicGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "C_{}", self.order)
    }
}

pub fn subgroups(g: &CyclicGroup) -> Vec<Subgroup> {
    g.subgroups()
}

/// The subgroup `<sigma^(n/d)>` of order `d`; identified by `d` alone.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Subgroup {
    parent: CyclicGroup,
    order: usize,
}

impl Subgroup {
    pub fn parent(&self) -> CyclicGroup {
        self.parent
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Exponent `n/d` of the canonical generator `sigma^(n/d)`.
    pub fn generator_exponent(&self) -> usize {
        self.parent.order / self.order
    }

    pub fn as_group(&self) -> CyclicGroup {
        CyclicGroup { order: self.order }
    }

    pub fn contains(&self, other: &Subgroup) -> bool {
        self.parent == other.parent && self.order.is_multiple_of(other.order)
    }
}

/// Dense integer polynomial, coefficients from the constant term up.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn monomial(k: usize) -> Self {
        let mut c = vec![BigInt::zero(); k + 1];
        c[k] = BigInt::one();
        Self { coeffs: c }
    }

    /// `X^m - 1`
    pub fn x_pow_minus_one(m: usize) -> Self {
        let mut c = vec![BigInt::zero(); m + 1];
        c[0] = BigInt::from(-1);
        c[m] = BigInt::one();
        Self::new(c)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().is_some_and(One::is_one)
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self { coeffs: vec![] };
        }
        let mut c = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        Self::new(c)
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let zero = BigInt::zero();
        Self::new(
            (0..n)
                .map(|i| self.coeffs.get(i).unwrap_or(&zero) - other.coeffs.get(i).unwrap_or(&zero))
                .collect(),
        )
    }

    /// Division by a monic polynomial: `(quotient, remainder)`.
    pub fn div_rem_monic(&self, divisor: &Self) -> (Self, Self) {
        assert!(divisor.is_monic(), "division by a non-monic polynomial");
        let dd = divisor.coeffs.len() - 1;
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (Self { coeffs: vec![] }, Self::new(rem));
        }
        let mut quot = vec![BigInt::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let lead = rem[k + dd].clone();
            if lead.is_zero() {
                continue;
            }
            for (j, c) in divisor.coeffs.iter().enumerate() {
                rem[k + j] -= &lead * c;
            }
            quot[k] = lead;
        }
        rem.truncate(dd);
        (Self::new(quot), Self::new(rem))
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.coeffs.iter().rev().fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    /// `f(A)` for a square matrix `A`, by Horner's rule.
    pub fn eval_matrix(&self, a: &IntMatrix) -> IntMatrix {
        assert!(a.is_square(), "polynomial of a non-square matrix");
        let n = a.rows();
        let mut acc = IntMatrix::zeros(n, n);
        for c in self.coeffs.iter().rev() {
            acc = &acc * a;
            for i in 0..n {
                let v = acc.get(i, i) + c;
                acc.set(i, i, v);
            }
        }
        acc
    }

    /// Companion matrix of a monic polynomial: multiplication by `X` on the
    /// basis `1, X, ..., X^(k-1)`.
    pub fn companion(&self) -> IntMatrix {
        assert!(self.is_monic(), "companion of a non-monic polynomial");
        let k = self.coeffs.len() - 1;
        let mut m = IntMatrix::zeros(k, k);
        for i in 0..k.saturating_sub(1) {
            m.set(i + 1, i, BigInt::one());
        }
        for j in 0..k {
            m.set(j, k - 1, -&self.coeffs[j]);
        }
        m
    }

    /// Symmetric Hankel matrix `S` with `S_ij = c_(i+j+1)`; unimodular and
    /// satisfies `S C^T = C S` for the companion matrix `C`.
    pub fn hankel(&self) -> IntMatrix {
        assert!(self.is_monic(), "hankel matrix of a non-monic polynomial");
        let k = self.coeffs.len() - 1;
        IntMatrix::from_fn(k, k, |i, j| self.coeffs.get(i + j + 1).cloned().unwrap_or_default())
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c < &BigInt::zero();
            let mag = if neg { -c } else { c.clone() };
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            match (i, mag.is_one()) {
                (0, _) => write!(f, "{mag}")?,
                (1, true) => write!(f, "X")?,
                (1, false) => write!(f, "{mag}X")?,
                (_, true) => write!(f, "X^{i}")?,
                (_, false) => write!(f, "{mag}X^{i}")?,
            }
        }
        Ok(())
    }
}

/// The `m`-th cyclotomic polynomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CyclotomicPoly {
    pub index: usize,
    pub poly: IntPoly,
}

impl CyclotomicPoly {
    pub fn degree(&self) -> usize {
        self.poly.degree().expect("cyclotomic polynomials are nonzero")
    }
}

/// `Phi_m`, obtained by exact division of `X^m - 1` by `Phi_d` for every
/// proper divisor `d` (computed bottom-up over the divisor lattice).
pub fn cyclotomic(m: usize) -> CyclotomicPoly {
    assert!(m >= 1, "cyclotomic index must be positive");
    let divs = divisors(m);
    let mut table: Vec<(usize, IntPoly)> = Vec::with_capacity(divs.len());
    for &d in &divs {
        let mut f = IntPoly::x_pow_minus_one(d);
        for (e, phi_e) in &table {
            if d % e == 0 {
                let (q, r) = f.div_rem_monic(phi_e);
                debug_assert!(r.is_zero());
                f = q;
            }
        }
        table.push((d, f));
    }
    let poly = table.pop().expect("m has at least one divisor").1;
    CyclotomicPoly { index: m, poly }
}

/// The coefficient ring of the lattices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BaseRing {
    Integers,
    /// `Z` localised at the prime `p`; lattices use `Z` matrices and
    /// cohomology keeps only `p`-primary parts.
    LocalizedAtP { p: u64 },
    /// `Z[zeta_m]` on the power basis `1, zeta, ..., zeta^(phi(m)-1)`.
    Cyclotomic { m: usize },
}

impl BaseRing {
    pub fn localized(p: u64) -> Result<Self, GroupRingError> {
        if !is_prime(p) {
            return Err(GroupRingError::NotPrime(p));
        }
        Ok(Self::LocalizedAtP { p })
    }

    pub fn cyclotomic(m: usize) -> Result<Self, GroupRingError> {
        if m == 0 {
            return Err(GroupRingError::ZeroIndex);
        }
        Ok(Self::Cyclotomic { m })
    }

    /// Rank of the ring as a `Z`-module (1 for `Z` and `Z_(p)`).
    pub fn degree(&self) -> usize {
        match self {
            Self::Cyclotomic { m } => euler_phi(*m),
            _ => 1,
        }
    }

    /// Matrix of multiplication by `zeta` on the power basis.
    pub fn zeta_matrix(&self) -> Option<IntMatrix> {
        match self {
            Self::Cyclotomic { m } => Some(cyclotomic(*m).poly.companion()),
            _ => None,
        }
    }

    /// The prime whose non-`p` parts are discarded by localisation.
    pub fn local_prime(&self) -> Option<u64> {
        match self {
            Self::LocalizedAtP { p } => Some(*p),
            _ => None,
        }
    }

    /// Product of two elements of `Z[zeta_m]` in power-basis coordinates.
    pub fn multiply(&self, a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
        match self {
            Self::Cyclotomic { m } => {
                let phi = cyclotomic(*m).poly;
                let prod = IntPoly::new(a.to_vec()).mul(&IntPoly::new(b.to_vec()));
                let (_, r) = prod.div_rem_monic(&phi);
                let mut out = r.coeffs().to_vec();
                out.resize(self.degree(), BigInt::zero());
                out
            }
            _ => vec![&a[0] * &b[0]],
        }
    }

    /// Whether `p` is a unit in the ring.
    pub fn is_invertible(&self, p: u64) -> bool {
        match self {
            Self::Integers | Self::Cyclotomic { .. } => false,
            Self::LocalizedAtP { p: q } => *q != p,
        }
    }

    /// Whether `pR` is an intersection of maximal ideals (and `p` not a unit).
    ///
    /// For `Z[zeta_m]` the ramified primes are those dividing the conductor,
    /// which is `m/2` when `m = 2 mod 4`.
    pub fn is_unramified(&self, p: u64) -> bool {
        if self.is_invertible(p) {
            return false;
        }
        match self {
            Self::Integers | Self::LocalizedAtP { .. } => true,
            Self::Cyclotomic { m } => {
                let conductor = if m % 4 == 2 { m / 2 } else { *m };
                !(conductor as u64).is_multiple_of(p)
            }
        }
    }
}

impl fmt::Display for BaseRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Integers => write!(f, "Z"),
            Self::LocalizedAtP { p } => write!(f, "Z_({p})"),
            Self::Cyclotomic { m } => write!(f, "Z[zeta_{m}]"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PrimeHypothesis {
    pub p: u64,
    pub non_invertible: bool,
    pub unramified: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HypothesisReport {
    pub base: BaseRing,
    pub group_order: usize,
    /// Characteristic zero holds for every supported ring.
    pub characteristic_zero: bool,
    pub primes: Vec<PrimeHypothesis>,
    pub all_hold: bool,
}

/// Checks, for every prime `p | n`, that `p` is not invertible and unramified in `r`.
pub fn validate_hypotheses(r: &BaseRing, g: &CyclicGroup) -> HypothesisReport {
    let primes: Vec<PrimeHypothesis> = prime_factors(g.order())
        .into_iter()
        .map(|p| {
            let p = p as u64;
            PrimeHypothesis { p, non_invertible: !r.is_invertible(p), unramified: r.is_unramified(p) }
        })
        .collect();
    let all_hold = primes.iter().all(|h| h.non_invertible && h.unramified);
    HypothesisReport { base: *r, group_order: g.order(), characteristic_zero: true, primes, all_hold }
}
