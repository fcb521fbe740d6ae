//! Dedekind's criterion for `p`-maximality of `Z[X]/(f)`, applied to
//! cyclotomic polynomials.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use serde::Serialize;
use thiserror::Error;

use crate::groupring::{cyclotomic, is_prime, prime_factors, IntPoly};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DedekindError {
    #[error("polynomial is not monic")]
    NotMonic,
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("n must be positive")]
    ZeroIndex,
}

/// Polynomial over `F_p`, coefficients in `0..p` from the constant term up,
/// with no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PolyModP {
    p: u64,
    coeffs: Vec<u64>,
}

impl PolyModP {
    pub fn new(p: u64, coeffs: Vec<u64>) -> Self {
        let mut f = Self { p, coeffs: coeffs.into_iter().map(|c| c % p).collect() };
        f.trim();
        f
    }

    pub fn from_int_poly(f: &IntPoly, p: u64) -> Self {
        let pb = BigInt::from(p);
        let coeffs = f
            .coeffs()
            .iter()
            .map(|c| c.mod_floor(&pb).to_u64().expect("residue fits in u64"))
            .collect();
        Self::new(p, coeffs)
    }

    fn constant(p: u64, c: u64) -> Self {
        Self::new(p, vec![c])
    }

    fn trim(&mut self) {
        while self.coeffs.last() == Some(&0) {
            self.coeffs.pop();
        }
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs == [1]
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    fn lead(&self) -> u64 {
        *self.coeffs.last().expect("nonzero polynomial")
    }

    fn inv(&self, a: u64) -> u64 {
        pow_mod(a, self.p - 2, self.p)
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let c = (0..n)
            .map(|i| (self.coeffs.get(i).unwrap_or(&0) + other.coeffs.get(i).unwrap_or(&0)) % self.p)
            .collect();
        Self::new(self.p, c)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(self.p - 1))
    }

    pub fn scale(&self, k: u64) -> Self {
        Self::new(self.p, self.coeffs.iter().map(|c| c * (k % self.p) % self.p).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::new(self.p, vec![]);
        }
        let mut c = vec![0u64; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                c[i + j] = (c[i + j] + a * b) % self.p;
            }
        }
        Self::new(self.p, c)
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        assert!(!divisor.is_zero(), "division by the zero polynomial");
        let p = self.p;
        let dd = divisor.coeffs.len() - 1;
        let lead_inv = self.inv(divisor.lead());
        let mut rem = self.coeffs.clone();
        let mut quot = vec![0u64; rem.len().saturating_sub(dd)];
        while rem.len() > dd && !rem.is_empty() {
            let shift = rem.len() - 1 - dd;
            let q = rem[rem.len() - 1] * lead_inv % p;
            quot[shift] = q;
            for (i, c) in divisor.coeffs.iter().enumerate() {
                rem[shift + i] = (rem[shift + i] + p - q * c % p) % p;
            }
            while rem.last() == Some(&0) {
                rem.pop();
            }
        }
        (Self::new(p, quot), Self::new(p, rem))
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(self.inv(self.lead()))
    }

    /// Monic greatest common divisor (zero only if both inputs are zero).
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn derivative(&self) -> Self {
        let c = self.coeffs.iter().enumerate().skip(1).map(|(i, c)| (i as u64 % self.p) * c % self.p).collect();
        Self::new(self.p, c)
    }

    /// `g` with `g^p = self`, for `self` a polynomial in `X^p`.
    fn pth_root(&self) -> Self {
        Self::new(self.p, self.coeffs.iter().step_by(self.p as usize).copied().collect())
    }

    /// Whether `self` divides `other`.
    pub fn divides(&self, other: &Self) -> bool {
        !self.is_zero() && other.div_rem(self).1.is_zero()
    }

    fn to_int_poly(&self) -> IntPoly {
        IntPoly::new(self.coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }
}

impl fmt::Display for PolyModP {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.to_int_poly(), self.p)
    }
}

impl Serialize for PolyModP {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.coeffs.serialize(s)
    }
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    acc
}

/// Product of the distinct monic irreducible factors of `f` (monic).
///
/// `rad(f) = lcm(rad(f / g), rad(g))` with `g = gcd(f, f')`; when `f' = 0`,
/// `f` is a `p`-th power and `rad(f) = rad(f^(1/p))`.
pub fn radical_mod_p(f: &PolyModP) -> PolyModP {
    assert!(!f.is_zero(), "radical of the zero polynomial");
    let f = f.monic();
    if f.degree() == Some(0) {
        return PolyModP::constant(f.p, 1);
    }
    let df = f.derivative();
    if df.is_zero() {
        return radical_mod_p(&f.pth_root());
    }
    let g = f.gcd(&df);
    if g.is_one() {
        return f;
    }
    let a = radical_mod_p(&f.div_rem(&g).0);
    let b = radical_mod_p(&g);
    let common = a.gcd(&b);
    a.mul(&b).div_rem(&common).0.monic()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DedekindVerdict {
    pub p: u64,
    pub radical: PolyModP,
    pub cofactor: PolyModP,
    pub quotient: PolyModP,
    pub gcd: PolyModP,
    pub p_maximal: bool,
}

/// With `f = g h mod p`, `g` the radical, lifts with coefficients in `0..p`
/// and `F = (g h - f) / p`: `Z[X]/(f)` is `p`-maximal iff `gcd(g, h, F) = 1` mod `p`.
pub fn dedekind_criterion(f: &IntPoly, p: u64) -> Result<DedekindVerdict, DedekindError> {
    if !f.is_monic() {
        return Err(DedekindError::NotMonic);
    }
    if !is_prime(p) {
        return Err(DedekindError::NotPrime(p));
    }
    let fbar = PolyModP::from_int_poly(f, p);
    let radical = radical_mod_p(&fbar);
    let (cofactor, rem) = fbar.div_rem(&radical);
    debug_assert!(rem.is_zero());
    let gh = radical.to_int_poly().mul(&cofactor.to_int_poly());
    let diff = gh.sub(f);
    let pb = BigInt::from(p);
    debug_assert!(diff.coeffs().iter().all(|c| c.is_multiple_of(&pb)));
    let big_f = IntPoly::new(diff.coeffs().iter().map(|c| c / &pb).collect());
    let quotient = PolyModP::from_int_poly(&big_f, p);
    let gcd = radical.gcd(&cofactor).gcd(&quotient);
    let p_maximal = gcd.is_one();
    Ok(DedekindVerdict { p, radical, cofactor, quotient, gcd, p_maximal })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MaximalityReport {
    pub n: usize,
    pub polynomial: IntPoly,
    /// One verdict per prime dividing `n`.
    pub checks: Vec<DedekindVerdict>,
    pub all_maximal: bool,
    pub skipped: String,
}

/// Runs the criterion on `Phi_n` at every prime `p | n`. Primes not dividing
/// `n` do not divide the discriminant of `Phi_n`, so `Z[X]/(Phi_n)` is
/// automatically maximal there.
pub fn cyclotomic_order_maximality(n: usize) -> Result<MaximalityReport, DedekindError> {
    if n == 0 {
        return Err(DedekindError::ZeroIndex);
    }
    let polynomial = cyclotomic(n).poly;
    let checks = prime_factors(n)
        .into_iter()
        .map(|p| dedekind_criterion(&polynomial, p as u64))
        .collect::<Result<Vec<_>, _>>()?;
    let all_maximal = checks.iter().all(|c| c.p_maximal);
    Ok(MaximalityReport {
        n,
        polynomial,
        checks,
        all_maximal,
        skipped: "primes not dividing n do not divide disc(Phi_n); maximal there without a check".into(),
    })
}

/// Whether `f` has no repeated irreducible factor over `F_p`.
pub fn is_squarefree(f: &PolyModP) -> bool {
    !f.is_zero() && (f.degree() == Some(0) || f.gcd(&f.derivative()).is_one())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pm(p: u64, c: &[u64]) -> PolyModP {
        PolyModP::new(p, c.to_vec())
    }

    #[test]
    fn radical_examples() {
        assert_eq!(radical_mod_p(&pm(2, &[1, 0, 1])), pm(2, &[1, 1]));
        assert_eq!(radical_mod_p(&pm(3, &[1, 0, 1])), pm(3, &[1, 0, 1]));
        // Phi_9 = (X^2 + X + 1)^3 = (X - 1)^6 mod 3
        let phi9 = PolyModP::from_int_poly(&cyclotomic(9).poly, 3);
        assert_eq!(radical_mod_p(&phi9), pm(3, &[2, 1]));
        // X^2 (X+1)^3 over F_2
        let f = pm(2, &[0, 0, 1]).mul(&pm(2, &[1, 1]).mul(&pm(2, &[1, 1])).mul(&pm(2, &[1, 1])));
        assert_eq!(radical_mod_p(&f), pm(2, &[0, 1, 1]));
    }

    #[test]
    fn criterion_examples() {
        let x2p3 = IntPoly::from_i64(&[3, 0, 1]);
        let v = dedekind_criterion(&x2p3, 2).unwrap();
        assert!(!v.p_maximal);
        assert_eq!(v.gcd, pm(2, &[1, 1]));
        assert!(dedekind_criterion(&cyclotomic(4).poly, 2).unwrap().p_maximal);
        assert!(dedekind_criterion(&cyclotomic(9).poly, 3).unwrap().p_maximal);
        assert_eq!(dedekind_criterion(&IntPoly::from_i64(&[1, 2]), 2), Err(DedekindError::NotMonic));
    }

    #[test]
    fn cyclotomic_instances() {
        let r = cyclotomic_order_maximality(12).unwrap();
        assert_eq!(r.checks.iter().map(|c| c.p).collect::<Vec<_>>(), vec![2, 3]);
        assert!(r.all_maximal);
        assert!(cyclotomic_order_maximality(1).unwrap().checks.is_empty());
        assert!(cyclotomic_order_maximality(8).unwrap().all_maximal);
    }
}
