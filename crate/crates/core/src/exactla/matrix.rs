use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::ExactError;

/// Dense integer matrix with arbitrary-precision entries, stored row-major.
///
/// Vectors are columns and matrices act on the left throughout the crate.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<BigInt>) -> Result<Self, ExactError> {
        if data.len() != rows * cols {
            return Err(ExactError::Shape(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = BigInt::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> BigInt) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    /// Builds a matrix from small literal rows. Panics on ragged input.
    pub fn from_rows<R: AsRef<[i64]>>(rows: &[R]) -> Self {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            let r = r.as_ref();
            assert_eq!(r.len(), cols, "ragged matrix literal");
            data.extend(r.iter().map(|&x| BigInt::from(x)));
        }
        Self { rows: rows.len(), cols, data }
    }

    pub fn try_from_rows(rows: Vec<Vec<BigInt>>, cols: usize) -> Result<Self, ExactError> {
        let nrows = rows.len();
        let mut data = Vec::with_capacity(nrows * cols);
        for (i, r) in rows.into_iter().enumerate() {
            if r.len() != cols {
                return Err(ExactError::Shape(format!(
                    "row {i} has {} entries, expected {cols}",
                    r.len()
                )));
            }
            data.extend(r);
        }
        Ok(Self { rows: nrows, cols, data })
    }

    /// Single column matrix.
    pub fn column_vector(v: &[BigInt]) -> Self {
        Self { rows: v.len(), cols: 1, data: v.to_vec() }
    }

    pub fn from_columns(rows: usize, columns: &[Vec<BigInt>]) -> Self {
        Self::from_fn(rows, columns.len(), |i, j| columns[j][i].clone())
    }

    pub fn diagonal(entries: &[BigInt]) -> Self {
        let n = entries.len();
        let mut m = Self::zeros(n, n);
        for (i, e) in entries.iter().enumerate() {
            m.data[i * n + i] = e.clone();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    let e = self.get(i, j);
                    if i == j { e.is_one() } else { e.is_zero() }
                })
            })
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| x * k).collect() }
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(v.len(), self.cols, "matrix-vector dimension mismatch");
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .fold(BigInt::zero(), |acc, (a, b)| acc + a * b)
            })
            .collect()
    }

    /// Square matrix power by repeated squaring; `pow(0)` is the identity.
    pub fn pow(&self, mut k: usize) -> Self {
        assert!(self.is_square(), "power of a non-square matrix");
        let mut result = Self::identity(self.rows);
        let mut base = self.clone();
        while k > 0 {
            if k & 1 == 1 {
                result = &result * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        result
    }

    pub fn kron(&self, other: &Self) -> Self {
        let (r, c) = (self.rows * other.rows, self.cols * other.cols);
        Self::from_fn(r, c, |i, j| {
            let a = self.get(i / other.rows, j / other.cols);
            if a.is_zero() {
                BigInt::zero()
            } else {
                a * other.get(i % other.rows, j % other.cols)
            }
        })
    }

    pub fn block_diag(blocks: &[&Self]) -> Self {
        let rows = blocks.iter().map(|b| b.rows).sum();
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut m = Self::zeros(rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            for i in 0..b.rows {
                for j in 0..b.cols {
                    m.set(r0 + i, c0 + j, b.get(i, j).clone());
                }
            }
            r0 += b.rows;
            c0 += b.cols;
        }
        m
    }

    pub fn hstack(blocks: &[&Self]) -> Self {
        let rows = blocks.first().map_or(0, |b| b.rows);
        assert!(blocks.iter().all(|b| b.rows == rows), "hstack row mismatch");
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut m = Self::zeros(rows, cols);
        let mut c0 = 0;
        for b in blocks {
            for i in 0..rows {
                for j in 0..b.cols {
                    m.set(i, c0 + j, b.get(i, j).clone());
                }
            }
            c0 += b.cols;
        }
        m
    }

    pub fn vstack(blocks: &[&Self]) -> Self {
        let cols = blocks.first().map_or(0, |b| b.cols);
        assert!(blocks.iter().all(|b| b.cols == cols), "vstack column mismatch");
        let rows = blocks.iter().map(|b| b.rows).sum();
        let mut data = Vec::with_capacity(rows * cols);
        for b in blocks {
            data.extend(b.data.iter().cloned());
        }
        Self { rows, cols, data }
    }

    pub fn select_columns(&self, idx: &[usize]) -> Self {
        Self::from_fn(self.rows, idx.len(), |i, j| self.get(i, idx[j]).clone())
    }

    pub fn select_rows(&self, idx: &[usize]) -> Self {
        Self::from_fn(idx.len(), self.cols, |i, j| self.get(idx[i], j).clone())
    }

    /// Column-major vectorisation, the convention used for linear systems in matrix unknowns.
    pub fn vec_column_major(&self) -> Vec<BigInt> {
        let mut v = Vec::with_capacity(self.rows * self.cols);
        for j in 0..self.cols {
            for i in 0..self.rows {
                v.push(self.get(i, j).clone());
            }
        }
        v
    }

    pub fn from_column_major(rows: usize, cols: usize, v: &[BigInt]) -> Self {
        assert_eq!(v.len(), rows * cols);
        Self::from_fn(rows, cols, |i, j| v[j * rows + i].clone())
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> BigInt {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut a = self.to_rows();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                    Some(i) => {
                        a.swap(i, k);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                    a[i][j] = v;
                }
            }
            prev = a[k][k].clone();
        }
        sign * &a[n - 1][n - 1]
    }

    pub fn max_abs_entry(&self) -> BigInt {
        self.data.iter().map(|x| x.abs()).max().unwrap_or_default()
    }
}

impl<'a> Mul<&'a IntMatrix> for &'a IntMatrix {
    type Output = IntMatrix;

    fn mul(self, rhs: &'a IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, rhs.rows, "matrix product dimension mismatch");
        let mut out = IntMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                let rrow = rhs.row(k);
                let orow = &mut out.data[i * rhs.cols..(i + 1) * rhs.cols];
                for (o, b) in orow.iter_mut().zip(rrow) {
                    if !b.is_zero() {
                        *o += a * b;
                    }
                }
            }
        }
        out
    }
}

impl<'a> Add<&'a IntMatrix> for &'a IntMatrix {
    type Output = IntMatrix;

    fn add(self, rhs: &'a IntMatrix) -> IntMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "matrix sum shape mismatch");
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl<'a> Sub<&'a IntMatrix> for &'a IntMatrix {
    type Output = IntMatrix;

    fn sub(self, rhs: &'a IntMatrix) -> IntMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "matrix difference shape mismatch");
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Neg for &IntMatrix {
    type Output = IntMatrix;

    fn neg(self) -> IntMatrix {
        IntMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| -x).collect() }
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntMatrix{}x{}{}", self.rows, self.cols, self)
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for (j, x) in self.row(i).iter().enumerate() {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{x}")?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_and_power() {
        let c = IntMatrix::from_rows(&[[0, -1], [1, -1]]);
        assert!(c.pow(3).is_identity());
        assert_eq!(c.pow(0), IntMatrix::identity(2));
        let p = &c * &c;
        assert_eq!(p, IntMatrix::from_rows(&[[-1, 1], [-1, 0]]));
    }

    #[test]
    fn kron_shape_and_entries() {
        let a = IntMatrix::from_rows(&[[1, 2]]);
        let b = IntMatrix::from_rows(&[[0], [3]]);
        let k = a.kron(&b);
        assert_eq!(k, IntMatrix::from_rows(&[[0, 0], [3, 6]]));
    }

    #[test]
    fn determinant_bareiss() {
        let a = IntMatrix::from_rows(&[[2, 0, 1], [1, 3, 2], [1, 1, 2]]);
        assert_eq!(a.determinant(), BigInt::from(6));
        assert_eq!(IntMatrix::from_rows(&[[4, 6], [6, 9]]).determinant(), BigInt::zero());
        assert_eq!(IntMatrix::from_rows(&[[0, 1], [1, 0]]).determinant(), BigInt::from(-1));
    }

    #[test]
    fn ragged_rows_rejected() {
        let err = IntMatrix::try_from_rows(vec![vec![1.into()], vec![]], 1);
        assert!(err.is_err());
    }

    #[test]
    fn column_major_roundtrip() {
        let a = IntMatrix::from_rows(&[[1, 2, 3], [4, 5, 6]]);
        let v = a.vec_column_major();
        assert_eq!(v[1], BigInt::from(4));
        assert_eq!(IntMatrix::from_column_major(2, 3, &v), a);
    }
}
