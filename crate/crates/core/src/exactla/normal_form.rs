//! Hermite (row echelon) and Smith normal forms over the integers, and the
//! kernel / coordinate / solve routines built on them.
//!
//! Pivot selection is deterministic everywhere: the smallest nonzero absolute
//! value wins, ties go to the lowest index (row-major order for Smith).

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{ExactError, IntMatrix};

type Rows = Vec<Vec<BigInt>>;

/// `rows[target] -= q * rows[source]` on columns `from..`.
fn row_axpy(rows: &mut Rows, target: usize, source: usize, q: &BigInt, from: usize) {
    if q.is_zero() {
        return;
    }
    let (t, s) = if target < source {
        let (lo, hi) = rows.split_at_mut(source);
        (&mut lo[target], &hi[0])
    } else {
        let (lo, hi) = rows.split_at_mut(target);
        (&mut hi[0], &lo[source])
    };
    for k in from..s.len() {
        if !s[k].is_zero() {
            t[k] -= q * &s[k];
        }
    }
}

fn row_add(rows: &mut Rows, target: usize, source: usize) {
    row_axpy(rows, target, source, &BigInt::from(-1), 0);
}

fn negate_row(rows: &mut Rows, i: usize) {
    for x in rows[i].iter_mut() {
        *x = -std::mem::take(x);
    }
}

/// `cols[target] -= q * cols[source]` on a row-major grid.
fn col_axpy(rows: &mut Rows, target: usize, source: usize, q: &BigInt) {
    if q.is_zero() {
        return;
    }
    for r in rows.iter_mut() {
        if !r[source].is_zero() {
            let delta = q * &r[source];
            r[target] -= delta;
        }
    }
}

fn swap_cols(rows: &mut Rows, a: usize, b: usize) {
    if a != b {
        for r in rows.iter_mut() {
            r.swap(a, b);
        }
    }
}

fn identity_rows(n: usize) -> Rows {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect()
}

fn to_matrix(rows: Rows, cols: usize) -> IntMatrix {
    IntMatrix::try_from_rows(rows, cols).expect("internal grid is rectangular")
}

/// Row Hermite normal form `transform * input = form`.
#[derive(Clone, Debug)]
pub struct Echelon {
    pub form: IntMatrix,
    pub transform: Option<IntMatrix>,
    /// Pivot column of each nonzero row of `form`, in order.
    pub pivots: Vec<usize>,
}

impl Echelon {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

fn echelon_in_place(h: &mut Rows, cols: usize, mut w: Option<&mut Rows>) -> Vec<usize> {
    let nrows = h.len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == nrows {
            break;
        }
        let mut found = false;
        loop {
            let piv = (r..nrows)
                .filter(|&i| !h[i][c].is_zero())
                .min_by(|&a, &b| h[a][c].abs().cmp(&h[b][c].abs()).then(a.cmp(&b)));
            let Some(piv) = piv else { break };
            found = true;
            h.swap(r, piv);
            if let Some(w) = w.as_deref_mut() {
                w.swap(r, piv);
            }
            let mut clean = true;
            for i in r + 1..nrows {
                if h[i][c].is_zero() {
                    continue;
                }
                let q = h[i][c].div_floor(&h[r][c]);
                row_axpy(h, i, r, &q, c);
                if let Some(w) = w.as_deref_mut() {
                    row_axpy(w, i, r, &q, 0);
                }
                if !h[i][c].is_zero() {
                    clean = false;
                }
            }
            if clean {
                break;
            }
        }
        if !found {
            continue;
        }
        if h[r][c].is_negative() {
            negate_row(h, r);
            if let Some(w) = w.as_deref_mut() {
                negate_row(w, r);
            }
        }
        for i in 0..r {
            if h[i][c].is_zero() {
                continue;
            }
            let q = h[i][c].div_floor(&h[r][c]);
            row_axpy(h, i, r, &q, c);
            if let Some(w) = w.as_deref_mut() {
                row_axpy(w, i, r, &q, 0);
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Row Hermite normal form without the transform.
pub fn hermite(a: &IntMatrix) -> Echelon {
    let mut h = a.to_rows();
    let pivots = echelon_in_place(&mut h, a.cols(), None);
    Echelon { form: to_matrix(h, a.cols()), transform: None, pivots }
}

/// Row Hermite normal form together with a unimodular `transform`.
pub fn hermite_with_transform(a: &IntMatrix) -> Echelon {
    let mut h = a.to_rows();
    let mut w = identity_rows(a.rows());
    let pivots = echelon_in_place(&mut h, a.cols(), Some(&mut w));
    Echelon {
        form: to_matrix(h, a.cols()),
        transform: Some(to_matrix(w, a.rows())),
        pivots,
    }
}

pub fn rank(a: &IntMatrix) -> usize {
    hermite(a).rank()
}

/// `u * a * v = d`, with `u`, `v` unimodular and `d` diagonal with `d_1 | d_2 | ...`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithDecomposition {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
}

impl SmithDecomposition {
    /// Diagonal entries `d_1, ..., d_min(rows, cols)`, zeros included.
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.d.rows().min(self.d.cols())).map(|i| self.d.get(i, i).clone()).collect()
    }

    pub fn rank(&self) -> usize {
        self.diagonal().iter().filter(|x| !x.is_zero()).count()
    }
}

fn smith_in_place(d: &mut Rows, cols: usize, mut u: Option<&mut Rows>, mut vt: Option<&mut Rows>) {
    let nrows = d.len();
    let steps = nrows.min(cols);
    for t in 0..steps {
        loop {
            let mut best: Option<(usize, usize)> = None;
            for i in t..nrows {
                for j in t..cols {
                    let x = &d[i][j];
                    if x.is_zero() {
                        continue;
                    }
                    if best.is_none_or(|(bi, bj)| x.abs() < d[bi][bj].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else { return };
            d.swap(t, pi);
            if let Some(u) = u.as_deref_mut() {
                u.swap(t, pi);
            }
            swap_cols(d, t, pj);
            if let Some(vt) = vt.as_deref_mut() {
                vt.swap(t, pj);
            }

            let mut clean = true;
            for i in t + 1..nrows {
                if d[i][t].is_zero() {
                    continue;
                }
                let q = &d[i][t] / &d[t][t];
                row_axpy(d, i, t, &q, t);
                if let Some(u) = u.as_deref_mut() {
                    row_axpy(u, i, t, &q, 0);
                }
                if !d[i][t].is_zero() {
                    clean = false;
                }
            }
            for j in t + 1..cols {
                if d[t][j].is_zero() {
                    continue;
                }
                let q = &d[t][j] / &d[t][t];
                col_axpy(d, j, t, &q);
                if let Some(vt) = vt.as_deref_mut() {
                    row_axpy(vt, j, t, &q, 0);
                }
                if !d[t][j].is_zero() {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            let bad = (t + 1..nrows).find(|&i| (t + 1..cols).any(|j| !d[i][j].is_multiple_of(&d[t][t])));
            match bad {
                Some(i) => {
                    row_add(d, t, i);
                    if let Some(u) = u.as_deref_mut() {
                        row_add(u, t, i);
                    }
                }
                None => break,
            }
        }
        if d[t][t].is_negative() {
            negate_row(d, t);
            if let Some(u) = u.as_deref_mut() {
                negate_row(u, t);
            }
        }
    }
}

/// Smith normal form with transforms.
pub fn smith(a: &IntMatrix) -> SmithDecomposition {
    let mut d = a.to_rows();
    let mut u = identity_rows(a.rows());
    let mut vt = identity_rows(a.cols());
    smith_in_place(&mut d, a.cols(), Some(&mut u), Some(&mut vt));
    SmithDecomposition {
        u: to_matrix(u, a.rows()),
        d: to_matrix(d, a.cols()),
        v: to_matrix(vt, a.cols()).transpose(),
    }
}

/// The Smith diagonal `d_1 | d_2 | ...` of length `min(rows, cols)`, computed
/// without transforms after two Hermite passes shrink the problem to `rank x rank`.
pub fn smith_invariants(a: &IntMatrix) -> Vec<BigInt> {
    let len = a.rows().min(a.cols());
    let h1 = hermite(a);
    let r = h1.rank();
    let top: Rows = (0..r).map(|i| h1.form.row(i).to_vec()).collect();
    let top = to_matrix(top, a.cols()).transpose();
    let h2 = hermite(&top);
    let mut sq: Rows = (0..r).map(|i| h2.form.row(i).to_vec()).collect();
    smith_in_place(&mut sq, r, None, None);
    let mut diag: Vec<BigInt> = (0..r).map(|i| sq[i][i].clone()).collect();
    diag.resize(len, BigInt::zero());
    diag
}

/// Inverse of a unimodular matrix.
pub fn unimodular_inverse(a: &IntMatrix) -> Result<IntMatrix, ExactError> {
    if !a.is_square() {
        return Err(ExactError::Shape("inverse of a non-square matrix".into()));
    }
    let e = hermite_with_transform(a);
    if !e.form.is_identity() {
        return Err(ExactError::NotUnimodular);
    }
    Ok(e.transform.expect("transform requested"))
}

/// Saturated basis of `{x : a x = 0}`, returned as the columns of a
/// `cols x k` matrix in canonical (Hermite-reduced) form.
pub fn kernel_basis(a: &IntMatrix) -> IntMatrix {
    let n = a.cols();
    let e = hermite_with_transform(&a.transpose());
    let r = e.rank();
    let w = e.transform.expect("transform requested");
    if r == n {
        return IntMatrix::zeros(n, 0);
    }
    let rows: Vec<usize> = (r..n).collect();
    let ker = w.select_rows(&rows);
    let canon = hermite(&ker);
    let k = canon.rank();
    let idx: Vec<usize> = (0..k).collect();
    canon.form.select_rows(&idx).transpose()
}

/// Expresses each column of `vectors` in the basis given by the columns of
/// `basis` (which must be linearly independent).
pub fn coordinates(basis: &IntMatrix, vectors: &IntMatrix) -> Result<IntMatrix, ExactError> {
    if basis.rows() != vectors.rows() {
        return Err(ExactError::Shape(format!(
            "basis has {} rows, vectors have {}",
            basis.rows(),
            vectors.rows()
        )));
    }
    let k = basis.cols();
    let e = hermite_with_transform(basis);
    if e.rank() != k {
        return Err(ExactError::DependentBasis);
    }
    let w = e.transform.expect("transform requested");
    let z = &w * vectors;
    let h = &e.form;
    let mut out = IntMatrix::zeros(k, vectors.cols());
    for col in 0..vectors.cols() {
        if (k..z.rows()).any(|i| !z.get(i, col).is_zero()) {
            return Err(ExactError::NotInLattice { column: col });
        }
        let mut x = vec![BigInt::zero(); k];
        for i in (0..k).rev() {
            let mut acc = z.get(i, col).clone();
            for j in i + 1..k {
                acc -= h.get(i, j) * &x[j];
            }
            let (q, rem) = acc.div_rem(h.get(i, i));
            if !rem.is_zero() {
                return Err(ExactError::NotInLattice { column: col });
            }
            x[i] = q;
        }
        for (i, xi) in x.into_iter().enumerate() {
            out.set(i, col, xi);
        }
    }
    Ok(out)
}

/// Integer solution of `a x = b` for every column `b` of `rhs`, or `None` if
/// some column has no solution over the integers.
pub fn solve_integer_many(a: &IntMatrix, rhs: &IntMatrix) -> Option<IntMatrix> {
    assert_eq!(a.rows(), rhs.rows(), "solve dimension mismatch");
    let s = smith(a);
    let c = &s.u * rhs;
    let diag = s.diagonal();
    let mut y = IntMatrix::zeros(a.cols(), rhs.cols());
    for col in 0..rhs.cols() {
        for i in 0..a.rows() {
            let ci = c.get(i, col);
            let di = diag.get(i).cloned().unwrap_or_default();
            if di.is_zero() {
                if !ci.is_zero() {
                    return None;
                }
                continue;
            }
            let (q, rem) = ci.div_rem(&di);
            if !rem.is_zero() {
                return None;
            }
            y.set(i, col, q);
        }
    }
    Some(&s.v * &y)
}

/// Integer solution of `a x = b`, or `None`.
pub fn solve_integer(a: &IntMatrix, b: &[BigInt]) -> Option<Vec<BigInt>> {
    solve_integer_many(a, &IntMatrix::column_vector(b)).map(|x| x.column(0))
}

/// Saturated basis (columns) of the rational span of the columns of `a`
/// intersected with the integer lattice.
pub fn saturation(a: &IntMatrix) -> IntMatrix {
    // sat(im a) = ker(ker(a^T)^T)
    let left = kernel_basis(&a.transpose());
    kernel_basis(&left.transpose())
}

/// True when the columns of `a` span a saturated sublattice, i.e. every
/// nonzero Smith invariant is 1.
pub fn has_saturated_image(a: &IntMatrix) -> bool {
    smith_invariants(a).iter().all(|d| d.is_zero() || d.is_one())
}
