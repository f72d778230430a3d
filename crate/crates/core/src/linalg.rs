//! Exact linear algebra: dense rational matrices, integer Hermite/Smith
//! forms and an incremental sparse echelon basis.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::scalars::Rational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rational::one());
        }
        m
    }

    /// Builds a matrix from rows; `cols` is needed when there are no rows.
    pub fn from_rows(rows: Vec<Vec<Rational>>, cols: usize) -> Result<Self> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        let n = rows.len();
        for r in rows {
            if r.len() != cols {
                return Err(Error::DimensionMismatch {
                    expected: cols,
                    found: r.len(),
                });
            }
            data.extend(r);
        }
        Ok(Matrix {
            rows: n,
            cols,
            data,
        })
    }

    pub fn from_columns(cols: &[Vec<Rational>], rows: usize) -> Result<Self> {
        let mut m = Self::zeros(rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            if c.len() != rows {
                return Err(Error::DimensionMismatch {
                    expected: rows,
                    found: c.len(),
                });
            }
            for (i, x) in c.iter().enumerate() {
                m.set(i, j, x.clone());
            }
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: Rational) {
        self.data[i * self.cols + j] = x;
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Rational> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<Rational>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Result<Vec<Rational>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: v.len(),
            });
        }
        Ok((0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect())
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: other.rows,
            });
        }
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let idx = i * out.cols + j;
                        out.data[idx] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    /// Kronecker product `self ⊗ other`, with row index `i·p + k` and column
    /// index `j·q + l` for `other` of shape `p × q`.
    pub fn kronecker(&self, other: &Matrix) -> Matrix {
        let (p, q) = (other.rows, other.cols);
        let mut out = Matrix::zeros(self.rows * p, self.cols * q);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if a.is_zero() {
                    continue;
                }
                for k in 0..p {
                    for l in 0..q {
                        out.set(i * p + k, j * q + l, a * other.get(k, l));
                    }
                }
            }
        }
        out
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            m.swap_rows(r, p);
            let inv = m.get(r, c).recip();
            for j in c..m.cols {
                let x = m.get(r, j) * &inv;
                m.set(r, j, x);
            }
            for i in 0..m.rows {
                if i == r || m.get(i, c).is_zero() {
                    continue;
                }
                let f = m.get(i, c).clone();
                for j in c..m.cols {
                    let x = m.get(i, j) - &f * m.get(r, j);
                    m.set(i, j, x);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// A basis of `{x : Ax = 0}` over ℚ.
    pub fn nullspace(&self) -> Vec<Vec<Rational>> {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![Rational::zero(); self.cols];
                v[f] = Rational::one();
                for (i, &p) in pivots.iter().enumerate() {
                    v[p] = -r.get(i, f).clone();
                }
                v
            })
            .collect()
    }

    /// Some `x` with `Ax = b`, if one exists.
    pub fn solve(&self, b: &[Rational]) -> Option<Vec<Rational>> {
        assert_eq!(b.len(), self.rows);
        let mut aug = Matrix::zeros(self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, self.cols, b[i].clone());
        }
        let (r, pivots) = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![Rational::zero(); self.cols];
        for (i, &p) in pivots.iter().enumerate() {
            x[p] = r.get(i, self.cols).clone();
        }
        Some(x)
    }

    pub fn determinant(&self) -> Rational {
        assert_eq!(self.rows, self.cols);
        let mut m = self.clone();
        let mut det = Rational::one();
        for c in 0..m.cols {
            let Some(p) = (c..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
                return Rational::zero();
            };
            if p != c {
                m.swap_rows(p, c);
                det = -det;
            }
            let piv = m.get(c, c).clone();
            det *= &piv;
            for i in c + 1..m.rows {
                if m.get(i, c).is_zero() {
                    continue;
                }
                let f = m.get(i, c) / &piv;
                for j in c..m.cols {
                    let x = m.get(i, j) - &f * m.get(c, j);
                    m.set(i, j, x);
                }
            }
        }
        det
    }
}

/// Column Hermite form `H = A·U` of an integer matrix with `U` unimodular.
///
/// The first `rank` columns of `H` form a lattice basis of the column span;
/// column `t` vanishes above row `pivot_rows[t]` and has a positive entry
/// there. The trailing columns of `U` span the integer kernel of `A`.
#[derive(Clone, Debug)]
pub struct ColumnHermite {
    pub h: Vec<Vec<BigInt>>,
    pub u: Vec<Vec<BigInt>>,
    pub rank: usize,
    pub pivot_rows: Vec<usize>,
}

impl ColumnHermite {
    pub fn basis_column(&self, t: usize) -> Vec<BigInt> {
        self.h.iter().map(|row| row[t].clone()).collect()
    }

    pub fn kernel_basis(&self) -> Vec<Vec<BigInt>> {
        let k = self.u.len();
        (self.rank..k)
            .map(|j| self.u.iter().map(|row| row[j].clone()).collect())
            .collect()
    }

    /// Integer coordinates of `v` in the lattice basis, if `v` lies in the
    /// column lattice.
    pub fn coordinates(&self, v: &[BigInt]) -> Option<Vec<BigInt>> {
        let mut rest = v.to_vec();
        let mut coords = Vec::with_capacity(self.rank);
        let m = self.h.len();
        let mut next_pivot = 0;
        for i in 0..m {
            if next_pivot < self.rank && self.pivot_rows[next_pivot] == i {
                let t = next_pivot;
                let (q, r) = rest[i].div_rem(&self.h[i][t]);
                if !r.is_zero() {
                    return None;
                }
                for (row, x) in self.h.iter().zip(rest.iter_mut()) {
                    *x -= &q * &row[t];
                }
                coords.push(q);
                next_pivot += 1;
            } else if !rest[i].is_zero() {
                return None;
            }
        }
        Some(coords)
    }
}

fn col_combine(
    m: &mut [Vec<BigInt>],
    c: usize,
    j: usize,
    (x, y, a, b): (&BigInt, &BigInt, &BigInt, &BigInt),
) {
    // (col_c, col_j) <- (x col_c + y col_j, -b col_c + a col_j)
    for row in m.iter_mut() {
        let (u, v) = (row[c].clone(), row[j].clone());
        row[c] = x * &u + y * &v;
        row[j] = a * &v - b * &u;
    }
}

pub fn column_hermite(a: &[Vec<BigInt>], cols: usize) -> ColumnHermite {
    let m = a.len();
    let mut h: Vec<Vec<BigInt>> = a.to_vec();
    let mut u: Vec<Vec<BigInt>> = (0..cols)
        .map(|i| {
            (0..cols)
                .map(|j| if i == j { BigInt::one() } else { BigInt::zero() })
                .collect()
        })
        .collect();
    let mut c = 0;
    let mut pivot_rows = Vec::new();
    for i in 0..m {
        if c == cols {
            break;
        }
        for j in c + 1..cols {
            if h[i][j].is_zero() {
                continue;
            }
            if h[i][c].is_zero() {
                for row in h.iter_mut().chain(u.iter_mut()) {
                    row.swap(c, j);
                }
                continue;
            }
            let e = h[i][c].extended_gcd(&h[i][j]);
            let a = &h[i][c] / &e.gcd;
            let b = &h[i][j] / &e.gcd;
            let coeffs = (&e.x, &e.y, &a, &b);
            col_combine(&mut h, c, j, coeffs);
            col_combine(&mut u, c, j, coeffs);
        }
        if h[i][c].is_zero() {
            continue;
        }
        if h[i][c].is_negative() {
            for row in h.iter_mut().chain(u.iter_mut()) {
                row[c] = -row[c].clone();
            }
        }
        for j in 0..c {
            let q = h[i][j].div_floor(&h[i][c]);
            if q.is_zero() {
                continue;
            }
            for row in h.iter_mut().chain(u.iter_mut()) {
                let d = &q * &row[c];
                row[j] -= d;
            }
        }
        pivot_rows.push(i);
        c += 1;
    }
    ColumnHermite {
        h,
        u,
        rank: c,
        pivot_rows,
    }
}

/// Nonzero invariant factors `d_1 | d_2 | …` of an integer matrix.
pub fn smith_invariants(a: &[Vec<BigInt>], cols: usize) -> Vec<BigInt> {
    let mut a: Vec<Vec<BigInt>> = a.to_vec();
    let rows = a.len();
    let mut diag = Vec::new();
    for t in 0..rows.min(cols) {
        loop {
            let mut best: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    if !a[i][j].is_zero()
                        && best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs())
                    {
                        best = Some((i, j));
                    }
                }
            }
            let Some((bi, bj)) = best else {
                break;
            };
            a.swap(t, bi);
            for row in a.iter_mut() {
                row.swap(t, bj);
            }
            let mut clean = true;
            for i in t + 1..rows {
                let q = a[i][t].div_floor(&a[t][t]);
                if !q.is_zero() {
                    for j in t..cols {
                        let d = &q * &a[t][j];
                        a[i][j] -= d;
                    }
                }
                clean &= a[i][t].is_zero();
            }
            for j in t + 1..cols {
                let q = a[t][j].div_floor(&a[t][t]);
                if !q.is_zero() {
                    for row in a.iter_mut().skip(t) {
                        let d = &q * &row[t];
                        row[j] -= d;
                    }
                }
                clean &= a[t][j].is_zero();
            }
            if clean {
                // also require divisibility of the remaining block
                let bad = (t + 1..rows).flat_map(|i| (t + 1..cols).map(move |j| (i, j))).find(
                    |&(i, j)| !a[i][j].is_multiple_of(&a[t][t]),
                );
                match bad {
                    None => {
                        diag.push(a[t][t].abs());
                        break;
                    }
                    Some((i, _)) => {
                        for j in t..cols {
                            let x = a[i][j].clone();
                            a[t][j] += x;
                        }
                    }
                }
            }
        }
        if diag.len() == t {
            break;
        }
    }
    diag
}

/// Sparse vector: strictly increasing indices, nonzero values.
pub type SparseVec = Vec<(usize, Rational)>;

pub fn sparse_from_dense(v: &[Rational]) -> SparseVec {
    v.iter()
        .enumerate()
        .filter(|(_, x)| !x.is_zero())
        .map(|(i, x)| (i, x.clone()))
        .collect()
}

pub fn sparse_to_dense(v: &SparseVec, len: usize) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); len];
    for (i, x) in v {
        out[*i] = x.clone();
    }
    out
}

struct EchelonRow {
    vec: SparseVec,
    tag: SparseVec,
}

/// Incrementally built row echelon basis of a subspace of `ℚ^N`.
///
/// Each stored row has leading entry 1 at its pivot column and no entries at
/// earlier pivot columns. A row also carries a tag vector recording it as a
/// combination of the inserted vectors when tags are supplied.
#[derive(Default)]
pub struct EchelonBasis {
    rows: Vec<EchelonRow>,
    pivot_of: HashMap<usize, usize>,
}

pub enum Insertion {
    Added,
    /// The vector was dependent; the payload is the reduced tag, which
    /// records a linear relation among the inserted vectors.
    Dependent(SparseVec),
}

fn axpy(target: &mut BTreeMap<usize, Rational>, coef: &Rational, v: &SparseVec) {
    for (j, x) in v {
        let e = target.entry(*j).or_insert_with(Rational::zero);
        *e -= coef * x;
        if e.is_zero() {
            target.remove(j);
        }
    }
}

impl EchelonBasis {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn pivot_columns(&self) -> impl Iterator<Item = usize> + '_ {
        self.rows.iter().map(|r| r.vec[0].0)
    }

    pub fn row_vectors(&self) -> impl Iterator<Item = &SparseVec> {
        self.rows.iter().map(|r| &r.vec)
    }

    /// Reduces `v` against the basis; returns the remainder and the tag
    /// after the same row operations.
    pub fn reduce_tagged(&self, v: SparseVec, tag: SparseVec) -> (SparseVec, SparseVec) {
        let mut w: BTreeMap<usize, Rational> = v.into_iter().collect();
        let mut t: BTreeMap<usize, Rational> = tag.into_iter().collect();
        let mut cursor = 0;
        loop {
            let next = w
                .range(cursor..)
                .find(|(c, _)| self.pivot_of.contains_key(c))
                .map(|(c, x)| (*c, x.clone()));
            let Some((c, coef)) = next else {
                break;
            };
            let row = &self.rows[self.pivot_of[&c]];
            axpy(&mut w, &coef, &row.vec);
            axpy(&mut t, &coef, &row.tag);
            cursor = c + 1;
        }
        (w.into_iter().collect(), t.into_iter().collect())
    }

    pub fn reduce(&self, v: SparseVec) -> SparseVec {
        self.reduce_tagged(v, Vec::new()).0
    }

    pub fn contains(&self, v: SparseVec) -> bool {
        self.reduce(v).is_empty()
    }

    /// Coefficients expressing `v` through the tagged inserted vectors.
    pub fn express(&self, v: SparseVec) -> Option<SparseVec> {
        let (rem, t) = self.reduce_tagged(v, Vec::new());
        rem.is_empty()
            .then(|| t.into_iter().map(|(i, x)| (i, -x)).collect())
    }

    pub fn insert_tagged(&mut self, v: SparseVec, tag: SparseVec) -> Insertion {
        let (rem, t) = self.reduce_tagged(v, tag);
        if rem.is_empty() {
            return Insertion::Dependent(t);
        }
        let inv = rem[0].1.recip();
        let scale = |s: SparseVec| s.into_iter().map(|(i, x)| (i, x * &inv)).collect();
        let lead = rem[0].0;
        self.pivot_of.insert(lead, self.rows.len());
        self.rows.push(EchelonRow {
            vec: scale(rem),
            tag: scale(t),
        });
        Insertion::Added
    }

    pub fn insert(&mut self, v: SparseVec) -> bool {
        matches!(self.insert_tagged(v, Vec::new()), Insertion::Added)
    }
}

pub fn to_integer_matrix(rows: &[Vec<Rational>]) -> Option<Vec<Vec<BigInt>>> {
    rows.iter()
        .map(|r| {
            r.iter()
                .map(|x| x.is_integer().then(|| x.to_integer()))
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::int;

    fn bi(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rows.iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect()
    }

    fn qm(rows: &[&[i64]]) -> Matrix {
        let cols = rows.first().map_or(0, |r| r.len());
        Matrix::from_rows(
            rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect(),
            cols,
        )
        .unwrap()
    }

    #[test]
    fn rref_and_nullspace() {
        let m = qm(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        assert_eq!(m.rank(), 2);
        let ns = m.nullspace();
        assert_eq!(ns.len(), 1);
        assert!(m.mul_vec(&ns[0]).unwrap().iter().all(Zero::is_zero));
        assert!(m.solve(&[int(1), int(2), int(0)]).is_some());
        assert!(m.solve(&[int(1), int(3), int(0)]).is_none());
    }

    #[test]
    fn determinant() {
        assert_eq!(qm(&[&[2, 1], &[1, 3]]).determinant(), int(5));
        assert_eq!(qm(&[&[0, 1], &[1, 0]]).determinant(), int(-1));
    }

    #[test]
    fn hermite_kernel_and_membership() {
        let a = bi(&[&[2, 4, 6], &[1, 3, 5]]);
        let hnf = column_hermite(&a, 3);
        assert_eq!(hnf.rank, 2);
        let ker = hnf.kernel_basis();
        assert_eq!(ker.len(), 1);
        for (row, _) in a.iter().zip(0..) {
            let s: BigInt = row.iter().zip(&ker[0]).map(|(x, y)| x * y).sum();
            assert!(s.is_zero());
        }
        // lattice generated by (2,1), (4,3), (6,5): contains (0,1)? 4,3 - 2*(2,1) = (0,1)
        assert!(hnf.coordinates(&[BigInt::from(0), BigInt::from(1)]).is_some());
        assert!(hnf.coordinates(&[BigInt::from(1), BigInt::from(0)]).is_none());
    }

    #[test]
    fn smith() {
        let d = smith_invariants(&bi(&[&[2, 4, 4], &[-6, 6, 12], &[10, -4, -16]]), 3);
        assert_eq!(d, vec![BigInt::from(2), BigInt::from(6), BigInt::from(12)]);
        let d = smith_invariants(&bi(&[&[2, 0], &[0, 3]]), 2);
        assert_eq!(d, vec![BigInt::from(1), BigInt::from(6)]);
        assert!(smith_invariants(&bi(&[&[0, 0]]), 2).is_empty());
    }

    #[test]
    fn echelon_relations() {
        let mut e = EchelonBasis::new();
        let v = |xs: &[i64]| sparse_from_dense(&xs.iter().map(|&x| int(x)).collect::<Vec<_>>());
        assert!(matches!(e.insert_tagged(v(&[1, 1, 0]), vec![(0, int(1))]), Insertion::Added));
        assert!(matches!(e.insert_tagged(v(&[0, 1, 1]), vec![(1, int(1))]), Insertion::Added));
        match e.insert_tagged(v(&[1, 2, 1]), vec![(2, int(1))]) {
            Insertion::Dependent(t) => {
                assert_eq!(t, vec![(0, int(-1)), (1, int(-1)), (2, int(1))])
            }
            Insertion::Added => panic!("dependent vector accepted"),
        }
        assert_eq!(e.express(v(&[2, 3, 1])), Some(vec![(0, int(2)), (1, int(1))]));
        assert_eq!(e.express(v(&[0, 0, 1])), None);
    }
}
