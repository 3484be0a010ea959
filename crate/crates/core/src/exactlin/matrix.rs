//! Dense matrices over an exact field.
//!
//! Row reduction pivots on the first nonzero entry of each column, scanning
//! rows in order, so every result is reproducible. Over the rationals the
//! forward pass is fraction-free (Bareiss) on integer-scaled rows; only the
//! final back substitution divides.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::scalar::{Field, Scalar};
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

/// Reduced row-echelon form together with its pivot columns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rref {
    pub matrix: Matrix,
    pub pivots: Vec<usize>,
    pub rank: usize,
}

/// Outcome of solving `m x = b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Solution {
    pub particular: Option<Vec<Scalar>>,
    pub nullity: usize,
}

impl Matrix {
    pub fn new(field: Field, rows: usize, cols: usize, data: Vec<Scalar>) -> Result<Matrix> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        if data.iter().any(|x| x.field() != field) {
            return Err(Error::MixedField);
        }
        Ok(Matrix { field, rows, cols, data })
    }

    pub fn zeros(field: Field, rows: usize, cols: usize) -> Matrix {
        Matrix { field, rows, cols, data: vec![field.zero(); rows * cols] }
    }

    pub fn identity(field: Field, n: usize) -> Matrix {
        let mut m = Matrix::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = field.one();
        }
        m
    }

    pub fn from_rows(field: Field, rows: &[Vec<Scalar>]) -> Result<Matrix> {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        if rows.iter().any(|x| x.len() != c) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Matrix::new(field, r, c, rows.iter().flatten().cloned().collect())
    }

    pub fn from_cols(field: Field, cols: &[Vec<Scalar>], nrows: usize) -> Result<Matrix> {
        if cols.iter().any(|c| c.len() != nrows) {
            return Err(Error::DimensionMismatch("ragged columns".into()));
        }
        let mut m = Matrix::zeros(field, nrows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            for (i, x) in c.iter().enumerate() {
                if x.field() != field {
                    return Err(Error::MixedField);
                }
                m.data[i * cols.len() + j] = x.clone();
            }
        }
        Ok(m)
    }

    pub fn from_i64(field: Field, rows: &[&[i64]]) -> Matrix {
        let data: Vec<Vec<Scalar>> =
            rows.iter().map(|r| r.iter().map(|&x| field.from_i64(x)).collect()).collect();
        Matrix::from_rows(field, &data).expect("rectangular literal")
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        assert_eq!(v.field(), self.field, "field mismatch in Matrix::set");
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<Scalar> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn row_vecs(&self) -> Vec<Vec<Scalar>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.get(i, j).clone();
            }
        }
        t
    }

    pub fn mul(&self, o: &Matrix) -> Result<Matrix> {
        if self.cols != o.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, o.rows, o.cols
            )));
        }
        if self.field != o.field {
            return Err(Error::MixedField);
        }
        let mut out = Matrix::zeros(self.field, self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let b = o.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let idx = i * o.cols + j;
                    out.data[idx] = &out.data[idx] + &(a * b);
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Result<Vec<Scalar>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} against {} columns",
                v.len(),
                self.cols
            )));
        }
        Ok((0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(self.field.zero(), |acc, (a, b)| &acc + &(a * b))
            })
            .collect())
    }

    pub fn add(&self, o: &Matrix) -> Result<Matrix> {
        self.zip_with(o, |a, b| a + b)
    }

    pub fn sub(&self, o: &Matrix) -> Result<Matrix> {
        self.zip_with(o, |a, b| a - b)
    }

    fn zip_with(&self, o: &Matrix, f: impl Fn(&Scalar, &Scalar) -> Scalar) -> Result<Matrix> {
        if (self.rows, self.cols) != (o.rows, o.cols) {
            return Err(Error::DimensionMismatch("shapes differ".into()));
        }
        if self.field != o.field {
            return Err(Error::MixedField);
        }
        let data = self.data.iter().zip(&o.data).map(|(a, b)| f(a, b)).collect();
        Ok(Matrix { field: self.field, rows: self.rows, cols: self.cols, data })
    }

    pub fn scale(&self, s: &Scalar) -> Matrix {
        Matrix {
            field: self.field,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x * s).collect(),
        }
    }

    pub fn hstack(&self, o: &Matrix) -> Result<Matrix> {
        if self.rows != o.rows {
            return Err(Error::DimensionMismatch("hstack row counts differ".into()));
        }
        let mut rows = self.row_vecs();
        for (r, extra) in rows.iter_mut().zip(o.row_vecs()) {
            r.extend(extra);
        }
        Matrix::new(self.field, self.rows, self.cols + o.cols, rows.into_iter().flatten().collect())
    }

    pub fn vstack(&self, o: &Matrix) -> Result<Matrix> {
        if self.cols != o.cols {
            return Err(Error::DimensionMismatch("vstack column counts differ".into()));
        }
        let mut data = self.data.clone();
        data.extend(o.data.iter().cloned());
        Matrix::new(self.field, self.rows + o.rows, self.cols, data)
    }

    pub fn submatrix(&self, rows: std::ops::Range<usize>, cols: std::ops::Range<usize>) -> Matrix {
        let mut m = Matrix::zeros(self.field, rows.len(), cols.len());
        for (a, i) in rows.clone().enumerate() {
            for (b, j) in cols.clone().enumerate() {
                m.data[a * cols.len() + b] = self.get(i, j).clone();
            }
        }
        m
    }

    pub fn select_rows(&self, idx: &[usize]) -> Matrix {
        let data = idx.iter().flat_map(|&i| self.row(i).iter().cloned()).collect();
        Matrix { field: self.field, rows: idx.len(), cols: self.cols, data }
    }

    pub fn select_cols(&self, idx: &[usize]) -> Matrix {
        self.transpose().select_rows(idx).transpose()
    }

    /// Writes `block` with its top-left corner at `(r0, c0)`.
    pub fn set_block(&mut self, r0: usize, c0: usize, block: &Matrix) {
        for i in 0..block.rows {
            for j in 0..block.cols {
                self.set(r0 + i, c0 + j, block.get(i, j).clone());
            }
        }
    }

    pub fn block_diag(field: Field, blocks: &[Matrix]) -> Matrix {
        let r: usize = blocks.iter().map(|b| b.rows).sum();
        let c: usize = blocks.iter().map(|b| b.cols).sum();
        let mut m = Matrix::zeros(field, r, c);
        let (mut i, mut j) = (0, 0);
        for b in blocks {
            m.set_block(i, j, b);
            i += b.rows;
            j += b.cols;
        }
        m
    }

    pub fn rref(&self) -> Rref {
        match self.field {
            Field::Rational => self.rref_rational(),
            Field::Prime(_) => self.rref_gauss_jordan(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().rank
    }

    fn rref_gauss_jordan(&self) -> Rref {
        let mut a = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..a.cols {
            if r == a.rows {
                break;
            }
            let Some(p) = (r..a.rows).find(|&i| !a.get(i, c).is_zero()) else {
                continue;
            };
            a.swap_rows(r, p);
            let inv = a.get(r, c).inv().expect("nonzero pivot");
            for j in c..a.cols {
                let v = a.get(r, j) * &inv;
                a.data[r * a.cols + j] = v;
            }
            for i in 0..a.rows {
                if i == r || a.get(i, c).is_zero() {
                    continue;
                }
                let f = a.get(i, c).clone();
                for j in c..a.cols {
                    let v = a.get(i, j) - &(&f * a.get(r, j));
                    a.data[i * a.cols + j] = v;
                }
            }
            pivots.push(c);
            r += 1;
        }
        let rank = pivots.len();
        Rref { matrix: a, pivots, rank }
    }

    fn rref_rational(&self) -> Rref {
        // Scale each row to primitive integers, eliminate fraction-free,
        // then back-substitute over Q.
        let (rows, cols) = (self.rows, self.cols);
        let mut a: Vec<Vec<BigInt>> = (0..rows)
            .map(|i| {
                let row: Vec<&BigRational> =
                    self.row(i).iter().map(|x| x.as_rational().expect("rational entry")).collect();
                let l = row.iter().fold(BigInt::one(), |l, q| l.lcm(q.denom()));
                row.iter().map(|q| q.numer() * (&l / q.denom())).collect()
            })
            .collect();
        let mut pivots = Vec::new();
        let mut prev = BigInt::one();
        let mut r = 0;
        for c in 0..cols {
            if r == rows {
                break;
            }
            let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
                continue;
            };
            a.swap(r, p);
            for i in r + 1..rows {
                for j in c + 1..cols {
                    let v = &a[r][c] * &a[i][j] - &a[i][c] * &a[r][j];
                    debug_assert!((&v % &prev).is_zero());
                    a[i][j] = v / &prev;
                }
                a[i][c] = BigInt::zero();
            }
            prev = a[r][c].clone();
            pivots.push(c);
            r += 1;
        }
        let rank = pivots.len();
        // back substitution over Q on the echelon rows
        let mut q: Vec<Vec<BigRational>> = a
            .into_iter()
            .map(|row| row.into_iter().map(BigRational::from_integer).collect())
            .collect();
        for (k, &c) in pivots.iter().enumerate().rev() {
            let piv = q[k][c].clone();
            for j in c..cols {
                q[k][j] = &q[k][j] / &piv;
            }
            for i in 0..k {
                if q[i][c].is_zero() {
                    continue;
                }
                let f = q[i][c].clone();
                for j in c..cols {
                    let v = &q[i][j] - &f * &q[k][j];
                    q[i][j] = v;
                }
            }
        }
        for row in q.iter_mut().skip(rank) {
            for x in row.iter_mut() {
                *x = BigRational::zero();
            }
        }
        let data = q.into_iter().flatten().map(Scalar::Q).collect();
        Rref { matrix: Matrix { field: Field::Rational, rows, cols, data }, pivots, rank }
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(i * self.cols + c, j * self.cols + c);
        }
    }

    /// Basis of the right null space, one vector per free column of the
    /// RREF, in increasing column order.
    pub fn kernel_basis(&self) -> Vec<Vec<Scalar>> {
        let rr = self.rref();
        kernel_from_rref(&rr, self.cols, self.field)
    }

    pub fn nullity(&self) -> usize {
        self.cols - self.rank()
    }

    pub fn solve(&self, b: &[Scalar]) -> Result<Solution> {
        if b.len() != self.rows {
            return Err(Error::DimensionMismatch(format!(
                "right-hand side of length {} for {} rows",
                b.len(),
                self.rows
            )));
        }
        let col = Matrix::new(self.field, self.rows, 1, b.to_vec())?;
        let aug = self.hstack(&col)?;
        let rr = aug.rref();
        let n = self.cols;
        if rr.pivots.last() == Some(&n) {
            let rank = rr.rank - 1;
            return Ok(Solution { particular: None, nullity: n - rank });
        }
        let mut x = vec![self.field.zero(); n];
        for (k, &c) in rr.pivots.iter().enumerate() {
            x[c] = rr.matrix.get(k, n).clone();
        }
        Ok(Solution { particular: Some(x), nullity: n - rr.rank })
    }

    pub fn inverse(&self) -> Result<Matrix> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch("inverse of a non-square matrix".into()));
        }
        let n = self.rows;
        let aug = self.hstack(&Matrix::identity(self.field, n))?;
        let rr = aug.rref();
        if rr.pivots.iter().take(n).copied().ne(0..n) || rr.rank < n {
            return Err(Error::DivisionByZero);
        }
        Ok(rr.matrix.submatrix(0..n, n..2 * n))
    }

    pub fn determinant(&self) -> Result<Scalar> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch("determinant of a non-square matrix".into()));
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut det = self.field.one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !a.get(i, c).is_zero()) else {
                return Ok(self.field.zero());
            };
            if p != c {
                a.swap_rows(p, c);
                det = -det;
            }
            let piv = a.get(c, c).clone();
            det = &det * &piv;
            let inv = piv.inv()?;
            for i in c + 1..n {
                if a.get(i, c).is_zero() {
                    continue;
                }
                let f = a.get(i, c) * &inv;
                for j in c..n {
                    let v = a.get(i, j) - &(&f * a.get(c, j));
                    a.data[i * n + j] = v;
                }
            }
        }
        Ok(det)
    }

    /// Maps every entry into another field (only rational to prime).
    pub fn reduce(&self, target: Field) -> Result<Matrix> {
        let data = self
            .data
            .iter()
            .map(|x| match x {
                Scalar::Q(q) => target.from_rational(q),
                Scalar::P(_) if self.field == target => Ok(x.clone()),
                Scalar::P(_) => Err(Error::MixedField),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Matrix { field: target, rows: self.rows, cols: self.cols, data })
    }
}

pub(crate) fn kernel_from_rref(rr: &Rref, cols: usize, field: Field) -> Vec<Vec<Scalar>> {
    let mut is_pivot = vec![false; cols];
    for &c in &rr.pivots {
        is_pivot[c] = true;
    }
    (0..cols)
        .filter(|&f| !is_pivot[f])
        .map(|f| {
            let mut v = vec![field.zero(); cols];
            v[f] = field.one();
            for (k, &c) in rr.pivots.iter().enumerate() {
                v[c] = -rr.matrix.get(k, f);
            }
            v
        })
        .collect()
}

/// Rank of a list of vectors of equal length.
pub fn rank_of(field: Field, vectors: &[Vec<Scalar>]) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    Matrix::from_rows(field, vectors).map(|m| m.rank()).unwrap_or(0)
}

/// Standard basis vectors completing `vectors` (assumed independent) to a
/// basis of `k^dim`, chosen greedily in index order.
pub fn complete_basis(field: Field, vectors: &[Vec<Scalar>], dim: usize) -> Vec<Vec<Scalar>> {
    let mut current: Vec<Vec<Scalar>> = vectors.to_vec();
    let mut extra = Vec::new();
    for i in 0..dim {
        if current.len() == dim {
            break;
        }
        let mut e = vec![field.zero(); dim];
        e[i] = field.one();
        current.push(e.clone());
        if rank_of(field, &current) == current.len() {
            extra.push(e);
        } else {
            current.pop();
        }
    }
    extra
}

pub fn dot(a: &[Scalar], b: &[Scalar]) -> Scalar {
    let field = a.first().or(b.first()).map_or(Field::Rational, Scalar::field);
    a.iter().zip(b).fold(field.zero(), |acc, (x, y)| &acc + &(x * y))
}

pub fn axpy(alpha: &Scalar, x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
    x.iter().zip(y).map(|(a, b)| &(alpha * a) + b).collect()
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} over {}", self.rows, self.cols, self.field)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}
