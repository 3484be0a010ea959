use std::fmt;

use crate::exactlin::{Field, Matrix, Scalar};
use crate::error::{Error, Result};

/// A linear form `Σ c_k x_k` on `P^n`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LinForm {
    c: Vec<Scalar>,
}

impl LinForm {
    pub fn new(c: Vec<Scalar>) -> LinForm {
        assert!(!c.is_empty(), "linear form needs coefficients");
        LinForm { c }
    }

    pub fn zero(field: Field, n: usize) -> LinForm {
        LinForm { c: vec![field.zero(); n + 1] }
    }

    pub fn var(field: Field, n: usize, k: usize) -> LinForm {
        let mut c = vec![field.zero(); n + 1];
        c[k] = field.one();
        LinForm { c }
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.c
    }

    pub fn n(&self) -> usize {
        self.c.len() - 1
    }

    pub fn field(&self) -> Field {
        self.c[0].field()
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(Scalar::is_zero)
    }

    pub fn eval(&self, x: &[Scalar]) -> Scalar {
        crate::exactlin::dot(&self.c, x)
    }

    pub fn scale(&self, s: &Scalar) -> LinForm {
        LinForm { c: self.c.iter().map(|x| x * s).collect() }
    }

    pub fn add(&self, o: &LinForm) -> LinForm {
        LinForm { c: self.c.iter().zip(&o.c).map(|(a, b)| a + b).collect() }
    }

    /// The scalar `s` with `self = s * f`, if one exists (`f` nonzero).
    pub fn ratio_to(&self, f: &LinForm) -> Option<Scalar> {
        let k = f.c.iter().position(|x| !x.is_zero())?;
        let s = self.c[k].div(&f.c[k]).ok()?;
        self.c.iter().zip(&f.c).all(|(a, b)| *a == &s * b).then_some(s)
    }
}

impl fmt::Display for LinForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (k, c) in self.c.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let term = if c.is_one() { format!("x{k}") } else { format!("{c}*x{k}") };
            parts.push(term);
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + ").replace("+ -", "- "))
        }
    }
}

impl fmt::Debug for LinForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// An `a x b` matrix of linear forms in `x_0..x_n`, stored as `n+1` scalar
/// coefficient matrices: `M = Σ_k x_k M_k`.
#[derive(Clone, PartialEq, Eq)]
pub struct LinFormMatrix {
    n: usize,
    field: Field,
    rows: usize,
    cols: usize,
    slices: Vec<Matrix>,
}

impl LinFormMatrix {
    pub fn zeros(field: Field, n: usize, rows: usize, cols: usize) -> LinFormMatrix {
        LinFormMatrix { n, field, rows, cols, slices: vec![Matrix::zeros(field, rows, cols); n + 1] }
    }

    pub fn from_slices(slices: Vec<Matrix>) -> Result<LinFormMatrix> {
        let first = slices.first().ok_or_else(|| Error::InvalidInput("no coefficient slices".into()))?;
        let (rows, cols, field) = (first.rows(), first.cols(), first.field());
        if slices.iter().any(|m| m.rows() != rows || m.cols() != cols) {
            return Err(Error::DimensionMismatch("coefficient slices differ in shape".into()));
        }
        if slices.iter().any(|m| m.field() != field) {
            return Err(Error::MixedField);
        }
        Ok(LinFormMatrix { n: slices.len() - 1, field, rows, cols, slices })
    }

    pub fn from_entries(field: Field, n: usize, entries: &[Vec<LinForm>]) -> Result<LinFormMatrix> {
        let rows = entries.len();
        let cols = entries.first().map_or(0, |r| r.len());
        let mut m = LinFormMatrix::zeros(field, n, rows, cols);
        for (j, row) in entries.iter().enumerate() {
            if row.len() != cols {
                return Err(Error::DimensionMismatch("ragged matrix of forms".into()));
            }
            for (i, e) in row.iter().enumerate() {
                if e.n() != n {
                    return Err(Error::DimensionMismatch(format!("entry ({j},{i}) has {} coefficients", e.n() + 1)));
                }
                if e.field() != field {
                    return Err(Error::MixedField);
                }
                m.set(j, i, e);
            }
        }
        Ok(m)
    }

    pub fn n(&self) -> usize {
        self.n
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

    pub fn slices(&self) -> &[Matrix] {
        &self.slices
    }

    pub fn entry(&self, j: usize, i: usize) -> LinForm {
        LinForm::new(self.slices.iter().map(|m| m.get(j, i).clone()).collect())
    }

    pub fn set(&mut self, j: usize, i: usize, f: &LinForm) {
        for (k, m) in self.slices.iter_mut().enumerate() {
            m.set(j, i, f.coeffs()[k].clone());
        }
    }

    /// The scalar matrix `M(x)`.
    pub fn eval(&self, x: &[Scalar]) -> Matrix {
        let mut out = Matrix::zeros(self.field, self.rows, self.cols);
        for (k, m) in self.slices.iter().enumerate() {
            if x[k].is_zero() {
                continue;
            }
            out = out.add(&m.scale(&x[k])).expect("same shape");
        }
        out
    }

    pub fn reduce(&self, target: Field) -> Result<LinFormMatrix> {
        let slices = self.slices.iter().map(|m| m.reduce(target)).collect::<Result<Vec<_>>>()?;
        Ok(LinFormMatrix { n: self.n, field: target, rows: self.rows, cols: self.cols, slices })
    }

    pub fn column(&self, i: usize) -> Vec<LinForm> {
        (0..self.rows).map(|j| self.entry(j, i)).collect()
    }

    pub fn entries(&self) -> Vec<Vec<LinForm>> {
        (0..self.rows).map(|j| (0..self.cols).map(|i| self.entry(j, i)).collect()).collect()
    }

    /// Block-diagonal sum with another matrix of forms in the same variables.
    pub fn direct_sum(&self, o: &LinFormMatrix) -> Result<LinFormMatrix> {
        if self.n != o.n || self.field != o.field {
            return Err(Error::DimensionMismatch("direct sum of matrices in different variables".into()));
        }
        let slices = self
            .slices
            .iter()
            .zip(&o.slices)
            .map(|(a, b)| Matrix::block_diag(self.field, &[a.clone(), b.clone()]))
            .collect();
        LinFormMatrix::from_slices(slices)
    }

    /// `M · v` as a column of linear forms, `v` constant.
    pub fn apply(&self, v: &[Scalar]) -> Vec<LinForm> {
        let cols: Vec<Vec<Scalar>> = self.slices.iter().map(|m| m.mul_vec(v).expect("length")).collect();
        (0..self.rows).map(|j| LinForm::new(cols.iter().map(|c| c[j].clone()).collect())).collect()
    }

    /// `uᵀ · M` as a row of linear forms, `u` constant.
    pub fn apply_left(&self, u: &[Scalar]) -> Vec<LinForm> {
        let rows: Vec<Vec<Scalar>> =
            self.slices.iter().map(|m| m.transpose().mul_vec(u).expect("length")).collect();
        (0..self.cols).map(|i| LinForm::new(rows.iter().map(|r| r[i].clone()).collect())).collect()
    }
}

impl fmt::Debug for LinFormMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}x{} forms in x0..x{} over {}", self.rows, self.cols, self.n, self.field)?;
        for row in self.entries() {
            let s: Vec<String> = row.iter().map(|e| e.to_string()).collect();
            writeln!(f, "  [{}]", s.join(", "))?;
        }
        Ok(())
    }
}

impl fmt::Display for LinFormMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in self.entries() {
            let s: Vec<String> = row.iter().map(|e| e.to_string()).collect();
            writeln!(f, "[{}]", s.join(", "))?;
        }
        Ok(())
    }
}
