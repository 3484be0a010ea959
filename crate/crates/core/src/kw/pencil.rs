use crate::exactlin::{BinaryForm, Field, Matrix, Poly, Scalar};
use crate::error::{Error, Result};
use crate::steiner::LinForm;

/// The pencil `N(ξ) = A ξ0 + B ξ1` of scalar matrices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pencil {
    a: Matrix,
    b: Matrix,
}

impl Pencil {
    pub fn new(a: Matrix, b: Matrix) -> Result<Pencil> {
        if (a.rows(), a.cols()) != (b.rows(), b.cols()) {
            return Err(Error::DimensionMismatch("pencil matrices differ in shape".into()));
        }
        if a.field() != b.field() {
            return Err(Error::MixedField);
        }
        Ok(Pencil { a, b })
    }

    pub fn zeros(field: Field, rows: usize, cols: usize) -> Pencil {
        Pencil { a: Matrix::zeros(field, rows, cols), b: Matrix::zeros(field, rows, cols) }
    }

    pub fn a(&self) -> &Matrix {
        &self.a
    }

    pub fn b(&self) -> &Matrix {
        &self.b
    }

    pub fn rows(&self) -> usize {
        self.a.rows()
    }

    pub fn cols(&self) -> usize {
        self.a.cols()
    }

    pub fn field(&self) -> Field {
        self.a.field()
    }

    pub fn eval(&self, s0: &Scalar, s1: &Scalar) -> Matrix {
        self.a.scale(s0).add(&self.b.scale(s1)).expect("same shape")
    }

    pub fn transpose(&self) -> Pencil {
        Pencil { a: self.a.transpose(), b: self.b.transpose() }
    }

    /// `P · N · Q`.
    pub fn transform(&self, p: &Matrix, q: &Matrix) -> Result<Pencil> {
        Ok(Pencil { a: p.mul(&self.a)?.mul(q)?, b: p.mul(&self.b)?.mul(q)? })
    }

    pub fn sub(&self, rows: std::ops::Range<usize>, cols: std::ops::Range<usize>) -> Pencil {
        Pencil { a: self.a.submatrix(rows.clone(), cols.clone()), b: self.b.submatrix(rows, cols) }
    }

    pub fn block_diag(field: Field, blocks: &[Pencil]) -> Pencil {
        let a: Vec<Matrix> = blocks.iter().map(|p| p.a.clone()).collect();
        let b: Vec<Matrix> = blocks.iter().map(|p| p.b.clone()).collect();
        Pencil { a: Matrix::block_diag(field, &a), b: Matrix::block_diag(field, &b) }
    }

    /// Determinant of a square pencil as a binary form of degree `rows`
    /// (fraction-free elimination over `k[t]` with `ξ = (1, t)`).
    pub fn determinant(&self) -> Result<BinaryForm> {
        let k = self.rows();
        if k != self.cols() {
            return Err(Error::DimensionMismatch("determinant of a non-square pencil".into()));
        }
        let field = self.field();
        if k == 0 {
            return BinaryForm::new(field, vec![field.one()]);
        }
        let mut m: Vec<Vec<Poly>> = (0..k)
            .map(|i| {
                (0..k).map(|j| Poly::new(field, vec![self.a.get(i, j).clone(), self.b.get(i, j).clone()])).collect()
            })
            .collect();
        let mut negate = false;
        let mut prev = Poly::one(field);
        for c in 0..k {
            let Some(r) = (c..k).find(|&r| !m[r][c].is_zero()) else {
                return BinaryForm::new(field, vec![field.zero(); k + 1]);
            };
            if r != c {
                m.swap(r, c);
                negate = !negate;
            }
            for i in c + 1..k {
                for j in c + 1..k {
                    let num = m[c][c].mul(&m[i][j]).sub(&m[i][c].mul(&m[c][j]));
                    m[i][j] = num.exact_div(&prev)?;
                }
                m[i][c] = Poly::zero(field);
            }
            prev = m[c][c].clone();
        }
        let mut det = m[k - 1][k - 1].clone();
        if negate {
            det = det.scale(&-field.one());
        }
        BinaryForm::from_poly(&det, k)
    }
}

/// Coefficients of a `2 x n` matrix of forms in `z_0..z_n`, reshuffled into
/// the `n x (n+1)` pencil with `A` from the first row and `B` from the
/// second.
pub fn pencil_from_matrix(m: &[Vec<LinForm>; 2]) -> Result<Pencil> {
    let n = m[0].len();
    if m[1].len() != n || n == 0 {
        return Err(Error::DimensionMismatch("rows of the 2 x n matrix differ in length".into()));
    }
    if m.iter().flatten().any(|f| f.n() != n) {
        return Err(Error::DimensionMismatch(format!("forms must have {} coefficients", n + 1)));
    }
    let field = m[0][0].field();
    let rows = |r: &Vec<LinForm>| -> Result<Matrix> {
        Matrix::from_rows(field, &r.iter().map(|f| f.coeffs().to_vec()).collect::<Vec<_>>())
    };
    Pencil::new(rows(&m[0])?, rows(&m[1])?)
}

pub fn matrix_from_pencil(p: &Pencil) -> Result<[Vec<LinForm>; 2]> {
    if p.cols() != p.rows() + 1 {
        return Err(Error::DimensionMismatch(format!("pencil must be n x (n+1), got {}x{}", p.rows(), p.cols())));
    }
    let row = |m: &Matrix| (0..m.rows()).map(|j| LinForm::new(m.row(j).to_vec())).collect::<Vec<_>>();
    Ok([row(&p.a), row(&p.b)])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hankel_conic_round_trip() {
        let f = Field::Rational;
        let z = |k| LinForm::var(f, 2, k);
        let m = [vec![z(1), z(2)], vec![z(0), z(1)]];
        let p = pencil_from_matrix(&m).unwrap();
        assert_eq!(p.a(), &Matrix::from_i64(f, &[&[0, 1, 0], &[0, 0, 1]]));
        assert_eq!(p.b(), &Matrix::from_i64(f, &[&[1, 0, 0], &[0, 1, 0]]));
        assert_eq!(matrix_from_pencil(&p).unwrap(), m);
    }

    #[test]
    fn determinant_of_diagonal_pencil() {
        let f = Field::Rational;
        let p = Pencil::new(Matrix::identity(f, 2), Matrix::from_i64(f, &[&[-1, 0], &[0, -2]])).unwrap();
        // (ξ0 - ξ1)(ξ0 - 2ξ1)
        assert_eq!(p.determinant().unwrap(), BinaryForm::from_i64(f, &[1, -3, 2]));
    }
}
