//! Instability through the matrix: a constant vector `v` with
//! `M·v = h_y·w` identically in `x`.

use crate::exactlin::{Matrix, Scalar};
use crate::error::{Error, Result};
use crate::projgeom::ProjPoint;
use crate::steiner::{LinForm, LinFormMatrix};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatrixWitness {
    pub v: Vec<Scalar>,
    pub w: Vec<Scalar>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatrixTest {
    pub unstable: bool,
    /// Dimension of the space of pairs `(v, w)`.
    pub dim: usize,
    pub witness: Option<MatrixWitness>,
}

/// The `a(n+1) x (b+a)` coefficient system in the unknowns `(v, w)`.
fn system(m: &LinFormMatrix, y: &ProjPoint) -> Matrix {
    let (a, b, n) = (m.rows(), m.cols(), m.n());
    let field = m.field();
    let mut sys = Matrix::zeros(field, a * (n + 1), b + a);
    for (k, slice) in m.slices().iter().enumerate() {
        sys.set_block(k * a, 0, slice);
        let yk = &y.coords()[k];
        if !yk.is_zero() {
            for j in 0..a {
                sys.set(k * a + j, b + j, -yk);
            }
        }
    }
    sys
}

pub fn is_unstable_matrix(m: &LinFormMatrix, y: &ProjPoint) -> Result<MatrixTest> {
    if y.dim() != m.n() {
        return Err(Error::DimensionMismatch(format!("point in P_{} for forms in {} variables", y.dim(), m.n() + 1)));
    }
    if y.field() != m.field() {
        return Err(Error::MixedField);
    }
    let sys = system(m, y);
    let ker = sys.kernel_basis();
    let b = m.cols();
    let witness = ker.first().map(|k| MatrixWitness { v: k[..b].to_vec(), w: k[b..].to_vec() });
    Ok(MatrixTest { unstable: !ker.is_empty(), dim: ker.len(), witness })
}

/// Re-checks `M·v - h_y·w = 0` with `v ≠ 0`.
pub fn verify_matrix_witness(m: &LinFormMatrix, y: &ProjPoint, wit: &MatrixWitness) -> bool {
    if wit.v.len() != m.cols() || wit.w.len() != m.rows() || wit.v.iter().all(Scalar::is_zero) {
        return false;
    }
    let h = LinForm::new(y.coords().to_vec());
    m.apply(&wit.v).iter().zip(&wit.w).all(|(mv, w)| *mv == h.scale(w))
}
