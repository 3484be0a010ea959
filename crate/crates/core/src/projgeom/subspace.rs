use crate::exactlin::{Field, Matrix, Scalar};
use crate::error::{Error, Result};

use super::point::ProjPoint;

/// A projective linear subspace of `P_n`, stored by the RREF of a spanning
/// set of coordinate vectors. The empty subspace has no basis rows.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LinearSubspace {
    n: usize,
    field: Field,
    basis: Vec<Vec<Scalar>>,
}

impl LinearSubspace {
    pub fn from_vectors(field: Field, n: usize, vectors: &[Vec<Scalar>]) -> Result<LinearSubspace> {
        if vectors.iter().any(|v| v.len() != n + 1) {
            return Err(Error::DimensionMismatch("spanning vector of the wrong length".into()));
        }
        if vectors.is_empty() {
            return Ok(LinearSubspace { n, field, basis: Vec::new() });
        }
        let rr = Matrix::from_rows(field, vectors)?.rref();
        let basis = (0..rr.rank).map(|i| rr.matrix.row(i).to_vec()).collect();
        Ok(LinearSubspace { n, field, basis })
    }

    pub fn span(points: &[ProjPoint]) -> Result<LinearSubspace> {
        let first = points.first().ok_or_else(|| Error::InvalidInput("span of no points".into()))?;
        let vecs: Vec<Vec<Scalar>> = points.iter().map(|p| p.coords().to_vec()).collect();
        LinearSubspace::from_vectors(first.field(), first.dim(), &vecs)
    }

    /// The common zero locus of linear equations (rows of coefficients).
    pub fn from_equations(field: Field, n: usize, eqs: &[Vec<Scalar>]) -> Result<LinearSubspace> {
        if eqs.is_empty() {
            return Ok(LinearSubspace::whole(field, n));
        }
        let m = Matrix::from_rows(field, eqs)?;
        if m.cols() != n + 1 {
            return Err(Error::DimensionMismatch("equation of the wrong length".into()));
        }
        LinearSubspace::from_vectors(field, n, &m.kernel_basis())
    }

    pub fn whole(field: Field, n: usize) -> LinearSubspace {
        LinearSubspace { n, field, basis: Matrix::identity(field, n + 1).row_vecs() }
    }

    pub fn ambient_dim(&self) -> usize {
        self.n
    }

    pub fn field(&self) -> Field {
        self.field
    }

    /// Projective dimension; `-1` for the empty subspace.
    pub fn dim(&self) -> isize {
        self.basis.len() as isize - 1
    }

    pub fn vector_dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<Scalar>] {
        &self.basis
    }

    pub fn basis_points(&self) -> Vec<ProjPoint> {
        self.basis.iter().map(|v| ProjPoint::new(v.clone()).expect("basis rows are nonzero")).collect()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn contains_vector(&self, v: &[Scalar]) -> bool {
        if v.iter().all(Scalar::is_zero) {
            return true;
        }
        if self.basis.is_empty() {
            return false;
        }
        let mut rows = self.basis.clone();
        rows.push(v.to_vec());
        Matrix::from_rows(self.field, &rows).map(|m| m.rank() == self.basis.len()).unwrap_or(false)
    }

    pub fn contains(&self, p: &ProjPoint) -> bool {
        p.dim() == self.n && self.contains_vector(p.coords())
    }

    pub fn contains_subspace(&self, o: &LinearSubspace) -> bool {
        o.basis.iter().all(|v| self.contains_vector(v))
    }

    /// Linear equations cutting out the subspace.
    pub fn equations(&self) -> Vec<Vec<Scalar>> {
        if self.basis.is_empty() {
            return Matrix::identity(self.field, self.n + 1).row_vecs();
        }
        Matrix::from_rows(self.field, &self.basis).expect("rectangular").kernel_basis()
    }

    pub fn intersect(&self, o: &LinearSubspace) -> Result<LinearSubspace> {
        if self.n != o.n || self.field != o.field {
            return Err(Error::DimensionMismatch("subspaces of different ambient spaces".into()));
        }
        let mut eqs = self.equations();
        eqs.extend(o.equations());
        LinearSubspace::from_equations(self.field, self.n, &eqs)
    }

    pub fn join(&self, o: &LinearSubspace) -> Result<LinearSubspace> {
        if self.n != o.n || self.field != o.field {
            return Err(Error::DimensionMismatch("subspaces of different ambient spaces".into()));
        }
        let mut rows = self.basis.clone();
        rows.extend(o.basis.iter().cloned());
        LinearSubspace::from_vectors(self.field, self.n, &rows)
    }

    /// Coordinates of `v` with respect to the stored basis, if `v` lies in
    /// the subspace.
    pub fn local_coords(&self, v: &[Scalar]) -> Option<Vec<Scalar>> {
        if self.basis.is_empty() {
            return None;
        }
        let m = Matrix::from_rows(self.field, &self.basis).ok()?.transpose();
        m.solve(v).ok()?.particular
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_lines_in_a_plane_meet_in_a_point() {
        let f = Field::Rational;
        let a = LinearSubspace::span(&[ProjPoint::from_i64(f, &[1, 0, 0]), ProjPoint::from_i64(f, &[0, 1, 0])])
            .unwrap();
        let b = LinearSubspace::span(&[ProjPoint::from_i64(f, &[1, 1, 1]), ProjPoint::from_i64(f, &[0, 0, 1])])
            .unwrap();
        let m = a.intersect(&b).unwrap();
        assert_eq!(m.dim(), 0);
        assert!(m.contains(&ProjPoint::from_i64(f, &[1, 1, 0])));
        assert_eq!(a.join(&b).unwrap().dim(), 2);
    }

    #[test]
    fn equations_round_trip() {
        let f = Field::Prime(11);
        let l = LinearSubspace::from_equations(f, 3, &[vec![f.zero(), f.one(), f.zero(), f.zero()]]).unwrap();
        assert_eq!(l.dim(), 2);
        let back = LinearSubspace::from_equations(f, 3, &l.equations()).unwrap();
        assert_eq!(back, l);
    }
}
