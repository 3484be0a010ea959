//! Rational normal curves given by degree-`d` parametrizations.

use crate::exactlin::{Field, Matrix, Scalar};
use crate::error::{Error, Result};

use super::point::ProjPoint;

/// A map `P^1 -> P_n`, `λ ↦ Σ_j c_j λ0^{d-j} λ1^j`, with the coefficient
/// vectors `c_j` stored as the columns of an `(n+1) x (d+1)` matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalCurve {
    coeffs: Matrix,
}

impl RationalCurve {
    pub fn new(coeffs: Matrix) -> Result<RationalCurve> {
        if coeffs.cols() == 0 || coeffs.rows() < coeffs.cols() {
            return Err(Error::DimensionMismatch("curve coefficient matrix has the wrong shape".into()));
        }
        if coeffs.rank() != coeffs.cols() {
            return Err(Error::Hypothesis("curve coefficients do not span a d-plane".into()));
        }
        Ok(RationalCurve { coeffs })
    }

    pub fn degree(&self) -> usize {
        self.coeffs.cols() - 1
    }

    pub fn ambient_dim(&self) -> usize {
        self.coeffs.rows() - 1
    }

    pub fn field(&self) -> Field {
        self.coeffs.field()
    }

    pub fn coeffs(&self) -> &Matrix {
        &self.coeffs
    }

    pub fn moments(&self, l0: &Scalar, l1: &Scalar) -> Vec<Scalar> {
        let d = self.degree() as u32;
        (0..=d).map(|j| &l0.pow(d - j) * &l1.pow(j)).collect()
    }

    pub fn eval_vec(&self, l0: &Scalar, l1: &Scalar) -> Vec<Scalar> {
        self.coeffs.mul_vec(&self.moments(l0, l1)).expect("shape")
    }

    pub fn eval(&self, l0: &Scalar, l1: &Scalar) -> Result<ProjPoint> {
        ProjPoint::new(self.eval_vec(l0, l1))
    }

    /// Parameter of `p` on the curve, if it lies on it.
    pub fn parameter_of(&self, p: &ProjPoint) -> Option<(Scalar, Scalar)> {
        let m = self.coeffs.solve(p.coords()).ok()?.particular?;
        let d = self.degree();
        if d == 0 {
            return Some((self.field().one(), self.field().zero()));
        }
        // moment vectors: m_i m_{j+1} = m_{i+1} m_j
        for i in 0..d {
            for j in 0..d {
                if &m[i] * &m[j + 1] != &m[i + 1] * &m[j] {
                    return None;
                }
            }
        }
        if !m[0].is_zero() {
            Some((m[0].clone(), m[1].clone()))
        } else {
            Some((m[d - 1].clone(), m[d].clone()))
        }
    }

    pub fn contains(&self, p: &ProjPoint) -> bool {
        self.parameter_of(p).is_some()
    }

    /// Linear span of the curve as coordinate vectors.
    pub fn span_vectors(&self) -> Vec<Vec<Scalar>> {
        (0..self.coeffs.cols()).map(|j| self.coeffs.col(j)).collect()
    }
}

/// Result of fitting a rational normal curve through `d+3` points.
#[derive(Clone, Debug)]
pub struct CurveThrough {
    pub curve: RationalCurve,
    /// Parameter `(λ0:λ1)` of each input point.
    pub params: Vec<(Scalar, Scalar)>,
}

/// The unique rational normal curve of degree `d` through `d+3` points in
/// general position inside a `d`-plane. Returns `None` if the points are
/// not in general position in their span.
pub fn rnc_through(points: &[ProjPoint]) -> Option<CurveThrough> {
    let m = points.len();
    if m < 4 {
        return None;
    }
    let d = m - 3;
    let field = points[0].field();
    let n1 = points[0].dim() + 1;
    let base: Vec<Vec<Scalar>> = points[..=d].iter().map(|p| p.coords().to_vec()).collect();
    let t = Matrix::from_cols(field, &base, n1).ok()?;
    if t.rank() != d + 1 {
        return None;
    }
    let a = t.solve(points[d + 1].coords()).ok()?.particular?;
    let b = t.solve(points[d + 2].coords()).ok()?.particular?;
    if a.iter().chain(&b).any(Scalar::is_zero) {
        return None;
    }
    // in the basis a_i p_i the points are e_i, (1..1) and q
    let q: Vec<Scalar> = a.iter().zip(&b).map(|(ai, bi)| bi.div(ai).expect("nonzero")).collect();
    for i in 0..=d {
        for j in 0..i {
            if q[i] == q[j] {
                return None;
            }
        }
    }
    let s: Vec<Scalar> = q.iter().map(|x| x.inv().expect("nonzero")).collect();
    let mut coeffs = Matrix::zeros(field, n1, d + 1);
    for i in 0..=d {
        // φ_i = Π_{j≠i} (λ1 − s_j λ0), coefficients in λ1 ascending powers
        let mut poly = vec![field.one()];
        for (j, sj) in s.iter().enumerate() {
            if j == i {
                continue;
            }
            let mut next = vec![field.zero(); poly.len() + 1];
            for (k, c) in poly.iter().enumerate() {
                next[k + 1] = &next[k + 1] + c;
                next[k] = &next[k] - &(c * sj);
            }
            poly = next;
        }
        for (j, c) in poly.iter().enumerate() {
            for r in 0..n1 {
                let add = &(c * &a[i]) * &points[i].coords()[r];
                let cur = coeffs.get(r, j).clone();
                coeffs.set(r, j, &cur + &add);
            }
        }
    }
    let curve = RationalCurve::new(coeffs).ok()?;
    let mut params: Vec<(Scalar, Scalar)> = s.iter().map(|si| (field.one(), si.clone())).collect();
    params.push((field.zero(), field.one()));
    params.push((field.one(), field.zero()));
    Some(CurveThrough { curve, params })
}
