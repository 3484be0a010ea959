use std::collections::HashSet;

use crate::exactlin::{rank_of, Field, Matrix, Scalar};
use crate::error::{Error, Result};

use super::point::ProjPoint;

/// An ordered list of distinct points of the dual space `P_n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arrangement {
    n: usize,
    field: Field,
    points: Vec<ProjPoint>,
    span_dim: usize,
}

impl Arrangement {
    pub fn new(points: Vec<ProjPoint>) -> Result<Arrangement> {
        let first = points.first().ok_or_else(|| Error::InvalidInput("arrangement needs at least one point".into()))?;
        let (n, field) = (first.dim(), first.field());
        if points.iter().any(|p| p.dim() != n) {
            return Err(Error::InvalidInput("points of different dimensions".into()));
        }
        if points.iter().any(|p| p.field() != field) {
            return Err(Error::MixedField);
        }
        let mut seen = HashSet::new();
        for p in &points {
            if !seen.insert(p) {
                return Err(Error::InvalidInput(format!("duplicate point {p}")));
            }
        }
        let span_dim = span_dim(&points);
        Ok(Arrangement { n, field, points, span_dim })
    }

    pub fn from_i64(field: Field, pts: &[&[i64]]) -> Result<Arrangement> {
        Arrangement::new(pts.iter().map(|c| ProjPoint::from_i64(field, c)).collect())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[ProjPoint] {
        &self.points
    }

    pub fn span_dim(&self) -> usize {
        self.span_dim
    }

    pub fn is_nondegenerate(&self) -> bool {
        self.span_dim == self.n
    }

    pub fn contains(&self, p: &ProjPoint) -> bool {
        self.points.contains(p)
    }

    pub fn coord_matrix(&self) -> Matrix {
        let rows: Vec<Vec<Scalar>> = self.points.iter().map(|p| p.coords().to_vec()).collect();
        Matrix::from_rows(self.field, &rows).expect("homogeneous points")
    }

    /// Every subset of at most `n+1` points is linearly independent.
    pub fn general_position(&self) -> bool {
        let k = (self.n + 1).min(self.len());
        combinations(self.len(), k).all(|s| self.subset_rank(&s) == k)
    }

    pub fn subset_rank(&self, idx: &[usize]) -> usize {
        let rows: Vec<Vec<Scalar>> = idx.iter().map(|&i| self.points[i].coords().to_vec()).collect();
        rank_of(self.field, &rows)
    }

    /// `(n+1)`-subsets that fail to be independent, with their projective
    /// span dimension.
    pub fn secant_defects(&self) -> Vec<(Vec<usize>, usize)> {
        if self.len() < self.n + 1 {
            return Vec::new();
        }
        combinations(self.len(), self.n + 1)
            .filter_map(|s| {
                let r = self.subset_rank(&s);
                (r <= self.n).then(|| (s, r - 1))
            })
            .collect()
    }

    pub fn quadric_space(&self) -> QuadricSpace {
        quadric_space(self.n, self.field, &self.points)
    }

    /// Reduces every point modulo `p`, rejecting primes where a point
    /// vanishes, two points collide or the span drops.
    pub fn reduce_mod_p(&self, p: u64) -> Result<Arrangement> {
        if !self.field.is_rational() {
            return Err(Error::InvalidInput("only rational arrangements can be reduced".into()));
        }
        let pts = self.points.iter().map(|q| q.reduce_mod_p(p)).collect::<Result<Vec<_>>>()?;
        let mut seen = HashSet::new();
        for (i, q) in pts.iter().enumerate() {
            if !seen.insert(q.clone()) {
                return Err(Error::BadPrime { p, reason: format!("{} collides with another point", self.points[i]) });
            }
        }
        let red = Arrangement::new(pts)?;
        if red.span_dim != self.span_dim {
            return Err(Error::BadPrime {
                p,
                reason: format!("span drops from {} to {}", self.span_dim, red.span_dim),
            });
        }
        Ok(red)
    }

    pub fn with_point(&self, p: ProjPoint) -> Result<Arrangement> {
        let mut pts = self.points.clone();
        pts.push(p);
        Arrangement::new(pts)
    }
}

/// Projective dimension of the span of `points`.
pub fn span_dim(points: &[ProjPoint]) -> usize {
    let Some(first) = points.first() else { return 0 };
    let rows: Vec<Vec<Scalar>> = points.iter().map(|p| p.coords().to_vec()).collect();
    rank_of(first.field(), &rows).saturating_sub(1)
}

/// Degree-2 monomials `z_i z_j` (`i <= j`) in degrevlex order:
/// `z0², z0z1, z1², z0z2, ...`.
pub fn quadric_monomials(n: usize) -> Vec<(usize, usize)> {
    (0..=n).flat_map(|j| (0..=j).map(move |i| (i, j))).collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadricSpace {
    pub monomials: Vec<(usize, usize)>,
    pub veronese_rank: usize,
    pub basis: Vec<Vec<Scalar>>,
}

impl QuadricSpace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

pub fn quadric_space(n: usize, field: Field, points: &[ProjPoint]) -> QuadricSpace {
    let monomials = quadric_monomials(n);
    let rows: Vec<Vec<Scalar>> =
        points.iter().map(|p| monomials.iter().map(|&(i, j)| &p.coords()[i] * &p.coords()[j]).collect()).collect();
    let m = if rows.is_empty() {
        Matrix::zeros(field, 0, monomials.len())
    } else {
        Matrix::from_rows(field, &rows).expect("homogeneous")
    };
    let rr = m.rref();
    let basis = crate::exactlin::matrix::kernel_from_rref(&rr, monomials.len(), field);
    QuadricSpace { monomials, veronese_rank: rr.rank, basis }
}

/// Lexicographic `k`-subsets of `0..n`.
pub fn combinations(n: usize, k: usize) -> impl Iterator<Item = Vec<usize>> {
    let mut cur: Option<Vec<usize>> = (k <= n).then(|| (0..k).collect());
    std::iter::from_fn(move || {
        let out = cur.clone()?;
        let c = cur.as_mut().expect("present");
        let mut i = k;
        loop {
            if i == 0 {
                cur = None;
                break;
            }
            i -= 1;
            if c[i] < n - k + i {
                c[i] += 1;
                for j in i + 1..k {
                    c[j] = c[j - 1] + 1;
                }
                break;
            }
        }
        Some(out)
    })
}
