//! KW varieties `C ∪ L_1 ∪ … ∪ L_s` and the converse construction of a
//! `2 x n` matrix whose rank-1 locus contains one.

use std::fmt;

use crate::exactlin::{rank_of, BinaryForm, Field, Matrix, Poly, Scalar};
use crate::error::{Error, Result};
use crate::projgeom::{LinearSubspace, ProjPoint, RationalCurve};
use crate::steiner::LinForm;
use crate::unstable::rank_one_at;

use super::kronecker::column_block;
use super::pencil::{matrix_from_pencil, Pencil};

/// `(d; n_1, …, n_s)`. Displays as `(d;s)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct KwType {
    pub d: usize,
    pub dims: Vec<usize>,
}

impl KwType {
    pub fn new(d: usize, mut dims: Vec<usize>) -> KwType {
        dims.sort_unstable();
        KwType { d, dims }
    }

    pub fn s(&self) -> usize {
        self.dims.len()
    }

    pub fn n(&self) -> usize {
        self.d + self.dims.iter().sum::<usize>()
    }

    /// `(d;n_1,…,n_s)`.
    pub fn with_dims(&self) -> String {
        let dims: Vec<String> = self.dims.iter().map(|x| x.to_string()).collect();
        if dims.is_empty() {
            format!("({})", self.d)
        } else {
            format!("({};{})", self.d, dims.join(","))
        }
    }
}

impl fmt::Display for KwType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({};{})", self.d, self.s())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearPart {
    /// Dimension of each conjugate linear space.
    pub dim: usize,
    /// Irreducible binary form of the attachment parameter(s).
    pub factor: BinaryForm,
    /// `L_i` itself for rational parts; for a factor of degree `e >= 2`
    /// the span of all `e` conjugates together with the curve part.
    pub space: LinearSubspace,
    /// Attachment point on the curve (rational parts with `d > 0`).
    pub attachment: Option<ProjPoint>,
}

impl LinearPart {
    pub fn is_rational(&self) -> bool {
        self.factor.degree() == 1
    }

    pub fn conjugates(&self) -> usize {
        self.factor.degree()
    }

    pub fn param(&self) -> Option<(Scalar, Scalar)> {
        self.factor.root()
    }
}

#[derive(Clone, Debug)]
pub struct KwVariety {
    pub n: usize,
    pub field: Field,
    pub d: usize,
    /// Degree-`d` parametrization, absent when `d = 0`.
    pub curve: Option<RationalCurve>,
    /// The distinguished point when `d = 0`.
    pub distinguished: Option<ProjPoint>,
    pub parts: Vec<LinearPart>,
    /// A `2 x n` matrix of forms whose rank-1 locus contains the variety.
    pub matrix: [Vec<LinForm>; 2],
    pub warnings: Vec<String>,
}

impl KwVariety {
    pub fn kw_type(&self) -> KwType {
        let dims = self.parts.iter().flat_map(|p| std::iter::repeat_n(p.dim, p.conjugates())).collect();
        KwType::new(self.d, dims)
    }

    pub fn is_rational(&self) -> bool {
        self.parts.iter().all(LinearPart::is_rational)
    }

    /// Structural points: curve samples and spanning sets of the rational
    /// linear parts.
    pub fn structural_points(&self) -> Vec<Vec<Scalar>> {
        let f = self.field;
        let mut out = Vec::new();
        if let Some(c) = &self.curve {
            out.push(c.eval_vec(&f.zero(), &f.one()));
            for t in 0..=self.d as i64 + 1 {
                out.push(c.eval_vec(&f.one(), &f.from_i64(t)));
            }
        }
        if let Some(y) = &self.distinguished {
            out.push(y.coords().to_vec());
        }
        for p in self.parts.iter().filter(|p| p.is_rational()) {
            let b = p.space.basis();
            out.extend(b.iter().cloned());
            let sum = b.iter().skip(1).fold(b[0].clone(), |acc, v| acc.iter().zip(v).map(|(x, y)| x + y).collect());
            out.push(sum);
        }
        out
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct KwReport {
    pub violations: Vec<String>,
}

impl KwReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

pub fn kw_validate(y: &KwVariety) -> KwReport {
    let mut v = Vec::new();
    let n = y.n;
    let ty = y.kw_type();
    if ty.n() != n {
        v.push(format!("type {} does not add up to n = {n}", ty.with_dims()));
    }
    if ty.dims.iter().any(|&k| k == 0 || k >= n) {
        v.push(format!("linear part dimensions {:?} outside 1..{}", ty.dims, n.saturating_sub(1)));
    }
    if y.d == 0 && ty.s() < 2 {
        v.push("type (0;s) needs s >= 2".into());
    }
    let spaces: Vec<&LinearSubspace> = y.parts.iter().filter(|p| p.is_rational()).map(|p| &p.space).collect();
    for p in y.parts.iter().filter(|p| p.is_rational()) {
        if p.space.dim() != p.dim as isize {
            v.push(format!("linear part has dimension {} instead of {}", p.space.dim(), p.dim));
        }
    }
    match (&y.curve, &y.distinguished) {
        (Some(c), None) if y.d > 0 => {
            if c.degree() != y.d || c.ambient_dim() != n {
                v.push("curve part has the wrong degree or ambient space".into());
            }
            match LinearSubspace::from_vectors(y.field, n, &c.span_vectors()) {
                Ok(span) => {
                    if span.dim() != y.d as isize {
                        v.push(format!("span of the curve part has dimension {}", span.dim()));
                    }
                    for p in y.parts.iter().filter(|p| p.is_rational()) {
                        match span.intersect(&p.space) {
                            Ok(meet) if meet.dim() == 0 => {
                                let q = &meet.basis_points()[0];
                                if !c.contains(q) || p.attachment.as_ref() != Some(q) {
                                    v.push(format!("attachment point {q} is not the recorded curve point"));
                                }
                            }
                            Ok(meet) => v.push(format!("span(C) meets a linear part in dimension {}", meet.dim())),
                            Err(e) => v.push(e.to_string()),
                        }
                    }
                }
                Err(e) => v.push(e.to_string()),
            }
            for (i, a) in spaces.iter().enumerate() {
                for b in &spaces[i + 1..] {
                    if a.intersect(b).map_or(true, |m| !m.is_empty()) {
                        v.push("linear parts not disjoint".into());
                    }
                }
            }
        }
        (None, Some(dp)) if y.d == 0 => {
            for s in &spaces {
                if !s.contains(dp) {
                    v.push(format!("linear part misses the distinguished point {dp}"));
                }
            }
            for (i, a) in spaces.iter().enumerate() {
                for b in &spaces[i + 1..] {
                    if a.intersect(b).map_or(true, |m| m.dim() != 0) {
                        v.push("linear parts meet outside the distinguished point".into());
                    }
                }
            }
        }
        _ => v.push("curve part and distinguished point inconsistent with d".into()),
    }
    if y.matrix[0].len() != n || y.matrix[1].len() != n {
        v.push("defining matrix is not 2 x n".into());
    } else {
        let bad = y.structural_points().into_iter().filter(|z| !rank_one_at(&y.matrix, z)).count();
        if bad > 0 {
            v.push(format!("{bad} structural points outside the rank-1 locus"));
        }
    }
    KwReport { violations: v }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Component {
    /// On the curve part, with its parameter.
    Curve(Scalar, Scalar),
    /// The distinguished point of a type `(0;s)` variety.
    Distinguished,
    /// In the `i`-th linear part.
    Linear(usize),
    /// Only certified by the rank condition (conjugate linear parts).
    RankOne(usize),
}

/// Membership of `z`, with the first component found.
pub fn kw_membership(y: &KwVariety, z: &ProjPoint) -> Option<Component> {
    if z.dim() != y.n || z.field() != y.field || !rank_one_at(&y.matrix, z.coords()) {
        return None;
    }
    if let Some(c) = &y.curve {
        if let Some((l0, l1)) = c.parameter_of(z) {
            return Some(Component::Curve(l0, l1));
        }
    }
    if y.distinguished.as_ref() == Some(z) {
        return Some(Component::Distinguished);
    }
    for (i, p) in y.parts.iter().enumerate() {
        if p.space.contains(z) {
            return Some(if p.is_rational() { Component::Linear(i) } else { Component::RankOne(i) });
        }
    }
    None
}

pub fn kw_contains(y: &KwVariety, z: &ProjPoint) -> bool {
    kw_membership(y, z).is_some()
}

/// Vectors of `space` completing `start` to a basis of it.
fn complement_in(field: Field, start: &[Scalar], space: &LinearSubspace) -> Vec<Vec<Scalar>> {
    let mut cur = vec![start.to_vec()];
    let mut out = Vec::new();
    for b in space.basis() {
        cur.push(b.clone());
        if rank_of(field, &cur) == cur.len() {
            out.push(b.clone());
        } else {
            cur.pop();
        }
    }
    out
}

/// Reparametrizes `c` so that `μ = (1:0)` maps to the parameter `u`.
/// Returns the new curve and the `GL_2` matrix taking `μ` to `λ`.
fn reparametrize(c: &RationalCurve, u: &(Scalar, Scalar)) -> Result<(RationalCurve, Matrix)> {
    let field = c.field();
    let d = c.degree();
    let (v0, v1) = if u.0.is_zero() { (field.one(), field.zero()) } else { (field.zero(), field.one()) };
    let t = Matrix::from_rows(field, &[vec![u.0.clone(), v0.clone()], vec![u.1.clone(), v1.clone()]])?;
    let l0 = Poly::new(field, vec![u.0.clone(), v0]);
    let l1 = Poly::new(field, vec![u.1.clone(), v1]);
    let n1 = c.ambient_dim() + 1;
    let mut coeffs = Matrix::zeros(field, n1, d + 1);
    for j in 0..=d {
        let mono = l0.pow(d - j).mul(&l1.pow(j));
        let cj = c.coeffs().col(j);
        for i in 0..=d {
            let m = mono.coeff(i);
            if m.is_zero() {
                continue;
            }
            for r in 0..n1 {
                let x = coeffs.get(r, i) + &(&m * &cj[r]);
                coeffs.set(r, i, x);
            }
        }
    }
    Ok((RationalCurve::new(coeffs)?, t))
}

/// The converse construction: a `2 x n` matrix whose rank-1 locus contains
/// `Y` and whose first row cuts out `y`.
pub fn matrix_from_kw(kw: &KwVariety, y: &ProjPoint) -> Result<[Vec<LinForm>; 2]> {
    let field = kw.field;
    let n = kw.n;
    if !kw.is_rational() {
        return Err(Error::InvalidInput("converse construction needs rational linear parts".into()));
    }
    if y.dim() != n || y.field() != field {
        return Err(Error::DimensionMismatch("point and variety in different spaces".into()));
    }
    let mut qcols: Vec<Vec<Scalar>> = Vec::new();
    let mut params: Vec<(Scalar, Scalar)> = Vec::new();
    if kw.d > 0 {
        let c = kw.curve.as_ref().ok_or_else(|| Error::InvalidInput("missing curve part".into()))?;
        let u = c.parameter_of(y).ok_or_else(|| Error::Hypothesis(format!("{y} is not on the curve part")))?;
        let (c2, t) = reparametrize(c, &u)?;
        let tinv = t.inverse()?;
        let d = kw.d;
        for i in 0..=d {
            let col = c2.coeffs().col(d - i);
            qcols.push(if i % 2 == 0 { col } else { col.iter().map(|x| -x).collect() });
        }
        for p in &kw.parts {
            let (a0, a1) = p.param().expect("rational part");
            let mu = tinv.mul_vec(&[a0.clone(), a1.clone()])?;
            if mu[1].is_zero() {
                return Err(Error::Hypothesis(format!("{y} is an attachment point")));
            }
            let at = c.eval_vec(&a0, &a1);
            qcols.extend(complement_in(field, &at, &p.space));
            params.push((mu[0].clone(), mu[1].clone()));
        }
    } else {
        let dp = kw.distinguished.as_ref().ok_or_else(|| Error::InvalidInput("missing distinguished point".into()))?;
        if dp != y {
            return Err(Error::Hypothesis(format!("{y} is not the distinguished point {dp}")));
        }
        qcols.push(y.coords().to_vec());
        for (i, p) in kw.parts.iter().enumerate() {
            qcols.extend(complement_in(field, y.coords(), &p.space));
            params.push((field.from_i64(i as i64), field.one()));
        }
        if let Field::Prime(p) = field {
            if kw.parts.len() as u64 > p {
                return Err(Error::InvalidInput("not enough parameters in the prime field".into()));
            }
        }
    }
    if qcols.len() != n + 1 {
        return Err(Error::Hypothesis("components do not span the ambient space".into()));
    }
    let q = Matrix::from_cols(field, &qcols, n + 1)?;
    let qinv = q.inverse().map_err(|_| Error::Hypothesis("components do not span the ambient space".into()))?;
    let mut blocks = vec![column_block(field, kw.d)];
    for (p, (a, b)) in kw.parts.iter().zip(&params) {
        let id = Matrix::identity(field, p.dim);
        blocks.push(Pencil::new(id.scale(b), id.scale(&-a))?);
    }
    let k = Pencil::block_diag(field, &blocks);
    let nn = k.transform(&Matrix::identity(field, n), &qinv)?;
    matrix_from_pencil(&nn)
}
