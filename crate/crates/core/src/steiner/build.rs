use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::exactlin::{complete_basis, Field, Matrix, Scalar};
use crate::error::{Error, Result};
use crate::projgeom::{Arrangement, ProjPoint};

use super::forms::{LinForm, LinFormMatrix};

/// The `(ℓ-n-1) x (ℓ-1)` matrix of linear forms presenting `F_Z`, with
/// the relation coefficients it was built from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SteinerMatrix {
    pub matrix: LinFormMatrix,
    /// Column points `z_1..z_{ℓ-1}` in column order.
    pub columns: Vec<ProjPoint>,
    /// The dropped point `z_ℓ`.
    pub dropped: ProjPoint,
    /// Relation rows `β^{(j)}` over all ℓ points, last entry `-1`.
    pub beta: Matrix,
    /// Original index of each column point followed by the dropped index.
    pub order: Vec<usize>,
    pub warnings: Vec<String>,
}

impl SteinerMatrix {
    pub fn a(&self) -> usize {
        self.matrix.rows()
    }

    pub fn b(&self) -> usize {
        self.matrix.cols()
    }

    pub fn n(&self) -> usize {
        self.matrix.n()
    }

    pub fn field(&self) -> Field {
        self.matrix.field()
    }

    /// All ℓ points in the matrix's order (columns, then the dropped one).
    pub fn points(&self) -> Vec<ProjPoint> {
        let mut v = self.columns.clone();
        v.push(self.dropped.clone());
        v
    }
}

fn form_of(p: &ProjPoint) -> LinForm {
    LinForm::new(p.coords().to_vec())
}

/// Steiner matrix of a nondegenerate arrangement.
pub fn build_steiner(z: &Arrangement) -> Result<SteinerMatrix> {
    let n = z.n();
    if z.len() <= n {
        return Err(Error::InvalidInput(format!("need more than n = {n} points, got {}", z.len())));
    }
    if !z.is_nondegenerate() {
        return Err(Error::Degenerate { span: z.span_dim(), n });
    }
    build_relations(z.points())
}

/// Relation-basis construction for any point list whose last point lies in
/// the span of the others after reordering. Used directly for degenerate
/// lists in adapted coordinates.
pub(crate) fn build_relations(points: &[ProjPoint]) -> Result<SteinerMatrix> {
    let l = points.len();
    let field = points[0].field();
    let n = points[0].dim();
    let coords = |idx: &[usize]| -> Vec<Vec<Scalar>> { idx.iter().map(|&i| points[i].coords().to_vec()).collect() };
    let all: Vec<usize> = (0..l).collect();
    let full_rank = crate::exactlin::rank_of(field, &coords(&all));
    // a coloop is a point outside the span of the others
    let movable = |i: usize| {
        let others: Vec<usize> = (0..l).filter(|&j| j != i).collect();
        crate::exactlin::rank_of(field, &coords(&others)) == full_rank
    };
    let mut warnings = Vec::new();
    let dropped = if movable(l - 1) {
        l - 1
    } else {
        let k = (0..l).find(|&i| movable(i)).ok_or_else(|| {
            Error::Hypothesis("points are linearly independent; no relations exist".into())
        })?;
        warnings.push(format!("last point is not in the span of the others; dropped point moved from index {} to {k}", l - 1));
        k
    };
    let mut order: Vec<usize> = (0..l).filter(|&i| i != dropped).collect();
    order.push(dropped);
    let cols = coords(&order[..l - 1]);
    let zmat = Matrix::from_cols(field, &cols, n + 1)?;
    let alpha = zmat
        .solve(points[dropped].coords())?
        .particular
        .ok_or_else(|| Error::Internal("dropped point not in the span".into()))?;
    let kernel = zmat.kernel_basis();
    let a = kernel.len() + 1;
    if l == full_rank {
        warnings.push("no relations: the matrix has no rows".into());
    }
    let mut beta_rows: Vec<Vec<Scalar>> = Vec::with_capacity(a);
    let mut first = alpha.clone();
    first.push(-field.one());
    beta_rows.push(first);
    for k in &kernel {
        let mut row: Vec<Scalar> = alpha.iter().zip(k).map(|(x, y)| x + y).collect();
        row.push(-field.one());
        beta_rows.push(row);
    }
    let beta = Matrix::from_rows(field, &beta_rows)?;
    let mut m = LinFormMatrix::zeros(field, n, a, l - 1);
    for (j, row) in beta_rows.iter().enumerate() {
        for i in 0..l - 1 {
            m.set(j, i, &form_of(&points[order[i]]).scale(&row[i]));
        }
    }
    Ok(SteinerMatrix {
        matrix: m,
        columns: order[..l - 1].iter().map(|&i| points[i].clone()).collect(),
        dropped: points[dropped].clone(),
        beta,
        order,
        warnings,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SteinerReport {
    /// Entries `(j, i)` that are not multiples of `f_i`.
    pub divisibility_violations: Vec<(usize, usize)>,
    /// Rows whose forms do not sum to `f_ℓ`.
    pub row_sum_violations: Vec<usize>,
    /// Rows whose `β` is not a relation among the points.
    pub relation_violations: Vec<usize>,
    pub expected_rank: usize,
    pub sampled_ranks: Vec<usize>,
}

impl SteinerReport {
    pub fn ok(&self) -> bool {
        self.divisibility_violations.is_empty()
            && self.row_sum_violations.is_empty()
            && self.relation_violations.is_empty()
            && self.sampled_ranks.iter().all(|&r| r == self.expected_rank)
    }
}

/// Re-checks the structural invariants of a Steiner matrix.
pub fn verify_steiner(s: &SteinerMatrix) -> SteinerReport {
    let m = &s.matrix;
    let field = m.field();
    let mut report = SteinerReport {
        divisibility_violations: Vec::new(),
        row_sum_violations: Vec::new(),
        relation_violations: Vec::new(),
        expected_rank: m.rows(),
        sampled_ranks: Vec::new(),
    };
    for j in 0..m.rows() {
        let mut sum = LinForm::zero(field, m.n());
        for i in 0..m.cols() {
            let e = m.entry(j, i);
            if e.ratio_to(&form_of(&s.columns[i])).is_none() {
                report.divisibility_violations.push((j, i));
            }
            sum = sum.add(&e);
        }
        if sum != form_of(&s.dropped) {
            report.row_sum_violations.push(j);
        }
        let pts = s.points();
        let mut rel = vec![field.zero(); m.n() + 1];
        for (i, p) in pts.iter().enumerate() {
            for (k, c) in p.coords().iter().enumerate() {
                rel[k] = &rel[k] + &(s.beta.get(j, i) * c);
            }
        }
        if rel.iter().any(|x| !x.is_zero()) {
            report.relation_violations.push(j);
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x57e1);
    for _ in 0..5 {
        let x: Vec<Scalar> = (0..=m.n())
            .map(|_| match field {
                Field::Rational => field.from_i64(rng.gen_range(-1000..=1000)),
                Field::Prime(p) => field.from_i64(rng.gen_range(0..p) as i64),
            })
            .collect();
        report.sampled_ranks.push(m.eval(&x).rank());
    }
    report
}

/// Data for an arrangement spanning a proper subspace `P_k ⊂ P_n`.
#[derive(Clone, Debug)]
pub struct DegenerateSplit {
    pub k: usize,
    /// Dual change of basis `G` with `G z` supported on the first `k+1`
    /// coordinates for every `z`.
    pub change: Matrix,
    pub local: Arrangement,
    /// Steiner matrix of the arrangement inside its span, when it has more
    /// than `k+1` points.
    pub local_steiner: Option<SteinerMatrix>,
    /// Number of `O(-1)` summands.
    pub trivial_summands: usize,
    /// Relation matrix built from the adapted ambient points; its entries
    /// only involve `x_0..x_k`.
    pub ambient: SteinerMatrix,
}

pub fn degenerate_split(z: &Arrangement) -> Result<DegenerateSplit> {
    let n = z.n();
    let k = z.span_dim();
    if k == n {
        return Err(Error::Nondegenerate);
    }
    let field = z.field();
    let rr = z.coord_matrix().rref();
    let span: Vec<Vec<Scalar>> = (0..rr.rank).map(|i| rr.matrix.row(i).to_vec()).collect();
    let mut basis = span.clone();
    basis.extend(complete_basis(field, &span, n + 1));
    let b = Matrix::from_cols(field, &basis, n + 1)?;
    let g = b.inverse()?;
    let adapted: Vec<ProjPoint> =
        z.points().iter().map(|p| ProjPoint::new(g.mul_vec(p.coords()).expect("shape"))).collect::<Result<_>>()?;
    let local_pts: Vec<ProjPoint> =
        adapted.iter().map(|p| ProjPoint::new(p.coords()[..=k].to_vec())).collect::<Result<_>>()?;
    let local = Arrangement::new(local_pts)?;
    let local_steiner = if local.len() > k + 1 { Some(build_steiner(&local)?) } else { None };
    if z.len() <= k + 1 {
        return Err(Error::Hypothesis("points are independent; no relation matrix exists".into()));
    }
    let ambient = build_relations(&adapted)?;
    Ok(DegenerateSplit { k, change: g, local, local_steiner, trivial_summands: n - k, ambient })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn four_points_in_the_plane() {
        let f = Field::Rational;
        let z = Arrangement::from_i64(f, &[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1], &[1, 1, 1]]).unwrap();
        let s = build_steiner(&z).unwrap();
        assert_eq!((s.a(), s.b()), (1, 3));
        for i in 0..3 {
            assert_eq!(s.matrix.entry(0, i), LinForm::var(f, 2, i));
        }
        assert!(verify_steiner(&s).ok());
    }

    #[test]
    fn coloop_is_not_dropped() {
        let f = Field::Rational;
        // the last point is off the line spanned by the others
        let z = Arrangement::from_i64(f, &[&[1, 0, 0], &[0, 1, 0], &[1, 1, 0], &[0, 0, 1]]).unwrap();
        let s = build_steiner(&z).unwrap();
        assert_ne!(s.dropped, ProjPoint::from_i64(f, &[0, 0, 1]));
        assert_eq!(s.a(), 1);
        assert!(verify_steiner(&s).ok());
        assert!(!s.warnings.is_empty());
    }

    #[test]
    fn corrupted_entry_is_reported() {
        let f = Field::Rational;
        let z = Arrangement::from_i64(f, &[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1], &[1, 1, 1], &[1, 2, 3]]).unwrap();
        let mut s = build_steiner(&z).unwrap();
        s.matrix.set(0, 1, &LinForm::var(f, 2, 0));
        let r = verify_steiner(&s);
        assert!(r.divisibility_violations.contains(&(0, 1)));
        assert!(!r.ok());
    }

    #[test]
    fn degenerate_input_errors() {
        let f = Field::Rational;
        let z = Arrangement::from_i64(f, &[&[1, 0, 0], &[0, 1, 0], &[1, 1, 0], &[1, 2, 0]]).unwrap();
        assert!(matches!(build_steiner(&z), Err(Error::Degenerate { span: 1, n: 2 })));
        let split = degenerate_split(&z).unwrap();
        assert_eq!(split.k, 1);
        assert_eq!(split.trivial_summands, 1);
        let local = split.local_steiner.unwrap();
        assert_eq!((local.a(), local.b()), (2, 3));
        assert!(split.ambient.matrix.slices()[2].is_zero());
    }
}
