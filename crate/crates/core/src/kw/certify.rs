//! KW certificates read off the canonical form of the pencil attached to an
//! instability witness.

use crate::exactlin::{Matrix, Scalar};
use crate::error::{Error, Result};
use crate::projgeom::{Arrangement, LinearSubspace, ProjPoint, RationalCurve};
use crate::steiner::LinForm;
use crate::unstable::{is_unstable_sections, rank_one_at, witness_matrix};

use super::kronecker::{kronecker_form, BlockKind};
use super::pencil::pencil_from_matrix;
use super::variety::{kw_validate, matrix_from_kw, KwVariety, LinearPart};

fn proportional(a: &[Scalar], b: &[Scalar]) -> bool {
    let field = a[0].field();
    crate::exactlin::rank_of(field, &[a.to_vec(), b.to_vec()]) == 1
}

/// Certificate for an unstable point `y ∉ Z`.
pub fn kw_from_unstable(z: &Arrangement, y: &ProjPoint) -> Result<KwVariety> {
    let t = is_unstable_sections(z, y)?;
    let m = witness_matrix(&t).ok_or_else(|| Error::Hypothesis(format!("{y} is not unstable")))?;
    let kw = kw_from_matrix(&m, y)?;
    if let Some(p) = z.points().iter().find(|p| !rank_one_at(&kw.matrix, p.coords())) {
        return Err(Error::Internal(format!("{p} is outside the rank-1 locus of the certificate")));
    }
    Ok(kw)
}

/// Reads the KW variety off a `2 x n` matrix `[h; g]` with `h` cutting out
/// `y`.
pub fn kw_from_matrix(m: &[Vec<LinForm>; 2], y: &ProjPoint) -> Result<KwVariety> {
    let n = y.dim();
    let field = y.field();
    let pencil = pencil_from_matrix(m)?;
    if pencil.rows() != n {
        return Err(Error::DimensionMismatch("matrix and point in different spaces".into()));
    }
    let kf = kronecker_form(&pencil)?;
    let offsets = kf.col_offsets();
    let mut cols_eps = Vec::new();
    let mut warnings = Vec::new();
    for b in &kf.blocks {
        match &b.kind {
            BlockKind::Column { eps } => cols_eps.push(*eps),
            BlockKind::Row { .. } => {
                return Err(Error::Inconsistent("pencil has a row minimal index; [h; g] is degenerate".into()))
            }
            BlockKind::Regular { .. } => {}
        }
    }
    if cols_eps.len() != 1 {
        return Err(Error::Inconsistent(format!("expected one singular block, found {}", cols_eps.len())));
    }
    let d = cols_eps[0];
    let q = &kf.q;
    let (curve, distinguished) = if d > 0 {
        // c_{d-i} = (-1)^i Q[:, i]
        let cols: Vec<Vec<Scalar>> = (0..=d)
            .map(|j| {
                let i = d - j;
                let c = q.col(i);
                if i % 2 == 0 { c } else { c.iter().map(|x| -x).collect() }
            })
            .collect();
        let curve = RationalCurve::new(Matrix::from_cols(field, &cols, n + 1)?)?;
        if !proportional(&curve.eval_vec(&field.one(), &field.zero()), y.coords()) {
            return Err(Error::Internal("curve part does not pass through y at (1:0)".into()));
        }
        (Some(curve), None)
    } else {
        if !proportional(&q.col(0), y.coords()) {
            return Err(Error::Internal("singular column does not give y".into()));
        }
        (None, Some(y.clone()))
    };

    let mut parts = Vec::new();
    for (b, &o) in kf.blocks.iter().zip(&offsets) {
        let BlockKind::Regular { factor, irreducible, .. } = &b.kind else { continue };
        let k = b.cols();
        let mut vecs: Vec<Vec<Scalar>> = (o..o + k).map(|j| q.col(j)).collect();
        let e = factor.degree();
        if !irreducible {
            warnings.push(format!("factor {factor} could not be split; kept as one block"));
        }
        let mut attachment = None;
        if e == 1 {
            let (a0, a1) = factor.root().expect("linear");
            let at = match &curve {
                Some(c) => {
                    let v = c.eval_vec(&a0, &a1);
                    attachment = Some(ProjPoint::new(v.clone())?);
                    v
                }
                None => y.coords().to_vec(),
            };
            vecs.insert(0, at);
        } else {
            warnings.push(format!("attachment parameters of {factor} are irrational; conjugate parts kept together"));
            match &curve {
                Some(c) => vecs.extend(c.span_vectors()),
                None => vecs.push(y.coords().to_vec()),
            }
        }
        let space = LinearSubspace::from_vectors(field, n, &vecs)?;
        parts.push(LinearPart { dim: k / e, factor: factor.clone(), space, attachment });
    }
    let s: usize = parts.iter().map(LinearPart::conjugates).sum();
    if d == 0 && s < 2 {
        return Err(Error::Inconsistent(
            "type (0;1): the regular part is a single nontrivial Jordan block, impossible for nondegenerate Z".into(),
        ));
    }
    let mut kw = KwVariety { n, field, d, curve, distinguished, parts, matrix: m.clone(), warnings };
    let report = kw_validate(&kw);
    if !report.ok() {
        let rank_only = report.violations.iter().all(|v| v.contains("rank-1 locus"));
        if rank_only && kw.is_rational() {
            // Jordan blocks shrink the rank-1 locus of the witness; the
            // converse construction restores the full linear parts.
            kw.matrix = matrix_from_kw(&kw, y)?;
            kw.warnings.push("witness matrix has nontrivial Jordan blocks; defining matrix rebuilt".into());
            let again = kw_validate(&kw);
            if !again.ok() {
                return Err(Error::Internal(again.violations.join("; ")));
            }
        } else {
            return Err(Error::Internal(report.violations.join("; ")));
        }
    }
    Ok(kw)
}
