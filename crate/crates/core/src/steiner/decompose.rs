//! Filtration of `F_Z` along a KW variety containing `Z`: one piece per
//! linear part plus one for the curve part, with their resolution shapes.

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::exactlin::Scalar;
use crate::kw::{kw_validate, KwVariety};
use crate::projgeom::{Arrangement, LinearSubspace, ProjPoint};

use super::hilbert::ResolutionData;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PieceKind {
    Curve,
    Linear,
}

#[derive(Clone, Debug)]
pub struct Piece {
    pub kind: PieceKind,
    /// Path such as `C`, `L1` or `L1/C` for refined pieces.
    pub label: String,
    pub points: Vec<ProjPoint>,
    /// `ℓ_i` for a linear part, `ℓ_0 + s` for the curve part.
    pub length: usize,
    pub data: ResolutionData,
    /// Set when the attachment point of a linear part lies in `Z`.
    pub summand: bool,
    pub span: Option<LinearSubspace>,
}

#[derive(Clone, Debug)]
pub struct Decomposition {
    pub n: usize,
    pub total: ResolutionData,
    pub pieces: Vec<Piece>,
    pub warnings: Vec<String>,
}

impl Decomposition {
    pub fn additive(&self) -> bool {
        let r: usize = self.pieces.iter().map(|p| p.data.rank).sum();
        let c: usize = self.pieces.iter().map(|p| p.data.c1).sum();
        r == self.total.rank && c == self.total.c1
    }

    /// Slope of each positive-rank piece compared with that of `F_Z`.
    pub fn slope_comparison(&self) -> Vec<(String, Ordering)> {
        let mu = self.total.slope_q();
        self.pieces
            .iter()
            .filter(|p| p.data.rank > 0)
            .map(|p| (p.label.clone(), p.data.slope_q().cmp(&mu)))
            .collect()
    }

    pub fn slopes_equal(&self) -> bool {
        self.slope_comparison().iter().all(|(_, o)| *o == Ordering::Equal)
    }

    pub fn shapes(&self) -> Vec<(usize, usize)> {
        self.pieces.iter().map(|p| (p.data.rank, p.data.c1)).collect()
    }
}

pub fn decompose(z: &Arrangement, y: &KwVariety) -> Result<Decomposition> {
    let n = z.n();
    if y.n != n || y.field != z.field() {
        return Err(Error::DimensionMismatch("arrangement and KW variety in different spaces".into()));
    }
    let report = kw_validate(y);
    if !report.ok() {
        return Err(Error::Hypothesis(format!("invalid KW variety: {}", report.violations.join("; "))));
    }
    if !y.is_rational() {
        return Err(Error::Hypothesis("linear parts with irrational attachment points".into()));
    }
    if let Some(dp) = &y.distinguished {
        if z.contains(dp) {
            return Err(Error::Hypothesis(format!("Z contains the distinguished point {dp}")));
        }
    }
    let s = y.parts.len();
    let mut zi: Vec<Vec<ProjPoint>> = vec![Vec::new(); s];
    let mut z0 = Vec::new();
    for p in z.points() {
        let hits: Vec<usize> = (0..s).filter(|&i| y.parts[i].space.contains(p)).collect();
        match hits.as_slice() {
            [i] => zi[*i].push(p.clone()),
            [] if y.curve.as_ref().is_some_and(|c| c.contains(p)) => z0.push(p.clone()),
            [] => return Err(Error::Hypothesis(format!("{p} is not on Y"))),
            _ => return Err(Error::Hypothesis(format!("{p} lies in several linear parts"))),
        }
    }
    let mut pieces = Vec::new();
    for (i, (part, pts)) in y.parts.iter().zip(&zi).enumerate() {
        let span = LinearSubspace::span(pts).ok();
        if span.as_ref() != Some(&part.space) {
            return Err(Error::Hypothesis(format!("Z_{} does not span L_{}", i + 1, i + 1)));
        }
        let l = pts.len();
        let summand = part.attachment.as_ref().is_some_and(|a| z.contains(a));
        pieces.push(Piece {
            kind: PieceKind::Linear,
            label: format!("L{}", i + 1),
            points: pts.clone(),
            length: l,
            data: ResolutionData::from_shape(l - part.dim - 1, l - 1, n),
            summand,
            span,
        });
    }
    let len0 = z0.len() + s;
    let mut warnings = Vec::new();
    if y.d == 0 {
        warnings.push("curve part is a point; its piece has rank 0".into());
    }
    pieces.insert(
        0,
        Piece {
            kind: PieceKind::Curve,
            label: "C".into(),
            points: z0,
            length: len0,
            data: ResolutionData::from_shape(len0 - y.d - 1, len0 - 1, n),
            summand: false,
            span: None,
        },
    );
    let l = z.len();
    Ok(Decomposition { n, total: ResolutionData::from_shape(l - n - 1, l - 1, n), pieces, warnings })
}

/// Points of a linear piece in coordinates of its span.
pub fn local_arrangement(piece: &Piece) -> Result<Arrangement> {
    let span = piece.span.as_ref().ok_or_else(|| Error::InvalidInput(format!("{} is not a linear piece", piece.label)))?;
    let pts = piece
        .points
        .iter()
        .map(|p| ProjPoint::new(span.local_coords(p.coords()).expect("point of the span")))
        .collect::<Result<Vec<_>>>()?;
    Arrangement::new(pts)
}

/// Replaces linear piece `index` by its own decomposition along a KW
/// variety in local coordinates of its span.
pub fn refine(dec: &Decomposition, index: usize, local: &KwVariety) -> Result<Decomposition> {
    let piece = dec.pieces.get(index).ok_or_else(|| Error::InvalidInput(format!("no piece {index}")))?;
    let span = piece.span.clone().ok_or_else(|| Error::InvalidInput(format!("{} is not a linear piece", piece.label)))?;
    let za = local_arrangement(piece)?;
    let sub = decompose(&za, local)?;
    let lift = |q: &ProjPoint| -> Result<ProjPoint> {
        let f = q.field();
        let mut v = vec![f.zero(); dec.n + 1];
        for (c, b) in q.coords().iter().zip(span.basis()) {
            v = v.iter().zip(b).map(|(x, y)| x + &(c * y)).collect::<Vec<Scalar>>();
        }
        ProjPoint::new(v)
    };
    let mut out = dec.clone();
    let mut repl = Vec::new();
    for sp in sub.pieces {
        let span = match &sp.span {
            Some(s) => {
                let pts = s.basis_points().iter().map(lift).collect::<Result<Vec<_>>>()?;
                Some(LinearSubspace::span(&pts)?)
            }
            None => None,
        };
        repl.push(Piece {
            kind: sp.kind,
            label: format!("{}/{}", piece.label, sp.label),
            points: sp.points.iter().map(lift).collect::<Result<_>>()?,
            length: sp.length,
            data: ResolutionData::from_shape(sp.data.a, sp.data.b, dec.n),
            summand: sp.summand,
            span,
        });
    }
    out.pieces.splice(index..=index, repl);
    out.warnings.extend(sub.warnings);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::Field;
    use crate::kw::{kw_from_unstable, KwType};

    fn example_no() -> Arrangement {
        Arrangement::from_i64(
            Field::Rational,
            &[&[1, 1, 0, 0], &[0, 1, 0, 0], &[1, 0, 1, 0], &[0, 0, 0, 1], &[1, 0, 0, 1], &[0, 0, 1, 0], &[1, 0, 1, 1]],
        )
        .unwrap()
    }

    #[test]
    fn example_no_pieces_and_refinement() {
        let f = Field::Rational;
        let z = example_no();
        let y = kw_from_unstable(&z, &ProjPoint::from_i64(f, &[2, 1, 0, 0])).unwrap();
        let dec = decompose(&z, &y).unwrap();
        assert_eq!(dec.shapes(), vec![(1, 1), (2, 2)]);
        assert_eq!((dec.total.rank, dec.total.c1), (3, 3));
        assert!(dec.additive() && dec.slopes_equal());
        assert!(!dec.pieces[1].summand);

        let local = local_arrangement(&dec.pieces[1]).unwrap();
        assert_eq!(local.n(), 2);
        // a point of the line through ζ1, ζ2 in local coordinates (z0, z2, z3)
        let yl = ProjPoint::from_i64(f, &[2, 2, 1]);
        let kw = kw_from_unstable(&local, &yl).unwrap();
        assert_eq!(kw.kw_type(), KwType::new(1, vec![1]));
        let refined = refine(&dec, 1, &kw).unwrap();
        assert_eq!(refined.shapes(), vec![(1, 1), (1, 1), (1, 1)]);
        assert!(refined.pieces[2].summand);
        assert!(refined.additive() && refined.slopes_equal());
    }

    #[test]
    fn stray_point_is_named() {
        let f = Field::Rational;
        let z = example_no();
        let y = kw_from_unstable(&z, &ProjPoint::from_i64(f, &[2, 1, 0, 0])).unwrap();
        let z2 = z.with_point(ProjPoint::from_i64(f, &[1, 1, 1, 1])).unwrap();
        let e = decompose(&z2, &y).unwrap_err();
        assert_eq!(e, Error::Hypothesis("(1:1:1:1) is not on Y".into()));
    }
}
