//! Layered Torelli decision.
//!
//! Layers, in order: no quadric through `Z`; the conic criterion in `P_2`;
//! exact tests at geometric candidates (span intersections, points on
//! lines through pairs, points of rational normal curves through
//! subsets); exhaustive scans mod the supplied primes with rational
//! lifting. Two clean scans give a scan-based Torelli verdict.

use std::collections::HashMap;

use num_integer::{Integer, Roots};
use num_traits::{One, Zero};
use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::exactlin::{dot, rational_reconstruct, Field, Scalar};
use crate::kw::{kw_contains, kw_from_unstable, kw_validate, KwVariety};
use crate::projgeom::{combinations, rnc_through, Arrangement, LinearSubspace, ProjPoint};
use crate::unstable::{extra_points, is_unstable_sections, scan_arrangement};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TorelliReason {
    /// `Z` lies on no quadric.
    NoQuadric,
    /// Scans mod these primes found no unstable point outside `Z`.
    /// Evidence only: reduction can in principle create or destroy
    /// unstable points.
    ExhaustiveScan(Vec<u64>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Source {
    Conic,
    SpanIntersection,
    Line,
    Curve,
    ScanLift(u64),
    /// Point given by the caller.
    Supplied,
}

impl Source {
    pub fn name(&self) -> String {
        match self {
            Source::Conic => "conic".into(),
            Source::SpanIntersection => "span-intersection".into(),
            Source::Line => "line".into(),
            Source::Curve => "rational-normal-curve".into(),
            Source::ScanLift(p) => format!("scan-lift-{p}"),
            Source::Supplied => "point".into(),
        }
    }

    pub fn from_name(s: &str) -> Option<Source> {
        Some(match s {
            "conic" => Source::Conic,
            "span-intersection" => Source::SpanIntersection,
            "line" => Source::Line,
            "rational-normal-curve" => Source::Curve,
            "point" => Source::Supplied,
            _ => Source::ScanLift(s.strip_prefix("scan-lift-")?.parse().ok()?),
        })
    }
}

#[derive(Clone, Debug)]
pub struct Certificate {
    pub y: ProjPoint,
    pub kw: KwVariety,
    pub source: Source,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Diagnostics {
    pub candidates_tested: usize,
    pub primes_scanned: Vec<u64>,
    pub clean_primes: Vec<u64>,
    pub bad_primes: Vec<(u64, String)>,
    /// Lifted points that failed the exact test, as `p:point`.
    pub lifted_failed: Vec<String>,
}

#[derive(Clone, Debug)]
pub enum Verdict {
    Torelli(TorelliReason),
    NonTorelli(Box<Certificate>),
    Unknown(Diagnostics),
}

impl Verdict {
    pub fn is_torelli(&self) -> bool {
        matches!(self, Verdict::Torelli(_))
    }

    pub fn is_non_torelli(&self) -> bool {
        matches!(self, Verdict::NonTorelli(_))
    }

    pub fn certificate(&self) -> Option<&Certificate> {
        match self {
            Verdict::NonTorelli(c) => Some(c),
            _ => None,
        }
    }
}

/// Budget for the candidate layer.
#[derive(Clone, Debug)]
pub struct SearchLimits {
    pub max_candidates: usize,
    pub max_subsets: usize,
}

impl Default for SearchLimits {
    fn default() -> Self {
        SearchLimits { max_candidates: 400, max_subsets: 4000 }
    }
}

#[derive(Clone, Debug)]
pub struct Decision {
    pub verdict: Verdict,
    pub diagnostics: Diagnostics,
}

/// Re-checks a certificate from scratch.
pub fn verify_certificate(z: &Arrangement, c: &Certificate) -> std::result::Result<(), String> {
    if z.contains(&c.y) {
        return Err(format!("{} belongs to Z", c.y));
    }
    match is_unstable_sections(z, &c.y) {
        Ok(t) if t.unstable => {}
        Ok(_) => return Err(format!("{} is not unstable", c.y)),
        Err(e) => return Err(e.to_string()),
    }
    let r = kw_validate(&c.kw);
    if !r.ok() {
        return Err(r.violations.join("; "));
    }
    if let Some(p) = z.points().iter().find(|p| !kw_contains(&c.kw, p)) {
        return Err(format!("{p} is not on the certificate"));
    }
    if let Some(dp) = &c.kw.distinguished {
        if z.contains(dp) {
            return Err(format!("distinguished point {dp} lies in Z"));
        }
    }
    Ok(())
}

fn certify(z: &Arrangement, y: &ProjPoint, source: Source) -> Option<Certificate> {
    let kw = kw_from_unstable(z, y).ok()?;
    let c = Certificate { y: y.clone(), kw, source };
    verify_certificate(z, &c).ok()?;
    if c.kw.d == 0 {
        if let Some(better) = along_lines(z, &c) {
            return Some(better);
        }
    }
    Some(c)
}

/// A `(0; …)` certificate may come from the attachment point of a curve
/// part; a generic point of a linear part that is a line gives the
/// description with the curve.
fn along_lines(z: &Arrangement, c: &Certificate) -> Option<Certificate> {
    let f = z.field();
    for part in c.kw.parts.iter().filter(|p| p.dim == 1 && p.is_rational()) {
        let Some(w) = part.space.basis().iter().find(|b| crate::exactlin::rank_of(f, &[b.to_vec(), c.y.coords().to_vec()]) == 2)
        else {
            continue;
        };
        for t in 1..=3 {
            let v: Vec<Scalar> = c.y.coords().iter().zip(w).map(|(a, b)| a + &(&f.from_i64(t) * b)).collect();
            let Ok(q) = ProjPoint::new(v) else { continue };
            if !test_point(z, &q) {
                continue;
            }
            let Ok(kw) = kw_from_unstable(z, &q) else { continue };
            let d = Certificate { y: q, kw, source: c.source.clone() };
            if d.kw.d > 0 && verify_certificate(z, &d).is_ok() {
                return Some(d);
            }
        }
    }
    None
}

fn test_point(z: &Arrangement, y: &ProjPoint) -> bool {
    !z.contains(y) && is_unstable_sections(z, y).is_ok_and(|t| t.unstable)
}

fn quadric_eval(mono: &[(usize, usize)], c: &[Scalar], v: &[Scalar]) -> Scalar {
    let terms: Vec<Scalar> = mono.iter().map(|&(i, j)| &v[i] * &v[j]).collect();
    dot(c, &terms)
}

/// Second intersections of lines through points of `Z` with a conic.
fn conic_points(z: &Arrangement, conic: &[Scalar], mono: &[(usize, usize)]) -> Vec<ProjPoint> {
    let f = z.field();
    let dirs: [[i64; 3]; 9] =
        [[1, 0, 0], [0, 1, 0], [0, 0, 1], [1, 1, 0], [1, 0, 1], [0, 1, 1], [1, -1, 0], [1, 2, 3], [3, -1, 2]];
    let mut out: Vec<ProjPoint> = Vec::new();
    for p in z.points().iter().take(4) {
        for d in &dirs {
            let v: Vec<Scalar> = d.iter().map(|&x| f.from_i64(x)).collect();
            let pv: Vec<Scalar> = p.coords().iter().zip(&v).map(|(a, b)| a + b).collect();
            // Q(p + s v) = s (B + s Q(v)) with B = Q(p+v) - Q(p) - Q(v)
            let qv = quadric_eval(mono, conic, &v);
            let b = &(&quadric_eval(mono, conic, &pv) - &quadric_eval(mono, conic, p.coords())) - &qv;
            let s = if qv.is_zero() {
                if !b.is_zero() {
                    continue;
                }
                f.one()
            } else {
                match (-&b).div(&qv) {
                    Ok(s) if !s.is_zero() => s,
                    _ => continue,
                }
            };
            let y: Vec<Scalar> = p.coords().iter().zip(&v).map(|(a, b)| a + &(&s * b)).collect();
            if let Ok(q) = ProjPoint::new(y) {
                if !z.contains(&q) && !out.contains(&q) {
                    out.push(q);
                }
            }
        }
    }
    out
}

/// Distinct spans of subsets of `Z` of projective dimension `1..n-1`,
/// each with the points it contains.
fn flats(z: &Arrangement, limit: usize) -> Vec<(LinearSubspace, usize)> {
    let n = z.n();
    let pts = z.points();
    let mut out: Vec<(LinearSubspace, usize)> = Vec::new();
    let mut count = 0;
    for k in 1..n {
        for idx in combinations(pts.len(), k + 1) {
            count += 1;
            if count > limit {
                return out;
            }
            if z.subset_rank(&idx) != k + 1 {
                continue;
            }
            let sel: Vec<ProjPoint> = idx.iter().map(|&i| pts[i].clone()).collect();
            let Ok(s) = LinearSubspace::span(&sel) else { continue };
            if out.iter().any(|(t, _)| *t == s) {
                continue;
            }
            let inside = pts.iter().filter(|p| s.contains(p)).count();
            out.push((s, inside));
        }
    }
    out
}

/// Candidate unstable points, most promising first.
pub fn candidates(z: &Arrangement, limits: &SearchLimits) -> Vec<(ProjPoint, Source)> {
    let n = z.n();
    let f = z.field();
    let pts = z.points();
    let mut out: Vec<(ProjPoint, Source)> = Vec::new();
    let push = |q: ProjPoint, s: Source, out: &mut Vec<(ProjPoint, Source)>| {
        if !z.contains(&q) && !out.iter().any(|(x, _)| *x == q) {
            out.push((q, s));
        }
    };

    // span intersections, ranked by how many pairs of spans produce them
    let fl = flats(z, limits.max_subsets);
    let mut hits: HashMap<ProjPoint, (usize, usize)> = HashMap::new();
    // complementary spans meeting in one point, scored by the points they carry
    let mut apex: HashMap<ProjPoint, usize> = HashMap::new();
    let mut order = 0;
    for (i, (a, ca)) in fl.iter().enumerate() {
        for (b, cb) in &fl[i + 1..] {
            if a.dim() + b.dim() > n as isize {
                continue;
            }
            let Ok(m) = a.intersect(b) else { continue };
            if m.dim() != 0 {
                continue;
            }
            let q = m.basis_points().remove(0);
            if z.contains(&q) {
                continue;
            }
            if a.dim() + b.dim() == n as isize {
                let e = apex.entry(q.clone()).or_insert(0);
                *e = (*e).max(ca + cb);
            }
            let e = hits.entry(q).or_insert((0, order));
            e.0 += 1;
            order += 1;
        }
    }
    let mut apexes: Vec<(usize, usize, ProjPoint)> = apex.into_iter().map(|(q, s)| (s, hits[&q].1, q)).collect();
    apexes.sort_by(|x, y| y.0.cmp(&x.0).then(x.1.cmp(&y.1)));
    let mut ranked: Vec<(ProjPoint, (usize, usize))> = hits.into_iter().collect();
    ranked.sort_by(|x, y| y.1 .0.cmp(&x.1 .0).then(x.1 .1.cmp(&y.1 .1)));

    // rational normal curves through d+3 points spanning a d-plane,
    // ranked by how many points of Z they carry
    let mut curves: Vec<(usize, Vec<ProjPoint>)> = Vec::new();
    let mut budget = limits.max_subsets;
    for d in 2..=n {
        for idx in combinations(pts.len(), d + 3) {
            if budget == 0 {
                break;
            }
            budget -= 1;
            if z.subset_rank(&idx) != d + 1 {
                continue;
            }
            let sel: Vec<ProjPoint> = idx.iter().map(|&i| pts[i].clone()).collect();
            let Some(ct) = rnc_through(&sel) else { continue };
            let on = pts.iter().filter(|p| ct.curve.contains(p)).count();
            let mut samples = Vec::new();
            for t in 0..(d as i64 + on as i64 + 3) {
                if samples.len() == 2 {
                    break;
                }
                if let Ok(q) = ct.curve.eval(&f.one(), &f.from_i64(t)) {
                    if !z.contains(&q) {
                        samples.push(q);
                    }
                }
            }
            curves.push((on - (d + 3), samples));
        }
    }
    curves.sort_by_key(|c| std::cmp::Reverse(c.0));

    // rich candidates first: apexes of complementary spans, span points hit
    // by several pairs and curves carrying extra points
    for (_, _, q) in apexes.iter().filter(|(s, _, _)| *s > n + 2) {
        push(q.clone(), Source::SpanIntersection, &mut out);
    }
    for (q, _) in ranked.iter().filter(|(_, (c, _))| *c > 1) {
        push(q.clone(), Source::SpanIntersection, &mut out);
    }
    for (_, s) in curves.iter().filter(|(extra, _)| *extra > 0) {
        for q in s {
            push(q.clone(), Source::Curve, &mut out);
        }
    }
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            for t in [1i64, -1, 2] {
                let v: Vec<Scalar> =
                    pts[i].coords().iter().zip(pts[j].coords()).map(|(a, b)| a + &(&f.from_i64(t) * b)).collect();
                if let Ok(q) = ProjPoint::new(v) {
                    push(q, Source::Line, &mut out);
                }
            }
        }
    }
    for (q, _) in ranked.iter().filter(|(_, (c, _))| *c == 1) {
        push(q.clone(), Source::SpanIntersection, &mut out);
    }
    for (_, s) in curves.iter().filter(|(extra, _)| *extra == 0) {
        for q in s {
            push(q.clone(), Source::Curve, &mut out);
        }
    }
    out.truncate(limits.max_candidates);
    out
}

fn lift(q: &ProjPoint, p: u64) -> Option<ProjPoint> {
    let bound = (p / 2).sqrt();
    let mut rs = Vec::new();
    for c in q.coords() {
        let v = c.as_fp()?.value();
        rs.push(rational_reconstruct(v, p, bound)?);
    }
    let den = rs.iter().fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
    let f = Field::Rational;
    let coords: Vec<Scalar> = rs.iter().map(|r| f.from_bigint(&(r.numer() * (&den / r.denom())))).collect();
    if coords.iter().all(Scalar::is_zero) || den.is_zero() {
        return None;
    }
    ProjPoint::new(coords).ok()
}

pub fn decide_torelli(z: &Arrangement, primes: &[u64]) -> Result<Decision> {
    decide_torelli_with(z, primes, &SearchLimits::default())
}

pub fn decide_torelli_with(z: &Arrangement, primes: &[u64], limits: &SearchLimits) -> Result<Decision> {
    let n = z.n();
    if !z.field().is_rational() {
        return Err(Error::InvalidInput("decide_torelli works over the rationals".into()));
    }
    if !z.is_nondegenerate() {
        return Err(Error::Degenerate { span: z.span_dim(), n });
    }
    if z.len() < n + 2 {
        return Err(Error::Hypothesis(format!("need at least n+2 = {} points, got {}", n + 2, z.len())));
    }
    let mut diag = Diagnostics::default();
    let done = |v: Verdict, d: Diagnostics| Ok(Decision { verdict: v, diagnostics: d });

    let qs = z.quadric_space();
    if qs.dim() == 0 {
        return done(Verdict::Torelli(TorelliReason::NoQuadric), diag);
    }

    if n == 2 {
        for conic in &qs.basis {
            for y in conic_points(z, conic, &qs.monomials) {
                diag.candidates_tested += 1;
                if test_point(z, &y) {
                    if let Some(c) = certify(z, &y, Source::Conic) {
                        return done(Verdict::NonTorelli(Box::new(c)), diag);
                    }
                }
            }
        }
    }

    for (y, src) in candidates(z, limits) {
        diag.candidates_tested += 1;
        if test_point(z, &y) {
            if let Some(c) = certify(z, &y, src) {
                return done(Verdict::NonTorelli(Box::new(c)), diag);
            }
        }
    }

    for &p in primes {
        // two clean primes settle it; later primes are spares for bad reduction
        if diag.clean_primes.len() >= 2 {
            break;
        }
        let (zp, scan) = match scan_arrangement(z, p) {
            Ok(r) => r,
            Err(e) => {
                diag.bad_primes.push((p, e.to_string()));
                continue;
            }
        };
        diag.primes_scanned.push(p);
        let extra = extra_points(&scan, &zp);
        if extra.is_empty() {
            diag.clean_primes.push(p);
            continue;
        }
        for (q, _) in &extra {
            let Some(y) = lift(q, p) else { continue };
            if test_point(z, &y) {
                if let Some(c) = certify(z, &y, Source::ScanLift(p)) {
                    return done(Verdict::NonTorelli(Box::new(c)), diag);
                }
            }
            diag.lifted_failed.push(format!("{p}:{y}"));
        }
    }
    if diag.clean_primes.len() >= 2 {
        let ps = diag.clean_primes.clone();
        return done(Verdict::Torelli(TorelliReason::ExhaustiveScan(ps)), diag);
    }
    done(Verdict::Unknown(diag.clone()), diag)
}
