//! Points in general linear position: non-Torelli exactly when they lie on
//! a rational normal curve of degree `n`.

use crate::error::{Error, Result};
use crate::projgeom::{rnc_through, Arrangement};

use super::decide::{decide_torelli, Decision, Verdict};

#[derive(Clone, Debug)]
pub struct T3Report {
    pub applicable: bool,
    pub note: String,
    /// Whether `Z` lies on the rational normal curve through its first
    /// `n+3` points.
    pub on_curve: bool,
    pub decision: Option<Decision>,
    pub failures: Vec<String>,
}

impl T3Report {
    pub fn consistent(&self) -> bool {
        self.failures.is_empty()
    }
}

pub fn check_t3(z: &Arrangement, primes: &[u64]) -> Result<T3Report> {
    let n = z.n();
    let skip = |note: String| T3Report { applicable: false, note, on_curve: false, decision: None, failures: Vec::new() };
    if !z.general_position() {
        return Ok(skip("points not in general linear position; criterion does not apply".into()));
    }
    if z.len() < n + 3 {
        return Ok(skip(format!("{} points, criterion needs at least n+3 = {}", z.len(), n + 3)));
    }
    let pts = z.points();
    let ct = rnc_through(&pts[..n + 3]).ok_or_else(|| Error::Internal("no curve through points in general position".into()))?;
    let on_curve = pts[n + 3..].iter().all(|p| ct.curve.contains(p));
    let decision = decide_torelli(z, primes)?;
    let mut failures = Vec::new();
    match (&decision.verdict, on_curve) {
        (Verdict::NonTorelli(c), true) => {
            let t = c.kw.kw_type();
            if t.d != n || t.s() != 0 {
                failures.push(format!("certificate has type {t}, expected ({n};0)"));
            }
        }
        (Verdict::NonTorelli(c), false) => {
            failures.push(format!("non-Torelli certificate at {} but Z is on no rational normal curve", c.y));
        }
        (Verdict::Torelli(_), true) => failures.push("Z lies on a rational normal curve but was declared Torelli".into()),
        (Verdict::Torelli(_), false) => {}
        (Verdict::Unknown(_), on) => failures.push(format!("verdict unknown; curve criterion says on_curve = {on}")),
    }
    Ok(T3Report { applicable: true, note: String::new(), on_curve, decision: Some(decision), failures })
}
