//! Exhaustive scans over `P_n(F_p)`.

use rayon::prelude::*;

use crate::exactlin::scalar::{mul_mod, pow_mod};
use crate::exactlin::{Field, Scalar};
use crate::error::{Error, Result};
use crate::projgeom::{Arrangement, ProjPoint};
use crate::steiner::{build_steiner, LinFormMatrix};

/// Number of points of `P_n(F_p)`.
pub fn point_count(n: usize, p: u64) -> u64 {
    (p.pow(n as u32 + 1) - 1) / (p - 1)
}

/// The `idx`-th point of `P_n(F_p)` in canonical order: by position of the
/// leading 1, then lexicographically in the trailing coordinates.
pub fn point_at(n: usize, p: u64, mut idx: u64) -> Vec<u64> {
    for lead in 0..=n {
        let block = p.pow((n - lead) as u32);
        if idx < block {
            let mut c = vec![0u64; n + 1];
            c[lead] = 1;
            for k in (lead + 1..=n).rev() {
                c[k] = idx % p;
                idx /= p;
            }
            return c;
        }
        idx -= block;
    }
    panic!("point index out of range");
}

fn to_point(c: &[u64], p: u64) -> ProjPoint {
    let f = Field::Prime(p);
    ProjPoint::new(c.iter().map(|&x| f.from_i64(x as i64)).collect()).expect("nonzero")
}

/// Coefficient slices of a matrix of forms as residues.
#[derive(Clone, Debug)]
pub struct FastForms {
    p: u64,
    n: usize,
    a: usize,
    b: usize,
    slices: Vec<Vec<u64>>,
}

impl FastForms {
    pub fn new(m: &LinFormMatrix) -> Result<FastForms> {
        let Field::Prime(p) = m.field() else {
            return Err(Error::InvalidInput("fast scans need a prime field".into()));
        };
        let slices = m
            .slices()
            .iter()
            .map(|s| s.entries().iter().map(|x| x.as_fp().expect("prime field").value()).collect())
            .collect();
        Ok(FastForms { p, n: m.n(), a: m.rows(), b: m.cols(), slices })
    }

    /// Kernel dimension of test A at `y` (first nonzero coordinate 1).
    ///
    /// With `y_L = 1` the unknown `w` equals `M_L v`, leaving the system
    /// `(M_k - y_k M_L) v = 0` for `k ≠ L`.
    pub fn kernel_dim(&self, y: &[u64]) -> usize {
        let (p, a, b) = (self.p, self.a, self.b);
        let lead = y.iter().position(|&x| x != 0).expect("nonzero point");
        let mut rows: Vec<Vec<u64>> = Vec::with_capacity(a * self.n);
        for k in 0..=self.n {
            if k == lead {
                continue;
            }
            let yk = y[k];
            for j in 0..a {
                let row: Vec<u64> = (0..b)
                    .map(|i| {
                        let mk = self.slices[k][j * b + i];
                        let ml = self.slices[lead][j * b + i];
                        (mk + p - mul_mod(yk, ml, p)) % p
                    })
                    .collect();
                rows.push(row);
            }
        }
        b - rank_mod_p(&mut rows, b, p)
    }
}

/// Rank of a dense residue matrix (destroys the input).
pub fn rank_mod_p(rows: &mut [Vec<u64>], cols: usize, p: u64) -> usize {
    let mut r = 0;
    for c in 0..cols {
        let Some(piv) = (r..rows.len()).find(|&i| rows[i][c] != 0) else { continue };
        rows.swap(r, piv);
        let inv = pow_mod(rows[r][c], p - 2, p);
        for x in rows[r][c..].iter_mut() {
            *x = mul_mod(*x, inv, p);
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[c] == 0 {
                continue;
            }
            let f = row[c];
            for (x, &q) in row[c..].iter_mut().zip(&pivot_row[c..]) {
                *x = (*x + p - mul_mod(f, q, p)) % p;
            }
        }
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    r
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScanResult {
    pub p: u64,
    /// Unstable points in canonical order with their kernel dimensions.
    pub points: Vec<(ProjPoint, usize)>,
}

impl ScanResult {
    pub fn point_set(&self) -> Vec<ProjPoint> {
        self.points.iter().map(|(q, _)| q.clone()).collect()
    }

    pub fn dim_of(&self, q: &ProjPoint) -> Option<usize> {
        self.points.iter().find(|(x, _)| x == q).map(|(_, d)| *d)
    }
}

/// Test A at every point of `P_n(F_p)`.
pub fn scan_unstable(m: &LinFormMatrix) -> Result<ScanResult> {
    let fast = FastForms::new(m)?;
    let (n, p) = (fast.n, fast.p);
    let total = point_count(n, p);
    let mut hits: Vec<(u64, usize)> = (0..total)
        .into_par_iter()
        .filter_map(|i| {
            let y = point_at(n, p, i);
            let d = fast.kernel_dim(&y);
            (d > 0).then_some((i, d))
        })
        .collect();
    hits.sort_unstable();
    let points = hits.into_iter().map(|(i, d)| (to_point(&point_at(n, p, i), p), d)).collect();
    Ok(ScanResult { p, points })
}

/// Reduces a rational arrangement mod `p`, builds its Steiner matrix over
/// `F_p` and scans it.
pub fn scan_arrangement(z: &Arrangement, p: u64) -> Result<(Arrangement, ScanResult)> {
    let zp = if z.field().is_rational() { z.reduce_mod_p(p)? } else { z.clone() };
    let m = build_steiner(&zp)?;
    Ok((zp, scan_unstable(&m.matrix)?))
}

/// Points of a scan outside the given arrangement.
pub fn extra_points(scan: &ScanResult, z: &Arrangement) -> Vec<(ProjPoint, usize)> {
    scan.points.iter().filter(|(q, _)| !z.contains(q)).cloned().collect()
}

pub fn residues(v: &[Scalar]) -> Vec<u64> {
    v.iter().map(|x| x.as_fp().expect("prime field").value()).collect()
}
