//! Generators and independent integer oracles shared by the integration
//! tests.
#![allow(dead_code)]

use std::path::PathBuf;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use torelli_core::cli::files::ArrangementFile;
use torelli_core::exactlin::{BinaryForm, Field, Matrix};
use torelli_core::kw::{column_block, jordan_block, Inventory, Pencil};
use torelli_core::projgeom::{Arrangement, ProjPoint};

pub const Q: Field = Field::Rational;

pub fn rng(seed: u64) -> ChaCha8Rng {
    rand::SeedableRng::seed_from_u64(seed)
}

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

pub fn fixture(name: &str) -> Arrangement {
    let text = std::fs::read_to_string(fixture_path(name)).expect("fixture");
    ArrangementFile::parse(&text).unwrap().to_arrangement().unwrap()
}

pub fn point(c: &[i64]) -> ProjPoint {
    ProjPoint::from_i64(Q, c)
}

pub fn arrangement(pts: &[Vec<i64>]) -> Option<Arrangement> {
    let refs: Vec<&[i64]> = pts.iter().map(Vec::as_slice).collect();
    Arrangement::from_i64(Q, &refs).ok()
}

/// Rank over `Q` by fraction-free elimination on `i128`.
pub fn int_rank(rows: &[Vec<i128>]) -> usize {
    let mut m: Vec<Vec<i128>> = rows.to_vec();
    if m.is_empty() {
        return 0;
    }
    let cols = m[0].len();
    let mut rank = 0;
    let mut prev = 1i128;
    for c in 0..cols {
        let Some(p) = (rank..m.len()).find(|&r| m[r][c] != 0) else { continue };
        m.swap(rank, p);
        for r in rank + 1..m.len() {
            for k in c + 1..cols {
                m[r][k] = (m[rank][c] * m[r][k] - m[r][c] * m[rank][k]) / prev;
            }
            m[r][c] = 0;
        }
        prev = m[rank][c];
        rank += 1;
        if rank == m.len() {
            break;
        }
    }
    rank
}

/// Rank mod `p` of an integer matrix.
pub fn rank_mod(rows: &[Vec<i128>], p: i128) -> usize {
    let mut m: Vec<Vec<i128>> = rows.iter().map(|r| r.iter().map(|x| x.rem_euclid(p)).collect()).collect();
    if m.is_empty() {
        return 0;
    }
    let cols = m[0].len();
    let inv = |a: i128| (1..p).find(|b| a * b % p == 1).unwrap();
    let mut rank = 0;
    for c in 0..cols {
        let Some(piv) = (rank..m.len()).find(|&r| m[r][c] != 0) else { continue };
        m.swap(rank, piv);
        let iv = inv(m[rank][c]);
        for r in 0..m.len() {
            if r != rank && m[r][c] != 0 {
                let f = m[r][c] * iv % p;
                for k in 0..cols {
                    m[r][k] = (m[r][k] - f * m[rank][k]).rem_euclid(p);
                }
            }
        }
        rank += 1;
    }
    rank
}

pub fn conic_rows(pts: &[Vec<i64>]) -> Vec<Vec<i128>> {
    pts.iter()
        .map(|p| {
            let (x, y, z) = (p[0] as i128, p[1] as i128, p[2] as i128);
            vec![x * x, x * y, x * z, y * y, y * z, z * z]
        })
        .collect()
}

/// Whether the points lie on a conic, by the rank of the monomial matrix.
pub fn on_conic(pts: &[Vec<i64>]) -> bool {
    int_rank(&conic_rows(pts)) < 6
}

pub fn on_conic_mod(pts: &[Vec<i64>], p: i128) -> bool {
    rank_mod(&conic_rows(pts), p) < 6
}

fn mat_vec(g: &[Vec<i64>], v: &[i64]) -> Vec<i64> {
    g.iter().map(|r| r.iter().zip(v).map(|(a, b)| a * b).sum()).collect()
}

/// Random integer matrix with small entries and nonzero determinant.
pub fn random_invertible(rng: &mut ChaCha8Rng, k: usize, spread: i64) -> Vec<Vec<i64>> {
    loop {
        let g: Vec<Vec<i64>> = (0..k).map(|_| (0..k).map(|_| rng.gen_range(-spread..=spread)).collect()).collect();
        let rows: Vec<Vec<i128>> = g.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
        if int_rank(&rows) == k {
            return g;
        }
    }
}

pub fn to_matrix(g: &[Vec<i64>]) -> Matrix {
    let refs: Vec<&[i64]> = g.iter().map(Vec::as_slice).collect();
    Matrix::from_i64(Q, &refs)
}

/// Plane arrangement families for the conic criterion.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PlaneKind {
    General,
    SmoothConic,
    LinePair,
    LinePlusPoint,
}

pub fn random_plane(rng: &mut ChaCha8Rng, kind: PlaneKind, l: usize) -> Vec<Vec<i64>> {
    loop {
        let mut pts: Vec<Vec<i64>> = Vec::new();
        match kind {
            PlaneKind::General => {
                while pts.len() < l {
                    pts.push((0..3).map(|_| rng.gen_range(-6..=6)).collect());
                }
            }
            PlaneKind::SmoothConic => {
                let g = random_invertible(rng, 3, 2);
                let mut ts: Vec<i64> = (-5..=5).collect();
                ts.shuffle(rng);
                for &t in ts.iter().take(l) {
                    pts.push(mat_vec(&g, &[1, t, t * t]));
                }
            }
            PlaneKind::LinePair => {
                let a: Vec<Vec<i64>> = (0..4).map(|_| (0..3).map(|_| rng.gen_range(-3..=3)).collect()).collect();
                let k = rng.gen_range(3..=l - 3);
                for i in 0..l {
                    let (p, q) = if i < k { (&a[0], &a[1]) } else { (&a[2], &a[3]) };
                    let (s, t) = (rng.gen_range(-3..=3), rng.gen_range(-3..=3));
                    pts.push(p.iter().zip(q).map(|(x, y)| s * x + t * y).collect());
                }
            }
            PlaneKind::LinePlusPoint => {
                let a: Vec<Vec<i64>> = (0..2).map(|_| (0..3).map(|_| rng.gen_range(-3..=3)).collect()).collect();
                for _ in 0..l - 1 {
                    let (s, t) = (rng.gen_range(-4..=4), rng.gen_range(-4..=4));
                    pts.push(a[0].iter().zip(&a[1]).map(|(x, y)| s * x + t * y).collect());
                }
                pts.push((0..3).map(|_| rng.gen_range(-5..=5)).collect());
            }
        }
        if pts.iter().any(|p| p.iter().all(|&x| x == 0)) {
            continue;
        }
        if let Some(z) = arrangement(&pts) {
            if z.is_nondegenerate() {
                return z.points().iter().map(|p| p.to_strings().iter().map(|s| s.parse().unwrap()).collect()).collect();
            }
        }
    }
}

/// A KW variety in model coordinates: the curve uses coordinates
/// `0..=d`, part `i` the block `blocks[i]`, all moved by `g`.
#[derive(Clone, Debug)]
pub struct GeneratedKw {
    pub n: usize,
    pub d: usize,
    pub dims: Vec<usize>,
    pub g: Vec<Vec<i64>>,
    /// Attachment vector of each part in model coordinates.
    pub attach: Vec<Vec<i64>>,
    pub blocks: Vec<Vec<usize>>,
    pub model: Vec<Vec<i64>>,
    pub points: Vec<Vec<i64>>,
}

fn curve_point(n: usize, d: usize, t: Option<i64>) -> Vec<i64> {
    let mut v = vec![0; n + 1];
    match t {
        None => v[d] = 1,
        Some(t) => {
            for (i, x) in v.iter_mut().take(d + 1).enumerate() {
                *x = t.pow(i as u32);
            }
        }
    }
    v
}

impl GeneratedKw {
    /// Membership of a model-coordinate vector.
    pub fn on_y_model(&self, v: &[i64]) -> bool {
        let n = self.n;
        let big = |x: &[i64]| x.iter().map(|&c| c as i128).collect::<Vec<_>>();
        for (a, blk) in self.attach.iter().zip(&self.blocks) {
            let mut rows = vec![big(a)];
            for &k in blk {
                let mut e = vec![0i128; n + 1];
                e[k] = 1;
                rows.push(e);
            }
            let r = rows.len();
            rows.push(big(v));
            if int_rank(&rows) == r {
                return true;
            }
        }
        if self.d == 0 {
            return false;
        }
        if v[self.d + 1..].iter().any(|&x| x != 0) {
            return false;
        }
        let d = self.d;
        let hankel = vec![big(&v[..d]), big(&v[1..=d])];
        int_rank(&hankel) == 1
    }

    pub fn arrangement(&self) -> Arrangement {
        arrangement(&self.points).expect("distinct")
    }

    pub fn map(&self, v: &[i64]) -> Vec<i64> {
        mat_vec(&self.g, v)
    }

    pub fn type_label(&self) -> String {
        let dims: Vec<String> = self.dims.iter().map(|x| x.to_string()).collect();
        format!("({};{})", self.d, dims.join(","))
    }
}

/// Samples `Z` on a KW variety of type `(d; dims)` in `P_n`, with at
/// least `min_len` and at most `max_len` points.
pub fn generate_kw(rng: &mut ChaCha8Rng, n: usize, d: usize, dims: &[usize], min_len: usize, max_len: usize) -> GeneratedKw {
    generate_kw_spare(rng, n, d, dims, min_len, max_len, 0)
}

/// As [`generate_kw`], with `spare` points beyond the minimum on every
/// component, so that losing one point leaves each component determined.
pub fn generate_kw_spare(
    rng: &mut ChaCha8Rng,
    n: usize,
    d: usize,
    dims: &[usize],
    min_len: usize,
    max_len: usize,
    spare: usize,
) -> GeneratedKw {
    assert_eq!(d + dims.iter().sum::<usize>(), n);
    'retry: loop {
        let mut params: Vec<Option<i64>> = (-3..=3).map(Some).collect();
        params.push(None);
        params.shuffle(rng);
        let mut next_param = params.into_iter();
        let mut attach = Vec::new();
        let mut blocks = Vec::new();
        let mut k = if d == 0 { 1 } else { d + 1 };
        for &m in dims {
            if d == 0 {
                attach.push(curve_point(n, 0, Some(1)));
            } else {
                attach.push(curve_point(n, d, next_param.next().unwrap()));
            }
            blocks.push((k..k + m).collect::<Vec<_>>());
            k += m;
        }
        let l0 = match d {
            0 => 0,
            1 => 2,
            _ => d + 3,
        };
        let mut extras_curve = if d > 0 { spare } else { 0 };
        let mut extras_part = vec![spare; dims.len()];
        let base: usize = l0 + extras_curve + dims.iter().map(|m| m + 1 + spare).sum::<usize>();
        if base > max_len {
            panic!("type does not fit in {max_len} points");
        }
        let mut total = base;
        while total < min_len || (total < max_len && rng.gen_bool(0.3)) {
            let slot = rng.gen_range(0..=dims.len());
            if slot == dims.len() {
                if d == 0 {
                    continue;
                }
                extras_curve += 1;
            } else {
                extras_part[slot] += 1;
            }
            total += 1;
        }
        let mut model: Vec<Vec<i64>> = Vec::new();
        for _ in 0..l0 + extras_curve {
            let Some(t) = next_param.next() else { continue 'retry };
            model.push(curve_point(n, d, t));
        }
        for (i, &m) in dims.iter().enumerate() {
            let mut part: Vec<Vec<i64>> = Vec::new();
            // a spanning set: the coordinate directions shifted by the attachment
            for (j, &c) in blocks[i].iter().enumerate() {
                let a = if j == 0 { 0 } else { rng.gen_range(-2..=2) };
                let mut v: Vec<i64> = attach[i].iter().map(|x| a * x).collect();
                v[c] += 1;
                part.push(v);
            }
            let sum_a = rng.gen_range(1..=2);
            let mut v: Vec<i64> = attach[i].iter().map(|x| sum_a * x).collect();
            for &c in &blocks[i] {
                v[c] += rng.gen_range(1..=2);
            }
            part.push(v);
            for _ in 0..extras_part[i] {
                let mut v: Vec<i64> = attach[i].iter().map(|x| rng.gen_range(-2..=2) * x).collect();
                for &c in &blocks[i] {
                    v[c] += rng.gen_range(-2..=2);
                }
                part.push(v);
            }
            debug_assert_eq!(part.len(), m + 1 + extras_part[i]);
            model.extend(part);
        }
        let g = random_invertible(rng, n + 1, 1);
        let points: Vec<Vec<i64>> = model.iter().map(|v| mat_vec(&g, v)).collect();
        if points.iter().any(|p| p.iter().all(|&x| x == 0)) {
            continue;
        }
        let kw = GeneratedKw { n, d, dims: dims.to_vec(), g, attach, blocks, model, points };
        let Some(z) = arrangement(&kw.points) else { continue };
        if !z.is_nondegenerate() {
            continue;
        }
        // each part must be spanned by its points
        let mut o = l0 + extras_curve;
        for (i, &m) in dims.iter().enumerate() {
            let cnt = m + 1 + extras_part[i];
            let rows: Vec<Vec<i128>> = kw.model[o..o + cnt].iter().map(|v| v.iter().map(|&x| x as i128).collect()).collect();
            if int_rank(&rows) != m + 1 {
                continue 'retry;
            }
            if spare > 0 {
                // general position inside the part, attachment included
                let mut all = rows.clone();
                all.push(kw.attach[i].iter().map(|&x| x as i128).collect());
                let k = (m + 1).min(all.len());
                for mask in 0u32..1 << all.len() {
                    if mask.count_ones() as usize != k {
                        continue;
                    }
                    let sub: Vec<Vec<i128>> = (0..all.len()).filter(|j| mask >> j & 1 == 1).map(|j| all[j].clone()).collect();
                    if int_rank(&sub) != k {
                        continue 'retry;
                    }
                }
            }
            o += cnt;
        }
        if kw.model.iter().any(|v| kw.attach.contains(v)) {
            continue;
        }
        return kw;
    }
}

/// Replaces one point by a generic point off `Y`: every model coordinate is
/// nonzero, so it avoids the spans of the components.
pub fn perturb(rng: &mut ChaCha8Rng, kw: &GeneratedKw) -> (usize, Vec<Vec<i64>>) {
    loop {
        let i = rng.gen_range(0..kw.points.len());
        let v: Vec<i64> = (0..=kw.n).map(|_| rng.gen_range(-30..=30)).collect();
        if v.contains(&0) || kw.on_y_model(&v) {
            continue;
        }
        let mut pts = kw.points.clone();
        pts[i] = kw.map(&v);
        if let Some(z) = arrangement(&pts) {
            if z.is_nondegenerate() {
                return (i, pts);
            }
        }
    }
}

pub fn kw_types(n: usize) -> Vec<(usize, Vec<usize>)> {
    match n {
        3 => vec![(0, vec![1, 2]), (0, vec![1, 1, 1]), (1, vec![2]), (1, vec![1, 1]), (2, vec![1]), (3, vec![])],
        4 => vec![
            (0, vec![1, 3]),
            (0, vec![2, 2]),
            (0, vec![1, 1, 2]),
            (0, vec![1, 1, 1, 1]),
            (1, vec![3]),
            (1, vec![1, 2]),
            (1, vec![1, 1, 1]),
            (2, vec![2]),
            (2, vec![1, 1]),
            (3, vec![1]),
            (4, vec![]),
        ],
        _ => panic!("no type table for n = {n}"),
    }
}

/// A canonical pencil with known inventory.
#[derive(Clone, Debug)]
pub struct PlantedPencil {
    pub pencil: Pencil,
    pub inventory: Inventory,
}

fn companion_quadratic(c: i64, reps: usize, jordan: bool) -> Pencil {
    // ξ0 I + ξ1 B with B^2 = c I, det = (ξ0^2 - c ξ1^2)^reps
    let k = 2 * reps;
    let a = Matrix::identity(Q, k);
    let mut b = Matrix::zeros(Q, k, k);
    for r in 0..reps {
        b.set(2 * r, 2 * r + 1, Q.from_i64(c));
        b.set(2 * r + 1, 2 * r, Q.one());
        if jordan && r + 1 < reps {
            b.set(2 * r, 2 * r + 2, Q.one());
            b.set(2 * r + 1, 2 * r + 3, Q.one());
        }
    }
    Pencil::new(a, b).unwrap()
}

/// One column block plus regular blocks, at most `max_rows` rows.
pub fn planted_pencil(rng: &mut ChaCha8Rng, max_rows: usize) -> PlantedPencil {
    let eps = rng.gen_range(0..=3usize.min(max_rows));
    let mut blocks = vec![column_block(Q, eps)];
    let mut rows = eps;
    let mut regular: Vec<(BinaryForm, Vec<usize>)> = Vec::new();
    let roots: Vec<[i64; 2]> = vec![[1, 0], [0, 1], [1, -2], [1, 3], [2, 1], [1, 1]];
    let mut used = Vec::new();
    while rows < max_rows && rng.gen_bool(0.8) {
        let room = max_rows - rows;
        if room >= 2 && rng.gen_bool(0.15) {
            let c = [2i64, 3, 5].choose(rng).copied().unwrap();
            let f = BinaryForm::from_i64(Q, &[1, 0, -c]);
            if used.contains(&f) {
                continue;
            }
            let reps = if room >= 4 && rng.gen_bool(0.5) { 2 } else { 1 };
            let jordan = reps == 2 && rng.gen_bool(0.5);
            blocks.push(companion_quadratic(c, reps, jordan));
            regular.push((f.clone(), if jordan { vec![2] } else { vec![1; reps] }));
            used.push(f);
            rows += 2 * reps;
            continue;
        }
        let r = roots.choose(rng).unwrap();
        let f = BinaryForm::from_i64(Q, r);
        if used.contains(&f) {
            continue;
        }
        let mut partition = Vec::new();
        let mut size = 0;
        while size < room && (partition.is_empty() || rng.gen_bool(0.5)) {
            let s = rng.gen_range(1..=(room - size).min(3));
            partition.push(s);
            size += s;
        }
        partition.sort_unstable_by(|a, b| b.cmp(a));
        blocks.push(jordan_block(&f, &partition));
        regular.push((f.clone(), partition));
        used.push(f);
        rows += size;
    }
    regular.sort_by(|a, b| a.0.coeffs().cmp(b.0.coeffs()).then(a.1.cmp(&b.1)));
    let pencil = Pencil::block_diag(Q, &blocks);
    PlantedPencil { pencil, inventory: Inventory { column: vec![eps], row: vec![], regular } }
}

pub fn scramble(rng: &mut ChaCha8Rng, p: &Pencil) -> Pencil {
    let pm = to_matrix(&random_invertible(rng, p.rows(), 2));
    let qm = to_matrix(&random_invertible(rng, p.cols(), 2));
    p.transform(&pm, &qm).unwrap()
}
