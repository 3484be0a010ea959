//! Acceptance checks. Each test prints one `criterion N: PASS|FAIL` line.

mod common;

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use rand::Rng;
use serde_json::Value;

use common::*;
use torelli_core::cli::files::{parse_matrix, parse_matrix_file};
use torelli_core::cli::run;
use torelli_core::exactlin::{Field, Matrix, Scalar};
use torelli_core::kw::{kronecker_form, kw_from_unstable, KwType};
use torelli_core::projgeom::{Arrangement, LinearSubspace, ProjPoint};
use torelli_core::steiner::{build_steiner, decompose, local_arrangement, refine, LinFormMatrix};
use torelli_core::torelli::{decide_torelli, verify_certificate, Verdict};
use torelli_core::unstable::{
    is_unstable_matrix, is_unstable_sections, point_count, rank_one_at, scan_arrangement, ScanResult,
};

const RUNTIME_1: Duration = Duration::from_secs(1);
const RUNTIME_2: Duration = Duration::from_secs(10);
const RUNTIME_4: Duration = Duration::from_secs(30);
const FLIP_MIN: usize = 95;

fn report(n: u32, pass: bool, detail: String) {
    println!("criterion {n}: {} {detail}", if pass { "PASS" } else { "FAIL" });
    assert!(pass, "criterion {n}: {detail}");
}

fn cli_json(args: &[&str]) -> Value {
    let mut full = vec!["torelli"];
    full.extend_from_slice(args);
    let out = run(full);
    assert_eq!(out.code, 0, "{}", out.stderr);
    serde_json::from_str(&out.stdout).unwrap()
}

fn fixture_arg(name: &str) -> String {
    fixture_path(name).to_string_lossy().into_owned()
}

/// Rows flattened to `b(n+1)` coefficients.
fn flat(m: &LinFormMatrix) -> Matrix {
    let rows: Vec<Vec<Scalar>> =
        m.entries().iter().map(|r| r.iter().flat_map(|f| f.coeffs().to_vec()).collect()).collect();
    Matrix::from_rows(m.field(), &rows).unwrap()
}

/// Row equivalence of two matrices of forms after scaling each column of
/// `ours` to the representative used by `printed`.
fn row_equivalent(ours: &LinFormMatrix, printed: &LinFormMatrix, fixture: &Arrangement) -> bool {
    let f = ours.field();
    let mut scaled = ours.clone();
    for i in 0..ours.cols() {
        let z = torelli_core::steiner::LinForm::new(fixture.points()[i].coords().to_vec());
        for j in 0..ours.rows() {
            let e = ours.entry(j, i);
            let Some(r) = e.ratio_to(&z) else { return false };
            scaled.set(j, i, &z.scale(&r));
        }
        let _ = f;
    }
    flat(&scaled).rref().matrix == flat(printed).rref().matrix
}

/// Steiner matrix from the `build-matrix` report, columns restored to file order.
fn built_matrix(report: &Value) -> LinFormMatrix {
    let m = parse_matrix(Field::Rational, &report["result"]["matrix"]).unwrap();
    let order: Vec<usize> = serde_json::from_value(report["result"]["order"].clone()).unwrap();
    let mut out = m.clone();
    for (c, &orig) in order.iter().take(m.cols()).enumerate() {
        assert!(orig < m.cols(), "dropped point must be the last one of the file");
        for j in 0..m.rows() {
            out.set(j, orig, &m.entry(j, c));
        }
    }
    out
}

fn line_points(p: u64, eqs: &[Vec<i64>], n: usize) -> BTreeSet<ProjPoint> {
    let f = Field::Prime(p);
    (0..point_count(n, p))
        .map(|i| torelli_core::unstable::scan::point_at(n, p, i))
        .filter(|c| eqs.iter().all(|e| e.iter().zip(c).map(|(a, b)| a * *b as i64).sum::<i64>() % p as i64 == 0))
        .map(|c| ProjPoint::new(c.iter().map(|&x| f.from_i64(x as i64)).collect()).unwrap())
        .collect()
}

fn scan_set(s: &ScanResult) -> BTreeSet<ProjPoint> {
    s.point_set().into_iter().collect()
}

#[test]
fn criterion_1_example_no_matrix() {
    let t = Instant::now();
    let rep = cli_json(&["build-matrix", &fixture_arg("no.json")]);
    let elapsed = t.elapsed();
    let z = fixture("no.json");
    let ours = built_matrix(&rep);
    let printed = parse_matrix_file(&std::fs::read_to_string(fixture_path("no_printed_matrix.json")).unwrap()).unwrap();
    let equiv = row_equivalent(&ours, &printed, &z);
    let f7 = torelli_core::steiner::LinForm::new(point(&[1, 0, 1, 1]).coords().to_vec());
    let row_sums = (0..ours.rows()).all(|j| {
        let mut s = torelli_core::steiner::LinForm::zero(Field::Rational, 3);
        for i in 0..ours.cols() {
            s = s.add(&ours.entry(j, i));
        }
        s == f7
    });
    let verified = rep["result"]["verify"]["ok"] == Value::Bool(true);
    report(
        1,
        equiv && row_sums && verified && elapsed < RUNTIME_1,
        format!("row-equivalent={equiv} row-sums=f7:{row_sums} invariants={verified} time={elapsed:?} (limit {RUNTIME_1:?})"),
    );
}

#[test]
fn criterion_2_example_no_scan() {
    let z = fixture("no.json");
    let t = Instant::now();
    let (zp, s) = scan_arrangement(&z, 11).unwrap();
    let elapsed = t.elapsed();
    let mut expected = line_points(11, &[vec![0, 0, 1, 0], vec![0, 0, 0, 1]], 3);
    expected.extend(zp.points().iter().cloned());
    let got = scan_set(&s);
    let m = build_steiner(&z).unwrap();
    let unstable = |c: &[i64]| {
        let y = point(c);
        let a = is_unstable_matrix(&m.matrix, &y).unwrap().unstable;
        let b = is_unstable_sections(&z, &y).unwrap().unstable;
        assert_eq!(a, b, "{y}");
        a
    };
    let specific = unstable(&[1, 0, 0, 0]) && unstable(&[2, 1, 0, 0]) && !unstable(&[0, 1, 1, 1]);
    report(
        2,
        got == expected && got.len() == 17 && specific && elapsed < RUNTIME_2,
        format!("|W(F_11)|={} equals Z∪L0={} specific-points={specific} time={elapsed:?} (limit {RUNTIME_2:?})", got.len(), got == expected),
    );
}

#[test]
fn criterion_3_example_no_decomposition() {
    let z = fixture("no.json");
    let y = kw_from_unstable(&z, &point(&[2, 1, 0, 0])).unwrap();
    let dec = decompose(&z, &y).unwrap();
    let one = num_rational::BigRational::from_integer(1.into());
    let slopes_one = dec.total.slope_q() == one && dec.pieces.iter().all(|p| p.data.slope_q() == one);
    let shapes = dec.shapes();
    let local = local_arrangement(&dec.pieces[1]).unwrap();
    let yl = ProjPoint::from_i64(Field::Rational, &[2, 2, 1]);
    let kw_l = kw_from_unstable(&local, &yl).unwrap();
    let refined = refine(&dec, 1, &kw_l).unwrap();
    let summands: Vec<bool> = refined.pieces.iter().map(|p| p.summand).collect();
    // the flagged piece is attached at ζ3 = (1:0:1:1)
    let zeta3 = point(&[1, 0, 1, 1]);
    let flagged_at_zeta3 = refined.pieces.iter().filter(|p| p.summand).all(|p| p.points.contains(&zeta3));
    let pass = shapes == vec![(1, 1), (2, 2)]
        && dec.additive()
        && slopes_one
        && refined.shapes() == vec![(1, 1), (1, 1), (1, 1)]
        && summands.iter().filter(|&&s| s).count() == 1
        && flagged_at_zeta3
        && refined.additive();
    report(
        3,
        pass,
        format!("pieces={shapes:?} slopes=1:{slopes_one} refined={:?} summand-flags={summands:?}", refined.shapes()),
    );
}

#[test]
fn criterion_4_example_no2() {
    let t = Instant::now();
    let rep = cli_json(&["build-matrix", &fixture_arg("no2.json")]);
    let z = fixture("no2.json");
    let ours = built_matrix(&rep);
    let printed = parse_matrix_file(&std::fs::read_to_string(fixture_path("no2_printed_matrix.json")).unwrap()).unwrap();
    let equiv = (ours.rows(), ours.cols()) == (5, 8) && row_equivalent(&ours, &printed, &z);
    let mut counts = Vec::new();
    let mut sets_ok = true;
    for p in [11u64, 13] {
        let (zp, s) = scan_arrangement(&z, p).unwrap();
        let mut expected = line_points(p, &[vec![0, 0, 1, 0], vec![0, 0, 0, 1]], 3);
        expected.extend(zp.points().iter().cloned());
        sets_ok &= scan_set(&s) == expected;
        counts.push(s.points.len());
    }
    let d = decide_torelli(&z, &[11, 13]).unwrap();
    let elapsed = t.elapsed();
    let (ty, cert_ok) = match &d.verdict {
        Verdict::NonTorelli(c) => (Some(c.kw.kw_type()), verify_certificate(&z, c).is_ok()),
        _ => (None, false),
    };
    let type_ok = ty.as_ref().is_some_and(|t| t.d == 1 && t.s() == 1);
    report(
        4,
        equiv && sets_ok && counts == vec![18, 20] && type_ok && cert_ok && elapsed < RUNTIME_4,
        format!(
            "row-equivalent={equiv} |W|={counts:?} W=Z∪L0:{sets_ok} certificate={} verified={cert_ok} time={elapsed:?} (limit {RUNTIME_4:?})",
            ty.map_or("none".into(), |t| t.to_string())
        ),
    );
}

#[test]
fn criterion_5_plane_completeness() {
    let mut rng = rng(5);
    let kinds = [PlaneKind::General, PlaneKind::SmoothConic, PlaneKind::LinePair, PlaneKind::LinePlusPoint];
    let mut mismatches = Vec::new();
    let mut unknown = 0;
    let mut on = 0;
    let mut sample = Vec::new();
    for i in 0..200 {
        let l = rng.gen_range(6..=10);
        let pts = random_plane(&mut rng, kinds[i % 4], l);
        let z = arrangement(&pts).unwrap();
        let oracle = on_conic(&pts);
        on += oracle as usize;
        let d = decide_torelli(&z, &[]).unwrap();
        match &d.verdict {
            Verdict::Unknown(_) => unknown += 1,
            v => {
                if v.is_non_torelli() != oracle {
                    mismatches.push(format!("{pts:?}"));
                }
                if let Verdict::NonTorelli(c) = v {
                    if verify_certificate(&z, c).is_err() {
                        mismatches.push(format!("certificate of {pts:?}"));
                    }
                }
            }
        }
        // scan sample: distinct points mod 11 and the same conic answer
        if sample.len() < 30 && z.reduce_mod_p(11).is_ok() && on_conic_mod(&pts, 11) == oracle {
            sample.push((pts, oracle));
        }
    }
    let mut scan_mismatch = 0;
    for (pts, oracle) in &sample {
        let z = arrangement(pts).unwrap();
        let (zp, s) = scan_arrangement(&z, 11).unwrap();
        let extra = s.points.len() > zp.len();
        if extra != *oracle {
            scan_mismatch += 1;
        }
    }
    report(
        5,
        mismatches.is_empty() && unknown == 0 && sample.len() == 30 && scan_mismatch == 0,
        format!(
            "200 arrangements ({on} on a conic): mismatches={} unknown={unknown}; mod-11 scans {} with {scan_mismatch} mismatches",
            mismatches.len(),
            sample.len()
        ),
    );
}

#[test]
fn criterion_6_two_tests_agree() {
    let mut rng = rng(6);
    let mut arrangements = 0;
    let mut failures = Vec::new();
    let mut offz = 0;
    let mut offz_unstable = 0;
    while arrangements < 300 {
        let n = [2usize, 3, 4][arrangements % 3];
        let (z, kw) = if arrangements % 2 == 0 {
            let l = rng.gen_range(n + 2..=10);
            let pts: Vec<Vec<i64>> = (0..l).map(|_| (0..=n).map(|_| rng.gen_range(-4..=4)).collect()).collect();
            if pts.iter().any(|p| p.iter().all(|&x| x == 0)) {
                continue;
            }
            match arrangement(&pts) {
                Some(z) if z.is_nondegenerate() => (z, None),
                _ => continue,
            }
        } else if n == 2 {
            let l = rng.gen_range(5..=10);
            let pts = random_plane(&mut rng, PlaneKind::SmoothConic, l);
            (arrangement(&pts).unwrap(), None)
        } else {
            let types = kw_types(n);
            let (d, dims) = &types[rng.gen_range(0..types.len())];
            let g = generate_kw(&mut rng, n, *d, dims, n + 2, 10);
            (g.arrangement(), Some(g))
        };
        arrangements += 1;
        let m = build_steiner(&z).unwrap();
        for p in z.points() {
            if !is_unstable_matrix(&m.matrix, p).unwrap().unstable {
                failures.push(format!("{p} not unstable"));
            }
        }
        // off-Z points: random ones, and points of the generated variety
        let per = if arrangements <= 200 { 2 } else { 1 };
        let (mut k, mut tries) = (0, 0);
        while k < per && tries < 50 && offz < 500 {
            tries += 1;
            let v: Vec<i64> = match (&kw, k) {
                (Some(g), 0) if g.d > 0 => {
                    let t = rng.gen_range(-9..=9i64);
                    let mut c = vec![0; n + 1];
                    for (i, x) in c.iter_mut().take(g.d + 1).enumerate() {
                        *x = t.pow(i as u32);
                    }
                    g.map(&c)
                }
                (Some(g), 0) if tries == 1 => g.map(&g.attach[0]),
                _ => (0..=n).map(|_| rng.gen_range(-5..=5)).collect(),
            };
            if v.iter().all(|&x| x == 0) {
                continue;
            }
            let y = point(&v);
            if z.contains(&y) {
                continue;
            }
            offz += 1;
            k += 1;
            let a = is_unstable_matrix(&m.matrix, &y).unwrap().unstable;
            let b = is_unstable_sections(&z, &y).unwrap().unstable;
            offz_unstable += a as usize;
            if a != b {
                failures.push(format!("tests disagree at {y}"));
            }
        }
    }
    report(
        6,
        failures.is_empty() && offz == 500,
        format!("300 arrangements, {offz} off-Z points ({offz_unstable} unstable): {} mismatches", failures.len()),
    );
}

#[test]
fn criterion_7_kronecker_suite() {
    let mut rng = rng(7);
    let mut bad = Vec::new();
    let mut shapes = BTreeSet::new();
    for i in 0..200 {
        let planted = planted_pencil(&mut rng, 8);
        let n = scramble(&mut rng, &planted.pencil);
        shapes.insert((n.rows(), n.cols()));
        match kronecker_form(&n) {
            Ok(kf) => {
                if kf.inventory() != planted.inventory {
                    bad.push(format!("#{i}: inventory {:?} != {:?}", kf.inventory(), planted.inventory));
                } else if !kf.verify(&n) {
                    bad.push(format!("#{i}: P N Q differs from the canonical form"));
                }
            }
            Err(e) => bad.push(format!("#{i}: {e}")),
        }
    }
    for b in bad.iter().take(5) {
        println!("  {b}");
    }
    let largest = shapes.iter().max().copied().unwrap_or_default();
    report(7, bad.is_empty(), format!("200 scrambled pencils, largest {}x{}: {} failures", largest.0, largest.1, bad.len()));
}

#[test]
fn criterion_8_kw_round_trip() {
    let mut rng = rng(8);
    let mut forward_fail = Vec::new();
    let mut flipped = 0;
    let mut explained = 0;
    let mut unexplained = Vec::new();
    let mut per_type: Vec<String> = Vec::new();
    let cases: Vec<(usize, usize, Vec<usize>)> = (0..100)
        .map(|i| {
            let n = if i % 2 == 0 { 3 } else { 4 };
            let t = kw_types(n);
            let (d, dims) = t[(i / 2) % t.len()].clone();
            (n, d, dims)
        })
        .collect();
    for (i, (n, d, dims)) in cases.iter().enumerate() {
        let g = generate_kw_spare(&mut rng, *n, *d, dims, n + 4, 12, 1);
        let z = g.arrangement();
        let primes = [11u64, 13, 17, 19, 23];
        let dec = decide_torelli(&z, &primes).unwrap();
        match &dec.verdict {
            Verdict::NonTorelli(c) if verify_certificate(&z, c).is_ok() && z.points().iter().all(|p| rank_one_at(&c.kw.matrix, p.coords())) => {}
            v => forward_fail.push(format!("#{i} {} {:?}", g.type_label(), verdict_name(v))),
        }
        let (_, pts) = perturb(&mut rng, &g);
        let zp = arrangement(&pts).unwrap();
        let back = decide_torelli(&zp, &primes).unwrap();
        match &back.verdict {
            Verdict::Torelli(_) => flipped += 1,
            Verdict::NonTorelli(c) if verify_certificate(&zp, c).is_ok() => {
                explained += 1;
                per_type.push(format!("#{i} {} -> second certificate {} at {}", g.type_label(), c.kw.kw_type().with_dims(), c.y));
            }
            v => unexplained.push(format!("#{i} {} {:?}", g.type_label(), verdict_name(v))),
        }
    }
    for l in forward_fail.iter().chain(&unexplained).chain(&per_type).take(10) {
        println!("  {l}");
    }
    report(
        8,
        forward_fail.is_empty() && flipped >= FLIP_MIN && unexplained.is_empty() && flipped + explained == 100,
        format!(
            "100 KW samples: forward failures={}; perturbed: {flipped} Torelli, {explained} with a second certificate, {} unexplained (need >= {FLIP_MIN})",
            forward_fail.len(),
            unexplained.len()
        ),
    );
}

fn verdict_name(v: &Verdict) -> String {
    match v {
        Verdict::Torelli(r) => format!("Torelli({r:?})"),
        Verdict::NonTorelli(c) => format!("NonTorelli({})", c.kw.kw_type().with_dims()),
        Verdict::Unknown(d) => format!("Unknown({d:?})"),
    }
}

#[test]
fn criterion_9_two_planes() {
    let z = fixture("p4_two_planes.json");
    let f = Field::Rational;
    let eq = |rows: &[[i64; 5]]| {
        LinearSubspace::from_equations(f, 4, &rows.iter().map(|r| r.iter().map(|&x| f.from_i64(x)).collect()).collect::<Vec<_>>()).unwrap()
    };
    let l1 = eq(&[[0, 0, 0, 1, 0], [0, 0, 0, 0, 1]]);
    let l2 = eq(&[[0, 1, 0, 0, 0], [0, 0, 1, 0, 0]]);
    let on_planes = z.points().iter().all(|p| l1.contains(p) ^ l2.contains(p));
    let (zp, s) = scan_arrangement(&z, 7).unwrap();
    let y7 = ProjPoint::from_i64(Field::Prime(7), &[1, 0, 0, 0, 0]);
    let mut expected: BTreeSet<ProjPoint> = zp.points().iter().cloned().collect();
    expected.insert(y7);
    let got = scan_set(&s);
    let rep = cli_json(&["kw-certify", &fixture_arg("p4_two_planes.json"), "--point", "1,0,0,0,0"]);
    let ty = rep["result"]["type"].as_str().unwrap_or("").to_string();
    let kw = kw_from_unstable(&z, &point(&[1, 0, 0, 0, 0])).unwrap();
    let pass = on_planes && got == expected && ty == "(0;2)" && kw.kw_type() == KwType::new(0, vec![2, 2]);
    report(9, pass, format!("Z on L1∪L2={on_planes} |W(F_7)|={} equals Z∪{{y}}={} kw-certify type={ty}", got.len(), got == expected));
}
