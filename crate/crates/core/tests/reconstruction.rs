mod common;

use common::*;
use torelli_core::cli::files::parse_matrix_file;
use torelli_core::steiner::{build_steiner, LinForm, LinFormMatrix};
use torelli_core::torelli::{reconstruct_from_unstable, steiner_unstable_profile};

fn printed(name: &str) -> LinFormMatrix {
    parse_matrix_file(&std::fs::read_to_string(fixture_path(name)).unwrap()).unwrap()
}

#[test]
fn printed_matrices_rebuild_their_arrangements() {
    for (m, z) in [("no_printed_matrix.json", "no.json"), ("no2_printed_matrix.json", "no2.json")] {
        let m = printed(m);
        let z = fixture(z);
        let r = reconstruct_from_unstable(&m, &z, &[11, 13]).unwrap();
        assert!(r.shape_match && r.hilbert_match, "{z:?}");
        assert!(r.not_unstable.is_empty(), "{:?}", r.not_unstable);
        assert!(r.evidence_matches(), "{:?}", r.profiles);
        assert!(!r.screen_fired());
    }
}

#[test]
fn printed_and_built_profiles_agree() {
    let z = fixture("no2.json");
    let ours = build_steiner(&z).unwrap();
    let theirs = printed("no2_printed_matrix.json");
    for p in [11, 13, 17] {
        let a = steiner_unstable_profile(&ours.matrix, p).unwrap();
        let b = steiner_unstable_profile(&theirs, p).unwrap();
        assert_eq!(a.points, b.points, "p = {p}");
    }
}

#[test]
fn wrong_arrangement_is_caught() {
    let m = printed("no2_printed_matrix.json");
    let mut pts: Vec<Vec<i64>> =
        fixture("no2.json").points().iter().map(|p| p.to_strings().iter().map(|s| s.parse().unwrap()).collect()).collect();
    pts[8] = vec![1, 2, 3, 4];
    let z = arrangement(&pts).unwrap();
    let r = reconstruct_from_unstable(&m, &z, &[11, 13]).unwrap();
    assert!(!r.not_unstable.is_empty());
    assert!(!r.evidence_matches());
}

#[test]
fn a_split_hyperplane_block_fires_the_screen() {
    let z = fixture("no.json");
    let m = build_steiner(&z).unwrap().matrix;
    let q = point(&[2, -1, 3, 1]);
    let block = LinFormMatrix::from_entries(Q, 3, &[vec![LinForm::new(q.coords().to_vec())]]).unwrap();
    let big = m.direct_sum(&block).unwrap();
    let r = reconstruct_from_unstable(&big, &z.with_point(q).unwrap(), &[11, 13]).unwrap();
    assert!(r.screen_fired());
    assert!(r.screens.iter().any(|s| s.splits_off));
}
