//! Instability through sections: tuples `g` of linear forms on `P_n` with
//! `g(z)` proportional to `h(z)` at every point of `Z`, where `h` cuts out
//! `y`.

use crate::exactlin::{Matrix, Scalar};
use crate::error::{Error, Result};
use crate::projgeom::{Arrangement, ProjPoint};
use crate::steiner::LinForm;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SectionTest {
    pub unstable: bool,
    pub dim: usize,
    /// Forms `h_1..h_n` cutting out `y`.
    pub h: Vec<LinForm>,
    /// A solution independent of `h`, when one exists.
    pub g: Option<Vec<LinForm>>,
}

/// Deterministic forms cutting out `y`: the RREF kernel basis of `[y]`.
pub fn forms_through(y: &ProjPoint) -> Vec<LinForm> {
    let row = Matrix::from_rows(y.field(), &[y.coords().to_vec()]).expect("one row");
    row.kernel_basis().into_iter().map(LinForm::new).collect()
}

fn flatten(forms: &[LinForm]) -> Vec<Scalar> {
    forms.iter().flat_map(|f| f.coeffs().iter().cloned()).collect()
}

fn unflatten(v: &[Scalar], n: usize) -> Vec<LinForm> {
    v.chunks(n + 1).map(|c| LinForm::new(c.to_vec())).collect()
}

pub fn is_unstable_sections(z: &Arrangement, y: &ProjPoint) -> Result<SectionTest> {
    if z.contains(y) {
        return Err(Error::Hypothesis(format!("{y} belongs to Z")));
    }
    sections_with_h(z, y, forms_through(y))
}

/// Same test with a caller-chosen basis `h` of the forms vanishing at `y`.
pub fn sections_with_h(z: &Arrangement, y: &ProjPoint, h: Vec<LinForm>) -> Result<SectionTest> {
    let n = z.n();
    if y.dim() != n {
        return Err(Error::DimensionMismatch("point and arrangement in different spaces".into()));
    }
    if h.len() != n || h.iter().any(|f| !f.eval(y.coords()).is_zero()) {
        return Err(Error::InvalidInput("h must be n forms vanishing at y".into()));
    }
    let field = z.field();
    let unknowns = n * (n + 1);
    let mut rows = Vec::new();
    for p in z.points() {
        let hz: Vec<Scalar> = h.iter().map(|f| f.eval(p.coords())).collect();
        for a in 0..n {
            for b in a + 1..n {
                // h_a(z) g_b(z) - h_b(z) g_a(z) = 0
                let mut row = vec![field.zero(); unknowns];
                for (k, zk) in p.coords().iter().enumerate() {
                    row[b * (n + 1) + k] = &hz[a] * zk;
                    row[a * (n + 1) + k] = -&(&hz[b] * zk);
                }
                rows.push(row);
            }
        }
    }
    let ker = if rows.is_empty() {
        Matrix::identity(field, unknowns).row_vecs()
    } else {
        Matrix::from_rows(field, &rows)?.kernel_basis()
    };
    let hflat = flatten(&h);
    let g = ker
        .iter()
        .find(|v| crate::exactlin::rank_of(field, &[hflat.clone(), (*v).clone()]) == 2)
        .map(|v| unflatten(v, n));
    Ok(SectionTest { unstable: ker.len() >= 2, dim: ker.len(), h, g })
}

/// The `2 x n` matrix `[h; g]` of linear forms in `z`.
pub fn witness_matrix(t: &SectionTest) -> Option<[Vec<LinForm>; 2]> {
    t.g.clone().map(|g| [t.h.clone(), g])
}

/// All 2x2 minors of `[h(z); g(z)]` vanish.
pub fn rank_one_at(m: &[Vec<LinForm>; 2], z: &[Scalar]) -> bool {
    let h: Vec<Scalar> = m[0].iter().map(|f| f.eval(z)).collect();
    let g: Vec<Scalar> = m[1].iter().map(|f| f.eval(z)).collect();
    for a in 0..h.len() {
        for b in a + 1..h.len() {
            if &h[a] * &g[b] != &h[b] * &g[a] {
                return false;
            }
        }
    }
    true
}

/// Re-checks a section witness: `h` cuts out `y`, `g` is independent of
/// `h`, and `[h; g]` has rank at most one on `Z`.
pub fn verify_section_witness(z: &Arrangement, y: &ProjPoint, h: &[LinForm], g: &[LinForm]) -> bool {
    let n = z.n();
    if h.len() != n || g.len() != n {
        return false;
    }
    let hm = Matrix::from_rows(y.field(), &h.iter().map(|f| f.coeffs().to_vec()).collect::<Vec<_>>());
    let Ok(hm) = hm else { return false };
    if hm.rank() != n || h.iter().any(|f| !f.eval(y.coords()).is_zero()) {
        return false;
    }
    if crate::exactlin::rank_of(y.field(), &[flatten(h), flatten(g)]) != 2 {
        return false;
    }
    let m = [h.to_vec(), g.to_vec()];
    z.points().iter().all(|p| rank_one_at(&m, p.coords()))
}
