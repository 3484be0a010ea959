//! Comparing an arbitrary Steiner matrix with the matrix rebuilt from its
//! observed unstable points.

use crate::error::{Error, Result};
use crate::exactlin::{dot, Field, Matrix, Scalar};
use crate::projgeom::{Arrangement, ProjPoint};
use crate::steiner::{build_steiner, hilbert_data, LinFormMatrix, ResolutionData, SteinerMatrix};
use crate::unstable::{is_unstable_matrix, scan_unstable, ScanResult};

/// Unstable points of `m` over `F_p` with their kernel dimensions.
pub fn steiner_unstable_profile(m: &LinFormMatrix, p: u64) -> Result<ScanResult> {
    if m.cols() != m.rows() + m.n() {
        return Err(Error::DimensionMismatch(format!(
            "Steiner shape needs b = a + n, got {}x{} in {} variables",
            m.rows(),
            m.cols(),
            m.n() + 1
        )));
    }
    let fp = Field::prime(p)?;
    let mp = match m.field() {
        Field::Rational => m.reduce(fp)?,
        f if f == fp => m.clone(),
        _ => return Err(Error::MixedField),
    };
    scan_unstable(&mp)
}

fn stacked(blocks: &[(Matrix, Matrix)], field: Field) -> Matrix {
    let rows: usize = blocks.iter().map(|(a, _)| a.rows()).sum();
    let (c0, c1) = (blocks[0].0.cols(), blocks[0].1.cols());
    let mut out = Matrix::zeros(field, rows, c0 + c1);
    let mut r = 0;
    for (a, b) in blocks {
        out.set_block(r, 0, a);
        out.set_block(r, c0, b);
        r += a.rows();
    }
    out
}

/// Whether `[f_z]` splits off `m` as a `1x1` block: some `u, x` with
/// `u^T M = f_z r^T`, `M x = f_z w` and `r·x ≠ 0`.
pub fn splits_off(m: &LinFormMatrix, z: &ProjPoint) -> Result<bool> {
    if z.dim() != m.n() {
        return Err(Error::DimensionMismatch("point and matrix in different spaces".into()));
    }
    let (a, b) = (m.rows(), m.cols());
    let field = m.field();
    let c = z.coords();
    let id_b = Matrix::identity(field, b);
    let id_a = Matrix::identity(field, a);
    // unknowns (u, r): M_k^T u - c_k r = 0
    let left: Vec<(Matrix, Matrix)> =
        m.slices().iter().zip(c).map(|(s, ck)| (s.transpose(), id_b.scale(&-ck))).collect();
    // unknowns (x, w): M_k x - c_k w = 0
    let right: Vec<(Matrix, Matrix)> = m.slices().iter().zip(c).map(|(s, ck)| (s.clone(), id_a.scale(&-ck))).collect();
    let rs: Vec<Vec<Scalar>> = stacked(&left, field).kernel_basis().into_iter().map(|k| k[a..].to_vec()).collect();
    let xs: Vec<Vec<Scalar>> = stacked(&right, field).kernel_basis().into_iter().map(|k| k[..b].to_vec()).collect();
    Ok(rs.iter().any(|r| xs.iter().any(|x| !dot(r, x).is_zero())))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProfileComparison {
    pub p: u64,
    pub observed: usize,
    pub reference: usize,
    pub only_observed: Vec<ProjPoint>,
    pub only_reference: Vec<ProjPoint>,
    /// `(point, observed dim, reference dim)`
    pub dim_mismatches: Vec<(ProjPoint, usize, usize)>,
}

impl ProfileComparison {
    pub fn matches(&self) -> bool {
        self.only_observed.is_empty() && self.only_reference.is_empty() && self.dim_mismatches.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SummandScreen {
    pub point: ProjPoint,
    pub observed_dim: usize,
    pub reference_dim: usize,
    pub splits_off: bool,
}

impl SummandScreen {
    pub fn fires(&self) -> bool {
        self.splits_off || self.observed_dim != self.reference_dim
    }
}

#[derive(Clone, Debug)]
pub struct ReconstructionReport {
    pub steiner: SteinerMatrix,
    pub shape_match: bool,
    pub hilbert: ResolutionData,
    pub hilbert_match: bool,
    /// Observed points that are not unstable for the input matrix.
    pub not_unstable: Vec<ProjPoint>,
    pub profiles: Vec<ProfileComparison>,
    pub bad_primes: Vec<(u64, String)>,
    pub screens: Vec<SummandScreen>,
}

impl ReconstructionReport {
    pub fn screen_fired(&self) -> bool {
        self.screens.iter().any(SummandScreen::fires)
    }

    /// All collected evidence agrees and at least two primes were compared.
    pub fn evidence_matches(&self) -> bool {
        self.shape_match
            && self.hilbert_match
            && self.not_unstable.is_empty()
            && self.profiles.len() >= 2
            && self.profiles.iter().all(ProfileComparison::matches)
            && !self.screen_fired()
    }
}

fn compare(p: u64, obs: &ScanResult, refr: &ScanResult) -> ProfileComparison {
    let only_observed = obs.points.iter().filter(|(q, _)| refr.dim_of(q).is_none()).map(|(q, _)| q.clone()).collect();
    let only_reference = refr.points.iter().filter(|(q, _)| obs.dim_of(q).is_none()).map(|(q, _)| q.clone()).collect();
    let dim_mismatches = obs
        .points
        .iter()
        .filter_map(|(q, d)| refr.dim_of(q).filter(|e| e != d).map(|e| (q.clone(), *d, e)))
        .collect();
    ProfileComparison { p, observed: obs.points.len(), reference: refr.points.len(), only_observed, only_reference, dim_mismatches }
}

pub fn reconstruct_from_unstable(m: &LinFormMatrix, z: &Arrangement, primes: &[u64]) -> Result<ReconstructionReport> {
    let l = m.cols() + 1;
    if z.len() != l {
        return Err(Error::InvalidInput(format!("need exactly b+1 = {l} observed points, got {}", z.len())));
    }
    if z.n() != m.n() {
        return Err(Error::DimensionMismatch("points and matrix in different spaces".into()));
    }
    if z.field() != m.field() {
        return Err(Error::MixedField);
    }
    if !z.is_nondegenerate() {
        return Err(Error::Degenerate { span: z.span_dim(), n: z.n() });
    }
    let steiner = build_steiner(z)?;
    let shape_match = (steiner.a(), steiner.b()) == (m.rows(), m.cols());
    let hilbert = hilbert_data(l, z.n())?;
    let observed = ResolutionData::from_shape(m.rows(), m.cols(), m.n());
    let hilbert_match = observed == hilbert;

    let mut not_unstable = Vec::new();
    let mut screens = Vec::new();
    for q in z.points() {
        let obs = is_unstable_matrix(m, q)?;
        let refr = is_unstable_matrix(&steiner.matrix, q)?;
        if !obs.unstable {
            not_unstable.push(q.clone());
        }
        screens.push(SummandScreen {
            point: q.clone(),
            observed_dim: obs.dim,
            reference_dim: refr.dim,
            splits_off: splits_off(m, q)?,
        });
    }

    let mut profiles = Vec::new();
    let mut bad_primes = Vec::new();
    for &p in primes {
        let both = steiner_unstable_profile(m, p).and_then(|o| Ok((o, steiner_unstable_profile(&steiner.matrix, p)?)));
        match both {
            Ok((o, r)) => profiles.push(compare(p, &o, &r)),
            Err(e) => bad_primes.push((p, e.to_string())),
        }
    }
    Ok(ReconstructionReport { steiner, shape_match, hilbert, hilbert_match, not_unstable, profiles, bad_primes, screens })
}
