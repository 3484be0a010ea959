//! Kronecker canonical form of a pencil `A ξ0 + B ξ1`.
//!
//! Column minimal indices come first, found as minimal-degree polynomial
//! kernel vectors and split off one at a time; row minimal indices are the
//! column indices of the transpose. What remains is a square regular
//! pencil, decomposed along the factors of its determinant.

use crate::exactlin::{complete_basis, factor_binary_form, rank_of, BinaryForm, Field, Matrix, Poly, Scalar};
use crate::error::{Error, Result};

use super::pencil::Pencil;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BlockKind {
    /// `ε x (ε+1)`, `ξ0` on the diagonal and `ξ1` on the superdiagonal.
    Column { eps: usize },
    /// `(η+1) x η`, the transpose of a column block.
    Row { eta: usize },
    /// Regular block for one irreducible factor of the determinant.
    ///
    /// For a linear factor `f` the block is `f·I + τ·J`, with `J` the
    /// nilpotent Jordan matrix of the partition (superdiagonal ones) and
    /// `τ = ξ1` unless `f = ξ1`, in which case `τ = ξ0`. Higher-degree
    /// factors keep a compressed block `s·I + t·W` instead.
    Regular { factor: BinaryForm, multiplicity: usize, partition: Vec<usize>, jordan: bool, irreducible: bool },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Block {
    pub kind: BlockKind,
    pub pencil: Pencil,
}

impl Block {
    pub fn rows(&self) -> usize {
        self.pencil.rows()
    }

    pub fn cols(&self) -> usize {
        self.pencil.cols()
    }
}

/// Order-independent summary of the blocks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Inventory {
    pub column: Vec<usize>,
    pub row: Vec<usize>,
    pub regular: Vec<(BinaryForm, Vec<usize>)>,
}

/// `P · N · Q = canonical`, with `canonical` block diagonal.
#[derive(Clone, Debug)]
pub struct KroneckerForm {
    pub p: Matrix,
    pub q: Matrix,
    pub blocks: Vec<Block>,
    pub canonical: Pencil,
}

impl KroneckerForm {
    pub fn inventory(&self) -> Inventory {
        let mut inv = Inventory { column: vec![], row: vec![], regular: vec![] };
        for b in &self.blocks {
            match &b.kind {
                BlockKind::Column { eps } => inv.column.push(*eps),
                BlockKind::Row { eta } => inv.row.push(*eta),
                BlockKind::Regular { factor, partition, .. } => inv.regular.push((factor.clone(), partition.clone())),
            }
        }
        inv.column.sort_unstable();
        inv.row.sort_unstable();
        inv.regular.sort_by(|a, b| a.0.coeffs().cmp(b.0.coeffs()).then(a.1.cmp(&b.1)));
        inv
    }

    /// Column offset of each block in `Q`.
    pub fn col_offsets(&self) -> Vec<usize> {
        let mut acc = 0;
        self.blocks
            .iter()
            .map(|b| {
                let o = acc;
                acc += b.cols();
                o
            })
            .collect()
    }

    pub fn verify(&self, n: &Pencil) -> bool {
        n.transform(&self.p, &self.q).is_ok_and(|t| t == self.canonical)
    }
}

pub fn column_block(field: Field, eps: usize) -> Pencil {
    let mut a = Matrix::zeros(field, eps, eps + 1);
    let mut b = Matrix::zeros(field, eps, eps + 1);
    for i in 0..eps {
        a.set(i, i, field.one());
        b.set(i, i + 1, field.one());
    }
    Pencil::new(a, b).expect("shape")
}

/// Nilpotent Jordan matrix with superdiagonal ones, blocks in the given
/// order.
pub fn nilpotent_jordan(field: Field, partition: &[usize]) -> Matrix {
    let k: usize = partition.iter().sum();
    let mut j = Matrix::zeros(field, k, k);
    let mut o = 0;
    for &s in partition {
        for i in 0..s.saturating_sub(1) {
            j.set(o + i, o + i + 1, field.one());
        }
        o += s;
    }
    j
}

/// Canonical regular block `f·I + τ·J` for a linear factor `f`.
pub fn jordan_block(f: &BinaryForm, partition: &[usize]) -> Pencil {
    let field = f.field();
    let k: usize = partition.iter().sum();
    let j = nilpotent_jordan(field, partition);
    let (f0, f1) = (&f.coeffs()[0], &f.coeffs()[1]);
    let (t0, t1) = tau_of(f);
    let id = Matrix::identity(field, k);
    let a = id.scale(f0).add(&j.scale(&t0)).expect("shape");
    let b = id.scale(f1).add(&j.scale(&t1)).expect("shape");
    Pencil::new(a, b).expect("shape")
}

fn tau_of(f: &BinaryForm) -> (Scalar, Scalar) {
    let field = f.field();
    if f.coeffs()[0].is_zero() {
        (field.one(), field.zero())
    } else {
        (field.zero(), field.one())
    }
}

fn embed(field: Field, lead: usize, m: &Matrix) -> Matrix {
    Matrix::block_diag(field, &[Matrix::identity(field, lead), m.clone()])
}

/// Smallest `ε` with a nonzero `x(ξ) = Σ x_i ξ0^{ε-i} ξ1^i` in the kernel,
/// and the coefficient vectors `x_0..x_ε`.
fn min_column_index(n: &Pencil) -> Option<(usize, Vec<Vec<Scalar>>)> {
    let (m, q) = (n.rows(), n.cols());
    let field = n.field();
    if q == 0 {
        return None;
    }
    for eps in 0..=m {
        // block row k: A x_k + B x_{k-1} = 0, k = 0..=ε+1
        let mut t = Matrix::zeros(field, (eps + 2) * m, (eps + 1) * q);
        for k in 0..=eps + 1 {
            if k <= eps {
                t.set_block(k * m, k * q, n.a());
            }
            if k >= 1 {
                t.set_block(k * m, (k - 1) * q, n.b());
            }
        }
        let ker = if t.rows() == 0 {
            Matrix::identity(field, t.cols()).row_vecs()
        } else {
            t.kernel_basis()
        };
        if let Some(v) = ker.into_iter().next() {
            return Some((eps, v.chunks(q).map(|c| c.to_vec()).collect()));
        }
    }
    None
}

/// Splits one minimal column block off `n`: returns `(ε, P, Q)` with
/// `P·n·Q = diag(L_ε, rest)`.
fn split_column(n: &Pencil) -> Result<Option<(usize, Matrix, Matrix)>> {
    let Some((eps, xs)) = min_column_index(n) else { return Ok(None) };
    let field = n.field();
    let (m, q) = (n.rows(), n.cols());
    let sign = |j: usize| if j.is_multiple_of(2) { field.one() } else { -field.one() };
    let cols: Vec<Vec<Scalar>> =
        (0..=eps).map(|j| xs[eps - j].iter().map(|x| &sign(j) * x).collect()).collect();
    let mut qcols = cols.clone();
    qcols.extend(complete_basis(field, &cols, q));
    let qloc = Matrix::from_cols(field, &qcols, q)?;
    let rows: Vec<Vec<Scalar>> = (0..eps).map(|j| n.a().mul_vec(&cols[j])).collect::<Result<_>>()?;
    if rank_of(field, &rows) != rows.len() {
        return Err(Error::Internal("column block images are dependent".into()));
    }
    let mut pcols = rows.clone();
    pcols.extend(complete_basis(field, &rows, m));
    let ploc = Matrix::from_cols(field, &pcols, m)?.inverse()?;
    let t = n.transform(&ploc, &qloc)?;
    let (mr, qr) = (m - eps, q - eps - 1);
    let mut pfix = Matrix::identity(field, m);
    let mut qfix = Matrix::identity(field, q);
    let d = t.sub(0..eps, eps + 1..q);
    if !(d.a().is_zero() && d.b().is_zero()) {
        // L X + Y N' = -D, coefficientwise in ξ0 and ξ1
        let l = t.sub(0..eps, 0..eps + 1);
        let rest = t.sub(eps..m, eps + 1..q);
        let nx = (eps + 1) * qr;
        let unknowns = nx + eps * mr;
        let mut sys = Vec::new();
        let mut rhs = Vec::new();
        for (lm, rm, dm) in [(l.a(), rest.a(), d.a()), (l.b(), rest.b(), d.b())] {
            for e in 0..eps {
                for c in 0..qr {
                    let mut row = vec![field.zero(); unknowns];
                    for r in 0..=eps {
                        row[r * qr + c] = lm.get(e, r).clone();
                    }
                    for s in 0..mr {
                        row[nx + e * mr + s] = rm.get(s, c).clone();
                    }
                    sys.push(row);
                    rhs.push(-dm.get(e, c));
                }
            }
        }
        let sol = Matrix::from_rows(field, &sys)?.solve(&rhs)?;
        let Some(v) = sol.particular else {
            return Err(Error::Internal(format!("coupling of column block L_{eps} not removable")));
        };
        for r in 0..=eps {
            for c in 0..qr {
                qfix.set(r, eps + 1 + c, v[r * qr + c].clone());
            }
        }
        for e in 0..eps {
            for s in 0..mr {
                pfix.set(e, eps + s, v[nx + e * mr + s].clone());
            }
        }
    }
    Ok(Some((eps, pfix.mul(&ploc)?, qloc.mul(&qfix)?)))
}

/// Jordan basis of a nilpotent matrix: `S^{-1} X S` is the nilpotent Jordan
/// matrix of the returned partition (weakly decreasing).
pub fn nilpotent_jordan_basis(x: &Matrix) -> Result<(Matrix, Vec<usize>)> {
    let field = x.field();
    let k = x.rows();
    let mut kernels: Vec<Vec<Vec<Scalar>>> = vec![vec![]];
    let mut pw = Matrix::identity(field, k);
    while kernels.last().map_or(0, Vec::len) < k {
        pw = pw.mul(x)?;
        let ker = pw.kernel_basis();
        if ker.len() <= kernels.last().map_or(0, Vec::len) {
            return Err(Error::Internal("matrix is not nilpotent".into()));
        }
        kernels.push(ker);
    }
    let top = kernels.len() - 1;
    // chains as (generator, length)
    let mut chains: Vec<(Vec<Scalar>, usize)> = Vec::new();
    let apply = |v: &[Scalar], times: usize| -> Result<Vec<Scalar>> {
        let mut w = v.to_vec();
        for _ in 0..times {
            w = x.mul_vec(&w)?;
        }
        Ok(w)
    };
    for j in (1..=top).rev() {
        let mut current: Vec<Vec<Scalar>> = kernels[j - 1].clone();
        for (v, len) in &chains {
            current.push(apply(v, len - j)?);
        }
        for b in &kernels[j] {
            current.push(b.clone());
            if rank_of(field, &current) == current.len() {
                chains.push((b.clone(), j));
            } else {
                current.pop();
            }
        }
    }
    let mut cols = Vec::with_capacity(k);
    for (v, len) in &chains {
        for e in (0..*len).rev() {
            cols.push(apply(v, e)?);
        }
    }
    let partition = chains.iter().map(|c| c.1).collect();
    Ok((Matrix::from_cols(field, &cols, k)?, partition))
}

fn poly_at_matrix(u: &Poly, w: &Matrix) -> Result<Matrix> {
    let field = w.field();
    let k = w.rows();
    let mut acc = Matrix::zeros(field, k, k);
    for c in u.coeffs().iter().rev() {
        acc = acc.mul(w)?.add(&Matrix::identity(field, k).scale(c))?;
    }
    Ok(acc)
}

fn pow_matrix(m: &Matrix, e: usize) -> Result<Matrix> {
    let mut acc = Matrix::identity(m.field(), m.rows());
    for _ in 0..e {
        acc = acc.mul(m)?;
    }
    Ok(acc)
}

/// A point `(α:β)` where the determinant does not vanish.
fn nonroot(det: &BinaryForm) -> Result<(Scalar, Scalar)> {
    let field = det.field();
    let mut cands = vec![(field.one(), field.zero()), (field.zero(), field.one())];
    match field {
        Field::Prime(p) => cands.extend((1..p.min(4096)).map(|t| (field.one(), field.from_i64(t as i64)))),
        Field::Rational => {
            for t in 1..=(det.degree() as i64 + 1) {
                cands.push((field.one(), field.from_i64(t)));
                cands.push((field.one(), field.from_i64(-t)));
            }
        }
    }
    cands.into_iter().find(|(a, b)| !det.eval(a, b).is_zero()).ok_or_else(|| {
        Error::InvalidInput("every point of P^1 over the prime field is a root of the determinant".into())
    })
}

type RegularSplit = (Matrix, Matrix, Vec<Block>);

fn split_regular(r: &Pencil) -> Result<RegularSplit> {
    let field = r.field();
    let k = r.rows();
    if k == 0 {
        return Ok((Matrix::identity(field, 0), Matrix::identity(field, 0), vec![]));
    }
    let det = r.determinant()?;
    if det.is_zero() {
        return Err(Error::Internal("remaining square pencil is singular".into()));
    }
    let factors = factor_binary_form(&det)?;
    let (al, be) = nonroot(&det)?;
    let (ga, de) = if al.is_zero() { (field.one(), field.zero()) } else { (field.zero(), field.one()) };
    let t0inv = r.eval(&al, &be).inverse()?;
    let w = t0inv.mul(&r.eval(&ga, &de))?;
    // ξ = s(α,β) + t(γ,δ); invert for s, t as forms in ξ
    let basis = Matrix::from_rows(field, &[vec![al.clone(), ga.clone()], vec![be.clone(), de.clone()]])?;
    let inv = basis.inverse()?;
    let (s0, s1) = (inv.get(0, 0).clone(), inv.get(0, 1).clone());
    let (tt0, tt1) = (inv.get(1, 0).clone(), inv.get(1, 1).clone());

    let mut qcols: Vec<Vec<Scalar>> = Vec::new();
    let mut sizes = Vec::new();
    let mut us = Vec::new();
    for fac in &factors {
        // u(μ) = q(γ - αμ, δ - βμ), vanishing at eigenvalues of W
        let x0 = Poly::new(field, vec![ga.clone(), -&al]);
        let x1 = Poly::new(field, vec![de.clone(), -&be]);
        let e = fac.form.degree();
        let mut u = Poly::zero(field);
        for (i, c) in fac.form.coeffs().iter().enumerate() {
            u = u.add(&x0.pow(e - i).mul(&x1.pow(i)).scale(c));
        }
        let um = poly_at_matrix(&u, &w)?;
        let ker = pow_matrix(&um, fac.multiplicity)?.kernel_basis();
        if ker.len() != e * fac.multiplicity {
            return Err(Error::Internal(format!("primary component of {} has dimension {}", fac.form, ker.len())));
        }
        sizes.push(ker.len());
        qcols.extend(ker);
        us.push(u);
    }
    let qr = Matrix::from_cols(field, &qcols, k)?;
    let qrinv = qr.inverse()?;
    let wb = qrinv.mul(&w)?.mul(&qr)?;
    let p0 = qrinv.mul(&t0inv)?;

    let mut lefts = Vec::new();
    let mut rights = Vec::new();
    let mut blocks = Vec::new();
    let mut off = 0;
    for ((fac, &sz), u) in factors.iter().zip(&sizes).zip(&us) {
        let wj = wb.submatrix(off..off + sz, off..off + sz);
        off += sz;
        let id = Matrix::identity(field, sz);
        if fac.form.degree() == 1 {
            // u is linear with root μ
            let mu = (-&u.coeff(0)).div(&u.coeff(1))?;
            let nil = wj.sub(&id.scale(&mu))?;
            let f = &fac.form;
            let (f0, f1) = (f.coeffs()[0].clone(), f.coeffs()[1].clone());
            let (p0c, p1c) = (&s0 + &(&mu * &tt0), &s1 + &(&mu * &tt1));
            let kappa = if f0.is_zero() { p1c.div(&f1)? } else { p0c.div(&f0)? };
            let (ta0, ta1) = tau_of(f);
            // t = a f + b τ
            let sol = Matrix::from_rows(field, &[vec![f0.clone(), ta0.clone()], vec![f1.clone(), ta1.clone()]])?
                .solve(&[tt0.clone(), tt1.clone()])?
                .particular
                .ok_or_else(|| Error::Internal("linear form basis".into()))?;
            let (ca, cb) = (&sol[0], &sol[1]);
            let g = id.scale(&kappa).add(&nil.scale(ca))?.inverse()?;
            let x = g.mul(&nil)?.scale(cb);
            let (s, partition) = nilpotent_jordan_basis(&x)?;
            lefts.push(s.inverse()?.mul(&g)?);
            rights.push(s);
            blocks.push(Block {
                kind: BlockKind::Regular {
                    factor: f.clone(),
                    multiplicity: fac.multiplicity,
                    partition: partition.clone(),
                    jordan: true,
                    irreducible: fac.irreducible,
                },
                pencil: jordan_block(f, &partition),
            });
        } else {
            let e = fac.form.degree();
            let um = poly_at_matrix(u, &wj)?;
            let mut ranks = vec![sz];
            let mut pw = Matrix::identity(field, sz);
            while *ranks.last().unwrap() > 0 {
                pw = pw.mul(&um)?;
                ranks.push(pw.rank());
            }
            // blocks of size >= i: (r_{i-1} - r_i) / e
            let ge: Vec<usize> = ranks.windows(2).map(|w| (w[0] - w[1]) / e).collect();
            let mut partition = Vec::new();
            for i in (0..ge.len()).rev() {
                let exact = ge[i] - ge.get(i + 1).copied().unwrap_or(0);
                partition.extend(std::iter::repeat_n(i + 1, exact));
            }
            lefts.push(id.clone());
            rights.push(id.clone());
            let a = id.scale(&s0).add(&wj.scale(&tt0))?;
            let b = id.scale(&s1).add(&wj.scale(&tt1))?;
            blocks.push(Block {
                kind: BlockKind::Regular {
                    factor: fac.form.clone(),
                    multiplicity: fac.multiplicity,
                    partition,
                    jordan: false,
                    irreducible: fac.irreducible,
                },
                pencil: Pencil::new(a, b)?,
            });
        }
    }
    let pl = Matrix::block_diag(field, &lefts).mul(&p0)?;
    let ql = qr.mul(&Matrix::block_diag(field, &rights))?;
    Ok((pl, ql, blocks))
}

pub fn kronecker_form(n: &Pencil) -> Result<KroneckerForm> {
    let field = n.field();
    let (m, q) = (n.rows(), n.cols());
    let mut p = Matrix::identity(field, m);
    let mut qm = Matrix::identity(field, q);
    let mut cur = n.clone();
    let (mut r0, mut c0) = (0, 0);
    let mut blocks = Vec::new();
    while let Some((eps, pl, ql)) = split_column(&cur.sub(r0..m, c0..q))? {
        p = embed(field, r0, &pl).mul(&p)?;
        qm = qm.mul(&embed(field, c0, &ql))?;
        cur = n.transform(&p, &qm)?;
        blocks.push(Block { kind: BlockKind::Column { eps }, pencil: column_block(field, eps) });
        r0 += eps;
        c0 += eps + 1;
    }
    while let Some((eta, pl, ql)) = split_column(&cur.sub(r0..m, c0..q).transpose())? {
        p = embed(field, r0, &ql.transpose()).mul(&p)?;
        qm = qm.mul(&embed(field, c0, &pl.transpose()))?;
        cur = n.transform(&p, &qm)?;
        blocks.push(Block { kind: BlockKind::Row { eta }, pencil: column_block(field, eta).transpose() });
        r0 += eta + 1;
        c0 += eta;
    }
    if m - r0 != q - c0 {
        return Err(Error::Internal("regular part is not square".into()));
    }
    let (pl, ql, reg) = split_regular(&cur.sub(r0..m, c0..q))?;
    p = embed(field, r0, &pl).mul(&p)?;
    qm = qm.mul(&embed(field, c0, &ql))?;
    blocks.extend(reg);
    let canonical = Pencil::block_diag(field, &blocks.iter().map(|b| b.pencil.clone()).collect::<Vec<_>>());
    let kf = KroneckerForm { p, q: qm, blocks, canonical };
    if !kf.verify(n) {
        return Err(Error::Internal("Kronecker transform failed verification".into()));
    }
    Ok(kf)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> Field {
        Field::Rational
    }

    #[test]
    fn single_column_block_is_recognized() {
        let l = column_block(q(), 3);
        let kf = kronecker_form(&l).unwrap();
        assert_eq!(kf.inventory().column, vec![3]);
        assert!(kf.inventory().regular.is_empty());
    }

    #[test]
    fn hankel_pencil_of_the_twisted_cubic() {
        // M = [[z1, z2, z3], [z0, z1, z2]]: one column index 3
        let a = Matrix::from_i64(q(), &[&[0, 1, 0, 0], &[0, 0, 1, 0], &[0, 0, 0, 1]]);
        let b = Matrix::from_i64(q(), &[&[1, 0, 0, 0], &[0, 1, 0, 0], &[0, 0, 1, 0]]);
        let kf = kronecker_form(&Pencil::new(a, b).unwrap()).unwrap();
        assert_eq!(kf.inventory().column, vec![3]);
    }

    #[test]
    fn mixed_pencil_inventory() {
        let f = q();
        let root = BinaryForm::from_i64(f, &[1, -2]);
        let blocks = vec![
            column_block(f, 1),
            column_block(f, 0),
            column_block(f, 2).transpose(),
            jordan_block(&root, &[2, 1]),
            jordan_block(&BinaryForm::from_i64(f, &[0, 1]), &[1]),
        ];
        let canon = Pencil::block_diag(f, &blocks);
        let scramble_p = Matrix::from_i64(
            f,
            &[
                &[1, 2, 0, 0, 1, 0, 0, 0, 1],
                &[0, 1, 0, 3, 0, 0, 1, 0, 0],
                &[0, 0, 1, 0, 0, 2, 0, 0, 0],
                &[1, 0, 0, 1, 0, 0, 0, 1, 0],
                &[0, 0, 0, 0, 1, 0, 0, 0, 0],
                &[0, 1, 0, 0, 0, 1, 0, 0, 0],
                &[0, 0, 0, 0, 0, 0, 1, 0, 2],
                &[0, 0, 2, 0, 0, 0, 0, 1, 0],
                &[0, 0, 0, 0, 0, 0, 0, 0, 1],
            ],
        );
        let scramble_p = scramble_p.submatrix(0..8, 0..8);
        assert!(scramble_p.inverse().is_ok());
        let cols = canon.cols();
        let mut qs = Matrix::identity(f, cols);
        for i in 0..cols - 1 {
            qs.set(i, i + 1, f.from_i64(i as i64 - 2));
        }
        let n = canon.transform(&scramble_p, &qs).unwrap();
        let kf = kronecker_form(&n).unwrap();
        let inv = kf.inventory();
        assert_eq!(inv.column, vec![0, 1]);
        assert_eq!(inv.row, vec![2]);
        assert_eq!(
            inv.regular,
            vec![(BinaryForm::from_i64(f, &[0, 1]), vec![1]), (root, vec![2, 1])]
        );
    }

    #[test]
    fn irrational_factor_stays_compressed() {
        let f = q();
        // det = ξ0^2 - 2 ξ1^2
        let a = Matrix::identity(f, 2);
        let b = Matrix::from_i64(f, &[&[0, 2], &[1, 0]]);
        let kf = kronecker_form(&Pencil::new(a, b).unwrap()).unwrap();
        match &kf.blocks[0].kind {
            BlockKind::Regular { factor, partition, jordan, .. } => {
                assert_eq!(factor, &BinaryForm::from_i64(f, &[1, 0, -2]));
                assert_eq!(partition, &vec![1]);
                assert!(!jordan);
            }
            k => panic!("{k:?}"),
        }
    }

    #[test]
    fn nilpotent_basis_partition() {
        let f = q();
        let j = nilpotent_jordan(f, &[3, 1]);
        let s = Matrix::from_i64(f, &[&[1, 1, 0, 0], &[0, 1, 1, 0], &[0, 0, 1, 1], &[1, 0, 0, 2]]);
        let x = s.mul(&j).unwrap().mul(&s.inverse().unwrap()).unwrap();
        let (b, part) = nilpotent_jordan_basis(&x).unwrap();
        assert_eq!(part, vec![3, 1]);
        assert_eq!(b.inverse().unwrap().mul(&x).unwrap().mul(&b).unwrap(), j);
    }
}
