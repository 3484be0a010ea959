//! Factorization of univariate polynomials over `Q` and `F_p`.
//!
//! Over `F_p` the pipeline is squarefree decomposition, distinct-degree
//! splitting and Cantor–Zassenhaus equal-degree splitting (with the trace
//! map in characteristic 2). Over `Q` it is Yun's squarefree decomposition,
//! rational-root extraction, a modular degree-pattern irreducibility test
//! and, failing that, Kronecker's divisor search with a work cap. A factor
//! that survives the cap is returned with `irreducible = false`.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::matrix::Matrix;
use super::poly::Poly;
use super::scalar::{Field, Scalar};
use crate::error::{Error, Result};

/// A monic factor with its multiplicity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyFactor {
    pub poly: Poly,
    pub multiplicity: usize,
    /// False when the factor could not be proven irreducible.
    pub irreducible: bool,
}

const KRONECKER_BUDGET: usize = 200_000;

pub fn factor_poly(f: &Poly) -> Result<Vec<PolyFactor>> {
    if f.is_zero() {
        return Err(Error::ZeroForm);
    }
    let mut out = match f.field() {
        Field::Rational => factor_rational(f),
        Field::Prime(p) => factor_mod_p(f, p),
    };
    out.sort_by(|a, b| sort_key(&a.poly).cmp(&sort_key(&b.poly)).then(a.multiplicity.cmp(&b.multiplicity)));
    Ok(out)
}

fn sort_key(p: &Poly) -> (usize, Vec<String>) {
    (p.degree().unwrap_or(0), p.coeffs().iter().map(Scalar::to_canonical_string).collect())
}

// ---------------------------------------------------------------- F_p

fn factor_mod_p(f: &Poly, p: u64) -> Vec<PolyFactor> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed ^ p);
    let mut out = Vec::new();
    for (g, m) in squarefree_mod_p(&f.monic(), p) {
        for (h, d) in distinct_degree(&g, p) {
            for q in equal_degree(&h, d, p, &mut rng) {
                out.push(PolyFactor { poly: q, multiplicity: m, irreducible: true });
            }
        }
    }
    out
}

fn squarefree_mod_p(f: &Poly, p: u64) -> Vec<(Poly, usize)> {
    let field = f.field();
    let one = Poly::one(field);
    let mut out = Vec::new();
    if f.degree().unwrap_or(0) == 0 {
        return out;
    }
    let mut c = f.gcd(&f.derivative());
    let mut w = f.exact_div(&c).expect("gcd divides");
    let mut i = 1;
    while w != one {
        let y = w.gcd(&c);
        let fac = w.exact_div(&y).expect("gcd divides");
        if fac.degree().unwrap_or(0) > 0 {
            out.push((fac, i));
        }
        w = y;
        c = c.exact_div(&w).expect("gcd divides");
        i += 1;
    }
    if c != one {
        // c is a p-th power: take the root coefficientwise.
        let p = p as usize;
        let root = Poly::new(field, c.coeffs().iter().step_by(p).cloned().collect());
        for (g, m) in squarefree_mod_p(&root, p as u64) {
            out.push((g, m * p));
        }
    }
    out
}

fn distinct_degree(f: &Poly, p: u64) -> Vec<(Poly, usize)> {
    let field = f.field();
    let x = Poly::x(field);
    let pe = BigUint::from(p);
    let mut out = Vec::new();
    let mut rest = f.clone();
    let mut h = x.clone();
    let mut i = 1;
    while rest.degree().unwrap_or(0) >= 2 * i {
        h = h.pow_mod(&pe, &rest);
        let g = rest.gcd(&h.sub(&x));
        if g.degree().unwrap_or(0) > 0 {
            rest = rest.exact_div(&g).expect("gcd divides");
            h = h.rem(&rest);
            out.push((g, i));
        }
        i += 1;
    }
    if let Some(d) = rest.degree().filter(|&d| d > 0) {
        out.push((rest, d));
    }
    out
}

fn equal_degree(f: &Poly, d: usize, p: u64, rng: &mut ChaCha8Rng) -> Vec<Poly> {
    let n = f.degree().unwrap_or(0);
    if n == d {
        return vec![f.monic()];
    }
    let field = f.field();
    let exp = (BigUint::from(p).pow(d as u32) - 1u32) / 2u32;
    loop {
        let a = Poly::new(field, (0..n).map(|_| field.from_i64(rng.gen_range(0..p) as i64)).collect());
        if a.degree().unwrap_or(0) == 0 {
            continue;
        }
        let b = if p == 2 {
            let mut t = a.rem(f);
            let mut acc = t.clone();
            for _ in 1..d {
                t = t.mul(&t).rem(f);
                acc = acc.add(&t);
            }
            acc
        } else {
            a.pow_mod(&exp, f).sub(&Poly::one(field))
        };
        let g = f.gcd(&b);
        let dg = g.degree().unwrap_or(0);
        if dg > 0 && dg < n {
            let other = f.exact_div(&g).expect("gcd divides");
            let mut out = equal_degree(&g, d, p, rng);
            out.extend(equal_degree(&other, d, p, rng));
            return out;
        }
    }
}

/// Degrees of the irreducible factors of a squarefree polynomial mod `p`.
fn degree_pattern_mod_p(f: &Poly, p: u64) -> Vec<usize> {
    let mut out = Vec::new();
    for (g, d) in distinct_degree(f, p) {
        let k = g.degree().unwrap_or(0) / d;
        out.extend(std::iter::repeat_n(d, k));
    }
    out
}

// ---------------------------------------------------------------- Q

fn factor_rational(f: &Poly) -> Vec<PolyFactor> {
    let mut out = Vec::new();
    for (g, m) in yun(&f.monic()) {
        for (h, irreducible) in split_squarefree_rational(&g) {
            out.push(PolyFactor { poly: h, multiplicity: m, irreducible });
        }
    }
    out
}

fn yun(f: &Poly) -> Vec<(Poly, usize)> {
    let one = Poly::one(f.field());
    if f.degree().unwrap_or(0) == 0 {
        return Vec::new();
    }
    let df = f.derivative();
    let a0 = f.gcd(&df);
    let mut b = f.exact_div(&a0).expect("gcd divides");
    let mut c = df.exact_div(&a0).expect("gcd divides");
    let mut d = c.sub(&b.derivative());
    let mut out = Vec::new();
    let mut i = 1;
    while b != one {
        let a = b.gcd(&d);
        if a.degree().unwrap_or(0) > 0 {
            out.push((a.clone(), i));
        }
        b = b.exact_div(&a).expect("gcd divides");
        c = d.exact_div(&a).expect("gcd divides");
        d = c.sub(&b.derivative());
        i += 1;
    }
    out
}

/// Primitive integer coefficients of a rational polynomial, positive lead.
fn to_integer(f: &Poly) -> Vec<BigInt> {
    let qs: Vec<&BigRational> = f.coeffs().iter().map(|c| c.as_rational().expect("rational")).collect();
    let l = qs.iter().fold(BigInt::one(), |l, q| l.lcm(q.denom()));
    let mut ints: Vec<BigInt> = qs.iter().map(|q| q.numer() * (&l / q.denom())).collect();
    let g = ints.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    if !g.is_zero() {
        for x in ints.iter_mut() {
            *x = &*x / &g;
        }
    }
    if ints.last().is_some_and(|x| x.is_negative()) {
        for x in ints.iter_mut() {
            *x = -&*x;
        }
    }
    ints
}

fn from_integer(c: &[BigInt]) -> Poly {
    Poly::new(Field::Rational, c.iter().map(|x| Scalar::Q(BigRational::from_integer(x.clone()))).collect())
}

fn eval_int(c: &[BigInt], x: &BigInt) -> BigInt {
    c.iter().rev().fold(BigInt::zero(), |acc, a| acc * x + a)
}

/// Positive divisors, or `None` when trial division cannot finish.
fn divisors(n: &BigInt) -> Option<Vec<BigInt>> {
    let mut n = n.abs();
    if n.is_zero() {
        return None;
    }
    let mut primes: Vec<(BigInt, u32)> = Vec::new();
    let mut d = BigInt::from(2);
    let limit = BigInt::from(1_000_000u64);
    while &d * &d <= n {
        if d > limit {
            return None;
        }
        let mut e = 0;
        while (&n % &d).is_zero() {
            n /= &d;
            e += 1;
        }
        if e > 0 {
            primes.push((d.clone(), e));
        }
        d += 1;
    }
    if n > BigInt::one() {
        primes.push((n, 1));
    }
    let mut out = vec![BigInt::one()];
    for (p, e) in primes {
        let mut next = Vec::new();
        for x in &out {
            let mut pk = BigInt::one();
            for _ in 0..=e {
                next.push(x * &pk);
                pk *= &p;
            }
        }
        out = next;
    }
    out.sort();
    Some(out)
}

/// Splits a monic squarefree rational polynomial into factors tagged with
/// whether irreducibility was established.
fn split_squarefree_rational(g: &Poly) -> Vec<(Poly, bool)> {
    let mut out = Vec::new();
    let mut rest = to_integer(g);
    // rational roots p/q with p | c_0 and q | c_n
    loop {
        let deg = rest.len() - 1;
        if deg <= 1 {
            break;
        }
        let Some(root) = find_rational_root(&rest) else { break };
        let lin = Poly::new(
            Field::Rational,
            vec![Scalar::Q(-root.clone()), Field::Rational.one()],
        );
        out.push((lin.clone(), true));
        rest = to_integer(&from_integer(&rest).exact_div(&lin).expect("root divides"));
    }
    let mut stack = vec![rest];
    while let Some(h) = stack.pop() {
        let deg = h.len() - 1;
        if deg == 0 {
            continue;
        }
        if deg <= 3 || modular_irreducible(&h) {
            out.push((from_integer(&h).monic(), true));
            continue;
        }
        match kronecker_split(&h) {
            Some(Some((a, b))) => {
                stack.push(a);
                stack.push(b);
            }
            Some(None) => out.push((from_integer(&h).monic(), true)),
            None => out.push((from_integer(&h).monic(), false)),
        }
    }
    out
}

fn find_rational_root(c: &[BigInt]) -> Option<BigRational> {
    if c[0].is_zero() {
        return Some(BigRational::zero());
    }
    let num = divisors(&c[0])?;
    let den = divisors(c.last().expect("nonempty"))?;
    for q in &den {
        for p in &num {
            for s in [p.clone(), -p.clone()] {
                if !s.gcd(q).is_one() {
                    continue;
                }
                // q^deg * f(s/q) as an integer
                let deg = c.len() - 1;
                let mut acc = BigInt::zero();
                let mut qpow = BigInt::one();
                let mut spows = vec![BigInt::one(); deg + 1];
                for i in 1..=deg {
                    spows[i] = &spows[i - 1] * &s;
                }
                for i in (0..=deg).rev() {
                    acc += &c[i] * &spows[i] * &qpow;
                    qpow *= q;
                }
                if acc.is_zero() {
                    return Some(BigRational::new(s, q.clone()));
                }
            }
        }
    }
    None
}

/// True when the factor-degree patterns modulo a few good primes leave no
/// room for a proper factorization.
fn modular_irreducible(h: &[BigInt]) -> bool {
    let deg = h.len() - 1;
    let mut possible = vec![true; deg + 1];
    let mut used = 0;
    for p in [3u64, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47] {
        let lead = h.last().expect("nonempty");
        if (lead % BigInt::from(p)).is_zero() {
            continue;
        }
        let field = Field::Prime(p);
        let fp = Poly::new(field, h.iter().map(|x| field.from_bigint(x)).collect()).monic();
        if fp.gcd(&fp.derivative()).degree() != Some(0) {
            continue;
        }
        let pattern = degree_pattern_mod_p(&fp, p);
        let mut sums = vec![false; deg + 1];
        sums[0] = true;
        for d in pattern {
            for s in (d..=deg).rev() {
                if sums[s - d] {
                    sums[s] = true;
                }
            }
        }
        for (k, ok) in possible.iter_mut().enumerate() {
            *ok &= sums[k];
        }
        used += 1;
        if (1..deg).all(|k| !possible[k]) {
            return true;
        }
        if used >= 6 {
            break;
        }
    }
    false
}

/// Kronecker's method. `Some(Some(..))` is a split into two integer
/// factors, `Some(None)` proves irreducibility, `None` means the search
/// budget ran out.
#[allow(clippy::type_complexity)]
fn kronecker_split(h: &[BigInt]) -> Option<Option<(Vec<BigInt>, Vec<BigInt>)>> {
    let deg = h.len() - 1;
    let mut budget = KRONECKER_BUDGET;
    let mut pts: Vec<(BigInt, Vec<BigInt>)> = Vec::new();
    for k in 0..40i64 {
        let x = BigInt::from(if k % 2 == 0 { k / 2 } else { -(k + 1) / 2 });
        let v = eval_int(h, &x);
        if v.is_zero() {
            continue;
        }
        if let Some(ds) = divisors(&v) {
            pts.push((x, ds));
        }
    }
    pts.sort_by_key(|(_, d)| d.len());
    for k in 1..=deg / 2 {
        if pts.len() < k + 1 {
            return None;
        }
        let chosen = &pts[..k + 1];
        let xs: Vec<BigInt> = chosen.iter().map(|(x, _)| x.clone()).collect();
        let vand = Matrix::from_rows(
            Field::Rational,
            &xs.iter()
                .map(|x| {
                    (0..=k)
                        .map(|j| Scalar::Q(BigRational::from_integer(num_traits::pow(x.clone(), j))))
                        .collect()
                })
                .collect::<Vec<_>>(),
        )
        .expect("rectangular");
        let inv = vand.inverse().expect("distinct nodes");
        let mut idx = vec![0usize; k + 1];
        let sizes: Vec<usize> = chosen.iter().map(|(_, d)| d.len()).collect();
        loop {
            // signs: first value positive, others both signs
            let n_sign = 1usize << k;
            for mask in 0..n_sign {
                if budget == 0 {
                    return None;
                }
                budget -= 1;
                let vals: Vec<Scalar> = (0..=k)
                    .map(|j| {
                        let mut v = chosen[j].1[idx[j]].clone();
                        if j > 0 && (mask >> (j - 1)) & 1 == 1 {
                            v = -v;
                        }
                        Scalar::Q(BigRational::from_integer(v))
                    })
                    .collect();
                let coeffs = inv.mul_vec(&vals).expect("square");
                let cand = Poly::new(Field::Rational, coeffs);
                if cand.degree() != Some(k) {
                    continue;
                }
                if cand.coeffs().iter().any(|c| !c.as_rational().expect("rational").is_integer()) {
                    continue;
                }
                let hp = from_integer(h);
                let (q, r) = hp.div_rem(&cand).expect("nonzero");
                if r.is_zero() {
                    return Some(Some((to_integer(&cand), to_integer(&q))));
                }
            }
            // advance the divisor odometer
            let mut pos = 0;
            loop {
                if pos > k {
                    break;
                }
                idx[pos] += 1;
                if idx[pos] < sizes[pos] {
                    break;
                }
                idx[pos] = 0;
                pos += 1;
            }
            if pos > k {
                break;
            }
        }
    }
    Some(None)
}

/// Smallest small integer that is not a root, used to pick evaluation
/// points away from a form's zeros.
pub fn nonroot_small(f: &Poly) -> Option<i64> {
    (0..64i64).map(|k| if k % 2 == 0 { k / 2 } else { -(k + 1) / 2 }).find(|&t| {
        let v = f.eval(&f.field().from_i64(t));
        !v.is_zero()
    })
}
