use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

/// Numerical data of a sheaf with resolution `0 -> O(-1)^a -> O^b -> E -> 0`
/// on `P^n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ResolutionData {
    pub n: usize,
    pub a: usize,
    pub b: usize,
    pub rank: usize,
    pub c1: usize,
    /// `c1 / rank`, as a reduced fraction string.
    pub slope: String,
    /// Coefficients of `χ(E(t))` in `t`, lowest degree first.
    pub hilbert: Vec<String>,
}

impl ResolutionData {
    pub fn from_shape(a: usize, b: usize, n: usize) -> ResolutionData {
        assert!(b >= a, "resolution with more relations than generators");
        let rank = b - a;
        let slope = if rank == 0 {
            "inf".to_string()
        } else {
            fmt_q(&BigRational::new(BigInt::from(a), BigInt::from(rank)))
        };
        let chi = hilbert_poly(a, b, n);
        ResolutionData { n, a, b, rank, c1: a, slope, hilbert: chi.iter().map(fmt_q).collect() }
    }

    pub fn slope_q(&self) -> BigRational {
        BigRational::new(BigInt::from(self.c1), BigInt::from(self.rank.max(1)))
    }

    pub fn chi_at(&self, t: i64) -> BigRational {
        hilbert_poly(self.a, self.b, self.n)
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * BigRational::from_integer(BigInt::from(t)) + c)
    }
}

fn fmt_q(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// `C(t + s, n)` as a polynomial in `t`, for a shift `s`.
fn binomial_poly(n: usize, shift: i64) -> Vec<BigRational> {
    // Π_{i=1..n} (t + shift - n + i) / n!
    let mut p = vec![BigRational::one()];
    let mut fact = BigInt::one();
    for i in 1..=n {
        let c = BigRational::from_integer(BigInt::from(shift - n as i64 + i as i64));
        let mut next = vec![BigRational::zero(); p.len() + 1];
        for (k, x) in p.iter().enumerate() {
            next[k + 1] += x;
            next[k] += x * &c;
        }
        p = next;
        fact *= BigInt::from(i);
    }
    let f = BigRational::from_integer(fact);
    p.into_iter().map(|x| x / &f).collect()
}

fn hilbert_poly(a: usize, b: usize, n: usize) -> Vec<BigRational> {
    let pb = binomial_poly(n, n as i64);
    let pa = binomial_poly(n, n as i64 - 1);
    let (qa, qb) = (BigRational::from_integer(BigInt::from(a)), BigRational::from_integer(BigInt::from(b)));
    let mut out: Vec<BigRational> = pb.iter().zip(&pa).map(|(x, y)| x * &qb - y * &qa).collect();
    while out.len() > 1 && out.last().is_some_and(|x| x.is_zero()) {
        out.pop();
    }
    out
}

/// Resolution data of `F_Z` for `ℓ` hyperplanes in `P^n`.
pub fn hilbert_data(l: usize, n: usize) -> crate::Result<ResolutionData> {
    if l < n + 1 {
        return Err(crate::Error::InvalidInput(format!("need at least n+1 = {} hyperplanes, got {l}", n + 1)));
    }
    Ok(ResolutionData::from_shape(l - n - 1, l - 1, n))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seven_planes_in_p3() {
        let r = hilbert_data(7, 3).unwrap();
        assert_eq!((r.rank, r.c1), (3, 3));
        assert_eq!(r.slope, "1");
        assert_eq!(r.chi_at(0), BigRational::from_integer(BigInt::from(6)));
    }

    #[test]
    fn minimal_arrangement_is_numerically_trivial() {
        let r = hilbert_data(4, 3).unwrap();
        assert_eq!((r.rank, r.c1), (3, 0));
        assert_eq!(r.hilbert, hilbert_data(4, 3).unwrap().hilbert);
        // χ(O^3(t)) = 3 C(t+3,3)
        assert_eq!(r.chi_at(1), BigRational::from_integer(BigInt::from(12)));
    }

    #[test]
    fn nine_planes_in_p3() {
        let r = hilbert_data(9, 3).unwrap();
        assert_eq!((r.rank, r.c1), (3, 5));
        assert_eq!(r.slope, "5/3");
    }
}
