use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::exactlin::{Field, Scalar};
use crate::error::{Error, Result};

/// A point of projective space stored by a canonical representative.
///
/// Over `Q` the coordinates are coprime integers with the first nonzero
/// one positive; over `F_p` the first nonzero coordinate is 1.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProjPoint {
    coords: Vec<Scalar>,
}

impl ProjPoint {
    pub fn new(coords: Vec<Scalar>) -> Result<ProjPoint> {
        let Some(first) = coords.first() else {
            return Err(Error::InvalidInput("point with no coordinates".into()));
        };
        let field = first.field();
        if coords.iter().any(|c| c.field() != field) {
            return Err(Error::MixedField);
        }
        if coords.iter().all(Scalar::is_zero) {
            return Err(Error::InvalidInput("the zero vector is not a projective point".into()));
        }
        Ok(ProjPoint { coords: normalize(coords) })
    }

    pub fn from_i64(field: Field, c: &[i64]) -> ProjPoint {
        ProjPoint::new(c.iter().map(|&x| field.from_i64(x)).collect()).expect("nonzero literal")
    }

    pub fn parse(field: Field, c: &[&str]) -> Result<ProjPoint> {
        ProjPoint::new(c.iter().map(|s| Scalar::parse_in(s, field)).collect::<Result<_>>()?)
    }

    /// The standard basis point `e_i` of `P_n`.
    pub fn basis(field: Field, n: usize, i: usize) -> ProjPoint {
        let mut c = vec![field.zero(); n + 1];
        c[i] = field.one();
        ProjPoint { coords: c }
    }

    pub fn dim(&self) -> usize {
        self.coords.len() - 1
    }

    pub fn field(&self) -> Field {
        self.coords[0].field()
    }

    pub fn coords(&self) -> &[Scalar] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<Scalar> {
        self.coords
    }

    /// Reduces the primitive integer representative modulo `p`.
    pub fn reduce_mod_p(&self, p: u64) -> Result<ProjPoint> {
        let field = Field::prime(p)?;
        let coords: Vec<Scalar> = self
            .coords
            .iter()
            .map(|c| match c {
                Scalar::Q(q) => Ok(field.from_bigint(q.numer())),
                Scalar::P(_) => Err(Error::MixedField),
            })
            .collect::<Result<_>>()?;
        ProjPoint::new(coords).map_err(|_| Error::BadPrime { p, reason: format!("{self} reduces to zero") })
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.coords.iter().map(Scalar::to_canonical_string).collect()
    }
}

fn normalize(mut c: Vec<Scalar>) -> Vec<Scalar> {
    match c[0].field() {
        Field::Rational => {
            let qs: Vec<BigRational> = c.iter().map(|x| x.as_rational().cloned().expect("rational")).collect();
            let l = qs.iter().fold(BigInt::one(), |l, q| l.lcm(q.denom()));
            let mut ints: Vec<BigInt> = qs.iter().map(|q| q.numer() * (&l / q.denom())).collect();
            let g = ints.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
            let first_neg = ints.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative());
            for x in ints.iter_mut() {
                *x = &*x / &g;
                if first_neg {
                    *x = -&*x;
                }
            }
            ints.into_iter().map(|x| Scalar::Q(BigRational::from_integer(x))).collect()
        }
        Field::Prime(_) => {
            let lead = c.iter().find(|x| !x.is_zero()).cloned().expect("nonzero");
            let inv = lead.inv().expect("nonzero");
            for x in c.iter_mut() {
                *x = &*x * &inv;
            }
            c
        }
    }
}

/// The pairing `Σ x_i y_i` between a point and a dual point.
pub fn pairing(x: &[Scalar], y: &[Scalar]) -> Result<Scalar> {
    if x.len() != y.len() {
        return Err(Error::DimensionMismatch(format!("pairing of lengths {} and {}", x.len(), y.len())));
    }
    Ok(crate::exactlin::dot(x, y))
}

/// `x` lies on the hyperplane `H_y`.
pub fn incident(x: &ProjPoint, y: &ProjPoint) -> Result<bool> {
    Ok(pairing(x.coords(), y.coords())?.is_zero())
}

impl fmt::Display for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.to_strings().join(":"))
    }
}

impl fmt::Debug for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}
