//! Binary forms `Σ c_i ξ0^{d-i} ξ1^i` and their factorization.

use std::fmt;

use super::factor::factor_poly;
use super::poly::Poly;
use super::scalar::{Field, Scalar};
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BinaryForm {
    field: Field,
    c: Vec<Scalar>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BinaryFactor {
    pub form: BinaryForm,
    pub multiplicity: usize,
    pub irreducible: bool,
}

impl BinaryForm {
    /// Builds a form from `c_0..c_d`, scaling so the first nonzero
    /// coefficient is 1. The zero form is kept as is.
    pub fn new(field: Field, c: Vec<Scalar>) -> Result<BinaryForm> {
        if c.is_empty() {
            return Err(Error::InvalidInput("binary form needs at least one coefficient".into()));
        }
        if c.iter().any(|x| x.field() != field) {
            return Err(Error::MixedField);
        }
        let mut f = BinaryForm { field, c };
        if let Some(lead) = f.c.iter().find(|x| !x.is_zero()).cloned() {
            let inv = lead.inv()?;
            f.c = f.c.iter().map(|x| x * &inv).collect();
        }
        Ok(f)
    }

    pub fn from_i64(field: Field, c: &[i64]) -> BinaryForm {
        BinaryForm::new(field, c.iter().map(|&x| field.from_i64(x)).collect()).expect("valid literal")
    }

    /// `a ξ0 + b ξ1`, normalized.
    pub fn linear(a: Scalar, b: Scalar) -> Result<BinaryForm> {
        let field = a.field();
        BinaryForm::new(field, vec![a, b])
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn degree(&self) -> usize {
        self.c.len() - 1
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(Scalar::is_zero)
    }

    pub fn eval(&self, s0: &Scalar, s1: &Scalar) -> Scalar {
        let d = self.degree() as u32;
        self.c
            .iter()
            .enumerate()
            .fold(self.field.zero(), |acc, (i, c)| &acc + &(&(c * &s0.pow(d - i as u32)) * &s1.pow(i as u32)))
    }

    pub fn mul(&self, o: &BinaryForm) -> BinaryForm {
        let mut out = vec![self.field.zero(); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            for (j, b) in o.c.iter().enumerate() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        BinaryForm::new(self.field, out).expect("same field")
    }

    pub fn pow(&self, e: usize) -> BinaryForm {
        let one = BinaryForm { field: self.field, c: vec![self.field.one()] };
        (0..e).fold(one, |acc, _| acc.mul(self))
    }

    /// `f(1, t)` as a polynomial in `t`.
    pub fn dehomogenize(&self) -> Poly {
        Poly::new(self.field, self.c.clone())
    }

    /// Homogenizes `p(t)` to degree `d >= deg p`.
    pub fn from_poly(p: &Poly, d: usize) -> Result<BinaryForm> {
        if p.degree().is_some_and(|k| k > d) {
            return Err(Error::DimensionMismatch("homogenizing degree below polynomial degree".into()));
        }
        let mut c = p.coeffs().to_vec();
        c.resize(d + 1, p.field().zero());
        BinaryForm::new(p.field(), c)
    }

    /// Number of `ξ0` factors, i.e. the multiplicity of the root `(0:1)`.
    pub fn xi0_multiplicity(&self) -> usize {
        match self.c.iter().rposition(|x| !x.is_zero()) {
            Some(k) => self.degree() - k,
            None => 0,
        }
    }

    /// True for linear forms; their root is `(-c1 : c0)`.
    pub fn root(&self) -> Option<(Scalar, Scalar)> {
        (self.degree() == 1 && !self.is_zero()).then(|| (-&self.c[1], self.c[0].clone()))
    }
}

pub fn factor_binary_form(f: &BinaryForm) -> Result<Vec<BinaryFactor>> {
    if f.is_zero() {
        return Err(Error::ZeroForm);
    }
    let field = f.field;
    let mut out = Vec::new();
    let e = f.xi0_multiplicity();
    if e > 0 {
        out.push(BinaryFactor {
            form: BinaryForm::from_i64(field, &[1, 0]),
            multiplicity: e,
            irreducible: true,
        });
    }
    let g = f.dehomogenize();
    if g.degree().unwrap_or(0) > 0 {
        for pf in factor_poly(&g)? {
            let k = pf.poly.degree().expect("nonconstant factor");
            out.push(BinaryFactor {
                form: BinaryForm::from_poly(&pf.poly, k)?,
                multiplicity: pf.multiplicity,
                irreducible: pf.irreducible,
            });
        }
    }
    out.sort_by(|a, b| {
        let ka: Vec<String> = a.form.c.iter().map(Scalar::to_canonical_string).collect();
        let kb: Vec<String> = b.form.c.iter().map(Scalar::to_canonical_string).collect();
        (a.form.degree(), ka).cmp(&(b.form.degree(), kb))
    });
    Ok(out)
}

impl fmt::Display for BinaryForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = self.degree();
        let mono = |k: usize, v: &str| match k {
            0 => String::new(),
            1 => v.to_string(),
            _ => format!("{v}^{k}"),
        };
        let terms: Vec<String> = self
            .c
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| {
                let m: Vec<String> =
                    [mono(d - i, "ξ0"), mono(i, "ξ1")].into_iter().filter(|s| !s.is_empty()).collect();
                let m = m.join("*");
                match (c.is_one(), m.is_empty()) {
                    (_, true) => c.to_string(),
                    (true, false) => m,
                    (false, false) => format!("{c}*{m}"),
                }
            })
            .collect();
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

impl fmt::Debug for BinaryForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BinaryForm({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn monomial_product() {
        let f = BinaryForm::from_i64(Field::Rational, &[0, 1, 0]);
        let fs = factor_binary_form(&f).unwrap();
        let forms: Vec<_> = fs.iter().map(|x| (x.form.clone(), x.multiplicity)).collect();
        assert_eq!(
            forms,
            vec![
                (BinaryForm::from_i64(Field::Rational, &[0, 1]), 1),
                (BinaryForm::from_i64(Field::Rational, &[1, 0]), 1)
            ]
        );
    }

    #[test]
    fn cube_of_a_linear_form() {
        let l = BinaryForm::from_i64(Field::Rational, &[1, -1]);
        let fs = factor_binary_form(&l.pow(3)).unwrap();
        assert_eq!(fs.len(), 1);
        assert_eq!(fs[0].form, l);
        assert_eq!(fs[0].multiplicity, 3);
    }

    #[test]
    fn sum_of_squares_depends_on_field() {
        let q = BinaryForm::from_i64(Field::Rational, &[1, 0, 1]);
        assert_eq!(factor_binary_form(&q).unwrap().len(), 1);
        let f5 = Field::Prime(5);
        let p = BinaryForm::from_i64(f5, &[1, 0, 1]);
        let fs = factor_binary_form(&p).unwrap();
        let forms: Vec<_> = fs.iter().map(|x| x.form.clone()).collect();
        assert!(forms.contains(&BinaryForm::from_i64(f5, &[1, -2])));
        assert!(forms.contains(&BinaryForm::from_i64(f5, &[1, 2])));
    }
}
