//! On-disk formats. Every number is a string so nothing passes through
//! floating point.

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::exactlin::{BinaryForm, Field, Matrix, Scalar};
use crate::kw::{KwVariety, LinearPart};
use crate::projgeom::{Arrangement, LinearSubspace, ProjPoint, RationalCurve};
use crate::steiner::{LinForm, LinFormMatrix};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum FieldSpec {
    Rational,
    Prime { p: u64 },
}

impl FieldSpec {
    pub fn field(&self) -> Result<Field> {
        match self {
            FieldSpec::Rational => Ok(Field::Rational),
            FieldSpec::Prime { p } => Field::prime(*p),
        }
    }

    pub fn of(f: Field) -> FieldSpec {
        match f {
            Field::Rational => FieldSpec::Rational,
            Field::Prime(p) => FieldSpec::Prime { p },
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArrangementFile {
    pub n: usize,
    pub field: FieldSpec,
    pub points: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
}

impl ArrangementFile {
    pub fn parse(text: &str) -> Result<ArrangementFile> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn to_arrangement(&self) -> Result<Arrangement> {
        let field = self.field.field()?;
        if self.points.is_empty() {
            return Err(Error::InvalidInput("point count must be at least 1".into()));
        }
        if let Some(l) = &self.labels {
            if l.len() != self.points.len() {
                return Err(Error::InvalidInput(format!("{} labels for {} points", l.len(), self.points.len())));
            }
        }
        let pts = self
            .points
            .iter()
            .enumerate()
            .map(|(i, c)| {
                if c.len() != self.n + 1 {
                    return Err(Error::InvalidInput(format!(
                        "point {i} has {} coordinates, expected n+1 = {}",
                        c.len(),
                        self.n + 1
                    )));
                }
                let refs: Vec<&str> = c.iter().map(String::as_str).collect();
                ProjPoint::parse(field, &refs)
            })
            .collect::<Result<Vec<_>>>()?;
        Arrangement::new(pts)
    }

    pub fn from_arrangement(z: &Arrangement) -> ArrangementFile {
        ArrangementFile {
            n: z.n(),
            field: FieldSpec::of(z.field()),
            points: z.points().iter().map(ProjPoint::to_strings).collect(),
            labels: None,
        }
    }
}

pub fn parse_point(field: Field, n: usize, text: &str) -> Result<ProjPoint> {
    let parts: Vec<&str> = text.split([',', ':']).map(str::trim).filter(|s| !s.is_empty()).collect();
    if parts.len() != n + 1 {
        return Err(Error::InvalidInput(format!("point {text:?} has {} coordinates, expected n+1 = {}", parts.len(), n + 1)));
    }
    ProjPoint::parse(field, &parts)
}

pub fn scalars(v: &[Scalar]) -> Vec<String> {
    v.iter().map(Scalar::to_canonical_string).collect()
}

pub fn form_json(f: &LinForm) -> Value {
    json!(scalars(f.coeffs()))
}

/// `a x b` array of coefficient vectors.
pub fn matrix_json(m: &LinFormMatrix) -> Value {
    Value::Array(
        m.entries().iter().map(|row| Value::Array(row.iter().map(form_json).collect())).collect(),
    )
}

fn strings(v: &Value, what: &str) -> Result<Vec<String>> {
    let arr = v.as_array().ok_or_else(|| Error::Parse(format!("{what}: expected an array")))?;
    arr.iter()
        .map(|x| match x {
            Value::String(s) => Ok(s.clone()),
            Value::Number(n) if n.is_i64() => Ok(n.to_string()),
            _ => Err(Error::Parse(format!("{what}: coordinates must be strings or integers"))),
        })
        .collect()
}

fn scalar_vec(field: Field, v: &Value, what: &str) -> Result<Vec<Scalar>> {
    strings(v, what)?.iter().map(|s| Scalar::parse_in(s, field)).collect()
}

fn array<'a>(v: &'a Value, what: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| Error::Parse(format!("{what}: expected an array")))
}

/// Reads an `a x b` array of `(n+1)`-coefficient vectors.
pub fn parse_matrix(field: Field, v: &Value) -> Result<LinFormMatrix> {
    let rows = array(v, "matrix")?;
    let entries = rows
        .iter()
        .map(|r| array(r, "matrix row")?.iter().map(|e| Ok(LinForm::new(scalar_vec(field, e, "entry")?))).collect())
        .collect::<Result<Vec<Vec<LinForm>>>>()?;
    let first = entries.first().and_then(|r| r.first()).ok_or_else(|| Error::InvalidInput("empty matrix".into()))?;
    let n = first.n();
    if entries.iter().any(|r| r.len() != entries[0].len()) {
        return Err(Error::InvalidInput("matrix rows of different lengths".into()));
    }
    if entries.iter().flatten().any(|f| f.n() != n) {
        return Err(Error::InvalidInput("entries with different numbers of coefficients".into()));
    }
    LinFormMatrix::from_entries(field, n, &entries)
}

/// Matrix file: either a bare array or `{"field": ..., "matrix": [...]}`.
pub fn parse_matrix_file(text: &str) -> Result<LinFormMatrix> {
    let v: Value = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    match &v {
        Value::Array(_) => parse_matrix(Field::Rational, &v),
        Value::Object(o) => {
            let field = match o.get("field") {
                Some(f) => serde_json::from_value::<FieldSpec>(f.clone()).map_err(|e| Error::Parse(e.to_string()))?.field()?,
                None => Field::Rational,
            };
            parse_matrix(field, o.get("matrix").ok_or_else(|| Error::Parse("missing \"matrix\"".into()))?)
        }
        _ => Err(Error::Parse("matrix file must be an array or an object".into())),
    }
}

pub fn kw_json(kw: &KwVariety) -> Value {
    let t = kw.kw_type();
    let curve = kw.curve.as_ref().map(|c| {
        let m = c.coeffs();
        Value::Array((0..m.cols()).map(|j| json!(scalars(&m.col(j)))).collect())
    });
    let parts: Vec<Value> = kw
        .parts
        .iter()
        .map(|p| {
            json!({
                "dim": p.dim,
                "factor": scalars(p.factor.coeffs()),
                "basis": p.space.basis().iter().map(|b| scalars(b)).collect::<Vec<_>>(),
                "attachment": p.attachment.as_ref().map(ProjPoint::to_strings),
            })
        })
        .collect();
    json!({
        "n": kw.n,
        "field": FieldSpec::of(kw.field),
        "type": t.to_string(),
        "dims": t.dims,
        "d": kw.d,
        "curve": curve,
        "distinguished": kw.distinguished.as_ref().map(ProjPoint::to_strings),
        "parts": parts,
        "matrix": kw.matrix.iter().map(|r| r.iter().map(form_json).collect::<Vec<_>>()).collect::<Vec<_>>(),
        "warnings": kw.warnings,
    })
}

fn get<'a>(v: &'a Value, key: &str) -> Result<&'a Value> {
    v.get(key).ok_or_else(|| Error::Parse(format!("KW certificate: missing {key:?}")))
}

fn usize_of(v: &Value, key: &str) -> Result<usize> {
    get(v, key)?.as_u64().map(|x| x as usize).ok_or_else(|| Error::Parse(format!("{key:?} must be a non-negative integer")))
}

fn opt_point(field: Field, v: &Value, key: &str) -> Result<Option<ProjPoint>> {
    match v.get(key) {
        None | Some(Value::Null) => Ok(None),
        Some(p) => Ok(Some(ProjPoint::new(scalar_vec(field, p, key)?)?)),
    }
}

/// Reads a KW certificate. Accepts the bare object written by
/// [`kw_json`] or a report whose first certificate holds one under `kw`.
pub fn parse_kw(text: &str) -> Result<KwVariety> {
    let v: Value = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let v = match v.get("certificates").and_then(|c| c.get(0)) {
        Some(c) => c.get("kw").unwrap_or(c).clone(),
        None => v,
    };
    let n = usize_of(&v, "n")?;
    let field = serde_json::from_value::<FieldSpec>(get(&v, "field")?.clone())
        .map_err(|e| Error::Parse(e.to_string()))?
        .field()?;
    let d = usize_of(&v, "d")?;
    let curve = match v.get("curve") {
        None | Some(Value::Null) => None,
        Some(c) => {
            let cols = array(c, "curve")?.iter().map(|x| scalar_vec(field, x, "curve")).collect::<Result<Vec<_>>>()?;
            Some(RationalCurve::new(Matrix::from_cols(field, &cols, n + 1)?)?)
        }
    };
    let distinguished = opt_point(field, &v, "distinguished")?;
    let parts = array(get(&v, "parts")?, "parts")?
        .iter()
        .map(|p| {
            let basis = array(get(p, "basis")?, "basis")?.iter().map(|b| scalar_vec(field, b, "basis")).collect::<Result<Vec<_>>>()?;
            Ok(LinearPart {
                dim: usize_of(p, "dim")?,
                factor: BinaryForm::new(field, scalar_vec(field, get(p, "factor")?, "factor")?)?,
                space: LinearSubspace::from_vectors(field, n, &basis)?,
                attachment: opt_point(field, p, "attachment")?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let rows = array(get(&v, "matrix")?, "matrix")?;
    if rows.len() != 2 {
        return Err(Error::InvalidInput("KW matrix must have two rows".into()));
    }
    let row = |r: &Value| -> Result<Vec<LinForm>> {
        array(r, "matrix row")?.iter().map(|e| Ok(LinForm::new(scalar_vec(field, e, "entry")?))).collect()
    };
    let matrix = [row(&rows[0])?, row(&rows[1])?];
    Ok(KwVariety { n, field, d, curve, distinguished, parts, matrix, warnings: Vec::new() })
}
