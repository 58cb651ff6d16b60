//! JSON interchange for complexes.
//!
//! ```text
//! { "ring": "q-local:2", "min_deg": -2, "max_deg": 0,
//!   "ranks": {"-2": 1, "-1": 2, "0": 1},
//!   "diffs": {"-2": [["-y"], ["x"]], "-1": [["x", "y"]]} }
//! ```
//!
//! Entries are written as expression strings; on input any form accepted by
//! [`Ring::decode`] is allowed. Matrices are row-major, `rank(i+1)` rows by
//! `rank(i)` columns.

use serde_json::{json, Map, Value};

use crate::complex::ChainComplex;
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::ring::Ring;

pub fn matrix_to_json(ring: &Ring, m: &Matrix) -> Value {
    Value::Array(
        (0..m.rows())
            .map(|r| Value::Array(m.row(r).iter().map(|e| Value::String(ring.display(e))).collect()))
            .collect(),
    )
}

pub fn matrix_from_json(ring: &Ring, v: &Value, rows: usize, cols: usize) -> Result<Matrix> {
    let list = v.as_array().ok_or_else(|| Error::Parse("matrix must be a list of rows".into()))?;
    if list.len() != rows {
        return Err(Error::Shape(format!("matrix has {} rows, expected {rows}", list.len())));
    }
    let mut m = Matrix::zeros(ring, rows, cols);
    for (r, row) in list.iter().enumerate() {
        let row = row.as_array().ok_or_else(|| Error::Parse(format!("row {r} is not a list")))?;
        if row.len() != cols {
            return Err(Error::Shape(format!("row {r} has {} entries, expected {cols}", row.len())));
        }
        for (c, e) in row.iter().enumerate() {
            m.set(r, c, ring.decode(e)?);
        }
    }
    Ok(m)
}

pub(crate) fn get<'a>(v: &'a Value, key: &str) -> Result<&'a Value> {
    v.get(key).ok_or_else(|| Error::Parse(format!("missing field '{key}'")))
}

pub(crate) fn get_i64(v: &Value, key: &str) -> Result<i64> {
    get(v, key)?.as_i64().ok_or_else(|| Error::Parse(format!("field '{key}' must be an integer")))
}

pub(crate) fn get_str<'a>(v: &'a Value, key: &str) -> Result<&'a str> {
    get(v, key)?.as_str().ok_or_else(|| Error::Parse(format!("field '{key}' must be a string")))
}

pub(crate) fn get_ring(v: &Value) -> Result<Ring> {
    match get(v, "ring")? {
        Value::String(s) => s.parse(),
        other => serde_json::from_value::<Ring>(other.clone())
            .map_err(|e| Error::InvalidRing(e.to_string()))?
            .checked(),
    }
}

impl ChainComplex {
    pub fn to_json(&self) -> Value {
        let mut ranks = Map::new();
        let mut diffs = Map::new();
        if !self.is_empty() {
            for (d, r) in self.ranks() {
                ranks.insert(d.to_string(), json!(r));
            }
            for d in self.min_deg()..self.max_deg() {
                diffs.insert(d.to_string(), matrix_to_json(self.ring(), self.diff(d).unwrap()));
            }
        }
        json!({
            "ring": self.ring().to_string(),
            "min_deg": self.min_deg(),
            "max_deg": self.max_deg(),
            "ranks": ranks,
            "diffs": diffs,
        })
    }

    /// Parses the interchange format. Shapes are always checked; `d ∘ d = 0`
    /// only when `check` is set.
    pub fn from_json(v: &Value, check: bool) -> Result<ChainComplex> {
        let ring = get_ring(v)?;
        let min_deg = get_i64(v, "min_deg")?;
        let max_deg = get_i64(v, "max_deg")?;
        if max_deg < min_deg {
            return Err(Error::Parse(format!("max_deg {max_deg} is below min_deg {min_deg}")));
        }
        let ranks_obj = get(v, "ranks")?.as_object().ok_or_else(|| Error::Parse("'ranks' must be an object".into()))?;
        let mut ranks = vec![0usize; (max_deg - min_deg + 1) as usize];
        for (k, r) in ranks_obj {
            let d: i64 = k.trim().parse().map_err(|_| Error::Parse(format!("bad degree key '{k}'")))?;
            let r = r.as_u64().ok_or_else(|| Error::Parse(format!("rank at degree {d} must be a nonnegative integer")))?
                as usize;
            if d < min_deg || d > max_deg {
                if r != 0 {
                    return Err(Error::Shape(format!("nonzero rank at degree {d} outside [{min_deg}, {max_deg}]")));
                }
                continue;
            }
            ranks[(d - min_deg) as usize] = r;
        }
        let diffs_obj = match v.get("diffs") {
            None => Map::new(),
            Some(d) => d.as_object().cloned().ok_or_else(|| Error::Parse("'diffs' must be an object".into()))?,
        };
        for k in diffs_obj.keys() {
            let d: i64 = k.trim().parse().map_err(|_| Error::Parse(format!("bad degree key '{k}'")))?;
            if d < min_deg || d >= max_deg {
                return Err(Error::Shape(format!("differential at degree {d} lies outside the complex")));
            }
        }
        let mut diffs = Vec::with_capacity(ranks.len().saturating_sub(1));
        for d in min_deg..max_deg {
            let (rows, cols) = (ranks[(d - min_deg + 1) as usize], ranks[(d - min_deg) as usize]);
            let m = match diffs_obj.iter().find(|(k, _)| k.trim().parse::<i64>().ok() == Some(d)) {
                Some((_, m)) => matrix_from_json(&ring, m, rows, cols)
                    .map_err(|e| prefix(e, &format!("differential at degree {d}: ")))?,
                None if rows == 0 || cols == 0 => Matrix::zeros(&ring, rows, cols),
                None => return Err(Error::Shape(format!("missing differential at degree {d}"))),
            };
            diffs.push(m);
        }
        let c = ChainComplex::new(ring, min_deg, ranks, diffs)?;
        if check {
            c.validate().map_err(|v| Error::InvalidComplex(v.to_string()))?;
        }
        Ok(c)
    }

    pub fn from_json_str(s: &str, check: bool) -> Result<ChainComplex> {
        let v: Value = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        ChainComplex::from_json(&v, check)
    }
}

fn prefix(e: Error, p: &str) -> Error {
    match e {
        Error::Shape(m) => Error::Shape(format!("{p}{m}")),
        Error::Parse(m) => Error::Parse(format!("{p}{m}")),
        other => other,
    }
}
