//! Minimal models over local rings.
//!
//! A unit entry `u` of a differential splits off the acyclic piece
//! `0 -> R --u--> R -> 0`: after clearing its row and column, the adjacent
//! differentials have a zero column and a zero row there, so one basis
//! vector is deleted from each of the two degrees.

use serde_json::{json, Value};

use crate::complex::ChainComplex;
use crate::error::{Error, Result};
use crate::json::{get, get_i64, get_ring};
use crate::matrix::Matrix;
use crate::ring::{Ring, RingElement};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum ScanOrder {
    /// Lowest degree first, then row by row.
    #[default]
    RowMajor,
    /// Lowest degree first, then column by column.
    ColumnMajor,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinimizationStep {
    /// Source degree of the differential holding the pivot.
    pub degree: i64,
    pub row: usize,
    pub col: usize,
    pub pivot: RingElement,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinimizationTranscript {
    pub ring: Ring,
    pub steps: Vec<MinimizationStep>,
    pub initial_ranks: Vec<(i64, usize)>,
    pub final_ranks: Vec<(i64, usize)>,
}

fn require_local(c: &ChainComplex) -> Result<()> {
    if c.ring().is_local() {
        Ok(())
    } else {
        Err(Error::Capability { required: "a local ring", ring: c.ring().to_string() })
    }
}

/// Whether no differential has a unit entry.
pub fn is_minimal(c: &ChainComplex) -> Result<bool> {
    require_local(c)?;
    let ring = c.ring();
    Ok(c.degrees().filter_map(|i| c.diff(i)).all(|d| d.entries().all(|(_, _, e)| !ring.is_unit(e))))
}

pub fn minimize(c: &ChainComplex) -> Result<(ChainComplex, MinimizationTranscript)> {
    minimize_with(c, ScanOrder::RowMajor)
}

pub fn minimize_with(c: &ChainComplex, order: ScanOrder) -> Result<(ChainComplex, MinimizationTranscript)> {
    require_local(c)?;
    c.validate().map_err(|v| Error::InvalidComplex(v.to_string()))?;
    let ring = c.ring().clone();
    let min_deg = c.min_deg();
    let mut ranks: Vec<usize> = c.degrees().map(|i| c.rank(i)).collect();
    let mut diffs: Vec<Matrix> = (min_deg..c.max_deg()).map(|i| c.diff(i).unwrap().clone()).collect();
    let mut steps = Vec::new();

    while let Some((k, r, col)) = find_pivot(&ring, &diffs, order) {
        let u = diffs[k].get(r, col).clone();
        let u_inv = ring.invert_unit(&u)?;
        // clear column `col`: row ops on d_k, compensated on d_{k+1}
        for rr in 0..diffs[k].rows() {
            if rr == r || ring.is_zero(diffs[k].get(rr, col)) {
                continue;
            }
            let f = ring.neg(&ring.mul(diffs[k].get(rr, col), &u_inv)?)?;
            diffs[k].add_row_multiple(rr, r, &f, &ring)?;
            if k + 1 < diffs.len() {
                diffs[k + 1].add_col_multiple(r, rr, &ring.neg(&f)?, &ring)?;
            }
        }
        // clear row `r`: column ops on d_k, compensated on d_{k-1}
        for cc in 0..diffs[k].cols() {
            if cc == col || ring.is_zero(diffs[k].get(r, cc)) {
                continue;
            }
            let g = ring.neg(&ring.mul(diffs[k].get(r, cc), &u_inv)?)?;
            diffs[k].add_col_multiple(cc, col, &g, &ring)?;
            if k > 0 {
                diffs[k - 1].add_row_multiple(col, cc, &ring.neg(&g)?, &ring)?;
            }
        }
        diffs[k].remove_row(r);
        diffs[k].remove_col(col);
        if k + 1 < diffs.len() {
            debug_assert!((0..diffs[k + 1].rows()).all(|i| ring.is_zero(diffs[k + 1].get(i, r))));
            diffs[k + 1].remove_col(r);
        }
        if k > 0 {
            debug_assert!((0..diffs[k - 1].cols()).all(|j| ring.is_zero(diffs[k - 1].get(col, j))));
            diffs[k - 1].remove_row(col);
        }
        ranks[k] -= 1;
        ranks[k + 1] -= 1;
        steps.push(MinimizationStep { degree: min_deg + k as i64, row: r, col, pivot: u });
    }

    let out = ChainComplex::new(ring.clone(), min_deg, ranks, diffs)?;
    let transcript = MinimizationTranscript {
        ring,
        steps,
        initial_ranks: c.ranks(),
        final_ranks: if out.is_empty() { Vec::new() } else { out.ranks() },
    };
    Ok((out, transcript))
}

fn find_pivot(ring: &Ring, diffs: &[Matrix], order: ScanOrder) -> Option<(usize, usize, usize)> {
    for (k, d) in diffs.iter().enumerate() {
        let (rows, cols) = d.shape();
        let found = match order {
            ScanOrder::RowMajor => {
                (0..rows).flat_map(|r| (0..cols).map(move |c| (r, c))).find(|&(r, c)| ring.is_unit(d.get(r, c)))
            }
            ScanOrder::ColumnMajor => {
                (0..cols).flat_map(|c| (0..rows).map(move |r| (r, c))).find(|&(r, c)| ring.is_unit(d.get(r, c)))
            }
        };
        if let Some((r, c)) = found {
            return Some((k, r, c));
        }
    }
    None
}

/// Length of the minimal model; `None` when it is empty (acyclic input).
pub fn width(c: &ChainComplex) -> Result<Option<usize>> {
    Ok(minimize(c)?.0.length())
}

fn ranks_json(ranks: &[(i64, usize)]) -> Value {
    Value::Object(ranks.iter().map(|(d, r)| (d.to_string(), json!(r))).collect())
}

fn ranks_from_json(v: &Value) -> Result<Vec<(i64, usize)>> {
    let obj = v.as_object().ok_or_else(|| Error::Parse("ranks must be an object".into()))?;
    let mut out = obj
        .iter()
        .map(|(k, r)| {
            let d = k.parse::<i64>().map_err(|_| Error::Parse(format!("bad degree key '{k}'")))?;
            let r = r.as_u64().ok_or_else(|| Error::Parse("rank must be a nonnegative integer".into()))?;
            Ok((d, r as usize))
        })
        .collect::<Result<Vec<_>>>()?;
    out.sort();
    Ok(out)
}

impl MinimizationTranscript {
    pub fn to_json(&self) -> Value {
        json!({
            "ring": self.ring.to_string(),
            "initial_ranks": ranks_json(&self.initial_ranks),
            "final_ranks": ranks_json(&self.final_ranks),
            "steps": self.steps.iter().map(|s| json!({
                "degree": s.degree,
                "row": s.row,
                "col": s.col,
                "pivot": self.ring.display(&s.pivot),
            })).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &Value) -> Result<MinimizationTranscript> {
        let ring = get_ring(v)?;
        let steps = get(v, "steps")?
            .as_array()
            .ok_or_else(|| Error::Parse("'steps' must be a list".into()))?
            .iter()
            .map(|s| {
                let index = |key: &str| -> Result<usize> {
                    get(s, key)?.as_u64().map(|x| x as usize).ok_or_else(|| Error::Parse(format!("'{key}' must be an index")))
                };
                Ok(MinimizationStep {
                    degree: get_i64(s, "degree")?,
                    row: index("row")?,
                    col: index("col")?,
                    pivot: ring.decode(get(s, "pivot")?)?,
                })
            })
            .collect::<Result<_>>()?;
        Ok(MinimizationTranscript {
            initial_ranks: ranks_from_json(get(v, "initial_ranks")?)?,
            final_ranks: ranks_from_json(get(v, "final_ranks")?)?,
            ring,
            steps,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::ChainMap;
    use crate::generators::{f_n, koszul};
    use crate::ring::Field;

    fn ql(n: usize) -> Ring {
        Ring::localized_poly(Field::Rationals, n).unwrap()
    }

    #[test]
    fn splits_off_unit_pivot() {
        let r = ql(2);
        let c = ChainComplex::from_differentials(r.clone(), 0, vec![Matrix::parse(&r, &[&["1", "x"], &["0", "y"]]).unwrap()])
            .unwrap();
        let (m, t) = minimize(&c).unwrap();
        assert_eq!(m.ranks(), vec![(0, 1), (1, 1)]);
        assert_eq!(m.diff(0).unwrap(), &Matrix::parse(&r, &[&["y"]]).unwrap());
        assert_eq!(t.steps.len(), 1);
        assert_eq!((t.steps[0].row, t.steps[0].col), (0, 0));
        assert_eq!(MinimizationTranscript::from_json(&t.to_json()).unwrap(), t);
    }

    #[test]
    fn minimal_inputs_are_untouched() {
        let r = ql(2);
        for n in 1..5 {
            let f = f_n(&r, n).unwrap();
            assert!(is_minimal(&f).unwrap());
            let (m, t) = minimize(&f).unwrap();
            assert_eq!(m, f);
            assert!(t.steps.is_empty());
            assert_eq!(width(&f).unwrap(), Some(n));
        }
        assert_eq!(width(&koszul(&ql(3)).unwrap()).unwrap(), Some(3));
        assert!(is_minimal(&ChainComplex::empty(r)).unwrap());
    }

    #[test]
    fn unit_differential() {
        let r = ql(1);
        let c = ChainComplex::from_differentials(r.clone(), 0, vec![Matrix::identity(&r, 1)]).unwrap();
        assert!(!is_minimal(&c).unwrap());
        assert_eq!(width(&c).unwrap(), None);
    }

    #[test]
    fn cone_of_identity_vanishes() {
        let k = koszul(&ql(2)).unwrap();
        let cone = ChainMap::identity(&k).cone().unwrap();
        let (m, t) = minimize(&cone).unwrap();
        assert!(m.is_empty());
        assert_eq!(t.steps.len(), 4);
        assert!(t.final_ranks.is_empty());
    }

    #[test]
    fn refuses_non_local_and_invalid() {
        assert!(matches!(minimize(&ChainComplex::single(Ring::Integers, 0, 1)), Err(Error::Capability { .. })));
        let r = ql(1);
        let x = Matrix::parse(&r, &[&["x"]]).unwrap();
        let bad = ChainComplex::from_differentials(r, 0, vec![x.clone(), x]).unwrap();
        assert!(matches!(minimize(&bad), Err(Error::InvalidComplex(_))));
    }

    #[test]
    fn scan_orders_agree_on_ranks() {
        let r = ql(2);
        let c = ChainComplex::from_differentials(
            r.clone(),
            0,
            vec![Matrix::parse(&r, &[&["x", "1", "0"], &["1", "y", "x"], &["0", "x", "1"]]).unwrap()],
        )
        .unwrap();
        let (a, _) = minimize_with(&c, ScanOrder::RowMajor).unwrap();
        let (b, _) = minimize_with(&c, ScanOrder::ColumnMajor).unwrap();
        assert_eq!(a.rank_vector(), b.rank_vector());
        assert!(is_minimal(&a).unwrap() && is_minimal(&b).unwrap());
    }
}

