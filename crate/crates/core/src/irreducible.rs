//! Irreducibility certificates over `k[x1..xn]` localized at the origin.
//!
//! A complex is certified when its top term has rank one and every
//! differential `d` lands in `m^s` for some `s >= 1` with the induced map
//! `F/mF -> (m^s/m^(s+1)) ⊗ F'` injective. Certified complexes are
//! indecomposable; a refusal proves nothing.

use std::fmt;

use serde_json::{json, Value};

use crate::complex::ChainComplex;
use crate::error::{Error, Result};
use crate::json::{get, get_i64, get_str};
use crate::matrix::Matrix;
use crate::ring::{MaximalIdealFiltration, Ring, Valuation};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DifferentialCheck {
    /// Source degree of the differential.
    pub degree: i64,
    pub s: u32,
    pub injectivity_rank: usize,
    /// `(rows * dim m^s/m^(s+1), cols)`.
    pub induced_shape: (usize, usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Certified,
    Refused { condition: Condition, degree: i64, reason: String },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Condition {
    /// Rank one in the top degree.
    TopRank,
    /// Containment in `m^s` with injective induced map.
    Injectivity,
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Condition::TopRank => "a",
            Condition::Injectivity => "b",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IrreducibilityCertificate {
    pub top_degree: i64,
    pub checks: Vec<DifferentialCheck>,
    pub verdict: Verdict,
}

impl IrreducibilityCertificate {
    pub fn is_certified(&self) -> bool {
        self.verdict == Verdict::Certified
    }

    pub fn check(&self, degree: i64) -> Option<&DifferentialCheck> {
        self.checks.iter().find(|c| c.degree == degree)
    }

    pub fn to_json(&self) -> Value {
        let verdict = match &self.verdict {
            Verdict::Certified => json!("certified"),
            Verdict::Refused { condition, degree, reason } => {
                json!({"refused": {"condition": condition.to_string(), "degree": degree, "reason": reason}})
            }
        };
        json!({
            "top_degree": self.top_degree,
            "verdict": verdict,
            "differentials": self.checks.iter().map(|c| json!({
                "degree": c.degree,
                "s": c.s,
                "injectivity_rank": c.injectivity_rank,
                "induced_matrix_shape": [c.induced_shape.0, c.induced_shape.1],
            })).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &Value) -> Result<IrreducibilityCertificate> {
        let uint = |v: &Value, key: &str| -> Result<u64> {
            get(v, key)?.as_u64().ok_or_else(|| Error::Parse(format!("'{key}' must be a nonnegative integer")))
        };
        let checks = get(v, "differentials")?
            .as_array()
            .ok_or_else(|| Error::Parse("'differentials' must be a list".into()))?
            .iter()
            .map(|c| {
                let shape = get(c, "induced_matrix_shape")?
                    .as_array()
                    .filter(|a| a.len() == 2)
                    .and_then(|a| Some((a[0].as_u64()? as usize, a[1].as_u64()? as usize)))
                    .ok_or_else(|| Error::Parse("'induced_matrix_shape' must be [rows, cols]".into()))?;
                Ok(DifferentialCheck {
                    degree: get_i64(c, "degree")?,
                    s: u32::try_from(uint(c, "s")?).map_err(|_| Error::Parse("'s' out of range".into()))?,
                    injectivity_rank: uint(c, "injectivity_rank")? as usize,
                    induced_shape: shape,
                })
            })
            .collect::<Result<_>>()?;
        let verdict = match get(v, "verdict")? {
            Value::String(s) if s == "certified" => Verdict::Certified,
            Value::Object(o) if o.contains_key("refused") => {
                let r = &o["refused"];
                let condition = match get_str(r, "condition")? {
                    "a" => Condition::TopRank,
                    "b" => Condition::Injectivity,
                    other => return Err(Error::Parse(format!("unknown condition '{other}'"))),
                };
                Verdict::Refused { condition, degree: get_i64(r, "degree")?, reason: get_str(r, "reason")?.to_string() }
            }
            other => return Err(Error::Parse(format!("bad verdict {other}"))),
        };
        Ok(IrreducibilityCertificate { top_degree: get_i64(v, "top_degree")?, checks, verdict })
    }

    pub fn to_text(&self) -> String {
        let mut out = match &self.verdict {
            Verdict::Certified => "certified\n".to_string(),
            Verdict::Refused { condition, degree, reason } => {
                format!("refused at condition ({condition}), degree {degree}: {reason}\n")
            }
        };
        out.push_str(&format!("top degree {}\n", self.top_degree));
        for c in &self.checks {
            out.push_str(&format!(
                "d({}): s = {}, induced {}x{}, rank {}\n",
                c.degree, c.s, c.induced_shape.0, c.induced_shape.1, c.injectivity_rank
            ));
        }
        out
    }
}

fn preconditions(c: &ChainComplex) -> Result<()> {
    if !matches!(c.ring(), Ring::LocalizedPoly { .. }) {
        return Err(Error::Capability { required: "a localized polynomial ring", ring: c.ring().to_string() });
    }
    if c.is_empty() {
        return Err(Error::InvalidComplex("the empty complex has no certificate".into()));
    }
    c.validate().map_err(|v| Error::InvalidComplex(v.to_string()))
}

/// Matrix of leading forms at level `s` over the residue field: row
/// `r * dim + b` holds coordinate `b` of the leading forms in row `r`.
/// `None` if some entry has valuation below `s`.
fn induced_rank(ring: &Ring, d: &Matrix, s: u32) -> Result<Option<(usize, (usize, usize))>> {
    let filt = MaximalIdealFiltration::new(ring, s)?;
    let dim = filt.basis().len();
    let mut rows = vec![Vec::with_capacity(d.cols()); d.rows() * dim];
    for r in 0..d.rows() {
        for c in 0..d.cols() {
            let lf = match ring.leading_form(d.get(r, c), s, &filt) {
                Ok(lf) => lf,
                Err(Error::BelowFiltration { .. }) => return Ok(None),
                Err(e) => return Err(e),
            };
            for (b, x) in lf.into_iter().enumerate() {
                rows[r * dim + b].push(x);
            }
        }
    }
    let field = ring.residue_field().expect("local ring");
    let shape = (rows.len(), d.cols());
    Ok(Some((field.rank(rows), shape)))
}

pub fn find_certificate(c: &ChainComplex) -> Result<IrreducibilityCertificate> {
    preconditions(c)?;
    let ring = c.ring();
    let top = c.max_deg();
    let mut cert = IrreducibilityCertificate { top_degree: top, checks: Vec::new(), verdict: Verdict::Certified };
    if c.rank(top) != 1 {
        cert.verdict = Verdict::Refused {
            condition: Condition::TopRank,
            degree: top,
            reason: format!("rank {} in the top degree", c.rank(top)),
        };
        return Ok(cert);
    }
    for i in c.min_deg()..top {
        let d = c.diff(i).unwrap();
        let refuse = |reason: String| Verdict::Refused { condition: Condition::Injectivity, degree: i, reason };
        if d.cols() == 0 {
            let dim = MaximalIdealFiltration::new(ring, 1)?.basis().len();
            cert.checks.push(DifferentialCheck { degree: i, s: 1, injectivity_rank: 0, induced_shape: (d.rows() * dim, 0) });
            continue;
        }
        let mut s = None;
        for (_, _, e) in d.entries() {
            if let Valuation::Finite(v) = ring.valuation(e)? {
                s = Some(s.map_or(v, |m: u32| m.min(v)));
            }
        }
        let Some(s) = s else {
            cert.verdict = refuse("zero differential on a nonzero module".into());
            return Ok(cert);
        };
        if s == 0 {
            cert.verdict = refuse("a unit entry, so the differential is not inside the maximal ideal".into());
            return Ok(cert);
        }
        let (rank, shape) = induced_rank(ring, d, s)?.expect("s is the minimum valuation");
        cert.checks.push(DifferentialCheck { degree: i, s, injectivity_rank: rank, induced_shape: shape });
        if rank != d.cols() {
            cert.verdict = refuse(format!("induced map at s = {s} has rank {rank} < {}", d.cols()));
            return Ok(cert);
        }
    }
    Ok(cert)
}

/// Recomputes every condition with the certificate's exponents.
pub fn verify_certificate(c: &ChainComplex, cert: &IrreducibilityCertificate) -> Result<bool> {
    preconditions(c)?;
    let expected: Vec<i64> = (c.min_deg()..c.max_deg()).collect();
    let listed: Vec<i64> = cert.checks.iter().map(|k| k.degree).collect();
    if cert.top_degree != c.max_deg() || (cert.is_certified() && listed != expected) {
        return Err(Error::Shape("certificate does not match the complex's degrees".into()));
    }
    if !cert.is_certified() || c.rank(c.max_deg()) != 1 {
        return Ok(false);
    }
    let ring = c.ring();
    for k in &cert.checks {
        let d = c.diff(k.degree).unwrap();
        if k.s == 0 {
            return Ok(false);
        }
        if d.cols() == 0 {
            continue;
        }
        match induced_rank(ring, d, k.s)? {
            Some((rank, shape)) if rank == d.cols() && rank == k.injectivity_rank && shape == k.induced_shape => {}
            _ => return Ok(false),
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{f_n, iterated_koszul, koszul};
    use crate::ring::Field;

    fn ql(n: usize) -> Ring {
        Ring::localized_poly(Field::Rationals, n).unwrap()
    }

    #[test]
    fn f_n_certified_with_expected_exponents() {
        let r = ql(2);
        for n in 1..6 {
            let f = f_n(&r, n).unwrap();
            let cert = find_certificate(&f).unwrap();
            assert!(cert.is_certified(), "{}", cert.to_text());
            assert_eq!(cert.check(-1).unwrap().s, 1);
            assert_eq!(cert.check(-1).unwrap().induced_shape, (2, 2));
            for i in -(n as i64)..-1 {
                let k = cert.check(i).unwrap();
                assert_eq!((k.s, k.injectivity_rank, k.induced_shape), (2, 2, (6, 2)));
            }
            assert!(verify_certificate(&f, &cert).unwrap());
        }
    }

    #[test]
    fn interior_induced_columns() {
        // columns of D read off in the basis x^2, xy, y^2 per target copy
        let r = ql(2);
        let d = crate::generators::interior_matrix(&r).unwrap();
        let filt = MaximalIdealFiltration::new(&r, 2).unwrap();
        let col: Vec<i64> = (0..2)
            .flat_map(|row| r.leading_form(d.get(row, 0), 2, &filt).unwrap())
            .map(|q| i64::try_from(q.to_integer()).unwrap())
            .collect();
        assert_eq!(col, vec![0, 1, 0, -1, 0, 0]);
        let col: Vec<i64> = (0..2)
            .flat_map(|row| r.leading_form(d.get(row, 1), 2, &filt).unwrap())
            .map(|q| i64::try_from(q.to_integer()).unwrap())
            .collect();
        assert_eq!(col, vec![0, 0, 1, 0, -1, 0]);
    }

    #[test]
    fn koszul_and_iterated() {
        for n in 2..4 {
            let k = koszul(&ql(n)).unwrap();
            let cert = find_certificate(&k).unwrap();
            assert!(cert.is_certified());
            assert!(cert.checks.iter().all(|c| c.s == 1));
            let it = iterated_koszul(&ql(n)).unwrap();
            let cert = find_certificate(&it).unwrap();
            assert!(cert.is_certified(), "{}", cert.to_text());
            assert!(verify_certificate(&it, &cert).unwrap());
        }
    }

    #[test]
    fn direct_sum_refused_at_top_rank() {
        let f = f_n(&ql(2), 2).unwrap();
        let cert = find_certificate(&f.direct_sum(&f).unwrap()).unwrap();
        assert!(matches!(cert.verdict, Verdict::Refused { condition: Condition::TopRank, .. }));
    }

    #[test]
    fn tampered_exponent_fails() {
        let f = f_n(&ql(2), 3).unwrap();
        let mut cert = find_certificate(&f).unwrap();
        cert.checks.iter_mut().find(|c| c.degree == -1).unwrap().s = 2;
        assert!(!verify_certificate(&f, &cert).unwrap());
    }

    #[test]
    fn unit_and_zero_differentials_refused() {
        let r = ql(2);
        let unit = ChainComplex::from_differentials(r.clone(), -1, vec![Matrix::parse(&r, &[&["1", "x"]]).unwrap()]).unwrap();
        assert!(!find_certificate(&unit).unwrap().is_certified());
        let zero = ChainComplex::new(r.clone(), -1, vec![1, 1], vec![Matrix::zeros(&r, 1, 1)]).unwrap();
        let cert = find_certificate(&zero).unwrap();
        assert!(matches!(cert.verdict, Verdict::Refused { condition: Condition::Injectivity, degree: -1, .. }));
    }

    #[test]
    fn capability_and_empty_errors() {
        assert!(matches!(find_certificate(&ChainComplex::single(Ring::Integers, 0, 1)), Err(Error::Capability { .. })));
        assert!(find_certificate(&ChainComplex::empty(ql(2))).is_err());
    }

    #[test]
    fn json_round_trip() {
        let cert = find_certificate(&f_n(&ql(2), 4).unwrap()).unwrap();
        assert_eq!(IrreducibilityCertificate::from_json(&cert.to_json()).unwrap(), cert);
        let refused = find_certificate(&f_n(&ql(2), 1).unwrap().direct_sum(&f_n(&ql(2), 1).unwrap()).unwrap()).unwrap();
        assert_eq!(IrreducibilityCertificate::from_json(&refused.to_json()).unwrap(), refused);
    }
}
