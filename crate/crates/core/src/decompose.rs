//! Decomposition of complexes over principal ideal domains into summands of
//! length at most one.
//!
//! Over a hereditary ring every complex is quasi-isomorphic to its
//! cohomology, so the summands are read off the cohomology: a free part
//! `R^k` in degree `i`, and `0 -> R --d--> R -> 0` ending in degree `i` for
//! each non-unit invariant factor `d` of `H^i`.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::complex::ChainComplex;
use crate::error::{Error, Result};
use crate::json::{get, get_i64, get_ring, get_str};
use crate::matrix::Matrix;
use crate::ring::{Field, Poly, Ring, RingElement};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SummandKind {
    Free { rank: usize },
    Cyclic { d: RingElement },
}

/// A complex of length at most one: `R^rank` in `end_degree`, or
/// `R --d--> R` in degrees `end_degree - 1, end_degree`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Summand {
    pub end_degree: i64,
    pub kind: SummandKind,
}

impl Summand {
    pub fn free(end_degree: i64, rank: usize) -> Self {
        Summand { end_degree, kind: SummandKind::Free { rank } }
    }

    pub fn cyclic(end_degree: i64, d: RingElement) -> Self {
        Summand { end_degree, kind: SummandKind::Cyclic { d } }
    }

    pub fn length(&self) -> usize {
        match self.kind {
            SummandKind::Free { .. } => 0,
            SummandKind::Cyclic { .. } => 1,
        }
    }

    pub fn to_complex(&self, ring: &Ring) -> ChainComplex {
        match &self.kind {
            SummandKind::Free { rank } => ChainComplex::single(ring.clone(), self.end_degree, *rank),
            SummandKind::Cyclic { d } => {
                let m = Matrix::from_rows(ring, vec![vec![d.clone()]]).expect("element of the ring");
                ChainComplex::from_differentials(ring.clone(), self.end_degree - 1, vec![m]).unwrap()
            }
        }
    }

    pub fn to_json(&self, ring: &Ring) -> Value {
        match &self.kind {
            SummandKind::Free { rank } => json!({"end_degree": self.end_degree, "kind": "free", "rank": rank}),
            SummandKind::Cyclic { d } => {
                json!({"end_degree": self.end_degree, "kind": "cyclic", "d": ring.display(d)})
            }
        }
    }

    pub fn from_json(ring: &Ring, v: &Value) -> Result<Summand> {
        let end_degree = get_i64(v, "end_degree")?;
        match get_str(v, "kind")? {
            "free" => {
                let rank = get(v, "rank")?.as_u64().ok_or_else(|| Error::Parse("'rank' must be a nonnegative integer".into()))?;
                Ok(Summand::free(end_degree, rank as usize))
            }
            "cyclic" => Ok(Summand::cyclic(end_degree, ring.decode(get(v, "d")?)?)),
            k => Err(Error::Parse(format!("unknown summand kind '{k}'"))),
        }
    }

    fn describe(&self, ring: &Ring) -> String {
        match &self.kind {
            SummandKind::Free { rank } => format!("({}, free {rank})", self.end_degree),
            SummandKind::Cyclic { d } => format!("({}, cyclic {})", self.end_degree, ring.display(d)),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Refinement {
    InvariantFactor,
    Primary,
}

impl fmt::Display for Refinement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Refinement::InvariantFactor => "invariant_factor",
            Refinement::Primary => "primary",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecompositionReport {
    pub ring: Ring,
    pub refinement: Refinement,
    pub summands: Vec<Summand>,
}

impl DecompositionReport {
    /// Direct sum of the summand complexes.
    pub fn to_complex(&self) -> ChainComplex {
        self.summands.iter().fold(ChainComplex::empty(self.ring.clone()), |acc, s| {
            acc.direct_sum(&s.to_complex(&self.ring)).expect("same ring")
        })
    }

    /// Whether both reports list the same summands, with free parts merged
    /// per degree and order ignored.
    pub fn same_summands(&self, other: &DecompositionReport) -> bool {
        self.ring == other.ring && canonical(&self.ring, &self.summands) == canonical(&other.ring, &other.summands)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "ring": self.ring.to_string(),
            "refinement": self.refinement.to_string(),
            "summands": self.summands.iter().map(|s| s.to_json(&self.ring)).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &Value) -> Result<DecompositionReport> {
        let ring = get_ring(v)?;
        let refinement = serde_json::from_value(get(v, "refinement")?.clone()).map_err(|e| Error::Parse(e.to_string()))?;
        let summands = get(v, "summands")?
            .as_array()
            .ok_or_else(|| Error::Parse("'summands' must be a list".into()))?
            .iter()
            .map(|s| Summand::from_json(&ring, s))
            .collect::<Result<_>>()?;
        Ok(DecompositionReport { ring, refinement, summands })
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("ring {}\nrefinement {}\n", self.ring, self.refinement);
        if self.summands.is_empty() {
            out.push_str("summands: none (acyclic)\n");
        }
        for s in &self.summands {
            out.push_str(&format!("{}\n", s.describe(&self.ring)));
        }
        out
    }
}

pub fn decompose(c: &ChainComplex) -> Result<DecompositionReport> {
    let ring = c.ring();
    if !ring.is_pid() {
        return Err(Error::Capability { required: "a PID", ring: ring.to_string() });
    }
    c.validate().map_err(|v| Error::InvalidComplex(v.to_string()))?;
    let mut summands = Vec::new();
    for h in c.cohomology()?.degrees {
        if h.free_rank > 0 {
            summands.push(Summand::free(h.degree, h.free_rank));
        }
        summands.extend(h.invariant_factors.into_iter().map(|d| Summand::cyclic(h.degree, d)));
    }
    Ok(DecompositionReport { ring: ring.clone(), refinement: Refinement::InvariantFactor, summands })
}

/// Splits every cyclic summand into prime-power pieces.
pub fn primary_refine(r: &DecompositionReport) -> Result<DecompositionReport> {
    Ok(DecompositionReport {
        ring: r.ring.clone(),
        refinement: Refinement::Primary,
        summands: refine_summands(&r.ring, &r.summands)?,
    })
}

pub fn refine_summands(ring: &Ring, summands: &[Summand]) -> Result<Vec<Summand>> {
    let mut out = Vec::new();
    for s in summands {
        match &s.kind {
            SummandKind::Free { .. } => out.push(s.clone()),
            SummandKind::Cyclic { d } => {
                out.extend(prime_power_factors(ring, d)?.into_iter().map(|q| Summand::cyclic(s.end_degree, q)))
            }
        }
    }
    Ok(out)
}

/// Largest summand length; `None` when there are no summands.
pub fn audit_width(r: &DecompositionReport) -> Option<usize> {
    r.summands.iter().map(Summand::length).max()
}

/// Summands sorted by degree with free ranks merged per degree, zero ranks
/// dropped and cyclic generators normalized.
pub fn canonical(ring: &Ring, summands: &[Summand]) -> Vec<Summand> {
    let mut free = std::collections::BTreeMap::<i64, usize>::new();
    let mut cyclic = Vec::new();
    for s in summands {
        match &s.kind {
            SummandKind::Free { rank } => *free.entry(s.end_degree).or_default() += rank,
            SummandKind::Cyclic { d } => {
                let d = ring.split_unit(d).map(|(c, _)| c).unwrap_or_else(|_| d.clone());
                cyclic.push((s.end_degree, ring.display(&d), d));
            }
        }
    }
    cyclic.sort_by(|a, b| a.0.cmp(&b.0).then_with(|| a.1.len().cmp(&b.1.len())).then_with(|| a.1.cmp(&b.1)));
    let mut out: Vec<Summand> =
        free.into_iter().filter(|&(_, r)| r > 0).map(|(deg, r)| Summand::free(deg, r)).collect();
    out.extend(cyclic.into_iter().map(|(deg, _, d)| Summand::cyclic(deg, d)));
    out.sort_by(|a, b| match a.end_degree.cmp(&b.end_degree) {
        Ordering::Equal => a.length().cmp(&b.length()),
        o => o,
    });
    out
}

/// Prime-power factors of a non-unit `d`, as canonical associates.
pub fn prime_power_factors(ring: &Ring, d: &RingElement) -> Result<Vec<RingElement>> {
    let refuse = || Error::RefinementUnsupported(format!("no factorization over {ring}"));
    match (ring, d) {
        (Ring::Integers, RingElement::Int(n)) => Ok(factor_integer(&n.abs())
            .into_iter()
            .map(|(p, e)| ring.from_bigint(&num_traits::pow(p, e as usize)))
            .collect()),
        (Ring::UnivariatePoly { base: k @ Field::PrimeField { .. } }, RingElement::Poly(f)) => {
            Ok(factor_poly(*k, &f.monic(*k)).into_iter().map(|(g, e)| ring.from_poly(g.pow(e, *k))).collect())
        }
        // canonical elements of a DVR are already powers of the uniformizer
        (Ring::LocalizedIntegers { .. } | Ring::LocalizedPoly { num_vars: 1, .. }, _) => {
            Ok(vec![ring.split_unit(d)?.0])
        }
        _ => Err(refuse()),
    }
}

fn factor_integer(n: &BigInt) -> Vec<(BigInt, u32)> {
    let mut n = n.clone();
    let mut out = Vec::new();
    let mut p = BigInt::from(2);
    while &p * &p <= n {
        let mut e = 0;
        while n.is_multiple_of(&p) {
            n /= &p;
            e += 1;
        }
        if e > 0 {
            out.push((p.clone(), e));
        }
        p += 1;
    }
    if n > BigInt::one() {
        out.push((n, 1));
    }
    out
}

/// Trial division by monic polynomials of increasing degree; the first
/// divisor found at each stage is irreducible.
fn factor_poly(k: Field, f: &Poly) -> Vec<(Poly, u32)> {
    let p = k.characteristic();
    let mut rest = f.clone();
    let mut out = Vec::new();
    let mut deg = 1u32;
    while rest.total_degree().unwrap_or(0) >= 2 * deg {
        for g in monic_polys(p, deg) {
            let mut e = 0;
            while let Some(q) = rest.div_exact(&g, k) {
                rest = q;
                e += 1;
            }
            if e > 0 {
                out.push((g, e));
            }
        }
        deg += 1;
    }
    if rest.total_degree().unwrap_or(0) > 0 {
        let rest = rest.monic(k);
        match out.iter_mut().find(|(g, _)| *g == rest) {
            Some((_, e)) => *e += 1,
            None => out.push((rest, 1)),
        }
    }
    out
}

fn monic_polys(p: u64, deg: u32) -> impl Iterator<Item = Poly> {
    let count = p.pow(deg);
    (0..count).map(move |mut code| {
        let mut terms = vec![(vec![deg], BigRational::one())];
        for i in 0..deg {
            let c = code % p;
            code /= p;
            if c != 0 {
                terms.push((vec![i], BigRational::from_integer(c.into())));
            }
        }
        Poly::from_terms(1, Field::PrimeField { p }, terms).expect("valid univariate terms")
    })
}

impl fmt::Display for DecompositionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diag23() -> ChainComplex {
        let z = Ring::Integers;
        ChainComplex::from_differentials(z.clone(), -1, vec![Matrix::parse(&z, &[&["2", "0"], &["0", "3"]]).unwrap()])
            .unwrap()
    }

    #[test]
    fn diag_2_3() {
        let z = Ring::Integers;
        let r = decompose(&diag23()).unwrap();
        assert_eq!(r.summands, vec![Summand::cyclic(0, z.from_int(6))]);
        let p = primary_refine(&r).unwrap();
        assert_eq!(p.summands, vec![Summand::cyclic(0, z.from_int(2)), Summand::cyclic(0, z.from_int(3))]);
        assert_eq!(audit_width(&r), Some(1));
    }

    #[test]
    fn free_and_koszul_one() {
        let z = Ring::Integers;
        let r = decompose(&ChainComplex::single(z, 2, 3)).unwrap();
        assert_eq!(r.summands, vec![Summand::free(2, 3)]);
        assert_eq!(audit_width(&r), Some(0));

        let qx = Ring::UnivariatePoly { base: Field::Rationals };
        let c = ChainComplex::from_differentials(qx.clone(), -1, vec![Matrix::parse(&qx, &[&["x"]]).unwrap()]).unwrap();
        assert_eq!(decompose(&c).unwrap().summands, vec![Summand::cyclic(0, qx.var(0).unwrap())]);
    }

    #[test]
    fn empty_report() {
        let r = decompose(&ChainComplex::empty(Ring::Integers)).unwrap();
        assert_eq!(audit_width(&r), None);
    }

    #[test]
    fn refinement_cases() {
        let z = Ring::Integers;
        let r = DecompositionReport {
            ring: z.clone(),
            refinement: Refinement::InvariantFactor,
            summands: vec![Summand::cyclic(0, z.from_int(4))],
        };
        assert_eq!(primary_refine(&r).unwrap().summands, r.summands);

        let g2 = Ring::UnivariatePoly { base: Field::PrimeField { p: 2 } };
        let r = DecompositionReport {
            ring: g2.clone(),
            refinement: Refinement::InvariantFactor,
            summands: vec![Summand::cyclic(-1, g2.parse_element("x^2 + x").unwrap())],
        };
        let p = primary_refine(&r).unwrap();
        assert!(p.same_summands(&DecompositionReport {
            ring: g2.clone(),
            refinement: Refinement::Primary,
            summands: vec![
                Summand::cyclic(-1, g2.parse_element("x").unwrap()),
                Summand::cyclic(-1, g2.parse_element("x + 1").unwrap())
            ],
        }));

        let qx = Ring::UnivariatePoly { base: Field::Rationals };
        let r = DecompositionReport {
            ring: qx.clone(),
            refinement: Refinement::InvariantFactor,
            summands: vec![Summand::cyclic(0, qx.parse_element("x^2 - 1").unwrap())],
        };
        assert!(matches!(primary_refine(&r), Err(Error::RefinementUnsupported(_))));
    }

    #[test]
    fn polynomial_factorization_gf5() {
        let k = Field::PrimeField { p: 5 };
        let r = Ring::UnivariatePoly { base: k };
        // (x^2 + 2)^2 (x + 1)^3 x, with x^2 + 2 irreducible mod 5
        let f = r.parse_element("(x^2 + 2)^2 * (x + 1)^3 * x").unwrap();
        let RingElement::Poly(fp) = f else { panic!() };
        let mut got: Vec<(String, u32)> = factor_poly(k, &fp).into_iter().map(|(g, e)| (g.to_text(), e)).collect();
        got.sort();
        assert_eq!(got, vec![("x".into(), 1), ("x + 1".into(), 3), ("x^2 + 2".into(), 2)]);
    }

    #[test]
    fn integer_factorization() {
        let f = factor_integer(&BigInt::from(360));
        assert_eq!(f, vec![(BigInt::from(2), 3), (BigInt::from(3), 2), (BigInt::from(5), 1)]);
        assert_eq!(factor_integer(&BigInt::from(97)), vec![(BigInt::from(97), 1)]);
    }

    #[test]
    fn summands_rebuild_cohomology() {
        let c = diag23();
        let r = decompose(&c).unwrap();
        assert_eq!(r.to_complex().cohomology().unwrap(), c.cohomology().unwrap());
    }

    #[test]
    fn json_round_trip() {
        let r = primary_refine(&decompose(&diag23()).unwrap()).unwrap();
        assert_eq!(DecompositionReport::from_json(&r.to_json()).unwrap(), r);
    }

    #[test]
    fn refuses_two_variable_local_ring() {
        let r = Ring::localized_poly(Field::Rationals, 2).unwrap();
        assert!(matches!(decompose(&ChainComplex::single(r, 0, 1)), Err(Error::Capability { .. })));
    }
}
