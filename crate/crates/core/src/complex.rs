//! Bounded cochain complexes of finite free modules.
//!
//! Differentials raise degree by one and act on column vectors by left
//! multiplication: the differential leaving degree `i` is a
//! `rank(i+1) x rank(i)` matrix.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::ring::snf::smith_normal_form;
use crate::ring::{Ring, RingElement};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainComplex {
    ring: Ring,
    min_deg: i64,
    // ranks[k] is the rank in degree min_deg + k; never empty, no zero ends
    // unless the complex is empty (then exactly [0] at degree 0)
    ranks: Vec<usize>,
    diffs: Vec<Matrix>,
}

/// First failure of `d ∘ d = 0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    /// Source degree of the first differential in the composition.
    pub degree: i64,
    pub row: usize,
    pub col: usize,
    pub entry: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "d({}) * d({}) has nonzero entry {} at ({}, {})",
            self.degree + 1,
            self.degree,
            self.entry,
            self.row,
            self.col
        )
    }
}

impl ChainComplex {
    /// Builds a complex from the ranks in degrees `min_deg..` and the
    /// differentials between consecutive degrees. Shapes and ring membership
    /// are checked here; `d ∘ d = 0` is checked by [`ChainComplex::validate`].
    pub fn new(ring: Ring, min_deg: i64, ranks: Vec<usize>, diffs: Vec<Matrix>) -> Result<Self> {
        if ranks.is_empty() {
            return Ok(ChainComplex::empty(ring));
        }
        if diffs.len() + 1 != ranks.len() {
            return Err(Error::Shape(format!(
                "{} ranks need {} differentials, got {}",
                ranks.len(),
                ranks.len() - 1,
                diffs.len()
            )));
        }
        for (k, d) in diffs.iter().enumerate() {
            if d.shape() != (ranks[k + 1], ranks[k]) {
                return Err(Error::Shape(format!(
                    "differential at degree {} is {}x{}, expected {}x{}",
                    min_deg + k as i64,
                    d.rows(),
                    d.cols(),
                    ranks[k + 1],
                    ranks[k]
                )));
            }
            if let Some((r, c, _)) = d.entries().find(|(_, _, e)| !ring.contains(e)) {
                return Err(Error::MixedRing(format!(
                    "{ring} (entry ({r}, {c}) of differential at degree {})",
                    min_deg + k as i64
                )));
            }
        }
        Ok(ChainComplex { ring, min_deg, ranks, diffs }.trimmed())
    }

    /// Builds a complex from consecutive differentials, inferring ranks.
    pub fn from_differentials(ring: Ring, min_deg: i64, diffs: Vec<Matrix>) -> Result<Self> {
        let Some(first) = diffs.first() else {
            return Err(Error::Shape("at least one differential is needed to infer ranks".into()));
        };
        let mut ranks = vec![first.cols()];
        ranks.extend(diffs.iter().map(|d| d.rows()));
        ChainComplex::new(ring, min_deg, ranks, diffs)
    }

    pub fn empty(ring: Ring) -> Self {
        ChainComplex { ring, min_deg: 0, ranks: vec![0], diffs: Vec::new() }
    }

    /// A single free module of the given rank in degree `deg`.
    pub fn single(ring: Ring, deg: i64, rank: usize) -> Self {
        ChainComplex { ring, min_deg: deg, ranks: vec![rank], diffs: Vec::new() }.trimmed()
    }

    fn trimmed(mut self) -> Self {
        while self.ranks.len() > 1 && self.ranks[self.ranks.len() - 1] == 0 {
            self.ranks.pop();
            self.diffs.pop();
        }
        while self.ranks.len() > 1 && self.ranks[0] == 0 {
            self.ranks.remove(0);
            self.diffs.remove(0);
            self.min_deg += 1;
        }
        if self.ranks == [0] {
            self.min_deg = 0;
        }
        self
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn min_deg(&self) -> i64 {
        self.min_deg
    }

    pub fn max_deg(&self) -> i64 {
        self.min_deg + self.ranks.len() as i64 - 1
    }

    pub fn degrees(&self) -> std::ops::RangeInclusive<i64> {
        self.min_deg..=self.max_deg()
    }

    pub fn rank(&self, deg: i64) -> usize {
        if deg < self.min_deg || deg > self.max_deg() {
            0
        } else {
            self.ranks[(deg - self.min_deg) as usize]
        }
    }

    /// `(degree, rank)` from the lowest degree up.
    pub fn ranks(&self) -> Vec<(i64, usize)> {
        self.degrees().map(|d| (d, self.rank(d))).collect()
    }

    /// Rank vector from the lowest degree up.
    pub fn rank_vector(&self) -> Vec<usize> {
        if self.is_empty() {
            Vec::new()
        } else {
            self.ranks.clone()
        }
    }

    /// Differential leaving degree `deg`, if both ends lie in the stored range.
    pub fn diff(&self, deg: i64) -> Option<&Matrix> {
        if deg < self.min_deg || deg >= self.max_deg() {
            None
        } else {
            Some(&self.diffs[(deg - self.min_deg) as usize])
        }
    }

    pub fn diff_or_zero(&self, deg: i64) -> Matrix {
        self.diff(deg)
            .cloned()
            .unwrap_or_else(|| Matrix::zeros(&self.ring, self.rank(deg + 1), self.rank(deg)))
    }

    pub fn is_empty(&self) -> bool {
        self.ranks.iter().all(|&r| r == 0)
    }

    /// `max_deg - min_deg` over the degrees with nonzero rank; `None` for
    /// the empty complex.
    pub fn length(&self) -> Option<usize> {
        (!self.is_empty()).then(|| self.ranks.len() - 1)
    }

    /// Checks `d(i+1) * d(i) = 0` for every `i`.
    pub fn validate(&self) -> std::result::Result<(), Violation> {
        for k in 1..self.diffs.len() {
            let prod = self.diffs[k]
                .mul(&self.diffs[k - 1], &self.ring)
                .expect("shapes are checked at construction");
            let bad = prod.entries().find(|(_, _, e)| !self.ring.is_zero(e)).map(|(r, c, e)| (r, c, self.ring.display(e)));
            if let Some((row, col, entry)) = bad {
                return Err(Violation { degree: self.min_deg + k as i64 - 1, row, col, entry });
            }
        }
        Ok(())
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_ok()
    }

    /// The translate `C[k]` with `C[k]^i = C^(i+k)` and differentials scaled
    /// by `(-1)^k`.
    pub fn shift(&self, k: i64) -> ChainComplex {
        let diffs = if k % 2 == 0 {
            self.diffs.clone()
        } else {
            let minus = self.ring.from_int(-1);
            self.diffs.iter().map(|d| d.scale(&minus, &self.ring).unwrap()).collect()
        };
        let min_deg = if self.is_empty() { 0 } else { self.min_deg - k };
        ChainComplex { ring: self.ring.clone(), min_deg, ranks: self.ranks.clone(), diffs }
    }

    pub fn direct_sum(&self, other: &ChainComplex) -> Result<ChainComplex> {
        if self.ring != other.ring {
            return Err(Error::MixedRing(format!("{} vs {}", self.ring, other.ring)));
        }
        if self.is_empty() {
            return Ok(other.clone());
        }
        if other.is_empty() {
            return Ok(self.clone());
        }
        let lo = self.min_deg.min(other.min_deg);
        let hi = self.max_deg().max(other.max_deg());
        let ranks = (lo..=hi).map(|d| self.rank(d) + other.rank(d)).collect();
        let diffs = (lo..hi)
            .map(|d| Matrix::block_diag(&self.diff_or_zero(d), &other.diff_or_zero(d), &self.ring))
            .collect();
        ChainComplex::new(self.ring.clone(), lo, ranks, diffs)
    }

    /// Brutal truncation keeping degrees `>= a`.
    pub fn truncate(&self, a: i64) -> ChainComplex {
        if a <= self.min_deg {
            return self.clone();
        }
        if a > self.max_deg() {
            return ChainComplex::empty(self.ring.clone());
        }
        let k = (a - self.min_deg) as usize;
        ChainComplex {
            ring: self.ring.clone(),
            min_deg: a,
            ranks: self.ranks[k..].to_vec(),
            diffs: self.diffs[k..].to_vec(),
        }
        .trimmed()
    }

    /// Entrywise reduction modulo the maximal ideal, landing over the
    /// residue field.
    pub fn reduce_mod_maximal(&self) -> Result<ChainComplex> {
        let target = self
            .ring
            .residue_ring()
            .ok_or_else(|| Error::Capability { required: "a local ring", ring: self.ring.to_string() })?;
        let diffs = self
            .diffs
            .iter()
            .map(|d| d.map(|e| Ok(RingElement::Scalar(self.ring.residue(e)?))))
            .collect::<Result<Vec<_>>>()?;
        Ok(ChainComplex { ring: target, min_deg: self.min_deg, ranks: self.ranks.clone(), diffs })
    }

    /// Applies invertible changes of basis degreewise: the differential
    /// leaving degree `i` becomes `P(i+1) * d(i) * P(i)^-1`. Degrees missing
    /// from `bases` keep their basis. Each entry is `(P, P^-1)`.
    pub fn change_basis(&self, bases: &BTreeMap<i64, (Matrix, Matrix)>) -> Result<ChainComplex> {
        let mut diffs = Vec::with_capacity(self.diffs.len());
        for (k, d) in self.diffs.iter().enumerate() {
            let i = self.min_deg + k as i64;
            let mut m = d.clone();
            if let Some((_, p_inv)) = bases.get(&i) {
                m = m.mul(p_inv, &self.ring)?;
            }
            if let Some((p, _)) = bases.get(&(i + 1)) {
                m = p.mul(&m, &self.ring)?;
            }
            diffs.push(m);
        }
        ChainComplex::new(self.ring.clone(), self.min_deg, self.ranks.clone(), diffs)
    }

    /// Cohomology over a field or PID.
    pub fn cohomology(&self) -> Result<CohomologyReport> {
        if !self.ring.is_pid() {
            return Err(Error::Capability { required: "a field or PID", ring: self.ring.to_string() });
        }
        let ring = &self.ring;
        let mut degrees = Vec::new();
        for i in self.degrees() {
            let n = self.rank(i);
            let outgoing = self.diff_or_zero(i);
            let incoming = self.diff_or_zero(i - 1);
            let entry = if ring.is_field() {
                let r_out = outgoing.rank_over_field(ring)?;
                let r_in = incoming.rank_over_field(ring)?;
                CohomologyDegree { degree: i, free_rank: n - r_out - r_in, invariant_factors: Vec::new() }
            } else {
                // kernel of the outgoing map = last columns of V in its Smith form
                let out = smith_normal_form(ring, &outgoing)?;
                let kernel_coords = out.v_inv.rows_from(out.rank);
                let image_in_kernel = kernel_coords.mul(&incoming, ring)?;
                let inc = smith_normal_form(ring, &image_in_kernel)?;
                let invariant_factors: Vec<RingElement> =
                    inc.invariant_factors().into_iter().filter(|d| !ring.is_unit(d)).collect();
                CohomologyDegree {
                    degree: i,
                    free_rank: kernel_coords.rows() - inc.rank,
                    invariant_factors,
                }
            };
            degrees.push(entry);
        }
        Ok(CohomologyReport { ring: ring.clone(), degrees })
    }
}

/// `H^i` as `R^free_rank ⊕ R/(d_1) ⊕ ... ⊕ R/(d_k)` with `d_1 | ... | d_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CohomologyDegree {
    pub degree: i64,
    pub free_rank: usize,
    pub invariant_factors: Vec<RingElement>,
}

impl CohomologyDegree {
    pub fn is_zero(&self) -> bool {
        self.free_rank == 0 && self.invariant_factors.is_empty()
    }
}

#[derive(Clone, Debug)]
pub struct CohomologyReport {
    pub ring: Ring,
    pub degrees: Vec<CohomologyDegree>,
}

impl CohomologyReport {
    pub fn at(&self, deg: i64) -> CohomologyDegree {
        self.degrees
            .iter()
            .find(|d| d.degree == deg)
            .cloned()
            .unwrap_or(CohomologyDegree { degree: deg, free_rank: 0, invariant_factors: Vec::new() })
    }

    /// Degrees with nonzero cohomology, in increasing order.
    pub fn nonzero(&self) -> Vec<CohomologyDegree> {
        self.degrees.iter().filter(|d| !d.is_zero()).cloned().collect()
    }

    pub fn is_acyclic(&self) -> bool {
        self.degrees.iter().all(CohomologyDegree::is_zero)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "ring": self.ring.to_string(),
            "degrees": self.degrees.iter().map(|d| serde_json::json!({
                "degree": d.degree,
                "free_rank": d.free_rank,
                "invariant_factors": d.invariant_factors.iter().map(|f| self.ring.display(f)).collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
        })
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("ring {}\n", self.ring);
        for d in &self.degrees {
            let tors: Vec<String> = d.invariant_factors.iter().map(|f| self.ring.display(f)).collect();
            out.push_str(&format!("H^{}: free rank {}, torsion [{}]\n", d.degree, d.free_rank, tors.join(", ")));
        }
        out
    }
}

/// Reports are equal when they agree in every degree, ignoring zero padding.
impl PartialEq for CohomologyReport {
    fn eq(&self, other: &Self) -> bool {
        self.ring == other.ring && self.nonzero() == other.nonzero()
    }
}

/// Degreewise maps `source -> target` commuting with the differentials.
#[derive(Clone, Debug)]
pub struct ChainMap {
    source: ChainComplex,
    target: ChainComplex,
    components: BTreeMap<i64, Matrix>,
}

impl ChainMap {
    /// Components missing from `components` are zero. Checks shapes and that
    /// `f(i+1) * d_source(i) = d_target(i) * f(i)` in every degree.
    pub fn new(source: ChainComplex, target: ChainComplex, components: BTreeMap<i64, Matrix>) -> Result<Self> {
        if source.ring != target.ring {
            return Err(Error::MixedRing(format!("{} vs {}", source.ring, target.ring)));
        }
        for (&i, m) in &components {
            if m.shape() != (target.rank(i), source.rank(i)) {
                return Err(Error::Shape(format!(
                    "chain map component at degree {i} is {}x{}, expected {}x{}",
                    m.rows(),
                    m.cols(),
                    target.rank(i),
                    source.rank(i)
                )));
            }
        }
        let map = ChainMap { source, target, components };
        let ring = &map.source.ring;
        let lo = map.source.min_deg.min(map.target.min_deg) - 1;
        let hi = map.source.max_deg().max(map.target.max_deg());
        for i in lo..=hi {
            let lhs = map.component(i + 1).mul(&map.source.diff_or_zero(i), ring)?;
            let rhs = map.target.diff_or_zero(i).mul(&map.component(i), ring)?;
            if lhs != rhs {
                return Err(Error::NotAChainMap(format!("squares fail to commute at degree {i}")));
            }
        }
        Ok(map)
    }

    pub fn identity(c: &ChainComplex) -> ChainMap {
        let components = c.degrees().map(|i| (i, Matrix::identity(&c.ring, c.rank(i)))).collect();
        ChainMap { source: c.clone(), target: c.clone(), components }
    }

    pub fn source(&self) -> &ChainComplex {
        &self.source
    }

    pub fn target(&self) -> &ChainComplex {
        &self.target
    }

    pub fn component(&self, i: i64) -> Matrix {
        self.components
            .get(&i)
            .cloned()
            .unwrap_or_else(|| Matrix::zeros(&self.source.ring, self.target.rank(i), self.source.rank(i)))
    }

    /// Mapping cone: `C^k = source^(k+1) ⊕ target^k` with differential
    /// `(a, b) ↦ (-d a, f a + d b)`.
    pub fn cone(&self) -> Result<ChainComplex> {
        let ring = &self.source.ring;
        let (a, b) = (&self.source, &self.target);
        let lo = (a.min_deg - 1).min(b.min_deg);
        let hi = (a.max_deg() - 1).max(b.max_deg());
        let ranks = (lo..=hi).map(|k| a.rank(k + 1) + b.rank(k)).collect();
        let minus = ring.from_int(-1);
        let mut diffs = Vec::new();
        for k in lo..hi {
            let top_left = a.diff_or_zero(k + 1).scale(&minus, ring)?;
            let top_right = Matrix::zeros(ring, a.rank(k + 2), b.rank(k));
            let bottom_left = self.component(k + 1);
            let bottom_right = b.diff_or_zero(k);
            diffs.push(Matrix::blocks(&top_left, &top_right, &bottom_left, &bottom_right, ring)?);
        }
        ChainComplex::new(ring.clone(), lo, ranks, diffs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::Field;

    fn ql(n: usize) -> Ring {
        Ring::localized_poly(Field::Rationals, n).unwrap()
    }

    fn koszul2() -> ChainComplex {
        let r = ql(2);
        ChainComplex::from_differentials(
            r.clone(),
            -2,
            vec![Matrix::parse(&r, &[&["-y"], &["x"]]).unwrap(), Matrix::parse(&r, &[&["x", "y"]]).unwrap()],
        )
        .unwrap()
    }

    #[test]
    fn validate_examples() {
        assert!(koszul2().is_valid());
        let q = Ring::Rationals;
        let one = ChainComplex::from_differentials(q.clone(), 0, vec![Matrix::parse(&q, &[&["1"]]).unwrap()]).unwrap();
        assert!(one.is_valid());
        let r = ql(1);
        let x = Matrix::parse(&r, &[&["x"]]).unwrap();
        let bad = ChainComplex::from_differentials(r, 0, vec![x.clone(), x]).unwrap();
        let v = bad.validate().unwrap_err();
        assert_eq!((v.degree, v.row, v.col), (0, 0, 0));
        assert_eq!(v.entry, "x^2");
    }

    #[test]
    fn construction_checks_shapes() {
        let z = Ring::Integers;
        let m = Matrix::parse(&z, &[&["1", "2"]]).unwrap();
        assert!(ChainComplex::new(z.clone(), 0, vec![1, 1], vec![m]).is_err());
        assert!(ChainComplex::new(z, 0, vec![1, 1], vec![]).is_err());
    }

    #[test]
    fn shift_examples() {
        let k = koszul2();
        assert_eq!(k.shift(0), k);
        assert_eq!(k.shift(1).shift(-1), k);
        assert_eq!(k.shift(1).min_deg(), -3);
        let s = ChainComplex::single(Ring::Integers, 0, 1).shift(2);
        assert_eq!(s.ranks(), vec![(-2, 1)]);
        assert!(s.diff(-2).is_none());
    }

    #[test]
    fn direct_sum_examples() {
        let k = koszul2();
        let e = ChainComplex::empty(k.ring().clone());
        assert_eq!(k.direct_sum(&e).unwrap(), k);
        assert_eq!(e.direct_sum(&k).unwrap(), k);
        let s = k.direct_sum(&k).unwrap();
        assert_eq!(s.rank(0), 2);
        assert!(s.is_valid());
        assert!(k.direct_sum(&ChainComplex::empty(Ring::Integers)).is_err());
    }

    #[test]
    fn truncation() {
        let k = koszul2();
        assert_eq!(k.truncate(-2), k);
        let t = k.truncate(-1);
        assert_eq!(t.ranks(), vec![(-1, 2), (0, 1)]);
        assert!(t.is_valid());
        assert!(k.truncate(5).is_empty());
    }

    #[test]
    fn reduction_mod_maximal() {
        let r = ql(1);
        let c = ChainComplex::from_differentials(r, 0, vec![Matrix::parse(&ql(1), &[&["1 + x"]]).unwrap()]).unwrap();
        let red = c.reduce_mod_maximal().unwrap();
        assert_eq!(red.ring(), &Ring::Rationals);
        assert_eq!(red.diff(0).unwrap(), &Matrix::parse(&Ring::Rationals, &[&["1"]]).unwrap());
        let k = koszul2().reduce_mod_maximal().unwrap();
        assert_eq!(k.rank_vector(), vec![1, 2, 1]);
        assert!(k.diff(-2).unwrap().is_zero(k.ring()));
        assert!(ChainComplex::empty(Ring::Integers).reduce_mod_maximal().is_err());
    }

    #[test]
    fn cohomology_of_diag_2_3() {
        let z = Ring::Integers;
        let c = ChainComplex::from_differentials(z.clone(), -1, vec![Matrix::parse(&z, &[&["2", "0"], &["0", "3"]]).unwrap()])
            .unwrap();
        let h = c.cohomology().unwrap();
        assert!(h.at(-1).is_zero());
        assert_eq!(h.at(0).free_rank, 0);
        assert_eq!(h.at(0).invariant_factors, vec![z.from_int(6)]);
    }

    #[test]
    fn cohomology_of_univariate_koszul() {
        let r = Ring::UnivariatePoly { base: Field::Rationals };
        let c = ChainComplex::from_differentials(r.clone(), -1, vec![Matrix::parse(&r, &[&["x"]]).unwrap()]).unwrap();
        let h = c.cohomology().unwrap();
        assert!(h.at(-1).is_zero());
        assert_eq!(h.at(0).invariant_factors, vec![r.var(0).unwrap()]);
        assert!(koszul2().cohomology().is_err());
    }

    #[test]
    fn cone_of_identity_is_acyclic() {
        let z = Ring::Integers;
        let c = ChainComplex::from_differentials(z.clone(), -1, vec![Matrix::parse(&z, &[&["4", "0"], &["2", "6"]]).unwrap()])
            .unwrap();
        let cone = ChainMap::identity(&c).cone().unwrap();
        assert!(cone.is_valid());
        assert!(cone.cohomology().unwrap().is_acyclic());

        let single = ChainComplex::single(z.clone(), 0, 1);
        let cone = ChainMap::identity(&single).cone().unwrap();
        assert_eq!(cone.ranks(), vec![(-1, 1), (0, 1)]);
        assert_eq!(cone.diff(-1).unwrap(), &Matrix::identity(&z, 1));
    }

    #[test]
    fn cone_of_zero_map_is_direct_sum() {
        let k = koszul2();
        let zero = ChainMap::new(k.clone(), k.clone(), BTreeMap::new()).unwrap();
        assert_eq!(zero.cone().unwrap(), k.shift(1).direct_sum(&k).unwrap());
    }

    #[test]
    fn cone_inclusion_and_projection_are_chain_maps() {
        let z = Ring::Integers;
        let a = ChainComplex::from_differentials(z.clone(), -1, vec![Matrix::parse(&z, &[&["2"]]).unwrap()]).unwrap();
        let b = ChainComplex::from_differentials(z.clone(), -1, vec![Matrix::parse(&z, &[&["4"]]).unwrap()]).unwrap();
        let f = ChainMap::new(
            a.clone(),
            b.clone(),
            BTreeMap::from([(-1, Matrix::parse(&z, &[&["1"]]).unwrap()), (0, Matrix::parse(&z, &[&["2"]]).unwrap())]),
        )
        .unwrap();
        let c = f.cone().unwrap();
        assert!(c.is_valid());
        let mut incl = BTreeMap::new();
        let mut proj = BTreeMap::new();
        for k in c.degrees() {
            let (na, nb) = (a.rank(k + 1), b.rank(k));
            let mut i = Matrix::zeros(&z, na + nb, nb);
            for j in 0..nb {
                i.set(na + j, j, z.one());
            }
            incl.insert(k, i);
            let mut p = Matrix::zeros(&z, na, na + nb);
            for j in 0..na {
                p.set(j, j, z.one());
            }
            proj.insert(k, p);
        }
        assert!(ChainMap::new(b.clone(), c.clone(), incl).is_ok());
        assert!(ChainMap::new(c, a.shift(1), proj).is_ok());
    }

    #[test]
    fn non_chain_map_rejected() {
        let z = Ring::Integers;
        let a = ChainComplex::from_differentials(z.clone(), -1, vec![Matrix::parse(&z, &[&["2"]]).unwrap()]).unwrap();
        let bad = BTreeMap::from([(0, Matrix::parse(&z, &[&["1"]]).unwrap())]);
        assert!(matches!(ChainMap::new(a.clone(), a, bad), Err(Error::NotAChainMap(_))));
    }
}
