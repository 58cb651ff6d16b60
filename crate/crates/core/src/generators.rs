//! Explicit complex families and the seeded scrambler.
//!
//! Koszul bases are wedge monomials `e_{i1} ∧ ... ∧ e_{ip}` with
//! `i1 < ... < ip`, listed in lexicographic order; the differential is
//! contraction against the sequence with the alternating sign `(-1)^(k-1)`
//! on the `k`-th factor.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::complex::ChainComplex;
use crate::decompose::{canonical, refine_summands, DecompositionReport, Summand, SummandKind};
use crate::error::{Error, Result};
use crate::json::{get, get_ring};
use crate::matrix::Matrix;
use crate::ring::{Ring, RingElement};

fn subsets(n: usize, p: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, p: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == p {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, p, &mut Vec::new(), &mut out);
    out
}

/// Contraction `⋀^p R^n -> ⋀^(p-1) R^n` against `xs`.
fn contraction(ring: &Ring, xs: &[RingElement], p: usize) -> Result<Matrix> {
    let n = xs.len();
    let src = subsets(n, p);
    let dst = subsets(n, p - 1);
    let mut m = Matrix::zeros(ring, dst.len(), src.len());
    for (c, s) in src.iter().enumerate() {
        for k in 0..s.len() {
            let mut t = s.clone();
            let i = t.remove(k);
            let r = dst.binary_search(&t).expect("lex-ordered basis");
            let v = if k % 2 == 0 { xs[i].clone() } else { ring.neg(&xs[i])? };
            m.set(r, c, v);
        }
    }
    Ok(m)
}

fn variables(ring: &Ring, min: usize, family: &str) -> Result<Vec<RingElement>> {
    if !matches!(ring, Ring::LocalizedPoly { .. } | Ring::UnivariatePoly { .. }) {
        return Err(Error::Capability { required: "a polynomial or localized polynomial ring", ring: ring.to_string() });
    }
    let n = ring.num_vars();
    if n < min {
        return Err(Error::InvalidParameter(format!("{family} needs at least {min} variables, {ring} has {n}")));
    }
    (0..n).map(|i| ring.var(i)).collect()
}

/// Koszul complex on `xs`, in degrees `-n..=0`.
pub fn koszul_on(ring: &Ring, xs: &[RingElement]) -> Result<ChainComplex> {
    let n = xs.len();
    if n == 0 {
        return Err(Error::InvalidParameter("Koszul complex needs a nonempty sequence".into()));
    }
    let diffs = (1..=n).rev().map(|p| contraction(ring, xs, p)).collect::<Result<Vec<_>>>()?;
    ChainComplex::from_differentials(ring.clone(), -(n as i64), diffs)
}

/// Koszul complex on all variables of the ring.
pub fn koszul(ring: &Ring) -> Result<ChainComplex> {
    koszul_on(ring, &variables(ring, 1, "the Koszul complex")?)
}

/// `[[xy, y^2], [-x^2, -xy]]`, the interior differential of [`f_n`].
pub fn interior_matrix(ring: &Ring) -> Result<Matrix> {
    Matrix::parse(ring, &[&["x*y", "y^2"], &["-x^2", "-x*y"]])
}

/// The length-`n` complex `A^2 --D--> A^2 --D--> ... --D--> A^2 --[x, y]--> A`
/// in degrees `-n..=0` over a two-variable ring.
pub fn f_n(ring: &Ring, n: usize) -> Result<ChainComplex> {
    if !matches!(ring, Ring::LocalizedPoly { num_vars: 2, .. }) {
        return Err(Error::Capability { required: "a localized polynomial ring in 2 variables", ring: ring.to_string() });
    }
    if n == 0 {
        return Err(Error::InvalidParameter("n must be at least 1".into()));
    }
    let d = interior_matrix(ring)?;
    let mut diffs = vec![d; n - 1];
    diffs.push(Matrix::parse(ring, &[&["x", "y"]])?);
    ChainComplex::from_differentials(ring.clone(), -(n as i64), diffs)
}

fn glue_matrix(ring: &Ring, xs: &[RingElement], mask: u32) -> Result<Matrix> {
    let n = xs.len();
    let rows = subsets(n, n - 1);
    let mut m = Matrix::zeros(ring, n, n);
    for j in 0..n {
        let hat: Vec<usize> = (0..n).filter(|&k| k != j).collect();
        let r = rows.binary_search(&hat).unwrap();
        for i in 0..n {
            let mut v = ring.mul(&xs[i], &xs[j])?;
            if mask >> j & 1 == 1 {
                v = ring.neg(&v)?;
            }
            m.set(r, i, v);
        }
    }
    Ok(m)
}

/// Sign vector for the glue map `e_i ↦ Σ_j σ_j x_i x_j ê_j`, as a bit mask
/// (`σ_j = -1` iff bit `j` is set): the first mask in increasing order for
/// which both adjacent compositions vanish.
pub fn glue_signs(ring: &Ring) -> Result<u32> {
    let xs = variables(ring, 2, "the glue map")?;
    let n = xs.len();
    if n > 20 {
        return Err(Error::InvalidParameter(format!("sign search over 2^{n} vectors is out of range")));
    }
    let after = contraction(ring, &xs, n - 1)?;
    let before = contraction(ring, &xs, 2)?;
    for mask in 0..(1u32 << n) {
        let g = glue_matrix(ring, &xs, mask)?;
        if after.mul(&g, ring)?.is_zero(ring) && g.mul(&before, ring)?.is_zero(ring) {
            return Ok(mask);
        }
    }
    Err(Error::InvalidComplex(format!("no sign vector makes the glue map a differential over {ring}")))
}

/// The glue map from `K^{-1}` to `K^{1-n}` with the signs of [`glue_signs`].
pub fn glue(ring: &Ring) -> Result<Matrix> {
    let xs = variables(ring, 2, "the glue map")?;
    glue_matrix(ring, &xs, glue_signs(ring)?)
}

/// Iterated Koszul complex: `K^{-n}..K^{-1}` glued to `K^{1-n}..K^0`, in
/// degrees `-(2n-1)..=0`.
pub fn iterated_koszul(ring: &Ring) -> Result<ChainComplex> {
    multi_iterated_koszul(ring, 1)
}

/// `m` junctions: a bottom segment `K^{-n}..K^{-1}`, `m - 1` middle segments
/// `K^{1-n}..K^{-1}` and a top segment `K^{1-n}..K^0`, consecutive segments
/// joined by the glue map. Length `2n - 1 + (m - 1)(n - 1)`.
pub fn multi_iterated_koszul(ring: &Ring, m: usize) -> Result<ChainComplex> {
    let xs = variables(ring, 2, "the iterated Koszul complex")?;
    if m == 0 {
        return Err(Error::InvalidParameter("m must be at least 1".into()));
    }
    let n = xs.len();
    let g = glue(ring)?;
    let mut diffs = Vec::new();
    for p in (2..=n).rev() {
        diffs.push(contraction(ring, &xs, p)?);
    }
    for _ in 1..m {
        diffs.push(g.clone());
        for p in (2..n).rev() {
            diffs.push(contraction(ring, &xs, p)?);
        }
    }
    diffs.push(g);
    for p in (1..n).rev() {
        diffs.push(contraction(ring, &xs, p)?);
    }
    let len = diffs.len() as i64;
    ChainComplex::from_differentials(ring.clone(), -len, diffs)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ScrambleConfig {
    /// Elementary operations composed into each degree's change of basis.
    pub ops_per_degree: usize,
}

impl Default for ScrambleConfig {
    fn default() -> Self {
        ScrambleConfig { ops_per_degree: 8 }
    }
}

/// Coefficients for elementary operations: small integers and, over
/// polynomial rings, `±x_i` and `x_i + 1`.
fn small_coefficients(ring: &Ring) -> Vec<RingElement> {
    let mut out: Vec<RingElement> =
        [1, -1, 2, -2, 3].iter().map(|&k| ring.from_int(k)).filter(|e| !ring.is_zero(e)).collect();
    for i in 0..ring.num_vars() {
        let x = ring.var(i).unwrap();
        out.push(ring.neg(&x).unwrap());
        out.push(ring.add(&x, &ring.one()).unwrap());
        out.push(x);
    }
    out
}

/// A random invertible `n x n` matrix and its inverse, as a product of
/// `ops` elementary operations.
pub fn random_invertible(ring: &Ring, n: usize, ops: usize, rng: &mut impl Rng) -> Result<(Matrix, Matrix)> {
    let coeffs = small_coefficients(ring);
    let minus = ring.from_int(-1);
    let mut p = Matrix::identity(ring, n);
    let mut p_inv = Matrix::identity(ring, n);
    if n == 0 {
        return Ok((p, p_inv));
    }
    for _ in 0..ops {
        let roll = rng.gen_range(0..20);
        if n >= 2 && roll < 14 {
            let t = rng.gen_range(0..n);
            let s = (t + rng.gen_range(1..n)) % n;
            let c = &coeffs[rng.gen_range(0..coeffs.len())];
            p.add_row_multiple(t, s, c, ring)?;
            p_inv.add_col_multiple(s, t, &ring.neg(c)?, ring)?;
        } else if n >= 2 && roll < 17 {
            let a = rng.gen_range(0..n);
            let b = (a + rng.gen_range(1..n)) % n;
            p.swap_rows(a, b);
            p_inv.swap_cols(a, b);
        } else {
            let t = rng.gen_range(0..n);
            p.scale_row(t, &minus, ring)?;
            p_inv.scale_col(t, &minus, ring)?;
        }
    }
    Ok((p, p_inv))
}

/// Conjugates every degree of `c` by a random invertible matrix drawn from
/// `rng`, degrees in increasing order.
pub fn scramble(c: &ChainComplex, config: ScrambleConfig, rng: &mut impl Rng) -> Result<ChainComplex> {
    let mut bases = BTreeMap::new();
    for (deg, rank) in c.ranks() {
        bases.insert(deg, random_invertible(c.ring(), rank, config.ops_per_degree, rng)?);
    }
    c.change_basis(&bases)
}

/// A complex with a known decomposition into summands of length at most one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlantedDecomposition {
    pub summands: Vec<Summand>,
    pub scramble_seed: u64,
    pub complex: ChainComplex,
}

/// Direct sum of the planned summands, in plan order, conjugated degreewise
/// by random invertible matrices derived from `seed`.
pub fn scrambled_sum(ring: &Ring, plan: &[Summand], seed: u64, config: ScrambleConfig) -> Result<PlantedDecomposition> {
    if !ring.is_pid() {
        return Err(Error::Capability { required: "a PID", ring: ring.to_string() });
    }
    if plan.is_empty() {
        return Err(Error::InvalidParameter("plan is empty".into()));
    }
    let mut summands = Vec::with_capacity(plan.len());
    for s in plan {
        match &s.kind {
            SummandKind::Free { rank: 0 } => {
                return Err(Error::InvalidParameter("free summand of rank 0".into()));
            }
            SummandKind::Free { .. } => summands.push(s.clone()),
            SummandKind::Cyclic { d } => {
                if !ring.contains(d) {
                    return Err(Error::MixedRing(ring.to_string()));
                }
                if ring.is_zero(d) || ring.is_unit(d) {
                    return Err(Error::InvalidParameter(format!(
                        "cyclic summand needs a nonzero non-unit, got {}",
                        ring.display(d)
                    )));
                }
                summands.push(Summand::cyclic(s.end_degree, ring.split_unit(d)?.0));
            }
        }
    }
    let plain = DecompositionReport {
        ring: ring.clone(),
        refinement: crate::decompose::Refinement::InvariantFactor,
        summands: plan.to_vec(),
    }
    .to_complex();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let complex = scramble(&plain, config, &mut rng)?;
    Ok(PlantedDecomposition { summands, scramble_seed: seed, complex })
}

impl PlantedDecomposition {
    /// Planted summands split into prime powers.
    pub fn primary_summands(&self) -> Result<Vec<Summand>> {
        refine_summands(self.complex.ring(), &self.summands)
    }

    /// Whether a primary-refined report lists exactly the planted summands.
    pub fn recovered_by(&self, report: &DecompositionReport) -> Result<bool> {
        let ring = self.complex.ring();
        let found = refine_summands(ring, &report.summands)?;
        Ok(canonical(ring, &found) == canonical(ring, &self.primary_summands()?))
    }

    pub fn to_json(&self) -> Value {
        let ring = self.complex.ring();
        json!({
            "ring": ring.to_string(),
            "scramble_seed": self.scramble_seed,
            "summands": self.summands.iter().map(|s| s.to_json(ring)).collect::<Vec<_>>(),
            "complex": self.complex.to_json(),
        })
    }

    pub fn from_json(v: &Value) -> Result<PlantedDecomposition> {
        let ring = get_ring(v)?;
        let complex = ChainComplex::from_json(get(v, "complex")?, true)?;
        if complex.ring() != &ring {
            return Err(Error::MixedRing(format!("{ring} vs {}", complex.ring())));
        }
        let scramble_seed =
            get(v, "scramble_seed")?.as_u64().ok_or_else(|| Error::Parse("'scramble_seed' must be an integer".into()))?;
        let summands = get(v, "summands")?
            .as_array()
            .ok_or_else(|| Error::Parse("'summands' must be a list".into()))?
            .iter()
            .map(|s| Summand::from_json(&ring, s))
            .collect::<Result<_>>()?;
        Ok(PlantedDecomposition { summands, scramble_seed, complex })
    }
}

/// Parses a plan such as `(0,c2),(0,c3),(-1,f)`: `c<expr>` is a cyclic
/// summand with that generator, `f` a free summand of rank one.
pub fn parse_plan(ring: &Ring, s: &str) -> Result<Vec<Summand>> {
    let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let mut out = Vec::new();
    let mut rest = s.as_str();
    while !rest.is_empty() {
        let body = rest
            .strip_prefix('(')
            .and_then(|r| r.find(')').map(|end| (&r[..end], &r[end + 1..])))
            .ok_or_else(|| Error::Parse(format!("plan entries look like (deg,c<expr>) or (deg,f); got '{rest}'")))?;
        let (entry, tail) = body;
        let (deg, kind) =
            entry.split_once(',').ok_or_else(|| Error::Parse(format!("plan entry '({entry})' needs a comma")))?;
        let deg: i64 = deg.parse().map_err(|_| Error::Parse(format!("bad degree '{deg}' in plan")))?;
        let summand = if kind == "f" || kind == "free" {
            Summand::free(deg, 1)
        } else if let Some(expr) = kind.strip_prefix('c') {
            Summand::cyclic(deg, ring.parse_element(expr)?)
        } else {
            return Err(Error::Parse(format!("unknown plan kind '{kind}'")));
        };
        out.push(summand);
        rest = tail.strip_prefix(',').unwrap_or(tail);
    }
    if out.is_empty() {
        return Err(Error::Parse("plan is empty".into()));
    }
    Ok(out)
}
