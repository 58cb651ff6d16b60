//! Sparse multivariate polynomials over a [`Field`].
//!
//! Terms live in a `BTreeMap` keyed by exponent vectors, so iteration order is
//! lexicographic with `x1` most significant and the last entry is the
//! lex-leading term. The map never stores a zero coefficient.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::field::{fmt_rational, Field};

pub type Monomial = Vec<u32>;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<Monomial, BigRational>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Poly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: BigRational) -> Self {
        let mut p = Poly::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(vec![0; nvars], c);
        }
        p
    }

    pub fn one(nvars: usize) -> Self {
        Poly::constant(nvars, BigRational::one())
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Poly::monomial(e, BigRational::one())
    }

    pub fn monomial(exps: Monomial, c: BigRational) -> Self {
        let nvars = exps.len();
        let mut p = Poly::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(exps, c);
        }
        p
    }

    /// Builds a polynomial from raw terms, normalizing coefficients in `k` and
    /// merging duplicates.
    pub fn from_terms(
        nvars: usize,
        k: Field,
        terms: impl IntoIterator<Item = (Monomial, BigRational)>,
    ) -> Option<Self> {
        let mut p = Poly::zero(nvars);
        for (e, c) in terms {
            if e.len() != nvars {
                return None;
            }
            let c = k.normalize(c)?;
            p.add_term(e, &c, k);
        }
        Some(p)
    }

    fn add_term(&mut self, e: Monomial, c: &BigRational, k: Field) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&e) {
            Some(existing) => {
                let s = k.add(existing, c);
                if s.is_zero() {
                    self.terms.remove(&e);
                } else {
                    *existing = s;
                }
            }
            None => {
                self.terms.insert(e, c.clone());
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.constant_term().is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|&x| x == 0))
    }

    pub fn constant_term(&self) -> BigRational {
        self.terms
            .get(&vec![0; self.nvars])
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    /// Minimal total degree of a term (the `(x1..xn)`-adic order).
    pub fn order(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).min()
    }

    pub fn homogeneous_part(&self, d: u32) -> impl Iterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter().filter(move |(e, _)| e.iter().sum::<u32>() == d)
    }

    pub fn leading(&self) -> Option<(&Monomial, &BigRational)> {
        self.terms.iter().next_back()
    }

    pub fn add(&self, other: &Poly, k: Field) -> Poly {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c, k);
        }
        out
    }

    pub fn sub(&self, other: &Poly, k: Field) -> Poly {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), &k.neg(c), k);
        }
        out
    }

    pub fn neg(&self, k: Field) -> Poly {
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), k.neg(c))).collect(),
        }
    }

    pub fn scale(&self, c: &BigRational, k: Field) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.nvars);
        }
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, a)| (e.clone(), k.mul(a, c))).collect(),
        }
    }

    pub fn mul(&self, other: &Poly, k: Field) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e: Monomial = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(e, &k.mul(ca, cb), k);
            }
        }
        out
    }

    fn mul_term(&self, mono: &[u32], c: &BigRational, k: Field) -> Poly {
        Poly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(e, a)| (e.iter().zip(mono).map(|(x, y)| x + y).collect(), k.mul(a, c)))
                .collect(),
        }
    }

    pub fn pow(&self, e: u32, k: Field) -> Poly {
        let mut acc = Poly::one(self.nvars);
        for _ in 0..e {
            acc = acc.mul(self, k);
        }
        acc
    }

    /// Scales so that the lex-leading coefficient is 1.
    pub fn monic(&self, k: Field) -> Poly {
        match self.leading() {
            None => self.clone(),
            Some((_, c)) => self.scale(&k.inv(c).expect("nonzero"), k),
        }
    }

    /// Exact quotient `self / b`, or `None` if `b` does not divide `self`.
    pub fn div_exact(&self, b: &Poly, k: Field) -> Option<Poly> {
        let (lb_e, lb_c) = b.leading()?;
        let lb_inv = k.inv(lb_c)?;
        let mut r = self.clone();
        let mut q = Poly::zero(self.nvars);
        while let Some((le, lc)) = r.leading() {
            if le.iter().zip(lb_e).any(|(a, b)| a < b) {
                return None;
            }
            let mono: Monomial = le.iter().zip(lb_e).map(|(a, b)| a - b).collect();
            let c = k.mul(lc, &lb_inv);
            r = r.sub(&b.mul_term(&mono, &c, k), k);
            q.add_term(mono, &c, k);
        }
        Some(q)
    }

    pub fn degree_in(&self, v: usize) -> Option<u32> {
        self.terms.keys().map(|e| e[v]).max()
    }

    fn involves(&self, v: usize) -> bool {
        self.terms.keys().any(|e| e[v] > 0)
    }

    /// Coefficients of `x_v^i`, as polynomials not involving `x_v`.
    fn coefficients_in(&self, v: usize) -> BTreeMap<u32, Poly> {
        let mut out: BTreeMap<u32, Poly> = BTreeMap::new();
        for (e, c) in &self.terms {
            let mut e2 = e.clone();
            e2[v] = 0;
            out.entry(e[v])
                .or_insert_with(|| Poly::zero(self.nvars))
                .terms
                .insert(e2, c.clone());
        }
        out
    }

    fn leading_coefficient_in(&self, v: usize) -> Poly {
        self.coefficients_in(v)
            .into_iter()
            .next_back()
            .map(|(_, p)| p)
            .unwrap_or_else(|| Poly::zero(self.nvars))
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &Poly, k: Field) -> Poly {
        assert_eq!(self.nvars, other.nvars);
        if k == Field::Rationals && !self.is_zero() && !other.is_zero() {
            if let Some(g) = heuristic_gcd(&self.integral(), &other.integral(), self.nvars) {
                return g.monic(k);
            }
        }
        gcd_rec(self, other, self.nvars, k)
    }

    /// Rational multiple with coprime integer coefficients.
    fn integral(&self) -> Poly {
        let lcm = self.terms.values().fold(BigInt::one(), |l, c| l.lcm(c.denom()));
        let scaled = self.scale_exact(&BigRational::from_integer(lcm));
        let content = scaled.int_content();
        scaled.scale_exact(&BigRational::new(BigInt::one(), content))
    }

    fn scale_exact(&self, c: &BigRational) -> Poly {
        Poly { nvars: self.nvars, terms: self.terms.iter().map(|(e, x)| (e.clone(), x * c)).collect() }
    }

    /// Gcd of the (integer) coefficients, signed like the leading one.
    fn int_content(&self) -> BigInt {
        let g = self.terms.values().fold(BigInt::zero(), |g, c| g.gcd(c.numer()));
        match self.leading() {
            Some((_, c)) if c.is_negative() => -g,
            _ => g,
        }
    }

    fn height(&self) -> BigInt {
        self.terms.values().map(|c| c.numer().abs()).max().unwrap_or_else(BigInt::zero)
    }

    /// Substitutes the integer `xi` for `x_v`.
    fn evaluate(&self, v: usize, xi: &BigInt) -> Poly {
        let mut out: BTreeMap<Monomial, BigRational> = BTreeMap::new();
        for (e, c) in &self.terms {
            let mut e2 = e.clone();
            e2[v] = 0;
            let t = c * BigRational::from_integer(xi.pow(e[v]));
            *out.entry(e2).or_insert_with(BigRational::zero) += t;
        }
        out.retain(|_, c| !c.is_zero());
        Poly { nvars: self.nvars, terms: out }
    }

    /// Euclidean division in one variable.
    pub fn div_rem(&self, b: &Poly, k: Field) -> (Poly, Poly) {
        assert_eq!(self.nvars, 1, "div_rem is univariate");
        let db = b.total_degree().expect("division by zero polynomial");
        let lb_inv = k.inv(b.leading().unwrap().1).unwrap();
        let mut q = Poly::zero(1);
        let mut r = self.clone();
        while let Some((le, lc)) = r.leading() {
            if le[0] < db {
                break;
            }
            let mono = vec![le[0] - db];
            let c = k.mul(lc, &lb_inv);
            r = r.sub(&b.mul_term(&mono, &c, k), k);
            q.add_term(mono, &c, k);
        }
        (q, r)
    }

    pub fn var_name(nvars: usize, i: usize) -> String {
        match nvars {
            1..=3 => ["x", "y", "z"][i].to_string(),
            _ => format!("x{}", i + 1),
        }
    }

    pub fn to_text(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (idx, (e, c)) in self.terms.iter().rev().enumerate() {
            let mut coeff = fmt_rational(c);
            let negative = coeff.starts_with('-');
            if negative {
                coeff.remove(0);
            }
            if idx == 0 {
                if negative {
                    out.push('-');
                }
            } else {
                out.push_str(if negative { " - " } else { " + " });
            }
            let factors: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &x)| x > 0)
                .map(|(i, &x)| {
                    let name = Poly::var_name(self.nvars, i);
                    if x == 1 {
                        name
                    } else {
                        format!("{name}^{x}")
                    }
                })
                .collect();
            if factors.is_empty() {
                out.push_str(&coeff);
            } else {
                if coeff != "1" {
                    out.push_str(&coeff);
                    out.push('*');
                }
                out.push_str(&factors.join("*"));
            }
        }
        out
    }
}

/// Heuristic gcd of integer polynomials: evaluate `x_v` at a large integer,
/// recurse, and read the candidate back off its balanced `xi`-adic digits. A
/// candidate is returned only after it divides both inputs. `None` asks the
/// caller to fall back to remainder sequences.
fn heuristic_gcd(a: &Poly, b: &Poly, nv: usize) -> Option<Poly> {
    if a.is_zero() || b.is_zero() {
        let p = if a.is_zero() { b } else { a };
        return Some(p.scale_exact(&BigRational::from_integer(p.int_content().signum())));
    }
    let Some(v) = (0..nv).rev().find(|&v| a.involves(v) || b.involves(v)) else {
        let g = a.constant_term().numer().gcd(b.constant_term().numer());
        return Some(Poly::constant(a.nvars, BigRational::from_integer(g)));
    };
    let (ca, cb) = (a.int_content(), b.int_content());
    let c = ca.gcd(&cb);
    let a = a.scale_exact(&BigRational::new(BigInt::one(), ca));
    let b = b.scale_exact(&BigRational::new(BigInt::one(), cb));
    let deg = a.degree_in(v).unwrap_or(0).max(b.degree_in(v).unwrap_or(0)) as u64;
    let mut xi = BigInt::from(2) * a.height().min(b.height()) + BigInt::from(29);
    for _ in 0..6 {
        if xi.bits() * (deg + 1) > 50_000 {
            return None;
        }
        let g = heuristic_gcd(&a.evaluate(v, &xi), &b.evaluate(v, &xi), v)?;
        let candidate = interpolate(&g, v, &xi);
        if !candidate.is_zero() {
            let candidate = candidate.scale_exact(&BigRational::new(BigInt::one(), candidate.int_content()));
            if a.div_exact(&candidate, Field::Rationals).is_some() && b.div_exact(&candidate, Field::Rationals).is_some() {
                return Some(candidate.scale_exact(&BigRational::from_integer(c)));
            }
        }
        xi = xi * BigInt::from(73794) / BigInt::from(27011);
    }
    None
}

/// Inverse of evaluation at `xi` in `x_v`, using balanced residues.
fn interpolate(g: &Poly, v: usize, xi: &BigInt) -> Poly {
    let mut out = Poly::zero(g.nvars);
    let mut rest = g.clone();
    let half = xi / BigInt::from(2);
    for i in 0u32.. {
        if rest.is_zero() {
            break;
        }
        let mut digit = Poly::zero(g.nvars);
        for (e, c) in &rest.terms {
            let mut r = c.numer().mod_floor(xi);
            if r > half {
                r -= xi;
            }
            if !r.is_zero() {
                let mut raised = e.clone();
                raised[v] = i;
                out.terms.insert(raised, BigRational::from_integer(r.clone()));
                digit.terms.insert(e.clone(), BigRational::from_integer(r));
            }
        }
        rest = rest.sub(&digit, Field::Rationals).scale_exact(&BigRational::new(BigInt::one(), xi.clone()));
    }
    out
}

fn gcd_rec(a: &Poly, b: &Poly, nv: usize, k: Field) -> Poly {
    if a.is_zero() {
        return b.monic(k);
    }
    if b.is_zero() {
        return a.monic(k);
    }
    if nv == 0 || (a.is_constant() || b.is_constant()) {
        return Poly::one(a.nvars);
    }
    let v = nv - 1;
    if !a.involves(v) && !b.involves(v) {
        return gcd_rec(a, b, v, k);
    }
    let ca = content(a, v, k);
    let cb = content(b, v, k);
    let c = gcd_rec(&ca, &cb, v, k);
    let mut p = a.div_exact(&ca, k).expect("content divides");
    let mut q = b.div_exact(&cb, k).expect("content divides");
    if p.degree_in(v) < q.degree_in(v) {
        std::mem::swap(&mut p, &mut q);
    }
    while !q.is_zero() {
        if q.degree_in(v) == Some(0) {
            p = Poly::one(a.nvars);
            break;
        }
        let r = pseudo_rem(&p, &q, v, k);
        p = q;
        // monic keeps the numeric coefficients from growing along the sequence
        q = if r.is_zero() { r } else { primitive_part(&r, v, k).monic(k) };
    }
    c.mul(&p, k).monic(k)
}

fn content(a: &Poly, v: usize, k: Field) -> Poly {
    let mut g = Poly::zero(a.nvars);
    for (_, coeff) in a.coefficients_in(v) {
        g = gcd_rec(&g, &coeff, v, k);
        if g.is_one() {
            break;
        }
    }
    g
}

fn primitive_part(a: &Poly, v: usize, k: Field) -> Poly {
    let c = content(a, v, k);
    a.div_exact(&c, k).expect("content divides")
}

fn pseudo_rem(p: &Poly, q: &Poly, v: usize, k: Field) -> Poly {
    let dq = q.degree_in(v).unwrap();
    let lcq = q.leading_coefficient_in(v);
    // a constant leading coefficient allows exact division, which avoids scaling r
    let exact = if lcq.is_constant() { Some(k.inv(&lcq.constant_term()).expect("nonzero leading coefficient")) } else { None };
    let mut r = p.clone();
    while !r.is_zero() && r.degree_in(v).unwrap() >= dq {
        let dr = r.degree_in(v).unwrap();
        let lcr = r.leading_coefficient_in(v);
        let mut shift = vec![0; p.nvars];
        shift[v] = dr - dq;
        r = match &exact {
            Some(c) => r.sub(&q.mul(&lcr, k).mul_term(&shift, c, k), k),
            None => r.mul(&lcq, k).sub(&q.mul(&lcr, k).mul_term(&shift, &BigRational::one(), k), k),
        };
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    const Q: Field = Field::Rationals;

    fn x() -> Poly {
        Poly::var(2, 0)
    }
    fn y() -> Poly {
        Poly::var(2, 1)
    }
    fn c(n: i64) -> Poly {
        Poly::constant(2, BigRational::from_integer(n.into()))
    }

    #[test]
    fn multivariate_gcd_recovers_common_factor() {
        // g = x + y + 1, a = g * (x - y), b = g^2 * (x*y + 2)
        let g = x().add(&y(), Q).add(&c(1), Q);
        let a = g.mul(&x().sub(&y(), Q), Q);
        let b = g.mul(&g, Q).mul(&x().mul(&y(), Q).add(&c(2), Q), Q);
        assert_eq!(a.gcd(&b, Q), g.monic(Q));
    }

    #[test]
    fn heuristic_gcd_matches_remainder_sequences() {
        let half = Poly::constant(2, BigRational::new(1.into(), 2.into()));
        let g = x().mul(&x(), Q).sub(&y().mul(&half, Q), Q).add(&c(3), Q);
        let h = x().mul(&y(), Q).add(&c(-7), Q);
        let cases = [
            (g.mul(&h, Q), g.mul(&x().add(&c(1), Q), Q)),
            (g.mul(&g, Q).mul(&h, Q), h.mul(&y().sub(&c(5), Q), Q)),
            (g.clone(), h.clone()),
            (x().mul(&c(6), Q), x().mul(&y(), Q).mul(&c(4), Q)),
            (c(6), g.mul(&c(9), Q)),
        ];
        for (a, b) in cases {
            let prs = gcd_rec(&a, &b, 2, Q);
            assert_eq!(heuristic_gcd(&a.integral(), &b.integral(), 2).unwrap().monic(Q), prs);
            assert_eq!(a.gcd(&b, Q), prs);
        }
    }

    #[test]
    fn coprime_gcd_is_one() {
        let a = x().mul(&x(), Q).add(&y(), Q);
        let b = y().mul(&y(), Q).add(&c(3), Q);
        assert!(a.gcd(&b, Q).is_one());
    }

    #[test]
    fn exact_division() {
        let a = x().mul(&y(), Q).add(&x(), Q);
        assert_eq!(a.div_exact(&x(), Q), Some(y().add(&c(1), Q)));
        assert_eq!(a.div_exact(&y(), Q), None);
    }

    #[test]
    fn text_rendering() {
        let p = x().mul(&x(), Q).mul(&y(), Q).add(&y().pow(4, Q), Q).sub(&c(3), Q);
        assert_eq!(p.to_text(), "x^2*y + y^4 - 3");
        assert_eq!(p.order(), Some(0));
    }

    #[test]
    fn univariate_division_over_gf2() {
        let k = Field::PrimeField { p: 2 };
        let t = Poly::var(1, 0);
        let f = t.mul(&t, k).add(&t, k); // x^2 + x
        let (q, r) = f.div_rem(&t.add(&Poly::one(1), k), k);
        assert_eq!(q, t);
        assert!(r.is_zero());
    }
}
