//! Text forms of rings and elements.
//!
//! Compact ring grammar: `int`, `q`, `gf:P`, `q[x]`, `gf:P[x]`, `q-local:N`,
//! `gf:P-local:N`, `int-local:P`.
//!
//! JSON element encoding (what [`Ring::encode`] prints):
//! * integers, rationals and `GF(p)` residues: a string, `"12"` or `"-3/4"`;
//! * polynomials in `k[x]`: a list of `[exponent-vector, coefficient-string]`
//!   pairs in increasing lexicographic order of exponents;
//! * localized elements: `{"num": .., "den": ..}` with each side encoded as
//!   above (a polynomial list, or an integer string over `int-local`).
//!
//! [`Ring::decode`] accepts that encoding and, anywhere an element is
//! expected, a string in the human expression syntax handled by
//! [`Ring::parse_element`] (`"x^2*y - 3/2*x + 1"`, `"x/(1 + y)"`).

use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::{json, Value};

use super::field::fmt_rational;
use super::{Field, Poly, Ring, RingElement};
use crate::error::{Error, Result};

fn field_prefix(f: &Field) -> String {
    match f {
        Field::Rationals => "q".into(),
        Field::PrimeField { p } => format!("gf:{p}"),
    }
}

pub(super) fn ring_to_compact(r: &Ring) -> String {
    match r {
        Ring::Rationals => "q".into(),
        Ring::PrimeField { p } => format!("gf:{p}"),
        Ring::Integers => "int".into(),
        Ring::UnivariatePoly { base } => format!("{}[x]", field_prefix(base)),
        Ring::LocalizedPoly { base, num_vars } => format!("{}-local:{num_vars}", field_prefix(base)),
        Ring::LocalizedIntegers { p } => format!("int-local:{p}"),
    }
}

fn parse_field(s: &str) -> Result<Field> {
    if s == "q" {
        return Ok(Field::Rationals);
    }
    let p = s
        .strip_prefix("gf:")
        .and_then(|p| p.parse::<u64>().ok())
        .ok_or_else(|| Error::InvalidRing(format!("unknown field '{s}'")))?;
    Ok(Field::PrimeField { p })
}

pub(super) fn ring_from_compact(s: &str) -> Result<Ring> {
    let s = s.trim();
    let bad = || Error::InvalidRing(format!("cannot parse ring '{s}'"));
    let ring = if s == "int" {
        Ring::Integers
    } else if let Some(p) = s.strip_prefix("int-local:") {
        Ring::LocalizedIntegers { p: p.parse().map_err(|_| bad())? }
    } else if let Some(base) = s.strip_suffix("[x]") {
        Ring::UnivariatePoly { base: parse_field(base)? }
    } else if let Some((base, n)) = s.split_once("-local:") {
        Ring::LocalizedPoly { base: parse_field(base)?, num_vars: n.parse().map_err(|_| bad())? }
    } else {
        Ring::from(parse_field(s)?)
    };
    ring.checked()
}

impl Ring {
    /// Canonical JSON encoding of an element.
    pub fn encode(&self, a: &RingElement) -> Value {
        match a {
            RingElement::Int(x) => Value::String(x.to_string()),
            RingElement::Scalar(x) => Value::String(fmt_rational(x)),
            RingElement::Poly(p) => encode_poly(p),
            RingElement::Frac { num, den } => json!({ "num": encode_poly(num), "den": encode_poly(den) }),
            RingElement::LocalInt { num, den } => json!({ "num": num.to_string(), "den": den.to_string() }),
        }
    }

    pub fn decode(&self, v: &Value) -> Result<RingElement> {
        match v {
            Value::String(s) => self.parse_element(s),
            Value::Number(n) => {
                let i = n.as_i64().ok_or_else(|| Error::Parse(format!("non-integer number {n}")))?;
                Ok(self.from_int(i))
            }
            Value::Array(_) => match self {
                Ring::UnivariatePoly { .. } | Ring::LocalizedPoly { .. } => {
                    Ok(self.from_poly(self.decode_poly(v)?))
                }
                _ => Err(Error::Parse(format!("polynomial list given for ring {self}"))),
            },
            Value::Object(map) => {
                let (Some(num), Some(den)) = (map.get("num"), map.get("den")) else {
                    return Err(Error::Parse("fraction object needs 'num' and 'den'".into()));
                };
                if map.len() != 2 {
                    return Err(Error::Parse("unexpected keys in fraction object".into()));
                }
                let num = self.decode_side(num)?;
                let den = self.decode_side(den)?;
                let inv = self.invert_unit(&den).map_err(|_| Error::Parse("denominator is not a unit".into()))?;
                self.mul(&num, &inv)
            }
            _ => Err(Error::Parse(format!("cannot decode element from {v}"))),
        }
    }

    fn decode_side(&self, v: &Value) -> Result<RingElement> {
        match self {
            Ring::LocalizedPoly { .. } | Ring::LocalizedIntegers { .. } => self.decode(v),
            _ => Err(Error::Parse(format!("fraction object given for ring {self}"))),
        }
    }

    fn decode_poly(&self, v: &Value) -> Result<Poly> {
        let n = self.num_vars();
        let k = self.k();
        let items = v.as_array().ok_or_else(|| Error::Parse("expected polynomial list".into()))?;
        let mut terms = Vec::with_capacity(items.len());
        for item in items {
            let pair = item.as_array().filter(|a| a.len() == 2).ok_or_else(|| {
                Error::Parse(format!("polynomial term must be [exponents, coefficient], got {item}"))
            })?;
            let exps = pair[0]
                .as_array()
                .ok_or_else(|| Error::Parse("exponent vector must be a list".into()))?
                .iter()
                .map(|e| e.as_u64().and_then(|e| u32::try_from(e).ok()))
                .collect::<Option<Vec<u32>>>()
                .ok_or_else(|| Error::Parse("exponents must be nonnegative integers".into()))?;
            let coeff = match &pair[1] {
                Value::String(s) => parse_rational(s)?,
                Value::Number(x) if x.is_i64() => BigRational::from_integer(x.as_i64().unwrap().into()),
                other => return Err(Error::Parse(format!("bad coefficient {other}"))),
            };
            terms.push((exps, coeff));
        }
        Poly::from_terms(n, k, terms)
            .ok_or_else(|| Error::Parse(format!("polynomial term does not fit ring {self}")))
    }

    /// Human-readable form, e.g. `x^2*y - y^2` or `(x)/(1 + y)`.
    pub fn display(&self, a: &RingElement) -> String {
        match a {
            RingElement::Int(x) => x.to_string(),
            RingElement::Scalar(x) => fmt_rational(x),
            RingElement::Poly(p) => p.to_text(),
            RingElement::Frac { num, den } => {
                if den.is_one() {
                    num.to_text()
                } else {
                    format!("({})/({})", num.to_text(), den.to_text())
                }
            }
            RingElement::LocalInt { num, den } => {
                if *den == BigInt::from(1) {
                    num.to_string()
                } else {
                    format!("{num}/{den}")
                }
            }
        }
    }

    /// Parses and evaluates an expression built from integer literals, the
    /// ring's variables, `+ - * / ^` and parentheses. Division is only
    /// accepted by units.
    pub fn parse_element(&self, s: &str) -> Result<RingElement> {
        let mut p = ExprParser { ring: self, src: s.as_bytes(), pos: 0 };
        let v = p.expr()?;
        p.skip_ws();
        if p.pos != p.src.len() {
            return Err(Error::Parse(format!("unexpected input at offset {} in '{s}'", p.pos)));
        }
        Ok(v)
    }

    fn variable_index(&self, name: &str) -> Option<usize> {
        let n = self.num_vars();
        if let Some(i) = (0..n).find(|&i| Poly::var_name(n, i) == name) {
            return Some(i);
        }
        let i: usize = name.strip_prefix('x')?.parse().ok()?;
        (1..=n).contains(&i).then(|| i - 1)
    }
}

fn encode_poly(p: &Poly) -> Value {
    Value::Array(p.terms().map(|(e, c)| json!([e, fmt_rational(c)])).collect())
}

fn parse_rational(s: &str) -> Result<BigRational> {
    let bad = || Error::Parse(format!("bad rational '{s}'"));
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d == BigInt::from(0) {
                return Err(bad());
            }
            Ok(BigRational::new(n, d))
        }
        None => Ok(BigRational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

struct ExprParser<'a> {
    ring: &'a Ring,
    src: &'a [u8],
    pos: usize,
}

impl ExprParser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn err(&self, msg: &str) -> Error {
        Error::Parse(format!("{msg} at offset {}", self.pos))
    }

    fn expr(&mut self) -> Result<RingElement> {
        let mut acc = self.term()?;
        while let Some(c @ (b'+' | b'-')) = self.peek() {
            self.pos += 1;
            let rhs = self.term()?;
            acc = if c == b'+' { self.ring.add(&acc, &rhs)? } else { self.ring.sub(&acc, &rhs)? };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<RingElement> {
        let mut acc = self.unary()?;
        while let Some(c @ (b'*' | b'/')) = self.peek() {
            self.pos += 1;
            let rhs = self.unary()?;
            acc = if c == b'*' {
                self.ring.mul(&acc, &rhs)?
            } else {
                let inv = self.ring.invert_unit(&rhs).map_err(|_| self.err("division by a non-unit"))?;
                self.ring.mul(&acc, &inv)?
            };
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<RingElement> {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                let v = self.unary()?;
                self.ring.neg(&v)
            }
            Some(b'+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<RingElement> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let digits = self.take_while(|c| c.is_ascii_digit());
            let e: u32 = digits.parse().map_err(|_| self.err("expected exponent"))?;
            return self.ring.pow(&base, e);
        }
        Ok(base)
    }

    fn take_while(&mut self, f: impl Fn(u8) -> bool) -> String {
        let start = self.pos;
        while self.pos < self.src.len() && f(self.src[self.pos]) {
            self.pos += 1;
        }
        String::from_utf8_lossy(&self.src[start..self.pos]).into_owned()
    }

    fn atom(&mut self) -> Result<RingElement> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let v = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected ')'"));
                }
                self.pos += 1;
                Ok(v)
            }
            Some(c) if c.is_ascii_digit() => {
                let digits = self.take_while(|c| c.is_ascii_digit());
                Ok(self.ring.from_bigint(&digits.parse::<BigInt>().unwrap()))
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let name = self.take_while(|c| c.is_ascii_alphanumeric());
                let i = self
                    .ring
                    .variable_index(&name)
                    .ok_or_else(|| Error::Parse(format!("unknown variable '{name}' for ring {}", self.ring)))?;
                self.ring.var(i)
            }
            _ => Err(self.err("expected a number, variable or '('")),
        }
    }
}
