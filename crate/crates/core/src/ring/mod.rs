//! Coefficient rings: descriptors, exact elements, and the unit/valuation
//! predicates the local-ring algorithms depend on.
//!
//! Elements are plain values; every operation goes through the [`Ring`] that
//! owns them, which checks that operands have the representation the ring
//! expects and keeps results in canonical form.

mod field;
mod filtration;
mod poly;
pub mod snf;
mod text;

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use field::Field;
pub use filtration::MaximalIdealFiltration;
pub use poly::{Monomial, Poly};

pub(crate) use field::is_prime;

/// One of the supported coefficient rings.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Ring {
    Rationals,
    PrimeField { p: u64 },
    Integers,
    /// `k[x]`.
    UnivariatePoly { base: Field },
    /// `k[x1..xn]` localized at the maximal ideal `(x1..xn)`.
    LocalizedPoly { base: Field, num_vars: usize },
    /// `Z` localized at the prime `(p)`.
    LocalizedIntegers { p: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum RingElement {
    Int(BigInt),
    /// Field element: a rational, or an integer in `0..p` for `GF(p)`.
    Scalar(BigRational),
    Poly(Poly),
    /// Reduced fraction whose denominator has constant term 1.
    Frac { num: Poly, den: Poly },
    /// Reduced fraction with positive denominator coprime to `p`.
    LocalInt { num: BigInt, den: BigInt },
}

/// `(x1..xn)`-adic or `p`-adic valuation; zero has infinite valuation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Valuation {
    Finite(u32),
    Infinite,
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinite => f.write_str("infinity"),
        }
    }
}

impl Ring {
    pub fn prime_field(p: u64) -> Result<Ring> {
        Ring::PrimeField { p }.checked()
    }

    pub fn localized_poly(base: Field, num_vars: usize) -> Result<Ring> {
        Ring::LocalizedPoly { base, num_vars }.checked()
    }

    pub fn localized_integers(p: u64) -> Result<Ring> {
        Ring::LocalizedIntegers { p }.checked()
    }

    /// Returns the descriptor if its parameters are legal.
    pub fn checked(self) -> Result<Ring> {
        let check_field = |f: &Field| match f {
            Field::PrimeField { p } if !is_prime(*p) => {
                Err(Error::InvalidRing(format!("{p} is not prime")))
            }
            _ => Ok(()),
        };
        match &self {
            Ring::PrimeField { p } | Ring::LocalizedIntegers { p } => {
                check_field(&Field::PrimeField { p: *p })?
            }
            Ring::UnivariatePoly { base } => check_field(base)?,
            Ring::LocalizedPoly { base, num_vars } => {
                check_field(base)?;
                if *num_vars == 0 {
                    return Err(Error::InvalidRing("localized polynomial ring needs at least one variable".into()));
                }
            }
            Ring::Rationals | Ring::Integers => {}
        }
        Ok(self)
    }

    pub fn is_field(&self) -> bool {
        matches!(self, Ring::Rationals | Ring::PrimeField { .. })
    }

    /// `k[x]_(x)` is a discrete valuation ring and counts as a PID here.
    pub fn is_pid(&self) -> bool {
        match self {
            Ring::LocalizedPoly { num_vars, .. } => *num_vars == 1,
            _ => true,
        }
    }

    pub fn is_local(&self) -> bool {
        matches!(
            self,
            Ring::Rationals
                | Ring::PrimeField { .. }
                | Ring::LocalizedPoly { .. }
                | Ring::LocalizedIntegers { .. }
        )
    }

    /// Coefficient field for polynomial rings, the ring itself for fields.
    fn coefficient_field(&self) -> Option<Field> {
        match self {
            Ring::Rationals => Some(Field::Rationals),
            Ring::PrimeField { p } => Some(Field::PrimeField { p: *p }),
            Ring::UnivariatePoly { base } | Ring::LocalizedPoly { base, .. } => Some(*base),
            _ => None,
        }
    }

    /// Residue field `A/m` of a local ring.
    pub fn residue_field(&self) -> Option<Field> {
        match self {
            Ring::LocalizedIntegers { p } => Some(Field::PrimeField { p: *p }),
            Ring::Integers | Ring::UnivariatePoly { .. } => None,
            _ => self.coefficient_field(),
        }
    }

    pub fn residue_ring(&self) -> Option<Ring> {
        self.residue_field().map(Ring::from)
    }

    pub fn num_vars(&self) -> usize {
        match self {
            Ring::UnivariatePoly { .. } => 1,
            Ring::LocalizedPoly { num_vars, .. } => *num_vars,
            _ => 0,
        }
    }

    fn k(&self) -> Field {
        self.coefficient_field().expect("polynomial ring")
    }

    fn p(&self) -> BigInt {
        match self {
            Ring::LocalizedIntegers { p } | Ring::PrimeField { p } => BigInt::from(*p),
            _ => unreachable!("ring has no distinguished prime"),
        }
    }

    fn mixed(&self) -> Error {
        Error::MixedRing(self.to_string())
    }

    pub fn zero(&self) -> RingElement {
        self.from_int(0)
    }

    pub fn one(&self) -> RingElement {
        self.from_int(1)
    }

    pub fn from_int(&self, n: i64) -> RingElement {
        self.from_bigint(&BigInt::from(n))
    }

    pub fn from_bigint(&self, n: &BigInt) -> RingElement {
        match self {
            Ring::Integers => RingElement::Int(n.clone()),
            Ring::Rationals | Ring::PrimeField { .. } => RingElement::Scalar(self.k().from_int(n)),
            Ring::UnivariatePoly { base } => RingElement::Poly(Poly::constant(1, base.from_int(n))),
            Ring::LocalizedPoly { base, num_vars } => RingElement::Frac {
                num: Poly::constant(*num_vars, base.from_int(n)),
                den: Poly::one(*num_vars),
            },
            Ring::LocalizedIntegers { .. } => RingElement::LocalInt { num: n.clone(), den: BigInt::one() },
        }
    }

    /// Builds the element `n/d` where that makes sense in the ring.
    pub fn from_ratio(&self, n: &BigInt, d: &BigInt) -> Result<RingElement> {
        let num = self.from_bigint(n);
        let den = self.from_bigint(d);
        let inv = self.invert_unit(&den)?;
        self.mul(&num, &inv)
    }

    /// The `i`-th variable of a polynomial ring.
    pub fn var(&self, i: usize) -> Result<RingElement> {
        let n = self.num_vars();
        if i >= n {
            return Err(Error::InvalidParameter(format!("{self} has no variable {i}")));
        }
        Ok(self.from_poly(Poly::var(n, i)))
    }

    /// Embeds a polynomial (over the coefficient field) into a polynomial ring.
    pub fn from_poly(&self, p: Poly) -> RingElement {
        match self {
            Ring::UnivariatePoly { .. } => RingElement::Poly(p),
            Ring::LocalizedPoly { num_vars, .. } => RingElement::Frac { num: p, den: Poly::one(*num_vars) },
            _ => panic!("from_poly on non-polynomial ring"),
        }
    }

    /// Whether `a` has the representation this ring uses.
    pub fn contains(&self, a: &RingElement) -> bool {
        match (self, a) {
            (Ring::Integers, RingElement::Int(_)) => true,
            (Ring::Rationals, RingElement::Scalar(_)) => true,
            (Ring::PrimeField { p }, RingElement::Scalar(x)) => {
                x.is_integer() && !x.is_negative() && x.numer() < &BigInt::from(*p)
            }
            (Ring::UnivariatePoly { .. }, RingElement::Poly(q)) => q.nvars() == 1,
            (Ring::LocalizedPoly { num_vars, .. }, RingElement::Frac { num, den }) => {
                num.nvars() == *num_vars && den.nvars() == *num_vars
            }
            (Ring::LocalizedIntegers { .. }, RingElement::LocalInt { .. }) => true,
            _ => false,
        }
    }

    fn frac(&self, num: Poly, den: Poly) -> Result<RingElement> {
        let k = self.k();
        let n = num.nvars();
        if num.is_zero() {
            return Ok(RingElement::Frac { num, den: Poly::one(n) });
        }
        let (num, den) = if den.is_one() {
            (num, den)
        } else {
            let g = num.gcd(&den, k);
            (num.div_exact(&g, k).unwrap(), den.div_exact(&g, k).unwrap())
        };
        let c = den.constant_term();
        if c.is_zero() {
            return Err(Error::NotAUnit);
        }
        let cinv = k.inv(&c).unwrap();
        Ok(RingElement::Frac { num: num.scale(&cinv, k), den: den.scale(&cinv, k) })
    }

    fn local_int(&self, num: BigInt, den: BigInt) -> Result<RingElement> {
        if num.is_zero() {
            return Ok(RingElement::LocalInt { num, den: BigInt::one() });
        }
        let g = num.gcd(&den);
        let (mut num, mut den) = (num / &g, den / &g);
        if den.is_negative() {
            num = -num;
            den = -den;
        }
        if den.is_multiple_of(&self.p()) {
            return Err(Error::NotAUnit);
        }
        Ok(RingElement::LocalInt { num, den })
    }

    pub fn add(&self, a: &RingElement, b: &RingElement) -> Result<RingElement> {
        use RingElement::*;
        match (self, a, b) {
            (Ring::Integers, Int(x), Int(y)) => Ok(Int(x + y)),
            (Ring::Rationals | Ring::PrimeField { .. }, Scalar(x), Scalar(y)) => Ok(Scalar(self.k().add(x, y))),
            (Ring::UnivariatePoly { base }, Poly(x), Poly(y)) => Ok(Poly(x.add(y, *base))),
            (Ring::LocalizedPoly { base, .. }, Frac { num: n1, den: d1 }, Frac { num: n2, den: d2 }) => {
                if d1.is_one() && d2.is_one() {
                    return Ok(Frac { num: n1.add(n2, *base), den: d1.clone() });
                }
                if d1 == d2 {
                    return self.frac(n1.add(n2, *base), d1.clone());
                }
                let num = n1.mul(d2, *base).add(&n2.mul(d1, *base), *base);
                self.frac(num, d1.mul(d2, *base))
            }
            (Ring::LocalizedIntegers { .. }, LocalInt { num: n1, den: d1 }, LocalInt { num: n2, den: d2 }) => {
                self.local_int(n1 * d2 + n2 * d1, d1 * d2)
            }
            _ => Err(self.mixed()),
        }
    }

    pub fn neg(&self, a: &RingElement) -> Result<RingElement> {
        use RingElement::*;
        match (self, a) {
            (Ring::Integers, Int(x)) => Ok(Int(-x)),
            (Ring::Rationals | Ring::PrimeField { .. }, Scalar(x)) => Ok(Scalar(self.k().neg(x))),
            (Ring::UnivariatePoly { base }, Poly(x)) => Ok(Poly(x.neg(*base))),
            (Ring::LocalizedPoly { base, .. }, Frac { num, den }) => {
                Ok(Frac { num: num.neg(*base), den: den.clone() })
            }
            (Ring::LocalizedIntegers { .. }, LocalInt { num, den }) => {
                Ok(LocalInt { num: -num, den: den.clone() })
            }
            _ => Err(self.mixed()),
        }
    }

    pub fn sub(&self, a: &RingElement, b: &RingElement) -> Result<RingElement> {
        self.add(a, &self.neg(b)?)
    }

    pub fn mul(&self, a: &RingElement, b: &RingElement) -> Result<RingElement> {
        use RingElement::*;
        match (self, a, b) {
            (Ring::Integers, Int(x), Int(y)) => Ok(Int(x * y)),
            (Ring::Rationals | Ring::PrimeField { .. }, Scalar(x), Scalar(y)) => Ok(Scalar(self.k().mul(x, y))),
            (Ring::UnivariatePoly { base }, Poly(x), Poly(y)) => Ok(Poly(x.mul(y, *base))),
            (Ring::LocalizedPoly { base, .. }, Frac { num: n1, den: d1 }, Frac { num: n2, den: d2 }) => {
                let k = *base;
                if n1.is_zero() || n2.is_zero() {
                    return Ok(self.zero());
                }
                if d1.is_one() && d2.is_one() {
                    return Ok(Frac { num: n1.mul(n2, k), den: d1.clone() });
                }
                // cross-cancel before multiplying to keep sizes down
                let g1 = if d2.is_one() { d2.clone() } else { n1.gcd(d2, k) };
                let g2 = if d1.is_one() { d1.clone() } else { n2.gcd(d1, k) };
                let num = n1.div_exact(&g1, k).unwrap().mul(&n2.div_exact(&g2, k).unwrap(), k);
                let den = d1.div_exact(&g2, k).unwrap().mul(&d2.div_exact(&g1, k).unwrap(), k);
                self.frac(num, den)
            }
            (Ring::LocalizedIntegers { .. }, LocalInt { num: n1, den: d1 }, LocalInt { num: n2, den: d2 }) => {
                self.local_int(n1 * n2, d1 * d2)
            }
            _ => Err(self.mixed()),
        }
    }

    pub fn pow(&self, a: &RingElement, e: u32) -> Result<RingElement> {
        let mut acc = self.one();
        for _ in 0..e {
            acc = self.mul(&acc, a)?;
        }
        Ok(acc)
    }

    pub fn is_zero(&self, a: &RingElement) -> bool {
        match a {
            RingElement::Int(x) => x.is_zero(),
            RingElement::Scalar(x) => x.is_zero(),
            RingElement::Poly(p) => p.is_zero(),
            RingElement::Frac { num, .. } => num.is_zero(),
            RingElement::LocalInt { num, .. } => num.is_zero(),
        }
    }

    pub fn is_one(&self, a: &RingElement) -> bool {
        *a == self.one()
    }

    pub fn is_unit(&self, a: &RingElement) -> bool {
        match (self, a) {
            (Ring::Integers, RingElement::Int(x)) => x.abs().is_one(),
            (_, RingElement::Scalar(x)) => !x.is_zero(),
            (_, RingElement::Poly(p)) => !p.is_zero() && p.is_constant(),
            (_, RingElement::Frac { num, .. }) => !num.constant_term().is_zero(),
            (Ring::LocalizedIntegers { p }, RingElement::LocalInt { num, .. }) => {
                !num.is_multiple_of(&BigInt::from(*p))
            }
            _ => false,
        }
    }

    pub fn invert_unit(&self, a: &RingElement) -> Result<RingElement> {
        if !self.contains(a) {
            return Err(self.mixed());
        }
        if !self.is_unit(a) {
            return Err(Error::NotAUnit);
        }
        use RingElement::*;
        Ok(match a {
            Int(x) => Int(x.clone()),
            Scalar(x) => Scalar(self.k().inv(x).unwrap()),
            Poly(p) => Poly(crate::ring::Poly::constant(1, self.k().inv(&p.constant_term()).unwrap())),
            Frac { num, den } => self.frac(den.clone(), num.clone())?,
            LocalInt { num, den } => self.local_int(den.clone(), num.clone())?,
        })
    }

    pub fn valuation(&self, a: &RingElement) -> Result<Valuation> {
        match (self, a) {
            (Ring::LocalizedPoly { .. }, RingElement::Frac { num, .. }) => {
                Ok(num.order().map_or(Valuation::Infinite, Valuation::Finite))
            }
            (Ring::LocalizedIntegers { p }, RingElement::LocalInt { num, .. }) => {
                if num.is_zero() {
                    return Ok(Valuation::Infinite);
                }
                let p = BigInt::from(*p);
                let mut n = num.clone();
                let mut v = 0;
                while n.is_multiple_of(&p) {
                    n /= &p;
                    v += 1;
                }
                Ok(Valuation::Finite(v))
            }
            (Ring::LocalizedPoly { .. } | Ring::LocalizedIntegers { .. }, _) => Err(self.mixed()),
            _ => Err(Error::Capability { required: "a local ring with a valuation", ring: self.to_string() }),
        }
    }

    /// Class of `a` in `m^s / m^(s+1)`, as coordinates in `filt`'s monomial basis.
    pub fn leading_form(
        &self,
        a: &RingElement,
        s: u32,
        filt: &MaximalIdealFiltration,
    ) -> Result<Vec<BigRational>> {
        let Ring::LocalizedPoly { base, .. } = self else {
            return Err(Error::Capability { required: "a localized polynomial ring", ring: self.to_string() });
        };
        if filt.ring() != self || filt.s() != s {
            return Err(Error::Shape(format!("filtration is for level {} of {}", filt.s(), filt.ring())));
        }
        let RingElement::Frac { num, den } = a else {
            return Err(self.mixed());
        };
        if let Valuation::Finite(v) = self.valuation(a)? {
            if v < s {
                return Err(Error::BelowFiltration { found: v, s });
            }
        }
        let d0 = base.inv(&den.constant_term()).expect("denominator is a unit");
        let mut out = vec![BigRational::zero(); filt.basis().len()];
        for (e, c) in num.homogeneous_part(s) {
            let idx = filt.index_of(e).expect("degree-s monomial in basis");
            out[idx] = base.mul(c, &d0);
        }
        Ok(out)
    }

    /// Image of `a` in the residue field.
    pub fn residue(&self, a: &RingElement) -> Result<BigRational> {
        match (self, a) {
            (Ring::Rationals | Ring::PrimeField { .. }, RingElement::Scalar(x)) => Ok(x.clone()),
            (Ring::LocalizedPoly { base, .. }, RingElement::Frac { num, den }) => {
                Ok(base.mul(&num.constant_term(), &base.inv(&den.constant_term()).unwrap()))
            }
            (Ring::LocalizedIntegers { p }, RingElement::LocalInt { num, den }) => {
                let f = Field::PrimeField { p: *p };
                Ok(f.normalize(BigRational::new(num.clone(), den.clone())).unwrap())
            }
            _ if !self.is_local() => {
                Err(Error::Capability { required: "a local ring", ring: self.to_string() })
            }
            _ => Err(self.mixed()),
        }
    }

    /// Pivot ordering key for Euclidean elimination: absolute value, degree,
    /// or valuation depending on the ring. Zero has no key.
    pub(crate) fn euclidean_size(&self, a: &RingElement) -> Option<BigInt> {
        if self.is_zero(a) {
            return None;
        }
        Some(match (self, a) {
            (_, RingElement::Int(x)) => x.abs(),
            (_, RingElement::Scalar(_)) => BigInt::zero(),
            (_, RingElement::Poly(p)) => BigInt::from(p.total_degree().unwrap()),
            _ => match self.valuation(a).ok()? {
                Valuation::Finite(v) => BigInt::from(v),
                Valuation::Infinite => return None,
            },
        })
    }

    /// Euclidean division `a = q*b + r` with `r = 0` or smaller than `b`.
    pub(crate) fn div_rem(&self, a: &RingElement, b: &RingElement) -> Result<(RingElement, RingElement)> {
        if !self.is_pid() {
            return Err(Error::Capability { required: "a PID", ring: self.to_string() });
        }
        if self.is_zero(b) {
            return Err(Error::InvalidParameter("division by zero".into()));
        }
        use RingElement::*;
        match (self, a, b) {
            (Ring::Integers, Int(x), Int(y)) => {
                let (q, r) = x.div_mod_floor(y);
                Ok((Int(q), Int(r)))
            }
            (Ring::UnivariatePoly { base }, Poly(x), Poly(y)) => {
                let (q, r) = x.div_rem(y, *base);
                Ok((Poly(q), Poly(r)))
            }
            _ => {
                // fields and discrete valuation rings
                if self.is_field() {
                    return Ok((self.mul(a, &self.invert_unit(b)?)?, self.zero()));
                }
                if self.is_zero(a) {
                    return Ok((self.zero(), self.zero()));
                }
                if self.euclidean_size(a) >= self.euclidean_size(b) {
                    let (ca, ua) = self.split_unit(a)?;
                    let (cb, ub) = self.split_unit(b)?;
                    let unit = self.mul(&ua, &self.invert_unit(&ub)?)?;
                    Ok((self.mul(&unit, &self.exact_quotient(&ca, &cb)?)?, self.zero()))
                } else {
                    Ok((self.zero(), a.clone()))
                }
            }
        }
    }

    /// Writes `a = canonical * unit`, where `canonical` is the normalized
    /// associate: nonnegative integer, monic polynomial, `1` in a field,
    /// `p^v` or `x^v` in a discrete valuation ring.
    pub fn split_unit(&self, a: &RingElement) -> Result<(RingElement, RingElement)> {
        if self.is_zero(a) {
            return Ok((a.clone(), self.one()));
        }
        use RingElement::*;
        match (self, a) {
            (Ring::Integers, Int(x)) => {
                let s = if x.is_negative() { -1 } else { 1 };
                Ok((Int(x.abs()), Int(BigInt::from(s))))
            }
            (Ring::Rationals | Ring::PrimeField { .. }, Scalar(_)) => Ok((self.one(), a.clone())),
            (Ring::UnivariatePoly { base }, Poly(x)) => {
                let lc = x.leading().unwrap().1.clone();
                Ok((Poly(x.monic(*base)), Poly(crate::ring::Poly::constant(1, lc))))
            }
            (Ring::LocalizedIntegers { .. }, LocalInt { .. }) | (Ring::LocalizedPoly { num_vars: 1, .. }, Frac { .. }) => {
                let Valuation::Finite(v) = self.valuation(a)? else { unreachable!() };
                let uniformizer = match self {
                    Ring::LocalizedIntegers { p } => self.from_int(*p as i64),
                    _ => self.var(0)?,
                };
                let canonical = self.pow(&uniformizer, v)?;
                let unit = self.exact_quotient(a, &canonical)?;
                Ok((canonical, unit))
            }
            (Ring::LocalizedPoly { .. }, Frac { .. }) => {
                Err(Error::Capability { required: "a PID", ring: self.to_string() })
            }
            _ => Err(self.mixed()),
        }
    }

    // a / uniformizer^v for the DVR cases, computed on the representation
    fn exact_quotient(&self, a: &RingElement, pv: &RingElement) -> Result<RingElement> {
        use RingElement::*;
        match (a, pv) {
            (LocalInt { num, den }, LocalInt { num: pn, .. }) => self.local_int(num / pn, den.clone()),
            (Frac { num, den }, Frac { num: pn, .. }) => {
                let q = num.div_exact(pn, self.k()).ok_or(Error::NotAUnit)?;
                self.frac(q, den.clone())
            }
            _ => Err(self.mixed()),
        }
    }

    /// Whether `b` divides `a`.
    pub fn divides(&self, b: &RingElement, a: &RingElement) -> Result<bool> {
        if self.is_zero(b) {
            return Ok(self.is_zero(a));
        }
        Ok(self.is_zero(&self.div_rem(a, b)?.1))
    }
}

impl From<Field> for Ring {
    fn from(f: Field) -> Ring {
        match f {
            Field::Rationals => Ring::Rationals,
            Field::PrimeField { p } => Ring::PrimeField { p },
        }
    }
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&text::ring_to_compact(self))
    }
}

impl std::str::FromStr for Ring {
    type Err = Error;

    fn from_str(s: &str) -> Result<Ring> {
        text::ring_from_compact(s)
    }
}
