use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

/// Coefficient field of the polynomial rings and residue field of the local rings.
///
/// Elements are `BigRational`s. Over `GF(p)` they are kept as integers in `0..p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Field {
    Rationals,
    PrimeField { p: u64 },
}

impl Field {
    pub fn characteristic(&self) -> u64 {
        match self {
            Field::Rationals => 0,
            Field::PrimeField { p } => *p,
        }
    }

    /// Brings an arbitrary rational into canonical form; `None` if the
    /// denominator vanishes modulo `p`.
    pub fn normalize(&self, a: BigRational) -> Option<BigRational> {
        match self {
            Field::Rationals => Some(a),
            Field::PrimeField { p } => {
                let p = BigInt::from(*p);
                let num = a.numer().mod_floor(&p);
                let den = a.denom().mod_floor(&p);
                let inv = mod_inverse(&den, &p)?;
                Some(BigRational::from_integer((num * inv).mod_floor(&p)))
            }
        }
    }

    pub fn from_int(&self, n: &BigInt) -> BigRational {
        match self {
            Field::Rationals => BigRational::from_integer(n.clone()),
            Field::PrimeField { p } => BigRational::from_integer(n.mod_floor(&BigInt::from(*p))),
        }
    }

    fn reduce(&self, a: BigRational) -> BigRational {
        match self {
            Field::Rationals => a,
            Field::PrimeField { p } => {
                BigRational::from_integer(a.to_integer().mod_floor(&BigInt::from(*p)))
            }
        }
    }

    pub fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        self.reduce(a + b)
    }

    pub fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        self.reduce(a - b)
    }

    pub fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        self.reduce(a * b)
    }

    pub fn neg(&self, a: &BigRational) -> BigRational {
        self.reduce(-a)
    }

    pub fn inv(&self, a: &BigRational) -> Option<BigRational> {
        if a.is_zero() {
            return None;
        }
        match self {
            Field::Rationals => Some(a.recip()),
            Field::PrimeField { p } => {
                let p = BigInt::from(*p);
                mod_inverse(&a.to_integer(), &p).map(BigRational::from_integer)
            }
        }
    }

    /// Rank of a dense matrix over the field (rows of equal length).
    pub fn rank(&self, mut rows: Vec<Vec<BigRational>>) -> usize {
        let ncols = rows.first().map_or(0, |r| r.len());
        let mut rank = 0;
        for col in 0..ncols {
            let Some(pivot) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
                continue;
            };
            rows.swap(rank, pivot);
            let inv = self.inv(&rows[rank][col]).expect("nonzero pivot");
            for r in (rank + 1)..rows.len() {
                if rows[r][col].is_zero() {
                    continue;
                }
                let factor = self.mul(&rows[r][col], &inv);
                for c in col..ncols {
                    let t = self.mul(&factor, &rows[rank][c]);
                    rows[r][c] = self.sub(&rows[r][c], &t);
                }
            }
            rank += 1;
        }
        rank
    }
}

pub(crate) fn mod_inverse(a: &BigInt, p: &BigInt) -> Option<BigInt> {
    let e = a.mod_floor(p).extended_gcd(p);
    if e.gcd.is_one() {
        Some(e.x.mod_floor(p))
    } else {
        None
    }
}

pub(crate) fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

pub(crate) fn fmt_rational(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn prime_field_arithmetic() {
        let f = Field::PrimeField { p: 5 };
        assert_eq!(f.mul(&q(3), &q(4)), q(2));
        assert_eq!(f.neg(&q(1)), q(4));
        assert_eq!(f.inv(&q(2)), Some(q(3)));
        assert_eq!(
            f.normalize(BigRational::new(1.into(), 2.into())),
            Some(q(3))
        );
        assert_eq!(f.normalize(BigRational::new(1.into(), 5.into())), None);
    }

    #[test]
    fn rank_over_rationals_and_gf2() {
        let m = vec![vec![q(1), q(1)], vec![q(1), q(-1)]];
        assert_eq!(Field::Rationals.rank(m.clone()), 2);
        let m2 = m
            .into_iter()
            .map(|r| r.into_iter().map(|x| Field::PrimeField { p: 2 }.normalize(x).unwrap()).collect())
            .collect();
        assert_eq!(Field::PrimeField { p: 2 }.rank(m2), 1);
    }

    #[test]
    fn primality() {
        assert!(is_prime(2) && is_prime(97));
        assert!(!is_prime(1) && !is_prime(91));
    }
}
