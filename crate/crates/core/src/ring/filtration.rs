use super::{Monomial, Ring};
use crate::error::{Error, Result};

/// Monomial basis of `m^s / m^(s+1)` for `k[x1..xn]` localized at `m = (x1..xn)`.
///
/// The basis lists every degree-`s` monomial in decreasing lexicographic order,
/// so for two variables and `s = 2` it is `x^2, x*y, y^2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MaximalIdealFiltration {
    ring: Ring,
    s: u32,
    basis: Vec<Monomial>,
}

impl MaximalIdealFiltration {
    pub fn new(ring: &Ring, s: u32) -> Result<Self> {
        let Ring::LocalizedPoly { num_vars, .. } = ring else {
            return Err(Error::Capability { required: "a localized polynomial ring", ring: ring.to_string() });
        };
        if s == 0 {
            return Err(Error::InvalidParameter("filtration level must be positive".into()));
        }
        let mut basis = Vec::new();
        let mut current = vec![0; *num_vars];
        compositions(s, 0, &mut current, &mut basis);
        Ok(MaximalIdealFiltration { ring: ring.clone(), s, basis })
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn s(&self) -> u32 {
        self.s
    }

    pub fn basis(&self) -> &[Monomial] {
        &self.basis
    }

    pub fn index_of(&self, e: &Monomial) -> Option<usize> {
        self.basis.binary_search_by(|b| e.cmp(b)).ok()
    }
}

// emits exponent vectors summing to `left` in decreasing lex order
fn compositions(left: u32, pos: usize, current: &mut Vec<u32>, out: &mut Vec<Monomial>) {
    if pos + 1 == current.len() {
        current[pos] = left;
        out.push(current.clone());
        return;
    }
    for e in (0..=left).rev() {
        current[pos] = e;
        compositions(left - e, pos + 1, current, out);
    }
    current[pos] = 0;
}
