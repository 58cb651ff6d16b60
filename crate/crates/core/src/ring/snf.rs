//! Smith normal form over the supported PIDs.
//!
//! Pivots are the entry of smallest Euclidean size (absolute value, degree or
//! valuation), ties broken by row-major position. Diagonal entries are
//! normalized to their canonical associate.

use super::{Ring, RingElement};
use crate::error::{Error, Result};
use crate::matrix::Matrix;

/// `d = u * m * v` with `u`, `v` invertible and `d` diagonal with each
/// nonzero diagonal entry dividing the next.
#[derive(Clone, Debug)]
pub struct SmithForm {
    pub u: Matrix,
    pub d: Matrix,
    pub v: Matrix,
    pub u_inv: Matrix,
    pub v_inv: Matrix,
    pub rank: usize,
}

impl SmithForm {
    pub fn invariant_factors(&self) -> Vec<RingElement> {
        (0..self.rank).map(|i| self.d.get(i, i).clone()).collect()
    }
}

struct Elimination<'a> {
    ring: &'a Ring,
    a: Matrix,
    u: Matrix,
    u_inv: Matrix,
    v: Matrix,
    v_inv: Matrix,
}

impl Elimination<'_> {
    // row[t] += f * row[s]
    fn row_op(&mut self, t: usize, s: usize, f: &RingElement) -> Result<()> {
        let r = self.ring;
        self.a.add_row_multiple(t, s, f, r)?;
        self.u.add_row_multiple(t, s, f, r)?;
        self.u_inv.add_col_multiple(s, t, &r.neg(f)?, r)
    }

    // col[t] += f * col[s]
    fn col_op(&mut self, t: usize, s: usize, f: &RingElement) -> Result<()> {
        let r = self.ring;
        self.a.add_col_multiple(t, s, f, r)?;
        self.v.add_col_multiple(t, s, f, r)?;
        self.v_inv.add_row_multiple(s, t, &r.neg(f)?, r)
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        self.a.swap_rows(i, j);
        self.u.swap_rows(i, j);
        self.u_inv.swap_cols(i, j);
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        self.a.swap_cols(i, j);
        self.v.swap_cols(i, j);
        self.v_inv.swap_rows(i, j);
    }

    fn scale_row(&mut self, t: usize, unit: &RingElement) -> Result<()> {
        let r = self.ring;
        let inv = r.invert_unit(unit)?;
        self.a.scale_row(t, unit, r)?;
        self.u.scale_row(t, unit, r)?;
        self.u_inv.scale_col(t, &inv, r)
    }

    fn smallest(&self, cells: impl Iterator<Item = (usize, usize)>) -> Option<(usize, usize)> {
        let mut best: Option<((usize, usize), num_bigint::BigInt)> = None;
        for (i, j) in cells {
            if let Some(size) = self.ring.euclidean_size(self.a.get(i, j)) {
                if best.as_ref().is_none_or(|(_, b)| size < *b) {
                    best = Some(((i, j), size));
                }
            }
        }
        best.map(|(pos, _)| pos)
    }

    fn move_to(&mut self, t: usize, (i, j): (usize, usize)) {
        self.swap_rows(t, i);
        self.swap_cols(t, j);
    }

    // clears row t and column t beyond the pivot; returns when both are zero
    fn clear_cross(&mut self, t: usize) -> Result<()> {
        let (rows, cols) = self.a.shape();
        let r = self.ring;
        loop {
            let pivot = self.a.get(t, t).clone();
            for i in (t + 1)..rows {
                if r.is_zero(self.a.get(i, t)) {
                    continue;
                }
                let (q, _) = r.div_rem(self.a.get(i, t), &pivot)?;
                self.row_op(i, t, &r.neg(&q)?)?;
            }
            for j in (t + 1)..cols {
                if r.is_zero(self.a.get(t, j)) {
                    continue;
                }
                let (q, _) = r.div_rem(self.a.get(t, j), &pivot)?;
                self.col_op(j, t, &r.neg(&q)?)?;
            }
            let cross = std::iter::once((t, t))
                .chain(((t + 1)..rows).map(|i| (i, t)))
                .chain(((t + 1)..cols).map(|j| (t, j)));
            let best = self.smallest(cross).expect("pivot is nonzero");
            if best == (t, t)
                && ((t + 1)..rows).all(|i| r.is_zero(self.a.get(i, t)))
                && ((t + 1)..cols).all(|j| r.is_zero(self.a.get(t, j)))
            {
                return Ok(());
            }
            self.move_to(t, best);
        }
    }
}

pub fn smith_normal_form(ring: &Ring, m: &Matrix) -> Result<SmithForm> {
    if !ring.is_pid() {
        return Err(Error::Capability { required: "a PID", ring: ring.to_string() });
    }
    let (rows, cols) = m.shape();
    let mut e = Elimination {
        ring,
        a: m.clone(),
        u: Matrix::identity(ring, rows),
        u_inv: Matrix::identity(ring, rows),
        v: Matrix::identity(ring, cols),
        v_inv: Matrix::identity(ring, cols),
    };
    let mut rank = 0;
    for t in 0..rows.min(cols) {
        let Some(pos) = e.smallest((t..rows).flat_map(|i| (t..cols).map(move |j| (i, j)))) else {
            break;
        };
        e.move_to(t, pos);
        loop {
            e.clear_cross(t)?;
            let pivot = e.a.get(t, t).clone();
            let mut offender = None;
            'scan: for i in (t + 1)..rows {
                for j in (t + 1)..cols {
                    if !ring.divides(&pivot, e.a.get(i, j))? {
                        offender = Some(i);
                        break 'scan;
                    }
                }
            }
            match offender {
                Some(i) => e.row_op(t, i, &ring.one())?,
                None => break,
            }
        }
        let (_, unit) = ring.split_unit(e.a.get(t, t))?;
        e.scale_row(t, &ring.invert_unit(&unit)?)?;
        rank += 1;
    }
    Ok(SmithForm { u: e.u, d: e.a, v: e.v, u_inv: e.u_inv, v_inv: e.v_inv, rank })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::Field;
    use proptest::prelude::*;

    // cofactor expansion; independent of the elimination code
    fn det(ring: &Ring, m: &Matrix) -> RingElement {
        let n = m.rows();
        if n == 0 {
            return ring.one();
        }
        let mut acc = ring.zero();
        for j in 0..n {
            let mut minor = m.rows_from(1);
            minor.remove_col(j);
            let term = ring.mul(m.get(0, j), &det(ring, &minor)).unwrap();
            acc = if j % 2 == 0 { ring.add(&acc, &term) } else { ring.sub(&acc, &term) }.unwrap();
        }
        acc
    }

    fn check(ring: &Ring, m: &Matrix) -> SmithForm {
        let s = smith_normal_form(ring, m).unwrap();
        assert_eq!(s.u.mul(m, ring).unwrap().mul(&s.v, ring).unwrap(), s.d);
        assert!(ring.is_unit(&det(ring, &s.u)));
        assert!(ring.is_unit(&det(ring, &s.v)));
        assert_eq!(s.u.mul(&s.u_inv, ring).unwrap(), Matrix::identity(ring, m.rows()));
        assert_eq!(s.v.mul(&s.v_inv, ring).unwrap(), Matrix::identity(ring, m.cols()));
        for (i, j, e) in s.d.entries() {
            if i != j || i >= s.rank {
                assert!(ring.is_zero(e));
            } else {
                assert_eq!(&ring.split_unit(e).unwrap().0, e, "diagonal entry not canonical");
            }
        }
        let f = s.invariant_factors();
        for w in f.windows(2) {
            assert!(ring.divides(&w[0], &w[1]).unwrap());
        }
        s
    }

    #[test]
    fn diag_2_3_over_integers() {
        let z = Ring::Integers;
        let m = Matrix::parse(&z, &[&["2", "0"], &["0", "3"]]).unwrap();
        let s = check(&z, &m);
        assert_eq!(s.d, Matrix::parse(&z, &[&["1", "0"], &["0", "6"]]).unwrap());
    }

    #[test]
    fn already_ordered_polynomial_diagonal() {
        let r = Ring::UnivariatePoly { base: Field::Rationals };
        let m = Matrix::parse(&r, &[&["x", "0"], &["0", "x^2"]]).unwrap();
        let s = check(&r, &m);
        assert_eq!(s.d, m);
    }

    #[test]
    fn zero_matrix() {
        let z = Ring::Integers;
        let m = Matrix::zeros(&z, 2, 3);
        let s = check(&z, &m);
        assert_eq!(s.rank, 0);
        assert_eq!(s.u, Matrix::identity(&z, 2));
        assert_eq!(s.v, Matrix::identity(&z, 3));
    }

    #[test]
    fn empty_shapes() {
        let z = Ring::Integers;
        for (r, c) in [(0, 0), (0, 3), (2, 0)] {
            check(&z, &Matrix::zeros(&z, r, c));
        }
    }

    #[test]
    fn local_and_field_cases() {
        let z3 = Ring::localized_integers(3).unwrap();
        let m = Matrix::parse(&z3, &[&["6", "2"], &["9/2", "18"]]).unwrap();
        let s = check(&z3, &m);
        assert_eq!(s.invariant_factors(), vec![z3.from_int(1), z3.from_int(9)]);

        let dvr = Ring::localized_poly(Field::Rationals, 1).unwrap();
        let m = Matrix::parse(&dvr, &[&["x^2 + x^3", "x/(1+x)"], &["x^3", "0"]]).unwrap();
        let s = check(&dvr, &m);
        assert_eq!(s.invariant_factors(), vec![dvr.var(0).unwrap(), dvr.pow(&dvr.var(0).unwrap(), 3).unwrap()]);

        let q = Ring::Rationals;
        let m = Matrix::parse(&q, &[&["1/2", "1"], &["1", "2"]]).unwrap();
        assert_eq!(check(&q, &m).rank, 1);
    }

    #[test]
    fn refuses_non_pid() {
        let r = Ring::localized_poly(Field::Rationals, 2).unwrap();
        assert!(smith_normal_form(&r, &Matrix::identity(&r, 1)).is_err());
    }

    proptest! {
        #[test]
        fn integer_matrices(rows in 0usize..5, cols in 0usize..5, seed in proptest::collection::vec(-12i64..12, 25)) {
            let z = Ring::Integers;
            let mut m = Matrix::zeros(&z, rows, cols);
            for i in 0..rows { for j in 0..cols { m.set(i, j, z.from_int(seed[i * 5 + j])); } }
            check(&z, &m);
        }

        #[test]
        fn gf3_polynomial_matrices(rows in 1usize..4, cols in 1usize..4, seed in proptest::collection::vec(0i64..3, 27)) {
            let r = Ring::UnivariatePoly { base: Field::PrimeField { p: 3 } };
            let x = r.var(0).unwrap();
            let mut m = Matrix::zeros(&r, rows, cols);
            for i in 0..rows { for j in 0..cols {
                let k = (i * 3 + j) * 3;
                let mut e = r.zero();
                for d in 0..3 {
                    let t = r.mul(&r.from_int(seed[k + d]), &r.pow(&x, d as u32).unwrap()).unwrap();
                    e = r.add(&e, &t).unwrap();
                }
                m.set(i, j, e);
            } }
            check(&r, &m);
        }
    }
}
