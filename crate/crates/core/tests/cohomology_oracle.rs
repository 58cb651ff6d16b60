//! Cohomology over PIDs checked against determinantal divisors.
//!
//! The torsion of `H^i` is the torsion of `coker d(i-1)`, whose invariant
//! factors are `D_k / D_(k-1)` with `D_k` the gcd of the `k x k` minors. The
//! free rank is `n_i - rank d(i) - rank d(i-1)`. Nothing here goes through
//! Smith normal form.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use perfcx::decompose::{decompose, Summand};
use perfcx::demo::{dedekind_ring, random_plan, DedekindBounds};
use perfcx::generators::{scrambled_sum, ScrambleConfig};
use perfcx::{ChainComplex, Field, Matrix, Ring, RingElement};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = combinations(n - 1, k);
    for mut c in combinations(n - 1, k - 1) {
        c.push(n - 1);
        out.push(c);
    }
    out
}

fn det(ring: &Ring, m: &[Vec<RingElement>]) -> RingElement {
    if m.is_empty() {
        return ring.one();
    }
    let mut acc = ring.zero();
    for j in 0..m.len() {
        if ring.is_zero(&m[0][j]) {
            continue;
        }
        let minor: Vec<Vec<RingElement>> =
            m[1..].iter().map(|row| row.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, e)| e.clone()).collect()).collect();
        let t = ring.mul(&m[0][j], &det(ring, &minor)).unwrap();
        acc = if j % 2 == 0 { ring.add(&acc, &t) } else { ring.sub(&acc, &t) }.unwrap();
    }
    acc
}

/// Normalized gcd: nonnegative integers, monic polynomials.
fn gcd(ring: &Ring, a: &RingElement, b: &RingElement) -> RingElement {
    match (ring, a, b) {
        (Ring::Integers, RingElement::Int(x), RingElement::Int(y)) => RingElement::Int(x.gcd(y)),
        (Ring::UnivariatePoly { base }, RingElement::Poly(x), RingElement::Poly(y)) => {
            let g = x.gcd(y, *base);
            RingElement::Poly(if g.is_zero() { g } else { g.monic(*base) })
        }
        _ => unreachable!("oracle covers Z and k[x]"),
    }
}

fn exact_div(ring: &Ring, a: &RingElement, b: &RingElement) -> RingElement {
    match (ring, a, b) {
        (Ring::Integers, RingElement::Int(x), RingElement::Int(y)) => {
            assert!((x % y).is_zero());
            RingElement::Int(x / y)
        }
        (Ring::UnivariatePoly { base }, RingElement::Poly(x), RingElement::Poly(y)) => {
            RingElement::Poly(x.div_exact(y, *base).expect("divisor chain"))
        }
        _ => unreachable!(),
    }
}

/// `(rank, non-unit invariant factors)` of `m` from determinantal divisors.
fn determinantal(ring: &Ring, m: &Matrix) -> (usize, Vec<RingElement>) {
    let (rows, cols) = m.shape();
    let mut divisors = vec![ring.one()];
    for k in 1..=rows.min(cols) {
        let mut g = ring.zero();
        for rs in combinations(rows, k) {
            for cs in combinations(cols, k) {
                let sub: Vec<Vec<RingElement>> =
                    rs.iter().map(|&r| cs.iter().map(|&c| m.get(r, c).clone()).collect()).collect();
                g = gcd(ring, &g, &det(ring, &sub));
            }
        }
        if ring.is_zero(&g) {
            break;
        }
        divisors.push(g);
    }
    let factors: Vec<RingElement> = divisors
        .windows(2)
        .map(|w| exact_div(ring, &w[1], &w[0]))
        .filter(|f| !ring.is_unit(f))
        .collect();
    (divisors.len() - 1, factors)
}

fn check(c: &ChainComplex) {
    let ring = c.ring();
    let h = c.cohomology().unwrap();
    for i in c.degrees() {
        let (r_out, _) = determinantal(ring, &c.diff_or_zero(i));
        let (r_in, torsion) = determinantal(ring, &c.diff_or_zero(i - 1));
        let got = h.at(i);
        assert_eq!(got.free_rank, c.rank(i) - r_out - r_in, "free rank at degree {i}");
        assert_eq!(got.invariant_factors, torsion, "torsion at degree {i}");
    }
}

#[test]
fn scrambled_integer_and_polynomial_complexes() {
    let bounds = DedekindBounds { max_rank: 4, ..DedekindBounds::default() };
    for i in 0..40 {
        let ring = dedekind_ring(i);
        let mut rng = ChaCha8Rng::seed_from_u64(1000 + i as u64);
        let plan = random_plan(&ring, &bounds, &mut rng);
        let planted = scrambled_sum(&ring, &plan, i as u64, ScrambleConfig::default()).unwrap();
        check(&planted.complex);
    }
}

#[test]
fn hand_examples() {
    let z = Ring::Integers;
    let c = ChainComplex::from_differentials(
        z.clone(),
        0,
        vec![Matrix::parse(&z, &[&["2", "4", "6"], &["0", "6", "12"], &["2", "10", "18"]]).unwrap()],
    )
    .unwrap();
    check(&c);
    let h = c.cohomology().unwrap();
    assert_eq!(h.at(1).invariant_factors, vec![z.from_int(2), z.from_int(6)]);
    assert_eq!(h.at(1).free_rank, 1);
    assert_eq!(h.at(0).free_rank, 1);
}

#[test]
fn oracle_agrees_on_gf3_polynomials() {
    let r = Ring::UnivariatePoly { base: Field::PrimeField { p: 3 } };
    let m = Matrix::parse(&r, &[&["x^2 + 1", "x"], &["x^3 + x", "x^2"], &["0", "x + 2"]]).unwrap();
    let c = ChainComplex::from_differentials(r, -1, vec![m]).unwrap();
    check(&c);
}

#[test]
fn decomposition_summands_reproduce_oracle_cohomology() {
    let z = Ring::Integers;
    let plan = vec![
        Summand::cyclic(0, z.from_int(12)),
        Summand::cyclic(0, z.from_int(18)),
        Summand::cyclic(1, z.from_int(5)),
        Summand::free(1, 1),
        Summand::free(-1, 1),
    ];
    let planted = scrambled_sum(&z, &plan, 4, ScrambleConfig::default()).unwrap();
    check(&planted.complex);
    let report = decompose(&planted.complex).unwrap();
    check(&report.to_complex());
    assert!(report.summands.contains(&Summand::cyclic(0, z.from_bigint(&BigInt::from(36)))));
}
