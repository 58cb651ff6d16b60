//! The two batch demos: random decompositions over PIDs, and certified
//! indecomposable complexes of every length over a two-variable local ring.
//!
//! Trials run in parallel; each trial's seed depends only on the master
//! seed and its index, and results are reported in trial order.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::complex::ChainComplex;
use crate::decompose::{audit_width, decompose, primary_refine, Summand};
use crate::error::Result;
use crate::generators::{f_n, iterated_koszul, koszul, multi_iterated_koszul, scrambled_sum, ScrambleConfig};
use crate::irreducible::{find_certificate, verify_certificate};
use crate::ring::{Field, Poly, Ring};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DedekindBounds {
    pub max_rank: usize,
    pub max_span: i64,
    pub max_abs: i64,
    pub max_poly_degree: u32,
    pub max_summands: usize,
    pub scramble: ScrambleConfig,
}

impl Default for DedekindBounds {
    fn default() -> Self {
        DedekindBounds {
            max_rank: 6,
            max_span: 4,
            max_abs: 9,
            max_poly_degree: 3,
            max_summands: 8,
            scramble: ScrambleConfig::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DemoFailure {
    pub instance: String,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalInstance {
    pub name: String,
    pub length: usize,
    pub certified: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DemoSummary {
    Dedekind { max_width: Option<usize>, trials_per_ring: Vec<(String, usize)>, summands: usize },
    Local { ring: String, instances: Vec<LocalInstance>, certified_lengths: Vec<usize> },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DemoReport {
    pub scenario: &'static str,
    pub trials: usize,
    pub seed: u64,
    pub failures: Vec<DemoFailure>,
    pub summary: DemoSummary,
}

impl DemoReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn to_json(&self) -> Value {
        let summary = match &self.summary {
            DemoSummary::Dedekind { max_width, trials_per_ring, summands } => json!({
                "max_width": max_width.map_or(json!("empty"), |w| json!(w)),
                "trials_per_ring": trials_per_ring.iter().map(|(r, n)| json!({"ring": r, "trials": n})).collect::<Vec<_>>(),
                "planted_summands": summands,
            }),
            DemoSummary::Local { ring, instances, certified_lengths } => json!({
                "ring": ring,
                "certified_lengths": certified_lengths,
                "instances": instances.iter().map(|i| json!({
                    "name": i.name, "length": i.length, "certified": i.certified,
                })).collect::<Vec<_>>(),
            }),
        };
        json!({
            "scenario": self.scenario,
            "trials": self.trials,
            "seed": self.seed,
            "failures": self.failures.iter().map(|f| json!({"instance": f.instance, "reason": f.reason})).collect::<Vec<_>>(),
            "summary": summary,
        })
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("scenario {}\nseed {}\ntrials {}\nfailures {}\n", self.scenario, self.seed, self.trials, self.failures.len());
        for f in &self.failures {
            out.push_str(&format!("  FAIL {}: {}\n", f.instance, f.reason));
        }
        match &self.summary {
            DemoSummary::Dedekind { max_width, trials_per_ring, summands } => {
                out.push_str(&format!("max audited width {}\n", max_width.map_or("empty".to_string(), |w| w.to_string())));
                for (r, n) in trials_per_ring {
                    out.push_str(&format!("trials over {r}: {n}\n"));
                }
                out.push_str(&format!("planted summands recovered: {summands}\n"));
            }
            DemoSummary::Local { ring, instances, certified_lengths } => {
                out.push_str(&format!("ring {ring}\n"));
                for i in instances {
                    let v = if i.certified { "certified" } else { "refused" };
                    out.push_str(&format!("  {:<28} length {:>3}  {v}\n", i.name, i.length));
                }
                let lens: Vec<String> = certified_lengths.iter().map(|l| l.to_string()).collect();
                out.push_str(&format!("certified lengths {{{}}}\n", lens.join(", ")));
            }
        }
        out
    }
}

/// Per-trial seed: SplitMix64 applied to the master seed offset by the index.
pub fn trial_seed(master: u64, index: usize) -> u64 {
    let mut z = master.wrapping_add((index as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Trial `i` runs over `Z` for even `i` and `GF(5)[x]` for odd `i`.
pub fn dedekind_ring(index: usize) -> Ring {
    if index % 2 == 0 {
        Ring::Integers
    } else {
        Ring::UnivariatePoly { base: Field::PrimeField { p: 5 } }
    }
}

/// A random plan of summands within `bounds`.
pub fn random_plan(ring: &Ring, bounds: &DedekindBounds, rng: &mut impl Rng) -> Vec<Summand> {
    let lo: i64 = rng.gen_range(-3..=0);
    let span: i64 = rng.gen_range(1..=bounds.max_span.max(1));
    let hi = lo + span - 1;
    let mut ranks = vec![0usize; span as usize];
    let count = rng.gen_range(1..=bounds.max_summands.max(1));
    let mut plan = Vec::new();
    for _ in 0..count {
        if span >= 2 && rng.gen_bool(0.75) {
            let e = rng.gen_range(lo + 1..=hi);
            let (a, b) = ((e - 1 - lo) as usize, (e - lo) as usize);
            if ranks[a] < bounds.max_rank && ranks[b] < bounds.max_rank {
                ranks[a] += 1;
                ranks[b] += 1;
                plan.push(Summand::cyclic(e, random_non_unit(ring, bounds, rng)));
            }
        } else {
            let e = rng.gen_range(lo..=hi);
            let k = (e - lo) as usize;
            if ranks[k] < bounds.max_rank {
                ranks[k] += 1;
                plan.push(Summand::free(e, 1));
            }
        }
    }
    plan
}

fn random_non_unit(ring: &Ring, bounds: &DedekindBounds, rng: &mut impl Rng) -> crate::ring::RingElement {
    match ring {
        Ring::UnivariatePoly { base } => {
            let p = base.characteristic() as i64;
            let deg = rng.gen_range(1..=bounds.max_poly_degree.max(1));
            let mut terms = vec![(vec![deg], num_rational::BigRational::from_integer(rng.gen_range(1..p).into()))];
            for i in 0..deg {
                terms.push((vec![i], num_rational::BigRational::from_integer(rng.gen_range(0..p).into())));
            }
            ring.from_poly(Poly::from_terms(1, *base, terms).expect("valid terms"))
        }
        _ => {
            let v = rng.gen_range(2..=bounds.max_abs.max(2));
            ring.from_int(if rng.gen_bool(0.5) { v } else { -v })
        }
    }
}

struct TrialOutcome {
    ring: Ring,
    width: Option<usize>,
    summands: usize,
    failure: Option<String>,
}

fn dedekind_trial(master: u64, index: usize, bounds: &DedekindBounds) -> TrialOutcome {
    let ring = dedekind_ring(index);
    let seed = trial_seed(master, index);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let plan = random_plan(&ring, bounds, &mut rng);
    let run = || -> Result<(Option<usize>, usize, Option<String>)> {
        let planted = scrambled_sum(&ring, &plan, seed, bounds.scramble)?;
        let report = decompose(&planted.complex)?;
        let width = audit_width(&report);
        let refined = primary_refine(&report)?;
        let n = planted.primary_summands()?.len();
        if width.is_some_and(|w| w > 1) {
            return Ok((width, n, Some(format!("audited width {}", width.unwrap()))));
        }
        if report.to_complex().cohomology()? != planted.complex.cohomology()? {
            return Ok((width, n, Some("summands do not reproduce the cohomology".into())));
        }
        if !planted.recovered_by(&refined)? {
            return Ok((width, n, Some("primary summands differ from the planted ones".into())));
        }
        Ok((width, n, None))
    };
    match run() {
        Ok((width, summands, failure)) => TrialOutcome { ring, width, summands, failure },
        Err(e) => TrialOutcome { ring, width: None, summands: 0, failure: Some(e.to_string()) },
    }
}

pub fn demo_dedekind(trials: usize, seed: u64, bounds: &DedekindBounds) -> DemoReport {
    let outcomes: Vec<TrialOutcome> = (0..trials).into_par_iter().map(|i| dedekind_trial(seed, i, bounds)).collect();
    let mut failures = Vec::new();
    let mut per_ring: Vec<(String, usize)> = Vec::new();
    let mut max_width = None;
    let mut summands = 0;
    for (i, o) in outcomes.into_iter().enumerate() {
        let name = o.ring.to_string();
        match per_ring.iter_mut().find(|(r, _)| *r == name) {
            Some((_, n)) => *n += 1,
            None => per_ring.push((name.clone(), 1)),
        }
        max_width = max_width.max(o.width);
        summands += o.summands;
        if let Some(reason) = o.failure {
            failures.push(DemoFailure { instance: format!("trial {i} ({name}, seed {})", trial_seed(seed, i)), reason });
        }
    }
    DemoReport {
        scenario: "dedekind",
        trials,
        seed,
        failures,
        summary: DemoSummary::Dedekind { max_width, trials_per_ring: per_ring, summands },
    }
}

/// The complexes certified for length `len` over `k[x, y]_(x, y)`.
pub fn local_instances(ring: &Ring, len: usize) -> Result<Vec<(String, ChainComplex)>> {
    let mut out = vec![(format!("f_{len}"), f_n(ring, len)?)];
    match len {
        2 => out.push(("koszul(2)".into(), koszul(ring)?)),
        3 => out.push(("iterated_koszul(2)".into(), iterated_koszul(ring)?)),
        l if l >= 4 => out.push((format!("multi_iterated(2, {})", l - 2), multi_iterated_koszul(ring, l - 2)?)),
        _ => {}
    }
    Ok(out)
}

pub fn demo_local(max_n: usize, seed: u64) -> DemoReport {
    let ring = Ring::localized_poly(Field::Rationals, 2).expect("valid ring");
    let per_len: Vec<(usize, Vec<(LocalInstance, Option<String>)>)> = (1..=max_n)
        .into_par_iter()
        .map(|len| {
            let results = match local_instances(&ring, len) {
                Ok(list) => list.into_iter().map(|(name, c)| check_local(name, len, &c)).collect(),
                Err(e) => vec![(LocalInstance { name: format!("length {len}"), length: len, certified: false }, Some(e.to_string()))],
            };
            (len, results)
        })
        .collect();
    let mut instances = Vec::new();
    let mut failures = Vec::new();
    let mut certified_lengths = Vec::new();
    for (len, results) in per_len {
        let mut all = !results.is_empty();
        for (inst, failure) in results {
            all &= inst.certified;
            if let Some(reason) = failure {
                failures.push(DemoFailure { instance: inst.name.clone(), reason });
            }
            instances.push(inst);
        }
        if all {
            certified_lengths.push(len);
        }
    }
    DemoReport {
        scenario: "local",
        trials: instances.len(),
        seed,
        failures,
        summary: DemoSummary::Local { ring: ring.to_string(), instances, certified_lengths },
    }
}

fn check_local(name: String, len: usize, c: &ChainComplex) -> (LocalInstance, Option<String>) {
    let length = c.length().unwrap_or(0);
    let failure = if length != len {
        Some(format!("expected length {len}, built {length}"))
    } else {
        match find_certificate(c) {
            Ok(cert) if cert.is_certified() => match verify_certificate(c, &cert) {
                Ok(true) => None,
                Ok(false) => Some("certificate does not verify".into()),
                Err(e) => Some(e.to_string()),
            },
            Ok(cert) => Some(cert.to_text().lines().next().unwrap_or("refused").to_string()),
            Err(e) => Some(e.to_string()),
        }
    };
    (LocalInstance { name, length, certified: failure.is_none() }, failure)
}
