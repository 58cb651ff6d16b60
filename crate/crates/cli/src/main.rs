use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use perfcx::decompose::{decompose, primary_refine};
use perfcx::demo::{demo_dedekind, demo_local, DedekindBounds};
use perfcx::generators::{
    f_n, iterated_koszul, koszul, multi_iterated_koszul, parse_plan, scrambled_sum, PlantedDecomposition,
    ScrambleConfig,
};
use perfcx::irreducible::find_certificate;
use perfcx::minimize::{minimize, width};
use perfcx::{ChainComplex, Error, Ring};

const RING_HELP: &str = "Rings: int, q, gf:P, q[x], gf:P[x], q-local:N (Q[x1..xN] localized at the origin), \
gf:P-local:N, int-local:P (Z localized at p).";

/// Exact computations with perfect complexes: generate, minimize, decompose, certify.
#[derive(Parser)]
#[command(name = "perfcx", version, after_help = RING_HELP)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a generated complex as JSON.
    Gen(GenArgs),
    /// Analyze a complex stored as JSON.
    Analyze(AnalyzeArgs),
    /// Run a batch demonstration.
    Demo(DemoArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum GenKind {
    Koszul,
    Fn,
    Iterated,
    Multi,
    Scrambled,
}

#[derive(Args)]
#[command(after_help = RING_HELP)]
struct GenArgs {
    kind: GenKind,
    /// Length for `fn`; number of variables for the Koszul families.
    #[arg(long)]
    n: Option<usize>,
    /// Number of glue junctions for `multi`.
    #[arg(long, default_value_t = 2)]
    m: usize,
    #[arg(long)]
    ring: Option<String>,
    /// Summands for `scrambled`, e.g. "(0,c2),(0,c3),(1,f)".
    #[arg(long)]
    plan: Option<String>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Elementary operations per degree for `scrambled`.
    #[arg(long, default_value_t = 8)]
    ops: usize,
    /// Output file; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum AnalyzeKind {
    Validate,
    Minimize,
    Width,
    Decompose,
    Cohomology,
    Certify,
}

#[derive(Clone, Copy, Default, ValueEnum)]
enum RefineLevel {
    #[default]
    Invariant,
    Primary,
}

#[derive(Args)]
struct AnalyzeArgs {
    kind: AnalyzeKind,
    file: PathBuf,
    #[arg(long)]
    json: bool,
    #[arg(long, value_enum, default_value_t = RefineLevel::Invariant)]
    refine: RefineLevel,
    /// Skip the d∘d = 0 check when reading the file.
    #[arg(long)]
    no_check: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Scenario {
    Dedekind,
    Local,
}

#[derive(Args)]
struct DemoArgs {
    scenario: Scenario,
    #[arg(long, default_value_t = 200)]
    trials: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Largest complex length for the local scenario.
    #[arg(long, default_value_t = 10)]
    max_n: usize,
    /// Largest rank per degree in the dedekind scenario.
    #[arg(long, default_value_t = 6)]
    max_rank: usize,
    /// Elementary scramble operations per degree in the dedekind scenario.
    #[arg(long, default_value_t = 8)]
    ops: usize,
    #[arg(long)]
    json: bool,
}

/// Exit 1 for mathematical refusals, 2 for usage and capability problems.
enum Failure {
    Refused(String),
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidComplex(_) | Error::NotAChainMap(_) | Error::Shape(_) => Failure::Refused(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

type Outcome = std::result::Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Gen(a) => gen(a),
        Command::Analyze(a) => analyze(a),
        Command::Demo(a) => demo(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Refused(msg)) => {
            if !msg.is_empty() {
                eprintln!("{msg}");
            }
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("serializable") + "\n"
}

fn parse_ring(s: &str) -> Result<Ring, Failure> {
    s.parse::<Ring>().map_err(Failure::from)
}

/// Ring for the Koszul families: `--ring` fixes the base and variable count,
/// `--n` the variable count over `q` when no ring is given.
fn koszul_ring(a: &GenArgs) -> Result<Ring, Failure> {
    match (&a.ring, a.n) {
        (Some(r), n) => {
            let ring = parse_ring(r)?;
            if let Some(n) = n {
                if ring.num_vars() != n {
                    return Err(Failure::Usage(format!("--n {n} disagrees with ring {ring} ({} variables)", ring.num_vars())));
                }
            }
            Ok(ring)
        }
        (None, n) => Ok(Ring::localized_poly(perfcx::Field::Rationals, n.unwrap_or(2))?),
    }
}

fn gen(a: GenArgs) -> Outcome {
    let value = match a.kind {
        GenKind::Koszul => koszul(&koszul_ring(&a)?)?.to_json(),
        GenKind::Iterated => iterated_koszul(&koszul_ring(&a)?)?.to_json(),
        GenKind::Multi => multi_iterated_koszul(&koszul_ring(&a)?, a.m)?.to_json(),
        GenKind::Fn => {
            let ring = parse_ring(a.ring.as_deref().unwrap_or("q-local:2"))?;
            let n = a.n.ok_or_else(|| Failure::Usage("fn needs --n".into()))?;
            f_n(&ring, n)?.to_json()
        }
        GenKind::Scrambled => {
            let ring = parse_ring(a.ring.as_deref().unwrap_or("int"))?;
            let plan = a.plan.as_deref().ok_or_else(|| Failure::Usage("scrambled needs --plan".into()))?;
            let plan = parse_plan(&ring, plan)?;
            scrambled_sum(&ring, &plan, a.seed, ScrambleConfig { ops_per_degree: a.ops })?.to_json()
        }
    };
    let text = pretty(&value);
    match &a.out {
        Some(path) => fs::write(path, text).map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// Reads a complex file; generator output for scrambled sums is accepted too.
fn read_complex(path: &PathBuf, check: bool) -> Result<ChainComplex, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
    let v: Value = serde_json::from_str(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    if v.get("complex").is_some() && v.get("summands").is_some() {
        return Ok(PlantedDecomposition::from_json(&v)?.complex);
    }
    Ok(ChainComplex::from_json(&v, check)?)
}

fn ranks_text(c: &ChainComplex) -> String {
    if c.is_empty() {
        return "empty".into();
    }
    let r: Vec<String> = c.rank_vector().iter().map(|r| r.to_string()).collect();
    format!("({}) in degrees {}..{}", r.join(", "), c.min_deg(), c.max_deg())
}

fn analyze(a: AnalyzeArgs) -> Outcome {
    if let AnalyzeKind::Validate = a.kind {
        let c = read_complex(&a.file, false)?;
        return match c.validate() {
            Ok(()) => {
                emit(a.json, json!({"valid": true}), "ok\n".into());
                Ok(())
            }
            Err(v) => {
                let text = format!("violation: {v}\n");
                emit(a.json, json!({"valid": false, "violation": serde_json::to_value(&v).unwrap()}), text);
                Err(Failure::Refused(String::new()))
            }
        };
    }
    let c = read_complex(&a.file, !a.no_check)?;
    match a.kind {
        AnalyzeKind::Validate => unreachable!(),
        AnalyzeKind::Minimize => {
            let (m, t) = minimize(&c)?;
            let text = format!("before {}\nafter  {}\nsplit-off pieces {}\n", ranks_text(&c), ranks_text(&m), t.steps.len());
            emit(a.json, json!({"transcript": t.to_json(), "complex": m.to_json()}), text);
        }
        AnalyzeKind::Width => {
            let w = width(&c)?;
            let shown = w.map_or("empty".to_string(), |w| w.to_string());
            emit(a.json, json!({"width": w.map_or(json!("empty"), |w| json!(w))}), format!("width {shown}\n"));
        }
        AnalyzeKind::Cohomology => {
            let h = c.cohomology()?;
            emit(a.json, h.to_json(), h.to_text());
        }
        AnalyzeKind::Decompose => {
            let report = decompose(&c)?;
            let report = match a.refine {
                RefineLevel::Invariant => report,
                RefineLevel::Primary => match primary_refine(&report) {
                    Ok(r) => r,
                    Err(e @ Error::RefinementUnsupported(_)) => {
                        emit(a.json, report.to_json(), report.to_text());
                        return Err(Failure::Refused(format!("primary refinement refused: {e}")));
                    }
                    Err(e) => return Err(e.into()),
                },
            };
            emit(a.json, report.to_json(), report.to_text());
        }
        AnalyzeKind::Certify => {
            let cert = find_certificate(&c)?;
            emit(a.json, cert.to_json(), cert.to_text());
            if !cert.is_certified() {
                return Err(Failure::Refused(String::new()));
            }
        }
    }
    Ok(())
}

fn emit(as_json: bool, v: Value, text: String) {
    if as_json {
        print!("{}", pretty(&v));
    } else {
        print!("{text}");
    }
}

fn demo(a: DemoArgs) -> Outcome {
    let report = match a.scenario {
        Scenario::Dedekind => {
            if a.max_rank == 0 {
                return Err(Failure::Usage("--max-rank must be positive".into()));
            }
            let bounds = DedekindBounds {
                max_rank: a.max_rank,
                scramble: ScrambleConfig { ops_per_degree: a.ops },
                ..DedekindBounds::default()
            };
            demo_dedekind(a.trials, a.seed, &bounds)
        }
        Scenario::Local => {
            if a.max_n == 0 {
                return Err(Failure::Usage("--max-n must be positive".into()));
            }
            demo_local(a.max_n, a.seed)
        }
    };
    emit(a.json, report.to_json(), report.to_text());
    if report.passed() {
        Ok(())
    } else {
        Err(Failure::Refused(format!("{} failures", report.failures.len())))
    }
}
