//! The `simpair` command line.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::canonical::{canonicalize, orbit_eq_brute, orbit_eq_canonical, random_dn_pair, MatrixPair};
use crate::error::{Error, Result};
use crate::field::{FieldElem, FieldSpec};
use crate::glenum::GlGuard;
use crate::io;
use crate::linalg::Mat;
use crate::separators::counterexamples::{verify_counterexample_sigma_zeta, verify_counterexample_width_one};
use crate::separators::{orbit_eq_by_ranks, type_separation, InvariantProbe, RankProbeSet};
use crate::staircase::{all_patterns, cert_matrix, staircase_cert, verify_cert, TDSeq};
use crate::stargraph::{enumerate_forests, star_from_forest, Dir};

pub const EXIT_OK: i32 = 0;
pub const EXIT_SEPARATED: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_VERIFICATION: i32 = 3;

const FOREST_BOUND: usize = 6;

#[derive(Debug, Parser)]
#[command(name = "simpair", version, about = "Canonical forms and orbit invariants for matrix pairs")]
pub struct Cli {
    /// Render output as indented text instead of JSON.
    #[arg(long, global = true)]
    pub text: bool,
    /// Largest group order a brute-force search may enumerate.
    #[arg(long, global = true, default_value_t = GlGuard::default().max_order as u64)]
    pub max_gl_order: u64,
    /// Field for inputs that do not name one (Q, F7, ...); defaults to $SIMPAIR_FIELD.
    #[arg(long, global = true)]
    pub field: Option<String>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Canonical,
    Rank,
    Brute,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Staircase,
    Counterexamples,
    Oracle,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Canonical form of a pair, with the conjugating matrix.
    Canonicalize { pair: PathBuf },
    /// Decide whether two pairs are simultaneously similar.
    OrbitEq {
        a: PathBuf,
        b: PathBuf,
        #[arg(long, value_enum, default_value = "canonical")]
        method: Method,
    },
    /// Compare the types of two pairs using σ and ζ probes.
    TypeEq { a: PathBuf, b: PathBuf },
    /// List every directed forest on n vertices.
    Forests {
        #[arg(long)]
        n: usize,
        /// Include the pattern matrix of each forest.
        #[arg(long)]
        stars: bool,
    },
    /// Rank certificate for a three-diagonal sequence.
    Staircase {
        #[arg(long)]
        k: Option<usize>,
        /// Directions such as FRF (F forward, R reversed).
        #[arg(long)]
        delta: String,
        /// Comma-separated scalars to test.
        #[arg(long, default_value = "-1,0,1,2", allow_hyphen_values = true)]
        alpha: String,
    },
    /// Run a verification suite.
    Verify {
        #[arg(long, value_enum)]
        suite: Suite,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        p: Option<u64>,
        #[arg(long)]
        n: Option<usize>,
        /// Sample count for randomized parts.
        #[arg(long)]
        samples: Option<usize>,
    },
    /// The probes built for a pair's type, with degrees.
    Probes { pair: PathBuf },
}

/// Parse `argv`, run, write output and return the exit code.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let _ = if e.use_stderr() {
                write!(err, "{}", e.render())
            } else {
                write!(out, "{}", e.render())
            };
            return code;
        }
    };
    match execute(&cli) {
        Ok((code, v)) => {
            let text = if cli.text { render_text(&v) } else { io::to_pretty(&v) };
            let _ = out.write_all(text.as_bytes());
            code
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Verification(_) => EXIT_VERIFICATION,
        _ => EXIT_INPUT,
    }
}

fn default_field(cli: &Cli) -> Result<Option<FieldSpec>> {
    match &cli.field {
        Some(s) => io::parse_field_name(s).map(Some),
        None => io::env_field(),
    }
}

fn guard(cli: &Cli) -> GlGuard {
    GlGuard {
        max_order: cli.max_gl_order as u128,
        ..GlGuard::default()
    }
}

fn read_pair(path: &Path, default: Option<FieldSpec>) -> Result<MatrixPair> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    io::pair_from_str(&text, default).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn verdict_code(equal: bool) -> i32 {
    if equal {
        EXIT_OK
    } else {
        EXIT_SEPARATED
    }
}

fn verdict_str(equal: bool) -> &'static str {
    if equal {
        "equal"
    } else {
        "separated"
    }
}

fn execute(cli: &Cli) -> Result<(i32, Value)> {
    let field = default_field(cli)?;
    match &cli.command {
        Command::Canonicalize { pair } => {
            let p = read_pair(pair, field)?;
            Ok((EXIT_OK, io::canon_result_to_json(&canonicalize(&p)?)))
        }
        Command::OrbitEq { a, b, method } => {
            let (p, q) = (read_pair(a, field)?, read_pair(b, field)?);
            orbit_eq(&p, &q, *method, &guard(cli))
        }
        Command::TypeEq { a, b } => {
            let (p, q) = (read_pair(a, field)?, read_pair(b, field)?);
            let r = type_separation(&p, &q)?;
            Ok((verdict_code(r.is_equal()), io::report_to_json(&r, None)))
        }
        Command::Forests { n, stars } => forests(*n, *stars),
        Command::Staircase { k, delta, alpha } => {
            staircase(*k, delta, alpha, field.unwrap_or(FieldSpec::Rationals))
        }
        Command::Verify {
            suite,
            seed,
            p,
            n,
            samples,
        } => match suite {
            Suite::Staircase => verify_staircase(*p),
            Suite::Counterexamples => verify_counterexamples(*seed, *p, *samples, &guard(cli)),
            Suite::Oracle => verify_oracle(*seed, p.unwrap_or(3), n.unwrap_or(2), samples.unwrap_or(200), &guard(cli)),
        },
        Command::Probes { pair } => probes(&read_pair(pair, field)?),
    }
}

fn orbit_eq(p: &MatrixPair, q: &MatrixPair, method: Method, guard: &GlGuard) -> Result<(i32, Value)> {
    let mut methods = serde_json::Map::new();
    let mut report = None;
    if matches!(method, Method::Canonical | Method::All) {
        methods.insert("canonical".into(), json!(orbit_eq_canonical(p, q)?));
    }
    if matches!(method, Method::Rank | Method::All) {
        let r = orbit_eq_by_ranks(p, q)?;
        methods.insert("rank".into(), json!(r.is_equal()));
        report = Some(r);
    }
    if method == Method::Brute {
        methods.insert("brute".into(), json!(orbit_eq_brute(p, q, guard)?));
    }
    if method == Method::All {
        let brute = match orbit_eq_brute(p, q, guard) {
            Ok(b) => json!(b),
            Err(Error::GuardExceeded(_)) | Err(Error::Precondition(_)) => Value::Null,
            Err(e) => return Err(e),
        };
        methods.insert("brute".into(), brute);
    }
    let verdicts: Vec<bool> = methods.values().filter_map(Value::as_bool).collect();
    let agree = verdicts.windows(2).all(|w| w[0] == w[1]);
    let equal = verdicts[0];
    let mut v = match &report {
        Some(r) => io::report_to_json(r, None),
        None => json!({ "verdict": verdict_str(equal), "witness": null, "probes": 0, "seed": null }),
    };
    let obj = v.as_object_mut().expect("object");
    obj.insert("methods".into(), Value::Object(methods));
    if !agree {
        obj.insert("verdict".into(), json!("disagreement"));
        return Ok((EXIT_VERIFICATION, v));
    }
    Ok((verdict_code(equal), v))
}

fn forests(n: usize, stars: bool) -> Result<(i32, Value)> {
    let list = enumerate_forests(n, FOREST_BOUND)?;
    let entries = list
        .iter()
        .map(|g| {
            let mut v = io::digraph_to_json(g);
            if stars {
                v.as_object_mut()
                    .expect("object")
                    .insert("star".into(), json!(star_from_forest(g)?.row_strings()));
            }
            Ok(v)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((EXIT_OK, json!({ "n": n, "count": list.len(), "forests": entries })))
}

fn parse_alphas(f: FieldSpec, text: &str) -> Result<Vec<FieldElem>> {
    text.split(',')
        .filter(|s| !s.trim().is_empty())
        .enumerate()
        .map(|(k, s)| {
            FieldElem::parse(f, s.trim()).map_err(|e| Error::Parse(format!("--alpha item {}: {e}", k + 1)))
        })
        .collect()
}

fn staircase(k: Option<usize>, delta: &str, alpha: &str, f: FieldSpec) -> Result<(i32, Value)> {
    let delta = Dir::parse_pattern(delta)?;
    if let Some(k) = k {
        if k != delta.len() {
            return Err(Error::Parse(format!("--k {k} but --delta has {} letters", delta.len())));
        }
    }
    let alphas = parse_alphas(f, alpha)?;
    let s = TDSeq::standard(delta)?;
    let cert = staircase_cert(&s)?;
    let table = alphas
        .iter()
        .map(|a| {
            let rank = cert_matrix(&s, &cert, a)?.rank();
            let expected = cert.expected_rank(a);
            Ok(json!({ "alpha": a.to_string(), "rank": rank, "expected": expected, "ok": rank == expected }))
        })
        .collect::<Result<Vec<_>>>()?;
    let ok = verify_cert(&s, &cert, &alphas);
    let v = json!({
        "field": io::field_to_json(f),
        "k": s.k(),
        "delta": Dir::pattern_string(s.delta()),
        "idx": s.idx().iter().map(|i| i + 1).collect::<Vec<_>>(),
        "certificate": io::cert_to_json(&cert),
        "table": table,
        "verified": ok,
    });
    Ok((if ok { EXIT_OK } else { EXIT_VERIFICATION }, v))
}

fn verify_staircase(p: Option<u64>) -> Result<(i32, Value)> {
    let fields = match p {
        Some(p) => vec![FieldSpec::prime(p)?],
        None => vec![FieldSpec::Rationals, FieldSpec::Prime(7)],
    };
    let mut checks = 0;
    let mut failures = Vec::new();
    for &f in &fields {
        let alphas: Vec<FieldElem> = [-1, 0, 1, 2].iter().map(|&a| FieldElem::from_i64(f, a)).collect();
        for k in 1..=5 {
            for delta in all_patterns(k) {
                let s = TDSeq::standard(delta)?;
                checks += 1;
                let ok = staircase_cert(&s).map(|c| verify_cert(&s, &c, &alphas)).unwrap_or(false);
                if !ok {
                    failures.push(json!({ "field": io::field_to_json(f), "delta": Dir::pattern_string(s.delta()) }));
                }
            }
        }
    }
    let passed = failures.is_empty();
    let v = json!({
        "suite": "staircase",
        "fields": fields.iter().map(|&f| io::field_to_json(f)).collect::<Vec<_>>(),
        "checks": checks,
        "failures": failures,
        "passed": passed,
    });
    Ok((if passed { EXIT_OK } else { EXIT_VERIFICATION }, v))
}

fn verify_counterexamples(seed: u64, p: Option<u64>, samples: Option<usize>, guard: &GlGuard) -> Result<(i32, Value)> {
    let samples = samples.unwrap_or(10_000);
    let fp = FieldSpec::prime(p.unwrap_or(5))?;
    let q = FieldSpec::Rationals;
    let mut width_one = Vec::new();
    for (f, g) in [(fp, Some(guard)), (q, None)] {
        let r = verify_counterexample_width_one(f, samples, seed, g)?;
        width_one.push(json!({
            "field": io::field_to_json(r.field),
            "seed": r.seed,
            "samples": r.samples,
            "conjugatorsChecked": r.conjugators_checked,
            "bruteOrbitsEqual": r.brute_orbits_equal,
            "passed": true,
        }));
    }
    let a: Vec<FieldElem> = (0..4).map(|x| FieldElem::from_i64(q, x)).collect();
    let r = verify_counterexample_sigma_zeta(&a, &FieldElem::one(q), &FieldElem::from_i64(q, 2), samples, seed)?;
    let sigma_zeta = json!({
        "field": io::field_to_json(r.field),
        "seed": r.seed,
        "samples": r.samples,
        "alpha": r.alpha.to_string(),
        "beta": r.beta.to_string(),
        "orbitsEqual": r.orbits_equal,
        "passed": true,
    });
    let v = json!({
        "suite": "counterexamples",
        "widthOne": width_one,
        "sigmaZeta": sigma_zeta,
        "passed": true,
    });
    Ok((EXIT_OK, v))
}

fn verify_oracle(seed: u64, p: u64, n: usize, samples: usize, guard: &GlGuard) -> Result<(i32, Value)> {
    let f = FieldSpec::prime(p)?;
    f.check_convention(n)?;
    guard.check(n, p)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut equal = 0;
    let mut disagreements = Vec::new();
    for k in 0..samples {
        let a = random_dn_pair(f, n, &mut rng, 1);
        let mut b = a.clone();
        if rng.gen_bool(0.5) {
            let (i, j) = (rng.gen_range(0..n), rng.gen_range(0..n));
            b.a2.set(i, j, FieldElem::random(f, &mut rng, 1));
        }
        let b = b.conjugate(&Mat::random_invertible(f, n, &mut rng, 1))?;
        let c = orbit_eq_canonical(&a, &b)?;
        let r = orbit_eq_by_ranks(&a, &b)?.is_equal();
        let g = orbit_eq_brute(&a, &b, guard)?;
        if c != r || c != g {
            disagreements.push(json!({ "sample": k, "canonical": c, "rank": r, "brute": g }));
        }
        equal += usize::from(c);
    }
    let passed = disagreements.is_empty();
    let v = json!({
        "suite": "oracle",
        "field": io::field_to_json(f),
        "n": n,
        "seed": seed,
        "samples": samples,
        "equalPairs": equal,
        "disagreements": disagreements,
        "passed": passed,
    });
    Ok((if passed { EXIT_OK } else { EXIT_VERIFICATION }, v))
}

fn probes(p: &MatrixPair) -> Result<(i32, Value)> {
    let set = RankProbeSet::build(p)?;
    let n = p.n();
    let entry = |pr: &InvariantProbe| {
        let mut v = io::probe_to_json(pr);
        v.as_object_mut()
            .expect("object")
            .insert("bound".into(), json!(InvariantProbe::degree_bound(pr.kind(), n)));
        v
    };
    let v = json!({
        "canonical": io::canon_to_json(set.canon()),
        "probes": set.probes().into_iter().map(entry).collect::<Vec<_>>(),
    });
    Ok((EXIT_OK, v))
}

/// Indented `key: value` rendering of a JSON value.
pub fn render_text(v: &Value) -> String {
    let mut s = String::new();
    render_into(v, 0, &mut s);
    s
}

fn scalar_text(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("-".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        Value::Array(a) if a.is_empty() => Some("[]".into()),
        Value::Array(a) if a.iter().all(|x| !x.is_object() && !x.is_array()) => {
            Some(a.iter().filter_map(scalar_text).collect::<Vec<_>>().join(" "))
        }
        Value::Array(a) if a.iter().all(|x| x.as_array().is_some_and(|r| r.iter().all(|y| !y.is_object() && !y.is_array()))) => {
            Some(
                a.iter()
                    .map(|r| format!("[{}]", scalar_text(r).unwrap_or_default()))
                    .collect::<Vec<_>>()
                    .join(" "),
            )
        }
        _ => None,
    }
}

fn render_into(v: &Value, depth: usize, s: &mut String) {
    let pad = "  ".repeat(depth);
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                match scalar_text(x) {
                    Some(t) => s.push_str(&format!("{pad}{k}: {t}\n")),
                    None => {
                        s.push_str(&format!("{pad}{k}:\n"));
                        render_into(x, depth + 1, s);
                    }
                }
            }
        }
        Value::Array(a) => {
            for (i, x) in a.iter().enumerate() {
                match scalar_text(x) {
                    Some(t) => s.push_str(&format!("{pad}- {t}\n")),
                    None => {
                        s.push_str(&format!("{pad}[{}]\n", i + 1));
                        render_into(x, depth + 1, s);
                    }
                }
            }
        }
        other => s.push_str(&format!("{pad}{}\n", scalar_text(other).unwrap_or_default())),
    }
}
