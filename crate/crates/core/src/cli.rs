//! Batch command-line front end. [`run`] parses arguments, executes one
//! command and returns the exit code with everything meant for stdout and
//! stderr, so the binary is a thin wrapper and tests can call it in-process.

use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::christol::ore::integer_part;
use crate::christol::{christol_forward_capped, newton_expand, ore_annihilator, AlgebraicSeriesRep};
use crate::coeff_fields::Field;
use crate::dfao_engine::{digit_alphabet, Dfao, WellOrdered};
use crate::error::{Error, Result};
use crate::hahn_solver::{additive_solve, AdditivePoly};
use crate::semilinear::realize::minimal_integer;
use crate::semilinear::STATE_CAP;
use crate::series_core::{add, coeff_dfao, hadamard, mul_fq_capped, support_dfao, truncate, QuasiAutomaticSeries, Q};
use crate::twist_recurrence::{build_counterexample, refute_counterexample};
use crate::zero_sets::{algebraic_zero_dfao, binomial_gap_zero_set, integer_summary, lrs_zero_dfao, LinearRecurrence};

#[derive(Parser, Debug)]
#[command(name = "autoseries", version, about = "Exact automatic series in characteristic p")]
struct Cli {
    /// Coefficient field as p or p^e.
    #[arg(long, global = true, default_value = "2")]
    field: String,
    /// Comma-separated modulus coefficients (constant term first) overriding the default.
    #[arg(long, global = true)]
    modulus: Option<String>,
    /// Seed for every randomized choice.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// State cap for automaton constructions.
    #[arg(long, global = true, default_value_t = STATE_CAP)]
    cap: usize,
    /// Write the main JSON result here instead of stdout.
    #[arg(long, global = true)]
    json_out: Option<PathBuf>,
    /// Also write the relevant automaton in DOT format.
    #[arg(long, global = true)]
    dot_out: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Debug)]
struct Branch {
    /// Equation in t and y, e.g. "y^2 + y + t".
    equation: String,
    /// Initial coefficients x0,x1,… isolating the root.
    #[arg(long, default_value = "0")]
    branch: String,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ZeroKind {
    Lrs,
    Fibonacci,
    Series,
    BinomialGap,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Coefficients of an isolated root, one "index coefficient" per line.
    Expand {
        #[command(flatten)]
        root: Branch,
        #[arg(short, long, default_value_t = 16)]
        n: usize,
    },
    /// Automatic series of an algebraic root.
    Christol {
        #[command(flatten)]
        root: Branch,
    },
    /// Ore relation Σ Q_j y^{p^j} = 0 for a series file.
    Annihilate { series: PathBuf },
    Add { a: PathBuf, b: PathBuf },
    Hadamard { a: PathBuf, b: PathBuf },
    Mul { a: PathBuf, b: PathBuf },
    Truncate {
        series: PathBuf,
        /// Keep exponents strictly below this rational.
        #[arg(long)]
        at: String,
    },
    /// y^p − y = x, from a series file or the monomial c·t^e.
    SolveAs {
        series: Option<PathBuf>,
        #[arg(long, allow_hyphen_values = true)]
        monomial: Option<String>,
        #[arg(long, default_value_t = 1)]
        coeff: u32,
        /// Branch constant in F_p.
        #[arg(long, default_value_t = 0)]
        branch: u32,
        /// The equation is certified below this exponent.
        #[arg(long, default_value = "8")]
        radius: String,
    },
    ZeroSet {
        #[arg(value_enum)]
        kind: ZeroKind,
        /// Recurrence coefficients c0,…,c_{d−1} of a_{n+d} = Σ c_i a_{n+i}.
        #[arg(long)]
        coeffs: Option<String>,
        #[arg(long)]
        init: Option<String>,
        #[arg(long)]
        series: Option<PathBuf>,
        #[arg(long, default_value_t = 1024)]
        bound: u64,
    },
    /// Relations and LRR refutations for the non-twist-recurrent example.
    Counterexample {
        #[arg(long, default_value_t = 2)]
        p: u32,
        #[arg(long, default_value_t = 4)]
        order: usize,
        #[arg(long, default_value_t = 6)]
        depth: u32,
    },
    /// CSV of dimension d and minimized state count S per series.
    BenchComplexity {
        series: Vec<PathBuf>,
        /// Random series added to the built-in set.
        #[arg(long, default_value_t = 3)]
        random: usize,
    },
    WellOrdered { series: PathBuf },
}

#[derive(Debug, Default)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

struct Ctx {
    field: Field,
    seed: u64,
    cap: usize,
    json_out: Option<PathBuf>,
    dot_out: Option<PathBuf>,
    stdout: String,
}

/// Writes through a sibling temporary file so readers never see partial output.
fn write_atomic(path: &Path, text: &str) -> Result<()> {
    let tmp = path.with_extension("tmp~");
    fs::write(&tmp, text).and_then(|_| fs::rename(&tmp, path)).map_err(|e| Error::user(format!("cannot write {}: {}", path.display(), e)))
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values serialize");
    s.push('\n');
    s
}

impl Ctx {
    fn emit_json(&mut self, v: &Value) -> Result<()> {
        match &self.json_out {
            Some(p) => write_atomic(p, &pretty(v)),
            None => {
                self.stdout.push_str(&pretty(v));
                Ok(())
            }
        }
    }
    fn emit_dot(&self, m: &Dfao) -> Result<()> {
        match &self.dot_out {
            Some(p) => write_atomic(p, &m.to_dot()),
            None => Ok(()),
        }
    }
}

fn parse_list(s: &str) -> Result<Vec<u32>> {
    s.split(',').filter(|x| !x.trim().is_empty()).map(|x| x.trim().parse().map_err(|_| Error::user(format!("not a nonnegative integer: {:?}", x)))).collect()
}

fn parse_q(s: &str) -> Result<Q> {
    Q::from_str(s.trim()).map_err(|_| Error::user(format!("not a rational number: {:?}", s)))
}

fn load_series(path: &Path) -> Result<QuasiAutomaticSeries> {
    let text = fs::read_to_string(path).map_err(|e| Error::user(format!("cannot read {}: {}", path.display(), e)))?;
    let v: Value = serde_json::from_str(&text).map_err(|e| Error::user(format!("{}: invalid JSON: {}", path.display(), e)))?;
    QuasiAutomaticSeries::from_json(v.get("series").unwrap_or(&v))
}

fn same_field(a: &QuasiAutomaticSeries, b: &QuasiAutomaticSeries) -> Result<()> {
    if a.field() != b.field() {
        return Err(Error::user("series are over different fields"));
    }
    Ok(())
}

fn rep(ctx: &Ctx, root: &Branch) -> Result<AlgebraicSeriesRep> {
    AlgebraicSeriesRep::parse(&root.equation, &ctx.field, parse_list(&root.branch)?)
}

fn series_json(x: &QuasiAutomaticSeries) -> Result<Value> {
    let m = coeff_dfao(x)?;
    Ok(json!({ "series": x.to_json(), "dim": x.dim(), "states": m.states }))
}

fn emit_series(ctx: &mut Ctx, x: &QuasiAutomaticSeries, extra: Value) -> Result<()> {
    let mut v = series_json(x)?;
    if let (Some(o), Value::Object(e)) = (v.as_object_mut(), extra) {
        o.extend(e);
    }
    ctx.emit_dot(&coeff_dfao(x)?)?;
    ctx.emit_json(&v)
}

struct BenchRow {
    name: String,
    q: u32,
    d_raw: usize,
    d: usize,
    row_states: usize,
    states: usize,
    bound_dim: usize,
}

fn q_pow(q: u32, d: usize) -> Option<u128> {
    (q as u128).checked_pow(d as u32)
}

fn bench_row(name: String, x: &QuasiAutomaticSeries, bound_dim: usize, cap: usize) -> Result<BenchRow> {
    let data = integer_part(x)?;
    let d_raw = data.dim();
    let min = minimal_integer(&data)?;
    let rows = min.integer_dfao(cap)?;
    let s = rows.minimize();
    Ok(BenchRow { name, q: x.field().q(), d_raw, d: min.dim(), row_states: rows.states, states: s.states, bound_dim })
}

fn random_integer_series(f: &Field, rng: &mut ChaCha8Rng) -> Result<QuasiAutomaticSeries> {
    let p = f.p();
    let n = rng.gen_range(2..=4usize);
    let delta = (0..n).map(|_| (0..p).map(|_| rng.gen_range(0..n as u32)).collect()).collect();
    let mut outputs: Vec<u32> = (0..n).map(|_| rng.gen_range(0..f.q())).collect();
    outputs[0] = 0;
    let m = Dfao::new(p, digit_alphabet(p, false), delta, 0, outputs)?;
    QuasiAutomaticSeries::from_integer_dfao(&m, f)
}

fn bench(ctx: &mut Ctx, files: &[PathBuf], random: usize) -> Result<()> {
    let mut set: Vec<(String, QuasiAutomaticSeries)> = Vec::new();
    let builtin: [(&str, u32, u32, &str, u32); 5] = [
        ("sum_t_2n", 2, 1, "y^2 + y + t", 0),
        ("inverse_1_plus_t", 2, 1, "(1+t)*y + 1", 1),
        ("cubic_f2", 2, 1, "y^3 + y + t", 0),
        ("as_f3", 3, 1, "y^3 - y - t", 0),
        ("as_f4_gt", 2, 2, "y^2 + y + g t", 0),
    ];
    for (name, p, e, eq, x0) in builtin {
        let f = Field::default_for(p, e)?;
        let r = AlgebraicSeriesRep::parse(eq, &f, vec![x0])?;
        set.push((name.to_string(), christol_forward_capped(&r, 512)?.series));
    }
    let f2 = Field::default_for(2, 1)?;
    set.push(("geometric".into(), QuasiAutomaticSeries::geometric(&f2)));
    let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed);
    for i in 0..random {
        set.push((format!("random_{}", i), random_integer_series(&f2, &mut rng)?));
    }
    for path in files {
        set.push((path.display().to_string(), load_series(path)?));
    }
    let mut rows = Vec::new();
    for (name, x) in &set {
        let r = bench_row(name.clone(), x, 0, ctx.cap)?;
        let d = r.d;
        rows.push(BenchRow { bound_dim: d, ..r });
    }
    // Hadamard squares and products of neighbours over a common field
    let base = rows.len();
    for i in 0..set.len() {
        for j in i..set.len().min(i + 2) {
            let (na, a) = &set[i];
            let (nb, b) = &set[j];
            if a.field() != b.field() {
                continue;
            }
            let h = hadamard(a, b)?;
            let bound_dim = rows[i].d * rows[j].d;
            rows.push(bench_row(format!("hadamard({};{})", na, nb), &h, bound_dim, ctx.cap)?);
        }
    }
    let mut csv = String::from("name,q,d_raw,d,row_states,S,bound_exponent,q_pow_bound,ok\n");
    let mut bad = Vec::new();
    for (k, r) in rows.iter().enumerate() {
        let bound = q_pow(r.q, r.bound_dim);
        let ok = r.states <= r.row_states && bound.is_none_or(|b| (r.row_states as u128) <= b) && (k < base || r.d <= r.bound_dim);
        if !ok {
            bad.push(r.name.clone());
        }
        csv.push_str(&format!(
            "{},{},{},{},{},{},{},{},{}\n",
            r.name,
            r.q,
            r.d_raw,
            r.d,
            r.row_states,
            r.states,
            r.bound_dim,
            bound.map_or("overflow".to_string(), |b| b.to_string()),
            ok
        ));
    }
    match &ctx.json_out {
        Some(p) => write_atomic(p, &csv)?,
        None => ctx.stdout.push_str(&csv),
    }
    if !bad.is_empty() {
        return Err(Error::verification(format!("state bound violated for {}", bad.join(", "))));
    }
    Ok(())
}

fn zero_set(ctx: &mut Ctx, kind: ZeroKind, coeffs: Option<String>, init: Option<String>, series: Option<PathBuf>, bound: u64) -> Result<()> {
    let f = ctx.field.clone();
    let p = f.p();
    let v = match kind {
        ZeroKind::Lrs | ZeroKind::Fibonacci => {
            let (c, i) = match kind {
                ZeroKind::Fibonacci => (vec![1, 1], vec![0, 1]),
                _ => (
                    parse_list(coeffs.as_deref().ok_or_else(|| Error::user("lrs needs --coeffs"))?)?,
                    parse_list(init.as_deref().ok_or_else(|| Error::user("lrs needs --init"))?)?,
                ),
            };
            let rec = LinearRecurrence::from_recurrence(f, &c, &i)?;
            let m = lrs_zero_dfao(&rec, p, ctx.cap)?;
            ctx.emit_dot(&m)?;
            json!({ "kind": "lrs", "states": m.states, "dfao": m.to_json(), "summary": integer_summary(&m, bound, 16) })
        }
        ZeroKind::Series => {
            let x = load_series(series.as_deref().ok_or_else(|| Error::user("series zero set needs --series"))?)?;
            let m = algebraic_zero_dfao(&x)?;
            ctx.emit_dot(&m)?;
            let words: Vec<String> = m
                .accepted_words(6)
                .into_iter()
                .take(16)
                .map(|w| w.iter().map(|&a| if a == p as usize { ".".to_string() } else { a.to_string() }).collect())
                .collect();
            json!({ "kind": "series", "states": m.states, "dfao": m.to_json(), "sample_members": words })
        }
        ZeroKind::BinomialGap => {
            let r = binomial_gap_zero_set(p, bound)?;
            ctx.emit_dot(&r.dfao)?;
            r.to_json()
        }
    };
    ctx.emit_json(&v)
}

fn execute(ctx: &mut Ctx, cmd: Cmd) -> Result<()> {
    match cmd {
        Cmd::Expand { root, n } => {
            let coeffs = newton_expand(&rep(ctx, &root)?, n)?;
            let mut s = String::new();
            for (i, c) in coeffs.iter().enumerate() {
                s.push_str(&format!("{} {}\n", i, ctx.field.fmt_elem(*c)));
            }
            match &ctx.json_out {
                Some(p) => write_atomic(p, &pretty(&json!({ "coefficients": coeffs })))?,
                None => ctx.stdout.push_str(&s),
            }
            Ok(())
        }
        Cmd::Christol { root } => {
            let out = christol_forward_capped(&rep(ctx, &root)?, ctx.cap.min(4096))?;
            emit_series(ctx, &out.series, json!({ "twists": out.twists }))
        }
        Cmd::Annihilate { series } => {
            let x = load_series(&series)?;
            let r = ore_annihilator(&x)?;
            let nums: Vec<Vec<u32>> = r.numerators.iter().map(|q| (0..=q.deg().unwrap_or(0)).map(|i| q.coeff(i)).collect()).collect();
            ctx.emit_json(&json!({ "degree": r.degree(), "relation": r.to_string(), "numerators": nums, "precision": r.precision }))
        }
        Cmd::Add { a, b } => {
            let (x, y) = (load_series(&a)?, load_series(&b)?);
            same_field(&x, &y)?;
            emit_series(ctx, &add(&x, &y)?, json!({}))
        }
        Cmd::Hadamard { a, b } => {
            let (x, y) = (load_series(&a)?, load_series(&b)?);
            same_field(&x, &y)?;
            emit_series(ctx, &hadamard(&x, &y)?, json!({}))
        }
        Cmd::Mul { a, b } => {
            let (x, y) = (load_series(&a)?, load_series(&b)?);
            same_field(&x, &y)?;
            let cap = ctx.cap;
            emit_series(ctx, &mul_fq_capped(&x, &y, cap)?, json!({}))
        }
        Cmd::Truncate { series, at } => {
            let x = load_series(&series)?;
            emit_series(ctx, &truncate(&x, &parse_q(&at)?)?, json!({}))
        }
        Cmd::SolveAs { series, monomial, coeff, branch, radius } => {
            let x = match (series, monomial) {
                (Some(path), None) => load_series(&path)?,
                (None, Some(e)) => QuasiAutomaticSeries::monomial(&ctx.field, coeff, parse_q(&e)?)?,
                _ => return Err(Error::user("give exactly one of a series file or --monomial")),
            };
            let f = x.field().clone();
            let poly = AdditivePoly::from_split(&f, 1, &[1])?;
            let t = additive_solve(&poly, &x, &[branch], &parse_q(&radius)?)?;
            emit_series(ctx, &t.y, json!({ "radius": t.radius.map(|r| r.to_string()) }))
        }
        Cmd::ZeroSet { kind, coeffs, init, series, bound } => zero_set(ctx, kind, coeffs, init, series, bound),
        Cmd::Counterexample { p, order, depth } => {
            let cx = build_counterexample(p, depth)?;
            let mut refs = Vec::new();
            for k in 1..=order {
                let r = refute_counterexample(&cx, k)?;
                if r.nullspace_dim != 0 {
                    return Err(Error::verification(format!("order {} admits a joint LRR", k)));
                }
                refs.push(r.to_json());
            }
            let mut v = cx.to_json();
            v["refutations"] = Value::Array(refs);
            ctx.emit_json(&v)
        }
        Cmd::BenchComplexity { series, random } => bench(ctx, &series, random),
        Cmd::WellOrdered { series } => {
            let x = load_series(&series)?;
            let m = support_dfao(&x)?;
            ctx.emit_dot(&m)?;
            let v = match m.well_ordered_check()? {
                WellOrdered::Certified => json!({ "verdict": "certified" }),
                WellOrdered::Inconclusive => json!({ "verdict": "inconclusive" }),
                WellOrdered::NotWellOrdered { prefix, cycle, tail } => json!({
                    "verdict": "not_well_ordered",
                    "witness": { "prefix": prefix.to_string(), "cycle": cycle.to_string(), "tail": tail.to_string() },
                }),
            };
            ctx.emit_json(&v)
        }
    }
}

fn error_json(e: &Error) -> String {
    pretty(&json!({ "error": { "kind": e.kind(), "message": e.to_string(), "exit_code": e.exit_code() } }))
}

/// Parses `args` (program name first) and runs one command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand) {
                return Outcome { code: 0, stdout: e.to_string(), stderr: String::new() };
            }
            let err = Error::user(e.to_string().trim().to_string());
            return Outcome { code: 2, stdout: String::new(), stderr: error_json(&err) };
        }
    };
    let modulus = match cli.modulus.as_deref().map(parse_list).transpose() {
        Ok(m) => m,
        Err(e) => return Outcome { code: e.exit_code(), stdout: String::new(), stderr: error_json(&e) },
    };
    let field = match Field::from_tag(&cli.field, modulus) {
        Ok(f) => f,
        Err(e) => return Outcome { code: e.exit_code(), stdout: String::new(), stderr: error_json(&e) },
    };
    let mut ctx = Ctx { field, seed: cli.seed, cap: cli.cap, json_out: cli.json_out, dot_out: cli.dot_out, stdout: String::new() };
    match execute(&mut ctx, cli.cmd) {
        Ok(()) => Outcome { code: 0, stdout: ctx.stdout, stderr: String::new() },
        Err(e) => Outcome { code: e.exit_code(), stdout: ctx.stdout, stderr: error_json(&e) },
    }
}
