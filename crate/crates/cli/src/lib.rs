//! Command-line front end for `hornlab-core`: argument parsing, JSON file
//! formats and a self-test runner.
//!
//! [`run`] does all the work and returns the exit code with the text for
//! stdout and stderr, so the binary is a thin wrapper and tests can call it
//! directly.
//!
//! Exit codes: `0` success, `1` a verification check failed, `2` invalid
//! input or a violated precondition, `3` a solver ran out of budget or found
//! nothing.

pub mod format;
pub mod selftest;

use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use hornlab_core::horn::{analyze, analyze_all, horn_sides, saturation_split, HornReport};
use hornlab_core::inverse::{feasible, realize, JordanData};
use hornlab_core::lr::{horn_triples_with, lr_coefficient, lr_tableaux, SetTriple, TripleFilter};
use hornlab_core::module::{Submodule, TorsionModule};
use hornlab_core::snf::snf;
use hornlab_core::{Atom, Error, GfPoly, Integer, Partition};
use serde::Serialize;
use serde_json::Value;

use format::*;

#[derive(Debug, Parser)]
#[command(name = "hornlab", version, about = "Horn divisibilities for finite torsion modules over a PID")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Args)]
struct Common {
    /// Print JSON instead of text.
    #[arg(long)]
    json: bool,
    /// Seed for every randomized step.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Also write the JSON result to this file.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Smith normal form `U A V = D` of a matrix file.
    Snf {
        #[arg(long)]
        matrix: PathBuf,
        /// Ring of the entries: int, poly2, poly3, poly5 or poly7.
        #[arg(long, default_value = "int")]
        pid: String,
        #[command(flatten)]
        common: Common,
    },
    /// Littlewood-Richardson coefficient and tableaux.
    Lr {
        #[arg(long, alias = "lambda", value_parser = parse_partition)]
        lam: Partition,
        #[arg(long, value_parser = parse_partition)]
        mu: Partition,
        #[arg(long, value_parser = parse_partition)]
        nu: Partition,
        #[command(flatten)]
        common: Common,
    },
    /// Horn triples with intersection number one.
    HornTriples {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        r: usize,
        /// Keep every triple with a positive intersection number.
        #[arg(long)]
        positive: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Divisibility certificates for a module and submodule.
    Analyze {
        #[arg(long)]
        module: PathBuf,
        #[arg(long)]
        sub: PathBuf,
        /// A triple `I;J;K`, sets comma-separated.
        #[arg(long, conflicts_with = "all_triples")]
        triple: Option<String>,
        #[arg(long)]
        all_triples: bool,
        /// Restrict --all-triples to one `r`.
        #[arg(long)]
        r: Option<usize>,
        #[command(flatten)]
        common: Common,
    },
    /// The triple-intersection witness behind one certificate.
    Witness {
        #[arg(long)]
        module: PathBuf,
        #[arg(long)]
        sub: PathBuf,
        #[arg(long)]
        triple: String,
        #[command(flatten)]
        common: Common,
    },
    /// A module and submodule with prescribed invariants at one atom.
    Realize {
        #[arg(long, alias = "lambda", value_parser = parse_partition)]
        lam: Partition,
        #[arg(long, value_parser = parse_partition)]
        mu: Partition,
        #[arg(long, value_parser = parse_partition)]
        nu: Partition,
        /// Atom label: a prime, or the code of a monic irreducible polynomial.
        #[arg(long, default_value_t = 2)]
        atom: u64,
        #[arg(long, default_value = "int")]
        pid: String,
        #[command(flatten)]
        common: Common,
    },
    /// Small versions of the invariant suites.
    Selftest {
        #[command(flatten)]
        common: Common,
    },
}

fn parse_partition(s: &str) -> Result<Partition, String> {
    let parts: Vec<u32> = s
        .split(',')
        .map(str::trim)
        .filter(|x| !x.is_empty())
        .map(|x| x.parse::<u32>().map_err(|_| format!("bad part {x:?}")))
        .collect::<Result<_, _>>()?;
    Partition::new(parts).map_err(|e| e.to_string())
}

/// Exit code, stdout and stderr of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Self { code: 2, message: message.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::NotFound(_) | Error::BudgetExhausted(_) => 3,
            _ => 2,
        };
        Self { code, message: e.to_string() }
    }
}

impl From<FormatError> for Failure {
    fn from(e: FormatError) -> Self {
        Self::input(e.to_string())
    }
}

/// Text and JSON renderings of a result, with its exit code.
struct Rendered {
    code: i32,
    text: String,
    json: Value,
}

/// Runs one command line (`args[0]` is the program name).
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome { code, stdout: text, stderr: String::new() }
            } else {
                Outcome { code, stdout: String::new(), stderr: text }
            };
        }
    };
    let common = match &cli.command {
        Command::Snf { common, .. }
        | Command::Lr { common, .. }
        | Command::HornTriples { common, .. }
        | Command::Analyze { common, .. }
        | Command::Witness { common, .. }
        | Command::Realize { common, .. }
        | Command::Selftest { common } => common.clone(),
    };
    match dispatch(&cli.command, &common).and_then(|r| emit(r, &common)) {
        Ok(out) => out,
        Err(f) => Outcome { code: f.code, stdout: String::new(), stderr: format!("error: {}\n", f.message) },
    }
}

fn emit(r: Rendered, common: &Common) -> Result<Outcome, Failure> {
    let pretty = serde_json::to_string_pretty(&r.json).expect("JSON values serialize") + "\n";
    if let Some(path) = &common.out {
        fs::write(path, &pretty).map_err(|e| Failure::input(format!("cannot write {}: {e}", path.display())))?;
    }
    let stdout = if common.json { pretty } else { r.text };
    Ok(Outcome { code: r.code, stdout, stderr: String::new() })
}

fn to_value<T: Serialize>(t: &T) -> Value {
    serde_json::to_value(t).expect("output types serialize")
}

macro_rules! with_pid {
    ($pid:expr, $f:ident($($arg:expr),*)) => {
        match $pid {
            "int" => $f::<Integer>($($arg),*),
            "poly2" => $f::<GfPoly<2>>($($arg),*),
            "poly3" => $f::<GfPoly<3>>($($arg),*),
            "poly5" => $f::<GfPoly<5>>($($arg),*),
            "poly7" => $f::<GfPoly<7>>($($arg),*),
            other => Err(Failure::input(format!("unknown pid {other:?}; expected int, poly2, poly3, poly5 or poly7"))),
        }
    };
}

fn dispatch(cmd: &Command, common: &Common) -> Result<Rendered, Failure> {
    match cmd {
        Command::Snf { matrix, pid, .. } => {
            let text = read(matrix)?;
            with_pid!(pid.as_str(), snf_cmd(&text))
        }
        Command::Lr { lam, mu, nu, .. } => Ok(lr_cmd(lam, mu, nu)),
        Command::HornTriples { n, r, positive, .. } => horn_triples_cmd(*n, *r, *positive),
        Command::Analyze { module, sub, triple, all_triples, r, .. } => {
            let input = Input::load(module, sub)?;
            let which = match (triple, all_triples) {
                (Some(t), _) => Which::One(t.clone()),
                (None, true) => Which::All(*r),
                (None, false) => return Err(Failure::input("give --triple or --all-triples")),
            };
            with_pid!(input.pid.as_str(), analyze_cmd(&input, &which, common.seed))
        }
        Command::Witness { module, sub, triple, .. } => {
            let input = Input::load(module, sub)?;
            with_pid!(input.pid.as_str(), witness_cmd(&input, triple, common.seed))
        }
        Command::Realize { lam, mu, nu, atom, pid, .. } => {
            with_pid!(pid.as_str(), realize_cmd(Atom(*atom), lam, mu, nu))
        }
        Command::Selftest { .. } => Ok(selftest::run(common.seed)),
    }
}

fn read(path: &PathBuf) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::input(format!("cannot read {}: {e}", path.display())))
}

fn snf_cmd<R: JsonScalar>(text: &str) -> Result<Rendered, Failure> {
    let m: MatrixJson = parse(text)?;
    let a = m.to_core::<R>("")?;
    let r = snf(&a);
    let out = SnfJson {
        pid: R::tag(),
        u: MatrixJson::from_core(&r.u),
        v: MatrixJson::from_core(&r.v),
        d: MatrixJson::from_core(&r.d),
        factors: r.factors.iter().map(R::to_json).collect(),
    };
    let factors: Vec<String> = r.factors.iter().map(ToString::to_string).collect();
    let text = format!("factors: {}\nU =\n{}\nV =\n{}\nD =\n{}\n", factors.join(", "), r.u, r.v, r.d);
    Ok(Rendered { code: 0, text, json: to_value(&out) })
}

fn lr_cmd(lam: &Partition, mu: &Partition, nu: &Partition) -> Rendered {
    let c = lr_coefficient(lam, mu, nu);
    let tableaux = lr_tableaux(lam, mu, nu);
    let out = LrJson {
        lambda: partition_json(lam),
        mu: partition_json(mu),
        nu: partition_json(nu),
        coefficient: c,
        tableaux: tableaux.iter().map(|t| t.rows.clone()).collect(),
    };
    let mut text = format!("c^{lam}_{mu},{nu} = {c}\n");
    for t in &tableaux {
        let rows: Vec<String> = t.rows.iter().map(|r| format!("{r:?}")).collect();
        let _ = writeln!(text, "  {}", rows.join(" "));
    }
    Rendered { code: 0, text, json: to_value(&out) }
}

fn horn_triples_cmd(n: usize, r: usize, positive: bool) -> Result<Rendered, Failure> {
    let filter = if positive { TripleFilter::Positive } else { TripleFilter::Unit };
    let ts = horn_triples_with(n, r, filter)?;
    let out = TriplesJson { n, r, triples: triple_strings(&ts) };
    let mut text = String::new();
    for t in &out.triples {
        let _ = writeln!(text, "{t}");
    }
    Ok(Rendered { code: 0, text, json: to_value(&out) })
}

/// Module and submodule files, possibly one `realize` output used twice.
struct Input {
    pid: String,
    module: Value,
    module_path: String,
    sub: Value,
    sub_path: String,
}

impl Input {
    fn load(module: &PathBuf, sub: &PathBuf) -> Result<Self, Failure> {
        let (module, module_path) = Self::part(&read(module)?, "module")?;
        let (sub, sub_path) = Self::part(&read(sub)?, "sub")?;
        let pid = match module.get("pid") {
            Some(Value::String(s)) => s.clone(),
            _ => return Err(Failure::input(format!("at {module_path}pid: missing or not a string"))),
        };
        Ok(Self { pid, module, module_path, sub, sub_path })
    }

    /// The object itself, or its `key` field when it is a pair file.
    fn part(text: &str, key: &str) -> Result<(Value, String), Failure> {
        let v: Value = parse(text)?;
        match v.get(key) {
            Some(inner) if v.get("module").is_some() && v.get("sub").is_some() => Ok((inner.clone(), format!("{key}."))),
            _ => Ok((v, String::new())),
        }
    }

    fn build<R: JsonScalar>(&self) -> Result<(TorsionModule<R>, Submodule<R>), Failure> {
        let mj: ModuleJson = from_value(&self.module, &self.module_path)?;
        let m = mj.to_core::<R>(self.module_path.trim_end_matches('.'))?;
        let sj: SubmoduleJson = from_value(&self.sub, &self.sub_path)?;
        let s = sj.to_core(&m, self.sub_path.trim_end_matches('.'))?;
        Ok((m, s))
    }
}

fn from_value<T: serde::de::DeserializeOwned>(v: &Value, prefix: &str) -> Result<T, Failure> {
    serde_path_to_error::deserialize(v).map_err(|e| {
        let path = e.path().to_string();
        let path = if path == "." { prefix.trim_end_matches('.').to_string() } else { format!("{prefix}{path}") };
        Failure::from(FormatError { path, message: e.into_inner().to_string() })
    })
}

enum Which {
    One(String),
    All(Option<usize>),
}

fn parse_triple(s: &str, rank: usize) -> Result<SetTriple, Failure> {
    let largest = s
        .split([';', ','])
        .filter_map(|x| x.trim().parse::<usize>().ok())
        .max()
        .unwrap_or(0);
    Ok(SetTriple::parse(rank.max(largest), s)?)
}

fn analyze_cmd<R: JsonScalar>(input: &Input, which: &Which, seed: u64) -> Result<Rendered, Failure> {
    let (m, s) = input.build::<R>()?;
    let reports: Vec<HornReport<R>> = match which {
        Which::One(t) => vec![analyze(&m, &s, &parse_triple(t, m.rank())?, seed)?],
        Which::All(r) => analyze_all(&m, &s, *r, seed)?,
    };
    let mut finished = Vec::new();
    for rep in reports {
        if rep.saturation && rep.special.is_some() {
            finished.push(saturation_split(&rep)?);
        } else {
            finished.push(rep);
        }
    }
    let json: Vec<ReportJson> = finished.iter().map(ReportJson::from_core).collect();
    let mut text = String::new();
    let mut code = 0;
    for rep in &finished {
        let verdict = if rep.passed() { "PASS" } else { "FAIL" };
        let how = match &rep.witness {
            Some(w) => format!("witness {} attempt {}", w.strategy.as_str(), w.attempt),
            None => "witness unavailable".into(),
        };
        let sat = if rep.saturation { ", saturated" } else { "" };
        let _ = writeln!(text, "{}: {verdict} ({how}{sat})", rep.triple);
        for (a, (l, r)) in horn_sides(&rep.lambda, &rep.mu, &rep.nu, &rep.triple) {
            let _ = writeln!(text, "  atom {a}: {l} <= {r}");
        }
        for c in &rep.checks {
            let _ = writeln!(text, "  [{}] {}: {}", if c.pass { "ok" } else { "FAIL" }, c.name, c.detail);
        }
        if !rep.passed() {
            code = 1;
        } else if rep.witness_unavailable() && code == 0 {
            code = 3;
        }
    }
    Ok(Rendered { code, text, json: to_value(&json) })
}

fn witness_cmd<R: JsonScalar>(input: &Input, triple: &str, seed: u64) -> Result<Rendered, Failure> {
    let (m, s) = input.build::<R>()?;
    let t = parse_triple(triple, m.rank())?;
    let rep = analyze(&m, &s, &t, seed)?;
    let json = ReportJson::from_core(&rep);
    let Some(w) = json.witness else {
        return Err(Failure { code: 3, message: format!("no witness found for {t} after reseeding") });
    };
    let mut text = format!("triple {}: strategy {}, seed {}, attempt {}{}\nQ =\n", w.triple, w.strategy, w.seed, w.attempt, if w.dual { ", via duality" } else { "" });
    for row in w.q.entries.chunks(w.q.cols.max(1)) {
        let cells: Vec<String> = row.iter().map(|v| v.to_string().trim_matches('"').to_string()).collect();
        let _ = writeln!(text, "  [{}]", cells.join(", "));
    }
    let code = if rep.passed() { 0 } else { 1 };
    Ok(Rendered { code, text, json: to_value(&w) })
}

fn realize_cmd<R: JsonScalar>(atom: Atom, lam: &Partition, mu: &Partition, nu: &Partition) -> Result<Rendered, Failure> {
    R::atom_element(atom)?;
    let d = JordanData::primary(atom, lam.clone(), mu.clone(), nu.clone());
    let verdict = feasible(&d);
    if !verdict.feasible {
        return Err(Failure::input(format!("infeasible data: {}", verdict.reasons.join("; "))));
    }
    let (m, s) = realize::<R>(&d)?;
    let out = PairJson {
        module: ModuleJson::from_core(&m),
        sub: SubmoduleJson::from_core(&s),
        lambda: per_atom_json(&m.partitions()),
        mu: per_atom_json(&s.partitions()),
        nu: per_atom_json(&s.quotient_partitions()),
    };
    let theta: Vec<String> = m.theta().iter().map(ToString::to_string).collect();
    let mut text = format!("module theta: {}\nsubmodule generators:\n", theta.join(", "));
    for g in s.generators() {
        let cells: Vec<String> = g.iter().map(ToString::to_string).collect();
        let _ = writeln!(text, "  ({})", cells.join(", "));
    }
    let _ = writeln!(text, "invariants at {atom}: submodule {mu}, quotient {nu}");
    Ok(Rendered { code: 0, text, json: to_value(&out) })
}
