use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use rdual::frames::FamilyFile;
use rdual::gabor::{self, ExploreConfig, GaborLattice};
use rdual::numerics::{CVector, Tolerance, C64};
use rdual::rduality::{self, SCHEMA_VERSION};
use rdual::{fixtures, sampling, Error, VectorFamily};

#[derive(Parser)]
#[command(name = "rdual", version, about = "Weak R-duals of finite frames")]
struct Cli {
    /// Relative tolerance for rank and residual decisions.
    #[arg(long, global = true, default_value_t = 1e-9)]
    tol: f64,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Number of explorer trials.
    #[arg(long, global = true, default_value_t = 32)]
    trials: usize,
    #[arg(long, global = true, conflicts_with = "table")]
    json: bool,
    #[arg(long, global = true)]
    table: bool,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Frame, Riesz and Parseval diagnostics of a family file.
    Analyze { fixture: PathBuf },
    /// Weak R-dual certificates and constructions.
    #[command(subcommand)]
    Wrd(WrdCommand),
    /// Recompute a worked example and check its stated properties.
    Repro {
        #[arg(value_parser = fixtures::IDS)]
        id: String,
    },
    /// Gabor systems on Z_N.
    #[command(subcommand)]
    Gabor(GaborCommand),
}

#[derive(Args)]
struct Fu {
    #[arg(long)]
    f: PathBuf,
    #[arg(long)]
    u: PathBuf,
}

#[derive(Subcommand)]
enum WrdCommand {
    /// Build w from f, u, v and certify it.
    Build {
        #[command(flatten)]
        fu: Fu,
        #[arg(long)]
        v: PathBuf,
    },
    /// Certify a given w against the definition.
    Check {
        #[command(flatten)]
        fu: Fu,
        #[arg(long)]
        v: PathBuf,
        #[arg(long)]
        w: PathBuf,
    },
    /// Certify a given w through the y-sequence.
    Characterize {
        #[command(flatten)]
        fu: Fu,
        #[arg(long)]
        v: PathBuf,
        #[arg(long)]
        w: PathBuf,
    },
    /// Construct a Parseval v for w.
    ConstructV {
        #[command(flatten)]
        fu: Fu,
        #[arg(long)]
        w: PathBuf,
        #[arg(long, value_enum, default_value_t = Method::Parseval)]
        method: Method,
    },
    /// Replace v by an orthonormal basis.
    Promote {
        #[command(flatten)]
        fu: Fu,
        #[arg(long)]
        w: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    /// Parseval but not an orthonormal basis.
    Parseval,
    Onb,
}

#[derive(Args)]
struct LatticeArgs {
    #[arg(long = "N")]
    n: usize,
    #[arg(long)]
    a: usize,
    #[arg(long)]
    b: usize,
    /// `delta`, `random` (drawn from --seed) or a JSON file of `[re, im]` pairs.
    #[arg(long, default_value = "delta")]
    window: String,
    /// Scale the window to unit norm.
    #[arg(long)]
    normalize: bool,
}

#[derive(Subcommand)]
enum GaborCommand {
    /// Compare frame bounds of the system with Riesz bounds of its adjoint.
    Duality {
        #[command(flatten)]
        lattice: LatticeArgs,
    },
    /// Weak R-dual of a tight system built from its padded adjoint.
    TightWrd {
        #[command(flatten)]
        lattice: LatticeArgs,
        /// Replace the window by its canonical tight window first.
        #[arg(long)]
        tighten: bool,
    },
    /// Search non-tight redundant systems for weak R-dual witnesses.
    Explore {
        /// Dimensions: `4..8` (inclusive), `4,6,8` or a single value.
        #[arg(long = "N", default_value = "4,6,8,12,16")]
        n: String,
        /// Skip lattices with more members than this.
        #[arg(long, default_value_t = 64)]
        max_members: usize,
    },
}

/// A report plus whether the asserted property holds.
struct Outcome {
    report: Value,
    pass: bool,
}

impl Outcome {
    fn new(report: impl Serialize, pass: bool) -> Self {
        Self {
            report: serde_json::to_value(report).expect("report serializes"),
            pass,
        }
    }
}

fn load(path: &Path) -> rdual::Result<VectorFamily> {
    let text = fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    VectorFamily::from_json(&text).map_err(|e| match e {
        Error::Parse(m) => Error::Parse(format!("{}: {m}", path.display())),
        other => other,
    })
}

fn load_fu(fu: &Fu) -> rdual::Result<(VectorFamily, VectorFamily)> {
    Ok((load(&fu.f)?, load(&fu.u)?))
}

fn window(args: &LatticeArgs, seed: u64) -> rdual::Result<CVector> {
    let n = args.n;
    let mut g = match args.window.as_str() {
        "delta" => CVector::from_fn(n, |t, _| C64::from(if t == 0 { 1.0 } else { 0.0 })),
        "random" => {
            let mut rng = sampling::trial_rng(seed, 0);
            CVector::from_fn(n, |_, _| sampling::gaussian(&mut rng))
        }
        path => {
            let text = fs::read_to_string(path).map_err(|e| Error::Parse(format!("{path}: {e}")))?;
            let pairs: Vec<[f64; 2]> =
                serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{path}: {e}")))?;
            CVector::from_iterator(pairs.len(), pairs.iter().map(|&[re, im]| C64::new(re, im)))
        }
    };
    if args.normalize {
        let norm = g.norm();
        if norm == 0.0 {
            return Err(Error::ZeroWindow);
        }
        g /= C64::from(norm);
    }
    Ok(g)
}

fn parse_dims(text: &str) -> rdual::Result<Vec<usize>> {
    let bad = || Error::Parse(format!("bad dimension list {text:?}"));
    if let Some((lo, hi)) = text.split_once("..") {
        let lo: usize = lo.trim().parse().map_err(|_| bad())?;
        let hi: usize = hi.trim().parse().map_err(|_| bad())?;
        if lo > hi {
            return Err(bad());
        }
        return Ok((lo..=hi).collect());
    }
    text.split(',').map(|s| s.trim().parse().map_err(|_| bad())).collect()
}

fn run(cli: &Cli) -> rdual::Result<Outcome> {
    let tol = Tolerance::relative(cli.tol);
    match &cli.command {
        Command::Analyze { fixture } => {
            let fam = load(fixture)?;
            let a = fam.analyze(&tol)?;
            Ok(Outcome::new(
                json!({ "schema_version": SCHEMA_VERSION, "label": fam.label(), "analysis": a }),
                true,
            ))
        }
        Command::Wrd(cmd) => run_wrd(cmd, &tol),
        Command::Repro { id } => {
            let r = fixtures::repro(id, &tol)?;
            let pass = r.pass;
            Ok(Outcome::new(r, pass))
        }
        Command::Gabor(cmd) => run_gabor(cmd, cli, &tol),
    }
}

fn certificate_outcome(cert: rduality::WeakRDualCertificate, extra: Option<(&str, Value)>) -> Outcome {
    let pass = cert.verdict.is_weak_r_dual();
    let mut report = json!({ "schema_version": SCHEMA_VERSION, "certificate": cert });
    if let Some((key, value)) = extra {
        report[key] = value;
    }
    Outcome { report, pass }
}

fn family_value(fam: &VectorFamily) -> Value {
    serde_json::to_value::<FamilyFile>(fam.to_file()).expect("family serializes")
}

fn run_wrd(cmd: &WrdCommand, tol: &Tolerance) -> rdual::Result<Outcome> {
    match cmd {
        WrdCommand::Build { fu, v } => {
            let (f, u) = load_fu(fu)?;
            let r = rduality::weak_r_dual(&f, &u, &load(v)?, tol)?;
            Ok(certificate_outcome(r.certificate, Some(("w", family_value(&r.w)))))
        }
        WrdCommand::Check { fu, v, w } => {
            let (f, u) = load_fu(fu)?;
            let cert = rduality::check(&load(w)?, &f, &u, &load(v)?, tol)?;
            Ok(certificate_outcome(cert, None))
        }
        WrdCommand::Characterize { fu, v, w } => {
            let (f, u) = load_fu(fu)?;
            let cert = rduality::characterize(&load(w)?, &f, &u, &load(v)?, tol)?;
            Ok(certificate_outcome(cert, None))
        }
        WrdCommand::ConstructV { fu, w, method } => {
            let (f, u) = load_fu(fu)?;
            let w = load(w)?;
            let v = match method {
                Method::Parseval => rduality::construct_parseval_v(&w, &f, &u, tol)?,
                Method::Onb => rduality::construct_onb_v(&w, &f, &u, tol)?,
            };
            let cert = rduality::characterize(&w, &f, &u, &v, tol)?;
            Ok(certificate_outcome(cert, Some(("v", family_value(&v)))))
        }
        WrdCommand::Promote { fu, w } => {
            let (f, u) = load_fu(fu)?;
            let p = gabor::promote_to_r_dual(&load(w)?, &f, &u, tol)?;
            let pass = p.is_r_dual;
            let report = json!({
                "schema_version": SCHEMA_VERSION,
                "is_r_dual": p.is_r_dual,
                "certificate": p.certificate,
                "v": family_value(&p.v),
            });
            Ok(Outcome { report, pass })
        }
    }
}

fn run_gabor(cmd: &GaborCommand, cli: &Cli, tol: &Tolerance) -> rdual::Result<Outcome> {
    match cmd {
        GaborCommand::Duality { lattice } => {
            let lat = GaborLattice::new(lattice.n, lattice.a, lattice.b)?;
            let sys = gabor::gabor_system(lat, &window(lattice, cli.seed)?)?;
            let r = gabor::duality_check(&sys, tol)?;
            let pass = r.holds;
            Ok(Outcome::new(r, pass))
        }
        GaborCommand::TightWrd { lattice, tighten } => {
            let lat = GaborLattice::new(lattice.n, lattice.a, lattice.b)?;
            let mut g = window(lattice, cli.seed)?;
            if *tighten {
                g = gabor::canonical_tight_window(lat, &g, tol)?;
            }
            let sys = gabor::gabor_system(lat, &g)?;
            let r = gabor::tight_gabor_weak_r_dual(&sys, None, tol)?;
            let pass = r.certificate.verdict.is_weak_r_dual();
            Ok(Outcome::new(r, pass))
        }
        GaborCommand::Explore { n, max_members } => {
            let cfg = ExploreConfig {
                dims: parse_dims(n)?,
                trials: cli.trials,
                seed: cli.seed,
                max_members: *max_members,
                tol: *tol,
            };
            let r = gabor::open_problem_explore(&cfg)?;
            Ok(Outcome::new(r, true))
        }
    }
}

/// `path<TAB>value` lines, one per leaf; numeric arrays on one line.
fn table(value: &Value) -> String {
    fn walk(prefix: &str, v: &Value, out: &mut String) {
        match v {
            Value::Object(map) => {
                for (k, x) in map {
                    let p = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                    walk(&p, x, out);
                }
            }
            Value::Array(xs) if xs.iter().all(|x| !x.is_object() && !x.is_array()) => {
                let items: Vec<String> = xs.iter().map(leaf).collect();
                out.push_str(&format!("{prefix}\t[{}]\n", items.join(", ")));
            }
            Value::Array(xs) => {
                for (i, x) in xs.iter().enumerate() {
                    walk(&format!("{prefix}[{i}]"), x, out);
                }
            }
            _ => out.push_str(&format!("{prefix}\t{}\n", leaf(v))),
        }
    }
    fn leaf(v: &Value) -> String {
        match v {
            Value::String(s) => s.clone(),
            other => other.to_string(),
        }
    }
    let mut out = String::new();
    walk("", value, &mut out);
    out
}

fn render(cli: &Cli, value: &Value) -> String {
    if cli.table {
        table(value)
    } else {
        let mut s = serde_json::to_string_pretty(value).expect("report serializes");
        s.push('\n');
        s
    }
}

fn emit(cli: &Cli, text: &str) -> std::io::Result<()> {
    match &cli.out {
        Some(path) => fs::write(path, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (value, code) = match run(&cli) {
        Ok(o) => (o.report, if o.pass { 0 } else { 1 }),
        Err(e) => (
            json!({
                "schema_version": SCHEMA_VERSION,
                "error": { "kind": e.kind(), "message": e.to_string() },
            }),
            2,
        ),
    };
    if let Err(e) = emit(&cli, &render(&cli, &value)) {
        eprintln!("rdual: cannot write report: {e}");
        return ExitCode::from(2);
    }
    ExitCode::from(code)
}
