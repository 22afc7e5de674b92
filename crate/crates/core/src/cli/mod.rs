//! Batch front end. Every command produces a [`VerificationReport`] tagged with the statement it checks.
//!
//! Exit codes: 0 when every check passes, 1 when a check fails or a computation gives up,
//! 2 for malformed arguments or input files.

mod commands;
mod suite;

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::lbcx::DEFAULT_E_CAP;

#[derive(Parser, Debug)]
#[command(name = "schober", version, about = "Exact verification of the hyperplane spherical functor, schober bookkeeping and the n = 2 CCC")]
pub struct Cli {
    /// Print the JSON report instead of markdown.
    #[arg(long, global = true)]
    pub json: bool,
    /// Directory for report.json, report.md and witness files.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Seed for sampled checks.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Cap on the Čech exponent floor.
    #[arg(long = "e-cap", global = true)]
    pub e_cap: Option<u32>,
    /// Run the acceptance battery instead of a single command.
    #[arg(long)]
    pub suite: Option<SuiteKind>,
    /// Dimension for `--suite`.
    #[arg(long)]
    pub n: Option<usize>,
    #[command(subcommand)]
    pub command: Option<Command>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SuiteKind {
    Full,
    Quick,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    #[command(subcommand)]
    Hyper(HyperCmd),
    #[command(subcommand)]
    Schober(SchoberCmd),
    /// Fan of P^{n−1}.
    Fan {
        #[arg(long)]
        n: usize,
    },
    #[command(subcommand)]
    Skeleton(SkeletonCmd),
    #[command(subcommand)]
    Cellccc(CellCmd),
    #[command(subcommand)]
    Cohp(CohpCmd),
    #[command(subcommand)]
    Lbcx(LbcxCmd),
}

#[derive(Subcommand, Debug)]
pub enum HyperCmd {
    /// SF1–SF4, twist identifications, triangle identities and the inverse property.
    SphericalCheck {
        #[arg(long)]
        n: usize,
        /// Coefficients of the section `s`, comma separated (default all ones).
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        coeffs: Option<Vec<String>>,
    },
    /// Monad versus `G ⊗ Cone(O(−1) → O)`.
    Monad {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        object: PathBuf,
    },
    /// Derived stalk at the coordinate point `e_α`.
    Stalk {
        #[arg(long)]
        alpha: usize,
        #[arg(long)]
        object: PathBuf,
        #[arg(long)]
        expect_acyclic: bool,
    },
}

#[derive(Subcommand, Debug)]
pub enum SchoberCmd {
    /// Perversity of a disk datum `(Φ, Ψ, p, q)`.
    Check {
        #[arg(long)]
        file: PathBuf,
    },
    /// Composes `A_τ` for the listed angles (in turns).
    Ledger {
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        taus: Vec<String>,
    },
    /// Ext table between two diagrams of 𝓜(r).
    DiagramHom {
        #[arg(long)]
        left: PathBuf,
        #[arg(long)]
        right: PathBuf,
    },
}

#[derive(Subcommand, Debug)]
pub enum SkeletonCmd {
    Classify {
        /// Point JSON `{"r": [...], "theta": [...]}` inline or as a file path.
        #[arg(long)]
        point: String,
        /// Admissible total angles in turns, comma separated.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, default_value = "0")]
        theta: Vec<String>,
    },
    VerifySection {
        #[arg(long)]
        n: usize,
        /// Angle in turns.
        #[arg(long, allow_hyphen_values = true)]
        tau: String,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
    },
}

#[derive(Subcommand, Debug)]
pub enum CellCmd {
    /// Ext grid of {unit, twist} against {O, O(−1)} on P¹, plus twist ⋆ twist against O(−2).
    Compare,
    /// Convolution of two cellular sheaves: `unit`, `twist`, `const`, `loc:λ` or a JSON file.
    Convolve {
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
    },
    /// Rank-one local systems against skyscrapers on the dual circle.
    Loc {
        #[arg(long, allow_hyphen_values = true)]
        lambda: String,
        /// Monodromies to compare against (default `2λ`).
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        other: Vec<String>,
    },
}

#[derive(Subcommand, Debug)]
pub enum CohpCmd {
    /// `h^i(P^m, O(d))` for `dmin ≤ d ≤ dmax`.
    Table {
        #[arg(long)]
        m: usize,
        #[arg(long, allow_hyphen_values = true)]
        dmin: i64,
        #[arg(long, allow_hyphen_values = true)]
        dmax: i64,
    },
}

#[derive(Subcommand, Debug)]
pub enum LbcxCmd {
    ExtTable {
        #[arg(long)]
        left: PathBuf,
        #[arg(long)]
        right: PathBuf,
    },
    IsZero {
        #[arg(long)]
        file: PathBuf,
    },
    Rgamma {
        #[arg(long)]
        file: PathBuf,
        /// Extra twist `O(j)` applied before taking global sections.
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        twist: i64,
    },
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    #[serde(default, skip_serializing_if = "Value::is_null")]
    pub detail: Value,
}

impl Check {
    pub fn new(name: impl Into<String>, pass: bool) -> Self {
        Check { name: name.into(), pass, detail: Value::Null }
    }

    pub fn with(name: impl Into<String>, pass: bool, detail: impl Serialize) -> Self {
        Check { name: name.into(), pass, detail: serde_json::to_value(detail).unwrap_or(Value::Null) }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct VerificationReport {
    pub command: String,
    /// Statement checked, e.g. `SF1-SF4`, `Thm-main-square`, `CCC-n2`.
    pub tag: String,
    /// SHA-256 of the normalized arguments and the contents of every input file.
    pub inputs_digest: String,
    pub pass: bool,
    pub checks: Vec<Check>,
    pub result: Value,
    /// Paths relative to `--out`.
    pub witnesses: Vec<String>,
    pub wall_clock_ms: u64,
}

impl VerificationReport {
    /// The report without its timing field; equal across reruns with equal inputs.
    pub fn deterministic_json(&self) -> String {
        let mut r = self.clone();
        r.wall_clock_ms = 0;
        serde_json::to_string_pretty(&r).expect("report serializes")
    }

    pub fn to_markdown(&self) -> String {
        let mut s = format!("# `{}`\n\n", self.command);
        s += &format!("- statement: {}\n", self.tag);
        s += &format!("- verdict: {}\n", if self.pass { "PASS" } else { "FAIL" });
        s += &format!("- inputs digest: `{}`\n", self.inputs_digest);
        s += &format!("- wall clock: {} ms\n", self.wall_clock_ms);
        if !self.checks.is_empty() {
            s += "\n| check | verdict |\n|---|---|\n";
            for c in &self.checks {
                s += &format!("| {} | {} |\n", c.name, if c.pass { "pass" } else { "FAIL" });
            }
        }
        if !self.witnesses.is_empty() {
            s += "\nwitnesses:\n";
            for w in &self.witnesses {
                s += &format!("- {w}\n");
            }
        }
        s += &format!("\n```json\n{}\n```\n", serde_json::to_string_pretty(&self.result).unwrap_or_default());
        s
    }
}

#[derive(Debug)]
pub enum CliError {
    /// Malformed arguments or input files.
    Input(String),
    /// A computation could not be completed.
    Failed(String),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Input(m) => write!(f, "input error: {m}"),
            CliError::Failed(m) => write!(f, "computation failed: {m}"),
        }
    }
}

pub(crate) fn input<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Input(e.to_string())
}

pub(crate) fn failed<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Failed(e.to_string())
}

pub(crate) struct Ctx {
    pub seed: u64,
    pub cap: u32,
    digest: Sha256,
}

impl Ctx {
    pub fn read_json<T: DeserializeOwned>(&mut self, path: &Path) -> Result<T, CliError> {
        let bytes = fs::read(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
        self.digest.update(&bytes);
        serde_json::from_slice(&bytes).map_err(|e| CliError::Input(format!("{}: schema: {e}", path.display())))
    }

    /// Inline JSON, or a path to a JSON file.
    pub fn json_arg<T: DeserializeOwned>(&mut self, s: &str) -> Result<T, CliError> {
        match serde_json::from_str(s) {
            Ok(v) => Ok(v),
            Err(_) if Path::new(s).exists() => self.read_json(Path::new(s)),
            Err(e) => Err(CliError::Input(format!("schema: {e}"))),
        }
    }
}

pub(crate) struct Body {
    pub tag: &'static str,
    pub checks: Vec<Check>,
    pub result: Value,
    /// `(relative path, content)`.
    pub witnesses: Vec<(String, Value)>,
}

impl Body {
    pub fn new(tag: &'static str, checks: Vec<Check>, result: impl Serialize) -> Self {
        Body { tag, checks, result: serde_json::to_value(result).expect("result serializes"), witnesses: vec![] }
    }
}

/// Outcome of one invocation.
#[derive(Debug)]
pub struct Outcome {
    pub code: i32,
    pub report: Option<VerificationReport>,
    /// Text printed to stdout (report or help).
    pub stdout: String,
    pub stderr: String,
}

fn command_name(cli: &Cli) -> String {
    let sub = match &cli.command {
        None => return format!("suite {}", if cli.suite == Some(SuiteKind::Quick) { "quick" } else { "full" }),
        Some(c) => c,
    };
    let s = match sub {
        Command::Hyper(HyperCmd::SphericalCheck { .. }) => "hyper spherical-check",
        Command::Hyper(HyperCmd::Monad { .. }) => "hyper monad",
        Command::Hyper(HyperCmd::Stalk { .. }) => "hyper stalk",
        Command::Schober(SchoberCmd::Check { .. }) => "schober check",
        Command::Schober(SchoberCmd::Ledger { .. }) => "schober ledger",
        Command::Schober(SchoberCmd::DiagramHom { .. }) => "schober diagram-hom",
        Command::Fan { .. } => "fan",
        Command::Skeleton(SkeletonCmd::Classify { .. }) => "skeleton classify",
        Command::Skeleton(SkeletonCmd::VerifySection { .. }) => "skeleton verify-section",
        Command::Cellccc(CellCmd::Compare) => "cellccc compare",
        Command::Cellccc(CellCmd::Convolve { .. }) => "cellccc convolve",
        Command::Cellccc(CellCmd::Loc { .. }) => "cellccc loc",
        Command::Cohp(CohpCmd::Table { .. }) => "cohp table",
        Command::Lbcx(LbcxCmd::ExtTable { .. }) => "lbcx ext-table",
        Command::Lbcx(LbcxCmd::IsZero { .. }) => "lbcx is-zero",
        Command::Lbcx(LbcxCmd::Rgamma { .. }) => "lbcx rgamma",
    };
    s.to_string()
}

/// Arguments that affect results: everything except `--json` and `--out`.
fn normalized_args(args: &[String]) -> Vec<String> {
    let mut out = Vec::new();
    let mut skip = false;
    for a in args.iter().skip(1) {
        if skip {
            skip = false;
            continue;
        }
        if a == "--json" || a.starts_with("--out=") {
            continue;
        }
        if a == "--out" {
            skip = true;
            continue;
        }
        out.push(a.clone());
    }
    out
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

fn dispatch(cli: &Cli, ctx: &mut Ctx) -> Result<Body, CliError> {
    match &cli.command {
        None => match (cli.suite, cli.n) {
            (Some(kind), Some(n)) => suite::run_suite(n, kind, ctx),
            (Some(_), None) => Err(CliError::Input("--suite needs --n K".into())),
            _ => Err(CliError::Input("no command given (see --help)".into())),
        },
        Some(c) => commands::run_command(c, ctx),
    }
}

/// Runs one command line (including the program name) without touching stdout.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let raw: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let strings: Vec<String> = raw.iter().map(|s| s.to_string_lossy().into_owned()).collect();
    let cli = match Cli::try_parse_from(&raw) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let (stdout, stderr) = if code == 0 { (text, String::new()) } else { (String::new(), text) };
            return Outcome { code, report: None, stdout, stderr };
        }
    };
    let start = Instant::now();
    let mut digest = Sha256::new();
    for a in normalized_args(&strings) {
        digest.update(a.as_bytes());
        digest.update([0u8]);
    }
    let mut ctx = Ctx { seed: cli.seed, cap: cli.e_cap.unwrap_or(DEFAULT_E_CAP), digest };
    let body = match dispatch(&cli, &mut ctx) {
        Ok(b) => b,
        Err(e) => {
            let code = match e {
                CliError::Input(_) => 2,
                CliError::Failed(_) => 1,
            };
            return Outcome { code, report: None, stdout: String::new(), stderr: format!("{e}\n") };
        }
    };
    let pass = body.checks.iter().all(|c| c.pass);
    let mut report = VerificationReport {
        command: command_name(&cli),
        tag: body.tag.to_string(),
        inputs_digest: hex(&ctx.digest.finalize()),
        pass,
        checks: body.checks,
        result: body.result,
        witnesses: body.witnesses.iter().map(|w| w.0.clone()).collect(),
        wall_clock_ms: start.elapsed().as_millis() as u64,
    };
    let mut stderr = String::new();
    if let Some(dir) = &cli.out {
        if let Err(e) = write_out(dir, &report, &body.witnesses) {
            stderr += &format!("could not write to {}: {e}\n", dir.display());
            report.witnesses.clear();
        }
    }
    let stdout = if cli.json {
        serde_json::to_string_pretty(&report).expect("report serializes") + "\n"
    } else {
        report.to_markdown()
    };
    if !pass {
        for c in report.checks.iter().filter(|c| !c.pass) {
            stderr += &format!("check failed: {}\n", c.name);
        }
    }
    Outcome { code: if pass { 0 } else { 1 }, report: Some(report), stdout, stderr }
}

fn write_out(dir: &Path, report: &VerificationReport, witnesses: &[(String, Value)]) -> std::io::Result<()> {
    fs::create_dir_all(dir)?;
    for (path, v) in witnesses {
        let p = dir.join(path);
        if let Some(parent) = p.parent() {
            fs::create_dir_all(parent)?;
        }
        fs::write(p, serde_json::to_string_pretty(v).expect("witness serializes"))?;
    }
    fs::write(dir.join("report.json"), serde_json::to_string_pretty(report).expect("report serializes"))?;
    fs::write(dir.join("report.md"), report.to_markdown())
}

/// Entry point for the binary.
pub fn main_entry() -> i32 {
    let o = run(std::env::args_os());
    print!("{}", o.stdout);
    eprint!("{}", o.stderr);
    o.code
}
