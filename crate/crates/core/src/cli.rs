//! Command line front end. [`run`] parses arguments and writes everything
//! the command produces to `out`; the binary only maps errors to exit codes.
//!
//! Exit codes: 0 on success, 2 when the result carries assumption warnings,
//! 1 on errors.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::dist::{compose_joint, Binding, ChannelSpec, FactorizationSpec, JointPmf};
use crate::dsl;
use crate::error::{Error, Result};
use crate::poly::{IneqSystem, Mode, RateVar};
use crate::regions::{
    builtin_system, compare_bounds, derive, evaluate, evaluate_system, search_envelope,
    AuxSearchConfig, Params, RegionEnvelope, RegionId, RegionSpec,
};
use crate::sim::{
    lemma1_rows, lemma1_sweep, osrb_rows, osrb_sweep, spearman, sweep_csv, BinningConfig,
    Lemma1Config,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_WARNINGS: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "secrecy-regions",
    version,
    about = "Derive, evaluate and simulate secrecy rate regions"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Eliminate rate variables from a raw system and compare with a target.
    Derive(DeriveArgs),
    /// Evaluate a region on a joint distribution.
    Eval(EvalArgs),
    /// Search auxiliary distributions for the boundary of a region.
    Search(SearchArgs),
    /// Check that one envelope lies inside another.
    Compare(CompareArgs),
    /// Codebook counting experiment.
    SimulateLemma1(SimArgs),
    /// Random binning experiment.
    SimulateOsrb(SimArgs),
    /// List or print the builtin systems.
    Builtin(BuiltinArgs),
    /// Parse a system file and print its canonical form.
    Parse(ParseArgs),
}

#[derive(Debug, Args)]
pub struct DeriveArgs {
    /// Builtin id or path to a system file.
    #[arg(long)]
    pub raw: String,
    /// Comma separated elimination order; defaults to the builtin's own.
    #[arg(long, value_delimiter = ',')]
    pub eliminate: Vec<String>,
    #[arg(long, default_value = "farkas+shannon")]
    pub mode: String,
    /// Builtin id or path; defaults to the builtin's target.
    #[arg(long)]
    pub target: Option<String>,
    /// Also write the derivation as JSON.
    #[arg(long)]
    pub json: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    /// Builtin id or path to a system file.
    #[arg(long)]
    pub region: String,
    /// Joint as `{variables, probs}` or as a factorization `{variables, factors}`.
    #[arg(long)]
    pub joint: PathBuf,
    /// JSON map from region symbols to joint variables.
    #[arg(long)]
    pub binding: Option<PathBuf>,
    #[arg(long)]
    pub tau1: Option<f64>,
    #[arg(long)]
    pub tau2: Option<f64>,
    /// Write the vertex CSV here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Write the full evaluation as JSON.
    #[arg(long)]
    pub json: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SearchArgs {
    #[arg(long)]
    pub region: String,
    /// Channel as JSON.
    #[arg(long)]
    pub channel: PathBuf,
    /// Search configuration as JSON; every field is optional.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub tau1: Option<f64>,
    #[arg(long)]
    pub tau2: Option<f64>,
    /// Envelope CSV; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Envelope with the achieving distributions as JSON.
    #[arg(long)]
    pub distributions: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    /// Envelope CSV expected to be contained.
    #[arg(long)]
    pub inner: PathBuf,
    #[arg(long)]
    pub outer: PathBuf,
}

#[derive(Debug, Args)]
pub struct SimArgs {
    #[arg(long)]
    pub config: PathBuf,
    /// Blocklengths to sweep; defaults to the configured `n`.
    #[arg(long, value_delimiter = ',')]
    pub n: Vec<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Trace CSV; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Full per-blocklength results as JSON.
    #[arg(long)]
    pub json: Option<PathBuf>,
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct BuiltinArgs {
    #[arg(long)]
    pub list: bool,
    #[arg(long)]
    pub emit: Option<String>,
}

#[derive(Debug, Args)]
pub struct ParseArgs {
    pub file: PathBuf,
    /// Print JSON instead of text.
    #[arg(long)]
    pub json: bool,
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write) -> Result<i32>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => execute(&cli.command, out),
        Err(e) if !e.use_stderr() => {
            write!(out, "{e}")?;
            Ok(EXIT_OK)
        }
        Err(e) => Err(Error::InvalidConfig(e.to_string())),
    }
}

pub fn execute(cmd: &Command, out: &mut dyn Write) -> Result<i32> {
    match cmd {
        Command::Derive(a) => cmd_derive(a, out),
        Command::Eval(a) => cmd_eval(a, out),
        Command::Search(a) => cmd_search(a, out),
        Command::Compare(a) => cmd_compare(a, out),
        Command::SimulateLemma1(a) => cmd_lemma1(a, out),
        Command::SimulateOsrb(a) => cmd_osrb(a, out),
        Command::Builtin(a) => cmd_builtin(a, out),
        Command::Parse(a) => cmd_parse(a, out),
    }
}

// ---------------------------------------------------------------------------

fn check_input(p: &Path) -> Result<()> {
    if !p.is_file() {
        return Err(Error::InvalidConfig(format!(
            "input file {} does not exist",
            p.display()
        )));
    }
    Ok(())
}

fn check_output(p: &Path) -> Result<()> {
    match p.parent() {
        Some(d) if !d.as_os_str().is_empty() && !d.is_dir() => Err(Error::InvalidConfig(format!(
            "output directory {} does not exist",
            d.display()
        ))),
        _ => Ok(()),
    }
}

fn check_paths(inputs: &[Option<&Path>], outputs: &[Option<&Path>]) -> Result<()> {
    inputs.iter().flatten().try_for_each(|p| check_input(p))?;
    outputs.iter().flatten().try_for_each(|p| check_output(p))
}

fn read(p: &Path) -> Result<String> {
    Ok(fs::read_to_string(p)?)
}

fn read_json<T: serde::de::DeserializeOwned>(p: &Path) -> Result<T> {
    serde_json::from_str(&read(p)?)
        .map_err(|e| Error::InvalidConfig(format!("{}: {e}", p.display())))
}

fn to_json<T: Serialize>(v: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(v)?;
    s.push('\n');
    Ok(s)
}

fn emit(text: &str, path: Option<&Path>, out: &mut dyn Write) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text)?,
        None => out.write_all(text.as_bytes())?,
    }
    Ok(())
}

/// An existing file takes precedence over a builtin id of the same name.
enum Source {
    Builtin(Box<RegionSpec>),
    File(IneqSystem),
}

impl Source {
    fn system(&self) -> &IneqSystem {
        match self {
            Source::Builtin(s) => &s.system,
            Source::File(s) => s,
        }
    }
}

fn is_path(arg: &str) -> bool {
    Path::new(arg).is_file()
}

fn validate_source(arg: &str) -> Result<()> {
    if is_path(arg) || arg.parse::<RegionId>().is_ok() {
        Ok(())
    } else {
        Err(Error::UnknownRegion(format!(
            "{arg} is neither a builtin id nor a file"
        )))
    }
}

fn load_source(arg: &str) -> Result<Source> {
    if is_path(arg) {
        return Ok(Source::File(dsl::parse_system(&read(Path::new(arg))?)?));
    }
    Ok(Source::Builtin(Box::new(builtin_system(arg.parse()?))))
}

/// Either a flat joint or a factorization to multiply out.
pub fn load_joint(p: &Path) -> Result<JointPmf> {
    let v: serde_json::Value = serde_json::from_str(&read(p)?)?;
    if v.get("factors").is_some() {
        let spec: FactorizationSpec = serde_json::from_value(v)?;
        compose_joint(&spec)
    } else {
        Ok(serde_json::from_value(v)?)
    }
}

// ---------------------------------------------------------------------------

fn cmd_derive(a: &DeriveArgs, out: &mut dyn Write) -> Result<i32> {
    validate_source(&a.raw)?;
    if let Some(t) = &a.target {
        validate_source(t)?;
    }
    check_paths(&[], &[a.json.as_deref()])?;
    let mode: Mode = a.mode.parse()?;
    let raw = load_source(&a.raw)?;
    let order: Vec<RateVar> = if a.eliminate.is_empty() {
        match &raw {
            Source::Builtin(s) if !s.eliminate.is_empty() => s.eliminate.clone(),
            _ => {
                return Err(Error::InvalidConfig(
                    "--eliminate is required for this system".into(),
                ))
            }
        }
    } else {
        a.eliminate.iter().map(|v| v.trim().to_string()).collect()
    };
    let target = match (&a.target, &raw) {
        (Some(t), _) => Some((t.clone(), load_source(t)?.system().clone())),
        (None, Source::Builtin(s)) => s
            .target
            .map(|id| (id.as_str().to_string(), builtin_system(id).system)),
        (None, Source::File(_)) => None,
    };
    let mut d = derive(
        raw.system(),
        &order,
        mode,
        target.as_ref().map(|(n, s)| (n.as_str(), s)),
    )?;
    eprintln!("derive: {} ms", d.elapsed_ms);
    // Timing is the only nondeterministic field; keep artifacts byte-stable.
    d.elapsed_ms = 0;

    let mut text = String::new();
    for s in &d.steps {
        text += &format!(
            "# eliminate {}: {} upper x {} lower, {} generated, {} kept\n",
            s.var, s.positive, s.negative, s.generated, s.kept
        );
    }
    text += &format!(
        "# {} inequalities, {} assumptions, {} redundancy certificates\n",
        d.system.ineqs.len(),
        d.system.assumptions.len(),
        d.certificates.len()
    );
    text += &dsl::format_system(&d.system);
    if let Some(v) = &d.verdict {
        text += &format!(
            "# target {}: {}\n",
            v.target,
            if v.equal { "equal" } else { "different" }
        );
        if let Some(w) = &v.witness {
            text += &format!("# witness: {w}\n");
        }
    }
    out.write_all(text.as_bytes())?;
    if let Some(p) = &a.json {
        fs::write(p, to_json(&d)?)?;
    }
    Ok(EXIT_OK)
}

/// Shortest round-trip form, with negative zero printed as `0`.
fn num(x: f64) -> String {
    format!("{}", if x == 0.0 { 0.0 } else { x })
}

fn vertex_csv(vars: &[RateVar], vertices: &[[f64; 2]]) -> String {
    let mut s = format!("{},{}\n", vars[0], vars[1]);
    for v in vertices {
        s += &format!("{},{}\n", num(v[0]), num(v[1]));
    }
    s
}

fn rows_csv(vars: &[RateVar], rows: &[(Vec<f64>, f64)], tags: &[Option<String>]) -> String {
    let mut s = String::new();
    for v in vars {
        s += v;
        s.push(',');
    }
    s += "rhs,tag\n";
    for ((a, b), t) in rows.iter().zip(tags) {
        for x in a {
            s += &num(*x);
            s.push(',');
        }
        s += &format!("{},{}\n", num(*b), t.as_deref().unwrap_or(""));
    }
    s
}

fn cmd_eval(a: &EvalArgs, out: &mut dyn Write) -> Result<i32> {
    validate_source(&a.region)?;
    check_paths(
        &[Some(&a.joint), a.binding.as_deref()],
        &[a.out.as_deref(), a.json.as_deref()],
    )?;
    let joint = load_joint(&a.joint)?;
    let binding: Binding = match &a.binding {
        Some(p) => read_json(p)?,
        None => Binding::new(),
    };
    let params = Params {
        tau1: a.tau1,
        tau2: a.tau2,
    };
    let ev = match load_source(&a.region)? {
        Source::Builtin(spec) => evaluate(&spec, &joint, &binding, &params)?,
        Source::File(sys) => evaluate_system(&sys, sys.template.as_ref(), &joint, &binding)?,
    };
    for w in &ev.warnings {
        eprintln!("warning: {w}");
    }
    let csv = match &ev.region.vertices {
        Some(v) => vertex_csv(&ev.region.vars, v),
        None => rows_csv(&ev.region.vars, &ev.region.rows, &ev.region.tags),
    };
    emit(&csv, a.out.as_deref(), out)?;
    if let Some(p) = &a.json {
        fs::write(p, to_json(&ev)?)?;
    }
    Ok(if ev.assumptions_hold {
        EXIT_OK
    } else {
        EXIT_WARNINGS
    })
}

fn cmd_search(a: &SearchArgs, out: &mut dyn Write) -> Result<i32> {
    let id: RegionId = a.region.parse()?;
    check_paths(
        &[Some(&a.channel), a.config.as_deref()],
        &[a.out.as_deref(), a.distributions.as_deref()],
    )?;
    let channel: ChannelSpec = read_json(&a.channel)?;
    let mut cfg: AuxSearchConfig = match &a.config {
        Some(p) => read_json(p)?,
        None => AuxSearchConfig::default(),
    };
    if let Some(s) = a.seed {
        cfg.seed = s;
    }
    if a.tau1.is_some() || a.tau2.is_some() {
        cfg.params = Params {
            tau1: a.tau1,
            tau2: a.tau2,
        };
    }
    let env = search_envelope(&builtin_system(id), &channel, &cfg)?;
    emit(&env.to_csv(), a.out.as_deref(), out)?;
    if let Some(p) = &a.distributions {
        fs::write(p, to_json(&env)?)?;
    }
    if env.excluded > 0 {
        eprintln!(
            "warning: {} of {} samples violated an assumption and were skipped",
            env.excluded, env.samples
        );
    }
    Ok(EXIT_OK)
}

fn cmd_compare(a: &CompareArgs, out: &mut dyn Write) -> Result<i32> {
    check_paths(&[Some(&a.inner), Some(&a.outer)], &[])?;
    let inner = RegionEnvelope::from_csv(&read(&a.inner)?)?;
    let outer = RegionEnvelope::from_csv(&read(&a.outer)?)?;
    let r = compare_bounds(&inner, &outer);
    out.write_all(to_json(&r)?.as_bytes())?;
    Ok(EXIT_OK)
}

fn cmd_lemma1(a: &SimArgs, out: &mut dyn Write) -> Result<i32> {
    check_paths(&[Some(&a.config)], &[a.out.as_deref(), a.json.as_deref()])?;
    let mut cfg: Lemma1Config = read_json(&a.config)?;
    if let Some(s) = a.seed {
        cfg.seed = s;
    }
    let ns = if a.n.is_empty() {
        vec![cfg.n]
    } else {
        a.n.clone()
    };
    for &n in &ns {
        Lemma1Config { n, ..cfg.clone() }.validate()?;
    }
    let results = lemma1_sweep(&cfg, &ns)?;
    let rows: Vec<_> = results.iter().flat_map(lemma1_rows).collect();
    emit(&sweep_csv(&rows), a.out.as_deref(), out)?;
    if let Some(p) = &a.json {
        fs::write(p, to_json(&results)?)?;
    }
    Ok(EXIT_OK)
}

fn cmd_osrb(a: &SimArgs, out: &mut dyn Write) -> Result<i32> {
    check_paths(&[Some(&a.config)], &[a.out.as_deref(), a.json.as_deref()])?;
    let mut cfg: BinningConfig = read_json(&a.config)?;
    if let Some(s) = a.seed {
        cfg.seed = s;
    }
    let ns = if a.n.is_empty() {
        vec![cfg.n]
    } else {
        a.n.clone()
    };
    let results = osrb_sweep(&cfg, &ns)?;
    let rows: Vec<_> = results.iter().flat_map(osrb_rows).collect();
    emit(&sweep_csv(&rows), a.out.as_deref(), out)?;
    if results.len() >= 2 {
        let x: Vec<f64> = results.iter().map(|r| r.n as f64).collect();
        let y: Vec<f64> = results.iter().map(|r| r.tv).collect();
        eprintln!("spearman(tv, n) = {:.4}", spearman(&x, &y));
    }
    if let Some(p) = &a.json {
        fs::write(p, to_json(&results)?)?;
    }
    Ok(EXIT_OK)
}

fn cmd_builtin(a: &BuiltinArgs, out: &mut dyn Write) -> Result<i32> {
    if a.list {
        for id in RegionId::ALL {
            writeln!(out, "{:<24} {}", id.as_str(), id.description())?;
        }
    } else if let Some(id) = &a.emit {
        let spec = builtin_system(id.parse()?);
        out.write_all(spec.emit().as_bytes())?;
    }
    Ok(EXIT_OK)
}

fn cmd_parse(a: &ParseArgs, out: &mut dyn Write) -> Result<i32> {
    check_input(&a.file)?;
    let sys = dsl::parse_system(&read(&a.file)?)?;
    if a.json {
        out.write_all(to_json(&sys)?.as_bytes())?;
    } else {
        out.write_all(dsl::format_system(&sys).as_bytes())?;
    }
    Ok(EXIT_OK)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_str(args: &[&str]) -> (Result<i32>, String) {
        let mut buf = Vec::new();
        let r = run(
            std::iter::once("secrecy-regions").chain(args.iter().copied()),
            &mut buf,
        );
        (r, String::from_utf8(buf).unwrap())
    }

    #[test]
    fn builtin_list_names_every_region() {
        let (r, s) = run_str(&["builtin", "--list"]);
        assert_eq!(r.unwrap(), 0);
        for id in RegionId::ALL {
            assert!(s.contains(id.as_str()));
        }
    }

    #[test]
    fn builtin_requires_exactly_one_flag() {
        assert!(run_str(&["builtin"]).0.is_err());
        assert!(run_str(&["builtin", "--list", "--emit", "THM8"]).0.is_err());
    }

    #[test]
    fn unknown_sources_fail_before_work() {
        let (r, _) = run_str(&["derive", "--raw", "NOPE", "--eliminate", "x"]);
        assert!(matches!(r, Err(Error::UnknownRegion(_))));
        let (r, _) = run_str(&["eval", "--region", "THM8", "--joint", "/nonexistent.json"]);
        assert!(matches!(r, Err(Error::InvalidConfig(_))));
    }
}
