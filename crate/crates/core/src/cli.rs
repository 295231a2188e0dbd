//! Command-line front end: `solvable <list|potential|reduce|spectrum|solve|verify-all>`.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::catalog::{
    analytic_spectrum, family_potential, family_reduction_with, list_families, FamilyId, FamilyParams, GridSpec,
    CERTIFICATE_POINTS, CERTIFICATE_TOL,
};
use crate::error::{Error, Result};
use crate::output::{sci, write_json};
use crate::specfun::{build_solution, uniform_grid};
use crate::verify::{family_spectrum, profile_window, verify_all, CheckSummary, FamilyReport, SPECTRUM_TOL};

const DEFAULT_LEVELS: usize = 6;
const DEFAULT_PROFILE_POINTS: usize = 401;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SubcommandKind {
    List,
    Potential,
    Reduce,
    Spectrum,
    Solve,
    VerifyAll,
}

/// A parsed invocation.
#[derive(Debug, Clone, PartialEq)]
pub struct CliConfig {
    pub subcommand: SubcommandKind,
    pub family: Option<FamilyId>,
    /// `name = value` assignments in command-line order.
    pub params: Vec<(&'static str, f64)>,
    pub energy: Option<f64>,
    pub lo: Option<f64>,
    pub hi: Option<f64>,
    pub n_points: Option<usize>,
    pub levels: Option<usize>,
    pub format: Option<Format>,
    pub output: Option<PathBuf>,
    pub tol: Option<f64>,
    pub seed: u64,
}

#[derive(Parser, Debug)]
#[command(name = "solvable", version, about = "Exactly solvable 1D Schrödinger potentials")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Family metadata.
    List(Common),
    /// Samples of V(r).
    Potential(Common),
    /// Reduction certificate at one energy.
    Reduce(Common),
    /// Closed-form and shooting spectra side by side.
    Spectrum(Common),
    /// Closed-form wavefunction on a grid.
    Solve(Common),
    /// Certificates, residuals and spectra for every family.
    VerifyAll(Common),
}

#[derive(Args, Debug)]
struct Common {
    #[arg(long)]
    family: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    alpha: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    beta: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    mu: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    nu: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    gamma: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    theta2: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    rho: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    lambda: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    kappa: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    energy: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    lo: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    hi: Option<f64>,
    #[arg(long)]
    n_points: Option<usize>,
    /// Number of levels.
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl CliConfig {
    /// Parses `argv` (including the program name). Help and version requests
    /// come back as `Err` with the text to print and exit code 0.
    pub fn parse(argv: &[String]) -> std::result::Result<Self, clap::Error> {
        let cli = Cli::try_parse_from(argv)?;
        let (subcommand, c) = match cli.command {
            Command::List(c) => (SubcommandKind::List, c),
            Command::Potential(c) => (SubcommandKind::Potential, c),
            Command::Reduce(c) => (SubcommandKind::Reduce, c),
            Command::Spectrum(c) => (SubcommandKind::Spectrum, c),
            Command::Solve(c) => (SubcommandKind::Solve, c),
            Command::VerifyAll(c) => (SubcommandKind::VerifyAll, c),
        };
        let family = match &c.family {
            Some(f) => Some(
                f.parse::<FamilyId>()
                    .map_err(|e| clap::Error::raw(clap::error::ErrorKind::InvalidValue, format!("{e}\n")))?,
            ),
            None => None,
        };
        let params = [
            ("alpha", c.alpha),
            ("beta", c.beta),
            ("mu", c.mu),
            ("nu", c.nu),
            ("gamma", c.gamma),
            ("theta2", c.theta2),
            ("rho", c.rho),
            ("lambda", c.lambda),
            ("kappa", c.kappa),
        ]
        .into_iter()
        .filter_map(|(k, v)| v.map(|v| (k, v)))
        .collect();
        Ok(CliConfig {
            subcommand,
            family,
            params,
            energy: c.energy,
            lo: c.lo,
            hi: c.hi,
            n_points: c.n_points,
            levels: c.n,
            format: c.format,
            output: c.output,
            tol: c.tol,
            seed: c.seed,
        })
    }

    /// Family parameters, rejecting names the family does not take.
    fn family_params(&self) -> Result<FamilyParams> {
        let id = self.family.ok_or_else(|| Error::InvalidParameter("--family is required".into()))?;
        FamilyParams::from_named(id, self.params.iter().copied())
    }

    fn energy(&self) -> Result<f64> {
        self.energy.ok_or_else(|| Error::InvalidParameter("--energy is required".into()))
    }

    fn tol(&self, default: f64) -> Result<f64> {
        match self.tol {
            Some(t) if !(t > 0.0) => Err(Error::InvalidParameter(format!("--tol must be positive, got {t}"))),
            Some(t) => Ok(t),
            None => Ok(default),
        }
    }

    fn grid(&self, default: (f64, f64), n: usize) -> Result<GridSpec> {
        let g = GridSpec {
            lo: self.lo.unwrap_or(default.0),
            hi: self.hi.unwrap_or(default.1),
            n: self.n_points.unwrap_or(n),
        };
        if !(g.lo < g.hi) || g.n < 2 {
            return Err(Error::InvalidGrid(format!("need lo < hi and n >= 2, got ({}, {}, {})", g.lo, g.hi, g.n)));
        }
        Ok(g)
    }

    fn reject_family_flags(&self) -> Result<()> {
        if self.family.is_some() {
            return Err(Error::InvalidParameter("--family is not used by this subcommand".into()));
        }
        if let Some((name, _)) = self.params.first() {
            return Err(Error::InvalidParameter(format!("--{name} is not used by this subcommand")));
        }
        Ok(())
    }
}

/// Runs one invocation against the process streams.
pub fn run(argv: &[String]) -> i32 {
    let stdout = io::stdout();
    let stderr = io::stderr();
    run_with(argv, &mut stdout.lock(), &mut stderr.lock())
}

/// Exit codes: 0 success, 1 failed check or computation error, 2 usage error.
pub fn run_with(argv: &[String], out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let cfg = match CliConfig::parse(argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{e}");
                return 0;
            }
            let msg = e.to_string();
            let first = msg.lines().next().unwrap_or("").trim_start_matches("error: ").to_string();
            report(err, "usage", &first);
            return 2;
        }
    };
    let result = match &cfg.output {
        Some(path) => File::create(path).map_err(Error::from).and_then(|f| {
            let mut w = BufWriter::new(f);
            let r = execute(&cfg, &mut w);
            w.flush()?;
            r
        }),
        None => execute(&cfg, out),
    };
    match result {
        Ok(Outcome::Pass) => 0,
        Ok(Outcome::Fail(msg)) => {
            report(err, "check_failed", &msg);
            1
        }
        // a closed pipe (e.g. `| head`) is not worth a message
        Err(Error::BrokenPipe) => 0,
        Err(e) => {
            report(err, e.kind(), &e.to_string());
            if matches!(e, Error::UnknownParameter { .. } | Error::UnknownFamily(_)) {
                2
            } else {
                1
            }
        }
    }
}

fn report(err: &mut dyn Write, kind: &str, msg: &str) {
    let _ = write_json(err, &json!({ "error": kind, "message": msg }));
}

enum Outcome {
    Pass,
    Fail(String),
}

fn emit_json<T: Serialize>(out: &mut dyn Write, value: &T) -> Result<()> {
    let v = serde_json::to_value(value).map_err(|e| Error::Io(e.to_string()))?;
    Ok(write_json(out, &v)?)
}

fn execute(cfg: &CliConfig, out: &mut dyn Write) -> Result<Outcome> {
    match cfg.subcommand {
        SubcommandKind::List => list(cfg, out),
        SubcommandKind::Potential => potential(cfg, out),
        SubcommandKind::Reduce => reduce(cfg, out),
        SubcommandKind::Spectrum => spectrum(cfg, out),
        SubcommandKind::Solve => solve(cfg, out),
        SubcommandKind::VerifyAll => verify(cfg, out),
    }
}

fn list(cfg: &CliConfig, out: &mut dyn Write) -> Result<Outcome> {
    cfg.reject_family_flags()?;
    let families = list_families();
    match cfg.format.unwrap_or(Format::Json) {
        Format::Json => emit_json(out, &families)?,
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(["id", "params", "target", "substitution", "aliases"])?;
            for f in &families {
                w.write_record([f.id.as_str(), &f.params.join(" "), f.target, f.substitution, &f.aliases.join("; ")])?;
            }
            w.flush()?;
        }
    }
    Ok(Outcome::Pass)
}

fn potential(cfg: &CliConfig, out: &mut dyn Write) -> Result<Outcome> {
    let p = cfg.family_params()?;
    let g = cfg.grid(GridSpec::middle(p.id.window(), CERTIFICATE_POINTS).bounds(), CERTIFICATE_POINTS)?;
    let r: Vec<f64> = g.points().collect();
    let v = r.iter().map(|&x| family_potential(&p, x)).collect::<Result<Vec<_>>>()?;
    match cfg.format.unwrap_or(Format::Json) {
        Format::Json => emit_json(out, &json!({ "family": p.id, "params": p.named(), "r": r, "V": v }))?,
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(["r", "V"])?;
            for (x, y) in r.iter().zip(&v) {
                w.write_record([sci(*x), sci(*y)])?;
            }
            w.flush()?;
        }
    }
    Ok(Outcome::Pass)
}

fn reduce(cfg: &CliConfig, out: &mut dyn Write) -> Result<Outcome> {
    let p = cfg.family_params()?;
    let e = cfg.energy()?;
    if cfg.format == Some(Format::Csv) {
        return Err(Error::InvalidParameter("reduce emits JSON only".into()));
    }
    let g = cfg.grid(GridSpec::middle(p.id.window(), CERTIFICATE_POINTS).bounds(), CERTIFICATE_POINTS)?;
    let cert = family_reduction_with(&p, e, cfg.tol(CERTIFICATE_TOL)?, g)?;
    emit_json(out, &cert)?;
    Ok(if cert.passed {
        Outcome::Pass
    } else {
        Outcome::Fail(format!(
            "certificate mismatch {} at r = {} exceeds {}",
            sci(cert.max_mismatch),
            sci(cert.worst_point),
            sci(cert.tolerance)
        ))
    })
}

#[derive(Serialize)]
struct LevelRow {
    n: usize,
    analytic: Option<f64>,
    shooting: Option<f64>,
    abs_err: Option<f64>,
    nodes: Option<usize>,
}

fn spectrum(cfg: &CliConfig, out: &mut dyn Write) -> Result<Outcome> {
    let p = cfg.family_params()?;
    let levels = cfg.levels.unwrap_or(DEFAULT_LEVELS);
    let tol = cfg.tol(SPECTRUM_TOL)?;
    let analytic = analytic_spectrum(&p, levels)?;
    let shot = family_spectrum(&p, levels)?;
    let mut failures = Vec::new();
    let rows: Vec<LevelRow> = (0..levels.max(shot.levels.len()))
        .filter_map(|n| {
            let a = analytic.get(n).copied();
            let s = shot.levels.get(n);
            if a.is_none() && s.is_none() {
                return None;
            }
            let err = a.zip(s).map(|(a, s)| (a - s.energy).abs());
            match (a, err) {
                (Some(a), Some(d)) if d > tol * a.abs().max(1.0) => {
                    failures.push(format!("level {n}: |error| {}", sci(d)))
                }
                (Some(_), None) => failures.push(format!("level {n}: not found by shooting")),
                _ => {}
            }
            Some(LevelRow { n, analytic: a, shooting: s.map(|l| l.energy), abs_err: err, nodes: s.map(|l| l.nodes) })
        })
        .collect();
    match cfg.format.unwrap_or(Format::Json) {
        Format::Json => emit_json(
            out,
            &json!({
                "family": p.id,
                "params": p.named(),
                "levels": rows,
                "tolerance": tol,
                "exhausted": shot.exhausted,
                "box_converged": shot.box_converged,
                "passed": failures.is_empty(),
            }),
        )?,
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            let cell = |x: Option<f64>| x.map(sci).unwrap_or_default();
            w.write_record(["n", "E_n", "E_shoot", "abs_err"])?;
            for row in &rows {
                w.write_record([row.n.to_string(), cell(row.analytic), cell(row.shooting), cell(row.abs_err)])?;
            }
            w.flush()?;
        }
    }
    Ok(if failures.is_empty() { Outcome::Pass } else { Outcome::Fail(failures.join("; ")) })
}

fn solve(cfg: &CliConfig, out: &mut dyn Write) -> Result<Outcome> {
    let p = cfg.family_params()?;
    let e = cfg.energy()?;
    let g = cfg.grid(profile_window(p.id), DEFAULT_PROFILE_POINTS)?;
    let profile = build_solution(&p, e, &uniform_grid(g.lo, g.hi, g.n))?;
    match cfg.format.unwrap_or(Format::Json) {
        Format::Json => write_json(out, &profile.to_json())?,
        Format::Csv => profile.write_csv(out)?,
    }
    Ok(Outcome::Pass)
}

fn summary_cell(s: &CheckSummary) -> String {
    format!("{}/{} worst {}", s.checks - s.failures, s.checks, sci(s.worst))
}

fn verify(cfg: &CliConfig, out: &mut dyn Write) -> Result<Outcome> {
    cfg.reject_family_flags()?;
    let reports = verify_all(cfg.seed);
    let failed: Vec<&FamilyReport> = reports.iter().filter(|r| !r.passed()).collect();
    match cfg.format {
        Some(Format::Json) => {
            emit_json(out, &json!({ "seed": cfg.seed, "families": reports, "passed": failed.is_empty() }))?
        }
        Some(Format::Csv) => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(["family", "check", "checks", "failures", "worst", "tolerance"])?;
            for r in &reports {
                let checks = [
                    ("certificates", Some(&r.certificates)),
                    ("residuals", Some(&r.residuals)),
                    ("spectrum", r.spectrum.as_ref()),
                ];
                for (name, s) in checks {
                    if let Some(s) = s {
                        w.write_record([
                            r.family.as_str().to_string(),
                            name.to_string(),
                            s.checks.to_string(),
                            s.failures.to_string(),
                            sci(s.worst),
                            sci(s.tolerance),
                        ])?;
                    }
                }
            }
            w.flush()?;
        }
        None => {
            writeln!(out, "{:<11} {:<28} {:<28} {:<28} status", "family", "certificates", "residuals", "spectrum")?;
            for r in &reports {
                writeln!(
                    out,
                    "{:<11} {:<28} {:<28} {:<28} {}",
                    r.family.as_str(),
                    summary_cell(&r.certificates),
                    summary_cell(&r.residuals),
                    r.spectrum.as_ref().map(summary_cell).unwrap_or_else(|| "-".into()),
                    if r.passed() { "PASS" } else { "FAIL" }
                )?;
            }
            writeln!(out, "{} of {} families passed (seed {})", reports.len() - failed.len(), reports.len(), cfg.seed)?;
        }
    }
    if failed.is_empty() {
        return Ok(Outcome::Pass);
    }
    let detail = failed
        .iter()
        .map(|r| {
            let first = [Some(&r.certificates), Some(&r.residuals), r.spectrum.as_ref()]
                .into_iter()
                .flatten()
                .find_map(|s| s.detail.clone())
                .unwrap_or_default();
            format!("{}: {first}", r.family)
        })
        .collect::<Vec<_>>();
    Ok(Outcome::Fail(detail.join("; ")))
}
