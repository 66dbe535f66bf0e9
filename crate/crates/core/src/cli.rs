//! `nrep` command-line front end.
//!
//! Every subcommand prints one JSON report on stdout. Exit codes: 0 when all
//! checks pass, 1 when a checked condition fails (the report is still
//! printed), 2 on usage or input errors (diagnostic on stderr only).

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::explorer::{self, CampaignConfig, CampaignKind};
use crate::fermion::{one_rdm, FermionState, Spectrum};
use crate::io::{read_spectrum_file, read_state, write_state};
use crate::numerics::Tolerances;
use crate::representability::{
    check_bd, check_pauli, check_rank_n_plus_2, check_two_rep, check_weyl_2x2, construct_bd_preimage, natural_form,
};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Anomaly files from `sample` go here (or to `$NREP_ANOMALY_DIR`).
pub const DEFAULT_ANOMALY_DIR: &str = "nrep_anomalies";
pub const ANOMALY_LIMIT: usize = 100;

#[derive(Debug, Parser)]
#[command(
    name = "nrep",
    version,
    about = "Pure-state N-representability checks for one-particle density matrices"
)]
pub struct CliCommand {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check a spectrum file against the applicable conditions
    CheckSpectrum {
        #[arg(long)]
        file: PathBuf,
        /// Particle number (inferred from the spectrum when omitted)
        #[arg(long)]
        n: Option<usize>,
    },
    /// Build a three-fermion pre-image for a six-entry spectrum
    Construct {
        #[arg(long)]
        file: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Report norm, density matrix, spectrum and checks for a state file
    VerifyState {
        #[arg(long)]
        file: PathBuf,
    },
    /// Run a seeded Monte-Carlo campaign
    Sample {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        count: u64,
        #[arg(long)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = CampaignArg::Bd)]
        campaign: CampaignArg,
    },
    /// Weyl inequalities for C = A + B with 2x2 Hermitian A, B
    Weyl {
        #[arg(long, value_parser = parse_pair)]
        a: [f64; 2],
        #[arg(long, value_parser = parse_pair)]
        b: [f64; 2],
        #[arg(long, value_parser = parse_pair)]
        c: [f64; 2],
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CampaignArg {
    Bd,
    Hole,
    Conjecture,
}

impl From<CampaignArg> for CampaignKind {
    fn from(c: CampaignArg) -> Self {
        match c {
            CampaignArg::Bd => CampaignKind::BdNecessity,
            CampaignArg::Hole => CampaignKind::HoleDuality,
            CampaignArg::Conjecture => CampaignKind::Conjecture,
        }
    }
}

fn parse_pair(s: &str) -> std::result::Result<[f64; 2], String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let [x, y] = parts.as_slice() else {
        return Err(format!("expected two comma-separated numbers, got {s:?}"));
    };
    let parse = |t: &str| t.parse::<f64>().map_err(|e| format!("{t:?}: {e}"));
    Ok([parse(x)?, parse(y)?])
}

/// A JSON report plus whether every check in it passed.
struct Outcome {
    report: Value,
    pass: bool,
}

fn provenance(command: &str, tol: &Tolerances) -> Value {
    json!({
        "tool": "nrep",
        "version": env!("CARGO_PKG_VERSION"),
        "command": command,
        "tolerances": tol,
    })
}

fn merge(mut base: Value, extra: Value) -> Value {
    if let (Value::Object(b), Value::Object(e)) = (&mut base, extra) {
        b.extend(e);
    }
    base
}

fn to_value<T: Serialize>(x: &T) -> Result<Value> {
    Ok(serde_json::to_value(x)?)
}

fn infer_n(lambdas: &[f64], notes: &mut Vec<String>) -> Result<usize> {
    if lambdas.len() == 6 {
        notes.push("n not given; six occupations imply n = 3".into());
        return Ok(3);
    }
    let sum: f64 = lambdas.iter().sum();
    let n = sum.round();
    if n < 1.0 || (sum - n).abs() > 1e-6 {
        return Err(Error::Input(format!(
            "cannot infer n: occupations sum to {sum}, pass --n explicitly"
        )));
    }
    notes.push(format!("n not given; inferred n = {n} from the occupation sum"));
    Ok(n as usize)
}

fn sorted_spectrum(lambdas: Vec<f64>, n: usize, notes: &mut Vec<String>) -> Result<Spectrum> {
    let spec = Spectrum::new(lambdas, n)?;
    if spec.is_sorted() {
        return Ok(spec);
    }
    notes.push("occupations re-sorted into non-increasing order".into());
    Spectrum::sorted(spec.values().to_vec(), n)
}

/// Every condition that applies to a sorted spectrum with `r` entries.
fn spectrum_checks(spec: &Spectrum, tol: f64) -> Result<(Vec<Value>, bool)> {
    let n = spec.n();
    let mut checks = Vec::new();
    let mut pass = true;
    let pauli = check_pauli(spec, tol)?;
    pass &= pauli.pass;
    checks.push(to_value(&pauli)?);
    if n == 3 && spec.len() == 6 {
        let bd = check_bd(spec, tol)?;
        pass &= bd.pass;
        checks.push(to_value(&bd)?);
    }
    if n == 2 {
        let two = check_two_rep(spec, tol)?;
        pass &= two.pass;
        checks.push(to_value(&two)?);
    }
    if n % 2 == 1 && spec.len() == n + 2 {
        let rank = check_rank_n_plus_2(spec, n, tol)?;
        pass &= rank.pass;
        checks.push(to_value(&rank)?);
    }
    Ok((checks, pass))
}

fn check_spectrum(file: &Path, n_flag: Option<usize>, tol: &Tolerances) -> Result<Outcome> {
    let f = read_spectrum_file(file)?;
    let mut notes = Vec::new();
    let n = match (n_flag, f.n) {
        (Some(a), Some(b)) if a != b => {
            return Err(Error::Input(format!("--n {a} contradicts n = {b} in the file")));
        }
        (Some(a), _) | (None, Some(a)) => a,
        (None, None) => infer_n(&f.lambdas, &mut notes)?,
    };
    let spec = sorted_spectrum(f.lambdas, n, &mut notes)?;
    let (checks, pass) = spectrum_checks(&spec, tol.check)?;
    let report = merge(
        provenance("check-spectrum", tol),
        json!({ "n": n, "lambdas": spec.values(), "pass": pass, "checks": checks, "notes": notes }),
    );
    Ok(Outcome { report, pass })
}

fn construct(file: &Path, out: &Path, tol: &Tolerances) -> Result<Outcome> {
    let f = read_spectrum_file(file)?;
    let mut notes = Vec::new();
    if f.lambdas.len() != 6 || f.n.is_some_and(|n| n != 3) {
        return Err(Error::Input(format!(
            "construct needs six occupations for n = 3, got {} (n = {:?})",
            f.lambdas.len(),
            f.n
        )));
    }
    let spec = sorted_spectrum(f.lambdas, 3, &mut notes)?;
    let bd = check_bd(&spec, tol.check)?;
    let base = merge(
        provenance("construct", tol),
        json!({ "n": 3, "lambdas": spec.values(), "bd": bd, "notes": notes }),
    );
    let (coeffs, psi) = match construct_bd_preimage(&spec, tol.check) {
        Ok(x) => x,
        Err(Error::BdViolation(msg)) => {
            let report = merge(base, json!({ "pass": false, "error": msg }));
            return Ok(Outcome { report, pass: false });
        }
        Err(e) => return Err(e),
    };
    write_state(out, &psi)?;
    let got = one_rdm(&psi)?.spectrum()?;
    let distance = got.multiset_distance(&spec);
    let pass = distance <= tol.assertion;
    let report = merge(
        base,
        json!({
            "pass": pass,
            "out": out.display().to_string(),
            "coefficients": coeffs,
            "constructed_lambdas": got.values(),
            "spectrum_distance": distance,
        }),
    );
    Ok(Outcome { report, pass })
}

fn verify_state(file: &Path, tol: &Tolerances) -> Result<Outcome> {
    let psi: FermionState = read_state(file)?;
    let norm = psi.norm();
    let normalized = psi.is_normalized(tol.normalization);
    let base = merge(
        provenance("verify-state", tol),
        json!({ "n": psi.n(), "r": psi.r(), "norm": norm, "normalized": normalized }),
    );
    if !normalized {
        let report = merge(base, json!({ "pass": false, "notes": ["state is not normalized"] }));
        return Ok(Outcome { report, pass: false });
    }
    let gamma = one_rdm(&psi)?;
    let m = gamma.matrix();
    let rdm: Vec<Vec<[f64; 2]>> = (0..m.rows())
        .map(|i| (0..m.cols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
        .collect();
    let spec = gamma.spectrum()?;
    let (mut checks, mut pass) = spectrum_checks(&spec, tol.check)?;
    let mut notes = Vec::new();
    let mut leakage = Value::Null;
    if psi.n() == 3 && psi.r() == 6 {
        match natural_form(&psi, tol) {
            Ok(nf) => {
                let ok = nf.leakage <= tol.check;
                pass &= ok;
                leakage = json!(nf.leakage);
                checks.push(json!({ "check": "natural_form_leakage", "pass": ok, "residuals": [nf.leakage] }));
            }
            Err(Error::Degenerate(msg)) => notes.push(format!("natural form skipped: {msg}")),
            Err(e) => return Err(e),
        }
    }
    let report = merge(
        base,
        json!({
            "pass": pass,
            "rdm": rdm,
            "lambdas": spec.values(),
            "checks": checks,
            "natural_form_leakage": leakage,
            "notes": notes,
        }),
    );
    Ok(Outcome { report, pass })
}

fn anomaly_dir() -> PathBuf {
    std::env::var_os("NREP_ANOMALY_DIR")
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(DEFAULT_ANOMALY_DIR))
}

fn sample(cfg: CampaignConfig, kind: CampaignKind, tol: &Tolerances) -> Result<Outcome> {
    let rep = explorer::run(kind, &cfg)?;
    let pass = rep.violations == 0 || !rep.applicable;
    let mut extra = json!({ "pass": pass });
    if rep.violations > 0 && rep.applicable {
        let files = explorer::write_anomalies(&rep, &anomaly_dir(), ANOMALY_LIMIT)?;
        let files: Vec<String> = files.iter().map(|p| p.display().to_string()).collect();
        extra = merge(extra, json!({ "anomaly_files": files }));
    }
    let report = merge(merge(provenance("sample", tol), to_value(&rep)?), extra);
    Ok(Outcome { report, pass })
}

fn weyl(a: [f64; 2], b: [f64; 2], c: [f64; 2], tol: &Tolerances) -> Result<Outcome> {
    let check = check_weyl_2x2(a, b, c, tol.check)?;
    let pass = check.pass;
    let report = merge(
        provenance("weyl", tol),
        json!({ "a": a, "b": b, "c": c, "pass": pass, "checks": [check] }),
    );
    Ok(Outcome { report, pass })
}

fn dispatch(cmd: CliCommand) -> Result<Outcome> {
    let tol = Tolerances::default();
    match cmd.command {
        Command::CheckSpectrum { file, n } => check_spectrum(&file, n, &tol),
        Command::Construct { file, out } => construct(&file, &out, &tol),
        Command::VerifyState { file } => verify_state(&file, &tol),
        Command::Sample {
            n,
            r,
            count,
            seed,
            campaign,
        } => sample(
            CampaignConfig::new(n, r, count, seed).with_tolerance(tol.check),
            campaign.into(),
            &tol,
        ),
        Command::Weyl { a, b, c } => weyl(a, b, c, &tol),
    }
}

/// Run with explicit output streams; returns the exit code.
pub fn run_with<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cmd = match CliCommand::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(stdout, "{text}");
                    EXIT_PASS
                }
                _ => {
                    let _ = write!(stderr, "{text}");
                    EXIT_USAGE
                }
            };
        }
    };
    match dispatch(cmd) {
        Ok(Outcome { report, pass }) => {
            let text = serde_json::to_string_pretty(&report).expect("JSON values always serialize");
            let _ = writeln!(stdout, "{text}");
            if pass {
                EXIT_PASS
            } else {
                EXIT_FAIL
            }
        }
        Err(e) => {
            let _ = writeln!(stderr, "nrep: error: {e}");
            EXIT_USAGE
        }
    }
}

/// Parse `argv` (including the program name), print the report and return the exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    run_with(argv, &mut std::io::stdout().lock(), &mut std::io::stderr().lock())
}
