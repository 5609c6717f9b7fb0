//! `qmonty` command-line front end.
//!
//! Exit codes: 0 success, 1 verification/validation failure, 2 usage or
//! input-file error, 3 non-unitary strategy file, 4 parameter out of
//! domain, 5 no crossover in the threshold bracket.

use std::ffi::OsString;
use std::f64::consts::PI;
use std::fs;
use std::io::{self, Write};
use std::path::Path;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::analysis::{
    self, case_spec, default_gamma_grid, default_noise_grid, default_threshold_bracket, optimal_gamma,
    GammaCoefficients, Scenario, CASES,
};
use crate::channels::ChannelKind;
use crate::game::{BuiltinStrategy, GameOperators, InitialState, StrategyUnitary};
use crate::linalg::{ComplexMatrix, PureState, QUTRIT, REGISTER_DIM};
use crate::{tol, Error};

/// Strategy and state files are accepted this close to unit norm and then
/// renormalized.
const STATE_FILE_NORM_TOL: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    NotUnitary(String),
    #[error("{0}")]
    Domain(String),
    #[error("{0}")]
    NoSignChange(String),
    #[error(transparent)]
    Io(#[from] io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Io(_) => 2,
            CliError::NotUnitary(_) => 3,
            CliError::Domain(_) => 4,
            CliError::NoSignChange(_) => 5,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let msg = e.to_string();
        match e {
            Error::NotUnitary { .. } => CliError::NotUnitary(msg),
            Error::Domain(_) => CliError::Domain(msg),
            Error::NoSignChange { .. } => CliError::NoSignChange(msg),
            _ => CliError::Usage(msg),
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Debug, Parser)]
#[command(name = "qmonty", version, about = "Quantum Monty Hall simulator with qutrit noise channels", allow_negative_numbers = true)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Bob's expected payoff for a single configuration (JSON).
    Payoff(PayoffArgs),
    /// Payoff over a noise × γ grid (CSV).
    Sweep(SweepArgs),
    /// Compare simulated payoffs with the closed forms of the reference cases.
    Verify(VerifyArgs),
    /// Noise value at which switching and staying become equally good (JSON).
    Threshold(ThresholdArgs),
    /// Check Kraus completeness of a noise channel.
    ValidateChannel(ValidateArgs),
}

#[derive(Debug, Args)]
pub struct GameArgs {
    /// Reference case 1..7 (replaces --state/--alice/--bob/--channel).
    #[arg(long, conflicts_with_all = ["state", "alice", "bob", "channel", "a1", "a2"])]
    pub case: Option<u8>,
    /// psi1, psi2 or a JSON file with 27 [re, im] amplitudes.
    #[arg(long, required_unless_present = "case")]
    pub state: Option<String>,
    /// id, h, m1, m2 or a JSON strategy file.
    #[arg(long)]
    pub alice: Option<String>,
    /// id, m1, m2, h or a JSON strategy file.
    #[arg(long)]
    pub bob: Option<String>,
    /// none, se (spontaneous emission) or gp (generalized Pauli).
    #[arg(long, required_unless_present = "case")]
    pub channel: Option<String>,
    /// Einstein coefficient of |1⟩ (se only).
    #[arg(long)]
    pub a1: Option<f64>,
    /// Einstein coefficient of |2⟩ (se only).
    #[arg(long)]
    pub a2: Option<f64>,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct PayoffArgs {
    #[command(flatten)]
    pub game: GameArgs,
    /// Emission time t (se) or error probability p (gp).
    #[arg(long)]
    pub noise: Option<f64>,
    /// Mixing angle in radians; `pi/2` is accepted.
    #[arg(long, value_parser = parse_real)]
    pub gamma: f64,
    /// |c1| at or below which the moves are reported as indifferent.
    #[arg(long, default_value_t = tol::INDIFFERENCE)]
    pub indifference_tol: f64,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct SweepArgs {
    #[command(flatten)]
    pub game: GameArgs,
    /// LO:HI:STEP
    #[arg(long, value_parser = parse_range_arg, allow_hyphen_values = true)]
    pub noise_range: RangeGrid,
    /// LO:HI:STEP in radians
    #[arg(long, value_parser = parse_range_arg, allow_hyphen_values = true)]
    pub gamma_range: RangeGrid,
    /// Write the CSV here instead of standard output.
    #[arg(long)]
    pub out: Option<String>,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct VerifyArgs {
    /// Case number or `all`.
    #[arg(long)]
    pub case: String,
    #[arg(long, value_parser = parse_range_arg, allow_hyphen_values = true)]
    pub noise_range: Option<RangeGrid>,
    #[arg(long, value_parser = parse_range_arg, allow_hyphen_values = true)]
    pub gamma_range: Option<RangeGrid>,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct ThresholdArgs {
    #[arg(long)]
    pub case: u8,
    #[arg(long)]
    pub lo: Option<f64>,
    #[arg(long)]
    pub hi: Option<f64>,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct ValidateArgs {
    #[arg(long)]
    pub channel: String,
    #[arg(long)]
    pub noise: f64,
    #[arg(long, default_value_t = 1.0)]
    pub a1: f64,
    #[arg(long, default_value_t = 1.0)]
    pub a2: f64,
}

/// Parses a real number; `pi`, `pi/N` and `N*pi` are understood.
pub fn parse_real(s: &str) -> std::result::Result<f64, String> {
    let s = s.trim();
    let bad = || format!("'{s}' is not a number");
    let num = |t: &str| t.trim().parse::<f64>().map_err(|_| bad());
    if s == "pi" {
        return Ok(PI);
    }
    if let Some(den) = s.strip_prefix("pi/") {
        return Ok(PI / num(den)?);
    }
    if let Some(k) = s.strip_suffix("*pi") {
        return Ok(num(k)? * PI);
    }
    num(s)
}

/// `LO:HI:STEP`, inclusive of HI when HI − LO is a multiple of STEP
/// within 1e-12.
pub fn parse_range(s: &str) -> std::result::Result<Vec<f64>, String> {
    let parts: Vec<&str> = s.split(':').collect();
    let [lo, hi, step] = parts.as_slice() else {
        return Err(format!("range '{s}' must look like LO:HI:STEP"));
    };
    let (lo, hi, step) = (parse_real(lo)?, parse_real(hi)?, parse_real(step)?);
    if !(lo.is_finite() && hi.is_finite() && step.is_finite()) {
        return Err(format!("range '{s}' must be finite"));
    }
    if step <= 0.0 {
        return Err(format!("range step must be positive, got {step}"));
    }
    if hi < lo {
        return Err(format!("range upper bound {hi} is below lower bound {lo}"));
    }
    let ratio = (hi - lo) / step;
    let nearest = ratio.round();
    let (count, inclusive) = if (ratio - nearest).abs() <= 1e-12 * nearest.max(1.0) {
        (nearest as usize + 1, true)
    } else {
        (ratio.floor() as usize + 1, false)
    };
    Ok((0..count)
        .map(|i| if inclusive && i + 1 == count { hi } else { lo + i as f64 * step })
        .collect())
}

/// Grid points of a parsed `LO:HI:STEP` flag.
#[derive(Debug, Clone, PartialEq)]
pub struct RangeGrid(pub Vec<f64>);

fn parse_range_arg(s: &str) -> std::result::Result<RangeGrid, String> {
    parse_range(s).map(RangeGrid)
}

/// 12 significant digits, shortest decimal form.
pub fn fmt12(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    let rounded = round12(x);
    if rounded == 0.0 {
        return "0".into();
    }
    rounded.to_string()
}

fn round12(x: f64) -> f64 {
    format!("{x:.11e}").parse().expect("formatted float parses")
}

/// A float serialized with 12 significant digits.
#[derive(Debug, Clone, Copy)]
struct Sig12(f64);

impl Serialize for Sig12 {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        if self.0.is_finite() {
            let r = round12(self.0);
            s.serialize_f64(if r == 0.0 { 0.0 } else { r })
        } else {
            s.serialize_none()
        }
    }
}

fn matrix_from_pairs(rows: Vec<Vec<[f64; 2]>>) -> CliResult<ComplexMatrix> {
    if rows.len() != QUTRIT || rows.iter().any(|r| r.len() != QUTRIT) {
        return Err(CliError::Usage("strategy must be a 3x3 array of [re, im] pairs".into()));
    }
    let rows: Vec<Vec<Complex64>> =
        rows.into_iter().map(|r| r.into_iter().map(|[re, im]| Complex64::new(re, im)).collect()).collect();
    ComplexMatrix::from_rows(&rows).map_err(CliError::from)
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> CliResult<T> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("cannot parse {}: {e}", path.display())))
}

/// Reads a 3×3 strategy written as `[[[re, im], ...], ...]` (row-major).
pub fn parse_strategy_file(path: &Path) -> CliResult<StrategyUnitary> {
    let rows: Vec<Vec<[f64; 2]>> = read_json(path)?;
    let matrix = matrix_from_pairs(rows)?;
    StrategyUnitary::new(matrix, path.display().to_string()).map_err(|e| match e {
        Error::NotUnitary { deviation } => CliError::NotUnitary(format!(
            "strategy in {} is not unitary: max |U†U - I| = {deviation:e}",
            path.display()
        )),
        other => other.into(),
    })
}

/// Reads a 27-entry array of `[re, im]` amplitudes.
pub fn parse_state_file(path: &Path) -> CliResult<InitialState> {
    let amps: Vec<[f64; 2]> = read_json(path)?;
    if amps.len() != REGISTER_DIM {
        return Err(CliError::Usage(format!("state file must hold {REGISTER_DIM} amplitudes, got {}", amps.len())));
    }
    let amps: Vec<Complex64> = amps.into_iter().map(|[re, im]| Complex64::new(re, im)).collect();
    let state = PureState::with_tolerance(amps, STATE_FILE_NORM_TOL)?;
    let norm = state.norm();
    let normalized = PureState::new(state.amplitudes().iter().map(|z| z / norm).collect())?;
    Ok(InitialState::custom(normalized)?)
}

fn resolve_strategy(value: Option<&str>) -> CliResult<StrategyUnitary> {
    match value {
        None => Ok(StrategyUnitary::identity()),
        Some(v) => match v.parse::<BuiltinStrategy>() {
            Ok(b) => Ok(StrategyUnitary::builtin(b)),
            Err(_) => parse_strategy_file(Path::new(v)),
        },
    }
}

fn resolve_state(value: &str) -> CliResult<InitialState> {
    match value {
        "psi1" => Ok(InitialState::Psi1),
        "psi2" => Ok(InitialState::Psi2),
        path => parse_state_file(Path::new(path)),
    }
}

fn resolve_scenario(args: &GameArgs) -> CliResult<Scenario> {
    if let Some(case) = args.case {
        return Ok(case_spec(case)?.scenario);
    }
    let state = args.state.as_deref().ok_or_else(|| CliError::Usage("--state is required".into()))?;
    let channel = args.channel.as_deref().ok_or_else(|| CliError::Usage("--channel is required".into()))?;
    let channel: ChannelKind = channel.parse().map_err(|e: Error| CliError::Usage(e.to_string()))?;
    if channel != ChannelKind::SpontaneousEmission && (args.a1.is_some() || args.a2.is_some()) {
        return Err(CliError::Usage("--a1/--a2 only apply to --channel se".into()));
    }
    let mut scenario = Scenario::new(
        resolve_state(state)?,
        resolve_strategy(args.alice.as_deref())?,
        resolve_strategy(args.bob.as_deref())?,
        channel,
    );
    scenario.a1 = args.a1.unwrap_or(1.0);
    scenario.a2 = args.a2.unwrap_or(1.0);
    Ok(scenario)
}

#[derive(Serialize)]
struct PayoffReport<'a> {
    payoff: Sig12,
    p_switch: Sig12,
    p_not_switch: Sig12,
    optimal_gamma: Sig12,
    optimal_label: &'a str,
    case: Option<u8>,
    state: &'a str,
    alice: &'a str,
    bob: &'a str,
    channel: &'a str,
    noise: Option<Sig12>,
    gamma: Sig12,
    a1: Option<Sig12>,
    a2: Option<Sig12>,
}

pub fn cmd_payoff(args: &PayoffArgs, out: &mut dyn Write) -> CliResult<()> {
    let scenario = resolve_scenario(&args.game)?;
    let noise = match (args.noise, scenario.channel) {
        (Some(x), _) => x,
        (None, ChannelKind::None) => 0.0,
        (None, _) => return Err(CliError::Usage("--noise is required for a noisy channel".into())),
    };
    let cfg = scenario.config(noise, args.gamma)?;
    let branches = GameOperators::canonical().branches(&cfg)?;
    let outcome = branches.mix(args.gamma);
    let coeffs = GammaCoefficients::from_samples(branches.mix(0.0).payoff, branches.mix(std::f64::consts::FRAC_PI_4).payoff);
    let (gamma_star, label) = optimal_gamma(coeffs.c1, args.indifference_tol);

    let is_se = scenario.channel == ChannelKind::SpontaneousEmission;
    let report = PayoffReport {
        payoff: Sig12(outcome.payoff),
        p_switch: Sig12(outcome.p_switch),
        p_not_switch: Sig12(outcome.p_not_switch),
        optimal_gamma: Sig12(gamma_star),
        optimal_label: label.as_str(),
        case: args.game.case,
        state: scenario.initial.name(),
        alice: scenario.alice.name(),
        bob: scenario.bob.name(),
        channel: scenario.channel.as_str(),
        noise: (scenario.channel != ChannelKind::None).then_some(Sig12(noise)),
        gamma: Sig12(args.gamma),
        a1: is_se.then_some(Sig12(scenario.a1)),
        a2: is_se.then_some(Sig12(scenario.a2)),
    };
    serde_json::to_writer(&mut *out, &report).map_err(io::Error::from)?;
    writeln!(out)?;
    Ok(())
}

pub fn write_csv(table: &analysis::SweepTable, out: &mut dyn Write) -> io::Result<()> {
    let mut buf = String::with_capacity(table.rows.len() * 48 + 20);
    buf.push_str("noise,gamma,payoff\n");
    for r in &table.rows {
        buf.push_str(&fmt12(r.noise));
        buf.push(',');
        buf.push_str(&fmt12(r.gamma));
        buf.push(',');
        buf.push_str(&fmt12(r.payoff));
        buf.push('\n');
    }
    out.write_all(buf.as_bytes())
}

pub fn cmd_sweep(args: &SweepArgs, out: &mut dyn Write) -> CliResult<()> {
    let scenario = resolve_scenario(&args.game)?;
    let table = analysis::sweep(&scenario, &args.noise_range.0, &args.gamma_range.0)?;
    match &args.out {
        Some(path) => {
            let mut file = io::BufWriter::new(fs::File::create(path)?);
            write_csv(&table, &mut file)?;
            file.flush()?;
        }
        None => write_csv(&table, out)?,
    }
    Ok(())
}

/// One `case K: max_err=E pass|fail` line per case; the flag is true when
/// all cases pass.
pub fn verify_lines(
    ops: &GameOperators,
    cases: &[u8],
    noise_range: Option<&[f64]>,
    gamma_range: Option<&[f64]>,
) -> CliResult<(String, bool)> {
    let gammas = gamma_range.map_or_else(default_gamma_grid, <[f64]>::to_vec);
    let mut text = String::new();
    let mut all_pass = true;
    for &case in cases {
        let spec = case_spec(case)?;
        let noise = noise_range.map_or_else(|| default_noise_grid(spec.scenario.channel), <[f64]>::to_vec);
        let report = analysis::verify_case_with(ops, case, &noise, &gammas)?;
        all_pass &= report.pass;
        text.push_str(&report.to_string());
        text.push('\n');
    }
    Ok((text, all_pass))
}

/// Returns whether every case passed.
pub fn cmd_verify(args: &VerifyArgs, out: &mut dyn Write) -> CliResult<bool> {
    let cases: Vec<u8> = if args.case == "all" {
        CASES.to_vec()
    } else {
        vec![args.case.parse().map_err(|_| CliError::Usage(format!("--case must be 1..7 or all, got '{}'", args.case)))?]
    };
    let (text, pass) = verify_lines(
        GameOperators::canonical(),
        &cases,
        args.noise_range.as_ref().map(|g| g.0.as_slice()),
        args.gamma_range.as_ref().map(|g| g.0.as_slice()),
    )?;
    out.write_all(text.as_bytes())?;
    Ok(pass)
}

#[derive(Serialize)]
struct ThresholdReport {
    case: u8,
    threshold: Sig12,
}

pub fn cmd_threshold(args: &ThresholdArgs, out: &mut dyn Write) -> CliResult<()> {
    let spec = case_spec(args.case)?;
    let (lo, hi) = default_threshold_bracket(spec.scenario.channel);
    let (lo, hi) = (args.lo.unwrap_or(lo), args.hi.unwrap_or(hi));
    let value = analysis::threshold(args.case, lo, hi)?;
    serde_json::to_writer(&mut *out, &ThresholdReport { case: args.case, threshold: Sig12(value) })
        .map_err(io::Error::from)?;
    writeln!(out)?;
    Ok(())
}

/// Returns whether both the single-qutrit and the extended channel pass.
pub fn cmd_validate_channel(args: &ValidateArgs, out: &mut dyn Write) -> CliResult<bool> {
    let kind: ChannelKind = args.channel.parse().map_err(|e: Error| CliError::Usage(e.to_string()))?;
    let spec = kind.at_with_coefficients(args.noise, args.a1, args.a2)?;
    let single = spec.single_qutrit()?;
    let extended = single.extend_three()?;
    let mut pass = true;
    for (name, ch) in [("single", &single), ("extended", &extended)] {
        let report = ch.validate_cptp();
        pass &= report.pass;
        writeln!(
            out,
            "{name} {} ({} elements): max_dev={:.3e} {}",
            ch.label(),
            ch.elements().len(),
            report.deviation,
            if report.pass { "pass" } else { "fail" }
        )?;
    }
    Ok(pass)
}

fn dispatch(cli: &Cli, out: &mut dyn Write) -> CliResult<i32> {
    let ok = |pass: bool| if pass { 0 } else { 1 };
    match &cli.command {
        Command::Payoff(a) => cmd_payoff(a, out).map(|_| 0),
        Command::Sweep(a) => cmd_sweep(a, out).map(|_| 0),
        Command::Verify(a) => cmd_verify(a, out).map(ok),
        Command::Threshold(a) => cmd_threshold(a, out).map(|_| 0),
        Command::ValidateChannel(a) => cmd_validate_channel(a, out).map(ok),
    }
}

/// Runs the CLI and returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let rendered = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(rendered.as_bytes()) } else { out.write_all(rendered.as_bytes()) };
            return e.exit_code();
        }
    };
    match dispatch(&cli, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_str(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(std::iter::once("qmonty").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn twelve_digit_formatting() {
        assert_eq!(fmt12(2.0 / 3.0), "0.666666666667");
        assert_eq!(fmt12(1.0 / 3.0), "0.333333333333");
        assert_eq!(fmt12(7.0 / 12.0), "0.583333333333");
        assert_eq!(fmt12(0.5), "0.5");
        assert_eq!(fmt12(1.0), "1");
        assert_eq!(fmt12(0.0), "0");
        assert_eq!(fmt12(-0.0), "0");
        assert_eq!(fmt12(0.05 * 3.0), "0.15");
        assert_eq!(fmt12(std::f64::consts::FRAC_PI_2), "1.57079632679");
    }

    #[test]
    fn real_parsing() {
        assert_eq!(parse_real("pi/2").unwrap(), std::f64::consts::FRAC_PI_2);
        assert_eq!(parse_real("pi").unwrap(), PI);
        assert_eq!(parse_real("0.5*pi").unwrap(), 0.5 * PI);
        assert_eq!(parse_real(" 0.25 ").unwrap(), 0.25);
        assert!(parse_real("half").is_err());
        assert!(parse_real("pi/x").is_err());
    }

    #[test]
    fn range_grammar() {
        assert_eq!(parse_range("0:3:0.05").unwrap().len(), 61);
        assert_eq!(*parse_range("0:3:0.05").unwrap().last().unwrap(), 3.0);
        let g = parse_range("0:1.5707963:0.05").unwrap();
        assert_eq!(g.len(), 32);
        assert!((g[31] - 1.55).abs() < 1e-12);
        assert_eq!(parse_range("0.3:0.3:1").unwrap(), vec![0.3]);
        assert_eq!(parse_range("0:1:0.01").unwrap().len(), 101);
        assert_eq!(parse_range("0:pi/2:pi/8").unwrap().len(), 5);
        assert!(parse_range("0:1").is_err());
        assert!(parse_range("0:1:0").is_err());
        assert!(parse_range("1:0:0.1").is_err());
        assert!(parse_range("a:1:0.1").is_err());
    }

    #[test]
    fn payoff_case_json() {
        let (code, out, err) = run_str(&["payoff", "--case", "1", "--noise", "0", "--gamma", "0"]);
        assert_eq!(code, 0, "{err}");
        assert!(err.is_empty());
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["payoff"].as_f64().unwrap(), 0.666666666667);
        assert_eq!(v["optimal_label"], "switch");
        assert_eq!(v["case"], 1);
        let keys: Vec<&str> = out.trim_matches(|c| c == '{' || c == '}' || c == '\n')
            .split(',')
            .map(|kv| kv.split(':').next().unwrap().trim_matches('"'))
            .collect();
        assert_eq!(&keys[..5], ["payoff", "p_switch", "p_not_switch", "optimal_gamma", "optimal_label"]);
    }

    #[test]
    fn payoff_flag_errors() {
        // --case with explicit configuration
        let (code, _, err) = run_str(&["payoff", "--case", "1", "--state", "psi1", "--noise", "0", "--gamma", "0"]);
        assert_eq!(code, 2);
        assert!(!err.is_empty());
        // missing noise for a noisy channel
        let (code, _, _) = run_str(&["payoff", "--state", "psi1", "--channel", "se", "--gamma", "0"]);
        assert_eq!(code, 2);
        // unknown case
        let (code, _, _) = run_str(&["payoff", "--case", "9", "--noise", "0", "--gamma", "0"]);
        assert_eq!(code, 2);
        // out-of-domain noise and γ
        let (code, out, _) = run_str(&["payoff", "--case", "5", "--noise", "1.5", "--gamma", "0"]);
        assert_eq!(code, 4);
        assert!(out.is_empty());
        let (code, _, _) = run_str(&["payoff", "--case", "1", "--noise", "-1", "--gamma", "0"]);
        assert_eq!(code, 4);
        let (code, _, _) = run_str(&["payoff", "--case", "1", "--noise", "inf", "--gamma", "0"]);
        assert_eq!(code, 4);
        let (code, _, _) = run_str(&["payoff", "--case", "1", "--noise", "0", "--gamma", "2"]);
        assert_eq!(code, 4);
    }

    #[test]
    fn threshold_and_validate() {
        let (code, out, _) = run_str(&["threshold", "--case", "1"]);
        assert_eq!(code, 0);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert!((v["threshold"].as_f64().unwrap() - std::f64::consts::LN_2).abs() < 1e-8);
        assert_eq!(run_str(&["threshold", "--case", "5"]).0, 5);

        assert_eq!(run_str(&["validate-channel", "--channel", "se", "--noise", "1.5"]).0, 0);
        assert_eq!(run_str(&["validate-channel", "--channel", "gp", "--noise", "1.0"]).0, 0);
        assert_eq!(run_str(&["validate-channel", "--channel", "gp", "--noise", "1.5"]).0, 4);
        assert_eq!(run_str(&["validate-channel", "--channel", "xx", "--noise", "0.5"]).0, 2);
    }
}
