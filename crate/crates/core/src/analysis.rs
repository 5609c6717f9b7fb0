//! Reference scenarios, closed-form payoffs and everything derived from
//! simulated payoff surfaces: sweeps, optimal mixing, crossover thresholds
//! and simulation-versus-formula verification.
//!
//! Every payoff has the shape `c0 + c1·cos(2γ)` in the mixing angle, with
//! `c0 = (p_switch + p_not_switch)/2` and `c1 = (p_switch − p_not_switch)/2`.
//! A positive `c1` means switching (γ = 0) is optimal.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};
use std::fmt;

use num_rational::Ratio;
use rayon::prelude::*;

use crate::channels::ChannelKind;
use crate::error::{Error, Result};
use crate::game::{check_gamma, BuiltinStrategy, GameConfig, GameOperators, InitialState, StrategyUnitary};
use crate::tol;

/// Third mixing angle used to confirm the cos(2γ) shape.
const CHECK_GAMMA: f64 = 1.0;
const MAX_BISECTIONS: usize = 200;

/// A game setup with the noise parameter and γ left free.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub initial: InitialState,
    pub alice: StrategyUnitary,
    pub bob: StrategyUnitary,
    pub channel: ChannelKind,
    pub a1: f64,
    pub a2: f64,
}

impl Scenario {
    pub fn new(initial: InitialState, alice: StrategyUnitary, bob: StrategyUnitary, channel: ChannelKind) -> Self {
        Self { initial, alice, bob, channel, a1: 1.0, a2: 1.0 }
    }

    pub fn config(&self, noise: f64, gamma: f64) -> Result<GameConfig> {
        let spec = self.channel.at_with_coefficients(noise, self.a1, self.a2)?;
        GameConfig::new(self.initial.clone(), self.alice.clone(), self.bob.clone(), spec, gamma)
    }
}

pub type Formula = fn(f64, f64) -> f64;

/// One of the seven reference scenarios together with its closed form.
#[derive(Debug, Clone)]
pub struct CaseSpec {
    pub id: u8,
    pub scenario: Scenario,
    pub formula: Formula,
}

fn se_case_1(t: f64, g: f64) -> f64 {
    let (e1, e2) = (t.exp(), (2.0 * t).exp());
    (-2.0 * t).exp() * (3.0 * e2 + (-4.0 + 8.0 * e1 - 3.0 * e2) * (2.0 * g).cos()) / 6.0
}

fn se_case_2(t: f64, g: f64) -> f64 {
    let (e1, e2) = (t.exp(), (2.0 * t).exp());
    (-2.0 * t).exp() * (3.0 * e2 + (2.0 - 4.0 * e1 + 3.0 * e2) * (2.0 * g).cos()) / 6.0
}

fn se_case_3(t: f64, g: f64) -> f64 {
    let (e1, e2) = (t.exp(), (2.0 * t).exp());
    (-2.0 * t).exp() * (3.0 * e2 + (-8.0 + 8.0 * e1 - 3.0 * e2) * (2.0 * g).cos()) / 6.0
}

fn se_case_4(t: f64, g: f64) -> f64 {
    let (e1, e2) = (t.exp(), (2.0 * t).exp());
    (-2.0 * t).exp() * (3.0 * e2 + 2.0 * (-1.0 + e1) * (2.0 * g).cos()) / 6.0
}

fn gp_case_5(p: f64, g: f64) -> f64 {
    ((1.0 - p) * (2.0 * g).cos() + 3.0 - p) / 6.0
}

fn gp_case_6(p: f64, g: f64) -> f64 {
    let (p2, p3) = (p * p, p * p * p);
    (2.0 * p3 - 4.0 * p2 + (2.0 * p3 - 8.0 * p2 + 9.0 * p - 3.0) * (2.0 * g).cos() + p + 3.0) / 6.0
}

fn gp_case_7(p: f64, g: f64) -> f64 {
    let (p2, p3) = (p * p, p * p * p);
    (p3 + (p2 - 4.0 * p + 3.0) * p * (2.0 * g).cos() - 2.0 * p2 - p + 6.0) / 12.0
}

pub const CASES: [u8; 7] = [1, 2, 3, 4, 5, 6, 7];

pub fn case_spec(id: u8) -> Result<CaseSpec> {
    use BuiltinStrategy::*;
    use ChannelKind::*;
    let (initial, alice, bob, channel, formula): (_, _, _, _, Formula) = match id {
        1 => (InitialState::Psi1, Identity, Identity, SpontaneousEmission, se_case_1),
        2 => (InitialState::Psi1, Identity, M1, SpontaneousEmission, se_case_2),
        3 => (InitialState::Psi2, Identity, Identity, SpontaneousEmission, se_case_3),
        4 => (InitialState::Psi2, H, Identity, SpontaneousEmission, se_case_4),
        5 => (InitialState::Psi1, Identity, Identity, GeneralizedPauli, gp_case_5),
        6 => (InitialState::Psi2, Identity, Identity, GeneralizedPauli, gp_case_6),
        7 => (InitialState::Psi2, H, Identity, GeneralizedPauli, gp_case_7),
        other => return Err(Error::UnknownCase(other)),
    };
    let scenario = Scenario::new(
        initial,
        StrategyUnitary::builtin(alice),
        StrategyUnitary::builtin(bob),
        channel,
    );
    Ok(CaseSpec { id, scenario, formula })
}

impl CaseSpec {
    fn check_point(&self, noise: f64, gamma: f64) -> Result<()> {
        self.scenario.channel.check_noise(noise)?;
        check_gamma(gamma)
    }

    pub fn closed_form(&self, noise: f64, gamma: f64) -> Result<f64> {
        self.check_point(noise, gamma)?;
        Ok((self.formula)(noise, gamma))
    }
}

pub fn closed_form_payoff(case: u8, noise: f64, gamma: f64) -> Result<f64> {
    case_spec(case)?.closed_form(noise, gamma)
}

pub fn simulate_case(case: u8, noise: f64, gamma: f64) -> Result<f64> {
    let spec = case_spec(case)?;
    Ok(GameOperators::canonical().play(&spec.scenario.config(noise, gamma)?)?.payoff)
}

/// Exact win probability of the classical game with a uniformly hidden
/// prize and a uniformly random first pick.
pub fn classical_reference(switch: bool) -> Ratio<u32> {
    let mut wins = 0;
    for prize in 0..3u8 {
        for pick in 0..3u8 {
            let opened = (0..3).find(|&b| b != prize && b != pick).expect("a free box always exists");
            let last = if switch { 3 - pick - opened } else { pick };
            if last == prize {
                wins += 1;
            }
        }
    }
    Ratio::new(wins, 9)
}

/// Payoff as `c0 + c1·cos(2γ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaCoefficients {
    pub c0: f64,
    pub c1: f64,
}

impl GammaCoefficients {
    /// From payoffs of the same configuration at γ = 0 and γ = π/4.
    pub fn from_samples(payoff_at_zero: f64, payoff_at_quarter_pi: f64) -> Self {
        let c0 = payoff_at_quarter_pi;
        Self { c0, c1: payoff_at_zero - c0 }
    }

    pub fn eval(&self, gamma: f64) -> f64 {
        self.c0 + self.c1 * (2.0 * gamma).cos()
    }

    /// Fails unless `payoff` at `gamma` is reproduced within 1e-10.
    pub fn check(&self, gamma: f64, payoff: f64) -> Result<()> {
        let residual = (self.eval(gamma) - payoff).abs();
        if residual > tol::STRUCTURE {
            return Err(Error::NotCosineFamily { gamma, residual });
        }
        Ok(())
    }
}

/// Coefficients of a scenario's payoff at fixed noise, from simulation.
pub fn gamma_coefficients(ops: &GameOperators, scenario: &Scenario, noise: f64) -> Result<GammaCoefficients> {
    let branches = ops.branches(&scenario.config(noise, 0.0)?)?;
    let coeffs = GammaCoefficients::from_samples(branches.mix(0.0).payoff, branches.mix(FRAC_PI_4).payoff);
    coeffs.check(CHECK_GAMMA, branches.mix(CHECK_GAMMA).payoff)?;
    Ok(coeffs)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MoveLabel {
    Switch,
    NotSwitch,
    Indifferent,
}

impl MoveLabel {
    pub fn as_str(self) -> &'static str {
        match self {
            MoveLabel::Switch => "switch",
            MoveLabel::NotSwitch => "not_switch",
            MoveLabel::Indifferent => "indifferent",
        }
    }
}

impl fmt::Display for MoveLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Best mixing angle for a given cos(2γ) coefficient (γ = 0 is switching).
pub fn optimal_gamma(c1: f64, tol: f64) -> (f64, MoveLabel) {
    if c1 > tol {
        (0.0, MoveLabel::Switch)
    } else if c1 < -tol {
        (FRAC_PI_2, MoveLabel::NotSwitch)
    } else {
        (0.0, MoveLabel::Indifferent)
    }
}

/// Root of `f` on `[lo, hi]` by bisection, to an interval width of `tol`.
pub fn bisect(f: impl Fn(f64) -> Result<f64>, mut lo: f64, mut hi: f64, tol: f64) -> Result<f64> {
    let mut f_lo = f(lo)?;
    let f_hi = f(hi)?;
    if f_lo == 0.0 {
        return Ok(lo);
    }
    if f_hi == 0.0 {
        return Ok(hi);
    }
    if f_lo.signum() == f_hi.signum() {
        return Err(Error::NoSignChange { lo, hi });
    }
    for _ in 0..MAX_BISECTIONS {
        if hi - lo <= tol {
            break;
        }
        let mid = 0.5 * (lo + hi);
        let f_mid = f(mid)?;
        if f_mid == 0.0 {
            return Ok(mid);
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Noise value where the optimal final move flips, found by bisection on
/// the simulated `c1`.
pub fn threshold_for(ops: &GameOperators, scenario: &Scenario, lo: f64, hi: f64) -> Result<f64> {
    if !(lo < hi) {
        return Err(Error::Domain(format!("threshold bracket [{lo}, {hi}] is empty")));
    }
    scenario.channel.check_noise(lo)?;
    scenario.channel.check_noise(hi)?;
    bisect(|x| Ok(gamma_coefficients(ops, scenario, x)?.c1), lo, hi, tol::THRESHOLD)
}

pub fn threshold(case: u8, lo: f64, hi: f64) -> Result<f64> {
    threshold_for(GameOperators::canonical(), &case_spec(case)?.scenario, lo, hi)
}

/// Bracket used when none is given: [0.1, 2] in t or [0.1, 0.99] in p.
pub fn default_threshold_bracket(channel: ChannelKind) -> (f64, f64) {
    match channel {
        ChannelKind::GeneralizedPauli => (0.1, 0.99),
        _ => (0.1, 2.0),
    }
}

/// `n` evenly spaced points from `lo` to `hi` inclusive.
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..n)
            .map(|i| if i == n - 1 { hi } else { lo + (hi - lo) * i as f64 / (n - 1) as f64 })
            .collect(),
    }
}

/// 21 points on [0, 3] for emission time, [0, 1] otherwise.
pub fn default_noise_grid(channel: ChannelKind) -> Vec<f64> {
    match channel {
        ChannelKind::SpontaneousEmission => linspace(0.0, 3.0, 21),
        _ => linspace(0.0, 1.0, 21),
    }
}

/// 21 points on [0, π/2].
pub fn default_gamma_grid() -> Vec<f64> {
    linspace(0.0, FRAC_PI_2, 21)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub noise: f64,
    pub gamma: f64,
    pub payoff: f64,
}

/// Payoff on a noise × γ grid, rows in noise-major order.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepTable {
    pub noise_values: Vec<f64>,
    pub gamma_values: Vec<f64>,
    pub rows: Vec<SweepRow>,
}

impl SweepTable {
    pub fn max(&self) -> Option<SweepRow> {
        self.rows.iter().copied().reduce(|a, b| if b.payoff > a.payoff { b } else { a })
    }

    pub fn min(&self) -> Option<SweepRow> {
        self.rows.iter().copied().reduce(|a, b| if b.payoff < a.payoff { b } else { a })
    }
}

fn check_grid(values: &[f64], what: &str, check: impl Fn(f64) -> Result<()>) -> Result<()> {
    if values.is_empty() {
        return Err(Error::Grid(format!("{what} grid is empty")));
    }
    if values.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::Grid(format!("{what} grid is not strictly ascending")));
    }
    values.iter().try_for_each(|&v| check(v))
}

/// Simulated payoff at every grid point. Noise values are evaluated in
/// parallel; row order does not depend on scheduling.
pub fn sweep_with(ops: &GameOperators, scenario: &Scenario, noise_grid: &[f64], gamma_grid: &[f64]) -> Result<SweepTable> {
    check_grid(noise_grid, "noise", |x| scenario.channel.check_noise(x))?;
    check_grid(gamma_grid, "γ", check_gamma)?;
    let blocks: Vec<Vec<SweepRow>> = noise_grid
        .par_iter()
        .map(|&noise| {
            let branches = ops.branches(&scenario.config(noise, 0.0)?)?;
            Ok(gamma_grid
                .iter()
                .map(|&gamma| SweepRow { noise, gamma, payoff: branches.mix(gamma).payoff })
                .collect())
        })
        .collect::<Result<_>>()?;
    Ok(SweepTable {
        noise_values: noise_grid.to_vec(),
        gamma_values: gamma_grid.to_vec(),
        rows: blocks.into_iter().flatten().collect(),
    })
}

pub fn sweep(scenario: &Scenario, noise_grid: &[f64], gamma_grid: &[f64]) -> Result<SweepTable> {
    sweep_with(GameOperators::canonical(), scenario, noise_grid, gamma_grid)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyReport {
    pub case: u8,
    pub max_err: f64,
    pub pass: bool,
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "case {}: max_err={:.3e} {}",
            self.case,
            self.max_err,
            if self.pass { "pass" } else { "fail" }
        )
    }
}

/// Largest |simulated − formula| over the grid.
pub fn max_formula_deviation(
    ops: &GameOperators,
    scenario: &Scenario,
    formula: Formula,
    noise_grid: &[f64],
    gamma_grid: &[f64],
) -> Result<f64> {
    let table = sweep_with(ops, scenario, noise_grid, gamma_grid)?;
    Ok(table
        .rows
        .iter()
        .map(|r| (r.payoff - formula(r.noise, r.gamma)).abs())
        .fold(0.0, f64::max))
}

pub fn verify_case_with(ops: &GameOperators, case: u8, noise_grid: &[f64], gamma_grid: &[f64]) -> Result<VerifyReport> {
    let spec = case_spec(case)?;
    let max_err = max_formula_deviation(ops, &spec.scenario, spec.formula, noise_grid, gamma_grid)?;
    Ok(VerifyReport { case, max_err, pass: max_err <= tol::PAYOFF })
}

pub fn verify_case(case: u8, noise_grid: &[f64], gamma_grid: &[f64]) -> Result<VerifyReport> {
    verify_case_with(GameOperators::canonical(), case, noise_grid, gamma_grid)
}
