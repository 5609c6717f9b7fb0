//! The three-qutrit Monty Hall game: box opening, switching, strategies and
//! Bob's expected payoff.
//!
//! One round runs noise → `I⊗B⊗A` → open → switch (or not) → measure whether
//! Bob's register equals Alice's.

use std::f64::consts::FRAC_PI_2;
use std::fmt;
use std::str::FromStr;
use std::sync::LazyLock;

use num_complex::Complex64;

use crate::channels::NoiseSpec;
use crate::error::{Error, Result};
use crate::linalg::{basis_index, basis_trits, c, ComplexMatrix, DensityMatrix, PureState, QUTRIT, REGISTER_DIM};
use crate::tol;

/// Slack allowed above π/2 when validating γ.
const GAMMA_SLACK: f64 = 1e-12;

/// The box in {0,1,2} that is neither `x` nor `y` (requires `x != y`).
fn third(x: u8, y: u8) -> u8 {
    debug_assert_ne!(x, y);
    3 - x - y
}

fn permutation_matrix(map: impl Fn(u8, u8, u8) -> (u8, u8, u8)) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(REGISTER_DIM, REGISTER_DIM);
    for col in 0..REGISTER_DIM {
        let (o, b, a) = basis_trits(col);
        let (o2, b2, a2) = map(o, b, a);
        let row = basis_index(o2, b2, a2).expect("map stays within trits");
        m.set(row, col, c(1.0, 0.0));
    }
    m
}

/// Box opening O.
///
/// For b ≠ a the opened register is shifted by the box that is neither
/// Bob's nor the prize; for b = a it is shifted by a + 1.
pub fn open_operator() -> ComplexMatrix {
    permutation_matrix(|o, b, a| {
        let shift = if b != a { third(a, b) } else { a + 1 };
        ((o + shift) % 3, b, a)
    })
}

/// Switching S: Bob moves to the box that is neither his nor the opened
/// one. States with o = b are left alone.
pub fn switch_operator() -> ComplexMatrix {
    permutation_matrix(|o, b, a| if o != b { (o, third(o, b), a) } else { (o, b, a) })
}

fn win_mask() -> Vec<bool> {
    (0..REGISTER_DIM)
        .map(|i| {
            let (_, b, a) = basis_trits(i);
            b == a
        })
        .collect()
}

/// Diagonal projector onto the nine states with b = a.
pub fn win_projector() -> ComplexMatrix {
    let diag: Vec<Complex64> = win_mask().into_iter().map(|w| c(if w { 1.0 } else { 0.0 }, 0.0)).collect();
    ComplexMatrix::diag(&diag)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BuiltinStrategy {
    Identity,
    M1,
    M2,
    H,
}

impl BuiltinStrategy {
    pub fn name(self) -> &'static str {
        match self {
            BuiltinStrategy::Identity => "id",
            BuiltinStrategy::M1 => "m1",
            BuiltinStrategy::M2 => "m2",
            BuiltinStrategy::H => "h",
        }
    }

    pub fn matrix(self) -> ComplexMatrix {
        match self {
            BuiltinStrategy::Identity => ComplexMatrix::identity(QUTRIT),
            BuiltinStrategy::M1 => {
                ComplexMatrix::from_real_rows(&[[0.0, 1.0, 0.0], [0.0, 0.0, 1.0], [1.0, 0.0, 0.0]]).unwrap()
            }
            BuiltinStrategy::M2 => {
                ComplexMatrix::from_real_rows(&[[0.0, 0.0, 1.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0]]).unwrap()
            }
            BuiltinStrategy::H => {
                let r2 = 2f64.sqrt();
                let r7 = 7f64.sqrt();
                let q = 4.0 * r2;
                ComplexMatrix::from_rows(&[
                    [c(1.0 / r2, 0.0), c(0.5, 0.0), c(0.5, 0.0)],
                    [c(-0.5, 0.0), c(3.0 / q, -r7 / q), c(1.0 / q, r7 / q)],
                    [c(-1.0 / q, -r7 / q), c(-3.0 / 8.0, r7 / 8.0), c(5.0 / 8.0, r7 / 8.0)],
                ])
                .unwrap()
            }
        }
    }
}

impl FromStr for BuiltinStrategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "id" | "identity" => Ok(BuiltinStrategy::Identity),
            "m1" => Ok(BuiltinStrategy::M1),
            "m2" => Ok(BuiltinStrategy::M2),
            "h" => Ok(BuiltinStrategy::H),
            other => Err(Error::Domain(format!("unknown strategy '{other}'"))),
        }
    }
}

/// A player's 3×3 unitary move.
#[derive(Debug, Clone, PartialEq)]
pub struct StrategyUnitary {
    matrix: ComplexMatrix,
    name: String,
}

impl StrategyUnitary {
    pub fn new(matrix: ComplexMatrix, name: impl Into<String>) -> Result<Self> {
        if matrix.rows() != QUTRIT || matrix.cols() != QUTRIT {
            return Err(Error::DimensionMismatch(format!(
                "strategy must be 3x3, got {}x{}",
                matrix.rows(),
                matrix.cols()
            )));
        }
        let deviation = matrix.unitarity_deviation()?;
        if deviation > tol::STRATEGY_UNITARY {
            return Err(Error::NotUnitary { deviation });
        }
        Ok(Self { matrix, name: name.into() })
    }

    pub fn builtin(which: BuiltinStrategy) -> Self {
        Self { matrix: which.matrix(), name: which.name().into() }
    }

    pub fn identity() -> Self {
        Self::builtin(BuiltinStrategy::Identity)
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn name(&self) -> &str {
        &self.name
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum InitialState {
    /// |0⟩ ⊗ uniform ⊗ uniform.
    Psi1,
    /// |0⟩ ⊗ (|00⟩ + |11⟩ + |22⟩)/√3.
    Psi2,
    Custom(PureState),
}

impl InitialState {
    pub fn custom(state: PureState) -> Result<Self> {
        if state.dim() != REGISTER_DIM {
            return Err(Error::InvalidState(format!(
                "initial state must have dimension {REGISTER_DIM}, got {}",
                state.dim()
            )));
        }
        Ok(InitialState::Custom(state))
    }

    pub fn state(&self) -> PureState {
        match self {
            InitialState::Psi1 => {
                let mut amps = vec![Complex64::default(); REGISTER_DIM];
                for amp in amps.iter_mut().take(9) {
                    *amp = c(1.0 / 3.0, 0.0);
                }
                PureState::new(amps).expect("normalized")
            }
            InitialState::Psi2 => {
                let mut amps = vec![Complex64::default(); REGISTER_DIM];
                for k in 0..3 {
                    amps[4 * k] = c(1.0 / 3f64.sqrt(), 0.0);
                }
                PureState::new(amps).expect("normalized")
            }
            InitialState::Custom(s) => s.clone(),
        }
    }

    pub fn name(&self) -> &str {
        match self {
            InitialState::Psi1 => "psi1",
            InitialState::Psi2 => "psi2",
            InitialState::Custom(_) => "custom",
        }
    }
}

pub fn initial_state(which: &InitialState) -> PureState {
    which.state()
}

/// Everything that defines one game round.
#[derive(Debug, Clone, PartialEq)]
pub struct GameConfig {
    pub initial: InitialState,
    pub alice: StrategyUnitary,
    pub bob: StrategyUnitary,
    pub noise: NoiseSpec,
    gamma: f64,
}

impl GameConfig {
    pub fn new(
        initial: InitialState,
        alice: StrategyUnitary,
        bob: StrategyUnitary,
        noise: NoiseSpec,
        gamma: f64,
    ) -> Result<Self> {
        check_gamma(gamma)?;
        Ok(Self { initial, alice, bob, noise, gamma })
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn with_gamma(&self, gamma: f64) -> Result<Self> {
        check_gamma(gamma)?;
        Ok(Self { gamma, ..self.clone() })
    }
}

pub fn check_gamma(gamma: f64) -> Result<()> {
    if !(0.0..=FRAC_PI_2 + GAMMA_SLACK).contains(&gamma) {
        return Err(Error::Domain(format!("γ must lie in [0, π/2], got {gamma}")));
    }
    Ok(())
}

/// Win probabilities of the two pure final moves.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Branches {
    pub p_switch: f64,
    pub p_not_switch: f64,
}

impl Branches {
    /// cos²γ weights the switching branch, sin²γ the staying one.
    pub fn mix(self, gamma: f64) -> GameOutcome {
        let (s, co) = gamma.sin_cos();
        GameOutcome {
            gamma,
            payoff: co * co * self.p_switch + s * s * self.p_not_switch,
            p_switch: self.p_switch,
            p_not_switch: self.p_not_switch,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GameOutcome {
    pub gamma: f64,
    pub payoff: f64,
    pub p_switch: f64,
    pub p_not_switch: f64,
}

/// The fixed operators of the game. Tests can swap in modified ones.
#[derive(Debug, Clone)]
pub struct GameOperators {
    open: ComplexMatrix,
    switch: ComplexMatrix,
    win: Vec<bool>,
}

static CANONICAL: LazyLock<GameOperators> =
    LazyLock::new(|| GameOperators { open: open_operator(), switch: switch_operator(), win: win_mask() });

impl GameOperators {
    pub fn canonical() -> &'static GameOperators {
        &CANONICAL
    }

    pub fn new(open: ComplexMatrix, switch: ComplexMatrix) -> Result<Self> {
        for m in [&open, &switch] {
            if m.rows() != REGISTER_DIM || m.cols() != REGISTER_DIM {
                return Err(Error::DimensionMismatch("game operators must be 27x27".into()));
            }
            let deviation = m.unitarity_deviation()?;
            if deviation > tol::STRUCTURE {
                return Err(Error::NotUnitary { deviation });
            }
        }
        Ok(Self { open, switch, win: win_mask() })
    }

    pub fn open(&self) -> &ComplexMatrix {
        &self.open
    }

    pub fn switch(&self) -> &ComplexMatrix {
        &self.switch
    }

    /// Final states (ρ_s, ρ_n) after switching and after staying.
    pub fn evolve(&self, cfg: &GameConfig) -> Result<(DensityMatrix, DensityMatrix)> {
        let rho0 = DensityMatrix::from_pure(&cfg.initial.state());
        let noisy = cfg.noise.apply(&rho0)?;
        let moves = ComplexMatrix::identity(QUTRIT).kron(cfg.bob.matrix()).kron(cfg.alice.matrix());
        // not switching is the identity, so G_n = O·(I⊗B⊗A)
        let g_n = self.open.mul_unchecked(&moves);
        let g_s = self.switch.mul_unchecked(&g_n);
        let rho_s = DensityMatrix::from_matrix_unchecked(g_s.conjugate(noisy.matrix()));
        let rho_n = DensityMatrix::from_matrix_unchecked(g_n.conjugate(noisy.matrix()));
        Ok((rho_s, rho_n))
    }

    /// Tr[P_win ρ] for both final states; γ is not used.
    pub fn branches(&self, cfg: &GameConfig) -> Result<Branches> {
        let (rho_s, rho_n) = self.evolve(cfg)?;
        let s = rho_s.diagonal_weight(&self.win);
        let n = rho_n.diagonal_weight(&self.win);
        debug_assert!(s.im.abs() <= 1e-12 && n.im.abs() <= 1e-12);
        Ok(Branches { p_switch: s.re, p_not_switch: n.re })
    }

    pub fn play(&self, cfg: &GameConfig) -> Result<GameOutcome> {
        Ok(self.branches(cfg)?.mix(cfg.gamma))
    }
}

pub fn evolve(cfg: &GameConfig) -> Result<(DensityMatrix, DensityMatrix)> {
    GameOperators::canonical().evolve(cfg)
}

pub fn play(cfg: &GameConfig) -> Result<GameOutcome> {
    GameOperators::canonical().play(cfg)
}

impl fmt::Display for GameOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "payoff {:.12} (switch {:.12}, stay {:.12}, γ = {})",
            self.payoff, self.p_switch, self.p_not_switch, self.gamma
        )
    }
}
