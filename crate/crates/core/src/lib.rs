//! Quantum Monty Hall simulation on three qutrits under noise.
//!
//! The crate is split into:
//!
//! * [`linalg`]: dense complex matrices, pure states and density matrices;
//! * [`channels`]: spontaneous-emission and generalized-Pauli Kraus channels;
//! * [`game`]: box-opening and switching operators and the game evolution;
//! * [`analysis`]: closed-form payoffs of the seven reference scenarios,
//!   sweeps, optimal mixing and crossover thresholds;
//! * [`cli`]: the `qmonty` command-line front end.

pub mod analysis;
pub mod channels;
pub mod cli;
pub mod error;
pub mod game;
pub mod linalg;

pub use error::{Error, Result};
pub use linalg::{ComplexMatrix, DensityMatrix, PureState};

/// Numerical tolerances shared across the crate.
pub mod tol {
    /// Unitarity, Hermiticity, trace and Kraus completeness checks.
    pub const STRUCTURE: f64 = 1e-10;
    /// Lowest eigenvalue still accepted as positive semidefinite.
    pub const EIGEN_FLOOR: f64 = -1e-10;
    /// Input Hermiticity required by the eigenvalue routine.
    pub const HERMITIAN_INPUT: f64 = 1e-8;
    /// Simulated payoff against closed form.
    pub const PAYOFF: f64 = 1e-9;
    /// Strategy matrices must be unitary to this precision.
    pub const STRATEGY_UNITARY: f64 = 1e-9;
    pub const PURE_NORM: f64 = 1e-12;
    /// Default |c1| below which switching and staying are equivalent.
    pub const INDIFFERENCE: f64 = 1e-12;
    /// Bisection width for crossover thresholds.
    pub const THRESHOLD: f64 = 1e-10;
}
