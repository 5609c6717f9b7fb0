#![allow(dead_code)]

use std::f64::consts::FRAC_PI_2;

use nalgebra::DMatrix;
use num_complex::Complex64;
use qmonty::channels::ChannelKind;
use qmonty::game::{BuiltinStrategy, GameConfig, InitialState, StrategyUnitary};
use qmonty::{ComplexMatrix, DensityMatrix, PureState};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn unit_disc(rng: &mut impl Rng) -> Complex64 {
    loop {
        let z = Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        if z.norm() <= 1.0 {
            return z;
        }
    }
}

pub fn random_matrix(rng: &mut impl Rng, n: usize) -> ComplexMatrix {
    ComplexMatrix::new(n, n, (0..n * n).map(|_| unit_disc(rng)).collect()).unwrap()
}

/// G·G† / Tr, full rank with probability one.
pub fn random_density(rng: &mut impl Rng, n: usize) -> DensityMatrix {
    let g = random_matrix(rng, n);
    let m = g.mat_mul(&g.dagger()).unwrap();
    let tr = m.trace().unwrap().re;
    DensityMatrix::new(m.scale(Complex64::new(1.0 / tr, 0.0))).unwrap()
}

pub fn random_pure(rng: &mut impl Rng, n: usize) -> PureState {
    let v: Vec<Complex64> = (0..n).map(|_| unit_disc(rng)).collect();
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    PureState::new(v.into_iter().map(|z| z / norm).collect()).unwrap()
}

/// exp(iH) for a random Hermitian H.
pub fn random_unitary(rng: &mut impl Rng, n: usize) -> ComplexMatrix {
    let g = random_matrix(rng, n);
    let h = DMatrix::<Complex64>::from_fn(n, n, |i, j| (g[(i, j)] + g[(j, i)].conj()) * 0.5);
    let eig = h.symmetric_eigen();
    let v = &eig.eigenvectors;
    let phases = DMatrix::<Complex64>::from_diagonal(
        &eig.eigenvalues.map(|l| Complex64::from_polar(1.0, l * 2.0)),
    );
    let u = v * phases * v.adjoint();
    ComplexMatrix::new(n, n, (0..n * n).map(|k| u[(k / n, k % n)]).collect()).unwrap()
}

pub fn random_strategy(rng: &mut impl Rng) -> StrategyUnitary {
    match rng.random_range(0..5) {
        0 => StrategyUnitary::builtin(BuiltinStrategy::Identity),
        1 => StrategyUnitary::builtin(BuiltinStrategy::M1),
        2 => StrategyUnitary::builtin(BuiltinStrategy::M2),
        3 => StrategyUnitary::builtin(BuiltinStrategy::H),
        _ => StrategyUnitary::new(random_unitary(rng, 3), "random").unwrap(),
    }
}

pub fn random_config(rng: &mut impl Rng) -> GameConfig {
    let initial = match rng.random_range(0..3) {
        0 => InitialState::Psi1,
        1 => InitialState::Psi2,
        _ => InitialState::custom(random_pure(rng, 27)).unwrap(),
    };
    let noise = match rng.random_range(0..3) {
        0 => ChannelKind::None.at(0.0),
        1 => ChannelKind::SpontaneousEmission.at(rng.random_range(0.0..5.0)),
        _ => ChannelKind::GeneralizedPauli.at(rng.random_range(0.0..=1.0)),
    }
    .unwrap();
    let gamma = rng.random_range(0.0..=FRAC_PI_2);
    GameConfig::new(initial, random_strategy(rng), random_strategy(rng), noise, gamma).unwrap()
}

/// Every row and column holds exactly one 1, everything else is exactly 0.
pub fn is_exact_permutation(m: &ComplexMatrix) -> bool {
    let n = m.rows();
    if m.cols() != n {
        return false;
    }
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::default();
    let entries_ok = m.entries().iter().all(|&z| z == one || z == zero);
    let rows_ok = (0..n).all(|i| (0..n).filter(|&j| m[(i, j)] == one).count() == 1);
    let cols_ok = (0..n).all(|j| (0..n).filter(|&i| m[(i, j)] == one).count() == 1);
    entries_ok && rows_ok && cols_ok
}
