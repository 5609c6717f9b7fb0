//! Dense complex matrices and the quantum state types built on them.
//!
//! Everything here is sized for at most three qutrits (dimension 27), so a
//! plain row-major `Vec<Complex64>` with naive products is plenty.
//!
//! Register layout: the basis ket |o, b, a⟩ lives at index `9·o + 3·b + a`,
//! i.e. the opened-box register is the most significant trit, matching the
//! left-to-right Kronecker order of |o⟩⊗|b⟩⊗|a⟩.

use std::fmt;
use std::ops::Index;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::tol;

pub const QUTRIT: usize = 3;
pub const REGISTER_DIM: usize = 27;

#[inline]
pub(crate) fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Dense row-major complex matrix.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::DimensionMismatch(format!(
                "matrix dimensions must be positive, got {rows}x{cols}"
            )));
        }
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries supplied for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { rows, cols, data })
    }

    /// Builds a matrix from nested rows. All rows must have the same length.
    pub fn from_rows<R: AsRef<[Complex64]>>(rows: &[R]) -> Result<Self> {
        let n_rows = rows.len();
        let n_cols = rows.first().map_or(0, |r| r.as_ref().len());
        if rows.iter().any(|r| r.as_ref().len() != n_cols) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        let data = rows.iter().flat_map(|r| r.as_ref().iter().copied()).collect();
        Self::new(n_rows, n_cols, data)
    }

    /// Real-valued convenience constructor.
    pub fn from_real_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let complex: Vec<Vec<Complex64>> = rows
            .iter()
            .map(|r| r.as_ref().iter().map(|&x| c(x, 0.0)).collect())
            .collect();
        Self::from_rows(&complex)
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        Self { rows, cols, data: vec![Complex64::default(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = c(1.0, 0.0);
        }
        m
    }

    pub fn diag(entries: &[Complex64]) -> Self {
        let n = entries.len();
        let mut m = Self::zeros(n, n);
        for (i, &z) in entries.iter().enumerate() {
            m.data[i * n + i] = z;
        }
        m
    }

    /// Outer product |u⟩⟨v|.
    pub fn outer(u: &[Complex64], v: &[Complex64]) -> Self {
        let mut m = Self::zeros(u.len(), v.len());
        for (i, ui) in u.iter().enumerate() {
            for (j, vj) in v.iter().enumerate() {
                m.data[i * v.len() + j] = ui * vj.conj();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.data
    }

    pub fn get(&self, i: usize, j: usize) -> Option<Complex64> {
        (i < self.rows && j < self.cols).then(|| self.data[i * self.cols + j])
    }

    pub(crate) fn set(&mut self, i: usize, j: usize, z: Complex64) {
        self.data[i * self.cols + j] = z;
    }

    /// Kronecker product: block (i, j) of the result is `self[i][j] · other`.
    pub fn kron(&self, other: &Self) -> Self {
        let rows = self.rows * other.rows;
        let cols = self.cols * other.cols;
        let mut data = vec![Complex64::default(); rows * cols];
        for i in 0..self.rows {
            for j in 0..self.cols {
                let s = self.data[i * self.cols + j];
                if s == Complex64::default() {
                    continue;
                }
                for k in 0..other.rows {
                    let row = (i * other.rows + k) * cols + j * other.cols;
                    for l in 0..other.cols {
                        data[row + l] = s * other.data[k * other.cols + l];
                    }
                }
            }
        }
        Self { rows, cols, data }
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> Self {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self.data[i * self.cols + j].conj());
            }
        }
        Self { rows: self.cols, cols: self.rows, data }
    }

    pub fn mat_mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(self.mul_unchecked(other))
    }

    pub(crate) fn mul_unchecked(&self, other: &Self) -> Self {
        let n = other.cols;
        let mut data = vec![Complex64::default(); self.rows * n];
        for i in 0..self.rows {
            let out = &mut data[i * n..(i + 1) * n];
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a == Complex64::default() {
                    continue;
                }
                let row = &other.data[k * n..(k + 1) * n];
                for (o, b) in out.iter_mut().zip(row) {
                    *o += a * b;
                }
            }
        }
        Self { rows: self.rows, cols: n, data }
    }

    /// `self · inner · self†`, computed as `(self · (self · inner)†)†` so
    /// both products skip the zero entries of `self`.
    pub(crate) fn conjugate(&self, inner: &Self) -> Self {
        self.mul_unchecked(&self.mul_unchecked(inner).dagger()).dagger()
    }

    pub fn trace(&self) -> Result<Complex64> {
        if !self.is_square() {
            return Err(Error::NotSquare { rows: self.rows, cols: self.cols });
        }
        Ok((0..self.rows).map(|i| self.data[i * self.cols + i]).sum())
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * factor).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other)?;
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        })
    }

    pub(crate) fn add_assign_unchecked(&mut self, other: &Self) {
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += b;
        }
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        self.check_same_shape(other)?;
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    /// max |m[i][j] − conj(m[j][i])|.
    pub fn hermiticity_deviation(&self) -> Result<f64> {
        if !self.is_square() {
            return Err(Error::NotSquare { rows: self.rows, cols: self.cols });
        }
        let n = self.rows;
        let mut dev = 0.0f64;
        for i in 0..n {
            for j in i..n {
                dev = dev.max((self.data[i * n + j] - self.data[j * n + i].conj()).norm());
            }
        }
        Ok(dev)
    }

    /// max-abs entry of `self†·self − I`.
    pub fn unitarity_deviation(&self) -> Result<f64> {
        if !self.is_square() {
            return Err(Error::NotSquare { rows: self.rows, cols: self.cols });
        }
        let gram = self.dagger().mul_unchecked(self);
        gram.max_abs_diff(&Self::identity(self.rows))
    }

    /// Non-square matrices are never unitary.
    pub fn is_unitary(&self, tol: f64) -> bool {
        self.unitarity_deviation().is_ok_and(|d| d <= tol)
    }

    /// Smallest eigenvalue of a Hermitian matrix.
    pub fn min_eigenvalue_hermitian(&self) -> Result<f64> {
        let dev = self.hermiticity_deviation()?;
        if dev > tol::HERMITIAN_INPUT {
            return Err(Error::NotHermitian { deviation: dev });
        }
        let n = self.rows;
        // symmetrize so round-off asymmetry does not leak into the solver
        let m = DMatrix::<Complex64>::from_fn(n, n, |i, j| {
            (self.data[i * n + j] + self.data[j * n + i].conj()) * 0.5
        });
        Ok(m.symmetric_eigenvalues().iter().copied().fold(f64::INFINITY, f64::min))
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &[Complex64]) -> Result<Vec<Complex64>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "cannot apply a {}x{} matrix to a vector of length {}",
                self.rows,
                self.cols,
                v.len()
            )));
        }
        Ok((0..self.rows)
            .map(|i| self.data[i * self.cols..(i + 1) * self.cols].iter().zip(v).map(|(a, b)| a * b).sum())
            .collect())
    }

    fn check_same_shape(&self, other: &Self) -> Result<()> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(())
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        assert!(i < self.rows && j < self.cols, "index ({i}, {j}) out of bounds");
        &self.data[i * self.cols + j]
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                let z = self.data[i * self.cols + j];
                write!(f, "{:+.4}{:+.4}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// Index of |o, b, a⟩ in the 27-dimensional register space.
pub fn basis_index(o: u8, b: u8, a: u8) -> Result<usize> {
    if o > 2 || b > 2 || a > 2 {
        return Err(Error::InvalidState(format!("trit out of range in |{o},{b},{a}⟩")));
    }
    Ok(9 * o as usize + 3 * b as usize + a as usize)
}

/// Inverse of [`basis_index`].
pub fn basis_trits(index: usize) -> (u8, u8, u8) {
    assert!(index < REGISTER_DIM, "basis index {index} out of range");
    ((index / 9) as u8, ((index / 3) % 3) as u8, (index % 3) as u8)
}

/// Normalized state vector.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    amplitudes: Vec<Complex64>,
}

impl PureState {
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self> {
        Self::with_tolerance(amplitudes, tol::PURE_NORM)
    }

    pub(crate) fn with_tolerance(amplitudes: Vec<Complex64>, tol: f64) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::InvalidState("empty state vector".into()));
        }
        if amplitudes.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        let norm = amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > tol {
            return Err(Error::InvalidState(format!("state norm is {norm}, expected 1")));
        }
        Ok(Self { amplitudes })
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }
}

pub fn basis_ket(o: u8, b: u8, a: u8) -> Result<PureState> {
    let idx = basis_index(o, b, a)?;
    let mut amps = vec![Complex64::default(); REGISTER_DIM];
    amps[idx] = c(1.0, 0.0);
    PureState::new(amps)
}

/// Deviations of a matrix from the density-matrix conditions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityReport {
    pub hermiticity: f64,
    pub trace_error: f64,
    pub min_eigenvalue: f64,
}

impl DensityReport {
    pub fn of(m: &ComplexMatrix) -> Result<Self> {
        let hermiticity = m.hermiticity_deviation()?;
        let tr = m.trace()?;
        let trace_error = (tr - c(1.0, 0.0)).norm();
        let min_eigenvalue = if hermiticity <= tol::HERMITIAN_INPUT {
            m.min_eigenvalue_hermitian()?
        } else {
            f64::NEG_INFINITY
        };
        Ok(Self { hermiticity, trace_error, min_eigenvalue })
    }

    pub fn is_valid(&self) -> bool {
        self.hermiticity <= tol::STRUCTURE
            && self.trace_error <= tol::STRUCTURE
            && self.min_eigenvalue >= tol::EIGEN_FLOOR
    }
}

/// Hermitian, unit-trace, positive-semidefinite matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        let report = DensityReport::of(&matrix)?;
        if !report.is_valid() {
            return Err(Error::InvalidState(format!(
                "not a density matrix (hermiticity {:e}, trace error {:e}, min eigenvalue {:e})",
                report.hermiticity, report.trace_error, report.min_eigenvalue
            )));
        }
        Ok(Self { matrix })
    }

    /// For results of maps that preserve the invariants by construction.
    pub(crate) fn from_matrix_unchecked(matrix: ComplexMatrix) -> Self {
        debug_assert!(matrix.is_square());
        Self { matrix }
    }

    pub fn from_pure(state: &PureState) -> Self {
        let amps = state.amplitudes();
        Self { matrix: ComplexMatrix::outer(amps, amps) }
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self { matrix: ComplexMatrix::identity(dim).scale(c(1.0 / dim as f64, 0.0)) }
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    /// Tr[ρ²].
    pub fn purity(&self) -> f64 {
        // Tr[ρ²] = Σ_ij ρ_ij ρ_ji = Σ_ij |ρ_ij|² for Hermitian ρ
        self.matrix.entries().iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn report(&self) -> DensityReport {
        DensityReport::of(&self.matrix).expect("density matrices are square")
    }

    /// Re Tr[Pρ] for a diagonal projector given by its 0/1 diagonal mask.
    pub(crate) fn diagonal_weight(&self, mask: &[bool]) -> Complex64 {
        mask.iter()
            .enumerate()
            .filter(|(_, &m)| m)
            .map(|(i, _)| self.matrix[(i, i)])
            .sum()
    }
}
