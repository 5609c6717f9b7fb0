//! Kraus-form noise channels on single qutrits and their product extension
//! to the three game registers.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{c, ComplexMatrix, DensityMatrix, QUTRIT, REGISTER_DIM};
use crate::tol;

/// A finite list of same-dimension Kraus elements.
#[derive(Debug, Clone, PartialEq)]
pub struct KrausChannel {
    dim: usize,
    elements: Vec<ComplexMatrix>,
    label: String,
}

/// Completeness check result.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CptpReport {
    /// max-abs entry of Σ K†K − I.
    pub deviation: f64,
    pub pass: bool,
}

impl KrausChannel {
    /// Builds a channel, rejecting element lists that violate Σ K†K = I.
    pub fn new(elements: Vec<ComplexMatrix>, label: impl Into<String>) -> Result<Self> {
        let ch = Self::unvalidated(elements, label)?;
        let report = ch.validate_cptp();
        if !report.pass {
            return Err(Error::NotTracePreserving { deviation: report.deviation });
        }
        Ok(ch)
    }

    /// Shape checks only; completeness is left to [`KrausChannel::validate_cptp`].
    pub fn unvalidated(elements: Vec<ComplexMatrix>, label: impl Into<String>) -> Result<Self> {
        let first = elements
            .first()
            .ok_or_else(|| Error::DimensionMismatch("channel needs at least one element".into()))?;
        let dim = first.rows();
        if let Some(bad) = elements.iter().find(|k| k.rows() != dim || k.cols() != dim) {
            return Err(Error::DimensionMismatch(format!(
                "Kraus element is {}x{}, expected {dim}x{dim}",
                bad.rows(),
                bad.cols()
            )));
        }
        Ok(Self { dim, elements, label: label.into() })
    }

    pub fn identity(dim: usize) -> Self {
        Self { dim, elements: vec![ComplexMatrix::identity(dim)], label: "id".into() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn elements(&self) -> &[ComplexMatrix] {
        &self.elements
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn validate_cptp(&self) -> CptpReport {
        let mut sum = ComplexMatrix::zeros(self.dim, self.dim);
        for k in &self.elements {
            sum.add_assign_unchecked(&k.dagger().mul_unchecked(k));
        }
        let deviation = sum
            .max_abs_diff(&ComplexMatrix::identity(self.dim))
            .expect("shapes agree by construction");
        CptpReport { deviation, pass: deviation <= tol::STRUCTURE }
    }

    /// ρ ↦ Σ K ρ K†.
    pub fn apply(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        if rho.dim() != self.dim {
            return Err(Error::DimensionMismatch(format!(
                "channel of dimension {} applied to a {}-dimensional state",
                self.dim,
                rho.dim()
            )));
        }
        Ok(DensityMatrix::from_matrix_unchecked(kraus_sum(&self.elements, rho.matrix())))
    }

    /// The channel acting independently on each of three qutrits: elements
    /// K_i ⊗ K_j ⊗ K_k in lexicographic (i, j, k) order.
    pub fn extend_three(&self) -> Result<Self> {
        self.require_qutrit()?;
        let n = self.elements.len();
        let mut elements = Vec::with_capacity(n * n * n);
        for k1 in &self.elements {
            for k2 in &self.elements {
                let k12 = k1.kron(k2);
                for k3 in &self.elements {
                    elements.push(k12.kron(k3));
                }
            }
        }
        Ok(Self { dim: REGISTER_DIM, elements, label: format!("{}^⊗3", self.label) })
    }

    /// Same map as `extend_three().apply(rho)`, applied one register at a
    /// time through K⊗I⊗I, I⊗K⊗I and I⊗I⊗K.
    pub fn apply_local_sequential(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        self.require_qutrit()?;
        if rho.dim() != REGISTER_DIM {
            return Err(Error::DimensionMismatch(format!(
                "expected a {REGISTER_DIM}-dimensional state, got {}",
                rho.dim()
            )));
        }
        let id3 = ComplexMatrix::identity(QUTRIT);
        let id9 = ComplexMatrix::identity(QUTRIT * QUTRIT);
        let nonzero: Vec<&ComplexMatrix> =
            self.elements.iter().filter(|k| k.entries().iter().any(|z| z.norm() > 0.0)).collect();

        let mut current = rho.matrix().clone();
        for register in 0..3 {
            let lifted: Vec<ComplexMatrix> = nonzero
                .iter()
                .map(|k| match register {
                    0 => k.kron(&id9),
                    1 => id3.kron(k).kron(&id3),
                    _ => id9.kron(k),
                })
                .collect();
            current = kraus_sum(&lifted, &current);
        }
        Ok(DensityMatrix::from_matrix_unchecked(current))
    }

    fn require_qutrit(&self) -> Result<()> {
        if self.dim != QUTRIT {
            return Err(Error::DimensionMismatch(format!(
                "single-qutrit channel required, got dimension {}",
                self.dim
            )));
        }
        Ok(())
    }
}

fn kraus_sum(elements: &[ComplexMatrix], rho: &ComplexMatrix) -> ComplexMatrix {
    let mut out = ComplexMatrix::zeros(rho.rows(), rho.cols());
    for k in elements {
        out.add_assign_unchecked(&k.conjugate(rho));
    }
    out
}

/// Spontaneous emission of a V-configuration qutrit: levels |1⟩ and |2⟩
/// decay to |0⟩ with Einstein coefficients `a1` and `a2` over time `t`.
pub fn se_single(t: f64, a1: f64, a2: f64) -> Result<KrausChannel> {
    if !(t.is_finite() && t >= 0.0) {
        return Err(Error::Domain(format!("emission time must be finite and non-negative, got {t}")));
    }
    if !(a1.is_finite() && a1 > 0.0 && a2.is_finite() && a2 > 0.0) {
        return Err(Error::Domain(format!("Einstein coefficients must be positive, got {a1}, {a2}")));
    }
    let zero = Complex64::default();
    let k0 = ComplexMatrix::diag(&[c(1.0, 0.0), c((-t * a1 / 2.0).exp(), 0.0), c((-t * a2 / 2.0).exp(), 0.0)]);
    // 1 - e^{-x} without cancellation for small x
    let decay1 = (-(-t * a1).exp_m1()).sqrt();
    let decay2 = (-(-t * a2).exp_m1()).sqrt();
    let k1 = ComplexMatrix::from_rows(&[[zero, c(decay1, 0.0), zero], [zero; 3], [zero; 3]])?;
    let k2 = ComplexMatrix::from_rows(&[[zero, zero, c(decay2, 0.0)], [zero; 3], [zero; 3]])?;
    KrausChannel::unvalidated(vec![k0, k1, k2], format!("SE({t})"))
}

/// Qutrit cyclic shift |k⟩ ↦ |k−1 mod 3⟩ as printed (row 0 = [0 1 0]).
pub fn shift_x() -> ComplexMatrix {
    ComplexMatrix::from_real_rows(&[[0.0, 1.0, 0.0], [0.0, 0.0, 1.0], [1.0, 0.0, 0.0]])
        .expect("3x3 literal")
}

/// Qutrit clock diag(1, ω, ω²) with ω = e^{2πi/3}.
pub fn clock_z() -> ComplexMatrix {
    let w = Complex64::from_polar(1.0, 2.0 * PI / 3.0);
    let w2 = Complex64::from_polar(1.0, 4.0 * PI / 3.0);
    ComplexMatrix::diag(&[c(1.0, 0.0), w, w2])
}

/// Generalized Pauli channel: elements √P_ij · Xⁱ Zʲ for (i, j) in
/// lexicographic order, with P_00 = 1 − 8p/9 and P_ij = p/9 otherwise.
/// Zero-weight elements stay in the list.
pub fn gp_single(p: f64) -> Result<KrausChannel> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::Domain(format!("error probability must lie in [0, 1], got {p}")));
    }
    let x = shift_x();
    let z = clock_z();
    let mut x_pow = ComplexMatrix::identity(QUTRIT);
    let mut elements = Vec::with_capacity(9);
    for i in 0..3 {
        let mut xz = x_pow.clone();
        for j in 0..3 {
            let weight = if (i, j) == (0, 0) { 1.0 - 8.0 * p / 9.0 } else { p / 9.0 };
            elements.push(xz.scale(c(weight.sqrt(), 0.0)));
            xz = xz.mul_unchecked(&z);
        }
        x_pow = x_pow.mul_unchecked(&x);
    }
    KrausChannel::unvalidated(elements, format!("GP({p})"))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ChannelKind {
    None,
    SpontaneousEmission,
    GeneralizedPauli,
}

impl ChannelKind {
    /// Noise parameter at the given value, with default Einstein coefficients.
    pub fn at(self, noise: f64) -> Result<NoiseSpec> {
        self.at_with_coefficients(noise, 1.0, 1.0)
    }

    pub fn at_with_coefficients(self, noise: f64, a1: f64, a2: f64) -> Result<NoiseSpec> {
        match self {
            ChannelKind::None => Ok(NoiseSpec::None),
            ChannelKind::SpontaneousEmission => NoiseSpec::spontaneous_emission(noise, a1, a2),
            ChannelKind::GeneralizedPauli => NoiseSpec::generalized_pauli(noise),
        }
    }

    /// Whether `noise` is an admissible parameter for this channel.
    pub fn check_noise(self, noise: f64) -> Result<()> {
        match self {
            ChannelKind::None => Ok(()),
            ChannelKind::SpontaneousEmission if noise.is_finite() && noise >= 0.0 => Ok(()),
            ChannelKind::SpontaneousEmission => {
                Err(Error::Domain(format!("emission time must be finite and non-negative, got {noise}")))
            }
            ChannelKind::GeneralizedPauli if (0.0..=1.0).contains(&noise) => Ok(()),
            ChannelKind::GeneralizedPauli => {
                Err(Error::Domain(format!("error probability must lie in [0, 1], got {noise}")))
            }
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            ChannelKind::None => "none",
            ChannelKind::SpontaneousEmission => "se",
            ChannelKind::GeneralizedPauli => "gp",
        }
    }
}

impl fmt::Display for ChannelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ChannelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "none" => Ok(ChannelKind::None),
            "se" => Ok(ChannelKind::SpontaneousEmission),
            "gp" => Ok(ChannelKind::GeneralizedPauli),
            other => Err(Error::Domain(format!("unknown channel '{other}' (expected none, se or gp)"))),
        }
    }
}

/// A concrete noise channel with its parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NoiseSpec {
    None,
    SpontaneousEmission { t: f64, a1: f64, a2: f64 },
    GeneralizedPauli { p: f64 },
}

impl NoiseSpec {
    pub fn spontaneous_emission(t: f64, a1: f64, a2: f64) -> Result<Self> {
        se_single(t, a1, a2)?;
        Ok(NoiseSpec::SpontaneousEmission { t, a1, a2 })
    }

    pub fn generalized_pauli(p: f64) -> Result<Self> {
        ChannelKind::GeneralizedPauli.check_noise(p)?;
        Ok(NoiseSpec::GeneralizedPauli { p })
    }

    pub fn kind(&self) -> ChannelKind {
        match self {
            NoiseSpec::None => ChannelKind::None,
            NoiseSpec::SpontaneousEmission { .. } => ChannelKind::SpontaneousEmission,
            NoiseSpec::GeneralizedPauli { .. } => ChannelKind::GeneralizedPauli,
        }
    }

    /// `t` or `p`; `None` for the noiseless game.
    pub fn parameter(&self) -> Option<f64> {
        match *self {
            NoiseSpec::None => None,
            NoiseSpec::SpontaneousEmission { t, .. } => Some(t),
            NoiseSpec::GeneralizedPauli { p } => Some(p),
        }
    }

    pub fn single_qutrit(&self) -> Result<KrausChannel> {
        match *self {
            NoiseSpec::None => Ok(KrausChannel::identity(QUTRIT)),
            NoiseSpec::SpontaneousEmission { t, a1, a2 } => se_single(t, a1, a2),
            NoiseSpec::GeneralizedPauli { p } => gp_single(p),
        }
    }

    /// Applies the channel to every register of a three-qutrit state.
    pub fn apply(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        match self {
            NoiseSpec::None => Ok(rho.clone()),
            NoiseSpec::SpontaneousEmission { .. } => self.single_qutrit()?.extend_three()?.apply(rho),
            NoiseSpec::GeneralizedPauli { .. } => self.single_qutrit()?.apply_local_sequential(rho),
        }
    }
}
