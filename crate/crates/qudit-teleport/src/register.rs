//! Dense state-vector representation of a register of labeled qudits.
//!
//! Tensor-order convention: the first label in the registry is the
//! most-significant base-d digit of the flat amplitude index. All public
//! operations return new states; a `StateVector` is immutable once built.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{QuditError, Result};

/// Input normalization tolerance on |norm - 1|.
pub const INPUT_NORM_TOL: f64 = 1e-6;
/// Internal tolerance for norm preservation and unitarity checks.
pub const INTERNAL_TOL: f64 = 1e-9;
/// Default cap on the amplitude count d^T of an active register.
pub const DEFAULT_AMP_CAP: usize = 1 << 26;

/// Qudit dimension d >= 2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Dimension(usize);

impl Dimension {
    pub fn new(d: usize) -> Result<Self> {
        if d < 2 {
            return Err(QuditError::InvalidDimension(d));
        }
        Ok(Dimension(d))
    }

    pub fn get(self) -> usize {
        self.0
    }

    /// d^count, checked against `cap`.
    pub fn pow_checked(self, count: u32, cap: usize) -> Result<usize> {
        let required = (self.0 as u128)
            .checked_pow(count)
            .unwrap_or(u128::MAX);
        if required > cap as u128 {
            return Err(QuditError::CapExceeded { required, cap });
        }
        Ok(required as usize)
    }
}

/// Logical name of one particle in the register.
///
/// Message qudits are `x_k`, channel qudits `p_{k,j}` with `j = 0` held by
/// the sender, `j = 1..n` by the controllers and `j = n+1` by the receiver.
/// Decoy qudits live in standalone single-particle registers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ParticleLabel {
    Message { k: usize },
    Channel { k: usize, j: usize },
    Decoy { idx: usize },
}

impl ParticleLabel {
    pub fn message(k: usize) -> Self {
        ParticleLabel::Message { k }
    }

    pub fn channel(k: usize, j: usize) -> Self {
        ParticleLabel::Channel { k, j }
    }

    pub fn decoy(idx: usize) -> Self {
        ParticleLabel::Decoy { idx }
    }
}

impl fmt::Display for ParticleLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParticleLabel::Message { k } => write!(f, "x{k}"),
            ParticleLabel::Channel { k, j } => write!(f, "p{k}_{j}"),
            ParticleLabel::Decoy { idx } => write!(f, "decoy{idx}"),
        }
    }
}

impl FromStr for ParticleLabel {
    type Err = QuditError;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || QuditError::InvalidStateSpec(format!("unparseable label {s:?}"));
        if let Some(rest) = s.strip_prefix('x') {
            let k = rest.parse().map_err(|_| bad())?;
            Ok(ParticleLabel::Message { k })
        } else if let Some(rest) = s.strip_prefix('p') {
            let (k, j) = rest.split_once('_').ok_or_else(bad)?;
            Ok(ParticleLabel::Channel {
                k: k.parse().map_err(|_| bad())?,
                j: j.parse().map_err(|_| bad())?,
            })
        } else if let Some(rest) = s.strip_prefix("decoy") {
            Ok(ParticleLabel::Decoy {
                idx: rest.parse().map_err(|_| bad())?,
            })
        } else {
            Err(bad())
        }
    }
}

/// Bidirectional map between particle labels and tensor positions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParticleRegistry {
    d: Dimension,
    labels: Vec<ParticleLabel>,
    positions: HashMap<ParticleLabel, usize>,
}

impl ParticleRegistry {
    pub fn new(d: Dimension, labels: Vec<ParticleLabel>) -> Result<Self> {
        let mut positions = HashMap::with_capacity(labels.len());
        for (i, &label) in labels.iter().enumerate() {
            if positions.insert(label, i).is_some() {
                return Err(QuditError::DuplicateLabel(label));
            }
        }
        Ok(ParticleRegistry { d, labels, positions })
    }

    pub fn dimension(&self) -> Dimension {
        self.d
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[ParticleLabel] {
        &self.labels
    }

    pub fn position(&self, label: ParticleLabel) -> Result<usize> {
        self.positions
            .get(&label)
            .copied()
            .ok_or(QuditError::UnknownLabel(label))
    }

    pub fn contains(&self, label: ParticleLabel) -> bool {
        self.positions.contains_key(&label)
    }

    /// Registry with the given labels removed; remaining positions shift down.
    pub fn without(&self, removed: &[ParticleLabel]) -> Result<Self> {
        for &label in removed {
            self.position(label)?;
        }
        let remaining: Vec<ParticleLabel> = self
            .labels
            .iter()
            .copied()
            .filter(|l| !removed.contains(l))
            .collect();
        ParticleRegistry::new(self.d, remaining)
    }

    /// Flat index of a digit string (first label most significant).
    pub fn flat_index(&self, digits: &[usize]) -> usize {
        debug_assert_eq!(digits.len(), self.labels.len());
        let d = self.d.get();
        digits.iter().fold(0, |acc, &digit| acc * d + digit)
    }

    /// Digit string of a flat index.
    pub fn digits(&self, mut index: usize) -> Vec<usize> {
        let d = self.d.get();
        let mut out = vec![0; self.labels.len()];
        for slot in out.iter_mut().rev() {
            *slot = index % d;
            index /= d;
        }
        out
    }
}

/// Normalized dense state over a particle registry.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    registry: ParticleRegistry,
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    /// Builds a state from explicit amplitudes, checking length and norm.
    pub fn from_amplitudes(
        d: Dimension,
        labels: Vec<ParticleLabel>,
        amplitudes: Vec<Complex64>,
    ) -> Result<Self> {
        let registry = ParticleRegistry::new(d, labels)?;
        let expected = d.pow_checked(registry.len() as u32, DEFAULT_AMP_CAP)?;
        if amplitudes.len() != expected {
            return Err(QuditError::LengthMismatch {
                expected,
                got: amplitudes.len(),
            });
        }
        let norm = l2_norm(&amplitudes);
        if (norm - 1.0).abs() > INPUT_NORM_TOL {
            return Err(QuditError::NotNormalized { norm });
        }
        Ok(StateVector { registry, amplitudes })
    }

    /// Single-qudit basis state |value⟩ with the given label.
    pub fn basis_state(d: Dimension, label: ParticleLabel, value: usize) -> Result<Self> {
        if value >= d.get() {
            return Err(QuditError::IndexOutOfRange {
                value,
                bound: d.get(),
            });
        }
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); d.get()];
        amplitudes[value] = Complex64::new(1.0, 0.0);
        StateVector::from_amplitudes(d, vec![label], amplitudes)
    }

    pub(crate) fn from_raw_normalized(
        registry: ParticleRegistry,
        mut amplitudes: Vec<Complex64>,
    ) -> Self {
        let norm = l2_norm(&amplitudes);
        debug_assert!(norm > 0.0);
        for a in &mut amplitudes {
            *a /= norm;
        }
        StateVector { registry, amplitudes }
    }

    pub fn registry(&self) -> &ParticleRegistry {
        &self.registry
    }

    pub fn dimension(&self) -> Dimension {
        self.registry.d
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        l2_norm(&self.amplitudes)
    }

    /// Tensor product; `self`'s labels come first in the result registry.
    pub fn tensor(&self, other: &StateVector) -> Result<StateVector> {
        if self.registry.d != other.registry.d {
            return Err(QuditError::DimensionMismatch);
        }
        for &label in other.registry.labels() {
            if self.registry.contains(label) {
                return Err(QuditError::LabelCollision(label));
            }
        }
        let mut labels = self.registry.labels().to_vec();
        labels.extend_from_slice(other.registry.labels());
        let registry = ParticleRegistry::new(self.registry.d, labels)?;
        self.registry
            .d
            .pow_checked(registry.len() as u32, DEFAULT_AMP_CAP)?;
        let mut amplitudes =
            Vec::with_capacity(self.amplitudes.len() * other.amplitudes.len());
        for &a in &self.amplitudes {
            for &b in &other.amplitudes {
                amplitudes.push(a * b);
            }
        }
        Ok(StateVector { registry, amplitudes })
    }

    /// ⟨self|other⟩ with conjugation on `self`.
    pub fn inner_product(&self, other: &StateVector) -> Result<Complex64> {
        if self.registry != other.registry {
            return Err(QuditError::RegistryMismatch);
        }
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// |⟨self|other⟩|², insensitive to global phase.
    pub fn fidelity(&self, other: &StateVector) -> Result<f64> {
        Ok(self.inner_product(other)?.norm_sqr())
    }

    /// Applies a d×d unitary (row-major) to one tensor slot.
    pub fn apply_single_qudit_unitary(
        &self,
        label: ParticleLabel,
        matrix: &[Complex64],
    ) -> Result<StateVector> {
        let d = self.registry.d.get();
        let pos = self.registry.position(label)?;
        if matrix.len() != d * d {
            return Err(QuditError::LengthMismatch {
                expected: d * d,
                got: matrix.len(),
            });
        }
        check_unitary(matrix, d)?;

        // stride of the target slot in the flat index
        let below = self.registry.len() - 1 - pos;
        let stride = d.pow(below as u32);
        let block = stride * d;
        let mut out = vec![Complex64::new(0.0, 0.0); self.amplitudes.len()];
        for base in (0..self.amplitudes.len()).step_by(block) {
            for offset in 0..stride {
                for row in 0..d {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for col in 0..d {
                        acc += matrix[row * d + col]
                            * self.amplitudes[base + col * stride + offset];
                    }
                    out[base + row * stride + offset] = acc;
                }
            }
        }
        debug_assert!((l2_norm(&out) - 1.0).abs() < INTERNAL_TOL);
        Ok(StateVector {
            registry: self.registry.clone(),
            amplitudes: out,
        })
    }

    /// Returns the same amplitudes under a renamed registry.
    pub fn relabeled(&self, labels: Vec<ParticleLabel>) -> Result<StateVector> {
        if labels.len() != self.registry.len() {
            return Err(QuditError::LengthMismatch {
                expected: self.registry.len(),
                got: labels.len(),
            });
        }
        Ok(StateVector {
            registry: ParticleRegistry::new(self.registry.d, labels)?,
            amplitudes: self.amplitudes.clone(),
        })
    }
}

pub(crate) fn l2_norm(amplitudes: &[Complex64]) -> f64 {
    amplitudes
        .iter()
        .map(|a| a.norm_sqr())
        .sum::<f64>()
        .sqrt()
}

fn check_unitary(matrix: &[Complex64], d: usize) -> Result<()> {
    for i in 0..d {
        for j in 0..d {
            let mut acc = Complex64::new(0.0, 0.0);
            for k in 0..d {
                acc += matrix[k * d + i].conj() * matrix[k * d + j];
            }
            let expected = if i == j { 1.0 } else { 0.0 };
            if (acc - expected).norm() > INTERNAL_TOL {
                return Err(QuditError::NotUnitary);
            }
        }
    }
    Ok(())
}
