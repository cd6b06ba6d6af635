use nalgebra::DVector;
use num_complex::Complex64;

use crate::error::{invalid, QslError, Result};

pub type C64 = Complex64;

/// Tolerance on the unit norm of every constructed state.
pub const NORM_TOL: f64 = 1e-12;

/// A normalized pure state in a finite-dimensional Hilbert space.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amps: DVector<C64>,
}

impl StateVector {
    /// Builds a state from raw amplitudes, normalizing them.
    pub fn new(amplitudes: Vec<C64>) -> Result<Self> {
        if amplitudes.len() < 2 {
            return Err(invalid(format!(
                "state dimension must be at least 2, got {}",
                amplitudes.len()
            )));
        }
        if amplitudes.iter().any(|a| !a.re.is_finite() || !a.im.is_finite()) {
            return Err(invalid("state amplitudes must be finite"));
        }
        let amps = DVector::from_vec(amplitudes);
        let norm = amps.norm();
        if norm == 0.0 {
            return Err(invalid("zero vector cannot be normalized"));
        }
        Ok(Self { amps: amps / C64::from(norm) })
    }

    /// Builds a state from amplitudes that must already have unit norm.
    pub fn from_normalized(amplitudes: Vec<C64>) -> Result<Self> {
        if amplitudes.len() < 2 {
            return Err(invalid("state dimension must be at least 2"));
        }
        let amps = DVector::from_vec(amplitudes);
        let dev = (amps.norm() - 1.0).abs();
        if !(dev <= NORM_TOL) {
            return Err(invalid(format!("state norm deviates from 1 by {dev:e}")));
        }
        Ok(Self { amps })
    }

    pub fn from_real(amplitudes: &[f64]) -> Result<Self> {
        Self::new(amplitudes.iter().map(|&x| C64::new(x, 0.0)).collect())
    }

    /// Computational basis vector |k⟩.
    pub fn basis(dim: usize, k: usize) -> Result<Self> {
        if dim < 2 || k >= dim {
            return Err(invalid(format!("basis index {k} invalid for dimension {dim}")));
        }
        let mut amps = DVector::zeros(dim);
        amps[k] = C64::new(1.0, 0.0);
        Ok(Self { amps })
    }

    /// Uniform superposition over all basis states.
    pub fn uniform(dim: usize) -> Result<Self> {
        if dim < 2 {
            return Err(invalid("state dimension must be at least 2"));
        }
        let a = C64::new(1.0 / (dim as f64).sqrt(), 0.0);
        Ok(Self { amps: DVector::from_element(dim, a) })
    }

    /// Single-qubit state α|0⟩ + β|1⟩ (normalized on construction).
    pub fn qubit(alpha: C64, beta: C64) -> Result<Self> {
        Self::new(vec![alpha, beta])
    }

    pub fn plus() -> Self {
        Self::uniform(2).expect("dimension 2 is valid")
    }

    pub fn minus() -> Self {
        let s = 1.0 / 2f64.sqrt();
        Self { amps: DVector::from_vec(vec![C64::new(s, 0.0), C64::new(-s, 0.0)]) }
    }

    pub(crate) fn from_dvector_unchecked(amps: DVector<C64>) -> Self {
        Self { amps }
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[C64] {
        self.amps.as_slice()
    }

    pub fn as_dvector(&self) -> &DVector<C64> {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.norm()
    }

    pub(crate) fn check_dim(&self, other: usize) -> Result<()> {
        if self.dim() != other {
            return Err(QslError::DimensionMismatch { left: self.dim(), right: other });
        }
        Ok(())
    }
}
