//! States, Hermitian operators, exact evolution and Fubini–Study geometry.

mod geometry;
mod operator;
mod pauli;
mod state;

pub use geometry::{
    bures_angle, evolution_speed, expectation, inner, mixed_expectation, std_dev, variance,
    IMAG_TOL,
};
pub use operator::{
    evolve, tensor, tensor_power, HermitianOperator, Kron, Propagator, Representation,
    HERMITIAN_TOL, MAX_DIM,
};
pub use pauli::{Pauli, PauliString, PauliSum};
pub use state::{StateVector, C64, NORM_TOL};

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// ħ, the model frequency ω and the spin-chain local frequency ω₀.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalConstants {
    pub hbar: f64,
    pub omega: f64,
    pub omega0: f64,
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        Self { hbar: 1.0, omega: 1.0, omega0: 0.0 }
    }
}

impl PhysicalConstants {
    pub fn new(hbar: f64, omega: f64, omega0: f64) -> Result<Self> {
        let c = Self { hbar, omega, omega0 };
        c.validate()?;
        Ok(c)
    }

    pub fn with_omega(omega: f64) -> Result<Self> {
        Self::new(1.0, omega, 0.0)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.hbar > 0.0 && self.hbar.is_finite()) {
            return Err(invalid("hbar must be positive and finite"));
        }
        if !(self.omega > 0.0 && self.omega.is_finite()) {
            return Err(invalid("omega must be positive and finite"));
        }
        if !(self.omega0 >= 0.0 && self.omega0.is_finite()) {
            return Err(invalid("omega0 must be non-negative and finite"));
        }
        Ok(())
    }

    /// One period 2π/ω of the single-site dynamics.
    pub fn period(&self) -> f64 {
        2.0 * std::f64::consts::PI / self.omega
    }
}
