use super::operator::HermitianOperator;
use super::state::{StateVector, C64};
use crate::error::{QslError, Result};

/// Imaginary residue allowed on a Hermitian expectation value.
pub const IMAG_TOL: f64 = 1e-10;

/// ⟨a|b⟩, conjugating the first argument.
pub fn inner(a: &StateVector, b: &StateVector) -> Result<C64> {
    a.check_dim(b.dim())?;
    Ok(a.as_dvector().dotc(b.as_dvector()))
}

/// ⟨ψ|op|ψ⟩.
pub fn expectation(op: &HermitianOperator, psi: &StateVector) -> Result<f64> {
    let v = op.apply(psi.as_dvector())?;
    let z = psi.as_dvector().dotc(&v);
    if z.im.abs() > IMAG_TOL * z.re.abs().max(1.0) {
        return Err(QslError::NotHermitian(z.im.abs()));
    }
    Ok(z.re)
}

/// ⟨ψ|a·b|ψ⟩, generally complex.
pub fn mixed_expectation(a: &HermitianOperator, b: &HermitianOperator, psi: &StateVector) -> Result<C64> {
    a.check_same_dim(b)?;
    let av = a.apply(psi.as_dvector())?;
    let bv = b.apply(psi.as_dvector())?;
    Ok(av.dotc(&bv))
}

/// ⟨op²⟩ − ⟨op⟩², evaluated as ‖(op − ⟨op⟩)ψ‖².
pub fn variance(op: &HermitianOperator, psi: &StateVector) -> Result<f64> {
    let v = op.apply(psi.as_dvector())?;
    let mean = psi.as_dvector().dotc(&v).re;
    let dev = v - psi.as_dvector() * C64::from(mean);
    Ok(dev.norm_squared().max(0.0))
}

pub fn std_dev(op: &HermitianOperator, psi: &StateVector) -> Result<f64> {
    variance(op, psi).map(f64::sqrt)
}

/// Bures angle S₀ = 2·arccos|⟨ψ0|ψT⟩|.
///
/// Evaluated through atan2 of ‖ψT − fψ0‖ and |f|, which agrees with the
/// clamped arccos but keeps full precision near S₀ = 0.
pub fn bures_angle(psi0: &StateVector, psi_t: &StateVector) -> Result<f64> {
    if psi0 == psi_t {
        return Ok(0.0);
    }
    let f = inner(psi0, psi_t)?;
    let resid = (psi_t.as_dvector() - psi0.as_dvector() * f).norm();
    Ok(2.0 * resid.atan2(f.norm().min(1.0)))
}

/// Fubini–Study speed ds/dt = 2ΔH/ħ.
pub fn evolution_speed(h: &HermitianOperator, psi: &StateVector, hbar: f64) -> Result<f64> {
    Ok(2.0 * std_dev(h, psi)? / hbar)
}

impl HermitianOperator {
    pub(crate) fn check_same_dim(&self, other: &HermitianOperator) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(QslError::DimensionMismatch { left: self.dim(), right: other.dim() });
        }
        Ok(())
    }
}
