//! Orthogonal companions |Ψ⊥(t)⟩ of the evolved state.

use std::f64::consts::PI;

use nalgebra::DVector;

use crate::error::{invalid, QslError, Result};
use crate::quantum::{inner, tensor_power, HermitianOperator, StateVector, C64};

/// Threshold below which ΔA or ΔO counts as vanishing.
pub const DEGENERACY_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub enum OrthoChoice {
    /// (A − ⟨A⟩)|Ψ(t)⟩/ΔA with A the initial-state projector.
    ProjectorDeviation,
    /// (O − ⟨O⟩)|Ψ(t)⟩/ΔO with O = (n(θ,φ)·σ)^⊗M.
    BlochObservable { theta: f64, phi: f64 },
    /// (O − ⟨O⟩)|Ψ(t)⟩/ΔO for a user-supplied observable.
    CustomObservable(HermitianOperator),
}

impl OrthoChoice {
    /// Bloch direction with θ ∈ (0, π) and φ ∈ [0, 2π).
    pub fn bloch(theta: f64, phi: f64) -> Result<Self> {
        if !(theta > 0.0 && theta < PI) {
            return Err(invalid(format!("theta must lie in (0, pi), got {theta}")));
        }
        if !(0.0..2.0 * PI).contains(&phi) {
            return Err(invalid(format!("phi must lie in [0, 2pi), got {phi}")));
        }
        Ok(OrthoChoice::BlochObservable { theta, phi })
    }

    pub fn label(&self) -> String {
        match self {
            OrthoChoice::ProjectorDeviation => "projector".into(),
            OrthoChoice::BlochObservable { theta, phi } => format!("bloch({theta:.6},{phi:.6})"),
            OrthoChoice::CustomObservable(_) => "custom".into(),
        }
    }
}

/// (A − ⟨A⟩)|ψt⟩/ΔA for A = |ψ0⟩⟨ψ0|.
///
/// Built as (f/|f|)·(ψ0 − f*ψt)/‖ψ0 − f*ψt‖, the same vector without the
/// cancellation in ⟨A⟩ − ⟨A⟩².
pub fn projector_deviation(psi0: &StateVector, psi_t: &StateVector) -> Result<StateVector> {
    let f = inner(psi0, psi_t)?;
    let p = psi0.as_dvector() - psi_t.as_dvector() * f.conj();
    let pn = p.norm();
    let delta_a = f.norm() * pn;
    if !(delta_a >= DEGENERACY_TOL) {
        return Err(QslError::DegenerateVariance { quantity: "Delta A", value: delta_a });
    }
    let phase = f / f.norm();
    Ok(StateVector::from_dvector_unchecked(p * (phase / pn)))
}

/// O = O₁⊗…⊗O_M with every O_i = n(θ,φ)·σ.
pub fn bloch_observable(theta: f64, phi: f64, m: usize) -> Result<HermitianOperator> {
    tensor_power(&HermitianOperator::bloch(theta, phi), m)
}

/// (O − ⟨O⟩)|ψt⟩/ΔO.
pub fn observable_deviation(o: &HermitianOperator, psi_t: &StateVector) -> Result<StateVector> {
    let v = o.apply(psi_t.as_dvector())?;
    deviation_from_image(v, psi_t)
}

pub(crate) fn deviation_from_image(v: DVector<C64>, psi_t: &StateVector) -> Result<StateVector> {
    let mean = psi_t.as_dvector().dotc(&v).re;
    let dev = v - psi_t.as_dvector() * C64::from(mean);
    let spread = dev.norm();
    if !(spread >= DEGENERACY_TOL) {
        return Err(QslError::DegenerateVariance { quantity: "Delta O", value: spread });
    }
    Ok(StateVector::from_dvector_unchecked(dev / C64::from(spread)))
}

/// |⟨perp|ψt⟩|.
pub fn orthogonality_residual(perp: &StateVector, psi_t: &StateVector) -> Result<f64> {
    Ok(inner(perp, psi_t)?.norm())
}

/// Applies (n·σ)^⊗M site by site without forming the 2^M matrix.
pub(crate) fn apply_local_product(u: &[[C64; 2]; 2], m: usize, v: &DVector<C64>) -> DVector<C64> {
    let mut out = v.clone();
    let d = v.len();
    for site in 0..m {
        let bit = 1usize << (m - 1 - site);
        for b in 0..d {
            if b & bit == 0 {
                let (x0, x1) = (out[b], out[b | bit]);
                out[b] = u[0][0] * x0 + u[0][1] * x1;
                out[b | bit] = u[1][0] * x0 + u[1][1] * x1;
            }
        }
    }
    out
}

pub(crate) fn bloch_matrix(theta: f64, phi: f64) -> [[C64; 2]; 2] {
    let (st, ct) = theta.sin_cos();
    let e = C64::from_polar(st, -phi);
    [[C64::new(ct, 0.0), e], [e.conj(), C64::new(-ct, 0.0)]]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::{evolve, HermitianOperator};

    #[test]
    fn projector_deviation_on_qubit() {
        let psi0 = StateVector::plus();
        let h = HermitianOperator::diagonal(vec![0.0, 1.0]).unwrap();
        let psi_t = evolve(&h, &psi0, PI / 2.0, 1.0).unwrap();
        let perp = projector_deviation(&psi0, &psi_t).unwrap();
        // (A − ½)ψt/½ with ψt = (1, −i)/√2 and A = |+⟩⟨+|
        let s = 1.0 / 2f64.sqrt();
        let f = C64::new(0.5, -0.5);
        let expect = [
            (f * s - psi_t.amplitudes()[0] * 0.5) / 0.5,
            (f * s - psi_t.amplitudes()[1] * 0.5) / 0.5,
        ];
        for (a, b) in perp.amplitudes().iter().zip(expect) {
            assert!((a - b).norm() < 1e-12);
        }
        assert!(orthogonality_residual(&perp, &psi_t).unwrap() < 1e-12);
    }

    #[test]
    fn degenerate_at_t0() {
        let psi0 = StateVector::plus();
        assert!(matches!(
            projector_deviation(&psi0, &psi0),
            Err(QslError::DegenerateVariance { .. })
        ));
    }

    #[test]
    fn local_product_matches_dense() {
        let u = bloch_matrix(0.7, 2.1);
        let o = bloch_observable(0.7, 2.1, 3).unwrap();
        let v = DVector::from_fn(8, |i, _| C64::new(i as f64 * 0.3 - 1.0, 0.1 * i as f64));
        let fast = apply_local_product(&u, 3, &v);
        let slow = o.apply(&v).unwrap();
        assert!((fast - slow).norm() < 1e-12);
    }
}
