//! Geodesic trajectories, parallel transport and the two geodesic propositions.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bounds::{r_integrand, SignMode, TimeGrid};
use crate::error::{invalid, QslError, Result};
use crate::ortho::{projector_deviation, DEGENERACY_TOL};
use crate::quantum::{expectation, inner, std_dev, HermitianOperator, StateVector, C64};

/// Parallel-transported states along a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<StateVector>,
    /// ∫₀ᵗ⟨H⟩dt' at each time
    pub mean_energy_integral: Vec<f64>,
    pub hbar: f64,
}

impl Trajectory {
    fn spacing(&self) -> Result<f64> {
        if self.times.len() < 3 {
            return Err(QslError::GridTooCoarse("need at least 3 samples".into()));
        }
        Ok(self.times[1] - self.times[0])
    }

    /// max |⟨ψ̄|ψ̄̇⟩| over interior points, by centered differences.
    pub fn transport_residual(&self) -> Result<f64> {
        let h = self.spacing()?;
        let mut worst = 0.0f64;
        for i in 1..self.states.len() - 1 {
            let d = (self.states[i + 1].as_dvector() - self.states[i - 1].as_dvector()) / C64::from(2.0 * h);
            worst = worst.max(self.states[i].as_dvector().dotc(&d).norm());
        }
        Ok(worst)
    }
}

/// ψ̄(t) = e^{i⟨H⟩t/ħ}·e^{−iHt/ħ}ψ0 on the grid.
pub fn parallel_transport(
    h: &HermitianOperator,
    psi0: &StateVector,
    grid: &TimeGrid,
    hbar: f64,
) -> Result<Trajectory> {
    grid.validate()?;
    let dh = std_dev(h, psi0)?;
    if !(dh > 0.0) {
        return Err(QslError::Stationary(dh));
    }
    let mean = expectation(h, psi0)?;
    let prop = h.propagator(psi0, hbar)?;
    let times = grid.values();
    let mut states = Vec::with_capacity(times.len());
    for &t in &times {
        let psi = prop.at(t)?;
        let phase = C64::from_polar(1.0, mean * t / hbar);
        states.push(StateVector::from_dvector_unchecked(psi.as_dvector() * phase));
    }
    let mean_energy_integral = times.iter().map(|t| mean * t).collect();
    Ok(Trajectory { times, states, mean_energy_integral, hbar })
}

/// cos(ΔH t/ħ)|ψ̄0⟩ + sin(ΔH t/ħ)/(ΔH/ħ)·|ψ̄̇0⟩.
pub fn geodesic_state(
    psibar0: &StateVector,
    velocity0: &DVector<C64>,
    dh: f64,
    t: f64,
    hbar: f64,
) -> Result<StateVector> {
    check_geodesic_data(psibar0, velocity0, dh, hbar)?;
    let w = dh / hbar;
    let (s, c) = (w * t).sin_cos();
    Ok(StateVector::from_dvector_unchecked(
        psibar0.as_dvector() * C64::from(c) + velocity0 * C64::from(s / w),
    ))
}

/// Hamiltonian iħ(|v⟩⟨ψ| − |ψ⟩⟨v|), whose evolution from ψ is the geodesic with initial velocity v.
pub fn geodesic_generator(
    psibar0: &StateVector,
    velocity0: &DVector<C64>,
    hbar: f64,
) -> Result<HermitianOperator> {
    check_geodesic_data(psibar0, velocity0, hbar * velocity0.norm(), hbar)?;
    let p = psibar0.as_dvector();
    let m: DMatrix<C64> = (velocity0 * p.adjoint() - p * velocity0.adjoint()) * C64::new(0.0, hbar);
    HermitianOperator::dense(m)
}

/// Random velocity of norm `speed`, orthogonal to `psi`.
pub fn random_velocity(psi: &StateVector, speed: f64, rng: &mut impl Rng) -> DVector<C64> {
    let v = random_orthogonal(psi, rng);
    v.as_dvector() * C64::from(speed)
}

fn check_geodesic_data(psi: &StateVector, v: &DVector<C64>, dh: f64, hbar: f64) -> Result<()> {
    psi.check_dim(v.len())?;
    let overlap = psi.as_dvector().dotc(v).norm();
    if overlap > 1e-10 {
        return Err(QslError::NotOrthogonal(overlap));
    }
    if !(dh > 0.0) || ((v.norm() - dh / hbar).abs() > 1e-10) {
        return Err(invalid(format!(
            "velocity norm {} must equal dH/hbar = {}",
            v.norm(),
            dh / hbar
        )));
    }
    Ok(())
}

/// Unit state orthogonal to `psi`, drawn from a uniform box and projected.
pub fn random_orthogonal(psi: &StateVector, rng: &mut impl Rng) -> StateVector {
    loop {
        let v = DVector::from_fn(psi.dim(), |_, _| {
            C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
        });
        let p = psi.as_dvector();
        let w = &v - p * p.dotc(&v);
        let n = w.norm();
        if n > 1e-3 {
            return StateVector::from_dvector_unchecked(w / C64::from(n));
        }
    }
}

/// Outcome of the R(t) = 0 check.
#[derive(Debug, Clone, PartialEq)]
pub struct Prop1Report {
    /// max R over grid points and sampled orthogonal states
    pub max_r: f64,
    /// max R for the projector-deviation state alone
    pub max_r_projector: f64,
    pub evaluated_points: usize,
    pub skipped_points: usize,
    /// Geodesic-equation residual of the input trajectory
    pub geodesic_residual: f64,
}

impl Prop1Report {
    pub fn is_geodesic(&self) -> bool {
        self.geodesic_residual < 1e-4
    }
}

/// max R(t) for `samples` random orthogonal states per grid point (adaptive sign).
pub fn prop1_residual(
    h: &HermitianOperator,
    psi0: &StateVector,
    samples: usize,
    seed: u64,
    grid: &TimeGrid,
    hbar: f64,
) -> Result<Prop1Report> {
    grid.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let prop = h.propagator(psi0, hbar)?;
    let mut max_r = 0.0f64;
    let mut max_proj = 0.0f64;
    let (mut used, mut skipped) = (0, 0);
    for t in grid.values() {
        let psi_t = prop.at(t)?;
        let f = inner(psi0, &psi_t)?;
        let delta_a = f.norm() * (psi_t.as_dvector() - psi0.as_dvector() * f).norm();
        if delta_a < DEGENERACY_TOL {
            skipped += 1;
            continue;
        }
        used += 1;
        let perp = projector_deviation(psi0, &psi_t)?;
        let r = r_integrand(&psi_t, &perp, psi0, h, SignMode::Adaptive, hbar)?;
        max_proj = max_proj.max(r);
        max_r = max_r.max(r);
        for _ in 0..samples {
            let perp = random_orthogonal(&psi_t, &mut rng);
            max_r = max_r.max(r_integrand(&psi_t, &perp, psi0, h, SignMode::Adaptive, hbar)?);
        }
    }
    let fine = TimeGrid::new(0.0, grid.end.max(1e-9), 2001)?;
    let traj = parallel_transport(h, psi0, &fine, hbar)?;
    let dh = std_dev(h, psi0)?;
    let geodesic_residual = prop2_residual_unchecked(&traj, dh)?;
    Ok(Prop1Report {
        max_r,
        max_r_projector: max_proj,
        evaluated_points: used,
        skipped_points: skipped,
        geodesic_residual,
    })
}

/// max ‖ψ̄̈ + (ΔH/ħ)²ψ̄‖ over interior points, by centered second differences.
pub fn prop2_residual(traj: &Trajectory, dh: f64) -> Result<f64> {
    let h = traj.spacing()?;
    let w = dh / traj.hbar;
    if h * w > 2.0 * std::f64::consts::PI / 200.0 {
        return Err(QslError::GridTooCoarse(format!(
            "spacing {h} gives fewer than 200 samples per geodesic period"
        )));
    }
    prop2_residual_unchecked(traj, dh)
}

fn prop2_residual_unchecked(traj: &Trajectory, dh: f64) -> Result<f64> {
    let h = traj.spacing()?;
    let w2 = (dh / traj.hbar).powi(2);
    let mut worst = 0.0f64;
    for i in 1..traj.states.len() - 1 {
        let (a, b, c) = (
            traj.states[i - 1].as_dvector(),
            traj.states[i].as_dvector(),
            traj.states[i + 1].as_dvector(),
        );
        let acc = (a + c - b * C64::from(2.0)) / C64::from(h * h);
        worst = worst.max((acc + b * C64::from(w2)).norm());
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn geodesic_endpoints() {
        let psi = StateVector::basis(3, 0).unwrap();
        let v = DVector::from_vec(vec![C64::new(0.0, 0.0), C64::new(0.0, 1.7), C64::new(0.0, 0.0)]);
        let at0 = geodesic_state(&psi, &v, 1.7, 0.0, 1.0).unwrap();
        assert!((at0.as_dvector() - psi.as_dvector()).norm() < 1e-15);
        let q = geodesic_state(&psi, &v, 1.7, std::f64::consts::FRAC_PI_2 / 1.7, 1.0).unwrap();
        assert!((q.amplitudes()[1] - C64::new(0.0, 1.0)).norm() < 1e-12);
    }

    #[test]
    fn rejects_bad_velocity() {
        let psi = StateVector::basis(2, 0).unwrap();
        let v = DVector::from_vec(vec![C64::new(0.1, 0.0), C64::new(1.0, 0.0)]);
        assert!(geodesic_state(&psi, &v, 1.0, 0.3, 1.0).is_err());
    }
}
