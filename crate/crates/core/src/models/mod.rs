//! The five parametrized systems: analytic closed forms and dense realizations.

mod closed_form;
mod spin_chain;

pub use spin_chain::block_layout;

use crate::error::{invalid, QslError, Result};
use crate::quantum::{
    tensor_power, HermitianOperator, PauliString, PhysicalConstants, StateVector, C64,
    MAX_DIM,
};
use closed_form::{cpow, power_infidelity, reduce_phase, uniform_sums};

/// Tolerance on |α|² + |β|² = 1.
pub const AMPLITUDE_TOL: f64 = 1e-12;

/// M subsystems, each a uniform N-level superposition with H_i = ħω·Σ n|n⟩⟨n|.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HomogeneousProductModel {
    pub m: usize,
    pub n: usize,
    pub consts: PhysicalConstants,
}

/// M qubits in the product state (α|0⟩ + β|1⟩)^⊗M with H_i = ħω|1⟩⟨1|.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QubitProductModel {
    pub alpha: C64,
    pub beta: C64,
    pub m: usize,
    pub consts: PhysicalConstants,
}

/// (1/√N)·Σ |n⟩^⊗M under the same local Hamiltonians as the product model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HomogeneousEntangledModel {
    pub m: usize,
    pub n: usize,
    pub consts: PhysicalConstants,
}

/// α|0…0⟩ + β|1…1⟩ with H_i = ħω|1⟩⟨1|.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QubitGhzModel {
    pub alpha: C64,
    pub beta: C64,
    pub m: usize,
    pub consts: PhysicalConstants,
}

/// Periodic chain of M spins with Q = 2M/K interaction blocks of K spins.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpinChainModel {
    pub m: usize,
    pub k: usize,
    pub q: usize,
    pub consts: PhysicalConstants,
}

fn check_amplitudes(alpha: C64, beta: C64) -> Result<()> {
    let dev = (alpha.norm_sqr() + beta.norm_sqr() - 1.0).abs();
    if !(dev <= AMPLITUDE_TOL) {
        return Err(invalid(format!("|alpha|^2 + |beta|^2 deviates from 1 by {dev:e}")));
    }
    Ok(())
}

fn check_dim(n: usize, m: usize) -> Result<usize> {
    match n.checked_pow(m as u32) {
        Some(d) if d <= MAX_DIM => Ok(d),
        Some(d) => Err(QslError::DimensionCap { dim: d, cap: MAX_DIM }),
        None => Err(QslError::DimensionCap { dim: usize::MAX, cap: MAX_DIM }),
    }
}

impl HomogeneousProductModel {
    pub fn new(m: usize, n: usize, consts: PhysicalConstants) -> Result<Self> {
        consts.validate()?;
        if m < 1 || n < 2 {
            return Err(invalid(format!("product model needs M >= 1, N >= 2 (got M={m}, N={n})")));
        }
        Ok(Self { m, n, consts })
    }
}

impl QubitProductModel {
    pub fn new(alpha: C64, beta: C64, m: usize, consts: PhysicalConstants) -> Result<Self> {
        consts.validate()?;
        check_amplitudes(alpha, beta)?;
        if m < 1 {
            return Err(invalid("qubit product model needs M >= 1"));
        }
        Ok(Self { alpha, beta, m, consts })
    }

    /// Real α in [0, 1], β = √(1 − α²).
    pub fn with_real_alpha(alpha: f64, m: usize, consts: PhysicalConstants) -> Result<Self> {
        let (a, b) = real_pair(alpha)?;
        Self::new(a, b, m, consts)
    }
}

impl HomogeneousEntangledModel {
    pub fn new(m: usize, n: usize, consts: PhysicalConstants) -> Result<Self> {
        consts.validate()?;
        if m < 2 || n < 2 {
            return Err(invalid(format!("entangled model needs M >= 2, N >= 2 (got M={m}, N={n})")));
        }
        Ok(Self { m, n, consts })
    }
}

impl QubitGhzModel {
    pub fn new(alpha: C64, beta: C64, m: usize, consts: PhysicalConstants) -> Result<Self> {
        consts.validate()?;
        check_amplitudes(alpha, beta)?;
        if m < 2 {
            return Err(invalid("GHZ model needs M >= 2"));
        }
        Ok(Self { alpha, beta, m, consts })
    }

    pub fn with_real_alpha(alpha: f64, m: usize, consts: PhysicalConstants) -> Result<Self> {
        let (a, b) = real_pair(alpha)?;
        Self::new(a, b, m, consts)
    }
}

impl SpinChainModel {
    pub fn new(m: usize, k: usize, consts: PhysicalConstants) -> Result<Self> {
        consts.validate()?;
        if k < 2 || !k.is_multiple_of(2) {
            return Err(invalid(format!("block size K must be even and >= 2 (got {k})")));
        }
        if !m.is_multiple_of(k) {
            return Err(invalid(format!("block size K={k} must divide M={m}")));
        }
        if k >= m {
            return Err(invalid(format!("block size K={k} must be smaller than M={m}")));
        }
        Ok(Self { m, k, q: 2 * m / k, consts })
    }
}

fn real_pair(alpha: f64) -> Result<(C64, C64)> {
    if !(0.0..=1.0).contains(&alpha) {
        return Err(invalid(format!("real alpha must lie in [0, 1] (got {alpha})")));
    }
    Ok((C64::new(alpha, 0.0), C64::new((1.0 - alpha * alpha).max(0.0).sqrt(), 0.0)))
}

/// Any of the five systems.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Model {
    HomogeneousProduct(HomogeneousProductModel),
    QubitProduct(QubitProductModel),
    HomogeneousEntangled(HomogeneousEntangledModel),
    QubitGhz(QubitGhzModel),
    SpinChain(SpinChainModel),
}

impl From<HomogeneousProductModel> for Model {
    fn from(m: HomogeneousProductModel) -> Self {
        Model::HomogeneousProduct(m)
    }
}
impl From<QubitProductModel> for Model {
    fn from(m: QubitProductModel) -> Self {
        Model::QubitProduct(m)
    }
}
impl From<HomogeneousEntangledModel> for Model {
    fn from(m: HomogeneousEntangledModel) -> Self {
        Model::HomogeneousEntangled(m)
    }
}
impl From<QubitGhzModel> for Model {
    fn from(m: QubitGhzModel) -> Self {
        Model::QubitGhz(m)
    }
}
impl From<SpinChainModel> for Model {
    fn from(m: SpinChainModel) -> Self {
        Model::SpinChain(m)
    }
}

/// Mean energy and spread; for the spin chain also the strong-coupling values.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyStats {
    pub mean: f64,
    pub spread: f64,
    pub strong_coupling: Option<(f64, f64)>,
}

/// ⟨O⟩, ⟨OA⟩, ⟨OH⟩ and ΔO for a Bloch observable, all taken in |Ψ(t)⟩.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ObservableMoments {
    pub mean: f64,
    pub with_projector: C64,
    pub with_hamiltonian: C64,
    pub spread: f64,
}

/// Overlap f = ⟨Ψ(0)|Ψ(t)⟩, 1 − |f|² and G = ⟨Ψ(0)|H|Ψ(t)⟩.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OverlapData {
    pub overlap: C64,
    pub infidelity: f64,
    pub h_overlap: C64,
}

/// Algebraic shorthands of the closed forms, recomputed per call.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AnalyticIntermediates {
    HomogeneousProduct { z1: C64, z2: C64, f: C64 },
    HomogeneousEntangled { z1_tilde: C64, z2_tilde: C64, f: C64 },
    QubitProduct { a1: f64, a2: f64, b1: C64, b2: C64, f: C64 },
    QubitGhz {
        a1_tilde: f64,
        a2_tilde: f64,
        b1_tilde: C64,
        b2_tilde: C64,
        c1_tilde: f64,
        c2_tilde: C64,
        f: C64,
    },
    SpinChain { kappa: C64, f: C64 },
}

fn check_time(t: f64) -> Result<()> {
    if !(t >= 0.0) || !t.is_finite() {
        return Err(invalid(format!("time must be finite and non-negative (got {t})")));
    }
    Ok(())
}

fn check_angles(theta: f64, phi: f64) -> Result<()> {
    if !(theta.is_finite() && phi.is_finite()) {
        return Err(invalid("Bloch angles must be finite"));
    }
    Ok(())
}

impl Model {
    pub fn consts(&self) -> PhysicalConstants {
        match self {
            Model::HomogeneousProduct(m) => m.consts,
            Model::QubitProduct(m) => m.consts,
            Model::HomogeneousEntangled(m) => m.consts,
            Model::QubitGhz(m) => m.consts,
            Model::SpinChain(m) => m.consts,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Model::HomogeneousProduct(_) => "homogeneous-product",
            Model::QubitProduct(_) => "qubit-product",
            Model::HomogeneousEntangled(_) => "homogeneous-entangled",
            Model::QubitGhz(_) => "qubit-ghz",
            Model::SpinChain(_) => "spin-chain",
        }
    }

    /// Number of subsystems (qubits or qudits).
    pub fn sites(&self) -> usize {
        match self {
            Model::HomogeneousProduct(m) => m.m,
            Model::QubitProduct(m) => m.m,
            Model::HomogeneousEntangled(m) => m.m,
            Model::QubitGhz(m) => m.m,
            Model::SpinChain(m) => m.m,
        }
    }

    /// Local dimension of one subsystem.
    pub fn local_dim(&self) -> usize {
        match self {
            Model::HomogeneousProduct(m) => m.n,
            Model::HomogeneousEntangled(m) => m.n,
            _ => 2,
        }
    }

    pub fn is_qubit_model(&self) -> bool {
        self.local_dim() == 2
    }

    /// Whether closed forms are available (everything except a spin chain with ω₀ > 0).
    pub fn has_closed_form(&self) -> bool {
        !matches!(self, Model::SpinChain(s) if s.consts.omega0 > 0.0)
    }

    /// Whether Bloch-observable moments have closed forms.
    pub fn has_bloch_closed_form(&self) -> bool {
        matches!(self, Model::QubitProduct(_) | Model::QubitGhz(_))
    }

    pub fn energy_stats(&self) -> EnergyStats {
        let c = self.consts();
        let hw = c.hbar * c.omega;
        let plain = |mean, spread| EnergyStats { mean, spread, strong_coupling: None };
        match self {
            Model::HomogeneousProduct(p) => {
                let (m, n) = (p.m as f64, p.n as f64);
                plain(hw * m * (n - 1.0) / 2.0, hw * (m * (n * n - 1.0) / 12.0).sqrt())
            }
            Model::HomogeneousEntangled(p) => {
                let (m, n) = (p.m as f64, p.n as f64);
                plain(hw * m * (n - 1.0) / 2.0, hw * m * ((n * n - 1.0) / 12.0).sqrt())
            }
            Model::QubitProduct(p) => {
                let m = p.m as f64;
                plain(hw * m * p.beta.norm_sqr(), hw * m.sqrt() * p.alpha.norm() * p.beta.norm())
            }
            Model::QubitGhz(p) => {
                let m = p.m as f64;
                plain(hw * m * p.beta.norm_sqr(), hw * m * p.alpha.norm() * p.beta.norm())
            }
            Model::SpinChain(s) => {
                let (m, q) = (s.m as f64, s.q as f64);
                let (w, w0) = (c.omega, c.omega0);
                EnergyStats {
                    mean: c.hbar * (m * w0 + q * w),
                    spread: c.hbar * (m * w0 * w0 + q * w * w).sqrt(),
                    strong_coupling: Some((c.hbar * q * w, c.hbar * q.sqrt() * w)),
                }
            }
        }
    }

    /// f, 1 − |f|² and ⟨Ψ(0)|H|Ψ(t)⟩ from the closed forms.
    pub fn overlap_data(&self, t: f64) -> Result<OverlapData> {
        check_time(t)?;
        let c = self.consts();
        let hw = c.hbar * c.omega;
        let wt = c.omega * t;
        Ok(match self {
            Model::HomogeneousProduct(p) => {
                let u = uniform_sums(p.n, wt);
                let fm1 = cpow(u.f, p.m - 1);
                OverlapData {
                    overlap: fm1 * u.f,
                    infidelity: power_infidelity(u.infidelity, p.m),
                    h_overlap: u.s * fm1 * (hw * p.m as f64),
                }
            }
            Model::HomogeneousEntangled(p) => {
                let u = uniform_sums(p.n, p.m as f64 * wt);
                OverlapData {
                    overlap: u.f,
                    infidelity: u.infidelity,
                    h_overlap: u.s * (hw * p.m as f64),
                }
            }
            Model::QubitProduct(p) => {
                let (a2, b2) = (p.alpha.norm_sqr(), p.beta.norm_sqr());
                let ph = C64::from_polar(1.0, -reduce_phase(wt));
                let f1 = ph * b2 + a2;
                let u1 = 4.0 * a2 * b2 * (0.5 * reduce_phase(wt)).sin().powi(2);
                let fm1 = cpow(f1, p.m - 1);
                OverlapData {
                    overlap: fm1 * f1,
                    infidelity: power_infidelity(u1, p.m),
                    h_overlap: ph * fm1 * (hw * b2 * p.m as f64),
                }
            }
            Model::QubitGhz(p) => {
                let (a2, b2) = (p.alpha.norm_sqr(), p.beta.norm_sqr());
                let x = reduce_phase(p.m as f64 * wt);
                let ph = C64::from_polar(1.0, -x);
                OverlapData {
                    overlap: ph * b2 + a2,
                    infidelity: (4.0 * a2 * b2 * (0.5 * x).sin().powi(2)).clamp(0.0, 1.0),
                    h_overlap: ph * (hw * b2 * p.m as f64),
                }
            }
            Model::SpinChain(s) => {
                if c.omega0 > 0.0 {
                    return Err(QslError::Unsupported(
                        "closed forms for the spin chain assume omega0 = 0".into(),
                    ));
                }
                spin_chain::overlap_data(s.q, wt, hw)
            }
        })
    }

    /// ⟨Ψ(0)|Ψ(t)⟩; spin chains with ω₀ > 0 go through the dense realization.
    pub fn overlap_amplitude(&self, t: f64) -> Result<C64> {
        check_time(t)?;
        if self.has_closed_form() {
            return Ok(self.overlap_data(t)?.overlap);
        }
        let (psi0, h) = self.realize()?;
        let psi_t = h.propagator(&psi0, self.consts().hbar)?.at(t)?;
        crate::quantum::inner(&psi0, &psi_t)
    }

    /// ⟨Ψ(t)|A·H|Ψ(t)⟩ with A = |Ψ(0)⟩⟨Ψ(0)|, assembled as f*·⟨Ψ(0)|H|Ψ(t)⟩.
    pub fn ah_expectation(&self, t: f64) -> Result<C64> {
        let d = self.overlap_data(t)?;
        Ok(d.overlap.conj() * d.h_overlap)
    }

    /// Moments of O = (n·σ)^⊗M in |Ψ(t)⟩ for the qubit product and GHZ models.
    pub fn o_moments(&self, t: f64, theta: f64, phi: f64) -> Result<ObservableMoments> {
        check_time(t)?;
        check_angles(theta, phi)?;
        let c = self.consts();
        let hw = c.hbar * c.omega;
        let wt = reduce_phase(c.omega * t);
        let (st, ct) = theta.sin_cos();
        let (mean, with_projector, with_hamiltonian) = match self {
            Model::QubitProduct(p) => {
                let (a, b) = (p.alpha, p.beta);
                let (a2, b2) = (a.norm_sqr(), b.norm_sqr());
                let ab = a.conj() * b;
                let ph = C64::from_polar(1.0, -wt);
                let f1 = ph * b2 + a2;
                let coh = ab * ph;
                let (a1, a2c) = (2.0 * coh.re, 2.0 * coh.im);
                let o1 = (a1 * phi.cos() + a2c * phi.sin()) * st + (a2 - b2) * ct;
                let b1c = ab * C64::from_polar(1.0, -phi) + ab.conj() * C64::from_polar(1.0, phi + wt);
                let b2c = C64::new(a2, 0.0) - C64::from_polar(b2, wt);
                let oa1 = f1 * (b1c * st + b2c * ct);
                let oh1 = (ab * C64::from_polar(st, -(phi + wt)) - b2 * ct) * hw;
                let m = p.m;
                (
                    o1.powi(m as i32),
                    cpow(oa1, m),
                    oh1 * (m as f64) * o1.powi(m as i32 - 1),
                )
            }
            Model::QubitGhz(g) => {
                let i = ghz_intermediates(g, wt, phi);
                let (cm, sm) = (ct.powi(g.m as i32), st.powi(g.m as i32));
                (
                    i.a1 * cm + i.a2 * sm,
                    i.b1 * cm + i.b2 * sm,
                    i.c2 * sm + i.c1 * cm,
                )
            }
            _ => {
                return Err(QslError::Unsupported(format!(
                    "Bloch-observable closed forms are not available for {}",
                    self.name()
                )))
            }
        };
        let spread = ((1.0 - mean) * (1.0 + mean)).max(0.0).sqrt();
        Ok(ObservableMoments { mean, with_projector, with_hamiltonian, spread })
    }

    pub fn intermediates(&self, t: f64, _theta: f64, phi: f64) -> Result<AnalyticIntermediates> {
        check_time(t)?;
        let c = self.consts();
        let wt = c.omega * t;
        let f = self.overlap_data(t)?.overlap;
        Ok(match self {
            Model::HomogeneousProduct(p) => {
                let u = uniform_sums(p.n, wt);
                AnalyticIntermediates::HomogeneousProduct { z1: u.z1, z2: u.z2, f }
            }
            Model::HomogeneousEntangled(p) => {
                let u = uniform_sums(p.n, p.m as f64 * wt);
                AnalyticIntermediates::HomogeneousEntangled { z1_tilde: u.z1, z2_tilde: u.z2, f }
            }
            Model::QubitProduct(p) => {
                let ab = p.alpha.conj() * p.beta;
                let wt = reduce_phase(wt);
                let coh = ab * C64::from_polar(1.0, -wt);
                AnalyticIntermediates::QubitProduct {
                    a1: 2.0 * coh.re,
                    a2: 2.0 * coh.im,
                    b1: ab * C64::from_polar(1.0, -phi) + ab.conj() * C64::from_polar(1.0, phi + wt),
                    b2: C64::new(p.alpha.norm_sqr(), 0.0)
                        - C64::from_polar(p.beta.norm_sqr(), wt),
                    f,
                }
            }
            Model::QubitGhz(g) => {
                let i = ghz_intermediates(g, reduce_phase(wt), phi);
                AnalyticIntermediates::QubitGhz {
                    a1_tilde: i.a1,
                    a2_tilde: i.a2,
                    b1_tilde: i.b1,
                    b2_tilde: i.b2,
                    c1_tilde: i.c1,
                    c2_tilde: i.c2,
                    f,
                }
            }
            Model::SpinChain(s) => AnalyticIntermediates::SpinChain {
                kappa: spin_chain::kappa(s.q, wt, c.hbar * c.omega),
                f,
            },
        })
    }

    /// Explicit initial state and full Hamiltonian.
    pub fn realize(&self) -> Result<(StateVector, HermitianOperator)> {
        let c = self.consts();
        let hw = c.hbar * c.omega;
        match self {
            Model::HomogeneousProduct(p) => {
                let d = check_dim(p.n, p.m)?;
                let psi0 = StateVector::uniform(d)?;
                Ok((psi0, HermitianOperator::diagonal(digit_energies(p.n, p.m, hw))?))
            }
            Model::HomogeneousEntangled(p) => {
                let d = check_dim(p.n, p.m)?;
                let stride = (d - 1) / (p.n - 1);
                let mut amps = vec![C64::new(0.0, 0.0); d];
                for k in 0..p.n {
                    amps[k * stride] = C64::new(1.0, 0.0);
                }
                Ok((StateVector::new(amps)?, HermitianOperator::diagonal(digit_energies(p.n, p.m, hw))?))
            }
            Model::QubitProduct(p) => {
                check_dim(2, p.m)?;
                let psi0 = tensor_power(&StateVector::new(vec![p.alpha, p.beta])?, p.m)?;
                Ok((psi0, HermitianOperator::diagonal(digit_energies(2, p.m, hw))?))
            }
            Model::QubitGhz(p) => {
                let d = check_dim(2, p.m)?;
                let mut amps = vec![C64::new(0.0, 0.0); d];
                amps[0] = p.alpha;
                amps[d - 1] = p.beta;
                Ok((
                    StateVector::from_normalized(amps)?,
                    HermitianOperator::diagonal(digit_energies(2, p.m, hw))?,
                ))
            }
            Model::SpinChain(s) => {
                let d = check_dim(2, s.m)?;
                Ok((StateVector::basis(d, 0)?, HermitianOperator::pauli_sum(spin_chain::hamiltonian(s)?)?))
            }
        }
    }

    /// Interaction strings S_j of a spin chain, one per block.
    pub fn block_strings(&self) -> Result<Vec<PauliString>> {
        match self {
            Model::SpinChain(s) => spin_chain::strings(s),
            _ => Err(QslError::Unsupported(format!("{} has no interaction blocks", self.name()))),
        }
    }
}

struct GhzTerms {
    a1: f64,
    a2: f64,
    b1: C64,
    b2: C64,
    c1: f64,
    c2: C64,
}

fn ghz_intermediates(g: &QubitGhzModel, wt: f64, phi: f64) -> GhzTerms {
    let hw = g.consts.hbar * g.consts.omega;
    let m = g.m as f64;
    let sign = if g.m.is_multiple_of(2) { 1.0 } else { -1.0 };
    let (a2, b2) = (g.alpha.norm_sqr(), g.beta.norm_sqr());
    let ab = g.alpha.conj() * g.beta;
    let x = reduce_phase(m * wt);
    let mp = reduce_phase(m * phi);
    GhzTerms {
        a1: a2 + sign * b2,
        a2: 2.0 * (ab.conj() * C64::from_polar(1.0, x + mp)).re,
        b1: ghz_b1(a2, b2, sign, x),
        b2: ghz_b2(ab, a2, b2, x, mp),
        c1: hw * m * sign * b2,
        c2: ab * C64::from_polar(hw * m, -(mp + x)),
    }
}

/// ⟨Ψ(t)|O A|Ψ(t)⟩ coefficient of cos^M θ.
fn ghz_b1(a2: f64, b2: f64, sign: f64, x: f64) -> C64 {
    (C64::new(a2, 0.0) + C64::from_polar(b2, -x)) * (C64::new(a2, 0.0) + C64::from_polar(sign * b2, x))
}

/// ⟨Ψ(t)|O A|Ψ(t)⟩ coefficient of sin^M θ.
fn ghz_b2(ab: C64, a2: f64, b2: f64, x: f64, mp: f64) -> C64 {
    (C64::new(a2, 0.0) + C64::from_polar(b2, -x))
        * (ab * C64::from_polar(1.0, -mp) + ab.conj() * C64::from_polar(1.0, mp + x))
}

/// Σ of base-`n` digits of every basis index, times ħω.
fn digit_energies(n: usize, m: usize, hw: f64) -> Vec<f64> {
    let d = n.pow(m as u32);
    (0..d)
        .map(|mut idx| {
            let mut s = 0;
            while idx > 0 {
                s += idx % n;
                idx /= n;
            }
            hw * s as f64
        })
        .collect()
}
