use std::sync::Arc;

use nalgebra::DVector;

use crate::error::{QslError, Result};
use crate::models::Model;
use crate::ortho::{apply_local_product, bloch_matrix, OrthoChoice, DEGENERACY_TOL};
use crate::quantum::{std_dev, HermitianOperator, Propagator, StateVector, C64};

use super::SignMode;

/// Everything R(t) needs at one instant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Snapshot {
    pub t: f64,
    /// f = ⟨Ψ(0)|Ψ(t)⟩
    pub overlap: C64,
    /// 1 − |f|², free of cancellation
    pub infidelity: f64,
    /// d⟨A⟩/dt
    pub dadt: f64,
    /// ΔA = |f|·√(1 − |f|²)
    pub delta_a: f64,
    /// ΔO, absent for the projector construction
    pub delta_o: Option<f64>,
    /// ⟨Ψ⊥|A|Ψ⟩
    pub a_comp: C64,
    /// ⟨Ψ⊥|H|Ψ⟩
    pub h_comp: C64,
}

impl Snapshot {
    pub fn is_degenerate(&self) -> bool {
        !(self.delta_a >= DEGENERACY_TOL) || self.delta_o.is_some_and(|o| !(o >= DEGENERACY_TOL))
    }

    /// Looser acceptance used at the offset points of one-sided limits.
    pub(crate) fn is_usable_limit(&self, dh: f64) -> bool {
        self.delta_a > 0.0
            && self.delta_o.is_none_or(|o| o >= DEGENERACY_TOL)
            && self.r_with(-1.0, dh).is_finite()
            && self.r_with(1.0, dh).is_finite()
    }

    /// Sign of d⟨A⟩/dt with a dead zone.
    pub fn trend(&self) -> i8 {
        if self.dadt > SIGN_DEAD_ZONE {
            1
        } else if self.dadt < -SIGN_DEAD_ZONE {
            -1
        } else {
            0
        }
    }

    /// ½|a/ΔA + s·i·h/ΔH|².
    pub fn r_with(&self, s: f64, dh: f64) -> f64 {
        (self.a_comp / self.delta_a + C64::new(0.0, s) * self.h_comp / dh).norm_sqr() * 0.5
    }

    pub fn r(&self, mode: SignMode, dh: f64) -> f64 {
        self.r_with(mode.sign_for(self.trend()), dh)
    }

    /// Bures angle S₀ = 2·arccos|f|.
    pub fn s0(&self) -> f64 {
        2.0 * self.infidelity.sqrt().atan2(self.overlap.norm().min(1.0))
    }
}

/// Dead zone on |d⟨A⟩/dt| below which the fixed sign is used.
pub const SIGN_DEAD_ZONE: f64 = 1e-10;

#[derive(Debug, Clone)]
enum DenseOrtho {
    Projector,
    Bloch { u: [[C64; 2]; 2], sites: usize },
    Custom(HermitianOperator),
}

#[derive(Debug, Clone)]
enum Kind {
    Analytic { model: Model, ortho: OrthoChoice },
    Dense { prop: Arc<Propagator>, h: HermitianOperator, ortho: DenseOrtho },
}

/// Which evaluation path to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Route {
    #[default]
    Auto,
    Analytic,
    Dense,
}

/// Produces snapshots of one (system, ortho) pair at arbitrary times.
#[derive(Debug, Clone)]
pub struct Evaluator {
    kind: Kind,
    mean_energy: f64,
    energy_spread: f64,
    hbar: f64,
    period: f64,
}

impl Evaluator {
    pub fn for_model(model: &Model, ortho: &OrthoChoice, route: Route) -> Result<Self> {
        let c = model.consts();
        let closed = model.has_closed_form()
            && match ortho {
                OrthoChoice::ProjectorDeviation => true,
                OrthoChoice::BlochObservable { .. } => model.has_bloch_closed_form(),
                OrthoChoice::CustomObservable(_) => false,
            };
        let analytic = match route {
            Route::Auto => closed,
            Route::Analytic if closed => true,
            Route::Analytic => {
                return Err(QslError::Unsupported(format!(
                    "no closed form for {} with {}",
                    model.name(),
                    ortho.label()
                )))
            }
            Route::Dense => false,
        };
        if analytic {
            let stats = model.energy_stats();
            if !(stats.spread >= 1e-12) {
                return Err(QslError::Stationary(stats.spread));
            }
            return Ok(Self {
                kind: Kind::Analytic { model: *model, ortho: ortho.clone() },
                mean_energy: stats.mean,
                energy_spread: stats.spread,
                hbar: c.hbar,
                period: c.period(),
            });
        }
        let (psi0, h) = model.realize()?;
        let ortho = match ortho {
            OrthoChoice::BlochObservable { theta, phi } => {
                if !model.is_qubit_model() {
                    return Err(QslError::Unsupported(format!(
                        "Bloch observables need qubits, {} has local dimension {}",
                        model.name(),
                        model.local_dim()
                    )));
                }
                DenseOrtho::Bloch { u: bloch_matrix(*theta, *phi), sites: model.sites() }
            }
            other => dense_ortho(other),
        };
        Self::dense_inner(psi0, h, ortho, c.hbar, c.period())
    }

    /// Dense evaluator for an explicit initial state and Hamiltonian.
    pub fn dense(
        psi0: &StateVector,
        h: &HermitianOperator,
        ortho: &OrthoChoice,
        hbar: f64,
        period: f64,
    ) -> Result<Self> {
        let ortho = match ortho {
            OrthoChoice::BlochObservable { theta, phi } => {
                let sites = psi0.dim().trailing_zeros() as usize;
                if !psi0.dim().is_power_of_two() {
                    return Err(QslError::Unsupported(
                        "Bloch observables need a qubit register".into(),
                    ));
                }
                DenseOrtho::Bloch { u: bloch_matrix(*theta, *phi), sites }
            }
            other => dense_ortho(other),
        };
        Self::dense_inner(psi0.clone(), h.clone(), ortho, hbar, period)
    }

    fn dense_inner(
        psi0: StateVector,
        h: HermitianOperator,
        ortho: DenseOrtho,
        hbar: f64,
        period: f64,
    ) -> Result<Self> {
        if let DenseOrtho::Custom(o) = &ortho {
            o.check_same_dim(&h)?;
        }
        let spread = std_dev(&h, &psi0)?;
        if !(spread >= 1e-12) {
            return Err(QslError::Stationary(spread));
        }
        let mean = crate::quantum::expectation(&h, &psi0)?;
        let prop = Arc::new(h.propagator(&psi0, hbar)?);
        Ok(Self {
            kind: Kind::Dense { prop, h, ortho },
            mean_energy: mean,
            energy_spread: spread,
            hbar,
            period,
        })
    }

    pub fn energy_spread(&self) -> f64 {
        self.energy_spread
    }

    pub fn mean_energy(&self) -> f64 {
        self.mean_energy
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    /// Reference period 2π/ω that sets the one-sided limit offset.
    pub fn period(&self) -> f64 {
        self.period
    }

    pub fn is_analytic(&self) -> bool {
        matches!(self.kind, Kind::Analytic { .. })
    }

    pub fn snapshot(&self, t: f64) -> Result<Snapshot> {
        match &self.kind {
            Kind::Analytic { model, ortho } => self.analytic(model, ortho, t),
            Kind::Dense { prop, h, ortho } => self.dense_snapshot(prop, h, ortho, t),
        }
    }

    fn analytic(&self, model: &Model, ortho: &OrthoChoice, t: f64) -> Result<Snapshot> {
        let d = model.overlap_data(t)?;
        let f = d.overlap;
        let fn_ = f.norm();
        let delta_a = fn_ * d.infidelity.sqrt();
        let ah = f.conj() * d.h_overlap;
        let dadt = 2.0 * ah.im / self.hbar;
        let a_mean = fn_ * fn_;
        let (a_comp, h_comp, delta_o) = match ortho {
            OrthoChoice::ProjectorDeviation => {
                // ⟨AH⟩ − ⟨A⟩⟨H⟩ = f*·(G − f⟨H⟩)
                let conn = f.conj() * (d.h_overlap - f * self.mean_energy);
                (C64::from(delta_a), conn / delta_a, None)
            }
            OrthoChoice::BlochObservable { theta, phi } => {
                let o = model.o_moments(t, *theta, *phi)?;
                (
                    (o.with_projector - o.mean * a_mean) / o.spread,
                    (o.with_hamiltonian - o.mean * self.mean_energy) / o.spread,
                    Some(o.spread),
                )
            }
            OrthoChoice::CustomObservable(_) => unreachable!("custom observables use the dense path"),
        };
        Ok(Snapshot {
            t,
            overlap: f,
            infidelity: d.infidelity,
            dadt,
            delta_a,
            delta_o,
            a_comp,
            h_comp,
        })
    }

    fn dense_snapshot(
        &self,
        prop: &Propagator,
        h: &HermitianOperator,
        ortho: &DenseOrtho,
        t: f64,
    ) -> Result<Snapshot> {
        let psi_t = prop.at(t)?;
        let v0 = prop.initial().as_dvector();
        let vt = psi_t.as_dvector();
        let f = v0.dotc(vt);
        let resid = vt - v0 * f;
        let infidelity = resid.norm_squared().min(1.0);
        let delta_a = f.norm() * infidelity.sqrt();
        let hv = h.apply(vt)?;
        let g = v0.dotc(&hv);
        let dadt = 2.0 * (f.conj() * g).im / self.hbar;

        let (perp, delta_o): (Option<DVector<C64>>, Option<f64>) = match ortho {
            DenseOrtho::Projector => {
                let p = v0 - vt * f.conj();
                let pn = p.norm();
                if pn > 0.0 && f.norm() > 0.0 {
                    (Some(p * (f / f.norm() / pn)), None)
                } else {
                    (None, None)
                }
            }
            DenseOrtho::Bloch { u, sites } => deviation(apply_local_product(u, *sites, vt), vt),
            DenseOrtho::Custom(o) => deviation(o.apply(vt)?, vt),
        };
        let (a_comp, h_comp) = match perp {
            Some(p) => (p.dotc(v0) * f, p.dotc(&hv)),
            None => (C64::new(f64::NAN, 0.0), C64::new(f64::NAN, 0.0)),
        };
        Ok(Snapshot { t, overlap: f, infidelity, dadt, delta_a, delta_o, a_comp, h_comp })
    }
}

fn dense_ortho(o: &OrthoChoice) -> DenseOrtho {
    match o {
        OrthoChoice::ProjectorDeviation => DenseOrtho::Projector,
        OrthoChoice::CustomObservable(op) => DenseOrtho::Custom(op.clone()),
        OrthoChoice::BlochObservable { .. } => unreachable!("handled by the caller"),
    }
}

fn deviation(v: DVector<C64>, vt: &DVector<C64>) -> (Option<DVector<C64>>, Option<f64>) {
    let mean = vt.dotc(&v).re;
    let dev = v - vt * C64::from(mean);
    let spread = dev.norm();
    if spread > 0.0 {
        (Some(dev / C64::from(spread)), Some(spread))
    } else {
        (None, Some(0.0))
    }
}
