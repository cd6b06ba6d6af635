//! MT bound, the R(t) integrand, its quadrature and the SQSL time.

mod evaluator;
mod quadrature;

use std::fmt;

use serde::{Deserialize, Serialize};

pub use evaluator::{Evaluator, Route, Snapshot, SIGN_DEAD_ZONE};
pub use quadrature::{LIMIT_OFFSET, MAX_DEGENERATE_FRACTION};

use crate::error::{invalid, QslError, Result};
use crate::models::Model;
use crate::ortho::{OrthoChoice, DEGENERACY_TOL};
use crate::quantum::{inner, std_dev, HermitianOperator, StateVector, C64};

/// Default number of grid points over one period.
pub const DEFAULT_POINTS: usize = 2001;

/// Sign in front of the H term of R(t).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SignMode {
    /// The fixed minus sign.
    #[default]
    PaperFixed,
    /// Plus while ⟨A⟩ grows, minus otherwise.
    Adaptive,
    /// The opposite of `Adaptive` away from the dead zone. Not a valid bound;
    /// kept as a negative control for the validation suite.
    Inverted,
}

impl SignMode {
    pub fn sign_for(self, trend: i8) -> f64 {
        match self {
            SignMode::PaperFixed => -1.0,
            SignMode::Adaptive if trend > 0 => 1.0,
            SignMode::Adaptive => -1.0,
            SignMode::Inverted if trend < 0 => 1.0,
            SignMode::Inverted => -1.0,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            SignMode::PaperFixed => "paper-fixed",
            SignMode::Adaptive => "adaptive",
            SignMode::Inverted => "inverted",
        }
    }
}

impl fmt::Display for SignMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Uniform grid of final times.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TimeGrid {
    pub start: f64,
    pub end: f64,
    pub points: usize,
}

impl TimeGrid {
    pub fn new(start: f64, end: f64, points: usize) -> Result<Self> {
        let g = Self { start, end, points };
        g.validate()?;
        Ok(g)
    }

    /// [0, period] with the default resolution.
    pub fn one_period(period: f64) -> Result<Self> {
        Self::new(0.0, period, DEFAULT_POINTS)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.start >= 0.0 && self.start.is_finite()) {
            return Err(invalid("grid start must be finite and non-negative"));
        }
        if !(self.end > self.start && self.end.is_finite()) {
            return Err(invalid("grid end must exceed its start"));
        }
        if self.points < 3 {
            return Err(invalid("grid needs at least 3 points"));
        }
        Ok(())
    }

    pub fn step(&self) -> f64 {
        (self.end - self.start) / (self.points - 1) as f64
    }

    pub fn values(&self) -> Vec<f64> {
        let h = self.step();
        (0..self.points)
            .map(|i| if i + 1 == self.points { self.end } else { self.start + h * i as f64 })
            .collect()
    }

    /// Same span with twice as many intervals.
    pub fn refined(&self) -> Self {
        Self { points: 2 * self.points - 1, ..*self }
    }
}

/// Conditions attached to a record.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RecordFlag {
    /// T = 0: ratios and R̄ reported as their limits.
    T0Limit,
    /// R at T is a one-sided limit (ΔA or ΔO vanishes there).
    DegenerateNode,
    /// ΔO vanishes at T, so the observable carries no direction there.
    ObservableDegenerate,
    /// T_MT = 0 at T > 0 (a revival), so T/T_MT is infinite.
    MtZero,
    /// T_SQSL exceeds T.
    BoundViolation,
    /// R̄ ≥ 1, so Γ is not defined.
    GammaUndefined,
}

impl RecordFlag {
    pub fn token(self) -> &'static str {
        match self {
            RecordFlag::T0Limit => "t0_limit",
            RecordFlag::DegenerateNode => "degenerate_node",
            RecordFlag::ObservableDegenerate => "observable_degenerate",
            RecordFlag::MtZero => "mt_zero",
            RecordFlag::BoundViolation => "bound_violation",
            RecordFlag::GammaUndefined => "gamma_undefined",
        }
    }
}

/// Speed-limit quantities at one final time T.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundRecord {
    pub t: f64,
    pub mt: f64,
    pub sqsl: f64,
    pub r_integral: f64,
    pub rbar: f64,
    pub gamma: f64,
    pub delta: f64,
    pub s0: f64,
    pub flags: Vec<RecordFlag>,
}

impl BoundRecord {
    pub fn ratio_mt(&self) -> f64 {
        if self.t == 0.0 {
            1.0
        } else if self.mt == 0.0 {
            f64::INFINITY
        } else {
            self.t / self.mt
        }
    }

    pub fn ratio_sqsl(&self) -> f64 {
        if self.t == 0.0 {
            1.0
        } else if self.sqsl == 0.0 {
            f64::INFINITY
        } else {
            self.t / self.sqsl
        }
    }

    pub fn has(&self, flag: RecordFlag) -> bool {
        self.flags.contains(&flag)
    }

    /// T·(1 − R̄) and ħS₀/(2ΔH) compare the same way T and T_SQSL do.
    pub fn gamma_form_consistent(&self) -> bool {
        let lhs = self.t * (1.0 - self.rbar);
        (lhs >= self.mt - 1e-12) == (self.t >= self.sqsl - 1e-12)
            || (lhs - self.mt).abs() < 1e-9
    }
}

/// Records for one orthogonal-state choice over a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Curve {
    pub ortho: OrthoChoice,
    pub sign: SignMode,
    pub records: Vec<BoundRecord>,
    pub degenerate_nodes: usize,
    pub total_nodes: usize,
}

/// Quadrature settings.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QuadratureOptions {
    pub panels_per_step: usize,
    pub route: Route,
}

impl Default for QuadratureOptions {
    fn default() -> Self {
        Self { panels_per_step: 1, route: Route::Auto }
    }
}

/// ħ·arccos|⟨ψ0|ψ(T)⟩|/ΔH.
pub fn mt_bound(psi0: &StateVector, h: &HermitianOperator, t: f64, hbar: f64) -> Result<f64> {
    if !(t >= 0.0) {
        return Err(invalid("final time must be non-negative"));
    }
    let dh = std_dev(h, psi0)?;
    if !(dh >= 1e-12) {
        return Err(QslError::Stationary(dh));
    }
    if t == 0.0 {
        return Ok(0.0);
    }
    let psi_t = crate::quantum::evolve(h, psi0, t, hbar)?;
    let s0 = crate::quantum::bures_angle(psi0, &psi_t)?;
    Ok(hbar * s0 / (2.0 * dh))
}

/// ½|⟨perp|(A/ΔA ∓ iH/ΔH)|ψt⟩|² with A = |ψ0⟩⟨ψ0|.
pub fn r_integrand(
    psi_t: &StateVector,
    perp: &StateVector,
    psi0: &StateVector,
    h: &HermitianOperator,
    sign: SignMode,
    hbar: f64,
) -> Result<f64> {
    let resid = inner(perp, psi_t)?.norm();
    if resid > 1e-8 {
        return Err(QslError::NotOrthogonal(resid));
    }
    psi0.check_dim(psi_t.dim())?;
    let f = inner(psi0, psi_t)?;
    let delta_a = f.norm() * (psi_t.as_dvector() - psi0.as_dvector() * f).norm();
    if !(delta_a >= DEGENERACY_TOL) {
        return Err(QslError::DegenerateVariance { quantity: "Delta A", value: delta_a });
    }
    let dh = std_dev(h, psi_t)?;
    if !(dh >= 1e-12) {
        return Err(QslError::Stationary(dh));
    }
    let hv = h.apply(psi_t.as_dvector())?;
    let g = psi0.as_dvector().dotc(&hv);
    let dadt = 2.0 * (f.conj() * g).im / hbar;
    let trend = if dadt > SIGN_DEAD_ZONE {
        1
    } else if dadt < -SIGN_DEAD_ZONE {
        -1
    } else {
        0
    };
    let s = sign.sign_for(trend);
    let a_comp = perp.as_dvector().dotc(psi0.as_dvector()) * f;
    let h_comp = perp.as_dvector().dotc(&hv);
    Ok(0.5 * (a_comp / delta_a + C64::new(0.0, s) * h_comp / dh).norm_sqr())
}

/// T/mt − T/sqsl.
pub fn tightness_delta(t: f64, mt: f64, sqsl: f64) -> Result<f64> {
    if !(mt > 0.0 && sqsl > 0.0) {
        return Err(invalid(format!("bounds must be positive (mt={mt}, sqsl={sqsl})")));
    }
    Ok(t / mt - t / sqsl)
}

/// Bound records at each of `times` (sorted, ≥ 0), integrating from 0.
pub fn records_at(
    ev: &Evaluator,
    times: &[f64],
    sign: SignMode,
    panels_per_step: usize,
) -> Result<(Vec<BoundRecord>, usize, usize)> {
    let cum = quadrature::cumulative(ev, times, panels_per_step, sign)?;
    let dh = ev.energy_spread();
    let hbar = ev.hbar();
    let mut out = Vec::with_capacity(times.len());
    for ((&t, &integral), snap) in times.iter().zip(&cum.integrals).zip(&cum.at_times) {
        let mut flags = Vec::new();
        if snap.is_degenerate() {
            flags.push(RecordFlag::DegenerateNode);
        }
        if snap.delta_o.is_some_and(|o| !(o >= DEGENERACY_TOL)) {
            flags.push(RecordFlag::ObservableDegenerate);
        }
        let s0 = snap.s0();
        let mt = hbar * s0 / (2.0 * dh);
        let sqsl = mt + integral;
        let (rbar, delta) = if t == 0.0 {
            flags.push(RecordFlag::T0Limit);
            (quadrature::r_value(ev, 0.0, sign)?.0, 0.0)
        } else {
            let delta = if mt == 0.0 {
                flags.push(RecordFlag::MtZero);
                f64::INFINITY
            } else if sqsl > 0.0 {
                t / mt - t / sqsl
            } else {
                0.0
            };
            (integral / t, delta)
        };
        let gamma = if rbar < 1.0 {
            1.0 / (1.0 - rbar)
        } else {
            flags.push(RecordFlag::GammaUndefined);
            f64::INFINITY
        };
        if sqsl > t * (1.0 + 1e-6) + 1e-12 {
            flags.push(RecordFlag::BoundViolation);
        }
        out.push(BoundRecord { t, mt, sqsl, r_integral: integral, rbar, gamma, delta, s0, flags });
    }
    Ok((out, cum.degenerate_nodes, cum.total_nodes))
}

/// ∫₀^{grid.end} R dt.
pub fn integrate_r(model: &Model, ortho: &OrthoChoice, grid: &TimeGrid, sign: SignMode) -> Result<f64> {
    grid.validate()?;
    let ev = Evaluator::for_model(model, ortho, Route::Auto)?;
    let cum = quadrature::cumulative(&ev, &grid.values(), 1, sign)?;
    Ok(*cum.integrals.last().expect("grid has points"))
}

/// R(t) from a model, using the one-sided limit at degenerate points.
pub fn r_at(model: &Model, ortho: &OrthoChoice, t: f64, sign: SignMode) -> Result<f64> {
    let ev = Evaluator::for_model(model, ortho, Route::Auto)?;
    Ok(quadrature::r_value(&ev, t, sign)?.0)
}

/// Bound record at final time T, integrating over `resolution` uniform points.
pub fn sqsl_time(
    model: &Model,
    ortho: &OrthoChoice,
    t: f64,
    resolution: usize,
    sign: SignMode,
) -> Result<BoundRecord> {
    if !(t >= 0.0 && t.is_finite()) {
        return Err(invalid("final time must be finite and non-negative"));
    }
    let ev = Evaluator::for_model(model, ortho, Route::Auto)?;
    let times = if t == 0.0 { vec![0.0] } else { TimeGrid::new(0.0, t, resolution.max(3))?.values() };
    let (mut recs, _, _) = records_at(&ev, &times, sign, 1)?;
    Ok(recs.pop().expect("non-empty"))
}

/// One curve per orthogonal-state choice.
pub fn ratio_curve(
    model: &Model,
    orthos: &[OrthoChoice],
    grid: &TimeGrid,
    sign: SignMode,
) -> Result<Vec<Curve>> {
    ratio_curve_with(model, orthos, grid, sign, QuadratureOptions::default())
}

pub fn ratio_curve_with(
    model: &Model,
    orthos: &[OrthoChoice],
    grid: &TimeGrid,
    sign: SignMode,
    opts: QuadratureOptions,
) -> Result<Vec<Curve>> {
    grid.validate()?;
    if orthos.is_empty() {
        return Err(QslError::Empty("orthogonal-state choices"));
    }
    let times = grid.values();
    orthos
        .iter()
        .map(|o| {
            let ev = Evaluator::for_model(model, o, opts.route)?;
            let (records, degenerate_nodes, total_nodes) =
                records_at(&ev, &times, sign, opts.panels_per_step)?;
            Ok(Curve { ortho: o.clone(), sign, records, degenerate_nodes, total_nodes })
        })
        .collect()
}
