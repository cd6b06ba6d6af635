//! Search over Bloch-observable angles minimizing the time-averaged T/T_SQSL.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::{records_at, Evaluator, RecordFlag, Route, SignMode, TimeGrid};
use crate::error::{invalid, QslError, Result};
use crate::models::Model;
use crate::ortho::OrthoChoice;

/// Samples of the objective's final-time grid over one period.
pub const DEFAULT_SAMPLES: usize = 200;
/// Quadrature panels per objective sample.
pub const DEFAULT_PANELS: usize = 10;
/// Lattice points with more degenerate samples than this are excluded.
pub const MAX_DEGENERATE_SHARE: f64 = 0.2;
/// Local minima this close to the global one are reported.
pub const CANDIDATE_WINDOW: f64 = 1e-4;

/// Angle lattice: θ = k·θstep inside (0, π), φ = k·φstep inside [0, 2π).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub theta_step: f64,
    pub phi_step: f64,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self { theta_step: 0.1, phi_step: 0.1 }
    }
}

impl GridSpec {
    pub fn new(theta_step: f64, phi_step: f64) -> Result<Self> {
        let g = Self { theta_step, phi_step };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.theta_step > 0.0 && self.theta_step < PI) {
            return Err(invalid("theta step must lie in (0, pi)"));
        }
        if !(self.phi_step > 0.0 && self.phi_step <= 2.0 * PI) {
            return Err(invalid("phi step must lie in (0, 2pi]"));
        }
        Ok(())
    }

    pub fn thetas(&self) -> Vec<f64> {
        (1..).map(|k| k as f64 * self.theta_step).take_while(|t| *t < PI).collect()
    }

    pub fn phis(&self) -> Vec<f64> {
        (0..).map(|k| k as f64 * self.phi_step).take_while(|p| *p < 2.0 * PI).collect()
    }
}

/// Objective settings: final-time grid, sign and quadrature density.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ObjectiveSpec {
    pub tgrid: TimeGrid,
    pub sign: SignMode,
    pub panels_per_step: usize,
}

impl ObjectiveSpec {
    /// `samples` uniform final times on (0, period].
    pub fn one_period(period: f64, samples: usize, sign: SignMode) -> Result<Self> {
        let step = period / samples as f64;
        Ok(Self {
            tgrid: TimeGrid::new(step, period, samples)?,
            sign,
            panels_per_step: DEFAULT_PANELS,
        })
    }

    pub fn for_model(model: &Model, sign: SignMode) -> Result<Self> {
        Self::one_period(model.consts().period(), DEFAULT_SAMPLES, sign)
    }
}

/// Mean of T/T_SQSL over the usable samples.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AveragedRatio {
    pub value: f64,
    pub used: usize,
    pub degenerate: usize,
}

/// One lattice point of the landscape; `objective` is None for excluded points.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LandscapePoint {
    pub theta: f64,
    pub phi: f64,
    pub objective: Option<f64>,
    pub degenerate: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Candidate {
    pub theta: f64,
    pub phi: f64,
    pub objective: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptimumReport {
    /// Local minima within the candidate window, ascending by objective.
    pub candidates: Vec<Candidate>,
    pub landscape: Vec<LandscapePoint>,
    pub thetas: Vec<f64>,
    pub phis: Vec<f64>,
}

impl OptimumReport {
    pub fn best(&self) -> Option<&Candidate> {
        self.candidates.first()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Refined {
    pub theta: f64,
    pub phi: f64,
    pub objective: f64,
    /// Accepted moves.
    pub iterations: usize,
}

fn check_bloch_model(model: &Model) -> Result<()> {
    if !model.is_qubit_model() {
        return Err(QslError::Unsupported(format!(
            "Bloch observables need qubit subsystems; {} has local dimension {}",
            model.name(),
            model.local_dim()
        )));
    }
    Ok(())
}

/// Mean over the final-time grid of T/T_SQSL(T; θ, φ).
pub fn time_averaged_ratio(model: &Model, theta: f64, phi: f64, spec: &ObjectiveSpec) -> Result<AveragedRatio> {
    check_bloch_model(model)?;
    let times = spec.tgrid.values();
    if times[0] <= 0.0 {
        return Err(invalid("the objective grid must exclude T = 0"));
    }
    let ortho = OrthoChoice::BlochObservable { theta, phi };
    let ev = Evaluator::for_model(model, &ortho, Route::Auto)?;
    let (records, ..) = records_at(&ev, &times, spec.sign, spec.panels_per_step)?;
    let (mut sum, mut used, mut degenerate) = (0.0, 0, 0);
    for r in &records {
        if r.has(RecordFlag::ObservableDegenerate) {
            degenerate += 1;
        } else {
            sum += r.ratio_sqsl();
            used += 1;
        }
    }
    if used == 0 {
        return Err(QslError::NonFiniteObjective { theta, phi });
    }
    Ok(AveragedRatio { value: sum / used as f64, used, degenerate })
}

fn landscape_point(model: &Model, theta: f64, phi: f64, spec: &ObjectiveSpec) -> Result<LandscapePoint> {
    match time_averaged_ratio(model, theta, phi, spec) {
        Ok(a) => {
            let total = a.used + a.degenerate;
            let excluded = a.degenerate as f64 > MAX_DEGENERATE_SHARE * total as f64 || !a.value.is_finite();
            Ok(LandscapePoint {
                theta,
                phi,
                objective: (!excluded).then_some(a.value),
                degenerate: a.degenerate,
            })
        }
        Err(QslError::TooManyDegenerate { .. } | QslError::NoLimit(_) | QslError::NonFiniteObjective { .. }) => {
            Ok(LandscapePoint { theta, phi, objective: None, degenerate: spec.tgrid.points })
        }
        Err(e) => Err(e),
    }
}

/// Exhaustive evaluation over the angle lattice.
#[allow(clippy::needless_range_loop)] // neighbours are addressed by lattice index
pub fn grid_search(model: &Model, grid: &GridSpec, spec: &ObjectiveSpec) -> Result<OptimumReport> {
    grid.validate()?;
    check_bloch_model(model)?;
    let thetas = grid.thetas();
    let phis = grid.phis();
    if thetas.is_empty() || phis.is_empty() {
        return Err(QslError::Empty("angle lattice"));
    }
    let cells: Vec<(f64, f64)> =
        thetas.iter().flat_map(|&t| phis.iter().map(move |&p| (t, p))).collect();
    let landscape: Vec<LandscapePoint> = cells
        .par_iter()
        .map(|&(t, p)| landscape_point(model, t, p, spec))
        .collect::<Result<_>>()?;

    let (nt, np) = (thetas.len(), phis.len());
    let at = |i: usize, j: usize| landscape[i * np + j].objective;
    let global = landscape
        .iter()
        .filter_map(|p| p.objective)
        .fold(f64::INFINITY, f64::min);
    if !global.is_finite() {
        return Err(QslError::NonFiniteObjective { theta: f64::NAN, phi: f64::NAN });
    }
    let mut candidates = Vec::new();
    for i in 0..nt {
        for j in 0..np {
            let Some(v) = at(i, j) else { continue };
            if v > global + CANDIDATE_WINDOW {
                continue;
            }
            let mut is_min = true;
            for di in [-1i64, 0, 1] {
                for dj in [-1i64, 0, 1] {
                    if di == 0 && dj == 0 {
                        continue;
                    }
                    let ii = i as i64 + di;
                    if ii < 0 || ii >= nt as i64 {
                        continue;
                    }
                    let jj = (j as i64 + dj).rem_euclid(np as i64) as usize;
                    if let Some(w) = at(ii as usize, jj) {
                        if w < v {
                            is_min = false;
                        }
                    }
                }
            }
            if is_min {
                candidates.push(Candidate { theta: thetas[i], phi: phis[j], objective: v });
            }
        }
    }
    candidates.sort_by(|a, b| {
        a.objective
            .total_cmp(&b.objective)
            .then(a.theta.total_cmp(&b.theta))
            .then(a.phi.total_cmp(&b.phi))
    });
    Ok(OptimumReport { candidates, landscape, thetas, phis })
}

fn objective_or_inf(model: &Model, theta: f64, phi: f64, spec: &ObjectiveSpec) -> Result<f64> {
    if !(theta > 0.0 && theta < PI) {
        return Ok(f64::INFINITY);
    }
    Ok(landscape_point(model, theta, phi, spec)?.objective.unwrap_or(f64::INFINITY))
}

/// Coordinate descent from `start` with step 0.05 rad halving down to 1e-4 rad.
pub fn refine_local(model: &Model, start: (f64, f64), spec: &ObjectiveSpec) -> Result<Refined> {
    let (mut theta, mut phi) = start;
    if !(theta > 0.0 && theta < PI) || !(0.0..2.0 * PI).contains(&phi) {
        return Err(invalid(format!("start ({theta}, {phi}) outside the angle ranges")));
    }
    let mut best = objective_or_inf(model, theta, phi, spec)?;
    if !best.is_finite() {
        return Err(QslError::NonFiniteObjective { theta, phi });
    }
    let mut step = 0.05;
    let mut iterations = 0;
    while step >= 1e-4 {
        let mut moved = false;
        for (dt, dp) in [(step, 0.0), (-step, 0.0), (0.0, step), (0.0, -step)] {
            let (t, p) = (theta + dt, (phi + dp).rem_euclid(2.0 * PI));
            let v = objective_or_inf(model, t, p, spec)?;
            if v < best {
                best = v;
                theta = t;
                phi = p;
                iterations += 1;
                moved = true;
            }
        }
        if !moved {
            step *= 0.5;
        }
    }
    Ok(Refined { theta, phi, objective: best, iterations })
}
