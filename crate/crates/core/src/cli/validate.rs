use std::f64::consts::{FRAC_1_SQRT_2, PI};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::bounds::{ratio_curve, records_at, Evaluator, Route, SignMode, TimeGrid};
use crate::error::Result;
use crate::geodesic::{geodesic_generator, parallel_transport, prop1_residual, prop2_residual, random_velocity};
use crate::models::{
    HomogeneousEntangledModel, HomogeneousProductModel, Model, QubitGhzModel, QubitProductModel,
    SpinChainModel,
};
use crate::ortho::{bloch_observable, observable_deviation, orthogonality_residual, projector_deviation, OrthoChoice};
use crate::quantum::{evolve, inner, HermitianOperator, PhysicalConstants, StateVector};

use super::config::Resolved;

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn from(name: &'static str, r: Result<(bool, String)>) -> Self {
        match r {
            Ok((passed, detail)) => Self { name, passed, detail },
            Err(e) => Self { name, passed: false, detail: format!("error: {e}") },
        }
    }
}

struct Case {
    model: Model,
    orthos: Vec<OrthoChoice>,
    grid: TimeGrid,
}

fn suite() -> Result<Vec<Case>> {
    let c = PhysicalConstants::default();
    let a = 1.0 / 3f64.sqrt();
    let proj = OrthoChoice::ProjectorDeviation;
    let one = |m: Model| TimeGrid::new(0.0, m.consts().period(), 401);
    let mk = |model: Model, orthos: Vec<OrthoChoice>| -> Result<Case> { Ok(Case { grid: one(model)?, model, orthos }) };
    Ok(vec![
        mk(HomogeneousProductModel::new(2, 2, c)?.into(), vec![proj.clone()])?,
        mk(HomogeneousProductModel::new(2, 3, c)?.into(), vec![proj.clone()])?,
        mk(HomogeneousEntangledModel::new(2, 2, c)?.into(), vec![proj.clone()])?,
        mk(QubitProductModel::with_real_alpha(a, 2, c)?.into(), vec![proj.clone(), OrthoChoice::bloch(2.2, 1.3)?])?,
        mk(QubitGhzModel::with_real_alpha(a, 2, c)?.into(), vec![proj.clone(), OrthoChoice::bloch(1.6, 4.2)?])?,
        mk(SpinChainModel::new(4, 2, c)?.into(), vec![proj.clone(), OrthoChoice::bloch(1.6, 5.4)?])?,
        mk(QubitProductModel::with_real_alpha(FRAC_1_SQRT_2, 1, c)?.into(), vec![proj])?,
    ])
}

fn prop1() -> Result<(bool, String)> {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let psi = StateVector::new(vec![
        crate::quantum::C64::new(0.3, 0.1),
        crate::quantum::C64::new(-0.2, 0.5),
        crate::quantum::C64::new(0.4, 0.0),
        crate::quantum::C64::new(0.1, -0.6),
    ])?;
    let v = random_velocity(&psi, 1.7, &mut rng);
    let systems = [
        (HermitianOperator::sigma_x(), StateVector::basis(2, 0)?),
        (HermitianOperator::diagonal(vec![0.0, 1.0])?, StateVector::plus()),
        (geodesic_generator(&psi, &v, 1.0)?, psi),
    ];
    let grid = TimeGrid::new(0.0, 3.0, 100)?;
    let mut worst = 0.0f64;
    for (h, psi0) in &systems {
        worst = worst.max(prop1_residual(h, psi0, 20, 5, &grid, 1.0)?.max_r);
    }
    Ok((worst < 1e-8, format!("max R = {worst:.3e} (limit 1e-8)")))
}

fn prop2() -> Result<(bool, String)> {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let psi = StateVector::uniform(4)?;
    let v = random_velocity(&psi, 1.7, &mut rng);
    let h = geodesic_generator(&psi, &v, 1.0)?;
    let traj = parallel_transport(&h, &psi, &TimeGrid::new(0.0, 2.0 * PI / 1.7, 2001)?, 1.0)?;
    let a = prop2_residual(&traj, 1.7)?;
    let qubit = parallel_transport(
        &HermitianOperator::diagonal(vec![0.0, 1.0])?,
        &StateVector::plus(),
        &TimeGrid::new(0.0, 4.0 * PI, 2001)?,
        1.0,
    )?;
    let b = prop2_residual(&qubit, 0.5)?;
    let worst = a.max(b);
    Ok((worst < 1e-4, format!("max residual = {worst:.3e} (limit 1e-4)")))
}

fn ordering(cases: &[Case], sign: SignMode) -> Result<(bool, String)> {
    let mut bad = Vec::new();
    let mut points = 0;
    for case in cases {
        for curve in ratio_curve(&case.model, &case.orthos, &case.grid, sign)? {
            for r in &curve.records {
                points += 1;
                let ok = r.sqsl >= r.mt - 1e-9 && r.sqsl <= r.t * (1.0 + 1e-6) + 1e-9;
                if !ok && bad.len() < 3 {
                    bad.push(format!(
                        "{} {} T={:.6}: T_MT={:.9} T_SQSL={:.9}",
                        case.model.name(),
                        curve.ortho.label(),
                        r.t,
                        r.mt,
                        r.sqsl
                    ));
                }
            }
        }
    }
    if bad.is_empty() {
        Ok((true, format!("{points} records, sign {sign}")))
    } else {
        Ok((false, format!("sign {sign}: {}", bad.join("; "))))
    }
}

fn orthogonality(cases: &[Case]) -> Result<(bool, String)> {
    let mut worst = 0.0f64;
    for case in cases {
        let (psi0, h) = case.model.realize()?;
        let hbar = case.model.consts().hbar;
        for i in 1..=20 {
            let t = case.grid.end * i as f64 / 21.0;
            let psi_t = evolve(&h, &psi0, t, hbar)?;
            for o in &case.orthos {
                let perp = match o {
                    OrthoChoice::ProjectorDeviation => projector_deviation(&psi0, &psi_t),
                    OrthoChoice::BlochObservable { theta, phi } => {
                        observable_deviation(&bloch_observable(*theta, *phi, case.model.sites())?, &psi_t)
                    }
                    OrthoChoice::CustomObservable(op) => observable_deviation(op, &psi_t),
                };
                if let Ok(perp) = perp {
                    worst = worst.max(orthogonality_residual(&perp, &psi_t)?);
                }
            }
        }
    }
    Ok((worst < 1e-10, format!("max |<perp|psi>| = {worst:.3e} (limit 1e-10)")))
}

fn analytic_vs_dense(cases: &[Case]) -> Result<(bool, String)> {
    let mut worst_overlap = 0.0f64;
    let mut worst_sqsl = 0.0f64;
    let mut compared = 0;
    for case in cases {
        if !case.model.has_closed_form() {
            continue;
        }
        let (psi0, h) = case.model.realize()?;
        let hbar = case.model.consts().hbar;
        let times: Vec<f64> = (0..50).map(|i| case.grid.end * i as f64 / 49.0).collect();
        for &t in &times {
            let a = case.model.overlap_data(t)?.overlap;
            let d = inner(&psi0, &evolve(&h, &psi0, t, hbar)?)?;
            worst_overlap = worst_overlap.max((a - d).norm());
        }
        for o in &case.orthos {
            let Ok(an) = Evaluator::for_model(&case.model, o, Route::Analytic) else { continue };
            let de = Evaluator::for_model(&case.model, o, Route::Dense)?;
            for sign in [SignMode::PaperFixed, SignMode::Adaptive] {
                let (ra, ..) = records_at(&an, &times, sign, 4)?;
                let (rd, ..) = records_at(&de, &times, sign, 4)?;
                for (x, y) in ra.iter().zip(&rd) {
                    worst_sqsl = worst_sqsl.max((x.sqsl - y.sqsl).abs() / x.sqsl.max(1.0));
                }
                compared += 1;
            }
        }
    }
    Ok((
        worst_overlap < 1e-9 && worst_sqsl < 1e-7,
        format!("{compared} curves; overlap diff {worst_overlap:.3e} (1e-9), T_SQSL rel diff {worst_sqsl:.3e} (1e-7)"),
    ))
}

fn spin_chain_overlap() -> Result<(bool, String)> {
    let m: Model = SpinChainModel::new(4, 2, PhysicalConstants::default())?.into();
    let (psi0, h) = m.realize()?;
    let mut worst = 0.0f64;
    for i in 0..50 {
        let t = m.consts().period() * i as f64 / 49.0;
        let a = m.overlap_data(t)?.overlap.norm_sqr();
        let d = inner(&psi0, &evolve(&h, &psi0, t, 1.0)?)?.norm_sqr();
        worst = worst.max((a - d).abs());
    }
    Ok((worst < 1e-9, format!("M=4 K=2 max ||f|^2 diff| = {worst:.3e} (limit 1e-9)")))
}

/// Runs the built-in suite, plus the configured run when one is given.
pub fn run_suite(sign: SignMode, user: Option<&Resolved>) -> Vec<Check> {
    let mut checks = vec![Check::from("prop1", prop1()), Check::from("prop2", prop2())];
    match suite() {
        Ok(cases) => {
            checks.push(Check::from("bound-ordering", ordering(&cases, sign)));
            checks.push(Check::from("orthogonality-residuals", orthogonality(&cases)));
            checks.push(Check::from("analytic-vs-dense", analytic_vs_dense(&cases)));
        }
        Err(e) => checks.push(Check { name: "suite", passed: false, detail: e.to_string() }),
    }
    checks.push(Check::from("spin-chain-overlap", spin_chain_overlap()));
    if let Some(r) = user {
        let case = [Case { model: r.model, orthos: r.orthos.clone(), grid: r.grid }];
        checks.push(Check::from("config-bound-ordering", ordering(&case, sign)));
        checks.push(Check::from("config-orthogonality", orthogonality(&case)));
        checks.push(Check::from("config-analytic-vs-dense", analytic_vs_dense(&case)));
    }
    checks
}

pub fn render(checks: &[Check]) -> String {
    let mut out = String::new();
    for c in checks {
        out.push_str(&format!("{:<26} {:<4}  {}\n", c.name, if c.passed { "PASS" } else { "FAIL" }, c.detail));
    }
    out
}
