use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::path::Path;
use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sqsl::bounds::{integrate_r, mt_bound, r_at, r_integrand, ratio_curve, RecordFlag, SignMode, TimeGrid};
use sqsl::cli::RunConfig;
use sqsl::geodesic::{geodesic_generator, prop1_residual, random_velocity};
use sqsl::models::{
    HomogeneousEntangledModel, HomogeneousProductModel, Model, QubitGhzModel, QubitProductModel,
    SpinChainModel,
};
use sqsl::optimizer::{grid_search, GridSpec, ObjectiveSpec};
use sqsl::ortho::{bloch_observable, projector_deviation, OrthoChoice};
use sqsl::quantum::{evolve, expectation, inner, mixed_expectation, HermitianOperator, PhysicalConstants, StateVector, C64};

type Outcome = Result<(bool, String), String>;
type Criterion = (&'static str, fn() -> Outcome, Option<Duration>);

fn c() -> PhysicalConstants {
    PhysicalConstants::default()
}

fn e<E: std::fmt::Display>(x: E) -> String {
    x.to_string()
}

fn near(a: (f64, f64), b: (f64, f64), tol: f64) -> bool {
    let dphi = (a.1 - b.1).rem_euclid(2.0 * PI);
    (a.0 - b.0).abs() <= tol && dphi.min(2.0 * PI - dphi) <= tol
}

fn criterion_1() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let psi = StateVector::new(vec![C64::new(0.3, 0.1), C64::new(-0.2, 0.5), C64::new(0.4, 0.0), C64::new(0.1, -0.6)])
        .map_err(e)?;
    let v = random_velocity(&psi, 1.7, &mut rng);
    let systems = vec![
        (HermitianOperator::sigma_x(), StateVector::basis(2, 0).map_err(e)?),
        (HermitianOperator::diagonal(vec![0.0, 1.0]).map_err(e)?, StateVector::plus()),
        (geodesic_generator(&psi, &v, 1.0).map_err(e)?, psi),
    ];
    let grid = TimeGrid::new(0.0, 3.0, 100).map_err(e)?;
    let mut worst = 0.0f64;
    for (h, psi0) in &systems {
        worst = worst.max(prop1_residual(h, psi0, 20, 5, &grid, 1.0).map_err(e)?.max_r);
    }
    Ok((worst < 1e-8, format!("max R = {worst:.3e} < 1e-8")))
}

fn paper_models() -> Result<Vec<(Model, Vec<OrthoChoice>)>, String> {
    let a = 1.0 / 3f64.sqrt();
    let proj = OrthoChoice::ProjectorDeviation;
    let bl = |t, p| OrthoChoice::bloch(t, p).map_err(e);
    let mut out: Vec<(Model, Vec<OrthoChoice>)> = Vec::new();
    for m in 1..=4 {
        for n in 2..=4 {
            out.push((HomogeneousProductModel::new(m, n, c()).map_err(e)?.into(), vec![proj.clone()]));
        }
        out.push((QubitProductModel::with_real_alpha(a, m, c()).map_err(e)?.into(), vec![proj.clone(), bl(2.2, 1.3)?]));
    }
    for m in 2..=4 {
        for n in 2..=4 {
            out.push((HomogeneousEntangledModel::new(m, n, c()).map_err(e)?.into(), vec![proj.clone()]));
        }
        out.push((QubitGhzModel::with_real_alpha(a, m, c()).map_err(e)?.into(), vec![proj.clone(), bl(1.6, 4.2)?]));
    }
    out.push((SpinChainModel::new(4, 2, c()).map_err(e)?.into(), vec![proj.clone(), bl(1.6, 5.4)?]));
    out.push((SpinChainModel::new(8, 4, c()).map_err(e)?.into(), vec![proj, bl(1.6, 3.6)?]));
    Ok(out)
}

fn criterion_2() -> Outcome {
    let mut points = 0;
    let mut failures = Vec::new();
    for (model, orthos) in paper_models()? {
        let grid = TimeGrid::new(0.0, model.consts().period(), 2001).map_err(e)?;
        for curve in ratio_curve(&model, &orthos, &grid, SignMode::Adaptive).map_err(e)? {
            for r in &curve.records {
                points += 1;
                if !(r.sqsl >= r.mt - 1e-9 && r.sqsl <= r.t * (1.0 + 1e-6)) {
                    failures.push(format!("{} {} T={}", model.name(), curve.ortho.label(), r.t));
                }
            }
        }
    }
    let detail = match failures.first() {
        None => format!("{points} records ordered"),
        Some(f) => format!("{} violations, first {f}", failures.len()),
    };
    Ok((failures.is_empty(), detail))
}

fn criterion_3() -> Outcome {
    let b = C64::from_polar((1.0f64 - 0.45 * 0.45 - 0.04).sqrt(), 0.9);
    let a = C64::new(0.45, 0.2);
    let q = 1.0 / 3f64.sqrt();
    let models: Vec<Model> = vec![
        HomogeneousProductModel::new(2, 2, c()).map_err(e)?.into(),
        HomogeneousProductModel::new(3, 4, c()).map_err(e)?.into(),
        HomogeneousProductModel::new(5, 4, c()).map_err(e)?.into(),
        HomogeneousEntangledModel::new(2, 3, c()).map_err(e)?.into(),
        HomogeneousEntangledModel::new(5, 4, c()).map_err(e)?.into(),
        QubitProductModel::with_real_alpha(q, 2, c()).map_err(e)?.into(),
        QubitProductModel::new(a, b, 10, c()).map_err(e)?.into(),
        QubitGhzModel::with_real_alpha(q, 2, c()).map_err(e)?.into(),
        QubitGhzModel::new(a, b, 10, c()).map_err(e)?.into(),
        SpinChainModel::new(4, 2, c()).map_err(e)?.into(),
        SpinChainModel::new(8, 4, c()).map_err(e)?.into(),
        SpinChainModel::new(10, 2, c()).map_err(e)?.into(),
    ];
    let mut worst = 0.0f64;
    let mut compared = 0;
    for model in &models {
        let (psi0, h) = model.realize().map_err(e)?;
        if psi0.dim() > 1 << 10 {
            return Err(format!("{} exceeds 2^10", model.name()));
        }
        let a_op = HermitianOperator::projector(&psi0).map_err(e)?;
        let prop = h.propagator(&psi0, 1.0).map_err(e)?;
        let observables: Vec<(f64, f64, HermitianOperator)> = if model.has_bloch_closed_form() {
            [(0.7, 1.9), (2.2, 4.6)]
                .iter()
                .map(|&(t, p)| bloch_observable(t, p, model.sites()).map(|o| (t, p, o)))
                .collect::<Result<_, _>>()
                .map_err(e)?
        } else {
            Vec::new()
        };
        for i in 0..50 {
            let t = model.consts().period() * i as f64 / 49.0;
            let psi_t = prop.at(t).map_err(e)?;
            let f = inner(&psi0, &psi_t).map_err(e)?;
            worst = worst.max((model.overlap_data(t).map_err(e)?.overlap.norm() - f.norm()).abs());
            let ah = mixed_expectation(&a_op, &h, &psi_t).map_err(e)?;
            worst = worst.max((model.ah_expectation(t).map_err(e)? - ah).norm());
            for (theta, phi, o) in &observables {
                let m = model.o_moments(t, *theta, *phi).map_err(e)?;
                worst = worst.max((m.mean - expectation(o, &psi_t).map_err(e)?).abs());
                worst = worst.max((m.with_projector - mixed_expectation(o, &a_op, &psi_t).map_err(e)?).norm());
                worst = worst.max((m.with_hamiltonian - mixed_expectation(o, &h, &psi_t).map_err(e)?).norm());
            }
            compared += 1;
        }
    }
    Ok((worst < 1e-9, format!("{compared} time points over {} models, max diff {worst:.3e} < 1e-9", models.len())))
}

const INTEGRAL_ORACLE: f64 = 0.269_506_042_226_323_57;

fn criterion_4() -> Outcome {
    let model: Model = HomogeneousProductModel::new(2, 2, c()).map_err(e)?.into();
    let expect = 0.5 * (1.0 - (2.0f64 / 3.0).sqrt()).powi(2);
    let closed = r_at(&model, &OrthoChoice::ProjectorDeviation, PI / 2.0, SignMode::PaperFixed).map_err(e)?;
    let (psi0, h) = model.realize().map_err(e)?;
    let psi_t = evolve(&h, &psi0, PI / 2.0, 1.0).map_err(e)?;
    let perp = projector_deviation(&psi0, &psi_t).map_err(e)?;
    let dense = r_integrand(&psi_t, &perp, &psi0, &h, SignMode::PaperFixed, 1.0).map_err(e)?;
    let grid = TimeGrid::new(0.0, PI, 2001).map_err(e)?;
    let integral = integrate_r(&model, &OrthoChoice::ProjectorDeviation, &grid, SignMode::PaperFixed).map_err(e)?;
    let ok = (closed - expect).abs() < 1e-6 && (dense - expect).abs() < 1e-6 && (integral - INTEGRAL_ORACLE).abs() < 1e-3;
    Ok((ok, format!("R(pi/2) closed {closed:.9} dense {dense:.9} vs {expect:.9}; integral {integral:.9} vs {INTEGRAL_ORACLE:.9}")))
}

fn criterion_5() -> Outcome {
    let model: Model = QubitProductModel::with_real_alpha(1.0 / 3f64.sqrt(), 2, c()).map_err(e)?.into();
    let spec = ObjectiveSpec::for_model(&model, SignMode::PaperFixed).map_err(e)?;
    let rep = grid_search(&model, &GridSpec::default(), &spec).map_err(e)?;
    let found: Vec<String> = rep.candidates.iter().map(|c| format!("({:.1},{:.1})={:.6}", c.theta, c.phi, c.objective)).collect();
    let ok = [(0.9, 4.4), (2.2, 1.3)].iter().all(|w| rep.candidates.iter().any(|c| near((c.theta, c.phi), *w, 0.15)));
    Ok((ok, format!("minima {}", found.join(" "))))
}

fn criterion_6() -> Outcome {
    let model: Model = QubitGhzModel::with_real_alpha(1.0 / 3f64.sqrt(), 2, c()).map_err(e)?.into();
    let spec = ObjectiveSpec::for_model(&model, SignMode::PaperFixed).map_err(e)?;
    let rep = grid_search(&model, &GridSpec::default(), &spec).map_err(e)?;
    let best = rep.best().ok_or("no minimum")?;
    Ok((
        best.objective <= 1.001,
        format!("min objective {:.6} at ({:.1},{:.1}) <= 1.001", best.objective, best.theta, best.phi),
    ))
}

fn criterion_7() -> Outcome {
    let ent: Model = HomogeneousEntangledModel::new(2, 2, c()).map_err(e)?.into();
    let (psi0, h) = ent.realize().map_err(e)?;
    let r1 = (PI / 2.0) / mt_bound(&psi0, &h, PI / 2.0, 1.0).map_err(e)?;
    let q: Model = QubitProductModel::with_real_alpha(FRAC_1_SQRT_2, 1, c()).map_err(e)?.into();
    let (psi0, h) = q.realize().map_err(e)?;
    let r2 = PI / mt_bound(&psi0, &h, PI, 1.0).map_err(e)?;
    let ok = (r1 - 1.0).abs() < 1e-9 && (r2 - 1.0).abs() < 1e-9;
    Ok((ok, format!("entangled {:.3e}, qubit {:.3e} from 1 (< 1e-9)", (r1 - 1.0).abs(), (r2 - 1.0).abs())))
}

fn criterion_8() -> Outcome {
    let mut worst_overlap = 0.0f64;
    let mut shares = Vec::new();
    let mut ok = true;
    for (m, k, theta, phi) in [(4, 2, 1.6, 5.4), (8, 4, 1.6, 3.6)] {
        let model: Model = SpinChainModel::new(m, k, c()).map_err(e)?.into();
        let (psi0, h) = model.realize().map_err(e)?;
        for i in 0..50 {
            let t = model.consts().period() * i as f64 / 49.0;
            let a = model.overlap_data(t).map_err(e)?.overlap.norm_sqr();
            let d = inner(&psi0, &evolve(&h, &psi0, t, 1.0).map_err(e)?).map_err(e)?.norm_sqr();
            worst_overlap = worst_overlap.max((a - d).abs());
        }
        let grid = TimeGrid::new(0.0, model.consts().period(), 2001).map_err(e)?;
        let orthos = [OrthoChoice::ProjectorDeviation, OrthoChoice::bloch(theta, phi).map_err(e)?];
        let curves = ratio_curve(&model, &orthos, &grid, SignMode::PaperFixed).map_err(e)?;
        let hits = curves[0]
            .records
            .iter()
            .zip(&curves[1].records)
            .filter(|(p, b)| b.ratio_sqsl() >= p.ratio_sqsl())
            .count();
        let share = hits as f64 / grid.points as f64;
        ok &= share >= 0.9;
        shares.push(format!("M={m},K={k}: {:.1}%", 100.0 * share));
    }
    ok &= worst_overlap < 1e-9;
    Ok((ok, format!("|f|^2 diff {worst_overlap:.3e} < 1e-9; Bloch >= projector at {}", shares.join(", "))))
}

fn shipped_configs() -> Result<Vec<(String, RunConfig)>, String> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("configs");
    let mut paths: Vec<_> = std::fs::read_dir(dir).map_err(e)?.map(|d| d.map(|d| d.path())).collect::<Result<_, _>>().map_err(e)?;
    paths.sort();
    paths
        .into_iter()
        .map(|p| {
            let name = p.file_stem().and_then(|s| s.to_str()).unwrap_or("").to_string();
            let text = std::fs::read_to_string(&p).map_err(e)?;
            Ok((name, RunConfig::parse(&text).map_err(e)?))
        })
        .collect()
}

fn criterion_9() -> Outcome {
    let mut worst = (0.0f64, String::new());
    let mut ok = true;
    for (name, cfg) in shipped_configs()? {
        if cfg.optimizer.is_some() {
            continue;
        }
        let r = cfg.resolve().map_err(e)?;
        let coarse = ratio_curve(&r.model, &r.orthos, &r.grid, r.sign).map_err(e)?;
        let fine = ratio_curve(&r.model, &r.orthos, &r.grid.refined(), r.sign).map_err(e)?;
        for (a, b) in coarse.iter().zip(&fine) {
            for (i, x) in a.records.iter().enumerate() {
                let y = &b.records[2 * i];
                let diff = (x.sqsl - y.sqsl).abs();
                ok &= diff <= 1e-6 * x.sqsl.abs() + 1e-12;
                let rel = diff / x.sqsl.abs().max(1e-12);
                if rel > worst.0 {
                    worst = (rel, name.clone());
                }
            }
        }
    }
    Ok((ok, format!("max relative change {:.3e} ({}) < 1e-6", worst.0, worst.1)))
}

fn mean_delta(cfg: &RunConfig) -> Result<f64, String> {
    let r = cfg.resolve().map_err(e)?;
    let curves = ratio_curve(&r.model, &r.orthos, &r.grid, r.sign).map_err(e)?;
    let d: Vec<f64> = curves[0]
        .records
        .iter()
        .filter(|x| x.t > 0.0 && !x.has(RecordFlag::MtZero) && x.delta.is_finite())
        .map(|x| x.delta)
        .collect();
    Ok(d.iter().sum::<f64>() / d.len() as f64)
}

fn criterion_10() -> Outcome {
    let configs = shipped_configs()?;
    let get = |name: &str| -> Result<f64, String> {
        let cfg = &configs.iter().find(|(n, _)| n == name).ok_or(format!("missing {name}"))?.1;
        mean_delta(cfg)
    };
    let fig1: Vec<f64> = ["fig1_n2", "fig1_n3", "fig1_n4"].iter().map(|n| get(n)).collect::<Result<_, _>>()?;
    let fig2: Vec<f64> = ["fig2_m2", "fig2_m3", "fig2_m4"].iter().map(|n| get(n)).collect::<Result<_, _>>()?;
    let ent: Vec<f64> = ["fig4_n2", "fig4_n3", "fig4_n4", "fig5_m2", "fig5_m3", "fig5_m4"]
        .iter()
        .map(|n| get(n))
        .collect::<Result<_, _>>()?;
    let increasing = |v: &[f64]| v.iter().all(|x| *x > 0.0) && v.windows(2).all(|w| w[1] > w[0]);
    let ok = increasing(&fig1) && increasing(&fig2) && ent.iter().all(|x| *x > 0.0);
    let fmt = |v: &[f64]| v.iter().map(|x| format!("{x:.4}")).collect::<Vec<_>>().join("<");
    let ent_min = ent.iter().cloned().fold(f64::INFINITY, f64::min);
    Ok((ok, format!("mean delta N: {}; M: {}; entangled min {ent_min:.4} > 0", fmt(&fig1), fmt(&fig2))))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("geodesics have R = 0", criterion_1, Some(Duration::from_secs(5))),
        ("T_MT <= T_SQSL <= T (adaptive)", criterion_2, Some(Duration::from_secs(60))),
        ("closed forms match dense", criterion_3, Some(Duration::from_secs(60))),
        ("R(pi/2) and its integral", criterion_4, None),
        ("qubit-product optimum pairs", criterion_5, Some(Duration::from_secs(600))),
        ("GHZ optimum near 1", criterion_6, None),
        ("MT saturation cases", criterion_7, None),
        ("spin-chain overlap and Bloch dominance", criterion_8, None),
        ("quadrature convergence", criterion_9, None),
        ("figure trends of delta", criterion_10, None),
    ];
    let mut failed = 0;
    for (i, (name, f, budget)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = f();
        let took = start.elapsed();
        let (mut ok, detail) = match outcome {
            Ok(x) => x,
            Err(msg) => (false, format!("error: {msg}")),
        };
        let mut timing = format!("{:.2}s", took.as_secs_f64());
        if let Some(b) = budget {
            timing.push_str(&format!(" / {}s", b.as_secs()));
            ok &= took <= *b;
        }
        if !ok {
            failed += 1;
        }
        println!("criterion {:>2} {} {name}: {detail} [{timing}]", i + 1, if ok { "PASS" } else { "FAIL" });
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
