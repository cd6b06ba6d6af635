use std::f64::consts::PI;

use sqsl::bounds::{
    integrate_r, mt_bound, r_at, r_integrand, ratio_curve, records_at, sqsl_time,
    tightness_delta, Evaluator, RecordFlag, Route, SignMode, TimeGrid,
};
use sqsl::models::{
    HomogeneousEntangledModel, HomogeneousProductModel, Model, QubitGhzModel, QubitProductModel,
    SpinChainModel,
};
use sqsl::ortho::{projector_deviation, OrthoChoice};
use sqsl::quantum::{evolve, HermitianOperator, PhysicalConstants, StateVector};

fn c() -> PhysicalConstants {
    PhysicalConstants::default()
}

fn hom(m: usize, n: usize) -> Model {
    HomogeneousProductModel::new(m, n, c()).unwrap().into()
}

const PROJ: OrthoChoice = OrthoChoice::ProjectorDeviation;

#[test]
fn mt_examples() {
    let (psi0, h) = hom(1, 2).realize().unwrap();
    assert_eq!(mt_bound(&psi0, &h, 0.0, 1.0).unwrap(), 0.0);
    let ent: Model = HomogeneousEntangledModel::new(2, 2, c()).unwrap().into();
    let (psi0, h) = ent.realize().unwrap();
    assert!((mt_bound(&psi0, &h, PI / 2.0, 1.0).unwrap() - PI / 2.0).abs() < 1e-12);
    let q: Model = QubitProductModel::with_real_alpha(1.0 / 2f64.sqrt(), 1, c()).unwrap().into();
    let (psi0, h) = q.realize().unwrap();
    assert!((mt_bound(&psi0, &h, PI, 1.0).unwrap() - PI).abs() < 1e-7);
}

#[test]
fn stationary_state_is_rejected() {
    let h = HermitianOperator::diagonal(vec![0.0, 1.0]).unwrap();
    let psi0 = StateVector::basis(2, 1).unwrap();
    assert!(mt_bound(&psi0, &h, 1.0, 1.0).is_err());
}

#[test]
fn geodesic_qubit_has_zero_r() {
    let psi0 = StateVector::plus();
    let h = HermitianOperator::diagonal(vec![0.0, 1.0]).unwrap();
    for i in 1..20 {
        let t = PI * i as f64 / 20.0;
        let psi_t = evolve(&h, &psi0, t, 1.0).unwrap();
        let perp = projector_deviation(&psi0, &psi_t).unwrap();
        let r = r_integrand(&psi_t, &perp, &psi0, &h, SignMode::PaperFixed, 1.0).unwrap();
        assert!(r.abs() < 1e-12, "t={t} r={r}");
    }
}

#[test]
fn integrand_oracle_value() {
    let expect = 0.5 * (1.0 - (2.0f64 / 3.0).sqrt()).powi(2);
    assert!((expect - 0.016_836_752_405_607_26).abs() < 1e-15);
    let r = r_at(&hom(2, 2), &PROJ, PI / 2.0, SignMode::PaperFixed).unwrap();
    assert!((r - expect).abs() < 1e-12, "{r}");
    let (psi0, h) = hom(2, 2).realize().unwrap();
    let psi_t = evolve(&h, &psi0, PI / 2.0, 1.0).unwrap();
    let perp = projector_deviation(&psi0, &psi_t).unwrap();
    let dense = r_integrand(&psi_t, &perp, &psi0, &h, SignMode::PaperFixed, 1.0).unwrap();
    assert!((dense - expect).abs() < 1e-12);
}

#[test]
fn integral_oracle_value() {
    let grid = TimeGrid::new(0.0, PI, 2001).unwrap();
    let v = integrate_r(&hom(2, 2), &PROJ, &grid, SignMode::PaperFixed).unwrap();
    assert!((v - 0.269_506_042_226_323_57).abs() < 1e-9, "{v}");
}

#[test]
fn sqsl_record_oracle() {
    let rec = sqsl_time(&hom(2, 2), &PROJ, PI, 2001, SignMode::PaperFixed).unwrap();
    assert!((rec.mt - PI / 2f64.sqrt()).abs() < 1e-12);
    assert!((rec.sqsl - (PI / 2f64.sqrt() + 0.269_506_042_226_323_57)).abs() < 1e-9);
    assert!(rec.sqsl <= PI);
    assert!(rec.delta > 0.0);
    assert!((rec.rbar - rec.r_integral / PI).abs() < 1e-15);
    assert!((rec.gamma - 1.0 / (1.0 - rec.rbar)).abs() < 1e-12);
    assert!(rec.gamma_form_consistent());
}

#[test]
fn t_zero_is_empty_interval() {
    let rec = sqsl_time(&hom(2, 3), &PROJ, 0.0, 11, SignMode::Adaptive).unwrap();
    assert_eq!(rec.r_integral, 0.0);
    assert_eq!(rec.mt, 0.0);
    assert!(rec.has(RecordFlag::T0Limit));
    assert_eq!(rec.ratio_mt(), 1.0);
    assert_eq!(rec.ratio_sqsl(), 1.0);
}

#[test]
fn tightness_examples() {
    assert_eq!(tightness_delta(1.0, 2.0, 2.0).unwrap(), 0.0);
    let d = tightness_delta(PI, 2.0, 2.5).unwrap();
    assert!((d - (PI / 2.0 - PI / 2.5)).abs() < 1e-15);
    assert!(tightness_delta(PI, 2.0, 2.6).unwrap() > d);
    assert!(tightness_delta(PI, 0.0, 1.0).is_err());
}

#[test]
fn single_qubit_curve_is_saturated() {
    let q: Model = QubitProductModel::with_real_alpha(1.0 / 2f64.sqrt(), 1, c()).unwrap().into();
    let grid = TimeGrid::new(0.0, PI * 0.999, 201).unwrap();
    let curves = ratio_curve(&q, &[PROJ], &grid, SignMode::PaperFixed).unwrap();
    for r in &curves[0].records {
        assert!((r.ratio_mt() - 1.0).abs() < 1e-6, "{r:?}");
        assert!((r.ratio_sqsl() - 1.0).abs() < 1e-6, "{r:?}");
    }
}

fn all_models() -> Vec<(Model, Vec<OrthoChoice>)> {
    let a = 1.0 / 3f64.sqrt();
    let bl = |t, p| OrthoChoice::bloch(t, p).unwrap();
    vec![
        (hom(2, 2), vec![PROJ]),
        (hom(2, 3), vec![PROJ]),
        (hom(3, 2), vec![PROJ]),
        (hom(4, 2), vec![PROJ]),
        (hom(2, 4), vec![PROJ]),
        (HomogeneousEntangledModel::new(2, 2, c()).unwrap().into(), vec![PROJ]),
        (HomogeneousEntangledModel::new(3, 3, c()).unwrap().into(), vec![PROJ]),
        (QubitProductModel::with_real_alpha(a, 2, c()).unwrap().into(), vec![PROJ, bl(2.2, 1.3)]),
        (QubitProductModel::with_real_alpha(0.8, 3, c()).unwrap().into(), vec![bl(1.0, 4.4)]),
        (QubitGhzModel::with_real_alpha(a, 2, c()).unwrap().into(), vec![PROJ, bl(1.6, 4.2)]),
        (QubitGhzModel::with_real_alpha(0.6, 3, c()).unwrap().into(), vec![bl(0.9, 0.3)]),
        (SpinChainModel::new(4, 2, c()).unwrap().into(), vec![PROJ, bl(1.6, 5.4)]),
    ]
}

#[test]
fn adaptive_ordering_holds_everywhere() {
    for (model, orthos) in all_models() {
        let grid = TimeGrid::new(0.0, model.consts().period(), 801).unwrap();
        for curve in ratio_curve(&model, &orthos, &grid, SignMode::Adaptive).unwrap() {
            for r in &curve.records {
                let tag = format!("{} {} T={}", model.name(), curve.ortho.label(), r.t);
                assert!(r.mt >= 0.0, "{tag}");
                assert!(r.sqsl >= r.mt - 1e-9, "{tag}");
                assert!(r.sqsl <= r.t * (1.0 + 1e-6) + 1e-9, "{tag}: {r:?}");
                assert!(r.delta >= -1e-9, "{tag}");
            }
        }
    }
}

#[test]
fn analytic_and_dense_routes_agree() {
    for (model, orthos) in all_models() {
        if model.sites() > 4 {
            continue;
        }
        let times: Vec<f64> = (0..=40).map(|i| model.consts().period() * i as f64 / 40.0).collect();
        for o in &orthos {
            for sign in [SignMode::PaperFixed, SignMode::Adaptive] {
                let Ok(a) = Evaluator::for_model(&model, o, Route::Analytic) else {
                    continue;
                };
                let d = Evaluator::for_model(&model, o, Route::Dense).unwrap();
                let (ra, ..) = records_at(&a, &times, sign, 4).unwrap();
                let (rd, ..) = records_at(&d, &times, sign, 4).unwrap();
                for (x, y) in ra.iter().zip(&rd) {
                    assert!(
                        (x.sqsl - y.sqsl).abs() < 1e-7 * x.sqsl.max(1.0),
                        "{} {} {sign} T={}: {} vs {}",
                        model.name(),
                        o.label(),
                        x.t,
                        x.sqsl,
                        y.sqsl
                    );
                }
            }
        }
    }
}
