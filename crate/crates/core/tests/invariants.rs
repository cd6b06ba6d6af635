use proptest::prelude::*;

use sqsl::bounds::{r_at, ratio_curve, SignMode, TimeGrid};
use sqsl::models::{Model, QubitGhzModel, QubitProductModel};
use sqsl::ortho::OrthoChoice;
use sqsl::quantum::{PhysicalConstants, C64};

fn qubit_model(ghz: bool, alpha: f64, phase: f64, m: usize) -> Model {
    let a = C64::new(alpha, 0.0);
    let b = C64::from_polar((1.0 - alpha * alpha).sqrt(), phase);
    let c = PhysicalConstants::default();
    if ghz {
        QubitGhzModel::new(a, b, m, c).unwrap().into()
    } else {
        QubitProductModel::new(a, b, m, c).unwrap().into()
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn adaptive_r_is_a_probability(
        ghz in any::<bool>(),
        alpha in 0.1f64..0.95,
        phase in 0.0f64..6.2,
        m in 2usize..5,
        theta in 0.05f64..3.1,
        phi in 0.0f64..6.2,
        t in 0.01f64..6.2,
    ) {
        let model = qubit_model(ghz, alpha, phase, m);
        let r = r_at(&model, &OrthoChoice::ProjectorDeviation, t, SignMode::Adaptive).unwrap();
        prop_assert!((-1e-12..=1.0 + 1e-9).contains(&r), "R = {r}");
        if let Ok(r) = r_at(&model, &OrthoChoice::bloch(theta, phi).unwrap(), t, SignMode::Adaptive) {
            prop_assert!((-1e-12..=1.0 + 1e-9).contains(&r), "R = {r}");
        }
    }

    #[test]
    fn adaptive_bounds_are_ordered(
        ghz in any::<bool>(),
        alpha in 0.1f64..0.95,
        m in 2usize..4,
        theta in 0.05f64..3.1,
        phi in 0.0f64..6.2,
    ) {
        let model = qubit_model(ghz, alpha, 0.3, m);
        let grid = TimeGrid::new(0.0, model.consts().period(), 201).unwrap();
        let orthos = [OrthoChoice::bloch(theta, phi).unwrap()];
        if let Ok(curves) = ratio_curve(&model, &orthos, &grid, SignMode::Adaptive) {
            for r in &curves[0].records {
                prop_assert!(r.sqsl >= r.mt - 1e-9, "T={} mt={} sqsl={}", r.t, r.mt, r.sqsl);
                prop_assert!(r.sqsl <= r.t * (1.0 + 1e-6) + 1e-9, "T={} sqsl={}", r.t, r.sqsl);
            }
        }
    }
}
