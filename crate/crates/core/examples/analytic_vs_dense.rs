//! The closed-form route and the dense state-vector route give the same records.

use sqsl::bounds::{records_at, Evaluator, Route, SignMode};
use sqsl::models::{Model, QubitGhzModel};
use sqsl::ortho::OrthoChoice;
use sqsl::quantum::PhysicalConstants;

fn main() -> sqsl::Result<()> {
    let model: Model = QubitGhzModel::with_real_alpha(0.6, 3, PhysicalConstants::default())?.into();
    let times: Vec<f64> = (0..=40).map(|i| model.consts().period() * i as f64 / 40.0).collect();
    for ortho in [OrthoChoice::ProjectorDeviation, OrthoChoice::bloch(1.2, 0.4)?] {
        let an = Evaluator::for_model(&model, &ortho, Route::Analytic)?;
        let de = Evaluator::for_model(&model, &ortho, Route::Dense)?;
        let (ra, ..) = records_at(&an, &times, SignMode::Adaptive, 8)?;
        let (rd, ..) = records_at(&de, &times, SignMode::Adaptive, 8)?;
        let worst = ra.iter().zip(&rd).map(|(a, d)| (a.sqsl - d.sqsl).abs()).fold(0.0, f64::max);
        println!("{} {}: max |T_SQSL analytic - dense| = {worst:.2e}", model.name(), ortho.label());
    }
    Ok(())
}
