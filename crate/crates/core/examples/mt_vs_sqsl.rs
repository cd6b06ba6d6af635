//! T/T_MT and T/T_SQSL for a product of two qutrit-like levels, printed at a handful of times.

use sqsl::bounds::{ratio_curve, SignMode, TimeGrid};
use sqsl::models::{HomogeneousProductModel, Model};
use sqsl::ortho::OrthoChoice;
use sqsl::quantum::PhysicalConstants;

fn main() -> sqsl::Result<()> {
    let model: Model = HomogeneousProductModel::new(2, 3, PhysicalConstants::default())?.into();
    let grid = TimeGrid::new(0.0, model.consts().period(), 1201)?;
    let curve = &ratio_curve(&model, &[OrthoChoice::ProjectorDeviation], &grid, SignMode::PaperFixed)?[0];
    println!("{}", model.name());
    println!("{:>8} {:>10} {:>10} {:>10}", "T", "T/T_MT", "T/T_SQSL", "delta");
    for r in curve.records.iter().step_by(100) {
        println!("{:>8.4} {:>10.5} {:>10.5} {:>10.5}", r.t, r.ratio_mt(), r.ratio_sqsl(), r.delta);
    }
    Ok(())
}
