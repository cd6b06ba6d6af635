//! Orthogonal state built from a user-chosen Pauli sum instead of the projector.

use sqsl::bounds::{ratio_curve, SignMode, TimeGrid};
use sqsl::models::{Model, QubitProductModel};
use sqsl::ortho::OrthoChoice;
use sqsl::quantum::{HermitianOperator, PauliString, PauliSum, PhysicalConstants};

fn main() -> sqsl::Result<()> {
    let model: Model = QubitProductModel::with_real_alpha(0.5, 2, PhysicalConstants::default())?.into();
    let sum = PauliSum::new(2, vec![(1.0, "XX".parse::<PauliString>()?), (0.5, "ZY".parse()?)])?;
    let orthos = [OrthoChoice::ProjectorDeviation, OrthoChoice::CustomObservable(HermitianOperator::pauli_sum(sum)?)];
    let grid = TimeGrid::new(0.0, model.consts().period(), 801)?;
    let curves = ratio_curve(&model, &orthos, &grid, SignMode::Adaptive)?;
    for (p, o) in curves[0].records.iter().zip(&curves[1].records).step_by(100) {
        println!("T={:.3}  projector {:.5}  XX+0.5ZY {:.5}  {:?}", p.t, p.ratio_sqsl(), o.ratio_sqsl(), o.flags);
    }
    Ok(())
}
