//! Lattice search over Bloch directions for a two-qubit product state, then local refinement.

use sqsl::bounds::SignMode;
use sqsl::models::{Model, QubitProductModel};
use sqsl::optimizer::{grid_search, refine_local, GridSpec, ObjectiveSpec};
use sqsl::quantum::PhysicalConstants;

fn main() -> sqsl::Result<()> {
    let model: Model = QubitProductModel::with_real_alpha(1.0 / 3f64.sqrt(), 2, PhysicalConstants::default())?.into();
    let spec = ObjectiveSpec::for_model(&model, SignMode::PaperFixed)?;
    let report = grid_search(&model, &GridSpec::default(), &spec)?;
    let excluded = report.landscape.iter().filter(|p| p.objective.is_none()).count();
    println!("{} lattice points, {excluded} excluded", report.landscape.len());
    for c in &report.candidates {
        let r = refine_local(&model, (c.theta, c.phi), &spec)?;
        println!(
            "lattice ({:.1}, {:.1}) -> {:.6}; refined ({:.4}, {:.4}) -> {:.6} in {} sweeps",
            c.theta, c.phi, c.objective, r.theta, r.phi, r.objective, r.iterations
        );
    }
    Ok(())
}
