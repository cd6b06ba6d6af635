//! Transverse-field chain with K down spins: overlap against the dense propagator and
//! how often a Bloch observable beats the projector choice.

use sqsl::bounds::{ratio_curve, SignMode, TimeGrid};
use sqsl::models::{Model, SpinChainModel};
use sqsl::ortho::OrthoChoice;
use sqsl::quantum::{evolve, inner, PhysicalConstants};

fn main() -> sqsl::Result<()> {
    let model: Model = SpinChainModel::new(4, 2, PhysicalConstants::default())?.into();
    let (psi0, h) = model.realize()?;
    let period = model.consts().period();
    let mut worst = 0.0f64;
    for i in 0..50 {
        let t = period * i as f64 / 49.0;
        let a = model.overlap_data(t)?.overlap.norm_sqr();
        let d = inner(&psi0, &evolve(&h, &psi0, t, 1.0)?)?.norm_sqr();
        worst = worst.max((a - d).abs());
    }
    println!("{}: dim {}, max ||f|^2 diff| {worst:.2e}", model.name(), psi0.dim());

    let grid = TimeGrid::new(0.0, period, 2001)?;
    let orthos = [OrthoChoice::ProjectorDeviation, OrthoChoice::bloch(1.6, 5.4)?];
    let curves = ratio_curve(&model, &orthos, &grid, SignMode::PaperFixed)?;
    let wins = curves[0].records.iter().zip(&curves[1].records).filter(|(p, b)| b.ratio_sqsl() >= p.ratio_sqsl()).count();
    println!("Bloch(1.6, 5.4) at least as tight as the projector at {wins}/{} times", grid.points);
    Ok(())
}
