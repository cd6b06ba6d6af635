//! Entangled N-level states: MT is saturated at T = π/2 for M = N = 2, and at T = 1
//! the gap between the two bounds opens as M grows.

use std::f64::consts::PI;

use sqsl::bounds::{mt_bound, ratio_curve, SignMode, TimeGrid};
use sqsl::models::{HomogeneousEntangledModel, Model};
use sqsl::ortho::OrthoChoice;
use sqsl::quantum::PhysicalConstants;

fn main() -> sqsl::Result<()> {
    let c = PhysicalConstants::default();
    let m22: Model = HomogeneousEntangledModel::new(2, 2, c)?.into();
    let (psi0, h) = m22.realize()?;
    println!("M=2 N=2: T/T_MT at pi/2 = {:.12}", (PI / 2.0) / mt_bound(&psi0, &h, PI / 2.0, 1.0)?);
    for m in 2..=4 {
        let model: Model = HomogeneousEntangledModel::new(m, 2, c)?.into();
        let grid = TimeGrid::new(0.0, 1.0, 401)?;
        let curve = &ratio_curve(&model, &[OrthoChoice::ProjectorDeviation], &grid, SignMode::PaperFixed)?[0];
        let r = curve.records.last().expect("non-empty grid");
        println!("M={m} N=2, T={:.4}: T/T_MT {:.5}, T/T_SQSL {:.5}, delta {:.5}", r.t, r.ratio_mt(), r.ratio_sqsl(), r.delta);
    }
    Ok(())
}
