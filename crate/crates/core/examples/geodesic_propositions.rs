//! Along a Fubini-Study geodesic R(t) vanishes for every orthogonal state, and the
//! parallel-transported ket obeys a harmonic equation. A generic evolution does neither.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sqsl::bounds::TimeGrid;
use sqsl::geodesic::{geodesic_generator, parallel_transport, prop1_residual, prop2_residual, random_velocity};
use sqsl::models::{HomogeneousProductModel, Model};
use sqsl::quantum::{PhysicalConstants, StateVector};

fn main() -> sqsl::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let psi = StateVector::uniform(6)?;
    let speed = 1.3;
    let v = random_velocity(&psi, speed, &mut rng);
    let h = geodesic_generator(&psi, &v, 1.0)?;
    let grid = TimeGrid::new(0.0, 2.0, 200)?;
    let rep = prop1_residual(&h, &psi, 20, 7, &grid, 1.0)?;
    println!("geodesic: max R over random perps {:.2e}, projector {:.2e}", rep.max_r, rep.max_r_projector);

    let traj = parallel_transport(&h, &psi, &TimeGrid::new(0.0, 3.0, 3001)?, 1.0)?;
    println!("geodesic: second-difference residual {:.2e}", prop2_residual(&traj, speed)?);

    let model: Model = HomogeneousProductModel::new(2, 2, PhysicalConstants::default())?.into();
    let (psi0, h) = model.realize()?;
    let rep = prop1_residual(&h, &psi0, 20, 7, &grid, 1.0)?;
    println!("{}: max R projector {:.3}", model.name(), rep.max_r_projector);
    Ok(())
}
