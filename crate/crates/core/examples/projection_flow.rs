//! Free motion on the unreduced space, projected to the alcove, against
//! direct integration of the spin Sutherland equations.

use twistred::lie::Family;
use twistred::ode::Tolerances;
use twistred::product::CouplingVector;
use twistred::projection::{GroupSystem, GroupTwist};
use twistred::sample::{random_slice_point, rng_from_seed};
use twistred::sutherland::Sutherland;

fn main() -> twistred::Result<()> {
    let alg = std::sync::Arc::new(twistred::lie::SimpleLieAlgebra::build(Family::A, 1)?);
    let sys = GroupSystem::new(alg, CouplingVector::new(vec![2.0, 2.0])?, GroupTwist::Identity)?;
    let suth = Sutherland::new(sys.space().clone())?;
    let start = random_slice_point(sys.space(), &mut rng_from_seed(3), 0.7, 0.7);
    let lifted = sys.lift_reduced(&start)?;

    let times: Vec<f64> = (0..=10).map(|i| 0.1 * i as f64).collect();
    let traj = suth.integrate_reduced(&start, &times, Tolerances::default())?;
    println!("{:>5} {:>20} {:>20} {:>10}", "t", "q (projected)", "q (integrated)", "|Δ|");
    for (t, ode) in traj.times.iter().zip(&traj.points) {
        let proj = sys.reduce_point(&sys.free_flow(*t, &lifted))?;
        let d = proj.q.iter().zip(&ode.q).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        println!("{t:>5.2} {:>20.14} {:>20.14} {d:>10.2e}", proj.q[0], ode.q[0]);
    }
    println!("energy {:.14}", suth.h_s(&start)?);
    Ok(())
}
