//! The reduced Hamiltonian evaluated three ways on random slice points.

use twistred::config::RunConfig;
use twistred::sample::{random_slice_point, rng_from_seed};
use twistred::verify::{closed_form_system, hamiltonian_forms};

fn main() -> twistred::Result<()> {
    let mut rng = rng_from_seed(7);
    for (family, rank, order, lambdas) in [("A", 1, 1, vec![2.0, 2.0]), ("A", 2, 1, vec![3.0, 1.5]), ("A", 3, 2, vec![2.0, 2.0]), ("C", 2, 1, vec![1.0])] {
        let mut cfg = RunConfig::new(family, rank, lambdas);
        cfg.gamma_order = order;
        let setup = cfg.setup()?;
        let space = setup.space()?;
        let closed = closed_form_system(&setup)?;
        let pt = random_slice_point(&space, &mut rng, 0.7, 0.7);
        let h = hamiltonian_forms(&space, closed.as_ref(), &pt)?;
        println!("{family}{rank} γ order {order}: {h:?}");
    }
    Ok(())
}
