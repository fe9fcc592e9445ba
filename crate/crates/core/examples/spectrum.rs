//! Low-lying quantum levels and the spin potential of a single su(2) site.

use std::sync::Arc;

use twistred::lie::{DiagramAutomorphism, Family, SimpleLieAlgebra};
use twistred::product::{CouplingVector, ProductSpace};
use twistred::quantum::{enumerate_levels, spin_potential_matrix, weyl_constant, WeightLattice, WeightVector};

fn main() -> twistred::Result<()> {
    let su3 = SimpleLieAlgebra::build(Family::A, 2)?;
    let lattice = WeightLattice::new(&su3)?;
    let nu = vec![WeightVector::zero(2); 2];
    let levels = enumerate_levels(&lattice, &[0, 1], &[2.0, 2.0], &nu, 6.0)?;
    println!("su(3), two sites, Weyl constant {}", weyl_constant(&lattice));
    for l in &levels {
        let w: Vec<String> = l.weights.iter().map(|w| w.label_string()).collect();
        println!("  E = {:>8.4}  mult {:>2}  {}", l.energy, l.multiplicity, w.join(" "));
    }

    let su2 = Arc::new(SimpleLieAlgebra::build(Family::A, 1)?);
    let space = ProductSpace::new(su2.clone(), Arc::new(DiagramAutomorphism::identity(&su2)), CouplingVector::new(vec![1.0])?)?;
    // Spin 2: the zero-weight line of V_4 is one-dimensional.
    for q in [0.5, 1.5, 3.0] {
        let v = spin_potential_matrix(&space, &[q], &[4])?;
        let angle = su2.root_angle(0, &[q]);
        let closed = 6.0 / (4.0 * (angle / 2.0).sin().powi(2));
        println!("root angle {angle:.4}: potential {:.10}  j(j+1)/4sin² {closed:.10}", v.matrix[(0, 0)].re);
    }
    Ok(())
}
