//! Root data, twist and alcove for a few compact algebras.

use std::sync::Arc;

use twistred::lie::{DiagramAutomorphism, Family, SimpleLieAlgebra};
use twistred::product::{CouplingVector, ProductSpace};

fn main() -> twistred::Result<()> {
    for (family, rank, order) in [(Family::A, 2, 1), (Family::A, 3, 2), (Family::B, 2, 1), (Family::D, 4, 3), (Family::G2, 2, 1)] {
        let alg = Arc::new(SimpleLieAlgebra::build(family, rank)?);
        let gamma = Arc::new(DiagramAutomorphism::standard(&alg, order)?);
        let space = ProductSpace::new(alg.clone(), gamma.clone(), CouplingVector::new(vec![1.0])?)?;
        println!(
            "{family}{rank}  dim {:>2}  h = {:>2}  positive roots {:>2}  twist {:?}  fixed Cartan dim {}",
            alg.dim(),
            alg.coxeter_number(),
            alg.num_positive_roots(),
            gamma.permutation(),
            space.fixed_dim(),
        );
        println!("    Cartan matrix {:?}", alg.cartan_matrix());
        println!("    alcove base point {:?}", space.alcove().base_point());
    }
    Ok(())
}
