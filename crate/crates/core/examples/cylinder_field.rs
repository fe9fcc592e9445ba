//! A gauge field on the cylinder with static charges, its slice image and
//! the Wilson line of a gauge-dressed constant connection.

use std::sync::Arc;

use twistred::lie::{DiagramAutomorphism, Family, SimpleLieAlgebra};
use twistred::linalg::unitarity_defect;
use twistred::projection::GroupTwist;
use twistred::sample::{random_algebra_vector, random_group_element, rng_from_seed};
use twistred::verify::{dressed_connection, random_ym_input, ym_residuals};
use twistred::ym::{gauge_to_constant, wilson_line, ConnectionSample, WilsonTolerance, YmBridge};

fn main() -> twistred::Result<()> {
    let alg = Arc::new(SimpleLieAlgebra::build(Family::A, 2)?);
    let bridge = YmBridge::new(alg.clone(), Arc::new(DiagramAutomorphism::identity(&alg)));
    let marks = [0.2, 0.55, 0.8];
    let mut rng = rng_from_seed(5);

    let (chi, charges, p) = random_ym_input(&bridge, &marks, &mut rng, 1.0)?;
    let (field, res) = ym_residuals(&bridge, &marks, &chi, &charges, &p)?;
    println!("χ = {chi:?}");
    println!("{}", serde_json::to_string_pretty(&field)?);
    println!("residuals {res:?}");

    let a_const = alg.to_matrix(&alg.cartan_element(&chi));
    let g0 = random_group_element(&alg, &mut rng, 1.0);
    let v = alg.to_matrix(&random_algebra_vector(&alg, &mut rng, 0.5));
    let a = ConnectionSample::from_fn(dressed_connection(move |_| a_const.clone(), g0, v), GroupTwist::Identity);
    let xs: Vec<f64> = (0..=4).map(|i| 0.25 * i as f64).collect();
    let line = wilson_line(&a, &xs, WilsonTolerance::default())?;
    for (x, y) in line.xs.iter().zip(&line.ys) {
        println!("x = {x:.2}  unitarity defect {:.1e}", unitarity_defect(y));
    }
    let fixed = gauge_to_constant(alg, &a, &[0.5], WilsonTolerance::default())?;
    println!("recovered χ = {:?}", fixed.chi);
    Ok(())
}
