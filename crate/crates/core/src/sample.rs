//! Seeded generators for algebra elements, orbit points and slice points.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::lie::{AlgebraVector, SimpleLieAlgebra};
use crate::linalg::{expm, CMat};
use crate::product::{ProductSpace, ProductVector, ReducedPoint};
use crate::projection::{GroupSystem, UnreducedPoint};

/// The generator used everywhere a seed is accepted.
pub type SeededRng = ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Standard Gaussian coordinates scaled by `scale`.
pub fn random_algebra_vector<R: Rng + ?Sized>(
    alg: &SimpleLieAlgebra,
    rng: &mut R,
    scale: f64,
) -> AlgebraVector {
    AlgebraVector::from_fn(alg.dim(), |_, _| {
        scale * rng.sample::<f64, _>(StandardNormal)
    })
}

/// `Ad_{e^Y}(seed)` for a random `Y`; stays on the adjoint orbit of `seed`.
pub fn random_orbit_point<R: Rng + ?Sized>(
    alg: &SimpleLieAlgebra,
    seed: &AlgebraVector,
    rng: &mut R,
) -> AlgebraVector {
    let y = random_algebra_vector(alg, rng, 1.0);
    alg.exp_ad(&y) * seed
}

/// Moves points `ξ_k` along their orbits until the `𝒦`-part of `ξ⃗` vanishes.
///
/// Gradient descent on `½|ξ⃗_𝒦|²_λ`: with `ξ⃗_𝒦 = (t, …, t)` the steepest
/// direction on orbit `k` is `Y_k = −[ξ_k, t]` (up to a positive factor).
pub fn project_to_constraint(
    space: &ProductSpace,
    xi: &ProductVector,
    tol: f64,
) -> Result<ProductVector> {
    let alg = space.algebra();
    let c = space.coupling();
    let mut cur = xi.clone();
    let scale = xi.norm_lambda(c).max(1e-300);
    let mut step = 0.5 / (scale * scale);
    let mut val = space.project_k(&cur)?.norm_lambda(c);
    for _ in 0..20000 {
        if val < tol {
            return Ok(cur);
        }
        let k = space.project_k(&cur)?;
        let t = k.component(0);
        let comps: Vec<AlgebraVector> = (0..space.n())
            .map(|i| {
                let x = cur.component(i);
                let y = alg.bracket_fast(&t, &x) * (step * c.lambda(i));
                alg.exp_ad(&y) * x
            })
            .collect();
        let trial = ProductVector::from_components(&comps)?;
        let tv = space.project_k(&trial)?.norm_lambda(c);
        if tv < val {
            cur = trial;
            val = tv;
            step *= 1.2;
        } else {
            step *= 0.5;
            if step < 1e-300 {
                break;
            }
        }
    }
    if val < tol {
        Ok(cur)
    } else {
        Err(Error::ConstraintInfeasible(val))
    }
}

/// A random slice point with `‖p‖`, `‖ξ_k‖` of order `scale`.
///
/// `ξ⃗` is a random vector with its `𝒦`-part removed; orbit data is whatever
/// the resulting components carry.
pub fn random_reduced_point<R: Rng + ?Sized>(
    space: &ProductSpace,
    rng: &mut R,
    scale: f64,
) -> ReducedPoint {
    let alg = space.algebra();
    let q = space.alcove().sample(rng, 6, 0.1);
    let fixed = space.alcove().fixed_basis();
    let z = nalgebra::DVector::from_fn(fixed.ncols(), |_, _| {
        scale * rng.sample::<f64, _>(StandardNormal)
    });
    let p: Vec<f64> = (fixed * z).iter().cloned().collect();
    let raw = space.product_from_fn(|_| random_algebra_vector(alg, rng, scale));
    let xi = space.project_k_perp(&raw).expect("shape");
    ReducedPoint { q, p, xi }
}

/// Random orbit points for the given seeds, then projected onto `ξ⃗_𝒦 = 0`
/// along the orbits.
pub fn random_orbit_slice_point<R: Rng + ?Sized>(
    space: &ProductSpace,
    seeds: &[AlgebraVector],
    rng: &mut R,
    p_scale: f64,
) -> Result<ReducedPoint> {
    if seeds.len() != space.n() {
        return Err(Error::DimensionMismatch {
            expected: space.n(),
            got: seeds.len(),
        });
    }
    let alg = space.algebra();
    let q = space.alcove().sample(rng, 6, 0.1);
    let fixed = space.alcove().fixed_basis();
    let z = nalgebra::DVector::from_fn(fixed.ncols(), |_, _| {
        p_scale * rng.sample::<f64, _>(StandardNormal)
    });
    let p: Vec<f64> = (fixed * z).iter().cloned().collect();
    let comps: Vec<AlgebraVector> = seeds
        .iter()
        .map(|s| random_orbit_point(alg, s, rng))
        .collect();
    let raw = ProductVector::from_components(&comps)?;
    let xi = project_to_constraint(space, &raw, 1e-13)?;
    Ok(ReducedPoint { q, p, xi })
}

/// Random element of the group generated by the algebra: `exp` of a random
/// algebra element with coordinates of size `scale`.
pub fn random_group_element<R: Rng + ?Sized>(
    alg: &SimpleLieAlgebra,
    rng: &mut R,
    scale: f64,
) -> CMat {
    expm(&alg.to_matrix(&random_algebra_vector(alg, rng, scale)))
}

/// Random `(g⃗, J⃗, ξ⃗)` for the group-level system, with no constraint imposed.
pub fn random_unreduced_point<R: Rng + ?Sized>(
    sys: &GroupSystem,
    rng: &mut R,
    scale: f64,
) -> UnreducedPoint {
    let alg = sys.algebra();
    let nf = sys.n_factors();
    UnreducedPoint {
        g: (0..nf)
            .map(|_| random_group_element(alg, rng, 2.0))
            .collect(),
        j: (0..nf)
            .map(|_| alg.to_matrix(&random_algebra_vector(alg, rng, scale)))
            .collect(),
        xi: (0..nf)
            .map(|_| alg.to_matrix(&random_algebra_vector(alg, rng, scale)))
            .collect(),
    }
}

/// Slice point with independent scales for `p` and `ξ⃗`; `xi_scale = 0` gives `ξ⃗ = 0`.
pub fn random_slice_point<R: Rng + ?Sized>(
    space: &ProductSpace,
    rng: &mut R,
    p_scale: f64,
    xi_scale: f64,
) -> ReducedPoint {
    let alg = space.algebra();
    let q = space.alcove().sample(rng, 6, 0.1);
    let fixed = space.alcove().fixed_basis();
    let z = nalgebra::DVector::from_fn(fixed.ncols(), |_, _| {
        p_scale * rng.sample::<f64, _>(StandardNormal)
    });
    let p: Vec<f64> = (fixed * z).iter().cloned().collect();
    let xi = if xi_scale == 0.0 {
        space.zero_vector()
    } else {
        let raw = space.product_from_fn(|_| random_algebra_vector(alg, rng, xi_scale));
        space.project_k_perp(&raw).expect("shape")
    };
    ReducedPoint { q, p, xi }
}
