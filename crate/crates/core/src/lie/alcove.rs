//! The open (twisted) Weyl alcove.
//!
//! For `q` in the fixed Cartan subalgebra the operator `1 − e^{−ad q}γ′`
//! degenerates on the orbit block of a root `φ` exactly when
//! `m_φ·(−iφ(q)) ∈ arg c_φ + 2πℤ`, where `m_φ` is the γ-orbit length and
//! `γ′^{m_φ} X_φ = c_φ X_φ`. These hyperplanes are the alcove walls; the alcove
//! is the chamber of their complement that contains a fixed base point.

use std::f64::consts::PI;

use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::linalg::RMat;

use super::algebra::{AlgebraVector, SimpleLieAlgebra};
use super::automorphism::DiagramAutomorphism;

const TWO_PI: f64 = 2.0 * PI;

/// Boundary tolerance for membership.
pub const MEMBERSHIP_TOL: f64 = 1e-12;

#[derive(Debug, Clone)]
struct Wall {
    covector: Vec<f64>,
    offset: f64,
}

impl Wall {
    fn value(&self, q: &[f64]) -> f64 {
        self.covector.iter().zip(q).map(|(a, b)| a * b).sum::<f64>() - self.offset
    }
}

#[derive(Debug, Clone)]
pub struct Alcove {
    rank: usize,
    /// Projector onto `𝒯^γ` in Cartan coordinates.
    fixed_projector: RMat,
    fixed_basis: RMat,
    walls: Vec<Wall>,
    base: Vec<f64>,
    base_floor: Vec<f64>,
}

impl Alcove {
    pub fn new(alg: &SimpleLieAlgebra, gamma: &DiagramAutomorphism) -> Result<Self> {
        let r = alg.rank();
        let fixed_basis = gamma.fixed_cartan_basis(r);
        let fixed_projector = &fixed_basis * fixed_basis.transpose();
        let walls: Vec<Wall> = (0..alg.num_positive_roots())
            .map(|b| {
                let (m, c) = gamma.root_orbit(b);
                Wall {
                    covector: alg.root_covector(b).iter().map(|a| a * m as f64).collect(),
                    offset: if c < 0.0 { PI } else { 0.0 },
                }
            })
            .collect();

        // Base: every simple root equal to 2π/h, then averaged over γ.
        let h = alg.coxeter_number() as f64;
        let a = RMat::from_fn(r, r, |j, k| alg.root_covector(j)[k]);
        let rhs = nalgebra::DVector::from_element(r, TWO_PI / h);
        let q0 = a
            .lu()
            .solve(&rhs)
            .ok_or_else(|| Error::Numerical("singular simple-root system".into()))?;
        let q0 = &fixed_projector * q0;
        let mut alc = Alcove {
            rank: r,
            fixed_projector,
            fixed_basis,
            walls,
            base: vec![],
            base_floor: vec![],
        };
        let base: Vec<f64> = if gamma.is_identity() {
            q0.iter().cloned().collect()
        } else {
            alc.centered_on_ray(q0.as_slice())
        };
        if alc.raw_margin(&base) < 1e-3 {
            return Err(Error::Numerical("alcove base point lies on a wall".into()));
        }
        alc.base_floor = alc
            .walls
            .iter()
            .map(|w| (w.value(&base) / TWO_PI).floor())
            .collect();
        alc.base = base;
        alc.base_floor = alc
            .walls
            .iter()
            .map(|w| (w.value(&alc.base) / TWO_PI).floor())
            .collect();
        Ok(alc)
    }

    /// Picks the chamber met first along the ray through `dir` and returns a
    /// point near its center (chord midpoints along the fixed basis, iterated).
    fn centered_on_ray(&mut self, dir: &[f64]) -> Vec<f64> {
        let mut first = f64::INFINITY;
        for w in &self.walls {
            let g: f64 = w.covector.iter().zip(dir).map(|(a, b)| a * b).sum();
            if g.abs() < 1e-14 {
                continue;
            }
            // smallest s > 0 with g·s − offset ∈ 2πℤ
            let start = -w.offset / TWO_PI;
            let k = if g > 0.0 {
                start.floor() + 1.0
            } else {
                start.ceil() - 1.0
            };
            let s = (k * TWO_PI + w.offset) / g;
            if s > 1e-12 {
                first = first.min(s);
            }
        }
        let mut q: Vec<f64> = dir.iter().map(|x| x * first * 0.5).collect();
        self.base_floor = self
            .walls
            .iter()
            .map(|w| (w.value(&q) / TWO_PI).floor())
            .collect();
        let f = self.fixed_basis.ncols();
        for _ in 0..50 {
            for k in 0..f {
                let d: Vec<f64> = self.fixed_basis.column(k).iter().cloned().collect();
                let (lo, hi) = self.chord(&q, &d);
                let s = 0.5 * (lo + hi);
                for (qi, di) in q.iter_mut().zip(&d) {
                    *qi += s * di;
                }
            }
        }
        q
    }

    pub fn rank(&self) -> usize {
        self.rank
    }
    pub fn base_point(&self) -> &[f64] {
        &self.base
    }
    /// Orthonormal basis of `𝒯^γ` (columns, Cartan coordinates).
    pub fn fixed_basis(&self) -> &RMat {
        &self.fixed_basis
    }

    fn raw_margin(&self, q: &[f64]) -> f64 {
        self.walls
            .iter()
            .map(|w| {
                let v = w.value(q).rem_euclid(TWO_PI);
                v.min(TWO_PI - v)
            })
            .fold(f64::INFINITY, f64::min)
    }

    /// Distance from `q` to the nearest wall value, in angle units.
    pub fn wall_margin(&self, q: &[f64]) -> f64 {
        self.raw_margin(q)
    }

    pub fn check_fixed(&self, q: &[f64]) -> Result<()> {
        if q.len() != self.rank {
            return Err(Error::DimensionMismatch {
                expected: self.rank,
                got: q.len(),
            });
        }
        let v = nalgebra::DVector::from_column_slice(q);
        let resid = (&self.fixed_projector * &v - &v).norm();
        if resid > 1e-10 * (1.0 + v.norm()) {
            return Err(Error::NotTwistFixed(resid));
        }
        Ok(())
    }

    /// Membership in the open alcove with boundary tolerance 1e−12.
    pub fn contains(&self, q: &[f64]) -> Result<bool> {
        self.check_fixed(q)?;
        Ok(self.inside(q, MEMBERSHIP_TOL))
    }

    fn inside(&self, q: &[f64], tol: f64) -> bool {
        self.walls.iter().zip(&self.base_floor).all(|(w, f)| {
            let v = w.value(q) - f * TWO_PI;
            v > tol && v < TWO_PI - tol
        })
    }

    /// Rejects points that are outside the alcove or within `guard` of a wall.
    pub fn require_generic(&self, q: &[f64], guard: f64) -> Result<()> {
        self.check_fixed(q)?;
        if !self.inside(q, MEMBERSHIP_TOL) {
            return Err(Error::OutsideAlcove(format!("q = {q:?}")));
        }
        let m = self.raw_margin(q);
        if m < guard {
            return Err(Error::OutsideAlcove(format!(
                "q is within {m:.3e} of an alcove wall"
            )));
        }
        Ok(())
    }

    /// Admissible step interval `(s_min, s_max)` along `q + s·d`.
    fn chord(&self, q: &[f64], d: &[f64]) -> (f64, f64) {
        let mut lo = f64::NEG_INFINITY;
        let mut hi = f64::INFINITY;
        for (w, f) in self.walls.iter().zip(&self.base_floor) {
            let v = w.value(q) - f * TWO_PI;
            let g: f64 = w.covector.iter().zip(d).map(|(a, b)| a * b).sum();
            if g.abs() < 1e-15 {
                continue;
            }
            // need 0 < v + s g < 2π
            let (a, b) = ((-v) / g, (TWO_PI - v) / g);
            let (a, b) = if g > 0.0 { (a, b) } else { (b, a) };
            lo = lo.max(a);
            hi = hi.min(b);
        }
        (lo, hi)
    }

    /// Hit-and-run sample of the alcove interior. Each step draws uniformly
    /// from the central `1 − 2·shrink` fraction of the chord.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R, steps: usize, shrink: f64) -> Vec<f64> {
        let f = self.fixed_basis.ncols();
        let mut q = self.base.clone();
        for _ in 0..steps {
            let z: Vec<f64> = (0..f).map(|_| rng.sample(StandardNormal)).collect();
            let zn = z.iter().map(|x| x * x).sum::<f64>().sqrt().max(1e-300);
            let dir =
                &self.fixed_basis * nalgebra::DVector::from_iterator(f, z.iter().map(|x| x / zn));
            let d: Vec<f64> = dir.iter().cloned().collect();
            let (lo, hi) = self.chord(&q, &d);
            let len = hi - lo;
            let s = lo + len * (shrink + (1.0 - 2.0 * shrink) * rng.random::<f64>());
            for (qi, di) in q.iter_mut().zip(&d) {
                *qi += s * di;
            }
        }
        q
    }
}

/// Free-function form of [`Alcove::contains`] taking an algebra element.
pub fn alcove_contains(
    alg: &SimpleLieAlgebra,
    gamma: &DiagramAutomorphism,
    q: &AlgebraVector,
) -> Result<bool> {
    let qc = alg.cartan_part(q)?;
    let alc = Alcove::new(alg, gamma)?;
    alc.contains(&qc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::Family;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::SQRT_2;

    #[test]
    fn su2_membership() {
        let g = SimpleLieAlgebra::build(Family::A, 1).unwrap();
        let id = DiagramAutomorphism::identity(&g);
        let a = g.root_covector(0)[0];
        let at = |theta: f64| g.cartan_element(&[theta / a]);
        assert!(!alcove_contains(&g, &id, &at(0.0)).unwrap());
        assert!(alcove_contains(&g, &id, &at(PI)).unwrap());
        assert!(!alcove_contains(&g, &id, &at(2.0 * PI)).unwrap());
        assert!(!alcove_contains(&g, &id, &at(-0.3)).unwrap());
        assert!((a.abs() - SQRT_2).abs() < 1e-12);
    }

    #[test]
    fn untwisted_alcove_matches_simple_and_highest_root_inequalities() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for (f, r) in [
            (Family::A, 2),
            (Family::B, 3),
            (Family::C, 2),
            (Family::G2, 2),
            (Family::D, 4),
        ] {
            let g = SimpleLieAlgebra::build(f, r).unwrap();
            let alc = Alcove::new(&g, &DiagramAutomorphism::identity(&g)).unwrap();
            let th = g.highest_root();
            for _ in 0..300 {
                let q: Vec<f64> = (0..r).map(|_| rng.random_range(-3.0..3.0)).collect();
                let direct =
                    (0..r).all(|j| g.root_angle(j, &q) > 0.0) && g.root_angle(th, &q) < 2.0 * PI;
                assert_eq!(alc.contains(&q).unwrap(), direct);
            }
        }
    }

    #[test]
    fn samples_are_inside_and_regular() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for (f, r, ord) in [
            (Family::A, 2, 2),
            (Family::A, 3, 2),
            (Family::A, 4, 2),
            (Family::D, 4, 3),
            (Family::A, 3, 1),
        ] {
            let g = SimpleLieAlgebra::build(f, r).unwrap();
            let gam = DiagramAutomorphism::standard(&g, ord).unwrap();
            let alc = Alcove::new(&g, &gam).unwrap();
            for _ in 0..50 {
                let q = alc.sample(&mut rng, 6, 0.05);
                assert!(alc.contains(&q).unwrap());
                assert!(alc.wall_margin(&q) > 1e-6);
            }
        }
    }

    #[test]
    fn non_fixed_point_is_rejected() {
        let g = SimpleLieAlgebra::build(Family::A, 2).unwrap();
        let gam = DiagramAutomorphism::standard(&g, 2).unwrap();
        let alc = Alcove::new(&g, &gam).unwrap();
        let mut q = alc.base_point().to_vec();
        let extra = gam.cartan_block(2) * nalgebra::DVector::from_column_slice(&[1.0, 0.0]);
        q[0] += 0.1 * (1.0 - extra[0]) + 0.05;
        assert!(matches!(alc.contains(&q), Err(Error::NotTwistFixed(_))));
    }
}
