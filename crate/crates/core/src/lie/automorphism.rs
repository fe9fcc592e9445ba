//! Diagram automorphisms of the compact algebra.
//!
//! A permutation of simple roots preserving the Cartan matrix extends uniquely
//! to an automorphism sending the normalized simple root vectors `X_{α_i}` to
//! `X_{α_π(i)}`. On the real basis it acts by a signed permutation.

use crate::error::{Error, Result};
use crate::linalg::{commutator, frobenius, RMat};

use super::algebra::{AlgebraVector, Family, SimpleLieAlgebra};

#[derive(Debug, Clone)]
pub struct DiagramAutomorphism {
    order: usize,
    perm: Vec<usize>,
    /// `root_image[β] = (π(β), ε_β)` with `γ′(X_β) = ε_β X_{π(β)}`.
    root_image: Vec<(usize, f64)>,
    /// Matrix on algebra coordinates.
    matrix: RMat,
    group_level: bool,
}

impl DiagramAutomorphism {
    pub fn identity(alg: &SimpleLieAlgebra) -> Self {
        Self::from_permutation(alg, &(0..alg.rank()).collect::<Vec<_>>())
            .expect("identity is valid")
    }

    /// The standard automorphism of the given order: the diagram flip for
    /// `A_r` (`r ≥ 2`) and `D_4`, triality for `D_4` at order 3.
    pub fn standard(alg: &SimpleLieAlgebra, order: usize) -> Result<Self> {
        let r = alg.rank();
        let perm: Vec<usize> = match (alg.family(), order) {
            (_, 1) => (0..r).collect(),
            (Family::A, 2) if r >= 2 => (0..r).rev().collect(),
            (Family::D, 2) => vec![0, 1, 3, 2],
            (Family::D, 3) => vec![2, 1, 3, 0],
            _ => {
                return Err(Error::Unsupported(format!(
                    "no diagram automorphism of order {order} for {}{r}",
                    alg.family()
                )))
            }
        };
        Self::from_permutation(alg, &perm)
    }

    pub fn from_permutation(alg: &SimpleLieAlgebra, perm: &[usize]) -> Result<Self> {
        let r = alg.rank();
        let mut seen = vec![false; r];
        if perm.len() != r
            || perm
                .iter()
                .any(|&p| p >= r || std::mem::replace(&mut seen[p], true))
        {
            return Err(Error::InvalidInput(format!(
                "{perm:?} is not a permutation of {r} simple roots"
            )));
        }
        let a = alg.cartan_matrix();
        for i in 0..r {
            for j in 0..r {
                if a[perm[i]][perm[j]] != a[i][j] {
                    return Err(Error::InvalidInput(format!(
                        "{perm:?} does not preserve the Cartan matrix"
                    )));
                }
            }
        }
        let order = {
            let mut k = 1;
            let mut cur: Vec<usize> = perm.to_vec();
            while cur.iter().enumerate().any(|(i, &p)| p != i) {
                cur = cur.iter().map(|&p| perm[p]).collect();
                k += 1;
            }
            k
        };

        let roots = alg.positive_roots();
        let mut images = Vec::with_capacity(roots.len());
        let mut root_image = Vec::with_capacity(roots.len());
        for (b, root) in roots.iter().enumerate() {
            let img = match root.parent {
                None => {
                    let i = root.simple_coords.iter().position(|&x| x == 1).unwrap();
                    alg.root_matrix(perm[i]).clone()
                }
                Some((p, i)) => {
                    let br = commutator(alg.root_matrix(perm[i]), &images[p]);
                    br / num_complex::Complex64::new(root.scale, 0.0)
                }
            };
            let mut target = vec![0; r];
            for (i, n) in root.simple_coords.iter().enumerate() {
                target[perm[i]] = *n;
            }
            let t = roots
                .iter()
                .position(|x| x.simple_coords == target)
                .ok_or_else(|| Error::Numerical("permuted root missing".into()))?;
            let eps = alg.kappa_matrix(&img, &alg.root_matrix(t).transpose());
            let resid = frobenius(&(&img - alg.root_matrix(t) * eps));
            if (eps.norm() - 1.0).abs() > 1e-9 || eps.im.abs() > 1e-9 || resid > 1e-9 {
                return Err(Error::Numerical(format!(
                    "diagram automorphism failed on root {b}"
                )));
            }
            images.push(img);
            root_image.push((t, eps.re.signum()));
        }

        let d = alg.dim();
        let mut m = RMat::zeros(d, d);
        // Cartan block from γ′(h_i) = h_π(i), h_i = [X_{α_i}, X_{−α_i}].
        let n = alg.matrix_size();
        let hs: Vec<Vec<f64>> = (0..r)
            .map(|i| {
                let x = alg.root_matrix(i);
                let h = commutator(x, &x.transpose());
                (0..n).map(|k| h[(k, k)].re).collect()
            })
            .collect();
        let hmat = RMat::from_fn(n, r, |a, j| hs[j][a]);
        let pinv = (hmat.transpose() * &hmat)
            .try_inverse()
            .ok_or_else(|| Error::Numerical("degenerate coroots".into()))?
            * hmat.transpose();
        let hperm = RMat::from_fn(n, r, |a, j| hs[perm[j]][a]);
        for j in 0..r {
            let hj = nalgebra::DVector::from_column_slice(alg.cartan_diagonal(j));
            let coef = &pinv * &hj;
            let img = &hperm * coef;
            for l in 0..r {
                let hl = alg.cartan_diagonal(l);
                m[(l, j)] = alg.trace_scale() * img.iter().zip(hl).map(|(x, y)| x * y).sum::<f64>();
            }
        }
        if order == 1 {
            m.view_mut((0, 0), (r, r)).fill_with_identity();
        }
        for (b, &(t, eps)) in root_image.iter().enumerate() {
            m[(alg.index_y(t), alg.index_y(b))] = eps;
            m[(alg.index_z(t), alg.index_z(b))] = eps;
        }

        Ok(DiagramAutomorphism {
            order,
            perm: perm.to_vec(),
            root_image,
            matrix: m,
            group_level: alg.family() == Family::A && order <= 2,
        })
    }

    pub fn order(&self) -> usize {
        self.order
    }
    pub fn permutation(&self) -> &[usize] {
        &self.perm
    }
    pub fn is_identity(&self) -> bool {
        self.order == 1
    }
    /// Whether a group-level counterpart exists in the `SU(n)` realization.
    pub fn group_level(&self) -> bool {
        self.group_level
    }
    pub fn matrix(&self) -> &RMat {
        &self.matrix
    }
    pub fn root_image(&self, root: usize) -> (usize, f64) {
        self.root_image[root]
    }

    pub fn apply(&self, x: &AlgebraVector) -> AlgebraVector {
        &self.matrix * x
    }
    /// `γ′⁻¹ = γ′ᵀ` (the map is orthogonal).
    pub fn apply_inverse(&self, x: &AlgebraVector) -> AlgebraVector {
        self.matrix.tr_mul(x)
    }

    /// Action on Cartan coordinates.
    pub fn cartan_block(&self, r: usize) -> RMat {
        self.matrix.view((0, 0), (r, r)).into_owned()
    }

    /// Orthonormal basis (columns, Cartan coordinates) of the fixed subalgebra `𝒯^γ`.
    pub fn fixed_cartan_basis(&self, r: usize) -> RMat {
        let block = self.cartan_block(r);
        // average over the cyclic group is the orthogonal projector onto the fixed space
        let mut avg = RMat::zeros(r, r);
        let mut pw = RMat::identity(r, r);
        for _ in 0..self.order {
            avg += &pw;
            pw = &block * pw;
        }
        avg /= self.order as f64;
        crate::linalg::range_space(&avg, 1e-10)
    }

    /// Orbit length of a positive root under γ and the sign `c` with
    /// `γ′^m X_φ = c X_φ`.
    pub fn root_orbit(&self, root: usize) -> (usize, f64) {
        let mut cur = root;
        let mut sign = 1.0;
        let mut m = 0;
        loop {
            let (t, e) = self.root_image[cur];
            sign *= e;
            m += 1;
            cur = t;
            if cur == root {
                return (m, sign);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn cases() -> Vec<(SimpleLieAlgebra, usize)> {
        let mut v = Vec::new();
        for r in 2..=6 {
            v.push((SimpleLieAlgebra::build(Family::A, r).unwrap(), 2));
        }
        let d4 = SimpleLieAlgebra::build(Family::D, 4).unwrap();
        v.push((d4.clone(), 2));
        v.push((d4, 3));
        v
    }

    #[test]
    fn preserves_bracket_and_form() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for (g, ord) in cases() {
            let gam = DiagramAutomorphism::standard(&g, ord).unwrap();
            assert_eq!(gam.order(), ord);
            let m = gam.matrix();
            assert!((m.transpose() * m - RMat::identity(g.dim(), g.dim())).norm() < 1e-12);
            for _ in 0..20 {
                let x = AlgebraVector::from_fn(g.dim(), |_, _| rng.random_range(-1.0..1.0));
                let y = AlgebraVector::from_fn(g.dim(), |_, _| rng.random_range(-1.0..1.0));
                let lhs = gam.apply(&g.bracket(&x, &y).unwrap());
                let rhs = g.bracket(&gam.apply(&x), &gam.apply(&y)).unwrap();
                assert!((lhs - rhs).norm() < 1e-11);
            }
        }
    }

    #[test]
    fn power_of_order_is_identity_exactly() {
        for (g, ord) in cases() {
            let gam = DiagramAutomorphism::standard(&g, ord).unwrap();
            let mut p = RMat::identity(g.dim(), g.dim());
            for _ in 0..ord {
                p = gam.matrix() * p;
            }
            assert!((p - RMat::identity(g.dim(), g.dim())).amax() < 1e-12);
            // entries on the root block are exactly 0 or ±1
            for v in gam
                .matrix()
                .view(
                    (g.rank(), g.rank()),
                    (g.dim() - g.rank(), g.dim() - g.rank()),
                )
                .iter()
            {
                assert!(*v == 0.0 || v.abs() == 1.0);
            }
        }
    }

    #[test]
    fn fixed_cartan_dimensions() {
        // rank of the folded algebra: A_{2k} and A_{2k-1} → k, D4 flip → 3, triality → 2
        let expect = [1, 2, 2, 3, 3, 3, 2];
        for ((g, ord), e) in cases().into_iter().zip(expect) {
            let gam = DiagramAutomorphism::standard(&g, ord).unwrap();
            assert_eq!(gam.fixed_cartan_basis(g.rank()).ncols(), e);
        }
    }

    #[test]
    fn rejects_non_symmetries() {
        let g = SimpleLieAlgebra::build(Family::B, 3).unwrap();
        assert!(DiagramAutomorphism::standard(&g, 2).is_err());
        assert!(DiagramAutomorphism::from_permutation(&g, &[2, 1, 0]).is_err());
        let a1 = SimpleLieAlgebra::build(Family::A, 1).unwrap();
        assert!(DiagramAutomorphism::standard(&a1, 2).is_err());
    }
}
