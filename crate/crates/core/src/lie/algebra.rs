//! Compact simple Lie algebras realized by matrices.
//!
//! Each algebra is built from real Chevalley-type generators `e_i` in a
//! defining representation in which `f_i = e_iᵀ`. Positive root vectors are
//! generated by brackets with the `e_i`, normalized so that
//! `κ(X_φ, X_{−φ}) = 1` with `X_{−φ} = X_φᵀ`, and the compact real form is
//! the anti-Hermitian part, spanned by `T_j`, `Y_φ`, `Z_φ`.

use std::f64::consts::SQRT_2;
use std::fmt;
use std::str::FromStr;

use nalgebra::DVector;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{c, commutator, frobenius, trace_product, CMat, RMat, I};

/// Coordinates in the real orthonormal basis `(T_1..T_r, Y_φ1, Z_φ1, Y_φ2, Z_φ2, ..)`.
pub type AlgebraVector = DVector<f64>;

const GEN_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    A,
    B,
    C,
    D,
    G2,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Family::A => "A",
            Family::B => "B",
            Family::C => "C",
            Family::D => "D",
            Family::G2 => "G",
        };
        f.write_str(s)
    }
}

impl FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "A" => Ok(Family::A),
            "B" => Ok(Family::B),
            "C" => Ok(Family::C),
            "D" => Ok(Family::D),
            "G" | "G2" => Ok(Family::G2),
            other => Err(Error::UnsupportedAlgebra {
                family: other.to_string(),
                rank: 0,
                reason: "unknown family".into(),
            }),
        }
    }
}

/// A positive root together with the bracket that produced its root vector.
#[derive(Debug, Clone)]
pub struct PositiveRoot {
    /// Coordinates in the basis of simple roots.
    pub simple_coords: Vec<i32>,
    /// Coordinates in the basis of fundamental weights (Dynkin labels).
    pub weight_coords: Vec<i32>,
    /// `(parent root index, simple index i)` with `X_φ ∝ [X_{α_i}, X_parent]`;
    /// `None` for simple roots.
    pub parent: Option<(usize, usize)>,
    /// `[X_{α_i}, X_parent] = scale · X_φ`.
    pub scale: f64,
}

impl PositiveRoot {
    pub fn height(&self) -> i32 {
        self.simple_coords.iter().sum()
    }
}

/// JSON descriptor of an algebra.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct AlgebraDescriptor {
    pub family: String,
    pub rank: usize,
    pub dimension: usize,
    /// Positive roots in fundamental-weight coordinates.
    pub roots: Vec<Vec<i32>>,
    pub cartan_matrix: Vec<Vec<i32>>,
    pub normalization_constant: f64,
}

#[derive(Debug, Clone)]
pub struct SimpleLieAlgebra {
    family: Family,
    rank: usize,
    cartan_matrix: Vec<Vec<i32>>,
    roots: Vec<PositiveRoot>,
    /// Normalized `X_φ` for positive φ in the defining representation.
    root_matrices: Vec<CMat>,
    /// Compact basis in the defining representation.
    basis: Vec<CMat>,
    /// `ad(B_a)` as dense real matrices.
    ad: Vec<RMat>,
    /// `φ(T_j) = i · root_on_cartan[φ][j]`.
    root_on_cartan: Vec<Vec<f64>>,
    /// Real diagonal `H_j` with `T_j = i H_j`.
    cartan_h: Vec<Vec<f64>>,
    /// `κ(X, Y) = trace_scale · tr(XY)` in the defining representation.
    trace_scale: f64,
    normalization_constant: f64,
}

fn unit(n: usize, a: usize, b: usize) -> RMat {
    let mut m = RMat::zeros(n, n);
    m[(a, b)] = 1.0;
    m
}

/// `E_{a,b} − E_{n−1−b, n−1−a}`: the elementary element of `so` for the
/// antidiagonal form.
fn so_unit(n: usize, a: usize, b: usize) -> RMat {
    unit(n, a, b) - unit(n, n - 1 - b, n - 1 - a)
}

fn generators(family: Family, rank: usize) -> Result<Vec<RMat>> {
    let reject = |reason: &str| Error::UnsupportedAlgebra {
        family: family.to_string(),
        rank,
        reason: reason.to_string(),
    };
    let r = rank;
    let g = match family {
        Family::A => {
            if !(1..=6).contains(&r) {
                return Err(reject("supported ranks are 1..=6"));
            }
            (0..r).map(|i| unit(r + 1, i, i + 1)).collect()
        }
        Family::B => {
            if !(2..=4).contains(&r) {
                return Err(reject("supported ranks are 2..=4"));
            }
            let n = 2 * r + 1;
            let mut g: Vec<RMat> = (0..r - 1).map(|i| so_unit(n, i, i + 1)).collect();
            g.push(so_unit(n, r - 1, r) * SQRT_2);
            g
        }
        Family::C => {
            if !(2..=4).contains(&r) {
                return Err(reject("supported ranks are 2..=4"));
            }
            let n = 2 * r;
            let mut g: Vec<RMat> = (0..r - 1).map(|i| so_unit(n, i, i + 1)).collect();
            g.push(unit(n, r - 1, r));
            g
        }
        Family::D => {
            if r != 4 {
                return Err(reject("only rank 4 is supported"));
            }
            let n = 2 * r;
            let mut g: Vec<RMat> = (0..r - 1).map(|i| so_unit(n, i, i + 1)).collect();
            g.push(so_unit(n, r - 2, r));
            g
        }
        Family::G2 => {
            if r != 2 {
                return Err(reject("rank must be 2"));
            }
            // Inside so(7): α1 short = ε2 ⊕ (−ε1−ε3), α2 long = ε1 − ε2.
            let short = so_unit(7, 1, 3) + so_unit(7, 4, 0) * (1.0 / SQRT_2);
            vec![short, so_unit(7, 0, 1)]
        }
    };
    Ok(g)
}

fn to_complex(m: &RMat) -> CMat {
    m.map(c)
}

/// Root functional on diagonal matrices for a weight vector `e` (with respect
/// to the diagonal Cartan): `[diag(d), e] = (ρ·d) e`.
fn diagonal_functional(e: &CMat) -> Vec<f64> {
    let n = e.nrows();
    let mut best = (0, 0, 0.0);
    for a in 0..n {
        for b in 0..n {
            let v = e[(a, b)].norm();
            if v > best.2 {
                best = (a, b, v);
            }
        }
    }
    let mut rho = vec![0.0; n];
    rho[best.0] += 1.0;
    rho[best.1] -= 1.0;
    rho
}

impl SimpleLieAlgebra {
    /// Builds the compact algebra of the given type.
    pub fn build(family: Family, rank: usize) -> Result<Self> {
        let gens: Vec<CMat> = generators(family, rank)?.iter().map(to_complex).collect();
        let r = rank;
        let n = gens[0].nrows();

        // Positive roots by height.
        let mut roots: Vec<PositiveRoot> = Vec::new();
        let mut mats: Vec<CMat> = Vec::new();
        for (i, e) in gens.iter().enumerate() {
            let mut sc = vec![0; r];
            sc[i] = 1;
            roots.push(PositiveRoot {
                simple_coords: sc,
                weight_coords: vec![],
                parent: None,
                scale: 1.0,
            });
            mats.push(e.clone());
        }
        let mut frontier: Vec<usize> = (0..r).collect();
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for &p in &frontier {
                for (i, e) in gens.iter().enumerate() {
                    let m = commutator(e, &mats[p]);
                    if frobenius(&m) < GEN_TOL {
                        continue;
                    }
                    let mut sc = roots[p].simple_coords.clone();
                    sc[i] += 1;
                    if roots.iter().any(|x| x.simple_coords == sc) {
                        continue;
                    }
                    roots.push(PositiveRoot {
                        simple_coords: sc,
                        weight_coords: vec![],
                        parent: Some((p, i)),
                        scale: 1.0,
                    });
                    mats.push(m);
                    next.push(roots.len() - 1);
                }
            }
            frontier = next;
        }

        // Cartan span: h_i = [e_i, e_iᵀ] (diagonal).
        let hs: Vec<Vec<f64>> = gens
            .iter()
            .map(|e| {
                let h = commutator(e, &e.transpose());
                (0..n).map(|k| h[(k, k)].re).collect()
            })
            .collect();
        let hmat = RMat::from_fn(n, r, |a, j| hs[j][a]);
        // Projector (Euclidean on diagonals) onto span{h_i}.
        let gram = hmat.transpose() * &hmat;
        let gram_inv = gram
            .try_inverse()
            .ok_or_else(|| Error::Numerical("degenerate Cartan span".into()))?;
        let project = |rho: &[f64]| -> Vec<f64> {
            let v = DVector::from_column_slice(rho);
            let coef = &gram_inv * (hmat.transpose() * v);
            (&hmat * coef).iter().cloned().collect()
        };

        // Root lengths under the trace form fix κ = trace_scale · tr.
        let root_vecs: Vec<Vec<f64>> = mats
            .iter()
            .map(|m| project(&diagonal_functional(m)))
            .collect();
        let len_t: Vec<f64> = root_vecs
            .iter()
            .map(|v| v.iter().map(|x| x * x).sum())
            .collect();
        let max_len = len_t.iter().cloned().fold(0.0, f64::max);
        let trace_scale = max_len / 2.0;
        let kappa_dot = |a: &[f64], b: &[f64]| -> f64 {
            // Root functionals pair through the inverse form: (α, β)_κ = (α·β)_t / trace_scale.
            a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>() / trace_scale
        };

        let simple_vecs = &root_vecs[..r];
        let cartan_matrix: Vec<Vec<i32>> = (0..r)
            .map(|i| {
                (0..r)
                    .map(|j| {
                        let v = 2.0 * kappa_dot(&simple_vecs[i], &simple_vecs[j])
                            / kappa_dot(&simple_vecs[i], &simple_vecs[i]);
                        v.round() as i32
                    })
                    .collect()
            })
            .collect();
        for root in roots.iter_mut() {
            // Dynkin labels: ⟨α_i∨, φ⟩ = Σ_j n_j A_{ij}.
            root.weight_coords = (0..r)
                .map(|i| {
                    (0..r)
                        .map(|j| root.simple_coords[j] * cartan_matrix[i][j])
                        .sum()
                })
                .collect();
        }

        // κ(X_φ, X_φᵀ) = 1.
        for m in mats.iter_mut() {
            let k = (c(trace_scale) * trace_product(m, &m.transpose())).re;
            *m /= c(k.sqrt());
        }
        for idx in 0..roots.len() {
            if let Some((p, i)) = roots[idx].parent {
                let br = commutator(&mats[i], &mats[p]);
                // coefficient along X_φ: κ(br, X_{−φ})
                let s = c(trace_scale) * trace_product(&br, &mats[idx].transpose());
                roots[idx].scale = s.re;
            }
        }

        // Orthonormal Cartan H_j under κ restricted to real diagonals.
        let mut cartan_h: Vec<Vec<f64>> = Vec::new();
        for h in &hs {
            let mut x = h.clone();
            for _ in 0..2 {
                for b in &cartan_h {
                    let p: f64 = trace_scale * x.iter().zip(b).map(|(u, v)| u * v).sum::<f64>();
                    for (xi, bi) in x.iter_mut().zip(b) {
                        *xi -= p * bi;
                    }
                }
            }
            let nrm = (trace_scale * x.iter().map(|u| u * u).sum::<f64>()).sqrt();
            cartan_h.push(x.iter().map(|u| u / nrm).collect());
        }

        let mut basis: Vec<CMat> = Vec::new();
        for h in &cartan_h {
            basis.push(CMat::from_diagonal(&DVector::from_iterator(
                n,
                h.iter().map(|x| I * x),
            )));
        }
        let inv_sqrt2 = c(1.0 / SQRT_2);
        for m in &mats {
            let mt = m.transpose();
            basis.push((m + &mt) * (I * inv_sqrt2));
            basis.push((m - &mt) * inv_sqrt2);
        }

        let root_on_cartan: Vec<Vec<f64>> = mats
            .iter()
            .map(|m| {
                let rho = diagonal_functional(m);
                cartan_h
                    .iter()
                    .map(|h| rho.iter().zip(h).map(|(a, b)| a * b).sum())
                    .collect()
            })
            .collect();

        let dim = basis.len();
        let pair = |a: &CMat, b: &CMat| -> f64 { -(c(trace_scale) * trace_product(a, b)).re };
        let mut ad = vec![RMat::zeros(dim, dim); dim];
        for a in 0..dim {
            for b in 0..dim {
                let br = commutator(&basis[a], &basis[b]);
                if frobenius(&br) < 1e-14 {
                    continue;
                }
                for cc in 0..dim {
                    let v = pair(&br, &basis[cc]);
                    if v.abs() > 1e-13 {
                        ad[a][(cc, b)] = v;
                    }
                }
            }
        }
        let killing = (&ad[0] * &ad[0]).trace();
        let normalization_constant = -1.0 / killing;

        Ok(SimpleLieAlgebra {
            family,
            rank: r,
            cartan_matrix,
            roots,
            root_matrices: mats,
            basis,
            ad,
            root_on_cartan,
            cartan_h,
            trace_scale,
            normalization_constant,
        })
    }

    pub fn family(&self) -> Family {
        self.family
    }
    pub fn rank(&self) -> usize {
        self.rank
    }
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
    pub fn num_positive_roots(&self) -> usize {
        self.roots.len()
    }
    pub fn positive_roots(&self) -> &[PositiveRoot] {
        &self.roots
    }
    pub fn cartan_matrix(&self) -> &[Vec<i32>] {
        &self.cartan_matrix
    }
    /// `C` in `⟨X, Y⟩ = −C · tr(ad_X ∘ ad_Y)`.
    pub fn normalization_constant(&self) -> f64 {
        self.normalization_constant
    }
    /// Size of the defining matrix representation.
    pub fn matrix_size(&self) -> usize {
        self.basis[0].nrows()
    }
    pub fn trace_scale(&self) -> f64 {
        self.trace_scale
    }
    pub fn index_y(&self, root: usize) -> usize {
        self.rank + 2 * root
    }
    pub fn index_z(&self, root: usize) -> usize {
        self.rank + 2 * root + 1
    }
    /// Index of the highest root (largest height).
    pub fn highest_root(&self) -> usize {
        (0..self.roots.len())
            .max_by_key(|&i| self.roots[i].height())
            .unwrap()
    }
    pub fn coxeter_number(&self) -> i32 {
        self.roots[self.highest_root()].height() + 1
    }

    /// `−i·φ(q)` for a positive root φ and `q = Σ q_j T_j`.
    pub fn root_angle(&self, root: usize, q: &[f64]) -> f64 {
        self.root_on_cartan[root]
            .iter()
            .zip(q)
            .map(|(a, b)| a * b)
            .sum()
    }
    /// The covector `a` with `−i·φ(q) = a · q`.
    pub fn root_covector(&self, root: usize) -> &[f64] {
        &self.root_on_cartan[root]
    }

    pub fn descriptor(&self) -> AlgebraDescriptor {
        AlgebraDescriptor {
            family: self.family.to_string(),
            rank: self.rank,
            dimension: self.dim(),
            roots: self.roots.iter().map(|r| r.weight_coords.clone()).collect(),
            cartan_matrix: self.cartan_matrix.clone(),
            normalization_constant: self.normalization_constant,
        }
    }

    // ---- matrices ----

    pub fn basis_matrix(&self, a: usize) -> &CMat {
        &self.basis[a]
    }
    /// Normalized `X_φ` for the positive root with index `root`.
    pub fn root_matrix(&self, root: usize) -> &CMat {
        &self.root_matrices[root]
    }
    pub fn cartan_diagonal(&self, j: usize) -> &[f64] {
        &self.cartan_h[j]
    }

    pub fn to_matrix(&self, x: &AlgebraVector) -> CMat {
        let n = self.matrix_size();
        let mut m = CMat::zeros(n, n);
        for (a, xa) in x.iter().enumerate() {
            if *xa != 0.0 {
                m += &self.basis[a] * c(*xa);
            }
        }
        m
    }

    /// Coordinates of a matrix; the part outside the compact algebra is dropped.
    pub fn from_matrix(&self, m: &CMat) -> AlgebraVector {
        AlgebraVector::from_iterator(
            self.dim(),
            self.basis.iter().map(|b| self.kappa_matrix(m, b).re * -1.0),
        )
    }

    /// `κ` evaluated on defining-representation matrices (complex bilinear).
    pub fn kappa_matrix(&self, a: &CMat, b: &CMat) -> Complex64 {
        c(self.trace_scale) * trace_product(a, b)
    }

    // ---- algebra operations on coordinates ----

    pub fn check_dim(&self, x: &AlgebraVector) -> Result<()> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: x.len(),
            });
        }
        Ok(())
    }

    pub fn ad_basis(&self, a: usize) -> &RMat {
        &self.ad[a]
    }

    pub fn ad_matrix(&self, x: &AlgebraVector) -> RMat {
        let d = self.dim();
        let mut m = RMat::zeros(d, d);
        for (a, xa) in x.iter().enumerate() {
            if *xa != 0.0 {
                m += &self.ad[a] * *xa;
            }
        }
        m
    }

    /// Structure constant `f_ab^c` with `[B_a, B_b] = Σ_c f_ab^c B_c`.
    pub fn structure_constant(&self, a: usize, b: usize, cc: usize) -> f64 {
        self.ad[a][(cc, b)]
    }

    /// Nonzero structure constants `(a, b, c, f_ab^c)` with `a < b`.
    pub fn structure_constants(&self) -> Vec<(usize, usize, usize, f64)> {
        let d = self.dim();
        let mut out = Vec::new();
        for a in 0..d {
            for b in a + 1..d {
                for cc in 0..d {
                    let v = self.ad[a][(cc, b)];
                    if v != 0.0 {
                        out.push((a, b, cc, v));
                    }
                }
            }
        }
        out
    }

    pub fn bracket(&self, x: &AlgebraVector, y: &AlgebraVector) -> Result<AlgebraVector> {
        self.check_dim(x)?;
        self.check_dim(y)?;
        Ok(self.bracket_unchecked(x, y))
    }

    /// Bracket without dimension checks.
    pub fn bracket_fast(&self, x: &AlgebraVector, y: &AlgebraVector) -> AlgebraVector {
        self.bracket_unchecked(x, y)
    }

    pub(crate) fn bracket_unchecked(&self, x: &AlgebraVector, y: &AlgebraVector) -> AlgebraVector {
        let mut out = AlgebraVector::zeros(self.dim());
        for (a, xa) in x.iter().enumerate() {
            if *xa != 0.0 {
                out.gemv(*xa, &self.ad[a], y, 1.0);
            }
        }
        out
    }

    /// `⟨X, Y⟩ = −κ(X, Y)`: the Euclidean product of coordinates.
    pub fn inner(&self, x: &AlgebraVector, y: &AlgebraVector) -> f64 {
        x.dot(y)
    }

    /// `κ` on coordinates.
    pub fn kappa(&self, x: &AlgebraVector, y: &AlgebraVector) -> f64 {
        -x.dot(y)
    }

    /// Cartan coordinates of an element, rejecting anything with a root part.
    pub fn cartan_part(&self, x: &AlgebraVector) -> Result<Vec<f64>> {
        self.check_dim(x)?;
        let off: f64 = x.rows(self.rank, self.dim() - self.rank).norm();
        if off > 1e-12 * (1.0 + x.norm()) {
            return Err(Error::InvalidInput(format!(
                "element is not in the Cartan span (root part norm {off:.3e})"
            )));
        }
        Ok(x.rows(0, self.rank).iter().cloned().collect())
    }

    pub fn cartan_element(&self, q: &[f64]) -> AlgebraVector {
        let mut x = AlgebraVector::zeros(self.dim());
        for (j, v) in q.iter().enumerate() {
            x[j] = *v;
        }
        x
    }

    /// Orthogonal projection onto the Cartan subalgebra.
    pub fn project_cartan(&self, x: &AlgebraVector) -> AlgebraVector {
        let mut y = AlgebraVector::zeros(self.dim());
        y.rows_mut(0, self.rank).copy_from(&x.rows(0, self.rank));
        y
    }

    /// `e^{ad_q}(X)` for `q = Σ q_j T_j`: fixes the Cartan part and rotates each
    /// `(Y_φ, Z_φ)` plane by `θ = −i·φ(q)` (`Y ↦ cos θ Y − sin θ Z`,
    /// `Z ↦ sin θ Y + cos θ Z` as images of the basis vectors).
    pub fn exp_ad_cartan(&self, q: &AlgebraVector, x: &AlgebraVector) -> Result<AlgebraVector> {
        let qc = self.cartan_part(q)?;
        self.check_dim(x)?;
        Ok(self.exp_ad_cartan_coords(&qc, x, 1.0))
    }

    /// Same as [`exp_ad_cartan`](Self::exp_ad_cartan) with `q` given by Cartan
    /// coordinates, scaled by `s` (so it computes `e^{s·ad_q}`).
    pub fn exp_ad_cartan_coords(&self, q: &[f64], x: &AlgebraVector, s: f64) -> AlgebraVector {
        let mut y = x.clone();
        for root in 0..self.roots.len() {
            let th = s * self.root_angle(root, q);
            let (sn, cs) = th.sin_cos();
            let iy = self.index_y(root);
            let iz = self.index_z(root);
            let (a, b) = (x[iy], x[iz]);
            y[iy] = cs * a + sn * b;
            y[iz] = -sn * a + cs * b;
        }
        y
    }

    /// Dense matrix of `e^{s·ad_q}`.
    pub fn exp_ad_cartan_matrix(&self, q: &[f64], s: f64) -> RMat {
        let d = self.dim();
        let mut m = RMat::identity(d, d);
        for root in 0..self.roots.len() {
            let th = s * self.root_angle(root, q);
            let (sn, cs) = th.sin_cos();
            let iy = self.index_y(root);
            let iz = self.index_z(root);
            m[(iy, iy)] = cs;
            m[(iy, iz)] = sn;
            m[(iz, iy)] = -sn;
            m[(iz, iz)] = cs;
        }
        m
    }

    /// `e^{ad_X}` for a general element, via the dense exponential of `ad_X`.
    pub fn exp_ad(&self, x: &AlgebraVector) -> RMat {
        self.ad_matrix(x).exp()
    }

    /// Complex coordinates of `x` in the basis `(T_j, X_φ, X_{−φ})`:
    /// returns `(cartan, plus, minus)` with `x = Σ t_j T_j + Σ a_φ X_φ + b_φ X_{−φ}`.
    pub fn complex_root_coords(
        &self,
        x: &AlgebraVector,
    ) -> (Vec<f64>, Vec<Complex64>, Vec<Complex64>) {
        let cartan = x.rows(0, self.rank).iter().cloned().collect();
        let k = 1.0 / SQRT_2;
        let mut plus = Vec::with_capacity(self.roots.len());
        let mut minus = Vec::with_capacity(self.roots.len());
        for root in 0..self.roots.len() {
            let (y, z) = (x[self.index_y(root)], x[self.index_z(root)]);
            // Y = i(X+X̄)/√2, Z = (X−X̄)/√2
            plus.push(Complex64::new(z * k, y * k));
            minus.push(Complex64::new(-z * k, y * k));
        }
        (cartan, plus, minus)
    }

    /// `⟨X_φ, x⟩ = −κ(X_φ, x)` (complex) for a positive root; `negative`
    /// selects `X_{−φ}`.
    pub fn root_pairing(&self, root: usize, negative: bool, x: &AlgebraVector) -> Complex64 {
        let (y, z) = (x[self.index_y(root)], x[self.index_z(root)]);
        let k = 1.0 / SQRT_2;
        // X_φ = (Z − iY)/√2, X_{−φ} = (−Z − iY)/√2
        if negative {
            Complex64::new(-z * k, -y * k)
        } else {
            Complex64::new(z * k, -y * k)
        }
    }

    /// Eigenvalues of `−ad_X²` (squared moduli of the spectrum of `ad_X`),
    /// sorted: an adjoint-orbit invariant. Squares avoid the loss of
    /// precision a square root causes near zero.
    pub fn ad_spectrum(&self, x: &AlgebraVector) -> Vec<f64> {
        let a = self.ad_matrix(x);
        let s = -(&a * &a);
        let mut ev: Vec<f64> = crate::linalg::symmetric_eigen(&s).0.iter().cloned().collect();
        ev.sort_by(|a, b| a.partial_cmp(b).unwrap());
        ev
    }
}
