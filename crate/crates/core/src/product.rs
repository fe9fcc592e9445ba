//! The N-fold product algebra with the twist `Γ′`, the Abelian subalgebras
//! `𝒦` and `𝒬`, the operator `𝒵(q)` and the momentum-constraint solver.
//!
//! Product vectors use natural coordinates: component `k` occupies entries
//! `k·d .. (k+1)·d` in the compact basis of the factor. All orthonormal bases
//! below are orthonormal for `⟨X, Y⟩_λ = Σ λ_k ⟨X_k, Y_k⟩`, so operator
//! matrices expressed in them have ordinary transposes as adjoints.

use std::sync::Arc;

use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lie::{Alcove, AlgebraVector, DiagramAutomorphism, SimpleLieAlgebra};
use crate::linalg::{null_space, RMat, RVec};

/// Guard used before inverting `𝒵(q)`.
pub const WALL_GUARD: f64 = 1e-8;

/// The positive scale factors `λ_k` with `Σ 1/λ_k = 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct CouplingVector {
    lambdas: Vec<f64>,
}

impl TryFrom<Vec<f64>> for CouplingVector {
    type Error = Error;
    fn try_from(v: Vec<f64>) -> Result<Self> {
        CouplingVector::new(v)
    }
}

impl From<CouplingVector> for Vec<f64> {
    fn from(c: CouplingVector) -> Self {
        c.lambdas
    }
}

impl CouplingVector {
    /// Validates positivity and `Σ 1/λ_k = 1` to 1e−12. No renormalization.
    pub fn new(lambdas: Vec<f64>) -> Result<Self> {
        if lambdas.is_empty() {
            return Err(Error::InvalidCoupling("empty coupling vector".into()));
        }
        if let Some(l) = lambdas.iter().find(|l| !(l.is_finite() && **l > 0.0)) {
            return Err(Error::InvalidCoupling(format!(
                "λ = {l} is not a positive real"
            )));
        }
        let s: f64 = lambdas.iter().map(|l| 1.0 / l).sum();
        if (s - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidCoupling(format!("Σ 1/λ_k = {s}, expected 1")));
        }
        Ok(CouplingVector { lambdas })
    }

    /// Rescales positive weights so that `Σ 1/λ_k = 1`.
    pub fn normalized(weights: &[f64]) -> Result<Self> {
        if weights.is_empty() || weights.iter().any(|w| !(w.is_finite() && *w > 0.0)) {
            return Err(Error::InvalidCoupling("weights must be positive".into()));
        }
        let s: f64 = weights.iter().map(|w| 1.0 / w).sum();
        Ok(CouplingVector {
            lambdas: weights.iter().map(|w| w * s).collect(),
        })
    }

    /// `λ_k = 1/(x_k − x_{k−1})` with `x_0 = x_N − 1`.
    pub fn from_marks(marks: &[f64]) -> Result<Self> {
        let n = marks.len();
        if n == 0 {
            return Err(Error::InvalidInput("no marked points".into()));
        }
        if marks[0] <= 0.0 || marks[n - 1] >= 1.0 || marks.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidInput(
                "marks must satisfy 0 < x_1 < … < x_N < 1".into(),
            ));
        }
        let lambdas: Vec<f64> = (0..n)
            .map(|k| {
                let prev = if k == 0 {
                    marks[n - 1] - 1.0
                } else {
                    marks[k - 1]
                };
                1.0 / (marks[k] - prev)
            })
            .collect();
        // Σ 1/λ_k telescopes to exactly 1 up to rounding; renormalize that rounding away.
        Self::normalized(&lambdas)
    }

    pub fn n(&self) -> usize {
        self.lambdas.len()
    }
    pub fn lambdas(&self) -> &[f64] {
        &self.lambdas
    }
    pub fn lambda(&self, k: usize) -> f64 {
        self.lambdas[k]
    }
    /// `b_I = Σ_{k≤I} 1/λ_k` for the 1-based index `I`.
    pub fn b(&self, i: usize) -> f64 {
        self.lambdas[..i].iter().map(|l| 1.0 / l).sum()
    }
    pub fn b_diff(&self, i: usize, j: usize) -> f64 {
        self.b(i) - self.b(j)
    }
}

/// `X_1 ⊕ … ⊕ X_N` in natural coordinates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<f64>>", into = "Vec<Vec<f64>>")]
pub struct ProductVector {
    n: usize,
    dim: usize,
    pub data: RVec,
}

impl TryFrom<Vec<Vec<f64>>> for ProductVector {
    type Error = Error;
    fn try_from(v: Vec<Vec<f64>>) -> Result<Self> {
        let comps: Vec<AlgebraVector> = v.into_iter().map(AlgebraVector::from_vec).collect();
        ProductVector::from_components(&comps)
    }
}

impl From<ProductVector> for Vec<Vec<f64>> {
    fn from(p: ProductVector) -> Self {
        (0..p.n)
            .map(|k| p.component(k).iter().cloned().collect())
            .collect()
    }
}

impl ProductVector {
    pub fn zeros(n: usize, dim: usize) -> Self {
        ProductVector {
            n,
            dim,
            data: RVec::zeros(n * dim),
        }
    }
    pub fn from_data(n: usize, dim: usize, data: RVec) -> Self {
        assert_eq!(data.len(), n * dim);
        ProductVector { n, dim, data }
    }
    pub fn from_components(c: &[AlgebraVector]) -> Result<Self> {
        let n = c.len();
        if n == 0 {
            return Err(Error::InvalidInput("empty product vector".into()));
        }
        let dim = c[0].len();
        let mut data = RVec::zeros(n * dim);
        for (k, x) in c.iter().enumerate() {
            if x.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: x.len(),
                });
            }
            data.rows_mut(k * dim, dim).copy_from(x);
        }
        Ok(ProductVector { n, dim, data })
    }
    /// `(t/λ_1, …, t/λ_N)` or, with `scale_by_lambda = false`, `(t, …, t)`.
    pub fn repeated(x: &AlgebraVector, coupling: &CouplingVector, divide_by_lambda: bool) -> Self {
        let comps: Vec<AlgebraVector> = coupling
            .lambdas()
            .iter()
            .map(|l| if divide_by_lambda { x / *l } else { x.clone() })
            .collect();
        Self::from_components(&comps).expect("non-empty")
    }
    pub fn n(&self) -> usize {
        self.n
    }
    pub fn dim(&self) -> usize {
        self.dim
    }
    pub fn component(&self, k: usize) -> AlgebraVector {
        self.data.rows(k * self.dim, self.dim).into_owned()
    }
    pub fn set_component(&mut self, k: usize, x: &AlgebraVector) {
        self.data.rows_mut(k * self.dim, self.dim).copy_from(x);
    }
    pub fn components(&self) -> Vec<AlgebraVector> {
        (0..self.n).map(|k| self.component(k)).collect()
    }
    pub fn inner_lambda(&self, other: &ProductVector, c: &CouplingVector) -> f64 {
        (0..self.n)
            .map(|k| {
                c.lambda(k)
                    * self
                        .data
                        .rows(k * self.dim, self.dim)
                        .dot(&other.data.rows(k * self.dim, self.dim))
            })
            .sum()
    }
    pub fn norm_lambda(&self, c: &CouplingVector) -> f64 {
        self.inner_lambda(self, c).sqrt()
    }
    pub fn map(&self, f: impl Fn(&AlgebraVector) -> AlgebraVector) -> Self {
        let comps: Vec<AlgebraVector> = self.components().iter().map(f).collect();
        Self::from_components(&comps).expect("same shape")
    }
}

impl std::ops::Add for &ProductVector {
    type Output = ProductVector;
    fn add(self, o: &ProductVector) -> ProductVector {
        ProductVector {
            n: self.n,
            dim: self.dim,
            data: &self.data + &o.data,
        }
    }
}
impl std::ops::Sub for &ProductVector {
    type Output = ProductVector;
    fn sub(self, o: &ProductVector) -> ProductVector {
        ProductVector {
            n: self.n,
            dim: self.dim,
            data: &self.data - &o.data,
        }
    }
}
impl std::ops::Mul<f64> for &ProductVector {
    type Output = ProductVector;
    fn mul(self, s: f64) -> ProductVector {
        ProductVector {
            n: self.n,
            dim: self.dim,
            data: &self.data * s,
        }
    }
}

/// A point of the gauge slice: `q ∈ Ť^γ`, `p ∈ 𝒯^γ` (Cartan coordinates) and
/// `ξ⃗` with vanishing `𝒦`-part.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReducedPoint {
    pub q: Vec<f64>,
    pub p: Vec<f64>,
    pub xi: ProductVector,
}

/// The product algebra with its twist, coupling and alcove.
#[derive(Debug, Clone)]
pub struct ProductSpace {
    alg: Arc<SimpleLieAlgebra>,
    gamma: Arc<DiagramAutomorphism>,
    coupling: CouplingVector,
    alcove: Alcove,
    /// λ-orthonormal bases (columns, natural coordinates).
    k_basis: RMat,
    q_basis: RMat,
    k_perp: RMat,
    q_perp: RMat,
    /// `Γ′` as a dense matrix.
    twist: RMat,
}

impl ProductSpace {
    pub fn new(
        alg: Arc<SimpleLieAlgebra>,
        gamma: Arc<DiagramAutomorphism>,
        coupling: CouplingVector,
    ) -> Result<Self> {
        let n = coupling.n();
        let d = alg.dim();
        let r = alg.rank();
        let alcove = Alcove::new(&alg, &gamma)?;
        let fixed = alcove.fixed_basis().clone();
        let f = fixed.ncols();
        let lam_total: f64 = coupling.lambdas().iter().sum();

        let mut k_basis = RMat::zeros(n * d, f);
        let mut q_basis = RMat::zeros(n * d, f);
        for j in 0..f {
            for k in 0..n {
                for a in 0..r {
                    k_basis[(k * d + a, j)] = fixed[(a, j)] / lam_total.sqrt();
                    q_basis[(k * d + a, j)] = fixed[(a, j)] / coupling.lambda(k);
                }
            }
        }
        let sqrt_w = Self::sqrt_weights(&coupling, d);
        let complement = |b: &RMat| -> RMat {
            // Euclidean complement in scaled coordinates, mapped back.
            let scaled = RMat::from_fn(b.nrows(), b.ncols(), |i, j| b[(i, j)] * sqrt_w[i]);
            let ns = null_space(&scaled.transpose(), 1e-10);
            RMat::from_fn(ns.nrows(), ns.ncols(), |i, j| ns[(i, j)] / sqrt_w[i])
        };
        let k_perp = complement(&k_basis);
        let q_perp = complement(&q_basis);

        let mut twist = RMat::zeros(n * d, n * d);
        // Γ′(X)_1 = γ′(X_N), Γ′(X)_k = X_{k−1}
        twist
            .view_mut((0, (n - 1) * d), (d, d))
            .copy_from(gamma.matrix());
        for k in 1..n {
            twist
                .view_mut((k * d, (k - 1) * d), (d, d))
                .fill_with_identity();
        }

        Ok(ProductSpace {
            alg,
            gamma,
            coupling,
            alcove,
            k_basis,
            q_basis,
            k_perp,
            q_perp,
            twist,
        })
    }

    fn sqrt_weights(c: &CouplingVector, d: usize) -> Vec<f64> {
        (0..c.n() * d).map(|i| c.lambda(i / d).sqrt()).collect()
    }

    pub fn algebra(&self) -> &SimpleLieAlgebra {
        &self.alg
    }
    pub fn algebra_arc(&self) -> Arc<SimpleLieAlgebra> {
        self.alg.clone()
    }
    pub fn gamma(&self) -> &DiagramAutomorphism {
        &self.gamma
    }
    pub fn gamma_arc(&self) -> Arc<DiagramAutomorphism> {
        self.gamma.clone()
    }
    pub fn coupling(&self) -> &CouplingVector {
        &self.coupling
    }
    pub fn alcove(&self) -> &Alcove {
        &self.alcove
    }
    pub fn n(&self) -> usize {
        self.coupling.n()
    }
    pub fn dim(&self) -> usize {
        self.alg.dim()
    }
    pub fn total_dim(&self) -> usize {
        self.n() * self.dim()
    }
    /// `dim 𝒯^γ`.
    pub fn fixed_dim(&self) -> usize {
        self.k_basis.ncols()
    }
    pub fn k_basis(&self) -> &RMat {
        &self.k_basis
    }
    pub fn q_basis(&self) -> &RMat {
        &self.q_basis
    }
    pub fn k_perp_basis(&self) -> &RMat {
        &self.k_perp
    }
    pub fn q_perp_basis(&self) -> &RMat {
        &self.q_perp
    }

    fn check(&self, x: &ProductVector) -> Result<()> {
        if x.n() != self.n() || x.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.total_dim(),
                got: x.data.len(),
            });
        }
        Ok(())
    }

    /// Diagonal weights of the λ-metric on natural coordinates.
    pub fn metric_diagonal(&self) -> RVec {
        let d = self.dim();
        RVec::from_fn(self.total_dim(), |i, _| self.coupling.lambda(i / d))
    }

    /// Coefficients `⟨b_i, x⟩_λ` of `x` in a λ-orthonormal basis.
    pub fn coefficients(&self, basis: &RMat, x: &RVec) -> RVec {
        let w = self.metric_diagonal();
        basis.tr_mul(&x.component_mul(&w))
    }

    /// λ-transpose of an operator given on natural coordinates: `Λ⁻¹ AᵀΛ`.
    pub fn lambda_transpose(&self, a: &RMat) -> RMat {
        let w = self.metric_diagonal();
        RMat::from_fn(a.nrows(), a.ncols(), |i, j| a[(j, i)] * w[j] / w[i])
    }

    pub fn twist_matrix(&self) -> &RMat {
        &self.twist
    }

    pub fn twist_apply(&self, x: &ProductVector) -> Result<ProductVector> {
        self.check(x)?;
        Ok(ProductVector::from_data(
            self.n(),
            self.dim(),
            &self.twist * &x.data,
        ))
    }

    /// `(Γ′ᵀX)_k = (λ_{k+1}/λ_k) X_{k+1}` for `k < N`,
    /// `(Γ′ᵀX)_N = (λ_1/λ_N) γ′⁻¹(X_1)`.
    pub fn twist_transpose(&self, x: &ProductVector) -> Result<ProductVector> {
        self.check(x)?;
        let n = self.n();
        let l = self.coupling.lambdas();
        let mut out = ProductVector::zeros(n, self.dim());
        for k in 0..n - 1 {
            out.set_component(k, &(x.component(k + 1) * (l[k + 1] / l[k])));
        }
        out.set_component(
            n - 1,
            &(self.gamma.apply_inverse(&x.component(0)) * (l[0] / l[n - 1])),
        );
        Ok(out)
    }

    pub fn twist_transpose_matrix(&self) -> RMat {
        self.lambda_transpose(&self.twist)
    }

    fn project_onto(&self, basis: &RMat, x: &ProductVector) -> ProductVector {
        let c = self.coefficients(basis, &x.data);
        ProductVector::from_data(self.n(), self.dim(), basis * c)
    }

    pub fn project_k(&self, x: &ProductVector) -> Result<ProductVector> {
        self.check(x)?;
        Ok(self.project_onto(&self.k_basis, x))
    }
    pub fn project_q(&self, x: &ProductVector) -> Result<ProductVector> {
        self.check(x)?;
        Ok(self.project_onto(&self.q_basis, x))
    }
    pub fn project_k_perp(&self, x: &ProductVector) -> Result<ProductVector> {
        Ok(x - &self.project_k(x)?)
    }
    pub fn project_q_perp(&self, x: &ProductVector) -> Result<ProductVector> {
        Ok(x - &self.project_q(x)?)
    }

    /// `p⃗ = (p/λ_1, …, p/λ_N)` for `p` in Cartan coordinates.
    pub fn q_vector(&self, p: &[f64]) -> ProductVector {
        ProductVector::repeated(&self.alg.cartan_element(p), &self.coupling, true)
    }

    /// Cartan coordinates of the `𝒬`-part of `x`: the `p` with `x_𝒬 = p⃗`.
    pub fn q_coefficient(&self, x: &ProductVector) -> Vec<f64> {
        let c = self.coefficients(&self.q_basis, &x.data);
        let fixed = self.alcove.fixed_basis();
        (fixed * c).iter().cloned().collect()
    }

    /// Checks `q ∈ 𝒯^γ`, membership in the open alcove and the wall guard.
    pub fn require_alcove(&self, q: &[f64]) -> Result<()> {
        self.alcove.require_generic(q, WALL_GUARD)
    }

    /// Block-diagonal `e^{s·ad q⃗}`, `q⃗_k = q/λ_k`.
    pub fn exp_ad_qvec(&self, q: &[f64], s: f64) -> RMat {
        let d = self.dim();
        let mut m = RMat::zeros(self.total_dim(), self.total_dim());
        for k in 0..self.n() {
            let b = self
                .alg
                .exp_ad_cartan_matrix(q, s / self.coupling.lambda(k));
            m.view_mut((k * d, k * d), (d, d)).copy_from(&b);
        }
        m
    }

    pub fn exp_ad_qvec_apply(&self, q: &[f64], x: &ProductVector, s: f64) -> ProductVector {
        let comps: Vec<AlgebraVector> = (0..self.n())
            .map(|k| {
                self.alg
                    .exp_ad_cartan_coords(q, &x.component(k), s / self.coupling.lambda(k))
            })
            .collect();
        ProductVector::from_components(&comps).expect("shape")
    }

    /// `Γ′ᵀ − e^{−ad q⃗}` on the whole product algebra.
    pub fn constraint_operator(&self, q: &[f64]) -> RMat {
        self.twist_transpose_matrix() - self.exp_ad_qvec(q, -1.0)
    }

    /// `𝒵(q)` as a matrix from λ-orthonormal coordinates of `𝒬⊥` to those of `𝒦⊥`.
    pub fn z_operator(&self, q: &[f64]) -> Result<RMat> {
        self.require_alcove(q)?;
        Ok(self.z_matrix_unchecked(q))
    }

    fn z_matrix_unchecked(&self, q: &[f64]) -> RMat {
        let l = self.constraint_operator(q);
        let w = self.metric_diagonal();
        let img = &l * &self.q_perp;
        let weighted = RMat::from_fn(img.nrows(), img.ncols(), |i, j| img[(i, j)] * w[i]);
        self.k_perp.tr_mul(&weighted)
    }

    /// Unique preimage in `𝒬⊥` of `η ∈ 𝒦⊥`.
    pub fn z_solve(&self, q: &[f64], eta: &ProductVector) -> Result<ProductVector> {
        self.check(eta)?;
        let z = self.z_operator(q)?;
        let k_part = self.project_k(eta)?.norm_lambda(&self.coupling);
        if k_part > 1e-10 * (1.0 + eta.norm_lambda(&self.coupling)) {
            return Err(Error::ConstraintInfeasible(k_part));
        }
        let c = self.coefficients(&self.k_perp, &eta.data);
        let y = z
            .lu()
            .solve(&c)
            .ok_or_else(|| Error::Numerical("𝒵(q) is singular".into()))?;
        Ok(ProductVector::from_data(
            self.n(),
            self.dim(),
            &self.q_perp * y,
        ))
    }

    /// `J⃗ = p⃗ − 𝒵(q)⁻¹ ξ⃗_{𝒦⊥}`.
    pub fn solve_momentum_constraint(&self, point: &ReducedPoint) -> Result<ProductVector> {
        let w = self.z_solve(&point.q, &point.xi)?;
        Ok(&self.q_vector(&point.p) - &w)
    }

    /// `(Γ′ᵀ − e^{−ad q⃗})J⃗ + ξ⃗`.
    pub fn constraint_residual(
        &self,
        q: &[f64],
        j: &ProductVector,
        xi: &ProductVector,
    ) -> ProductVector {
        let v = &self.constraint_operator(q) * &j.data + &xi.data;
        ProductVector::from_data(self.n(), self.dim(), v)
    }

    pub fn validate_point(&self, point: &ReducedPoint) -> Result<()> {
        self.check(&point.xi)?;
        self.require_alcove(&point.q)?;
        if point.p.len() != self.alg.rank() {
            return Err(Error::DimensionMismatch {
                expected: self.alg.rank(),
                got: point.p.len(),
            });
        }
        self.alcove.check_fixed(&point.p)?;
        let k = self.project_k(&point.xi)?.norm_lambda(&self.coupling);
        if k > 1e-10 {
            return Err(Error::ConstraintInfeasible(k));
        }
        Ok(())
    }

    /// `½⟨p,p⟩ + ½⟨𝒵⁻¹ξ, 𝒵⁻¹ξ⟩_λ`.
    pub fn h_s_operator_form(&self, point: &ReducedPoint) -> Result<f64> {
        self.validate_point(point)?;
        let w = self.z_solve(&point.q, &point.xi)?;
        let pp: f64 = point.p.iter().map(|x| x * x).sum();
        Ok(0.5 * pp + 0.5 * w.inner_lambda(&w, &self.coupling))
    }

    /// `𝒰(q) = (id − e^{−ad q⃗}Γ′)|_{𝒦⊥} : 𝒦⊥ → 𝒬⊥` in λ-orthonormal coordinates.
    pub fn u_operator(&self, q: &[f64]) -> Result<RMat> {
        self.require_alcove(q)?;
        let id = RMat::identity(self.total_dim(), self.total_dim());
        let full = id - self.exp_ad_qvec(q, -1.0) * &self.twist;
        let img = full * &self.k_perp;
        let w = self.metric_diagonal();
        let weighted = RMat::from_fn(img.nrows(), img.ncols(), |i, j| img[(i, j)] * w[i]);
        Ok(self.q_perp.tr_mul(&weighted))
    }

    /// `½⟨p,p⟩ + ½⟨ξ, (𝒰ᵀ𝒰)⁻¹ ξ⟩_λ`.
    pub fn h_s_u_form(&self, point: &ReducedPoint) -> Result<f64> {
        self.validate_point(point)?;
        let u = self.u_operator(&point.q)?;
        let c = self.coefficients(&self.k_perp, &point.xi.data);
        let utu = u.tr_mul(&u);
        let y = utu
            .cholesky()
            .ok_or_else(|| Error::Numerical("𝒰ᵀ𝒰 not positive definite".into()))?
            .solve(&c);
        let pp: f64 = point.p.iter().map(|x| x * x).sum();
        Ok(0.5 * pp + 0.5 * c.dot(&y))
    }

    /// `ℐ(q) = (id − e^{−ad q⃗}Γ′)ᵀ(id − e^{−ad q⃗}Γ′)` on natural coordinates.
    pub fn i_operator_dense(&self, q: &[f64]) -> RMat {
        let id = RMat::identity(self.total_dim(), self.total_dim());
        let a = id - self.exp_ad_qvec(q, -1.0) * &self.twist;
        self.lambda_transpose(&a) * a
    }

    /// Residual torus action `ξ_k ↦ Ad_{e^t} ξ_k` for `t ∈ 𝒯^γ`.
    pub fn act_torus(&self, t: &[f64], x: &ProductVector) -> ProductVector {
        x.map(|c| self.alg.exp_ad_cartan_coords(t, c, 1.0))
    }

    /// ad-spectrum of each component (orbit invariants).
    pub fn orbit_spectra(&self, x: &ProductVector) -> Vec<Vec<f64>> {
        x.components()
            .iter()
            .map(|c| self.alg.ad_spectrum(c))
            .collect()
    }

    /// Builds a product vector from a raw coefficient vector in `𝒦⊥`.
    pub fn from_k_perp_coefficients(&self, c: &RVec) -> ProductVector {
        ProductVector::from_data(self.n(), self.dim(), &self.k_perp * c)
    }

    pub fn zero_vector(&self) -> ProductVector {
        ProductVector::zeros(self.n(), self.dim())
    }

    pub fn product_from_fn(&self, f: impl FnMut(usize) -> AlgebraVector) -> ProductVector {
        let comps: Vec<AlgebraVector> = (0..self.n()).map(f).collect();
        ProductVector::from_components(&comps).expect("shape")
    }

    pub fn vector_from(&self, v: DVector<f64>) -> ProductVector {
        ProductVector::from_data(self.n(), self.dim(), v)
    }
}
