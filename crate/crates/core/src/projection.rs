//! Group-level dynamics on `SU(n)^N`: the unreduced phase space, the free
//! flow, twisted conjugations, the monodromy map, gauge fixing onto the slice
//! and the conserved family `φ_u`.
//!
//! Everything here works with explicit `n×n` matrices. Elements of the product
//! algebra are stored as `N` anti-Hermitian traceless matrices, and the scalar
//! product is `⟨X⃗, Y⃗⟩_λ = −Σ_k λ_k tr(X_k Y_k)`.

use std::sync::Arc;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lie::{DiagramAutomorphism, Family, SimpleLieAlgebra};
use crate::linalg::{c, commutator, expm, frobenius, su_part, trace, trace_product, CMat, I};
use crate::product::{CouplingVector, ProductSpace, ProductVector, ReducedPoint};

/// Smallest admissible distance between two eigenvalues of a monodromy.
pub const EIGEN_GAP: f64 = 1e-8;

/// Group automorphism `γ` of `SU(n)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GroupTwist {
    Identity,
    /// Entrywise complex conjugation (order 2).
    Conjugation,
}

impl GroupTwist {
    /// `γ(g)`; the induced algebra map `γ′` is the same formula.
    pub fn apply(&self, g: &CMat) -> CMat {
        match self {
            GroupTwist::Identity => g.clone(),
            GroupTwist::Conjugation => g.map(|z| z.conj()),
        }
    }
    pub fn apply_inverse(&self, g: &CMat) -> CMat {
        // both choices are involutions
        self.apply(g)
    }
}

/// `(g⃗, J⃗, ξ⃗)` with `g_k ∈ SU(n)` and `J_k, ξ_k ∈ su(n)`.
#[derive(Debug, Clone, PartialEq)]
pub struct UnreducedPoint {
    pub g: Vec<CMat>,
    pub j: Vec<CMat>,
    pub xi: Vec<CMat>,
}

/// Derivatives of a function on the unreduced phase space.
///
/// `dg` is the right-trivialized group derivative, `⟨dg, X⃗⟩_λ = d/dt F(e^{tX⃗} g⃗)`;
/// `dj` and `dxi` are `λ`-gradients in the algebra directions.
#[derive(Debug, Clone)]
pub struct PhaseGradient {
    pub dg: Vec<CMat>,
    pub dj: Vec<CMat>,
    pub dxi: Vec<CMat>,
}

/// `h_m(X⃗) = Σ_k λ_k tr((−iX_k)^m)`, an ad-invariant polynomial of degree `m`
/// on the product algebra. `scale` multiplies the whole function.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PowerTrace {
    pub degree: u32,
    pub scale: f64,
}

impl PowerTrace {
    pub fn new(degree: u32) -> Self {
        PowerTrace { degree, scale: 1.0 }
    }

    /// `½⟨X⃗, X⃗⟩_λ`.
    pub fn quadratic() -> Self {
        PowerTrace {
            degree: 2,
            scale: 0.5,
        }
    }

    fn minus_i_power(&self) -> Complex64 {
        let mut p = c(1.0);
        for _ in 0..self.degree {
            p *= -I;
        }
        p
    }

    pub fn value(&self, coupling: &CouplingVector, x: &[CMat]) -> f64 {
        let f = self.minus_i_power();
        let mut s = 0.0;
        for (k, xk) in x.iter().enumerate() {
            let pw = matrix_power(xk, self.degree);
            s += coupling.lambda(k) * (f * trace(&pw)).re;
        }
        self.scale * s
    }

    /// `λ`-gradient: `∇h_k = −m (−i)^m X_k^{m−1}` projected onto `su(n)`.
    pub fn gradient(&self, x: &[CMat]) -> Vec<CMat> {
        let f = self.minus_i_power() * c(-(self.degree as f64) * self.scale);
        x.iter()
            .map(|xk| su_part(&(matrix_power(xk, self.degree - 1) * f)))
            .collect()
    }
}

fn matrix_power(x: &CMat, m: u32) -> CMat {
    let n = x.nrows();
    let mut p = CMat::identity(n, n);
    for _ in 0..m {
        p = &p * x;
    }
    p
}

/// Values of `h ∘ φ_u` for every pair of generator and parameter.
#[derive(Debug, Clone, Serialize)]
pub struct ConservedFamily {
    pub u: Vec<f64>,
    pub generators: Vec<PowerTrace>,
}

impl ConservedFamily {
    /// Power traces of degree `2..=n`, evaluated at the given parameters.
    pub fn standard(n: usize, u: Vec<f64>) -> Result<Self> {
        if u.iter().any(|&x| x == 0.0 || !x.is_finite()) {
            return Err(Error::InvalidInput(
                "spectral parameters must be finite and nonzero".into(),
            ));
        }
        let generators = (2..=n as u32).map(PowerTrace::new).collect();
        Ok(ConservedFamily { u, generators })
    }

    /// Row-major `[generator][u]` values.
    pub fn evaluate(&self, sys: &GroupSystem, point: &UnreducedPoint) -> Result<Vec<f64>> {
        let mut out = Vec::with_capacity(self.u.len() * self.generators.len());
        for h in &self.generators {
            for &u in &self.u {
                let phi = sys.phi_u_matrices(point, u)?;
                out.push(h.value(sys.coupling(), &phi));
            }
        }
        Ok(out)
    }
}

/// The unreduced system for `G = SU(n)` with `N` factors.
pub struct GroupSystem {
    space: ProductSpace,
    twist: GroupTwist,
}

impl GroupSystem {
    pub fn new(
        alg: Arc<SimpleLieAlgebra>,
        coupling: CouplingVector,
        twist: GroupTwist,
    ) -> Result<Self> {
        if alg.family() != Family::A {
            return Err(Error::UnsupportedAlgebra {
                family: alg.family().to_string(),
                rank: alg.rank(),
                reason: "group-level dynamics is implemented for SU(n) only".into(),
            });
        }
        let gamma = Arc::new(DiagramAutomorphism::identity(&alg));
        let space = ProductSpace::new(alg, gamma, coupling)?;
        Ok(GroupSystem { space, twist })
    }

    pub fn su(n: usize, coupling: CouplingVector, twist: GroupTwist) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidInput("SU(n) needs n ≥ 2".into()));
        }
        Self::new(
            Arc::new(SimpleLieAlgebra::build(Family::A, n - 1)?),
            coupling,
            twist,
        )
    }

    /// Slice bookkeeping (always with the untwisted product structure).
    pub fn space(&self) -> &ProductSpace {
        &self.space
    }
    pub fn algebra(&self) -> &SimpleLieAlgebra {
        self.space.algebra()
    }
    pub fn coupling(&self) -> &CouplingVector {
        self.space.coupling()
    }
    pub fn twist(&self) -> GroupTwist {
        self.twist
    }
    pub fn n_factors(&self) -> usize {
        self.space.n()
    }
    pub fn matrix_size(&self) -> usize {
        self.algebra().matrix_size()
    }

    // ---- conversions ----

    pub fn to_matrices(&self, x: &ProductVector) -> Vec<CMat> {
        x.components()
            .iter()
            .map(|v| self.algebra().to_matrix(v))
            .collect()
    }

    pub fn from_matrices(&self, x: &[CMat]) -> ProductVector {
        let comps: Vec<_> = x.iter().map(|m| self.algebra().from_matrix(m)).collect();
        ProductVector::from_components(&comps).expect("shape")
    }

    /// `⟨X⃗, Y⃗⟩_λ` on matrices.
    pub fn inner(&self, x: &[CMat], y: &[CMat]) -> f64 {
        x.iter()
            .zip(y)
            .enumerate()
            .map(|(k, (a, b))| -self.coupling().lambda(k) * trace_product(a, b).re)
            .sum()
    }

    pub fn check(&self, point: &UnreducedPoint) -> Result<()> {
        let (nf, n) = (self.n_factors(), self.matrix_size());
        for v in [&point.g, &point.j, &point.xi] {
            if v.len() != nf {
                return Err(Error::DimensionMismatch {
                    expected: nf,
                    got: v.len(),
                });
            }
            if let Some(m) = v.iter().find(|m| m.nrows() != n || m.ncols() != n) {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: m.nrows().max(m.ncols()),
                });
            }
        }
        Ok(())
    }

    /// Checks unitarity, unit determinant and that `J_k, ξ_k ∈ su(n)`.
    pub fn validate(&self, point: &UnreducedPoint, tol: f64) -> Result<()> {
        self.check(point)?;
        for g in &point.g {
            let d = crate::linalg::unitarity_defect(g);
            let det = (g.determinant() - c(1.0)).norm();
            if d > tol || det > tol {
                return Err(Error::InvalidInput(format!(
                    "group component not in SU(n): unitarity {d:.3e}, det {det:.3e}"
                )));
            }
        }
        for m in point.j.iter().chain(&point.xi) {
            let defect = frobenius(&(m - su_part(m)));
            if defect > tol * (1.0 + frobenius(m)) {
                return Err(Error::InvalidInput(format!(
                    "algebra component not in su(n): {defect:.3e}"
                )));
            }
        }
        Ok(())
    }

    // ---- group operations ----

    /// `M(g⃗) = g_1 g_2 ⋯ g_N`.
    pub fn monodromy(&self, g: &[CMat]) -> CMat {
        let n = self.matrix_size();
        g.iter().fold(CMat::identity(n, n), |acc, x| acc * x)
    }

    /// `Γ(η⃗) = γ(η_N) ⊕ η_1 ⊕ ⋯ ⊕ η_{N−1}`.
    pub fn gamma_shift(&self, eta: &[CMat]) -> Vec<CMat> {
        let nf = eta.len();
        (0..nf)
            .map(|k| {
                if k == 0 {
                    self.twist.apply(&eta[nf - 1])
                } else {
                    eta[k - 1].clone()
                }
            })
            .collect()
    }

    /// `C^Γ_η⃗(g⃗) = Γ(η⃗) g⃗ η⃗⁻¹`.
    pub fn twisted_conjugate(&self, eta: &[CMat], g: &[CMat]) -> Vec<CMat> {
        let ge = self.gamma_shift(eta);
        (0..g.len())
            .map(|k| &ge[k] * &g[k] * eta[k].adjoint())
            .collect()
    }

    /// `γ`-twisted conjugation on a single factor: `γ(η) m η⁻¹`.
    pub fn twisted_conjugate_single(&self, eta: &CMat, m: &CMat) -> CMat {
        self.twist.apply(eta) * m * eta.adjoint()
    }

    /// Lift of the twisted conjugation to the phase space:
    /// `(C^Γ_η⃗(g⃗), Ad_{Γ(η⃗)} J⃗, Ad_η⃗ ξ⃗)`.
    pub fn act(&self, eta: &[CMat], point: &UnreducedPoint) -> UnreducedPoint {
        let ge = self.gamma_shift(eta);
        UnreducedPoint {
            g: self.twisted_conjugate(eta, &point.g),
            j: (0..ge.len())
                .map(|k| &ge[k] * &point.j[k] * ge[k].adjoint())
                .collect(),
            xi: (0..eta.len())
                .map(|k| &eta[k] * &point.xi[k] * eta[k].adjoint())
                .collect(),
        }
    }

    /// `Γ′ᵀ(X⃗)_k = (λ_{k+1}/λ_k) X_{k+1}`, last component `(λ_1/λ_N) γ′⁻¹(X_1)`.
    pub fn twist_transpose(&self, x: &[CMat]) -> Vec<CMat> {
        let nf = x.len();
        let l = self.coupling();
        (0..nf)
            .map(|k| {
                if k + 1 < nf {
                    &x[k + 1] * c(l.lambda(k + 1) / l.lambda(k))
                } else {
                    self.twist.apply_inverse(&x[0]) * c(l.lambda(0) / l.lambda(k))
                }
            })
            .collect()
    }

    /// `Ψ = Γ′ᵀ(J⃗) − Ad_{g⃗⁻¹}(J⃗) + ξ⃗` as matrices.
    pub fn momentum_map_matrices(&self, point: &UnreducedPoint) -> Vec<CMat> {
        let t = self.twist_transpose(&point.j);
        (0..point.g.len())
            .map(|k| &t[k] - point.g[k].adjoint() * &point.j[k] * &point.g[k] + &point.xi[k])
            .collect()
    }

    pub fn momentum_map(&self, point: &UnreducedPoint) -> ProductVector {
        self.from_matrices(&self.momentum_map_matrices(point))
    }

    /// `H = ½⟨J⃗, J⃗⟩_λ`.
    pub fn hamiltonian(&self, point: &UnreducedPoint) -> f64 {
        0.5 * self.inner(&point.j, &point.j)
    }

    /// `(e^{tJ⃗} g⃗, J⃗, ξ⃗)`.
    pub fn free_flow(&self, t: f64, point: &UnreducedPoint) -> UnreducedPoint {
        UnreducedPoint {
            g: point
                .g
                .iter()
                .zip(&point.j)
                .map(|(g, j)| expm(&(j * c(t))) * g)
                .collect(),
            j: point.j.clone(),
            xi: point.xi.clone(),
        }
    }

    // ---- alcove and gauge ----

    /// `e^{q⃗}` with `q⃗_k = q/λ_k`.
    pub fn slice_element(&self, q: &[f64]) -> Vec<CMat> {
        let alg = self.algebra();
        let qm = alg.to_matrix(&alg.cartan_element(q));
        (0..self.n_factors())
            .map(|k| diagonal_exp(&qm, 1.0 / self.coupling().lambda(k)))
            .collect()
    }

    /// Conjugates a generic `m ∈ SU(n)` to `e^q` with `q` in the open alcove:
    /// returns `(q, w)` with `w m w⁻¹ = e^q` and `det w = 1`.
    ///
    /// Eigenphases are taken in `(0, 2π)` and sorted decreasingly; `2π` is then
    /// subtracted from the largest ones until they sum to zero.
    pub fn alcove_project(&self, m: &CMat) -> Result<(Vec<f64>, CMat)> {
        if self.twist != GroupTwist::Identity {
            return Err(Error::Unsupported(
                "alcove projection with a nontrivial twist".into(),
            ));
        }
        let n = self.matrix_size();
        if m.nrows() != n || m.ncols() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: m.nrows(),
            });
        }
        let (vecs, vals) = unitary_eigen(m)?;
        for a in 0..n {
            for b in a + 1..n {
                let gap = (vals[a] - vals[b]).norm();
                if gap < EIGEN_GAP {
                    return Err(Error::NonGeneric(format!(
                        "monodromy eigenvalue gap {gap:.3e}"
                    )));
                }
            }
        }
        let tau = 2.0 * std::f64::consts::PI;
        let mut phases: Vec<(f64, usize)> = vals
            .iter()
            .enumerate()
            .map(|(i, z)| {
                let a = z.arg();
                (if a <= 0.0 { a + tau } else { a }, i)
            })
            .collect();
        phases.sort_by(|x, y| y.0.partial_cmp(&x.0).unwrap());
        let total: f64 = phases.iter().map(|p| p.0).sum();
        let shift = (total / tau).round() as usize;
        for p in phases.iter_mut().take(shift) {
            p.0 -= tau;
        }
        phases.sort_by(|x, y| y.0.partial_cmp(&x.0).unwrap());
        // rows of w are the conjugated eigenvectors in the chosen order
        let mut w = CMat::from_fn(n, n, |r, col| vecs[(col, phases[r].1)].conj());
        let det = w.determinant();
        w *= Complex64::from_polar(1.0, -det.arg() / n as f64);
        let diag = CMat::from_diagonal(&nalgebra::DVector::from_iterator(
            n,
            phases.iter().map(|p| I * c(p.0)),
        ));
        let q: Vec<f64> = self
            .algebra()
            .cartan_part(&self.algebra().from_matrix(&diag))?;
        if !self.space.alcove().contains(&q)? {
            return Err(Error::Numerical("eigenphase lift left the alcove".into()));
        }
        Ok((q, w))
    }

    /// Solves `g⃗′ = C^Γ_η⃗(g⃗)` for `η_1, …, η_{N−1}` given `η_N`:
    /// `η_{k−1} = g′_k η_k g_k⁻¹`. The first component then holds whenever
    /// `M(g⃗′) = γ(η_N) M(g⃗) η_N⁻¹`.
    pub fn reconstruct_gauge(&self, g: &[CMat], g_prime: &[CMat], eta_n: &CMat) -> Vec<CMat> {
        let nf = g.len();
        let mut eta = vec![eta_n.clone(); nf];
        for k in (1..nf).rev() {
            eta[k - 1] = &g_prime[k] * &eta[k] * g[k].adjoint();
        }
        eta
    }

    /// Largest component defect of `g⃗′ − C^Γ_η⃗(g⃗)`.
    pub fn conjugation_residual(&self, eta: &[CMat], g: &[CMat], g_prime: &[CMat]) -> f64 {
        self.twisted_conjugate(eta, g)
            .iter()
            .zip(g_prime)
            .map(|(a, b)| frobenius(&(a - b)))
            .fold(0.0, f64::max)
    }

    /// Gauge transformation bringing `point` onto the slice `g⃗ = e^{q⃗}`,
    /// together with `q`.
    pub fn slice_gauge(&self, point: &UnreducedPoint) -> Result<(Vec<f64>, Vec<CMat>)> {
        let (q, w) = self.alcove_project(&self.monodromy(&point.g))?;
        let target = self.slice_element(&q);
        Ok((q.clone(), self.reconstruct_gauge(&point.g, &target, &w)))
    }

    /// Reduces a point with `Ψ = 0` to slice data `(q, p, ξ⃗)`.
    pub fn reduce_point(&self, point: &UnreducedPoint) -> Result<ReducedPoint> {
        self.check(point)?;
        let psi = self.momentum_map(point).norm_lambda(self.coupling());
        if psi > 1e-8 {
            return Err(Error::ConstraintInfeasible(psi));
        }
        let (q, eta) = self.slice_gauge(point)?;
        let moved = self.act(&eta, point);
        let j = self.from_matrices(&moved.j);
        let xi = self.from_matrices(&moved.xi);
        let k_part = self.space.project_k(&xi)?.norm_lambda(self.coupling());
        if k_part > 1e-8 {
            return Err(Error::ConstraintInfeasible(k_part));
        }
        Ok(ReducedPoint {
            p: self.space.q_coefficient(&j),
            q,
            xi,
        })
    }

    /// Point on the slice: `g⃗ = e^{q⃗}`, `J⃗ = p⃗ − 𝒵(q)⁻¹ξ⃗_{𝒦⊥}`.
    pub fn lift_reduced(&self, point: &ReducedPoint) -> Result<UnreducedPoint> {
        let j = self.space.solve_momentum_constraint(point)?;
        Ok(UnreducedPoint {
            g: self.slice_element(&point.q),
            j: self.to_matrices(&j),
            xi: self.to_matrices(&point.xi),
        })
    }

    // ---- conserved family ----

    pub fn phi_u_matrices(&self, point: &UnreducedPoint, u: f64) -> Result<Vec<CMat>> {
        if u == 0.0 || !u.is_finite() {
            return Err(Error::InvalidInput("u must be finite and nonzero".into()));
        }
        Ok((0..point.g.len())
            .map(|k| {
                -(point.g[k].adjoint() * &point.j[k] * &point.g[k]) + &point.xi[k] * c(1.0 / u)
            })
            .collect())
    }

    /// `φ_u = −g⃗⁻¹J⃗g⃗ + ξ⃗/u`.
    pub fn phi_u(&self, point: &UnreducedPoint, u: f64) -> Result<ProductVector> {
        Ok(self.from_matrices(&self.phi_u_matrices(point, u)?))
    }

    /// Derivatives of `F = h ∘ φ_u` given `∇h` at `φ_u(point)`:
    /// `∇_J F = −Ad_g⃗ ∇h`, `∇_ξ F = ∇h/u`, `D_g F = [J⃗, Ad_g⃗ ∇h]`.
    pub fn pullback_gradient(&self, point: &UnreducedPoint, dh: &[CMat], u: f64) -> PhaseGradient {
        let ad: Vec<CMat> = (0..dh.len())
            .map(|k| &point.g[k] * &dh[k] * point.g[k].adjoint())
            .collect();
        PhaseGradient {
            dg: (0..dh.len())
                .map(|k| commutator(&point.j[k], &ad[k]))
                .collect(),
            dj: ad.iter().map(|a| -a).collect(),
            dxi: dh.iter().map(|d| d * c(1.0 / u)).collect(),
        }
    }

    pub fn phi_gradient(
        &self,
        point: &UnreducedPoint,
        h: &PowerTrace,
        u: f64,
    ) -> Result<PhaseGradient> {
        let phi = self.phi_u_matrices(point, u)?;
        Ok(self.pullback_gradient(point, &h.gradient(&phi), u))
    }

    /// Gradient of the linear function `⟨J⃗, X⃗⟩_λ`.
    pub fn linear_j_gradient(&self, x: &[CMat]) -> PhaseGradient {
        let z: Vec<CMat> = x.iter().map(|m| m * c(0.0)).collect();
        PhaseGradient {
            dg: z.clone(),
            dj: x.to_vec(),
            dxi: z,
        }
    }

    /// `{F, G} = ⟨D_gF, ∇_J G⟩ − ⟨D_gG, ∇_J F⟩ + ⟨J⃗, [∇_J F, ∇_J G]⟩ + ⟨ξ⃗, [∇_ξF, ∇_ξG]⟩`.
    pub fn poisson_bracket(
        &self,
        point: &UnreducedPoint,
        f: &PhaseGradient,
        g: &PhaseGradient,
    ) -> f64 {
        let cj: Vec<CMat> =
            f.dj.iter()
                .zip(&g.dj)
                .map(|(a, b)| commutator(a, b))
                .collect();
        let cx: Vec<CMat> = f
            .dxi
            .iter()
            .zip(&g.dxi)
            .map(|(a, b)| commutator(a, b))
            .collect();
        self.inner(&f.dg, &g.dj) - self.inner(&g.dg, &f.dj)
            + self.inner(&point.j, &cj)
            + self.inner(&point.xi, &cx)
    }

    /// `{h₁∘φ_u, h₂∘φ_v}`, which vanishes identically.
    pub fn involution_check(
        &self,
        h1: &PowerTrace,
        u: f64,
        h2: &PowerTrace,
        v: f64,
        point: &UnreducedPoint,
    ) -> Result<f64> {
        if u == v {
            return Err(Error::InvalidInput("u and v must differ".into()));
        }
        let a = self.phi_gradient(point, h1, u)?;
        let b = self.phi_gradient(point, h2, v)?;
        Ok(self.poisson_bracket(point, &a, &b))
    }

    /// Residual of the bracket identity for the components of `φ_u`, `φ_v`
    /// along `X⃗`, `Y⃗`:
    /// `{⟨φ_u,X⃗⟩, ⟨φ_v,Y⃗⟩} − ⟨(u−1)/(u−v) φ_u + (v−1)/(v−u) φ_v, [X⃗,Y⃗]⟩`.
    pub fn component_bracket_residual(
        &self,
        point: &UnreducedPoint,
        u: f64,
        v: f64,
        x: &[CMat],
        y: &[CMat],
    ) -> Result<f64> {
        if u == v {
            return Err(Error::InvalidInput("u and v must differ".into()));
        }
        let a = self.pullback_gradient(point, x, u);
        let b = self.pullback_gradient(point, y, v);
        let lhs = self.poisson_bracket(point, &a, &b);
        let pu = self.phi_u_matrices(point, u)?;
        let pv = self.phi_u_matrices(point, v)?;
        let xy: Vec<CMat> = x.iter().zip(y).map(|(a, b)| commutator(a, b)).collect();
        let rhs =
            (u - 1.0) / (u - v) * self.inner(&pu, &xy) + (v - 1.0) / (v - u) * self.inner(&pv, &xy);
        Ok(lhs - rhs)
    }

    /// Central-difference derivative of `f` along
    /// `(g⃗, J⃗, ξ⃗) ↦ (e^{sX⃗}g⃗, J⃗ + sY⃗, ξ⃗ + sZ⃗)`, and the analytic value
    /// `⟨D_g, X⃗⟩ + ⟨∇_J, Y⃗⟩ + ⟨∇_ξ, Z⃗⟩` predicted by `grad`.
    #[allow(clippy::too_many_arguments)]
    pub fn directional_check(
        &self,
        point: &UnreducedPoint,
        f: impl Fn(&UnreducedPoint) -> f64,
        grad: &PhaseGradient,
        x: &[CMat],
        y: &[CMat],
        z: &[CMat],
        step: f64,
    ) -> (f64, f64) {
        let shifted = |s: f64| UnreducedPoint {
            g: point
                .g
                .iter()
                .zip(x)
                .map(|(g, a)| expm(&(a * c(s))) * g)
                .collect(),
            j: point.j.iter().zip(y).map(|(j, b)| j + b * c(s)).collect(),
            xi: point.xi.iter().zip(z).map(|(e, d)| e + d * c(s)).collect(),
        };
        let numeric = (f(&shifted(step)) - f(&shifted(-step))) / (2.0 * step);
        let analytic = self.inner(&grad.dg, x) + self.inner(&grad.dj, y) + self.inner(&grad.dxi, z);
        (analytic, numeric)
    }
}

/// `exp(s·D)` for a diagonal `D`.
fn diagonal_exp(d: &CMat, s: f64) -> CMat {
    let n = d.nrows();
    CMat::from_fn(n, n, |i, j| {
        if i == j {
            (d[(i, i)] * c(s)).exp()
        } else {
            c(0.0)
        }
    })
}

/// Eigenvectors (columns) and eigenvalues of a unitary matrix, via the complex
/// Schur form (diagonal for normal matrices).
fn unitary_eigen(m: &CMat) -> Result<(CMat, Vec<Complex64>)> {
    let schur = m
        .clone()
        .try_schur(1e-15, 10_000)
        .ok_or_else(|| Error::Numerical("Schur decomposition did not converge".into()))?;
    let (q, t) = schur.unpack();
    let n = m.nrows();
    let vals = (0..n).map(|i| t[(i, i)]).collect();
    Ok((q, vals))
}
