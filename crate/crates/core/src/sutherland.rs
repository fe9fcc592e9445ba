//! Explicit spin Sutherland Hamiltonian for the trivial automorphism.
//!
//! The operator `ℐ(q)` acts on `T⃗_j^I` and `X⃗_φ^I` through the `N × N`
//! matrices `M(ix)`; its inverse on `𝒦⊥` is given entrywise by `𝒫(ix)` and,
//! on the Cartan block, by `𝒫′`. The reduced equations of motion use the
//! analytic `x`-derivative of `𝒫`.

use std::f64::consts::SQRT_2;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::lie::AlgebraVector;
use crate::linalg::{CMat, RMat, RVec};
use crate::ode::{integrate, Stop, Tolerances, Trajectory};
use crate::product::{CouplingVector, ProductSpace, ProductVector, ReducedPoint};

/// Singular-argument guard for `𝒫(ix)`.
pub const P_GUARD: f64 = 1e-8;
/// Guard band used during integration.
pub const FLOW_GUARD: f64 = 1e-6;

fn cis(t: f64) -> Complex64 {
    Complex64::from_polar(1.0, t)
}

/// Distance of `x` to `2πℤ`.
pub fn distance_to_lattice(x: f64) -> f64 {
    let v = x.rem_euclid(2.0 * std::f64::consts::PI);
    v.min(2.0 * std::f64::consts::PI - v)
}

/// `M(ix)`; indices are taken modulo `N`.
pub fn m_matrix(x: f64, c: &CouplingVector) -> CMat {
    let n = c.n();
    let l = |i: usize| c.lambda(i % n);
    let mut m = CMat::zeros(n, n);
    for i in 0..n {
        m[(i, i)] += Complex64::new(l(i) + l(i + 1), 0.0);
        // δ_{I−1,J}
        let jm = (i + n - 1) % n;
        m[(i, jm)] -= cis(-x / l(i)) * l(i);
        // δ_{I+1,J}
        let jp = (i + 1) % n;
        m[(i, jp)] -= cis(x / l(i + 1)) * l(i + 1);
    }
    m
}

/// `𝒫(ix) = M(ix)⁻¹` in closed form.
pub fn p_matrix(x: f64, c: &CouplingVector) -> Result<CMat> {
    if distance_to_lattice(x) < P_GUARD {
        return Err(Error::SingularArgument(x));
    }
    let n = c.n();
    let s = (x / 2.0).sin();
    let cot = (x / 2.0).cos() / s;
    let csc2 = 1.0 / (s * s);
    Ok(CMat::from_fn(n, n, |i, j| {
        let b = c.b_diff(i + 1, j + 1);
        cis(-b * x) * Complex64::new(0.25 * csc2 - b.abs() / 2.0, b / 2.0 * cot)
    }))
}

/// `d𝒫(ix)/dx`, differentiated term by term.
pub fn p_matrix_derivative(x: f64, c: &CouplingVector) -> Result<CMat> {
    if distance_to_lattice(x) < P_GUARD {
        return Err(Error::SingularArgument(x));
    }
    let n = c.n();
    let s = (x / 2.0).sin();
    let cot = (x / 2.0).cos() / s;
    let csc2 = 1.0 / (s * s);
    Ok(CMat::from_fn(n, n, |i, j| {
        let b = c.b_diff(i + 1, j + 1);
        let e = cis(-b * x);
        let inner = Complex64::new(0.25 * csc2 - b.abs() / 2.0, b / 2.0 * cot);
        let d_inner = Complex64::new(-0.25 * csc2 * cot, -b / 4.0 * csc2);
        e * (d_inner + Complex64::new(0.0, -b) * inner)
    }))
}

/// `𝒫′_{IJ} = ((b_{IJ})² − |b_{IJ}|)/2`.
pub fn p_prime(c: &CouplingVector) -> RMat {
    let n = c.n();
    RMat::from_fn(n, n, |i, j| {
        let b = c.b_diff(i + 1, j + 1);
        (b * b - b.abs()) / 2.0
    })
}

/// Orthogonal projector onto `𝒩⊥` for the product `x*Λy`.
pub fn pi_perp(c: &CouplingVector) -> RMat {
    let n = c.n();
    let total: f64 = c.lambdas().iter().sum();
    RMat::from_fn(
        n,
        n,
        |i, j| if i == j { 1.0 } else { 0.0 } - c.lambda(j) / total,
    )
}

/// `π⊥ 𝒫′ Λ π⊥`, the inverse of `Λ⁻¹M(0)` on `𝒩⊥`.
pub fn m0_pseudo_inverse(c: &CouplingVector) -> RMat {
    let pp = pi_perp(c);
    let lam = RMat::from_diagonal(&RVec::from_column_slice(c.lambdas()));
    &pp * p_prime(c) * lam * &pp
}

/// Pairings `c_φ^I = ⟨X⃗_φ^I, ξ⃗⟩_λ` (positive roots) and `t_j^I = ⟨T⃗_j^I, ξ⃗⟩_λ`.
#[derive(Debug, Clone)]
pub struct SpinChargeBlock {
    /// `[root][I]`
    pub c: Vec<Vec<Complex64>>,
    /// `[j][I]`
    pub t: Vec<Vec<f64>>,
}

impl SpinChargeBlock {
    /// `c_{−φ}^I`, which equals `−conj(c_φ^I)` for real `ξ⃗`.
    pub fn c_negative(&self, root: usize, i: usize) -> Complex64 {
        -self.c[root][i].conj()
    }
    /// `Σ_I t_j^I` for each `j`; zero iff `ξ⃗_𝒦 = 0`.
    pub fn cartan_sums(&self) -> Vec<f64> {
        self.t.iter().map(|row| row.iter().sum()).collect()
    }
}

/// The γ = id spin Sutherland system on a product space.
#[derive(Debug, Clone)]
pub struct Sutherland {
    space: ProductSpace,
}

impl Sutherland {
    pub fn new(space: ProductSpace) -> Result<Self> {
        if !space.gamma().is_identity() {
            return Err(Error::Unsupported(
                "the closed form is stated for the trivial automorphism".into(),
            ));
        }
        Ok(Sutherland { space })
    }

    pub fn space(&self) -> &ProductSpace {
        &self.space
    }

    pub fn spin_charges(&self, xi: &ProductVector) -> SpinChargeBlock {
        let alg = self.space.algebra();
        let cp = self.space.coupling();
        let n = cp.n();
        let c = (0..alg.num_positive_roots())
            .map(|b| {
                (0..n)
                    .map(|i| alg.root_pairing(b, false, &xi.component(i)) * cp.lambda(i))
                    .collect()
            })
            .collect();
        let t = (0..alg.rank())
            .map(|j| {
                (0..n)
                    .map(|i| cp.lambda(i) * xi.data[i * alg.dim() + j])
                    .collect()
            })
            .collect();
        SpinChargeBlock { c, t }
    }

    /// `ℐ(q)` applied through its action on the complex basis.
    pub fn i_operator_apply(&self, q: &[f64], x: &ProductVector) -> ProductVector {
        let alg = self.space.algebra();
        let cp = self.space.coupling();
        let n = cp.n();
        let d = alg.dim();
        let mut out = ProductVector::zeros(n, d);
        let m0 = m_matrix(0.0, cp);
        for j in 0..alg.rank() {
            for i in 0..n {
                let v: f64 = (0..n).map(|jj| m0[(i, jj)].re * x.data[jj * d + j]).sum();
                out.data[i * d + j] = v / cp.lambda(i);
            }
        }
        let k = 1.0 / SQRT_2;
        for b in 0..alg.num_positive_roots() {
            let th = alg.root_angle(b, q);
            let mp = m_matrix(th, cp);
            let (iy, iz) = (alg.index_y(b), alg.index_z(b));
            // expansion coefficient of X_φ in each component
            let a: Vec<Complex64> = (0..n)
                .map(|i| Complex64::new(x.data[i * d + iz], x.data[i * d + iy]) * k)
                .collect();
            for i in 0..n {
                let ai: Complex64 =
                    (0..n).map(|jj| mp[(i, jj)] * a[jj]).sum::<Complex64>() / cp.lambda(i);
                // real vector: coefficient of X_{−φ} is −conj(a); back to (Y, Z)
                out.data[i * d + iz] = SQRT_2 * ai.re;
                out.data[i * d + iy] = SQRT_2 * ai.im;
            }
        }
        out
    }

    /// Closed-form `H_S`.
    pub fn h_s_closed_form(&self, q: &[f64], p: &[f64], block: &SpinChargeBlock) -> Result<f64> {
        let alg = self.space.algebra();
        let cp = self.space.coupling();
        let n = cp.n();
        let pp = p_prime(cp);
        let mut h = 0.5 * p.iter().map(|x| x * x).sum::<f64>();
        for tj in &block.t {
            let v = RVec::from_column_slice(tj);
            h += 0.5 * v.dot(&(&pp * &v));
        }
        for b in 0..alg.num_positive_roots() {
            let pm = p_matrix(alg.root_angle(b, q), cp)?;
            let c = &block.c[b];
            let mut s = Complex64::new(0.0, 0.0);
            for i in 0..n {
                for j in 0..n {
                    s += pm[(i, j)] * c[i] * c[j].conj();
                }
            }
            // φ and −φ contribute equally
            h += s.re;
        }
        Ok(h)
    }

    pub fn h_s(&self, point: &ReducedPoint) -> Result<f64> {
        self.space.require_alcove(&point.q)?;
        self.h_s_closed_form(&point.q, &point.p, &self.spin_charges(&point.xi))
    }

    /// `(∂H/∂q, ∂H/∂ξ)` with the ξ-gradient in plain natural coordinates.
    pub fn gradients(&self, q: &[f64], xi: &ProductVector) -> Result<(Vec<f64>, ProductVector)> {
        let alg = self.space.algebra();
        let cp = self.space.coupling();
        let n = cp.n();
        let d = alg.dim();
        let r = alg.rank();
        let block = self.spin_charges(xi);
        let mut dq = vec![0.0; r];
        let mut dxi = ProductVector::zeros(n, d);
        let pp = p_prime(cp);
        for j in 0..r {
            let v = RVec::from_column_slice(&block.t[j]);
            let w = &pp * v;
            for i in 0..n {
                dxi.data[i * d + j] = cp.lambda(i) * w[i];
            }
        }
        for b in 0..alg.num_positive_roots() {
            let th = alg.root_angle(b, q);
            if distance_to_lattice(th) < FLOW_GUARD {
                return Err(Error::SingularArgument(th));
            }
            let pm = p_matrix(th, cp)?;
            let dp = p_matrix_derivative(th, cp)?;
            let c = &block.c[b];
            let mut s = Complex64::new(0.0, 0.0);
            for i in 0..n {
                for j in 0..n {
                    s += dp[(i, j)] * c[i] * c[j].conj();
                }
            }
            for (k, a) in alg.root_covector(b).iter().enumerate() {
                dq[k] += s.re * a;
            }
            let (iy, iz) = (alg.index_y(b), alg.index_z(b));
            for i in 0..n {
                let v: Complex64 = (0..n).map(|j| pm[(i, j)] * c[j].conj()).sum();
                // c_I = λ_I (z − i y)/√2
                dxi.data[i * d + iz] += SQRT_2 * cp.lambda(i) * v.re;
                dxi.data[i * d + iy] += SQRT_2 * cp.lambda(i) * v.im;
            }
        }
        Ok((dq, dxi))
    }

    /// State layout: `[q (r), p (r), ξ⃗ (N·d)]`.
    pub fn pack(&self, point: &ReducedPoint) -> RVec {
        let mut v: Vec<f64> = point.q.clone();
        v.extend_from_slice(&point.p);
        v.extend(point.xi.data.iter());
        RVec::from_vec(v)
    }

    pub fn unpack(&self, y: &RVec) -> ReducedPoint {
        let r = self.space.algebra().rank();
        let q = y.rows(0, r).iter().cloned().collect();
        let p = y.rows(r, r).iter().cloned().collect();
        let xi = self
            .space
            .vector_from(y.rows(2 * r, y.len() - 2 * r).into_owned());
        ReducedPoint { q, p, xi }
    }

    /// `(q̇, ṗ, ξ̇)` with `q̇ = p`, `ṗ = −∂_qH`, `ξ̇_k = [∇H_k/λ_k, ξ_k]`.
    pub fn reduced_vector_field(
        &self,
        point: &ReducedPoint,
    ) -> Result<(Vec<f64>, Vec<f64>, ProductVector)> {
        let alg = self.space.algebra();
        if !self.space.alcove().contains(&point.q)? {
            return Err(Error::OutsideAlcove(format!("q = {:?}", point.q)));
        }
        let (dq, dxi) = self.gradients(&point.q, &point.xi)?;
        let cp = self.space.coupling();
        let comps: Vec<AlgebraVector> = (0..cp.n())
            .map(|k| {
                let g = dxi.component(k) / cp.lambda(k);
                alg.bracket_fast(&g, &point.xi.component(k))
            })
            .collect();
        let xidot = ProductVector::from_components(&comps)?;
        Ok((point.p.clone(), dq.iter().map(|x| -x).collect(), xidot))
    }

    pub fn integrate_reduced(
        &self,
        point: &ReducedPoint,
        grid: &[f64],
        tol: Tolerances,
    ) -> Result<ReducedTrajectory> {
        self.space.validate_point(point)?;
        let f = |_t: f64, y: &RVec| -> Result<RVec> {
            let pt = self.unpack(y);
            let (a, b, c) = self.reduced_vector_field(&pt)?;
            let mut v = a;
            v.extend(b);
            v.extend(c.data.iter());
            Ok(RVec::from_vec(v))
        };
        let tr: Trajectory = integrate(f, &self.pack(point), grid, tol)?;
        let points = tr.states.iter().map(|y| self.unpack(y)).collect();
        Ok(ReducedTrajectory {
            times: tr.times,
            points,
            stop: tr.stop,
        })
    }
}

pub struct ReducedTrajectory {
    pub times: Vec<f64>,
    pub points: Vec<ReducedPoint>,
    pub stop: Stop,
}
