//! Quasi-periodic gauge fields on the cylinder with point charges, and their
//! correspondence with the finite-dimensional slice.
//!
//! On the gauge slice `A ≡ χ` the electric field is determined by its right
//! limits `E_k⁺` at the marks, `E(x) = e^{−(x−x_k) ad_χ} E_k⁺` on `(x_k, x_{k+1})`,
//! so a field configuration is a finite list of algebra elements.
//! The Wilson line `y′ = y A` is integrated with a fourth-order
//! commutator-free exponential scheme.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lie::{AlgebraVector, DiagramAutomorphism, SimpleLieAlgebra};
use crate::linalg::{c, expm, frobenius, unitarity_defect, CMat};
use crate::product::{CouplingVector, ProductSpace, ProductVector, ReducedPoint};
use crate::projection::{GroupSystem, GroupTwist};

pub const FIELD_SCHEMA_VERSION: u32 = 1;

/// Slice data of a field configuration. `plus_limits[k−1] = E_k⁺`, `k = 1..N`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FieldConfig {
    pub schema_version: u32,
    pub marks: Vec<f64>,
    pub charges: Vec<Vec<f64>>,
    pub chi: Vec<f64>,
    pub plus_limits: Vec<Vec<f64>>,
}

/// The finite-dimensional image of a field configuration.
#[derive(Debug, Clone)]
pub struct SliceData {
    pub coupling: CouplingVector,
    pub point: ReducedPoint,
    pub j: ProductVector,
}

/// Couplings read off from the marks: `1/λ_k = x_k − x_{k−1}`, `x_0 = x_N − 1`.
pub fn coupling_from_marks(marks: &[f64]) -> Result<CouplingVector> {
    let n = marks.len();
    if n == 0 {
        return Err(Error::InvalidInput("at least one mark is required".into()));
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
    CouplingVector::new(lambdas)
}

/// Field theory on the slice for a fixed algebra and twist `τ = γ⁻¹`.
pub struct YmBridge {
    alg: Arc<SimpleLieAlgebra>,
    gamma: Arc<DiagramAutomorphism>,
}

impl YmBridge {
    pub fn new(alg: Arc<SimpleLieAlgebra>, gamma: Arc<DiagramAutomorphism>) -> Self {
        YmBridge { alg, gamma }
    }

    pub fn algebra(&self) -> &SimpleLieAlgebra {
        &self.alg
    }

    /// `τ′ = γ′⁻¹`.
    pub fn tau(&self, x: &AlgebraVector) -> AlgebraVector {
        self.gamma.apply_inverse(x)
    }

    pub fn space_for(&self, marks: &[f64]) -> Result<ProductSpace> {
        ProductSpace::new(
            self.alg.clone(),
            self.gamma.clone(),
            coupling_from_marks(marks)?,
        )
    }

    fn vec(&self, v: &[f64]) -> Result<AlgebraVector> {
        let x = AlgebraVector::from_column_slice(v);
        self.alg.check_dim(&x)?;
        Ok(x)
    }

    fn check_config(&self, cfg: &FieldConfig) -> Result<()> {
        let n = cfg.marks.len();
        if cfg.charges.len() != n || cfg.plus_limits.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: cfg.charges.len().min(cfg.plus_limits.len()),
            });
        }
        if cfg.chi.len() != self.alg.rank() {
            return Err(Error::DimensionMismatch {
                expected: self.alg.rank(),
                got: cfg.chi.len(),
            });
        }
        coupling_from_marks(&cfg.marks)?;
        Ok(())
    }

    /// Solves the jump conditions on the slice `A ≡ χ` for given charges
    /// and momentum `p ∈ 𝒯^γ` through the finite-dimensional constraint.
    pub fn solve_slice(
        &self,
        chi: &[f64],
        marks: &[f64],
        charges: &[Vec<f64>],
        p: &[f64],
    ) -> Result<FieldConfig> {
        let space = self.space_for(marks)?;
        let coupling = space.coupling().clone();
        if charges.len() != marks.len() {
            return Err(Error::DimensionMismatch {
                expected: marks.len(),
                got: charges.len(),
            });
        }
        let comps = charges
            .iter()
            .enumerate()
            .map(|(k, z)| Ok(self.vec(z)? / coupling.lambda(k)))
            .collect::<Result<Vec<_>>>()?;
        let point = ReducedPoint {
            q: chi.to_vec(),
            p: p.to_vec(),
            xi: ProductVector::from_components(&comps)?,
        };
        space.validate_point(&point)?;
        let j = space.solve_momentum_constraint(&point)?;
        let n = marks.len();
        // E_{k−1}⁺ = λ_k J_k; E_N⁺ = τ′(E_0⁺)
        let e_prev: Vec<AlgebraVector> = (0..n)
            .map(|k| j.component(k) * coupling.lambda(k))
            .collect();
        let plus: Vec<Vec<f64>> = (0..n)
            .map(|k| {
                let e = if k + 1 < n {
                    e_prev[k + 1].clone()
                } else {
                    self.tau(&e_prev[0])
                };
                e.iter().cloned().collect()
            })
            .collect();
        Ok(FieldConfig {
            schema_version: FIELD_SCHEMA_VERSION,
            marks: marks.to_vec(),
            charges: charges.to_vec(),
            chi: chi.to_vec(),
            plus_limits: plus,
        })
    }

    /// `E_{k}⁺` for `k = 0..N−1`, with `E_0⁺ = τ′⁻¹(E_N⁺)`.
    fn previous_limits(&self, cfg: &FieldConfig) -> Result<Vec<AlgebraVector>> {
        let n = cfg.marks.len();
        (0..n)
            .map(|k| {
                if k == 0 {
                    Ok(self.gamma.apply(&self.vec(&cfg.plus_limits[n - 1])?))
                } else {
                    self.vec(&cfg.plus_limits[k - 1])
                }
            })
            .collect()
    }

    /// Maps a configuration to `(λ⃗, (q, p, ξ⃗), J⃗)`.
    pub fn correspondence(&self, cfg: &FieldConfig) -> Result<SliceData> {
        self.check_config(cfg)?;
        let space = self.space_for(&cfg.marks)?;
        let coupling = space.coupling().clone();
        let prev = self.previous_limits(cfg)?;
        let j_comps: Vec<AlgebraVector> = prev
            .iter()
            .enumerate()
            .map(|(k, e)| e / coupling.lambda(k))
            .collect();
        let xi_comps = cfg
            .charges
            .iter()
            .enumerate()
            .map(|(k, z)| Ok(self.vec(z)? / coupling.lambda(k)))
            .collect::<Result<Vec<_>>>()?;
        let j = ProductVector::from_components(&j_comps)?;
        let p = space.q_coefficient(&j);
        Ok(SliceData {
            point: ReducedPoint {
                q: cfg.chi.clone(),
                p,
                xi: ProductVector::from_components(&xi_comps)?,
            },
            coupling,
            j,
        })
    }

    /// `E_k⁻ = e^{−(x_k − x_{k−1}) ad_χ} E_{k−1}⁺`.
    pub fn minus_limits(&self, cfg: &FieldConfig) -> Result<Vec<AlgebraVector>> {
        let prev = self.previous_limits(cfg)?;
        let n = cfg.marks.len();
        Ok((0..n)
            .map(|k| {
                let len = interval_length(&cfg.marks, k);
                self.alg.exp_ad_cartan_coords(&cfg.chi, &prev[k], -len)
            })
            .collect())
    }

    /// Largest `‖ζ_k + E_k⁺ − E_k⁻‖`.
    pub fn jump_residual(&self, cfg: &FieldConfig) -> Result<f64> {
        self.check_config(cfg)?;
        let minus = self.minus_limits(cfg)?;
        let mut worst: f64 = 0.0;
        for k in 0..cfg.marks.len() {
            let r = self.vec(&cfg.charges[k])? + self.vec(&cfg.plus_limits[k])? - &minus[k];
            worst = worst.max(r.norm());
        }
        Ok(worst)
    }

    /// Largest residual of `ξ_k + (λ_{k+1}/λ_k) J_{k+1} − e^{−ad_{q/λ_k}} J_k`,
    /// `J_{N+1} = τ′(J_1)`.
    pub fn componentwise_residual(&self, data: &SliceData) -> f64 {
        let n = data.coupling.n();
        let l = &data.coupling;
        let mut worst: f64 = 0.0;
        for k in 0..n {
            let next = if k + 1 < n {
                data.j.component(k + 1)
            } else {
                self.tau(&data.j.component(0))
            };
            let lnext = l.lambda((k + 1) % n);
            let r = data.point.xi.component(k) + next * (lnext / l.lambda(k))
                - self.alg.exp_ad_cartan_coords(
                    &data.point.q,
                    &data.j.component(k),
                    -1.0 / l.lambda(k),
                );
            worst = worst.max(r.norm());
        }
        worst
    }

    /// `E(x)` on the slice, for any real `x` (quasi-periodic extension).
    pub fn electric_field(&self, cfg: &FieldConfig, x: f64) -> Result<AlgebraVector> {
        self.check_config(cfg)?;
        let shift = x.floor();
        let local = x - shift;
        let n = cfg.marks.len();
        // interval (x_k, x_{k+1}) containing `local`, with E_0⁺ on (x_N − 1, x_1)
        let (base, mark) = match cfg.marks.iter().rposition(|&m| m <= local) {
            Some(k) => (self.vec(&cfg.plus_limits[k])?, cfg.marks[k]),
            None => (
                self.gamma.apply(&self.vec(&cfg.plus_limits[n - 1])?),
                cfg.marks[n - 1] - 1.0,
            ),
        };
        let mut e = self
            .alg
            .exp_ad_cartan_coords(&cfg.chi, &base, -(local - mark));
        let periods = shift as i64;
        for _ in 0..periods.max(0) {
            e = self.tau(&e);
        }
        for _ in 0..(-periods).max(0) {
            e = self.gamma.apply(&e);
        }
        Ok(e)
    }

    /// `∫₀¹ ⟨E, E⟩ dx = Σ_k (x_k − x_{k−1}) ⟨E_{k−1}⁺, E_{k−1}⁺⟩`.
    pub fn field_energy(&self, cfg: &FieldConfig) -> Result<f64> {
        self.check_config(cfg)?;
        let prev = self.previous_limits(cfg)?;
        Ok(prev
            .iter()
            .enumerate()
            .map(|(k, e)| interval_length(&cfg.marks, k) * e.norm_squared())
            .sum())
    }

    /// `|Σ_k (x_k − x_{k−1}) (E_{k−1}⁺)_{𝒯^γ} − p|`, with `p` read from the
    /// `𝒬`-projection of the corresponding `J⃗`.
    pub fn theta_pairing_check(&self, cfg: &FieldConfig) -> Result<f64> {
        let data = self.correspondence(cfg)?;
        let space = self.space_for(&cfg.marks)?;
        let fixed = space.alcove().fixed_basis();
        let prev = self.previous_limits(cfg)?;
        let r = self.alg.rank();
        let mut sum = nalgebra::DVector::<f64>::zeros(r);
        for (k, e) in prev.iter().enumerate() {
            sum += e.rows(0, r) * interval_length(&cfg.marks, k);
        }
        let proj = fixed * (fixed.transpose() * sum);
        let p = nalgebra::DVector::from_column_slice(&data.point.p);
        Ok((proj - p).norm())
    }
}

fn interval_length(marks: &[f64], k: usize) -> f64 {
    let n = marks.len();
    if k == 0 {
        marks[0] - (marks[n - 1] - 1.0)
    } else {
        marks[k] - marks[k - 1]
    }
}

// ---- Wilson lines ----

type Piece = Arc<dyn Fn(f64) -> CMat + Send + Sync>;

/// A piecewise-smooth `su(n)`-valued connection on `[0, 1]`, extended to the
/// line by `A(x + 1) = τ′(A(x))`. Each piece is evaluated only in the interior
/// of its interval, so jumps at the breaks are allowed.
#[derive(Clone)]
pub struct ConnectionSample {
    breaks: Vec<f64>,
    pieces: Vec<Piece>,
    twist: GroupTwist,
}

impl ConnectionSample {
    /// `breaks` are the interior break points in `(0, 1)`; there is one piece
    /// per resulting interval.
    pub fn new(breaks: Vec<f64>, pieces: Vec<Piece>, twist: GroupTwist) -> Result<Self> {
        let mut all = vec![0.0];
        all.extend(breaks);
        all.push(1.0);
        if all.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidInput(
                "connection breaks must increase inside (0, 1)".into(),
            ));
        }
        if pieces.len() != all.len() - 1 {
            return Err(Error::DimensionMismatch {
                expected: all.len() - 1,
                got: pieces.len(),
            });
        }
        Ok(ConnectionSample {
            breaks: all,
            pieces,
            twist,
        })
    }

    pub fn constant(a: CMat, twist: GroupTwist) -> Self {
        ConnectionSample {
            breaks: vec![0.0, 1.0],
            pieces: vec![Arc::new(move |_| a.clone())],
            twist,
        }
    }

    /// Constant value on each interval between the breaks.
    pub fn piecewise_constant(
        breaks: Vec<f64>,
        values: Vec<CMat>,
        twist: GroupTwist,
    ) -> Result<Self> {
        let pieces = values
            .into_iter()
            .map(|v| Arc::new(move |_: f64| v.clone()) as Piece)
            .collect();
        Self::new(breaks, pieces, twist)
    }

    pub fn from_fn(f: impl Fn(f64) -> CMat + Send + Sync + 'static, twist: GroupTwist) -> Self {
        ConnectionSample {
            breaks: vec![0.0, 1.0],
            pieces: vec![Arc::new(f)],
            twist,
        }
    }

    pub fn twist(&self) -> GroupTwist {
        self.twist
    }

    /// Break points of `[0, 1]`, including both ends.
    pub fn breaks(&self) -> &[f64] {
        &self.breaks
    }

    /// `A(x)`; at a break the value of the piece on the right is returned.
    pub fn eval(&self, x: f64) -> CMat {
        let shift = x.floor();
        let local = x - shift;
        let idx = self
            .breaks
            .iter()
            .rposition(|&b| b <= local)
            .unwrap_or(0)
            .min(self.pieces.len() - 1);
        let mut a = (self.pieces[idx])(local);
        // τ′ is an involution for both supported twists
        if (shift as i64).rem_euclid(2) == 1 {
            a = self.twist.apply(&a);
        }
        a
    }

    /// All break points in `[0, x_max]` of the quasi-periodic extension.
    fn breaks_up_to(&self, x_max: f64) -> Vec<f64> {
        let mut out = Vec::new();
        let mut shift = 0.0;
        while shift <= x_max {
            for &b in &self.breaks[..self.breaks.len() - 1] {
                let v = shift + b;
                if v < x_max {
                    out.push(v);
                }
            }
            shift += 1.0;
        }
        out.push(x_max);
        out.dedup();
        out
    }
}

/// Sampled fundamental solution `y_A`.
#[derive(Debug, Clone)]
pub struct WilsonLine {
    pub xs: Vec<f64>,
    pub ys: Vec<CMat>,
}

#[derive(Debug, Clone, Copy)]
pub struct WilsonTolerance {
    pub tol: f64,
    pub min_step: f64,
    pub unitarity: f64,
}

impl Default for WilsonTolerance {
    fn default() -> Self {
        WilsonTolerance {
            tol: 1e-12,
            min_step: 1e-9,
            unitarity: 1e-9,
        }
    }
}

const SQRT3: f64 = 1.732_050_807_568_877_2;

/// One commutator-free fourth-order step of `y′ = y A` on `[x, x + h]`.
fn cf4_step(a: &ConnectionSample, y: &CMat, x: f64, h: f64) -> CMat {
    let c1 = 0.5 - SQRT3 / 6.0;
    let c2 = 0.5 + SQRT3 / 6.0;
    let (al1, al2) = (0.25 + SQRT3 / 6.0, 0.25 - SQRT3 / 6.0);
    let a1 = a.eval(x + c1 * h);
    let a2 = a.eval(x + c2 * h);
    let first = expm(&((&a1 * c(al1) + &a2 * c(al2)) * c(h)));
    let second = expm(&((&a1 * c(al2) + &a2 * c(al1)) * c(h)));
    y * first * second
}

/// Nearest unitary matrix via Newton iteration `u ← (u + u^{−†})/2`.
fn reunitarize(u: &CMat) -> CMat {
    let mut x = u.clone();
    for _ in 0..3 {
        let inv = match x.clone().try_inverse() {
            Some(i) => i,
            None => return x,
        };
        x = (&x + inv.adjoint()) * c(0.5);
    }
    x
}

/// Integrates `y′ = y A`, `y(0) = 1`, continuously across the breaks, and
/// samples it at the sorted points `xs ⊂ [0, ∞)`.
pub fn wilson_line(a: &ConnectionSample, xs: &[f64], tol: WilsonTolerance) -> Result<WilsonLine> {
    if xs.iter().any(|&x| x < 0.0 || !x.is_finite()) || xs.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::InvalidInput(
            "sample points must be sorted and nonnegative".into(),
        ));
    }
    let n = a.eval(0.0).nrows();
    let x_max = xs.last().cloned().unwrap_or(0.0);
    let mut stops = a.breaks_up_to(x_max);
    stops.extend_from_slice(xs);
    stops.sort_by(|p, q| p.partial_cmp(q).unwrap());
    stops.dedup_by(|p, q| (*p - *q).abs() < 1e-15);
    let mut y = CMat::identity(n, n);
    let mut x = 0.0;
    let mut out = Vec::with_capacity(xs.len());
    let mut next_sample = 0;
    let mut h: f64 = 1e-2;
    let record = |x: f64, y: &CMat, out: &mut Vec<CMat>, next: &mut usize| {
        while *next < xs.len() && (xs[*next] - x).abs() < 1e-15 {
            out.push(y.clone());
            *next += 1;
        }
    };
    record(x, &y, &mut out, &mut next_sample);
    for &target in &stops {
        while x < target {
            let step = h.min(target - x);
            let full = cf4_step(a, &y, x, step);
            let half = cf4_step(
                a,
                &cf4_step(a, &y, x, 0.5 * step),
                x + 0.5 * step,
                0.5 * step,
            );
            let err = frobenius(&(&full - &half)) / 15.0;
            if err <= tol.tol || step <= tol.min_step {
                if err > tol.tol * 1e3 {
                    return Err(Error::Numerical(format!(
                        "Wilson line step {step:.2e} at x = {x} too large"
                    )));
                }
                // Richardson-improved value
                y = &half + (&half - &full) * c(1.0 / 15.0);
                x = if step == target - x { target } else { x + step };
                let d = unitarity_defect(&y);
                if d > tol.unitarity {
                    return Err(Error::Numerical(format!(
                        "Wilson line lost unitarity ({d:.2e})"
                    )));
                }
                if d > 1e-13 {
                    y = reunitarize(&y);
                }
                let grow = if err > 0.0 {
                    0.9 * (tol.tol / err).powf(0.2)
                } else {
                    4.0
                };
                h = step * grow.clamp(0.2, 4.0);
            } else {
                h = step * (0.9 * (tol.tol / err).powf(0.2)).clamp(0.1, 0.9);
            }
        }
        record(x, &y, &mut out, &mut next_sample);
    }
    Ok(WilsonLine {
        xs: xs.to_vec(),
        ys: out,
    })
}

/// Result of gauging a connection to the constant `χ`.
#[derive(Debug, Clone)]
pub struct GaugeFixing {
    pub chi: Vec<f64>,
    pub chi_matrix: CMat,
    pub w: CMat,
    pub line: WilsonLine,
    /// `g_A(x) = e^{−xχ} γ(w) y_A(x)` at the sample points.
    pub gauge: Vec<CMat>,
}

impl GaugeFixing {
    /// `g_A(x)` from a Wilson-line value `y_A(x)`.
    pub fn gauge_from(&self, x: f64, y: &CMat) -> CMat {
        expm(&(&self.chi_matrix * c(-x))) * &self.w * y
    }
}

/// Finds `χ` in the alcove and `w` with `e^χ = w y_A(1) w⁻¹`, then returns
/// `g_A` at the sample points. Only `γ = id` is supported.
pub fn gauge_to_constant(
    alg: Arc<SimpleLieAlgebra>,
    a: &ConnectionSample,
    xs: &[f64],
    tol: WilsonTolerance,
) -> Result<GaugeFixing> {
    if a.twist() != GroupTwist::Identity {
        return Err(Error::Unsupported(
            "gauge fixing to the alcove with a nontrivial twist".into(),
        ));
    }
    let sys = GroupSystem::new(
        alg.clone(),
        CouplingVector::new(vec![1.0])?,
        GroupTwist::Identity,
    )?;
    let mut pts: Vec<f64> = xs.to_vec();
    pts.push(1.0);
    pts.sort_by(|p, q| p.partial_cmp(q).unwrap());
    pts.dedup();
    let full = wilson_line(a, &pts, tol)?;
    let one = pts.iter().position(|&x| x == 1.0).expect("1 is sampled");
    let (chi, w) = sys.alcove_project(&full.ys[one])?;
    let chi_matrix = alg.to_matrix(&alg.cartan_element(&chi));
    let ys: Vec<CMat> = xs
        .iter()
        .map(|x| full.ys[pts.iter().position(|p| p == x).unwrap()].clone())
        .collect();
    let line = WilsonLine {
        xs: xs.to_vec(),
        ys,
    };
    let mut fixing = GaugeFixing {
        chi,
        chi_matrix,
        w,
        line,
        gauge: Vec::new(),
    };
    fixing.gauge = fixing
        .line
        .xs
        .iter()
        .zip(&fixing.line.ys)
        .map(|(x, y)| fixing.gauge_from(*x, y))
        .collect();
    Ok(fixing)
}
