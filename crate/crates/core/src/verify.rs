//! Property suites run by `twistred verify`.
//!
//! Each suite draws its samples from the config seed and reports, per check,
//! the largest residual seen next to the tolerance it was held to.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;
use serde::Serialize;

use crate::config::{RunConfig, Setup};
use crate::error::{Error, Result};
use crate::lie::{AlgebraVector, Family};
use crate::linalg::{c, expm, frobenius, null_space, range_space, rank, subspace_angle, CMat, RMat, I};
use crate::product::{ProductSpace, ReducedPoint};
use crate::projection::{GroupSystem, GroupTwist, PowerTrace};
use crate::quantum::{casimir_value, spin_matrices, weyl_constant, WeightLattice, WeightVector};
use crate::sample::{random_algebra_vector, random_group_element, random_slice_point, rng_from_seed, SeededRng};
use crate::sutherland::{distance_to_lattice, m0_pseudo_inverse, m_matrix, p_matrix, pi_perp, Sutherland};
use crate::ym::{gauge_to_constant, ConnectionSample, WilsonTolerance, YmBridge};

pub const SUITES: [&str; 10] = [
    "closed_form",
    "degenerate",
    "hamiltonian",
    "slice_bijectivity",
    "projection",
    "spinless",
    "involution",
    "ym",
    "gauge_fixing",
    "quantum",
];

#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub samples: usize,
    pub max_residual: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl CheckResult {
    fn new(name: &str, samples: usize, max_residual: f64, tolerance: f64) -> Self {
        CheckResult {
            name: name.into(),
            samples,
            max_residual,
            tolerance,
            passed: max_residual.is_finite() && max_residual <= tolerance,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub skipped: Option<String>,
    pub checks: Vec<CheckResult>,
    pub passed: bool,
}

impl SuiteReport {
    fn done(suite: &str, checks: Vec<CheckResult>) -> Self {
        let passed = checks.iter().all(|c| c.passed);
        SuiteReport { suite: suite.into(), skipped: None, checks, passed }
    }
    fn skip(suite: &str, why: &str) -> Self {
        SuiteReport { suite: suite.into(), skipped: Some(why.into()), checks: Vec::new(), passed: true }
    }
}

/// Runs one suite, or all of them for `"all"`.
pub fn run_suites(name: &str, cfg: &RunConfig, setup: &Setup) -> Result<Vec<SuiteReport>> {
    if name == "all" {
        return SUITES.iter().map(|s| run_suite(s, cfg, setup)).collect();
    }
    Ok(vec![run_suite(name, cfg, setup)?])
}

pub fn run_suite(name: &str, cfg: &RunConfig, setup: &Setup) -> Result<SuiteReport> {
    let mut rng = rng_from_seed(cfg.seed);
    let n = cfg.samples.max(1);
    match name {
        "closed_form" => Ok(closed_form(setup, &mut rng, n, cfg.tolerances.check)),
        "degenerate" => Ok(degenerate(setup, cfg.tolerances.check)),
        "hamiltonian" => hamiltonian(setup, &mut rng, n, cfg.tolerances.check),
        "slice_bijectivity" => slice_bijectivity(setup, &mut rng, n),
        "projection" => projection(cfg, setup, &mut rng),
        "spinless" => spinless(setup, &mut rng, n, cfg.tolerances.check),
        "involution" => involution(setup, &mut rng, n),
        "ym" => ym(setup, &mut rng, n, cfg.tolerances.check),
        "gauge_fixing" => gauge_fixing(setup, &mut rng, n.min(20)),
        "quantum" => Ok(quantum()),
        other => Err(Error::InvalidInput(format!("unknown suite `{other}`; expected one of {SUITES:?} or all"))),
    }
}

fn closed_form(setup: &Setup, rng: &mut SeededRng, n: usize, tol: f64) -> SuiteReport {
    let cp = &setup.coupling;
    let id = CMat::identity(cp.n(), cp.n());
    let (mut worst_scaled, mut worst_far): (f64, f64) = (0.0, 0.0);
    for _ in 0..n {
        let x = loop {
            let x: f64 = rng.random_range(0.0..2.0 * PI);
            if distance_to_lattice(x) > 1e-6 {
                break x;
            }
        };
        let d = distance_to_lattice(x);
        let r = match p_matrix(x, cp) {
            Ok(p) => (m_matrix(x, cp) * p - &id).norm(),
            Err(_) => f64::INFINITY,
        };
        // Entries of 𝒫 grow like 1/d², so rounding alone gives ~ε/d².
        worst_scaled = worst_scaled.max(r / tol.max(1e-13 / (d * d)));
        if d > 0.1 {
            worst_far = worst_far.max(r);
        }
    }
    SuiteReport::done(
        "closed_form",
        vec![
            CheckResult::new("m_p_identity_conditioning_scaled", n, worst_scaled, 1.0),
            CheckResult::new("m_p_identity_away_from_walls", n, worst_far, tol),
        ],
    )
}

fn degenerate(setup: &Setup, tol: f64) -> SuiteReport {
    let cp = &setup.coupling;
    let n = cp.n();
    let lam_inv = RMat::from_fn(n, n, |i, j| if i == j { 1.0 / cp.lambda(i) } else { 0.0 });
    let a = &lam_inv * m_matrix(0.0, cp).map(|z| z.re);
    let ker = null_space(&a, 1e-10);
    let kernel_dim = (ker.ncols() as f64 - 1.0).abs();
    let spread = if ker.ncols() == 1 {
        let v = ker.column(0);
        (0..n).map(|i| (v[i] - v[0]).abs()).fold(0.0, f64::max)
    } else {
        f64::INFINITY
    };
    let pinv = m0_pseudo_inverse(cp);
    let pp = pi_perp(cp);
    let inv = (&a * &pinv - &pp).norm().max((&pinv * &a - &pp).norm());
    SuiteReport::done(
        "degenerate",
        vec![
            CheckResult::new("kernel_dimension_is_one", 1, kernel_dim, 0.0),
            CheckResult::new("kernel_is_constant_vector", 1, spread, tol),
            CheckResult::new("pseudo_inverse_on_complement", 1, inv, tol),
        ],
    )
}

/// The three forms of `H_S`; the closed form only for untwisted `A_r`.
pub fn hamiltonian_forms(space: &ProductSpace, closed: Option<&Sutherland>, pt: &ReducedPoint) -> Result<Vec<f64>> {
    let mut v = vec![space.h_s_operator_form(pt)?, space.h_s_u_form(pt)?];
    if let Some(s) = closed {
        v.push(s.h_s(pt)?);
    }
    Ok(v)
}

pub fn closed_form_system(setup: &Setup) -> Result<Option<Sutherland>> {
    if setup.algebra.family() == Family::A && setup.gamma.is_identity() {
        Ok(Some(Sutherland::new(setup.space()?)?))
    } else {
        Ok(None)
    }
}

pub fn max_pairwise_deviation(v: &[f64]) -> f64 {
    let mut d: f64 = 0.0;
    for a in v {
        for b in v {
            d = d.max((a - b).abs());
        }
    }
    d
}

fn hamiltonian(setup: &Setup, rng: &mut SeededRng, n: usize, tol: f64) -> Result<SuiteReport> {
    let space = setup.space()?;
    let closed = closed_form_system(setup)?;
    let mut worst: f64 = 0.0;
    for _ in 0..n {
        let pt = random_slice_point(&space, rng, 1.0, 1.0);
        let v = hamiltonian_forms(&space, closed.as_ref(), &pt)?;
        worst = worst.max(max_pairwise_deviation(&v) / (1.0 + v[0].abs()));
    }
    Ok(SuiteReport::done("hamiltonian", vec![CheckResult::new("forms_agree_relative", n, worst, tol)]))
}

fn slice_bijectivity(setup: &Setup, rng: &mut SeededRng, n: usize) -> Result<SuiteReport> {
    let s = setup.space()?;
    let total = s.total_dim();
    let w = s.metric_diagonal();
    let (mut rank_err, mut ker_angle, mut img_angle): (f64, f64, f64) = (0.0, 0.0, 0.0);
    for _ in 0..n {
        let q = s.alcove().sample(rng, 6, 0.05);
        let z = s.z_operator(&q)?;
        rank_err = rank_err.max((rank(&z, 1e-10) as f64 - (total - s.fixed_dim()) as f64).abs());
        let l = s.constraint_operator(&q);
        let sq = RMat::from_fn(total, total, |i, j| l[(i, j)] * w[i].sqrt() / w[j].sqrt());
        let scaled = |b: &RMat| RMat::from_fn(total, b.ncols(), |i, j| b[(i, j)] * w[i].sqrt());
        ker_angle = ker_angle.max(subspace_angle(&null_space(&sq, 1e-8), &scaled(s.q_basis())));
        img_angle = img_angle.max(subspace_angle(&range_space(&sq, 1e-10), &scaled(s.k_perp_basis())));
    }
    Ok(SuiteReport::done(
        "slice_bijectivity",
        vec![
            CheckResult::new("z_full_rank", n, rank_err, 0.0),
            CheckResult::new("kernel_equals_q", n, ker_angle, 1e-8),
            CheckResult::new("image_equals_k_perp", n, img_angle, 1e-8),
        ],
    ))
}

/// Gauge-invariant summary of `ξ⃗`: pairwise component products and spectra.
pub fn xi_invariants(space: &ProductSpace, xi: &crate::product::ProductVector) -> Vec<f64> {
    let comps = xi.components();
    let mut out = Vec::new();
    for a in &comps {
        for b in &comps {
            out.push(a.dot(b));
        }
    }
    out.extend(space.orbit_spectra(xi).into_iter().flatten());
    out
}

/// Norms and orbit spectra of each `ξ_k`: conserved along the flow.
pub fn orbit_invariants(space: &ProductSpace, xi: &crate::product::ProductVector) -> Vec<f64> {
    let mut out: Vec<f64> = xi.components().iter().map(|a| a.dot(a)).collect();
    out.extend(space.orbit_spectra(xi).into_iter().flatten());
    out
}

fn projection(cfg: &RunConfig, setup: &Setup, rng: &mut SeededRng) -> Result<SuiteReport> {
    if setup.algebra.family() != Family::A || !setup.gamma.is_identity() {
        return Ok(SuiteReport::skip("projection", "needs an untwisted su(n) config"));
    }
    let sys = GroupSystem::new(setup.algebra.clone(), setup.coupling.clone(), GroupTwist::Identity)?;
    let suth = Sutherland::new(sys.space().clone())?;
    let pt = random_slice_point(sys.space(), rng, cfg.p_scale, cfg.xi_scale);
    let lifted = sys.lift_reduced(&pt)?;
    let grid = cfg.time_grid.points();
    let traj = suth.integrate_reduced(&pt, &grid, cfg.ode_tolerances())?;
    let h0 = suth.h_s(&pt)?;
    let inv0 = orbit_invariants(sys.space(), &pt.xi);
    let (mut dq, mut dh, mut dinv, mut dorb, mut drift): (f64, f64, f64, f64, f64) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for (t, ode) in traj.times.iter().zip(&traj.points) {
        let red = sys.reduce_point(&sys.free_flow(*t, &lifted))?;
        for (a, b) in red.q.iter().zip(&ode.q).chain(red.p.iter().zip(&ode.p)) {
            dq = dq.max((a - b).abs());
        }
        let h = suth.h_s(&red)?;
        dh = dh.max((h - suth.h_s(ode)?).abs());
        drift = drift.max((h - h0).abs() / (1.0 + h0.abs()));
        for (a, b) in xi_invariants(sys.space(), &red.xi).iter().zip(xi_invariants(sys.space(), &ode.xi)) {
            dinv = dinv.max((a - b).abs());
        }
        for (a, b) in orbit_invariants(sys.space(), &red.xi).iter().zip(&inv0) {
            dorb = dorb.max((a - b).abs());
        }
    }
    let complete = if traj.times.len() == grid.len() { 0.0 } else { 1.0 };
    let tol = cfg.tolerances.trajectory;
    Ok(SuiteReport::done(
        "projection",
        vec![
            CheckResult::new("integration_completed", 1, complete, 0.0),
            CheckResult::new("q_p_agree", grid.len(), dq, tol),
            CheckResult::new("h_s_agree", grid.len(), dh, tol),
            CheckResult::new("xi_invariants_agree", grid.len(), dinv, tol),
            CheckResult::new("orbits_conserved", grid.len(), dorb, tol),
            CheckResult::new("projection_h_s_drift", grid.len(), drift, cfg.tolerances.check),
        ],
    ))
}

/// `ξ = iν(vv† − 1)` with `|v_a| = 1`: a rank-one orbit with no Cartan part.
pub fn rank_one_spin(alg: &crate::lie::SimpleLieAlgebra, phases: &[f64], nu: f64) -> AlgebraVector {
    let n = phases.len();
    let v: Vec<Complex64> = phases.iter().map(|t| Complex64::from_polar(1.0, *t)).collect();
    let m = CMat::from_fn(n, n, |a, b| {
        let e = v[a] * v[b].conj() - if a == b { c(1.0) } else { c(0.0) };
        I * nu * e
    });
    alg.from_matrix(&m)
}

/// `½Σπ_a² + Σ_{a≠b} ν²/(8 sin²((θ_a − θ_b)/2))` with `q = diag(iθ)`, `p = diag(iπ)`.
pub fn spinless_direct(alg: &crate::lie::SimpleLieAlgebra, q: &[f64], p: &[f64], nu: f64) -> f64 {
    let diag = |x: &[f64]| -> Vec<f64> {
        let m = alg.to_matrix(&alg.cartan_element(x));
        (0..m.nrows()).map(|a| m[(a, a)].im).collect()
    };
    let (th, pi) = (diag(q), diag(p));
    let mut h = 0.5 * pi.iter().map(|x| x * x).sum::<f64>();
    for a in 0..th.len() {
        for b in 0..th.len() {
            if a != b {
                h += nu * nu / (8.0 * ((th[a] - th[b]) / 2.0).sin().powi(2));
            }
        }
    }
    h
}

fn spinless(setup: &Setup, rng: &mut SeededRng, n: usize, tol: f64) -> Result<SuiteReport> {
    if setup.algebra.family() != Family::A || !setup.gamma.is_identity() || setup.coupling.n() != 1 {
        return Ok(SuiteReport::skip("spinless", "needs an untwisted su(n) config with N = 1"));
    }
    let suth = Sutherland::new(setup.space()?)?;
    let alg = setup.algebra.as_ref();
    let size = alg.matrix_size();
    let mut worst: f64 = 0.0;
    for _ in 0..n {
        let base = random_slice_point(suth.space(), rng, 1.0, 0.0);
        let nu = rng.random_range(0.3..2.0);
        let phases: Vec<f64> = (0..size).map(|_| rng.random_range(0.0..2.0 * PI)).collect();
        let xi = suth.space().product_from_fn(|_| rank_one_spin(alg, &phases, nu));
        let pt = ReducedPoint { xi, ..base };
        let h = suth.h_s(&pt)?;
        let d = spinless_direct(alg, &pt.q, &pt.p, nu);
        worst = worst.max((h - d).abs() / (1.0 + d.abs()));
    }
    Ok(SuiteReport::done("spinless", vec![CheckResult::new("matches_direct_formula", n, worst, tol)]))
}

pub const INVOLUTION_PAIRS: [(f64, f64); 5] = [(0.5, -1.3), (1.0, 2.0), (-0.7, 0.4), (2.5, 0.9), (-1.8, -0.2)];

fn involution(setup: &Setup, rng: &mut SeededRng, n: usize) -> Result<SuiteReport> {
    if setup.algebra.family() != Family::A || !setup.gamma.is_identity() {
        return Ok(SuiteReport::skip("involution", "needs an untwisted su(n) config"));
    }
    let sys = GroupSystem::new(setup.algebra.clone(), setup.coupling.clone(), GroupTwist::Identity)?;
    let gens: Vec<PowerTrace> = (2..=sys.matrix_size() as u32).map(PowerTrace::new).collect();
    let (mut worst, mut flow): (f64, f64) = (0.0, 0.0);
    for _ in 0..n {
        let pt = sys.lift_reduced(&random_slice_point(sys.space(), rng, 1.0, 1.0))?;
        for (u, v) in INVOLUTION_PAIRS {
            for h1 in &gens {
                for h2 in &gens {
                    worst = worst.max(sys.involution_check(h1, u, h2, v, &pt)?.abs());
                }
            }
            let t = rng.random_range(0.1..2.0);
            let a = sys.phi_u_matrices(&pt, u)?;
            let b = sys.phi_u_matrices(&sys.free_flow(t, &pt), u)?;
            for (x, y) in a.iter().zip(&b) {
                flow = flow.max(frobenius(&(x - y)) / (1.0 + frobenius(x)));
            }
        }
    }
    Ok(SuiteReport::done(
        "involution",
        vec![
            CheckResult::new("power_traces_commute", n, worst, 1e-8),
            CheckResult::new("phi_u_flow_invariant", n, flow, 1e-12),
        ],
    ))
}

/// Random marks, charges, `χ` and `p` for which the slice problem is solvable.
pub fn random_ym_input(
    bridge: &YmBridge,
    marks: &[f64],
    rng: &mut SeededRng,
    charge_scale: f64,
) -> Result<(Vec<f64>, Vec<Vec<f64>>, Vec<f64>)> {
    let space = bridge.space_for(marks)?;
    let alg = bridge.algebra();
    let raw = space.product_from_fn(|_| random_algebra_vector(alg, rng, charge_scale));
    let xi = space.project_k_perp(&raw)?;
    let charges = (0..marks.len())
        .map(|k| (xi.component(k) * space.coupling().lambda(k)).iter().cloned().collect())
        .collect();
    let chi = space.alcove().sample(rng, 6, 0.1);
    let fixed = space.alcove().fixed_basis();
    let z = nalgebra::DVector::from_fn(fixed.ncols(), |_, _| rng.random_range(-1.0..1.0));
    let p = (fixed * z).iter().cloned().collect();
    Ok((chi, charges, p))
}

/// Round-trip, jump, energy and theta-pairing residuals of one configuration.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct YmResiduals {
    pub round_trip: f64,
    pub jump: f64,
    pub energy: f64,
    pub theta: f64,
}

pub fn ym_residuals(
    bridge: &YmBridge,
    marks: &[f64],
    chi: &[f64],
    charges: &[Vec<f64>],
    p: &[f64],
) -> Result<(crate::ym::FieldConfig, YmResiduals)> {
    let cfg = bridge.solve_slice(chi, marks, charges, p)?;
    let data = bridge.correspondence(&cfg)?;
    let again = bridge.solve_slice(&data.point.q, marks, charges, &data.point.p)?;
    let mut rt: f64 = 0.0;
    for (x, y) in again.plus_limits.iter().flatten().zip(cfg.plus_limits.iter().flatten()) {
        rt = rt.max((x - y).abs());
    }
    for (x, y) in data.point.q.iter().zip(chi).chain(data.point.p.iter().zip(p)) {
        rt = rt.max((x - y).abs());
    }
    let jj = data.j.inner_lambda(&data.j, &data.coupling);
    let energy = (bridge.field_energy(&cfg)? - jj).abs() / (1.0 + jj);
    let res = YmResiduals { round_trip: rt, jump: bridge.jump_residual(&cfg)?, energy, theta: bridge.theta_pairing_check(&cfg)? };
    Ok((cfg, res))
}

fn ym(setup: &Setup, rng: &mut SeededRng, n: usize, tol: f64) -> Result<SuiteReport> {
    let bridge = YmBridge::new(setup.algebra.clone(), setup.gamma.clone());
    let mut worst = YmResiduals { round_trip: 0.0, jump: 0.0, energy: 0.0, theta: 0.0 };
    for _ in 0..n {
        let (chi, charges, p) = random_ym_input(&bridge, &setup.marks, rng, 1.0)?;
        let (_, r) = ym_residuals(&bridge, &setup.marks, &chi, &charges, &p)?;
        worst.round_trip = worst.round_trip.max(r.round_trip);
        worst.jump = worst.jump.max(r.jump);
        worst.energy = worst.energy.max(r.energy);
        worst.theta = worst.theta.max(r.theta);
    }
    Ok(SuiteReport::done(
        "ym",
        vec![
            CheckResult::new("round_trip", n, worst.round_trip, 1e-12),
            CheckResult::new("jump_condition", n, worst.jump, tol),
            CheckResult::new("field_energy", n, worst.energy, 1e-12),
            CheckResult::new("theta_pairing", n, worst.theta, tol),
        ],
    ))
}

/// A smooth periodic `su(n)` connection `P cos 2πx + Q sin 4πx + R`.
pub fn random_smooth_connection(alg: &crate::lie::SimpleLieAlgebra, rng: &mut SeededRng) -> impl Fn(f64) -> CMat + Clone + Send + Sync + 'static {
    let m = |rng: &mut SeededRng| alg.to_matrix(&random_algebra_vector(alg, rng, 0.8));
    let (p, q, r) = (m(rng), m(rng), m(rng));
    move |x: f64| &p * c((2.0 * PI * x).cos()) + &q * c((4.0 * PI * x).sin()) + &r
}

/// `g A g⁻¹ − g′g⁻¹` for `g(x) = g0 e^{sin(2πx) V}`.
pub fn dressed_connection(
    f: impl Fn(f64) -> CMat + Send + Sync + 'static,
    g0: CMat,
    v: CMat,
) -> impl Fn(f64) -> CMat + Send + Sync + 'static {
    move |x: f64| {
        let e = expm(&(&v * c((2.0 * PI * x).sin())));
        let gx = &g0 * &e;
        let dg = &g0 * &v * &e * c(2.0 * PI * (2.0 * PI * x).cos());
        &gx * f(x) * gx.adjoint() - dg * gx.adjoint()
    }
}

/// Max over sample points of `‖g A g⁻¹ − g′g⁻¹ − χ‖` with a five-point derivative.
pub fn gauge_equation_residual(
    alg: std::sync::Arc<crate::lie::SimpleLieAlgebra>,
    a: &ConnectionSample,
    f: &dyn Fn(f64) -> CMat,
    at: &[f64],
) -> Result<f64> {
    let h = 1e-3;
    let xs: Vec<f64> = at.iter().flat_map(|&x| [x - 2.0 * h, x - h, x, x + h, x + 2.0 * h]).collect();
    let fix = gauge_to_constant(alg, a, &xs, WilsonTolerance::default())?;
    let mut worst: f64 = 0.0;
    for (i, &x) in at.iter().enumerate() {
        let g = |j: usize| &fix.gauge[5 * i + j];
        let dg = (g(0) - g(1) * c(8.0) + g(3) * c(8.0) - g(4)) * c(1.0 / (12.0 * h));
        let lhs = g(2) * f(x) * g(2).adjoint() - dg * g(2).adjoint();
        worst = worst.max(frobenius(&(lhs - &fix.chi_matrix)));
    }
    Ok(worst)
}

fn gauge_fixing(setup: &Setup, rng: &mut SeededRng, n: usize) -> Result<SuiteReport> {
    if setup.algebra.family() != Family::A || !setup.gamma.is_identity() {
        return Ok(SuiteReport::skip("gauge_fixing", "needs an untwisted su(n) config"));
    }
    let alg = setup.algebra.clone();
    let (mut eq, mut per, mut inv): (f64, f64, f64) = (0.0, 0.0, 0.0);
    for _ in 0..n {
        let f = random_smooth_connection(&alg, rng);
        let a = ConnectionSample::from_fn(f.clone(), GroupTwist::Identity);
        eq = eq.max(gauge_equation_residual(alg.clone(), &a, &f, &[0.25, 0.6])?);
        let fix = gauge_to_constant(alg.clone(), &a, &[0.3, 1.3], WilsonTolerance::default())?;
        per = per.max(frobenius(&(&fix.gauge[0] - &fix.gauge[1])));
        let g0 = random_group_element(&alg, rng, 1.0);
        let v = alg.to_matrix(&random_algebra_vector(&alg, rng, 0.5));
        let ag = ConnectionSample::from_fn(dressed_connection(f, g0, v), GroupTwist::Identity);
        let fix2 = gauge_to_constant(alg.clone(), &ag, &[0.5], WilsonTolerance::default())?;
        for (x, y) in fix.chi.iter().zip(&fix2.chi) {
            inv = inv.max((x - y).abs());
        }
    }
    Ok(SuiteReport::done(
        "gauge_fixing",
        vec![
            CheckResult::new("gauge_equation", n, eq, 1e-8),
            CheckResult::new("quasi_periodicity", n, per, 1e-9),
            CheckResult::new("alcove_invariance", n, inv, 1e-9),
        ],
    ))
}

/// Number of invariants in a triple product of `su(2)` irreps by weight counting.
pub fn su2_singlets_by_counting(a: i64, b: i64, c: i64) -> u64 {
    // zero-weight count minus weight-2 count
    let (mut zero, mut two) = (0i64, 0i64);
    for x in (-a..=a).step_by(2) {
        for y in (-b..=b).step_by(2) {
            for z in (-c..=c).step_by(2) {
                match x + y + z {
                    0 => zero += 1,
                    2 => two += 1,
                    _ => {}
                }
            }
        }
    }
    (zero - two) as u64
}

fn quantum() -> SuiteReport {
    let build = |r| WeightLattice::new(&crate::lie::SimpleLieAlgebra::build(Family::A, r).expect("su(n)")).expect("lattice");
    let (l1, l2) = (build(1), build(2));
    let mut cas: f64 = 0.0;
    for m in 0..=20usize {
        let s = spin_matrices(m);
        let mut sum = CMat::zeros(m + 1, m + 1);
        for j in &s {
            let t = j * Complex64::new(0.0, 2f64.sqrt());
            sum += &t * &t;
        }
        let v = casimir_value(&l1, &[WeightVector::new(vec![m as i64])], &[1.0]).unwrap_or(f64::NAN);
        let r = (sum - CMat::identity(m + 1, m + 1) * c(v)).iter().map(|z| z.norm()).fold(0.0, f64::max);
        cas = cas.max(r);
    }
    let mut tri: f64 = 0.0;
    for a in 0..=20 {
        for b in 0..=20 {
            for cc in 0..=20 {
                let w = |x| WeightVector::new(vec![x]);
                let s = l1.singlet_dimension(&w(a), &w(b), &w(cc)).unwrap_or(u64::MAX);
                tri = tri.max((s as f64 - su2_singlets_by_counting(a, b, cc) as f64).abs());
            }
        }
    }
    let weyl = (weyl_constant(&l1) + 0.25).abs().max((weyl_constant(&l2) + 1.0).abs());
    SuiteReport::done(
        "quantum",
        vec![
            CheckResult::new("su2_casimir_brute_force", 21, cas, 1e-12),
            CheckResult::new("su2_triangle_rule_counting", 21 * 21 * 21, tri, 0.0),
            CheckResult::new("weyl_constant", 2, weyl, 1e-14),
        ],
    )
}
