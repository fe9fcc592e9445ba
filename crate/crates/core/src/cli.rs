//! Subcommands behind the `twistred` binary.
//!
//! Every command reads a [`RunConfig`], writes its files into the output
//! directory and returns an [`Outcome`]. `--seed` and `--out` override the
//! config fields of the same meaning.

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::config::{RunConfig, Setup};
use crate::error::{Error, Result};
use crate::io::{fmt_f64, trajectory_plot, wilson_plot, write_csv, write_gnuplot, write_json, write_spectrum_csv, write_wilson_csv, METADATA_SCHEMA_VERSION, SPECTRUM_PLOT};
use crate::ode::Stop;
use crate::product::{ProductSpace, ReducedPoint};
use crate::projection::{GroupSystem, GroupTwist};
use crate::quantum::{enumerate_levels, weyl_constant, WeightLattice, WeightVector};
use crate::sample::{random_algebra_vector, random_group_element, random_orbit_slice_point, random_slice_point, rng_from_seed, SeededRng};
use crate::sutherland::Sutherland;
use crate::verify::{closed_form_system, dressed_connection, hamiltonian_forms, max_pairwise_deviation, random_ym_input, run_suites, xi_invariants, ym_residuals};
use crate::ym::{gauge_to_constant, wilson_line, ConnectionSample, WilsonTolerance, YmBridge};

#[derive(Debug, Parser)]
#[command(name = "twistred", version, about = "Twisted spin Sutherland systems: reduction, dynamics, gauge fields and spectra")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CommandKind {
    Algebra,
    Hamiltonian,
    Simulate,
    Verify,
    Ym,
    Spectrum,
}

#[derive(Debug, Clone, clap::Args)]
pub struct CommonArgs {
    #[arg(long)]
    pub config: PathBuf,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Root data, alcove and twist of the configured algebra.
    Algebra(CommonArgs),
    /// Three evaluations of the reduced Hamiltonian on random slice points.
    Hamiltonian(CommonArgs),
    /// Projected free motion against direct integration of the reduced system.
    Simulate(CommonArgs),
    /// Property suites with residual maxima.
    Verify {
        #[command(flatten)]
        common: CommonArgs,
        /// Suite name, or `all`.
        #[arg(long)]
        suite: Option<String>,
    },
    /// Field configuration on the cylinder and its Wilson line.
    Ym(CommonArgs),
    /// Peter–Weyl levels below the energy cutoff.
    Spectrum(CommonArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    Truncated,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Pass => 0,
            Status::Fail => 2,
            Status::Truncated => 3,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Outcome {
    pub status: Status,
    pub metadata: Value,
    pub files: Vec<PathBuf>,
}

impl Command {
    pub fn kind(&self) -> CommandKind {
        match self {
            Command::Algebra(_) => CommandKind::Algebra,
            Command::Hamiltonian(_) => CommandKind::Hamiltonian,
            Command::Simulate(_) => CommandKind::Simulate,
            Command::Verify { .. } => CommandKind::Verify,
            Command::Ym(_) => CommandKind::Ym,
            Command::Spectrum(_) => CommandKind::Spectrum,
        }
    }

    fn common(&self) -> &CommonArgs {
        match self {
            Command::Algebra(a) | Command::Hamiltonian(a) | Command::Simulate(a) | Command::Ym(a) | Command::Spectrum(a) => a,
            Command::Verify { common, .. } => common,
        }
    }
}

/// Loads the config, applies overrides and runs the command.
pub fn execute(cmd: &Command) -> Result<Outcome> {
    let args = cmd.common();
    let mut cfg = RunConfig::load(&args.config)?;
    if let Some(s) = args.seed {
        cfg.seed = s;
    }
    if let Some(o) = &args.out {
        cfg.out_dir = Some(o.to_string_lossy().into_owned());
    }
    if let Command::Verify { suite: Some(s), .. } = cmd {
        cfg.suite = Some(s.clone());
    }
    run(cmd.kind(), &cfg)
}

pub fn run(kind: CommandKind, cfg: &RunConfig) -> Result<Outcome> {
    let setup = cfg.setup()?;
    let out = PathBuf::from(cfg.out_dir.clone().unwrap_or_else(|| "out".into()));
    match kind {
        CommandKind::Algebra => cmd_algebra(cfg, &setup, &out),
        CommandKind::Hamiltonian => cmd_hamiltonian(cfg, &setup, &out),
        CommandKind::Simulate => cmd_simulate(cfg, &setup, &out),
        CommandKind::Verify => cmd_verify(cfg, &setup, &out),
        CommandKind::Ym => cmd_ym(cfg, &setup, &out),
        CommandKind::Spectrum => cmd_spectrum(cfg, &setup, &out),
    }
}

/// Exit code for a finished run: 0 pass, 1 validation, 2 numerical failure,
/// 3 non-generic input.
pub fn exit_code(result: &Result<Outcome>) -> i32 {
    match result {
        Ok(o) => o.status.exit_code(),
        Err(e) => e.exit_code(),
    }
}

fn metadata(command: &str, cfg: &RunConfig, status: Status, results: Value) -> Value {
    // The output location is not part of the run, so identical runs give identical bytes anywhere.
    let cfg = RunConfig { out_dir: None, ..cfg.clone() };
    json!({
        "schema_version": METADATA_SCHEMA_VERSION,
        "command": command,
        "crate_version": env!("CARGO_PKG_VERSION"),
        "seed": cfg.seed,
        "config": cfg,
        "status": status,
        "results": results,
    })
}

fn finish(command: &str, cfg: &RunConfig, out: &Path, status: Status, results: Value, mut files: Vec<PathBuf>) -> Result<Outcome> {
    let meta = metadata(command, cfg, status, results);
    files.push(write_json(out, &format!("{command}.json"), &meta)?);
    Ok(Outcome { status, metadata: meta, files })
}

fn pass_if(ok: bool) -> Status {
    if ok {
        Status::Pass
    } else {
        Status::Fail
    }
}

/// A slice point from the orbit seeds if given, otherwise a random one.
pub fn sample_point(cfg: &RunConfig, space: &ProductSpace, rng: &mut SeededRng) -> Result<ReducedPoint> {
    match &cfg.orbit_seeds {
        Some(seeds) => {
            let s: Vec<_> = seeds.iter().map(|v| nalgebra::DVector::from_column_slice(v)).collect();
            random_orbit_slice_point(space, &s, rng, cfg.p_scale)
        }
        None => Ok(random_slice_point(space, rng, cfg.p_scale, cfg.xi_scale)),
    }
}

pub fn cmd_algebra(cfg: &RunConfig, setup: &Setup, out: &Path) -> Result<Outcome> {
    let alg = &setup.algebra;
    let space = setup.space()?;
    let lattice = WeightLattice::new(alg)?;
    // Jacobi identity over the basis as a consistency check.
    let d = alg.dim();
    let mut jacobi: f64 = 0.0;
    for a in 0..d {
        for b in 0..d {
            let comm = alg.ad_basis(a) * alg.ad_basis(b) - alg.ad_basis(b) * alg.ad_basis(a);
            let e_a = nalgebra::DVector::from_fn(d, |i, _| if i == a { 1.0 } else { 0.0 });
            let e_b = nalgebra::DVector::from_fn(d, |i, _| if i == b { 1.0 } else { 0.0 });
            let ab = alg.bracket_fast(&e_a, &e_b);
            jacobi = jacobi.max((comm - alg.ad_matrix(&ab)).amax());
        }
    }
    let results = json!({
        "descriptor": alg.descriptor(),
        "gamma_permutation": setup.gamma.permutation(),
        "gamma_order": setup.gamma.order(),
        "gamma_group_level": setup.gamma.group_level(),
        "fixed_cartan_dimension": space.fixed_dim(),
        "alcove_base_point": space.alcove().base_point(),
        "coxeter_number": alg.coxeter_number(),
        "weyl_constant": weyl_constant(&lattice),
        "lambdas": setup.coupling.lambdas(),
        "marks": setup.marks,
        "jacobi_residual": jacobi,
    });
    finish("algebra", cfg, out, pass_if(jacobi < cfg.tolerances.check), results, Vec::new())
}

pub fn cmd_hamiltonian(cfg: &RunConfig, setup: &Setup, out: &Path) -> Result<Outcome> {
    let space = setup.space()?;
    let closed = closed_form_system(setup)?;
    let mut rng = rng_from_seed(cfg.seed);
    let mut samples = Vec::new();
    let (mut worst, mut worst_rel): (f64, f64) = (0.0, 0.0);
    for _ in 0..cfg.samples.max(1) {
        let pt = sample_point(cfg, &space, &mut rng)?;
        let v = hamiltonian_forms(&space, closed.as_ref(), &pt)?;
        let dev = max_pairwise_deviation(&v);
        worst = worst.max(dev);
        worst_rel = worst_rel.max(dev / (1.0 + v[0].abs()));
        samples.push(json!({
            "q": pt.q,
            "p": pt.p,
            "h_operator": v[0],
            "h_u": v[1],
            "h_closed": v.get(2),
            "kinetic": 0.5 * pt.p.iter().map(|x| x * x).sum::<f64>(),
        }));
    }
    let results = json!({
        "forms": if closed.is_some() { 3 } else { 2 },
        "samples": samples,
        "max_deviation": worst,
        "max_relative_deviation": worst_rel,
        "tolerance": cfg.tolerances.check,
    });
    finish("hamiltonian", cfg, out, pass_if(worst_rel < cfg.tolerances.check), results, Vec::new())
}

fn trajectory_rows(times: &[f64], pts: &[ReducedPoint], hs: &[f64]) -> Vec<Vec<String>> {
    times
        .iter()
        .zip(pts)
        .zip(hs)
        .map(|((t, p), h)| {
            let mut row = vec![fmt_f64(*t)];
            row.extend(p.q.iter().chain(&p.p).map(|x| fmt_f64(*x)));
            row.push(fmt_f64(*h));
            row
        })
        .collect()
}

pub fn cmd_simulate(cfg: &RunConfig, setup: &Setup, out: &Path) -> Result<Outcome> {
    if !setup.gamma.is_identity() {
        return Err(Error::Unsupported("simulate needs gamma_order = 1".into()));
    }
    let sys = GroupSystem::new(setup.algebra.clone(), setup.coupling.clone(), GroupTwist::Identity)?;
    let suth = Sutherland::new(sys.space().clone())?;
    let mut rng = rng_from_seed(cfg.seed);
    let start = sample_point(cfg, sys.space(), &mut rng)?;
    let lifted = sys.lift_reduced(&start)?;
    let grid = cfg.time_grid.points();

    let integ = suth.integrate_reduced(&start, &grid, cfg.ode_tolerances())?;
    let mut proj_pts = Vec::new();
    let mut proj_stop = Stop::Completed;
    for &t in &grid {
        match sys.reduce_point(&sys.free_flow(t, &lifted)) {
            Ok(p) => proj_pts.push(p),
            Err(e) if e.exit_code() == 3 => {
                proj_stop = Stop::Truncated { t, reason: e.to_string() };
                break;
            }
            Err(e) => return Err(e),
        }
    }
    let hs = |pts: &[ReducedPoint]| -> Vec<f64> { pts.iter().map(|p| suth.h_s(p).unwrap_or(f64::NAN)).collect() };
    let (h_proj, h_int) = (hs(&proj_pts), hs(&integ.points));

    let r = setup.algebra.rank();
    let mut header = vec!["t".to_string()];
    header.extend((1..=r).map(|i| format!("q{i}")));
    header.extend((1..=r).map(|i| format!("p{i}")));
    header.push("h_s".into());
    let files = vec![
        write_csv(out, "projection.csv", &header, &trajectory_rows(&grid, &proj_pts, &h_proj))?,
        write_csv(out, "integrated.csv", &header, &trajectory_rows(&integ.times, &integ.points, &h_int))?,
        write_gnuplot(out, "simulate.gp", &trajectory_plot(r))?,
    ];

    let (mut dq, mut dp, mut dh, mut dinv): (f64, f64, f64, f64) = (0.0, 0.0, 0.0, 0.0);
    for (k, (a, b)) in proj_pts.iter().zip(&integ.points).enumerate() {
        dq = a.q.iter().zip(&b.q).map(|(x, y)| (x - y).abs()).fold(dq, f64::max);
        dp = a.p.iter().zip(&b.p).map(|(x, y)| (x - y).abs()).fold(dp, f64::max);
        dh = dh.max((h_proj[k] - h_int[k]).abs());
        let (ia, ib) = (xi_invariants(sys.space(), &a.xi), xi_invariants(sys.space(), &b.xi));
        dinv = ia.iter().zip(&ib).map(|(x, y)| (x - y).abs()).fold(dinv, f64::max);
    }
    let h0 = h_proj.first().copied().unwrap_or(f64::NAN);
    let drift = h_proj.iter().map(|h| (h - h0).abs()).fold(0.0, f64::max);
    let stop_json = |s: &Stop| match s {
        Stop::Completed => json!({"status": "completed"}),
        Stop::Truncated { t, reason } => json!({"status": "truncated", "t": t, "reason": reason}),
    };
    let truncated = integ.stop != Stop::Completed || proj_stop != Stop::Completed;
    let tol = cfg.tolerances.trajectory;
    let ok = dq.max(dp).max(dh).max(dinv) < tol && drift < cfg.tolerances.check * (1.0 + h0.abs());
    let status = if truncated { Status::Truncated } else { pass_if(ok) };
    let results = json!({
        "initial": {"q": start.q, "p": start.p, "xi": start.xi.data.as_slice()},
        "integrated": stop_json(&integ.stop),
        "projection": stop_json(&proj_stop),
        "max_q_deviation": dq,
        "max_p_deviation": dp,
        "max_h_deviation": dh,
        "max_invariant_deviation": dinv,
        "projection_h_drift": drift,
        "tolerance": tol,
    });
    finish("simulate", cfg, out, status, results, files)
}

pub fn cmd_verify(cfg: &RunConfig, setup: &Setup, out: &Path) -> Result<Outcome> {
    let suite = cfg.suite.clone().unwrap_or_else(|| "all".into());
    let reports = run_suites(&suite, cfg, setup)?;
    let ok = reports.iter().all(|r| r.passed);
    let results = json!({ "suite": suite, "reports": reports });
    finish("verify", cfg, out, pass_if(ok), results, Vec::new())
}

pub fn cmd_ym(cfg: &RunConfig, setup: &Setup, out: &Path) -> Result<Outcome> {
    let bridge = YmBridge::new(setup.algebra.clone(), setup.gamma.clone());
    let mut rng = rng_from_seed(cfg.seed);
    let (chi, charges, p) = random_ym_input(&bridge, &setup.marks, &mut rng, cfg.xi_scale)?;
    let (field, res) = ym_residuals(&bridge, &setup.marks, &chi, &charges, &p)?;
    let mut files = vec![write_json(out, "field.json", &field)?];

    let alg = &setup.algebra;
    let xs: Vec<f64> = cfg.time_grid.points().iter().map(|t| t / cfg.time_grid.t_end).collect();
    let twist = if setup.gamma.is_identity() { GroupTwist::Identity } else { GroupTwist::Conjugation };
    let chi_m = alg.to_matrix(&alg.cartan_element(&chi));
    let mut gauge = Value::Null;
    let mut gauge_ok = true;
    let line = if twist == GroupTwist::Identity && alg.family() == crate::lie::Family::A {
        // Dress the constant field by a periodic gauge, then recover χ.
        let g0 = random_group_element(alg, &mut rng, 1.0);
        let v = alg.to_matrix(&random_algebra_vector(alg, &mut rng, 0.5));
        let f = move |_x: f64| chi_m.clone();
        let a = ConnectionSample::from_fn(dressed_connection(f, g0.clone(), v), GroupTwist::Identity);
        let fix = gauge_to_constant(alg.clone(), &a, &[0.5], WilsonTolerance::default())?;
        let err = fix.chi.iter().zip(&chi).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
        gauge_ok = err < 1e-9;
        gauge = json!({"recovered_chi": fix.chi, "chi_error": err});
        wilson_line(&a, &xs, WilsonTolerance::default())?
    } else {
        let a = ConnectionSample::constant(chi_m, twist);
        wilson_line(&a, &xs, WilsonTolerance::default())?
    };
    files.push(write_wilson_csv(out, "wilson.csv", &line)?);
    files.push(write_gnuplot(out, "wilson.gp", &wilson_plot(alg.matrix_size()))?);
    let unit = line.ys.iter().map(crate::linalg::unitarity_defect).fold(0.0, f64::max);

    let tol = cfg.tolerances.check;
    let ok = res.round_trip < 1e-12 && res.jump < tol && res.energy < 1e-12 && res.theta < tol && gauge_ok && unit < 1e-9;
    let results = json!({
        "chi": chi,
        "p": p,
        "residuals": res,
        "gauge_fixing": gauge,
        "wilson_unitarity_defect": unit,
    });
    finish("ym", cfg, out, pass_if(ok), results, files)
}

pub fn cmd_spectrum(cfg: &RunConfig, setup: &Setup, out: &Path) -> Result<Outcome> {
    let spec = cfg
        .spectrum
        .as_ref()
        .ok_or_else(|| Error::InvalidInput("spectrum needs a `spectrum` section with a cutoff".into()))?;
    let lattice = WeightLattice::new(&setup.algebra)?;
    let n = setup.coupling.n();
    let r = lattice.rank();
    let nu: Vec<WeightVector> = match &spec.nu {
        Some(v) => v.iter().map(|l| WeightVector::new(l.clone())).collect(),
        None => vec![WeightVector::zero(r); n],
    };
    let levels = enumerate_levels(&lattice, setup.gamma.permutation(), setup.coupling.lambdas(), &nu, spec.cutoff)?;
    let files = vec![write_spectrum_csv(out, "spectrum.csv", &levels, n, r)?, write_gnuplot(out, "spectrum.gp", SPECTRUM_PLOT)?];
    let results = json!({
        "cutoff": spec.cutoff,
        "levels": levels.len(),
        "total_multiplicity": levels.iter().map(|l| l.multiplicity).sum::<u64>(),
        "weyl_constant": weyl_constant(&lattice),
        "ground_energy": levels.first().map(|l| l.energy),
    });
    finish("spectrum", cfg, out, Status::Pass, results, files)
}
