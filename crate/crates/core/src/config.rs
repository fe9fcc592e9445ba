//! Run configuration shared by the command-line subcommands.

use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lie::{AlgebraVector, DiagramAutomorphism, Family, SimpleLieAlgebra};
use crate::ode::Tolerances;
use crate::product::{CouplingVector, ProductSpace};
use crate::ym::coupling_from_marks;

pub const CONFIG_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlgebraSpec {
    pub family: String,
    pub rank: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ToleranceSpec {
    pub rtol: f64,
    pub atol: f64,
    /// Identity checks (Hamiltonian forms, brackets, jump conditions).
    pub check: f64,
    /// Projection vs integrated trajectories.
    pub trajectory: f64,
}

impl Default for ToleranceSpec {
    fn default() -> Self {
        ToleranceSpec { rtol: 1e-12, atol: 1e-12, check: 1e-10, trajectory: 1e-6 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TimeGrid {
    pub t_end: f64,
    pub steps: usize,
}

impl Default for TimeGrid {
    fn default() -> Self {
        TimeGrid { t_end: 1.0, steps: 20 }
    }
}

impl TimeGrid {
    pub fn points(&self) -> Vec<f64> {
        (0..=self.steps).map(|i| self.t_end * i as f64 / self.steps as f64).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpectrumSpec {
    pub cutoff: f64,
    /// Dynkin labels of `ν_k`; all zero when omitted.
    #[serde(default)]
    pub nu: Option<Vec<Vec<i64>>>,
}

/// A complete run description. Exactly one of `lambdas` and `marks` is given.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub schema_version: u32,
    pub algebra: AlgebraSpec,
    #[serde(default = "default_order")]
    pub gamma_order: usize,
    #[serde(default)]
    pub n: Option<usize>,
    #[serde(default)]
    pub lambdas: Option<Vec<f64>>,
    #[serde(default)]
    pub marks: Option<Vec<f64>>,
    /// One algebra element per site; random orbit points are drawn from these.
    #[serde(default)]
    pub orbit_seeds: Option<Vec<Vec<f64>>>,
    /// Scale of random spin vectors when no orbit seeds are given. 0 gives `ξ⃗ = 0`.
    #[serde(default = "default_scale")]
    pub xi_scale: f64,
    #[serde(default = "default_scale")]
    pub p_scale: f64,
    #[serde(default)]
    pub tolerances: ToleranceSpec,
    #[serde(default)]
    pub time_grid: TimeGrid,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_samples")]
    pub samples: usize,
    #[serde(default)]
    pub suite: Option<String>,
    #[serde(default)]
    pub spectrum: Option<SpectrumSpec>,
    #[serde(default)]
    pub out_dir: Option<String>,
}

fn default_order() -> usize {
    1
}
fn default_scale() -> f64 {
    0.7
}
fn default_samples() -> usize {
    20
}

/// Marks with the prescribed couplings: `x_1 = 1/(2λ_1)`, `x_k − x_{k−1} = 1/λ_k`.
pub fn marks_from_lambdas(c: &CouplingVector) -> Vec<f64> {
    let mut x = 0.5 / c.lambda(0);
    let mut out = vec![x];
    for k in 1..c.n() {
        x += 1.0 / c.lambda(k);
        out.push(x);
    }
    out
}

/// Validated objects built from a [`RunConfig`].
#[derive(Debug, Clone)]
pub struct Setup {
    pub algebra: Arc<SimpleLieAlgebra>,
    pub gamma: Arc<DiagramAutomorphism>,
    pub coupling: CouplingVector,
    pub marks: Vec<f64>,
}

impl Setup {
    pub fn space(&self) -> Result<ProductSpace> {
        ProductSpace::new(self.algebra.clone(), self.gamma.clone(), self.coupling.clone())
    }
}

impl RunConfig {
    pub fn from_json(s: &str) -> Result<Self> {
        let cfg: RunConfig = serde_json::from_str(s)?;
        cfg.check_version()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    fn check_version(&self) -> Result<()> {
        if self.schema_version != CONFIG_SCHEMA_VERSION {
            return Err(Error::InvalidInput(format!(
                "config schema_version {} is not supported (expected {CONFIG_SCHEMA_VERSION})",
                self.schema_version
            )));
        }
        Ok(())
    }

    /// Minimal config for an algebra with the given couplings.
    pub fn new(family: &str, rank: usize, lambdas: Vec<f64>) -> Self {
        RunConfig {
            schema_version: CONFIG_SCHEMA_VERSION,
            algebra: AlgebraSpec { family: family.into(), rank },
            gamma_order: 1,
            n: None,
            lambdas: Some(lambdas),
            marks: None,
            orbit_seeds: None,
            xi_scale: default_scale(),
            p_scale: default_scale(),
            tolerances: ToleranceSpec::default(),
            time_grid: TimeGrid::default(),
            seed: 0,
            samples: default_samples(),
            suite: None,
            spectrum: None,
            out_dir: None,
        }
    }

    pub fn ode_tolerances(&self) -> Tolerances {
        Tolerances { rtol: self.tolerances.rtol, atol: self.tolerances.atol, ..Tolerances::default() }
    }

    pub fn setup(&self) -> Result<Setup> {
        self.check_version()?;
        let t = &self.tolerances;
        if [t.rtol, t.atol, t.check, t.trajectory].iter().any(|v| !(*v > 0.0) || !v.is_finite()) {
            return Err(Error::InvalidInput("tolerances must be positive and finite".into()));
        }
        if !(self.time_grid.t_end.is_finite()) || self.time_grid.steps == 0 {
            return Err(Error::InvalidInput("time grid needs a finite end and at least one step".into()));
        }
        if self.xi_scale < 0.0 || self.p_scale < 0.0 {
            return Err(Error::InvalidInput("scales must be nonnegative".into()));
        }
        let family: Family = self.algebra.family.parse()?;
        let algebra = Arc::new(SimpleLieAlgebra::build(family, self.algebra.rank)?);
        let gamma = Arc::new(DiagramAutomorphism::standard(&algebra, self.gamma_order)?);
        let (coupling, marks) = match (&self.lambdas, &self.marks) {
            (Some(l), None) => {
                let c = CouplingVector::new(l.clone())?;
                let m = marks_from_lambdas(&c);
                (c, m)
            }
            (None, Some(m)) => (coupling_from_marks(m)?, m.clone()),
            _ => return Err(Error::InvalidInput("exactly one of `lambdas` and `marks` must be given".into())),
        };
        if let Some(n) = self.n {
            if n != coupling.n() {
                return Err(Error::DimensionMismatch { expected: n, got: coupling.n() });
            }
        }
        if let Some(seeds) = &self.orbit_seeds {
            if seeds.len() != coupling.n() {
                return Err(Error::DimensionMismatch { expected: coupling.n(), got: seeds.len() });
            }
            for s in seeds {
                algebra.check_dim(&AlgebraVector::from_column_slice(s))?;
            }
        }
        Ok(Setup { algebra, gamma, coupling, marks })
    }
}
