//! Adaptive Dormand–Prince 5(4) integration with output on a fixed grid.

use crate::error::{Error, Result};
use crate::linalg::RVec;

#[derive(Debug, Clone, Copy)]
pub struct Tolerances {
    pub rtol: f64,
    pub atol: f64,
    pub max_steps: usize,
    pub min_step: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            rtol: 1e-12,
            atol: 1e-12,
            max_steps: 1_000_000,
            min_step: 1e-14,
        }
    }
}

/// Why an integration stopped before the end of the grid.
#[derive(Debug, Clone, PartialEq)]
pub enum Stop {
    Completed,
    /// The right-hand side refused the state (e.g. it left the alcove).
    Truncated {
        t: f64,
        reason: String,
    },
}

pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<RVec>,
    pub stop: Stop,
}

const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
const B5: [f64; 7] = [
    35.0 / 384.0,
    0.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
    0.0,
];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

/// Integrates `y' = f(t, y)` and records the state at each grid time.
///
/// An `Err` from `f` that signals a non-generic state (exit class 3) truncates
/// the trajectory; any other error is propagated.
pub fn integrate<F>(f: F, y0: &RVec, grid: &[f64], tol: Tolerances) -> Result<Trajectory>
where
    F: Fn(f64, &RVec) -> Result<RVec>,
{
    let mut times = vec![grid[0]];
    let mut states = vec![y0.clone()];
    let mut t = grid[0];
    let mut y = y0.clone();
    let mut h = if grid.len() > 1 {
        (grid[1] - grid[0]) / 10.0
    } else {
        1e-3
    };
    let mut steps = 0usize;
    let truncate = |e: Error, t: f64, times: Vec<f64>, states: Vec<RVec>| -> Result<Trajectory> {
        if e.exit_code() == 3 {
            Ok(Trajectory {
                times,
                states,
                stop: Stop::Truncated {
                    t,
                    reason: e.to_string(),
                },
            })
        } else {
            Err(e)
        }
    };
    let mut k1 = match f(t, &y) {
        Ok(v) => v,
        Err(e) => return truncate(e, t, times, states),
    };
    for &target in &grid[1..] {
        while t < target {
            steps += 1;
            if steps > tol.max_steps {
                return Err(Error::Numerical("step budget exhausted".into()));
            }
            let last = target - t <= h;
            let hh = if last { target - t } else { h };
            let mut k: Vec<RVec> = Vec::with_capacity(7);
            k.push(k1.clone());
            let mut failed = None;
            for s in 1..7 {
                let mut ys = y.clone();
                for (j, kj) in k.iter().enumerate() {
                    if A[s][j] != 0.0 {
                        ys.axpy(hh * A[s][j], kj, 1.0);
                    }
                }
                match f(t + C[s] * hh, &ys) {
                    Ok(v) => k.push(v),
                    Err(e) => {
                        failed = Some(e);
                        break;
                    }
                }
            }
            if let Some(e) = failed {
                if e.exit_code() != 3 {
                    return Err(e);
                }
                // a stage left the admissible region: shrink, or stop if tiny
                h = hh * 0.25;
                if h < tol.min_step {
                    return truncate(e, t, times, states);
                }
                continue;
            }
            let mut y5 = y.clone();
            let mut err = RVec::zeros(y.len());
            for s in 0..7 {
                y5.axpy(hh * B5[s], &k[s], 1.0);
                err.axpy(hh * (B5[s] - B4[s]), &k[s], 1.0);
            }
            let mut e2 = 0.0;
            for i in 0..y.len() {
                let sc = tol.atol + tol.rtol * y[i].abs().max(y5[i].abs());
                e2 += (err[i] / sc).powi(2);
            }
            let en = (e2 / y.len().max(1) as f64).sqrt();
            if en <= 1.0 {
                t = if last { target } else { t + hh };
                y = y5;
                k1 = k[6].clone();
                let fac = if en == 0.0 {
                    5.0
                } else {
                    (0.9 * en.powf(-0.2)).clamp(0.2, 5.0)
                };
                if !last {
                    h = hh * fac;
                } else {
                    h = h.max(hh * fac);
                }
            } else {
                h = hh * (0.9 * en.powf(-0.2)).clamp(0.1, 0.9);
                if h < tol.min_step {
                    return Err(Error::Numerical(format!("step size underflow at t = {t}")));
                }
            }
        }
        times.push(t);
        states.push(y.clone());
    }
    Ok(Trajectory {
        times,
        states,
        stop: Stop::Completed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn harmonic_oscillator() {
        let grid: Vec<f64> = (0..=10).map(|i| i as f64 * 0.5).collect();
        let y0 = RVec::from_vec(vec![1.0, 0.0]);
        let tr = integrate(
            |_, y| Ok(RVec::from_vec(vec![y[1], -y[0]])),
            &y0,
            &grid,
            Tolerances::default(),
        )
        .unwrap();
        for (t, y) in tr.times.iter().zip(&tr.states) {
            assert!((y[0] - t.cos()).abs() < 1e-10);
            assert!((y[1] + t.sin()).abs() < 1e-10);
        }
        assert_eq!(tr.stop, Stop::Completed);
    }

    #[test]
    fn truncates_on_non_generic_state() {
        let grid = [0.0, 1.0, 2.0];
        let y0 = RVec::from_vec(vec![0.0]);
        let tr = integrate(
            |_, y| {
                if y[0] > 1.5 {
                    Err(Error::NonGeneric("wall".into()))
                } else {
                    Ok(RVec::from_vec(vec![1.0]))
                }
            },
            &y0,
            &grid,
            Tolerances::default(),
        )
        .unwrap();
        assert_eq!(tr.times.len(), 2);
        assert!(matches!(tr.stop, Stop::Truncated { .. }));
    }
}
