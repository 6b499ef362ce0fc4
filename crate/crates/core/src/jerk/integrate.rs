use serde::Serialize;

use super::{CompiledSystem, JerkError, JerkSystemSpec, State3};
use crate::fracops::{d_dt, Grid, SampledFunction};
use crate::variational::ResidualReport;

/// A state component beyond this magnitude marks the orbit as diverged.
pub const DIVERGENCE_BOUND: f64 = 1e8;

/// Nodes dropped at each end of an equation-of-motion residual. Three
/// nested difference stencils each reach one node further in from the ends.
const EOM_EXCLUDED: usize = 3;

fn axpy(s: [f64; 3], h: f64, k: [f64; 3]) -> [f64; 3] {
    [s[0] + h * k[0], s[1] + h * k[1], s[2] + h * k[2]]
}

pub(crate) fn rk4_step(sys: &CompiledSystem, s: [f64; 3], h: f64) -> Option<[f64; 3]> {
    let k1 = sys.field(s).ok()?;
    let k2 = sys.field(axpy(s, 0.5 * h, k1)).ok()?;
    let k3 = sys.field(axpy(s, 0.5 * h, k2)).ok()?;
    let k4 = sys.field(axpy(s, h, k3)).ok()?;
    let next = [0, 1, 2].map(|i| s[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]));
    in_bounds(next).then_some(next)
}

pub(crate) fn in_bounds(s: [f64; 3]) -> bool {
    s.iter()
        .all(|c| c.is_finite() && c.abs() <= DIVERGENCE_BOUND)
}

/// Sampled solution of a jerk system.
///
/// When the orbit leaves the divergence bound, `states` stops just before
/// the offending step and `diverged_at` holds that step's node index.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    grid: Grid,
    states: Vec<State3>,
    diverged_at: Option<usize>,
}

#[derive(Serialize)]
struct Row {
    t: f64,
    x: f64,
    v: f64,
    a: f64,
}

#[derive(Serialize)]
struct TrajectoryJson {
    grid: Grid,
    diverged_at: Option<usize>,
    samples: Vec<Row>,
}

impl Trajectory {
    /// A bounded trajectory from one state per grid node.
    pub fn from_states(grid: Grid, states: Vec<State3>) -> Result<Self, JerkError> {
        if states.len() != grid.n() {
            return Err(JerkError::InvalidParameter {
                name: "states",
                detail: format!("expected {} states, got {}", grid.n(), states.len()),
            });
        }
        if let Some(k) = states.iter().position(|s| !in_bounds(s.to_array())) {
            return Err(JerkError::InvalidParameter {
                name: "states",
                detail: format!("state {k} is not finite or exceeds {DIVERGENCE_BOUND:e}"),
            });
        }
        Ok(Trajectory {
            grid,
            states,
            diverged_at: None,
        })
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn states(&self) -> &[State3] {
        &self.states
    }

    pub fn diverged_at(&self) -> Option<usize> {
        self.diverged_at
    }

    pub fn is_diverged(&self) -> bool {
        self.diverged_at.is_some()
    }

    /// Positions as a sampled function on the full grid.
    pub fn positions(&self) -> Result<SampledFunction, JerkError> {
        if let Some(step) = self.diverged_at {
            return Err(JerkError::Diverged { step });
        }
        let xs = self.states.iter().map(|s| s.x).collect();
        Ok(SampledFunction::from_real(self.grid, xs)?)
    }

    fn rows(&self) -> impl Iterator<Item = Row> + '_ {
        self.states.iter().enumerate().map(|(k, s)| Row {
            t: self.grid.node(k),
            x: s.x,
            v: s.v,
            a: s.w2,
        })
    }

    /// CSV with header `t,x,v,a`, where `a` is the acceleration `x″`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,x,v,a\n");
        for r in self.rows() {
            out.push_str(&format!(
                "{:.16e},{:.16e},{:.16e},{:.16e}\n",
                r.t, r.x, r.v, r.a
            ));
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&TrajectoryJson {
            grid: self.grid,
            diverged_at: self.diverged_at,
            samples: self.rows().collect(),
        })
        .expect("trajectory serializes")
    }
}

/// Fixed-step RK4 over `grid`, starting from `s0` at `grid.a()`.
///
/// Divergence is reported in the trajectory, not as an error. A
/// right-hand side that cannot be evaluated (say `ln` of a negative
/// number) also counts as divergence.
pub fn integrate_rk4(
    sys: &JerkSystemSpec,
    s0: State3,
    grid: Grid,
) -> Result<Trajectory, JerkError> {
    let (states, diverged_at) = integrate_steps(sys, s0, grid.h(), grid.n() - 1)?;
    Ok(Trajectory {
        grid,
        states,
        diverged_at,
    })
}

/// `steps` RK4 steps of size `h` from `s0`. A negative `h` integrates
/// backwards in time. Returns the visited states, `s0` included, and the
/// index of the first state that left the bound.
pub fn integrate_steps(
    sys: &JerkSystemSpec,
    s0: State3,
    h: f64,
    steps: usize,
) -> Result<(Vec<State3>, Option<usize>), JerkError> {
    if !in_bounds(s0.to_array()) {
        return Err(JerkError::InvalidParameter {
            name: "initial state",
            detail: format!("{s0:?} is not finite or exceeds {DIVERGENCE_BOUND:e}"),
        });
    }
    if !(h.is_finite() && h != 0.0) {
        return Err(JerkError::InvalidParameter {
            name: "h",
            detail: format!("step must be finite and nonzero, got {h}"),
        });
    }
    let compiled = sys.compile()?;
    let mut states = Vec::with_capacity(steps + 1);
    let mut s = s0.to_array();
    states.push(s0);
    for k in 1..=steps {
        match rk4_step(&compiled, s, h) {
            Some(next) => {
                s = next;
                states.push(State3::from_array(s));
            }
            None => return Ok((states, Some(k))),
        }
    }
    Ok((states, None))
}

/// `x‴ − J(x, x′, x″)` with every derivative rebuilt from the position
/// samples by [`d_dt`]. Three nodes are excluded at each end of the
/// reported norm.
pub fn eom_residual(sys: &JerkSystemSpec, tr: &Trajectory) -> Result<ResidualReport, JerkError> {
    let x = tr.positions()?;
    if x.len() < 2 * EOM_EXCLUDED + 1 {
        return Err(JerkError::InvalidParameter {
            name: "grid",
            detail: format!(
                "need at least {} nodes, got {}",
                2 * EOM_EXCLUDED + 1,
                x.len()
            ),
        });
    }
    let v = d_dt(&x);
    let acc = d_dt(&v);
    let jerk = d_dt(&acc);
    let compiled = sys.compile()?;
    let mut values = Vec::with_capacity(x.len());
    for k in 0..x.len() {
        let s = [x.values()[k].re, v.values()[k].re, acc.values()[k].re];
        values.push(jerk.values()[k].re - compiled.jerk(s)?);
    }
    let residual = SampledFunction::from_real(*x.grid(), values)?;
    Ok(ResidualReport::new(residual, EOM_EXCLUDED))
}
