use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::integrate::{in_bounds, rk4_step};
use super::{CompiledSystem, JerkError, JerkSystemSpec, State3};

/// Run lengths and step for a Benettin estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LyapunovParams {
    pub t_transient: f64,
    pub t_measure: f64,
    pub h: f64,
    pub renorm_every: usize,
}

impl Default for LyapunovParams {
    fn default() -> Self {
        LyapunovParams {
            t_transient: 100.0,
            t_measure: 1000.0,
            h: 0.01,
            renorm_every: 10,
        }
    }
}

impl LyapunovParams {
    fn validate(&self) -> Result<(usize, usize), JerkError> {
        let bad = |name, detail: String| Err(JerkError::InvalidParameter { name, detail });
        if !(self.h.is_finite() && self.h > 0.0) {
            return bad("h", format!("must be positive, got {}", self.h));
        }
        if !(self.t_transient.is_finite() && self.t_transient >= 0.0) {
            return bad(
                "t_transient",
                format!("must be non-negative, got {}", self.t_transient),
            );
        }
        if !(self.t_measure.is_finite() && self.t_measure > 0.0) {
            return bad(
                "t_measure",
                format!("must be positive, got {}", self.t_measure),
            );
        }
        if self.renorm_every == 0 {
            return bad("renorm_every", "must be at least 1".into());
        }
        let measure = (self.t_measure / self.h).round() as usize;
        if measure == 0 {
            return bad("t_measure", format!("shorter than one step of {}", self.h));
        }
        Ok(((self.t_transient / self.h).round() as usize, measure))
    }
}

type Pair = ([f64; 3], [f64; 3]);

fn tangent_field(sys: &CompiledSystem, (s, d): Pair) -> Option<Pair> {
    let grad = sys.gradient(s).ok()?;
    let ds = sys.field(s).ok()?;
    let dd = [d[1], d[2], grad[0] * d[0] + grad[1] * d[1] + grad[2] * d[2]];
    Some((ds, dd))
}

fn shift((s, d): Pair, h: f64, (ks, kd): Pair) -> Pair {
    (
        [0, 1, 2].map(|i| s[i] + h * ks[i]),
        [0, 1, 2].map(|i| d[i] + h * kd[i]),
    )
}

/// One RK4 step of the orbit together with its linearization.
fn tangent_step(sys: &CompiledSystem, p: Pair, h: f64) -> Option<Pair> {
    let k1 = tangent_field(sys, p)?;
    let k2 = tangent_field(sys, shift(p, 0.5 * h, k1))?;
    let k3 = tangent_field(sys, shift(p, 0.5 * h, k2))?;
    let k4 = tangent_field(sys, shift(p, h, k3))?;
    let combine = |y: [f64; 3], a: [f64; 3], b: [f64; 3], c: [f64; 3], e: [f64; 3]| {
        [0, 1, 2].map(|i| y[i] + h / 6.0 * (a[i] + 2.0 * b[i] + 2.0 * c[i] + e[i]))
    };
    let s = combine(p.0, k1.0, k2.0, k3.0, k4.0);
    let d = combine(p.1, k1.1, k2.1, k3.1, k4.1);
    (in_bounds(s) && d.iter().all(|c| c.is_finite())).then_some((s, d))
}

/// Scales `d` to unit length and returns the factor it had.
fn renormalize(d: &mut [f64; 3]) -> f64 {
    let norm = d.iter().map(|c| c * c).sum::<f64>().sqrt();
    for c in d.iter_mut() {
        *c /= norm;
    }
    norm
}

/// Largest Lyapunov exponent by the Benettin method.
///
/// The orbit is first advanced for `t_transient`, then co-integrated with
/// its tangent vector for `t_measure`. The tangent starts at `(1, 0, 0)`
/// and is rescaled to unit length every `renorm_every` steps; the exponent
/// is the accumulated log growth divided by the measured time. The
/// Jacobian comes from symbolic differentiation of the right-hand side.
pub fn largest_lyapunov(
    sys: &JerkSystemSpec,
    s0: State3,
    params: &LyapunovParams,
) -> Result<f64, JerkError> {
    benettin(sys, s0, params, |_| {})
}

fn benettin(
    sys: &JerkSystemSpec,
    s0: State3,
    params: &LyapunovParams,
    mut on_renorm: impl FnMut(&[f64; 3]),
) -> Result<f64, JerkError> {
    let (transient, measure) = params.validate()?;
    if !in_bounds(s0.to_array()) {
        return Err(JerkError::InvalidParameter {
            name: "initial state",
            detail: format!("{s0:?} is not finite or out of bounds"),
        });
    }
    let compiled = sys.compile()?;
    let h = params.h;
    let mut s = s0.to_array();
    for step in 1..=transient {
        s = rk4_step(&compiled, s, h).ok_or(JerkError::Diverged { step })?;
    }
    let mut d = [1.0, 0.0, 0.0];
    let mut log_growth = 0.0;
    for k in 1..=measure {
        (s, d) = tangent_step(&compiled, (s, d), h).ok_or(JerkError::Diverged {
            step: transient + k,
        })?;
        if k % params.renorm_every == 0 || k == measure {
            let norm = renormalize(&mut d);
            if !(norm > 0.0 && norm.is_finite()) {
                return Err(JerkError::Diverged {
                    step: transient + k,
                });
            }
            log_growth += norm.ln();
            on_renorm(&d);
        }
    }
    Ok(log_growth / (measure as f64 * h))
}

/// `start, start + step, …` up to `stop` inclusive, each value computed
/// from its index so that rounding does not accumulate.
pub fn a_range(start: f64, stop: f64, step: f64) -> Result<Vec<f64>, JerkError> {
    if !(step.is_finite() && step > 0.0 && start.is_finite() && stop.is_finite() && start <= stop) {
        return Err(JerkError::InvalidParameter {
            name: "A range",
            detail: format!("need start <= stop and step > 0, got {start}..{stop} by {step}"),
        });
    }
    let count = ((stop - start) / step + 1e-9).floor() as usize;
    Ok((0..=count).map(|k| start + k as f64 * step).collect())
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    /// The system at some `A`; every sweep point rebinds `A`.
    pub system: JerkSystemSpec,
    pub a_values: Vec<f64>,
    pub initial_states: Vec<State3>,
    pub params: LyapunovParams,
}

/// Result at one parameter value: the largest exponent over the initial
/// states whose orbits stayed bounded, and whether all of them diverged.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepPoint {
    #[serde(rename = "A")]
    pub a: f64,
    pub lyapunov: Option<f64>,
    pub diverged: bool,
}

/// Runs the points in parallel on the current rayon pool. The output is
/// sorted by `A`.
pub fn sweep(config: &SweepConfig) -> Result<Vec<SweepPoint>, JerkError> {
    config.params.validate()?;
    if config.initial_states.is_empty() {
        return Err(JerkError::InvalidParameter {
            name: "initial states",
            detail: "need at least one".into(),
        });
    }
    let mut points = config
        .a_values
        .par_iter()
        .map(|&a| {
            let sys = config.system.with_a(a)?;
            let mut best: Option<f64> = None;
            for &s0 in &config.initial_states {
                match largest_lyapunov(&sys, s0, &config.params) {
                    Ok(l) => best = Some(best.map_or(l, |b| b.max(l))),
                    Err(JerkError::Diverged { .. }) => {}
                    Err(e) => return Err(e),
                }
            }
            Ok(SweepPoint {
                a,
                lyapunov: best,
                diverged: best.is_none(),
            })
        })
        .collect::<Result<Vec<_>, JerkError>>()?;
    points.sort_by(|p, q| p.a.total_cmp(&q.a));
    Ok(points)
}

/// CSV with header `A,lyapunov,diverged`; a fully diverged point has an
/// empty exponent field.
pub fn sweep_to_csv(points: &[SweepPoint]) -> String {
    let mut out = String::from("A,lyapunov,diverged\n");
    for p in points {
        let l = p.lyapunov.map(|l| format!("{l:.16e}")).unwrap_or_default();
        out.push_str(&format!("{:.16e},{l},{}\n", p.a, p.diverged));
    }
    out
}

pub fn sweep_to_json(points: &[SweepPoint]) -> String {
    serde_json::to_string(points).expect("sweep points serialize")
}
