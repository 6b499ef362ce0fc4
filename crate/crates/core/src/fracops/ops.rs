use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use super::gamma::gamma;
use super::{FractionalOrder, SampledFunction};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// `(k+1)^β − k^β` for `k ≥ 1`, without cancellation.
fn forward_difference(k: usize, beta: f64) -> f64 {
    let k = k as f64;
    k.powf(beta) * (beta * (1.0 / k).ln_1p()).exp_m1()
}

/// `(k+1)^β − 2k^β + (k−1)^β` for `k ≥ 1`.
fn second_difference(k: usize, beta: f64) -> f64 {
    let x = 1.0 / k as f64;
    let down = if k == 1 {
        -1.0
    } else {
        (beta * (-x).ln_1p()).exp_m1()
    };
    (k as f64).powf(beta) * ((beta * x.ln_1p()).exp_m1() + down)
}

/// Left Riemann-Liouville integral `ₐJ_t^α f`.
///
/// Node 0 maps to 0; at `α = 1` this is the cumulative trapezoidal rule.
pub fn rl_integral_left(f: &SampledFunction, alpha: FractionalOrder) -> SampledFunction {
    let grid = *f.grid();
    let values = f.values();
    let n = values.len();
    let h = grid.h();
    let mut out = vec![ZERO; n];
    if alpha.is_integer() {
        for m in 1..n {
            out[m] = out[m - 1] + (values[m - 1] + values[m]) * (0.5 * h);
        }
        return SampledFunction::from_parts(grid, out);
    }
    let a = alpha.value();
    let beta = a + 1.0;
    // interior weights depend only on the node distance m - j
    let interior: Vec<f64> = (0..n)
        .map(|k| {
            if k == 0 {
                0.0
            } else {
                second_difference(k, beta)
            }
        })
        .collect();
    let scale = h.powf(a) / gamma(a + 2.0);
    for m in 1..n {
        let mf = m as f64;
        let first = (mf - 1.0).powf(beta) - (mf - 1.0 - a) * mf.powf(a);
        let mut acc = values[0] * first + values[m];
        for j in 1..m {
            acc += values[j] * interior[m - j];
        }
        out[m] = acc * scale;
    }
    SampledFunction::from_parts(grid, out)
}

/// Right Riemann-Liouville integral `ₜJ_b^α f`, by reflection.
pub fn rl_integral_right(f: &SampledFunction, alpha: FractionalOrder) -> SampledFunction {
    rl_integral_left(&f.reflected(), alpha).reflected()
}

/// Left Caputo derivative `ₐᶜD_t^α f` by the L1 scheme.
///
/// Node 0 is 0. At `α = 1` this is [`d_dt`].
pub fn caputo_left(f: &SampledFunction, alpha: FractionalOrder) -> SampledFunction {
    if alpha.is_integer() {
        return d_dt(f);
    }
    let grid = *f.grid();
    let values = f.values();
    let n = values.len();
    let gamma_exp = 1.0 - alpha.value();
    let weights: Vec<f64> = (0..n)
        .map(|k| {
            if k == 0 {
                1.0
            } else {
                forward_difference(k, gamma_exp)
            }
        })
        .collect();
    let increments: Vec<Complex64> = values.windows(2).map(|w| w[1] - w[0]).collect();
    let scale = grid.h().powf(-alpha.value()) / gamma(2.0 - alpha.value());
    let mut out = vec![ZERO; n];
    for m in 1..n {
        let mut acc = ZERO;
        for (j, d) in increments[..m].iter().enumerate() {
            acc += d * weights[m - 1 - j];
        }
        out[m] = acc * scale;
    }
    SampledFunction::from_parts(grid, out)
}

/// Right Caputo derivative `ₜᶜD_b^α f`, including its `(−1)` sign.
pub fn caputo_right(f: &SampledFunction, alpha: FractionalOrder) -> SampledFunction {
    caputo_left(&f.reflected(), alpha).reflected()
}

/// Left Riemann-Liouville derivative `d/dt ₐJ_t^{1−α} f`.
///
/// For `α < 1` node 0 approximates a generally singular limit and is
/// flagged in [`SampledFunction::boundary_inaccurate`].
pub fn rl_deriv_left(f: &SampledFunction, alpha: FractionalOrder) -> SampledFunction {
    match alpha.complement() {
        None => d_dt(f),
        Some(c) => d_dt(&rl_integral_left(f, c)).flag_inaccurate(0),
    }
}

/// Right Riemann-Liouville derivative `−d/dt ₜJ_b^{1−α} f`; the last node
/// is flagged for `α < 1`.
pub fn rl_deriv_right(f: &SampledFunction, alpha: FractionalOrder) -> SampledFunction {
    rl_deriv_left(&f.reflected(), alpha).reflected()
}

/// Left Grünwald-Letnikov derivative with weights `(−1)^k C(α, k)`.
///
/// Node 0 is `f(a) h^{−α}` and is flagged.
pub fn gl_deriv_left(f: &SampledFunction, alpha: FractionalOrder) -> SampledFunction {
    let grid = *f.grid();
    let values = f.values();
    let n = values.len();
    let a = alpha.value();
    let mut weights = vec![1.0; n];
    for k in 1..n {
        weights[k] = weights[k - 1] * (1.0 - (a + 1.0) / k as f64);
    }
    let scale = grid.h().powf(-a);
    let out = (0..n)
        .map(|m| {
            let mut acc = ZERO;
            for k in 0..=m {
                acc += values[m - k] * weights[k];
            }
            acc * scale
        })
        .collect();
    SampledFunction::from_parts(grid, out).flag_inaccurate(0)
}

/// First derivative: centered differences inside, second-order one-sided
/// stencils at both ends.
pub fn d_dt(f: &SampledFunction) -> SampledFunction {
    let grid = *f.grid();
    let v = f.values();
    let n = v.len();
    let inv = 1.0 / (2.0 * grid.h());
    let mut out = vec![ZERO; n];
    out[0] = (v[0] * -3.0 + v[1] * 4.0 - v[2]) * inv;
    for k in 1..n - 1 {
        out[k] = (v[k + 1] - v[k - 1]) * inv;
    }
    out[n - 1] = (v[n - 1] * 3.0 - v[n - 2] * 4.0 + v[n - 3]) * inv;
    SampledFunction::from_parts(grid, out)
}

/// The operators by name, for command-line and configuration use.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Operator {
    RlIntegralLeft,
    RlIntegralRight,
    CaputoLeft,
    CaputoRight,
    RlDerivLeft,
    RlDerivRight,
    GlDerivLeft,
    DDt,
}

impl Operator {
    pub const ALL: [Operator; 8] = [
        Operator::RlIntegralLeft,
        Operator::RlIntegralRight,
        Operator::CaputoLeft,
        Operator::CaputoRight,
        Operator::RlDerivLeft,
        Operator::RlDerivRight,
        Operator::GlDerivLeft,
        Operator::DDt,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Operator::RlIntegralLeft => "rl-integral-left",
            Operator::RlIntegralRight => "rl-integral-right",
            Operator::CaputoLeft => "caputo-left",
            Operator::CaputoRight => "caputo-right",
            Operator::RlDerivLeft => "rl-deriv-left",
            Operator::RlDerivRight => "rl-deriv-right",
            Operator::GlDerivLeft => "gl-deriv-left",
            Operator::DDt => "d-dt",
        }
    }

    /// `alpha` is ignored by [`Operator::DDt`].
    pub fn apply(self, f: &SampledFunction, alpha: FractionalOrder) -> SampledFunction {
        match self {
            Operator::RlIntegralLeft => rl_integral_left(f, alpha),
            Operator::RlIntegralRight => rl_integral_right(f, alpha),
            Operator::CaputoLeft => caputo_left(f, alpha),
            Operator::CaputoRight => caputo_right(f, alpha),
            Operator::RlDerivLeft => rl_deriv_left(f, alpha),
            Operator::RlDerivRight => rl_deriv_right(f, alpha),
            Operator::GlDerivLeft => gl_deriv_left(f, alpha),
            Operator::DDt => d_dt(f),
        }
    }
}

impl fmt::Display for Operator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Operator {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Operator::ALL
            .into_iter()
            .find(|op| op.name() == s)
            .ok_or_else(|| {
                let names: Vec<_> = Operator::ALL.iter().map(|o| o.name()).collect();
                format!(
                    "unknown operator '{s}', expected one of {}",
                    names.join(", ")
                )
            })
    }
}
