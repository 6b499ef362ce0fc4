//! Third-order autonomous ODEs `x‴ = J(x, x′, x″)` ("jerk" systems), a
//! fixed-step RK4 integrator, equation-of-motion residuals and the largest
//! Lyapunov exponent.
//!
//! Four families are built in:
//!
//! | family       | right-hand side              |
//! |--------------|------------------------------|
//! | `c5_G`       | `−A·w2 − v + G(x)`           |
//! | `quad_vdot`  | `−A·w2 + v² − x`             |
//! | `quad_xvdot` | `−A·w2 + x·v − x`            |
//! | `quad_xacc`  | `−A·x·w2 + v² − x`           |
//!
//! with `v = x′` and `w2 = x″`.
//!
//! ```
//! use fracvar::fracops::Grid;
//! use fracvar::jerk::{integrate_rk4, JerkSystemSpec, State3};
//!
//! // x‴ = −x′ with x(0) = 0, x′(0) = 1, x″(0) = 0 is solved by sin t
//! let sys = JerkSystemSpec::c5(0.0, "0".parse().unwrap()).unwrap();
//! let grid = Grid::from_step(0.0, 1e-3, 10_001).unwrap();
//! let tr = integrate_rk4(&sys, State3::new(0.0, 1.0, 0.0), grid).unwrap();
//! let end = tr.states().last().unwrap();
//! assert!((end.x - 10f64.sin()).abs() < 1e-9);
//! ```

mod integrate;
mod lyapunov;
mod nonlinearity;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::expr::{CompiledExpr, Expr, ExprError};
use crate::fracops::FracError;

pub use integrate::{eom_residual, integrate_rk4, integrate_steps, Trajectory, DIVERGENCE_BOUND};
pub use lyapunov::{a_range, largest_lyapunov, sweep, LyapunovParams, SweepConfig, SweepPoint};
pub use lyapunov::{sweep_to_csv, sweep_to_json};
pub use nonlinearity::Nonlinearity;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum JerkError {
    #[error(transparent)]
    Expr(#[from] ExprError),
    #[error(transparent)]
    Grid(#[from] FracError),
    #[error("invalid system: {0}")]
    InvalidSpec(String),
    #[error("invalid parameter {name}: {detail}")]
    InvalidParameter { name: &'static str, detail: String },
    #[error("trajectory diverged at step {step}")]
    Diverged { step: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    #[serde(rename = "c5_G")]
    C5G,
    #[serde(rename = "quad_vdot")]
    QuadVdot,
    #[serde(rename = "quad_xvdot")]
    QuadXvdot,
    #[serde(rename = "quad_xacc")]
    QuadXacc,
}

impl Family {
    pub const ALL: [Family; 4] = [
        Family::C5G,
        Family::QuadVdot,
        Family::QuadXvdot,
        Family::QuadXacc,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::C5G => "c5_G",
            Family::QuadVdot => "quad_vdot",
            Family::QuadXvdot => "quad_xvdot",
            Family::QuadXacc => "quad_xacc",
        }
    }

    fn template(self) -> &'static str {
        match self {
            Family::C5G => "-A*w2 - v + G",
            Family::QuadVdot => "-A*w2 + v^2 - x",
            Family::QuadXvdot => "-A*w2 + x*v - x",
            Family::QuadXacc => "-A*x*w2 + v^2 - x",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = JerkError;

    fn from_str(s: &str) -> Result<Self, JerkError> {
        Family::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| {
                JerkError::InvalidSpec(format!(
                    "unknown system '{s}', expected c5_G, quad_vdot, quad_xvdot or quad_xacc"
                ))
            })
    }
}

/// Phase point `(x, x′, x″)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct State3 {
    pub x: f64,
    pub v: f64,
    pub w2: f64,
}

impl State3 {
    pub fn new(x: f64, v: f64, w2: f64) -> Self {
        State3 { x, v, w2 }
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.v.is_finite() && self.w2.is_finite()
    }

    pub(crate) fn to_array(self) -> [f64; 3] {
        [self.x, self.v, self.w2]
    }

    pub(crate) fn from_array(s: [f64; 3]) -> Self {
        State3::new(s[0], s[1], s[2])
    }
}

const STATE_VARS: [&str; 3] = ["x", "v", "w2"];

/// A jerk system with its parameter `A` bound into a right-hand side over
/// `(x, v, w2)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct JerkSystemSpec {
    pub name: String,
    #[serde(rename = "A")]
    a: f64,
    family: Family,
    #[serde(rename = "G", skip_serializing_if = "Option::is_none")]
    g: Option<Expr>,
    rhs: Expr,
}

impl JerkSystemSpec {
    /// Builds a member of `family`. `g` is required for `c5_G` and rejected
    /// otherwise.
    pub fn new(family: Family, a: f64, g: Option<Expr>) -> Result<Self, JerkError> {
        if !a.is_finite() {
            return Err(JerkError::InvalidParameter {
                name: "A",
                detail: format!("must be finite, got {a}"),
            });
        }
        let mut rhs = family
            .template()
            .parse::<Expr>()?
            .substitute("A", &Expr::real(a));
        match (&g, family) {
            (Some(g), Family::C5G) => {
                if let Some(bad) = g.free_vars().into_iter().find(|v| v != "x") {
                    return Err(JerkError::InvalidSpec(format!(
                        "G may only depend on x, found '{bad}'"
                    )));
                }
                rhs = rhs.substitute("G", g);
            }
            (None, Family::C5G) => {
                return Err(JerkError::InvalidSpec("family c5_G needs G(x)".into()));
            }
            (Some(_), _) => {
                return Err(JerkError::InvalidSpec(format!(
                    "family {family} takes no G(x)"
                )));
            }
            (None, _) => {}
        }
        Ok(JerkSystemSpec {
            name: family.name().to_string(),
            a,
            family,
            g,
            rhs: rhs.simplify(),
        })
    }

    /// `x‴ = −A x″ − x′ + G(x)`.
    pub fn c5(a: f64, g: Expr) -> Result<Self, JerkError> {
        JerkSystemSpec::new(Family::C5G, a, Some(g))
    }

    pub fn quad_vdot(a: f64) -> Self {
        JerkSystemSpec::new(Family::QuadVdot, a, None).expect("finite A")
    }

    pub fn quad_xvdot(a: f64) -> Self {
        JerkSystemSpec::new(Family::QuadXvdot, a, None).expect("finite A")
    }

    pub fn quad_xacc(a: f64) -> Self {
        JerkSystemSpec::new(Family::QuadXacc, a, None).expect("finite A")
    }

    /// Same family and nonlinearity with a different `A`.
    pub fn with_a(&self, a: f64) -> Result<Self, JerkError> {
        let mut out = JerkSystemSpec::new(self.family, a, self.g.clone())?;
        out.name = self.name.clone();
        Ok(out)
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn g(&self) -> Option<&Expr> {
        self.g.as_ref()
    }

    pub fn rhs(&self) -> &Expr {
        &self.rhs
    }

    pub(crate) fn compile(&self) -> Result<CompiledSystem, JerkError> {
        let jac = STATE_VARS.map(|var| self.rhs.diff(var));
        Ok(CompiledSystem {
            rhs: CompiledExpr::new(&self.rhs, &STATE_VARS)?,
            jacobian: [
                CompiledExpr::new(&jac[0], &STATE_VARS)?,
                CompiledExpr::new(&jac[1], &STATE_VARS)?,
                CompiledExpr::new(&jac[2], &STATE_VARS)?,
            ],
        })
    }
}

#[derive(Deserialize)]
struct RawSpec {
    name: Option<String>,
    #[serde(rename = "A")]
    a: f64,
    family: Family,
    #[serde(rename = "G")]
    g: Option<Expr>,
    rhs: Option<Expr>,
}

impl<'de> Deserialize<'de> for JerkSystemSpec {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let raw = RawSpec::deserialize(d)?;
        let mut spec = JerkSystemSpec::new(raw.family, raw.a, raw.g).map_err(D::Error::custom)?;
        if let Some(rhs) = raw.rhs {
            if rhs.simplify() != spec.rhs {
                return Err(D::Error::custom(format!(
                    "rhs '{rhs}' does not match family {} with A = {}",
                    spec.family, spec.a
                )));
            }
        }
        if let Some(name) = raw.name {
            spec.name = name;
        }
        Ok(spec)
    }
}

/// Right-hand side and its gradient, ready for inner loops.
#[derive(Debug, Clone)]
pub(crate) struct CompiledSystem {
    rhs: CompiledExpr,
    jacobian: [CompiledExpr; 3],
}

impl CompiledSystem {
    pub(crate) fn jerk(&self, s: [f64; 3]) -> Result<f64, ExprError> {
        self.rhs.eval_real(&s)
    }

    pub(crate) fn field(&self, s: [f64; 3]) -> Result<[f64; 3], ExprError> {
        Ok([s[1], s[2], self.jerk(s)?])
    }

    /// Gradient of the jerk with respect to `(x, v, w2)`.
    pub(crate) fn gradient(&self, s: [f64; 3]) -> Result<[f64; 3], ExprError> {
        Ok([
            self.jacobian[0].eval_real(&s)?,
            self.jacobian[1].eval_real(&s)?,
            self.jacobian[2].eval_real(&s)?,
        ])
    }
}

/// `x‴` at the phase point `s`.
pub fn rhs_eval(sys: &JerkSystemSpec, s: State3) -> Result<f64, JerkError> {
    if !s.is_finite() {
        return Err(JerkError::InvalidParameter {
            name: "state",
            detail: format!("{s:?} is not finite"),
        });
    }
    Ok(sys.compile()?.jerk(s.to_array())?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rhs_examples() {
        let free = JerkSystemSpec::c5(0.0, Expr::real(0.0)).unwrap();
        assert_eq!(rhs_eval(&free, State3::new(0.0, 1.0, 0.0)).unwrap(), -1.0);
        let quad = JerkSystemSpec::quad_vdot(2.0);
        assert_eq!(rhs_eval(&quad, State3::new(1.0, 2.0, 3.0)).unwrap(), -3.0);
        let xacc = JerkSystemSpec::quad_xacc(1.0);
        assert_eq!(rhs_eval(&xacc, State3::new(1.0, 1.0, 1.0)).unwrap(), -1.0);
        let xv = JerkSystemSpec::quad_xvdot(0.5);
        assert_eq!(
            rhs_eval(&xv, State3::new(2.0, 3.0, 4.0)).unwrap(),
            -2.0 + 6.0 - 2.0
        );
    }

    #[test]
    fn c5_uses_g() {
        let sys = JerkSystemSpec::c5(1.0, Nonlinearity::abs(2.0, 1.0).g).unwrap();
        // −1·0.5 − 0.25 + 2·|−3| − 1
        assert_eq!(rhs_eval(&sys, State3::new(-3.0, 0.25, 0.5)).unwrap(), 4.25);
    }

    #[test]
    fn rhs_only_mentions_state() {
        for family in Family::ALL {
            let g = (family == Family::C5G).then(|| Nonlinearity::sign(1.0, 0.5).g);
            let sys = JerkSystemSpec::new(family, 1.7, g).unwrap();
            assert!(sys
                .rhs()
                .free_vars()
                .iter()
                .all(|v| STATE_VARS.contains(&v.as_str())));
        }
    }

    #[test]
    fn rejects_bad_specs() {
        assert!(JerkSystemSpec::new(Family::C5G, 1.0, None).is_err());
        assert!(JerkSystemSpec::new(Family::QuadVdot, 1.0, Some(Expr::real(1.0))).is_err());
        assert!(JerkSystemSpec::c5(f64::NAN, Expr::real(0.0)).is_err());
        assert!(JerkSystemSpec::c5(1.0, "v".parse().unwrap()).is_err());
        assert!("quad".parse::<Family>().is_err());
    }

    #[test]
    fn json_round_trip() {
        let sys = JerkSystemSpec::c5(2.5, Nonlinearity::relu(1.0, 0.2).g).unwrap();
        let text = serde_json::to_string(&sys).unwrap();
        let back: JerkSystemSpec = serde_json::from_str(&text).unwrap();
        assert_eq!(back, sys);
        let short: JerkSystemSpec =
            serde_json::from_str(r#"{"A": 2.0, "family": "quad_vdot"}"#).unwrap();
        assert_eq!(short, JerkSystemSpec::quad_vdot(2.0));
        let tampered = r#"{"A": 2.0, "family": "quad_vdot", "rhs": "x"}"#;
        assert!(serde_json::from_str::<JerkSystemSpec>(tampered).is_err());
    }
}
