use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::JerkError;
use crate::expr::Expr;

/// A forcing term `G(x)` together with a potential `V(x)` satisfying
/// `V′ = G`.
///
/// Jerk systems only need `G`; the Lagrangian catalog stores `−V(x)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Nonlinearity {
    pub label: String,
    #[serde(rename = "G")]
    pub g: Expr,
    #[serde(rename = "V")]
    pub potential: Expr,
}

fn expr(src: &str) -> Expr {
    src.parse().expect("menu expressions are well formed")
}

fn with_constants(src: &str, b: f64, c: f64) -> Expr {
    expr(src)
        .substitute("B", &Expr::real(b))
        .substitute("C", &Expr::real(c))
        .simplify()
}

impl Nonlinearity {
    /// `G = −x`, the linear restoring force.
    pub fn linear() -> Self {
        Nonlinearity {
            label: "linear".into(),
            g: expr("-x"),
            potential: expr("-x^2/2"),
        }
    }

    /// `G = B|x| − C`.
    pub fn abs(b: f64, c: f64) -> Self {
        Nonlinearity {
            label: format!("abs(B={b}, C={c})"),
            g: with_constants("B*abs(x) - C", b, c),
            potential: with_constants("B*x*abs(x)/2 - C*x", b, c),
        }
    }

    /// `G = B·max(x, 0) − C`, with `max(x, 0)` written as `(x + |x|)/2`.
    pub fn relu(b: f64, c: f64) -> Self {
        Nonlinearity {
            label: format!("relu(B={b}, C={c})"),
            g: with_constants("B*(x + abs(x))/2 - C", b, c),
            potential: with_constants("B*(x + abs(x))^2/8 - C*x", b, c),
        }
    }

    /// `G = −Bx + C·sgn(x)`.
    pub fn sign(b: f64, c: f64) -> Self {
        Nonlinearity {
            label: format!("sign(B={b}, C={c})"),
            g: with_constants("-B*x + C*sgn(x)", b, c),
            potential: with_constants("-B*x^2/2 + C*abs(x)", b, c),
        }
    }

    /// A user-supplied pair. Both must depend on `x` alone, and `V′` must
    /// agree with `G` at a spread of sample points away from the origin.
    pub fn custom(label: impl Into<String>, g: Expr, potential: Expr) -> Result<Self, JerkError> {
        for (what, e) in [("G", &g), ("V", &potential)] {
            if let Some(bad) = e.free_vars().into_iter().find(|v| v != "x") {
                return Err(JerkError::InvalidSpec(format!(
                    "{what} may only depend on x, found '{bad}'"
                )));
            }
        }
        let dv = potential.diff("x");
        for k in 0..16 {
            let x = -2.0 + 4.0 * (k as f64 + 0.37) / 16.0;
            let at = |name: &str| (name == "x").then_some(Complex64::new(x, 0.0));
            let lhs = dv.eval_with(at)?;
            let rhs = g.eval_with(at)?;
            if (lhs - rhs).norm() > 1e-9 * (1.0 + rhs.norm()) {
                return Err(JerkError::InvalidSpec(format!(
                    "V' = {lhs} but G = {rhs} at x = {x}"
                )));
            }
        }
        Ok(Nonlinearity {
            label: label.into(),
            g,
            potential,
        })
    }

    /// Looks up a menu entry: `linear`, `abs`, `relu` or `sign`.
    pub fn from_menu(name: &str, b: f64, c: f64) -> Result<Self, JerkError> {
        match name {
            "linear" => Ok(Nonlinearity::linear()),
            "abs" => Ok(Nonlinearity::abs(b, c)),
            "relu" => Ok(Nonlinearity::relu(b, c)),
            "sign" => Ok(Nonlinearity::sign(b, c)),
            other => Err(JerkError::InvalidSpec(format!(
                "unknown nonlinearity '{other}', expected linear, abs, relu or sign"
            ))),
        }
    }
}

impl fmt::Display for Nonlinearity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: G = {}, V = {}", self.label, self.g, self.potential)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn menu_potentials_integrate_their_forces() {
        for n in [
            Nonlinearity::linear(),
            Nonlinearity::abs(1.5, 0.3),
            Nonlinearity::relu(2.0, -0.7),
            Nonlinearity::sign(0.8, 1.1),
        ] {
            Nonlinearity::custom(n.label.clone(), n.g.clone(), n.potential.clone()).unwrap();
        }
    }

    #[test]
    fn linear_potential() {
        let n = Nonlinearity::linear();
        let v = n
            .potential
            .eval_with(|_| Some(Complex64::new(2.0, 0.0)))
            .unwrap();
        assert_eq!(v, Complex64::new(-2.0, 0.0));
    }

    #[test]
    fn custom_rejects_mismatch_and_foreign_variables() {
        assert!(Nonlinearity::custom("bad", expr("x"), expr("x^3")).is_err());
        assert!(Nonlinearity::custom("bad", expr("v"), expr("x*v")).is_err());
        assert!(Nonlinearity::from_menu("cubic", 1.0, 1.0).is_err());
    }
}
