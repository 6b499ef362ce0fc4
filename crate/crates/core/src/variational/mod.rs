//! Actions of the form `S[x] = ∫ L(t, x, ẋ, u, w) dt` with
//! `u = ₐᶜD_t^α f(x)` and `w = ₐᶜD_t^α g(ẋ)`, and the Euler-Lagrange
//! residual
//!
//! ```text
//! ∂L/∂x − d/dt ∂L/∂v + f′(x)·ₜD_b^α ∂L/∂u − d/dt( g′(v)·ₜD_b^α ∂L/∂w )
//! ```
//!
//! that vanishes along extremals. `ₜD_b^α` is the right Riemann-Liouville
//! derivative [`rl_deriv_right`](crate::fracops::rl_deriv_right).
//!
//! A Lagrangian may carry further fractional slots beyond `u` and `w` (each
//! the left Caputo derivative of a function of `x` or of `v`), and symbolic
//! parameters that must be bound before evaluation.
//!
//! ```
//! use fracvar::fracops::{FractionalOrder, Grid, SampledFunction};
//! use fracvar::variational::{el_residual, LagrangianSpec};
//!
//! let spec = LagrangianSpec::new(
//!     "oscillator",
//!     "v^2/2 - x^2/2".parse().unwrap(),
//!     "0".parse().unwrap(),
//!     "0".parse().unwrap(),
//!     FractionalOrder::HALF,
//! )
//! .unwrap();
//! let grid = Grid::new(0.0, std::f64::consts::PI, 2001).unwrap();
//! let x = SampledFunction::from_real_fn(grid, f64::sin).unwrap();
//! assert!(el_residual(&spec, &x).unwrap().sup_norm_interior <= 1e-4);
//! ```

mod catalog;
mod functional;
mod riewe;
mod spec;

use thiserror::Error;

use crate::expr::ExprError;
use crate::fracops::{d_dt, FracError, SampledFunction};

pub use catalog::{catalog, catalog_with};
pub use functional::{
    action, el_residual, gateaux_check, gateaux_check_many, GateauxResult, DEFAULT_EPSILON,
};
pub use riewe::{riewe_limit_diagnostic, RieweRow};
pub use spec::{FractionalSlot, LagrangianSpec, SlotArgument};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum VariationalError {
    #[error(transparent)]
    Expr(#[from] ExprError),
    #[error(transparent)]
    Frac(#[from] FracError),
    #[error("invalid Lagrangian: {0}")]
    InvalidSpec(String),
    #[error("evaluating {what} at node {node}: {source}")]
    Eval {
        what: String,
        node: usize,
        source: ExprError,
    },
    #[error("invalid input: {0}")]
    Input(String),
    #[error("test function violates the boundary conditions: {0}")]
    Boundary(String),
}

/// A residual on the grid together with its sup-norm away from the ends.
#[derive(Debug, Clone, PartialEq)]
pub struct ResidualReport {
    pub residual: SampledFunction,
    pub sup_norm_interior: f64,
    pub boundary_nodes_excluded: usize,
}

impl ResidualReport {
    pub fn new(residual: SampledFunction, excluded: usize) -> Self {
        let sup_norm_interior = residual.sup_norm_interior(excluded, excluded);
        ResidualReport {
            residual,
            sup_norm_interior,
            boundary_nodes_excluded: excluded,
        }
    }

    /// CSV with header `t,re,im`.
    pub fn to_csv(&self) -> String {
        self.residual.to_csv()
    }
}

/// End values of a trajectory and of its velocity.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct BoundaryData {
    pub x_a: f64,
    pub x_b: f64,
    pub v_a: f64,
    pub v_b: f64,
}

impl BoundaryData {
    /// Reads the four numbers off sampled positions, with velocities from
    /// [`d_dt`].
    pub fn of(x: &SampledFunction) -> Self {
        let v = d_dt(x);
        let n = x.len();
        BoundaryData {
            x_a: x.values()[0].re,
            x_b: x.values()[n - 1].re,
            v_a: v.values()[0].re,
            v_b: v.values()[n - 1].re,
        }
    }

    pub fn is_finite(&self) -> bool {
        [self.x_a, self.x_b, self.v_a, self.v_b]
            .iter()
            .all(|c| c.is_finite())
    }
}
