//! Riemann-Liouville and Caputo operators of order `0 < α ≤ 1` on uniformly
//! sampled functions.
//!
//! Left operators integrate over the past `[a, t]`, right operators over the
//! future `[t, b]`. Every right operator is its left counterpart conjugated
//! by reflection `t ↦ a + b − t`; the `(−1)` carried by the right-sided
//! derivatives falls out of that conjugation, so at `α = 1` the right
//! derivatives equal `−d/dt`.
//!
//! Discretizations:
//!
//! * integrals: product trapezoidal rule, the kernel `(t−u)^{α−1}/Γ(α)` is
//!   integrated exactly against the piecewise-linear interpolant;
//! * Caputo derivatives: the L1 scheme, `O(h^{2−α})`;
//! * Riemann-Liouville derivatives: integral of order `1−α` followed by
//!   [`d_dt`];
//! * [`gl_deriv_left`]: Grünwald-Letnikov sums, kept as an independent
//!   cross-check.
//!
//! ```
//! use fracvar::fracops::{caputo_left, FractionalOrder, Grid, SampledFunction};
//! use fracvar::fracops::gamma::gamma;
//!
//! let grid = Grid::new(0.0, 1.0, 1025).unwrap();
//! let f = SampledFunction::from_real_fn(grid, |t| t).unwrap();
//! let d = caputo_left(&f, FractionalOrder::HALF);
//! let exact = 1.0 / gamma(1.5); // t^{1/2}/Γ(3/2) at t = 1
//! assert!((d.values()[1024].re - exact).abs() < 1e-3);
//! ```

pub mod gamma;
mod grid;
mod ops;
mod sampled;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use grid::Grid;
pub use ops::{
    caputo_left, caputo_right, d_dt, gl_deriv_left, rl_deriv_left, rl_deriv_right,
    rl_integral_left, rl_integral_right, Operator,
};
pub use sampled::SampledFunction;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FracError {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("fractional order {0} is outside (0, 1]")]
    OrderOutOfRange(f64),
    #[error("expected {expected} samples, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("sample {index} is not finite")]
    NonFinite { index: usize },
    #[error("malformed input: {0}")]
    Format(String),
}

/// Order `α` of a fractional operator, restricted to `(0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize)]
#[serde(transparent)]
pub struct FractionalOrder(f64);

impl FractionalOrder {
    pub const HALF: FractionalOrder = FractionalOrder(0.5);
    pub const ONE: FractionalOrder = FractionalOrder(1.0);

    pub fn new(alpha: f64) -> Result<Self, FracError> {
        if alpha > 0.0 && alpha <= 1.0 {
            Ok(FractionalOrder(alpha))
        } else {
            Err(FracError::OrderOutOfRange(alpha))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn is_integer(self) -> bool {
        self.0 == 1.0
    }

    /// `1 − α`, or `None` at `α = 1`.
    pub fn complement(self) -> Option<FractionalOrder> {
        FractionalOrder::new(1.0 - self.0).ok()
    }
}

impl TryFrom<f64> for FractionalOrder {
    type Error = FracError;

    fn try_from(alpha: f64) -> Result<Self, FracError> {
        FractionalOrder::new(alpha)
    }
}

impl<'de> Deserialize<'de> for FractionalOrder {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        FractionalOrder::new(f64::deserialize(d)?).map_err(serde::de::Error::custom)
    }
}
