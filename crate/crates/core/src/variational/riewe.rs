use num_complex::Complex64;
use serde::Serialize;

use super::VariationalError;
use crate::expr::{CompiledExpr, Expr};
use crate::fracops::{caputo_left, caputo_right, FractionalOrder, Grid, SampledFunction};

/// One interval length of the shrinking-interval table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RieweRow {
    pub length: f64,
    /// Sup-norm of the real part of `i·ₐᶜD_t^{1/2}x − ₜᶜD_b^{1/2}x`.
    pub re_sup: f64,
    /// Sup-norm of its imaginary part.
    pub im_sup: f64,
}

/// Tabulates `i·ₐᶜD_t^{1/2}x − ₜᶜD_b^{1/2}x` on `[a, a + length]` for each
/// length, `n` nodes per interval. Purely exploratory: no threshold is
/// applied, the caller reads the trend.
pub fn riewe_limit_diagnostic(
    x: &Expr,
    a: f64,
    lengths: &[f64],
    n: usize,
) -> Result<Vec<RieweRow>, VariationalError> {
    let compiled = CompiledExpr::new(x, &["t"])?;
    lengths
        .iter()
        .map(|&length| {
            let grid = Grid::new(a, a + length, n)?;
            let samples = grid
                .nodes()
                .map(|t| compiled.eval(&[Complex64::new(t, 0.0)]))
                .collect::<Result<Vec<_>, _>>()?;
            let f = SampledFunction::new(grid, samples)?;
            let left = caputo_left(&f, FractionalOrder::HALF);
            let right = caputo_right(&f, FractionalOrder::HALF);
            let diff = left.zip_with(&right, |l, r| Complex64::i() * l - r);
            let sup = |part: fn(Complex64) -> f64| {
                diff.values()
                    .iter()
                    .map(|&z| part(z).abs())
                    .fold(0.0, f64::max)
            };
            Ok(RieweRow {
                length,
                re_sup: sup(|z| z.re),
                im_sup: sup(|z| z.im),
            })
        })
        .collect()
}
