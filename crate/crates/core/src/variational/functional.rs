use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use super::spec::SlotArgument;
use super::{LagrangianSpec, ResidualReport, VariationalError};
use crate::expr::{CompiledExpr, Expr};
use crate::fracops::{caputo_left, d_dt, rl_deriv_right, SampledFunction};

/// Central-difference step used when none is given.
pub const DEFAULT_EPSILON: f64 = 1e-4;

/// Residual nodes left out of the interior norm at each end.
const EXCLUDED: usize = 2;

const MAX_IMAG: f64 = 1e-12;
const MIN_NODES: usize = 5;

/// Everything the Lagrangian is evaluated on: `t, x, v` and one sampled
/// fractional derivative per slot.
struct Arguments {
    columns: Vec<Vec<Complex64>>,
}

impl Arguments {
    fn at(&self, k: usize, buf: &mut Vec<Complex64>) {
        buf.clear();
        buf.extend(self.columns.iter().map(|c| c[k]));
    }
}

fn check_trajectory(spec: &LagrangianSpec, x: &SampledFunction) -> Result<(), VariationalError> {
    if let Some(p) = spec.parameters().first() {
        return Err(VariationalError::InvalidSpec(format!(
            "parameter '{p}' of '{}' is unbound",
            spec.name
        )));
    }
    if x.len() < MIN_NODES {
        return Err(VariationalError::Input(format!(
            "need at least {MIN_NODES} nodes, got {}",
            x.len()
        )));
    }
    if x.max_abs_imag() > MAX_IMAG {
        return Err(VariationalError::Input(format!(
            "trajectory must be real, found imaginary part {:e}",
            x.max_abs_imag()
        )));
    }
    Ok(())
}

fn sample(
    what: &str,
    e: &Expr,
    vars: &[&str],
    columns: &[&[Complex64]],
    grid: &crate::fracops::Grid,
) -> Result<SampledFunction, VariationalError> {
    let compiled = CompiledExpr::new(e, vars)?;
    let n = grid.n();
    let mut out = Vec::with_capacity(n);
    let mut buf = Vec::with_capacity(vars.len());
    for k in 0..n {
        buf.clear();
        buf.extend(columns.iter().map(|c| c[k]));
        out.push(
            compiled
                .eval(&buf)
                .map_err(|source| VariationalError::Eval {
                    what: what.to_string(),
                    node: k,
                    source,
                })?,
        );
    }
    Ok(SampledFunction::new(*grid, out)?)
}

fn arguments(spec: &LagrangianSpec, x: &SampledFunction) -> Result<Arguments, VariationalError> {
    check_trajectory(spec, x)?;
    let grid = *x.grid();
    let x = x.map(|z| Complex64::new(z.re, 0.0));
    let v = d_dt(&x);
    let t: Vec<Complex64> = grid.nodes().map(|t| Complex64::new(t, 0.0)).collect();
    let mut columns = vec![t, x.values().to_vec(), v.values().to_vec()];
    for slot in spec.slots() {
        let column = if spec.lagrangian().depends_on(&slot.name) {
            let argument = match slot.argument {
                SlotArgument::Position => &x,
                SlotArgument::Velocity => &v,
            };
            let inner = sample(
                &format!("the function behind slot {}", slot.name),
                &slot.function,
                &[slot.argument.var()],
                &[argument.values()],
                &grid,
            )?;
            caputo_left(&inner, spec.alpha()).values().to_vec()
        } else {
            vec![Complex64::new(0.0, 0.0); grid.n()]
        };
        columns.push(column);
    }
    Ok(Arguments { columns })
}

fn lagrangian_samples(
    what: &str,
    e: &Expr,
    spec: &LagrangianSpec,
    args: &Arguments,
    grid: &crate::fracops::Grid,
) -> Result<SampledFunction, VariationalError> {
    let compiled = CompiledExpr::new(e, &spec.variables())?;
    let mut buf = Vec::new();
    let mut out = Vec::with_capacity(grid.n());
    for k in 0..grid.n() {
        args.at(k, &mut buf);
        out.push(
            compiled
                .eval(&buf)
                .map_err(|source| VariationalError::Eval {
                    what: what.to_string(),
                    node: k,
                    source,
                })?,
        );
    }
    Ok(SampledFunction::new(*grid, out)?)
}

/// `∫ L dt` by the trapezoidal rule, with `v` from [`d_dt`] and each slot
/// from [`caputo_left`]. The result is complex and returned as is.
pub fn action(spec: &LagrangianSpec, x: &SampledFunction) -> Result<Complex64, VariationalError> {
    let args = arguments(spec, x)?;
    Ok(lagrangian_samples("L", spec.lagrangian(), spec, &args, x.grid())?.trapezoid())
}

/// Euler-Lagrange residual on the grid. Terms whose partial derivative of
/// `L` simplifies to zero are skipped; two nodes at each end are left out of
/// the interior norm.
pub fn el_residual(
    spec: &LagrangianSpec,
    x: &SampledFunction,
) -> Result<ResidualReport, VariationalError> {
    let args = arguments(spec, x)?;
    let grid = *x.grid();
    let l = spec.lagrangian();
    let partial = |var: &str| -> Result<Option<SampledFunction>, VariationalError> {
        let d = l.diff(var);
        if d.as_const() == Some(Complex64::new(0.0, 0.0)) {
            return Ok(None);
        }
        lagrangian_samples(&format!("dL/d{var}"), &d, spec, &args, &grid).map(Some)
    };
    let mut residual = SampledFunction::zeros(grid);
    if let Some(px) = partial("x")? {
        residual = &residual + &px;
    }
    if let Some(pv) = partial("v")? {
        residual = &residual - &d_dt(&pv);
    }
    let mut velocity_terms = SampledFunction::zeros(grid);
    for slot in spec.slots() {
        let Some(p) = partial(&slot.name)? else {
            continue;
        };
        let var = slot.argument.var();
        let column = match slot.argument {
            SlotArgument::Position => &args.columns[1],
            SlotArgument::Velocity => &args.columns[2],
        };
        let chain = sample(
            &format!("the derivative of the function behind slot {}", slot.name),
            &slot.function.diff(var),
            &[var],
            &[column.as_slice()],
            &grid,
        )?;
        let term = &chain * &rl_deriv_right(&p, spec.alpha());
        match slot.argument {
            SlotArgument::Position => residual = &residual + &term,
            SlotArgument::Velocity => velocity_terms = &velocity_terms + &term,
        }
    }
    residual = &residual - &d_dt(&velocity_terms);
    Ok(ResidualReport::new(residual, EXCLUDED))
}

/// Both sides of the first-variation identity along one test function.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GateauxResult {
    /// `(S[x + εη] − S[x − εη]) / 2ε`.
    pub fd: Complex64,
    /// `∫ η · residual dt`.
    pub pairing: Complex64,
    /// `|fd − pairing| / (1 + |pairing|)`.
    pub rel_err: f64,
}

const BOUNDARY_TOL: f64 = 1e-10;

/// Checks `η(a) = η(b) = 0` and `η̇(a) = η̇(b) = 0`.
///
/// Values must vanish to `1e-10`. The end slopes come from second-order
/// one-sided stencils, whose truncation error on an admissible `η` is
/// `O(h²)`, so they may also carry a share `h/(b−a)` of the largest slope
/// on the grid.
fn check_test_function(eta: &SampledFunction) -> Result<(), VariationalError> {
    let n = eta.len();
    let values = eta.values();
    if eta.max_abs_imag() > MAX_IMAG {
        return Err(VariationalError::Input("test function must be real".into()));
    }
    for (end, k) in [("a", 0), ("b", n - 1)] {
        if values[k].norm() > BOUNDARY_TOL {
            return Err(VariationalError::Boundary(format!(
                "eta({end}) = {:e}, allowed {BOUNDARY_TOL:e}",
                values[k].re
            )));
        }
    }
    let slope = d_dt(eta);
    let grid = eta.grid();
    let allowed = BOUNDARY_TOL + grid.h() / (grid.b() - grid.a()) * slope.sup_norm();
    for (end, k) in [("a", 0), ("b", n - 1)] {
        if slope.values()[k].norm() > allowed {
            return Err(VariationalError::Boundary(format!(
                "eta'({end}) = {:e}, allowed {allowed:e}",
                slope.values()[k].re
            )));
        }
    }
    Ok(())
}

/// Compares a central difference of the action along `η` with the pairing
/// of `η` against the Euler-Lagrange residual.
pub fn gateaux_check(
    spec: &LagrangianSpec,
    x: &SampledFunction,
    eta: &SampledFunction,
    epsilon: f64,
) -> Result<GateauxResult, VariationalError> {
    let residual = el_residual(spec, x)?;
    gateaux_with_residual(spec, x, &residual.residual, eta, epsilon)
}

/// [`gateaux_check`] with the residual already computed, for checking many
/// test functions against one trajectory.
pub(crate) fn gateaux_with_residual(
    spec: &LagrangianSpec,
    x: &SampledFunction,
    residual: &SampledFunction,
    eta: &SampledFunction,
    epsilon: f64,
) -> Result<GateauxResult, VariationalError> {
    if !(1e-6..=1e-2).contains(&epsilon) {
        return Err(VariationalError::Input(format!(
            "epsilon must lie in [1e-6, 1e-2], got {epsilon:e}"
        )));
    }
    if eta.grid() != x.grid() {
        return Err(VariationalError::Input(
            "test function and trajectory live on different grids".into(),
        ));
    }
    check_test_function(eta)?;
    let shifted = |sign: f64| x.zip_with(eta, |a, b| a + b * (sign * epsilon));
    let fd = (action(spec, &shifted(1.0))? - action(spec, &shifted(-1.0))?) / (2.0 * epsilon);
    let pairing = (eta * residual).trapezoid();
    Ok(GateauxResult {
        fd,
        pairing,
        rel_err: (fd - pairing).norm() / (1.0 + pairing.norm()),
    })
}

/// [`gateaux_check`] for several test functions, computing the residual once
/// and the test functions in parallel on the current rayon pool.
pub fn gateaux_check_many(
    spec: &LagrangianSpec,
    x: &SampledFunction,
    etas: &[SampledFunction],
    epsilon: f64,
) -> Result<Vec<GateauxResult>, VariationalError> {
    let residual = el_residual(spec, x)?;
    etas.par_iter()
        .map(|eta| gateaux_with_residual(spec, x, &residual.residual, eta, epsilon))
        .collect()
}
