use num_complex::Complex64;
use serde::Serialize;

use fracvar::expr::{CompiledExpr, Expr};
use fracvar::fracops::{FractionalOrder, Grid, SampledFunction};
use fracvar::jerk::{
    a_range, integrate_rk4, largest_lyapunov, sweep, sweep_to_csv, sweep_to_json, Family,
    JerkSystemSpec, LyapunovParams, Nonlinearity, State3, SweepConfig,
};
use fracvar::variational::{action, catalog_with, el_residual, gateaux_check, LagrangianSpec};
use fracvar::verify::{self, VerifyConfig};

use crate::args::{
    BenettinArgs, Format, FracArgs, GateauxArgs, GridArgs, InitialArgs, LagrangianArgs,
    LyapunovArgs, SimulateArgs, SweepArgs, SystemArgs, VerifyArgs,
};
use crate::error::CliError;

/// What a subcommand produced: the body for the output file or standard
/// output, and an optional one-line summary for standard error.
pub struct Output {
    pub body: String,
    pub summary: Option<String>,
}

impl Output {
    fn plain(body: String) -> Self {
        Output {
            body,
            summary: None,
        }
    }
}

fn grid(args: &GridArgs) -> Result<Grid, CliError> {
    Grid::new(args.a, args.b, args.n).map_err(|e| CliError::usage(format!("--a/--b/--n: {e}")))
}

/// Samples an expression in `t`; `flag` names the option it came from.
fn sample(expr: &Expr, grid: Grid, flag: &str) -> Result<SampledFunction, CliError> {
    let compiled =
        CompiledExpr::new(expr, &["t"]).map_err(|e| CliError::usage(format!("{flag}: {e}")))?;
    let values = grid
        .nodes()
        .map(|t| compiled.eval(&[Complex64::new(t, 0.0)]))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| CliError::usage(format!("{flag}: {e}")))?;
    SampledFunction::new(grid, values).map_err(|e| CliError::usage(format!("{flag}: {e}")))
}

fn order(alpha: f64) -> FractionalOrder {
    FractionalOrder::new(alpha).expect("checked by the flag parser")
}

fn json<T: Serialize>(value: &T) -> String {
    serde_json::to_string(value).expect("outputs serialize")
}

pub fn frac(args: &FracArgs) -> Result<Output, CliError> {
    let f = sample(&args.expr, grid(&args.grid)?, "--expr")?;
    let out = args.op.apply(&f, order(args.alpha));
    let summary = out
        .boundary_inaccurate()
        .map(|k| format!("note: node {k} sits on the kernel singularity and is not accurate"));
    let body = match args.out.format {
        Format::Csv => out.to_csv(),
        Format::Json => out.to_json(),
    };
    Ok(Output { body, summary })
}

fn lagrangian(args: &LagrangianArgs) -> Result<LagrangianSpec, CliError> {
    let spec = match &args.catalog {
        Some(name) => {
            let nonlinearity =
                Nonlinearity::from_menu(&args.nonlinearity, args.b_param, args.c_param)
                    .map_err(|e| CliError::usage(format!("--nonlinearity: {e}")))?;
            let entry = catalog_with(&nonlinearity)
                .into_iter()
                .find(|s| &s.name == name)
                .ok_or_else(|| {
                    CliError::usage(format!(
                        "--catalog: unknown entry '{name}', expected c6, quad_vdot, quad_xvdot or quad_xacc"
                    ))
                })?;
            let a = args
                .a_param
                .ok_or_else(|| CliError::usage("--A: required with --catalog".into()))?;
            entry
                .bind("A", a)
                .map_err(|e| CliError::usage(format!("--A: {e}")))?
        }
        None => {
            let l = args.lagrangian.clone().expect("required unless --catalog");
            LagrangianSpec::new(
                "custom",
                l,
                args.f.clone(),
                args.g.clone(),
                order(args.alpha),
            )
            .map_err(|e| CliError::usage(format!("--L/--f/--g: {e}")))?
        }
    };
    Ok(if args.real {
        spec.replace_imaginary_unit(Complex64::new(1.0, 0.0))
    } else {
        spec
    })
}

fn trajectory(args: &LagrangianArgs) -> Result<SampledFunction, CliError> {
    let x = sample(&args.x, grid(&args.grid)?, "--x")?;
    if x.max_abs_imag() > 0.0 {
        return Err(CliError::usage("--x: trajectory must be real".into()));
    }
    Ok(x)
}

pub fn action_cmd(args: &LagrangianArgs) -> Result<Output, CliError> {
    let spec = lagrangian(args)?;
    let s = action(&spec, &trajectory(args)?).map_err(CliError::compute)?;
    Ok(Output::plain(match args.out.format {
        Format::Csv => format!("re,im\n{:.16e},{:.16e}\n", s.re, s.im),
        Format::Json => json(&serde_json::json!({ "re": s.re, "im": s.im })),
    }))
}

pub fn residual(args: &LagrangianArgs) -> Result<Output, CliError> {
    let spec = lagrangian(args)?;
    let report = el_residual(&spec, &trajectory(args)?).map_err(CliError::compute)?;
    let summary = format!(
        "interior sup-norm {:.6e} ({} nodes excluded at each end)",
        report.sup_norm_interior, report.boundary_nodes_excluded
    );
    let body = match args.out.format {
        Format::Csv => report.to_csv(),
        Format::Json => {
            let residual: serde_json::Value =
                serde_json::from_str(&report.residual.to_json()).expect("sampled JSON");
            json(&serde_json::json!({
                "sup_norm_interior": report.sup_norm_interior,
                "boundary_nodes_excluded": report.boundary_nodes_excluded,
                "residual": residual,
            }))
        }
    };
    Ok(Output {
        body,
        summary: Some(summary),
    })
}

pub fn gateaux(args: &GateauxArgs) -> Result<Output, CliError> {
    let l = &args.lagrangian;
    let spec = lagrangian(l)?;
    let x = trajectory(l)?;
    let grid = *x.grid();
    let eta = match &args.eta {
        Some(e) => sample(e, grid, "--eta")?,
        None => {
            let (a, b) = (grid.a(), grid.b());
            let w = b - a;
            SampledFunction::from_real_fn(grid, |t| 16.0 * ((t - a) * (b - t) / (w * w)).powi(2))
                .map_err(CliError::compute)?
        }
    };
    let r = gateaux_check(&spec, &x, &eta, args.epsilon).map_err(|e| match e {
        fracvar::variational::VariationalError::Boundary(m) => {
            CliError::usage(format!("--eta: {m}"))
        }
        fracvar::variational::VariationalError::Input(m) => CliError::usage(m),
        other => CliError::compute(other),
    })?;
    Ok(Output {
        body: match l.out.format {
            Format::Csv => format!(
                "fd_re,fd_im,pairing_re,pairing_im,rel_err\n{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}\n",
                r.fd.re, r.fd.im, r.pairing.re, r.pairing.im, r.rel_err
            ),
            Format::Json => json(&serde_json::json!({
                "fd": { "re": r.fd.re, "im": r.fd.im },
                "pairing": { "re": r.pairing.re, "im": r.pairing.im },
                "rel_err": r.rel_err,
            })),
        },
        summary: Some(format!("relative error {:.6e}", r.rel_err)),
    })
}

fn system(args: &SystemArgs, a: f64) -> Result<JerkSystemSpec, CliError> {
    let g = match (args.system, &args.g, &args.nonlinearity) {
        (Family::C5G, Some(g), _) => Some(g.clone()),
        (Family::C5G, None, menu) => {
            let name = menu.as_deref().unwrap_or("linear");
            let n = Nonlinearity::from_menu(name, args.b_param, args.c_param)
                .map_err(|e| CliError::usage(format!("--nonlinearity: {e}")))?;
            Some(n.g)
        }
        (_, Some(_), _) | (_, _, Some(_)) => {
            return Err(CliError::usage(format!(
                "--G/--nonlinearity: only the c5_G family takes a force, not {}",
                args.system
            )))
        }
        _ => None,
    };
    JerkSystemSpec::new(args.system, a, g)
        .map_err(|e| CliError::usage(format!("--system/--G: {e}")))
}

fn required_a(args: &SystemArgs) -> Result<f64, CliError> {
    args.a_param
        .ok_or_else(|| CliError::usage("--A: required".into()))
}

fn initial(args: &InitialArgs) -> State3 {
    State3::new(args.x0, args.v0, args.a0)
}

pub fn simulate(args: &SimulateArgs) -> Result<Output, CliError> {
    let sys = system(&args.system, required_a(&args.system)?)?;
    if args.t1 <= args.t0 {
        return Err(CliError::usage(format!(
            "--t1: must exceed --t0 = {}",
            args.t0
        )));
    }
    let steps = ((args.t1 - args.t0) / args.h).round();
    if !(1.0..=1e8).contains(&steps) {
        return Err(CliError::usage(format!(
            "--h: {} steps from --t0 to --t1, need between 1 and 1e8",
            steps
        )));
    }
    let grid = Grid::from_step(args.t0, args.h, steps as usize + 1)
        .map_err(|e| CliError::usage(format!("--t0/--t1/--h: {e}")))?;
    let tr = integrate_rk4(&sys, initial(&args.initial), grid)
        .map_err(|e| CliError::usage(format!("initial state: {e}")))?;
    let summary = tr.diverged_at().map(|k| {
        format!(
            "diverged: the orbit left the bound at t = {} (step {k}); output stops there",
            grid.node(k)
        )
    });
    Ok(Output {
        body: match args.out.format {
            Format::Csv => tr.to_csv(),
            Format::Json => tr.to_json(),
        },
        summary,
    })
}

fn params(args: &BenettinArgs) -> LyapunovParams {
    LyapunovParams {
        t_transient: args.t_transient,
        t_measure: args.t_measure,
        h: args.h,
        renorm_every: args.renorm_every,
    }
}

pub fn lyapunov(args: &LyapunovArgs) -> Result<Output, CliError> {
    let a = required_a(&args.system)?;
    let sys = system(&args.system, a)?;
    let l = largest_lyapunov(&sys, initial(&args.initial), &params(&args.benettin)).map_err(
        |e| match e {
            fracvar::jerk::JerkError::InvalidParameter { name, detail } => {
                CliError::usage(format!("{name}: {detail}"))
            }
            other => CliError::compute(other),
        },
    )?;
    Ok(Output::plain(match args.out.format {
        Format::Csv => format!("A,lyapunov\n{a:.16e},{l:.16e}\n"),
        Format::Json => json(&serde_json::json!({ "A": a, "lyapunov": l })),
    }))
}

pub fn sweep_cmd(args: &SweepArgs) -> Result<Output, CliError> {
    let a_values = a_range(args.a_start, args.a_stop, args.a_step)
        .map_err(|e| CliError::usage(format!("--A-start/--A-stop/--A-step: {e}")))?;
    let initial_states = if args.initial_state.is_empty() {
        vec![State3::new(0.0, 0.0, 0.5), State3::new(0.0, 0.0, -0.5)]
    } else {
        args.initial_state.clone()
    };
    let config = SweepConfig {
        system: system(&args.system, a_values[0])?,
        a_values,
        initial_states,
        params: params(&args.benettin),
    };
    let points = sweep(&config).map_err(|e| match e {
        fracvar::jerk::JerkError::InvalidParameter { name, detail } => {
            CliError::usage(format!("{name}: {detail}"))
        }
        other => CliError::compute(other),
    })?;
    let best = points
        .iter()
        .filter_map(|p| Some((p.a, p.lyapunov?)))
        .max_by(|x, y| x.1.total_cmp(&y.1));
    let diverged = points.iter().filter(|p| p.diverged).count();
    let summary = match best {
        Some((a, l)) => format!(
            "largest exponent {l:.6e} at A = {a}; {diverged} of {} points diverged",
            points.len()
        ),
        None => format!("all {} points diverged", points.len()),
    };
    Ok(Output {
        body: match args.out.format {
            Format::Csv => sweep_to_csv(&points),
            Format::Json => sweep_to_json(&points),
        },
        summary: Some(summary),
    })
}

/// Runs the suite; a failed check becomes [`CliError::ChecksFailed`] after
/// the report has been produced.
pub fn verify_cmd(args: &VerifyArgs) -> Result<(Output, bool), CliError> {
    let config = VerifyConfig {
        n: args.n,
        seed: args.seed,
    };
    let report = verify::run(&config).map_err(|e| match e {
        verify::VerifyError::BadSize(_) => CliError::usage(format!("--n: {e}")),
        other => CliError::compute(other),
    })?;
    let body = match args.format {
        None => format!("{report}\n"),
        Some(Format::Json) => json(&report),
        Some(Format::Csv) => {
            let mut s = String::from("check,measured,allowed,passed\n");
            for c in &report.checks {
                s.push_str(&format!(
                    "\"{}\",{:.16e},{:.16e},{}\n",
                    c.name, c.measured, c.allowed, c.passed
                ));
            }
            s
        }
    };
    Ok((Output::plain(body), report.passed()))
}
