use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use fracvar::expr::Expr;
use fracvar::fracops::Operator;
use fracvar::jerk::{Family, State3};

#[derive(Debug, Parser)]
#[command(
    name = "fracvar",
    version,
    about = "Fractional operators, fractional actions and jerk dynamics"
)]
pub struct Cli {
    /// JSON file holding the subcommand and any of its flags; flags given
    /// on the command line take precedence.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Option<Command>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Apply a fractional operator to an expression in t sampled on a grid.
    Frac(FracArgs),
    /// Evaluate the action of a Lagrangian along x(t).
    Action(LagrangianArgs),
    /// Euler-Lagrange residual of a Lagrangian along x(t).
    Residual(LagrangianArgs),
    /// Compare the first variation of the action with the residual pairing.
    Gateaux(GateauxArgs),
    /// Integrate a jerk system with fixed-step RK4.
    Simulate(SimulateArgs),
    /// Largest Lyapunov exponent of one orbit.
    Lyapunov(LyapunovArgs),
    /// Largest Lyapunov exponent over a range of A.
    Sweep(SweepArgs),
    /// Run the built-in identity suite.
    Verify(VerifyArgs),
}

impl Command {
    pub const NAMES: [&'static str; 8] = [
        "frac", "action", "residual", "gateaux", "simulate", "lyapunov", "sweep", "verify",
    ];
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Write to this file instead of standard output.
    #[arg(long, value_name = "PATH")]
    pub output: Option<PathBuf>,
}

fn parse_alpha(s: &str) -> Result<f64, String> {
    let alpha: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if alpha > 0.0 && alpha <= 1.0 {
        Ok(alpha)
    } else {
        Err(format!("must lie in (0, 1], got {alpha}"))
    }
}

fn parse_positive(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(format!("must be positive, got {v}"))
    }
}

fn parse_finite(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("must be finite, got {v}"))
    }
}

fn parse_expr(s: &str) -> Result<Expr, String> {
    s.parse().map_err(|e| format!("{e}"))
}

fn parse_state(s: &str) -> Result<State3, String> {
    let parts = s
        .split(',')
        .map(|p| parse_finite(p.trim()))
        .collect::<Result<Vec<f64>, String>>()?;
    match parts[..] {
        [x, v, a] => Ok(State3::new(x, v, a)),
        _ => Err(format!("expected x,v,a, got '{s}'")),
    }
}

#[derive(Debug, Args)]
pub struct GridArgs {
    /// Left end of the interval.
    #[arg(long, default_value_t = 0.0, value_parser = parse_finite, allow_negative_numbers = true)]
    pub a: f64,
    /// Right end of the interval.
    #[arg(long, default_value_t = 1.0, value_parser = parse_finite, allow_negative_numbers = true)]
    pub b: f64,
    /// Number of grid nodes.
    #[arg(long, default_value_t = 1025)]
    pub n: usize,
}

#[derive(Debug, Args)]
pub struct FracArgs {
    #[arg(long)]
    pub op: Operator,
    #[arg(long, default_value_t = 0.5, value_parser = parse_alpha)]
    pub alpha: f64,
    /// Function of t to sample.
    #[arg(long, value_parser = parse_expr)]
    pub expr: Expr,
    #[command(flatten)]
    pub grid: GridArgs,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct LagrangianArgs {
    /// Built-in Lagrangian: c6, quad_vdot, quad_xvdot or quad_xacc.
    #[arg(long, conflicts_with_all = ["L", "f", "g", "alpha"])]
    pub catalog: Option<String>,
    /// Lagrangian in t, x, v, u, w.
    #[arg(id = "L", long = "L", value_parser = parse_expr, required_unless_present = "catalog")]
    pub lagrangian: Option<Expr>,
    /// Function of x under the u slot.
    #[arg(long, default_value = "0", value_parser = parse_expr)]
    pub f: Expr,
    /// Function of v under the w slot.
    #[arg(long, default_value = "0", value_parser = parse_expr)]
    pub g: Expr,
    #[arg(long, default_value_t = 0.5, value_parser = parse_alpha)]
    pub alpha: f64,
    /// Value of the parameter A of a catalog entry.
    #[arg(id = "A", long = "A", value_parser = parse_finite, allow_negative_numbers = true)]
    pub a_param: Option<f64>,
    /// Force of the c6 entry: linear, abs, relu or sign.
    #[arg(long, default_value = "linear")]
    pub nonlinearity: String,
    #[arg(id = "B", long = "B", default_value_t = 1.0, value_parser = parse_finite, allow_negative_numbers = true)]
    pub b_param: f64,
    #[arg(id = "C", long = "C", default_value_t = 0.0, value_parser = parse_finite, allow_negative_numbers = true)]
    pub c_param: f64,
    /// Replace the imaginary unit in the Lagrangian by 1.
    #[arg(long)]
    pub real: bool,
    /// Trajectory as a function of t.
    #[arg(long, value_parser = parse_expr)]
    pub x: Expr,
    #[command(flatten)]
    pub grid: GridArgs,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct GateauxArgs {
    #[command(flatten)]
    pub lagrangian: LagrangianArgs,
    /// Test function of t; defaults to a smooth bump vanishing to second
    /// order at both ends.
    #[arg(long, value_parser = parse_expr)]
    pub eta: Option<Expr>,
    #[arg(long, default_value_t = 1e-4, value_parser = parse_positive)]
    pub epsilon: f64,
}

#[derive(Debug, Args)]
pub struct SystemArgs {
    /// c5_G, quad_vdot, quad_xvdot or quad_xacc.
    #[arg(long)]
    pub system: Family,
    #[arg(id = "A", long = "A", value_parser = parse_finite, allow_negative_numbers = true)]
    pub a_param: Option<f64>,
    /// Force G(x) of the c5_G family.
    #[arg(id = "G", long = "G", value_parser = parse_expr, conflicts_with = "nonlinearity")]
    pub g: Option<Expr>,
    /// Force of the c5_G family from the menu: linear, abs, relu or sign.
    #[arg(long)]
    pub nonlinearity: Option<String>,
    #[arg(id = "B", long = "B", default_value_t = 1.0, value_parser = parse_finite, allow_negative_numbers = true)]
    pub b_param: f64,
    #[arg(id = "C", long = "C", default_value_t = 0.0, value_parser = parse_finite, allow_negative_numbers = true)]
    pub c_param: f64,
}

#[derive(Debug, Args)]
pub struct InitialArgs {
    #[arg(long, default_value_t = 0.0, value_parser = parse_finite, allow_negative_numbers = true)]
    pub x0: f64,
    #[arg(long, default_value_t = 0.0, value_parser = parse_finite, allow_negative_numbers = true)]
    pub v0: f64,
    /// Initial acceleration.
    #[arg(long, default_value_t = 0.0, value_parser = parse_finite, allow_negative_numbers = true)]
    pub a0: f64,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub system: SystemArgs,
    #[command(flatten)]
    pub initial: InitialArgs,
    #[arg(long, default_value_t = 0.0, value_parser = parse_finite, allow_negative_numbers = true)]
    pub t0: f64,
    #[arg(long, value_parser = parse_finite, allow_negative_numbers = true)]
    pub t1: f64,
    #[arg(long, default_value_t = 0.01, value_parser = parse_positive)]
    pub h: f64,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct BenettinArgs {
    #[arg(long, default_value_t = 100.0, value_parser = parse_finite)]
    pub t_transient: f64,
    #[arg(long, default_value_t = 1000.0, value_parser = parse_positive)]
    pub t_measure: f64,
    #[arg(long, default_value_t = 0.01, value_parser = parse_positive)]
    pub h: f64,
    #[arg(long, default_value_t = 10)]
    pub renorm_every: usize,
}

#[derive(Debug, Args)]
pub struct LyapunovArgs {
    #[command(flatten)]
    pub system: SystemArgs,
    #[command(flatten)]
    pub initial: InitialArgs,
    #[command(flatten)]
    pub benettin: BenettinArgs,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub system: SystemArgs,
    #[arg(id = "A_start", long = "A-start", default_value_t = 1.8, value_parser = parse_finite, allow_negative_numbers = true)]
    pub a_start: f64,
    #[arg(id = "A_stop", long = "A-stop", default_value_t = 2.2, value_parser = parse_finite, allow_negative_numbers = true)]
    pub a_stop: f64,
    #[arg(id = "A_step", long = "A-step", default_value_t = 0.005, value_parser = parse_positive)]
    pub a_step: f64,
    /// Initial state as x,v,a; repeat for several. Defaults to
    /// (0, 0, 0.5) and (0, 0, -0.5).
    #[arg(long, value_parser = parse_state, allow_hyphen_values = true)]
    pub initial_state: Vec<State3>,
    #[command(flatten)]
    pub benettin: BenettinArgs,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Base node count: n - 1 must be a multiple of 8.
    #[arg(long, default_value_t = 2049)]
    pub n: usize,
    /// Seed for the random test functions.
    #[arg(long, default_value_t = 7)]
    pub seed: u64,
    /// Report layout; a plain-text report when omitted.
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    #[arg(long, value_name = "PATH")]
    pub output: Option<PathBuf>,
}
