use std::collections::HashMap;

use num_complex::Complex64;

use super::{BinOp, Expr, ExprError, Func};

/// Variable bindings for [`Expr::eval`].
pub type Env = HashMap<String, Complex64>;

impl Expr {
    pub fn eval(&self, env: &Env) -> Result<Complex64, ExprError> {
        self.eval_with(|name| env.get(name).copied())
    }

    /// Evaluates with a lookup closure instead of a map.
    pub fn eval_with<F>(&self, lookup: F) -> Result<Complex64, ExprError>
    where
        F: Fn(&str) -> Option<Complex64>,
    {
        self.eval_inner(&lookup)
    }

    fn eval_inner<F>(&self, lookup: &F) -> Result<Complex64, ExprError>
    where
        F: Fn(&str) -> Option<Complex64>,
    {
        match self {
            Expr::Const(c) => Ok(*c),
            Expr::Var(name) => lookup(name).ok_or_else(|| ExprError::UnboundVariable(name.clone())),
            Expr::Neg(e) => Ok(unsigned_zero(-e.eval_inner(lookup)?)),
            Expr::Binary(op, l, r) => {
                apply_binary(*op, l.eval_inner(lookup)?, r.eval_inner(lookup)?)
            }
            Expr::Call(f, e) => apply_func(*f, e.eval_inner(lookup)?),
        }
    }
}

/// Replaces `-0.0` parts by `+0.0`. A negative real with a `-0.0` imaginary
/// part sits on the lower side of the branch cut, so without this `-(1.75)`
/// and the literal `-1.75` would pick different branches of `^`, `ln` and
/// `sqrt`.
pub(crate) fn unsigned_zero(z: Complex64) -> Complex64 {
    Complex64::new(z.re + 0.0, z.im + 0.0)
}

fn finite(op: &'static str, z: Complex64) -> Result<Complex64, ExprError> {
    if z.re.is_finite() && z.im.is_finite() {
        Ok(unsigned_zero(z))
    } else {
        Err(ExprError::Domain {
            op,
            detail: "non-finite result".into(),
        })
    }
}

fn is_real(z: Complex64) -> bool {
    z.im == 0.0
}

pub(crate) fn apply_binary(op: BinOp, a: Complex64, b: Complex64) -> Result<Complex64, ExprError> {
    match op {
        BinOp::Add => finite("+", a + b),
        BinOp::Sub => finite("-", a - b),
        BinOp::Mul => finite("*", a * b),
        BinOp::Div => {
            if b == Complex64::new(0.0, 0.0) {
                return Err(ExprError::Domain {
                    op: "/",
                    detail: "division by zero".into(),
                });
            }
            if is_real(a) && is_real(b) {
                finite("/", Complex64::new(a.re / b.re, 0.0))
            } else {
                finite("/", a / b)
            }
        }
        BinOp::Pow => power(a, b),
    }
}

fn power(base: Complex64, exponent: Complex64) -> Result<Complex64, ExprError> {
    let zero = Complex64::new(0.0, 0.0);
    if base == zero {
        return if exponent.re > 0.0 {
            Ok(zero)
        } else if exponent == zero {
            Ok(Complex64::new(1.0, 0.0))
        } else {
            Err(ExprError::Domain {
                op: "^",
                detail: format!("zero raised to {exponent}"),
            })
        };
    }
    if is_real(exponent) {
        let p = exponent.re;
        if p.fract() == 0.0 && p.abs() <= i32::MAX as f64 {
            if is_real(base) {
                return finite("^", Complex64::new(base.re.powi(p as i32), 0.0));
            }
            return finite("^", base.powi(p as i32));
        }
        if is_real(base) && base.re > 0.0 {
            return finite("^", Complex64::new(base.re.powf(p), 0.0));
        }
    }
    finite("^", base.powc(exponent))
}

pub(crate) fn apply_func(f: Func, z: Complex64) -> Result<Complex64, ExprError> {
    let real = is_real(z);
    let r = |v: f64| Complex64::new(v, 0.0);
    let out = match f {
        Func::Sin if real => r(z.re.sin()),
        Func::Sin => z.sin(),
        Func::Cos if real => r(z.re.cos()),
        Func::Cos => z.cos(),
        Func::Exp if real => r(z.re.exp()),
        Func::Exp => z.exp(),
        Func::Ln => {
            if z == Complex64::new(0.0, 0.0) {
                return Err(ExprError::Domain {
                    op: "ln",
                    detail: "logarithm of zero".into(),
                });
            }
            if real && z.re > 0.0 {
                r(z.re.ln())
            } else {
                z.ln()
            }
        }
        Func::Sqrt if real && z.re >= 0.0 => r(z.re.sqrt()),
        Func::Sqrt => z.sqrt(),
        Func::Abs => r(z.norm()),
        Func::Sgn => {
            if real {
                r(if z.re > 0.0 {
                    1.0
                } else if z.re < 0.0 {
                    -1.0
                } else {
                    0.0
                })
            } else {
                z / z.norm()
            }
        }
    };
    finite(f.name(), out)
}
