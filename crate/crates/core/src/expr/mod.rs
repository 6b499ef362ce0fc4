//! A small expression language over complex scalars.
//!
//! Expressions are written in an infix grammar (see the guide chapter on
//! expressions), parsed into an immutable [`Expr`] tree, evaluated against a
//! variable environment, and differentiated symbolically. The literal `i` is
//! the imaginary unit.
//!
//! ```
//! use fracvar::expr::Expr;
//! use num_complex::Complex64;
//!
//! let lagrangian: Expr = "v^2/2 - x^2/2".parse().unwrap();
//! let dl_dx = lagrangian.diff("x");
//! assert_eq!(dl_dx.to_string(), "(-x)");
//! let value = dl_dx.eval_with(|name| (name == "x").then(|| Complex64::new(3.0, 0.0))).unwrap();
//! assert_eq!(value, Complex64::new(-3.0, 0.0));
//! ```

mod compiled;
mod diff;
mod eval;
mod lexer;
mod parser;
mod simplify;

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use thiserror::Error;

pub use compiled::CompiledExpr;
pub use eval::Env;
pub use lexer::{tokenize, Token, TokenKind};
pub use parser::parse;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ExprError {
    #[error("lexical error at index {pos}: {message}")]
    Lex { pos: usize, message: String },
    #[error("syntax error at index {pos}: {message}")]
    Syntax { pos: usize, message: String },
    #[error("unbound variable '{0}'")]
    UnboundVariable(String),
    #[error("domain error in {op}: {detail}")]
    Domain { op: &'static str, detail: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

impl BinOp {
    pub fn symbol(self) -> char {
        match self {
            BinOp::Add => '+',
            BinOp::Sub => '-',
            BinOp::Mul => '*',
            BinOp::Div => '/',
            BinOp::Pow => '^',
        }
    }
}

/// Built-in functions of one argument.
///
/// `sgn(z)` is `z/|z|` with `sgn(0) = 0`; it is the derivative of `abs` on the
/// real line and is what `diff` produces for `abs`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Func {
    Sin,
    Cos,
    Exp,
    Ln,
    Sqrt,
    Abs,
    Sgn,
}

impl Func {
    pub const ALL: [Func; 7] = [
        Func::Sin,
        Func::Cos,
        Func::Exp,
        Func::Ln,
        Func::Sqrt,
        Func::Abs,
        Func::Sgn,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Exp => "exp",
            Func::Ln => "ln",
            Func::Sqrt => "sqrt",
            Func::Abs => "abs",
            Func::Sgn => "sgn",
        }
    }

    pub fn from_name(name: &str) -> Option<Func> {
        Func::ALL.into_iter().find(|f| f.name() == name)
    }
}

/// Expression tree. Immutable once built; all transformations return new trees.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Const(Complex64),
    Var(String),
    Neg(Box<Expr>),
    Binary(BinOp, Box<Expr>, Box<Expr>),
    Call(Func, Box<Expr>),
}

impl Expr {
    pub fn real(v: f64) -> Expr {
        Expr::Const(Complex64::new(v, 0.0))
    }

    pub fn imag_unit() -> Expr {
        Expr::Const(Complex64::i())
    }

    pub fn var(name: impl Into<String>) -> Expr {
        Expr::Var(name.into())
    }

    pub fn binary(op: BinOp, lhs: Expr, rhs: Expr) -> Expr {
        Expr::Binary(op, Box::new(lhs), Box::new(rhs))
    }

    pub fn call(func: Func, arg: Expr) -> Expr {
        Expr::Call(func, Box::new(arg))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn neg(e: Expr) -> Expr {
        Expr::Neg(Box::new(e))
    }

    pub fn as_const(&self) -> Option<Complex64> {
        match self {
            Expr::Const(c) => Some(*c),
            _ => None,
        }
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            Expr::Const(_) => {}
            Expr::Var(name) => {
                out.insert(name.clone());
            }
            Expr::Neg(e) | Expr::Call(_, e) => e.collect_vars(out),
            Expr::Binary(_, l, r) => {
                l.collect_vars(out);
                r.collect_vars(out);
            }
        }
    }

    pub fn depends_on(&self, var: &str) -> bool {
        match self {
            Expr::Const(_) => false,
            Expr::Var(name) => name == var,
            Expr::Neg(e) | Expr::Call(_, e) => e.depends_on(var),
            Expr::Binary(_, l, r) => l.depends_on(var) || r.depends_on(var),
        }
    }

    /// Replaces every occurrence of the variable `var` with `with`.
    pub fn substitute(&self, var: &str, with: &Expr) -> Expr {
        match self {
            Expr::Var(name) if name == var => with.clone(),
            Expr::Const(_) | Expr::Var(_) => self.clone(),
            Expr::Neg(e) => Expr::neg(e.substitute(var, with)),
            Expr::Call(f, e) => Expr::call(*f, e.substitute(var, with)),
            Expr::Binary(op, l, r) => {
                Expr::binary(*op, l.substitute(var, with), r.substitute(var, with))
            }
        }
    }

    /// Rewrites each constant `re + im·i` as `re + im·unit`.
    ///
    /// On a freshly parsed tree every constant is either real or the literal
    /// `i`, so this replaces the imaginary unit by `unit`.
    pub fn replace_imaginary_unit(&self, unit: Complex64) -> Expr {
        match self {
            Expr::Const(c) => Expr::Const(Complex64::new(c.re, 0.0) + unit * c.im),
            Expr::Var(_) => self.clone(),
            Expr::Neg(e) => Expr::neg(e.replace_imaginary_unit(unit)),
            Expr::Call(f, e) => Expr::call(*f, e.replace_imaginary_unit(unit)),
            Expr::Binary(op, l, r) => Expr::binary(
                *op,
                l.replace_imaginary_unit(unit),
                r.replace_imaginary_unit(unit),
            ),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Expr::Const(_) | Expr::Var(_) => 1,
            Expr::Neg(e) | Expr::Call(_, e) => 1 + e.depth(),
            Expr::Binary(_, l, r) => 1 + l.depth().max(r.depth()),
        }
    }
}

impl FromStr for Expr {
    type Err = ExprError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse(&tokenize(s)?)
    }
}

fn write_real(f: &mut fmt::Formatter<'_>, v: f64) -> fmt::Result {
    if v < 0.0 || (v == 0.0 && v.is_sign_negative()) {
        write!(f, "(-{:?})", -v)
    } else {
        write!(f, "{v:?}")
    }
}

/// Canonical fully parenthesized form; parses back to an equal tree up to
/// folding of negative and complex literals.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Const(c) => {
                if c.im == 0.0 {
                    write_real(f, c.re)
                } else if c.re == 0.0 {
                    write!(f, "(")?;
                    write_real(f, c.im)?;
                    write!(f, "*i)")
                } else {
                    write!(f, "(")?;
                    write_real(f, c.re)?;
                    write!(f, "+")?;
                    write_real(f, c.im)?;
                    write!(f, "*i)")
                }
            }
            Expr::Var(name) => write!(f, "{name}"),
            Expr::Neg(e) => write!(f, "(-{e})"),
            Expr::Binary(op, l, r) => write!(f, "({l}{}{r})", op.symbol()),
            Expr::Call(func, e) => write!(f, "{}({e})", func.name()),
        }
    }
}

impl serde::Serialize for Expr {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> serde::Deserialize<'de> for Expr {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let src = String::deserialize(d)?;
        src.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Expr {
        s.parse().unwrap()
    }

    #[test]
    fn free_vars_and_substitution() {
        let e = p("sin(t)*x + u^2");
        let vars: Vec<_> = e.free_vars().into_iter().collect();
        assert_eq!(vars, ["t", "u", "x"]);
        let s = e.substitute("x", &p("v+1"));
        assert!(!s.depends_on("x"));
        assert!(s.depends_on("v"));
    }

    #[test]
    fn display_is_fully_parenthesized() {
        assert_eq!(p("a+b*c").to_string(), "(a+(b*c))");
        assert_eq!(p("-x^2").to_string(), "(-(x^2.0))");
        assert_eq!(p("i*x").to_string(), "((1.0*i)*x)");
        assert_eq!(Expr::real(-2.5).to_string(), "(-2.5)");
        assert_eq!(
            Expr::Const(Complex64::new(1.0, -2.0)).to_string(),
            "(1.0+(-2.0)*i)"
        );
    }

    #[test]
    fn imaginary_unit_replacement() {
        let e = p("-(i/2)*w^2 + 3");
        let r = e.replace_imaginary_unit(Complex64::new(1.0, 0.0));
        assert_eq!(r, p("-(1/2)*w^2 + 3"));
    }
}
