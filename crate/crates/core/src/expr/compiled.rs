use num_complex::Complex64;

use super::eval::{apply_binary, apply_func, unsigned_zero};
use super::{BinOp, Expr, ExprError, Func};

#[derive(Debug, Clone)]
enum Node {
    Const(Complex64),
    Slot(usize),
    Neg(Box<Node>),
    Binary(BinOp, Box<Node>, Box<Node>),
    Call(Func, Box<Node>),
}

/// An [`Expr`] with variables resolved to positions in a slice.
///
/// Used in inner loops (grid sweeps, ODE right-hand sides) where a name
/// lookup per variable per evaluation would dominate.
#[derive(Debug, Clone)]
pub struct CompiledExpr {
    root: Node,
    arity: usize,
}

impl CompiledExpr {
    /// `vars[k]` is bound to `values[k]` at evaluation time. Any free
    /// variable of `expr` outside `vars` is an [`ExprError::UnboundVariable`].
    pub fn new(expr: &Expr, vars: &[&str]) -> Result<Self, ExprError> {
        Ok(CompiledExpr {
            root: lower(expr, vars)?,
            arity: vars.len(),
        })
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn eval(&self, values: &[Complex64]) -> Result<Complex64, ExprError> {
        assert_eq!(
            values.len(),
            self.arity,
            "compiled expression arity mismatch"
        );
        eval_node(&self.root, values)
    }

    /// Real-valued evaluation; the imaginary part of the result is dropped
    /// after checking it is zero.
    pub fn eval_real(&self, values: &[f64]) -> Result<f64, ExprError> {
        assert_eq!(
            values.len(),
            self.arity,
            "compiled expression arity mismatch"
        );
        let z = eval_real_node(&self.root, values)?;
        if z.im != 0.0 {
            return Err(ExprError::Domain {
                op: "real evaluation",
                detail: format!("complex result {z}"),
            });
        }
        Ok(z.re)
    }
}

fn lower(e: &Expr, vars: &[&str]) -> Result<Node, ExprError> {
    Ok(match e {
        Expr::Const(c) => Node::Const(*c),
        Expr::Var(name) => Node::Slot(
            vars.iter()
                .position(|v| v == name)
                .ok_or_else(|| ExprError::UnboundVariable(name.clone()))?,
        ),
        Expr::Neg(inner) => Node::Neg(Box::new(lower(inner, vars)?)),
        Expr::Binary(op, l, r) => {
            Node::Binary(*op, Box::new(lower(l, vars)?), Box::new(lower(r, vars)?))
        }
        Expr::Call(f, inner) => Node::Call(*f, Box::new(lower(inner, vars)?)),
    })
}

fn eval_node(n: &Node, values: &[Complex64]) -> Result<Complex64, ExprError> {
    match n {
        Node::Const(c) => Ok(*c),
        Node::Slot(k) => Ok(values[*k]),
        Node::Neg(e) => Ok(unsigned_zero(-eval_node(e, values)?)),
        Node::Binary(op, l, r) => apply_binary(*op, eval_node(l, values)?, eval_node(r, values)?),
        Node::Call(f, e) => apply_func(*f, eval_node(e, values)?),
    }
}

fn eval_real_node(n: &Node, values: &[f64]) -> Result<Complex64, ExprError> {
    match n {
        Node::Const(c) => Ok(*c),
        Node::Slot(k) => Ok(Complex64::new(values[*k], 0.0)),
        Node::Neg(e) => Ok(-eval_real_node(e, values)?),
        // fast paths for the real arithmetic that dominates ODE right-hand sides
        Node::Binary(op, l, r) => {
            let a = eval_real_node(l, values)?;
            let b = eval_real_node(r, values)?;
            if a.im == 0.0 && b.im == 0.0 {
                let v = match op {
                    BinOp::Add => a.re + b.re,
                    BinOp::Sub => a.re - b.re,
                    BinOp::Mul => a.re * b.re,
                    _ => return apply_binary(*op, a, b),
                };
                if v.is_finite() {
                    return Ok(Complex64::new(v, 0.0));
                }
            }
            apply_binary(*op, a, b)
        }
        Node::Call(f, e) => apply_func(*f, eval_real_node(e, values)?),
    }
}
