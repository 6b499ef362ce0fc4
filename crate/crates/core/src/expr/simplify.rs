use num_complex::Complex64;

use super::eval::{apply_binary, apply_func, unsigned_zero};
use super::{BinOp, Expr};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const MINUS_ONE: Complex64 = Complex64::new(-1.0, 0.0);

impl Expr {
    /// Constant folding plus the identities `e+0`, `e*1`, `e*0`, `e^1`, `e^0`
    /// and collection of constant coefficients in products.
    ///
    /// Subexpressions whose folding would raise a domain error are left
    /// unfolded so that evaluation reports the error later.
    pub fn simplify(&self) -> Expr {
        match self {
            Expr::Const(_) | Expr::Var(_) => self.clone(),
            Expr::Neg(e) => neg(e.simplify()),
            Expr::Call(f, e) => {
                let arg = e.simplify();
                if let Some(c) = arg.as_const() {
                    if let Ok(v) = apply_func(*f, c) {
                        return Expr::Const(v);
                    }
                }
                Expr::call(*f, arg)
            }
            Expr::Binary(op, l, r) => binary(*op, l.simplify(), r.simplify()),
        }
    }
}

fn neg(e: Expr) -> Expr {
    match e {
        Expr::Const(c) => Expr::Const(unsigned_zero(-c)),
        Expr::Neg(inner) => *inner,
        Expr::Binary(BinOp::Mul, l, r) if l.as_const().is_some() => {
            coeff_times(unsigned_zero(-l.as_const().unwrap()), *r)
        }
        other => Expr::neg(other),
    }
}

/// `c * e` for a constant `c` and a non-constant simplified `e`.
fn coeff_times(c: Complex64, e: Expr) -> Expr {
    if c == ZERO {
        return Expr::Const(ZERO);
    }
    if c == ONE {
        return e;
    }
    if c == MINUS_ONE {
        return neg(e);
    }
    match e {
        Expr::Binary(BinOp::Mul, l, r) if l.as_const().is_some() => {
            coeff_times(unsigned_zero(c * l.as_const().unwrap()), *r)
        }
        Expr::Neg(inner) => coeff_times(unsigned_zero(-c), *inner),
        other => Expr::binary(BinOp::Mul, Expr::Const(c), other),
    }
}

fn binary(op: BinOp, l: Expr, r: Expr) -> Expr {
    if let (Some(a), Some(b)) = (l.as_const(), r.as_const()) {
        if let Ok(v) = apply_binary(op, a, b) {
            return Expr::Const(v);
        }
        return Expr::binary(op, l, r);
    }
    match op {
        BinOp::Add => match (l.as_const(), r.as_const()) {
            (Some(ZERO), _) => r,
            (_, Some(ZERO)) => l,
            _ => Expr::binary(op, l, r),
        },
        BinOp::Sub => match (l.as_const(), r.as_const()) {
            (_, Some(ZERO)) => l,
            (Some(ZERO), _) => neg(r),
            _ => Expr::binary(op, l, r),
        },
        BinOp::Mul => match (l.as_const(), r.as_const()) {
            (Some(c), _) => coeff_times(c, r),
            (_, Some(c)) => coeff_times(c, l),
            _ => Expr::binary(op, l, r),
        },
        BinOp::Div => match (l.as_const(), r.as_const()) {
            (_, Some(ONE)) => l,
            (Some(ZERO), _) => Expr::Const(ZERO),
            (_, Some(d)) if d != ZERO => match l {
                Expr::Binary(BinOp::Mul, ref a, ref e) if a.as_const().is_some() => {
                    coeff_times(unsigned_zero(a.as_const().unwrap() / d), (**e).clone())
                }
                _ => Expr::binary(op, l, r),
            },
            _ => Expr::binary(op, l, r),
        },
        BinOp::Pow => match (l.as_const(), r.as_const()) {
            (_, Some(ONE)) => l,
            (_, Some(ZERO)) => Expr::Const(ONE),
            (Some(ONE), _) => Expr::Const(ONE),
            _ => Expr::binary(op, l, r),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(src: &str) -> Expr {
        src.parse::<Expr>().unwrap().simplify()
    }

    fn p(src: &str) -> Expr {
        src.parse().unwrap()
    }

    #[test]
    fn identities() {
        assert_eq!(s("0*sin(x)+y"), p("y"));
        assert_eq!(s("2*3"), Expr::real(6.0));
        assert_eq!(s("x^1"), p("x"));
        assert_eq!(s("x^0"), Expr::real(1.0));
        assert_eq!(s("x-0"), p("x"));
        assert_eq!(s("0-x"), p("-x"));
        assert_eq!(s("x/1"), p("x"));
        assert_eq!(s("--x"), p("x"));
    }

    #[test]
    fn coefficients_collect() {
        assert_eq!(s("(2*x)/2"), p("x"));
        assert_eq!(
            s("3*(2*x)"),
            Expr::binary(BinOp::Mul, Expr::real(6.0), p("x"))
        );
        assert_eq!(s("x*2"), Expr::binary(BinOp::Mul, Expr::real(2.0), p("x")));
        assert_eq!(s("-1*x"), p("-x"));
        assert_eq!(
            s("2*(-x)"),
            Expr::binary(BinOp::Mul, Expr::real(-2.0), p("x"))
        );
    }

    #[test]
    fn imaginary_constants_fold() {
        assert_eq!(s("-(i/2)"), Expr::Const(Complex64::new(0.0, -0.5)));
    }

    #[test]
    fn domain_errors_are_not_folded() {
        let e = s("ln(0) + x");
        assert_eq!(e, p("ln(0) + x"));
        assert!(e.eval_with(|_| Some(ONE)).is_err());
    }
}
