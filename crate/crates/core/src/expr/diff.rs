use super::{BinOp, Expr, Func};

impl Expr {
    /// Symbolic partial derivative with respect to `var`; every other
    /// variable is treated as independent. The result is simplified.
    ///
    /// `abs` differentiates to `sgn`, and `sgn` to zero, which is correct
    /// away from the origin of a real argument.
    pub fn diff(&self, var: &str) -> Expr {
        self.diff_raw(var).simplify()
    }

    fn diff_raw(&self, var: &str) -> Expr {
        if !self.depends_on(var) {
            return Expr::real(0.0);
        }
        use BinOp::*;
        match self {
            Expr::Const(_) => Expr::real(0.0),
            Expr::Var(_) => Expr::real(1.0),
            Expr::Neg(e) => Expr::neg(e.diff_raw(var)),
            Expr::Binary(op, l, r) => {
                let (u, v) = (l.as_ref().clone(), r.as_ref().clone());
                match op {
                    Add | Sub => Expr::binary(*op, u.diff_raw(var), v.diff_raw(var)),
                    Mul => Expr::binary(
                        Add,
                        Expr::binary(Mul, u.diff_raw(var), v.clone()),
                        Expr::binary(Mul, u, v.diff_raw(var)),
                    ),
                    Div if !v.depends_on(var) => Expr::binary(Div, u.diff_raw(var), v),
                    Div => Expr::binary(
                        Div,
                        Expr::binary(
                            Sub,
                            Expr::binary(Mul, u.diff_raw(var), v.clone()),
                            Expr::binary(Mul, u, v.diff_raw(var)),
                        ),
                        Expr::binary(Pow, v, Expr::real(2.0)),
                    ),
                    Pow if !v.depends_on(var) => {
                        // c * u^(c-1) * u'
                        let du = u.diff_raw(var);
                        Expr::binary(
                            Mul,
                            Expr::binary(
                                Mul,
                                v.clone(),
                                Expr::binary(Pow, u, Expr::binary(Sub, v, Expr::real(1.0))),
                            ),
                            du,
                        )
                    }
                    Pow => {
                        // u^v * (v' ln u + v u'/u)
                        let du = u.diff_raw(var);
                        let dv = v.diff_raw(var);
                        Expr::binary(
                            Mul,
                            self.clone(),
                            Expr::binary(
                                Add,
                                Expr::binary(Mul, dv, Expr::call(Func::Ln, u.clone())),
                                Expr::binary(Div, Expr::binary(Mul, v, du), u),
                            ),
                        )
                    }
                }
            }
            Expr::Call(f, e) => {
                let arg = e.as_ref().clone();
                let outer = match f {
                    Func::Sin => Expr::call(Func::Cos, arg.clone()),
                    Func::Cos => Expr::neg(Expr::call(Func::Sin, arg.clone())),
                    Func::Exp => self.clone(),
                    Func::Ln => Expr::binary(Div, Expr::real(1.0), arg.clone()),
                    Func::Sqrt => Expr::binary(
                        Div,
                        Expr::real(1.0),
                        Expr::binary(Mul, Expr::real(2.0), self.clone()),
                    ),
                    Func::Abs => Expr::call(Func::Sgn, arg.clone()),
                    Func::Sgn => return Expr::real(0.0),
                };
                Expr::binary(Mul, outer, arg.diff_raw(var))
            }
        }
    }
}
