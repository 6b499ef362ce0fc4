use super::{BinOp, Expr, ExprError, Func, Token, TokenKind};

/// Recursive-descent parser.
///
/// Precedence from tightest: `^` (right-associative), unary `-`, `*` `/`,
/// then `+` `-` (both left-associative).
pub fn parse(tokens: &[Token]) -> Result<Expr, ExprError> {
    let mut p = Parser { tokens, pos: 0 };
    if tokens.is_empty() {
        return Err(ExprError::Syntax {
            pos: 0,
            message: "empty expression".into(),
        });
    }
    let e = p.expr()?;
    if let Some(t) = p.peek() {
        return Err(ExprError::Syntax {
            pos: t.pos,
            message: format!("unexpected '{}'", t.text),
        });
    }
    Ok(e)
}

struct Parser<'a> {
    tokens: &'a [Token],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&'a Token> {
        self.tokens.get(self.pos)
    }

    fn end_pos(&self) -> usize {
        self.tokens
            .last()
            .map(|t| t.pos + t.text.chars().count())
            .unwrap_or(0)
    }

    fn peek_op(&self, ops: &[&str]) -> Option<&'a Token> {
        self.peek()
            .filter(|t| t.kind == TokenKind::Operator && ops.contains(&t.text.as_str()))
    }

    fn expect_close(&mut self, open: &Token) -> Result<(), ExprError> {
        match self.peek() {
            Some(t) if t.kind == TokenKind::Paren && t.text == ")" => {
                self.pos += 1;
                Ok(())
            }
            Some(t) => Err(ExprError::Syntax {
                pos: t.pos,
                message: format!(
                    "expected ')' to close '(' at index {}, found '{}'",
                    open.pos, t.text
                ),
            }),
            None => Err(ExprError::Syntax {
                pos: self.end_pos(),
                message: format!("unbalanced '(' at index {}", open.pos),
            }),
        }
    }

    fn expr(&mut self) -> Result<Expr, ExprError> {
        let mut lhs = self.term()?;
        while let Some(t) = self.peek_op(&["+", "-"]) {
            self.pos += 1;
            let op = if t.text == "+" {
                BinOp::Add
            } else {
                BinOp::Sub
            };
            lhs = Expr::binary(op, lhs, self.term()?);
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Expr, ExprError> {
        let mut lhs = self.unary()?;
        while let Some(t) = self.peek_op(&["*", "/"]) {
            self.pos += 1;
            let op = if t.text == "*" {
                BinOp::Mul
            } else {
                BinOp::Div
            };
            lhs = Expr::binary(op, lhs, self.unary()?);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr, ExprError> {
        if self.peek_op(&["-"]).is_some() {
            self.pos += 1;
            return Ok(Expr::neg(self.unary()?));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ExprError> {
        let base = self.atom()?;
        if self.peek_op(&["^"]).is_some() {
            self.pos += 1;
            let exponent = self.unary()?;
            return Ok(Expr::binary(BinOp::Pow, base, exponent));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr, ExprError> {
        let Some(t) = self.peek() else {
            return Err(ExprError::Syntax {
                pos: self.end_pos(),
                message: "expression ends where an operand was expected".into(),
            });
        };
        self.pos += 1;
        match t.kind {
            TokenKind::Number => Ok(Expr::real(t.text.parse().map_err(|_| {
                ExprError::Syntax {
                    pos: t.pos,
                    message: format!("bad number '{}'", t.text),
                }
            })?)),
            TokenKind::Identifier => {
                let is_call =
                    matches!(self.peek(), Some(n) if n.kind == TokenKind::Paren && n.text == "(");
                if is_call {
                    let func = Func::from_name(&t.text).ok_or_else(|| ExprError::Syntax {
                        pos: t.pos,
                        message: format!("unknown function '{}'", t.text),
                    })?;
                    let open = &self.tokens[self.pos];
                    self.pos += 1;
                    let arg = self.expr()?;
                    self.expect_close(open)?;
                    Ok(Expr::call(func, arg))
                } else if t.text == "i" {
                    Ok(Expr::imag_unit())
                } else {
                    Ok(Expr::var(t.text.clone()))
                }
            }
            TokenKind::Paren if t.text == "(" => {
                let inner = self.expr()?;
                self.expect_close(t)?;
                Ok(inner)
            }
            _ => Err(ExprError::Syntax {
                pos: t.pos,
                message: format!("expected an operand, found '{}'", t.text),
            }),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::tokenize;
    use num_complex::Complex64;

    fn p(s: &str) -> Result<Expr, ExprError> {
        parse(&tokenize(s)?)
    }

    fn var(n: &str) -> Expr {
        Expr::var(n)
    }

    #[test]
    fn precedence() {
        assert_eq!(
            p("a+b*c").unwrap(),
            Expr::binary(
                BinOp::Add,
                var("a"),
                Expr::binary(BinOp::Mul, var("b"), var("c"))
            )
        );
        assert_eq!(
            p("a-b-c").unwrap(),
            Expr::binary(
                BinOp::Sub,
                Expr::binary(BinOp::Sub, var("a"), var("b")),
                var("c")
            )
        );
        assert_eq!(
            p("-x^2").unwrap(),
            Expr::neg(Expr::binary(BinOp::Pow, var("x"), Expr::real(2.0)))
        );
        assert_eq!(
            p("x^-2").unwrap(),
            Expr::binary(BinOp::Pow, var("x"), Expr::neg(Expr::real(2.0)))
        );
    }

    #[test]
    fn power_is_right_associative() {
        let e = p("2^3^2").unwrap();
        assert_eq!(
            e,
            Expr::binary(
                BinOp::Pow,
                Expr::real(2.0),
                Expr::binary(BinOp::Pow, Expr::real(3.0), Expr::real(2.0))
            )
        );
        assert_eq!(e.eval_with(|_| None).unwrap(), Complex64::new(512.0, 0.0));
    }

    #[test]
    fn imaginary_literal() {
        assert_eq!(
            p("i*x^2").unwrap(),
            Expr::binary(
                BinOp::Mul,
                Expr::Const(Complex64::i()),
                Expr::binary(BinOp::Pow, var("x"), Expr::real(2.0))
            )
        );
    }

    #[test]
    fn function_calls() {
        assert_eq!(
            p("sqrt(x+1)").unwrap(),
            Expr::call(Func::Sqrt, p("x+1").unwrap())
        );
        assert_eq!(
            p("abs(-x)").unwrap(),
            Expr::call(Func::Abs, Expr::neg(var("x")))
        );
    }

    fn syntax_pos(s: &str) -> usize {
        match p(s) {
            Err(ExprError::Syntax { pos, .. }) => pos,
            other => panic!("expected syntax error for {s:?}, got {other:?}"),
        }
    }

    #[test]
    fn syntax_errors_carry_positions() {
        assert_eq!(syntax_pos("(a+b"), 4);
        assert_eq!(syntax_pos("a+b)"), 3);
        assert_eq!(syntax_pos("a+"), 2);
        assert_eq!(syntax_pos("a*/b"), 2);
        assert_eq!(syntax_pos("foo(x)"), 0);
        assert_eq!(syntax_pos("2x"), 1);
        assert_eq!(syntax_pos(""), 0);
        assert_eq!(syntax_pos("sin(x,y)"), 5);
        assert_eq!(syntax_pos("()"), 1);
    }
}
