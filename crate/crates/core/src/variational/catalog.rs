use super::spec::{FractionalSlot, LagrangianSpec, SlotArgument};
use crate::expr::Expr;
use crate::fracops::FractionalOrder;
use crate::jerk::Nonlinearity;

fn expr(src: &str) -> Expr {
    src.parse().expect("catalog expressions are well formed")
}

fn entry(name: &str, l: Expr, f: &str, extra_slots: Vec<FractionalSlot>) -> LagrangianSpec {
    LagrangianSpec::with_extras(
        name,
        l,
        expr(f),
        expr("v"),
        FractionalOrder::HALF,
        extra_slots,
        vec!["A".into()],
    )
    .expect("catalog entries are valid")
}

/// [`catalog_with`] for the linear force `G = −x`.
pub fn catalog() -> Vec<LagrangianSpec> {
    catalog_with(&Nonlinearity::linear())
}

/// Lagrangians for the four jerk families, at `α = 1/2` with the parameter
/// `A` left symbolic. In every entry `w = ₐᶜD_t^{1/2} ẋ`.
///
/// | name         | `u` is the derivative of | Lagrangian |
/// |--------------|-----|------------|
/// | `c6`         | `x`  | `−(i/2)w² − (A/2)v² + (i/2)u² − V(x)` |
/// | `quad_vdot`  | `x²` | `−(i/2)w² − (A/2)v² + (i/2)u·w + x²/2` |
/// | `quad_xvdot` | `x²` | `−(i/2)w² − (A/2)v² − (i/2)u·p + x²/2`, with `p = ₐᶜD_t^{1/2} x` |
/// | `quad_xacc`  | `x²` | `−(i/2)w² − (A/2)x·v² + i(A+2)/4·u·w + x²/2` |
///
/// `V` is the potential of `nonlinearity`, so only `c6` depends on it.
pub fn catalog_with(nonlinearity: &Nonlinearity) -> Vec<LagrangianSpec> {
    let c6 =
        expr("-(i/2)*w^2 - (A/2)*v^2 + (i/2)*u^2 - V").substitute("V", &nonlinearity.potential);
    let p = FractionalSlot {
        name: "p".into(),
        argument: SlotArgument::Position,
        function: expr("x"),
    };
    vec![
        entry("c6", c6, "x", vec![]),
        entry(
            "quad_vdot",
            expr("-(i/2)*w^2 - (A/2)*v^2 + (i/2)*u*w + x^2/2"),
            "x^2",
            vec![],
        ),
        entry(
            "quad_xvdot",
            expr("-(i/2)*w^2 - (A/2)*v^2 - (i/2)*u*p + x^2/2"),
            "x^2",
            vec![p],
        ),
        entry(
            "quad_xacc",
            expr("-(i/2)*w^2 - (A/2)*x*v^2 + i*(A+2)/4*u*w + x^2/2"),
            "x^2",
            vec![],
        ),
    ]
}
