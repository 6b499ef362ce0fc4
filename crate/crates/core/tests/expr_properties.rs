use fracvar::expr::{tokenize, BinOp, Expr, Func};
use num_complex::Complex64;
use proptest::prelude::*;

const VARS: [&str; 5] = ["t", "x", "v", "u", "w"];

fn leaf() -> impl Strategy<Value = Expr> {
    prop_oneof![
        (-3.0..3.0f64).prop_map(|c| Expr::real((c * 8.0).round() / 8.0)),
        (-3.0..3.0f64).prop_map(Expr::real),
        Just(Expr::imag_unit()),
        proptest::sample::select(&VARS[..]).prop_map(Expr::var),
    ]
}

/// Random expressions of depth at most 6.
fn expr_tree() -> impl Strategy<Value = Expr> {
    leaf().prop_recursive(5, 48, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(Expr::neg),
            (inner.clone(), inner.clone()).prop_map(|(l, r)| Expr::binary(BinOp::Add, l, r)),
            (inner.clone(), inner.clone()).prop_map(|(l, r)| Expr::binary(BinOp::Sub, l, r)),
            (inner.clone(), inner.clone()).prop_map(|(l, r)| Expr::binary(BinOp::Mul, l, r)),
            (inner.clone(), inner.clone()).prop_map(|(l, r)| Expr::binary(BinOp::Div, l, r)),
            (inner.clone(), 0..4i32).prop_map(|(l, k)| Expr::binary(
                BinOp::Pow,
                l,
                Expr::real(k as f64)
            )),
            (inner.clone(), inner.clone()).prop_map(|(l, r)| Expr::binary(BinOp::Pow, l, r)),
            (inner, proptest::sample::select(&Func::ALL[..])).prop_map(|(e, f)| Expr::call(f, e)),
        ]
    })
}

fn env() -> impl Strategy<Value = [f64; 5]> {
    proptest::array::uniform5(-1.5..1.5f64)
}

fn eval_at(e: &Expr, vals: &[f64; 5]) -> Option<Complex64> {
    e.eval_with(|name| {
        VARS.iter()
            .position(|v| *v == name)
            .map(|k| Complex64::new(vals[k], 0.0))
    })
    .ok()
}

/// True when every `abs`/`sgn` argument inside `e` is real at `vals`. Those
/// two are differentiated as real functions, which is meaningless once their
/// argument has left the real line.
fn kinks_see_real_arguments(e: &Expr, vals: &[f64; 5]) -> bool {
    match e {
        Expr::Const(_) | Expr::Var(_) => true,
        Expr::Neg(inner) => kinks_see_real_arguments(inner, vals),
        Expr::Binary(_, l, r) => {
            kinks_see_real_arguments(l, vals) && kinks_see_real_arguments(r, vals)
        }
        Expr::Call(f, arg) => {
            let here = match f {
                Func::Abs | Func::Sgn => eval_at(arg, vals).is_none_or(|z| z.im == 0.0),
                _ => true,
            };
            here && kinks_see_real_arguments(arg, vals)
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn print_parse_round_trip(e in expr_tree()) {
        prop_assume!(e.depth() <= 6);
        let printed = e.to_string();
        let reparsed: Expr = fracvar::expr::parse(&tokenize(&printed).unwrap()).unwrap();
        prop_assert_eq!(reparsed.simplify(), e.simplify());
        let canonical = e.simplify();
        let again: Expr = canonical.to_string().parse().unwrap();
        prop_assert_eq!(again.simplify(), canonical);
    }

    #[test]
    fn simplify_preserves_value(e in expr_tree(), vals in env()) {
        let (Some(before), Some(after)) = (eval_at(&e, &vals), eval_at(&e.simplify(), &vals)) else {
            return Ok(());
        };
        // coefficient collection reassociates constant products, which can
        // move the last few bits
        prop_assert!(
            (before - after).norm() <= 1e-9 * (1.0 + before.norm()),
            "{} at {:?}: {} vs {}", e, vals, before, after
        );
    }

    #[test]
    fn derivative_matches_central_difference(e in expr_tree(), vals in env()) {
        let step = 1e-6;
        let mut plus = vals;
        let mut minus = vals;
        plus[1] += step;
        minus[1] -= step;
        let (Some(center), Some(fp), Some(fm)) = (eval_at(&e, &vals), eval_at(&e, &plus), eval_at(&e, &minus)) else {
            return Ok(());
        };
        // keep away from kinks of abs/sgn and from poles where the
        // difference quotient itself is meaningless
        prop_assume!(center.norm() < 1e6 && fp.norm() < 1e6 && fm.norm() < 1e6);
        prop_assume!(kinks_see_real_arguments(&e, &vals));
        let fd = (fp - fm) / (2.0 * step);
        let Some(symbolic) = eval_at(&e.diff("x"), &vals) else {
            return Ok(());
        };
        let curvature = (fp + fm - center * 2.0).norm() / (step * step);
        prop_assume!(curvature < 1e4 && symbolic.norm() < 1e5);
        prop_assert!(
            (symbolic - fd).norm() <= 1e-5 * (1.0 + symbolic.norm()),
            "d/dx {} at {:?}: symbolic {} vs fd {}", e, vals, symbolic, fd
        );
    }
}
