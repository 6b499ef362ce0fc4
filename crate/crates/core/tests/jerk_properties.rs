use fracvar::expr::Expr;
use fracvar::fracops::Grid;
use fracvar::jerk::{
    eom_residual, integrate_rk4, integrate_steps, largest_lyapunov, Family, JerkSystemSpec,
    LyapunovParams, State3, Trajectory,
};
use num_complex::Complex64;
use proptest::prelude::*;

fn free(a: f64) -> JerkSystemSpec {
    JerkSystemSpec::c5(a, Expr::real(0.0)).unwrap()
}

/// All roots of a monic cubic by simultaneous Weierstrass iteration.
fn cubic_roots(c2: f64, c1: f64, c0: f64) -> [Complex64; 3] {
    let p = |z: Complex64| ((z + c2) * z + c1) * z + c0;
    let seed = Complex64::new(0.4, 0.9);
    let mut z = [Complex64::new(1.0, 0.0), seed, seed * seed];
    for _ in 0..500 {
        for i in 0..3 {
            let denom: Complex64 = (0..3).filter(|&j| j != i).map(|j| z[i] - z[j]).product();
            z[i] -= p(z[i]) / denom;
        }
    }
    z
}

#[test]
fn root_oracle_on_known_cubic() {
    // (λ − 1)(λ + 2)(λ − 3) = λ³ − 2λ² − 5λ + 6
    let mut re: Vec<f64> = cubic_roots(-2.0, -5.0, 6.0).iter().map(|z| z.re).collect();
    re.sort_by(f64::total_cmp);
    for (got, want) in re.iter().zip([-2.0, 1.0, 3.0]) {
        assert!((got - want).abs() < 1e-12);
    }
}

#[test]
fn linear_exponent_matches_characteristic_roots() {
    // x‴ = −A x″ − x′ + c x, linearized anywhere, has λ³ + Aλ² + λ − c = 0
    let params = LyapunovParams {
        t_transient: 0.0,
        t_measure: 400.0,
        h: 0.01,
        renorm_every: 10,
    };
    for (a, c) in [(1.0, 0.0), (0.5, -0.3), (2.0, 0.2), (0.3, 0.1)] {
        let sys = JerkSystemSpec::c5(a, format!("({c:e})*x").parse().unwrap()).unwrap();
        let roots = cubic_roots(a, 1.0, -c);
        let expected = roots.iter().map(|z| z.re).fold(f64::NEG_INFINITY, f64::max);
        let got = largest_lyapunov(&sys, State3::new(0.0, 0.0, 0.0), &params).unwrap();
        // a complex pair makes the stretching oscillate, leaving O(1/T) bias
        assert!(
            (got - expected).abs() <= 0.02,
            "A = {a}, c = {c}: {got} vs {expected}"
        );
    }
}

#[test]
fn time_reversal_returns_to_start() {
    let sys = free(0.0);
    let s0 = State3::new(0.3, -0.7, 0.2);
    let (fwd, d) = integrate_steps(&sys, s0, 1e-3, 10_000).unwrap();
    assert!(d.is_none());
    let (back, d) = integrate_steps(&sys, *fwd.last().unwrap(), -1e-3, 10_000).unwrap();
    assert!(d.is_none());
    let end = back.last().unwrap();
    let err = [end.x - s0.x, end.v - s0.v, end.w2 - s0.w2]
        .iter()
        .fold(0.0f64, |m, e| m.max(e.abs()));
    assert!(err <= 1e-8, "{err}");
}

#[test]
fn exact_sine_has_small_residual() {
    let grid = Grid::from_step(0.0, 1e-3, 10_001).unwrap();
    let states = grid
        .nodes()
        .map(|t| State3::new(t.sin(), t.cos(), -t.sin()))
        .collect();
    let tr = Trajectory::from_states(grid, states).unwrap();
    let r = eom_residual(&free(0.0), &tr).unwrap();
    assert!(r.sup_norm_interior <= 1e-3, "{}", r.sup_norm_interior);
}

#[test]
fn catalog_residuals_shrink_under_refinement() {
    let s0 = State3::new(0.1, 0.2, -0.1);
    let systems = [
        JerkSystemSpec::c5(0.6, "-x".parse().unwrap()).unwrap(),
        JerkSystemSpec::quad_vdot(2.017),
        JerkSystemSpec::quad_xvdot(0.5),
        JerkSystemSpec::quad_xacc(1.0),
    ];
    for sys in &systems {
        let residual = |h: f64| {
            let grid = Grid::from_step(0.0, h, (5.0 / h).round() as usize + 1).unwrap();
            let tr = integrate_rk4(sys, s0, grid).unwrap();
            eom_residual(sys, &tr).unwrap().sup_norm_interior
        };
        let (coarse, fine) = (residual(0.02), residual(0.01));
        let order = (coarse / fine).log2();
        assert!(order >= 1.0, "{}: {coarse:e} -> {fine:e}", sys.name);
    }
}

#[test]
fn sprott_exponent() {
    let sys = JerkSystemSpec::quad_vdot(2.017);
    let l = largest_lyapunov(&sys, State3::new(0.0, 0.0, 1.0), &LyapunovParams::default()).unwrap();
    assert!((l - 0.055).abs() <= 0.01, "{l}");
}

#[test]
fn exponent_is_stable_when_measuring_longer() {
    let sys = JerkSystemSpec::quad_vdot(2.017);
    let s0 = State3::new(0.0, 0.0, 1.0);
    let short = LyapunovParams {
        t_measure: 2000.0,
        ..LyapunovParams::default()
    };
    let long = LyapunovParams {
        t_measure: 4000.0,
        ..short
    };
    let a = largest_lyapunov(&sys, s0, &short).unwrap();
    let b = largest_lyapunov(&sys, s0, &long).unwrap();
    assert!((a - b).abs() <= 0.005, "{a} vs {b}");
}

#[test]
fn trajectories_are_deterministic() {
    for family in Family::ALL {
        let g = (family == Family::C5G).then(|| "-x + 0.1*sin(x)".parse().unwrap());
        let sys = JerkSystemSpec::new(family, 0.7, g).unwrap();
        let grid = Grid::from_step(0.0, 0.01, 2001).unwrap();
        let a = integrate_rk4(&sys, State3::new(0.1, 0.0, 0.0), grid).unwrap();
        let b = integrate_rk4(&sys, State3::new(0.1, 0.0, 0.0), grid).unwrap();
        let bits = |t: &Trajectory| t.to_csv().into_bytes();
        assert_eq!(bits(&a), bits(&b));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn damped_linear_systems_are_not_chaotic(
        a in 0.05f64..3.0,
        s in prop::array::uniform3(-1.0f64..1.0),
    ) {
        let params = LyapunovParams { t_transient: 10.0, t_measure: 200.0, h: 0.01, renorm_every: 10 };
        let l = largest_lyapunov(&free(a), State3::new(s[0], s[1], s[2]), &params).unwrap();
        // the neutral root λ = 0 keeps the exponent at zero up to O(1/T)
        prop_assert!(l <= 0.02, "{l}");
    }

    #[test]
    fn rk4_is_reversible_for_linear_systems(
        a in 0.0f64..1.0,
        s in prop::array::uniform3(-1.0f64..1.0),
    ) {
        let sys = free(a);
        let s0 = State3::new(s[0], s[1], s[2]);
        let (fwd, _) = integrate_steps(&sys, s0, 1e-2, 300).unwrap();
        let (back, _) = integrate_steps(&sys, *fwd.last().unwrap(), -1e-2, 300).unwrap();
        let end = back.last().unwrap();
        prop_assert!((end.x - s0.x).abs() + (end.v - s0.v).abs() + (end.w2 - s0.w2).abs() <= 1e-9);
    }
}
