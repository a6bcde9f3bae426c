mod common;

use std::f64::consts::FRAC_PI_2;

use proptest::prelude::*;
use simplex_moments::*;

use common::{finite_difference_log_jacobian, integer_vectors, rel_from_logs};

fn counts(max_bins: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-0.9f64..30.0, 2..=max_bins)
}

fn interior_angles(n: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(1e-3f64..FRAC_PI_2 - 1e-3, n - 1)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn log_gamma_recurrence(x in 0.5f64..1.0e5) {
        let (a, b) = (log_gamma(x + 1.0).unwrap(), log_gamma(x).unwrap());
        // Absolute 1e-12 plus the rounding of the two stored values, which
        // dominates once ln Γ(x) exceeds a few thousand.
        let tol = 1e-12 + 4.0 * f64::EPSILON * a.abs().max(b.abs());
        prop_assert!((a - b - x.ln()).abs() <= tol);
    }

    #[test]
    fn log_beta_symmetric(a in 1e-3f64..1e4, b in 1e-3f64..1e4) {
        prop_assert_eq!(log_beta(a, b).unwrap().to_bits(), log_beta(b, a).unwrap().to_bits());
    }

    #[test]
    fn forward_map_is_normalized(theta in prop::collection::vec(0.0f64..=FRAC_PI_2, 1..12)) {
        let p = angles_to_simplex(&AngleVector::new(theta).unwrap());
        let sum: f64 = p.as_slice().iter().sum();
        prop_assert!((sum - 1.0).abs() <= 1e-14);
        prop_assert!(p.as_slice().iter().all(|v| *v >= 0.0));
    }

    #[test]
    fn round_trip_on_open_hypercube(theta in prop::collection::vec(1e-6f64..FRAC_PI_2 - 1e-6, 1..10)) {
        let a = AngleVector::new(theta.clone()).unwrap();
        let back = simplex_to_angles(&angles_to_simplex(&a));
        for (x, y) in back.as_slice().iter().zip(&theta) {
            prop_assert!((x - y).abs() <= 1e-12, "{x} vs {y}");
        }
    }

    #[test]
    fn inverse_then_forward_reproduces_point(raw in prop::collection::vec(0.0f64..1.0, 2..10)) {
        let total: f64 = raw.iter().sum();
        prop_assume!(total > 1e-3);
        let p: Vec<f64> = raw.iter().map(|v| v / total).collect();
        let point = SimplexPoint::new(p.clone()).unwrap();
        let again = angles_to_simplex(&simplex_to_angles(&point));
        for (x, y) in again.as_slice().iter().zip(&p) {
            prop_assert!((x - y).abs() <= 1e-12);
        }
    }

    #[test]
    fn integrand_times_jacobian_factorizes(
        (m, theta) in (3usize..=8).prop_flat_map(|n| (
            prop::collection::vec(-0.9f64..12.0, n),
            interior_angles(n),
        ))
    ) {
        let ev = ExponentVector::new(m.clone()).unwrap();
        let angles = AngleVector::new(theta.clone()).unwrap();
        let p = angles_to_simplex(&angles);
        let lhs: f64 = m.iter().zip(p.as_slice()).map(|(mi, pi)| mi * pi.ln()).sum::<f64>()
            + log_jacobian(&angles).ln();
        let rhs: f64 = (0..theta.len()).map(|j| log_kernel(j, &ev, theta[j]).unwrap()).sum();
        prop_assert!(rel_from_logs(lhs, rhs) <= 1e-11, "{lhs} vs {rhs}");
    }

    #[test]
    fn jacobian_matches_finite_differences(theta in (3usize..=5).prop_flat_map(|n| prop::collection::vec(0.05f64..FRAC_PI_2 - 0.05, n - 1))) {
        let lj = log_jacobian(&AngleVector::new(theta.clone()).unwrap()).ln();
        let fd = finite_difference_log_jacobian(&theta, 1e-5);
        prop_assert!(rel_from_logs(lj, fd) <= 1e-6);
    }

    #[test]
    fn means_sum_to_one(m in prop::collection::vec(-0.9f64..1.0e4, 2..=64)) {
        let ev = ExponentVector::new(m).unwrap();
        let sum: f64 = (0..ev.bins()).map(|i| mean(&ev, i).unwrap()).sum();
        prop_assert!((sum - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn moment_tower_property(
        (m, a, b) in (2usize..=6).prop_flat_map(|n| (
            prop::collection::vec(0.0f64..20.0, n),
            prop::collection::vec(0u8..3, n),
            prop::collection::vec(0u8..3, n),
        ))
    ) {
        let ev = ExponentVector::new(m).unwrap();
        let a: Vec<f64> = a.into_iter().map(f64::from).collect();
        let b: Vec<f64> = b.into_iter().map(f64::from).collect();
        let ab: Vec<f64> = a.iter().zip(&b).map(|(x, y)| x + y).collect();
        let whole = moment(&ev, &MomentIndex::new(ab).unwrap()).unwrap();
        let first = moment(&ev, &MomentIndex::new(a.clone()).unwrap()).unwrap();
        let second = moment(&ev.shifted(&a).unwrap(), &MomentIndex::new(b).unwrap()).unwrap();
        prop_assert!(((first * second) / whole - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn permutation_equivariance(m in counts(8), rotation in 0usize..8) {
        let n = m.len();
        let r = rotation % n;
        let mut rotated = m.clone();
        rotated.rotate_left(r);
        let a = summarize(&ExponentVector::new(m).unwrap());
        let b = summarize(&ExponentVector::new(rotated).unwrap());
        for i in 0..n {
            let j = (i + n - r) % n;
            prop_assert_eq!(a[i], b[j]);
        }
    }

    #[test]
    fn log_integral_unit_step(m in counts(6), i in 0usize..6) {
        let ev = ExponentVector::new(m.clone()).unwrap();
        let i = i % m.len();
        let mut up = m.clone();
        up[i] += 1.0;
        let step = log_integral(&ExponentVector::new(up).unwrap()).unwrap().ln()
            - log_integral(&ev).unwrap().ln();
        // I(m + e_i) / I(m) = (m_i + 1) / (N + n)
        let expected = ((m[i] + 1.0) / ev.total_plus_bins()).ln();
        prop_assert!((step - expected).abs() <= 1e-11 * ev.total_plus_bins().ln().max(1.0));
    }

    #[test]
    fn canonical_print_round_trips(src in expression()) {
        let e = PriorExpression::parse(&src).unwrap();
        let again = PriorExpression::parse(&e.canonical()).unwrap();
        prop_assert_eq!(e.ast(), again.ast());
    }

    #[test]
    fn evaluation_is_pure(src in expression(), raw in prop::collection::vec(0.01f64..1.0, 3)) {
        let total: f64 = raw.iter().sum();
        let p: Vec<f64> = raw.iter().map(|v| v / total).collect();
        let e = PriorExpression::parse(&src).unwrap();
        let a = e.evaluate_slice(&p);
        let b = e.evaluate_slice(&p);
        match (a, b) {
            (Ok(x), Ok(y)) => prop_assert_eq!(x.to_bits(), y.to_bits()),
            (Err(x), Err(y)) => prop_assert_eq!(x, y),
            _ => prop_assert!(false, "mismatched outcomes"),
        }
    }
}

/// Random well-formed source text over p1..p3.
fn expression() -> impl Strategy<Value = String> {
    let leaf = prop_oneof![
        (0.0f64..100.0).prop_map(|v| format!("{v}")),
        (1usize..=3).prop_map(|i| format!("p{i}")),
    ];
    leaf.prop_recursive(5, 48, 3, |inner| {
        prop_oneof![
            (inner.clone(), prop::sample::select(vec!["+", "-", "*", "/", "^"]), inner.clone())
                .prop_map(|(a, op, b)| format!("({a}){op}({b})")),
            inner.clone().prop_map(|a| format!("-({a})")),
            (prop::sample::select(vec!["exp", "log", "sqrt", "abs"]), inner.clone())
                .prop_map(|(f, a)| format!("{f}({a})")),
            (inner.clone(), inner).prop_map(|(a, b)| format!("pow({a}, {b})")),
        ]
    })
}

#[test]
fn log_factorial_matches_log_gamma() {
    for k in [21u64, 100, 1000, 10_000] {
        let a = log_factorial(k);
        let b = log_gamma(k as f64 + 1.0).unwrap();
        assert!(((a - b) / b).abs() <= 1e-13);
    }
}

#[test]
fn log_integral_is_continuous_across_integers() {
    let base = [3.0, 1.0, 2.0, 0.0];
    let h = 1e-5;
    for i in 0..base.len() {
        let at = |delta: f64| {
            let mut m = base.to_vec();
            m[i] += delta;
            log_integral(&ExponentVector::new(m).unwrap()).unwrap().ln()
        };
        let centre = at(0.0);
        let left = (centre - at(-h)) / h;
        let right = (at(h) - centre) / h;
        assert!((at(h) - centre).abs() < 1e-4);
        assert!((left - right).abs() <= 1e-4, "kink at bin {i}: {left} vs {right}");
        // Symmetric slope agrees with both one-sided slopes to O(h).
        let central = (at(h) - at(-h)) / (2.0 * h);
        assert!((central - left).abs() <= 1e-4 && (central - right).abs() <= 1e-4);
        // Unit step is the gamma recurrence: ln((m_i + 1) / (N + n)).
        let step = at(1.0) - centre;
        let expected = ((base[i] + 1.0) / (base.iter().sum::<f64>() + 4.0)).ln();
        assert!((step - expected).abs() <= 1e-6);
    }
}

#[test]
fn closed_form_matches_nested_oracle_small_counts() {
    let spec = QuadratureSpec::nested(1e-12);
    for n in 2..=3 {
        for m in integer_vectors(n, 8) {
            let ev = ExponentVector::new(m.clone()).unwrap();
            let exact = log_integral(&ev).unwrap().ln();
            let oracle = nested_oracle_power(&ev, &spec).unwrap().value.ln();
            assert!(rel_from_logs(exact, oracle) <= 1e-9, "{m:?}");
        }
    }
}

#[test]
fn spherical_grid_matches_nested_oracle() {
    let grid = QuadratureSpec::gauss(32);
    let oracle = QuadratureSpec::nested(1e-12);
    for n in 2..=4 {
        for m in integer_vectors(n, 6) {
            let f = PowerProduct::new(ExponentVector::new(m.clone()).unwrap());
            let g = integrate_simplex(n, &f, &grid).unwrap().value.ln();
            let o = nested_oracle(n, &f, &oracle).unwrap().value.ln();
            assert!(rel_from_logs(g, o) <= 1e-8, "{m:?}");
        }
    }
}

#[test]
fn separable_matches_grid() {
    for m in [
        vec![1.0, 2.0],
        vec![0.5, 0.0, 2.0],
        vec![3.0, 1.0, 4.0, 1.0],
        vec![3.0, 1.0, 4.0, 1.0, 5.0],
        vec![-0.5, 2.5, 0.0, 1.0, 0.25],
    ] {
        let ev = ExponentVector::new(m.clone()).unwrap();
        let spec = QuadratureSpec::gauss(24);
        let sep = integrate_separable(&ev, &spec).unwrap().value.ln();
        let grid = integrate_simplex(m.len(), &PowerProduct::new(ev), &spec)
            .unwrap()
            .value
            .ln();
        assert!(rel_from_logs(sep, grid) <= 1e-10, "{m:?}");
    }
}

#[test]
fn separable_reaches_closed_form_at_64_nodes() {
    let spec = QuadratureSpec::gauss(64);
    for m in [
        vec![1.0, 1.0, 1.0],
        vec![3.0, 1.0, 4.0, 1.0, 5.0],
        vec![10.0, 10.0, 10.0, 10.0, 10.0],
        vec![0.0, 10.0, 0.0, 10.0, 10.0],
        vec![2.5, 7.0],
    ] {
        let ev = ExponentVector::new(m.clone()).unwrap();
        let sep = integrate_separable(&ev, &spec).unwrap().value.ln();
        let exact = log_integral(&ev).unwrap().ln();
        assert!(rel_from_logs(sep, exact) <= 1e-12, "{m:?}");
    }
    // n = 2 is the Beta function itself.
    let ev = ExponentVector::new(vec![1.5, 3.0]).unwrap();
    let sep = integrate_separable(&ev, &spec).unwrap().value.ln();
    assert!(rel_from_logs(sep, log_beta(2.5, 4.0).unwrap()) <= 1e-12);
}

#[test]
fn deterministic_schemes_are_bit_stable() {
    let f = PowerProduct::new(ExponentVector::new(vec![1.0, 0.5, 2.0]).unwrap());
    for spec in [
        QuadratureSpec::gauss(40),
        QuadratureSpec::nested(1e-9),
        QuadratureSpec::monte_carlo(50_000, 11),
    ] {
        let a = integrate_simplex(3, &f, &spec).unwrap();
        let b = integrate_simplex(3, &f, &spec).unwrap();
        assert_eq!(a.value.ln().to_bits(), b.value.ln().to_bits(), "{spec:?}");
        assert_eq!(a.std_error.to_bits(), b.std_error.to_bits());
    }
}

#[test]
fn prior_expression_as_integrand() {
    // ∫_0^1 p1 dp1 = 1/2
    let prior = PriorExpression::parse("p1").unwrap();
    let v = integrate_simplex(2, &prior, &QuadratureSpec::gauss(32)).unwrap();
    assert!((v.value.value() - 0.5).abs() < 1e-14);

    // ∫ p1 p2 p3 · 6 p1 over the triangle = 6 · 2! 1! 1! / 6! = 1/60
    let weighted = Product {
        first: PowerProduct::new(ExponentVector::new(vec![1.0, 1.0, 1.0]).unwrap()),
        second: PriorExpression::parse("6*p1").unwrap(),
    };
    let v = integrate_simplex(3, &weighted, &QuadratureSpec::gauss(32)).unwrap();
    assert!((v.value.value() * 60.0 - 1.0).abs() < 1e-12);

    let bad = PriorExpression::parse("log(p1 - 0.5)").unwrap();
    assert!(matches!(
        integrate_simplex(3, &bad, &QuadratureSpec::gauss(8)),
        Err(Error::IntegrandFailed { .. })
    ));
}
