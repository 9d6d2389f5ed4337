use centered_gamma::certify::{certify_monotone, Direction, ScanSpec};
use centered_gamma::median::gamma_median;
use centered_gamma::oracle::{dd_lambda_plus_third, dd_mean_gaps, fd_derivative};
use centered_gamma::specfun::{
    branch_root_deriv, branch_roots, f_map, g_tilde, lambda_fn, lambert_w0, lambert_wm1,
    log_gamma, log_mean, reg_gamma, reg_gamma_q, Branch, Precision,
};
use centered_gamma::tailprob::{
    integrand_ratio, m_c_fn, power_function, tail_eval, tail_prob, TailMethod, TailQuery,
};
use proptest::prelude::*;

const REL_TOL: f64 = 1e-12;

fn log_uniform(lo: f64, hi: f64) -> impl Strategy<Value = f64> {
    (lo.ln()..hi.ln()).prop_map(f64::exp)
}

proptest! {
    #[test]
    fn w0_round_trip(v in prop_oneof![
        (-1.0 / std::f64::consts::E + 1e-12)..0.0,
        log_uniform(1e-300, 1e6),
    ]) {
        let w = lambert_w0(v).unwrap();
        prop_assert!(w >= -1.0);
        let back = w * w.exp();
        prop_assert!((back - v).abs() <= 4.0 * REL_TOL * v.abs(), "v={v} w={w}");
    }

    #[test]
    fn wm1_round_trip(t in log_uniform(1e-12, 1.0 / std::f64::consts::E)) {
        // v from the branch point to just below zero
        let v = -t;
        let w = lambert_wm1(v).unwrap();
        prop_assert!(w <= -1.0);
        let back = w * w.exp();
        prop_assert!((back - v).abs() <= 4.0 * REL_TOL * v.abs(), "v={v} w={w}");
    }

    #[test]
    fn p_plus_q_is_one(a in log_uniform(1e-3, 1e4), t in 0.0..1.0f64) {
        let x = t * (a + 40.0 * a.sqrt() + 40.0);
        let g = reg_gamma(a, x).unwrap();
        prop_assert!((g.p + g.q - 1.0).abs() <= 1e-13);
        prop_assert!((0.0..=1.0).contains(&g.p) && (0.0..=1.0).contains(&g.q));
    }

    #[test]
    fn upward_recurrence(a in log_uniform(1e-2, 1e3), t in 0.01..1.0f64) {
        // Q(a+1, x) - Q(a, x) = x^a e^-x / Γ(a+1); the difference of the two
        // sides is measured against the larger of Q(a+1, x) and the density term
        let x = t * (a + 20.0 * a.sqrt() + 20.0);
        let lhs = reg_gamma_q(a + 1.0, x).unwrap() - reg_gamma_q(a, x).unwrap();
        let rhs = (a * x.ln() - x - log_gamma(a + 1.0).unwrap()).exp();
        let scale = rhs.max(reg_gamma_q(a + 1.0, x).unwrap());
        prop_assert!((lhs - rhs).abs() <= 1e-12 * scale, "a={a} x={x} lhs={lhs} rhs={rhs}");
    }

    #[test]
    fn q_decreases_in_x(a in log_uniform(1e-3, 1e4)) {
        let x_max = a + 30.0 * a.sqrt() + 30.0;
        let qs: Vec<f64> = (0..60).map(|i| reg_gamma_q(a, x_max * i as f64 / 59.0).unwrap()).collect();
        // strict wherever the values are not pinned at 1 by rounding
        prop_assert!(
            qs.windows(2).all(|w| w[1] < w[0] || (w[1] == 1.0 && w[0] == 1.0)),
            "a={a}"
        );
    }

    #[test]
    fn branch_root_invariants(z in 1e-6..(1.0 - 1e-6)) {
        let r = branch_roots(z).unwrap();
        let (x1, x2) = (r.x1(), r.x2());
        prop_assert!(x1 < 1.0 && 1.0 < x2);
        prop_assert!((f_map(x1).unwrap() - z).abs() <= REL_TOL * z);
        prop_assert!((f_map(x2).unwrap() - z).abs() <= REL_TOL * z);
        prop_assert!((log_mean(x1, x2).unwrap() - 1.0).abs() <= REL_TOL);
        prop_assert!((x1 * x2).sqrt() < 1.0 && 1.0 < 0.5 * (x1 + x2));
    }

    #[test]
    fn branch_derivative_matches_difference(z in 0.01..0.99f64) {
        let r = branch_roots(z).unwrap();
        for (which, pick) in [(Branch::Lower, 0), (Branch::Upper, 1)] {
            let d = branch_root_deriv(&r, which).unwrap();
            let root = |t: f64| {
                let b = branch_roots(t).unwrap();
                if pick == 0 { b.x1() } else { b.x2() }
            };
            let fd = fd_derivative(root, z, 1e-6 * z);
            prop_assert!((fd.value - d).abs() <= 1e-5 * d.abs(), "z={z} {which:?}");
            prop_assert!((pick == 0) == (d > 0.0), "z={} sign", z);
        }
    }

    #[test]
    fn mean_chain_ordering(x in log_uniform(1e-3, 1e3), u in 1e-2..13.8f64) {
        let y = x * u.exp();
        let geo = (x * y).sqrt();
        let l = log_mean(x, y).unwrap();
        let g = g_tilde(x, y).unwrap();
        prop_assert!(geo < l && l < g && g < 0.5 * (x + y), "x={x} y={y}");
        let gaps = dd_mean_gaps(x, y, 1.0 / 3.0);
        prop_assert!(gaps.geo_log > 8.0 * gaps.err[0]);
        prop_assert!(gaps.log_tilde > 8.0 * gaps.err[1]);
        prop_assert!(gaps.tilde_arith > 8.0 * gaps.err[2]);
    }

    #[test]
    fn tail_is_a_probability(a in log_uniform(1e-3, 1e4), c in -50.0..50.0f64) {
        let e = tail_eval(TailQuery::new(a, c).unwrap()).unwrap();
        prop_assert!((0.0..=1.0).contains(&e.p));
        // Q itself may round to 1 deep in the left tail; the exact plateau
        // is recognised by method, and off it the lower tail stays positive
        prop_assert_eq!(e.method == TailMethod::Plateau, a + c <= 0.0, "a={} c={}", a, c);
        if a + c <= 0.0 {
            prop_assert_eq!(e.p, 1.0);
        } else {
            prop_assert!(reg_gamma(a, a + c).unwrap().p > 0.0);
        }
    }

    #[test]
    fn median_offset_inside(a in log_uniform(1e-2, 1e4)) {
        let m = gamma_median(a, Precision::default()).unwrap();
        prop_assert!(m.offset > -1.0 / 3.0 && m.offset < 0.0, "{m:?}");
        prop_assert!(m.residual <= 1e-12);
    }
}

#[test]
fn lambda_bounds_and_increase() {
    let n = 2000;
    let ys: Vec<f64> = (0..n)
        .map(|i| 1.0 + (1e-8f64.ln() + (1e12f64.ln() - 1e-8f64.ln()) * i as f64 / (n - 1) as f64).exp())
        .collect();
    // λ + 1/3 ~ (ln y)^2 / 135 is below one ulp of 1/3 next to y = 1, so
    // the strict lower bound and strict growth are checked in double-double
    let shifted: Vec<f64> = ys.iter().map(|&y| dd_lambda_plus_third(y).to_f64()).collect();
    assert!(shifted.iter().all(|&s| s > 0.0));
    assert!(shifted.windows(2).all(|w| w[1] > w[0]));
    let ls: Vec<f64> = ys.iter().map(|&y| lambda_fn(y).unwrap()).collect();
    assert!(ls.iter().all(|&l| (-1.0 / 3.0..0.0).contains(&l)));
    for (w, y) in ls.windows(2).zip(ys.windows(2)) {
        assert!(w[1] >= w[0] - 4.0 * f64::EPSILON * w[0].abs(), "λ decreases between {} and {}", y[0], y[1]);
        if y[0] >= 1.01 {
            assert!(w[1] > w[0], "λ flat between {} and {}", y[0], y[1]);
        }
    }
}

#[test]
fn median_bracket_on_log_grid() {
    let n = 400;
    for i in 0..n {
        let a = 1e-2 * (1e6f64.ln() * i as f64 / (n - 1) as f64).exp();
        let p0 = tail_prob(TailQuery::new(a, 0.0).unwrap()).unwrap();
        let p3 = tail_prob(TailQuery::new(a, -1.0 / 3.0).unwrap()).unwrap();
        assert!(p0 < 0.5 && 0.5 < p3, "a={a}");
    }
}

#[test]
fn sign_of_m_c_by_regime() {
    let zs: Vec<f64> = (1..1000).map(|k| k as f64 / 1000.0).collect();
    for c in [-1.0 / 3.0, -0.5, -1.0, -3.0] {
        for &z in &zs {
            assert!(m_c_fn(&branch_roots(z).unwrap(), c) < 0.0, "c={c} z={z}");
        }
    }
    for c in [-0.33, -0.3, -0.1, 0.0, 2.0] {
        assert!(zs.iter().any(|&z| m_c_fn(&branch_roots(z).unwrap(), c) > 0.0), "c={c}");
    }
}

#[test]
fn integrand_ratio_direction() {
    let zs: Vec<f64> = (1..200).map(|k| k as f64 / 200.0).collect();
    for c in [0.0, 0.5, 3.0] {
        let r: Vec<f64> = zs.iter().map(|&z| integrand_ratio(&branch_roots(z).unwrap(), c).unwrap()).collect();
        assert!(r.windows(2).all(|w| w[1] < w[0]), "c={c}");
    }
    for c in [-1.0, -1.5, -4.0] {
        let r: Vec<f64> = zs.iter().map(|&z| integrand_ratio(&branch_roots(z).unwrap(), c).unwrap()).collect();
        assert!(r.windows(2).all(|w| w[1] > w[0]), "c={c}");
    }
}

#[test]
fn power_function_is_unbiased() {
    for c in [0.1, 0.5, 2.0] {
        let betas: Vec<f64> = (0..300)
            .map(|i| power_function(1e-2 * 10f64.powf(6.0 * i as f64 / 299.0), c).unwrap())
            .collect();
        assert!(betas.windows(2).all(|w| w[1] > w[0]), "c={c}");
        let far = *betas.last().unwrap();
        assert!(far < 0.5 && far > 0.49, "c={c} β={far}");
    }
}

#[test]
fn verdicts_never_contradict_the_regimes() {
    let prec = Precision::default();
    for c in [0.0, 0.05, 0.7, 3.0] {
        let v = certify_monotone(c, ScanSpec::log(0.01, 200.0, 200).unwrap(), prec).unwrap();
        assert!(matches!(v.direction, Direction::Increasing | Direction::Inconclusive), "c={c}");
    }
    for c in [-0.34, -0.6, -1.5, -10.0] {
        let v = certify_monotone(c, ScanSpec::log(-c + 0.01, 200.0, 200).unwrap(), prec).unwrap();
        assert!(matches!(v.direction, Direction::Decreasing | Direction::Inconclusive), "c={c}");
    }
}

#[test]
fn verdicts_are_identical_across_pools() {
    let scan = ScanSpec::log(0.11, 300.0, 300).unwrap();
    let run = |threads: usize| {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        pool.install(|| certify_monotone(-0.1, scan, Precision::default()).unwrap())
    };
    let one = run(1);
    assert_eq!(format!("{one:?}"), format!("{:?}", run(3)));
    assert_eq!(format!("{one:?}"), format!("{:?}", run(1)));
}
