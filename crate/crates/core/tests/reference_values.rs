//! Worked values, each checked against an independent evaluation from the
//! oracle module as well as against its quoted digits.

use std::f64::consts::{E, PI};

use centered_gamma::certify::{
    certify_monotone, check_asymptotic, chain_stage, find_witness, g_eps, r3_derivative, Direction,
    ScanSpec,
};
use centered_gamma::median::gamma_median;
use centered_gamma::oracle::{
    dd_lambda_plus_third, dd_m_c, dd_mean_gaps, dd_stage, fd_derivative, oracle_gamma_q,
    oracle_root, ChainStage, RootFn,
};
use centered_gamma::specfun::{
    branch_root_deriv, branch_roots, g_tilde, lambda_fn, lambert_wm1, log_gamma, log_mean,
    reg_gamma_p, reg_gamma_q, Branch, Precision,
};
use centered_gamma::tailprob::{
    m_c_eval, power_function, ratio_parts, tail_delta, tail_eval, tail_prob, TailQuery,
};
use centered_gamma::Error;

fn close(got: f64, want: f64, rel: f64) -> bool {
    (got - want).abs() <= rel * want.abs()
}

fn tail(a: f64, c: f64) -> f64 {
    tail_prob(TailQuery::new(a, c).unwrap()).unwrap()
}

#[test]
fn log_gamma_half() {
    let v = log_gamma(0.5).unwrap();
    assert!(close(v, 0.5 * PI.ln(), 2e-16));
    assert!(close(v, 0.5723649429247001, 2e-16));
}

#[test]
fn incomplete_gamma_values() {
    let q = reg_gamma_q(0.5, 0.25).unwrap();
    assert!(close(q, oracle_gamma_q(0.5, 0.25).unwrap(), 1e-14));
    assert!(close(q, 0.479_500_122_186_953_5, 4e-16));

    let p = reg_gamma_p(5.0, 5.0).unwrap();
    assert!(close(p, 1.0 - oracle_gamma_q(5.0, 5.0).unwrap(), 1e-14));
    assert!(close(p, 0.5595067149347875, 4e-16));

    // Q(1, 1) comes out of 1 - P, one ulp under e^-1 and inside its bound
    let e = tail_eval(TailQuery::new(1.0, 0.0).unwrap()).unwrap();
    assert!((e.p - 0.36787944117144233).abs() <= e.err_bound);
    assert!((reg_gamma_q(1.0, 1.0).unwrap() - (-1.0f64).exp()).abs() <= e.err_bound);
    assert_eq!(reg_gamma_q(3.0, 0.0).unwrap(), 1.0);
}

#[test]
fn lower_lambert_branch() {
    let w = lambert_wm1(-0.1).unwrap();
    assert!(close(w, oracle_root(RootFn::Wm1, -0.1).unwrap(), 4e-16));
    assert!(close(w, -3.577152063957297, 4e-16));
}

#[test]
fn branch_roots_at_two_over_e() {
    let z = 2.0 / E;
    let r = branch_roots(z).unwrap();
    assert!(close(r.x2(), 2.0, 4e-16));
    let x1 = oracle_root(RootFn::X1, z).unwrap();
    assert!(close(r.x1(), x1, 4e-16));
    // the often quoted 0.40637573995996314 is a few ulps off the root
    assert_eq!(r.x1(), 0.4063757399599599);

    let d = branch_root_deriv(&r, Branch::Lower).unwrap();
    assert!(close(d, x1 / ((1.0 - x1) * z), 1e-14));
    // 0.930425..., which the four-digit 0.9305 rounds up from
    assert!((d - 0.9305).abs() < 1e-4);
    let fd = fd_derivative(|t| branch_roots(t).unwrap().x1(), z, 1e-6 * z);
    assert!((fd.value - d).abs() <= fd.err.max(1e-9 * d));
    assert!(branch_root_deriv(&r, Branch::Upper).unwrap() < 0.0);
}

#[test]
fn lambda_values() {
    assert!((lambda_fn(1.0 + 1e-8).unwrap() + 1.0 / 3.0).abs() < 1e-6);

    let l = lambda_fn(E).unwrap();
    let dd = dd_stage(ChainStage::Lambda, E).to_f64();
    assert!(close(l, dd, 1e-14));
    assert!(l > -1.0 / 3.0 && l < 0.0);
    assert!((l + 0.3260706372817124).abs() < 1e-15);

    // closed form with l(e) = e - 1
    let le = E - 1.0;
    assert!(close(l, (E - le * le) / ((le - 1.0) * (E - le)), 1e-12));

    let far = lambda_fn(1e12).unwrap();
    assert!(far > -0.05 && far < 0.0);
    assert!(close(far + 1.0 / 3.0, dd_lambda_plus_third(1e12).to_f64(), 1e-14));
}

#[test]
fn g_tilde_one_four() {
    let g = g_tilde(1.0, 4.0).unwrap();
    let l = log_mean(1.0, 4.0).unwrap();
    assert!(close(l, 3.0 / 4f64.ln(), 2e-16));
    let direct = (4.0 + (l - 1.0) * (4.0 - l) / 3.0).sqrt();
    assert!(close(g, direct, 4e-16));
    assert!(2.16404 < g && g < 2.5);
    // dd gap L → G̃ agrees with the f64 difference
    let gaps = dd_mean_gaps(1.0, 4.0, 1.0 / 3.0);
    assert!(((g - l) - gaps.log_tilde).abs() < 1e-15);
    assert!((g - 2.1708011270346414).abs() < 1e-15);

    let (x, y) = (1.0, E);
    let g = g_tilde(x, y).unwrap();
    let l = log_mean(x, y).unwrap();
    assert!((x * y).sqrt() < l && l < g && g < 0.5 * (x + y));
}

#[test]
fn tail_values() {
    let e = tail_eval(TailQuery::new(2.0, 0.0).unwrap()).unwrap();
    assert!((e.p - 3.0 * (-2.0f64).exp()).abs() <= e.err_bound);
    assert_eq!(tail(0.3, -0.5), 1.0);
    for a in [2.0, 5.0, 10.0] {
        assert!(tail_delta(a, -1.0).unwrap().value < 0.0, "a={a}");
    }
    let d = tail_delta(50.0, -0.2).unwrap();
    let oracle = oracle_gamma_q(51.0, 50.8).unwrap() - oracle_gamma_q(50.0, 49.8).unwrap();
    assert!(d.value > d.err_bound);
    assert!(oracle > 0.0);
    assert!((d.value - oracle).abs() <= 1e-12);
}

#[test]
fn ratio_identity_values() {
    let r = ratio_parts(0.0, 0.0).unwrap();
    assert!(close(r.i, 1.0 - (-1.0f64).exp(), 1e-12));
    assert!(close(r.j, (-1.0f64).exp(), 1e-12));
    assert!(close(r.r, E - 1.0, 1e-12));
    assert!(close(1.0 / (1.0 + r.r), tail(1.0, 0.0), 1e-12));

    let r = ratio_parts(1.0, -0.5).unwrap();
    assert!((1.0 / (1.0 + r.r) - reg_gamma_q(2.0, 1.5).unwrap()).abs() <= 1e-9);
}

#[test]
fn m_c_signs() {
    let r = branch_roots(0.999).unwrap();
    let m = m_c_eval(&r, -0.2);
    assert!(m.value > m.err);
    let dd = dd_m_c(r.x1(), r.x2(), -0.2);
    assert!(close(m.value, dd, 1e-10));
    for z in [0.01, 0.3, 0.7, 0.99] {
        let r = branch_roots(z).unwrap();
        assert!(m_c_eval(&r, 0.0).value > 0.0);
        let m = m_c_eval(&r, -1.0);
        assert!(m.value < 0.0);
        assert!(close(m.value, 2.0 - r.x1() - r.x2(), 1e-12));
    }
}

#[test]
fn power_function_far_out() {
    for c in [0.1, 1.0] {
        let b = power_function(1e4, c).unwrap();
        assert!(b < 0.5 && 0.5 - b < 0.01, "c={c} β={b}");
    }
}

#[test]
fn monotone_verdicts() {
    let prec = Precision::default();
    let v = certify_monotone(0.0, ScanSpec::log(0.01, 200.0, 400).unwrap(), prec).unwrap();
    assert_eq!(v.direction, Direction::Increasing);
    let v = certify_monotone(-1.0, ScanSpec::log(1.01, 200.0, 400).unwrap(), prec).unwrap();
    assert_eq!(v.direction, Direction::Decreasing);
    let v = certify_monotone(-0.2, ScanSpec::log(0.21, 500.0, 600).unwrap(), prec).unwrap();
    assert_eq!(v.direction, Direction::NonMonotone);
    let w = v.witness.unwrap();
    assert!(w.a1 < w.a2 && w.a2 < w.a3);
    assert!(w.a1 < 0.25 && w.a3 > 10.0);
    for (a, p) in [(w.a1, w.p1), (w.a2, w.p2), (w.a3, w.p3)] {
        assert!(close(p, oracle_gamma_q(a, a - 0.2).unwrap(), 1e-12));
    }
}

#[test]
fn witness_search() {
    let prec = Precision::default();
    let w = find_witness(-0.2, prec).unwrap();
    assert!(w.a3 <= 1e4);
    assert!(w.p1 > w.p2 && w.p3 > w.p2);

    // right of the plateau edge p climbs back to 1 only like 1 - x^a/Γ(a+1)
    // in x = a + c, so even the first double past a = 0.05 gives p ≈ 0.86;
    // the witness stays in a > -c with a1 at the edge
    let w = find_witness(-0.05, prec).unwrap();
    assert!(w.a1 > 0.05 && w.a1 <= 0.05 * (1.0 + 1e-3));
    assert!(w.p1 > w.p2 && w.p3 > w.p2);
    assert!(w.p1 - w.p2 < 0.2 && w.a2 < 0.1);
    let edge = tail(0.05f64.next_up(), -0.05);
    assert!(edge > w.p1 && edge < 0.9);
    assert_eq!(tail(0.05, -0.05), 1.0);

    match find_witness(-0.333, prec) {
        Ok(w) => assert!(w.p1 > w.p2 && w.p3 > w.p2),
        Err(e) => assert!(matches!(e, Error::Budget { .. }), "{e}"),
    }
}

#[test]
fn chain_values() {
    assert!((chain_stage(ChainStage::R3, 1.0 + 1e-12).unwrap() + 1.0 / 3.0).abs() < 1e-12);
    assert!(close(r3_derivative(2.0), 6.0 / 169.0, 1e-15));
    let far = chain_stage(ChainStage::R3, 1e12).unwrap();
    assert!(far < 0.0 && far > -1e-11);
    for stage in ChainStage::ALL {
        let v = chain_stage(stage, 1.0 + 1e-6).unwrap();
        assert!((v + 1.0 / 3.0).abs() < 1e-6, "{stage:?} {v}");
    }
}

#[test]
fn asymptotic_values() {
    assert_eq!(g_eps(0.8, 0.01, 0.0), 0.8 * 0.01);
    let rep = check_asymptotic(-0.2, &[0.01, 0.005], Precision::default()).unwrap();
    assert!((rep.points[0].value - 0.001333).abs() < 1e-4);
    let rep = check_asymptotic(-0.2, &[0.04, 0.02, 0.01, 0.005, 0.0025], Precision::default()).unwrap();
    assert!(rep.passed, "{rep:?}");
}

#[test]
fn median_values() {
    let prec = Precision::default();
    let m = gamma_median(1.0, prec).unwrap();
    assert!(close(m.median, 2f64.ln(), 2e-16));
    let m = gamma_median(2.0, prec).unwrap();
    assert!((m.median - 1.678346990).abs() < 1e-9);
    assert!(((1.0 + m.median) * (-m.median).exp() - 0.5).abs() < 1e-15);
    let m = gamma_median(1e4, prec).unwrap();
    assert!(m.offset > -1.0 / 3.0 && m.offset < 0.0);

    let e = tail_eval(TailQuery::new(1.0, -1.0 / 3.0).unwrap()).unwrap();
    assert!((e.p - (-2.0f64 / 3.0).exp()).abs() <= e.err_bound);
    for a in [0.01, 1e4] {
        let (p0, p3) = (tail(a, 0.0), tail(a, -1.0 / 3.0));
        assert!(close(p0, oracle_gamma_q(a, a).unwrap(), 1e-12));
        if a > 1.0 / 3.0 {
            assert!(close(p3, oracle_gamma_q(a, a - 1.0 / 3.0).unwrap(), 1e-12));
        } else {
            assert_eq!(p3, 1.0);
        }
        assert!(p0 < 0.5 && 0.5 < p3);
    }
    let (p0, p3) = (tail(1e4, 0.0), tail(1e4, -1.0 / 3.0));
    assert!(0.5 - p0 < 0.01 && p3 - 0.5 < 0.01);
}
