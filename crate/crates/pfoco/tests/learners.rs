mod common;

use std::rc::Rc;
use std::sync::Arc;

use approx::assert_relative_eq;
use common::{freegrad_bound, p2, psi_direct};
use pfoco::geometry::Body;
use pfoco::learners::{
    ftsl_new, ln_psi, ogd_step, psi, Ca, FreeGrad, Ftl, IntervalFreeGrad, Learner, MainAlg, MainParams, Ogd,
    SleepingExperts,
};
use pfoco::oracles::CountingOracle;
use pfoco::Point;
use proptest::prelude::*;

fn shared(body: Body) -> Rc<CountingOracle> {
    Rc::new(CountingOracle::new(Arc::new(body)))
}

fn main_on(oracle: &Rc<CountingOracle>, params: MainParams) -> MainAlg {
    let o = Rc::clone(oracle);
    let l = params.lipschitz;
    MainAlg::new(params, Box::new(move || ftsl_new(Rc::clone(&o), l))).unwrap()
}

#[test]
fn psi_examples() {
    assert_relative_eq!(psi(0.0, 1.0, 1.0).unwrap(), 1.0, max_relative = 1e-15);
    let expected = 0.375 * 0.25f64.exp();
    assert_relative_eq!(psi(1.0, 1.0, 1.0).unwrap(), expected, max_relative = 1e-12);
    // The commonly quoted decimal 0.481559 agrees only to about 5e-5.
    assert!((expected - 0.481559).abs() < 1e-4);
}

#[test]
fn psi_rejects_non_positive_variance() {
    assert!(psi(1.0, 0.0, 1.0).is_err());
    assert!(psi(1.0, -1.0, 1.0).is_err());
    assert!(ln_psi(1.0, 1.0, 0.0).is_err());
}

#[test]
fn freegrad_zero_gradient_keeps_origin() {
    let mut fg = FreeGrad::new(1.0).unwrap();
    assert_eq!(fg.play(), 0.0);
    assert_eq!(fg.feed(0.0).unwrap(), 0.0);
    let mut literal = FreeGrad::with_initial_variance(1.0, 0.0).unwrap();
    assert_eq!(literal.feed(0.0).unwrap(), 0.0);
}

#[test]
fn freegrad_first_step_with_zero_initial_variance() {
    let mut fg = FreeGrad::with_initial_variance(1.0, 0.0).unwrap();
    let z = fg.feed(1.0).unwrap();
    assert_eq!(fg.sum(), 1.0);
    assert_eq!(fg.sq_sum(), 1.0);
    assert_relative_eq!(z, -psi_direct(1.0, 1.0, 1.0), max_relative = 1e-12);
    assert!((z + 0.481559).abs() < 1e-4);
}

#[test]
fn freegrad_first_step_with_default_initial_variance() {
    let mut fg = FreeGrad::new(2.0).unwrap();
    assert_eq!(fg.initial_variance(), 4.0);
    let z = fg.feed(1.5).unwrap();
    assert_relative_eq!(z, -1.5 * psi_direct(1.5, 4.0 + 2.25, 2.0), max_relative = 1e-12);
}

#[test]
fn freegrad_cancelling_gradients_return_to_origin() {
    let mut fg = FreeGrad::new(1.0).unwrap();
    fg.feed(0.7).unwrap();
    assert_eq!(fg.feed(-0.7).unwrap(), 0.0);
}

#[test]
fn freegrad_rejects_large_gradients() {
    let mut fg = FreeGrad::new(1.0).unwrap();
    assert!(fg.feed(1.5).is_err());
    assert!(fg.feed(f64::NAN).is_err());
    assert!(FreeGrad::new(0.0).is_err());
    assert!(FreeGrad::with_initial_variance(1.0, -1.0).is_err());
}

#[test]
fn freegrad_survives_a_tiny_first_gradient() {
    let mut fg = FreeGrad::new(1.0).unwrap();
    let grads: Vec<f64> = std::iter::once(1e-6).chain(std::iter::repeat_n(-1.0, 50)).collect();
    let (mut loss, mut v) = (0.0, 0.0);
    for &g in &grads {
        loss += g * fg.play();
        fg.feed(g).unwrap();
        v += g * g;
    }
    assert!(
        loss <= freegrad_bound(0.0, v, 1.0) + 1e-9,
        "regret against origin {loss}"
    );
}

#[test]
fn interval_freegrad_stays_in_interval() {
    let mut fg = IntervalFreeGrad::new(1.0, 0.5).unwrap();
    for _ in 0..40 {
        fg.feed(&Point::new(vec![-1.0])).unwrap();
        assert!(fg.next()[0].abs() <= 0.5);
    }
    assert!(fg.unclipped() > 0.5);
}

#[test]
fn wrapper_starts_at_origin_and_composes_by_hand() {
    let o = shared(Body::ball(2, 1.0).unwrap());
    let mut ca = Ca::new(Box::new(Ftl::new(Rc::clone(&o))), 1.0, 1.0).unwrap();
    assert!(ca.next().is_zero());
    let g = p2(1.0, 0.0);
    // Round 1: the base plays the origin, so the scalar loss is 0 and the scalar stays 0.
    ca.feed(&g).unwrap();
    assert_eq!(ca.scalar(), 0.0);
    assert!(ca.next().is_zero());
    assert_eq!(ca.base_play(), p2(-1.0, 0.0));
    // Round 2: scalar loss <(-1, 0), g> = -1; variance 1 + 1.
    ca.feed(&g).unwrap();
    let z = psi_direct(-1.0, 2.0, 1.0);
    assert_relative_eq!(ca.scalar(), z, max_relative = 1e-12);
    let u = ca.next();
    assert_relative_eq!(u[0], -z.clamp(0.0, 1.0), max_relative = 1e-12);
    assert_eq!(u[1], 0.0);
}

#[test]
fn wrapper_with_negative_scalar_plays_origin() {
    let o = shared(Body::ball(2, 1.0).unwrap());
    let mut ca = Ca::new(Box::new(Ftl::new(o)), 1.0, 1.0).unwrap();
    ca.feed(&p2(1.0, 0.0)).unwrap();
    // Scalar loss <(-1, 0), (-0.5, 0)> = 0.5 > 0 pushes the scalar below zero.
    ca.feed(&p2(-0.5, 0.0)).unwrap();
    assert!(ca.scalar() < 0.0);
    assert_eq!(ca.base_play(), p2(-1.0, 0.0));
    assert!(ca.next().is_zero());
}

#[test]
fn ftsl_on_zero_gradients_stays_at_origin() {
    let o = shared(Body::lp(3, 1.5, 1.0).unwrap());
    let mut ftsl = ftsl_new(o, 1.0).unwrap();
    assert!(ftsl.next().is_zero());
    for _ in 0..20 {
        ftsl.feed(&Point::zeros(3)).unwrap();
        assert!(ftsl.next().is_zero());
    }
}

#[test]
fn main_initial_state() {
    let o = shared(Body::ball(2, 1.0).unwrap());
    let m = main_on(&o, MainParams::tuned(1.0, 1.0, 1.0, 100));
    assert_eq!(m.q(), 0.5);
    assert_eq!(m.tau(), 1);
    assert_eq!(m.losses(), (0.0, 0.0, 0.0));
    assert!(m.next().is_zero());
    assert!(m.eta_condition_holds());
}

#[test]
fn main_small_first_gradient_is_clipped_and_restarts() {
    let o = shared(Body::ball(2, 1.0).unwrap());
    let mut m = main_on(&o, MainParams::tuned(1.0, 1.0, 1.0, 100));
    m.feed(&p2(0.5, 0.0)).unwrap();
    assert!(m.clipped_sum().is_zero());
    assert_eq!(m.clipped_sq(), 0.0);
    assert_eq!(m.losses(), (0.0, 0.0, 0.0));
    assert_eq!(m.tau(), 2);
    assert_eq!(m.restarts(), 1);
}

#[test]
fn main_restart_rule_with_identical_gradients() {
    let o = shared(Body::ball(2, 1.0).unwrap());
    let params = MainParams {
        lipschitz: 1.0,
        eta: 0.1,
        modulus: 1.0,
        outer_radius: 1.0,
        ln_horizon: 1.0,
    };
    let mut m = main_on(&o, params);
    let g = p2(0.6, 0.8);
    for t in 1..=30 {
        m.feed(&g).unwrap();
        // t^2 |g|^2 <= t |g|^2 holds only at t = 1.
        assert_eq!(m.restarts(), 1, "round {t}");
        assert_eq!(m.tau(), 2);
    }
}

#[test]
fn main_restart_bookkeeping_and_call_count() {
    let o = shared(Body::ball(2, 1.0).unwrap());
    let mut m = main_on(&o, MainParams::tuned(1.0, 1.0, 1.0, 200));
    let mut rng = pfoco::rng::substream(11, 0);
    for t in 1..=200u64 {
        let g = pfoco::rng::unit_vector(&mut rng, 2);
        let before = m.restarts();
        m.feed(&g).unwrap();
        if m.restarts() > before {
            let (_, w, s) = m.losses();
            assert_eq!(w, s);
            assert!(m.restarted().next().is_zero());
            assert_eq!(m.tau(), t as usize + 1);
        }
        assert_eq!(o.loo_calls(), 2 * t);
        assert!(m.q() > 0.0 && m.q() < 1.0);
    }
    assert!(m.restarts() > 1);
}

#[test]
fn main_rejects_large_gradients() {
    let o = shared(Body::ball(2, 1.0).unwrap());
    let mut m = main_on(&o, MainParams::tuned(1.0, 1.0, 1.0, 10));
    assert!(m.feed(&p2(1.0, 1.0)).is_err());
}

#[test]
fn sleeping_examples() {
    let mut se = SleepingExperts::new(3, 0.5).unwrap();
    assert_eq!(se.mixture(&[true, true, true]).unwrap(), vec![1.0 / 3.0; 3]);

    let awake = [true, false, true];
    let losses = [0.2, 0.9, 0.6];
    let p = se.step(&awake, &losses).unwrap();
    let mix: f64 = p.iter().zip(&losses).map(|(a, b)| a * b).sum();
    assert_eq!(p[1], 0.0);
    assert_eq!(SleepingExperts::surrogate(&awake, &losses, &p)[1], mix);

    let mut two = SleepingExperts::new(2, 0.1).unwrap();
    two.step(&[true, true], &[1.0, 0.0]).unwrap();
    let z = (-0.1f64).exp() + 1.0;
    let expected = [(-0.1f64).exp() / z, 1.0 / z];
    let p2 = two.mixture(&[true, true]).unwrap();
    for k in 0..2 {
        assert_relative_eq!(p2[k], expected[k], epsilon = 1e-12);
    }
    assert!((p2[0] - 0.47502).abs() < 5e-6 && (p2[1] - 0.52498).abs() < 5e-6);
    assert!(two.step(&[false, false], &[0.0, 0.0]).is_err());
}

#[test]
fn ogd_examples() {
    let ball = CountingOracle::new(Arc::new(Body::ball(2, 1.0).unwrap()));
    let x = ogd_step(&ball, &Point::zeros(2), &p2(1.0, 0.0), 0.5).unwrap();
    assert_relative_eq!(x[0], -0.5, epsilon = 1e-12);
    assert_eq!(x[1], 0.0);
    let x = ogd_step(&ball, &p2(0.1, 0.1), &p2(0.1, -0.1), 1.0).unwrap();
    assert_eq!(x, p2(0.0, 0.2));

    let square = CountingOracle::new(Arc::new(Body::cube(2, 1.0).unwrap()));
    let x = ogd_step(&square, &p2(1.0, 0.0), &p2(-2.0, 0.0), 1.0).unwrap();
    assert!(x.dist(&p2(1.0, 0.0)) < 1e-6, "{x:?}");
}

#[test]
fn ogd_learner_stays_feasible() {
    let o = shared(Body::cube(2, 1.0).unwrap());
    let mut ogd = Ogd::new(Rc::clone(&o), 1.0).unwrap();
    let mut rng = pfoco::rng::substream(5, 0);
    for _ in 0..50 {
        ogd.feed(&pfoco::rng::unit_vector(&mut rng, 2)).unwrap();
        assert!(o.body().membership(&ogd.next(), 1e-6));
    }
}

fn gradient_trace() -> impl Strategy<Value = Vec<(f64, f64)>> {
    prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), 1..300)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn psi_is_even_and_matches_direct_evaluation(s in -50.0..50.0f64, v in 1e-3..100.0f64, l in 0.1..10.0f64) {
        let a = psi(s, v, l).unwrap();
        prop_assert!((a - psi(-s, v, l).unwrap()).abs() <= 1e-14 * a);
        let direct = psi_direct(s, v, l);
        if direct.is_finite() {
            prop_assert!((a - direct).abs() <= 1e-11 * direct);
        }
    }

    #[test]
    fn freegrad_regret_bound_holds(gs in prop::collection::vec(-1.0..1.0f64, 1..3000)) {
        let mut fg = FreeGrad::new(1.0).unwrap();
        let mut plays = Vec::with_capacity(gs.len());
        for &g in &gs {
            plays.push(fg.play());
            fg.feed(g).unwrap();
        }
        let v: f64 = gs.iter().map(|g| g * g).sum();
        let gsum: f64 = gs.iter().sum();
        let loss: f64 = gs.iter().zip(&plays).map(|(g, z)| g * z).sum();
        for u in [0.0, 0.25, -0.25, 0.5, -0.5, 1.0, -1.0] {
            let regret = loss - u * gsum;
            prop_assert!(regret <= freegrad_bound(u, v, 1.0) + 1e-9, "u={} regret={} v={}", u, regret, v);
        }
    }

    #[test]
    fn ftl_bound_on_ball(trace in gradient_trace(), drift in 0.2..0.9f64, angle in 0.0..std::f64::consts::TAU) {
        let o = shared(Body::ball(2, 1.0).unwrap());
        let mut ftl = Ftl::new(Rc::clone(&o));
        let e = p2(angle.cos(), angle.sin());
        let (mut loss, mut rhs, mut sum) = (0.0, 0.0, Point::zeros(2));
        let mut grads = Vec::new();
        let mut prefix_ok = true;
        for (a, b) in trace {
            let mut g = Point::lincomb(drift, &e, 1.0 - drift, &p2(a, b));
            if g.norm() > 1.0 {
                g = g.scale(1.0 / g.norm());
            }
            loss += g.dot(&ftl.next());
            ftl.feed(&g).unwrap();
            sum.axpy(1.0, &g);
            prefix_ok &= sum.norm() > 0.0;
            rhs += 2.0 * g.norm_sq() / sum.norm();
            grads.push(g);
        }
        prop_assume!(prefix_ok);
        let u = sum.scale(-1.0 / sum.norm());
        let regret = loss - sum.dot(&u);
        prop_assert!(regret <= rhs + 1e-9);
        prop_assert_eq!(ftl.grad_sum(), &sum);
    }

    #[test]
    fn wrapper_regret_decomposes(trace in gradient_trace(), ux in -0.7..0.7f64, uy in -0.7..0.7f64) {
        let o = shared(Body::ball(2, 1.0).unwrap());
        let mut ca = Ca::new(Box::new(Ftl::new(o)), 1.0, 1.0).unwrap().unclipped();
        let u = p2(ux, uy);
        let gamma = u.norm();
        prop_assume!(gamma > 1e-3);
        let (mut total, mut oned, mut base) = (0.0, 0.0, 0.0);
        for (a, b) in trace {
            let g = p2(a, b).scale(1.0 / 2f64.sqrt());
            let (z, w) = (ca.scalar(), ca.base_play());
            let play = ca.next();
            total += g.dot(&(&play - &u));
            oned += w.dot(&g) * (z - gamma);
            base += g.dot(&(&w - &u.scale(1.0 / gamma)));
            ca.feed(&g).unwrap();
        }
        prop_assert!((total - (oned + gamma * base)).abs() <= 1e-8 * (1.0 + total.abs()));
    }

    #[test]
    fn main_plays_are_feasible(trace in gradient_trace(), which in 0usize..2) {
        let body = if which == 0 { Body::ball(2, 1.0).unwrap() } else { Body::lp(2, 1.5, 1.0).unwrap() };
        let mu = body.modulus();
        let o = shared(body);
        let mut m = main_on(&o, MainParams::tuned(1.0, 1.0, mu, 300));
        for (a, b) in trace {
            let x = m.next();
            prop_assert_eq!(&x, &m.next());
            prop_assert!(o.body().membership(&x, 1e-9));
            let g = p2(a, b).scale(1.0 / 2f64.sqrt());
            m.feed(&g).unwrap();
        }
    }

    #[test]
    fn sleeping_bound_on_interval_schedules(
        n in 2usize..32,
        horizon in 10usize..200,
        seed in any::<u64>(),
    ) {
        use rand::Rng;
        let mut rng = pfoco::rng::stream(seed);
        let eta = 0.3;
        let intervals: Vec<(usize, usize)> = (0..n)
            .map(|k| if k == 0 { (0, horizon) } else {
                let a = rng.random_range(0..horizon);
                (a, rng.random_range(a + 1..=horizon))
            })
            .collect();
        let mut se = SleepingExperts::new(n, eta).unwrap();
        let mut regret = vec![0.0; n];
        let mut sq = 0.0;
        for t in 0..horizon {
            let awake: Vec<bool> = intervals.iter().map(|&(a, b)| a <= t && t < b).collect();
            let losses: Vec<f64> = (0..n).map(|_| rng.random_range(0.0..1.0)).collect();
            let p = se.step(&awake, &losses).unwrap();
            prop_assert!((se.weights().iter().sum::<f64>() - 1.0).abs() <= 1e-12);
            let mix: f64 = p.iter().zip(&losses).map(|(a, b)| a * b).sum();
            let sur = SleepingExperts::surrogate(&awake, &losses, &p);
            sq += sur.iter().fold(0.0f64, |m, x| m.max(x.abs())).powi(2);
            let bound = (n as f64).ln() / eta + 0.75 * eta * sq;
            for k in 0..n {
                if awake[k] {
                    regret[k] += mix - losses[k];
                }
                prop_assert!(regret[k] <= bound + 1e-9, "expert {} regret {} bound {}", k, regret[k], bound);
            }
        }
    }
}
