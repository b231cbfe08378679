use dyncons::analysis::{
    classify, continuous_stability, euler_critical_step, euler_jacobian_at_interior,
    nsfd_jacobian_at_interior, Classification, Jacobian2,
};
use dyncons::models::{interior_equilibrium, require_interior};
use dyncons::oracle::quadratic_eigen;
use dyncons::schemes::{
    euler_predprey_step, integrate_continuous_on_grid, iterate, nsfd_step, DormandPrince, PlanarMap,
};
use dyncons::{ModelParams, State};
use proptest::prelude::*;

fn params() -> impl Strategy<Value = ModelParams> {
    (0.05..3.0, 0.05..3.0, 0.05..3.0).prop_map(|(a, b, d)| ModelParams::new(a, b, d).unwrap())
}

fn stable_params() -> impl Strategy<Value = ModelParams> {
    params().prop_filter("continuous equilibrium must be stable", |p| {
        continuous_stability(p).stable
    })
}

fn step() -> impl Strategy<Value = f64> {
    (-3.0..2.0f64).prop_map(|e| 10f64.powf(e))
}

fn positive_state() -> impl Strategy<Value = State> {
    (1e-3..5.0, 1e-3..5.0).prop_map(|(n, p)| State::new(n, p))
}

proptest! {
    #[test]
    fn eigenvalues_satisfy_vieta(tr in -10.0..10.0f64, det in -10.0..10.0f64) {
        let [l1, l2] = quadratic_eigen(tr, det);
        let scale = 1.0 + tr.abs() + det.abs();
        prop_assert!(((l1 + l2).re - tr).abs() < 1e-12 * scale);
        prop_assert!((l1 + l2).im.abs() < 1e-12 * scale);
        prop_assert!(((l1 * l2).re - det).abs() < 1e-12 * scale);
        prop_assert!((l1 * l2).im.abs() < 1e-12 * scale);
        prop_assert!(l1.norm() >= l2.norm() * (1.0 - 1e-12));
    }

    #[test]
    fn nsfd_keeps_positive_states_positive(p in params(), h in 1e-3..100.0f64, s in positive_state()) {
        let next = nsfd_step(&p, h, s).unwrap();
        prop_assert!(next.n > 0.0 && next.p > 0.0, "{:?}", next);
    }

    #[test]
    fn nsfd_orbits_stay_positive(p in params(), h in step(), s in positive_state()) {
        // an orbit collapsing onto an axis can underflow to 0.0; that is a
        // limit of the number format, not of the map
        let tiny = 1e-290;
        let states = match iterate(&PlanarMap::nsfd(p, h).unwrap(), s, 200) {
            Ok(t) => t.states,
            Err(e) => {
                let last = e.partial.last().unwrap();
                prop_assert!(last.n < tiny, "{:?} after {:?}", e.error, last);
                e.partial.states
            }
        };
        for w in states.windows(2) {
            let (a, b) = (w[0], w[1]);
            prop_assert!(b.n > 0.0 || a.n < tiny, "{:?} -> {:?}", a, b);
            prop_assert!(b.p > 0.0 || a.p < tiny, "{:?} -> {:?}", a, b);
        }
    }

    #[test]
    fn both_maps_fix_the_coexistence_point(p in params(), h in step()) {
        if let Some(e) = interior_equilibrium(&p) {
            let e = e.state;
            for next in [nsfd_step(&p, h, e).unwrap(), euler_predprey_step(&p, h, e).unwrap()] {
                prop_assert!(next.distance(&e) < 1e-12 * (1.0 + h));
            }
        }
    }

    #[test]
    fn nsfd_is_elementary_stable(p in stable_params(), h in step()) {
        let r = classify(&nsfd_jacobian_at_interior(&p, h).unwrap());
        prop_assert_eq!(r.classification, Classification::Stable);
    }

    #[test]
    fn euler_stable_set_is_an_interval(p in stable_params(), frac in 0.01..0.99f64) {
        if let Some(hc) = euler_critical_step(&p).unwrap() {
            let below = classify(&euler_jacobian_at_interior(&p, frac * hc).unwrap());
            let above = classify(&euler_jacobian_at_interior(&p, hc / frac).unwrap());
            prop_assert_eq!(below.classification, Classification::Stable);
            prop_assert_ne!(above.classification, Classification::Stable);
        }
    }

    #[test]
    fn moduli_and_jury_agree_off_the_boundary(
        a11 in -2.0..2.0f64, a12 in -2.0..2.0f64, a21 in -2.0..2.0f64, a22 in -2.0..2.0f64,
    ) {
        let r = classify(&Jacobian2 { a11, a12, a21, a22 });
        if (r.max_modulus() - 1.0).abs() > 1e-6 {
            prop_assert_eq!(r.classification == Classification::Stable, r.jury.all());
        }
    }
}

/// Global error of a map at `t = 1` against a tight reference solution.
fn global_error(
    p: &ModelParams,
    s0: State,
    h: f64,
    step: impl Fn(&ModelParams, f64, State) -> dyncons::Result<State>,
) -> f64 {
    let steps = (1.0 / h).round() as usize;
    let reference =
        integrate_continuous_on_grid(p, s0, 1.0, 1, &DormandPrince::with_tolerances(1e-13, 1e-15))
            .unwrap();
    let mut s = s0;
    for _ in 0..steps {
        s = step(p, h, s).unwrap();
    }
    s.distance(&reference.states[1])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn both_schemes_are_first_order(
        p in params(),
        s0 in (0.2..1.0, 0.2..1.0).prop_map(|(n, p)| State::new(n, p)),
    ) {
        let nsfd = global_error(&p, s0, 1e-2, nsfd_step) / global_error(&p, s0, 5e-3, nsfd_step);
        let euler = global_error(&p, s0, 1e-2, euler_predprey_step)
            / global_error(&p, s0, 5e-3, euler_predprey_step);
        prop_assert!((1.6..=2.4).contains(&nsfd), "nsfd ratio {}", nsfd);
        prop_assert!((1.6..=2.4).contains(&euler), "euler ratio {}", euler);
    }
}

#[test]
fn reference_parameters_are_stable() {
    let p = ModelParams::REFERENCE;
    assert!(continuous_stability(&p).stable);
    require_interior(&p).unwrap();
}
