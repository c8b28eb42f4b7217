//! Cross-module invariants: geometry dual-routes, probability bounds,
//! monotonicity, and the association/bias round trip.

use proptest::prelude::*;
use rand::rngs::SmallRng;
use rand::{Rng, SeedableRng};
use std::f64::consts::PI;

use hetnet_core::coverage::{coverage_mobile_single_tier, coverage_stationary};
use hetnet_core::handoff::{
    excess_area, handoff_prob_conditional, handoff_rate_approx, handoff_rate_exact,
    handoff_rate_radial,
};
use hetnet_core::multitier::{association_probabilities, solve_bias};
use hetnet_core::special::q_function;
use hetnet_core::{MobilityProfile, NetworkModel, QuadratureSpec, TierParams};

const QUAD: QuadratureSpec = QuadratureSpec {
    abs_tol: 1e-9,
    rel_tol: 1e-7,
    max_subdivisions: 200,
};

/// Textbook area of the lens formed by circles of radii r and big_r whose
/// centers sit a distance v apart. Independent route for `excess_area`.
fn lens_area(r: f64, big_r: f64, v: f64) -> f64 {
    if v >= r + big_r {
        return 0.0;
    }
    if v <= (big_r - r).abs() {
        let smaller = r.min(big_r);
        return PI * smaller * smaller;
    }
    let a1 = ((r * r + v * v - big_r * big_r) / (2.0 * v * r)).clamp(-1.0, 1.0);
    let a2 = ((big_r * big_r + v * v - r * r) / (2.0 * v * big_r)).clamp(-1.0, 1.0);
    let tri = 0.5
        * ((r + big_r - v) * (r + big_r + v) * (v + r - big_r) * (v - r + big_r))
            .max(0.0)
            .sqrt();
    r * r * a1.acos() + big_r * big_r * a2.acos() - tri
}

#[test]
fn excess_area_agrees_with_lens_formula() {
    // Dual route: the reduced closed form against pi R^2 minus the generic
    // two-circle intersection, over random geometries including the obtuse
    // branch (r + v cos(theta) < 0).
    let mut rng = SmallRng::seed_from_u64(0xa1b2);
    for case in 0..1000 {
        let r = rng.random_range(0.1..10.0);
        let v = rng.random_range(0.0..8.0);
        let theta = rng.random_range(0.0..PI);
        let big_r = (r * r + v * v + 2.0 * r * v * theta.cos()).max(0.0).sqrt();
        let direct = excess_area(r, v, theta);
        let via_lens = PI * big_r * big_r - lens_area(r, big_r, v);
        assert!(
            (direct - via_lens).abs() <= 1e-10,
            "case {case}: r={r} v={v} theta={theta}: {direct} vs {via_lens}"
        );
    }
}

#[test]
fn association_bias_round_trip() {
    // solve_bias is the inverse of association_probabilities on interior
    // targets; 500 random targets across K in 2..=5.
    let mut rng = SmallRng::seed_from_u64(0xb0b);
    for case in 0..500 {
        let k = rng.random_range(2..=5usize);
        let mut lams: Vec<f64> = (0..k)
            .map(|_| 10f64.powf(rng.random_range(-5.0..-2.0)))
            .collect();
        lams.sort_by(f64::total_cmp);
        let tiers: Vec<TierParams> = lams
            .iter()
            .map(|&l| TierParams::new(l, rng.random_range(0.0..50.0), 1.0, 1.0).unwrap())
            .collect();
        let alpha = rng.random_range(2.5..5.0);
        let net = NetworkModel::new(tiers, alpha, 0.0).unwrap();

        let draws: Vec<f64> = (0..k).map(|_| rng.random_range(0.02..1.0)).collect();
        let total: f64 = draws.iter().sum();
        let target: Vec<f64> = draws.iter().map(|d| d / total).collect();

        let bias = solve_bias(&net, &target).unwrap();
        let realized = association_probabilities(&net.clone().with_biases(&bias).unwrap());
        for (i, (got, want)) in realized.iter().zip(&target).enumerate() {
            assert!(
                (got - want).abs() < 1e-9,
                "case {case} tier {i}: {got} vs {want}"
            );
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 1000, ..ProptestConfig::default() })]

    #[test]
    fn q_function_is_a_probability(x in -40.0..40.0f64) {
        let q = q_function(x);
        prop_assert!((0.0..=1.0).contains(&q));
    }

    #[test]
    fn conditional_handoff_probability_in_unit_interval(
        lam in 1e-6..1e-2f64,
        r in 0.0..100.0f64,
        v in 0.0..60.0f64,
        theta in 0.0..PI,
    ) {
        let p = handoff_prob_conditional(lam, r, v, theta).unwrap();
        prop_assert!((0.0..=1.0).contains(&p), "p = {p}");
    }

    #[test]
    fn radial_rate_in_unit_interval(lam in 1e-6..1e-2f64, v in 0.0..60.0f64) {
        let h = handoff_rate_radial(lam, v);
        prop_assert!((0.0..=1.0).contains(&h), "h = {h}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 150, ..ProptestConfig::default() })]

    #[test]
    fn approx_rate_in_unit_interval(lam in 1e-6..1e-2f64, v in 0.0..60.0f64) {
        let h = handoff_rate_approx(lam, v, &QUAD).unwrap();
        prop_assert!((0.0..=1.0).contains(&h), "h = {h}");
    }

    #[test]
    fn exact_rate_in_unit_interval(lam in 1e-5..1e-2f64, v in 0.0..30.0f64) {
        let profile = MobilityProfile::uniform(v).unwrap();
        let h = handoff_rate_exact(lam, &profile, &QUAD).unwrap();
        prop_assert!((0.0..=1.0).contains(&h), "h = {h}");
    }

    #[test]
    fn mobile_coverage_in_unit_interval_and_beta_linear(
        lam in 1e-5..1e-2f64,
        v in 0.0..30.0f64,
        beta in 0.0..1.0f64,
        tau in 0.1..10.0f64,
    ) {
        let profile = MobilityProfile::uniform(v).unwrap();
        let c = coverage_mobile_single_tier(lam, &profile, beta, tau, 3.5, &QUAD).unwrap();
        prop_assert!((0.0..=1.0).contains(&c), "c = {c}");
        prop_assert!(c <= coverage_stationary(tau, 3.5).unwrap() + 1e-12);

        // three-point collinearity in beta
        let c0 = coverage_mobile_single_tier(lam, &profile, 0.0, tau, 3.5, &QUAD).unwrap();
        let c5 = coverage_mobile_single_tier(lam, &profile, 0.5, tau, 3.5, &QUAD).unwrap();
        let c1 = coverage_mobile_single_tier(lam, &profile, 1.0, tau, 3.5, &QUAD).unwrap();
        prop_assert!((c5 - 0.5 * (c0 + c1)).abs() < 1e-9);
    }
}

#[test]
fn handoff_rates_nondecreasing_in_speed_and_density() {
    let speeds: Vec<f64> = (0..=20).map(f64::from).collect();
    for lam in [1e-5, 1e-4, 1e-3, 1e-2] {
        let mut prev_exact = -1.0;
        let mut prev_approx = -1.0;
        for &v in &speeds {
            let profile = MobilityProfile::uniform(v).unwrap();
            let e = handoff_rate_exact(lam, &profile, &QUAD).unwrap();
            let a = handoff_rate_approx(lam, v, &QUAD).unwrap();
            assert!(e >= prev_exact - 1e-9, "exact dipped at lam={lam} v={v}");
            assert!(a >= prev_approx - 1e-9, "approx dipped at lam={lam} v={v}");
            prev_exact = e;
            prev_approx = a;
        }
    }
    for v in [1.0, 5.0, 20.0] {
        let mut prev_exact = -1.0;
        let mut prev_approx = -1.0;
        let mut lam = 1e-5;
        while lam <= 1e-2 {
            let profile = MobilityProfile::uniform(v).unwrap();
            let e = handoff_rate_exact(lam, &profile, &QUAD).unwrap();
            let a = handoff_rate_approx(lam, v, &QUAD).unwrap();
            assert!(e >= prev_exact - 1e-9, "exact dipped at lam={lam} v={v}");
            assert!(a >= prev_approx - 1e-9, "approx dipped at lam={lam} v={v}");
            prev_exact = e;
            prev_approx = a;
            lam *= 10f64.powf(0.25);
        }
    }
}
