//! Distance closed forms against direct numerical integration, plus the
//! inequality chain over a broad randomized sweep of shift pairs.

mod support;

use mslab_core::distance::{
    check_inequality_chain, hellinger_affinity, hellinger_distance_sq, l1_distance, lemma1_gap,
};
use mslab_core::GaussianShiftPair;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_pair(rng: &mut ChaCha8Rng) -> GaussianShiftPair {
    let beta: f64 = rng.gen_range(0.0..5.0);
    let sxx: f64 = rng.gen_range(1.0..1e4);
    GaussianShiftPair::new(beta, sxx).unwrap()
}

/// Shifts kept moderate so quadrature comparisons stay far from underflow.
fn moderate_pair(rng: &mut ChaCha8Rng) -> GaussianShiftPair {
    let beta: f64 = rng.gen_range(0.0..2.0);
    let sxx: f64 = rng.gen_range(1.0..100.0);
    GaussianShiftPair::new(beta, sxx).unwrap()
}

#[test]
fn affinity_matches_quadrature_within_1e8() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for _ in 0..25 {
        let pair = moderate_pair(&mut rng);
        let got = hellinger_affinity(&pair);
        let want = support::affinity_oracle(pair.delta());
        assert!(
            (got - want).abs() <= 1e-8,
            "affinity(delta={}) = {got}, oracle {want}",
            pair.delta()
        );
    }
}

#[test]
fn l1_matches_quadrature_within_1e8() {
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    for _ in 0..25 {
        let pair = moderate_pair(&mut rng);
        let got = l1_distance(&pair);
        let want = support::l1_oracle(pair.delta());
        assert!(
            (got - want).abs() <= 1e-8,
            "l1(delta={}) = {got}, oracle {want}",
            pair.delta()
        );
    }
}

#[test]
fn squared_hellinger_matches_quadrature_within_1e8() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for _ in 0..25 {
        let pair = moderate_pair(&mut rng);
        let got = hellinger_distance_sq(&pair);
        // H^2 = integral of (sqrt p - sqrt q)^2 = 2 - 2 * affinity.
        let want = 2.0 - 2.0 * support::affinity_oracle(pair.delta());
        assert!(
            (got - want).abs() <= 1e-8,
            "h2(delta={}) = {got}, oracle {want}",
            pair.delta()
        );
    }
}

#[test]
fn inequality_chain_holds_on_a_thousand_random_pairs() {
    let mut rng = ChaCha8Rng::seed_from_u64(24);
    for _ in 0..1000 {
        let pair = random_pair(&mut rng);
        let check = check_inequality_chain(&pair);
        assert!(
            check.holds,
            "chain failed at beta={}, sxx={}: {check:?}",
            pair.beta(),
            pair.sxx()
        );
    }
}

#[test]
fn gap_at_midpoint_matches_half_l1_from_quadrature() {
    let mut rng = ChaCha8Rng::seed_from_u64(25);
    for _ in 0..25 {
        let pair = moderate_pair(&mut rng);
        let gap = lemma1_gap(&pair, pair.delta() / 2.0).unwrap();
        let want = support::l1_oracle(pair.delta()) / 2.0;
        assert!(
            (gap - want).abs() <= 1e-8,
            "gap(delta/2) = {gap}, oracle half-l1 {want}"
        );
    }
}

#[test]
fn midpoint_maximizes_the_gap_on_a_fine_scan() {
    let pair = GaussianShiftPair::new(0.17, 230.0).unwrap();
    let delta = pair.delta();
    let mid = lemma1_gap(&pair, delta / 2.0).unwrap();
    let mut best_t = f64::NAN;
    let mut best = f64::NEG_INFINITY;
    let steps = 4000;
    for k in 0..=steps {
        let t = delta / 2.0 - 2.0 + 4.0 * k as f64 / steps as f64;
        let g = lemma1_gap(&pair, t).unwrap();
        if g > best {
            best = g;
            best_t = t;
        }
    }
    assert!(best <= mid + 1e-12, "scan max {best} exceeds midpoint {mid}");
    assert!(
        (best_t - delta / 2.0).abs() <= 1e-3 + 1e-12,
        "argmax {best_t} far from midpoint {}",
        delta / 2.0
    );
}
