//! End-to-end Monte Carlo contracts: the full-data selector reproduces its
//! analytic law, the least-squares estimator is unbiased, simulated risk
//! brackets the closed form, and every simulation is bit-reproducible no
//! matter how many worker threads run it.

use mslab_core::risk::{exact_risk, lse, mc_risk};
use mslab_core::selector::{power, select, simulate_selection_prob, threshold};
use mslab_core::sequences::{llr_params, mc_llr_check};
use mslab_core::{AlternativeSequence, DesignSpec, SelectorCalibration};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

fn draw_sample(rng: &mut ChaCha8Rng, beta: f64, xs: &[f64]) -> Vec<f64> {
    xs.iter()
        .map(|&x| beta * x + rng.sample::<f64, _>(StandardNormal))
        .collect()
}

#[test]
fn full_data_selector_hits_the_nominal_level_under_the_null() {
    let design = DesignSpec::constant_one();
    let cal = SelectorCalibration::fixed_level(0.05).unwrap();
    let n = 50u64;
    let d_n = threshold(&cal, n, &design).unwrap();
    let xs = vec![1.0; n as usize];

    let replicates = 100_000u32;
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let mut hits = 0u32;
    for _ in 0..replicates {
        let ys = draw_sample(&mut rng, 0.0, &xs);
        if select(&ys, &xs, d_n).unwrap().chose_h1 {
            hits += 1;
        }
    }
    let rate = f64::from(hits) / f64::from(replicates);
    let se = (0.05f64 * 0.95 / f64::from(replicates)).sqrt();
    assert!(
        (rate - 0.05).abs() <= 3.0 * se,
        "null selection rate {rate} vs nominal 0.05 (3 se = {})",
        3.0 * se
    );
}

#[test]
fn full_data_selector_matches_analytic_power_under_drift() {
    let design = DesignSpec::constant_one();
    let cal = SelectorCalibration::fixed_level(0.05).unwrap();
    let n = 50u64;
    let beta = 0.3;
    let d_n = threshold(&cal, n, &design).unwrap();
    let xs = vec![1.0; n as usize];
    let want = power(beta, n, &cal, &design).unwrap().value();

    let replicates = 100_000u32;
    let mut rng = ChaCha8Rng::seed_from_u64(32);
    let mut hits = 0u32;
    for _ in 0..replicates {
        let ys = draw_sample(&mut rng, beta, &xs);
        if select(&ys, &xs, d_n).unwrap().chose_h1 {
            hits += 1;
        }
    }
    let rate = f64::from(hits) / f64::from(replicates);
    let se = (want * (1.0 - want) / f64::from(replicates)).sqrt();
    assert!(
        (rate - want).abs() <= 3.0 * se,
        "empirical power {rate} vs analytic {want}"
    );
}

#[test]
fn least_squares_estimator_is_unbiased() {
    let n = 50usize;
    let beta = 0.7;
    let xs = vec![1.0; n];
    let replicates = 20_000u32;
    let mut rng = ChaCha8Rng::seed_from_u64(33);
    let mut sum = 0.0;
    for _ in 0..replicates {
        let ys = draw_sample(&mut rng, beta, &xs);
        sum += lse(&ys, &xs).unwrap();
    }
    let mean = sum / f64::from(replicates);
    // sd of one estimate is 1/sqrt(Sxx) = 1/sqrt(50).
    let se = (1.0 / (n as f64)).sqrt() / f64::from(replicates).sqrt();
    assert!(
        (mean - beta).abs() <= 3.0 * se,
        "lse mean {mean} vs true slope {beta} (3 se = {})",
        3.0 * se
    );
}

#[test]
fn simulated_risk_brackets_the_closed_form() {
    let design = DesignSpec::constant_one();
    let points = [
        (0.0, 100u64, SelectorCalibration::consistent_log(1.0).unwrap()),
        (0.2, 400u64, SelectorCalibration::fixed_level(0.05).unwrap()),
    ];
    for (beta, n, cal) in points {
        let exact = exact_risk(beta, n, &cal, &design).unwrap();
        let mc = mc_risk(beta, n, &cal, &design, 200_000, 34).unwrap();
        let se = mc.mc_std_error.unwrap();
        assert!(
            (mc.risk - exact.risk).abs() <= 3.0 * se,
            "beta {beta}, n {n}: mc {} vs exact {} (3 se = {})",
            mc.risk,
            exact.risk,
            3.0 * se
        );
    }
}

#[test]
fn log_likelihood_ratio_moments_match_their_null_law() {
    let design = DesignSpec::constant_one();
    let seq = AlternativeSequence::contiguous(2.0).unwrap();
    let n = 400u64;
    let want = llr_params(&seq, n, &design).unwrap();
    let got = mc_llr_check(&seq, n, &design, 100_000, 35).unwrap();
    let mean_se = (want.variance / 1e5).sqrt();
    assert!(
        (got.mean - want.mean).abs() <= 3.0 * mean_se,
        "llr mean {} vs {}",
        got.mean,
        want.mean
    );
    // Variance of the sample variance of a normal is 2 sigma^4 / (R - 1).
    let var_se = (2.0 * want.variance * want.variance / (1e5 - 1.0)).sqrt();
    assert!(
        (got.variance - want.variance).abs() <= 3.0 * var_se,
        "llr variance {} vs {}",
        got.variance,
        want.variance
    );
}

#[test]
fn simulations_do_not_depend_on_worker_count() {
    let design = DesignSpec::constant_one();
    let cal = SelectorCalibration::consistent_log(1.0).unwrap();
    let seq = AlternativeSequence::yang(0.5, cal).unwrap();

    let single = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .unwrap();
    let quad = rayon::ThreadPoolBuilder::new()
        .num_threads(4)
        .build()
        .unwrap();

    let base_prob = simulate_selection_prob(0.1, 200, &cal, &design, 50_000, 36).unwrap();
    let base_risk = mc_risk(0.1, 200, &cal, &design, 50_000, 36).unwrap();
    let base_llr = mc_llr_check(&seq, 200, &design, 50_000, 36).unwrap();

    for pool in [&single, &quad] {
        let prob = pool
            .install(|| simulate_selection_prob(0.1, 200, &cal, &design, 50_000, 36))
            .unwrap();
        let risk = pool
            .install(|| mc_risk(0.1, 200, &cal, &design, 50_000, 36))
            .unwrap();
        let llr = pool
            .install(|| mc_llr_check(&seq, 200, &design, 50_000, 36))
            .unwrap();
        assert_eq!(prob.value().to_bits(), base_prob.value().to_bits());
        assert_eq!(risk.risk.to_bits(), base_risk.risk.to_bits());
        assert_eq!(
            risk.mc_std_error.unwrap().to_bits(),
            base_risk.mc_std_error.unwrap().to_bits()
        );
        assert_eq!(llr.mean.to_bits(), base_llr.mean.to_bits());
        assert_eq!(llr.variance.to_bits(), base_llr.variance.to_bits());
    }
}

#[test]
fn distinct_seeds_move_the_estimate() {
    let design = DesignSpec::constant_one();
    let cal = SelectorCalibration::consistent_log(1.0).unwrap();
    let a = mc_risk(0.1, 200, &cal, &design, 50_000, 1).unwrap();
    let b = mc_risk(0.1, 200, &cal, &design, 50_000, 2).unwrap();
    assert_ne!(a.risk.to_bits(), b.risk.to_bits());
}
