//! Deterministic replicate fan-out shared by every Monte Carlo operation.
//!
//! Replicate r draws from a ChaCha stream keyed by (seed, r), so the value a
//! replicate produces is a pure function of the seed and its index. Results
//! are collected into index order before any reduction, which makes output
//! bit-identical across worker counts and scheduling orders.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

use crate::error::{Error, Result};

/// Hard ceiling on replicate counts; keeps worst-case sweep cells bounded.
pub const MAX_REPLICATES: u64 = 1_000_000;

pub(crate) fn check_replicates(replicates: u64) -> Result<()> {
    if replicates == 0 || replicates > MAX_REPLICATES {
        return Err(Error::ReplicateBudget {
            got: replicates,
            max: MAX_REPLICATES,
        });
    }
    Ok(())
}

/// Maps replicate index -> value using one independent stream per replicate.
pub(crate) fn replicate_map<T, F>(seed: u64, replicates: u64, f: F) -> Vec<T>
where
    F: Fn(&mut ChaCha8Rng) -> T + Sync,
    T: Send,
{
    (0..replicates)
        .into_par_iter()
        .map(|r| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(r);
            f(&mut rng)
        })
        .collect()
}

pub(crate) fn standard_normal(rng: &mut ChaCha8Rng) -> f64 {
    StandardNormal.sample(rng)
}

/// Two-pass sample mean and unbiased variance, reduced in index order.
pub(crate) fn mean_and_variance(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let ss = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>();
    (mean, ss / (n - 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn replicate_streams_are_stable_across_runs() {
        let a = replicate_map(7, 1000, standard_normal);
        let b = replicate_map(7, 1000, standard_normal);
        assert_eq!(a, b);
    }

    #[test]
    fn distinct_seeds_give_distinct_streams() {
        let a = replicate_map(7, 100, standard_normal);
        let b = replicate_map(8, 100, standard_normal);
        assert_ne!(a, b);
    }

    #[test]
    fn replicate_budget_is_enforced() {
        assert!(check_replicates(0).is_err());
        assert!(check_replicates(MAX_REPLICATES + 1).is_err());
        assert!(check_replicates(MAX_REPLICATES).is_ok());
    }

    #[test]
    fn mean_and_variance_on_known_values() {
        let (m, v) = mean_and_variance(&[1.0, 2.0, 3.0, 4.0]);
        assert_eq!(m, 2.5);
        assert!((v - 5.0 / 3.0).abs() < 1e-15);
    }
}
