//! Normal kernel throughput: the cdf feeds every power and risk evaluation,
//! and the bisection quantile is the slowest primitive in the crate.

use criterion::{criterion_group, criterion_main, Criterion};
use mslab_core::gauss::{std_normal_cdf, std_normal_quantile, upper_truncated_second_moment};
use mslab_core::{Probability, ZScore};
use std::hint::black_box;

fn bench_cdf(c: &mut Criterion) {
    let zs: Vec<ZScore> = (-40..=40)
        .map(|i| ZScore::new(f64::from(i) / 5.0).unwrap())
        .collect();
    c.bench_function("cdf over [-8, 8]", |b| {
        b.iter(|| {
            let mut acc = 0.0;
            for &z in &zs {
                acc += std_normal_cdf(black_box(z)).value();
            }
            acc
        })
    });
}

fn bench_quantile(c: &mut Criterion) {
    let ps: Vec<Probability> = (1..100)
        .map(|i| Probability::new(f64::from(i) / 100.0).unwrap())
        .collect();
    c.bench_function("quantile percentile grid", |b| {
        b.iter(|| {
            let mut acc = 0.0;
            for &p in &ps {
                acc += std_normal_quantile(black_box(p)).unwrap().value();
            }
            acc
        })
    });
}

fn bench_tail_moment(c: &mut Criterion) {
    let ts: Vec<ZScore> = (-40..=40)
        .map(|i| ZScore::new(f64::from(i) / 5.0).unwrap())
        .collect();
    c.bench_function("truncated second moment over [-8, 8]", |b| {
        b.iter(|| {
            let mut acc = 0.0;
            for &t in &ts {
                acc += upper_truncated_second_moment(black_box(t));
            }
            acc
        })
    });
}

criterion_group!(kernels, bench_cdf, bench_quantile, bench_tail_moment);
criterion_main!(kernels);
