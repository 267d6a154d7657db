//! Independent numerical oracles for the closed forms under test: the
//! exponential by series, Gaussian integrals by adaptive Simpson, and a
//! quantile by bisecting the integrated CDF. None of these touch the
//! library's own erf/erfc path.

#![allow(dead_code)]

/// exp by argument reduction and Taylor series.
pub fn exp_series(x: f64) -> f64 {
    if x < -745.0 {
        return 0.0;
    }
    let k = (x / std::f64::consts::LN_2).round();
    let r = x - k * std::f64::consts::LN_2;
    let mut term = 1.0;
    let mut sum = 1.0;
    for i in 1..60 {
        term *= r / i as f64;
        sum += term;
        if term.abs() < 1e-20 * sum.abs() {
            break;
        }
    }
    sum * 2f64.powi(k as i32)
}

pub fn pdf_oracle(x: f64) -> f64 {
    exp_series(-x * x / 2.0) / std::f64::consts::TAU.sqrt()
}

/// Adaptive Simpson with Richardson correction, run over panels of width at
/// most 2 so a narrow peak inside a long flat range cannot be stepped over.
pub fn integrate(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    let panels = ((b - a) / 2.0).ceil().max(1.0) as usize;
    let width = (b - a) / panels as f64;
    let panel_tol = tol / panels as f64;
    let mut total = 0.0;
    for k in 0..panels {
        let lo = a + k as f64 * width;
        let hi = if k + 1 == panels { b } else { lo + width };
        let m = (lo + hi) / 2.0;
        let (fa, fm, fb) = (f(lo), f(m), f(hi));
        let whole = (hi - lo) / 6.0 * (fa + 4.0 * fm + fb);
        total += adaptive(f, lo, fa, hi, fb, m, fm, whole, panel_tol, 50);
    }
    total
}

#[allow(clippy::too_many_arguments)]
fn adaptive(
    f: &dyn Fn(f64) -> f64,
    a: f64,
    fa: f64,
    b: f64,
    fb: f64,
    m: f64,
    fm: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let lm = (a + m) / 2.0;
    let rm = (m + b) / 2.0;
    let (flm, frm) = (f(lm), f(rm));
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        left + right + delta / 15.0
    } else {
        adaptive(f, a, fa, m, fm, lm, flm, left, tol / 2.0, depth - 1)
            + adaptive(f, m, fm, b, fb, rm, frm, right, tol / 2.0, depth - 1)
    }
}

pub fn cdf_oracle(z: f64) -> f64 {
    if z >= 0.0 {
        0.5 + integrate(&pdf_oracle, 0.0, z.min(40.0), 1e-13)
    } else {
        0.5 - integrate(&pdf_oracle, z.max(-40.0), 0.0, 1e-13)
    }
}

/// E[Z^2; Z >= t] for standard normal Z.
pub fn utm_oracle(t: f64) -> f64 {
    let f = |x: f64| x * x * pdf_oracle(x);
    integrate(&f, t, 40.0, 1e-13)
}

/// Integral of the geometric mean of N(0,1) and N(delta,1) densities.
pub fn affinity_oracle(delta: f64) -> f64 {
    let f = move |x: f64| (pdf_oracle(x) * pdf_oracle(x - delta)).sqrt();
    let center = delta / 2.0;
    integrate(&f, center - 40.0, center + 40.0, 1e-13)
}

/// Integral of |density difference| between N(0,1) and N(delta,1), split at
/// the crossing point so the integrand stays smooth on each piece. The
/// bounds cover both modes, not just the crossing neighborhood.
pub fn l1_oracle(delta: f64) -> f64 {
    let diff = move |x: f64| pdf_oracle(x) - pdf_oracle(x - delta);
    let neg_diff = move |x: f64| pdf_oracle(x - delta) - pdf_oracle(x);
    let center = delta / 2.0;
    integrate(&diff, -40.0, center, 1e-13) + integrate(&neg_diff, center, delta + 40.0, 1e-13)
}

/// Quantile by bisection on the integrated CDF.
pub fn quantile_oracle(p: f64) -> f64 {
    assert!(p > 0.0 && p < 1.0);
    let (mut lo, mut hi) = (-40.0f64, 40.0f64);
    while hi - lo > 1e-13 {
        let mid = (lo + hi) / 2.0;
        if cdf_oracle(mid) < p {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (lo + hi) / 2.0
}
