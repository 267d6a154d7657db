//! Standard normal density, distribution function, quantile, and the upper
//! truncated second moment E[Z^2 1{Z >= t}].
//!
//! The distribution function is built on an erf/erfc pair accurate to a few
//! ulps, so downstream tail probabilities hold up far beyond |z| = 8. The
//! quantile deliberately avoids a second approximation: it inverts the CDF by
//! bracketed bisection, so the pair is consistent by construction.

use crate::error::{Error, Result};

/// A probability. Construction rejects NaN and anything outside [0, 1].
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Probability(f64);

impl Probability {
    pub fn new(p: f64) -> Result<Self> {
        if p.is_nan() || !(0.0..=1.0).contains(&p) {
            return Err(Error::ProbabilityRange(p));
        }
        Ok(Probability(p))
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

/// A point on the standard normal scale. NaN is rejected; +/- infinity are
/// accepted as sentinels and map to the corresponding limit values in
/// [`std_normal_cdf`] and [`upper_truncated_second_moment`].
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct ZScore(f64);

impl ZScore {
    pub fn new(z: f64) -> Result<Self> {
        if z.is_nan() {
            return Err(Error::NonFinite {
                what: "z score",
                value: z,
            });
        }
        Ok(ZScore(z))
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

const FRAC_1_SQRT_2PI: f64 = 0.39894228040143267794;

/// phi(z) = exp(-z^2/2) / sqrt(2 pi). Rejects non-finite input.
pub fn std_normal_pdf(z: ZScore) -> Result<f64> {
    let zv = z.value();
    if !zv.is_finite() {
        return Err(Error::NonFinite {
            what: "pdf argument",
            value: zv,
        });
    }
    Ok(pdf_raw(zv))
}

/// Phi(z), with +/- infinity mapping to 1 and 0.
pub fn std_normal_cdf(z: ZScore) -> Probability {
    Probability(cdf_raw(z.value()))
}

/// Phi^{-1}(p) for p strictly inside (0, 1), solved by bisection on the CDF.
/// The result satisfies Phi(z) = p to well below 1e-10.
pub fn std_normal_quantile(p: Probability) -> Result<ZScore> {
    let pv = p.value();
    if pv <= 0.0 || pv >= 1.0 {
        return Err(Error::QuantileDomain(pv));
    }
    // Phi(-40) underflows to 0 and Phi(40) rounds to 1, so the bracket
    // covers every representable p strictly inside (0, 1).
    let mut lo = -40.0_f64;
    let mut hi = 40.0_f64;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if cdf_raw(mid) < pv {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-14 * mid.abs().max(1.0) {
            break;
        }
    }
    ZScore::new(0.5 * (lo + hi))
}

/// E[Z^2 1{Z >= t}] = t phi(t) + 1 - Phi(t). Lies in [0, 1], is nonincreasing
/// in t, and maps the sentinels -inf -> 1 and +inf -> 0.
pub fn upper_truncated_second_moment(t: ZScore) -> f64 {
    let tv = t.value();
    if tv == f64::NEG_INFINITY {
        return 1.0;
    }
    if tv == f64::INFINITY {
        return 0.0;
    }
    tv * pdf_raw(tv) + cdf_raw(-tv)
}

pub(crate) fn pdf_raw(z: f64) -> f64 {
    (-0.5 * z * z).exp() * FRAC_1_SQRT_2PI
}

pub(crate) fn cdf_raw(z: f64) -> f64 {
    (0.5 * erfc(-z * std::f64::consts::FRAC_1_SQRT_2)).clamp(0.0, 1.0)
}

pub(crate) fn quantile_raw(p: f64) -> Result<f64> {
    std_normal_quantile(Probability::new(p)?).map(ZScore::value)
}

pub(crate) fn utm_raw(t: f64) -> f64 {
    if t == f64::NEG_INFINITY {
        return 1.0;
    }
    if t == f64::INFINITY {
        return 0.0;
    }
    t * pdf_raw(t) + cdf_raw(-t)
}

// Rational-approximation erf/erfc pair, ported from the classic FreeBSD
// msun routines (also the basis of Go's math.Erf). Max error a few ulps.

const ERX: f64 = 8.45062911510467529297e-01;
const EFX: f64 = 1.28379167095512586316e-01;
const EFX8: f64 = 1.02703333676410069053e+00;
const PP0: f64 = 1.28379167095512558561e-01;
const PP1: f64 = -3.25042107247001499370e-01;
const PP2: f64 = -2.84817495755985104766e-02;
const PP3: f64 = -5.77027029648944159157e-03;
const PP4: f64 = -2.37630166566501626084e-05;
const QQ1: f64 = 3.97917223959155352819e-01;
const QQ2: f64 = 6.50222499887672944485e-02;
const QQ3: f64 = 5.08130628187576562776e-03;
const QQ4: f64 = 1.32494738004321644526e-04;
const QQ5: f64 = -3.96022827877536812320e-06;
const PA0: f64 = -2.36211856075265944077e-03;
const PA1: f64 = 4.14856118683748331666e-01;
const PA2: f64 = -3.72207876035701323847e-01;
const PA3: f64 = 3.18346619901161753674e-01;
const PA4: f64 = -1.10894694282396677476e-01;
const PA5: f64 = 3.54783043256182359371e-02;
const PA6: f64 = -2.16637559486879084300e-03;
const QA1: f64 = 1.06420880400844228286e-01;
const QA2: f64 = 5.40397917702171048937e-01;
const QA3: f64 = 7.18286544141962662868e-02;
const QA4: f64 = 1.26171219808761642112e-01;
const QA5: f64 = 1.36370839120290507362e-02;
const QA6: f64 = 1.19844998467991074170e-02;
const RA0: f64 = -9.86494403484714822705e-03;
const RA1: f64 = -6.93858572707181764372e-01;
const RA2: f64 = -1.05586262253232909814e+01;
const RA3: f64 = -6.23753324503260060396e+01;
const RA4: f64 = -1.62396669462573470355e+02;
const RA5: f64 = -1.84605092906711035994e+02;
const RA6: f64 = -8.12874355063065934246e+01;
const RA7: f64 = -9.81432934416914548592e+00;
const SA1: f64 = 1.96512716674392571292e+01;
const SA2: f64 = 1.37657754143519042600e+02;
const SA3: f64 = 4.34565877475229228821e+02;
const SA4: f64 = 6.45387271733267880336e+02;
const SA5: f64 = 4.29008140027567833386e+02;
const SA6: f64 = 1.08635005541779435134e+02;
const SA7: f64 = 6.57024977031928170135e+00;
const SA8: f64 = -6.04244152148580987438e-02;
const RB0: f64 = -9.86494292470009928597e-03;
const RB1: f64 = -7.99283237680523006574e-01;
const RB2: f64 = -1.77579549177547519889e+01;
const RB3: f64 = -1.60636384855821916062e+02;
const RB4: f64 = -6.37566443368389627722e+02;
const RB5: f64 = -1.02509513161107724954e+03;
const RB6: f64 = -4.83519191608651397019e+02;
const SB1: f64 = 3.03380607434824582924e+01;
const SB2: f64 = 3.25792512996573918826e+02;
const SB3: f64 = 1.53672958608443695994e+03;
const SB4: f64 = 3.19985821950859553908e+03;
const SB5: f64 = 2.55305040643316442583e+03;
const SB6: f64 = 4.74528541206955367215e+02;
const SB7: f64 = -2.24409524465858183362e+01;

/// Truncates x to its high 32 bits of mantissa, as the msun tail expansion
/// requires when splitting exp(-x^2).
fn pseudo_single(x: f64) -> f64 {
    f64::from_bits(x.to_bits() & 0xffff_ffff_0000_0000)
}

pub(crate) fn erf(x: f64) -> f64 {
    const VERY_TINY: f64 = 2.848094538889218e-306;
    const SMALL: f64 = 1.0 / ((1u64 << 28) as f64);

    if x.is_nan() {
        return f64::NAN;
    }
    if x == f64::INFINITY {
        return 1.0;
    }
    if x == f64::NEG_INFINITY {
        return -1.0;
    }
    let sign = x < 0.0;
    let x = x.abs();
    if x < 0.84375 {
        let temp = if x < SMALL {
            if x < VERY_TINY {
                0.125 * (8.0 * x + EFX8 * x)
            } else {
                x + EFX * x
            }
        } else {
            let z = x * x;
            let r = PP0 + z * (PP1 + z * (PP2 + z * (PP3 + z * PP4)));
            let s = 1.0 + z * (QQ1 + z * (QQ2 + z * (QQ3 + z * (QQ4 + z * QQ5))));
            x + x * (r / s)
        };
        return if sign { -temp } else { temp };
    }
    if x < 1.25 {
        let s = x - 1.0;
        let p = PA0 + s * (PA1 + s * (PA2 + s * (PA3 + s * (PA4 + s * (PA5 + s * PA6)))));
        let q = 1.0 + s * (QA1 + s * (QA2 + s * (QA3 + s * (QA4 + s * (QA5 + s * QA6)))));
        return if sign { -ERX - p / q } else { ERX + p / q };
    }
    if x >= 6.0 {
        return if sign { VERY_TINY - 1.0 } else { 1.0 - VERY_TINY };
    }
    let s = 1.0 / (x * x);
    let (r, q) = if x < 1.0 / 0.35 {
        (
            RA0 + s * (RA1 + s * (RA2 + s * (RA3 + s * (RA4 + s * (RA5 + s * (RA6 + s * RA7)))))),
            1.0 + s
                * (SA1
                    + s * (SA2
                        + s * (SA3 + s * (SA4 + s * (SA5 + s * (SA6 + s * (SA7 + s * SA8))))))),
        )
    } else {
        (
            RB0 + s * (RB1 + s * (RB2 + s * (RB3 + s * (RB4 + s * (RB5 + s * RB6))))),
            1.0 + s
                * (SB1 + s * (SB2 + s * (SB3 + s * (SB4 + s * (SB5 + s * (SB6 + s * SB7)))))),
        )
    };
    let z = pseudo_single(x);
    let out = (-z * z - 0.5625).exp() * ((z - x) * (z + x) + r / q).exp();
    if sign {
        out / x - 1.0
    } else {
        1.0 - out / x
    }
}

pub(crate) fn erfc(x: f64) -> f64 {
    const TINY: f64 = 1.0 / ((1u64 << 56) as f64);

    if x.is_nan() {
        return f64::NAN;
    }
    if x == f64::INFINITY {
        return 0.0;
    }
    if x == f64::NEG_INFINITY {
        return 2.0;
    }
    let sign = x < 0.0;
    let x = x.abs();
    if x < 0.84375 {
        let temp = if x < TINY {
            x
        } else {
            let z = x * x;
            let r = PP0 + z * (PP1 + z * (PP2 + z * (PP3 + z * PP4)));
            let s = 1.0 + z * (QQ1 + z * (QQ2 + z * (QQ3 + z * (QQ4 + z * QQ5))));
            let y = x * (r / s);
            if x < 0.25 {
                x + y
            } else {
                0.5 + (y + (x - 0.5))
            }
        };
        return if sign { 1.0 + temp } else { 1.0 - temp };
    }
    if x < 1.25 {
        let s = x - 1.0;
        let p = PA0 + s * (PA1 + s * (PA2 + s * (PA3 + s * (PA4 + s * (PA5 + s * PA6)))));
        let q = 1.0 + s * (QA1 + s * (QA2 + s * (QA3 + s * (QA4 + s * (QA5 + s * QA6)))));
        return if sign {
            1.0 + ERX + p / q
        } else {
            1.0 - ERX - p / q
        };
    }
    if x < 28.0 {
        let s = 1.0 / (x * x);
        let (r, q) = if x < 1.0 / 0.35 {
            (
                RA0 + s
                    * (RA1 + s * (RA2 + s * (RA3 + s * (RA4 + s * (RA5 + s * (RA6 + s * RA7)))))),
                1.0 + s
                    * (SA1
                        + s * (SA2
                            + s * (SA3
                                + s * (SA4 + s * (SA5 + s * (SA6 + s * (SA7 + s * SA8))))))),
            )
        } else {
            if sign && x > 6.0 {
                return 2.0;
            }
            (
                RB0 + s * (RB1 + s * (RB2 + s * (RB3 + s * (RB4 + s * (RB5 + s * RB6))))),
                1.0 + s
                    * (SB1 + s * (SB2 + s * (SB3 + s * (SB4 + s * (SB5 + s * (SB6 + s * SB7)))))),
            )
        };
        let z = pseudo_single(x);
        let out = (-z * z - 0.5625).exp() * ((z - x) * (z + x) + r / q).exp();
        return if sign { 2.0 - out / x } else { out / x };
    }
    if sign {
        2.0 - TINY
    } else {
        TINY * TINY
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(v: f64) -> ZScore {
        ZScore::new(v).unwrap()
    }

    // Reference values computed with 25-digit arithmetic.
    const CDF_TABLE: [(f64, f64); 16] = [
        (-8.0, 6.2209605742717841e-16),
        (-6.0, 9.8658764503769814e-10),
        (-4.0, 3.1671241833119921e-5),
        (-2.0, 0.022750131948179207),
        (-1.0, 0.15865525393145705),
        (-0.5, 0.3085375387259869),
        (-0.1, 0.46017216272297102),
        (0.5, 0.6914624612740131),
        (1.0, 0.84134474606854295),
        (1.5, 0.93319279873114193),
        (2.0, 0.97724986805182079),
        (2.5, 0.99379033467422386),
        (3.0, 0.99865010196836991),
        (4.0, 0.99996832875816688),
        (6.0, 0.99999999901341235),
        (8.0, 0.99999999999999938),
    ];

    #[test]
    fn cdf_matches_reference_table() {
        for &(zv, want) in &CDF_TABLE {
            let got = std_normal_cdf(z(zv)).value();
            assert!(
                (got - want).abs() <= 1e-15,
                "cdf({zv}): got {got}, want {want}"
            );
        }
    }

    #[test]
    fn cdf_symmetry_and_midpoint() {
        assert_eq!(std_normal_cdf(z(0.0)).value(), 0.5);
        for &(zv, _) in &CDF_TABLE {
            let a = std_normal_cdf(z(zv)).value();
            let b = std_normal_cdf(z(-zv)).value();
            assert!((a + b - 1.0).abs() <= 1e-15, "symmetry broke at {zv}");
        }
    }

    #[test]
    fn cdf_sentinels() {
        assert_eq!(std_normal_cdf(z(f64::INFINITY)).value(), 1.0);
        assert_eq!(std_normal_cdf(z(f64::NEG_INFINITY)).value(), 0.0);
    }

    #[test]
    fn pdf_reference_values() {
        assert!((std_normal_pdf(z(0.0)).unwrap() - 0.3989422804014327).abs() <= 1e-16);
        assert!((std_normal_pdf(z(1.0)).unwrap() - 0.24197072451914335).abs() <= 1e-16);
        assert!((std_normal_pdf(z(2.0)).unwrap() - 0.053990966513188052).abs() <= 1e-16);
        // Even in z.
        assert_eq!(
            std_normal_pdf(z(1.7)).unwrap(),
            std_normal_pdf(z(-1.7)).unwrap()
        );
    }

    #[test]
    fn pdf_rejects_non_finite() {
        assert!(std_normal_pdf(z(f64::INFINITY)).is_err());
        assert!(std_normal_pdf(z(f64::NEG_INFINITY)).is_err());
        assert!(ZScore::new(f64::NAN).is_err());
    }

    #[test]
    fn quantile_reference_values() {
        let cases = [
            (0.001, -3.0902323061678135),
            (0.025, -1.9599639845400542),
            (0.1, -1.2815515655446005),
            (0.5, 0.0),
            (0.9, 1.2815515655446005),
            (0.95, 1.6448536269514722),
            (0.975, 1.9599639845400542),
            (0.999, 3.0902323061678135),
        ];
        for (p, want) in cases {
            let got = std_normal_quantile(Probability::new(p).unwrap())
                .unwrap()
                .value();
            assert!(
                (got - want).abs() <= 1e-10,
                "quantile({p}): got {got}, want {want}"
            );
        }
    }

    #[test]
    fn quantile_inverts_cdf() {
        let mut p = 0.001;
        while p < 0.9995 {
            let q = std_normal_quantile(Probability::new(p).unwrap()).unwrap();
            let back = std_normal_cdf(q).value();
            assert!((back - p).abs() <= 1e-12, "round trip failed at p = {p}");
            p += 0.0173;
        }
    }

    #[test]
    fn quantile_rejects_endpoints() {
        assert!(std_normal_quantile(Probability::new(0.0).unwrap()).is_err());
        assert!(std_normal_quantile(Probability::new(1.0).unwrap()).is_err());
        assert!(Probability::new(1.5).is_err());
        assert!(Probability::new(-0.1).is_err());
        assert!(Probability::new(f64::NAN).is_err());
    }

    #[test]
    fn truncated_moment_reference_values() {
        let cases = [
            (-2.0, 0.86926793502544469),
            (-1.0, 0.5993740215493996),
            (-0.5, 0.51542979789186336),
            (0.0, 0.5),
            (0.5, 0.48457020210813664),
            (1.0, 0.40062597845060040),
            (2.0, 0.13073206497455531),
            (3.0, 0.014645443267444116),
        ];
        for (t, want) in cases {
            let got = upper_truncated_second_moment(z(t));
            assert!(
                (got - want).abs() <= 1e-14,
                "utm({t}): got {got}, want {want}"
            );
        }
    }

    #[test]
    fn truncated_moment_range_and_sentinels() {
        assert_eq!(upper_truncated_second_moment(z(f64::NEG_INFINITY)), 1.0);
        assert_eq!(upper_truncated_second_moment(z(f64::INFINITY)), 0.0);
        let mut prev = 1.0;
        let mut t = -10.0;
        while t <= 10.0 {
            let v = upper_truncated_second_moment(z(t));
            assert!((0.0..=1.0).contains(&v), "utm({t}) = {v} out of range");
            assert!(v <= prev + 1e-15, "utm not nonincreasing at {t}");
            prev = v;
            t += 0.25;
        }
    }

    #[test]
    fn complementary_truncation_sums_to_unit_variance() {
        // E[Z^2 1{Z >= t}] + E[Z^2 1{Z >= -t}] = E[Z^2] = 1 by symmetry.
        let mut t = -6.0;
        while t <= 6.0 {
            let s = upper_truncated_second_moment(z(t)) + upper_truncated_second_moment(z(-t));
            assert!((s - 1.0).abs() <= 1e-12, "complement broke at t = {t}");
            t += 0.37;
        }
    }
}
