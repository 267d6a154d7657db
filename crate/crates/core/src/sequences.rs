//! Drift sequences beta_n -> 0: parametric families of local alternatives
//! and the quantities that decide how a threshold selector treats them.
//!
//! Three families ride the selector threshold itself (a fixed fraction b of
//! d_n / Sxx, the boundary b = 1, and an overshoot (1 + b') d_n / Sxx); the
//! other two move on the root-n scale with coefficient c_n restricted to
//! monomials so every limit is decidable symbolically.

use crate::error::{Error, Result};
use crate::gauss;
use crate::mc;
use crate::selector::{self, DesignSpec, SelectorCalibration};

/// A sequence of alternatives indexed by sample size. The threshold-linked
/// families carry the calibration that defines their own drift.
#[derive(Debug, Clone, PartialEq)]
pub enum AlternativeSequence {
    /// beta_n = b * d_n / Sxx with 0 < b < 1: kept below the threshold by a
    /// fixed fraction.
    Yang {
        b: f64,
        calibration: SelectorCalibration,
    },
    /// beta_n = d_n / Sxx: exactly on the threshold.
    Boundary { calibration: SelectorCalibration },
    /// beta_n = (1 + b_prime) * d_n / Sxx with b_prime > 0: clears the
    /// threshold by a fixed fraction.
    Perfect {
        b_prime: f64,
        calibration: SelectorCalibration,
    },
    /// beta_n = r / sqrt(n) with r > 0.
    Contiguous { r: f64 },
    /// beta_n = c_n / sqrt(n) with c_n a monomial in n.
    GenericRootN { coefficient: RootNCoefficient },
}

/// Coefficient forms for the generic root-n family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RootNCoefficient {
    /// c_n = n^exponent, exponent != 0.
    Power { exponent: f64 },
    /// c_n = value >= 0 for every n.
    Constant { value: f64 },
}

impl AlternativeSequence {
    pub fn yang(b: f64, calibration: SelectorCalibration) -> Result<Self> {
        let seq = AlternativeSequence::Yang { b, calibration };
        seq.validate()?;
        Ok(seq)
    }

    pub fn boundary(calibration: SelectorCalibration) -> Result<Self> {
        let seq = AlternativeSequence::Boundary { calibration };
        seq.validate()?;
        Ok(seq)
    }

    pub fn perfect(b_prime: f64, calibration: SelectorCalibration) -> Result<Self> {
        let seq = AlternativeSequence::Perfect {
            b_prime,
            calibration,
        };
        seq.validate()?;
        Ok(seq)
    }

    pub fn contiguous(r: f64) -> Result<Self> {
        let seq = AlternativeSequence::Contiguous { r };
        seq.validate()?;
        Ok(seq)
    }

    pub fn generic_power(exponent: f64) -> Result<Self> {
        let seq = AlternativeSequence::GenericRootN {
            coefficient: RootNCoefficient::Power { exponent },
        };
        seq.validate()?;
        Ok(seq)
    }

    pub fn generic_constant(value: f64) -> Result<Self> {
        let seq = AlternativeSequence::GenericRootN {
            coefficient: RootNCoefficient::Constant { value },
        };
        seq.validate()?;
        Ok(seq)
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            AlternativeSequence::Yang { b, calibration } => {
                calibration.validate()?;
                if !(b.is_finite() && *b > 0.0 && *b < 1.0) {
                    return Err(Error::OutOfRange {
                        what: "threshold fraction b",
                        constraint: "strictly inside (0, 1)",
                        value: *b,
                    });
                }
            }
            AlternativeSequence::Boundary { calibration } => calibration.validate()?,
            AlternativeSequence::Perfect {
                b_prime,
                calibration,
            } => {
                calibration.validate()?;
                if !(b_prime.is_finite() && *b_prime > 0.0) {
                    return Err(Error::OutOfRange {
                        what: "overshoot fraction b'",
                        constraint: "> 0 and finite",
                        value: *b_prime,
                    });
                }
            }
            AlternativeSequence::Contiguous { r } => {
                if !(r.is_finite() && *r > 0.0) {
                    return Err(Error::OutOfRange {
                        what: "contiguous rate r",
                        constraint: "> 0 and finite",
                        value: *r,
                    });
                }
            }
            AlternativeSequence::GenericRootN { coefficient } => match coefficient {
                RootNCoefficient::Power { exponent } => {
                    if !(exponent.is_finite() && *exponent != 0.0) {
                        return Err(Error::OutOfRange {
                            what: "coefficient exponent",
                            constraint: "finite and nonzero",
                            value: *exponent,
                        });
                    }
                }
                RootNCoefficient::Constant { value } => {
                    if !(value.is_finite() && *value >= 0.0) {
                        return Err(Error::OutOfRange {
                            what: "coefficient constant",
                            constraint: ">= 0 and finite",
                            value: *value,
                        });
                    }
                }
            },
        }
        Ok(())
    }

    /// Short family label for diagnostics and error messages.
    pub fn family_name(&self) -> &'static str {
        match self {
            AlternativeSequence::Yang { .. } => "yang",
            AlternativeSequence::Boundary { .. } => "boundary",
            AlternativeSequence::Perfect { .. } => "perfect",
            AlternativeSequence::Contiguous { .. } => "contiguous",
            AlternativeSequence::GenericRootN { .. } => "generic",
        }
    }

    /// The bound calibration for threshold-linked families.
    pub fn bound_calibration(&self) -> Option<&SelectorCalibration> {
        match self {
            AlternativeSequence::Yang { calibration, .. }
            | AlternativeSequence::Boundary { calibration }
            | AlternativeSequence::Perfect { calibration, .. } => Some(calibration),
            _ => None,
        }
    }

    /// Threshold multiple for the linked families: beta_n = factor * d_n / Sxx.
    fn threshold_factor(&self) -> Option<f64> {
        match self {
            AlternativeSequence::Yang { b, .. } => Some(*b),
            AlternativeSequence::Boundary { .. } => Some(1.0),
            AlternativeSequence::Perfect { b_prime, .. } => Some(1.0 + b_prime),
            _ => None,
        }
    }
}

/// beta_n at sample size n.
pub fn beta_at(seq: &AlternativeSequence, n: u64, design: &DesignSpec) -> Result<f64> {
    seq.validate()?;
    design.validate()?;
    if n < 2 {
        return Err(Error::SampleTooSmall(n));
    }
    let nf = n as f64;
    Ok(match seq {
        AlternativeSequence::Yang { b, calibration } => {
            b * selector::threshold(calibration, n, design)? / design.sum_xx(n)
        }
        AlternativeSequence::Boundary { calibration } => {
            selector::threshold(calibration, n, design)? / design.sum_xx(n)
        }
        AlternativeSequence::Perfect {
            b_prime,
            calibration,
        } => (1.0 + b_prime) * selector::threshold(calibration, n, design)? / design.sum_xx(n),
        AlternativeSequence::Contiguous { r } => r / nf.sqrt(),
        AlternativeSequence::GenericRootN { coefficient } => match coefficient {
            RootNCoefficient::Power { exponent } => nf.powf(*exponent) / nf.sqrt(),
            RootNCoefficient::Constant { value } => value / nf.sqrt(),
        },
    })
}

/// Selection power along the sequence under the given selector calibration:
/// (n, pi_n(beta_n)) for each grid point.
pub fn power_along(
    seq: &AlternativeSequence,
    cal: &SelectorCalibration,
    design: &DesignSpec,
    n_grid: &[u64],
) -> Result<Vec<(u64, f64)>> {
    n_grid
        .iter()
        .map(|&n| {
            let beta = beta_at(seq, n, design)?;
            Ok((n, selector::power(beta, n, cal, design)?.value()))
        })
        .collect()
}

/// Scaled acceptance bias along the sequence: n * beta_n^2 * Pr(accept null).
/// This is the term that decides whether risk stays on the root-n scale.
pub fn scaled_bias_along(
    seq: &AlternativeSequence,
    cal: &SelectorCalibration,
    design: &DesignSpec,
    n_grid: &[u64],
) -> Result<Vec<(u64, f64)>> {
    n_grid
        .iter()
        .map(|&n| {
            let beta = beta_at(seq, n, design)?;
            let accept = selector::accept_prob(beta, n, cal, design)?.value();
            Ok((n, n as f64 * beta * beta * accept))
        })
        .collect()
}

/// Margin report: whether drift and threshold stay at least M standard
/// deviations apart at this n, and the first n where they do.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConfusionMargin {
    pub holds: bool,
    /// Smallest n >= 2 at which the margin holds; None when it never does.
    pub minimal_n: Option<u64>,
}

/// Checks the separation margin for the threshold-linked families. The
/// sequence's own calibration defines both the drift and the threshold, so a
/// mismatched pair is unrepresentable. Root-n families have no threshold to
/// separate from and are rejected.
///
/// For beta_n = u * d_n / Sxx the margin in z units is |1 - u| * d_n /
/// sqrt(Sxx); it holds when that exceeds M (strictly), from below for u < 1
/// and from above for u > 1. The boundary u = 1 has zero margin at every n.
pub fn confusion_margin(
    seq: &AlternativeSequence,
    design: &DesignSpec,
    n: u64,
    big_m: f64,
) -> Result<ConfusionMargin> {
    seq.validate()?;
    design.validate()?;
    if n < 2 {
        return Err(Error::SampleTooSmall(n));
    }
    if !(big_m.is_finite() && big_m > 0.0) {
        return Err(Error::OutOfRange {
            what: "margin M",
            constraint: "> 0 and finite",
            value: big_m,
        });
    }
    let factor = seq.threshold_factor().ok_or(Error::MarginNotApplicable {
        family: seq.family_name(),
    })?;
    let cal = seq
        .bound_calibration()
        .expect("threshold-linked families carry a calibration");
    let gap = (factor - 1.0).abs();
    if gap == 0.0 {
        // Boundary drift: zero separation for every n.
        return Ok(ConfusionMargin {
            holds: false,
            minimal_n: None,
        });
    }
    let holds = gap * standardized_threshold(cal, n, design)? > big_m;
    let minimal_n = minimal_margin_n(cal, design, gap, big_m)?;
    Ok(ConfusionMargin { holds, minimal_n })
}

/// d_n / sqrt(Sxx): the threshold in z units.
fn standardized_threshold(
    cal: &SelectorCalibration,
    n: u64,
    design: &DesignSpec,
) -> Result<f64> {
    Ok(selector::threshold(cal, n, design)? / design.sum_xx(n).sqrt())
}

/// Smallest n >= 2 with gap * d_n / sqrt(Sxx) > M, by inverting each
/// calibration's standardized threshold in closed form.
fn minimal_margin_n(
    cal: &SelectorCalibration,
    design: &DesignSpec,
    gap: f64,
    big_m: f64,
) -> Result<Option<u64>> {
    let target = big_m / gap;
    let crossing = match *cal {
        // sqrt(tau ln n) > t  <=>  n > exp(t^2 / tau)
        SelectorCalibration::ConsistentLog { tau } => Some((target * target / tau).exp()),
        // Constant in n: holds everywhere or nowhere.
        SelectorCalibration::FixedLevel { alpha } => {
            let z = gauss::quantile_raw(1.0 - alpha)?;
            return Ok(if gap * z > big_m { Some(2) } else { None });
        }
        // n^gamma > t  <=>  n > t^(1/gamma)
        SelectorCalibration::CustomPower { gamma } => Some(target.powf(1.0 / gamma)),
    };
    let Some(crossing) = crossing else {
        return Ok(None);
    };
    if !crossing.is_finite() {
        return Ok(None);
    }
    let mut candidate = (crossing.floor() as u64).max(1);
    // Strict inequality plus floating point near the crossing: step to the
    // first n that actually clears the margin.
    while gap * standardized_threshold(cal, candidate.max(2), design)? <= big_m {
        candidate += 1;
    }
    Ok(Some(candidate.max(2)))
}

/// Mean and variance of the log likelihood ratio log(dP_{n,beta_n}/dP_{n,0})
/// under the null: N(-v/2, v) with v = beta_n^2 * Sxx.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LlrParams {
    pub mean: f64,
    pub variance: f64,
}

pub fn llr_params(seq: &AlternativeSequence, n: u64, design: &DesignSpec) -> Result<LlrParams> {
    let beta = beta_at(seq, n, design)?;
    let variance = beta * beta * design.sum_xx(n);
    Ok(LlrParams {
        mean: -variance / 2.0,
        variance,
    })
}

/// Symbolic contiguity verdict: does sup_n n * beta_n^2 stay bounded?
/// Threshold-linked families inherit the answer from their calibration
/// (bounded exactly when the standardized threshold stays bounded).
pub fn is_contiguous(seq: &AlternativeSequence, design: &DesignSpec) -> Result<bool> {
    seq.validate()?;
    design.validate()?;
    Ok(match seq {
        AlternativeSequence::Yang { calibration, .. }
        | AlternativeSequence::Boundary { calibration }
        | AlternativeSequence::Perfect { calibration, .. } => !calibration.is_consistent(),
        AlternativeSequence::Contiguous { .. } => true,
        AlternativeSequence::GenericRootN { coefficient } => match coefficient {
            RootNCoefficient::Power { exponent } => *exponent < 0.0,
            RootNCoefficient::Constant { .. } => true,
        },
    })
}

/// Empirical check of the LLR null distribution: simulates the exponent
/// beta_n * T - beta_n^2 * Sxx / 2 with T drawn under the null, and returns
/// the sample mean and unbiased sample variance.
pub fn mc_llr_check(
    seq: &AlternativeSequence,
    n: u64,
    design: &DesignSpec,
    replicates: u64,
    seed: u64,
) -> Result<LlrParams> {
    let beta = beta_at(seq, n, design)?;
    mc::check_replicates(replicates)?;
    let sxx = design.sum_xx(n);
    let sd = sxx.sqrt();
    let half_var = beta * beta * sxx / 2.0;
    let exponents = mc::replicate_map(seed, replicates, |rng| {
        beta * (sd * mc::standard_normal(rng)) - half_var
    });
    let (mean, variance) = mc::mean_and_variance(&exponents);
    Ok(LlrParams { mean, variance })
}
