//! Statistical distances between the two Gaussians a selector must tell
//! apart: N(0, Sxx) and N(beta Sxx, Sxx) on the sufficient-statistic scale.
//! Everything here is a function of the single standardized shift
//! delta = beta * sqrt(Sxx).

use crate::error::{Error, Result};
use crate::gauss;
use crate::selector::{DesignSpec, SelectorCalibration};
use crate::sequences::{AlternativeSequence, RootNCoefficient};

/// The hypothesis pair at a fixed slope and design energy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianShiftPair {
    beta: f64,
    sxx: f64,
}

impl GaussianShiftPair {
    pub fn new(beta: f64, sxx: f64) -> Result<Self> {
        if !(beta.is_finite() && beta >= 0.0) {
            return Err(Error::OutOfRange {
                what: "slope beta",
                constraint: ">= 0 and finite",
                value: beta,
            });
        }
        if !(sxx.is_finite() && sxx > 0.0) {
            return Err(Error::OutOfRange {
                what: "design energy Sxx",
                constraint: "> 0 and finite",
                value: sxx,
            });
        }
        Ok(GaussianShiftPair { beta, sxx })
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn sxx(&self) -> f64 {
        self.sxx
    }

    /// Standardized mean shift between the two laws.
    pub fn delta(&self) -> f64 {
        self.beta * self.sxx.sqrt()
    }
}

/// Hellinger affinity: integral of the geometric mean of the two densities,
/// exp(-delta^2 / 8) for a pure mean shift.
pub fn hellinger_affinity(pair: &GaussianShiftPair) -> f64 {
    (-pair.beta * pair.beta * pair.sxx / 8.0).exp()
}

/// Squared Hellinger distance, 2 - 2 * affinity, evaluated as -2 expm1 of
/// the affinity exponent so tiny shifts keep their leading digits instead of
/// cancelling to zero. Ranges over [0, 2).
pub fn hellinger_distance_sq(pair: &GaussianShiftPair) -> f64 {
    -2.0 * (-pair.beta * pair.beta * pair.sxx / 8.0).exp_m1()
}

/// Total variation on the 2-scale: integral |p - q| = 2 (2 Phi(delta/2) - 1),
/// computed as 2 erf(delta / (2 sqrt 2)) to keep full precision near zero.
pub fn l1_distance(pair: &GaussianShiftPair) -> f64 {
    2.0 * gauss::erf(pair.delta() / (2.0 * std::f64::consts::SQRT_2))
}

/// Comparison slack for the distance inequalities; covers the rounding of
/// the exp/erf evaluations, not any modeling error.
pub const CHAIN_SLACK: f64 = 1e-9;

/// The two-sided sandwich evaluated at one pair:
/// H^2 <= L1 <= min(2 - A^2, 2 sqrt(H^2)).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChainCheck {
    pub hellinger_sq: f64,
    pub l1: f64,
    /// Upper bound through the affinity: 2 - A^2.
    pub upper_affinity: f64,
    /// Upper bound through the distance: 2 * H.
    pub upper_hellinger: f64,
    pub holds: bool,
}

pub fn check_inequality_chain(pair: &GaussianShiftPair) -> ChainCheck {
    let a = hellinger_affinity(pair);
    let hellinger_sq = hellinger_distance_sq(pair);
    let l1 = l1_distance(pair);
    let upper_affinity = 2.0 - a * a;
    let upper_hellinger = 2.0 * hellinger_sq.sqrt();
    let holds = hellinger_sq <= l1 + CHAIN_SLACK
        && l1 <= upper_affinity + CHAIN_SLACK
        && l1 <= upper_hellinger + CHAIN_SLACK;
    ChainCheck {
        hellinger_sq,
        l1,
        upper_affinity,
        upper_hellinger,
        holds,
    }
}

/// Power gap of the one-sided test keeping the null when T < t sqrt(Sxx):
/// Phi(t) - Phi(t - delta). Maximized over t at t = delta / 2, where it
/// equals half the L1 distance.
pub fn lemma1_gap(pair: &GaussianShiftPair, t: f64) -> Result<f64> {
    if t.is_nan() {
        return Err(Error::NonFinite {
            what: "test threshold t",
            value: t,
        });
    }
    let delta = pair.delta();
    Ok(gauss::cdf_raw(t) - gauss::cdf_raw(t - delta))
}

/// How the two hypotheses separate along a drifting sequence, judged by the
/// limit of delta_n = beta_n * sqrt(Sxx_n).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeparationClass {
    /// delta_n -> infinity: the testing problem becomes trivial.
    Strong,
    /// delta_n -> 0: the hypotheses merge.
    Weak,
    /// delta_n bounded away from 0 and infinity: the contiguous regime.
    Well,
}

/// Classifies the separation symbolically from the family's form. No series
/// is evaluated, so the verdict is a limit statement, not a grid readout.
/// Non-finite parameters (reachable only by constructing variants directly)
/// cannot be placed in any class and are reported as unclassifiable.
pub fn classify_separation(
    seq: &AlternativeSequence,
    design: &DesignSpec,
) -> Result<SeparationClass> {
    if let Some(what) = non_finite_parameter(seq) {
        return Err(Error::Unclassifiable {
            reason: format!("{what} is not finite"),
        });
    }
    seq.validate()?;
    design.validate()?;
    // With Sxx = kappa n, delta_n = c_n sqrt(kappa) where c_n = beta_n sqrt(n),
    // so kappa never changes the class.
    Ok(match seq {
        AlternativeSequence::Yang { calibration, .. }
        | AlternativeSequence::Boundary { calibration }
        | AlternativeSequence::Perfect { calibration, .. } => match calibration {
            // delta_n = factor * sqrt(tau ln n) or factor * n^gamma.
            SelectorCalibration::ConsistentLog { .. }
            | SelectorCalibration::CustomPower { .. } => SeparationClass::Strong,
            // delta_n = factor * z_{1-alpha}, constant in n.
            SelectorCalibration::FixedLevel { .. } => SeparationClass::Well,
        },
        AlternativeSequence::Contiguous { .. } => SeparationClass::Well,
        AlternativeSequence::GenericRootN { coefficient } => match coefficient {
            RootNCoefficient::Power { exponent } => {
                if *exponent > 0.0 {
                    SeparationClass::Strong
                } else {
                    SeparationClass::Weak
                }
            }
            RootNCoefficient::Constant { value } => {
                if *value > 0.0 {
                    SeparationClass::Well
                } else {
                    SeparationClass::Weak
                }
            }
        },
    })
}

fn non_finite_parameter(seq: &AlternativeSequence) -> Option<&'static str> {
    let cal_param = |cal: &SelectorCalibration| match cal {
        SelectorCalibration::ConsistentLog { tau } if !tau.is_finite() => {
            Some("calibration rate tau")
        }
        SelectorCalibration::FixedLevel { alpha } if !alpha.is_finite() => {
            Some("calibration level alpha")
        }
        SelectorCalibration::CustomPower { gamma } if !gamma.is_finite() => {
            Some("calibration exponent gamma")
        }
        _ => None,
    };
    match seq {
        AlternativeSequence::Yang { b, calibration } => {
            if !b.is_finite() {
                return Some("threshold fraction b");
            }
            cal_param(calibration)
        }
        AlternativeSequence::Boundary { calibration } => cal_param(calibration),
        AlternativeSequence::Perfect {
            b_prime,
            calibration,
        } => {
            if !b_prime.is_finite() {
                return Some("overshoot fraction b'");
            }
            cal_param(calibration)
        }
        AlternativeSequence::Contiguous { r } => (!r.is_finite()).then_some("contiguous rate r"),
        AlternativeSequence::GenericRootN { coefficient } => match coefficient {
            RootNCoefficient::Power { exponent } => {
                (!exponent.is_finite()).then_some("coefficient exponent")
            }
            RootNCoefficient::Constant { value } => {
                (!value.is_finite()).then_some("coefficient constant")
            }
        },
    }
}
