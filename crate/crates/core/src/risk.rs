//! Prediction risk of the estimator that reports the least squares slope
//! when the selector keeps it and zero otherwise. The risk splits into an
//! estimation term (error given selection) and a bias term (the slope lost
//! when the null is kept); on the n scale the bias term is what separates
//! the calibrations.

use crate::error::{Error, Result};
use crate::gauss;
use crate::mc;
use crate::selector::{self, DesignSpec, SelectorCalibration};

/// Least squares slope: sum x_i y_i / sum x_i^2.
pub fn lse(ys: &[f64], xs: &[f64]) -> Result<f64> {
    if ys.len() != xs.len() {
        return Err(Error::LengthMismatch {
            lhs: ys.len(),
            rhs: xs.len(),
        });
    }
    if ys.is_empty() {
        return Err(Error::SampleTooSmall(0));
    }
    for (label, data) in [("response", ys), ("regressor", xs)] {
        if let Some(&bad) = data.iter().find(|v| !v.is_finite()) {
            return Err(Error::NonFinite {
                what: label,
                value: bad,
            });
        }
    }
    let sxx: f64 = xs.iter().map(|x| x * x).sum();
    if sxx == 0.0 {
        return Err(Error::DegenerateDesign);
    }
    let sxy: f64 = ys.iter().zip(xs).map(|(y, x)| y * x).sum();
    Ok(sxy / sxx)
}

/// How a risk number was produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RiskMethod {
    Exact,
    MonteCarlo,
}

/// Risk of the post-selection estimator at one (beta, n) point.
/// `risk = prediction_factor * (term_estimation + term_bias)` holds exactly
/// for both methods; `scaled_risk = n * risk`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RiskReport {
    pub beta: f64,
    pub n: u64,
    /// Probability the null is kept (the slope is dropped).
    pub accept_prob: f64,
    /// E[(slope estimate - beta)^2; selected], before the prediction factor.
    pub term_estimation: f64,
    /// beta^2 * accept_prob, before the prediction factor.
    pub term_bias: f64,
    pub risk: f64,
    pub scaled_risk: f64,
    pub method: RiskMethod,
    /// Standard error of `risk`; None for the exact method.
    pub mc_std_error: Option<f64>,
}

/// Closed-form risk under the calibrated threshold.
pub fn exact_risk(
    beta: f64,
    n: u64,
    cal: &SelectorCalibration,
    design: &DesignSpec,
) -> Result<RiskReport> {
    let d_n = selector::threshold(cal, n, design)?;
    exact_risk_at(beta, n, d_n, design)
}

/// Closed-form risk against an explicit threshold. The +/- infinity
/// sentinels mean never/always selecting, giving the pure null-model and
/// pure least squares risks.
pub fn exact_risk_at(beta: f64, n: u64, d_n: f64, design: &DesignSpec) -> Result<RiskReport> {
    design.validate()?;
    let tau = selector::standardized_margin(beta, n, d_n, design)?;
    let sxx = design.sum_xx(n);
    let accept_prob = gauss::cdf_raw(tau);
    let term_estimation = gauss::utm_raw(tau) / sxx;
    let term_bias = beta * beta * accept_prob;
    let risk = design.prediction_factor * (term_estimation + term_bias);
    Ok(RiskReport {
        beta,
        n,
        accept_prob,
        term_estimation,
        term_bias,
        risk,
        scaled_risk: n as f64 * risk,
        method: RiskMethod::Exact,
        mc_std_error: None,
    })
}

/// Monte Carlo risk under the calibrated threshold.
pub fn mc_risk(
    beta: f64,
    n: u64,
    cal: &SelectorCalibration,
    design: &DesignSpec,
    replicates: u64,
    seed: u64,
) -> Result<RiskReport> {
    let d_n = selector::threshold(cal, n, design)?;
    mc_risk_at(beta, n, d_n, design, replicates, seed)
}

/// Monte Carlo risk against an explicit threshold. Each replicate draws the
/// selection statistic from its sampling law, decides, and pays either the
/// squared estimation error or the squared dropped slope, never both; the
/// report's decomposition identity therefore holds replicate by replicate.
pub fn mc_risk_at(
    beta: f64,
    n: u64,
    d_n: f64,
    design: &DesignSpec,
    replicates: u64,
    seed: u64,
) -> Result<RiskReport> {
    design.validate()?;
    mc::check_replicates(replicates)?;
    selector::standardized_margin(beta, n, d_n, design)?;
    let sxx = design.sum_xx(n);
    let sd = sxx.sqrt();
    let mean = beta * sxx;
    let draws = mc::replicate_map(seed, replicates, |rng| {
        let t = mean + sd * mc::standard_normal(rng);
        if t >= d_n {
            let err = t / sxx - beta;
            (err * err, 0.0, false)
        } else {
            (0.0, beta * beta, true)
        }
    });
    let r = replicates as f64;
    let mut sum_est = 0.0;
    let mut sum_bias = 0.0;
    let mut accepted = 0u64;
    for &(est, bias, kept_null) in &draws {
        sum_est += est;
        sum_bias += bias;
        accepted += u64::from(kept_null);
    }
    let term_estimation = sum_est / r;
    let term_bias = sum_bias / r;
    let risk = design.prediction_factor * (term_estimation + term_bias);
    let losses: Vec<f64> = draws
        .iter()
        .map(|&(est, bias, _)| design.prediction_factor * (est + bias))
        .collect();
    let (_, loss_var) = mc::mean_and_variance(&losses);
    Ok(RiskReport {
        beta,
        n,
        accept_prob: accepted as f64 / r,
        term_estimation,
        term_bias,
        risk,
        scaled_risk: n as f64 * risk,
        method: RiskMethod::MonteCarlo,
        mc_std_error: Some((loss_var / r).sqrt()),
    })
}

/// Slope grids for scanning risk over the alternative range.
#[derive(Debug, Clone, PartialEq)]
pub enum BetaGrid {
    /// Zero, a geometric sweep of 1e-4..2.5 times the reference slope
    /// d_n / Sxx at 40 points per decade, and the key multiples
    /// {0.25, 0.5, 0.75, 1, 1.5, 2} of it. Anchoring at the reference slope
    /// makes the sweep cover the same relative ground at every n.
    Standard,
    /// One absolute slope.
    SinglePoint { beta: f64 },
    /// Explicit absolute slopes.
    Explicit { betas: Vec<f64> },
}

const STANDARD_POINTS_PER_DECADE: f64 = 40.0;
const STANDARD_RELATIVE_LO: f64 = 1e-4;
const STANDARD_RELATIVE_HI: f64 = 2.5;
const STANDARD_KEY_MULTIPLES: [f64; 6] = [0.25, 0.5, 0.75, 1.0, 1.5, 2.0];

impl BetaGrid {
    pub fn standard() -> Self {
        BetaGrid::Standard
    }

    pub fn single_point(beta: f64) -> Result<Self> {
        validate_slope(beta)?;
        Ok(BetaGrid::SinglePoint { beta })
    }

    pub fn from_values(betas: Vec<f64>) -> Result<Self> {
        if betas.is_empty() {
            return Err(Error::EmptyGrid);
        }
        for &beta in &betas {
            validate_slope(beta)?;
        }
        Ok(BetaGrid::Explicit { betas })
    }

    /// Absolute slopes for this sample size, sorted and deduplicated.
    pub fn materialize(
        &self,
        n: u64,
        cal: &SelectorCalibration,
        design: &DesignSpec,
    ) -> Result<Vec<f64>> {
        let mut betas = match self {
            BetaGrid::Standard => {
                let beta_ref = selector::threshold(cal, n, design)? / design.sum_xx(n);
                let decades = (STANDARD_RELATIVE_HI / STANDARD_RELATIVE_LO).log10();
                let steps = (decades * STANDARD_POINTS_PER_DECADE).ceil() as usize;
                let lo = STANDARD_RELATIVE_LO.log10();
                let mut betas = vec![0.0];
                for i in 0..=steps {
                    let u = 10f64.powf(lo + decades * i as f64 / steps as f64);
                    betas.push(u * beta_ref);
                }
                for m in STANDARD_KEY_MULTIPLES {
                    betas.push(m * beta_ref);
                }
                betas
            }
            BetaGrid::SinglePoint { beta } => vec![*beta],
            BetaGrid::Explicit { betas } => betas.clone(),
        };
        for &beta in &betas {
            validate_slope(beta)?;
        }
        betas.sort_by(|a, b| a.partial_cmp(b).expect("slopes validated finite"));
        betas.dedup();
        Ok(betas)
    }

    /// One-line grid description recorded next to scan results.
    pub fn describe(&self) -> String {
        match self {
            BetaGrid::Standard => format!(
                "0 + geometric {STANDARD_RELATIVE_LO:e}..{STANDARD_RELATIVE_HI} x reference slope \
                 at {STANDARD_POINTS_PER_DECADE}/decade + key multiples {STANDARD_KEY_MULTIPLES:?}"
            ),
            BetaGrid::SinglePoint { beta } => format!("single slope {beta}"),
            BetaGrid::Explicit { betas } => format!("{} explicit slopes", betas.len()),
        }
    }
}

fn validate_slope(beta: f64) -> Result<()> {
    if !(beta.is_finite() && beta >= 0.0) {
        return Err(Error::OutOfRange {
            what: "grid slope",
            constraint: ">= 0 and finite",
            value: beta,
        });
    }
    Ok(())
}

/// Largest scaled risk over a slope grid at one sample size.
#[derive(Debug, Clone, PartialEq)]
pub struct SupScanResult {
    pub n: u64,
    pub sup_scaled_risk: f64,
    pub argmax_beta: f64,
    pub grid_spec: String,
}

pub fn scaled_risk_sup(
    n: u64,
    cal: &SelectorCalibration,
    design: &DesignSpec,
    grid: &BetaGrid,
) -> Result<SupScanResult> {
    let betas = grid.materialize(n, cal, design)?;
    let mut sup = f64::NEG_INFINITY;
    let mut argmax = betas[0];
    for &beta in &betas {
        let scaled = exact_risk(beta, n, cal, design)?.scaled_risk;
        if scaled > sup {
            sup = scaled;
            argmax = beta;
        }
    }
    Ok(SupScanResult {
        n,
        sup_scaled_risk: sup,
        argmax_beta: argmax,
        grid_spec: grid.describe(),
    })
}
