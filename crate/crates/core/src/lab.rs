//! Scenario runner: each asymptotic claim becomes a finite sweep over an n
//! grid, a limit classifier with explicit cutoffs renders the verdict, and
//! tables serialize to CSV or plot data.
//!
//! The preset grids stop at n = 1e8, so verdicts use cutoffs relaxed to what
//! seven decades can exhibit (power cutoff 0.02, growth factor 3); the
//! defaults on [`LimitThresholds`] are the stricter reference values.

use std::fmt;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use rand::Rng;
use rayon::prelude::*;

use crate::distance::{self, GaussianShiftPair};
use crate::error::{Error, Result};
use crate::mc;
use crate::risk::{self, BetaGrid};
use crate::selector::{self, DesignSpec, SelectorCalibration};
use crate::sequences::{self, AlternativeSequence, RootNCoefficient};

/// Largest sample size evaluated analytically.
pub const MAX_ANALYTIC_N: u64 = 100_000_000;
/// Largest sample size at which Monte Carlo columns are filled.
pub const MAX_MC_N: u64 = 10_000;

/// The eight built-in experiments.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scenario {
    /// Drift at a fixed fraction below the threshold: bias diverges on the
    /// n scale while power dies.
    Yang,
    /// Drift exactly on the threshold: power pinned at one half.
    Boundary,
    /// Drift a fixed fraction above the threshold: power tends to one and
    /// the scaled bias vanishes.
    Perfect,
    /// Root-n drift: scaled bias settles at r squared.
    Contiguous,
    /// Sup of scaled risk stays range-bounded for a fixed-level threshold.
    AicBounded,
    /// Sup of scaled risk grows without bound for a log-growth threshold.
    BicDiverges,
    /// Distance inequality chain audited over randomized pairs.
    DistanceCheck,
    /// The power-gap bound attained at the midpoint threshold.
    Lemma1Attain,
}

impl Scenario {
    pub fn name(&self) -> &'static str {
        match self {
            Scenario::Yang => "yang",
            Scenario::Boundary => "boundary",
            Scenario::Perfect => "perfect",
            Scenario::Contiguous => "contiguous",
            Scenario::AicBounded => "aic_bounded",
            Scenario::BicDiverges => "bic_diverges",
            Scenario::DistanceCheck => "distance_check",
            Scenario::Lemma1Attain => "lemma1_attain",
        }
    }

    pub const ALL: [Scenario; 8] = [
        Scenario::Yang,
        Scenario::Boundary,
        Scenario::Perfect,
        Scenario::Contiguous,
        Scenario::AicBounded,
        Scenario::BicDiverges,
        Scenario::DistanceCheck,
        Scenario::Lemma1Attain,
    ];
}

impl FromStr for Scenario {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.to_ascii_lowercase().replace('-', "_");
        Scenario::ALL
            .into_iter()
            .find(|sc| sc.name() == key)
            .ok_or_else(|| {
                let names: Vec<&str> = Scenario::ALL.iter().map(|sc| sc.name()).collect();
                Error::Config(format!(
                    "unknown scenario '{s}'; expected one of {}",
                    names.join(", ")
                ))
            })
    }
}

/// Cutoffs turning a finite series into a limit verdict. The defaults are
/// deliberately strict; grid-sized relaxations must be chosen knowingly.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LimitThresholds {
    /// A tail below this (after a nonincreasing run) reads as tending to 0.
    pub zeta_zero: f64,
    /// Growth beyond this factor (after a nondecreasing run) reads as
    /// diverging.
    pub zeta_inf: f64,
    /// A max/min ratio under this reads as bounded.
    pub rho: f64,
}

impl Default for LimitThresholds {
    fn default() -> Self {
        LimitThresholds {
            zeta_zero: 1e-3,
            zeta_inf: 100.0,
            rho: 3.0,
        }
    }
}

impl LimitThresholds {
    /// Cutoffs sized for the seven-decade preset grids, where log-speed
    /// divergence only accumulates a small factor: tail cutoff 0.02,
    /// growth factor 3, range ratio 3.
    pub fn relaxed_for_grids() -> Self {
        LimitThresholds {
            zeta_zero: 0.02,
            zeta_inf: 3.0,
            rho: 3.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (what, value, floor) in [
            ("tail cutoff zeta_zero", self.zeta_zero, 0.0),
            ("growth factor zeta_inf", self.zeta_inf, 1.0),
            ("range ratio rho", self.rho, 1.0),
        ] {
            if !(value.is_finite() && value > floor) {
                return Err(Error::OutOfRange {
                    what,
                    constraint: "finite and above its floor (0 for the tail cutoff, 1 for the ratios)",
                    value,
                });
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LimitTag {
    TendsToZero,
    Bounded,
    Diverges,
    Inconclusive,
}

impl fmt::Display for LimitTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LimitTag::TendsToZero => "TENDS_TO_ZERO",
            LimitTag::Bounded => "BOUNDED",
            LimitTag::Diverges => "DIVERGES",
            LimitTag::Inconclusive => "INCONCLUSIVE",
        })
    }
}

/// Verdict plus the evidence it was read from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LimitVerdict {
    pub tag: LimitTag,
    pub first: f64,
    pub last: f64,
    pub min: f64,
    pub max: f64,
    /// A nonincreasing run covers the tail and starts in the first half.
    pub eventually_nonincreasing: bool,
    /// Same for a nondecreasing run.
    pub eventually_nondecreasing: bool,
    /// max / min; infinite when the series touches zero without being all
    /// zero.
    pub range_ratio: f64,
    /// last / first under the same guard.
    pub growth_ratio: f64,
}

/// Reads a limit statement off a finite series. The rules apply in order:
/// tends to zero (nonincreasing tail ending below zeta_zero), diverges
/// (nondecreasing tail ending above zeta_inf times the start), bounded
/// (max/min under rho), else inconclusive. A monotone run counts as a tail
/// when it starts no later than the series midpoint.
pub fn classify_limit(series: &[f64], thresholds: &LimitThresholds) -> Result<LimitVerdict> {
    thresholds.validate()?;
    if series.len() < 3 {
        return Err(Error::SeriesTooShort(series.len()));
    }
    if let Some(&bad) = series.iter().find(|v| !v.is_finite()) {
        return Err(Error::NonFinite {
            what: "series value",
            value: bad,
        });
    }
    let first = series[0];
    let last = *series.last().expect("nonempty");
    let min = series.iter().copied().fold(f64::INFINITY, f64::min);
    let max = series.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let half = series.len() / 2;
    let eventually_nonincreasing = monotone_suffix_start(series, |a, b| a >= b) <= half;
    let eventually_nondecreasing = monotone_suffix_start(series, |a, b| a <= b) <= half;
    let guarded_ratio = |num: f64, den: f64| {
        if den != 0.0 {
            num / den
        } else if num == 0.0 {
            1.0
        } else {
            f64::INFINITY
        }
    };
    let range_ratio = guarded_ratio(max, min);
    let growth_ratio = guarded_ratio(last, first);
    let tag = if eventually_nonincreasing && last < thresholds.zeta_zero {
        LimitTag::TendsToZero
    } else if eventually_nondecreasing && last > thresholds.zeta_inf * first {
        LimitTag::Diverges
    } else if range_ratio < thresholds.rho {
        LimitTag::Bounded
    } else {
        LimitTag::Inconclusive
    };
    Ok(LimitVerdict {
        tag,
        first,
        last,
        min,
        max,
        eventually_nonincreasing,
        eventually_nondecreasing,
        range_ratio,
        growth_ratio,
    })
}

/// Index where the longest monotone run covering the tail begins.
fn monotone_suffix_start(series: &[f64], ok: impl Fn(f64, f64) -> bool) -> usize {
    let mut start = series.len() - 1;
    while start > 0 && ok(series[start - 1], series[start]) {
        start -= 1;
    }
    start
}

/// Replicate budget and seed for the optional Monte Carlo columns.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct McSettings {
    pub replicates: u64,
    pub seed: u64,
}

/// Full description of one experiment run.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub scenario: Scenario,
    pub calibration: SelectorCalibration,
    pub sequence: Option<AlternativeSequence>,
    pub design: DesignSpec,
    pub n_grid: Vec<u64>,
    pub beta_grid: BetaGrid,
    pub deltas: Vec<f64>,
    pub mc: Option<McSettings>,
    pub thresholds: LimitThresholds,
}

impl ScenarioConfig {
    /// Canonical parameters for each scenario: threshold fraction 1/2,
    /// overshoot 1, root-n rate 2, level 0.05, log rate 1, decade grids to
    /// 1e8 (1e4 for the fixed-level sup scan), 1000 distance pairs, shifts
    /// {0.5, 1, 2, 4}.
    pub fn preset(scenario: Scenario) -> ScenarioConfig {
        let bic = SelectorCalibration::consistent_log(1.0).expect("preset calibration");
        let design = DesignSpec::constant_one();
        let wide = parse_n_grid("100:100000000:1").expect("preset grid");
        let base = ScenarioConfig {
            scenario,
            calibration: bic,
            sequence: None,
            design,
            n_grid: wide,
            beta_grid: BetaGrid::standard(),
            deltas: Vec::new(),
            mc: None,
            thresholds: LimitThresholds::relaxed_for_grids(),
        };
        match scenario {
            Scenario::Yang => ScenarioConfig {
                sequence: Some(AlternativeSequence::yang(0.5, bic).expect("preset sequence")),
                ..base
            },
            Scenario::Boundary => ScenarioConfig {
                sequence: Some(AlternativeSequence::boundary(bic).expect("preset sequence")),
                ..base
            },
            Scenario::Perfect => ScenarioConfig {
                sequence: Some(AlternativeSequence::perfect(1.0, bic).expect("preset sequence")),
                ..base
            },
            Scenario::Contiguous => ScenarioConfig {
                sequence: Some(AlternativeSequence::contiguous(2.0).expect("preset sequence")),
                ..base
            },
            Scenario::AicBounded => ScenarioConfig {
                calibration: SelectorCalibration::fixed_level(0.05).expect("preset calibration"),
                n_grid: parse_n_grid("100:10000:1").expect("preset grid"),
                ..base
            },
            Scenario::BicDiverges => base,
            Scenario::DistanceCheck => ScenarioConfig {
                n_grid: Vec::new(),
                mc: Some(McSettings {
                    replicates: 1000,
                    seed: 1729,
                }),
                ..base
            },
            Scenario::Lemma1Attain => ScenarioConfig {
                n_grid: Vec::new(),
                deltas: vec![0.5, 1.0, 2.0, 4.0],
                ..base
            },
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.calibration.validate()?;
        self.design.validate()?;
        self.thresholds.validate()?;
        if let Some(seq) = &self.sequence {
            seq.validate()?;
        }
        if let Some(mc) = &self.mc {
            mc::check_replicates(mc.replicates)?;
        }
        match self.scenario {
            Scenario::Yang
            | Scenario::Boundary
            | Scenario::Perfect
            | Scenario::Contiguous => {
                self.require_matching_sequence()?;
                self.require_sweep_grid()?;
                self.require_no_deltas()?;
            }
            Scenario::AicBounded | Scenario::BicDiverges => {
                if self.sequence.is_some() {
                    return Err(Error::Config(
                        "sup scans take no drift sequence; remove it".into(),
                    ));
                }
                self.require_sweep_grid()?;
                self.require_no_deltas()?;
            }
            Scenario::DistanceCheck => {
                if self.mc.is_none() {
                    return Err(Error::Config(
                        "distance_check needs mc settings: replicates = pair count, plus a seed"
                            .into(),
                    ));
                }
                self.require_no_sweep_params()?;
                self.require_no_deltas()?;
            }
            Scenario::Lemma1Attain => {
                self.require_no_sweep_params()?;
                if self.mc.is_some() {
                    return Err(Error::Config(
                        "lemma1_attain is analytic; remove the mc settings".into(),
                    ));
                }
                if self.deltas.is_empty() {
                    return Err(Error::Config(
                        "lemma1_attain needs at least one shift delta".into(),
                    ));
                }
                for &d in &self.deltas {
                    if !(d.is_finite() && d > 0.0) {
                        return Err(Error::OutOfRange {
                            what: "shift delta",
                            constraint: "> 0 and finite",
                            value: d,
                        });
                    }
                }
            }
        }
        Ok(())
    }

    fn require_matching_sequence(&self) -> Result<()> {
        let Some(seq) = &self.sequence else {
            return Err(Error::Config(format!(
                "scenario {} needs its drift sequence",
                self.scenario.name()
            )));
        };
        let matches = matches!(
            (self.scenario, seq),
            (Scenario::Yang, AlternativeSequence::Yang { .. })
                | (Scenario::Boundary, AlternativeSequence::Boundary { .. })
                | (Scenario::Perfect, AlternativeSequence::Perfect { .. })
                | (Scenario::Contiguous, AlternativeSequence::Contiguous { .. })
        );
        if !matches {
            return Err(Error::Config(format!(
                "scenario {} got a {} sequence",
                self.scenario.name(),
                seq.family_name()
            )));
        }
        Ok(())
    }

    fn require_sweep_grid(&self) -> Result<()> {
        if self.n_grid.len() < 3 {
            return Err(Error::GridTooSmall {
                got: self.n_grid.len(),
            });
        }
        for pair in self.n_grid.windows(2) {
            if pair[0] >= pair[1] {
                return Err(Error::Config(format!(
                    "n grid must be strictly increasing; {} then {}",
                    pair[0], pair[1]
                )));
            }
        }
        let first = self.n_grid[0];
        if first < 2 {
            return Err(Error::SampleTooSmall(first));
        }
        let last = *self.n_grid.last().expect("nonempty");
        if last > MAX_ANALYTIC_N {
            return Err(Error::Config(format!(
                "n grid tops out at {MAX_ANALYTIC_N}, got {last}"
            )));
        }
        Ok(())
    }

    fn require_no_sweep_params(&self) -> Result<()> {
        if !self.n_grid.is_empty() {
            return Err(Error::Config(format!(
                "scenario {} takes no n grid",
                self.scenario.name()
            )));
        }
        if self.sequence.is_some() {
            return Err(Error::Config(format!(
                "scenario {} takes no drift sequence",
                self.scenario.name()
            )));
        }
        Ok(())
    }

    fn require_no_deltas(&self) -> Result<()> {
        if !self.deltas.is_empty() {
            return Err(Error::Config(format!(
                "scenario {} takes no shift deltas",
                self.scenario.name()
            )));
        }
        Ok(())
    }
}

/// Parses "min:max:points-per-decade" into a strictly increasing grid on
/// the decimal-log lattice anchored at min; max joins the grid whether or
/// not it falls on the lattice.
pub fn parse_n_grid(text: &str) -> Result<Vec<u64>> {
    let parts: Vec<&str> = text.split(':').collect();
    let [min, max, ppd] = parts[..] else {
        return Err(Error::Config(format!(
            "grid spec must be min:max:points-per-decade, got '{text}'"
        )));
    };
    let parse_u64 = |field: &str, what: &str| {
        field.parse::<u64>().map_err(|_| {
            Error::Config(format!("grid {what} must be a positive integer, got '{field}'"))
        })
    };
    let min = parse_u64(min, "minimum")?;
    let max = parse_u64(max, "maximum")?;
    let ppd = parse_u64(ppd, "points-per-decade")?;
    if min < 2 {
        return Err(Error::SampleTooSmall(min));
    }
    if max > MAX_ANALYTIC_N {
        return Err(Error::Config(format!(
            "grid maximum tops out at {MAX_ANALYTIC_N}, got {max}"
        )));
    }
    if min >= max {
        return Err(Error::Config(format!(
            "grid needs min < max, got {min}:{max}"
        )));
    }
    if ppd == 0 || ppd > 1000 {
        return Err(Error::Config(format!(
            "points-per-decade must lie in 1..=1000, got {ppd}"
        )));
    }
    let log_min = (min as f64).log10();
    let mut grid = Vec::new();
    for k in 0.. {
        let value = 10f64.powf(log_min + k as f64 / ppd as f64).round() as u64;
        if value > max {
            break;
        }
        if grid.last() != Some(&value) {
            grid.push(value);
        }
    }
    // The maximum always belongs to the grid, lattice point or not.
    if grid.last() != Some(&max) {
        grid.push(max);
    }
    if grid.len() < 3 {
        return Err(Error::GridTooSmall { got: grid.len() });
    }
    Ok(grid)
}

/// One grid row of a sweep. For sup scans the slope column holds the grid
/// argmax at that n and the risk columns are evaluated there.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub n: u64,
    pub beta_n: f64,
    pub d_n: f64,
    pub power: f64,
    pub accept_prob: f64,
    /// n * beta_n^2 * accept_prob.
    pub scaled_bias: f64,
    pub scaled_risk: f64,
    pub sup_scaled_risk: Option<f64>,
    pub mc_power: Option<f64>,
    pub mc_scaled_risk: Option<f64>,
    /// Standard error of the Monte Carlo scaled risk.
    pub mc_std_error: Option<f64>,
}

/// Sweep result: config echo, rows by grid index, and named series verdicts.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepTable {
    pub metadata: Vec<(String, String)>,
    pub rows: Vec<SweepRow>,
    pub verdicts: Vec<(String, LimitVerdict)>,
}

impl SweepTable {
    /// Column values for a named series; None entries are skipped.
    pub fn series(&self, name: &str) -> Result<Vec<f64>> {
        let pick: fn(&SweepRow) -> Option<f64> = match name {
            "power" => |r| Some(r.power),
            "accept_prob" => |r| Some(r.accept_prob),
            "scaled_bias" => |r| Some(r.scaled_bias),
            "scaled_risk" => |r| Some(r.scaled_risk),
            "sup_scaled_risk" => |r| r.sup_scaled_risk,
            "mc_power" => |r| r.mc_power,
            "mc_scaled_risk" => |r| r.mc_scaled_risk,
            _ => {
                return Err(Error::Config(format!(
                    "unknown series '{name}'; available: power, accept_prob, scaled_bias, \
                     scaled_risk, sup_scaled_risk, mc_power, mc_scaled_risk"
                )))
            }
        };
        let values: Vec<f64> = self.rows.iter().filter_map(pick).collect();
        if values.is_empty() {
            return Err(Error::Config(format!("series '{name}' has no values")));
        }
        Ok(values)
    }

    pub fn verdict(&self, name: &str) -> Option<&LimitVerdict> {
        self.verdicts
            .iter()
            .find(|(series, _)| series == name)
            .map(|(_, verdict)| verdict)
    }
}

/// One audited distance pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DistanceRow {
    pub pair: u64,
    pub beta: f64,
    pub sxx: f64,
    pub delta: f64,
    pub affinity: f64,
    pub hellinger_sq: f64,
    pub l1: f64,
    pub upper_affinity: f64,
    pub upper_hellinger: f64,
    pub chain_holds: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DistanceTable {
    pub metadata: Vec<(String, String)>,
    pub rows: Vec<DistanceRow>,
    pub all_hold: bool,
}

/// Gap attainment at one shift.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Lemma1Row {
    pub delta: f64,
    /// The midpoint threshold delta / 2.
    pub threshold: f64,
    pub gap_at_threshold: f64,
    pub half_l1: f64,
    /// Largest gap over the scanned threshold grid.
    pub sup_gap: f64,
    pub sup_argmax: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Lemma1Table {
    pub metadata: Vec<(String, String)>,
    pub rows: Vec<Lemma1Row>,
}

/// What a scenario produces: most sweep an n grid; the distance audit and
/// the gap demo have their own shapes.
#[derive(Debug, Clone, PartialEq)]
pub enum ScenarioOutput {
    Sweep(SweepTable),
    Distances(DistanceTable),
    Lemma1(Lemma1Table),
}

impl ScenarioOutput {
    pub fn as_sweep(&self) -> Option<&SweepTable> {
        match self {
            ScenarioOutput::Sweep(table) => Some(table),
            _ => None,
        }
    }
}

/// Runs one configured scenario. Grid rows are computed in parallel and
/// reported in grid order; Monte Carlo columns appear only when settings
/// are present and only at n up to [`MAX_MC_N`].
pub fn run_scenario(config: &ScenarioConfig) -> Result<ScenarioOutput> {
    config.validate()?;
    match config.scenario {
        Scenario::Yang | Scenario::Boundary | Scenario::Perfect | Scenario::Contiguous => {
            run_sequence_sweep(config).map(ScenarioOutput::Sweep)
        }
        Scenario::AicBounded | Scenario::BicDiverges => {
            run_sup_sweep(config).map(ScenarioOutput::Sweep)
        }
        Scenario::DistanceCheck => run_distance_check(config).map(ScenarioOutput::Distances),
        Scenario::Lemma1Attain => run_gap_attainment(config).map(ScenarioOutput::Lemma1),
    }
}

fn run_sequence_sweep(config: &ScenarioConfig) -> Result<SweepTable> {
    let seq = config.sequence.as_ref().expect("validated");
    let rows: Vec<SweepRow> = config
        .n_grid
        .par_iter()
        .map(|&n| {
            let beta = sequences::beta_at(seq, n, &config.design)?;
            sweep_row(config, n, beta, None)
        })
        .collect::<Result<_>>()?;
    let mut table = SweepTable {
        metadata: config_metadata(config),
        rows,
        verdicts: Vec::new(),
    };
    for name in ["power", "scaled_bias"] {
        let verdict = classify_limit(&table.series(name)?, &config.thresholds)?;
        table.verdicts.push((name.to_string(), verdict));
    }
    annotate_verdicts(&mut table);
    Ok(table)
}

fn run_sup_sweep(config: &ScenarioConfig) -> Result<SweepTable> {
    let rows: Vec<SweepRow> = config
        .n_grid
        .par_iter()
        .map(|&n| {
            let scan =
                risk::scaled_risk_sup(n, &config.calibration, &config.design, &config.beta_grid)?;
            sweep_row(config, n, scan.argmax_beta, Some(scan.sup_scaled_risk))
        })
        .collect::<Result<_>>()?;
    let mut table = SweepTable {
        metadata: config_metadata(config),
        rows,
        verdicts: Vec::new(),
    };
    let verdict = classify_limit(&table.series("sup_scaled_risk")?, &config.thresholds)?;
    table.verdicts.push(("sup_scaled_risk".to_string(), verdict));
    annotate_verdicts(&mut table);
    Ok(table)
}

fn sweep_row(
    config: &ScenarioConfig,
    n: u64,
    beta: f64,
    sup_scaled_risk: Option<f64>,
) -> Result<SweepRow> {
    let d_n = selector::threshold(&config.calibration, n, &config.design)?;
    let power = selector::power(beta, n, &config.calibration, &config.design)?.value();
    let accept_prob = selector::accept_prob(beta, n, &config.calibration, &config.design)?.value();
    let scaled_risk = risk::exact_risk(beta, n, &config.calibration, &config.design)?.scaled_risk;
    let (mc_power, mc_scaled_risk, mc_std_error) = mc_columns(config, beta, n)?;
    Ok(SweepRow {
        n,
        beta_n: beta,
        d_n,
        power,
        accept_prob,
        scaled_bias: n as f64 * beta * beta * accept_prob,
        scaled_risk,
        sup_scaled_risk,
        mc_power,
        mc_scaled_risk,
        mc_std_error,
    })
}

fn mc_columns(
    config: &ScenarioConfig,
    beta: f64,
    n: u64,
) -> Result<(Option<f64>, Option<f64>, Option<f64>)> {
    let Some(mc) = config.mc else {
        return Ok((None, None, None));
    };
    if n > MAX_MC_N {
        return Ok((None, None, None));
    }
    let power = selector::simulate_selection_prob(
        beta,
        n,
        &config.calibration,
        &config.design,
        mc.replicates,
        mc.seed,
    )?
    .value();
    let report = risk::mc_risk(
        beta,
        n,
        &config.calibration,
        &config.design,
        mc.replicates,
        mc.seed,
    )?;
    let scaled_se = n as f64 * report.mc_std_error.expect("monte carlo report carries its error");
    Ok((Some(power), Some(report.scaled_risk), Some(scaled_se)))
}

const PAIR_BETA_MAX: f64 = 5.0;
const PAIR_SXX_MIN: f64 = 1.0;
const PAIR_SXX_MAX: f64 = 1e4;

fn run_distance_check(config: &ScenarioConfig) -> Result<DistanceTable> {
    let mc = config.mc.expect("validated");
    let draws = mc::replicate_map(mc.seed, mc.replicates, |rng| {
        let beta = PAIR_BETA_MAX * rng.gen::<f64>();
        let sxx = PAIR_SXX_MIN + (PAIR_SXX_MAX - PAIR_SXX_MIN) * rng.gen::<f64>();
        (beta, sxx)
    });
    let rows: Vec<DistanceRow> = draws
        .par_iter()
        .enumerate()
        .map(|(index, &(beta, sxx))| {
            let pair = GaussianShiftPair::new(beta, sxx)?;
            let check = distance::check_inequality_chain(&pair);
            Ok(DistanceRow {
                pair: index as u64,
                beta,
                sxx,
                delta: pair.delta(),
                affinity: distance::hellinger_affinity(&pair),
                hellinger_sq: check.hellinger_sq,
                l1: check.l1,
                upper_affinity: check.upper_affinity,
                upper_hellinger: check.upper_hellinger,
                chain_holds: check.holds,
            })
        })
        .collect::<Result<_>>()?;
    let all_hold = rows.iter().all(|row| row.chain_holds);
    let mut metadata = config_metadata(config);
    metadata.push((
        "pair_ranges".to_string(),
        format!("beta in [0, {PAIR_BETA_MAX}), sxx in [{PAIR_SXX_MIN}, {PAIR_SXX_MAX})"),
    ));
    metadata.push(("all_hold".to_string(), all_hold.to_string()));
    Ok(DistanceTable {
        metadata,
        rows,
        all_hold,
    })
}

const GAP_SCAN_HALF_WIDTH: f64 = 2.0;
const GAP_SCAN_STEP: f64 = 1e-3;

fn run_gap_attainment(config: &ScenarioConfig) -> Result<Lemma1Table> {
    let rows: Vec<Lemma1Row> = config
        .deltas
        .iter()
        .map(|&delta| {
            let pair = GaussianShiftPair::new(delta, 1.0)?;
            let threshold = delta / 2.0;
            let gap_at_threshold = distance::lemma1_gap(&pair, threshold)?;
            let half_l1 = distance::l1_distance(&pair) / 2.0;
            let steps = (GAP_SCAN_HALF_WIDTH / GAP_SCAN_STEP).round() as i64;
            let mut sup_gap = f64::NEG_INFINITY;
            let mut sup_argmax = threshold;
            for k in -steps..=steps {
                let t = threshold + k as f64 * GAP_SCAN_STEP;
                let gap = distance::lemma1_gap(&pair, t)?;
                if gap > sup_gap {
                    sup_gap = gap;
                    sup_argmax = t;
                }
            }
            Ok(Lemma1Row {
                delta,
                threshold,
                gap_at_threshold,
                half_l1,
                sup_gap,
                sup_argmax,
            })
        })
        .collect::<Result<_>>()?;
    let mut metadata = config_metadata(config);
    metadata.push((
        "threshold_scan".to_string(),
        format!("delta/2 +- {GAP_SCAN_HALF_WIDTH} step {GAP_SCAN_STEP}"),
    ));
    Ok(Lemma1Table { metadata, rows })
}

fn config_metadata(config: &ScenarioConfig) -> Vec<(String, String)> {
    let mut meta = vec![
        ("scenario".to_string(), config.scenario.name().to_string()),
        (
            "calibration".to_string(),
            describe_calibration(&config.calibration),
        ),
        ("design".to_string(), describe_design(&config.design)),
    ];
    if let Some(seq) = &config.sequence {
        meta.push(("sequence".to_string(), describe_sequence(seq)));
    }
    if !config.n_grid.is_empty() {
        let grid: Vec<String> = config.n_grid.iter().map(u64::to_string).collect();
        meta.push(("n_grid".to_string(), grid.join(",")));
    }
    if matches!(
        config.scenario,
        Scenario::AicBounded | Scenario::BicDiverges
    ) {
        meta.push(("beta_grid".to_string(), config.beta_grid.describe()));
    }
    if !config.deltas.is_empty() {
        let deltas: Vec<String> = config.deltas.iter().map(f64::to_string).collect();
        meta.push(("deltas".to_string(), deltas.join(",")));
    }
    if let Some(mc) = config.mc {
        meta.push((
            "mc".to_string(),
            format!("replicates={} seed={}", mc.replicates, mc.seed),
        ));
    }
    meta.push((
        "limit_thresholds".to_string(),
        format!(
            "zeta_zero={} zeta_inf={} rho={}",
            config.thresholds.zeta_zero, config.thresholds.zeta_inf, config.thresholds.rho
        ),
    ));
    meta
}

fn annotate_verdicts(table: &mut SweepTable) {
    for (name, verdict) in &table.verdicts {
        table
            .metadata
            .push((format!("verdict.{name}"), verdict.tag.to_string()));
    }
}

pub fn describe_calibration(cal: &SelectorCalibration) -> String {
    match cal {
        SelectorCalibration::ConsistentLog { tau } => format!("consistent_log tau={tau}"),
        SelectorCalibration::FixedLevel { alpha } => format!("fixed_level alpha={alpha}"),
        SelectorCalibration::CustomPower { gamma } => format!("custom_power gamma={gamma}"),
    }
}

pub fn describe_sequence(seq: &AlternativeSequence) -> String {
    match seq {
        AlternativeSequence::Yang { b, calibration } => {
            format!("yang b={b} bound={}", describe_calibration(calibration))
        }
        AlternativeSequence::Boundary { calibration } => {
            format!("boundary bound={}", describe_calibration(calibration))
        }
        AlternativeSequence::Perfect {
            b_prime,
            calibration,
        } => format!(
            "perfect b_prime={b_prime} bound={}",
            describe_calibration(calibration)
        ),
        AlternativeSequence::Contiguous { r } => format!("contiguous r={r}"),
        AlternativeSequence::GenericRootN { coefficient } => match coefficient {
            RootNCoefficient::Power { exponent } => format!("generic c_n=n^{exponent}"),
            RootNCoefficient::Constant { value } => format!("generic c_n={value}"),
        },
    }
}

fn describe_design(design: &DesignSpec) -> String {
    match design.kind {
        crate::selector::DesignKind::ConstantOne => {
            format!("constant_one s_star={}", design.prediction_factor)
        }
        crate::selector::DesignKind::ScaledGrid => format!(
            "scaled kappa={} s_star={}",
            design.kappa, design.prediction_factor
        ),
    }
}

const SWEEP_HEADER: &str =
    "n,beta_n,d_n,power,accept_prob,scaled_bias,scaled_risk,sup_scaled_risk,\
     mc_power,mc_scaled_risk,mc_std_error";

/// 12 significant digits, the file format's precision contract.
fn fmt_value(x: f64) -> String {
    format!("{x:.11e}")
}

fn fmt_optional(x: Option<f64>) -> String {
    x.map(fmt_value).unwrap_or_default()
}

/// Renders any scenario output as CSV: "#" metadata lines, a complete
/// header, one row per record, 12 significant digits.
pub fn render_csv(output: &ScenarioOutput) -> String {
    match output {
        ScenarioOutput::Sweep(table) => render_sweep_csv(table),
        ScenarioOutput::Distances(table) => render_distance_csv(table),
        ScenarioOutput::Lemma1(table) => render_lemma1_csv(table),
    }
}

fn push_metadata(out: &mut String, metadata: &[(String, String)]) {
    for (key, value) in metadata {
        out.push_str(&format!("# {key} = {value}\n"));
    }
}

fn render_sweep_csv(table: &SweepTable) -> String {
    let mut out = String::new();
    push_metadata(&mut out, &table.metadata);
    out.push_str(SWEEP_HEADER);
    out.push('\n');
    for row in &table.rows {
        let fields = [
            row.n.to_string(),
            fmt_value(row.beta_n),
            fmt_value(row.d_n),
            fmt_value(row.power),
            fmt_value(row.accept_prob),
            fmt_value(row.scaled_bias),
            fmt_value(row.scaled_risk),
            fmt_optional(row.sup_scaled_risk),
            fmt_optional(row.mc_power),
            fmt_optional(row.mc_scaled_risk),
            fmt_optional(row.mc_std_error),
        ];
        out.push_str(&fields.join(","));
        out.push('\n');
    }
    out
}

fn render_distance_csv(table: &DistanceTable) -> String {
    let mut out = String::new();
    push_metadata(&mut out, &table.metadata);
    out.push_str(
        "pair,beta,sxx,delta,affinity,hellinger_sq,l1,upper_affinity,upper_hellinger,chain_holds",
    );
    out.push('\n');
    for row in &table.rows {
        let fields = [
            row.pair.to_string(),
            fmt_value(row.beta),
            fmt_value(row.sxx),
            fmt_value(row.delta),
            fmt_value(row.affinity),
            fmt_value(row.hellinger_sq),
            fmt_value(row.l1),
            fmt_value(row.upper_affinity),
            fmt_value(row.upper_hellinger),
            row.chain_holds.to_string(),
        ];
        out.push_str(&fields.join(","));
        out.push('\n');
    }
    out
}

fn render_lemma1_csv(table: &Lemma1Table) -> String {
    let mut out = String::new();
    push_metadata(&mut out, &table.metadata);
    out.push_str("delta,threshold,gap_at_threshold,half_l1,sup_gap,sup_argmax");
    out.push('\n');
    for row in &table.rows {
        let fields = [
            fmt_value(row.delta),
            fmt_value(row.threshold),
            fmt_value(row.gap_at_threshold),
            fmt_value(row.half_l1),
            fmt_value(row.sup_gap),
            fmt_value(row.sup_argmax),
        ];
        out.push_str(&fields.join(","));
        out.push('\n');
    }
    out
}

/// Writes the CSV rendering to a file.
pub fn emit_csv(output: &ScenarioOutput, destination: &Path) -> Result<()> {
    write_text(destination, &render_csv(output))
}

/// Renders selected sweep series as plot data: "#" metadata, a "# columns:"
/// line, then one space-separated numeric row per grid point with log10 n
/// first. An empty selection takes every series with values.
pub fn render_plotdata(table: &SweepTable, series: &[String]) -> Result<String> {
    let all = [
        "power",
        "accept_prob",
        "scaled_bias",
        "scaled_risk",
        "sup_scaled_risk",
        "mc_power",
        "mc_scaled_risk",
    ];
    let selected: Vec<String> = if series.is_empty() {
        all.iter()
            .copied()
            .filter(|&name| table.series(name).is_ok())
            .map(String::from)
            .collect()
    } else {
        series.to_vec()
    };
    let mut columns: Vec<Vec<f64>> = Vec::new();
    for name in &selected {
        let values = table.series(name)?;
        if values.len() != table.rows.len() {
            return Err(Error::Config(format!(
                "series '{name}' is partial ({} of {} rows); plot data needs full columns",
                values.len(),
                table.rows.len()
            )));
        }
        columns.push(values);
    }
    let mut out = String::new();
    push_metadata(&mut out, &table.metadata);
    out.push_str(&format!("# columns: log10_n {}\n", selected.join(" ")));
    for (i, row) in table.rows.iter().enumerate() {
        let mut fields = vec![fmt_value((row.n as f64).log10())];
        for column in &columns {
            fields.push(fmt_value(column[i]));
        }
        out.push_str(&fields.join(" "));
        out.push('\n');
    }
    Ok(out)
}

pub fn emit_plotdata(table: &SweepTable, series: &[String], destination: &Path) -> Result<()> {
    write_text(destination, &render_plotdata(table, series)?)
}

fn write_text(destination: &Path, text: &str) -> Result<()> {
    fs::write(destination, text).map_err(|source| Error::Io {
        path: destination.display().to_string(),
        source,
    })
}

/// Parses a sweep CSV written by [`emit_csv`] back into a table. Verdict
/// annotations come back as metadata entries; the verdict list itself is
/// not reconstructed.
pub fn read_sweep_csv(path: &Path) -> Result<SweepTable> {
    let text = fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_sweep_csv(&text)
}

pub fn parse_sweep_csv(text: &str) -> Result<SweepTable> {
    let mut metadata = Vec::new();
    let mut lines = text.lines().peekable();
    while let Some(line) = lines.peek() {
        let Some(rest) = line.strip_prefix('#') else {
            break;
        };
        let entry = rest.trim();
        let (key, value) = entry.split_once(" = ").ok_or_else(|| {
            Error::Config(format!("metadata line without ' = ': '{line}'"))
        })?;
        metadata.push((key.to_string(), value.to_string()));
        lines.next();
    }
    let header = lines
        .next()
        .ok_or_else(|| Error::Config("missing header row".into()))?;
    if header != SWEEP_HEADER {
        return Err(Error::Config(format!("unexpected header '{header}'")));
    }
    let mut rows = Vec::new();
    for line in lines {
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 11 {
            return Err(Error::Config(format!(
                "expected 11 fields, got {} in '{line}'",
                fields.len()
            )));
        }
        let n = fields[0]
            .parse::<u64>()
            .map_err(|_| Error::Config(format!("bad sample size '{}'", fields[0])))?;
        let required = |idx: usize| -> Result<f64> {
            fields[idx]
                .parse::<f64>()
                .map_err(|_| Error::Config(format!("bad value '{}'", fields[idx])))
        };
        let optional = |idx: usize| -> Result<Option<f64>> {
            if fields[idx].is_empty() {
                Ok(None)
            } else {
                required(idx).map(Some)
            }
        };
        rows.push(SweepRow {
            n,
            beta_n: required(1)?,
            d_n: required(2)?,
            power: required(3)?,
            accept_prob: required(4)?,
            scaled_bias: required(5)?,
            scaled_risk: required(6)?,
            sup_scaled_risk: optional(7)?,
            mc_power: optional(8)?,
            mc_scaled_risk: optional(9)?,
            mc_std_error: optional(10)?,
        });
    }
    Ok(SweepTable {
        metadata,
        rows,
        verdicts: Vec::new(),
    })
}
