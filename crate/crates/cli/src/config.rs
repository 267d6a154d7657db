//! Flat key = value configuration merged with command-line flags, flags
//! winning. The same override set drives both sources, so a config file can
//! say everything a flag can.

use clap::ValueEnum;
use mslab_core::lab::parse_n_grid;
use mslab_core::{
    AlternativeSequence, DesignSpec, McSettings, RootNCoefficient, Scenario, ScenarioConfig,
    SelectorCalibration,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CalibrationKind {
    /// Log-growing threshold d_n = sqrt(Sxx tau ln n).
    Bic,
    /// Level-alpha threshold d_n = z_{1-alpha} sqrt(Sxx).
    Aic,
    /// Polynomial threshold d_n = sqrt(Sxx) n^gamma.
    Power,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SequenceKind {
    /// beta_n = b d_n / Sxx with 0 < b < 1.
    Yang,
    /// beta_n = d_n / Sxx, power exactly one half.
    Boundary,
    /// beta_n = (1 + bprime) d_n / Sxx.
    Perfect,
    /// beta_n = r / sqrt(n).
    Contiguous,
    /// beta_n = c_n / sqrt(n) with c_n = n^exponent or a constant.
    Generic,
}

/// Everything a config file or a sweep flag can set. None means "keep".
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub scenario: Option<Scenario>,
    pub calibration: Option<CalibrationKind>,
    pub tau: Option<f64>,
    pub alpha: Option<f64>,
    pub gamma: Option<f64>,
    pub sequence: Option<SequenceKind>,
    pub b: Option<f64>,
    pub bprime: Option<f64>,
    pub r: Option<f64>,
    pub exponent: Option<f64>,
    pub constant: Option<f64>,
    pub grid: Option<String>,
    pub replicates: Option<u64>,
    pub seed: Option<u64>,
    pub zeta_zero: Option<f64>,
    pub zeta_inf: Option<f64>,
    pub rho: Option<f64>,
    pub kappa: Option<f64>,
    pub prediction_factor: Option<f64>,
    pub deltas: Option<Vec<f64>>,
    pub series: Option<Vec<String>>,
}

impl Overrides {
    /// Lays `stronger` on top of self; its set fields win.
    pub fn layer(mut self, stronger: Overrides) -> Overrides {
        macro_rules! take {
            ($($field:ident),*) => {
                $(if stronger.$field.is_some() { self.$field = stronger.$field; })*
            };
        }
        take!(
            scenario, calibration, tau, alpha, gamma, sequence, b, bprime, r, exponent,
            constant, grid, replicates, seed, zeta_zero, zeta_inf, rho, kappa,
            prediction_factor, deltas, series
        );
        self
    }
}

/// Parses a flat config file: one `key = value` per line, `#` comments.
pub fn parse_file(text: &str) -> Result<Overrides, String> {
    let mut o = Overrides::default();
    for (index, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let lineno = index + 1;
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| format!("line {lineno}: expected key = value, got '{line}'"))?;
        let key = key.trim().to_ascii_lowercase().replace('-', "_");
        let value = value.trim();
        let fail = |what: &str| format!("line {lineno}: {key} needs {what}, got '{value}'");
        match key.as_str() {
            "scenario" => {
                o.scenario =
                    Some(value.parse::<Scenario>().map_err(|e| format!("line {lineno}: {e}"))?)
            }
            "calibration" => {
                o.calibration = Some(
                    CalibrationKind::from_str(value, true).map_err(|_| fail("bic, aic, or power"))?,
                )
            }
            "sequence" => {
                o.sequence = Some(
                    SequenceKind::from_str(value, true)
                        .map_err(|_| fail("yang, boundary, perfect, contiguous, or generic"))?,
                )
            }
            "tau" => o.tau = Some(value.parse().map_err(|_| fail("a number"))?),
            "alpha" => o.alpha = Some(value.parse().map_err(|_| fail("a number"))?),
            "gamma" => o.gamma = Some(value.parse().map_err(|_| fail("a number"))?),
            "b" => o.b = Some(value.parse().map_err(|_| fail("a number"))?),
            "bprime" => o.bprime = Some(value.parse().map_err(|_| fail("a number"))?),
            "r" => o.r = Some(value.parse().map_err(|_| fail("a number"))?),
            "exponent" => o.exponent = Some(value.parse().map_err(|_| fail("a number"))?),
            "constant" => o.constant = Some(value.parse().map_err(|_| fail("a number"))?),
            "grid" => o.grid = Some(value.to_string()),
            "replicates" => o.replicates = Some(value.parse().map_err(|_| fail("an integer"))?),
            "seed" => o.seed = Some(value.parse().map_err(|_| fail("an integer"))?),
            "zeta_zero" => o.zeta_zero = Some(value.parse().map_err(|_| fail("a number"))?),
            "zeta_inf" => o.zeta_inf = Some(value.parse().map_err(|_| fail("a number"))?),
            "rho" => o.rho = Some(value.parse().map_err(|_| fail("a number"))?),
            "kappa" => o.kappa = Some(value.parse().map_err(|_| fail("a number"))?),
            "prediction_factor" => {
                o.prediction_factor = Some(value.parse().map_err(|_| fail("a number"))?)
            }
            "deltas" => {
                let parsed: Result<Vec<f64>, _> = value
                    .split([' ', ',', '\t'])
                    .filter(|v| !v.is_empty())
                    .map(str::parse)
                    .collect();
                o.deltas = Some(parsed.map_err(|_| fail("numbers separated by spaces"))?);
            }
            "series" => {
                o.series = Some(
                    value
                        .split([' ', ',', '\t'])
                        .filter(|v| !v.is_empty())
                        .map(String::from)
                        .collect(),
                )
            }
            other => {
                return Err(format!(
                    "line {lineno}: unknown key '{other}'; known keys: scenario, calibration, \
                     tau, alpha, gamma, sequence, b, bprime, r, exponent, constant, grid, \
                     replicates, seed, zeta_zero, zeta_inf, rho, kappa, prediction_factor, \
                     deltas, series"
                ))
            }
        }
    }
    Ok(o)
}

/// Applies the merged overrides onto a preset scenario config.
pub fn apply(config: &mut ScenarioConfig, o: &Overrides) -> Result<(), String> {
    let calibration = rebuild_calibration(config.calibration, o)?;
    config.calibration = calibration;
    config.sequence = rebuild_sequence(config.sequence.as_ref(), o, calibration)?;

    if let Some(grid) = &o.grid {
        config.n_grid = parse_n_grid(grid).map_err(|e| e.to_string())?;
    }
    if o.kappa.is_some() || o.prediction_factor.is_some() {
        config.design = DesignSpec::scaled_grid(
            o.kappa.unwrap_or(config.design.kappa),
            o.prediction_factor.unwrap_or(config.design.prediction_factor),
        )
        .map_err(|e| e.to_string())?;
    }
    match (o.replicates, o.seed, &mut config.mc) {
        (Some(replicates), seed, mc) => {
            let seed = seed.or(mc.map(|m| m.seed)).unwrap_or(0);
            *mc = Some(McSettings { replicates, seed });
        }
        (None, Some(seed), Some(mc)) => mc.seed = seed,
        (None, Some(_), None) => {
            return Err("--seed has nothing to steer; add --replicates to turn on \
                 Monte Carlo columns"
                .to_string())
        }
        (None, None, _) => {}
    }
    if o.zeta_zero.is_some() || o.zeta_inf.is_some() || o.rho.is_some() {
        let mut t = config.thresholds;
        if let Some(z) = o.zeta_zero {
            t.zeta_zero = z;
        }
        if let Some(z) = o.zeta_inf {
            t.zeta_inf = z;
        }
        if let Some(rho) = o.rho {
            t.rho = rho;
        }
        t.validate().map_err(|e| e.to_string())?;
        config.thresholds = t;
    }
    if let Some(deltas) = &o.deltas {
        config.deltas = deltas.clone();
    }
    Ok(())
}

pub fn rebuild_calibration(
    current: SelectorCalibration,
    o: &Overrides,
) -> Result<SelectorCalibration, String> {
    let kind = o.calibration.unwrap_or(match current {
        SelectorCalibration::ConsistentLog { .. } => CalibrationKind::Bic,
        SelectorCalibration::FixedLevel { .. } => CalibrationKind::Aic,
        SelectorCalibration::CustomPower { .. } => CalibrationKind::Power,
    });
    let mismatch = |flag: &str, wanted: &str| {
        format!("--{flag} applies to the {wanted} calibration; pass --calibration {wanted} or drop it")
    };
    let built = match kind {
        CalibrationKind::Bic => {
            if o.alpha.is_some() {
                return Err(mismatch("alpha", "aic"));
            }
            if o.gamma.is_some() {
                return Err(mismatch("gamma", "power"));
            }
            let keep = match current {
                SelectorCalibration::ConsistentLog { tau } => tau,
                _ => 1.0,
            };
            SelectorCalibration::consistent_log(o.tau.unwrap_or(keep))
        }
        CalibrationKind::Aic => {
            if o.tau.is_some() {
                return Err(mismatch("tau", "bic"));
            }
            if o.gamma.is_some() {
                return Err(mismatch("gamma", "power"));
            }
            let keep = match current {
                SelectorCalibration::FixedLevel { alpha } => alpha,
                _ => 0.05,
            };
            SelectorCalibration::fixed_level(o.alpha.unwrap_or(keep))
        }
        CalibrationKind::Power => {
            if o.tau.is_some() {
                return Err(mismatch("tau", "bic"));
            }
            if o.alpha.is_some() {
                return Err(mismatch("alpha", "aic"));
            }
            let keep = match current {
                SelectorCalibration::CustomPower { gamma } => gamma,
                _ => 0.25,
            };
            SelectorCalibration::custom_power(o.gamma.unwrap_or(keep))
        }
    };
    built.map_err(|e| e.to_string())
}

pub fn rebuild_sequence(
    current: Option<&AlternativeSequence>,
    o: &Overrides,
    calibration: SelectorCalibration,
) -> Result<Option<AlternativeSequence>, String> {
    let kind = match (o.sequence, current) {
        (Some(kind), _) => kind,
        (None, Some(AlternativeSequence::Yang { .. })) => SequenceKind::Yang,
        (None, Some(AlternativeSequence::Boundary { .. })) => SequenceKind::Boundary,
        (None, Some(AlternativeSequence::Perfect { .. })) => SequenceKind::Perfect,
        (None, Some(AlternativeSequence::Contiguous { .. })) => SequenceKind::Contiguous,
        (None, Some(AlternativeSequence::GenericRootN { .. })) => SequenceKind::Generic,
        (None, None) => {
            for (set, flag) in [
                (o.b.is_some(), "b"),
                (o.bprime.is_some(), "bprime"),
                (o.r.is_some(), "r"),
                (o.exponent.is_some(), "exponent"),
                (o.constant.is_some(), "constant"),
            ] {
                if set {
                    return Err(format!(
                        "--{flag} describes a drift sequence, but this scenario has none; \
                         add --sequence"
                    ));
                }
            }
            return Ok(None);
        }
    };
    let stray = |flag: &str, family: &str, wanted: &str| {
        format!("--{flag} does not belong to the {family} family; it takes {wanted}")
    };
    let built = match kind {
        SequenceKind::Yang => {
            reject_params(o, &["bprime", "r", "exponent", "constant"], "yang", "--b", stray)?;
            let keep = match current {
                Some(AlternativeSequence::Yang { b, .. }) => *b,
                _ => 0.5,
            };
            AlternativeSequence::yang(o.b.unwrap_or(keep), calibration)
        }
        SequenceKind::Boundary => {
            reject_params(
                o,
                &["b", "bprime", "r", "exponent", "constant"],
                "boundary",
                "no parameter",
                stray,
            )?;
            AlternativeSequence::boundary(calibration)
        }
        SequenceKind::Perfect => {
            reject_params(o, &["b", "r", "exponent", "constant"], "perfect", "--bprime", stray)?;
            let keep = match current {
                Some(AlternativeSequence::Perfect { b_prime, .. }) => *b_prime,
                _ => 1.0,
            };
            AlternativeSequence::perfect(o.bprime.unwrap_or(keep), calibration)
        }
        SequenceKind::Contiguous => {
            reject_params(o, &["b", "bprime", "exponent", "constant"], "contiguous", "--r", stray)?;
            let keep = match current {
                Some(AlternativeSequence::Contiguous { r }) => *r,
                _ => 2.0,
            };
            AlternativeSequence::contiguous(o.r.unwrap_or(keep))
        }
        SequenceKind::Generic => {
            reject_params(
                o,
                &["b", "bprime", "r"],
                "generic",
                "--exponent or --constant",
                stray,
            )?;
            match (o.exponent, o.constant, current) {
                (Some(_), Some(_), _) => {
                    return Err(
                        "generic takes --exponent or --constant, not both".to_string()
                    )
                }
                (Some(p), None, _) => AlternativeSequence::generic_power(p),
                (None, Some(c), _) => AlternativeSequence::generic_constant(c),
                (
                    None,
                    None,
                    Some(AlternativeSequence::GenericRootN { coefficient }),
                ) => match coefficient {
                    RootNCoefficient::Power { exponent } => {
                        AlternativeSequence::generic_power(*exponent)
                    }
                    RootNCoefficient::Constant { value } => {
                        AlternativeSequence::generic_constant(*value)
                    }
                },
                (None, None, _) => {
                    return Err(
                        "generic needs --exponent (c_n = n^p) or --constant (c_n = c)".to_string()
                    )
                }
            }
        }
    };
    built.map(Some).map_err(|e| e.to_string())
}

fn reject_params(
    o: &Overrides,
    forbidden: &[&str],
    family: &str,
    wanted: &str,
    stray: impl Fn(&str, &str, &str) -> String,
) -> Result<(), String> {
    for flag in forbidden {
        let set = match *flag {
            "b" => o.b.is_some(),
            "bprime" => o.bprime.is_some(),
            "r" => o.r.is_some(),
            "exponent" => o.exponent.is_some(),
            "constant" => o.constant.is_some(),
            _ => false,
        };
        if set {
            return Err(stray(flag, family, wanted));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn file_values_parse_and_flags_win() {
        let file = parse_file(
            "# comment\nscenario = yang\ntau = 2\nb = 0.25\ngrid = 100:10000:1\n",
        )
        .unwrap();
        let flags = Overrides {
            tau: Some(3.0),
            ..Overrides::default()
        };
        let merged = file.layer(flags);
        assert_eq!(merged.scenario, Some(Scenario::Yang));
        assert_eq!(merged.tau, Some(3.0));
        assert_eq!(merged.b, Some(0.25));
    }

    #[test]
    fn unknown_keys_are_named() {
        let err = parse_file("betamax = 3\n").unwrap_err();
        assert!(err.contains("unknown key 'betamax'"), "{err}");
    }

    #[test]
    fn missing_equals_is_a_parse_error() {
        let err = parse_file("scenario yang\n").unwrap_err();
        assert!(err.contains("expected key = value"), "{err}");
    }

    #[test]
    fn applying_overrides_rebuilds_bound_sequences() {
        let mut config = ScenarioConfig::preset(Scenario::Yang);
        let o = Overrides {
            tau: Some(4.0),
            b: Some(0.25),
            ..Overrides::default()
        };
        apply(&mut config, &o).unwrap();
        assert_eq!(
            config.calibration,
            SelectorCalibration::consistent_log(4.0).unwrap()
        );
        match config.sequence.as_ref().unwrap() {
            AlternativeSequence::Yang { b, calibration } => {
                assert_eq!(*b, 0.25);
                assert_eq!(*calibration, config.calibration);
            }
            other => panic!("unexpected sequence {other:?}"),
        }
        config.validate().unwrap();
    }

    #[test]
    fn mismatched_parameter_flags_are_rejected() {
        let mut config = ScenarioConfig::preset(Scenario::Yang);
        let o = Overrides {
            alpha: Some(0.1),
            ..Overrides::default()
        };
        let err = apply(&mut config, &o).unwrap_err();
        assert!(err.contains("--alpha applies to the aic calibration"), "{err}");

        let o = Overrides {
            r: Some(2.0),
            ..Overrides::default()
        };
        let err = apply(&mut ScenarioConfig::preset(Scenario::Yang), &o).unwrap_err();
        assert!(err.contains("does not belong to the yang family"), "{err}");
    }

    #[test]
    fn seed_without_replicates_needs_existing_monte_carlo() {
        let mut config = ScenarioConfig::preset(Scenario::Yang);
        let o = Overrides {
            seed: Some(9),
            ..Overrides::default()
        };
        let err = apply(&mut config, &o).unwrap_err();
        assert!(err.contains("--seed has nothing to steer"), "{err}");

        let mut audit = ScenarioConfig::preset(Scenario::DistanceCheck);
        let o = Overrides {
            seed: Some(9),
            ..Overrides::default()
        };
        apply(&mut audit, &o).unwrap();
        assert_eq!(audit.mc.unwrap().seed, 9);
        assert_eq!(audit.mc.unwrap().replicates, 1000);
    }

    #[test]
    fn threshold_overrides_validate() {
        let mut config = ScenarioConfig::preset(Scenario::Yang);
        let o = Overrides {
            zeta_inf: Some(10.0),
            ..Overrides::default()
        };
        apply(&mut config, &o).unwrap();
        assert_eq!(config.thresholds.zeta_inf, 10.0);
        // An impossible cutoff is caught before any run.
        let o = Overrides {
            rho: Some(0.5),
            ..Overrides::default()
        };
        assert!(apply(&mut config, &o).is_err());
    }

    #[test]
    fn overridden_preset_still_runs() {
        let mut config = ScenarioConfig::preset(Scenario::Yang);
        let o = Overrides {
            grid: Some("100:100000:1".to_string()),
            ..Overrides::default()
        };
        apply(&mut config, &o).unwrap();
        config.validate().unwrap();
        let output = mslab_core::lab::run_scenario(&config).unwrap();
        let table = output.as_sweep().unwrap();
        assert_eq!(table.rows.len(), 4);
        assert!(table.verdict("power").is_some());
    }
}
