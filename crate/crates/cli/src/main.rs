//! `mslab`: command line front end for the model selection lab. Computes
//! selector power curves, post-selection risk, preset experiment sweeps with
//! limit verdicts, distribution-distance audits, and the midpoint-threshold
//! gap demo, emitting CSV or plain plot data.

mod checks;
mod config;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use mslab_core::distance::{check_inequality_chain, classify_separation};
use mslab_core::lab::{
    describe_calibration, describe_sequence, emit_csv, emit_plotdata, render_csv,
    render_plotdata, run_scenario,
};
use mslab_core::risk::{exact_risk, mc_risk};
use mslab_core::selector::{accept_prob, power, threshold};
use mslab_core::sequences::is_contiguous;
use mslab_core::{
    BetaGrid, DesignSpec, Error as CoreError, GaussianShiftPair, McSettings, RiskMethod,
    Scenario, ScenarioConfig, ScenarioOutput, SelectorCalibration, SeparationClass,
};

use config::{CalibrationKind, Overrides, SequenceKind};

const AFTER_HELP: &str = "\
Limit verdicts compare a sweep column against three cutoffs:
  TENDS_TO_ZERO   tail is nonincreasing and the last value < zeta-zero
  DIVERGES        tail is nondecreasing and the last value > zeta-inf x first
  BOUNDED         max/min over the column < rho
  INCONCLUSIVE    none of the above
Defaults are zeta-zero 1e-3, zeta-inf 100, rho 3; presets relax them to
0.02 / 3 / 3 for their decade grids. Override per run with --zeta-zero,
--zeta-inf, --rho.

Config files are flat `key = value` lines with `#` comments; keys mirror the
sweep flags (scenario, calibration, tau, alpha, gamma, sequence, b, bprime,
r, exponent, constant, grid, replicates, seed, zeta_zero, zeta_inf, rho,
kappa, prediction_factor, deltas, series). Flags win over file values.

Exit codes: 0 success, 2 invalid usage or config, 3 i/o failure,
4 a --assert check failed (nothing is written in that case).";

#[derive(Parser)]
#[command(
    name = "mslab",
    version,
    about = "Threshold model selection lab: power, risk, sweeps, distances",
    after_help = AFTER_HELP
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Selector power across a slope grid at fixed n.
    Power(PowerArgs),
    /// One post-selection risk report, exact or simulated.
    Risk(RiskArgs),
    /// Run an experiment scenario from a preset and/or config file.
    Sweep(SweepArgs),
    /// Separation and contiguity verdicts for a drift sequence.
    Classify(ClassifyArgs),
    /// Distance closed forms and the inequality chain audit.
    Distances(DistancesArgs),
    /// Midpoint-threshold gap attainment demo.
    Lemma1(Lemma1Args),
}

#[derive(Args)]
struct CalibrationFlags {
    /// Threshold family growing with n (bic), flat (aic), or polynomial (power).
    #[arg(long, value_enum, default_value = "bic")]
    calibration: CalibrationKind,
    /// Log rate tau for bic: d_n = sqrt(Sxx tau ln n).
    #[arg(long)]
    tau: Option<f64>,
    /// Level alpha for aic: d_n = z_{1-alpha} sqrt(Sxx).
    #[arg(long)]
    alpha: Option<f64>,
    /// Growth exponent gamma for power: d_n = sqrt(Sxx) n^gamma.
    #[arg(long)]
    gamma: Option<f64>,
}

impl CalibrationFlags {
    fn build(&self) -> Result<SelectorCalibration, CliError> {
        let o = Overrides {
            calibration: Some(self.calibration),
            tau: self.tau,
            alpha: self.alpha,
            gamma: self.gamma,
            ..Overrides::default()
        };
        config::rebuild_calibration(SelectorCalibration::consistent_log(1.0).unwrap(), &o)
            .map_err(CliError::Config)
    }
}

#[derive(Args)]
struct PowerArgs {
    /// Sample size.
    #[arg(long)]
    n: u64,
    /// Single slope; omit for the standard slope grid at this n.
    #[arg(long)]
    beta: Option<f64>,
    #[command(flatten)]
    calibration: CalibrationFlags,
    /// Write here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Check `field op value` after the run; exit 4 on failure. Repeatable.
    #[arg(long = "assert", value_name = "CHECK")]
    asserts: Vec<String>,
}

#[derive(Args)]
struct RiskArgs {
    /// True slope.
    #[arg(long)]
    beta: f64,
    /// Sample size.
    #[arg(long)]
    n: u64,
    #[command(flatten)]
    calibration: CalibrationFlags,
    /// Estimate by simulation with this many replicates instead of the
    /// closed form.
    #[arg(long)]
    replicates: Option<u64>,
    /// Simulation seed.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Check `field op value` after the run; exit 4 on failure. Repeatable.
    #[arg(long = "assert", value_name = "CHECK")]
    asserts: Vec<String>,
}

#[derive(Args)]
struct SweepArgs {
    /// Scenario preset: yang, boundary, perfect, contiguous, aic_bounded,
    /// bic_diverges, distance_check, lemma1_attain.
    #[arg(long)]
    preset: Option<String>,
    /// Flat `key = value` config file; flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Replace the preset's threshold family.
    #[arg(long, value_enum)]
    calibration: Option<CalibrationKind>,
    /// Log rate for the bic calibration.
    #[arg(long)]
    tau: Option<f64>,
    /// Level for the aic calibration.
    #[arg(long)]
    alpha: Option<f64>,
    /// Exponent for the power calibration.
    #[arg(long)]
    gamma: Option<f64>,
    /// Replace the preset's drift family.
    #[arg(long, value_enum)]
    sequence: Option<SequenceKind>,
    /// Threshold fraction for yang (0 < b < 1).
    #[arg(long)]
    b: Option<f64>,
    /// Overshoot for perfect (bprime > 0).
    #[arg(long)]
    bprime: Option<f64>,
    /// Root-n rate for contiguous (r >= 0).
    #[arg(long)]
    r: Option<f64>,
    /// Generic drift exponent p in c_n = n^p.
    #[arg(long)]
    exponent: Option<f64>,
    /// Generic drift constant c in c_n = c.
    #[arg(long)]
    constant: Option<f64>,
    /// Sample grid as min:max:points-per-decade.
    #[arg(long)]
    grid: Option<String>,
    /// Monte Carlo replicates per grid point (turns on the mc columns).
    #[arg(long)]
    replicates: Option<u64>,
    /// Simulation seed.
    #[arg(long)]
    seed: Option<u64>,
    /// TENDS_TO_ZERO cutoff on the last value.
    #[arg(long = "zeta-zero")]
    zeta_zero: Option<f64>,
    /// DIVERGES cutoff on last/first.
    #[arg(long = "zeta-inf")]
    zeta_inf: Option<f64>,
    /// BOUNDED cutoff on max/min.
    #[arg(long)]
    rho: Option<f64>,
    /// Per-point design energy: Sxx = kappa n.
    #[arg(long)]
    kappa: Option<f64>,
    /// Prediction factor s* multiplying the risk.
    #[arg(long = "prediction-factor")]
    prediction_factor: Option<f64>,
    /// Series for plot data output (repeatable; default all complete ones).
    #[arg(long)]
    series: Vec<String>,
    /// Shifts for the lemma1_attain scenario (repeatable).
    #[arg(long = "delta")]
    deltas: Vec<f64>,
    /// Write here instead of stdout (a verdict summary is printed).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output layout.
    #[arg(long, value_enum, default_value = "csv")]
    format: OutputFormat,
    /// Check `field op value` after the run; exit 4 on failure. Repeatable.
    #[arg(long = "assert", value_name = "CHECK")]
    asserts: Vec<String>,
}

impl SweepArgs {
    fn to_overrides(&self) -> Result<Overrides, CliError> {
        let scenario = self.preset.as_deref().map(str::parse::<Scenario>).transpose()?;
        Ok(Overrides {
            scenario,
            calibration: self.calibration,
            tau: self.tau,
            alpha: self.alpha,
            gamma: self.gamma,
            sequence: self.sequence,
            b: self.b,
            bprime: self.bprime,
            r: self.r,
            exponent: self.exponent,
            constant: self.constant,
            grid: self.grid.clone(),
            replicates: self.replicates,
            seed: self.seed,
            zeta_zero: self.zeta_zero,
            zeta_inf: self.zeta_inf,
            rho: self.rho,
            kappa: self.kappa,
            prediction_factor: self.prediction_factor,
            deltas: (!self.deltas.is_empty()).then(|| self.deltas.clone()),
            series: (!self.series.is_empty()).then(|| self.series.clone()),
        })
    }
}

#[derive(Args)]
struct ClassifyArgs {
    /// Drift family to classify.
    #[arg(long, value_enum)]
    sequence: SequenceKind,
    /// Threshold fraction for yang (0 < b < 1).
    #[arg(long)]
    b: Option<f64>,
    /// Overshoot for perfect (bprime > 0).
    #[arg(long)]
    bprime: Option<f64>,
    /// Root-n rate for contiguous (r >= 0).
    #[arg(long)]
    r: Option<f64>,
    /// Generic drift exponent p in c_n = n^p.
    #[arg(long)]
    exponent: Option<f64>,
    /// Generic drift constant c in c_n = c.
    #[arg(long)]
    constant: Option<f64>,
    #[command(flatten)]
    calibration: CalibrationFlags,
    /// Write here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Check `field op value` after the run; exit 4 on failure. Repeatable.
    #[arg(long = "assert", value_name = "CHECK")]
    asserts: Vec<String>,
}

#[derive(Args)]
struct DistancesArgs {
    /// Randomized pairs to audit.
    #[arg(long, default_value_t = 1000)]
    replicates: u64,
    /// Audit seed.
    #[arg(long, default_value_t = 1729)]
    seed: u64,
    /// Slope for a single explicit pair (with --sxx).
    #[arg(long)]
    beta: Option<f64>,
    /// Design energy for a single explicit pair (with --beta).
    #[arg(long)]
    sxx: Option<f64>,
    /// Write here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Check `field op value` after the run; exit 4 on failure. Repeatable.
    #[arg(long = "assert", value_name = "CHECK")]
    asserts: Vec<String>,
}

#[derive(Args)]
struct Lemma1Args {
    /// Standardized shifts to demonstrate (repeatable; default 0.5 1 2 4).
    #[arg(long = "delta")]
    deltas: Vec<f64>,
    /// Write here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Check `field op value` after the run; exit 4 on failure. Repeatable.
    #[arg(long = "assert", value_name = "CHECK")]
    asserts: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Csv,
    Plotdata,
}

#[derive(Debug)]
enum CliError {
    Config(String),
    Io(String),
    Check(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Io(_) => 3,
            CliError::Check(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Config(m) | CliError::Io(m) | CliError::Check(m) => m,
        }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::Io { .. } => CliError::Io(e.to_string()),
            other => CliError::Config(other.to_string()),
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Power(args) => run_power(args),
        Command::Risk(args) => run_risk(args),
        Command::Sweep(args) => run_sweep(args),
        Command::Classify(args) => run_classify(args),
        Command::Distances(args) => run_distances(args),
        Command::Lemma1(args) => run_lemma1(args),
    }
}

/// 12 significant digits, matching the CSV contract.
fn fmt(x: f64) -> String {
    format!("{x:.11e}")
}

fn deliver(text: &str, out: Option<&Path>) -> Result<(), CliError> {
    match out {
        None => {
            print!("{text}");
            Ok(())
        }
        Some(path) => std::fs::write(path, text)
            .map_err(|e| CliError::Io(format!("i/o failure on {}: {e}", path.display()))),
    }
}

fn enforce(asserts: &[String], ctx: &checks::Context) -> Result<(), CliError> {
    match checks::run_checks(asserts, ctx) {
        Err(message) => Err(CliError::Config(message)),
        Ok(Some(failure)) => Err(CliError::Check(format!(
            "check '{}' failed: {}",
            failure.check, failure.actual
        ))),
        Ok(None) => Ok(()),
    }
}

fn run_power(args: PowerArgs) -> Result<(), CliError> {
    let cal = args.calibration.build()?;
    let design = DesignSpec::constant_one();
    let d_n = threshold(&cal, args.n, &design)?;
    let betas = match args.beta {
        Some(beta) => vec![beta],
        None => BetaGrid::standard().materialize(args.n, &cal, &design)?,
    };

    let mut text = format!(
        "# command = power\n# n = {}\n# calibration = {}\n# d_n = {}\n",
        args.n,
        describe_calibration(&cal),
        fmt(d_n)
    );
    text.push_str("beta,power,accept_prob\n");
    let mut rows = Vec::with_capacity(betas.len());
    for &beta in &betas {
        let p = power(beta, args.n, &cal, &design)?.value();
        let a = accept_prob(beta, args.n, &cal, &design)?.value();
        text.push_str(&format!("{},{},{}\n", fmt(beta), fmt(p), fmt(a)));
        rows.push((beta, p, a));
    }

    let mut ctx = checks::Context::default();
    ctx.push_num("n", args.n as f64);
    ctx.push_num("d_n", d_n);
    ctx.push_num("rows", rows.len() as f64);
    if let [(beta, p, a)] = rows.as_slice() {
        ctx.push_num("beta", *beta);
        ctx.push_num("power", *p);
        ctx.push_num("accept_prob", *a);
    }
    if let (Some(first), Some(last)) = (rows.first(), rows.last()) {
        ctx.push_num("first.beta", first.0);
        ctx.push_num("first.power", first.1);
        ctx.push_num("first.accept_prob", first.2);
        ctx.push_num("last.beta", last.0);
        ctx.push_num("last.power", last.1);
        ctx.push_num("last.accept_prob", last.2);
    }
    enforce(&args.asserts, &ctx)?;
    deliver(&text, args.out.as_deref())
}

fn run_risk(args: RiskArgs) -> Result<(), CliError> {
    let cal = args.calibration.build()?;
    let design = DesignSpec::constant_one();
    let report = match args.replicates {
        None => exact_risk(args.beta, args.n, &cal, &design)?,
        Some(replicates) => mc_risk(args.beta, args.n, &cal, &design, replicates, args.seed)?,
    };
    let method = match report.method {
        RiskMethod::Exact => "exact",
        RiskMethod::MonteCarlo => "monte_carlo",
    };

    let mut text = format!("# command = risk\n# calibration = {}\n", describe_calibration(&cal));
    text.push_str(&format!("beta = {}\n", fmt(report.beta)));
    text.push_str(&format!("n = {}\n", report.n));
    text.push_str(&format!("method = {method}\n"));
    text.push_str(&format!("accept_prob = {}\n", fmt(report.accept_prob)));
    text.push_str(&format!("term_estimation = {}\n", fmt(report.term_estimation)));
    text.push_str(&format!("term_bias = {}\n", fmt(report.term_bias)));
    text.push_str(&format!("risk = {}\n", fmt(report.risk)));
    text.push_str(&format!("scaled_risk = {}\n", fmt(report.scaled_risk)));
    if let Some(se) = report.mc_std_error {
        text.push_str(&format!("mc_std_error = {}\n", fmt(se)));
    }

    let mut ctx = checks::Context::default();
    ctx.push_num("beta", report.beta);
    ctx.push_num("n", report.n as f64);
    ctx.push_text("method", method);
    ctx.push_num("accept_prob", report.accept_prob);
    ctx.push_num("term_estimation", report.term_estimation);
    ctx.push_num("term_bias", report.term_bias);
    ctx.push_num("risk", report.risk);
    ctx.push_num("scaled_risk", report.scaled_risk);
    if let Some(se) = report.mc_std_error {
        ctx.push_num("mc_std_error", se);
    }
    enforce(&args.asserts, &ctx)?;
    deliver(&text, args.out.as_deref())
}

fn run_sweep(args: SweepArgs) -> Result<(), CliError> {
    let mut merged = Overrides::default();
    if let Some(path) = &args.config {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Io(format!("i/o failure on {}: {e}", path.display())))?;
        merged = config::parse_file(&text).map_err(CliError::Config)?;
    }
    merged = merged.layer(args.to_overrides()?);

    let scenario = merged.scenario.ok_or_else(|| {
        CliError::Config(
            "nothing to run; pass --preset <scenario> or --config <file> with scenario = <name>"
                .to_string(),
        )
    })?;
    let mut config = ScenarioConfig::preset(scenario);
    config::apply(&mut config, &merged).map_err(CliError::Config)?;
    config.validate()?;

    let output = run_scenario(&config)?;
    let series = merged.series.unwrap_or_default();
    enforce(&args.asserts, &output_context(&output))?;

    match (&args.out, args.format) {
        (None, OutputFormat::Csv) => print!("{}", render_csv(&output)),
        (None, OutputFormat::Plotdata) => {
            let table = sweep_table(&output)?;
            print!("{}", render_plotdata(table, &series)?);
        }
        (Some(path), OutputFormat::Csv) => {
            emit_csv(&output, path)?;
            print_summary(&output, path);
        }
        (Some(path), OutputFormat::Plotdata) => {
            let table = sweep_table(&output)?;
            emit_plotdata(table, &series, path)?;
            print_summary(&output, path);
        }
    }
    Ok(())
}

fn sweep_table(output: &ScenarioOutput) -> Result<&mslab_core::SweepTable, CliError> {
    output.as_sweep().ok_or_else(|| {
        CliError::Config(
            "plot data needs an n-grid sweep; this scenario emits csv only".to_string(),
        )
    })
}

fn print_summary(output: &ScenarioOutput, path: &Path) {
    match output {
        ScenarioOutput::Sweep(table) => {
            println!("wrote {} ({} rows)", path.display(), table.rows.len());
            for (name, verdict) in &table.verdicts {
                println!("verdict.{name} = {}", verdict.tag);
            }
        }
        ScenarioOutput::Distances(table) => {
            println!("wrote {} ({} pairs)", path.display(), table.rows.len());
            println!("all_hold = {}", table.all_hold);
        }
        ScenarioOutput::Lemma1(table) => {
            println!("wrote {} ({} shifts)", path.display(), table.rows.len());
            println!("worst_deviation = {:e}", lemma1_worst(table));
        }
    }
}

fn lemma1_worst(table: &mslab_core::lab::Lemma1Table) -> f64 {
    table
        .rows
        .iter()
        .map(|r| (r.gap_at_threshold - r.half_l1).abs())
        .fold(0.0, f64::max)
}

fn output_context(output: &ScenarioOutput) -> checks::Context {
    let mut ctx = checks::Context::default();
    match output {
        ScenarioOutput::Sweep(table) => {
            ctx.push_num("rows", table.rows.len() as f64);
            for (name, verdict) in &table.verdicts {
                ctx.push_text(format!("verdict.{name}"), verdict.tag.to_string());
            }
            if let (Some(first), Some(last)) = (table.rows.first(), table.rows.last()) {
                ctx.push_num("first.n", first.n as f64);
                ctx.push_num("last.n", last.n as f64);
            }
            for name in [
                "power",
                "accept_prob",
                "scaled_bias",
                "scaled_risk",
                "sup_scaled_risk",
                "mc_power",
                "mc_scaled_risk",
            ] {
                if let Ok(values) = table.series(name) {
                    ctx.push_num(format!("first.{name}"), values[0]);
                    ctx.push_num(format!("last.{name}"), *values.last().unwrap());
                }
            }
        }
        ScenarioOutput::Distances(table) => {
            ctx.push_num("rows", table.rows.len() as f64);
            ctx.push_flag("all_hold", table.all_hold);
        }
        ScenarioOutput::Lemma1(table) => {
            ctx.push_num("rows", table.rows.len() as f64);
            ctx.push_num("worst_deviation", lemma1_worst(table));
        }
    }
    ctx
}

fn run_classify(args: ClassifyArgs) -> Result<(), CliError> {
    let cal = args.calibration.build()?;
    let o = Overrides {
        sequence: Some(args.sequence),
        b: args.b,
        bprime: args.bprime,
        r: args.r,
        exponent: args.exponent,
        constant: args.constant,
        ..Overrides::default()
    };
    let seq = config::rebuild_sequence(None, &o, cal)
        .map_err(CliError::Config)?
        .expect("a family was given");
    let design = DesignSpec::constant_one();
    let separation = classify_separation(&seq, &design)?;
    let contiguous = is_contiguous(&seq, &design)?;
    let separation_name = match separation {
        SeparationClass::Strong => "STRONG",
        SeparationClass::Weak => "WEAK",
        SeparationClass::Well => "WELL",
    };

    let mut text = format!("# command = classify\nsequence = {}\n", describe_sequence(&seq));
    text.push_str(&format!("separation = {separation_name}\n"));
    text.push_str(&format!("contiguous = {contiguous}\n"));

    let mut ctx = checks::Context::default();
    ctx.push_text("family", seq.family_name());
    ctx.push_text("separation", separation_name);
    ctx.push_flag("contiguous", contiguous);
    enforce(&args.asserts, &ctx)?;
    deliver(&text, args.out.as_deref())
}

fn run_distances(args: DistancesArgs) -> Result<(), CliError> {
    match (args.beta, args.sxx) {
        (Some(beta), Some(sxx)) => {
            let pair = GaussianShiftPair::new(beta, sxx)?;
            let chain = check_inequality_chain(&pair);

            let mut text = format!(
                "# command = distances\nbeta = {}\nsxx = {}\ndelta = {}\n",
                fmt(pair.beta()),
                fmt(pair.sxx()),
                fmt(pair.delta())
            );
            text.push_str(&format!(
                "affinity = {}\nhellinger_sq = {}\nl1 = {}\n",
                fmt(mslab_core::distance::hellinger_affinity(&pair)),
                fmt(chain.hellinger_sq),
                fmt(chain.l1)
            ));
            text.push_str(&format!(
                "upper_affinity = {}\nupper_hellinger = {}\nholds = {}\n",
                fmt(chain.upper_affinity),
                fmt(chain.upper_hellinger),
                chain.holds
            ));

            let mut ctx = checks::Context::default();
            ctx.push_num("beta", pair.beta());
            ctx.push_num("sxx", pair.sxx());
            ctx.push_num("delta", pair.delta());
            ctx.push_num(
                "affinity",
                mslab_core::distance::hellinger_affinity(&pair),
            );
            ctx.push_num("hellinger_sq", chain.hellinger_sq);
            ctx.push_num("l1", chain.l1);
            ctx.push_num("upper_affinity", chain.upper_affinity);
            ctx.push_num("upper_hellinger", chain.upper_hellinger);
            ctx.push_flag("holds", chain.holds);
            enforce(&args.asserts, &ctx)?;
            deliver(&text, args.out.as_deref())
        }
        (None, None) => {
            let mut config = ScenarioConfig::preset(Scenario::DistanceCheck);
            config.mc = Some(McSettings {
                replicates: args.replicates,
                seed: args.seed,
            });
            config.validate()?;
            let output = run_scenario(&config)?;
            enforce(&args.asserts, &output_context(&output))?;
            match &args.out {
                None => {
                    print!("{}", render_csv(&output));
                    Ok(())
                }
                Some(path) => {
                    emit_csv(&output, path)?;
                    print_summary(&output, path);
                    Ok(())
                }
            }
        }
        _ => Err(CliError::Config(
            "--beta and --sxx go together; give both for a single pair or neither for the audit"
                .to_string(),
        )),
    }
}

fn run_lemma1(args: Lemma1Args) -> Result<(), CliError> {
    let mut config = ScenarioConfig::preset(Scenario::Lemma1Attain);
    if !args.deltas.is_empty() {
        config.deltas = args.deltas.clone();
    }
    config.validate()?;
    let output = run_scenario(&config)?;
    enforce(&args.asserts, &output_context(&output))?;
    match &args.out {
        None => {
            print!("{}", render_csv(&output));
            Ok(())
        }
        Some(path) => {
            emit_csv(&output, path)?;
            print_summary(&output, path);
            Ok(())
        }
    }
}
