use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use ris_cli::config::{preset_to_config, ConfigMap};
use ris_cli::csvout::CsvTable;
use ris_cli::fit_report::fit_report;
use ris_cli::presets::{
    builtin_preset, run_preset, summarize, CurveSpec, ExperimentPreset, Method, PresetKind,
    RunOptions, SweepVariable, ThetaMode,
};
use ris_cli::validate::{run_validation, ValidationLevel};
use ris_cli::AppError;
use ris_core::RelayPrelog;

/// Outage, diversity and capacity-scaling experiments for multi-RIS
/// cooperative links, with a seeded Monte Carlo simulator and a
/// decode-and-forward relay baseline.
#[derive(Parser)]
#[command(name = "risim", version, max_term_width = 100)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct CommonFlags {
    /// Number of surfaces (or relays for the baseline)
    #[arg(long, value_name = "K")]
    k: Option<usize>,

    /// Reflecting elements per surface
    #[arg(long, value_name = "N")]
    n: Option<usize>,

    /// Average SNR sweep in dB: start:step:stop, or a single value
    #[arg(long = "snr-db", value_name = "START:STEP:STOP")]
    snr_db: Option<String>,

    /// Outage threshold in dB
    #[arg(long = "threshold-db", value_name = "DB")]
    threshold_db: Option<f64>,

    /// Monte Carlo trials per point
    #[arg(long)]
    trials: Option<u64>,

    /// Base seed of the reproducible random streams
    #[arg(long)]
    seed: Option<u64>,

    /// Chernoff parameter in (0, 0.5), or "auto" to calibrate per point
    #[arg(long)]
    theta: Option<String>,

    /// Mixture order (1..=64)
    #[arg(long = "mg-order", value_name = "M")]
    mg_order: Option<usize>,

    /// Relay pre-log factor: 0.5 (half duplex) or 1.0
    #[arg(long = "relay-prelog", value_name = "0.5|1.0")]
    relay_prelog: Option<String>,

    /// Write the CSV here instead of standard output
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,

    /// Worker threads for the Monte Carlo loops (default: all cores)
    #[arg(long)]
    workers: Option<usize>,

    /// Flat key = value configuration file; flags override file values
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Outage probability sweep (Monte Carlo, exact and asymptotic)
    Outage(CommonFlags),
    /// Average sum-rate sweep (Monte Carlo, scaling law, relay baseline)
    Sumrate(CommonFlags),
    /// Run a named figure preset: fig2..fig6
    Preset {
        name: String,
        #[command(flatten)]
        flags: CommonFlags,
    },
    /// Report the fitted shape parameters and mixture quality for one N
    FitReport {
        #[command(flatten)]
        flags: CommonFlags,
        /// Empirical-CDF draws
        #[arg(long, default_value_t = 1_000_000)]
        draws: u64,
    },
    /// Run the cross-module invariant suite (quick: 1e5 trials, full: 1e7)
    Validate {
        #[arg(long, default_value = "quick")]
        level: String,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            // clap would exit with its own code; usage errors are code 1 here
            let is_help = matches!(
                err.kind(),
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion
            );
            let _ = err.print();
            return if is_help {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            };
        }
    };
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {}", err.message());
            ExitCode::from(err.exit_code())
        }
    }
}

fn dispatch(cli: Cli) -> Result<(), AppError> {
    match cli.command {
        Command::Outage(flags) => with_pool(&flags, |merged| {
            let preset = adhoc_preset(PresetKind::Outage, merged)?;
            emit_preset(&preset, merged)
        }),
        Command::Sumrate(flags) => with_pool(&flags, |merged| {
            let preset = adhoc_preset(PresetKind::SumRate, merged)?;
            emit_preset(&preset, merged)
        }),
        Command::Preset { name, flags } => with_pool(&flags, |merged| {
            let preset = builtin_preset(&name)?;
            emit_preset(&preset, merged)
        }),
        Command::FitReport { flags, draws } => with_pool(&flags, |merged| {
            let n = merged.n.unwrap_or(3);
            let order = merged.mg_order.unwrap_or(25);
            let seed = merged.seed;
            let report = fit_report(n, order, draws, seed)?;
            print!("{}", report.text);
            write_or_print(&report.terms, merged.out.as_deref())
        }),
        Command::Validate { level } => {
            let level = ValidationLevel::parse(&level)
                .ok_or_else(|| AppError::usage(format!("unknown level '{level}'")))?;
            let report = run_validation(level);
            print!("{}", report.render());
            if report.all_passed() {
                Ok(())
            } else {
                Err(AppError::Validation("validation checks failed".into()))
            }
        }
    }
}

/// Merge the config file under the flags, build the worker pool, and run.
fn with_pool(
    flags: &CommonFlags,
    body: impl FnOnce(&MergedFlags) -> Result<(), AppError> + Send,
) -> Result<(), AppError> {
    let merged = MergedFlags::resolve(flags)?;
    match merged.workers {
        Some(w) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(w)
                .build()
                .map_err(|e| AppError::usage(format!("cannot build worker pool: {e}")))?;
            pool.install(|| body(&merged))
        }
        None => body(&merged),
    }
}

/// Flags after applying the configuration file (flags win).
struct MergedFlags {
    k: Option<usize>,
    n: Option<usize>,
    snr_db: Option<String>,
    threshold_db: Option<f64>,
    trials: u64,
    seed: u64,
    theta: ThetaMode,
    mg_order: Option<usize>,
    relay_prelog: RelayPrelog,
    out: Option<PathBuf>,
    workers: Option<usize>,
}

impl MergedFlags {
    fn resolve(flags: &CommonFlags) -> Result<Self, AppError> {
        let file = match &flags.config {
            Some(path) => {
                let text = fs::read_to_string(path)
                    .map_err(|e| AppError::Io(format!("cannot read {}: {e}", path.display())))?;
                ConfigMap::parse(&text)?
            }
            None => ConfigMap::default(),
        };
        let theta_raw = flags
            .theta
            .clone()
            .or_else(|| file.get("theta").map(str::to_string));
        let theta = match theta_raw.as_deref() {
            None => ThetaMode::default(),
            Some("auto") => ThetaMode::Calibrated,
            Some(v) => {
                let t: f64 = v
                    .parse()
                    .map_err(|_| AppError::usage(format!("bad theta '{v}'")))?;
                ThetaMode::Fixed(t)
            }
        };
        let prelog_raw = flags
            .relay_prelog
            .clone()
            .or_else(|| file.get("relay_prelog").map(str::to_string));
        let relay_prelog = match prelog_raw.as_deref() {
            None | Some("0.5") => RelayPrelog::HalfDuplex,
            Some("1.0") | Some("1") => RelayPrelog::FullDuplex,
            Some(v) => return Err(AppError::usage(format!("bad relay prelog '{v}'"))),
        };
        Ok(Self {
            k: flags.k.or(file.get_u64("k")?.map(|v| v as usize)),
            n: flags.n.or(file.get_u64("n")?.map(|v| v as usize)),
            snr_db: flags
                .snr_db
                .clone()
                .or_else(|| file.get("snr_db").map(str::to_string)),
            threshold_db: match flags.threshold_db {
                Some(v) => Some(v),
                None => file.get_f64("threshold_db")?,
            },
            trials: flags.trials.or(file.get_u64("trials")?).unwrap_or(100_000),
            seed: flags.seed.or(file.get_u64("seed")?).unwrap_or(1),
            theta,
            mg_order: flags.mg_order.or(file.get_u64("mg_order")?.map(|v| v as usize)),
            relay_prelog,
            out: flags.out.clone(),
            workers: flags.workers.or(file.get_u64("workers")?.map(|v| v as usize)),
        })
    }

    fn run_options(&self) -> RunOptions {
        RunOptions {
            trials: self.trials,
            seed: self.seed,
            mg_order: self.mg_order.unwrap_or(25),
            theta: self.theta,
            relay_prelog: self.relay_prelog,
        }
    }
}

/// Parse "start:step:stop" (or a single value) into a dB grid.
fn parse_snr_grid(text: &str) -> Result<Vec<f64>, AppError> {
    let bad = || AppError::usage(format!("bad --snr-db '{text}' (expected start:step:stop)"));
    let parts: Vec<&str> = text.split(':').collect();
    match parts.as_slice() {
        [single] => Ok(vec![single.trim().parse().map_err(|_| bad())?]),
        [start, step, stop] => {
            let start: f64 = start.trim().parse().map_err(|_| bad())?;
            let step: f64 = step.trim().parse().map_err(|_| bad())?;
            let stop: f64 = stop.trim().parse().map_err(|_| bad())?;
            if step <= 0.0 || stop < start {
                return Err(bad());
            }
            let mut grid = Vec::new();
            let mut v = start;
            while v <= stop + 1e-9 {
                grid.push(v);
                v += step;
            }
            Ok(grid)
        }
        _ => Err(bad()),
    }
}

/// Build a one-curve preset from the flags for `outage` / `sumrate`.
fn adhoc_preset(kind: PresetKind, merged: &MergedFlags) -> Result<ExperimentPreset, AppError> {
    let k = merged.k.unwrap_or(1);
    let n = merged.n.unwrap_or(3);
    let grid = parse_snr_grid(merged.snr_db.as_deref().unwrap_or("0:5:40"))?;
    let threshold_db = merged.threshold_db.unwrap_or(20.0);
    let methods = match kind {
        PresetKind::Outage => vec![
            Method::Mc,
            Method::Exact,
            Method::Asymptotic,
            Method::RelayMc,
        ],
        PresetKind::SumRate => vec![Method::Mc, Method::Evt, Method::RelayMc],
    };
    let preset = ExperimentPreset {
        name: kind.key().to_string(),
        kind,
        sweep: SweepVariable::AvgSnrDb,
        grid,
        threshold_db,
        avg_snr_db: 10.0,
        curves: vec![CurveSpec {
            label: format!("k{k}n{n}"),
            num_ris: k,
            num_elements: n,
        }],
        methods,
    };
    preset.validate()?;
    Ok(preset)
}

fn emit_preset(preset: &ExperimentPreset, merged: &MergedFlags) -> Result<(), AppError> {
    let opts = merged.run_options();
    let table = run_preset(preset, &opts)?;
    eprint!("{}", summarize(preset, &table));
    eprintln!("parameters:\n{}", indent(&preset_to_config(preset).to_text()));
    write_or_print(&table, merged.out.as_deref())
}

fn indent(text: &str) -> String {
    text.lines()
        .map(|l| format!("  {l}"))
        .collect::<Vec<_>>()
        .join("\n")
}

fn write_or_print(table: &CsvTable, out: Option<&std::path::Path>) -> Result<(), AppError> {
    let csv = table.to_csv();
    match out {
        Some(path) => fs::write(path, csv)
            .map_err(|e| AppError::Io(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{csv}");
            Ok(())
        }
    }
}
