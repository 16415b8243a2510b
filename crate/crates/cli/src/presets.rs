//! Figure-reproduction presets and the sweep engine behind the `outage`,
//! `sumrate` and `preset` subcommands.

use ris_core::channel::{mc_outage, mc_relay_outage, mc_relay_sum_rate, mc_sum_rate};
use ris_core::mixture::{build_mg, fit_kg, outage_asymptotic, outage_exact, MixtureGamma};
use ris_core::scaling::{calibrate_theta, growth_threshold, ChernoffParams};
use ris_core::{db_to_linear, RelayPrelog, RngSpec, SystemConfig};

use crate::csvout::{format_sig10, CsvTable};
use crate::AppError;

/// What a sweep varies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepVariable {
    AvgSnrDb,
    NumRis,
}

impl SweepVariable {
    pub fn key(self) -> &'static str {
        match self {
            SweepVariable::AvgSnrDb => "avg_snr_db",
            SweepVariable::NumRis => "num_ris",
        }
    }

    pub fn parse(s: &str) -> Result<Self, AppError> {
        match s {
            "avg_snr_db" => Ok(SweepVariable::AvgSnrDb),
            "num_ris" => Ok(SweepVariable::NumRis),
            other => Err(AppError::usage(format!("unknown sweep variable '{other}'"))),
        }
    }
}

/// Estimand family of a preset.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PresetKind {
    Outage,
    SumRate,
}

impl PresetKind {
    pub fn key(self) -> &'static str {
        match self {
            PresetKind::Outage => "outage",
            PresetKind::SumRate => "sumrate",
        }
    }

    pub fn parse(s: &str) -> Result<Self, AppError> {
        match s {
            "outage" => Ok(PresetKind::Outage),
            "sumrate" => Ok(PresetKind::SumRate),
            other => Err(AppError::usage(format!("unknown preset kind '{other}'"))),
        }
    }
}

/// Evaluation methods a preset can request.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Mc,
    Exact,
    Asymptotic,
    RelayMc,
    Evt,
}

impl Method {
    pub fn key(self) -> &'static str {
        match self {
            Method::Mc => "mc",
            Method::Exact => "exact",
            Method::Asymptotic => "asymptotic",
            Method::RelayMc => "relay_mc",
            Method::Evt => "evt",
        }
    }

    pub fn parse(s: &str) -> Result<Self, AppError> {
        match s {
            "mc" => Ok(Method::Mc),
            "exact" => Ok(Method::Exact),
            "asymptotic" => Ok(Method::Asymptotic),
            "relay_mc" => Ok(Method::RelayMc),
            "evt" => Ok(Method::Evt),
            other => Err(AppError::usage(format!("unknown method '{other}'"))),
        }
    }

    fn is_monte_carlo(self) -> bool {
        matches!(self, Method::Mc | Method::RelayMc)
    }
}

/// One curve of a preset: a (K, N) pair with a column label.
#[derive(Debug, Clone, PartialEq)]
pub struct CurveSpec {
    pub label: String,
    pub num_ris: usize,
    pub num_elements: usize,
}

impl CurveSpec {
    fn new(label: impl Into<String>, num_ris: usize, num_elements: usize) -> Self {
        Self {
            label: label.into(),
            num_ris,
            num_elements,
        }
    }
}

/// A complete sweep description.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentPreset {
    pub name: String,
    pub kind: PresetKind,
    pub sweep: SweepVariable,
    pub grid: Vec<f64>,
    /// Outage threshold in dB (used by outage presets).
    pub threshold_db: f64,
    /// Fixed average SNR in dB (used when the sweep runs over K).
    pub avg_snr_db: f64,
    pub curves: Vec<CurveSpec>,
    pub methods: Vec<Method>,
}

impl ExperimentPreset {
    pub fn validate(&self) -> Result<(), AppError> {
        if self.grid.is_empty() {
            return Err(AppError::usage("preset grid must be nonempty"));
        }
        if !self.grid.windows(2).all(|w| w[0] < w[1]) {
            return Err(AppError::usage("preset grid must be strictly increasing"));
        }
        if self.methods.is_empty() {
            return Err(AppError::usage("preset must list at least one method"));
        }
        if self.curves.is_empty() {
            return Err(AppError::usage("preset must list at least one curve"));
        }
        Ok(())
    }
}

fn db_grid(start: f64, step: f64, stop: f64) -> Vec<f64> {
    let mut g = Vec::new();
    let mut v = start;
    while v <= stop + 1e-9 {
        g.push(v);
        v += step;
    }
    g
}

/// The named presets matching the reference figure settings.
pub fn builtin_preset(name: &str) -> Result<ExperimentPreset, AppError> {
    let preset = match name {
        // outage vs average SNR, surfaces against relays, N = 3
        "fig2" => ExperimentPreset {
            name: "fig2".into(),
            kind: PresetKind::Outage,
            sweep: SweepVariable::AvgSnrDb,
            grid: db_grid(0.0, 5.0, 40.0),
            threshold_db: 20.0,
            avg_snr_db: 10.0,
            curves: vec![
                CurveSpec::new("k1", 1, 3),
                CurveSpec::new("k2", 2, 3),
                CurveSpec::new("k3", 3, 3),
            ],
            methods: vec![Method::Mc, Method::Exact, Method::Asymptotic, Method::RelayMc],
        },
        // outage vs average SNR for mixed (K, N)
        "fig3" => ExperimentPreset {
            name: "fig3".into(),
            kind: PresetKind::Outage,
            sweep: SweepVariable::AvgSnrDb,
            grid: db_grid(0.0, 5.0, 40.0),
            threshold_db: 20.0,
            avg_snr_db: 10.0,
            curves: vec![
                CurveSpec::new("k1n2", 1, 2),
                CurveSpec::new("k2n2", 2, 2),
                CurveSpec::new("k1n4", 1, 4),
                CurveSpec::new("k2n4", 2, 4),
            ],
            methods: vec![Method::Mc, Method::Exact, Method::Asymptotic],
        },
        // constant-product pairs sharing the diversity order K N = 6
        "fig4" => ExperimentPreset {
            name: "fig4".into(),
            kind: PresetKind::Outage,
            sweep: SweepVariable::AvgSnrDb,
            grid: db_grid(0.0, 5.0, 70.0),
            threshold_db: 20.0,
            avg_snr_db: 10.0,
            curves: vec![
                CurveSpec::new("k2n3", 2, 3),
                CurveSpec::new("k3n2", 3, 2),
                CurveSpec::new("k6n1", 6, 1),
                CurveSpec::new("k1n6", 1, 6),
            ],
            methods: vec![Method::Mc, Method::Exact, Method::Asymptotic],
        },
        // sum-rate vs average SNR at K = 5
        "fig5" => ExperimentPreset {
            name: "fig5".into(),
            kind: PresetKind::SumRate,
            sweep: SweepVariable::AvgSnrDb,
            grid: db_grid(0.0, 5.0, 30.0),
            threshold_db: 10.0,
            avg_snr_db: 10.0,
            curves: vec![CurveSpec::new("n5", 5, 5), CurveSpec::new("n10", 5, 10)],
            methods: vec![Method::Mc, Method::Evt, Method::RelayMc],
        },
        // sum-rate vs number of surfaces at 10 dB
        "fig6" => ExperimentPreset {
            name: "fig6".into(),
            kind: PresetKind::SumRate,
            sweep: SweepVariable::NumRis,
            grid: vec![2.0, 3.0, 5.0, 8.0, 10.0, 15.0, 20.0, 30.0, 50.0, 100.0],
            threshold_db: 10.0,
            avg_snr_db: 10.0,
            curves: vec![CurveSpec::new("n10", 0, 10), CurveSpec::new("n15", 0, 15)],
            methods: vec![Method::Mc, Method::Evt, Method::RelayMc],
        },
        other => {
            return Err(AppError::usage(format!(
                "unknown preset '{other}' (expected fig2..fig6)"
            )))
        }
    };
    preset.validate()?;
    Ok(preset)
}

/// Chernoff parameter selection for the EVT method.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ThetaMode {
    Fixed(f64),
    /// Calibrated per (N, avg_snr) against the Gaussian-equivalent CDF.
    Calibrated,
}

impl Default for ThetaMode {
    fn default() -> Self {
        ThetaMode::Fixed(ris_core::scaling::DEFAULT_THETA)
    }
}

/// Everything `run_preset` needs besides the preset itself.
#[derive(Debug, Clone, PartialEq)]
pub struct RunOptions {
    pub trials: u64,
    pub seed: u64,
    pub mg_order: usize,
    pub theta: ThetaMode,
    pub relay_prelog: RelayPrelog,
}

impl Default for RunOptions {
    fn default() -> Self {
        Self {
            trials: 100_000,
            seed: 1,
            mg_order: 25,
            theta: ThetaMode::default(),
            relay_prelog: RelayPrelog::HalfDuplex,
        }
    }
}

fn theta_for(mode: ThetaMode, num_elements: usize, avg_snr: f64) -> Result<ChernoffParams, AppError> {
    match mode {
        ThetaMode::Fixed(t) => {
            ChernoffParams::new(t).map_err(|e| AppError::usage(e.to_string()))
        }
        ThetaMode::Calibrated => Ok(calibrate_theta(num_elements, avg_snr)),
    }
}

/// Run a preset and return the CSV document. Deterministic for fixed
/// (preset, options), independent of the rayon worker count.
pub fn run_preset(preset: &ExperimentPreset, opts: &RunOptions) -> Result<CsvTable, AppError> {
    preset.validate()?;
    let threshold = db_to_linear(preset.threshold_db);

    let mut columns = vec!["sweep".to_string()];
    for curve in &preset.curves {
        for method in &preset.methods {
            columns.push(format!("{}_{}", method.key(), curve.label));
            if method.is_monte_carlo() {
                columns.push(format!("{}_{}_stderr", method.key(), curve.label));
            }
        }
    }
    let mut table = CsvTable::new(columns);

    // one mixture per distinct element count
    let mixture_for = |n: usize| -> Result<MixtureGamma, AppError> {
        let params = fit_kg(n).map_err(AppError::from_core)?;
        build_mg(&params, opts.mg_order).map_err(AppError::from_core)
    };

    for (gi, &sweep_value) in preset.grid.iter().enumerate() {
        let mut row: Vec<Option<f64>> = vec![Some(sweep_value)];
        for (ci, curve) in preset.curves.iter().enumerate() {
            let (num_ris, avg_snr_db) = match preset.sweep {
                SweepVariable::AvgSnrDb => (curve.num_ris, sweep_value),
                SweepVariable::NumRis => (sweep_value as usize, preset.avg_snr_db),
            };
            let avg_snr = db_to_linear(avg_snr_db);
            let cfg = SystemConfig::new(num_ris, curve.num_elements, avg_snr, threshold)
                .map_err(AppError::from_core)?;
            // disjoint stream per (curve, method slot); the grid index is the
            // trial-space dimension and stays inside the stream
            let base = RngSpec::new(opts.seed, ci as u64);
            for (mi, method) in preset.methods.iter().enumerate() {
                let stream = base.substream(1 + mi as u64).substream(gi as u64);
                match (preset.kind, method) {
                    (PresetKind::Outage, Method::Mc) => {
                        let r = mc_outage(&cfg, opts.trials, stream).map_err(AppError::from_core)?;
                        row.push(Some(r.estimate));
                        row.push(Some(r.std_error));
                    }
                    (PresetKind::Outage, Method::Exact) => {
                        let mg = mixture_for(curve.num_elements)?;
                        row.push(Some(outage_exact(&mg, threshold, avg_snr, num_ris)));
                    }
                    (PresetKind::Outage, Method::Asymptotic) => {
                        let mg = mixture_for(curve.num_elements)?;
                        row.push(Some(outage_asymptotic(&mg, threshold, avg_snr, num_ris)));
                    }
                    (PresetKind::Outage, Method::RelayMc) => {
                        let r = mc_relay_outage(&cfg, opts.trials, stream)
                            .map_err(AppError::from_core)?;
                        row.push(Some(r.estimate));
                        row.push(Some(r.std_error));
                    }
                    (PresetKind::SumRate, Method::Mc) => {
                        let r =
                            mc_sum_rate(&cfg, opts.trials, stream).map_err(AppError::from_core)?;
                        row.push(Some(r.estimate));
                        row.push(Some(r.std_error));
                    }
                    (PresetKind::SumRate, Method::RelayMc) => {
                        let r = mc_relay_sum_rate(&cfg, opts.trials, stream, opts.relay_prelog)
                            .map_err(AppError::from_core)?;
                        row.push(Some(r.estimate));
                        row.push(Some(r.std_error));
                    }
                    (PresetKind::SumRate, Method::Evt) => {
                        if num_ris < 1 {
                            row.push(None);
                        } else {
                            let params = theta_for(opts.theta, curve.num_elements, avg_snr)?;
                            let h =
                                growth_threshold(num_ris, curve.num_elements, avg_snr, params);
                            row.push(Some((1.0 + h).log2()));
                        }
                    }
                    _ => {
                        // method not meaningful for this estimand
                        row.push(None);
                        if method.is_monte_carlo() {
                            row.push(None);
                        }
                    }
                }
            }
        }
        table.push_row(row);
    }
    Ok(table)
}

/// Human-readable summary printed alongside the CSV: flags asymptote values
/// above one as pre-asymptotic.
pub fn summarize(preset: &ExperimentPreset, table: &CsvTable) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "preset {}: {} rows x {} columns ({} sweep)\n",
        preset.name,
        table.rows(),
        table.columns().len(),
        preset.sweep.key()
    ));
    for (ci, col) in table.columns().iter().enumerate() {
        if !col.starts_with("asymptotic_") {
            continue;
        }
        let flagged: Vec<String> = table
            .iter_rows()
            .filter(|r| r[ci].is_some_and(|v| v > 1.0))
            .map(|r| format_sig10(r[0].unwrap()))
            .collect();
        if !flagged.is_empty() {
            out.push_str(&format!(
                "note: {} exceeds 1 (pre-asymptotic) at sweep = {}\n",
                col,
                flagged.join(", ")
            ));
        }
    }
    out
}
