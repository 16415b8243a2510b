//! Flat `key = value` configuration files: one parameter per line, `#`
//! comments, later keys override earlier ones. CLI flags override file
//! values. Preset parameter blocks round-trip through this format.

use std::collections::BTreeMap;

use crate::csvout::format_sig10;
use crate::presets::{CurveSpec, ExperimentPreset, Method, PresetKind, SweepVariable};
use crate::AppError;

/// Parsed key = value pairs, insertion-ordered by key.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ConfigMap {
    values: BTreeMap<String, String>,
}

impl ConfigMap {
    pub fn parse(text: &str) -> Result<Self, AppError> {
        let mut values = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = match raw.find('#') {
                Some(pos) => &raw[..pos],
                None => raw,
            }
            .trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                AppError::usage(format!("config line {}: expected key = value", lineno + 1))
            })?;
            values.insert(key.trim().to_string(), value.trim().to_string());
        }
        Ok(Self { values })
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(|s| s.as_str())
    }

    pub fn set(&mut self, key: &str, value: impl Into<String>) {
        self.values.insert(key.to_string(), value.into());
    }

    pub fn get_f64(&self, key: &str) -> Result<Option<f64>, AppError> {
        self.get(key)
            .map(|s| {
                s.parse::<f64>()
                    .map_err(|_| AppError::usage(format!("config key {key}: bad number '{s}'")))
            })
            .transpose()
    }

    pub fn get_u64(&self, key: &str) -> Result<Option<u64>, AppError> {
        self.get(key)
            .map(|s| {
                s.parse::<u64>()
                    .map_err(|_| AppError::usage(format!("config key {key}: bad integer '{s}'")))
            })
            .transpose()
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.values {
            out.push_str(&format!("{k} = {v}\n"));
        }
        out
    }
}

/// Serialize a preset's parameter block.
pub fn preset_to_config(preset: &ExperimentPreset) -> ConfigMap {
    let mut map = ConfigMap::default();
    map.set("preset", preset.name.clone());
    map.set("kind", preset.kind.key());
    map.set("sweep", preset.sweep.key());
    map.set(
        "grid",
        preset
            .grid
            .iter()
            .map(|v| format_sig10(*v))
            .collect::<Vec<_>>()
            .join(","),
    );
    map.set("threshold_db", format_sig10(preset.threshold_db));
    map.set("avg_snr_db", format_sig10(preset.avg_snr_db));
    map.set(
        "curves",
        preset
            .curves
            .iter()
            .map(|c| format!("{}:{}x{}", c.label, c.num_ris, c.num_elements))
            .collect::<Vec<_>>()
            .join(","),
    );
    map.set(
        "methods",
        preset
            .methods
            .iter()
            .map(|m| m.key())
            .collect::<Vec<_>>()
            .join(","),
    );
    map
}

/// Rebuild a preset from its parameter block.
pub fn preset_from_config(map: &ConfigMap) -> Result<ExperimentPreset, AppError> {
    let need = |key: &str| -> Result<&str, AppError> {
        map.get(key)
            .ok_or_else(|| AppError::usage(format!("config is missing key '{key}'")))
    };
    let grid = need("grid")?
        .split(',')
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .map_err(|_| AppError::usage(format!("bad grid entry '{s}'")))
        })
        .collect::<Result<Vec<f64>, AppError>>()?;
    let curves = need("curves")?
        .split(',')
        .map(|item| {
            let (label, kxn) = item
                .trim()
                .split_once(':')
                .ok_or_else(|| AppError::usage(format!("bad curve entry '{item}'")))?;
            let (k, n) = kxn
                .split_once('x')
                .ok_or_else(|| AppError::usage(format!("bad curve entry '{item}'")))?;
            Ok(CurveSpec {
                label: label.to_string(),
                num_ris: k
                    .parse()
                    .map_err(|_| AppError::usage(format!("bad curve K in '{item}'")))?,
                num_elements: n
                    .parse()
                    .map_err(|_| AppError::usage(format!("bad curve N in '{item}'")))?,
            })
        })
        .collect::<Result<Vec<CurveSpec>, AppError>>()?;
    let methods = need("methods")?
        .split(',')
        .map(|s| Method::parse(s.trim()))
        .collect::<Result<Vec<Method>, AppError>>()?;
    let preset = ExperimentPreset {
        name: need("preset")?.to_string(),
        kind: PresetKind::parse(need("kind")?)?,
        sweep: SweepVariable::parse(need("sweep")?)?,
        grid,
        threshold_db: map
            .get_f64("threshold_db")?
            .ok_or_else(|| AppError::usage("config is missing key 'threshold_db'"))?,
        avg_snr_db: map
            .get_f64("avg_snr_db")?
            .ok_or_else(|| AppError::usage("config is missing key 'avg_snr_db'"))?,
        curves,
        methods,
    };
    preset.validate()?;
    Ok(preset)
}
