//! The `fit-report` subcommand: fitted shape parameters, mixture terms,
//! fit quality against a seeded empirical CDF, and moment errors.

use ris_core::channel::sample_cascade_amplitude;
use ris_core::mixture::{build_mg, cascade_fourth_moment, cascade_moments, fit_kg};
use ris_core::{RngSpec, TrialRng};

use crate::csvout::{format_sig10, CsvTable};
use crate::AppError;

pub struct FitReport {
    pub params: ris_core::KgParams,
    /// KS distance between the mixture CDF and the seeded empirical CDF.
    pub ks_distance: f64,
    pub mean_power_rel_err: f64,
    pub fourth_moment_rel_err: f64,
    pub text: String,
    pub terms: CsvTable,
}

pub fn fit_report(
    num_elements: usize,
    mg_order: usize,
    draws: u64,
    seed: u64,
) -> Result<FitReport, AppError> {
    let params = fit_kg(num_elements).map_err(AppError::from_core)?;
    let mg = build_mg(&params, mg_order).map_err(AppError::from_core)?;
    let moments = cascade_moments(num_elements);

    // seeded empirical single-branch SNR sample at unit average SNR
    let spec = RngSpec::new(seed, 0xF17);
    let mut snr: Vec<f64> = (0..draws)
        .map(|t| {
            let mut rng = TrialRng::new(spec, t);
            let a = sample_cascade_amplitude(num_elements, &mut rng);
            a * a
        })
        .collect();
    snr.sort_by(|a, b| a.partial_cmp(b).expect("finite"));

    let n = snr.len() as f64;
    let mut ks = 0.0f64;
    let mut emp_mean = 0.0;
    let mut emp_fourth = 0.0;
    for (i, &g) in snr.iter().enumerate() {
        let f = mg.cdf(g, 1.0);
        ks = ks
            .max((f - i as f64 / n).abs())
            .max((f - (i + 1) as f64 / n).abs());
        emp_mean += g;
        emp_fourth += g * g;
    }
    emp_mean /= n;
    emp_fourth /= n;

    let mean_err = (emp_mean - moments.mean_power).abs() / moments.mean_power;
    let fourth = cascade_fourth_moment(num_elements);
    let fourth_err = (emp_fourth - fourth).abs() / fourth;

    let mut text = String::new();
    text.push_str(&format!("fit report for N = {num_elements} elements\n"));
    text.push_str(&format!(
        "  shape_l = {}\n  shape_m = {}\n  mean_power = {}\n  xi = {}\n",
        format_sig10(params.shape_l),
        format_sig10(params.shape_m),
        format_sig10(params.mean_power),
        format_sig10(params.xi())
    ));
    text.push_str(&format!(
        "  mixture order = {mg_order}, draws = {draws}, seed = {seed}\n"
    ));
    text.push_str(&format!("  KS distance vs empirical CDF = {}\n", format_sig10(ks)));
    text.push_str(&format!(
        "  mean-power relative error = {}\n  fourth-moment relative error = {}\n",
        format_sig10(mean_err),
        format_sig10(fourth_err)
    ));

    let mut terms = CsvTable::new(vec![
        "term".into(),
        "weight".into(),
        "shape".into(),
        "rate".into(),
    ]);
    for (i, t) in mg.terms().iter().enumerate() {
        terms.push_row(vec![
            Some((i + 1) as f64),
            Some(t.weight),
            Some(t.shape),
            Some(t.rate),
        ]);
    }
    Ok(FitReport {
        params,
        ks_distance: ks,
        mean_power_rel_err: mean_err,
        fourth_moment_rel_err: fourth_err,
        text,
        terms,
    })
}
