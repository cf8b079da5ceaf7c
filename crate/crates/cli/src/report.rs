//! Result serialization: a flat CSV of sweep rows plus a JSON description
//! of the figure those rows would draw (panels, curves, axes), so a plotting
//! front-end needs no knowledge of the sweep structure.

use std::collections::BTreeMap;
use std::io::Write as _;
use std::path::Path;

use serde::Serialize;

use crate::errors::CliError;
use crate::experiment::{ExperimentResult, PointResult};

/// Column order is part of the output contract; downstream tooling indexes
/// by position as well as by header.
const CSV_HEADER: &str = "family,m,k,b,scenario,algorithm,snr_st_db,snr_th_db,gap_db,\
saturation_count,trials,failures,in_regime,matrix_mode";

fn algorithm_label(row: &PointResult) -> &'static str {
    use qcs_core::prelude::Algorithm::*;
    match row.algorithm {
        Omp => "omp",
        Iht => "iht",
        Bayesian => "bayesian",
    }
}

fn csv_row(row: &PointResult) -> String {
    format!(
        "{},{},{},{},{},{},{:.6},{:.6},{:.6},{},{},{},{},{}",
        row.family.label(),
        row.m,
        row.k,
        row.b,
        row.scenario.label(),
        algorithm_label(row),
        row.snr_st_db,
        row.snr_th_db,
        row.gap_db,
        row.saturation_count,
        row.trials,
        row.failures,
        row.in_regime,
        row.matrix_mode.label(),
    )
}

/// Write the sweep as CSV. The header row is always present, even for an
/// empty sweep.
pub fn write_csv(result: &ExperimentResult, path: &Path) -> Result<(), CliError> {
    let mut out = std::fs::File::create(path)?;
    writeln!(out, "{CSV_HEADER}")?;
    for row in &result.rows {
        writeln!(out, "{}", csv_row(row))?;
    }
    Ok(())
}

/// Render the CSV to a string (used by stdout output and tests).
pub fn csv_string(result: &ExperimentResult) -> String {
    let mut text = String::from(CSV_HEADER);
    text.push('\n');
    for row in &result.rows {
        text.push_str(&csv_row(row));
        text.push('\n');
    }
    text
}

#[derive(Serialize)]
struct PlotPoint {
    b: u32,
    snr_st_db: f64,
    snr_th_db: f64,
    in_regime: bool,
}

#[derive(Serialize)]
struct PlotCurve {
    label: String,
    k: usize,
    points: Vec<PlotPoint>,
}

#[derive(Serialize)]
struct PlotPanel {
    title: String,
    family: String,
    m: usize,
    scenario: String,
    x_axis: &'static str,
    y_axis: &'static str,
    curves: Vec<PlotCurve>,
}

#[derive(Serialize)]
struct PlotDescription {
    kind: &'static str,
    note: &'static str,
    panels: Vec<PlotPanel>,
}

/// Describe the figure the sweep draws: one panel per (family, M, scenario),
/// one curve per K, SNR against register width B, with the closed-form
/// prediction carried alongside each simulated point.
pub fn plot_description(result: &ExperimentResult) -> String {
    let mut panels: BTreeMap<(String, usize, String), BTreeMap<usize, Vec<PlotPoint>>> =
        BTreeMap::new();
    for row in &result.rows {
        panels
            .entry((
                row.family.label().to_string(),
                row.m,
                row.scenario.label().to_string(),
            ))
            .or_default()
            .entry(row.k)
            .or_default()
            .push(PlotPoint {
                b: row.b,
                snr_st_db: row.snr_st_db,
                snr_th_db: row.snr_th_db,
                in_regime: row.in_regime,
            });
    }

    let description = PlotDescription {
        kind: "snr-vs-register-width",
        note: "solid: simulated trial average; reference: closed-form prediction",
        panels: panels
            .into_iter()
            .map(|((family, m, scenario), curves)| PlotPanel {
                title: format!("{family}, M = {m}, {scenario}"),
                family,
                m,
                scenario,
                x_axis: "register width B (bits)",
                y_axis: "reconstruction SNR (dB)",
                curves: curves
                    .into_iter()
                    .map(|(k, mut points)| {
                        points.sort_by_key(|p| p.b);
                        PlotCurve {
                            label: format!("K = {k}"),
                            k,
                            points,
                        }
                    })
                    .collect(),
            })
            .collect(),
    };
    serde_json::to_string_pretty(&description).expect("plot description serializes")
}

/// Write the plot description next to the CSV (`<stem>_plot.json`).
pub fn write_plot_description(result: &ExperimentResult, csv_path: &Path) -> Result<(), CliError> {
    let stem = csv_path
        .file_stem()
        .and_then(|s| s.to_str())
        .unwrap_or("results");
    let path = csv_path.with_file_name(format!("{stem}_plot.json"));
    std::fs::write(path, plot_description(result))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::{MatrixMode, Scenario};
    use qcs_core::prelude::{Algorithm, MatrixFamily};

    fn sample_row(k: usize, b: u32) -> PointResult {
        PointResult {
            family: MatrixFamily::PartialDft,
            m: 128,
            k,
            b,
            scenario: Scenario::Sparse,
            algorithm: Algorithm::Omp,
            snr_st_db: 42.351234,
            snr_th_db: 42.55,
            gap_db: -0.198766,
            saturation_count: 0,
            trials: 100,
            failures: 0,
            in_regime: true,
            matrix_mode: MatrixMode::Fresh,
        }
    }

    #[test]
    fn csv_has_the_documented_columns() {
        let result = ExperimentResult {
            rows: vec![sample_row(10, 6)],
        };
        let text = csv_string(&result);
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), CSV_HEADER);
        let row = lines.next().unwrap();
        let fields: Vec<&str> = row.split(',').collect();
        assert_eq!(fields.len(), CSV_HEADER.split(',').count());
        assert_eq!(fields[0], "partial-dft");
        assert_eq!(fields[1], "128");
        assert_eq!(fields[4], "sparse");
        assert_eq!(fields[5], "omp");
        assert_eq!(fields[6], "42.351234");
        assert_eq!(fields[12], "true");
        assert_eq!(fields[13], "fresh");
    }

    #[test]
    fn plot_groups_one_curve_per_sparsity() {
        let result = ExperimentResult {
            rows: vec![sample_row(10, 8), sample_row(10, 6), sample_row(5, 6)],
        };
        let json: serde_json::Value = serde_json::from_str(&plot_description(&result)).unwrap();
        let panels = json["panels"].as_array().unwrap();
        assert_eq!(panels.len(), 1);
        let curves = panels[0]["curves"].as_array().unwrap();
        assert_eq!(curves.len(), 2);
        // Points inside a curve are sorted by register width.
        let k10 = curves.iter().find(|c| c["k"] == 10).unwrap();
        let bs: Vec<u64> = k10["points"]
            .as_array()
            .unwrap()
            .iter()
            .map(|p| p["b"].as_u64().unwrap())
            .collect();
        assert_eq!(bs, vec![6, 8]);
    }
}
