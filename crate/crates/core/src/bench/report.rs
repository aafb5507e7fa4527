//! Report serialisation.
//!
//! The CSV is in long form with the stable header
//! `point,parameter,mode,statistic,value`; statistics are `macro_f1_mean`,
//! `macro_f1_std`, `runs` and `f1_class_<k>_mean` for every class `k`.
//! Wall-clock figures appear only in the JSON so the CSV is reproducible
//! byte for byte.

use std::fmt::Write as _;

use super::experiment::ExperimentReport;
use crate::classifier::CenteringMode;
use crate::error::{Error, Result};

pub const CSV_HEADER: [&str; 5] = ["point", "parameter", "mode", "statistic", "value"];

pub fn to_csv(report: &ExperimentReport) -> Result<String> {
    let mut writer = csv::Writer::from_writer(Vec::new());
    let csv_err = |e: csv::Error| Error::Evaluation(format!("csv: {e}"));
    writer.write_record(CSV_HEADER).map_err(csv_err)?;
    for point in &report.points {
        let parameter = point.parameter.map(|p| p.to_string()).unwrap_or_default();
        for mode in &point.modes {
            let mut rows = vec![
                ("macro_f1_mean".to_string(), mode.macro_f1_mean.to_string()),
                ("macro_f1_std".to_string(), mode.macro_f1_std.to_string()),
                ("runs".to_string(), mode.runs.to_string()),
            ];
            for (k, f) in mode.per_class_f1_mean.iter().enumerate() {
                rows.push((format!("f1_class_{}_mean", k + 1), f.to_string()));
            }
            for (stat, value) in rows {
                writer
                    .write_record([
                        point.point.as_str(),
                        parameter.as_str(),
                        mode.mode.name(),
                        stat.as_str(),
                        value.as_str(),
                    ])
                    .map_err(csv_err)?;
            }
        }
    }
    let bytes = writer
        .into_inner()
        .map_err(|e| Error::Evaluation(format!("csv: {}", e.error())))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

pub fn to_json(report: &ExperimentReport) -> String {
    serde_json::to_string_pretty(report).expect("report serialises")
}

/// Difference of mean macro-F1 between two modes at a point, with the pooled
/// standard deviation `sqrt((σ_a² + σ_b²) / 2)`.
pub fn mode_gap(
    report: &ExperimentReport,
    point: usize,
    better: CenteringMode,
    worse: CenteringMode,
) -> Option<(f64, f64)> {
    let p = report.points.get(point)?;
    let a = p.mode(better)?;
    let b = p.mode(worse)?;
    let pooled = ((a.macro_f1_std.powi(2) + b.macro_f1_std.powi(2)) / 2.0).sqrt();
    Some((a.macro_f1_mean - b.macro_f1_mean, pooled))
}

/// Fixed-width table of mean ± std per point and mode.
pub fn summary_table(report: &ExperimentReport) -> String {
    let modes: Vec<CenteringMode> = report
        .points
        .first()
        .map(|p| p.modes.iter().map(|m| m.mode).collect())
        .unwrap_or_default();
    let mut out = String::new();
    let _ = write!(out, "{:<16}", "point");
    for m in &modes {
        let _ = write!(out, " {:>17}", m.name());
    }
    out.push('\n');
    for p in &report.points {
        let _ = write!(out, "{:<16}", p.point);
        for m in &p.modes {
            let _ = write!(out, " {:>8.4} ± {:<6.4}", m.macro_f1_mean, m.macro_f1_std);
        }
        out.push('\n');
    }
    out
}
