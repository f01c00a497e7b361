//! Side-by-side summary of backends across saved reports.

use std::path::{Path, PathBuf};

use crate::report::RunReport;
use crate::{write_file, CliError};

#[derive(Clone, Debug, PartialEq)]
pub struct Row {
    pub report: String,
    pub backend: String,
    pub timing_us: u64,
    pub modal: String,
    pub p_valid: f64,
    pub p_correct: Option<f64>,
    pub best_valid: bool,
    pub best_weight: f64,
    pub best_clusters: usize,
}

pub const CSV_HEADER: &str = "report,backend,timing_us,modal,p_valid,p_correct,best_valid,best_weight,best_clusters";

pub fn rows(reports: &[(String, RunReport)]) -> Vec<Row> {
    reports
        .iter()
        .flat_map(|(name, r)| {
            r.backends.iter().map(move |b| Row {
                report: name.clone(),
                backend: b.name.clone(),
                timing_us: b.timing_us,
                modal: b.modal.to_string(),
                p_valid: b.p_valid,
                p_correct: b.p_correct,
                best_valid: b.best.valid,
                best_weight: b.best.weight,
                best_clusters: b.best.n_clusters,
            })
        })
        .collect()
}

pub fn to_csv(rows: &[Row]) -> String {
    let mut s = format!("{CSV_HEADER}\n");
    for r in rows {
        s.push_str(&format!(
            "{},{},{},{},{:.6},{},{},{:.6},{}\n",
            r.report,
            r.backend,
            r.timing_us,
            r.modal,
            r.p_valid,
            r.p_correct.map(|p| format!("{p:.6}")).unwrap_or_default(),
            r.best_valid,
            r.best_weight,
            r.best_clusters
        ));
    }
    s
}

pub fn to_table(rows: &[Row]) -> String {
    let header = [
        "report", "backend", "time_us", "modal", "P(valid)", "P(correct)", "best_weight", "clusters",
    ];
    let body: Vec<[String; 8]> = rows
        .iter()
        .map(|r| {
            [
                r.report.clone(),
                r.backend.clone(),
                r.timing_us.to_string(),
                r.modal.clone(),
                format!("{:.3}", r.p_valid),
                r.p_correct.map_or("-".into(), |p| format!("{p:.3}")),
                if r.best_valid {
                    format!("{:.3}", r.best_weight)
                } else {
                    "invalid".into()
                },
                r.best_clusters.to_string(),
            ]
        })
        .collect();
    let mut width = header.map(str::len);
    for row in &body {
        for (w, c) in width.iter_mut().zip(row) {
            *w = (*w).max(c.len());
        }
    }
    let line = |cells: Vec<&str>| {
        cells
            .iter()
            .zip(width)
            .map(|(c, w)| format!("{c:<w$}"))
            .collect::<Vec<_>>()
            .join("  ")
            .trim_end()
            .to_string()
    };
    let mut out = line(header.to_vec());
    out.push('\n');
    out.push_str(&width.iter().map(|&w| "-".repeat(w)).collect::<Vec<_>>().join("  "));
    out.push('\n');
    for row in &body {
        out.push_str(&line(row.iter().map(String::as_str).collect()));
        out.push('\n');
    }
    out
}

/// Loads at least two reports, writes `comparison.csv` and
/// `comparison.txt` into `out_dir` and returns the table text.
pub fn compare(paths: &[PathBuf], out_dir: &Path) -> Result<String, CliError> {
    if paths.len() < 2 {
        return Err(CliError::Validation(format!(
            "compare needs at least 2 reports, got {}",
            paths.len()
        )));
    }
    let mut reports = Vec::new();
    for p in paths {
        let r = RunReport::load(p)?;
        let name = p
            .parent()
            .and_then(|d| d.file_name())
            .map_or_else(|| p.display().to_string(), |d| d.to_string_lossy().into_owned());
        reports.push((name, r));
    }
    let rows = rows(&reports);
    std::fs::create_dir_all(out_dir).map_err(CliError::io(out_dir))?;
    write_file(&out_dir.join("comparison.csv"), to_csv(&rows))?;
    let table = to_table(&rows);
    write_file(&out_dir.join("comparison.txt"), &table)?;
    Ok(table)
}
