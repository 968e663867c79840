//! Result files: per-run JSON, the aggregate CSV, profile data and SVG plots.
//!
//! Aggregate CSV columns, one row per `(problem, method, seed)`:
//!
//! | column | meaning |
//! |---|---|
//! | `problem` | problem label (`name-n` for scalable problems) |
//! | `method` | `gs` or `gsi` |
//! | `seed` | run seed |
//! | `iters` | iterations |
//! | `nii` | direction iterations without a QP solve |
//! | `pii` | `nii` over direction iterations |
//! | `f_eval`, `g_eval` | function and gradient evaluations |
//! | `qp_count`, `qp_time` | QP solves and seconds spent in them |
//! | `cpu_time` | wall seconds of the run |
//! | `success` | stopping rule met |
//!
//! Aborted runs have zero counters and `success = false`.
//!
//! Profile CSV: a `tau` column followed by one `ρ(τ)` column per solver.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::profile::{performance_profile, Metric, ProfileEntry, ProfileError, ProfileTable};
use super::RunRecord;

pub const CSV_HEADER: &str = "problem,method,seed,iters,nii,pii,f_eval,g_eval,qp_count,qp_time,cpu_time,success";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRow {
    pub problem: String,
    pub method: String,
    pub seed: u64,
    pub iters: usize,
    pub nii: usize,
    pub pii: f64,
    pub f_eval: usize,
    pub g_eval: usize,
    pub qp_count: usize,
    pub qp_time: f64,
    pub cpu_time: f64,
    pub success: bool,
}

impl ResultRow {
    pub fn from_record(rec: &RunRecord) -> Self {
        let base = ResultRow {
            problem: rec.problem.clone(),
            method: rec.method.to_string(),
            seed: rec.seed,
            iters: 0,
            nii: 0,
            pii: 0.0,
            f_eval: 0,
            g_eval: 0,
            qp_count: 0,
            qp_time: 0.0,
            cpu_time: rec.cpu_time,
            success: false,
        };
        match &rec.report {
            None => base,
            Some(r) => ResultRow {
                iters: r.iters,
                nii: r.nii,
                pii: r.pii,
                f_eval: r.f_eval,
                g_eval: r.g_eval,
                qp_count: r.qp_count,
                qp_time: r.qp_time,
                cpu_time: r.wall_time,
                success: r.success,
                ..base
            },
        }
    }

    pub fn metric(&self, metric: Metric) -> f64 {
        match metric {
            Metric::CpuTime => self.cpu_time,
            Metric::QpTime => self.qp_time,
            Metric::QpCount => self.qp_count as f64,
            Metric::FEval => self.f_eval as f64,
            Metric::GEval => self.g_eval as f64,
            Metric::Iters => self.iters as f64,
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum ReportError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("{path}: {source}")]
    Csv { path: PathBuf, source: csv::Error },
    #[error("{path}: {message}")]
    Format { path: PathBuf, message: String },
    #[error(transparent)]
    Profile(#[from] ProfileError),
}

fn io_err(path: &Path) -> impl FnOnce(io::Error) -> ReportError + '_ {
    move |source| ReportError::Io {
        path: path.to_path_buf(),
        source,
    }
}

fn csv_err(path: &Path) -> impl FnOnce(csv::Error) -> ReportError + '_ {
    move |source| ReportError::Csv {
        path: path.to_path_buf(),
        source,
    }
}

pub fn write_results_csv(path: &Path, rows: &[ResultRow]) -> Result<(), ReportError> {
    let mut w = csv::Writer::from_path(path).map_err(csv_err(path))?;
    if rows.is_empty() {
        w.write_record(CSV_HEADER.split(',')).map_err(csv_err(path))?;
    }
    for row in rows {
        w.serialize(row).map_err(csv_err(path))?;
    }
    w.flush().map_err(io_err(path))
}

pub fn read_results_csv(path: &Path) -> Result<Vec<ResultRow>, ReportError> {
    let mut r = csv::Reader::from_path(path).map_err(csv_err(path))?;
    let header: Vec<String> = r.headers().map_err(csv_err(path))?.iter().map(str::to_string).collect();
    if header.join(",") != CSV_HEADER {
        return Err(ReportError::Format {
            path: path.to_path_buf(),
            message: format!("unexpected header `{}`", header.join(",")),
        });
    }
    r.deserialize().collect::<Result<_, _>>().map_err(csv_err(path))
}

/// Profile over `(problem, seed)` instances with methods as solvers; failed
/// runs count as failures.
pub fn profile_from_rows(rows: &[ResultRow], metric: Metric) -> Result<ProfileTable, ProfileError> {
    let entries: Vec<ProfileEntry> = rows
        .iter()
        .map(|r| ProfileEntry {
            solver: r.method.clone(),
            instance: format!("{}#{}", r.problem, r.seed),
            value: r.success.then(|| r.metric(metric)),
        })
        .collect();
    performance_profile(metric, &entries)
}

pub fn write_profile_csv(path: &Path, table: &ProfileTable) -> Result<(), ReportError> {
    let mut w = csv::Writer::from_path(path).map_err(csv_err(path))?;
    let mut header = vec!["tau".to_string()];
    header.extend(table.solvers.iter().cloned());
    w.write_record(&header).map_err(csv_err(path))?;
    for (i, tau) in table.taus.iter().enumerate() {
        let mut rec = vec![tau.to_string()];
        rec.extend(table.curves.iter().map(|c| c.rho[i].to_string()));
        w.write_record(&rec).map_err(csv_err(path))?;
    }
    w.flush().map_err(io_err(path))
}

/// `(solvers, taus, rho per solver)` as stored in a profile CSV.
pub type ProfileColumns = (Vec<String>, Vec<f64>, Vec<Vec<f64>>);

/// Reads a profile CSV back.
pub fn read_profile_csv(path: &Path) -> Result<ProfileColumns, ReportError> {
    let mut r = csv::Reader::from_path(path).map_err(csv_err(path))?;
    let header = r.headers().map_err(csv_err(path))?.clone();
    let solvers: Vec<String> = header.iter().skip(1).map(str::to_string).collect();
    let mut taus = Vec::new();
    let mut rho = vec![Vec::new(); solvers.len()];
    let bad = |message: String| ReportError::Format {
        path: path.to_path_buf(),
        message,
    };
    for rec in r.records() {
        let rec = rec.map_err(csv_err(path))?;
        let nums: Vec<f64> = rec
            .iter()
            .map(|v| v.parse::<f64>().map_err(|e| bad(format!("`{v}`: {e}"))))
            .collect::<Result<_, _>>()?;
        taus.push(nums[0]);
        for (s, v) in nums[1..].iter().enumerate() {
            rho[s].push(*v);
        }
    }
    Ok((solvers, taus, rho))
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

const COLORS: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"];

/// Step plot of the profile, `τ` on a log2 axis.
pub fn render_profile_svg(table: &ProfileTable) -> String {
    let (w, h) = (640.0, 400.0);
    let (left, right, top, bottom) = (60.0, 20.0, 30.0, 50.0);
    let pw = w - left - right;
    let ph = h - top - bottom;
    let tau_max = table.taus.last().copied().unwrap_or(1.0).max(2.0);
    let x_max = tau_max.log2() * 1.05;
    let sx = |tau: f64| left + tau.log2() / x_max * pw;
    let sy = |rho: f64| top + (1.0 - rho) * ph;

    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\">\n"
    ));
    svg.push_str(&format!(
        "<text x=\"{}\" y=\"18\" font-family=\"sans-serif\" font-size=\"14\" text-anchor=\"middle\">performance profile: {}</text>\n",
        w / 2.0,
        table.metric
    ));
    svg.push_str(&format!(
        "<rect x=\"{left}\" y=\"{top}\" width=\"{pw}\" height=\"{ph}\" fill=\"none\" stroke=\"#000\"/>\n"
    ));
    for i in 0..=4 {
        let rho = i as f64 / 4.0;
        svg.push_str(&format!(
            "<text x=\"{}\" y=\"{:.1}\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\">{rho}</text>\n",
            left - 6.0,
            sy(rho) + 4.0
        ));
    }
    let mut k = 0.0;
    while k <= x_max {
        let tau = 2f64.powf(k);
        svg.push_str(&format!(
            "<text x=\"{:.1}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"middle\">{}</text>\n",
            sx(tau),
            top + ph + 16.0,
            format_tau(tau)
        ));
        k += (x_max / 6.0).ceil().max(1.0);
    }
    svg.push_str(&format!(
        "<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\">tau (log2 scale)</text>\n",
        left + pw / 2.0,
        h - 10.0
    ));
    for (s, curve) in table.curves.iter().enumerate() {
        let color = COLORS[s % COLORS.len()];
        let mut pts = Vec::new();
        let mut prev = 0.0;
        for (tau, rho) in table.taus.iter().zip(&curve.rho) {
            pts.push(format!("{:.2},{:.2}", sx(*tau), sy(prev)));
            pts.push(format!("{:.2},{:.2}", sx(*tau), sy(*rho)));
            prev = *rho;
        }
        pts.push(format!("{:.2},{:.2}", left + pw, sy(prev)));
        svg.push_str(&format!(
            "<polyline fill=\"none\" stroke=\"{color}\" stroke-width=\"2\" points=\"{}\"/>\n",
            pts.join(" ")
        ));
        let ly = top + 16.0 + 16.0 * s as f64;
        svg.push_str(&format!(
            "<line x1=\"{}\" y1=\"{ly}\" x2=\"{}\" y2=\"{ly}\" stroke=\"{color}\" stroke-width=\"2\"/>\n",
            left + pw - 90.0,
            left + pw - 70.0
        ));
        svg.push_str(&format!(
            "<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"12\">{}</text>\n",
            left + pw - 64.0,
            ly + 4.0,
            xml_escape(&curve.solver)
        ));
    }
    svg.push_str("</svg>\n");
    svg
}

fn format_tau(tau: f64) -> String {
    if tau < 1e4 {
        format!("{}", tau.round())
    } else {
        format!("{tau:.0e}")
    }
}

pub fn write_profile_svg(path: &Path, table: &ProfileTable) -> Result<(), ReportError> {
    fs::write(path, render_profile_svg(table)).map_err(io_err(path))
}

/// Paths written by [`emit_reports`].
#[derive(Debug, Clone, Default)]
pub struct EmittedFiles {
    pub results_csv: PathBuf,
    pub run_json: Vec<PathBuf>,
    pub profile_csv: Vec<PathBuf>,
    pub profile_svg: Vec<PathBuf>,
}

/// Writes `runs/<problem>_<method>_seed<seed>.json` per run, `results.csv`,
/// and `profile_<metric>.csv` / `.svg` for each requested metric. Profiles are
/// skipped (with a warning) when fewer than two methods ran.
pub fn emit_reports(dir: &Path, records: &[RunRecord], metrics: &[Metric]) -> Result<EmittedFiles, ReportError> {
    let runs_dir = dir.join("runs");
    fs::create_dir_all(&runs_dir).map_err(io_err(&runs_dir))?;
    let mut files = EmittedFiles::default();
    for rec in records {
        let path = runs_dir.join(format!("{}_{}_seed{}.json", rec.problem, rec.method, rec.seed));
        let mut f = fs::File::create(&path).map_err(io_err(&path))?;
        serde_json::to_writer_pretty(&mut f, rec).map_err(|e| ReportError::Io {
            path: path.clone(),
            source: e.into(),
        })?;
        f.write_all(b"\n").map_err(io_err(&path))?;
        files.run_json.push(path);
    }
    let rows: Vec<ResultRow> = records.iter().map(ResultRow::from_record).collect();
    files.results_csv = dir.join("results.csv");
    write_results_csv(&files.results_csv, &rows)?;
    for &metric in metrics {
        match profile_from_rows(&rows, metric) {
            Ok(table) => {
                let csv_path = dir.join(format!("profile_{metric}.csv"));
                let svg_path = dir.join(format!("profile_{metric}.svg"));
                write_profile_csv(&csv_path, &table)?;
                write_profile_svg(&svg_path, &table)?;
                files.profile_csv.push(csv_path);
                files.profile_svg.push(svg_path);
            }
            Err(e) => log::warn!("no {metric} profile: {e}"),
        }
    }
    Ok(files)
}
