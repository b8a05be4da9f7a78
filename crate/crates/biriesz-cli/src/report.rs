use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use anyhow::{Context, Result};
use biriesz::fieldgrid::{brgrid, GridFunction};
use serde::Serialize;
use serde_json::json;

pub const SCHEMA_VERSION: &str = "1";

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Table {
    pub name: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(name: &str, header: &[&str]) -> Self {
        Self {
            name: name.to_string(),
            header: header.iter().map(|h| h.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    /// RFC-4180 CSV with a header row.
    pub fn to_csv(&self) -> Result<Vec<u8>> {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::CRLF)
            .from_writer(Vec::new());
        w.write_record(&self.header)?;
        for row in &self.rows {
            w.write_record(row)?;
        }
        Ok(w.into_inner().context("flushing CSV")?)
    }

    pub fn column(&self, name: &str) -> Option<Vec<&str>> {
        let i = self.header.iter().position(|h| h == name)?;
        Some(self.rows.iter().map(|r| r[i].as_str()).collect())
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Series {
    pub label: String,
    pub points: Vec<(f64, f64)>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Figure {
    pub name: String,
    pub title: String,
    pub xlabel: String,
    pub ylabel: String,
    pub log_x: bool,
    pub log_y: bool,
    pub series: Vec<Series>,
}

impl Figure {
    pub fn loglog(name: &str, title: &str, xlabel: &str, ylabel: &str) -> Self {
        Self {
            name: name.into(),
            title: title.into(),
            xlabel: xlabel.into(),
            ylabel: ylabel.into(),
            log_x: true,
            log_y: true,
            series: Vec::new(),
        }
    }

    pub fn linear(name: &str, title: &str, xlabel: &str, ylabel: &str) -> Self {
        Self {
            log_x: false,
            log_y: false,
            ..Self::loglog(name, title, xlabel, ylabel)
        }
    }

    pub fn add(&mut self, label: impl Into<String>, points: Vec<(f64, f64)>) {
        self.series.push(Series {
            label: label.into(),
            points,
        });
    }

    /// Two-column blocks, one per series, separated for gnuplot's `index`.
    pub fn to_dat(&self) -> String {
        let mut s = String::new();
        for (i, series) in self.series.iter().enumerate() {
            if i > 0 {
                s.push_str("\n\n");
            }
            let _ = writeln!(s, "# {}", series.label);
            for (x, y) in &series.points {
                let _ = writeln!(s, "{x} {y}");
            }
        }
        s
    }

    pub fn to_gnuplot(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "set terminal pngcairo size 900,600");
        let _ = writeln!(s, "set output '{}.png'", self.name);
        let _ = writeln!(s, "set title \"{}\"", self.title.replace('"', "'"));
        let _ = writeln!(s, "set xlabel \"{}\"", self.xlabel);
        let _ = writeln!(s, "set ylabel \"{}\"", self.ylabel);
        let _ = writeln!(s, "set key left bottom");
        match (self.log_x, self.log_y) {
            (true, true) => s.push_str("set logscale xy\n"),
            (true, false) => s.push_str("set logscale x\n"),
            (false, true) => s.push_str("set logscale y\n"),
            (false, false) => {}
        }
        let plots: Vec<String> = self
            .series
            .iter()
            .enumerate()
            .map(|(i, series)| {
                let file = if i == 0 {
                    format!("'{}.dat'", self.name)
                } else {
                    "''".into()
                };
                format!(
                    "{file} index {i} using 1:2 with linespoints title \"{}\"",
                    series.label
                )
            })
            .collect();
        let _ = writeln!(s, "plot {}", plots.join(", \\\n     "));
        s
    }
}

/// Plain decimals for moderate magnitudes, exponent notation otherwise.
pub fn show(v: f64) -> String {
    if v != 0.0 && v.is_finite() && (v.abs() < 1e-3 || v.abs() >= 1e6) {
        format!("{v:e}")
    } else {
        format!("{v}")
    }
}

/// One pass/fail comparison; `criterion` is the acceptance item it serves.
#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub criterion: Option<u32>,
    pub name: String,
    pub measured: f64,
    pub limit: String,
    pub pass: bool,
}

impl Check {
    pub fn at_most(criterion: Option<u32>, name: &str, measured: f64, limit: f64) -> Self {
        Self {
            criterion,
            name: name.into(),
            measured,
            limit: format!("<= {}", show(limit)),
            pass: measured <= limit,
        }
    }

    pub fn at_least(criterion: Option<u32>, name: &str, measured: f64, limit: f64) -> Self {
        Self {
            criterion,
            name: name.into(),
            measured,
            limit: format!(">= {}", show(limit)),
            pass: measured >= limit,
        }
    }

    pub fn within(
        criterion: Option<u32>,
        name: &str,
        measured: f64,
        target: f64,
        tol: f64,
    ) -> Self {
        Self {
            criterion,
            name: name.into(),
            measured,
            limit: format!("{} +/- {}", show(target), show(tol)),
            pass: (measured - target).abs() <= tol,
        }
    }
}

#[derive(Debug, Default)]
pub struct Outcome {
    pub tables: Vec<Table>,
    pub figures: Vec<Figure>,
    pub checks: Vec<Check>,
    pub witnesses: Vec<(String, GridFunction)>,
    /// Named wall-clock sections in seconds; kept out of the CSVs.
    pub timings: BTreeMap<String, f64>,
    pub extra: serde_json::Map<String, serde_json::Value>,
}

#[derive(Debug)]
pub struct ExperimentReport {
    pub name: String,
    pub config: BTreeMap<String, String>,
    pub tables: Vec<Table>,
    pub figures: Vec<Figure>,
    pub checks: Vec<Check>,
    pub witnesses: Vec<(String, GridFunction)>,
    pub timings: BTreeMap<String, f64>,
    pub extra: serde_json::Map<String, serde_json::Value>,
    pub wall_time: f64,
    pub threads: usize,
}

impl ExperimentReport {
    /// True when there is at least one check and every check passed.
    pub fn passed(&self) -> bool {
        !self.checks.is_empty() && self.checks.iter().all(|c| c.pass)
    }

    pub fn criterion_passed(&self, criterion: u32) -> Option<bool> {
        let mut relevant = self
            .checks
            .iter()
            .filter(|c| c.criterion == Some(criterion))
            .peekable();
        relevant.peek()?;
        Some(relevant.all(|c| c.pass))
    }

    pub fn table(&self, name: &str) -> Option<&Table> {
        self.tables.iter().find(|t| t.name == name)
    }

    pub fn manifest(&self) -> serde_json::Value {
        json!({
            "schema": SCHEMA_VERSION,
            "experiment": self.name,
            "version": env!("CARGO_PKG_VERSION"),
            "config": self.config,
            "wall_time_s": self.wall_time,
            "threads": self.threads,
            "timings_s": self.timings,
            "passed": self.passed(),
            "checks": self.checks,
            "tables": self.tables.iter().map(|t| format!("{}.csv", t.name)).collect::<Vec<_>>(),
            "figures": self.figures.iter().map(|f| format!("{}.dat", f.name)).collect::<Vec<_>>(),
            "witnesses": self.witnesses.iter().map(|(n, _)| format!("{n}.brgrid")).collect::<Vec<_>>(),
            "results": self.extra,
        })
    }

    pub fn write(&self, dir: &Path) -> Result<()> {
        std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        for t in &self.tables {
            std::fs::write(dir.join(format!("{}.csv", t.name)), t.to_csv()?)?;
        }
        for f in &self.figures {
            std::fs::write(dir.join(format!("{}.dat", f.name)), f.to_dat())?;
            std::fs::write(dir.join(format!("{}.gp", f.name)), f.to_gnuplot())?;
        }
        for (name, grid) in &self.witnesses {
            brgrid::save(dir.join(format!("{name}.brgrid")), grid)?;
        }
        let manifest = serde_json::to_string_pretty(&self.manifest())?;
        std::fs::write(dir.join("manifest.json"), manifest + "\n")?;
        Ok(())
    }
}
