//! Result files: CSV or JSON tables, gnuplot scripts and the run manifest.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::{Map, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn extension(&self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

impl crate::config::ConfigValue for Format {
    fn parse_value(text: &str) -> Result<Self, String> {
        match text.trim().to_ascii_lowercase().as_str() {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(format!("format must be 'csv' or 'json', found '{other}'")),
        }
    }
    fn render(&self) -> String {
        self.extension().to_string()
    }
}

/// One table cell.
#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Num(f64),
    Flag(bool),
}

impl Cell {
    /// `None` becomes `NaN` in CSV and `null` in JSON.
    pub fn opt(x: Option<f64>) -> Cell {
        Cell::Num(x.unwrap_or(f64::NAN))
    }

    fn csv(&self) -> String {
        match *self {
            Cell::Num(x) => fmt_float(x),
            Cell::Flag(b) => u8::from(b).to_string(),
        }
    }

    fn json(&self) -> Value {
        match *self {
            Cell::Num(x) => json_float(x),
            Cell::Flag(b) => Value::Bool(b),
        }
    }
}

/// Floats are written with 17 significant digits; anything non-finite is `NaN`.
pub fn fmt_float(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        "NaN".to_string()
    }
}

pub fn json_float(x: f64) -> Value {
    serde_json::Number::from_f64(x).map_or(Value::Null, Value::Number)
}

pub fn json_opt(x: Option<f64>) -> Value {
    x.map_or(Value::Null, json_float)
}

/// A rectangular table with named columns.
#[derive(Clone, Debug, Default)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new<S: Into<String>>(columns: impl IntoIterator<Item = S>) -> Self {
        Table {
            columns: columns.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Cell::csv).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    /// `{"columns": [...], "rows": [[...], ...]}`.
    pub fn to_json(&self) -> Value {
        let mut obj = Map::new();
        obj.insert("columns".into(), Value::from(self.columns.clone()));
        let rows = self
            .rows
            .iter()
            .map(|r| Value::Array(r.iter().map(Cell::json).collect()));
        obj.insert("rows".into(), Value::Array(rows.collect()));
        Value::Object(obj)
    }
}

/// How a table should be drawn by its gnuplot script.
#[derive(Clone, Debug)]
pub struct Plot {
    pub title: String,
    pub xlabel: String,
    pub ylabel: String,
    pub style: PlotStyle,
    /// 1-based data columns to draw as lines; all but the first when empty.
    pub series: Vec<usize>,
}

#[derive(Clone, Debug)]
pub enum PlotStyle {
    /// Column 1 against each remaining column.
    Lines,
    /// Columns 1 and 2 as coordinates, column 3 as colour.
    Map { zlabel: String },
}

impl Plot {
    pub fn lines(
        title: impl Into<String>,
        xlabel: impl Into<String>,
        ylabel: impl Into<String>,
    ) -> Self {
        Plot {
            title: title.into(),
            xlabel: xlabel.into(),
            ylabel: ylabel.into(),
            style: PlotStyle::Lines,
            series: Vec::new(),
        }
    }

    pub fn map(
        title: impl Into<String>,
        xlabel: impl Into<String>,
        ylabel: impl Into<String>,
        zlabel: impl Into<String>,
    ) -> Self {
        Plot {
            title: title.into(),
            xlabel: xlabel.into(),
            ylabel: ylabel.into(),
            style: PlotStyle::Map {
                zlabel: zlabel.into(),
            },
            series: Vec::new(),
        }
    }

    pub fn with_series(mut self, columns: &[usize]) -> Self {
        self.series = columns.to_vec();
        self
    }

    /// A gnuplot script that renders `data` (a CSV next to it) to `<stem>.png`.
    pub fn gnuplot(&self, data: &str, stem: &str, table: &Table) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "set datafile separator ','");
        let _ = writeln!(s, "set datafile missing 'NaN'");
        let _ = writeln!(s, "set terminal pngcairo size 900,650");
        let _ = writeln!(s, "set output '{stem}.png'");
        let _ = writeln!(s, "set title \"{}\"", self.title);
        let _ = writeln!(s, "set xlabel \"{}\"", self.xlabel);
        let _ = writeln!(s, "set ylabel \"{}\"", self.ylabel);
        match &self.style {
            PlotStyle::Lines => {
                let _ = writeln!(s, "set key outside right");
                let columns: Vec<usize> = if self.series.is_empty() {
                    (2..=table.columns.len()).collect()
                } else {
                    self.series.clone()
                };
                let series: Vec<String> = columns
                    .into_iter()
                    .map(|c| {
                        let name = table.columns[c - 1].replace('_', "\\\\_");
                        format!("'{data}' using 1:{c} skip 1 with lines title \"{name}\"")
                    })
                    .collect();
                let _ = writeln!(s, "plot {}", series.join(", \\\n     "));
            }
            PlotStyle::Map { zlabel } => {
                let _ = writeln!(s, "set cblabel \"{zlabel}\"");
                let _ = writeln!(s, "unset key");
                let _ = writeln!(
                    s,
                    "plot '{data}' using 1:2:3 skip 1 with points pt 5 ps 0.5 palette"
                );
            }
        }
        s
    }
}

/// Collects written files for the manifest. Every writer goes through here.
pub struct OutputDir {
    root: PathBuf,
    format: Format,
    plots: bool,
    written: Vec<String>,
}

impl OutputDir {
    pub fn create(root: &Path, format: Format, plots: bool) -> io::Result<Self> {
        std::fs::create_dir_all(root)?;
        Ok(OutputDir {
            root: root.to_path_buf(),
            format,
            plots,
            written: Vec::new(),
        })
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    fn write(&mut self, name: &str, contents: &str) -> io::Result<()> {
        std::fs::write(self.root.join(name), contents)?;
        self.written.push(name.to_string());
        Ok(())
    }

    /// Writes `<stem>.csv` or `<stem>.json`; with plots enabled and CSV output,
    /// also `<stem>.gp`.
    pub fn table(&mut self, stem: &str, table: &Table, plot: Option<&Plot>) -> io::Result<()> {
        match self.format {
            Format::Csv => {
                let data = format!("{stem}.csv");
                self.write(&data, &table.to_csv())?;
                if let (true, Some(plot)) = (self.plots, plot) {
                    let script = plot.gnuplot(&data, stem, table);
                    self.write(&format!("{stem}.gp"), &script)?;
                }
                Ok(())
            }
            Format::Json => self.json(stem, &table.to_json()),
        }
    }

    /// Writes `<stem>.json` regardless of the table format.
    pub fn json(&mut self, stem: &str, value: &Value) -> io::Result<()> {
        let mut text = serde_json::to_string_pretty(value).map_err(io::Error::other)?;
        text.push('\n');
        self.write(&format!("{stem}.json"), &text)
    }

    pub fn written(&self) -> &[String] {
        &self.written
    }
}

/// The provenance record written next to the results.
#[derive(Serialize)]
pub struct RunManifest<'a> {
    pub tool: &'a str,
    pub version: &'a str,
    pub subcommand: &'a str,
    pub inputs: &'a BTreeMap<String, String>,
    pub outputs: &'a [String],
    pub diagnostics: Value,
    pub wall_time_s: f64,
}

pub const MANIFEST_NAME: &str = "run-manifest.json";

impl RunManifest<'_> {
    pub fn write(&self, dir: &Path) -> io::Result<()> {
        let mut text = serde_json::to_string_pretty(self).map_err(io::Error::other)?;
        text.push('\n');
        std::fs::write(dir.join(MANIFEST_NAME), text)
    }
}
