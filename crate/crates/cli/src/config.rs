//! Parameter resolution: command-line flags, then `LRK_WORKERS`, then a config
//! file, then built-in defaults.
//!
//! A config file is either a flat `key = value` text file (`#` starts a
//! comment) or a `run-manifest.json` written by an earlier run, whose
//! `inputs` object is replayed verbatim.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use lrk_core::sweep::{log_spaced, uniform_closed, uniform_open};
use lrk_core::InteractionRange;

/// A malformed or inconsistent configuration. Reported with exit code 2.
#[derive(Debug)]
pub struct ConfigError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ConfigError {}

pub type ConfigResult<T> = Result<T, ConfigError>;

/// Every key a config file may set.
pub const KNOWN_KEYS: &[&str] = &[
    "L",
    "J",
    "Delta",
    "alpha",
    "alphas",
    "mu",
    "mu_min",
    "mu_max",
    "mu_steps",
    "mu_i",
    "mu_f",
    "beta_c",
    "beta_ratio",
    "cycle",
    "sweep_mu",
    "refine",
    "grid_density",
    "mu_ratio_grid",
    "alpha_grid",
    "beta_ratio_grid",
    "figure",
    "dense",
    "out",
    "format",
    "emit_plots",
    "workers",
];

/// Where a file value came from, for error messages.
#[derive(Clone, Debug)]
enum Origin {
    Line(usize),
    Manifest,
}

#[derive(Clone, Debug)]
struct FileValue {
    text: String,
    origin: Origin,
}

/// Values read from `--config`, if any.
#[derive(Clone, Debug, Default)]
pub struct ConfigFile {
    path: Option<PathBuf>,
    values: BTreeMap<String, FileValue>,
    /// Subcommand recorded in a replayed manifest.
    pub subcommand: Option<String>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> ConfigResult<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ConfigError(format!("{}: cannot read config: {e}", path.display())))?;
        if text.trim_start().starts_with('{') {
            Self::from_manifest(path, &text)
        } else {
            Self::from_key_values(path, &text)
        }
    }

    fn from_key_values(path: &Path, text: &str) -> ConfigResult<Self> {
        let mut values = BTreeMap::new();
        for (n, raw) in text.lines().enumerate() {
            let line_no = n + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(ConfigError(format!(
                    "{}:{line_no}: expected 'key = value', found '{line}'",
                    path.display()
                )));
            };
            let (key, value) = (key.trim(), value.trim());
            if !KNOWN_KEYS.contains(&key) {
                return Err(ConfigError(format!(
                    "{}:{line_no}: unknown key '{key}'",
                    path.display()
                )));
            }
            if value.is_empty() {
                return Err(ConfigError(format!(
                    "{}:{line_no}: empty value for '{key}'",
                    path.display()
                )));
            }
            let previous = values.insert(
                key.to_string(),
                FileValue {
                    text: value.to_string(),
                    origin: Origin::Line(line_no),
                },
            );
            if let Some(FileValue {
                origin: Origin::Line(first),
                ..
            }) = previous
            {
                return Err(ConfigError(format!(
                    "{}:{line_no}: duplicate key '{key}' (first set on line {first})",
                    path.display()
                )));
            }
        }
        Ok(ConfigFile {
            path: Some(path.to_path_buf()),
            values,
            subcommand: None,
        })
    }

    fn from_manifest(path: &Path, text: &str) -> ConfigResult<Self> {
        let bad = |msg: String| ConfigError(format!("{}: {msg}", path.display()));
        let json: serde_json::Value =
            serde_json::from_str(text).map_err(|e| bad(format!("invalid manifest JSON: {e}")))?;
        let subcommand = json
            .get("subcommand")
            .and_then(|s| s.as_str())
            .ok_or_else(|| bad("manifest has no 'subcommand'".into()))?
            .to_string();
        let inputs = json
            .get("inputs")
            .and_then(|s| s.as_object())
            .ok_or_else(|| bad("manifest has no 'inputs' object".into()))?;
        let mut values = BTreeMap::new();
        for (key, value) in inputs {
            if !KNOWN_KEYS.contains(&key.as_str()) {
                return Err(bad(format!("unknown input '{key}'")));
            }
            let text = match value {
                serde_json::Value::String(s) => s.clone(),
                other => other.to_string(),
            };
            values.insert(
                key.clone(),
                FileValue {
                    text,
                    origin: Origin::Manifest,
                },
            );
        }
        Ok(ConfigFile {
            path: Some(path.to_path_buf()),
            values,
            subcommand: Some(subcommand),
        })
    }

    fn locate(&self, key: &str, origin: &Origin) -> String {
        let path = self
            .path
            .as_deref()
            .map_or_else(|| "<config>".into(), |p| p.display().to_string());
        match origin {
            Origin::Line(n) => format!("{path}:{n}: '{key}'"),
            Origin::Manifest => format!("{path}: input '{key}'"),
        }
    }
}

/// A value that can be parsed from config text and written back canonically.
pub trait ConfigValue: Sized {
    fn parse_value(text: &str) -> Result<Self, String>;
    fn render(&self) -> String;
}

macro_rules! plain_value {
    ($($t:ty),*) => {$(
        impl ConfigValue for $t {
            fn parse_value(text: &str) -> Result<Self, String> {
                <$t>::from_str(text.trim()).map_err(|e| e.to_string())
            }
            fn render(&self) -> String {
                self.to_string()
            }
        }
    )*};
}

plain_value!(f64, usize, String);

impl ConfigValue for bool {
    fn parse_value(text: &str) -> Result<Self, String> {
        match text.trim().to_ascii_lowercase().as_str() {
            "true" | "yes" | "1" | "on" => Ok(true),
            "false" | "no" | "0" | "off" => Ok(false),
            other => Err(format!("expected a boolean, found '{other}'")),
        }
    }
    fn render(&self) -> String {
        self.to_string()
    }
}

impl ConfigValue for PathBuf {
    fn parse_value(text: &str) -> Result<Self, String> {
        Ok(PathBuf::from(text.trim()))
    }
    fn render(&self) -> String {
        self.display().to_string()
    }
}

/// An interaction range: a positive number, or `inf` for the short-range chain.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Range(pub InteractionRange);

impl ConfigValue for Range {
    fn parse_value(text: &str) -> Result<Self, String> {
        parse_range(text).map(Range)
    }
    fn render(&self) -> String {
        self.0.to_string()
    }
}

pub fn parse_range(text: &str) -> Result<InteractionRange, String> {
    let t = text.trim();
    if matches!(t.to_ascii_lowercase().as_str(), "inf" | "infinity" | "sr") {
        return Ok(InteractionRange::ShortRange);
    }
    let alpha: f64 = t
        .parse()
        .map_err(|_| format!("expected a number or 'inf', found '{t}'"))?;
    if !(alpha.is_finite() && alpha > 0.0) {
        return Err(format!("alpha must be positive, found {alpha}"));
    }
    Ok(InteractionRange::PowerLaw(alpha))
}

/// A list of grid values.
///
/// Accepted forms: `lo:hi:n` (n points, both ends included), `open:n`
/// (`j / (n + 1)`, j = 1..n), `log:lo:hi:n`, or an explicit comma list.
#[derive(Clone, Debug, PartialEq)]
pub struct Grid(pub Vec<f64>);

impl ConfigValue for Grid {
    fn parse_value(text: &str) -> Result<Self, String> {
        parse_grid(text).map(Grid)
    }
    fn render(&self) -> String {
        self.0
            .iter()
            .map(f64::to_string)
            .collect::<Vec<_>>()
            .join(",")
    }
}

pub fn parse_grid(text: &str) -> Result<Vec<f64>, String> {
    let t = text.trim();
    let num = |s: &str| {
        s.trim()
            .parse::<f64>()
            .map_err(|_| format!("bad number '{}' in grid", s.trim()))
    };
    let count = |s: &str| {
        s.trim()
            .parse::<usize>()
            .map_err(|_| format!("bad point count '{}' in grid", s.trim()))
    };
    let parts: Vec<&str> = t.split(':').collect();
    let grid = match parts.as_slice() {
        [single] => single.split(',').map(num).collect::<Result<Vec<_>, _>>()?,
        ["open", n] => uniform_open(count(n)?),
        ["log", lo, hi, n] => {
            let (lo, hi) = (num(lo)?, num(hi)?);
            if !(lo > 0.0 && hi > lo) {
                return Err(format!("log grid needs 0 < lo < hi, found {lo}:{hi}"));
            }
            log_spaced(lo, hi, count(n)?)
        }
        [lo, hi, n] => {
            let (lo, hi, n) = (num(lo)?, num(hi)?, count(n)?);
            if n == 1 {
                vec![lo]
            } else {
                uniform_closed(n)
                    .into_iter()
                    .map(|x| lo + (hi - lo) * x)
                    .collect()
            }
        }
        _ => return Err(format!("cannot parse grid '{t}'")),
    };
    if grid.is_empty() {
        return Err("grid is empty".into());
    }
    if grid.iter().any(|x| !x.is_finite()) {
        return Err("grid values must be finite".into());
    }
    if grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err("grid values must be strictly increasing".into());
    }
    Ok(grid)
}

/// Resolves parameters and records every resolved value for the run manifest.
pub struct Resolver {
    file: ConfigFile,
    resolved: BTreeMap<String, String>,
    from_file: BTreeSet<String>,
}

impl Resolver {
    pub fn new(file: ConfigFile) -> Self {
        Resolver {
            file,
            resolved: BTreeMap::new(),
            from_file: BTreeSet::new(),
        }
    }

    /// Flag value if given, else file value, else `None`; the result is recorded.
    pub fn optional<T: ConfigValue>(
        &mut self,
        key: &str,
        flag: Option<T>,
    ) -> ConfigResult<Option<T>> {
        let value = match flag {
            Some(v) => Some(v),
            None => match self.file.values.get(key) {
                Some(fv) => {
                    self.from_file.insert(key.to_string());
                    Some(T::parse_value(&fv.text).map_err(|e| {
                        ConfigError(format!("{}: {e}", self.file.locate(key, &fv.origin)))
                    })?)
                }
                None => None,
            },
        };
        if let Some(v) = &value {
            self.resolved.insert(key.to_string(), v.render());
        }
        Ok(value)
    }

    pub fn value<T: ConfigValue>(
        &mut self,
        key: &str,
        flag: Option<T>,
        default: T,
    ) -> ConfigResult<T> {
        match self.optional(key, flag)? {
            Some(v) => Ok(v),
            None => {
                self.resolved.insert(key.to_string(), default.render());
                Ok(default)
            }
        }
    }

    pub fn required<T: ConfigValue>(&mut self, key: &str, flag: Option<T>) -> ConfigResult<T> {
        self.optional(key, flag)?
            .ok_or_else(|| ConfigError(format!("missing required parameter '{key}'")))
    }

    /// A boolean switch: `true` if the flag is set, else file value, else `false`.
    pub fn switch(&mut self, key: &str, flag: bool) -> ConfigResult<bool> {
        self.value(key, flag.then_some(true), false)
    }

    /// Rejects a resolved value with a message that points at its source.
    pub fn check(&self, key: &str, ok: bool, requirement: &str) -> ConfigResult<()> {
        if ok {
            return Ok(());
        }
        let value = self.resolved.get(key).map(String::as_str).unwrap_or("?");
        let location = match self.file.values.get(key) {
            Some(fv) if self.from_file.contains(key) => self.file.locate(key, &fv.origin),
            _ => format!("'{key}'"),
        };
        Err(ConfigError(format!(
            "{location}: {requirement}, found {value}"
        )))
    }

    /// Keys set in the file but not consumed by this subcommand.
    pub fn unused_file_keys(&self) -> Vec<String> {
        self.file
            .values
            .keys()
            .filter(|k| !self.resolved.contains_key(*k))
            .cloned()
            .collect()
    }

    pub fn into_inputs(self) -> BTreeMap<String, String> {
        self.resolved
    }
}
