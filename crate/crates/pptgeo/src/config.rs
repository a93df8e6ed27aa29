//! Flat `key=value` experiment configuration with strict key checking.

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use pptgeo_core::geometry::GeometryConfig;
use pptgeo_core::Capacity;

use crate::error::{config, Result};

/// Environment variable overriding the dense dimension cap.
pub const MAX_DIM_ENV: &str = "PPTGEO_MAX_DIM";

/// Every key a config may set.
pub const KEYS: &[&str] = &[
    "experiment", "d", "ds", "l", "epsilon", "samples", "seed", "tol_eig", "tol_feas", "solver_tol", "out", "format", "schmidt", "grid", "in", "n", "random",
];

pub const DEFAULT_SEED: u64 = 1;
pub const DEFAULT_TOL_EIG: f64 = 1e-10;
pub const DEFAULT_TOL_FEAS: f64 = 1e-7;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            _ => Err(format!("format must be csv or json, got {s:?}")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Experiment {
    Construct,
    Bounds,
    Boost,
    Widths,
    Wigner,
    Squeeze,
    Gap,
    FidelityPpt,
}

impl Experiment {
    pub const ALL: [Experiment; 8] = [
        Experiment::Construct,
        Experiment::Bounds,
        Experiment::Boost,
        Experiment::Widths,
        Experiment::Wigner,
        Experiment::Squeeze,
        Experiment::Gap,
        Experiment::FidelityPpt,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Experiment::Construct => "construct",
            Experiment::Bounds => "bounds",
            Experiment::Boost => "boost",
            Experiment::Widths => "widths",
            Experiment::Wigner => "wigner",
            Experiment::Squeeze => "squeeze",
            Experiment::Gap => "gap",
            Experiment::FidelityPpt => "fidelity-ppt",
        }
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Experiment {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Experiment::ALL.into_iter().find(|e| e.name() == s).ok_or_else(|| format!("unknown experiment {s:?}"))
    }
}

/// Inclusive `l` and `d_s` ranges, written `lmin:lmax,dsmin:dsmax`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Grid {
    pub l: (u32, u32),
    pub d_s: (u64, u64),
}

impl Default for Grid {
    fn default() -> Self {
        Grid { l: (1, 20), d_s: (2, 16) }
    }
}

impl FromStr for Grid {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        fn range<T: FromStr + PartialOrd + Copy>(part: &str) -> Option<(T, T)> {
            let (a, b) = part.split_once(':')?;
            let (a, b) = (a.trim().parse().ok()?, b.trim().parse().ok()?);
            (a <= b).then_some((a, b))
        }
        let bad = || format!("grid must look like 1:20,2:16, got {s:?}");
        let (l, d_s) = s.split_once(',').ok_or_else(bad)?;
        Ok(Grid { l: range(l).ok_or_else(bad)?, d_s: range(d_s).ok_or_else(bad)? })
    }
}

/// A validated experiment configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub experiment: Experiment,
    pub d: Option<usize>,
    pub d_s: Option<usize>,
    pub l: Option<u32>,
    pub epsilon: Option<f64>,
    pub samples: Option<usize>,
    pub seed: u64,
    pub tol_eig: f64,
    pub tol_feas: f64,
    /// Value tolerance of the convex solvers; defaults by problem size.
    pub solver_tol: Option<f64>,
    pub out: Option<PathBuf>,
    pub format: Format,
    pub schmidt: Option<Vec<f64>>,
    pub grid: Option<Grid>,
    pub input: Option<PathBuf>,
    pub n: Option<usize>,
    pub random: usize,
    pub capacity: Capacity,
    pairs: BTreeMap<String, String>,
}

/// Parses `key=value` lines. Blank lines and lines starting with `#` are
/// skipped; a repeated or unknown key is an error.
pub fn parse_pairs(text: &str) -> Result<BTreeMap<String, String>> {
    let mut pairs = BTreeMap::new();
    for (k, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| config(format!("line {}: expected key=value, got {line:?}", k + 1)))?;
        let key = key.trim();
        if !KEYS.contains(&key) {
            return Err(config(format!("line {}: unknown key {key:?}", k + 1)));
        }
        if pairs.insert(key.to_string(), value.trim().to_string()).is_some() {
            return Err(config(format!("line {}: key {key:?} given twice", k + 1)));
        }
    }
    Ok(pairs)
}

/// Reads the capacity override from the environment, if set.
pub fn capacity_from_env() -> Result<Capacity> {
    match std::env::var(MAX_DIM_ENV) {
        Ok(v) => v.trim().parse::<usize>().ok().filter(|&n| n > 0).map(Capacity).ok_or_else(|| config(format!("{MAX_DIM_ENV} must be a positive integer, got {v:?}"))),
        Err(std::env::VarError::NotPresent) => Ok(Capacity::default()),
        Err(e) => Err(config(format!("{MAX_DIM_ENV}: {e}"))),
    }
}

fn parse<T: FromStr>(key: &str, value: &str) -> Result<T>
where
    T::Err: fmt::Display,
{
    value.parse().map_err(|e| config(format!("{key}: cannot parse {value:?}: {e}")))
}

fn positive(key: &str, value: &str) -> Result<f64> {
    let x: f64 = parse(key, value)?;
    if x > 0.0 && x.is_finite() {
        Ok(x)
    } else {
        Err(config(format!("{key} must be positive and finite, got {value}")))
    }
}

impl ExperimentConfig {
    pub fn from_pairs(pairs: BTreeMap<String, String>, capacity: Capacity) -> Result<Self> {
        if let Some(key) = pairs.keys().find(|k| !KEYS.contains(&k.as_str())) {
            return Err(config(format!("unknown key {key:?}")));
        }
        let get = |k: &str| pairs.get(k).map(String::as_str);
        let experiment = get("experiment").ok_or_else(|| config("no experiment given"))?.parse().map_err(config)?;
        let mut cfg = ExperimentConfig {
            experiment,
            d: get("d").map(|v| parse("d", v)).transpose()?,
            d_s: get("ds").map(|v| parse("ds", v)).transpose()?,
            l: get("l").map(|v| parse("l", v)).transpose()?,
            epsilon: get("epsilon").map(|v| parse("epsilon", v)).transpose()?,
            samples: get("samples").map(|v| parse("samples", v)).transpose()?,
            seed: get("seed").map(|v| parse("seed", v)).transpose()?.unwrap_or(DEFAULT_SEED),
            tol_eig: get("tol_eig").map(|v| positive("tol_eig", v)).transpose()?.unwrap_or(DEFAULT_TOL_EIG),
            tol_feas: get("tol_feas").map(|v| positive("tol_feas", v)).transpose()?.unwrap_or(DEFAULT_TOL_FEAS),
            solver_tol: get("solver_tol").map(|v| positive("solver_tol", v)).transpose()?,
            out: get("out").map(PathBuf::from),
            format: get("format").map(|v| v.parse().map_err(config)).transpose()?.unwrap_or(Format::Csv),
            schmidt: get("schmidt").map(|v| v.split(',').map(|x| parse("schmidt", x.trim())).collect::<Result<Vec<f64>>>()).transpose()?,
            grid: get("grid").map(|v| v.parse().map_err(config)).transpose()?,
            input: get("in").map(PathBuf::from),
            n: get("n").map(|v| parse("n", v)).transpose()?,
            random: get("random").map(|v| parse("random", v)).transpose()?.unwrap_or(0),
            capacity,
            pairs: BTreeMap::new(),
        };
        if cfg.samples == Some(0) {
            return Err(config("samples must be at least 1"));
        }
        if cfg.epsilon.is_some() && cfg.grid.is_some() {
            return Err(config("epsilon and grid are mutually exclusive"));
        }
        cfg.pairs = pairs;
        Ok(cfg)
    }

    pub fn from_text(text: &str, capacity: Capacity) -> Result<Self> {
        Self::from_pairs(parse_pairs(text)?, capacity)
    }

    /// The keys as given, for the manifest.
    pub fn echo(&self) -> &BTreeMap<String, String> {
        &self.pairs
    }

    /// Solver value tolerance for operators of dimension `n`: the configured
    /// value, else 1e-4 up to n = 16 and 1e-3 beyond.
    pub fn solver_tol_for(&self, n: usize) -> f64 {
        self.solver_tol.unwrap_or(if n <= 16 { 1e-4 } else { 1e-3 })
    }

    pub fn geometry(&self, n: usize) -> GeometryConfig {
        GeometryConfig { tol_feas: self.tol_feas, tol_value: self.solver_tol_for(n), ..GeometryConfig::default() }
    }
}
