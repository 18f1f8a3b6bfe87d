//! Flat `key = value` run configuration.
//!
//! One assignment per line; `#` starts a comment. Every key may appear at most once and every
//! value is range checked while parsing, so a bad file fails before any work is done.

use std::collections::HashMap;
use std::fmt;
use std::path::PathBuf;

use gravem::diagnostics::WeightSpec;
use gravem::em_model::EmModel;
use gravem::grid::Grid;
use gravem::initial_data::DataFamily;

#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError {
    /// 1-based line of the offending assignment, if there is one.
    pub line: Option<usize>,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(line) => write!(f, "line {line}: {}", self.message),
            None => f.write_str(&self.message),
        }
    }
}

impl std::error::Error for ConfigError {}

const KEYS: [&str; 19] = [
    "grid.n",
    "grid.L",
    "cfl",
    "dissipation_eps",
    "t_final",
    "output.path",
    "output.every",
    "model",
    "beta",
    "weights.gamma",
    "weights.mu",
    "weights.gamma_prime",
    "weights.mu_prime",
    "weights.delta",
    "data.family",
    "data.amplitude",
    "data.width",
    "data.mass",
    "seed",
];

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub grid: Grid,
    pub cfl: f64,
    pub dissipation_eps: f64,
    pub t_final: f64,
    /// Output directory; receives `diagnostics.csv` and the snapshots.
    pub output_path: PathBuf,
    /// Steps between CSV rows and snapshots.
    pub output_every: usize,
    pub model: EmModel,
    pub weights: WeightSpec,
    pub family: DataFamily,
    /// Accepted for run records; every data family is deterministic.
    pub seed: u64,
}

/// Raw assignments with the line each came from.
struct Entries(HashMap<String, (usize, String)>);

impl Entries {
    fn parse(text: &str) -> Result<Entries, ConfigError> {
        let mut map = HashMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let err = |message: String| ConfigError { line: Some(line), message };
            let (key, value) = content.split_once('=').ok_or_else(|| err(format!("expected `key = value`, found `{content}`")))?;
            let (key, value) = (key.trim(), value.trim());
            if !KEYS.contains(&key) {
                return Err(err(format!("unknown key `{key}`")));
            }
            if value.is_empty() {
                return Err(err(format!("`{key}` has no value")));
            }
            if let Some((first, _)) = map.insert(key.to_string(), (line, value.to_string())) {
                return Err(err(format!("`{key}` already set on line {first}")));
            }
        }
        Ok(Entries(map))
    }

    fn raw(&self, key: &str) -> Option<(usize, &str)> {
        self.0.get(key).map(|(l, v)| (*l, v.as_str()))
    }

    fn required(&self, key: &str) -> Result<(usize, &str), ConfigError> {
        self.raw(key).ok_or_else(|| ConfigError {
            line: None,
            message: format!("missing required key `{key}`"),
        })
    }

    fn line(&self, key: &str) -> Option<usize> {
        self.raw(key).map(|(l, _)| l)
    }

    /// Parses and range checks one value; `None` when the key is absent.
    fn value<T: std::str::FromStr>(&self, key: &str, valid: impl Fn(&T) -> bool, expect: &str) -> Result<Option<T>, ConfigError> {
        let Some((line, raw)) = self.raw(key) else { return Ok(None) };
        match raw.parse::<T>() {
            Ok(v) if valid(&v) => Ok(Some(v)),
            _ => Err(ConfigError {
                line: Some(line),
                message: format!("`{key}` must be {expect}, found `{raw}`"),
            }),
        }
    }

    fn need<T: std::str::FromStr>(&self, key: &str, valid: impl Fn(&T) -> bool, expect: &str) -> Result<T, ConfigError> {
        self.required(key)?;
        Ok(self.value(key, valid, expect)?.expect("presence checked"))
    }
}

fn positive(x: &f64) -> bool {
    *x > 0.0 && x.is_finite()
}

fn non_negative(x: &f64) -> bool {
    *x >= 0.0 && x.is_finite()
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<RunConfig, ConfigError> {
        let e = Entries::parse(text)?;
        let n = e.need("grid.n", |n: &usize| *n >= 16 && n.is_multiple_of(8), "a multiple of 8 that is at least 16")?;
        let l = e.need("grid.L", positive, "a positive number")?;
        let grid = Grid::new(n, l).expect("grid ranges checked");
        let cfl = e.value("cfl", |c: &f64| *c > 0.0 && *c <= 1.0, "in (0, 1]")?.unwrap_or(0.25);
        let dissipation_eps = e.value("dissipation_eps", |d: &f64| (0.0..=1.0).contains(d), "in [0, 1]")?.unwrap_or(0.0);
        let t_final = e.need("t_final", non_negative, "a non-negative number")?;
        let output_path = PathBuf::from(e.required("output.path")?.1);
        let output_every = e.value("output.every", |k: &usize| *k >= 1, "a positive integer")?.unwrap_or(1);

        let model = match e.required("model")? {
            (_, "maxwell") => EmModel::Maxwell,
            (_, "born_infeld") => EmModel::BornInfeld {
                beta: e.value("beta", positive, "a positive number")?.unwrap_or(1.0),
            },
            (line, other) => {
                return Err(ConfigError {
                    line: Some(line),
                    message: format!("`model` must be `maxwell` or `born_infeld`, found `{other}`"),
                })
            }
        };

        let d = WeightSpec::default();
        let w = |key: &str, default: f64| e.value(key, positive, "a positive number").map(|v| v.unwrap_or(default));
        let weights = WeightSpec::new(
            w("weights.gamma", d.gamma())?,
            w("weights.mu", d.mu())?,
            w("weights.gamma_prime", d.gamma_prime())?,
            w("weights.mu_prime", d.mu_prime())?,
            w("weights.delta", d.delta())?,
        )
        .map_err(|err| ConfigError {
            line: ["weights.gamma", "weights.mu", "weights.gamma_prime", "weights.mu_prime", "weights.delta"]
                .iter()
                .filter_map(|k| e.line(k))
                .max(),
            message: err.to_string(),
        })?;

        let amplitude = || e.need("data.amplitude", |a: &f64| a.is_finite(), "a finite number");
        let width = || e.need("data.width", positive, "a positive number");
        let family = match e.required("data.family")? {
            (_, "trivial") => DataFamily::Trivial,
            (_, "em_pulse") => DataFamily::EmPulse {
                amplitude: amplitude()?,
                width: width()?,
                center: [0.0; 3],
            },
            (_, "metric_bump") => DataFamily::MetricBump {
                amplitude: amplitude()?,
                width: width()?,
            },
            (_, "tail_only") => DataFamily::TailOnly {
                mass: e.need("data.mass", non_negative, "a non-negative number")?,
            },
            (line, other) => {
                return Err(ConfigError {
                    line: Some(line),
                    message: format!("`data.family` must be one of trivial, em_pulse, metric_bump, tail_only, found `{other}`"),
                })
            }
        };
        let seed = e.value("seed", |_: &u64| true, "a non-negative integer")?.unwrap_or(0);

        Ok(RunConfig {
            grid,
            cfl,
            dissipation_eps,
            t_final,
            output_path,
            output_every,
            model,
            weights,
            family,
            seed,
        })
    }
}
