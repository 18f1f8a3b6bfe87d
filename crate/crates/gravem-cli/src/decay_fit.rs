//! `decay-fit`: power-law fit of one probe column of a `simulate` CSV.

use std::path::Path;

use gravem::diagnostics::{fit_decay, DecayFit, DiagnosticsError, Probe};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum DecayFitError {
    #[error("malformed CSV: {0}")]
    Malformed(String),
    #[error(transparent)]
    Fit(#[from] DiagnosticsError),
}

impl From<csv::Error> for DecayFitError {
    fn from(e: csv::Error) -> Self {
        DecayFitError::Malformed(e.to_string())
    }
}

/// CSV columns a probe reads; multi-column probes take the row maximum.
pub fn probe_columns(probe: Probe) -> &'static [&'static str] {
    match probe {
        Probe::AlphaBar => &["alphabar_sup"],
        Probe::Alpha => &["alpha_sup"],
        Probe::Rho => &["rho_sup"],
        Probe::Sigma => &["sigma_sup"],
        Probe::FTotal => &["F_total_sup"],
        Probe::Gamma => &["gauge_sup"],
        Probe::Good => &["alpha_sup", "rho_sup", "sigma_sup"],
    }
}

/// Parses `a,b` with `a < b`.
pub fn parse_window(s: &str) -> Result<(f64, f64), String> {
    let (a, b) = s.split_once(',').ok_or("expected `a,b`")?;
    let a: f64 = a.trim().parse().map_err(|_| format!("bad window start `{a}`"))?;
    let b: f64 = b.trim().parse().map_err(|_| format!("bad window end `{b}`"))?;
    if a < b {
        Ok((a, b))
    } else {
        Err(format!("window start {a} is not below end {b}"))
    }
}

/// Reads `t` and the probe values from a diagnostics CSV.
pub fn read_series(path: &Path, probe: Probe) -> Result<(Vec<f64>, Vec<f64>), DecayFitError> {
    let mut reader = csv::Reader::from_path(path)?;
    let header = reader.headers()?.clone();
    let column = |name: &str| {
        header
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| DecayFitError::Malformed(format!("missing column `{name}`")))
    };
    let t_col = column("t")?;
    let cols: Vec<usize> = probe_columns(probe).iter().map(|c| column(c)).collect::<Result<_, _>>()?;
    let (mut ts, mut vs) = (Vec::new(), Vec::new());
    for (i, record) in reader.records().enumerate() {
        let record = record?;
        let get = |c: usize| -> Result<f64, DecayFitError> {
            let raw = &record[c];
            raw.trim().parse().map_err(|_| DecayFitError::Malformed(format!("row {}: `{raw}` is not a number", i + 2)))
        };
        ts.push(get(t_col)?);
        let mut v = f64::NEG_INFINITY;
        for &c in &cols {
            v = v.max(get(c)?);
        }
        vs.push(v);
    }
    Ok((ts, vs))
}

pub fn decay_fit(path: &Path, probe: Probe, window: (f64, f64)) -> Result<DecayFit, DecayFitError> {
    let (ts, vs) = read_series(path, probe)?;
    Ok(fit_decay(probe, &ts, &vs, window)?)
}
