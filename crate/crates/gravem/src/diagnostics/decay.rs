//! Null-component decay probes and the null-decomposed equations of variation.
//!
//! Probes take sups of `|ᾱ|, |α|, |ρ|, |σ|` over the annulus `|r − t − q₀| ≤ halfwidth`,
//! which follows the outgoing sphere `r = t + q₀`. Exponents come from ordinary least squares
//! on `(ln t, ln value)`.

use super::{energy::time_jet, radius, DiagnosticsError};
use crate::em_model::EmModel;
use crate::evolution::{EmFields, GridState};
use crate::grid::Grid;
use crate::null_frame::{frame_at, null_decompose};
use crate::tensor_core::levi_civita3;

/// Annulus following the sphere `r = t + q0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProbeRegion {
    pub q0: f64,
    pub halfwidth: f64,
    /// Points closer to the origin are skipped; the null frame degenerates at `r = 0`.
    pub r_min: f64,
}

impl Default for ProbeRegion {
    fn default() -> Self {
        ProbeRegion {
            q0: 0.0,
            halfwidth: 1.0,
            r_min: 1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Probe {
    AlphaBar,
    Alpha,
    Rho,
    Sigma,
    FTotal,
    Gamma,
    /// `max(|α|, |ρ|, |σ|)`, the components expected to decay one power faster.
    Good,
}

impl Probe {
    pub const ALL: [Probe; 7] = [
        Probe::AlphaBar,
        Probe::Alpha,
        Probe::Rho,
        Probe::Sigma,
        Probe::FTotal,
        Probe::Gamma,
        Probe::Good,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Probe::AlphaBar => "alpha_bar",
            Probe::Alpha => "alpha",
            Probe::Rho => "rho",
            Probe::Sigma => "sigma",
            Probe::FTotal => "F_total",
            Probe::Gamma => "Gamma",
            Probe::Good => "good",
        }
    }

    pub fn from_name(s: &str) -> Option<Probe> {
        Probe::ALL.into_iter().find(|p| p.name() == s)
    }
}

/// Probe values at one output time.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ProbeSample {
    pub t: f64,
    pub alpha_bar: f64,
    pub alpha: f64,
    pub rho: f64,
    pub sigma: f64,
    /// `(|E|² + |B|²)^{½}`.
    pub f_total: f64,
    /// Gauge sup, filled in by the caller when a metric is evolved.
    pub gamma: f64,
}

impl ProbeSample {
    pub fn get(&self, probe: Probe) -> f64 {
        match probe {
            Probe::AlphaBar => self.alpha_bar,
            Probe::Alpha => self.alpha,
            Probe::Rho => self.rho,
            Probe::Sigma => self.sigma,
            Probe::FTotal => self.f_total,
            Probe::Gamma => self.gamma,
            Probe::Good => self.alpha.max(self.rho).max(self.sigma),
        }
    }
}

/// Null-component sups over the probe annulus at the state's time.
pub fn null_sups(state: &GridState, em: &EmFields, region: &ProbeRegion) -> ProbeSample {
    let grid = &state.grid;
    let t = state.t;
    let per_point = |idx: usize| -> Option<[f64; 5]> {
        let x = grid.point(idx);
        let r = radius(&x);
        if r < region.r_min || (r - t - region.q0).abs() > region.halfwidth {
            return None;
        }
        let frame = frame_at(&x).ok()?;
        let f = state.faraday_at(em, idx);
        let d = null_decompose(&f, &frame);
        let (e, b) = f.electric_magnetic();
        let norm = |v: [f64; 2]| (v[0] * v[0] + v[1] * v[1]).sqrt();
        let ft = (e.iter().chain(&b).map(|v| v * v).sum::<f64>()).sqrt();
        Some([norm(d.alpha_bar), norm(d.alpha), d.rho.abs(), d.sigma.abs(), ft])
    };
    let comp = |k: usize| grid.max(|idx| per_point(idx).map_or(0.0, |v| v[k]));
    ProbeSample {
        t,
        alpha_bar: comp(0),
        alpha: comp(1),
        rho: comp(2),
        sigma: comp(3),
        f_total: comp(4),
        gamma: 0.0,
    }
}

/// Power-law fit `value ∝ t^{exponent}` over a time window.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecayFit {
    pub probe: Probe,
    pub window: (f64, f64),
    pub exponent: f64,
    pub r_squared: f64,
}

/// Least-squares slope of `ln value` against `ln t` over samples with `t` in the window and
/// positive values. Fewer than six such samples is [`DiagnosticsError::WindowTooShort`].
pub fn fit_decay(probe: Probe, ts: &[f64], values: &[f64], window: (f64, f64)) -> Result<DecayFit, DiagnosticsError> {
    let pts: Vec<(f64, f64)> = ts
        .iter()
        .zip(values)
        .filter(|(t, v)| **t >= window.0 && **t <= window.1 && **t > 0.0 && **v > 0.0 && v.is_finite())
        .map(|(t, v)| (t.ln(), v.ln()))
        .collect();
    if pts.len() < 6 {
        return Err(DiagnosticsError::WindowTooShort { samples: pts.len() });
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let syy: f64 = pts.iter().map(|p| (p.1 - my).powi(2)).sum();
    let exponent = sxy / sxx;
    let ss_res: f64 = pts.iter().map(|p| (p.1 - my - exponent * (p.0 - mx)).powi(2)).sum();
    let r_squared = if syy > 0.0 { (1.0 - ss_res / syy).clamp(0.0, 1.0) } else { 1.0 };
    Ok(DecayFit {
        probe,
        window,
        exponent,
        r_squared,
    })
}

/// Fits each requested probe over a recorded history.
pub fn null_decay_probe(history: &[ProbeSample], probes: &[Probe], window: (f64, f64)) -> Result<Vec<DecayFit>, DiagnosticsError> {
    let ts: Vec<f64> = history.iter().map(|s| s.t).collect();
    probes
        .iter()
        .map(|&p| {
            let vs: Vec<f64> = history.iter().map(|s| s.get(p)).collect();
            fit_decay(p, &ts, &vs, window)
        })
        .collect()
}

/// Residuals of the flat null transport equations for `σ` and `ρ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EovResidual {
    pub sigma_sup: f64,
    pub sigma_l2: f64,
    pub rho_sup: f64,
    pub rho_l2: f64,
}

fn omega_at(grid: &Grid, idx: usize) -> [f64; 3] {
    let x = grid.point(idx);
    let r = radius(&x);
    if r == 0.0 {
        [0.0; 3]
    } else {
        [x[0] / r, x[1] / r, x[2] / r]
    }
}

fn dot3(a: [f64; 3], c: [f64; 3]) -> f64 {
    a[0] * c[0] + a[1] * c[1] + a[2] * c[2]
}

fn at3(f: &[Vec<f64>; 3], idx: usize) -> [f64; 3] {
    [f[0][idx], f[1][idx], f[2][idx]]
}

/// Sampled `σ`, `ρ`, `ᾱ_j` and the rates `(Ė, Ḃ)` the transport residuals need.
struct NullFields<'a> {
    grid: &'a Grid,
    sigma: Vec<f64>,
    rho: Vec<f64>,
    abar: [Vec<f64>; 3],
    e_dot: &'a [Vec<f64>; 3],
    b_dot: &'a [Vec<f64>; 3],
}

impl NullFields<'_> {
    /// `(σ residual, ρ residual)` at one point with `r > 0`.
    fn residual(&self, idx: usize, r: f64) -> (f64, f64) {
        let grid = self.grid;
        let w = omega_at(grid, idx);
        let nb = grid.neighbours(idx);
        let radial = |f: &[f64]| (0..3).map(|a| w[a] * grid.d1_at(f, &nb, a)).sum::<f64>();
        let mut proj = 0.0;
        let mut area = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                let da = grid.d1_at(&self.abar[j], &nb, i);
                let delta = if i == j { 1.0 } else { 0.0 };
                proj += (delta - w[i] * w[j]) * da;
                for k in 0..3 {
                    area += levi_civita3(i, j, k) * w[k] * da;
                }
            }
        }
        let sig_t = dot3(w, at3(self.b_dot, idx));
        let rho_t = -dot3(w, at3(self.e_dot, idx));
        (
            sig_t - radial(&self.sigma) - 2.0 * self.sigma[idx] / r + area,
            rho_t - radial(&self.rho) + proj - 2.0 * self.rho[idx] / r,
        )
    }
}

/// `∇_uLσ − 2r⁻¹σ + υ^{μν}∇_μᾱ_ν` and `∇_uLρ + m̸^{μν}∇_μᾱ_ν − 2r⁻¹ρ` on `r_min ≤ r ≤ r_max`.
///
/// Uses the frame-free forms `σ = ω·B`, `ρ = −ω·E`, `ᾱ_j = (E − ω(ω·E) − ω×B)_j`, the projector
/// `m̸^{ij} = δ^{ij} − ω^iω^j` and the unit area form `υ^{ij} = [ijk]ω_k`, so `υ(e₁, e₂) = 1`.
/// Time derivatives are taken from `(Ė, Ḃ)`; spatial ones from the stencils.
pub fn eov_null_residual_fields(
    grid: &Grid,
    e: &[Vec<f64>; 3],
    b: &[Vec<f64>; 3],
    e_dot: &[Vec<f64>; 3],
    b_dot: &[Vec<f64>; 3],
    r_range: (f64, f64),
) -> EovResidual {
    let sigma = grid.map_points(|i| dot3(omega_at(grid, i), at3(b, i)));
    let rho = grid.map_points(|i| -dot3(omega_at(grid, i), at3(e, i)));
    let abar = std::array::from_fn(|j| {
        grid.map_points(|i| {
            let (w, ev, bv) = (omega_at(grid, i), at3(e, i), at3(b, i));
            let cross = [w[1] * bv[2] - w[2] * bv[1], w[2] * bv[0] - w[0] * bv[2], w[0] * bv[1] - w[1] * bv[0]];
            ev[j] - w[j] * dot3(w, ev) - cross[j]
        })
    });
    let fields = NullFields { grid, sigma, rho, abar, e_dot, b_dot };
    let inside = |idx: usize| {
        let r = radius(&grid.point(idx));
        (r >= r_range.0 && r <= r_range.1 && r > 0.0).then_some(r)
    };
    let sq = grid.sum_vec(2, |idx, out| {
        if let Some(r) = inside(idx) {
            let (a, c) = fields.residual(idx, r);
            out[0] = a * a;
            out[1] = c * c;
        }
    });
    let sup = |pick: fn((f64, f64)) -> f64| {
        grid.max(|idx| inside(idx).map_or(0.0, |r| pick(fields.residual(idx, r)).abs()))
    };
    EovResidual {
        sigma_sup: sup(|p| p.0),
        sigma_l2: (sq[0] * grid.cell_volume()).sqrt(),
        rho_sup: sup(|p| p.1),
        rho_l2: (sq[1] * grid.cell_volume()).sqrt(),
    }
}

/// [`eov_null_residual_fields`] for an evolved state, with `(Ė, Ḃ)` from the time jet.
pub fn eov_null_residual(state: &GridState, model: &EmModel, r_range: (f64, f64)) -> Result<EovResidual, DiagnosticsError> {
    let jet = time_jet(state, model, 1)?;
    Ok(eov_null_residual_fields(&state.grid, &jet.e[0], &state.b, &jet.e[1], &jet.rates[0].b, r_range))
}
