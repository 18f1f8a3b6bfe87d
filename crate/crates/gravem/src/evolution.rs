//! Method-of-lines evolution of the reduced system on the periodic grid.
//!
//! The metric is split as `g = m + h⁽⁰⁾ + h⁽¹⁾` with the analytic tail `h⁽⁰⁾` and the evolved
//! `h⁽¹⁾`, reduced to first order in time through `pi = ∂_t h⁽¹⁾`. The harmonic-reduced
//! Einstein equations are assembled exactly,
//!
//! ```text
//! (g⁻¹)^{αβ} ∂_α∂_β g_{μν} = 2 Q_{μν}(g, ∂g) − 2 (T_{μν} − ½ g_{μν} tr T),
//! ```
//!
//! where `Q = R + ½(g⁻¹)^{αβ}∂_α∂_β g − ½(g_{κν}∂_μΓ^κ + g_{κμ}∂_νΓ^κ)` carries no second
//! derivatives. The electromagnetic pair `(B, D)` follows the coordinate laws
//! `∂_t B = −curl E` and `∂_t D = curl H`, with `(E, H)` recovered pointwise by
//! [`constitutive_invert`] at the current metric.
//!
//! A state without metric fields evolves the electromagnetic pair on flat Minkowski space.

use rayon::prelude::*;
use thiserror::Error;

use crate::em_model::{constitutive_invert, stress_energy, trace, EmError, EmModel};
use crate::grid::Grid;
use crate::initial_data::ReducedData;
use crate::tensor_core::{
    assemble_metric, christoffel_first_kind, levi_civita3, tail_jet, CutoffSpec, MetricState,
    Rank3, Rank4, SymTensor4, TailJet, TensorError, TwoForm, MINKOWSKI, SYM_PAIRS,
};

/// Below this `|g^{00}|` the time direction is too close to null to isolate `∂_t²g`.
pub const MIN_G00_INV: f64 = 0.1;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvolutionError {
    #[error("|g^00| = {g00_inv:e} < 0.1 at grid index {index}")]
    MetricDegenerate { index: usize, g00_inv: f64 },
    #[error("metric is not Lorentzian at grid index {index}: {source}")]
    Metric { index: usize, source: TensorError },
    #[error("constitutive inversion failed at grid index {index}: {source}")]
    NoConvergence { index: usize, source: EmError },
    #[error("non-finite value in {field} at grid index {index}")]
    NanDetected { field: String, index: usize },
    #[error("step {step}: {source}")]
    Aborted { step: usize, source: Box<EvolutionError> },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepperConfig {
    pub cfl: f64,
    /// Kreiss–Oliger strength applied to `pi` and `(B, D)`.
    pub dissipation_eps: f64,
    /// Spatial accuracy; only 4 is implemented.
    pub fd_order: u32,
}

impl Default for StepperConfig {
    fn default() -> Self {
        StepperConfig {
            cfl: 0.25,
            dissipation_eps: 0.0,
            fd_order: 4,
        }
    }
}

/// Evolved metric perturbation, components in [`SYM_PAIRS`] order.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricFields {
    pub h1: [Vec<f64>; 10],
    pub pi: [Vec<f64>; 10],
}

/// Evolved variables at time `t`. Also used, with the same layout, for their time derivatives.
#[derive(Debug, Clone, PartialEq)]
pub struct GridState {
    pub grid: Grid,
    pub t: f64,
    pub mass: f64,
    pub cutoff: CutoffSpec,
    /// `None` evolves `(B, D)` on flat space.
    pub metric: Option<MetricFields>,
    pub b: [Vec<f64>; 3],
    pub d: [Vec<f64>; 3],
}

const AXES: [&str; 3] = ["x", "y", "z"];

impl GridState {
    /// `h⁽¹⁾ = g − m − h⁽⁰⁾(0)` and `pi = ∂_t g − ∂_t h⁽⁰⁾(0)`.
    pub fn from_reduced(rd: &ReducedData) -> Self {
        let grid = rd.grid;
        let tails: Vec<TailJet> = (0..grid.len())
            .into_par_iter()
            .map(|i| tail_jet(0.0, &grid.point(i), rd.mass, &rd.cutoff))
            .collect();
        let h1 = std::array::from_fn(|s| {
            let (i, j) = SYM_PAIRS[s];
            let diag = if i == j { 1.0 } else { 0.0 };
            (0..grid.len())
                .map(|idx| rd.g0[idx].get(i, j) - MINKOWSKI[i][j] - diag * tails[idx].value)
                .collect()
        });
        let pi = std::array::from_fn(|s| {
            let (i, j) = SYM_PAIRS[s];
            let diag = if i == j { 1.0 } else { 0.0 };
            (0..grid.len())
                .map(|idx| rd.dtg0[idx].get(i, j) - diag * tails[idx].d[0])
                .collect()
        });
        GridState {
            grid,
            t: 0.0,
            mass: rd.mass,
            cutoff: rd.cutoff,
            metric: Some(MetricFields { h1, pi }),
            b: rd.b.clone(),
            d: rd.d.clone(),
        }
    }

    /// Electromagnetic pair on flat space.
    pub fn flat_em(grid: Grid, b: [Vec<f64>; 3], d: [Vec<f64>; 3]) -> Self {
        GridState {
            grid,
            t: 0.0,
            mass: 0.0,
            cutoff: CutoffSpec::default(),
            metric: None,
            b,
            d,
        }
    }

    /// Same layout, all fields zero.
    pub fn zeros_like(&self) -> Self {
        let z = || self.grid.zeros();
        GridState {
            grid: self.grid,
            t: 0.0,
            mass: self.mass,
            cutoff: self.cutoff,
            metric: self.metric.as_ref().map(|_| MetricFields {
                h1: std::array::from_fn(|_| z()),
                pi: std::array::from_fn(|_| z()),
            }),
            b: std::array::from_fn(|_| z()),
            d: std::array::from_fn(|_| z()),
        }
    }

    pub fn field_names(&self) -> Vec<String> {
        let mut names = Vec::new();
        if self.metric.is_some() {
            for prefix in ["h1", "pi"] {
                for (i, j) in SYM_PAIRS {
                    names.push(format!("{prefix}_{i}{j}"));
                }
            }
        }
        for prefix in ["B", "D"] {
            for a in AXES {
                names.push(format!("{prefix}_{a}"));
            }
        }
        names
    }

    /// Fields in [`GridState::field_names`] order.
    pub fn fields(&self) -> Vec<&[f64]> {
        let mut out: Vec<&[f64]> = Vec::new();
        if let Some(m) = &self.metric {
            out.extend(m.h1.iter().map(|v| v.as_slice()));
            out.extend(m.pi.iter().map(|v| v.as_slice()));
        }
        out.extend(self.b.iter().map(|v| v.as_slice()));
        out.extend(self.d.iter().map(|v| v.as_slice()));
        out
    }

    pub fn fields_mut(&mut self) -> Vec<&mut [f64]> {
        let mut out: Vec<&mut [f64]> = Vec::new();
        if let Some(m) = &mut self.metric {
            out.extend(m.h1.iter_mut().map(|v| v.as_mut_slice()));
            out.extend(m.pi.iter_mut().map(|v| v.as_mut_slice()));
        }
        out.extend(self.b.iter_mut().map(|v| v.as_mut_slice()));
        out.extend(self.d.iter_mut().map(|v| v.as_mut_slice()));
        out
    }

    /// `self ← base + s·rate`, field by field.
    pub fn assign_axpy(&mut self, base: &GridState, s: f64, rate: &GridState) {
        for ((out, b), r) in self.fields_mut().into_iter().zip(base.fields()).zip(rate.fields()) {
            out.par_iter_mut()
                .zip(b.par_iter().zip(r.par_iter()))
                .for_each(|(o, (x, y))| *o = x + s * y);
        }
    }

    /// `self ← self + s·rate`.
    pub fn axpy(&mut self, s: f64, rate: &GridState) {
        for (out, r) in self.fields_mut().into_iter().zip(rate.fields()) {
            out.par_iter_mut().zip(r.par_iter()).for_each(|(o, y)| *o += s * y);
        }
    }

    /// First non-finite value, by field order then index.
    pub fn first_non_finite(&self) -> Option<(String, usize)> {
        let names = self.field_names();
        for (name, f) in names.into_iter().zip(self.fields()) {
            if let Some(i) = f.iter().position(|v| !v.is_finite()) {
                return Some((name, i));
            }
        }
        None
    }

    pub fn tail_at(&self, idx: usize) -> TailJet {
        if self.mass == 0.0 {
            return TailJet::default();
        }
        tail_jet(self.t, &self.grid.point(idx), self.mass, &self.cutoff)
    }

    pub fn h1_at(&self, idx: usize) -> SymTensor4 {
        match &self.metric {
            Some(m) => SymTensor4::from_entries(std::array::from_fn(|s| m.h1[s][idx])),
            None => SymTensor4::zero(),
        }
    }

    /// `(g, ∂_t g)` at one point.
    pub fn metric_jet_at(&self, idx: usize) -> (SymTensor4, SymTensor4) {
        let tail = self.tail_at(idx);
        let h0 = SymTensor4::diagonal(tail.value);
        let g = SymTensor4::minkowski().add(&h0).add(&self.h1_at(idx));
        let dt = match &self.metric {
            Some(m) => SymTensor4::from_entries(std::array::from_fn(|s| {
                let (i, j) = SYM_PAIRS[s];
                m.pi[s][idx] + if i == j { tail.d[0] } else { 0.0 }
            })),
            None => SymTensor4::zero(),
        };
        (g, dt)
    }

    pub fn metric_at(&self, idx: usize) -> Result<MetricState, EvolutionError> {
        if self.metric.is_none() {
            return Ok(MetricState::minkowski());
        }
        let h0 = SymTensor4::diagonal(self.tail_at(idx).value);
        assemble_metric(&h0, &self.h1_at(idx)).map_err(|source| EvolutionError::Metric { index: idx, source })
    }

    /// `(g, ∂_t g)` on the whole grid, for gauge diagnostics.
    pub fn metric_snapshot(&self) -> (Vec<SymTensor4>, Vec<SymTensor4>) {
        (0..self.grid.len()).into_par_iter().map(|i| self.metric_jet_at(i)).unzip()
    }

    /// Recovers `(E, H)` everywhere from `(B, D)` and the current metric.
    pub fn constitutive_fields(&self, model: &EmModel) -> Result<EmFields, EvolutionError> {
        let mut e: [Vec<f64>; 3] = std::array::from_fn(|_| self.grid.zeros());
        let mut h: [Vec<f64>; 3] = std::array::from_fn(|_| self.grid.zeros());
        {
            let [e0, e1, e2] = &mut e;
            let [h0, h1, h2] = &mut h;
            let mut outs: [&mut [f64]; 6] = [e0, e1, e2, h0, h1, h2];
            self.grid.fill_points(&mut outs, |idx, vals| {
                let metric = self.metric_at(idx)?;
                let b = [self.b[0][idx], self.b[1][idx], self.b[2][idx]];
                let d = [self.d[0][idx], self.d[1][idx], self.d[2][idx]];
                let inv = constitutive_invert(model, &metric, &b, &d)
                    .map_err(|source| EvolutionError::NoConvergence { index: idx, source })?;
                vals[..3].copy_from_slice(&inv.e);
                vals[3..].copy_from_slice(&inv.h);
                Ok(())
            })?;
        }
        Ok(EmFields { e, h })
    }

    /// `F_{μν}` at one point from `E` and `B`.
    pub fn faraday_at(&self, em: &EmFields, idx: usize) -> TwoForm {
        TwoForm::from_electric_magnetic(
            &[em.e[0][idx], em.e[1][idx], em.e[2][idx]],
            &[self.b[0][idx], self.b[1][idx], self.b[2][idx]],
        )
    }
}

/// Recovered `E_j = F_{j0}` and `H_j = −M_{j0}`.
#[derive(Debug, Clone, PartialEq)]
pub struct EmFields {
    pub e: [Vec<f64>; 3],
    pub h: [Vec<f64>; 3],
}

/// Second-derivative jet `ddg[ρ][σ][μ][ν] = ∂_ρ∂_σ g_{μν}`.
pub type MetricHessian = Rank4;

/// `Q_{μν} = R_{μν} + ½(g⁻¹)^{αβ}∂_α∂_β g_{μν} − ½(g_{κν}∂_μΓ^κ + g_{κμ}∂_νΓ^κ)` from a full jet.
///
/// Every second-derivative slot enters `Q` with total coefficient zero; the evaluation keeps them
/// so that the cancellation can be observed rather than assumed.
pub fn modified_ricci_jet(g: &MetricState, dg: &Rank3, ddg: Option<&MetricHessian>) -> SymTensor4 {
    let gi = g.g_inv_mat();
    let gm = g.g_mat();
    let first = christoffel_first_kind(dg);
    // dgi[ρ][κ][λ] = ∂_ρ g^{κλ} = −g^{κa} g^{λb} ∂_ρ g_{ab}
    let mut dgi = [[[0.0; 4]; 4]; 4];
    for rho in 0..4 {
        let mut tmp = [[0.0; 4]; 4];
        for k in 0..4 {
            for b in 0..4 {
                tmp[k][b] = (0..4).map(|a| gi[k][a] * dg[rho][a][b]).sum();
            }
        }
        for k in 0..4 {
            for l in k..4 {
                let v: f64 = -(0..4).map(|b| tmp[k][b] * gi[l][b]).sum::<f64>();
                dgi[rho][k][l] = v;
                dgi[rho][l][k] = v;
            }
        }
    }
    // gam[κ][μ][ν] = Γ^κ_{μν}
    let mut gam = [[[0.0; 4]; 4]; 4];
    for k in 0..4 {
        for m in 0..4 {
            for n in m..4 {
                let v: f64 = (0..4).map(|l| gi[k][l] * first[l][m][n]).sum();
                gam[k][m][n] = v;
                gam[k][n][m] = v;
            }
        }
    }
    // dgam[ρ][κ][μ][ν] = ∂_ρ Γ^κ_{μν}
    let mut dgam = [[[[0.0; 4]; 4]; 4]; 4];
    for rho in 0..4 {
        for k in 0..4 {
            for m in 0..4 {
                for n in m..4 {
                    let mut v = 0.0;
                    for l in 0..4 {
                        let mut dfirst = 0.0;
                        if let Some(dd) = ddg {
                            dfirst = 0.5 * (dd[rho][m][l][n] + dd[rho][n][m][l] - dd[rho][l][m][n]);
                        }
                        v += dgi[rho][k][l] * first[l][m][n] + gi[k][l] * dfirst;
                    }
                    dgam[rho][k][m][n] = v;
                    dgam[rho][k][n][m] = v;
                }
            }
        }
    }
    // dcon[ρ][κ] = ∂_ρ Γ^κ = ∂_ρ g^{μν} Γ^κ_{μν} + g^{μν} ∂_ρ Γ^κ_{μν}
    let mut dcon = [[0.0; 4]; 4];
    for rho in 0..4 {
        for k in 0..4 {
            let mut v = 0.0;
            for m in 0..4 {
                for n in 0..4 {
                    v += dgi[rho][m][n] * gam[k][m][n] + gi[m][n] * dgam[rho][k][m][n];
                }
            }
            dcon[rho][k] = v;
        }
    }
    let trace_gam: [f64; 4] = std::array::from_fn(|l| (0..4).map(|k| gam[k][k][l]).sum());
    SymTensor4::from_fn(|mu, nu| {
        let mut r = 0.0;
        for k in 0..4 {
            r += dgam[k][k][mu][nu] - dgam[mu][k][k][nu];
            r += trace_gam[k] * gam[k][mu][nu];
            for l in 0..4 {
                r -= gam[l][mu][k] * gam[k][l][nu];
            }
        }
        if let Some(dd) = ddg {
            for a in 0..4 {
                for b in 0..4 {
                    r += 0.5 * gi[a][b] * dd[a][b][mu][nu];
                }
            }
        }
        for k in 0..4 {
            r -= 0.5 * (gm[k][nu] * dcon[mu][k] + gm[k][mu] * dcon[nu][k]);
        }
        r
    })
}

/// `Q_{μν}(g, ∂g)`: [`modified_ricci_jet`] with the second-derivative slots empty.
pub fn ricci_lower_order(g: &MetricState, dg: &Rank3) -> SymTensor4 {
    modified_ricci_jet(g, dg, None)
}

/// `S_{μν} = T_{μν} − ½ g_{μν} tr T`.
fn trace_reversed(model: &EmModel, g: &MetricState, f: &TwoForm) -> Result<SymTensor4, EmError> {
    let t = stress_energy(model, g, f)?;
    let tr = trace(g, &t);
    Ok(t.sub(&g.g().scale(0.5 * tr)))
}

struct RhsContext<'a> {
    state: &'a GridState,
    em: &'a EmFields,
    model: &'a EmModel,
    dissipation: f64,
}

impl RhsContext<'_> {
    /// Writes `[∂_t h1 (10), ∂_t pi (10)]` at one point.
    fn metric_point(&self, idx: usize, out: &mut [f64]) -> Result<(), EvolutionError> {
        let st = self.state;
        let grid = &st.grid;
        let m = st.metric.as_ref().expect("metric point requires metric fields");
        let nb = grid.neighbours(idx);
        let tail = st.tail_at(idx);
        let metric = st.metric_at(idx)?;
        let gi = metric.g_inv_mat();
        if gi[0][0].abs() < MIN_G00_INV {
            return Err(EvolutionError::MetricDegenerate { index: idx, g00_inv: gi[0][0] });
        }

        let mut dg = [[[0.0; 4]; 4]; 4];
        // Spatial Hessian hs[a][b][s] = ∂_a∂_b h1_s and mixed time derivatives ht[a][s] = ∂_a pi_s.
        let mut hs = [[[0.0; 10]; 3]; 3];
        let mut ht = [[0.0; 10]; 3];
        for (s, &(i, j)) in SYM_PAIRS.iter().enumerate() {
            let diag = if i == j { 1.0 } else { 0.0 };
            let set = |dg: &mut Rank3, l: usize, v: f64| {
                dg[l][i][j] = v;
                dg[l][j][i] = v;
            };
            set(&mut dg, 0, m.pi[s][idx] + diag * tail.d[0]);
            for a in 0..3 {
                set(&mut dg, a + 1, grid.d1_at(&m.h1[s], &nb, a) + diag * tail.d[a + 1]);
                ht[a][s] = grid.d1_at(&m.pi[s], &nb, a) + diag * tail.dd[0][a + 1];
                for b in a..3 {
                    let v = grid.d2_at(&m.h1[s], &nb, a, b) + diag * tail.dd[a + 1][b + 1];
                    hs[a][b][s] = v;
                    hs[b][a][s] = v;
                }
            }
        }

        let q = ricci_lower_order(&metric, &dg);
        let f = st.faraday_at(self.em, idx);
        let s_tr = trace_reversed(self.model, &metric, &f)
            .map_err(|source| EvolutionError::NoConvergence { index: idx, source })?;
        for (s, &(i, j)) in SYM_PAIRS.iter().enumerate() {
            let mut rest = 2.0 * q.get(i, j) - 2.0 * s_tr.get(i, j);
            for a in 0..3 {
                rest -= 2.0 * gi[0][a + 1] * ht[a][s];
                for b in 0..3 {
                    rest -= gi[a + 1][b + 1] * hs[a][b][s];
                }
            }
            let diag = if i == j { 1.0 } else { 0.0 };
            let mut dpi = rest / gi[0][0] - diag * tail.dd[0][0];
            if self.dissipation != 0.0 {
                dpi += self.dissipation * grid.ko_at(&m.pi[s], &nb);
            }
            out[s] = m.pi[s][idx];
            out[10 + s] = dpi;
        }
        Ok(())
    }

    /// Writes `[∂_t B (3), ∂_t D (3)]` at one point.
    fn em_point(&self, idx: usize, out: &mut [f64]) {
        let grid = &self.state.grid;
        let nb = grid.neighbours(idx);
        for i in 0..3 {
            let mut curl_e = 0.0;
            let mut curl_h = 0.0;
            for j in 0..3 {
                for k in 0..3 {
                    let eps = levi_civita3(i, j, k);
                    if eps != 0.0 {
                        curl_e += eps * grid.d1_at(&self.em.e[k], &nb, j);
                        curl_h += eps * grid.d1_at(&self.em.h[k], &nb, j);
                    }
                }
            }
            out[i] = -curl_e;
            out[3 + i] = curl_h;
            if self.dissipation != 0.0 {
                out[i] += self.dissipation * grid.ko_at(&self.state.b[i], &nb);
                out[3 + i] += self.dissipation * grid.ko_at(&self.state.d[i], &nb);
            }
        }
    }
}

/// Time derivative of every evolved field, in [`GridState`] layout.
pub fn rhs(state: &GridState, model: &EmModel, stepper: &StepperConfig) -> Result<GridState, EvolutionError> {
    let em = state.constitutive_fields(model)?;
    rhs_with(state, &em, model, stepper.dissipation_eps)
}

fn rhs_with(state: &GridState, em: &EmFields, model: &EmModel, dissipation: f64) -> Result<GridState, EvolutionError> {
    let ctx = RhsContext {
        state,
        em,
        model,
        dissipation,
    };
    let mut out = state.zeros_like();
    out.t = state.t;
    let has_metric = state.metric.is_some();
    let mut outs = out.fields_mut();
    state.grid.fill_points(&mut outs, |idx, vals| {
        let split = if has_metric { 20 } else { 0 };
        if has_metric {
            ctx.metric_point(idx, &mut vals[..split])?;
        }
        ctx.em_point(idx, &mut vals[split..]);
        Ok(())
    })?;
    Ok(out)
}

/// `∂_t pi` for each of the ten components, without dissipation.
pub fn metric_rhs(state: &GridState, model: &EmModel) -> Result<[Vec<f64>; 10], EvolutionError> {
    let em = state.constitutive_fields(model)?;
    let r = rhs_with(state, &em, model, 0.0)?;
    Ok(r.metric.map(|m| m.pi).unwrap_or_else(|| std::array::from_fn(|_| state.grid.zeros())))
}

/// Three grid components of a spatial vector field.
pub type VectorField = [Vec<f64>; 3];

/// `(∂_t B, ∂_t D)`, without dissipation.
pub fn em_rhs(state: &GridState, model: &EmModel) -> Result<(VectorField, VectorField), EvolutionError> {
    let em = state.constitutive_fields(model)?;
    let ctx = RhsContext {
        state,
        em: &em,
        model,
        dissipation: 0.0,
    };
    let mut b: [Vec<f64>; 3] = std::array::from_fn(|_| state.grid.zeros());
    let mut d: [Vec<f64>; 3] = std::array::from_fn(|_| state.grid.zeros());
    {
        let [b0, b1, b2] = &mut b;
        let [d0, d1, d2] = &mut d;
        let mut outs: [&mut [f64]; 6] = [b0, b1, b2, d0, d1, d2];
        state.grid.fill_points(&mut outs, |idx, vals| {
            ctx.em_point(idx, vals);
            Ok::<(), EvolutionError>(())
        })?;
    }
    Ok((b, d))
}

/// Classical fourth-order Runge–Kutta step of the full coupled system.
pub fn rk4_step(state: &GridState, dt: f64, model: &EmModel, stepper: &StepperConfig) -> Result<GridState, EvolutionError> {
    let t = state.t;
    let k = rhs(state, model, stepper)?;
    let mut acc = state.clone();
    acc.axpy(dt / 6.0, &k);
    let mut tmp = state.clone();
    tmp.assign_axpy(state, 0.5 * dt, &k);
    tmp.t = t + 0.5 * dt;
    let k = rhs(&tmp, model, stepper)?;
    acc.axpy(dt / 3.0, &k);
    tmp.assign_axpy(state, 0.5 * dt, &k);
    let k = rhs(&tmp, model, stepper)?;
    acc.axpy(dt / 3.0, &k);
    tmp.assign_axpy(state, dt, &k);
    tmp.t = t + dt;
    let k = rhs(&tmp, model, stepper)?;
    acc.axpy(dt / 6.0, &k);
    acc.t = t + dt;
    if let Some((field, index)) = acc.first_non_finite() {
        return Err(EvolutionError::NanDetected { field, index });
    }
    Ok(acc)
}

/// Largest stable step: `cfl·dx/λ`, with `λ = 1 + sup|H|` bounding the characteristic speeds.
pub fn max_dt(state: &GridState, stepper: &StepperConfig) -> Result<f64, EvolutionError> {
    let mut lambda = 1.0;
    if state.metric.is_some() {
        let sup = state
            .grid
            .max(|idx| state.metric_at(idx).map_or(f64::NAN, |m| m.big_h().max_abs()));
        if sup.is_nan() {
            // Report the failing point precisely.
            for idx in 0..state.grid.len() {
                state.metric_at(idx)?;
            }
        }
        lambda += sup;
    }
    Ok(stepper.cfl * state.grid.dx / lambda)
}

/// Step plan for reaching `t_final` with equal steps no larger than [`max_dt`].
pub fn step_plan(state: &GridState, t_final: f64, stepper: &StepperConfig) -> Result<(usize, f64), EvolutionError> {
    if t_final <= 0.0 {
        return Ok((0, 0.0));
    }
    let dt_max = max_dt(state, stepper)?;
    let steps = (t_final / dt_max - 1e-9).ceil().max(1.0) as usize;
    Ok((steps, t_final / steps as f64))
}

/// Evolves to `t_final` with a fixed step. `sink(step, state)` runs at step 0, every `every`
/// steps and at the final step.
pub fn evolve(
    initial: GridState,
    t_final: f64,
    model: &EmModel,
    stepper: &StepperConfig,
    every: usize,
    sink: &mut dyn FnMut(usize, &GridState),
) -> Result<GridState, EvolutionError> {
    let abort = |step: usize| move |e: EvolutionError| EvolutionError::Aborted { step, source: Box::new(e) };
    let (steps, dt) = step_plan(&initial, t_final, stepper).map_err(abort(0))?;
    let every = every.max(1);
    let t0 = initial.t;
    let mut state = initial;
    sink(0, &state);
    for step in 1..=steps {
        state = rk4_step(&state, dt, model, stepper).map_err(abort(step))?;
        // Accumulating dt drifts by roundoff; the clock is recomputed from the step count.
        state.t = t0 + step as f64 * dt;
        if step % every == 0 || step == steps {
            sink(step, &state);
        }
    }
    Ok(state)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flat_jet_has_no_lower_order_curvature() {
        let q = ricci_lower_order(&MetricState::minkowski(), &[[[0.0; 4]; 4]; 4]);
        assert_eq!(q, SymTensor4::zero());
    }

    #[test]
    fn field_layout_matches_names() {
        let grid = Grid::new(16, 1.0).unwrap();
        let z = || std::array::from_fn(|_| grid.zeros());
        let s = GridState::flat_em(grid, z(), z());
        assert_eq!(s.field_names(), ["B_x", "B_y", "B_z", "D_x", "D_y", "D_z"]);
        assert_eq!(s.fields().len(), 6);
    }
}
