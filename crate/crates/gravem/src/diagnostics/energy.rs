//! The weighted energy `𝓔²_k = Σ_{|I|≤k} ∫ {|∇∇_𝒵^I h⁽¹⁾|² + |ℒ_𝒵^I F|²} w(q) d³x`,
//! the abstract-data norm `E²_k` and per-output residual records.
//!
//! Norms are Euclidean sums over all spacetime components, so `|F|² = 2|E|² + 2|B|²`.
//! Time derivatives come from the evolution right-hand side; Z-derivatives act exactly on
//! pointwise jets built from the stencils (see [`super::jet`]).

use super::jet::{grid_jet, lie_form, multi_indices, spatial_partial, Jet, Reach, FORM_PAIRS};
use super::{radius, weight_w, DiagnosticsError, WeightSpec};
use crate::em_model::EmModel;
use crate::evolution::{rhs, GridState, StepperConfig};
use crate::grid::Grid;
use crate::initial_data::{divergence, gauge_vector, AbstractData, SYM3_PAIRS};
use crate::null_frame::KillingField;
use crate::tensor_core::SYM_PAIRS;

/// Parameter step of the differences taken along the time jet.
const TIME_FD_STEP: f64 = 1e-2;

/// Time derivatives of a state: `rates[i] = ∂_t^{i+1} u` and `e[a] = ∂_t^a E`.
#[derive(Debug, Clone)]
pub struct TimeJet {
    pub rates: Vec<GridState>,
    pub e: Vec<[Vec<f64>; 3]>,
}

fn shifted(state: &GridState, rates: &[GridState], s: f64) -> GridState {
    let mut out = state.clone();
    let mut coeff = 1.0;
    for (i, r) in rates.iter().enumerate() {
        coeff *= s / (i + 1) as f64;
        out.axpy(coeff, r);
    }
    out.t = state.t + s;
    out
}

/// Fourth-order derivative at `s = 0` from samples at `s = −2τ, −τ, τ, 2τ`.
fn d1_four(samples: [&[f64]; 4], tau: f64) -> Vec<f64> {
    let [m2, m1, p1, p2] = samples;
    (0..m1.len())
        .map(|i| (m2[i] - p2[i] + 8.0 * (p1[i] - m1[i])) / (12.0 * tau))
        .collect()
}

fn d2_four(samples: [&[f64]; 4], centre: &[f64], tau: f64) -> Vec<f64> {
    let [m2, m1, p1, p2] = samples;
    (0..m1.len())
        .map(|i| (16.0 * (p1[i] + m1[i]) - (p2[i] + m2[i]) - 30.0 * centre[i]) / (12.0 * tau * tau))
        .collect()
}

/// Time jet of order `≤ 2`. `∂_t²u` differentiates the right-hand side along `u + s∂_tu`;
/// the electric field is differentiated along the Taylor curve `u + s∂_tu + ½s²∂_t²u`.
pub fn time_jet(state: &GridState, model: &EmModel, order: usize) -> Result<TimeJet, DiagnosticsError> {
    assert!(order <= 2, "time jets stop at second order");
    let plain = StepperConfig::default();
    let mut rates = Vec::new();
    let e0 = state.constitutive_fields(model)?.e;
    if order == 0 {
        return Ok(TimeJet { rates, e: vec![e0] });
    }
    rates.push(rhs(state, model, &plain)?);
    let offsets = [-2.0, -1.0, 1.0, 2.0].map(|k| k * TIME_FD_STEP);
    if order == 2 {
        let mut samples = Vec::with_capacity(4);
        for s in offsets {
            samples.push(rhs(&shifted(state, &rates, s), model, &plain)?);
        }
        let mut second = state.zeros_like();
        for (f, out) in second.fields_mut().into_iter().enumerate() {
            let cols: Vec<&[f64]> = samples.iter().map(|r| r.fields()[f]).collect();
            out.copy_from_slice(&d1_four([cols[0], cols[1], cols[2], cols[3]], TIME_FD_STEP));
        }
        second.t = state.t;
        rates.push(second);
    }
    let mut es = Vec::with_capacity(4);
    for s in offsets {
        es.push(shifted(state, &rates, s).constitutive_fields(model)?.e);
    }
    let pick = |i: usize| [es[0][i].as_slice(), &es[1][i], &es[2][i], &es[3][i]];
    let mut e = vec![e0.clone()];
    e.push(std::array::from_fn(|i| d1_four(pick(i), TIME_FD_STEP)));
    if order == 2 {
        e.push(std::array::from_fn(|i| d2_four(pick(i), &e0[i], TIME_FD_STEP)));
    }
    Ok(TimeJet { rates, e })
}

fn sym_weight(s: usize) -> f64 {
    let (i, j) = SYM_PAIRS[s];
    if i == j {
        1.0
    } else {
        2.0
    }
}

/// `Σ_{γ,μ,ν} (∂_γ X_{μν})²` over the full symmetric tensor.
fn grad_sq(h: &[Jet; 10]) -> f64 {
    h.iter()
        .enumerate()
        .map(|(s, j)| sym_weight(s) * j.gradient().iter().map(|v| v * v).sum::<f64>())
        .sum()
}

/// `Σ_{μ,ν} F_{μν}²`.
fn form_sq(f: &[Jet; 6]) -> f64 {
    2.0 * f.iter().map(|j| j.value() * j.value()).sum::<f64>()
}

struct EnergyContext<'a> {
    state: &'a GridState,
    k: usize,
    spec: &'a WeightSpec,
    /// `h_levels[s][a] = ∂_t^a h⁽¹⁾_s`.
    h_levels: Option<Vec<Vec<&'a [f64]>>>,
    /// `f_levels[p][a]` with the sign of the slot folded into `f_signs`.
    f_levels: Vec<Vec<&'a [f64]>>,
    f_signs: [f64; 6],
    fields: Vec<KillingField>,
}

impl<'a> EnergyContext<'a> {
    fn new(state: &'a GridState, jet: &'a TimeJet, k: usize, spec: &'a WeightSpec) -> Self {
        let h_levels = state.metric.as_ref().map(|m| {
            (0..10)
                .map(|s| {
                    let mut v: Vec<&[f64]> = vec![&m.h1[s], &m.pi[s]];
                    for r in jet.rates.iter().take(k) {
                        v.push(&r.metric.as_ref().expect("rates share the state layout").pi[s]);
                    }
                    v
                })
                .collect()
        });
        // F_{0j} = −E_j, F_12 = B_z, F_13 = −B_y, F_23 = B_x.
        let b_level = |a: usize, i: usize| -> &'a [f64] {
            if a == 0 {
                &state.b[i]
            } else {
                &jet.rates[a - 1].b[i]
            }
        };
        let f_levels = FORM_PAIRS
            .iter()
            .map(|&(mu, nu)| {
                (0..=k)
                    .map(|a| match (mu, nu) {
                        (0, j) => jet.e[a][j - 1].as_slice(),
                        (1, 2) => b_level(a, 2),
                        (1, 3) => b_level(a, 1),
                        _ => b_level(a, 0),
                    })
                    .collect()
            })
            .collect();
        EnergyContext {
            state,
            k,
            spec,
            h_levels,
            f_levels,
            f_signs: [-1.0, -1.0, -1.0, 1.0, -1.0, 1.0],
            fields: KillingField::all(),
        }
    }

    /// Weighted integrand split by `|I| = 0, 1, 2`.
    fn point(&self, idx: usize, out: &mut [f64]) {
        let grid = &self.state.grid;
        let reach = Reach::new(grid, idx);
        let x = grid.point(idx);
        let t = self.state.t;
        let x4 = [t, x[0], x[1], x[2]];
        let h: Option<[Jet; 10]> = self
            .h_levels
            .as_ref()
            .map(|lv| std::array::from_fn(|s| grid_jet(grid, &lv[s], &reach, self.k + 1)));
        let f: [Jet; 6] = std::array::from_fn(|p| {
            let mut j = grid_jet(grid, &self.f_levels[p], &reach, self.k);
            j.c.iter_mut().for_each(|v| *v *= self.f_signs[p]);
            j
        });
        let w = weight_w(radius(&x) - t, self.spec);
        out[0] = w * (h.as_ref().map_or(0.0, grad_sq) + form_sq(&f));
        if self.k == 0 {
            return;
        }
        for z1 in &self.fields {
            let (zv, dz) = (z1.at(&x4), z1.c_mixed());
            let h1 = h.as_ref().map(|h| h.each_ref().map(|j| j.apply_vector(&zv, &dz)));
            let f1 = lie_form(&f, &zv, &dz);
            out[1] += w * (h1.as_ref().map_or(0.0, grad_sq) + form_sq(&f1));
            if self.k < 2 {
                continue;
            }
            for z2 in &self.fields {
                let (zv2, dz2) = (z2.at(&x4), z2.c_mixed());
                let h2 = h1.as_ref().map(|h| h.each_ref().map(|j| j.apply_vector(&zv2, &dz2)));
                let f2 = lie_form(&f1, &zv2, &dz2);
                out[2] += w * (h2.as_ref().map_or(0.0, grad_sq) + form_sq(&f2));
            }
        }
    }
}

/// `𝓔²_j` for `j ≤ k` from a precomputed time jet of order `≥ k`; orders above `k` are NaN.
pub fn energies_with_jet(state: &GridState, jet: &TimeJet, k: usize, spec: &WeightSpec) -> [f64; 3] {
    assert!(k <= 2 && jet.e.len() > k, "energy order exceeds the time jet");
    let ctx = EnergyContext::new(state, jet, k, spec);
    let sums = state.grid.sum_vec(3, |idx, out| ctx.point(idx, out));
    let vol = state.grid.cell_volume();
    let mut acc = 0.0;
    std::array::from_fn(|j| {
        if j > k {
            return f64::NAN;
        }
        acc += sums[j] * vol;
        acc
    })
}

/// `𝓔²_k` of the state.
pub fn energy_norm(state: &GridState, model: &EmModel, k: usize, spec: &WeightSpec) -> Result<f64, DiagnosticsError> {
    let jet = time_jet(state, model, k)?;
    Ok(energies_with_jet(state, &jet, k, spec)[k])
}

fn multinomial(beta: [usize; 3]) -> f64 {
    let fact = |n: usize| (1..=n).product::<usize>() as f64;
    fact(beta[0] + beta[1] + beta[2]) / (fact(beta[0]) * fact(beta[1]) * fact(beta[2]))
}

/// `Σ_{lo≤|β|≤hi} ∫ (1+|x|²)^{η+|β|−lo} |∇̲^β U|² d³x`, summing over ordered index tuples.
fn weighted_sobolev(grid: &Grid, comps: &[(&[f64], f64)], lo: usize, hi: usize, eta: f64) -> f64 {
    let betas: Vec<([usize; 3], f64)> = multi_indices(hi)
        .iter()
        .filter(|b| b[0] == 0 && (lo..=hi).contains(&(b[1] + b[2] + b[3])))
        .map(|b| {
            let s = [b[1], b[2], b[3]];
            (s, multinomial(s))
        })
        .collect();
    grid.sum(|idx| {
        let reach = Reach::new(grid, idx);
        let x = grid.point(idx);
        let base = 1.0 + x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
        let mut s = 0.0;
        for (beta, mult) in &betas {
            let order = beta[0] + beta[1] + beta[2];
            let weight = base.powf(eta + (order - lo) as f64);
            let mut sq = 0.0;
            for (f, cw) in comps {
                let v = spatial_partial(grid, f, &reach, *beta);
                sq += cw * v * v;
            }
            s += weight * mult * sq;
        }
        s
    }) * grid.cell_volume()
}

fn sym_comps(f: &[Vec<f64>; 6]) -> Vec<(&[f64], f64)> {
    f.iter()
        .zip(SYM3_PAIRS)
        .map(|(v, (i, j))| (v.as_slice(), if i == j { 1.0 } else { 2.0 }))
        .collect()
}

fn vec_comps(f: &[Vec<f64>; 3]) -> Vec<(&[f64], f64)> {
    f.iter().map(|v| (v.as_slice(), 1.0)).collect()
}

/// `E²_k = ‖∇̲h̄⁽¹⁾‖² + ‖K‖² + ‖𝔇‖² + ‖𝔅‖²` in `H^k_{1/2+γ}`, with
/// `‖U‖²_{H^k_η} = Σ_{|I|≤k} ∫ (1+|x|²)^{η+|I|} |∇̲^I U|² d³x`.
pub fn data_norm(data: &AbstractData, k: usize, spec: &WeightSpec) -> f64 {
    assert!(k <= 2, "data norms stop at k = 2");
    let grid = &data.grid;
    let eta = 0.5 + spec.gamma();
    weighted_sobolev(grid, &sym_comps(&data.h1_spatial), 1, k + 1, eta)
        + weighted_sobolev(grid, &sym_comps(&data.k), 0, k, eta)
        + weighted_sobolev(grid, &vec_comps(&data.d_abs), 0, k, eta)
        + weighted_sobolev(grid, &vec_comps(&data.b_abs), 0, k, eta)
}

/// One diagnostics output: energies `𝓔_k` (not squared) and the residual monitors.
#[derive(Debug, Clone, PartialEq)]
pub struct EnergyRecord {
    pub t: f64,
    /// `𝓔_k` for `k = 0, 1, 2`; NaN above the computed order.
    pub energy_k: [f64; 3],
    /// `E_k` of the abstract data, recorded at `t = 0` only.
    pub data_norm: Option<f64>,
    pub gauge_sup: f64,
    pub gauge_l2: f64,
    pub div_b_l2: f64,
    pub div_d_l2: f64,
}

/// Energies up to order `k` and the gauge and constraint residuals of a state.
pub fn energy_record(state: &GridState, model: &EmModel, k: usize, spec: &WeightSpec) -> Result<EnergyRecord, DiagnosticsError> {
    let jet = time_jet(state, model, k)?;
    let energy_k = energies_with_jet(state, &jet, k, spec).map(f64::sqrt);
    let (gauge_sup, gauge_l2) = match &state.metric {
        Some(_) => {
            let (g, dtg) = state.metric_snapshot();
            let r = gauge_vector(&state.grid, &g, &dtg)?;
            (r.sup, r.l2)
        }
        None => (0.0, 0.0),
    };
    Ok(EnergyRecord {
        t: state.t,
        energy_k,
        data_norm: None,
        gauge_sup,
        gauge_l2,
        div_b_l2: divergence(&state.grid, &state.b).l2,
        div_d_l2: divergence(&state.grid, &state.d).l2,
    })
}
