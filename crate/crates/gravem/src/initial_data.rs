//! Reduced initial data `(g, ∂_t g, F)|_{t=0}` built from abstract data `(h̄, K, 𝔇, 𝔅, M)`.
//!
//! The slice metric is `ḡ = δ + χ(r)(2M/r)δ + h̄` and the lapse is `A² = 1 − χ(r)2M/r`.
//! The time derivatives of `g_{0μ}` are the unique values making `Γ^μ` vanish at `t = 0`.
//!
//! Abstract fields are one-forms on the slice. With the unit normal `N̂ = A⁻¹∂_t`,
//! `𝔅_j = −⋆F_{jκ}N̂^κ` and `𝔇_j = −⋆M_{jκ}N̂^κ` map to the coordinate fields
//! `B^i = ½[ijk]F_{jk}` and `D^i = ½[ijk]M_{jk}` through the same density,
//! `B = √ḡ ḡ⁻¹𝔅` and `D = √ḡ ḡ⁻¹𝔇`. The constraints `div_ḡ 𝔅 = div_ḡ 𝔇 = 0`
//! are therefore flat coordinate divergences of `B` and `D`.

use rayon::prelude::*;
use thiserror::Error;

use crate::em_model::{constitutive_invert, EmError, EmModel};
use crate::grid::Grid;
use crate::tensor_core::{
    assemble_metric, inverse3, tail_jet, CutoffSpec, SymTensor4, TensorError, TwoForm,
};

/// Storage order of symmetric 3×3 fields.
pub const SYM3_PAIRS: [(usize, usize); 6] = [(0, 0), (0, 1), (0, 2), (1, 1), (1, 2), (2, 2)];

pub fn sym3_index(i: usize, j: usize) -> usize {
    let (a, b) = if i <= j { (i, j) } else { (j, i) };
    match (a, b) {
        (0, 0) => 0,
        (0, 1) => 1,
        (0, 2) => 2,
        (1, 1) => 3,
        (1, 2) => 4,
        _ => 5,
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DataError {
    #[error("lapse collapses (A² = {a2:e}) at grid index {index}")]
    LapseCollapse { index: usize, a2: f64 },
    #[error("constitutive inversion failed at grid index {index}: {source}")]
    NoConvergence { index: usize, source: EmError },
    #[error("slice metric is not Lorentzian at grid index {index}: {source}")]
    Metric { index: usize, source: TensorError },
    #[error("{field} exceeds the falloff envelope at the outer boundary ({value:e} > {bound:e})")]
    FalloffViolation { field: &'static str, value: f64, bound: f64 },
}

/// Abstract data on the `t = 0` slice.
#[derive(Debug, Clone, PartialEq)]
pub struct AbstractData {
    pub grid: Grid,
    /// `h̄⁽¹⁾_{jk}` in [`SYM3_PAIRS`] order.
    pub h1_spatial: [Vec<f64>; 6],
    pub k: [Vec<f64>; 6],
    pub d_abs: [Vec<f64>; 3],
    pub b_abs: [Vec<f64>; 3],
    pub mass: f64,
    pub cutoff: CutoffSpec,
}

impl AbstractData {
    pub fn zero(grid: Grid) -> Self {
        let z = || grid.zeros();
        AbstractData {
            grid,
            h1_spatial: std::array::from_fn(|_| z()),
            k: std::array::from_fn(|_| z()),
            d_abs: std::array::from_fn(|_| z()),
            b_abs: std::array::from_fn(|_| z()),
            mass: 0.0,
            cutoff: CutoffSpec::default(),
        }
    }

    /// `ḡ_{jk}` at one grid point.
    pub fn slice_metric(&self, idx: usize) -> [[f64; 3]; 3] {
        let x = self.grid.point(idx);
        let tail = tail_jet(0.0, &x, self.mass, &self.cutoff).value;
        std::array::from_fn(|i| {
            std::array::from_fn(|j| {
                let delta = if i == j { 1.0 + tail } else { 0.0 };
                delta + self.h1_spatial[sym3_index(i, j)][idx]
            })
        })
    }

    /// Checks `|field| ≤ c (1 + r)^{−2−κ}` on the outer faces of the cube.
    pub fn check_falloff(&self, c: f64, kappa: f64) -> Result<(), DataError> {
        let g = &self.grid;
        let named: [(&'static str, &[Vec<f64>]); 4] = [
            ("h1_spatial", &self.h1_spatial),
            ("K", &self.k),
            ("D_abs", &self.d_abs),
            ("B_abs", &self.b_abs),
        ];
        for idx in 0..g.len() {
            if !g.ijk(idx).contains(&0) {
                continue;
            }
            let x = g.point(idx);
            let r = (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt();
            let bound = c * (1.0 + r).powf(-2.0 - kappa);
            for (name, fields) in named {
                for f in fields {
                    if f[idx].abs() > bound {
                        return Err(DataError::FalloffViolation {
                            field: name,
                            value: f[idx].abs(),
                            bound,
                        });
                    }
                }
            }
        }
        Ok(())
    }
}

/// Analytic data families.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DataFamily {
    Trivial,
    /// `B = curl(εG ẑ)`, `D = curl(εG x̂)` with `G = exp(−|x − c|²/w²)`.
    EmPulse { amplitude: f64, width: f64, center: [f64; 3] },
    TailOnly { mass: f64 },
    /// `h̄ = εG S`, `K = εG K₀` for fixed symmetric `S`, `K₀` and a Gaussian at the origin.
    MetricBump { amplitude: f64, width: f64 },
}

const BUMP_SHAPE: [f64; 6] = [1.0, 0.3, -0.2, -0.5, 0.25, 0.4];
const BUMP_RATE: [f64; 6] = [0.2, -0.4, 0.1, 0.6, 0.3, -0.5];

fn gaussian(x: &[f64; 3], c: &[f64; 3], w: f64) -> (f64, [f64; 3]) {
    let d = [x[0] - c[0], x[1] - c[1], x[2] - c[2]];
    let g = (-(d[0] * d[0] + d[1] * d[1] + d[2] * d[2]) / (w * w)).exp();
    (g, std::array::from_fn(|i| -2.0 * d[i] / (w * w) * g))
}

impl DataFamily {
    /// Coordinate fields `(B, D)` of the electromagnetic families, divergence free by construction.
    pub fn em_fields(&self, grid: &Grid) -> ([Vec<f64>; 3], [Vec<f64>; 3]) {
        match *self {
            DataFamily::EmPulse { amplitude, width, center } => {
                let comp = |f: fn(&[f64; 3]) -> f64| {
                    grid.sample(|x| {
                        let (_, dg) = gaussian(&x, &center, width);
                        amplitude * f(&dg)
                    })
                };
                (
                    [comp(|d| d[1]), comp(|d| -d[0]), grid.zeros()],
                    [grid.zeros(), comp(|d| d[2]), comp(|d| -d[1])],
                )
            }
            _ => (
                std::array::from_fn(|_| grid.zeros()),
                std::array::from_fn(|_| grid.zeros()),
            ),
        }
    }

    /// Abstract data with the family's own mass (zero unless `TailOnly`).
    pub fn abstract_data(&self, grid: &Grid) -> AbstractData {
        let mut data = AbstractData::zero(*grid);
        match *self {
            DataFamily::Trivial => {}
            DataFamily::TailOnly { mass } => data.mass = mass,
            DataFamily::MetricBump { amplitude, width } => {
                let g = grid.sample(|x| amplitude * gaussian(&x, &[0.0; 3], width).0);
                for s in 0..6 {
                    data.h1_spatial[s] = g.iter().map(|v| v * BUMP_SHAPE[s]).collect();
                    data.k[s] = g.iter().map(|v| v * BUMP_RATE[s]).collect();
                }
            }
            DataFamily::EmPulse { .. } => {
                let (b, d) = self.em_fields(grid);
                data.b_abs = b;
                data.d_abs = d;
            }
        }
        data
    }
}

/// Re-expresses coordinate fields `(B, D)` as abstract one-forms on `data`'s slice, `𝔅 = ḡB/√ḡ`.
pub fn set_coordinate_em(data: &mut AbstractData, b: &[Vec<f64>; 3], d: &[Vec<f64>; 3]) {
    let len = data.grid.len();
    let lowered: Vec<([f64; 3], [f64; 3])> = (0..len)
        .into_par_iter()
        .map(|idx| {
            let gbar = data.slice_metric(idx);
            let s = inverse3(&gbar).map_or(f64::NAN, |(_, det)| det.sqrt());
            let low = |v: [f64; 3]| -> [f64; 3] {
                std::array::from_fn(|i| (0..3).map(|j| gbar[i][j] * v[j]).sum::<f64>() / s)
            };
            (
                low([b[0][idx], b[1][idx], b[2][idx]]),
                low([d[0][idx], d[1][idx], d[2][idx]]),
            )
        })
        .collect();
    for i in 0..3 {
        data.b_abs[i] = lowered.iter().map(|p| p.0[i]).collect();
        data.d_abs[i] = lowered.iter().map(|p| p.1[i]).collect();
    }
}

/// Reduced data on the grid.
#[derive(Debug, Clone, PartialEq)]
pub struct ReducedData {
    pub grid: Grid,
    pub mass: f64,
    pub cutoff: CutoffSpec,
    pub g0: Vec<SymTensor4>,
    pub dtg0: Vec<SymTensor4>,
    pub f0: Vec<TwoForm>,
    pub lapse: Vec<f64>,
    /// Coordinate magnetic induction `B^i`, an evolved variable.
    pub b: [Vec<f64>; 3],
    /// Coordinate displacement `D^i`, an evolved variable.
    pub d: [Vec<f64>; 3],
}

struct PointData {
    g: SymTensor4,
    dtg: SymTensor4,
    f: TwoForm,
    b: [f64; 3],
    d: [f64; 3],
}

/// Applies the `t = 0` construction pointwise; spatial derivatives use the fourth-order stencil.
pub fn build_reduced(data: &AbstractData, model: &EmModel) -> Result<ReducedData, DataError> {
    let grid = data.grid;
    let len = grid.len();
    let gbar: Vec<[[f64; 3]; 3]> = (0..len).into_par_iter().map(|i| data.slice_metric(i)).collect();
    let a2: Vec<f64> = (0..len)
        .into_par_iter()
        .map(|i| 1.0 - tail_jet(0.0, &grid.point(i), data.mass, &data.cutoff).value)
        .collect();
    if let Some((index, &v)) = a2.iter().enumerate().find(|(_, v)| **v <= 0.0) {
        return Err(DataError::LapseCollapse { index, a2: v });
    }
    let lapse: Vec<f64> = a2.iter().map(|v| v.sqrt()).collect();
    let gbar_fields: [Vec<f64>; 6] =
        std::array::from_fn(|s| gbar.iter().map(|m| m[SYM3_PAIRS[s].0][SYM3_PAIRS[s].1]).collect());

    let points: Vec<Result<PointData, DataError>> = (0..len)
        .into_par_iter()
        .map(|idx| {
            let nb = grid.neighbours(idx);
            let gb = gbar[idx];
            let (gi, det) = inverse3(&gb).ok_or(DataError::Metric {
                index: idx,
                source: TensorError::NonLorentzian {
                    det: 0.0,
                    residual: f64::INFINITY,
                },
            })?;
            let a = lapse[idx];
            // dgb[a][b][c] = ∂_a ḡ_{bc}
            let mut dgb = [[[0.0; 3]; 3]; 3];
            for (ax, plane) in dgb.iter_mut().enumerate() {
                for (s, &(i, j)) in SYM3_PAIRS.iter().enumerate() {
                    let v = grid.d1_at(&gbar_fields[s], &nb, ax);
                    plane[i][j] = v;
                    plane[j][i] = v;
                }
            }
            let da: [f64; 3] = std::array::from_fn(|ax| grid.d1_at(&lapse, &nb, ax));
            let kk: [[f64; 3]; 3] = std::array::from_fn(|i| std::array::from_fn(|j| data.k[sym3_index(i, j)][idx]));

            let mut g = SymTensor4::zero();
            let mut dtg = SymTensor4::zero();
            g.set(0, 0, -a * a);
            let mut tr_k = 0.0;
            for i in 0..3 {
                for j in 0..3 {
                    tr_k += gi[i][j] * kk[i][j];
                }
            }
            dtg.set(0, 0, -2.0 * a * a * a * tr_k);
            for j in 0..3 {
                let mut s1 = 0.0;
                let mut s2 = 0.0;
                for p in 0..3 {
                    for q in 0..3 {
                        s1 += gi[p][q] * dgb[p][q][j];
                        s2 += gi[p][q] * dgb[j][p][q];
                    }
                }
                dtg.set(0, j + 1, a * a * (s1 - 0.5 * s2) - a * da[j]);
                for k in j..3 {
                    g.set(j + 1, k + 1, gb[j][k]);
                    dtg.set(j + 1, k + 1, 2.0 * a * kk[j][k]);
                }
            }

            let s = det.sqrt();
            let raise = |v: [f64; 3]| -> [f64; 3] {
                std::array::from_fn(|i| s * (0..3).map(|j| gi[i][j] * v[j]).sum::<f64>())
            };
            let b = raise([data.b_abs[0][idx], data.b_abs[1][idx], data.b_abs[2][idx]]);
            let d = raise([data.d_abs[0][idx], data.d_abs[1][idx], data.d_abs[2][idx]]);
            let metric = assemble_metric(&SymTensor4::zero(), &g.sub(&SymTensor4::minkowski()))
                .map_err(|source| DataError::Metric { index: idx, source })?;
            let inv = constitutive_invert(model, &metric, &b, &d)
                .map_err(|source| DataError::NoConvergence { index: idx, source })?;
            Ok(PointData {
                g,
                dtg,
                f: TwoForm::from_electric_magnetic(&inv.e, &b),
                b,
                d,
            })
        })
        .collect();

    let mut out = ReducedData {
        grid,
        mass: data.mass,
        cutoff: data.cutoff,
        g0: Vec::with_capacity(len),
        dtg0: Vec::with_capacity(len),
        f0: Vec::with_capacity(len),
        lapse,
        b: std::array::from_fn(|_| Vec::with_capacity(len)),
        d: std::array::from_fn(|_| Vec::with_capacity(len)),
    };
    for p in points {
        let p = p?;
        out.g0.push(p.g);
        out.dtg0.push(p.dtg);
        out.f0.push(p.f);
        for i in 0..3 {
            out.b[i].push(p.b[i]);
            out.d[i].push(p.d[i]);
        }
    }
    Ok(out)
}

/// Pointwise field with its sup and `L²` norms.
#[derive(Debug, Clone, PartialEq)]
pub struct Residual<const K: usize> {
    pub values: [Vec<f64>; K],
    pub sup: f64,
    pub l2: f64,
}

impl<const K: usize> Residual<K> {
    pub fn from_values(grid: &Grid, values: [Vec<f64>; K]) -> Self {
        let sup = values.iter().fold(0.0f64, |m, v| m.max(grid.max_abs(v)));
        let l2 = values
            .iter()
            .map(|v| grid.l2_norm(v).powi(2))
            .sum::<f64>()
            .sqrt();
        Residual { values, sup, l2 }
    }
}

/// `Γ^μ = −|g|^{-1/2} ∂_ν(√|g| g^{μν})` with the stencil applied to the densitised inverse metric.
pub fn gauge_vector(grid: &Grid, g: &[SymTensor4], dtg: &[SymTensor4]) -> Result<Residual<4>, TensorError> {
    let len = grid.len();
    let states: Vec<Result<_, TensorError>> = (0..len)
        .into_par_iter()
        .map(|i| assemble_metric(&SymTensor4::zero(), &g[i].sub(&SymTensor4::minkowski())))
        .collect();
    let mut metrics = Vec::with_capacity(len);
    for s in states {
        metrics.push(s?);
    }
    // dens[μ][j] = √|g| g^{μ j}
    let dens: [[Vec<f64>; 3]; 4] = std::array::from_fn(|mu| {
        std::array::from_fn(|j| {
            metrics
                .iter()
                .map(|m| m.sqrt_det() * m.g_inv().get(mu, j + 1))
                .collect()
        })
    });
    let out: Vec<[f64; 4]> = (0..len)
        .into_par_iter()
        .map(|idx| {
            let m = &metrics[idx];
            let gi = m.g_inv_mat();
            let sd = m.sqrt_det();
            let dt = dtg[idx].to_matrix();
            let tr: f64 = (0..4).map(|a| (0..4).map(|b| gi[a][b] * dt[a][b]).sum::<f64>()).sum();
            let nb = grid.neighbours(idx);
            std::array::from_fn(|mu| {
                let mut dt_dens = 0.5 * tr * gi[mu][0];
                for a in 0..4 {
                    for b in 0..4 {
                        dt_dens -= gi[mu][a] * gi[0][b] * dt[a][b];
                    }
                }
                let mut div = sd * dt_dens;
                for j in 0..3 {
                    div += grid.d1_at(&dens[mu][j], &nb, j);
                }
                -div / sd
            })
        })
        .collect();
    Ok(Residual::from_values(
        grid,
        std::array::from_fn(|mu| out.iter().map(|v| v[mu]).collect()),
    ))
}

pub fn gauge_residual_t0(rd: &ReducedData) -> Result<Residual<4>, TensorError> {
    gauge_vector(&rd.grid, &rd.g0, &rd.dtg0)
}

/// Flat coordinate divergence `∂_i V^i`.
pub fn divergence(grid: &Grid, v: &[Vec<f64>; 3]) -> Residual<1> {
    let div = grid.map_points(|idx| {
        let nb = grid.neighbours(idx);
        (0..3).map(|j| grid.d1_at(&v[j], &nb, j)).sum()
    });
    Residual::from_values(grid, [div])
}

/// `(div B, div D)` of the evolved pair at `t = 0`.
pub fn em_constraints_t0(rd: &ReducedData) -> (Residual<1>, Residual<1>) {
    (divergence(&rd.grid, &rd.b), divergence(&rd.grid, &rd.d))
}
