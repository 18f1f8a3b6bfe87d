//! Ratio probes for the weighted Klainerman–Sobolev and Hardy inequalities.
//!
//! Both sides are evaluated on grid quadrature for a scalar spacetime function `φ(t, x)`.
//! The inequalities hold with unspecified constants, so the probes report ratios whose
//! stability under refinement and across families is what gets tested.

use super::jet::{sampled_jet, Jet};
use super::{radius, weight_w, WeightSpec};
use crate::grid::Grid;
use crate::null_frame::KillingField;
use crate::tensor_core::Vec4;

/// Difference step for sampling jets of analytic test functions.
pub const SAMPLE_STEP: f64 = 1e-2;

/// Number of `𝒵` multi-indices with `|I| ≤ 2`.
const KS_TERMS: usize = 1 + 11 + 121;

/// `Z^I φ` for every ordered `I` with `|I| ≤ 2`, empty index first.
fn z_values(jet: &Jet, x4: &Vec4, fields: &[KillingField], out: &mut [f64]) {
    out[0] = jet.value();
    let mut k = 1;
    let once: Vec<Jet> = fields.iter().map(|z| jet.apply_vector(&z.at(x4), &z.c_mixed())).collect();
    for j in &once {
        out[k] = j.value();
        k += 1;
    }
    for j in &once {
        for z in fields {
            out[k] = j.apply_vector(&z.at(x4), &z.c_mixed()).value();
            k += 1;
        }
    }
}

/// `max_x (1+t+|x|)[(1+|q|)w(q)]^{½}|φ(t,x)|` divided by `Σ_{|I|≤2} ‖w^{½} ∇_𝒵^I φ(t,·)‖_{L²}`;
/// zero when `φ` vanishes on the grid.
pub fn ks_ratio(phi: &(dyn Fn(&Vec4) -> f64 + Sync), t: f64, grid: &Grid, spec: &WeightSpec) -> f64 {
    let fields = KillingField::all();
    let lhs = grid.max(|idx| {
        let x = grid.point(idx);
        let r = radius(&x);
        let q = r - t;
        (1.0 + t + r) * ((1.0 + q.abs()) * weight_w(q, spec)).sqrt() * phi(&[t, x[0], x[1], x[2]]).abs()
    });
    let sums = grid.sum_vec(KS_TERMS, |idx, out| {
        let x = grid.point(idx);
        let x4 = [t, x[0], x[1], x[2]];
        let w = weight_w(radius(&x) - t, spec);
        let jet = sampled_jet(phi, &x4, SAMPLE_STEP, 2);
        z_values(&jet, &x4, &fields, out);
        out.iter_mut().for_each(|v| *v = w * *v * *v);
    });
    let rhs: f64 = sums.iter().map(|s| (s * grid.cell_volume()).sqrt()).sum();
    if rhs == 0.0 {
        0.0
    } else {
        lhs / rhs
    }
}

/// `∫(1+t+|q|)^{a−1}(1+|q|)^{−2}|φ|²w` over `∫(1+t+|q|)^{a−1}|∂_rφ|²w`, for `a ∈ [−1, 1]`;
/// zero when `φ` vanishes on the grid.
pub fn hardy_ratio(phi: &(dyn Fn(&Vec4) -> f64 + Sync), t: f64, a: f64, grid: &Grid, spec: &WeightSpec) -> f64 {
    assert!((-1.0..=1.0).contains(&a), "Hardy exponent a must lie in [-1, 1]");
    let sums = grid.sum_vec(2, |idx, out| {
        let x = grid.point(idx);
        let r = radius(&x);
        let q = r - t;
        let x4 = [t, x[0], x[1], x[2]];
        let common = (1.0 + t + q.abs()).powf(a - 1.0) * weight_w(q, spec);
        let v = phi(&x4);
        out[0] = common * (1.0 + q.abs()).powi(-2) * v * v;
        if r > 0.0 {
            let grad = sampled_jet(phi, &x4, SAMPLE_STEP, 1).gradient();
            let dr = (x[0] * grad[1] + x[1] * grad[2] + x[2] * grad[3]) / r;
            out[1] = common * dr * dr;
        }
    });
    if sums[1] == 0.0 {
        0.0
    } else {
        sums[0] / sums[1]
    }
}
