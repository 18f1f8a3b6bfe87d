//! Property suites shared by `gravem verify` and the acceptance tests.
//!
//! Every `measure_*` function returns raw residuals, slopes or orders so that callers can
//! apply their own tolerances; [`run_suite`] bundles them into named [`Check`]s with the
//! default bounds. All sampling is seeded and deterministic.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::diagnostics::{
    canonical_stress, eov_null_residual_fields, stress_divergence_jet_check, variation_norm_sq, weight_w,
    DiagnosticsError, StressJet, WeightSpec,
};
use crate::em_model::{big_n, dec_check, symmetry_residuals, EmError, EmModel};
use crate::evolution::{modified_ricci_jet, ricci_lower_order};
use crate::grid::{Grid, GridError};
use crate::initial_data::{build_reduced, em_constraints_t0, gauge_residual_t0, DataError, DataFamily};
use crate::null_frame::{
    commutation_checks, frame_at, loglog_slope, mdot, null_decompose, null_recompose, p_form, q1h, FrameError,
    KillingField,
};
use crate::tensor_core::{
    assemble_metric, christoffel, hodge_dual_raised, invariants, inverse4, levi_civita, raise, identity_residuals,
    MetricState, Rank3, Rank4, SymTensor4, TensorError, TwoForm, Vec4, FORM_PAIRS,
};

#[derive(Debug, Error)]
pub enum VerifyError {
    #[error(transparent)]
    Tensor(#[from] TensorError),
    #[error(transparent)]
    Em(#[from] EmError),
    #[error(transparent)]
    Frame(#[from] FrameError),
    #[error(transparent)]
    Data(#[from] DataError),
    #[error(transparent)]
    Diagnostics(#[from] DiagnosticsError),
    #[error(transparent)]
    Grid(#[from] GridError),
    #[error("wave-gauge projection has a singular Jacobian")]
    SingularProjection,
    #[error("unknown suite {0:?}; expected one of identities, stress, commutation, constraints, null")]
    UnknownSuite(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Identities,
    Stress,
    Commutation,
    Constraints,
    Null,
}

impl Suite {
    pub const ALL: [Suite; 5] = [Suite::Identities, Suite::Stress, Suite::Commutation, Suite::Constraints, Suite::Null];

    pub fn name(&self) -> &'static str {
        match self {
            Suite::Identities => "identities",
            Suite::Stress => "stress",
            Suite::Commutation => "commutation",
            Suite::Constraints => "constraints",
            Suite::Null => "null",
        }
    }
}

impl std::str::FromStr for Suite {
    type Err = VerifyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| VerifyError::UnknownSuite(s.to_string()))
    }
}

/// A measured value and the closed interval it must lie in. NaN never passes.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub value: f64,
    pub lo: f64,
    pub hi: f64,
}

impl Check {
    pub fn at_most(name: &'static str, value: f64, hi: f64) -> Self {
        Check { name, value, lo: f64::NEG_INFINITY, hi }
    }

    pub fn at_least(name: &'static str, value: f64, lo: f64) -> Self {
        Check { name, value, lo, hi: f64::INFINITY }
    }

    pub fn within(name: &'static str, value: f64, lo: f64, hi: f64) -> Self {
        Check { name, value, lo, hi }
    }

    pub fn passed(&self) -> bool {
        self.value >= self.lo && self.value <= self.hi
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteReport {
    pub suite: Suite,
    pub checks: Vec<Check>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }
}

const MBI: EmModel = EmModel::BornInfeld { beta: 1.0 };
const MODELS: [EmModel; 2] = [EmModel::Maxwell, MBI];

fn uniform(rng: &mut ChaCha8Rng, amp: f64) -> f64 {
    if amp == 0.0 {
        0.0
    } else {
        rng.gen_range(-amp..amp)
    }
}

fn random_sym(rng: &mut ChaCha8Rng, amp: f64) -> SymTensor4 {
    SymTensor4::from_fn(|_, _| uniform(rng, amp))
}

fn random_form(rng: &mut ChaCha8Rng, amp: f64) -> TwoForm {
    TwoForm::from_entries(std::array::from_fn(|_| uniform(rng, amp)))
}

/// `m + h` with `h` uniform in `[−amp, amp)` componentwise.
fn random_metric(rng: &mut ChaCha8Rng, amp: f64) -> Result<MetricState, TensorError> {
    assemble_metric(&SymTensor4::zero(), &random_sym(rng, amp))
}

fn random_dg(rng: &mut ChaCha8Rng, amp: f64) -> Rank3 {
    std::array::from_fn(|_| random_sym(rng, amp).to_matrix())
}

fn bump(f: &TwoForm, slot: usize, by: f64) -> TwoForm {
    let mut e = *f.entries();
    e[slot] += by;
    TwoForm::from_entries(e)
}

fn amplitude_sweep(top: f64) -> Vec<f64> {
    (0..6).map(|i| top * 0.5f64.powi(i)).collect()
}

fn max4(n: &Rank4) -> f64 {
    n.iter().flatten().flatten().flatten().fold(0.0f64, |m, v| m.max(v.abs()))
}

// ---------------------------------------------------------------- identities

/// Worst `(algebraic, finite-difference)` residuals of the invariant identities over random `(g, F)`.
pub fn measure_identities(trials: usize, seed: u64) -> Result<(f64, f64), VerifyError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut alg, mut fd) = (0.0f64, 0.0f64);
    for _ in 0..trials {
        let g = random_metric(&mut rng, 0.3)?;
        let f = random_form(&mut rng, 1.0);
        let r = identity_residuals(&g, &f, 1e-5);
        alg = alg.max(r.det_identity).max(r.dual_contraction);
        fd = fd.max(r.df1).max(r.df2);
        if r.det_identity.is_nan() || r.dual_contraction.is_nan() || r.df1.is_nan() || r.df2.is_nan() {
            return Ok((f64::NAN, f64::NAN));
        }
    }
    Ok((alg, fd))
}

/// Convergence slope of central-difference partials of the quartic `F₍₁₎²F₍₂₎` against
/// their chain-rule values `2F₍₁₎F₍₂₎·2F^# + F₍₁₎²·⋆F^#`.
pub fn measure_identity_fd_slope(seed: u64) -> Result<f64, VerifyError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = random_metric(&mut rng, 0.2)?;
    let f = random_form(&mut rng, 1.0);
    let up = raise(&g, &f);
    let dual_up = hodge_dual_raised(&g, &f);
    let (f1, f2) = invariants(&g, &f);
    let quartic = |x: &TwoForm| {
        let (a, b) = invariants(&g, x);
        a * a * b
    };
    let steps = [1e-2, 5e-3, 2.5e-3, 1.25e-3];
    let errs: Vec<f64> = steps
        .iter()
        .map(|&h| {
            FORM_PAIRS.iter().enumerate().fold(0.0f64, |worst, (slot, &(i, j))| {
                let fd = (quartic(&bump(&f, slot, h)) - quartic(&bump(&f, slot, -h))) / (2.0 * h);
                let exact = 4.0 * f1 * f2 * up[i][j] + f1 * f1 * dual_up[i][j];
                worst.max((fd - exact).abs())
            })
        })
        .collect();
    Ok(loglog_slope(&steps, &errs))
}

/// Worst violation of the pair antisymmetries and pair exchange of `N^#` and `N_△`.
pub fn measure_material_symmetries(trials: usize, seed: u64) -> Result<f64, VerifyError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    for _ in 0..trials {
        let g = random_metric(&mut rng, 0.3)?;
        let f = random_form(&mut rng, 0.4);
        for model in MODELS {
            let t = big_n(&model, &g, &f)?;
            for r in symmetry_residuals(&t.n_sharp).into_iter().chain(symmetry_residuals(&t.n_triangle)) {
                worst = worst.max(r);
            }
        }
    }
    Ok(worst)
}

/// Worst `|N^# + ½∂²ℒ/∂F∂F − ½ℒ₂ε^#|` with a central-difference Hessian of step `h`.
fn hessian_residual(model: &EmModel, g: &MetricState, f: &TwoForm, h: f64) -> Result<f64, VerifyError> {
    let n = big_n(model, g, f)?.n_sharp;
    let (f1, f2) = invariants(g, f);
    let l2 = model.jet(f1, f2)?.l2;
    let lag = |x: &TwoForm| -> Result<f64, VerifyError> {
        let (a, b) = invariants(g, x);
        Ok(model.lagrangian(a, b)?)
    };
    let eps = |i: [usize; 4]| -levi_civita(i[0], i[1], i[2], i[3]) / g.sqrt_det();
    let mut worst = 0.0f64;
    for (a, &(mu, nu)) in FORM_PAIRS.iter().enumerate() {
        for (b, &(k, l)) in FORM_PAIRS.iter().enumerate() {
            let at = |sa: f64, sb: f64| lag(&bump(&bump(f, a, sa), b, sb));
            let hess = (at(h, h)? - at(h, -h)? - at(-h, h)? + at(-h, -h)?) / (4.0 * h * h);
            worst = worst.max((n[mu][nu][k][l] + 0.5 * hess - 0.5 * l2 * eps([mu, nu, k, l])).abs());
        }
    }
    Ok(worst)
}

/// Convergence slope of the Hessian relation for Born–Infeld at a random background.
pub fn measure_hessian_slope(seed: u64) -> Result<f64, VerifyError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = random_metric(&mut rng, 0.2)?;
    let f = random_form(&mut rng, 0.4);
    let steps = [2e-2, 1e-2, 5e-3, 2.5e-3];
    let errs = steps.iter().map(|&h| hessian_residual(&MBI, &g, &f, h)).collect::<Result<Vec<_>, _>>()?;
    Ok(loglog_slope(&steps, &errs))
}

/// Slope of `max|N_△|` against the common amplitude of `(h, F)`.
pub fn measure_n_triangle_slope(seed: u64) -> Result<f64, VerifyError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let h0 = random_sym(&mut rng, 1.0);
    let f0 = random_form(&mut rng, 1.0);
    let amps = amplitude_sweep(0.02);
    let errs = amps
        .iter()
        .map(|&a| -> Result<f64, VerifyError> {
            let g = assemble_metric(&SymTensor4::zero(), &h0.scale(a))?;
            Ok(max4(&big_n(&MBI, &g, &f0.scale(a))?.n_triangle))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(loglog_slope(&amps, &errs))
}

/// Worst change of the modified Ricci jet when only its second-derivative slots are perturbed.
pub fn measure_ricci_slot_residual(trials: usize, seed: u64) -> Result<f64, VerifyError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    for _ in 0..trials {
        let g = random_metric(&mut rng, 0.3)?;
        let dg = random_dg(&mut rng, 0.5);
        let lower = ricci_lower_order(&g, &dg);
        let scale = rng.gen_range(0.01..1.0);
        let mut ddg: Rank4 = [[[[0.0; 4]; 4]; 4]; 4];
        for r in 0..4 {
            for s in r..4 {
                let m = random_sym(&mut rng, scale).to_matrix();
                ddg[r][s] = m;
                ddg[s][r] = m;
            }
        }
        worst = worst.max(modified_ricci_jet(&g, &dg, Some(&ddg)).sub(&lower).max_abs());
    }
    Ok(worst)
}

/// Adjusts `∂_0 g_{0κ}` by one Newton step so that the contracted Christoffel vector vanishes.
fn project_to_wave_gauge(g: &MetricState, dg: &mut Rank3) -> Result<(), VerifyError> {
    let base = christoffel(g, dg).contracted;
    let mut jac = [[0.0; 4]; 4];
    for k in 0..4 {
        let mut pert = *dg;
        pert[0][0][k] += 1.0;
        pert[0][k][0] = pert[0][0][k];
        let c = christoffel(g, &pert).contracted;
        for mu in 0..4 {
            jac[mu][k] = c[mu] - base[mu];
        }
    }
    let (inv, _) = inverse4(&jac).ok_or(VerifyError::SingularProjection)?;
    for k in 0..4 {
        let step: f64 = (0..4).map(|mu| inv[k][mu] * base[mu]).sum();
        dg[0][0][k] -= step;
        dg[0][k][0] = dg[0][0][k];
    }
    Ok(())
}

/// Slope of `|ricci_lower_order − ½(P + Q¹)|` in wave gauge against the amplitude; cubic when
/// the quadratic part is exactly the null-form decomposition.
pub fn measure_ricci_cubic_slope(seed: u64) -> Result<f64, VerifyError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let shape = random_sym(&mut rng, 1.0);
    let slope = random_dg(&mut rng, 1.0);
    let amps = amplitude_sweep(0.02);
    let errs = amps
        .iter()
        .map(|&a| -> Result<f64, VerifyError> {
            let g = assemble_metric(&SymTensor4::zero(), &shape.scale(a))?;
            let mut dg = slope.map(|p| p.map(|row| row.map(|v| a * v)));
            project_to_wave_gauge(&g, &mut dg)?;
            let dh: [SymTensor4; 4] = std::array::from_fn(|r| SymTensor4::from_matrix(&dg[r]));
            let (p, q1) = (p_form(&dh, &dh), q1h(&dh));
            let q = ricci_lower_order(&g, &dg);
            let expected = SymTensor4::from_fn(|m, n| 0.5 * (p[m][n] + q1[m][n]));
            Ok(q.sub(&expected).max_abs())
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(loglog_slope(&amps, &errs))
}

// ---------------------------------------------------------------- stress

/// Smallest `T(X, Y)` over sampled timelike pairs, Maxwell and Born–Infeld, `|F| ≤ 0.5`.
/// The sign and trace conditions on the Lagrangian surface as errors.
pub fn measure_dominant_energy(samples: usize, seed: u64) -> Result<f64, VerifyError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = f64::INFINITY;
    for model in MODELS {
        let mut done = 0;
        while done < samples {
            let g = random_metric(&mut rng, 0.1)?;
            let f = random_form(&mut rng, 1.0);
            let f = f.scale(rng.gen_range(0.0..0.5) / f.max_abs());
            let r = dec_check(&model, &g, &f, 100.min(samples - done), &mut rng)?;
            worst = worst.min(r.min_t_xy);
            done += r.samples;
        }
    }
    Ok(worst)
}

fn random_stress_jet(rng: &mut ChaCha8Rng, h_amp: f64, f_amp: f64) -> Result<StressJet, VerifyError> {
    let g = *random_metric(rng, h_amp)?.g();
    let mut dg: Rank3 = random_dg(rng, h_amp);
    for plane in dg.iter_mut() {
        for i in 0..4 {
            for j in 0..i {
                plane[i][j] = plane[j][i];
            }
        }
    }
    Ok(StressJet {
        g,
        dg,
        f: random_form(rng, f_amp),
        df: std::array::from_fn(|_| random_form(rng, f_amp)),
        fdot: random_form(rng, 1.0),
        dfdot: std::array::from_fn(|_| random_form(rng, 1.0)),
    })
}

/// Worst residual of the canonical-stress divergence identity over random jets with
/// `|h| ≤ 0.05`, `|F| ≤ 0.1`, for Maxwell and Born–Infeld.
pub fn measure_stress_divergence(trials: usize, seed: u64) -> Result<f64, VerifyError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    for model in MODELS {
        for _ in 0..trials {
            let jet = random_stress_jet(&mut rng, 0.05, 0.1)?;
            worst = worst.max(stress_divergence_jet_check(&model, &jet)?);
        }
    }
    Ok(worst)
}

/// Range of `J⁰ / (|Ḟ|²w)` over random backgrounds with `|h| + |F| ≤ 0.01`.
pub fn measure_energy_density_ratio(samples: usize, seed: u64) -> Result<(f64, f64), VerifyError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let spec = WeightSpec::default();
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for model in MODELS {
        for _ in 0..samples {
            let budget = rng.gen_range(0.0..0.01);
            let h = random_sym(&mut rng, 1.0);
            let f = random_form(&mut rng, 1.0);
            let g = assemble_metric(&SymTensor4::zero(), &h.scale(0.5 * budget / h.max_abs()))?;
            let f = f.scale(0.5 * budget / f.max_abs());
            let fdot = random_form(&mut rng, 1.0);
            let w = weight_w(rng.gen_range(-20.0..20.0), &spec);
            let ratio = canonical_stress(&model, &g, &f, &fdot, w)?.j0 / (variation_norm_sq(&fdot) * w);
            lo = lo.min(ratio);
            hi = hi.max(ratio);
        }
    }
    Ok((lo, hi))
}

// ---------------------------------------------------------------- commutation

const COMMUTATION_POINT: Vec4 = [0.3, 0.7, -0.4, 0.5];
pub const COMMUTATION_STEPS: [f64; 4] = [0.04, 0.02, 0.01, 0.005];

fn test_scalar(x: &Vec4) -> f64 {
    let c = [0.1, 0.2, -0.3, 0.4];
    let r2: f64 = (0..4).map(|i| (x[i] - c[i]).powi(2)).sum();
    (1.0 + 0.3 * x[1] - 0.2 * x[0] * x[2]) * (-r2).exp()
}

fn test_form(x: &Vec4) -> Vec<f64> {
    let env = test_scalar(x);
    let e = [0.3 * env, (x[0] - x[3]).cos() * env, 0.2 + x[2] * env];
    let b = [env * x[1], -0.4 * env, (x[1] + x[2]).sin() * env];
    TwoForm::from_electric_magnetic(&e, &b).to_matrix().iter().flatten().copied().collect()
}

/// Smallest convergence order of the wave and Maxwell commutation residuals over all
/// eleven commutator fields.
pub fn measure_commutation_order() -> Result<f64, VerifyError> {
    let phi = |x: &Vec4| Ok(vec![test_scalar(x)]);
    let form = |x: &Vec4| Ok(test_form(x));
    let report = commutation_checks(&KillingField::all(), &phi, &form, &COMMUTATION_POINT, &COMMUTATION_STEPS)?;
    Ok(report.min_order())
}

// ---------------------------------------------------------------- constraints

/// Convergence order of `sup|Γ^μ|` at `t = 0` for the metric bump over the resolutions.
pub fn measure_gauge_t0_order(ns: &[usize], l: f64) -> Result<f64, VerifyError> {
    let family = DataFamily::MetricBump { amplitude: 0.05, width: 1.0 };
    let mut sups = Vec::new();
    for &n in ns {
        let grid = Grid::new(n, l)?;
        let rd = build_reduced(&family.abstract_data(&grid), &EmModel::Maxwell)?;
        sups.push(gauge_residual_t0(&rd)?.sup);
    }
    let dxs: Vec<f64> = ns.iter().map(|&n| 2.0 * l / n as f64).collect();
    Ok(loglog_slope(&dxs, &sups))
}

/// Convergence orders of the `L²` norms of `div B` and `div D` at `t = 0` for the pulse.
pub fn measure_em_constraint_order(ns: &[usize], l: f64) -> Result<(f64, f64), VerifyError> {
    let family = DataFamily::EmPulse { amplitude: 1e-3, width: 1.0, center: [0.0; 3] };
    let (mut db, mut dd) = (Vec::new(), Vec::new());
    for &n in ns {
        let grid = Grid::new(n, l)?;
        let rd = build_reduced(&family.abstract_data(&grid), &EmModel::Maxwell)?;
        let (b, d) = em_constraints_t0(&rd);
        db.push(b.l2);
        dd.push(d.l2);
    }
    let dxs: Vec<f64> = ns.iter().map(|&n| 2.0 * l / n as f64).collect();
    Ok((loglog_slope(&dxs, &db), loglog_slope(&dxs, &dd)))
}

// ---------------------------------------------------------------- null structure

/// Worst violation of the frame inner products and of the decompose/recompose round trip.
pub fn measure_null_frames(trials: usize, seed: u64) -> Result<f64, VerifyError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    for _ in 0..trials {
        let x: [f64; 3] = std::array::from_fn(|_| rng.gen_range(-5.0..5.0));
        let fr = frame_at(&x)?;
        let checks = [
            mdot(&fr.l, &fr.l),
            mdot(&fr.ul, &fr.ul),
            mdot(&fr.l, &fr.ul) + 2.0,
            mdot(&fr.e1, &fr.e1) - 1.0,
            mdot(&fr.e2, &fr.e2) - 1.0,
            mdot(&fr.e1, &fr.e2),
            mdot(&fr.l, &fr.e1),
            mdot(&fr.l, &fr.e2),
            mdot(&fr.ul, &fr.e1),
            mdot(&fr.ul, &fr.e2),
        ];
        worst = checks.iter().fold(worst, |m, v| m.max(v.abs()));
        let f = random_form(&mut rng, 1.0);
        worst = worst.max(null_recompose(&null_decompose(&f, &fr), &fr).sub(&f).max_abs());
    }
    Ok(worst)
}

/// Two box plane waves `E = a sin(k(x−t))ŷ + b sin(k(y−t))ẑ` with exact rates, at `t = 0`.
fn exact_superposition(grid: &Grid) -> [[Vec<f64>; 3]; 4] {
    let k = std::f64::consts::PI / grid.l;
    let (a, b) = (0.7, -0.4);
    let wave = |amp: f64, axis: usize| grid.sample(move |x| amp * (k * x[axis]).sin());
    let rate = |amp: f64, axis: usize| grid.sample(move |x| -amp * k * (k * x[axis]).cos());
    let z = || grid.zeros();
    [
        [z(), wave(a, 0), wave(b, 1)],
        [wave(b, 1), z(), wave(a, 0)],
        [z(), rate(a, 0), rate(b, 1)],
        [rate(b, 1), z(), rate(a, 0)],
    ]
}

/// Convergence order of the `L²` residuals of the `σ` and `ρ` transport equations on an
/// exact Maxwell solution, over `1 ≤ r ≤ 3` in the box `[−4, 4)³`.
pub fn measure_null_transport_order(ns: &[usize]) -> Result<(f64, f64), VerifyError> {
    let l = 4.0;
    let (mut sig, mut rho) = (Vec::new(), Vec::new());
    for &n in ns {
        let grid = Grid::new(n, l)?;
        let [e, b, e_dot, b_dot] = exact_superposition(&grid);
        let r = eov_null_residual_fields(&grid, &e, &b, &e_dot, &b_dot, (1.0, 3.0));
        sig.push(r.sigma_l2);
        rho.push(r.rho_l2);
    }
    let dxs: Vec<f64> = ns.iter().map(|&n| 2.0 * l / n as f64).collect();
    Ok((loglog_slope(&dxs, &sig), loglog_slope(&dxs, &rho)))
}

// ---------------------------------------------------------------- suites

/// Runs a suite with `trials` random samples where sampling applies.
pub fn run_suite(suite: Suite, trials: usize, seed: u64) -> Result<SuiteReport, VerifyError> {
    let trials = trials.max(1);
    let checks = match suite {
        Suite::Identities => {
            let (alg, fd) = measure_identities(trials, seed)?;
            vec![
                Check::at_most("invariant_identities_algebraic", alg, 1e-11),
                Check::at_most("invariant_identities_fd", fd, 1e-8),
                Check::within("invariant_partials_fd_slope", measure_identity_fd_slope(seed)?, 1.7, 2.3),
                Check::at_most("material_tensor_symmetries", measure_material_symmetries(trials, seed)?, 1e-13),
                Check::within("hessian_relation_fd_slope", measure_hessian_slope(seed)?, 1.7, 2.3),
                Check::within("n_triangle_quadratic_slope", measure_n_triangle_slope(seed)?, 1.9, 2.1),
                Check::at_most("ricci_second_derivative_slots", measure_ricci_slot_residual(trials, seed)?, 1e-12),
                Check::within("ricci_null_form_cubic_slope", measure_ricci_cubic_slope(seed)?, 2.8, 3.2),
            ]
        }
        Suite::Stress => {
            let (lo, hi) = measure_energy_density_ratio(trials, seed)?;
            vec![
                Check::at_least("dominant_energy_min_t_xy", measure_dominant_energy(trials, seed)?, -1e-12),
                Check::at_most("stress_divergence_identity", measure_stress_divergence(trials, seed)?, 1e-10),
                Check::at_least("energy_density_lower_ratio", lo, 0.25),
                Check::at_most("energy_density_upper_ratio", hi, 1.0),
            ]
        }
        Suite::Commutation => vec![Check::at_least("commutation_min_order", measure_commutation_order()?, 1.95)],
        Suite::Constraints => {
            let (db, dd) = measure_em_constraint_order(&[32, 48, 64], 4.0)?;
            vec![
                Check::within("gauge_t0_order", measure_gauge_t0_order(&[32, 48, 64], 4.0)?, 3.5, 4.5),
                Check::within("div_b_t0_order", db, 3.5, 4.5),
                Check::within("div_d_t0_order", dd, 3.5, 4.5),
            ]
        }
        Suite::Null => {
            let (sig, rho) = measure_null_transport_order(&[16, 24, 32, 48])?;
            vec![
                Check::at_most("null_frame_residual", measure_null_frames(trials, seed)?, 1e-13),
                Check::within("sigma_transport_order", sig, 3.5, 4.5),
                Check::within("rho_transport_order", rho, 3.5, 4.5),
            ]
        }
    };
    Ok(SuiteReport { suite, checks })
}
