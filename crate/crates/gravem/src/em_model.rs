//! Electromagnetic Lagrangians `ℒ(F₍₁₎, F₍₂₎)` and the tensors they induce.
//!
//! Partial derivatives with respect to `F_{μν}` vary the antisymmetric pair
//! together, so `∂F₍₁₎/∂F_{μν} = 2F^{#μν}` and `∂F₍₂₎/∂F_{μν} = ⋆F^{#μν}`.

use rand::Rng;
use thiserror::Error;

use crate::tensor_core::{
    congruence, dual_of_raised, half_contract, hodge_dual, inverse3, invariants, raise, Hodge,
    Mat4, MetricState, Rank4, SymTensor4, TensorError, TwoForm, Vec4, MINKOWSKI,
};

/// Smallest Born–Infeld radicand accepted as inside the model domain.
pub const RADICAND_FLOOR: f64 = 1e-8;
pub const INVERT_TOLERANCE: f64 = 1e-12;
pub const INVERT_MAX_ITERATIONS: usize = 25;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EmError {
    #[error("Born-Infeld radicand {radicand:e} is below the admissible floor")]
    DomainViolation { radicand: f64 },
    #[error("constitutive inversion stalled after {iterations} iterations with residual {residual:e}")]
    NoConvergence { residual: f64, iterations: usize },
    #[error("dominant energy condition fails: {condition} (value {value:e})")]
    DecViolation {
        condition: &'static str,
        value: f64,
        witness: Option<(Vec4, Vec4)>,
    },
    #[error(transparent)]
    Tensor(#[from] TensorError),
}

/// `ℒ = c1 F₍₁₎ + c2 F₍₂₎ + c11 F₍₁₎² + c12 F₍₁₎F₍₂₎ + c22 F₍₂₎²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolynomialCoeffs {
    pub c1: f64,
    pub c2: f64,
    pub c11: f64,
    pub c12: f64,
    pub c22: f64,
}

impl Default for PolynomialCoeffs {
    fn default() -> Self {
        PolynomialCoeffs {
            c1: -0.5,
            c2: 0.0,
            c11: 0.0,
            c12: 0.0,
            c22: 0.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EmModel {
    Maxwell,
    BornInfeld { beta: f64 },
    Polynomial(PolynomialCoeffs),
}

/// Value and partials of the Lagrangian at one `(F₍₁₎, F₍₂₎)`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct LagrangianJet {
    pub l: f64,
    pub l1: f64,
    pub l2: f64,
    pub l11: f64,
    pub l12: f64,
    pub l22: f64,
}

impl EmModel {
    pub fn is_maxwell(&self) -> bool {
        matches!(self, EmModel::Maxwell)
    }

    pub fn lagrangian(&self, f1: f64, f2: f64) -> Result<f64, EmError> {
        Ok(self.jet(f1, f2)?.l)
    }

    pub fn jet(&self, f1: f64, f2: f64) -> Result<LagrangianJet, EmError> {
        match *self {
            EmModel::Maxwell => Ok(LagrangianJet {
                l: -0.5 * f1,
                l1: -0.5,
                ..LagrangianJet::default()
            }),
            EmModel::BornInfeld { beta } => {
                let b4 = beta.powi(4);
                let b8 = b4 * b4;
                let radicand = 1.0 + b4 * f1 - b8 * f2 * f2;
                if !(radicand >= RADICAND_FLOOR) {
                    return Err(EmError::DomainViolation { radicand });
                }
                let s = radicand.sqrt();
                let s3 = radicand * s;
                Ok(LagrangianJet {
                    l: (1.0 - s) / b4,
                    l1: -0.5 / s,
                    l2: b4 * f2 / s,
                    l11: 0.25 * b4 / s3,
                    l12: -0.5 * b8 * f2 / s3,
                    l22: b4 / s + b8 * b4 * f2 * f2 / s3,
                })
            }
            EmModel::Polynomial(c) => Ok(LagrangianJet {
                l: c.c1 * f1 + c.c2 * f2 + c.c11 * f1 * f1 + c.c12 * f1 * f2 + c.c22 * f2 * f2,
                l1: c.c1 + 2.0 * c.c11 * f1 + c.c12 * f2,
                l2: c.c2 + c.c12 * f1 + 2.0 * c.c22 * f2,
                l11: 2.0 * c.c11,
                l12: c.c12,
                l22: 2.0 * c.c22,
            }),
        }
    }
}

/// `(⋆M)^# = 2ℒ₁F^# + ℒ₂⋆F^#` lowered and dualised: `M = −2ℒ₁⋆F + ℒ₂F`.
pub fn maxwell_tensor(model: &EmModel, g: &MetricState, f: &TwoForm) -> Result<TwoForm, EmError> {
    let (f1, f2) = invariants(g, f);
    let jet = model.jet(f1, f2)?;
    let dual = hodge_dual(g, f, Hodge::Curved);
    Ok(dual.scale(-2.0 * jet.l1).add(&f.scale(jet.l2)))
}

/// `(⋆M)^{#μν}` as a full antisymmetric array.
pub fn maxwell_dual_sharp(model: &EmModel, g: &MetricState, f: &TwoForm) -> Result<Mat4, EmError> {
    let up = raise(g, f);
    let dual_up = dual_of_raised(&f.to_matrix(), -1.0 / g.sqrt_det()).to_matrix();
    let lowered_dual = dual_of_raised(&up, g.sqrt_det());
    let jet = model.jet(half_contract(&up, f), 0.5 * half_contract(&up, &lowered_dual))?;
    let mut out = [[0.0; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            out[i][j] = 2.0 * jet.l1 * up[i][j] + jet.l2 * dual_up[i][j];
        }
    }
    Ok(out)
}

/// `(⋆M)^#`, `N^#` and the remainder `N_△` after removing the `(m, h)` principal block.
#[derive(Debug, Clone, PartialEq)]
pub struct MaterialTensors {
    pub m_dual_sharp: Mat4,
    pub n_sharp: Rank4,
    pub n_triangle: Rank4,
}

/// `½{m^{μκ}m^{νλ} − m^{μλ}m^{νκ} − h^{μκ}m^{νλ} + h^{μλ}m^{νκ} − m^{μκ}h^{νλ} + m^{μλ}h^{νκ}}` with `h` raised by `m`.
pub fn principal_block(h: &SymTensor4) -> Rank4 {
    let m = MINKOWSKI;
    let hu = congruence(&m, &h.to_matrix(), &m);
    let mut out = [[[[0.0; 4]; 4]; 4]; 4];
    for mu in 0..4 {
        for nu in 0..4 {
            for k in 0..4 {
                for l in 0..4 {
                    out[mu][nu][k][l] = 0.5
                        * (m[mu][k] * m[nu][l] - m[mu][l] * m[nu][k] - hu[mu][k] * m[nu][l]
                            + hu[mu][l] * m[nu][k]
                            - m[mu][k] * hu[nu][l]
                            + m[mu][l] * hu[nu][k]);
                }
            }
        }
    }
    out
}

pub fn big_n(model: &EmModel, g: &MetricState, f: &TwoForm) -> Result<MaterialTensors, EmError> {
    let gi = g.g_inv_mat();
    let up = raise(g, f);
    let dual_up = dual_of_raised(&f.to_matrix(), -1.0 / g.sqrt_det()).to_matrix();
    let lowered_dual = dual_of_raised(&up, g.sqrt_det());
    let f1 = half_contract(&up, f);
    let f2 = 0.5 * half_contract(&up, &lowered_dual);
    let jet = model.jet(f1, f2)?;
    let mut m_dual_sharp = [[0.0; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            m_dual_sharp[i][j] = 2.0 * jet.l1 * up[i][j] + jet.l2 * dual_up[i][j];
        }
    }
    let principal = principal_block(&g.h());
    let mut n_sharp = [[[[0.0; 4]; 4]; 4]; 4];
    let mut n_triangle = [[[[0.0; 4]; 4]; 4]; 4];
    for mu in 0..4 {
        for nu in 0..4 {
            for k in 0..4 {
                for l in 0..4 {
                    let v = -jet.l1 * (gi[mu][k] * gi[nu][l] - gi[mu][l] * gi[nu][k])
                        - 2.0 * jet.l11 * up[mu][nu] * up[k][l]
                        - jet.l12 * (up[mu][nu] * dual_up[k][l] + dual_up[mu][nu] * up[k][l])
                        - 0.5 * jet.l22 * dual_up[mu][nu] * dual_up[k][l];
                    n_sharp[mu][nu][k][l] = v;
                    n_triangle[mu][nu][k][l] = v - principal[mu][nu][k][l];
                }
            }
        }
    }
    Ok(MaterialTensors {
        m_dual_sharp,
        n_sharp,
        n_triangle,
    })
}

/// Largest violation of the three symmetries of a rank-4 material tensor.
pub fn symmetry_residuals(n: &Rank4) -> [f64; 3] {
    let mut r = [0.0f64; 3];
    for mu in 0..4 {
        for nu in 0..4 {
            for k in 0..4 {
                for l in 0..4 {
                    let v = n[mu][nu][k][l];
                    r[0] = r[0].max((v + n[nu][mu][k][l]).abs());
                    r[1] = r[1].max((v + n[mu][nu][l][k]).abs());
                    r[2] = r[2].max((v - n[k][l][mu][nu]).abs());
                }
            }
        }
    }
    r
}

/// `T_{μν} = −2ℒ₁ g^{κλ}F_{μκ}F_{νλ} − F₍₂₎ℒ₂ g_{μν} + g_{μν}ℒ`.
pub fn stress_energy(model: &EmModel, g: &MetricState, f: &TwoForm) -> Result<SymTensor4, EmError> {
    let (f1, f2) = invariants(g, f);
    let jet = model.jet(f1, f2)?;
    Ok(stress_energy_with(&jet, f2, g, f))
}

/// [`stress_energy`] for a precomputed Lagrangian jet.
#[inline]
pub fn stress_energy_with(jet: &LagrangianJet, f2: f64, g: &MetricState, f: &TwoForm) -> SymTensor4 {
    let gi = g.g_inv_mat();
    let fm = f.to_matrix();
    let gm = g.g();
    let scalar = jet.l - f2 * jet.l2;
    // fg[μ][λ] = F_{μκ} g^{κλ}
    let mut fg = [[0.0; 4]; 4];
    for mu in 0..4 {
        for l in 0..4 {
            let mut s = 0.0;
            for k in 0..4 {
                s += fm[mu][k] * gi[k][l];
            }
            fg[mu][l] = s;
        }
    }
    SymTensor4::from_fn(|mu, nu| {
        let mut s = 0.0;
        for l in 0..4 {
            s += fg[mu][l] * fm[nu][l];
        }
        -2.0 * jet.l1 * s + gm.get(mu, nu) * scalar
    })
}

/// `(g⁻¹)^{κλ}T_{κλ}`, equal to `4(ℒ − F₍₁₎ℒ₁ − F₍₂₎ℒ₂)`.
pub fn trace(g: &MetricState, t: &SymTensor4) -> f64 {
    let gi = g.g_inv_mat();
    let tm = t.to_matrix();
    let mut s = 0.0;
    for i in 0..4 {
        for j in 0..4 {
            s += gi[i][j] * tm[i][j];
        }
    }
    s
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecReport {
    pub l1: f64,
    pub trace_condition: f64,
    pub samples: usize,
    pub min_t_xy: f64,
}

/// Random future-directed `g`-timelike vector with unit time component.
pub fn sample_future_timelike<R: Rng>(g: &MetricState, rng: &mut R) -> Vec4 {
    let gm = g.g_mat();
    loop {
        let v: [f64; 3] = std::array::from_fn(|_| rng.gen_range(-1.0..1.0));
        let x = [1.0, v[0], v[1], v[2]];
        let mut n = 0.0;
        for i in 0..4 {
            for j in 0..4 {
                n += gm[i][j] * x[i] * x[j];
            }
        }
        if n < 0.0 {
            return x;
        }
    }
}

/// Checks `ℒ₁ < 0`, `ℒ − F₍₁₎ℒ₁ − F₍₂₎ℒ₂ ≤ 0` and `T(X, Y) ≥ −1e-12` on `trials` sampled pairs.
pub fn dec_check<R: Rng>(
    model: &EmModel,
    g: &MetricState,
    f: &TwoForm,
    trials: usize,
    rng: &mut R,
) -> Result<DecReport, EmError> {
    let (f1, f2) = invariants(g, f);
    let jet = model.jet(f1, f2)?;
    if !(jet.l1 < 0.0) {
        return Err(EmError::DecViolation {
            condition: "L1 < 0",
            value: jet.l1,
            witness: None,
        });
    }
    let trace_condition = jet.l - f1 * jet.l1 - f2 * jet.l2;
    if trace_condition > 1e-14 {
        return Err(EmError::DecViolation {
            condition: "L - F1 L1 - F2 L2 <= 0",
            value: trace_condition,
            witness: None,
        });
    }
    let t = stress_energy_with(&jet, f2, g, f);
    let mut min_t_xy = f64::INFINITY;
    for _ in 0..trials {
        let x = sample_future_timelike(g, rng);
        let y = sample_future_timelike(g, rng);
        let v = t.contract(&x, &y);
        if v < -1e-12 {
            return Err(EmError::DecViolation {
                condition: "T(X, Y) >= 0",
                value: v,
                witness: Some((x, y)),
            });
        }
        min_t_xy = min_t_xy.min(v);
    }
    Ok(DecReport {
        l1: jet.l1,
        trace_condition,
        samples: trials,
        min_t_xy,
    })
}

/// Minkowskian one-forms `E_j = F_{j0}`, `B_j = ½[jab]F_{ab}`, `D_j = ½[jab]M_{ab}`, `H_j = −M_{j0}`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct EmFieldSplit {
    pub e: [f64; 3],
    pub b: [f64; 3],
    pub d: [f64; 3],
    pub h: [f64; 3],
}

pub fn field_split(f: &TwoForm, m: &TwoForm) -> EmFieldSplit {
    let (e, b) = f.electric_magnetic();
    let (me, d) = m.electric_magnetic();
    EmFieldSplit {
        e,
        b,
        d,
        h: [-me[0], -me[1], -me[2]],
    }
}

/// Inverse of [`field_split`]: returns `(F, M)`.
pub fn recompose(split: &EmFieldSplit) -> (TwoForm, TwoForm) {
    let h = split.h;
    (
        TwoForm::from_electric_magnetic(&split.e, &split.b),
        TwoForm::from_electric_magnetic(&[-h[0], -h[1], -h[2]], &split.d),
    )
}

/// Result of [`constitutive_invert`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Inversion {
    pub e: [f64; 3],
    pub h: [f64; 3],
    pub iterations: usize,
    pub residual: f64,
}

struct Evaluation {
    d: [f64; 3],
    h: [f64; 3],
    jac: [[f64; 3]; 3],
}

/// `D(E, B)` and `∂D_j/∂E_k` from `δM = −2δℒ₁⋆F − 2ℒ₁⋆δF + δℒ₂F + ℒ₂δF`.
fn evaluate(model: &EmModel, g: &MetricState, f: &TwoForm) -> Result<Evaluation, EmError> {
    let gi = g.g_inv_mat();
    let sd = g.sqrt_det();
    let up = congruence(&gi, &f.to_matrix(), &gi);
    let dual = dual_of_raised(&up, sd);
    let dual_up = dual_of_raised(&f.to_matrix(), -1.0 / sd).to_matrix();
    let f1 = half_contract(&up, f);
    let f2 = 0.5 * half_contract(&up, &dual);
    let jet = model.jet(f1, f2)?;
    let m = dual.scale(-2.0 * jet.l1).add(&f.scale(jet.l2));
    let (me, d) = m.electric_magnetic();
    let mut jac = [[0.0; 3]; 3];
    for k in 0..3 {
        let df = TwoForm::from_electric_magnetic(
            &std::array::from_fn(|j| if j == k { 1.0 } else { 0.0 }),
            &[0.0; 3],
        );
        let df1 = 2.0 * half_contract(&up, &df);
        let df2 = half_contract(&dual_up, &df);
        let dl1 = jet.l11 * df1 + jet.l12 * df2;
        let dl2 = jet.l12 * df1 + jet.l22 * df2;
        let ddual = dual_of_raised(&congruence(&gi, &df.to_matrix(), &gi), sd);
        let dm = dual
            .scale(-2.0 * dl1)
            .add(&ddual.scale(-2.0 * jet.l1))
            .add(&f.scale(dl2))
            .add(&df.scale(jet.l2));
        let (_, dd) = dm.electric_magnetic();
        for j in 0..3 {
            jac[j][k] = dd[j];
        }
    }
    Ok(Evaluation {
        d,
        h: [-me[0], -me[1], -me[2]],
        jac,
    })
}

/// Solves `D(E, B; g) = D` for `E` by Newton iteration from `E₀ = D`, then returns `(E, H)`.
pub fn constitutive_invert(
    model: &EmModel,
    g: &MetricState,
    b: &[f64; 3],
    d: &[f64; 3],
) -> Result<Inversion, EmError> {
    if model.is_maxwell() && g.h().max_abs() == 0.0 {
        return Ok(Inversion {
            e: *d,
            h: *b,
            iterations: 0,
            residual: 0.0,
        });
    }
    let scale = d.iter().fold(1.0f64, |m, x| m.max(x.abs()));
    let mut e = *d;
    let mut last = f64::INFINITY;
    for iteration in 0..=INVERT_MAX_ITERATIONS {
        let f = TwoForm::from_electric_magnetic(&e, b);
        let ev = match evaluate(model, g, &f) {
            Ok(ev) => ev,
            Err(EmError::DomainViolation { .. }) => {
                return Err(EmError::NoConvergence {
                    residual: last,
                    iterations: iteration,
                })
            }
            Err(other) => return Err(other),
        };
        let r = [ev.d[0] - d[0], ev.d[1] - d[1], ev.d[2] - d[2]];
        last = r.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        if last <= INVERT_TOLERANCE * scale {
            return Ok(Inversion {
                e,
                h: ev.h,
                iterations: iteration,
                residual: last,
            });
        }
        if iteration == INVERT_MAX_ITERATIONS {
            break;
        }
        let Some((inv, _)) = inverse3(&ev.jac) else {
            break;
        };
        for j in 0..3 {
            e[j] -= inv[j][0] * r[0] + inv[j][1] * r[1] + inv[j][2] * r[2];
        }
        if !e.iter().all(|x| x.is_finite()) {
            break;
        }
    }
    Err(EmError::NoConvergence {
        residual: last,
        iterations: INVERT_MAX_ITERATIONS,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lagrangian_examples() {
        assert_eq!(EmModel::Maxwell.lagrangian(2.0, 7.0).unwrap(), -1.0);
        let bi = EmModel::BornInfeld { beta: 1.0 };
        assert_eq!(bi.lagrangian(0.0, 0.0).unwrap(), 0.0);
        assert_eq!(bi.lagrangian(3.0, 0.0).unwrap(), -1.0);
    }

    #[test]
    fn born_infeld_domain_guard() {
        let bi = EmModel::BornInfeld { beta: 1.0 };
        assert!(matches!(
            bi.lagrangian(-1.0, 0.0),
            Err(EmError::DomainViolation { .. })
        ));
        assert!(bi.lagrangian(-1.0 + 2e-8, 0.0).is_ok());
    }

    #[test]
    fn normalisation_at_zero_field() {
        for model in [
            EmModel::Maxwell,
            EmModel::BornInfeld { beta: 0.7 },
            EmModel::Polynomial(PolynomialCoeffs {
                c11: 0.3,
                c12: -0.2,
                c22: 0.1,
                ..Default::default()
            }),
        ] {
            let j = model.jet(0.0, 0.0).unwrap();
            assert_eq!(j.l, 0.0);
            assert_eq!(j.l1, -0.5);
            assert_eq!(j.l2, 0.0);
        }
    }

    #[test]
    fn born_infeld_partials_match_differences() {
        let bi = EmModel::BornInfeld { beta: 1.3 };
        let (f1, f2) = (0.21, -0.17);
        let h = 1e-6;
        let j = bi.jet(f1, f2).unwrap();
        let l = |a: f64, b: f64| bi.jet(a, b).unwrap();
        assert!(((l(f1 + h, f2).l - l(f1 - h, f2).l) / (2.0 * h) - j.l1).abs() < 1e-8);
        assert!(((l(f1, f2 + h).l - l(f1, f2 - h).l) / (2.0 * h) - j.l2).abs() < 1e-8);
        assert!(((l(f1 + h, f2).l1 - l(f1 - h, f2).l1) / (2.0 * h) - j.l11).abs() < 1e-7);
        assert!(((l(f1, f2 + h).l1 - l(f1, f2 - h).l1) / (2.0 * h) - j.l12).abs() < 1e-7);
        assert!(((l(f1 + h, f2).l2 - l(f1 - h, f2).l2) / (2.0 * h) - j.l12).abs() < 1e-7);
        assert!(((l(f1, f2 + h).l2 - l(f1, f2 - h).l2) / (2.0 * h) - j.l22).abs() < 1e-7);
    }

    #[test]
    fn maxwell_flat_m_is_flat_dual() {
        let g = MetricState::minkowski();
        let f = TwoForm::from_electric_magnetic(&[0.3, -0.2, 0.5], &[0.1, 0.7, -0.4]);
        let m = maxwell_tensor(&EmModel::Maxwell, &g, &f).unwrap();
        assert_eq!(m, hodge_dual(&g, &f, Hodge::Minkowski));
        assert_eq!(maxwell_tensor(&EmModel::Maxwell, &g, &TwoForm::zero()).unwrap(), TwoForm::zero());
    }

    #[test]
    fn maxwell_flat_n_is_principal() {
        let t = big_n(&EmModel::Maxwell, &MetricState::minkowski(), &TwoForm::zero()).unwrap();
        assert_eq!(t.n_sharp[0][1][0][1], -0.5);
        assert!(t.n_triangle.iter().flatten().flatten().flatten().all(|&v| v == 0.0));
    }

    #[test]
    fn electric_stress_energy_density() {
        let e = 0.6;
        let f = TwoForm::from_electric_magnetic(&[e, 0.0, 0.0], &[0.0; 3]);
        let t = stress_energy(&EmModel::Maxwell, &MetricState::minkowski(), &f).unwrap();
        assert!((t.get(0, 0) - e * e / 2.0).abs() < 1e-15);
        assert_eq!(
            stress_energy(&EmModel::Maxwell, &MetricState::minkowski(), &TwoForm::zero()).unwrap(),
            SymTensor4::zero()
        );
    }

    #[test]
    fn split_examples() {
        let mut f = TwoForm::zero();
        f.set(2, 3, 0.8);
        let s = field_split(&f, &TwoForm::zero());
        assert_eq!(s.b, [0.8, 0.0, 0.0]);
        assert_eq!(s.e, [0.0; 3]);
        assert_eq!(field_split(&TwoForm::zero(), &TwoForm::zero()), EmFieldSplit::default());

        let f = TwoForm::from_electric_magnetic(&[0.3, -0.2, 0.5], &[0.1, 0.7, -0.4]);
        let m = maxwell_tensor(&EmModel::Maxwell, &MetricState::minkowski(), &f).unwrap();
        let s = field_split(&f, &m);
        assert_eq!(s.d, s.e);
        assert_eq!(s.h, s.b);
        assert_eq!(recompose(&s), (f, m));
    }

    #[test]
    fn maxwell_flat_inversion_is_immediate() {
        let inv =
            constitutive_invert(&EmModel::Maxwell, &MetricState::minkowski(), &[0.1, 0.2, 0.3], &[0.4, 0.5, 0.6])
                .unwrap();
        assert_eq!(inv.e, [0.4, 0.5, 0.6]);
        assert_eq!(inv.h, [0.1, 0.2, 0.3]);
        assert!(inv.iterations <= 1);
    }

    #[test]
    fn positive_l1_polynomial_violates_dec() {
        let model = EmModel::Polynomial(PolynomialCoeffs {
            c1: 0.5,
            ..Default::default()
        });
        let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(1);
        let r = dec_check(&model, &MetricState::minkowski(), &TwoForm::zero(), 10, &mut rng);
        assert!(matches!(r, Err(EmError::DecViolation { condition: "L1 < 0", .. })));
    }
}
