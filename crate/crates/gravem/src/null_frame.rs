//! Minkowskian null frames, null components, the conformal Killing fields
//! of the commutator set, and finite-difference Lie derivatives of order ≤ 2.
//!
//! All geometry here is flat: frames, seminorms and Killing fields use `m`
//! regardless of the dynamical metric.

use thiserror::Error;

use crate::tensor_core::{Mat4, SymTensor4, TwoForm, Vec4, MINKOWSKI};

pub const DEFAULT_R_MIN: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FrameError {
    #[error("null frame requested at radius {r:e}, below r_min = {r_min:e}")]
    TooCloseToAxisOrigin { r: f64, r_min: f64 },
    #[error("finite-difference stencil leaves the sampler domain at {point:?}")]
    StencilOutOfDomain { point: Vec4 },
}

/// `{uL, L, e₁, e₂}` at a spatial point `x`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NullFrame {
    pub ul: Vec4,
    pub l: Vec4,
    pub e1: Vec4,
    pub e2: Vec4,
    pub x: [f64; 3],
}

fn cross(a: &[f64; 3], b: &[f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

fn unit(a: [f64; 3]) -> [f64; 3] {
    let n = (a[0] * a[0] + a[1] * a[1] + a[2] * a[2]).sqrt();
    [a[0] / n, a[1] / n, a[2] / n]
}

pub fn frame_at(x: &[f64; 3]) -> Result<NullFrame, FrameError> {
    frame_at_with(x, DEFAULT_R_MIN)
}

/// `e₁ ∝ ẑ×ω` (or `x̂×ω` when `|ω·ẑ| > 0.99`), `e₂ = ω×e₁`.
pub fn frame_at_with(x: &[f64; 3], r_min: f64) -> Result<NullFrame, FrameError> {
    let r = (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt();
    if !(r >= r_min) {
        return Err(FrameError::TooCloseToAxisOrigin { r, r_min });
    }
    let w = [x[0] / r, x[1] / r, x[2] / r];
    let axis = if w[2].abs() > 0.99 { [1.0, 0.0, 0.0] } else { [0.0, 0.0, 1.0] };
    let e1 = unit(cross(&axis, &w));
    let e2 = cross(&w, &e1);
    Ok(NullFrame {
        ul: [1.0, -w[0], -w[1], -w[2]],
        l: [1.0, w[0], w[1], w[2]],
        e1: [0.0, e1[0], e1[1], e1[2]],
        e2: [0.0, e2[0], e2[1], e2[2]],
        x: *x,
    })
}

impl NullFrame {
    pub fn omega(&self) -> [f64; 3] {
        [self.l[1], self.l[2], self.l[3]]
    }

    pub fn vectors(&self, class: ContractionClass) -> &'static [FrameVector] {
        class.members()
    }

    pub fn vector(&self, v: FrameVector) -> Vec4 {
        match v {
            FrameVector::UnderL => self.ul,
            FrameVector::L => self.l,
            FrameVector::E1 => self.e1,
            FrameVector::E2 => self.e2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FrameVector {
    UnderL,
    L,
    E1,
    E2,
}

/// The vector sets `ℒ = {L}`, `𝒯 = {L, e₁, e₂}`, `𝒩 = {uL, L, e₁, e₂}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ContractionClass {
    LOnly,
    Tangent,
    Full,
}

impl ContractionClass {
    pub fn members(self) -> &'static [FrameVector] {
        use FrameVector::*;
        match self {
            ContractionClass::LOnly => &[L],
            ContractionClass::Tangent => &[L, E1, E2],
            ContractionClass::Full => &[UnderL, L, E1, E2],
        }
    }
}

/// `m(X, Y)`.
pub fn mdot(x: &Vec4, y: &Vec4) -> f64 {
    -x[0] * y[0] + x[1] * y[1] + x[2] * y[2] + x[3] * y[3]
}

fn lower(x: &Vec4) -> Vec4 {
    [-x[0], x[1], x[2], x[3]]
}

fn form_on(f: &Mat4, x: &Vec4, y: &Vec4) -> f64 {
    let mut s = 0.0;
    for i in 0..4 {
        for j in 0..4 {
            s += f[i][j] * x[i] * y[j];
        }
    }
    s
}

/// `ᾱ_A = F(e_A, uL)`, `α_A = F(e_A, L)`, `ρ = ½F(uL, L)`, `σ = F(e₁, e₂)`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct NullDecomp {
    pub alpha_bar: [f64; 2],
    pub alpha: [f64; 2],
    pub rho: f64,
    pub sigma: f64,
}

impl NullDecomp {
    pub fn max_abs(&self) -> f64 {
        [self.alpha_bar[0], self.alpha_bar[1], self.alpha[0], self.alpha[1], self.rho, self.sigma]
            .iter()
            .fold(0.0f64, |m, v| m.max(v.abs()))
    }
}

pub fn null_decompose(f: &TwoForm, frame: &NullFrame) -> NullDecomp {
    let m = f.to_matrix();
    NullDecomp {
        alpha_bar: [form_on(&m, &frame.e1, &frame.ul), form_on(&m, &frame.e2, &frame.ul)],
        alpha: [form_on(&m, &frame.e1, &frame.l), form_on(&m, &frame.e2, &frame.l)],
        rho: 0.5 * form_on(&m, &frame.ul, &frame.l),
        sigma: form_on(&m, &frame.e1, &frame.e2),
    }
}

/// Inverse of [`null_decompose`] via `∂_μ = −½uL_μ L − ½L_μ uL + e_{Aμ} e_A`.
pub fn null_recompose(d: &NullDecomp, frame: &NullFrame) -> TwoForm {
    // Frame order (uL, L, e1, e2); table[a][b] = F(N_a, N_b).
    let mut table = [[0.0; 4]; 4];
    let mut put = |a: usize, b: usize, v: f64| {
        table[a][b] = v;
        table[b][a] = -v;
    };
    put(0, 1, 2.0 * d.rho);
    put(2, 0, d.alpha_bar[0]);
    put(3, 0, d.alpha_bar[1]);
    put(2, 1, d.alpha[0]);
    put(3, 1, d.alpha[1]);
    put(2, 3, d.sigma);
    let (ul, l) = (lower(&frame.ul), lower(&frame.l));
    let coeff = |mu: usize| [-0.5 * l[mu], -0.5 * ul[mu], frame.e1[mu], frame.e2[mu]];
    let mut out = [[0.0; 4]; 4];
    for mu in 0..4 {
        let cm = coeff(mu);
        for nu in 0..4 {
            let cn = coeff(nu);
            let mut s = 0.0;
            for a in 0..4 {
                for b in 0..4 {
                    s += cm[a] * cn[b] * table[a][b];
                }
            }
            out[mu][nu] = s;
        }
    }
    TwoForm::from_matrix(&out)
}

/// `|P|_{𝒱𝒲} = Σ_{V∈𝒱, W∈𝒲} |P(V, W)|`.
pub fn seminorm(p: &Mat4, v: ContractionClass, w: ContractionClass, frame: &NullFrame) -> f64 {
    let mut s = 0.0;
    for &a in v.members() {
        for &b in w.members() {
            s += form_on(p, &frame.vector(a), &frame.vector(b)).abs();
        }
    }
    s
}

/// `Λ = L + ¼h_{LL}uL`.
pub fn lambda_vector(h: &SymTensor4, frame: &NullFrame) -> Vec4 {
    let hll = h.contract(&frame.l, &frame.l);
    let mut out = frame.l;
    for i in 0..4 {
        out[i] += 0.25 * hll * frame.ul[i];
    }
    out
}

/// Members of the commutator set: translations `∂_μ`, rotations `Ω_{jk}`,
/// boosts `Ω_{0j} = −t∂_j − x_j∂_t` and the scaling `S = x^κ∂_κ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KillingField {
    Translation(usize),
    Rotation(usize, usize),
    Boost(usize),
    Scaling,
}

impl KillingField {
    /// The eleven fields `∂_μ`, `Ω_{μν}`, `S`.
    pub fn all() -> Vec<KillingField> {
        let mut out: Vec<_> = (0..4).map(KillingField::Translation).collect();
        out.extend([(1, 2), (1, 3), (2, 3)].map(|(j, k)| KillingField::Rotation(j, k)));
        out.extend((1..4).map(KillingField::Boost));
        out.push(KillingField::Scaling);
        out
    }

    /// Antisymmetric index pair `(κ, λ)` of `Ω_{κλ} = x_κ∂_λ − x_λ∂_κ`.
    fn lorentz_pair(&self) -> Option<(usize, usize)> {
        match *self {
            KillingField::Rotation(j, k) => Some((j, k)),
            KillingField::Boost(j) => Some((0, j)),
            _ => None,
        }
    }

    /// Contravariant components `Z^μ` at the spacetime point `x`.
    pub fn at(&self, x: &Vec4) -> Vec4 {
        match *self {
            KillingField::Translation(mu) => {
                let mut z = [0.0; 4];
                z[mu] = 1.0;
                z
            }
            KillingField::Scaling => *x,
            _ => {
                let (k, l) = self.lorentz_pair().unwrap();
                let xl = lower(x);
                let mut z = [0.0; 4];
                z[l] += xl[k];
                z[k] -= xl[l];
                z
            }
        }
    }

    /// `ᶻc_{μν} = ∇_μZ_ν`.
    pub fn c_matrix(&self) -> Mat4 {
        let m = MINKOWSKI;
        match *self {
            KillingField::Translation(_) => [[0.0; 4]; 4],
            KillingField::Scaling => m,
            _ => {
                let (k, l) = self.lorentz_pair().unwrap();
                let mut c = [[0.0; 4]; 4];
                for mu in 0..4 {
                    for nu in 0..4 {
                        c[mu][nu] = m[mu][k] * m[nu][l] - m[mu][l] * m[nu][k];
                    }
                }
                c
            }
        }
    }

    /// `∇_μZ^ν = ᶻc_{μα}m^{αν}`.
    pub fn c_mixed(&self) -> Mat4 {
        let c = self.c_matrix();
        let mut out = [[0.0; 4]; 4];
        for mu in 0..4 {
            for nu in 0..4 {
                out[mu][nu] = c[mu][nu] * MINKOWSKI[nu][nu];
            }
        }
        out
    }

    /// `c_Z` with `∇_μZ_ν + ∇_νZ_μ = c_Z m_{μν}`.
    pub fn c_z(&self) -> f64 {
        match self {
            KillingField::Scaling => 2.0,
            _ => 0.0,
        }
    }

    /// `max |∂_μZ_ν + ∂_νZ_μ − c_Z m_{μν}|` with central differences of the coordinate expression.
    pub fn deformation_residual(&self, x: &Vec4, step: f64) -> f64 {
        let mut grad = [[0.0; 4]; 4];
        for mu in 0..4 {
            let (mut p, mut q) = (*x, *x);
            p[mu] += step;
            q[mu] -= step;
            let (zp, zq) = (lower(&self.at(&p)), lower(&self.at(&q)));
            for nu in 0..4 {
                grad[mu][nu] = (zp[nu] - zq[nu]) / (2.0 * step);
            }
        }
        let mut worst: f64 = 0.0;
        for mu in 0..4 {
            for nu in 0..4 {
                let r = grad[mu][nu] + grad[nu][mu] - self.c_z() * MINKOWSKI[mu][nu];
                worst = worst.max(r.abs());
            }
        }
        worst
    }
}

/// Index structure of a sampled field; rank-2 components are row-major.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Valence {
    Scalar,
    Covector,
    Vector,
    Covariant2,
}

impl Valence {
    pub fn len(self) -> usize {
        match self {
            Valence::Scalar => 1,
            Valence::Covector | Valence::Vector => 4,
            Valence::Covariant2 => 16,
        }
    }

    /// Always false: every valence has at least one component.
    pub fn is_empty(self) -> bool {
        false
    }
}

/// Field sampler at spacetime points.
pub type Sampler<'a> = dyn Fn(&Vec4) -> Result<Vec<f64>, FrameError> + 'a;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DerivativeKind {
    /// `∇_Z`.
    Covariant,
    /// `∇̂_Z = ∇_Z + c_Z`.
    ModifiedCovariant,
    /// `ℒ_Z`.
    Lie,
    /// `ℒ̂_Z = ℒ_Z + 2c_Z`.
    ModifiedLie,
}

/// Central-difference accuracy of the directional derivative `Z^α∂_α`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stencil {
    Second,
    Fourth,
}

fn shifted(x: &Vec4, dir: &Vec4, s: f64) -> Vec4 {
    [x[0] + s * dir[0], x[1] + s * dir[1], x[2] + s * dir[2], x[3] + s * dir[3]]
}

/// `d/ds U(x + s·dir)` at `s = 0`.
fn directional(field: &Sampler, x: &Vec4, dir: &Vec4, h: f64, stencil: Stencil) -> Result<Vec<f64>, FrameError> {
    let at = |s: f64| field(&shifted(x, dir, s));
    Ok(match stencil {
        Stencil::Second => {
            let (p, q) = (at(h)?, at(-h)?);
            p.iter().zip(&q).map(|(a, b)| (a - b) / (2.0 * h)).collect()
        }
        Stencil::Fourth => {
            let (p2, p1, q1, q2) = (at(2.0 * h)?, at(h)?, at(-h)?, at(-2.0 * h)?);
            (0..p1.len())
                .map(|i| (-p2[i] + 8.0 * p1[i] - 8.0 * q1[i] + q2[i]) / (12.0 * h))
                .collect()
        }
    })
}

/// `∂_μ∂_μ U` along one coordinate axis.
fn second_axis(field: &Sampler, x: &Vec4, mu: usize, h: f64, stencil: Stencil) -> Result<Vec<f64>, FrameError> {
    let mut e = [0.0; 4];
    e[mu] = 1.0;
    let at = |s: f64| field(&shifted(x, &e, s));
    let c = at(0.0)?;
    Ok(match stencil {
        Stencil::Second => {
            let (p, q) = (at(h)?, at(-h)?);
            (0..c.len()).map(|i| (p[i] - 2.0 * c[i] + q[i]) / (h * h)).collect()
        }
        Stencil::Fourth => {
            let (p2, p1, q1, q2) = (at(2.0 * h)?, at(h)?, at(-h)?, at(-2.0 * h)?);
            (0..c.len())
                .map(|i| (-p2[i] + 16.0 * p1[i] - 30.0 * c[i] + 16.0 * q1[i] - q2[i]) / (12.0 * h * h))
                .collect()
        }
    })
}

/// Partial derivatives `∂_α U` for all four coordinates, indexed `[α][component]`.
pub fn gradient(field: &Sampler, x: &Vec4, h: f64, stencil: Stencil) -> Result<[Vec<f64>; 4], FrameError> {
    let mut out: [Vec<f64>; 4] = Default::default();
    for (alpha, slot) in out.iter_mut().enumerate() {
        let mut e = [0.0; 4];
        e[alpha] = 1.0;
        *slot = directional(field, x, &e, h, stencil)?;
    }
    Ok(out)
}

/// `□_m U = m^{αβ}∂_α∂_β U`.
pub fn flat_wave(field: &Sampler, x: &Vec4, h: f64, stencil: Stencil) -> Result<Vec<f64>, FrameError> {
    let mut acc: Option<Vec<f64>> = None;
    for mu in 0..4 {
        let d = second_axis(field, x, mu, h, stencil)?;
        let sign = MINKOWSKI[mu][mu];
        match acc.as_mut() {
            None => acc = Some(d.iter().map(|v| sign * v).collect()),
            Some(a) => a.iter_mut().zip(&d).for_each(|(a, v)| *a += sign * v),
        }
    }
    Ok(acc.unwrap())
}

/// One application of `kind` along `z` to a sampled field of the given valence.
pub fn z_derivative(
    field: &Sampler,
    valence: Valence,
    z: &KillingField,
    kind: DerivativeKind,
    x: &Vec4,
    h: f64,
    stencil: Stencil,
) -> Result<Vec<f64>, FrameError> {
    let zx = z.at(x);
    let mut out = if zx.iter().all(|&c| c == 0.0) {
        vec![0.0; valence.len()]
    } else {
        directional(field, x, &zx, h, stencil)?
    };
    let lie = matches!(kind, DerivativeKind::Lie | DerivativeKind::ModifiedLie);
    let needs_value = lie || z.c_z() != 0.0;
    if !needs_value {
        return Ok(out);
    }
    let u = field(x)?;
    let cm = z.c_mixed();
    if lie {
        match valence {
            Valence::Scalar => {}
            Valence::Covector => {
                for mu in 0..4 {
                    out[mu] += (0..4).map(|k| u[k] * cm[mu][k]).sum::<f64>();
                }
            }
            Valence::Vector => {
                for nu in 0..4 {
                    out[nu] -= (0..4).map(|k| u[k] * cm[k][nu]).sum::<f64>();
                }
            }
            Valence::Covariant2 => {
                for mu in 0..4 {
                    for nu in 0..4 {
                        let mut s = 0.0;
                        for k in 0..4 {
                            s += u[k * 4 + nu] * cm[mu][k] + u[mu * 4 + k] * cm[nu][k];
                        }
                        out[mu * 4 + nu] += s;
                    }
                }
            }
        }
    }
    let shift = match kind {
        DerivativeKind::ModifiedCovariant => z.c_z(),
        DerivativeKind::ModifiedLie => 2.0 * z.c_z(),
        _ => 0.0,
    };
    if shift != 0.0 {
        out.iter_mut().zip(&u).for_each(|(o, v)| *o += shift * v);
    }
    Ok(out)
}

/// `D_{Z₁} ∘ ⋯ ∘ D_{Z_k} U` at `x` by nested differences (`k ≤ 2` in practice).
pub fn lie_derivative_z(
    field: &Sampler,
    valence: Valence,
    zs: &[KillingField],
    kind: DerivativeKind,
    x: &Vec4,
    h: f64,
    stencil: Stencil,
) -> Result<Vec<f64>, FrameError> {
    match zs.split_first() {
        None => field(x),
        Some((first, rest)) => {
            let inner = |y: &Vec4| lie_derivative_z(field, valence, rest, kind, y, h, stencil);
            z_derivative(&inner, valence, first, kind, x, h, stencil)
        }
    }
}

/// `(m^{μκ}m^{νλ} − m^{μλ}m^{νκ}) ∂_μF_{κλ}` from the gradient of a two-form stored row-major.
pub fn flat_maxwell_divergence(grad: &[Vec<f64>; 4]) -> Vec4 {
    let m = MINKOWSKI;
    let mut out = [0.0; 4];
    for (nu, o) in out.iter_mut().enumerate() {
        let mut s = 0.0;
        for mu in 0..4 {
            s += 2.0 * m[mu][mu] * m[nu][nu] * grad[mu][mu * 4 + nu];
        }
        *o = s;
    }
    out
}

/// Residual series of one commutation identity under step refinement.
#[derive(Debug, Clone, PartialEq)]
pub struct CommutationEntry {
    pub field: KillingField,
    pub identity: &'static str,
    pub steps: Vec<f64>,
    pub residuals: Vec<f64>,
    pub order: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct CommutationReport {
    pub entries: Vec<CommutationEntry>,
}

impl CommutationReport {
    pub fn min_order(&self) -> f64 {
        self.entries.iter().map(|e| e.order).fold(f64::INFINITY, f64::min)
    }
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn loglog_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let lx: Vec<f64> = xs.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|v| v.ln()).collect();
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for (a, b) in lx.iter().zip(&ly) {
        sxy += (a - mx) * (b - my);
        sxx += (a - mx) * (a - mx);
    }
    sxy / sxx
}

fn max_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).fold(0.0f64, |m, (x, y)| m.max((x - y).abs()))
}

/// `∇̂_Z□_mφ − □_m∇_Zφ` with the left side on second-order and the right side on
/// fourth-order stencils, so the residual is pure truncation error.
pub fn wave_commutator_residual(phi: &Sampler, z: &KillingField, x: &Vec4, h: f64) -> Result<f64, FrameError> {
    let box_phi = |y: &Vec4| flat_wave(phi, y, h, Stencil::Second);
    let lhs = z_derivative(&box_phi, Valence::Scalar, z, DerivativeKind::ModifiedCovariant, x, h, Stencil::Second)?;
    let z_phi = |y: &Vec4| z_derivative(phi, Valence::Scalar, z, DerivativeKind::Covariant, y, h, Stencil::Fourth);
    let rhs = flat_wave(&z_phi, x, h, Stencil::Fourth)?;
    Ok(max_diff(&lhs, &rhs))
}

/// `ℒ̂_Z{(mm − mm)∇F} − (mm − mm)∇ℒ_Z F`, split across stencil orders as above.
pub fn maxwell_commutator_residual(f: &Sampler, z: &KillingField, x: &Vec4, h: f64) -> Result<f64, FrameError> {
    let div = |y: &Vec4| Ok(flat_maxwell_divergence(&gradient(f, y, h, Stencil::Second)?).to_vec());
    let lhs = z_derivative(&div, Valence::Vector, z, DerivativeKind::ModifiedLie, x, h, Stencil::Second)?;
    let lie_f = |y: &Vec4| z_derivative(f, Valence::Covariant2, z, DerivativeKind::Lie, y, h, Stencil::Fourth);
    let rhs = flat_maxwell_divergence(&gradient(&lie_f, x, h, Stencil::Fourth)?);
    Ok(max_diff(&lhs, &rhs))
}

/// Runs both commutation identities for every field in `zs` over the step sequence.
pub fn commutation_checks(
    zs: &[KillingField],
    phi: &Sampler,
    f: &Sampler,
    x: &Vec4,
    steps: &[f64],
) -> Result<CommutationReport, FrameError> {
    let mut report = CommutationReport::default();
    for z in zs {
        for identity in ["wave", "maxwell"] {
            let residuals = steps
                .iter()
                .map(|&h| match identity {
                    "wave" => wave_commutator_residual(phi, z, x, h),
                    _ => maxwell_commutator_residual(f, z, x, h),
                })
                .collect::<Result<Vec<_>, _>>()?;
            report.entries.push(CommutationEntry {
                field: *z,
                identity,
                order: loglog_slope(steps, &residuals),
                steps: steps.to_vec(),
                residuals,
            });
        }
    }
    Ok(report)
}

/// Gradients of the two scalars fed to the standard null forms plus
/// the metric perturbation and two-form jets at one point.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct NullFormJets {
    pub dpsi: Vec4,
    pub dchi: Vec4,
    pub h: SymTensor4,
    /// `dh[μ] = ∇_μ h`.
    pub dh: [SymTensor4; 4],
    pub f: TwoForm,
    /// `df[μ] = ∇_μ F`.
    pub df: [TwoForm; 4],
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NullFormValues {
    pub q0: f64,
    pub q: Mat4,
    pub p: Mat4,
    pub q1h: Mat4,
    pub q2h: Mat4,
    pub p_f: Vec4,
    pub q1f: Vec4,
    pub q2f: Vec4,
    /// `uL^μ uL^ν Q_{μν}(∇ψ, ∇χ)`, zero by antisymmetry.
    pub ul_ul_q: f64,
}

/// `𝒬₀(∇ψ, ∇χ) = m^{κλ}∇_κψ∇_λχ`.
pub fn q0(dpsi: &Vec4, dchi: &Vec4) -> f64 {
    (0..4).map(|k| MINKOWSKI[k][k] * dpsi[k] * dchi[k]).sum()
}

/// `𝒬_{μν}(∇ψ, ∇χ) = ∇_μψ∇_νχ − ∇_νψ∇_μχ`.
pub fn q_mn(dpsi: &Vec4, dchi: &Vec4) -> Mat4 {
    let mut out = [[0.0; 4]; 4];
    for mu in 0..4 {
        for nu in 0..4 {
            out[mu][nu] = dpsi[mu] * dchi[nu] - dpsi[nu] * dchi[mu];
        }
    }
    out
}

/// `𝒫(∇_μΠ, ∇_νΘ) = ¼∇_μ(tr Π)∇_ν(tr Θ) − ½∇_μΠ^{κλ}∇_νΘ_{κλ}`.
pub fn p_form(dpi: &[SymTensor4; 4], dtheta: &[SymTensor4; 4]) -> Mat4 {
    let tr = |s: &SymTensor4| (0..4).map(|k| MINKOWSKI[k][k] * s.get(k, k)).sum::<f64>();
    let mut out = [[0.0; 4]; 4];
    for mu in 0..4 {
        for nu in 0..4 {
            let mut c = 0.0;
            for k in 0..4 {
                for l in 0..4 {
                    c += MINKOWSKI[k][k] * MINKOWSKI[l][l] * dpi[mu].get(k, l) * dtheta[nu].get(k, l);
                }
            }
            out[mu][nu] = 0.25 * tr(&dpi[mu]) * tr(&dtheta[nu]) - 0.5 * c;
        }
    }
    out
}

/// `𝒬^{(1;h)}_{μν}(∇h, ∇h)` assembled from the standard null forms.
pub fn q1h(dh: &[SymTensor4; 4]) -> Mat4 {
    let m = |a: usize| MINKOWSKI[a][a];
    let grad = |a: usize, b: usize| -> Vec4 { std::array::from_fn(|g| dh[g].get(a, b)) };
    let qq = |i: usize, j: usize, a: &Vec4, b: &Vec4| a[i] * b[j] - a[j] * b[i];
    let mut out = [[0.0; 4]; 4];
    for mu in 0..4 {
        for nu in 0..4 {
            let mut s = 0.0;
            for l in 0..4 {
                s += m(l) * q0(&grad(l, mu), &grad(l, nu));
            }
            for k in 0..4 {
                for l in 0..4 {
                    let w = m(k) * m(l);
                    s -= w * qq(k, l, &grad(l, mu), &grad(k, nu));
                    s += w * qq(mu, k, &grad(k, l), &grad(l, nu));
                    s += w * qq(nu, k, &grad(k, l), &grad(l, mu));
                    s += 0.5 * w * qq(l, mu, &grad(k, k), &grad(l, nu));
                    s += 0.5 * w * qq(l, nu, &grad(k, k), &grad(l, mu));
                }
            }
            out[mu][nu] = s;
        }
    }
    out
}

/// `𝒬^{(2;h)}_{μν}(F, G) = −2m^{κλ}F_{μκ}G_{νλ} + ½m_{μν}F_{κλ}G^{κλ}`.
pub fn q2h(f: &TwoForm, g: &TwoForm) -> Mat4 {
    let (fm, gm) = (f.to_matrix(), g.to_matrix());
    let mut full = 0.0;
    for k in 0..4 {
        for l in 0..4 {
            full += MINKOWSKI[k][k] * MINKOWSKI[l][l] * fm[k][l] * gm[k][l];
        }
    }
    let mut out = [[0.0; 4]; 4];
    for mu in 0..4 {
        for nu in 0..4 {
            let s: f64 = (0..4).map(|k| MINKOWSKI[k][k] * fm[mu][k] * gm[nu][k]).sum();
            out[mu][nu] = -2.0 * s + 0.5 * MINKOWSKI[mu][nu] * full;
        }
    }
    out
}

/// `𝒫^ν_{(F)}(h, ∇F) = m^{μμ'}m^{κκ'}m^{νλ}h_{μ'κ'}∇_μF_{κλ}`.
pub fn p_f(h: &SymTensor4, df: &[TwoForm; 4]) -> Vec4 {
    let m = |a: usize| MINKOWSKI[a][a];
    std::array::from_fn(|nu| {
        let mut s = 0.0;
        for mu in 0..4 {
            for k in 0..4 {
                s += m(mu) * m(k) * m(nu) * h.get(mu, k) * df[mu].get(k, nu);
            }
        }
        s
    })
}

/// `𝒬^ν_{(1;F)}(h, ∇F) = m^{μκ}m^{νν'}m^{λλ'}h_{ν'λ'}∇_μF_{κλ}`.
pub fn q1f(h: &SymTensor4, df: &[TwoForm; 4]) -> Vec4 {
    let m = |a: usize| MINKOWSKI[a][a];
    std::array::from_fn(|nu| {
        let mut s = 0.0;
        for mu in 0..4 {
            for l in 0..4 {
                s += m(mu) * m(nu) * m(l) * h.get(nu, l) * df[mu].get(mu, l);
            }
        }
        s
    })
}

/// `𝒬^ν_{(2;F)}(∇h, F) = m^{μκ}m^{λλ'}m^{νν'}∇_μh_{ν'λ'}F_{κλ}`.
pub fn q2f(dh: &[SymTensor4; 4], f: &TwoForm) -> Vec4 {
    let m = |a: usize| MINKOWSKI[a][a];
    std::array::from_fn(|nu| {
        let mut s = 0.0;
        for mu in 0..4 {
            for l in 0..4 {
                s += m(mu) * m(l) * m(nu) * dh[mu].get(nu, l) * f.get(mu, l);
            }
        }
        s
    })
}

pub fn null_forms(jets: &NullFormJets, frame: &NullFrame) -> NullFormValues {
    let q = q_mn(&jets.dpsi, &jets.dchi);
    NullFormValues {
        q0: q0(&jets.dpsi, &jets.dchi),
        q,
        p: p_form(&jets.dh, &jets.dh),
        q1h: q1h(&jets.dh),
        q2h: q2h(&jets.f, &jets.f),
        p_f: p_f(&jets.h, &jets.df),
        q1f: q1f(&jets.h, &jets.df),
        q2f: q2f(&jets.dh, &jets.f),
        ul_ul_q: form_on(&q, &frame.ul, &frame.ul),
    }
}
