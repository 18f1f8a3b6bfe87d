//! Canonical stress of the equations of variation, its energy current and a jet-level check of
//! the divergence identity.
//!
//! Derivatives are Minkowskian (`∇ = ∂` in wave coordinates). The divergence identity is
//! checked by differencing `Ṡ` and `N^#` along an affine jet `(g, F, Ḟ)(x) = jet + x^α ∂_α jet`,
//! while the right-hand side only sees `∂Ḟ` through the inhomogeneities it defines.

use super::DiagnosticsError;
use crate::em_model::{big_n, EmModel};
use crate::tensor_core::{Mat4, MetricState, Rank3, Rank4, SymTensor4, TwoForm};

/// `s[μ][ν] = Ṡ^μ_ν` and the energy density `J⁰ = −w Ṡ⁰₀`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CanonicalStress {
    pub s: Mat4,
    pub j0: f64,
}

/// `Ṡ^μ_ν = N^{#μζκλ}Ḟ_{κλ}Ḟ_{νζ} − ¼δ^μ_ν N^{#ζηκλ}Ḟ_{ζη}Ḟ_{κλ}` for a given `N^#`.
pub fn stress_from_n(n: &Rank4, fdot: &TwoForm) -> Mat4 {
    let fd = fdot.to_matrix();
    // nf[μ][ζ] = N^{μζκλ} Ḟ_{κλ}
    let mut nf = [[0.0; 4]; 4];
    for mu in 0..4 {
        for z in 0..4 {
            let mut s = 0.0;
            for k in 0..4 {
                for l in 0..4 {
                    s += n[mu][z][k][l] * fd[k][l];
                }
            }
            nf[mu][z] = s;
        }
    }
    let quad: f64 = (0..4).map(|a| (0..4).map(|b| nf[a][b] * fd[a][b]).sum::<f64>()).sum();
    let mut out = [[0.0; 4]; 4];
    for mu in 0..4 {
        for nu in 0..4 {
            let mut s: f64 = (0..4).map(|z| nf[mu][z] * fd[nu][z]).sum();
            if mu == nu {
                s -= 0.25 * quad;
            }
            out[mu][nu] = s;
        }
    }
    out
}

/// Canonical stress at background `(g, F)` for the variation `Ḟ`, with weight value `w`.
pub fn canonical_stress(
    model: &EmModel,
    g: &MetricState,
    f: &TwoForm,
    fdot: &TwoForm,
    w: f64,
) -> Result<CanonicalStress, DiagnosticsError> {
    let n = big_n(model, g, f)?.n_sharp;
    let s = stress_from_n(&n, fdot);
    Ok(CanonicalStress { s, j0: -w * s[0][0] })
}

/// `|Ḟ|² = |Ė|² + |Ḃ|²`, the normalisation in which `J⁰ = ½|Ḟ|²w` on flat Maxwell backgrounds
/// with pure electric or pure magnetic variations.
pub fn variation_norm_sq(fdot: &TwoForm) -> f64 {
    0.5 * fdot.euclidean_norm_sq()
}

/// First-order jet of a background and a variation: values and `∂_α` of each.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StressJet {
    pub g: SymTensor4,
    /// `dg[α][μ][ν] = ∂_α g_{μν}`.
    pub dg: Rank3,
    pub f: TwoForm,
    pub df: [TwoForm; 4],
    pub fdot: TwoForm,
    pub dfdot: [TwoForm; 4],
}

impl StressJet {
    fn at(&self, dir: usize, s: f64) -> (SymTensor4, TwoForm, TwoForm) {
        let g = SymTensor4::from_fn(|i, j| self.g.get(i, j) + s * self.dg[dir][i][j]);
        (g, self.f.add(&self.df[dir].scale(s)), self.fdot.add(&self.dfdot[dir].scale(s)))
    }

    /// EOV inhomogeneities `𝔉̇_{λμν} = ∂_λḞ_{μν} + ∂_μḞ_{νλ} + ∂_νḞ_{λμ}` and `𝔉̇^ν = N^{#μνκλ}∂_μḞ_{κλ}`.
    pub fn inhomogeneities(&self, n: &Rank4) -> ([[[f64; 4]; 4]; 4], [f64; 4]) {
        let d = |a: usize, b: usize, c: usize| self.dfdot[a].get(b, c);
        let cyc = std::array::from_fn(|l| {
            std::array::from_fn(|m| std::array::from_fn(|k| d(l, m, k) + d(m, k, l) + d(k, l, m)))
        });
        let vec = std::array::from_fn(|nu| {
            let mut s = 0.0;
            for mu in 0..4 {
                for k in 0..4 {
                    for l in 0..4 {
                        s += n[mu][nu][k][l] * d(mu, k, l);
                    }
                }
            }
            s
        });
        (cyc, vec)
    }
}

/// Difference step along the affine jet; fourth order keeps truncation below roundoff.
const JET_FD_STEP: f64 = 1e-3;

fn d_along<T, const K: usize>(sample: impl Fn(f64) -> T, flat: impl Fn(&T) -> [f64; K]) -> [f64; K] {
    let h = JET_FD_STEP;
    let v = [-2.0, -1.0, 1.0, 2.0].map(|k| flat(&sample(k * h)));
    std::array::from_fn(|i| (v[0][i] - v[3][i] + 8.0 * (v[2][i] - v[1][i])) / (12.0 * h))
}

fn flatten4(r: &Rank4) -> [f64; 256] {
    let mut out = [0.0; 256];
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                for d in 0..4 {
                    out[((a * 4 + b) * 4 + c) * 4 + d] = r[a][b][c][d];
                }
            }
        }
    }
    out
}

/// `max_ν |∂_μṠ^μ_ν − RHS_ν|` with the right-hand side of the canonical-stress divergence identity.
pub fn stress_divergence_jet_check(model: &EmModel, jet: &StressJet) -> Result<f64, DiagnosticsError> {
    let metric = |g: &SymTensor4| MetricState::from_metric(g).map_err(DiagnosticsError::from);
    let n_at = |dir: usize, s: f64| -> Result<Rank4, DiagnosticsError> {
        let (g, f, _) = jet.at(dir, s);
        Ok(big_n(model, &metric(&g)?, &f)?.n_sharp)
    };
    // Surface domain errors before differencing.
    let n0 = n_at(0, 0.0)?;
    for dir in 0..4 {
        for k in [-2.0, -1.0, 1.0, 2.0] {
            n_at(dir, k * JET_FD_STEP)?;
        }
    }
    // dn[α] = ∂_α N^#, flattened.
    let dn: [[f64; 256]; 4] = std::array::from_fn(|dir| {
        d_along(|s| n_at(dir, s).expect("domain checked above"), flatten4)
    });
    let dn_at = |a: usize, m: usize, z: usize, k: usize, l: usize| dn[a][((m * 4 + z) * 4 + k) * 4 + l];

    let mut lhs = [0.0; 4];
    for mu in 0..4 {
        let row: [f64; 4] = d_along(
            |s| {
                let (_, _, fdot) = jet.at(mu, s);
                stress_from_n(&n_at(mu, s).expect("domain checked above"), &fdot)
            },
            |m: &Mat4| m[mu],
        );
        for nu in 0..4 {
            lhs[nu] += row[nu];
        }
    }

    let fd = jet.fdot.to_matrix();
    let (cyc, vec) = jet.inhomogeneities(&n0);
    let mut worst: f64 = 0.0;
    for nu in 0..4 {
        let mut rhs = 0.0;
        for z in 0..4 {
            for e in 0..4 {
                for k in 0..4 {
                    for l in 0..4 {
                        rhs -= 0.5 * n0[z][e][k][l] * fd[z][e] * cyc[nu][k][l];
                        rhs -= 0.25 * dn_at(nu, z, e, k, l) * fd[z][e] * fd[k][l];
                    }
                }
            }
            rhs += fd[nu][z] * vec[z];
            for m in 0..4 {
                for k in 0..4 {
                    for l in 0..4 {
                        rhs += dn_at(m, m, z, k, l) * fd[k][l] * fd[nu][z];
                    }
                }
            }
        }
        worst = worst.max((lhs[nu] - rhs).abs());
    }
    Ok(worst)
}
