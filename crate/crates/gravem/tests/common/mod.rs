//! Independent brute-force oracles shared by the integration tests.
//!
//! Nothing here calls the fast paths of the library except for the value
//! types; every contraction is written as a plain index loop.

#![allow(dead_code)]

use gravem::tensor_core::{Mat4, MetricState, SymTensor4, TwoForm};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    use rand::SeedableRng;
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn eta() -> Mat4 {
    let mut m = [[0.0; 4]; 4];
    m[0][0] = -1.0;
    m[1][1] = 1.0;
    m[2][2] = 1.0;
    m[3][3] = 1.0;
    m
}

/// Permutation sign by explicit inversion counting.
pub fn perm(idx: [usize; 4]) -> f64 {
    let mut seen = [false; 4];
    for &i in &idx {
        if seen[i] {
            return 0.0;
        }
        seen[i] = true;
    }
    let mut inversions = 0;
    for i in 0..4 {
        for j in (i + 1)..4 {
            if idx[i] > idx[j] {
                inversions += 1;
            }
        }
    }
    if inversions % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Determinant by Leibniz expansion over all 24 permutations.
pub fn det_leibniz(m: &Mat4) -> f64 {
    let mut s = 0.0;
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                for d in 0..4 {
                    let p = perm([a, b, c, d]);
                    if p != 0.0 {
                        s += p * m[0][a] * m[1][b] * m[2][c] * m[3][d];
                    }
                }
            }
        }
    }
    s
}

/// Inverse by Gauss–Jordan elimination with partial pivoting.
pub fn inverse_gauss(m: &Mat4) -> Mat4 {
    let mut a = *m;
    let mut inv = [[0.0; 4]; 4];
    for (i, row) in inv.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    for col in 0..4 {
        let piv = (col..4)
            .max_by(|&x, &y| a[x][col].abs().partial_cmp(&a[y][col].abs()).unwrap())
            .unwrap();
        a.swap(col, piv);
        inv.swap(col, piv);
        let d = a[col][col];
        for j in 0..4 {
            a[col][j] /= d;
            inv[col][j] /= d;
        }
        for r in 0..4 {
            if r != col {
                let f = a[r][col];
                for j in 0..4 {
                    a[r][j] -= f * a[col][j];
                    inv[r][j] -= f * inv[col][j];
                }
            }
        }
    }
    inv
}

pub fn random_sym(rng: &mut ChaCha8Rng, amp: f64) -> SymTensor4 {
    SymTensor4::from_fn(|_, _| rng.gen_range(-amp..amp))
}

pub fn random_form(rng: &mut ChaCha8Rng, amp: f64) -> TwoForm {
    TwoForm::from_entries(std::array::from_fn(|_| rng.gen_range(-amp..amp)))
}

pub fn random_metric(rng: &mut ChaCha8Rng, amp: f64) -> MetricState {
    let h1 = random_sym(rng, amp);
    gravem::tensor_core::assemble_metric(&SymTensor4::zero(), &h1).unwrap()
}

/// Fully contravariant volume form `ε^{#μνκλ} = −|det g|^{-1/2}[μνκλ]`.
pub fn eps_up(g: &Mat4, idx: [usize; 4]) -> f64 {
    -perm(idx) / det_leibniz(g).abs().sqrt()
}

pub fn raise_loop(gi: &Mat4, f: &Mat4) -> Mat4 {
    let mut out = [[0.0; 4]; 4];
    for m in 0..4 {
        for n in 0..4 {
            for k in 0..4 {
                for l in 0..4 {
                    out[m][n] += gi[m][k] * gi[n][l] * f[k][l];
                }
            }
        }
    }
    out
}

/// `⋆F^{#μν} = ½ ε^{#μνκλ} F_{κλ}`.
pub fn dual_up_loop(g: &Mat4, f: &Mat4) -> Mat4 {
    let mut out = [[0.0; 4]; 4];
    for m in 0..4 {
        for n in 0..4 {
            for k in 0..4 {
                for l in 0..4 {
                    out[m][n] += 0.5 * eps_up(g, [m, n, k, l]) * f[k][l];
                }
            }
        }
    }
    out
}

pub fn lower_loop(g: &Mat4, up: &Mat4) -> Mat4 {
    raise_loop(g, up)
}

/// `(F₍₁₎, F₍₂₎)` by full index loops.
pub fn invariants_loop(g: &Mat4, f: &Mat4) -> (f64, f64) {
    let gi = inverse_gauss(g);
    let up = raise_loop(&gi, f);
    let dual = lower_loop(g, &dual_up_loop(g, f));
    let mut f1 = 0.0;
    let mut f2 = 0.0;
    for k in 0..4 {
        for l in 0..4 {
            f1 += 0.5 * up[k][l] * f[k][l];
            f2 += 0.25 * up[k][l] * dual[k][l];
        }
    }
    (f1, f2)
}

pub fn max_diff(a: &Mat4, b: &Mat4) -> f64 {
    let mut m: f64 = 0.0;
    for i in 0..4 {
        for j in 0..4 {
            m = m.max((a[i][j] - b[i][j]).abs());
        }
    }
    m
}

/// Ordinary least-squares slope of `ln y` against `ln x`.
pub fn loglog_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    for (x, y) in lx.iter().zip(ly.iter()) {
        sxy += (x - mx) * (y - my);
        sxx += (x - mx) * (x - mx);
    }
    sxy / sxx
}
