//! Spacetime Taylor jets of order ≤ 3 and the exact action of affine vector fields on them.
//!
//! Every member of the commutator set has `∂∂Z = 0`, so `∂^β(Z^λ∂_λ u)` is a finite sum of
//! jet entries. Applying `Z` to a jet of order `p` yields a jet of order `p − 1` with no
//! discretisation error beyond the one already in the entries.

use std::sync::OnceLock;

use crate::grid::Grid;
use crate::tensor_core::{Mat4, Vec4};

pub const MAX_ORDER: usize = 3;
/// Number of multi-indices `β ∈ ℕ⁴` with `|β| ≤ 3`.
pub const JET_LEN: usize = 35;

struct Table {
    list: Vec<[usize; 4]>,
    index: [[[[usize; 4]; 4]; 4]; 4],
    /// Entries of order `≤ p` are `list[..len_upto[p]]`.
    len_upto: [usize; MAX_ORDER + 1],
}

fn table() -> &'static Table {
    static TABLE: OnceLock<Table> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut list = Vec::with_capacity(JET_LEN);
        let mut len_upto = [0; MAX_ORDER + 1];
        for order in 0..=MAX_ORDER {
            for a in 0..=order {
                for b in 0..=order - a {
                    for c in 0..=order - a - b {
                        list.push([a, b, c, order - a - b - c]);
                    }
                }
            }
            len_upto[order] = list.len();
        }
        let mut index = [[[[usize::MAX; 4]; 4]; 4]; 4];
        for (i, m) in list.iter().enumerate() {
            index[m[0]][m[1]][m[2]][m[3]] = i;
        }
        Table { list, index, len_upto }
    })
}

/// Position of `β` in jet storage.
pub fn slot(beta: [usize; 4]) -> usize {
    table().index[beta[0]][beta[1]][beta[2]][beta[3]]
}

/// Multi-indices of order `≤ p`, in storage order.
pub fn multi_indices(p: usize) -> &'static [[usize; 4]] {
    let t = table();
    &t.list[..t.len_upto[p]]
}

/// `∂^β u` for `|β| ≤ order`, in spacetime coordinates `(t, x, y, z)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet {
    pub order: usize,
    pub c: [f64; JET_LEN],
}

impl Jet {
    pub fn zero(order: usize) -> Self {
        Jet { order, c: [0.0; JET_LEN] }
    }

    pub fn value(&self) -> f64 {
        self.c[0]
    }

    /// `∂_μ u`; requires `order ≥ 1`.
    pub fn gradient(&self) -> Vec4 {
        std::array::from_fn(|mu| {
            let mut b = [0; 4];
            b[mu] = 1;
            self.c[slot(b)]
        })
    }

    pub fn get(&self, beta: [usize; 4]) -> f64 {
        self.c[slot(beta)]
    }

    /// `self += s·other` on the entries both carry.
    pub fn add_scaled(&mut self, s: f64, other: &Jet) {
        let n = multi_indices(self.order.min(other.order)).len();
        for i in 0..n {
            self.c[i] += s * other.c[i];
        }
    }

    /// Jet of `Z^λ∂_λ u` for an affine field with value `z` here and `dz[μ][λ] = ∂_μZ^λ`.
    pub fn apply_vector(&self, z: &Vec4, dz: &Mat4) -> Jet {
        assert!(self.order >= 1, "a vector field lowers the jet order");
        let mut out = Jet::zero(self.order - 1);
        for (i, beta) in multi_indices(self.order - 1).iter().enumerate() {
            let mut s = 0.0;
            for lam in 0..4 {
                if z[lam] != 0.0 {
                    let mut up = *beta;
                    up[lam] += 1;
                    s += z[lam] * self.c[slot(up)];
                }
            }
            for mu in 0..4 {
                if beta[mu] == 0 {
                    continue;
                }
                for lam in 0..4 {
                    if dz[mu][lam] != 0.0 {
                        let mut b = *beta;
                        b[mu] -= 1;
                        b[lam] += 1;
                        s += beta[mu] as f64 * dz[mu][lam] * self.c[slot(b)];
                    }
                }
            }
            out.c[i] = s;
        }
        out
    }
}

/// Upper-triangle two-form slots `(μ, ν)` with `μ < ν`.
pub const FORM_PAIRS: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

fn form_slot(mu: usize, nu: usize) -> Option<(usize, f64)> {
    if mu == nu {
        return None;
    }
    let (a, b, sign) = if mu < nu { (mu, nu, 1.0) } else { (nu, mu, -1.0) };
    FORM_PAIRS.iter().position(|&p| p == (a, b)).map(|s| (s, sign))
}

/// Jets of `ℒ_Z F` from jets of `F_{μν}` (upper-triangle storage).
pub fn lie_form(f: &[Jet; 6], z: &Vec4, dz: &Mat4) -> [Jet; 6] {
    std::array::from_fn(|p| {
        let (mu, nu) = FORM_PAIRS[p];
        let mut out = f[p].apply_vector(z, dz);
        for lam in 0..4 {
            if dz[mu][lam] != 0.0 {
                if let Some((s, sign)) = form_slot(lam, nu) {
                    out.add_scaled(sign * dz[mu][lam], &f[s]);
                }
            }
            if dz[nu][lam] != 0.0 {
                if let Some((s, sign)) = form_slot(mu, lam) {
                    out.add_scaled(sign * dz[nu][lam], &f[s]);
                }
            }
        }
        out
    })
}

/// Taps of the `m`-fold first-derivative stencil at offsets `−2m..=2m`, without the `dx^{−m}` factor.
fn kernel(m: usize) -> Vec<f64> {
    let base = [1.0 / 12.0, -2.0 / 3.0, 0.0, 2.0 / 3.0, -1.0 / 12.0];
    let mut k = vec![1.0];
    for _ in 0..m {
        let mut next = vec![0.0; k.len() + 4];
        for (i, a) in k.iter().enumerate() {
            for (j, b) in base.iter().enumerate() {
                next[i + j] += a * b;
            }
        }
        k = next;
    }
    k
}

fn kernels() -> &'static [Vec<f64>; MAX_ORDER + 1] {
    static K: OnceLock<[Vec<f64>; MAX_ORDER + 1]> = OnceLock::new();
    K.get_or_init(|| std::array::from_fn(kernel))
}

const REACH: usize = 2 * MAX_ORDER;

/// Indices at offsets `−6..=6` along each axis of one grid point.
#[derive(Debug, Clone, Copy)]
pub struct Reach {
    base: usize,
    rows: [[usize; 2 * REACH + 1]; 3],
}

impl Reach {
    pub fn new(grid: &Grid, idx: usize) -> Self {
        let rows = std::array::from_fn(|axis| {
            std::array::from_fn(|k| grid.shift(idx, axis, k as isize - REACH as isize))
        });
        Reach { base: idx, rows }
    }
}

/// `∂^β f` with nested fourth-order first-derivative stencils, `|β| ≤ 3`.
pub fn spatial_partial(grid: &Grid, f: &[f64], reach: &Reach, beta: [usize; 3]) -> f64 {
    let ks = kernels();
    let (kx, ky, kz) = (&ks[beta[0]], &ks[beta[1]], &ks[beta[2]]);
    let (hx, hy, hz) = (2 * beta[0], 2 * beta[1], 2 * beta[2]);
    let r = &reach.rows;
    let mut s = 0.0;
    for (c, wz) in kz.iter().enumerate() {
        if *wz == 0.0 {
            continue;
        }
        let iz = r[2][REACH + c - hz];
        for (b, wy) in ky.iter().enumerate() {
            if *wy == 0.0 {
                continue;
            }
            let iy = r[1][REACH + b - hy];
            let mut line = 0.0;
            for (a, wx) in kx.iter().enumerate() {
                if *wx != 0.0 {
                    // Periodic wrapping is separable along axes.
                    line += wx * f[r[0][REACH + a - hx] + iy + iz - 2 * reach.base];
                }
            }
            s += wz * wy * line;
        }
    }
    s / grid.dx.powi((beta[0] + beta[1] + beta[2]) as i32)
}

/// Jet of order `order` from time levels `levels[a] = ∂_t^a u` sampled on the grid.
/// Entries with `β_t ≥ levels.len()` are left at zero.
pub fn grid_jet(grid: &Grid, levels: &[&[f64]], reach: &Reach, order: usize) -> Jet {
    let mut jet = Jet::zero(order);
    for (i, beta) in multi_indices(order).iter().enumerate() {
        if let Some(level) = levels.get(beta[0]) {
            jet.c[i] = spatial_partial(grid, level, reach, [beta[1], beta[2], beta[3]]);
        }
    }
    jet
}

/// Jet of order ≤ 2 of a spacetime function by fourth-order central differences with step `h`.
pub fn sampled_jet(f: &dyn Fn(&Vec4) -> f64, x: &Vec4, h: f64, order: usize) -> Jet {
    assert!(order <= 2, "sampled jets stop at second order");
    let at = |d: &[(usize, f64)]| {
        let mut y = *x;
        for &(mu, s) in d {
            y[mu] += s;
        }
        f(&y)
    };
    const W1: [(f64, f64); 4] = [(-2.0, 1.0 / 12.0), (-1.0, -2.0 / 3.0), (1.0, 2.0 / 3.0), (2.0, -1.0 / 12.0)];
    const W2: [(f64, f64); 5] = [
        (-2.0, -1.0 / 12.0),
        (-1.0, 4.0 / 3.0),
        (0.0, -5.0 / 2.0),
        (1.0, 4.0 / 3.0),
        (2.0, -1.0 / 12.0),
    ];
    let mut jet = Jet::zero(order);
    for (i, beta) in multi_indices(order).iter().enumerate() {
        let dirs: Vec<usize> = (0..4).flat_map(|mu| std::iter::repeat_n(mu, beta[mu])).collect();
        jet.c[i] = match dirs.as_slice() {
            [] => at(&[]),
            [a] => W1.iter().map(|&(o, w)| w * at(&[(*a, o * h)])).sum::<f64>() / h,
            [a, b] if a == b => W2.iter().map(|&(o, w)| w * at(&[(*a, o * h)])).sum::<f64>() / (h * h),
            [a, b] => {
                let mut s = 0.0;
                for &(o1, w1) in &W1 {
                    for &(o2, w2) in &W1 {
                        s += w1 * w2 * at(&[(*a, o1 * h), (*b, o2 * h)]);
                    }
                }
                s / (h * h)
            }
            _ => unreachable!(),
        };
    }
    jet
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_counts_and_round_trips() {
        assert_eq!(multi_indices(MAX_ORDER).len(), JET_LEN);
        assert_eq!(multi_indices(1).len(), 5);
        assert_eq!(multi_indices(2).len(), 15);
        for (i, b) in multi_indices(MAX_ORDER).iter().enumerate() {
            assert_eq!(slot(*b), i);
        }
    }

    #[test]
    fn kernels_annihilate_low_powers() {
        // The m-fold stencil maps x^m to m! and lower powers to zero.
        for m in 1..=MAX_ORDER {
            let k = kernel(m);
            let half = 2 * m as i64;
            for p in 0..=m {
                let s: f64 = k.iter().enumerate().map(|(i, w)| w * ((i as i64 - half) as f64).powi(p as i32)).sum();
                let expect = if p == m { (1..=m).product::<usize>() as f64 } else { 0.0 };
                assert!((s - expect).abs() < 1e-12, "m={m} p={p} s={s}");
            }
        }
    }
}
