//! Uniform periodic grid on `[−L, L)³` with fourth-order centred stencils.
//!
//! Point `(ix, iy, iz)` sits at `x_i = −L + i·dx` and is stored at `(iz·n + iy)·n + ix`.
//! Reductions sum each z-slab serially and then combine slab totals pairwise, so results
//! do not depend on how many worker threads touched the slabs.

use rayon::prelude::*;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GridError {
    #[error("grid needs n >= 16 and n divisible by 8, got n = {0}")]
    BadResolution(usize),
    #[error("grid half-width must be positive and finite, got {0}")]
    BadExtent(f64),
}

/// First-derivative weights: `∂f ≈ [C1(f₊₁ − f₋₁) − C2(f₊₂ − f₋₂)]/dx`.
const C1: f64 = 2.0 / 3.0;
const C2: f64 = 1.0 / 12.0;
/// Sixth difference at offsets −3..=3, the Kreiss–Oliger operator of a fourth-order scheme.
const KO6: [f64; 7] = [1.0, -6.0, 15.0, -20.0, 15.0, -6.0, 1.0];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub n: usize,
    pub l: f64,
    pub dx: f64,
}

impl Grid {
    pub fn new(n: usize, l: f64) -> Result<Self, GridError> {
        if n < 16 || !n.is_multiple_of(8) {
            return Err(GridError::BadResolution(n));
        }
        if !(l > 0.0 && l.is_finite()) {
            return Err(GridError::BadExtent(l));
        }
        Ok(Grid {
            n,
            l,
            dx: 2.0 * l / n as f64,
        })
    }

    pub fn len(&self) -> usize {
        self.n * self.n * self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Points per z-slab.
    pub fn slab(&self) -> usize {
        self.n * self.n
    }

    pub fn coord(&self, i: usize) -> f64 {
        -self.l + i as f64 * self.dx
    }

    pub fn index(&self, ix: usize, iy: usize, iz: usize) -> usize {
        (iz * self.n + iy) * self.n + ix
    }

    pub fn ijk(&self, idx: usize) -> [usize; 3] {
        let n = self.n;
        [idx % n, (idx / n) % n, idx / (n * n)]
    }

    pub fn point(&self, idx: usize) -> [f64; 3] {
        let [i, j, k] = self.ijk(idx);
        [self.coord(i), self.coord(j), self.coord(k)]
    }

    pub fn cell_volume(&self) -> f64 {
        self.dx * self.dx * self.dx
    }

    pub fn zeros(&self) -> Vec<f64> {
        vec![0.0; self.len()]
    }

    /// Evaluates `f` at every grid point.
    pub fn sample(&self, f: impl Fn([f64; 3]) -> f64 + Sync) -> Vec<f64> {
        let mut out = self.zeros();
        out.par_chunks_mut(self.slab()).enumerate().for_each(|(iz, slab)| {
            let base = iz * self.slab();
            for (k, v) in slab.iter_mut().enumerate() {
                *v = f(self.point(base + k));
            }
        });
        out
    }

    /// Index of the point displaced by `off` along `axis`, wrapping periodically.
    #[inline]
    pub fn shift(&self, idx: usize, axis: usize, off: isize) -> usize {
        let n = self.n as isize;
        let stride = [1usize, self.n, self.n * self.n][axis];
        let i = ((idx / stride) % self.n) as isize;
        let j = (i + off).rem_euclid(n) as usize;
        idx + j * stride - i as usize * stride
    }

    /// Neighbour indices at offsets −3..=3 along each axis.
    #[inline]
    pub fn neighbours(&self, idx: usize) -> Neighbours {
        let n = self.n as isize;
        let ijk = self.ijk(idx);
        let stride = [1usize, self.n, self.n * self.n];
        let mut out = [[0usize; 7]; 3];
        for (axis, row) in out.iter_mut().enumerate() {
            let i = ijk[axis] as isize;
            for (k, slot) in row.iter_mut().enumerate() {
                let j = (i + k as isize - 3).rem_euclid(n) as usize;
                *slot = idx + j * stride[axis] - ijk[axis] * stride[axis];
            }
        }
        Neighbours { base: idx, idx: out }
    }

    /// `∂_a f` at one point, written in differences so constants give exactly zero.
    #[inline]
    pub fn d1_at(&self, f: &[f64], nb: &Neighbours, axis: usize) -> f64 {
        let row = &nb.idx[axis];
        (C1 * (f[row[4]] - f[row[2]]) - C2 * (f[row[5]] - f[row[1]])) / self.dx
    }

    /// `∂_a ∂_b f` at one point; mixed partials nest the first-derivative stencil.
    #[inline]
    pub fn d2_at(&self, f: &[f64], nb: &Neighbours, a: usize, b: usize) -> f64 {
        if a == b {
            let row = &nb.idx[a];
            let c = 2.0 * f[row[3]];
            let s = 4.0 / 3.0 * (f[row[2]] + f[row[4]] - c) - C2 * (f[row[1]] + f[row[5]] - c);
            return s / (self.dx * self.dx);
        }
        // Periodic wrapping is separable, so the (p, q) neighbour is row_a[p] + row_b[q] − base.
        let (ra, rb) = (&nb.idx[a], &nb.idx[b]);
        let at = |p: usize, q: usize| f[ra[p] + rb[q] - nb.base];
        let line = |p: usize| C1 * (at(p, 4) - at(p, 2)) - C2 * (at(p, 5) - at(p, 1));
        (C1 * (line(4) - line(2)) - C2 * (line(5) - line(1))) / (self.dx * self.dx)
    }

    /// Kreiss–Oliger term `(1/64dx) Σ_a δ_a⁶ f`, negative semidefinite.
    #[inline]
    pub fn ko_at(&self, f: &[f64], nb: &Neighbours) -> f64 {
        let mut s = 0.0;
        for row in &nb.idx {
            for (k, w) in KO6.iter().enumerate() {
                s += w * f[row[k]];
            }
        }
        s / (64.0 * self.dx)
    }

    pub fn d1(&self, f: &[f64], axis: usize) -> Vec<f64> {
        self.map_points(|idx| {
            let nb = self.neighbours(idx);
            self.d1_at(f, &nb, axis)
        })
    }

    pub fn d2(&self, f: &[f64], a: usize, b: usize) -> Vec<f64> {
        self.map_points(|idx| {
            let nb = self.neighbours(idx);
            self.d2_at(f, &nb, a, b)
        })
    }

    /// Evaluates `f(idx)` at every point, slab-parallel.
    pub fn map_points(&self, f: impl Fn(usize) -> f64 + Sync) -> Vec<f64> {
        let mut out = self.zeros();
        out.par_chunks_mut(self.slab()).enumerate().for_each(|(iz, slab)| {
            let base = iz * self.slab();
            for (k, v) in slab.iter_mut().enumerate() {
                *v = f(base + k);
            }
        });
        out
    }

    /// Writes `K = outputs.len()` values per point, slab-parallel. `f(idx, vals)` fills `vals`;
    /// the error reported is the one at the smallest failing slab.
    pub fn fill_points<E: Send>(
        &self,
        outputs: &mut [&mut [f64]],
        f: impl Fn(usize, &mut [f64]) -> Result<(), E> + Sync,
    ) -> Result<(), E> {
        let slab = self.slab();
        let k = outputs.len();
        let mut per_slab: Vec<Vec<&mut [f64]>> = (0..self.n).map(|_| Vec::with_capacity(k)).collect();
        for out in outputs.iter_mut() {
            for (s, chunk) in out.chunks_mut(slab).enumerate() {
                per_slab[s].push(chunk);
            }
        }
        let results: Vec<Result<(), E>> = per_slab
            .into_par_iter()
            .enumerate()
            .map(|(s, mut chunks)| {
                let mut vals = vec![0.0; k];
                for p in 0..slab {
                    f(s * slab + p, &mut vals)?;
                    for (c, v) in chunks.iter_mut().zip(&vals) {
                        c[p] = *v;
                    }
                }
                Ok(())
            })
            .collect();
        results.into_iter().collect()
    }

    /// `Σ_idx f(idx)` with the fixed slab-then-pairwise summation tree.
    pub fn sum(&self, f: impl Fn(usize) -> f64 + Sync) -> f64 {
        let slab = self.slab();
        let partial: Vec<f64> = (0..self.n)
            .into_par_iter()
            .map(|iz| {
                let base = iz * slab;
                let mut s = 0.0;
                for k in 0..slab {
                    s += f(base + k);
                }
                s
            })
            .collect();
        pairwise_sum(&partial)
    }

    /// `K` simultaneous sums `Σ_idx f(idx)[k]` with the fixed slab-then-pairwise tree.
    pub fn sum_vec(&self, k: usize, f: impl Fn(usize, &mut [f64]) + Sync) -> Vec<f64> {
        let slab = self.slab();
        let partial: Vec<Vec<f64>> = (0..self.n)
            .into_par_iter()
            .map(|iz| {
                let base = iz * slab;
                let mut acc = vec![0.0; k];
                let mut vals = vec![0.0; k];
                for p in 0..slab {
                    vals.iter_mut().for_each(|v| *v = 0.0);
                    f(base + p, &mut vals);
                    acc.iter_mut().zip(&vals).for_each(|(a, v)| *a += v);
                }
                acc
            })
            .collect();
        (0..k)
            .map(|c| pairwise_sum(&partial.iter().map(|p| p[c]).collect::<Vec<_>>()))
            .collect()
    }

    /// `max_idx f(idx)`; NaN propagates.
    pub fn max(&self, f: impl Fn(usize) -> f64 + Sync) -> f64 {
        let slab = self.slab();
        let partial: Vec<f64> = (0..self.n)
            .into_par_iter()
            .map(|iz| {
                let base = iz * slab;
                (0..slab).fold(0.0f64, |m, k| nan_aware_max(m, f(base + k)))
            })
            .collect();
        partial.into_iter().fold(0.0, nan_aware_max)
    }

    /// `(Σ f² dx³)^{1/2}`.
    pub fn l2_norm(&self, f: &[f64]) -> f64 {
        (self.sum(|i| f[i] * f[i]) * self.cell_volume()).sqrt()
    }

    pub fn max_abs(&self, f: &[f64]) -> f64 {
        self.max(|i| f[i].abs())
    }
}

fn nan_aware_max(a: f64, b: f64) -> f64 {
    if a.is_nan() || b.is_nan() {
        f64::NAN
    } else {
        a.max(b)
    }
}

/// Neighbour indices `idx[axis][k]` at offset `k − 3`.
#[derive(Debug, Clone, Copy)]
pub struct Neighbours {
    pub base: usize,
    pub idx: [[usize; 7]; 3],
}

/// Pairwise (balanced binary tree) summation in index order.
pub fn pairwise_sum(v: &[f64]) -> f64 {
    match v.len() {
        0 => 0.0,
        1 => v[0],
        n => {
            let (a, b) = v.split_at(n / 2);
            pairwise_sum(a) + pairwise_sum(b)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn resolution_invariant() {
        assert!(Grid::new(8, 1.0).is_err());
        assert!(Grid::new(20, 1.0).is_err());
        assert!(Grid::new(16, 0.0).is_err());
        let g = Grid::new(16, 2.0).unwrap();
        assert_eq!(g.dx, 0.25);
        assert_eq!(g.point(g.index(8, 8, 8)), [0.0, 0.0, 0.0]);
    }

    #[test]
    fn shift_wraps_periodically() {
        let g = Grid::new(16, 1.0).unwrap();
        let i = g.index(0, 5, 15);
        assert_eq!(g.ijk(g.shift(i, 0, -1)), [15, 5, 15]);
        assert_eq!(g.ijk(g.shift(i, 2, 2)), [0, 5, 1]);
        assert_eq!(g.ijk(g.shift(i, 1, -7)), [0, 14, 15]);
    }

    #[test]
    fn stencils_match_trig_derivatives() {
        let g = Grid::new(32, std::f64::consts::PI).unwrap();
        let f = g.sample(|x| x[0].sin() * x[1].cos());
        let fx = g.d1(&f, 0);
        let fxy = g.d2(&f, 0, 1);
        let fyy = g.d2(&f, 1, 1);
        let mut err: f64 = 0.0;
        for idx in 0..g.len() {
            let x = g.point(idx);
            err = err.max((fx[idx] - x[0].cos() * x[1].cos()).abs());
            err = err.max((fxy[idx] + x[0].cos() * x[1].sin()).abs());
            err = err.max((fyy[idx] + x[0].sin() * x[1].cos()).abs());
        }
        assert!(err < 2e-4, "{err}");
    }

    #[test]
    fn dissipation_damps_the_grid_mode() {
        let g = Grid::new(16, 1.0).unwrap();
        let f = g.map_points(|i| if g.ijk(i)[0].is_multiple_of(2) { 1.0 } else { -1.0 });
        let nb = g.neighbours(0);
        assert!((g.ko_at(&f, &nb) + 1.0 / g.dx).abs() < 1e-12);
        let c = g.zeros();
        assert_eq!(g.ko_at(&c, &nb), 0.0);
    }

    #[test]
    fn reductions_are_order_fixed() {
        let g = Grid::new(16, 1.0).unwrap();
        let f = g.sample(|x| (x[0] * 3.0).sin() + x[1] * x[2]);
        let a = g.sum(|i| f[i]);
        let b = g.sum(|i| f[i]);
        assert_eq!(a.to_bits(), b.to_bits());
        assert_eq!(pairwise_sum(&[1.0, 2.0, 3.0]), 6.0);
        assert!(g.max(|i| if i == 7 { f64::NAN } else { 0.0 }).is_nan());
    }
}
