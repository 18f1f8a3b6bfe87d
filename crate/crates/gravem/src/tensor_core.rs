//! Pointwise Lorentzian tensor algebra.
//!
//! Index conventions: Greek indices run over `0..4` with `0` the time
//! coordinate, the background metric is `m = diag(-1, 1, 1, 1)` and the
//! permutation symbol satisfies `[0123] = +1`. Derivative arrays are stored
//! derivative-index first, so `dg[l][m][n]` is `∂_l g_{mn}` and
//! `gamma[k][m][n]` is `Γ_{m n}^k`.

use thiserror::Error;

pub type Vec4 = [f64; 4];
pub type Mat4 = [[f64; 4]; 4];
pub type Rank3 = [[[f64; 4]; 4]; 4];
pub type Rank4 = [[[[f64; 4]; 4]; 4]; 4];

/// `m_{μν}`; it is its own inverse.
pub const MINKOWSKI: Mat4 = [
    [-1.0, 0.0, 0.0, 0.0],
    [0.0, 1.0, 0.0, 0.0],
    [0.0, 0.0, 1.0, 0.0],
    [0.0, 0.0, 0.0, 1.0],
];

/// Storage order of the upper triangle of a symmetric tensor.
pub const SYM_PAIRS: [(usize, usize); 10] = [
    (0, 0),
    (0, 1),
    (0, 2),
    (0, 3),
    (1, 1),
    (1, 2),
    (1, 3),
    (2, 2),
    (2, 3),
    (3, 3),
];

/// Storage order of the strict upper triangle of a two-form.
pub const FORM_PAIRS: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TensorError {
    #[error("metric is not Lorentzian: det = {det:e}, inversion residual = {residual:e}")]
    NonLorentzian { det: f64, residual: f64 },
    #[error("identity `{name}` violated: residual {residual:e} exceeds {tolerance:e}")]
    IdentityViolation {
        name: &'static str,
        residual: f64,
        tolerance: f64,
    },
}

#[inline]
pub fn sym_index(i: usize, j: usize) -> usize {
    let (a, b) = if i <= j { (i, j) } else { (j, i) };
    match a {
        0 => b,
        1 => 3 + b,
        2 => 5 + b,
        _ => 9,
    }
}

/// Returns `(slot, sign)` with `F_{ij} = sign * entries[slot]`, or `None` on the diagonal.
#[inline]
pub fn form_index(i: usize, j: usize) -> Option<(usize, f64)> {
    if i == j {
        return None;
    }
    let (a, b, s) = if i < j { (i, j, 1.0) } else { (j, i, -1.0) };
    let slot = match (a, b) {
        (0, 1) => 0,
        (0, 2) => 1,
        (0, 3) => 2,
        (1, 2) => 3,
        (1, 3) => 4,
        _ => 5,
    };
    Some((slot, s))
}

/// Sign of the permutation `(a, b, c, d)` of `(0, 1, 2, 3)`; zero on repeats.
#[inline]
pub fn levi_civita(a: usize, b: usize, c: usize, d: usize) -> f64 {
    let p = [a, b, c, d];
    let mut sign = 1.0;
    for i in 0..4 {
        for j in (i + 1)..4 {
            if p[i] == p[j] {
                return 0.0;
            }
            if p[i] > p[j] {
                sign = -sign;
            }
        }
    }
    sign
}

/// Three-dimensional permutation symbol on `0..3`.
#[inline]
pub fn levi_civita3(a: usize, b: usize, c: usize) -> f64 {
    if a == b || b == c || a == c {
        return 0.0;
    }
    if (a, b, c) == (0, 1, 2) || (a, b, c) == (1, 2, 0) || (a, b, c) == (2, 0, 1) {
        1.0
    } else {
        -1.0
    }
}

/// Symmetric rank-2 tensor holding only the upper triangle.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SymTensor4 {
    entries: [f64; 10],
}

impl SymTensor4 {
    pub const fn zero() -> Self {
        SymTensor4 { entries: [0.0; 10] }
    }

    pub fn minkowski() -> Self {
        Self::from_matrix(&MINKOWSKI)
    }

    pub const fn from_entries(entries: [f64; 10]) -> Self {
        SymTensor4 { entries }
    }

    /// `f(i, j)` is evaluated for `i <= j` only.
    pub fn from_fn(mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut entries = [0.0; 10];
        for (k, &(i, j)) in SYM_PAIRS.iter().enumerate() {
            entries[k] = f(i, j);
        }
        SymTensor4 { entries }
    }

    /// Reads the upper triangle; the lower triangle is ignored.
    pub fn from_matrix(m: &Mat4) -> Self {
        Self::from_fn(|i, j| m[i][j])
    }

    pub fn diagonal(value: f64) -> Self {
        Self::from_fn(|i, j| if i == j { value } else { 0.0 })
    }

    pub fn entries(&self) -> &[f64; 10] {
        &self.entries
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[sym_index(i, j)]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.entries[sym_index(i, j)] = v;
    }

    pub fn to_matrix(&self) -> Mat4 {
        let mut m = [[0.0; 4]; 4];
        for (k, &(i, j)) in SYM_PAIRS.iter().enumerate() {
            m[i][j] = self.entries[k];
            m[j][i] = self.entries[k];
        }
        m
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut e = self.entries;
        for (a, b) in e.iter_mut().zip(other.entries.iter()) {
            *a += b;
        }
        SymTensor4 { entries: e }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(-1.0))
    }

    pub fn scale(&self, s: f64) -> Self {
        let mut e = self.entries;
        e.iter_mut().for_each(|a| *a *= s);
        SymTensor4 { entries: e }
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    pub fn is_finite(&self) -> bool {
        self.entries.iter().all(|x| x.is_finite())
    }

    /// `P(X, Y) = P_{μν} X^μ Y^ν`.
    pub fn contract(&self, x: &Vec4, y: &Vec4) -> f64 {
        bilinear(&self.to_matrix(), x, y)
    }
}

/// Antisymmetric rank-2 tensor holding the strict upper triangle.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct TwoForm {
    entries: [f64; 6],
}

impl TwoForm {
    pub const fn zero() -> Self {
        TwoForm { entries: [0.0; 6] }
    }

    pub const fn from_entries(entries: [f64; 6]) -> Self {
        TwoForm { entries }
    }

    /// Reads the strict upper triangle.
    pub fn from_matrix(m: &Mat4) -> Self {
        let mut entries = [0.0; 6];
        for (k, &(i, j)) in FORM_PAIRS.iter().enumerate() {
            entries[k] = m[i][j];
        }
        TwoForm { entries }
    }

    /// Unit two-form with a single independent slot set.
    pub fn basis(slot: usize) -> Self {
        let mut entries = [0.0; 6];
        entries[slot] = 1.0;
        TwoForm { entries }
    }

    /// `F_{j0} = E_j` and `F_{jk} = [ijk] B_i` (spatial indices `1..=3`).
    pub fn from_electric_magnetic(e: &[f64; 3], b: &[f64; 3]) -> Self {
        TwoForm {
            entries: [-e[0], -e[1], -e[2], b[2], -b[1], b[0]],
        }
    }

    /// Inverse of [`TwoForm::from_electric_magnetic`].
    pub fn electric_magnetic(&self) -> ([f64; 3], [f64; 3]) {
        let f = &self.entries;
        ([-f[0], -f[1], -f[2]], [f[5], -f[4], f[3]])
    }

    pub fn entries(&self) -> &[f64; 6] {
        &self.entries
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        match form_index(i, j) {
            Some((k, s)) => s * self.entries[k],
            None => 0.0,
        }
    }

    /// Sets `F_{ij}` (and hence `F_{ji}`); diagonal writes are ignored.
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        if let Some((k, s)) = form_index(i, j) {
            self.entries[k] = s * v;
        }
    }

    pub fn to_matrix(&self) -> Mat4 {
        let mut m = [[0.0; 4]; 4];
        for (k, &(i, j)) in FORM_PAIRS.iter().enumerate() {
            m[i][j] = self.entries[k];
            m[j][i] = -self.entries[k];
        }
        m
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut e = self.entries;
        for (a, b) in e.iter_mut().zip(other.entries.iter()) {
            *a += b;
        }
        TwoForm { entries: e }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(-1.0))
    }

    pub fn scale(&self, s: f64) -> Self {
        let mut e = self.entries;
        e.iter_mut().for_each(|a| *a *= s);
        TwoForm { entries: e }
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    pub fn is_finite(&self) -> bool {
        self.entries.iter().all(|x| x.is_finite())
    }

    /// `F(X, Y) = F_{μν} X^μ Y^ν`.
    pub fn contract(&self, x: &Vec4, y: &Vec4) -> f64 {
        bilinear(&self.to_matrix(), x, y)
    }

    /// `Σ_{μν} F_{μν}²` over all sixteen components, which equals `2|E|² + 2|B|²`.
    pub fn euclidean_norm_sq(&self) -> f64 {
        2.0 * self.entries.iter().map(|x| x * x).sum::<f64>()
    }
}

#[inline]
pub fn bilinear(p: &Mat4, x: &Vec4, y: &Vec4) -> f64 {
    let mut s = 0.0;
    for i in 0..4 {
        for j in 0..4 {
            s += p[i][j] * x[i] * y[j];
        }
    }
    s
}

#[inline]
pub fn mat_vec(p: &Mat4, x: &Vec4) -> Vec4 {
    let mut out = [0.0; 4];
    for i in 0..4 {
        for j in 0..4 {
            out[i] += p[i][j] * x[j];
        }
    }
    out
}

#[inline]
pub fn mat_mul(a: &Mat4, b: &Mat4) -> Mat4 {
    let mut out = [[0.0; 4]; 4];
    for i in 0..4 {
        for k in 0..4 {
            let aik = a[i][k];
            for j in 0..4 {
                out[i][j] += aik * b[k][j];
            }
        }
    }
    out
}

/// `A X Bᵀ`, i.e. `(A X Bᵀ)_{ij} = A_{ia} X_{ab} B_{jb}`; raises or lowers both slots.
#[inline]
pub fn congruence(a: &Mat4, x: &Mat4, b: &Mat4) -> Mat4 {
    let mut tmp = [[0.0; 4]; 4];
    for i in 0..4 {
        for k in 0..4 {
            let aik = a[i][k];
            if aik == 0.0 {
                continue;
            }
            for j in 0..4 {
                tmp[i][j] += aik * x[k][j];
            }
        }
    }
    let mut out = [[0.0; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            let mut s = 0.0;
            for k in 0..4 {
                s += tmp[i][k] * b[j][k];
            }
            out[i][j] = s;
        }
    }
    out
}

/// Determinant by cofactor expansion along 2×2 minors.
pub fn det4(m: &Mat4) -> f64 {
    let s0 = m[0][0] * m[1][1] - m[1][0] * m[0][1];
    let s1 = m[0][0] * m[1][2] - m[1][0] * m[0][2];
    let s2 = m[0][0] * m[1][3] - m[1][0] * m[0][3];
    let s3 = m[0][1] * m[1][2] - m[1][1] * m[0][2];
    let s4 = m[0][1] * m[1][3] - m[1][1] * m[0][3];
    let s5 = m[0][2] * m[1][3] - m[1][2] * m[0][3];
    let c5 = m[2][2] * m[3][3] - m[3][2] * m[2][3];
    let c4 = m[2][1] * m[3][3] - m[3][1] * m[2][3];
    let c3 = m[2][1] * m[3][2] - m[3][1] * m[2][2];
    let c2 = m[2][0] * m[3][3] - m[3][0] * m[2][3];
    let c1 = m[2][0] * m[3][2] - m[3][0] * m[2][2];
    let c0 = m[2][0] * m[3][1] - m[3][0] * m[2][1];
    s0 * c5 - s1 * c4 + s2 * c3 + s3 * c2 - s4 * c1 + s5 * c0
}

/// Exact cofactor inverse; returns `(inverse, det)` or `None` for a singular matrix.
pub fn inverse4(m: &Mat4) -> Option<(Mat4, f64)> {
    let s0 = m[0][0] * m[1][1] - m[1][0] * m[0][1];
    let s1 = m[0][0] * m[1][2] - m[1][0] * m[0][2];
    let s2 = m[0][0] * m[1][3] - m[1][0] * m[0][3];
    let s3 = m[0][1] * m[1][2] - m[1][1] * m[0][2];
    let s4 = m[0][1] * m[1][3] - m[1][1] * m[0][3];
    let s5 = m[0][2] * m[1][3] - m[1][2] * m[0][3];
    let c5 = m[2][2] * m[3][3] - m[3][2] * m[2][3];
    let c4 = m[2][1] * m[3][3] - m[3][1] * m[2][3];
    let c3 = m[2][1] * m[3][2] - m[3][1] * m[2][2];
    let c2 = m[2][0] * m[3][3] - m[3][0] * m[2][3];
    let c1 = m[2][0] * m[3][2] - m[3][0] * m[2][2];
    let c0 = m[2][0] * m[3][1] - m[3][0] * m[2][1];
    let det = s0 * c5 - s1 * c4 + s2 * c3 + s3 * c2 - s4 * c1 + s5 * c0;
    if det == 0.0 || !det.is_finite() {
        return None;
    }
    let inv = 1.0 / det;
    let mut b = [[0.0; 4]; 4];
    b[0][0] = (m[1][1] * c5 - m[1][2] * c4 + m[1][3] * c3) * inv;
    b[0][1] = (-m[0][1] * c5 + m[0][2] * c4 - m[0][3] * c3) * inv;
    b[0][2] = (m[3][1] * s5 - m[3][2] * s4 + m[3][3] * s3) * inv;
    b[0][3] = (-m[2][1] * s5 + m[2][2] * s4 - m[2][3] * s3) * inv;
    b[1][0] = (-m[1][0] * c5 + m[1][2] * c2 - m[1][3] * c1) * inv;
    b[1][1] = (m[0][0] * c5 - m[0][2] * c2 + m[0][3] * c1) * inv;
    b[1][2] = (-m[3][0] * s5 + m[3][2] * s2 - m[3][3] * s1) * inv;
    b[1][3] = (m[2][0] * s5 - m[2][2] * s2 + m[2][3] * s1) * inv;
    b[2][0] = (m[1][0] * c4 - m[1][1] * c2 + m[1][3] * c0) * inv;
    b[2][1] = (-m[0][0] * c4 + m[0][1] * c2 - m[0][3] * c0) * inv;
    b[2][2] = (m[3][0] * s4 - m[3][1] * s2 + m[3][3] * s0) * inv;
    b[2][3] = (-m[2][0] * s4 + m[2][1] * s2 - m[2][3] * s0) * inv;
    b[3][0] = (-m[1][0] * c3 + m[1][1] * c1 - m[1][2] * c0) * inv;
    b[3][1] = (m[0][0] * c3 - m[0][1] * c1 + m[0][2] * c0) * inv;
    b[3][2] = (-m[3][0] * s3 + m[3][1] * s1 - m[3][2] * s0) * inv;
    b[3][3] = (m[2][0] * s3 - m[2][1] * s1 + m[2][2] * s0) * inv;
    Some((b, det))
}

/// Inverse of a symmetric 3×3 matrix and its determinant.
pub fn inverse3(m: &[[f64; 3]; 3]) -> Option<([[f64; 3]; 3], f64)> {
    let c00 = m[1][1] * m[2][2] - m[1][2] * m[2][1];
    let c01 = m[1][2] * m[2][0] - m[1][0] * m[2][2];
    let c02 = m[1][0] * m[2][1] - m[1][1] * m[2][0];
    let det = m[0][0] * c00 + m[0][1] * c01 + m[0][2] * c02;
    if det == 0.0 || !det.is_finite() {
        return None;
    }
    let inv = 1.0 / det;
    let out = [
        [
            c00 * inv,
            (m[0][2] * m[2][1] - m[0][1] * m[2][2]) * inv,
            (m[0][1] * m[1][2] - m[0][2] * m[1][1]) * inv,
        ],
        [
            c01 * inv,
            (m[0][0] * m[2][2] - m[0][2] * m[2][0]) * inv,
            (m[0][2] * m[1][0] - m[0][0] * m[1][2]) * inv,
        ],
        [
            c02 * inv,
            (m[0][1] * m[2][0] - m[0][0] * m[2][1]) * inv,
            (m[0][0] * m[1][1] - m[0][1] * m[1][0]) * inv,
        ],
    ];
    Some((out, det))
}

/// The split `g = m + h0 + h1` together with its exact inverse.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricState {
    pub h0: SymTensor4,
    pub h1: SymTensor4,
    g: SymTensor4,
    g_inv: SymTensor4,
    big_h: SymTensor4,
    det_g: f64,
    sqrt_det_g: f64,
}

impl MetricState {
    pub fn minkowski() -> Self {
        let m = SymTensor4::minkowski();
        MetricState {
            h0: SymTensor4::zero(),
            h1: SymTensor4::zero(),
            g: m,
            g_inv: m,
            big_h: SymTensor4::zero(),
            det_g: -1.0,
            sqrt_det_g: 1.0,
        }
    }

    /// Treats the whole deviation from `m` as `h1`.
    pub fn from_metric(g: &SymTensor4) -> Result<Self, TensorError> {
        assemble_metric(&SymTensor4::zero(), &g.sub(&SymTensor4::minkowski()))
    }

    pub fn g(&self) -> &SymTensor4 {
        &self.g
    }

    pub fn g_inv(&self) -> &SymTensor4 {
        &self.g_inv
    }

    /// `H^{μν} = (g⁻¹)^{μν} − (m⁻¹)^{μν}`.
    pub fn big_h(&self) -> &SymTensor4 {
        &self.big_h
    }

    /// `h = h0 + h1`.
    pub fn h(&self) -> SymTensor4 {
        self.h0.add(&self.h1)
    }

    pub fn det(&self) -> f64 {
        self.det_g
    }

    /// `√|det g|`.
    pub fn sqrt_det(&self) -> f64 {
        self.sqrt_det_g
    }

    pub fn g_mat(&self) -> Mat4 {
        self.g.to_matrix()
    }

    pub fn g_inv_mat(&self) -> Mat4 {
        self.g_inv.to_matrix()
    }
}

/// Builds `g = m + h0 + h1` and inverts it exactly.
pub fn assemble_metric(h0: &SymTensor4, h1: &SymTensor4) -> Result<MetricState, TensorError> {
    let g = SymTensor4::minkowski().add(h0).add(h1);
    let gm = g.to_matrix();
    let Some((inv, det)) = inverse4(&gm) else {
        return Err(TensorError::NonLorentzian {
            det: det4(&gm),
            residual: f64::INFINITY,
        });
    };
    let prod = mat_mul(&gm, &inv);
    let mut residual: f64 = 0.0;
    for (i, row) in prod.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            let id = if i == j { 1.0 } else { 0.0 };
            residual = residual.max((v - id).abs());
        }
    }
    if det >= 0.0 || residual > 1e-10 {
        return Err(TensorError::NonLorentzian { det, residual });
    }
    let g_inv = SymTensor4::from_fn(|i, j| 0.5 * (inv[i][j] + inv[j][i]));
    let big_h = g_inv.sub(&SymTensor4::minkowski());
    Ok(MetricState {
        h0: *h0,
        h1: *h1,
        g,
        g_inv,
        big_h,
        det_g: det,
        sqrt_det_g: (-det).sqrt(),
    })
}

/// Plateau cutoff: zero for `z <= lo`, one for `z >= hi`, quintic `C²` bridge in between.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CutoffSpec {
    pub lo: f64,
    pub hi: f64,
}

impl Default for CutoffSpec {
    fn default() -> Self {
        CutoffSpec { lo: 0.5, hi: 0.75 }
    }
}

impl CutoffSpec {
    pub fn chi(&self, z: f64) -> f64 {
        self.jet(z).0
    }

    /// `(χ, χ', χ'')` at `z`.
    pub fn jet(&self, z: f64) -> (f64, f64, f64) {
        if z <= self.lo {
            return (0.0, 0.0, 0.0);
        }
        if z >= self.hi {
            return (1.0, 0.0, 0.0);
        }
        let w = self.hi - self.lo;
        let u = (z - self.lo) / w;
        let u2 = u * u;
        let u3 = u2 * u;
        let s = u3 * (10.0 - 15.0 * u + 6.0 * u2);
        let ds = 30.0 * u2 * (1.0 - u) * (1.0 - u);
        let dds = 60.0 * u * (1.0 - u) * (1.0 - 2.0 * u);
        (s, ds / w, dds / (w * w))
    }
}

/// Scalar profile `f` of the tail `h⁽⁰⁾_{μν} = f δ_{μν}` with its first and second partials.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct TailJet {
    pub value: f64,
    pub d: Vec4,
    pub dd: Mat4,
}

/// `f(t, x) = χ(r/t) χ(r) 2M/r` for `t > 0`, and `χ(r) 2M/r` with vanishing time derivatives for `t <= 0`.
pub fn tail_jet(t: f64, x: &[f64; 3], mass: f64, chi: &CutoffSpec) -> TailJet {
    let r = (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt();
    if mass == 0.0 || r <= chi.lo {
        return TailJet::default();
    }
    let (c, c1, c2) = chi.jet(r);
    let b = 2.0 * mass * c / r;
    let b_r = 2.0 * mass * (c1 / r - c / (r * r));
    let b_rr = 2.0 * mass * (c2 / r - 2.0 * c1 / (r * r) + 2.0 * c / (r * r * r));

    let (a, a_t, a_r, a_tt, a_tr, a_rr) = if t > 0.0 {
        let z = r / t;
        let (k, k1, k2) = chi.jet(z);
        (
            k,
            -k1 * r / (t * t),
            k1 / t,
            k2 * r * r / t.powi(4) + 2.0 * k1 * r / t.powi(3),
            -k2 * r / t.powi(3) - k1 / (t * t),
            k2 / (t * t),
        )
    } else {
        (1.0, 0.0, 0.0, 0.0, 0.0, 0.0)
    };

    let f = a * b;
    let f_t = a_t * b;
    let f_r = a_r * b + a * b_r;
    let f_tt = a_tt * b;
    let f_tr = a_tr * b + a_t * b_r;
    let f_rr = a_rr * b + 2.0 * a_r * b_r + a * b_rr;

    let w = [x[0] / r, x[1] / r, x[2] / r];
    let mut jet = TailJet {
        value: f,
        ..TailJet::default()
    };
    jet.d[0] = f_t;
    jet.dd[0][0] = f_tt;
    for j in 0..3 {
        jet.d[j + 1] = f_r * w[j];
        jet.dd[0][j + 1] = f_tr * w[j];
        jet.dd[j + 1][0] = f_tr * w[j];
        for k in 0..3 {
            let delta = if j == k { 1.0 } else { 0.0 };
            jet.dd[j + 1][k + 1] = f_rr * w[j] * w[k] + f_r * (delta - w[j] * w[k]) / r;
        }
    }
    jet
}

/// `h⁽⁰⁾_{μν}(t, x)`.
pub fn schwarzschild_tail(t: f64, x: &[f64; 3], mass: f64, chi: &CutoffSpec) -> SymTensor4 {
    let f = tail_jet(t, x, mass, chi).value;
    SymTensor4::from_fn(|i, j| if i == j { f } else { 0.0 })
}

/// Christoffel symbols of the second kind and the contracted vector `Γ^μ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChristoffelData {
    /// `gamma[k][m][n] = Γ_{m n}^k`.
    pub gamma: Rank3,
    /// `(g⁻¹)^{κλ} Γ_{κ λ}^μ`.
    pub contracted: Vec4,
    /// `−|det g|^{-1/2} ∂_ν(√|det g| (g⁻¹)^{μν})` expanded by the chain rule.
    pub contracted_divergence: Vec4,
}

impl ChristoffelData {
    pub fn contracted_mismatch(&self) -> f64 {
        (0..4).fold(0.0, |m, i| {
            m.max((self.contracted[i] - self.contracted_divergence[i]).abs())
        })
    }
}

/// `Γ_{κ m n} = ½(∂_m g_{κn} + ∂_n g_{mκ} − ∂_κ g_{mn})`.
#[inline]
pub fn christoffel_first_kind(dg: &Rank3) -> Rank3 {
    let mut out = [[[0.0; 4]; 4]; 4];
    for k in 0..4 {
        for m in 0..4 {
            for n in m..4 {
                let v = 0.5 * (dg[m][k][n] + dg[n][m][k] - dg[k][m][n]);
                out[k][m][n] = v;
                out[k][n][m] = v;
            }
        }
    }
    out
}

pub fn christoffel(g: &MetricState, dg: &Rank3) -> ChristoffelData {
    let gi = g.g_inv_mat();
    let first = christoffel_first_kind(dg);
    let mut gamma = [[[0.0; 4]; 4]; 4];
    for k in 0..4 {
        for m in 0..4 {
            for n in m..4 {
                let mut s = 0.0;
                for l in 0..4 {
                    s += gi[k][l] * first[l][m][n];
                }
                gamma[k][m][n] = s;
                gamma[k][n][m] = s;
            }
        }
    }
    let mut contracted = [0.0; 4];
    for (mu, c) in contracted.iter_mut().enumerate() {
        let mut s = 0.0;
        for k in 0..4 {
            for l in 0..4 {
                s += gi[k][l] * gamma[mu][k][l];
            }
        }
        *c = s;
    }
    // ∂_ν ln√|g| = ½ g^{ab} ∂_ν g_{ab};  ∂_ν g^{μν} = −g^{μa} g^{νb} ∂_ν g_{ab}.
    let mut dlog = [0.0; 4];
    for (nu, d) in dlog.iter_mut().enumerate() {
        let mut s = 0.0;
        for a in 0..4 {
            for b in 0..4 {
                s += gi[a][b] * dg[nu][a][b];
            }
        }
        *d = 0.5 * s;
    }
    let mut contracted_divergence = [0.0; 4];
    for (mu, c) in contracted_divergence.iter_mut().enumerate() {
        let mut s = 0.0;
        for nu in 0..4 {
            s += dlog[nu] * gi[mu][nu];
            let mut t = 0.0;
            for a in 0..4 {
                for b in 0..4 {
                    t += gi[mu][a] * gi[nu][b] * dg[nu][a][b];
                }
            }
            s -= t;
        }
        *c = -s;
    }
    ChristoffelData {
        gamma,
        contracted,
        contracted_divergence,
    }
}

/// `F^{#μν} = (g⁻¹)^{μκ}(g⁻¹)^{νλ} F_{κλ}`.
pub fn raise(g: &MetricState, f: &TwoForm) -> Mat4 {
    let gi = g.g_inv_mat();
    congruence(&gi, &f.to_matrix(), &gi)
}

/// Which volume form a Hodge dual is taken with.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Hodge {
    Curved,
    Minkowski,
}

/// Lowered dual `⋆F_{μν} = ½ |det g|^{1/2} [μνκλ] F^{#κλ}`.
pub fn hodge_dual(g: &MetricState, f: &TwoForm, which: Hodge) -> TwoForm {
    match which {
        Hodge::Curved => dual_of_raised(&raise(g, f), g.sqrt_det()),
        Hodge::Minkowski => {
            let up = congruence(&MINKOWSKI, &f.to_matrix(), &MINKOWSKI);
            dual_of_raised(&up, 1.0)
        }
    }
}

/// Applies `½ s [μνκλ] X^{κλ}` to an antisymmetric contravariant `X`.
#[inline]
pub fn dual_of_raised(up: &Mat4, s: f64) -> TwoForm {
    TwoForm::from_entries([
        s * up[2][3],
        -s * up[1][3],
        s * up[1][2],
        s * up[0][3],
        -s * up[0][2],
        s * up[0][1],
    ])
}

/// Raised dual `⋆F^{#μν} = −½ |det g|^{-1/2} [μνκλ] F_{κλ}`.
pub fn hodge_dual_raised(g: &MetricState, f: &TwoForm) -> Mat4 {
    let s = -1.0 / g.sqrt_det();
    let d = dual_of_raised(&f.to_matrix(), s);
    d.to_matrix()
}

/// `½ A^{#κλ} B_{κλ}` summed over all index pairs.
#[inline]
pub fn half_contract(a_up: &Mat4, b: &TwoForm) -> f64 {
    let e = b.entries();
    let mut s = 0.0;
    for (k, &(i, j)) in FORM_PAIRS.iter().enumerate() {
        s += a_up[i][j] * e[k];
    }
    s
}

/// `(F₍₁₎, F₍₂₎) = (½ F^{#κλ}F_{κλ}, ¼ F^{#κλ} ⋆F_{κλ})`.
pub fn invariants(g: &MetricState, f: &TwoForm) -> (f64, f64) {
    let up = raise(g, f);
    let dual = dual_of_raised(&up, g.sqrt_det());
    (half_contract(&up, f), 0.5 * half_contract(&up, &dual))
}

/// Pfaffian `F_{01}F_{23} − F_{02}F_{13} + F_{03}F_{12}`; `det F = Pf²`.
pub fn pfaffian(f: &TwoForm) -> f64 {
    let e = f.entries();
    e[0] * e[5] - e[1] * e[4] + e[2] * e[3]
}

/// Residuals of the pointwise identities relating `F`, `⋆F` and the invariants.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct IdentityReport {
    /// `|F₍₂₎² − |det F| / |det g||`.
    pub det_identity: f64,
    /// `max |g^{κλ} F_{μκ} ⋆F_{νλ} − F₍₂₎ g_{μν}|`.
    pub dual_contraction: f64,
    /// `max |∂F₍₁₎/∂F_{μν} − 2F^{#μν}|` by central differences.
    pub df1: f64,
    /// `max |∂F₍₂₎/∂F_{μν} − ⋆F^{#μν}|` by central differences.
    pub df2: f64,
}

/// Maximum that propagates NaN instead of discarding it.
#[inline]
pub fn nan_max(a: f64, b: f64) -> f64 {
    if a.is_nan() || b.is_nan() {
        f64::NAN
    } else {
        a.max(b)
    }
}

pub const ALGEBRAIC_TOLERANCE: f64 = 1e-11;
pub const FD_TOLERANCE: f64 = 1e-8;

/// Evaluates [`IdentityReport`] without applying tolerances.
pub fn identity_residuals(g: &MetricState, f: &TwoForm, fd_step: f64) -> IdentityReport {
    let (_, f2) = invariants(g, f);
    let pf = pfaffian(f);
    let det_identity = (f2 * f2 - pf * pf / g.det().abs()).abs();

    let fm = f.to_matrix();
    let dual = hodge_dual(g, f, Hodge::Curved).to_matrix();
    let gi = g.g_inv_mat();
    let gm = g.g_mat();
    let mut dual_contraction: f64 = 0.0;
    for mu in 0..4 {
        for nu in 0..4 {
            let mut s = 0.0;
            for k in 0..4 {
                for l in 0..4 {
                    s += gi[k][l] * fm[mu][k] * dual[nu][l];
                }
            }
            dual_contraction = nan_max(dual_contraction, (s - f2 * gm[mu][nu]).abs());
        }
    }

    let up = raise(g, f);
    let dual_up = hodge_dual_raised(g, f);
    let mut df1: f64 = 0.0;
    let mut df2: f64 = 0.0;
    for (slot, &(i, j)) in FORM_PAIRS.iter().enumerate() {
        let mut plus = *f;
        let mut minus = *f;
        plus.entries[slot] += fd_step;
        minus.entries[slot] -= fd_step;
        let (p1, p2) = invariants(g, &plus);
        let (m1, m2) = invariants(g, &minus);
        let d1 = (p1 - m1) / (2.0 * fd_step);
        let d2 = (p2 - m2) / (2.0 * fd_step);
        df1 = nan_max(df1, (d1 - 2.0 * up[i][j]).abs());
        df2 = nan_max(df2, (d2 - dual_up[i][j]).abs());
    }
    IdentityReport {
        det_identity,
        dual_contraction,
        df1,
        df2,
    }
}

/// Checks every identity against its tolerance and names the first failure.
pub fn identity_suite(
    g: &MetricState,
    f: &TwoForm,
    fd_step: f64,
) -> Result<IdentityReport, TensorError> {
    let r = identity_residuals(g, f, fd_step);
    let checks = [
        ("F2 squared equals |det F| / |det g|", r.det_identity, ALGEBRAIC_TOLERANCE),
        ("g^{kl} F_{mk} *F_{nl} equals F2 g_{mn}", r.dual_contraction, ALGEBRAIC_TOLERANCE),
        ("dF1/dF equals 2 F#", r.df1, FD_TOLERANCE),
        ("dF2/dF equals *F#", r.df2, FD_TOLERANCE),
    ];
    for (name, residual, tolerance) in checks {
        if !(residual <= tolerance) {
            return Err(TensorError::IdentityViolation {
                name,
                residual,
                tolerance,
            });
        }
    }
    Ok(r)
}
