//! Product quadrature for periodic integrands with a `ln|2 sin((a - a')/2)|`
//! singularity, kernel splittings for the layer potentials, and Nyström assembly.
//!
//! Every kernel value returned here is per unit `alpha'` (it already carries the
//! metric factor `s_alpha`), so a row of the discretized operator reads
//! `sum_j q_|i-j| g1_ij f_j + h sum_j g2_ij f_j` with `h = 2 pi / N`.

use std::f64::consts::PI;

use crate::curvegeom::Geometry;
use crate::linalg::DenseMatrix;
use crate::specialfn::{bessel01, EULER_GAMMA};

/// Kress weights for a grid of `2m` points.
#[derive(Debug, Clone, PartialEq)]
pub struct KressWeights {
    m: usize,
    q: Vec<f64>,
}

impl KressWeights {
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn q(&self) -> &[f64] {
        &self.q
    }

    /// Weight coupling target `i` to source `j`.
    #[inline]
    pub fn weight(&self, target: usize, source: usize) -> f64 {
        let n = 2 * self.m;
        self.q[(source + n - target) % n]
    }
}

/// `q_j = -(pi/m) sum_{k=1}^{m-1} cos(k j pi / m) / k - (-1)^j pi / (2 m^2)`.
///
/// # Panics
/// If `m < 2`.
pub fn kress_weights(m: usize) -> KressWeights {
    assert!(m >= 2, "Kress weights need m >= 2");
    let mf = m as f64;
    let q = (0..2 * m)
        .map(|j| {
            // fold to the index distance so the weights are exactly even
            let j = j.min(2 * m - j);
            let s: f64 = (1..m).map(|k| (k as f64 * j as f64 * PI / mf).cos() / k as f64).sum();
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            -PI / mf * s - sign * PI / (2.0 * mf * mf)
        })
        .collect();
    KressWeights { m, q }
}

/// `int_0^{2pi} ln|2 sin((a_i - a')/2)| f(a') da'` on the grid.
pub fn log_quadrature(f: &[f64], target: usize, weights: &KressWeights) -> f64 {
    assert_eq!(f.len(), 2 * weights.m);
    f.iter().enumerate().map(|(j, v)| weights.weight(target, j) * v).sum()
}

/// `ln|2 sin((a_i - a_j)/2)|` on an `n`-point grid; `-inf` on the diagonal.
#[inline]
pub fn log_sin(n: usize, target: usize, source: usize) -> f64 {
    let d = PI * (source as f64 - target as f64) / n as f64;
    (2.0 * d.sin().abs()).ln()
}

/// Kernel split `g1 ln|2 sin| + g2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SplitKernel {
    pub g1: f64,
    pub g2: f64,
}

impl SplitKernel {
    /// Recombines the split at a given `ln|2 sin|` value.
    pub fn combine(&self, log_sin: f64) -> f64 {
        self.g1 * log_sin + self.g2
    }
}

#[inline]
fn sep(geom: &Geometry, source: usize, target: usize) -> ([f64; 2], f64) {
    let (p, q) = (geom.points[source], geom.points[target]);
    let d = [p[0] - q[0], p[1] - q[1]];
    (d, d[0].hypot(d[1]))
}

/// `G = -K0(r) / 2pi` times `s_alpha`.
pub fn split_modified_helmholtz_single(geom: &Geometry, source: usize, target: usize) -> SplitKernel {
    let sa = geom.s_alpha;
    if source == target {
        return SplitKernel { g1: sa / (2.0 * PI), g2: sa / (2.0 * PI) * (EULER_GAMMA + (0.5 * sa).ln()) };
    }
    let (_, r) = sep(geom, source, target);
    let b = bessel01(r);
    let l = log_sin(geom.n(), target, source);
    let g1 = sa * b.i0 / (2.0 * PI);
    SplitKernel { g1, g2: -sa * (b.k0 + b.i0 * l) / (2.0 * PI) }
}

/// `-h K1(r)` times `s_alpha`, where `h = ((x' - x) . n') / (2 pi r)`; this is the
/// source-normal derivative of `K0/2pi`.
pub fn split_modified_helmholtz_double(geom: &Geometry, source: usize, target: usize) -> SplitKernel {
    let sa = geom.s_alpha;
    if source == target {
        return SplitKernel { g1: 0.0, g2: -sa * geom.kappa[source] / (4.0 * PI) };
    }
    let (d, r) = sep(geom, source, target);
    let nn = geom.normal[source];
    let h = (d[0] * nn[0] + d[1] * nn[1]) / (2.0 * PI * r);
    let b = bessel01(r);
    let l = log_sin(geom.n(), target, source);
    SplitKernel { g1: -sa * h * b.i1, g2: -sa * h * (b.k1 - b.i1 * l) }
}

/// Logarithmic part `-ln r` of the Stokeslet, times `s_alpha`.
pub fn split_stokeslet_log(geom: &Geometry, source: usize, target: usize) -> SplitKernel {
    let sa = geom.s_alpha;
    if source == target {
        return SplitKernel { g1: -sa, g2: -sa * sa.ln() };
    }
    let (_, r) = sep(geom, source, target);
    let l = log_sin(geom.n(), target, source);
    SplitKernel { g1: -sa, g2: -sa * (r.ln() - l) }
}

/// Smooth part `xh_i xh_j / r^2` of the Stokeslet (`xh = x' - x`), times `s_alpha`.
pub fn stokeslet_rational(geom: &Geometry, source: usize, target: usize) -> [[f64; 2]; 2] {
    let sa = geom.s_alpha;
    let (d, r) = if source == target {
        (geom.tangent[source], 1.0)
    } else {
        sep(geom, source, target)
    };
    let r2 = r * r;
    [
        [sa * d[0] * d[0] / r2, sa * d[0] * d[1] / r2],
        [sa * d[1] * d[0] / r2, sa * d[1] * d[1] / r2],
    ]
}

/// `T_ijk n'_k` with `T_ijk = -4 xh_i xh_j xh_k / r^4`, times `s_alpha`.
/// Symmetric in `(i, j)`; the diagonal limit is `-2 kappa t_i t_j`.
pub fn stresslet_normal(geom: &Geometry, source: usize, target: usize) -> [[f64; 2]; 2] {
    let sa = geom.s_alpha;
    let (d, c) = if source == target {
        (geom.tangent[source], -2.0 * geom.kappa[source] * sa)
    } else {
        let (d, r) = sep(geom, source, target);
        let nn = geom.normal[source];
        let r2 = r * r;
        (d, -4.0 * sa * (d[0] * nn[0] + d[1] * nn[1]) / (r2 * r2))
    };
    [[c * d[0] * d[0], c * d[0] * d[1]], [c * d[1] * d[0], c * d[1] * d[1]]]
}

/// `(1/4pi) sum_j u_i T_ijk n'_k ds'` at one target by the periodic trapezoid rule.
pub fn stresslet_apply(geom: &Geometry, density: &[[f64; 2]], target: usize) -> [f64; 2] {
    let w = geom.h() / (4.0 * PI);
    let mut out = [0.0; 2];
    for (j, u) in density.iter().enumerate() {
        let m = stresslet_normal(geom, j, target);
        out[0] += w * (u[0] * m[0][0] + u[1] * m[1][0]);
        out[1] += w * (u[0] * m[0][1] + u[1] * m[1][1]);
    }
    out
}

/// Discretized modified-Helmholtz layer operators on one curve.
#[derive(Debug, Clone)]
pub struct HelmholtzOperators {
    /// `f -> int G f ds'` with `G = -K0/2pi`.
    pub single: DenseMatrix,
    /// `f -> int d(K0/2pi)/dn' f ds'` (principal value on the curve).
    pub double: DenseMatrix,
}

/// Assembles both modified-Helmholtz operators, sharing one Bessel evaluation per pair.
pub fn assemble_modified_helmholtz(geom: &Geometry, weights: &KressWeights) -> HelmholtzOperators {
    let n = geom.n();
    assert_eq!(2 * weights.m(), n);
    let h = geom.h();
    let sa = geom.s_alpha;
    let mut single = DenseMatrix::zeros(n, n);
    let mut double = DenseMatrix::zeros(n, n);
    for i in 0..n {
        let s = split_modified_helmholtz_single(geom, i, i);
        single[(i, i)] = weights.weight(i, i) * s.g1 + h * s.g2;
        let d = split_modified_helmholtz_double(geom, i, i);
        double[(i, i)] = weights.weight(i, i) * d.g1 + h * d.g2;
        for j in i + 1..n {
            let (dv, r) = sep(geom, j, i);
            let b = bessel01(r);
            let l = log_sin(n, i, j);
            let q = weights.weight(i, j);
            let g1 = sa * b.i0 / (2.0 * PI);
            let g2 = -sa * (b.k0 + b.i0 * l) / (2.0 * PI);
            let sv = q * g1 + h * g2;
            single[(i, j)] = sv;
            single[(j, i)] = sv;
            // source j, target i: d = x_j - x_i; the swapped pair flips d
            let nj = geom.normal[j];
            let ni = geom.normal[i];
            let hij = (dv[0] * nj[0] + dv[1] * nj[1]) / (2.0 * PI * r);
            let hji = -(dv[0] * ni[0] + dv[1] * ni[1]) / (2.0 * PI * r);
            let d1 = b.i1 * q;
            let d2 = (b.k1 - b.i1 * l) * h;
            double[(i, j)] = -sa * hij * (d1 + d2);
            double[(j, i)] = -sa * hji * (d1 + d2);
        }
    }
    HelmholtzOperators { single, double }
}

/// Matrix of `u -> (1/4pi) PV int u_i T_ijk n'_k ds'` on interleaved unknowns
/// `(u1_0, u2_0, u1_1, u2_1, ...)`.
pub fn assemble_stresslet(geom: &Geometry) -> DenseMatrix {
    let n = geom.n();
    let w = geom.h() / (4.0 * PI);
    let mut m = DenseMatrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            let t = stresslet_normal(geom, j, i);
            for a in 0..2 {
                for c in 0..2 {
                    m[(2 * i + c, 2 * j + a)] = w * t[a][c];
                }
            }
        }
    }
    m
}

/// Stokes single layer `(1/4pi) int f_i G_ij ds'` with `G_ij = -delta_ij ln r + xh_i xh_j / r^2`.
pub fn apply_stokeslet(geom: &Geometry, weights: &KressWeights, f: &[[f64; 2]]) -> Vec<[f64; 2]> {
    let n = geom.n();
    assert_eq!(f.len(), n);
    assert_eq!(2 * weights.m(), n);
    let h = geom.h();
    (0..n)
        .map(|i| {
            let mut acc = [0.0; 2];
            for (j, fj) in f.iter().enumerate() {
                let s = split_stokeslet_log(geom, j, i);
                let c = weights.weight(i, j) * s.g1 + h * s.g2;
                let rat = stokeslet_rational(geom, j, i);
                acc[0] += c * fj[0] + h * (fj[0] * rat[0][0] + fj[1] * rat[1][0]);
                acc[1] += c * fj[1] + h * (fj[0] * rat[0][1] + fj[1] * rat[1][1]);
            }
            [acc[0] / (4.0 * PI), acc[1] / (4.0 * PI)]
        })
        .collect()
}
