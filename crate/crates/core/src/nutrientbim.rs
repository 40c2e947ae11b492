//! Quasi-steady nutrient `Δσ = σ` inside the tumor with `σ = 1` on the interface.
//!
//! `σ` is represented as a double-layer potential with kernel `d(K0/2π)/dn'`
//! whose density solves `(-1/2 + D) ζ = 1`.

use std::f64::consts::PI;

use thiserror::Error;

use crate::curvegeom::{Curve, Geometry};
use crate::linalg::{gmres, GmresOptions, SolveReport};
use crate::singquad::{assemble_modified_helmholtz, kress_weights, HelmholtzOperators};
use crate::specialfn::{bessel01, derivative};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NutrientError {
    #[error("nutrient GMRES did not converge: {iterations} iterations, relative residual {residual:e}")]
    NotConverged { iterations: usize, residual: f64 },
    #[error("evaluation point lies {distance:e} from the interface; at least {required:e} is needed")]
    TooClose { distance: f64, required: f64 },
}

/// Boundary data of the nutrient field.
#[derive(Debug, Clone)]
pub struct NutrientTrace {
    pub zeta: Vec<f64>,
    /// `n . grad σ`
    pub sigma_n: Vec<f64>,
    /// `d(sigma_n)/ds`
    pub sigma_n_s: Vec<f64>,
    /// `s . (grad grad σ n)`
    pub hess_tangent: Vec<f64>,
    /// `n . (grad grad σ n)`
    pub hess_normal: Vec<f64>,
    pub report: SolveReport,
}

/// Assembled layer operators for one interface.
#[derive(Debug, Clone)]
pub struct NutrientSystem {
    geom: Geometry,
    ops: HelmholtzOperators,
}

impl NutrientSystem {
    pub fn new(curve: &Curve) -> Self {
        let geom = curve.geometry();
        let ops = assemble_modified_helmholtz(&geom, &kress_weights(geom.n() / 2));
        Self { geom, ops }
    }

    pub fn geometry(&self) -> &Geometry {
        &self.geom
    }

    pub fn operators(&self) -> &HelmholtzOperators {
        &self.ops
    }

    /// Solves `(-1/2 + D) ζ = 1`.
    pub fn solve_density(&self, opts: GmresOptions) -> Result<(Vec<f64>, SolveReport), NutrientError> {
        let n = self.geom.n();
        let mut a = self.ops.double.clone();
        a.scale_add_identity(1.0, -0.5);
        let (zeta, report) = gmres(&a, &vec![1.0; n], None, opts);
        if !report.converged {
            return Err(NutrientError::NotConverged { iterations: report.iterations, residual: report.residual });
        }
        Ok((zeta, report))
    }

    /// `∂σ/∂n = d/ds S[ζ_s] - n . S[n ζ]` with `S` the single layer of `K0/2π`.
    pub fn normal_derivative(&self, zeta: &[f64]) -> Vec<f64> {
        let sa = self.geom.s_alpha;
        let single = &self.ops.single;
        // assembled single layer carries -K0/2π
        let s_apply = |f: &[f64]| -> Vec<f64> { single.matvec(f).into_iter().map(|v| -v).collect() };
        let zeta_s: Vec<f64> = derivative(zeta, 1).into_iter().map(|v| v / sa).collect();
        let outer = derivative(&s_apply(&zeta_s), 1);
        let nx: Vec<f64> = self.geom.normal.iter().zip(zeta).map(|(n, z)| n[0] * z).collect();
        let ny: Vec<f64> = self.geom.normal.iter().zip(zeta).map(|(n, z)| n[1] * z).collect();
        let (sx, sy) = (s_apply(&nx), s_apply(&ny));
        (0..self.geom.n())
            .map(|i| {
                let n = self.geom.normal[i];
                outer[i] / sa - (n[0] * sx[i] + n[1] * sy[i])
            })
            .collect()
    }

    /// Full boundary trace of the nutrient solution.
    pub fn trace(&self, opts: GmresOptions) -> Result<NutrientTrace, NutrientError> {
        let (zeta, report) = self.solve_density(opts)?;
        let sigma_n = self.normal_derivative(&zeta);
        let (hess_tangent, hess_normal) = hessian_normal_data(&self.geom, &sigma_n);
        Ok(NutrientTrace { zeta, sigma_n_s: hess_tangent.clone(), sigma_n, hess_tangent, hess_normal, report })
    }
}

/// Solves for the density on `curve`.
pub fn solve_density(curve: &Curve, opts: GmresOptions) -> Result<(Vec<f64>, SolveReport), NutrientError> {
    NutrientSystem::new(curve).solve_density(opts)
}

/// Solves the nutrient problem and returns its boundary trace.
pub fn solve_nutrient(curve: &Curve, opts: GmresOptions) -> Result<NutrientTrace, NutrientError> {
    NutrientSystem::new(curve).trace(opts)
}

/// `(s . grad grad σ n, n . grad grad σ n) = (d sigma_n / ds, 1 - κ sigma_n)`.
pub fn hessian_normal_data(geom: &Geometry, sigma_n: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let tangent = derivative(sigma_n, 1).into_iter().map(|v| v / geom.s_alpha).collect();
    let normal = sigma_n.iter().zip(&geom.kappa).map(|(s, k)| 1.0 - k * s).collect();
    (tangent, normal)
}

/// `σ(point)` from the double-layer representation (trapezoid rule).
///
/// Points closer than five grid spacings to the interface are refused.
pub fn evaluate_interior(geom: &Geometry, zeta: &[f64], point: [f64; 2]) -> Result<f64, NutrientError> {
    let h = geom.h();
    let required = 5.0 * h * geom.s_alpha;
    let distance = geom
        .points
        .iter()
        .map(|p| (p[0] - point[0]).hypot(p[1] - point[1]))
        .fold(f64::INFINITY, f64::min);
    if distance < required {
        return Err(NutrientError::TooClose { distance, required });
    }
    let mut acc = 0.0;
    for ((p, n), z) in geom.points.iter().zip(&geom.normal).zip(zeta) {
        let d = [p[0] - point[0], p[1] - point[1]];
        let r = d[0].hypot(d[1]);
        let k1 = bessel01(r).k1;
        acc -= k1 * (d[0] * n[0] + d[1] * n[1]) / (2.0 * PI * r) * z;
    }
    Ok(acc * h * geom.s_alpha)
}
