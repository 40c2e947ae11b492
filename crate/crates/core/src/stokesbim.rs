//! Interfacial stress jump, slip, force term and the second-kind velocity solve.
//!
//! Vector unknowns are interleaved as `(v1_0, v2_0, v1_1, v2_1, ...)`.

use thiserror::Error;

use crate::curvegeom::{Curve, CurveError, Geometry};
use crate::evolver::{FieldSample, FieldSolver};
use crate::linalg::{gmres, DenseMatrix, GmresOptions, SolveReport};
use crate::lintheory::{self_similar_a, LinTheoryError};
use crate::membrane::{bending_force_filtered, BendingModel};
use crate::nutrientbim::{NutrientError, NutrientSystem, NutrientTrace};
use crate::singquad::{apply_stokeslet, assemble_stresslet, kress_weights, KressWeights};
use crate::specialfn::FilterSettings;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum StokesError {
    #[error("apoptosis ratio A must be nonnegative and finite, got {0}")]
    Apoptosis(f64),
    #[error("viscosity ratio lambda must be positive and finite, got {0}")]
    ViscosityRatio(f64),
    #[error(transparent)]
    Nutrient(#[from] NutrientError),
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error("self-similar apoptosis: {0}")]
    SelfSimilar(#[from] LinTheoryError),
    #[error("velocity GMRES did not converge: {iterations} iterations, relative residual {residual:e}")]
    NotConverged { iterations: usize, residual: f64 },
}

/// Apoptosis-to-mitosis ratio and viscosity ratio.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysParams {
    pub a: f64,
    pub lambda: f64,
}

impl PhysParams {
    pub fn new(a: f64, lambda: f64) -> Result<Self, StokesError> {
        if !(a >= 0.0) || !a.is_finite() {
            return Err(StokesError::Apoptosis(a));
        }
        if !(lambda > 0.0) || !lambda.is_finite() {
            return Err(StokesError::ViscosityRatio(lambda));
        }
        Ok(Self { a, lambda })
    }
}

#[derive(Debug, Clone)]
pub struct StokesTrace {
    /// `T2 n - T1 n`
    pub jump: Vec<[f64; 2]>,
    /// `v2 - u1`
    pub slip: Vec<[f64; 2]>,
    pub force: Vec<[f64; 2]>,
    pub v2: Vec<[f64; 2]>,
    /// Normal velocity `v2 . n`.
    pub v: Vec<f64>,
    pub report: SolveReport,
}

/// `[-S_inv f + 2 hess_normal - 2] n + 2 hess_tangent t`.
pub fn stress_jump_from_force(geom: &Geometry, nutrient: &NutrientTrace, f: &[f64], s_inv: f64) -> Vec<[f64; 2]> {
    (0..geom.n())
        .map(|j| {
            let a = -s_inv * f[j] + 2.0 * nutrient.hess_normal[j] - 2.0;
            let b = 2.0 * nutrient.hess_tangent[j];
            let (n, t) = (geom.normal[j], geom.tangent[j]);
            [a * n[0] + b * t[0], a * n[1] + b * t[1]]
        })
        .collect()
}

/// Stress jump on `curve` for the given nutrient trace and bending law.
pub fn stress_jump(curve: &Curve, nutrient: &NutrientTrace, bending: &BendingModel) -> Vec<[f64; 2]> {
    let f = bending_force_filtered(curve, bending, &FilterSettings::default());
    stress_jump_from_force(&curve.geometry(), nutrient, &f, bending.s_inv)
}

/// `sigma_n n - (A/2) x`; the tangential nutrient gradient vanishes since `σ = 1` on the interface.
pub fn slip_velocity(geom: &Geometry, nutrient: &NutrientTrace, params: &PhysParams) -> Vec<[f64; 2]> {
    (0..geom.n())
        .map(|j| {
            let (n, x, s) = (geom.normal[j], geom.points[j], nutrient.sigma_n[j]);
            [s * n[0] - 0.5 * params.a * x[0], s * n[1] - 0.5 * params.a * x[1]]
        })
        .collect()
}

fn flatten(v: &[[f64; 2]]) -> Vec<f64> {
    v.iter().flat_map(|p| [p[0], p[1]]).collect()
}

fn unflatten(v: &[f64]) -> Vec<[f64; 2]> {
    v.chunks_exact(2).map(|c| [c[0], c[1]]).collect()
}

/// `F = -2 S[jump] + 2 D[slip] + slip`, with `stresslet` from [`assemble_stresslet`].
pub fn force_term(
    geom: &Geometry,
    weights: &KressWeights,
    stresslet: &DenseMatrix,
    jump: &[[f64; 2]],
    slip: &[[f64; 2]],
) -> Vec<[f64; 2]> {
    let s = apply_stokeslet(geom, weights, jump);
    let d = unflatten(&stresslet.matvec(&flatten(slip)));
    (0..geom.n())
        .map(|j| {
            [
                -2.0 * s[j][0] + 2.0 * d[j][0] + slip[j][0],
                -2.0 * s[j][1] + 2.0 * d[j][1] + slip[j][1],
            ]
        })
        .collect()
}

/// Solves `v - 2 ((λ-1)/(λ+1)) D[v] = F / (λ+1)`; for `λ = 1` this is `v = F/2`.
pub fn solve_velocity(
    geom: &Geometry,
    stresslet: &DenseMatrix,
    force: &[[f64; 2]],
    params: &PhysParams,
    opts: GmresOptions,
) -> Result<(Vec<[f64; 2]>, Vec<f64>, SolveReport), StokesError> {
    let lam = params.lambda;
    let rhs: Vec<f64> = flatten(force).into_iter().map(|v| v / (lam + 1.0)).collect();
    let (v, report) = if lam == 1.0 {
        (rhs, SolveReport { iterations: 0, residual: 0.0, converged: true })
    } else {
        let beta = (lam - 1.0) / (lam + 1.0);
        let mut a = stresslet.clone();
        a.scale_add_identity(-2.0 * beta, 1.0);
        gmres(&a, &rhs, None, opts)
    };
    if !report.converged {
        return Err(StokesError::NotConverged { iterations: report.iterations, residual: report.residual });
    }
    let v2 = unflatten(&v);
    let vn = v2.iter().zip(&geom.normal).map(|(v, n)| v[0] * n[0] + v[1] * n[1]).collect();
    Ok((v2, vn, report))
}

/// Solver settings shared by the nutrient and velocity solves.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions {
    pub nutrient: GmresOptions,
    pub stokes: GmresOptions,
    pub filter: FilterSettings,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            nutrient: GmresOptions::default(),
            stokes: GmresOptions { tol: 1e-11, ..GmresOptions::default() },
            filter: FilterSettings::default(),
        }
    }
}

/// Nutrient plus Stokes solve on one interface.
pub fn solve_interface(
    curve: &Curve,
    params: &PhysParams,
    bending: &BendingModel,
    opts: &SolverOptions,
) -> Result<(NutrientTrace, StokesTrace), StokesError> {
    let sys = NutrientSystem::new(curve);
    let nutrient = sys.trace(opts.nutrient)?;
    let geom = sys.geometry();
    let f = bending_force_filtered(curve, bending, &opts.filter);
    let jump = stress_jump_from_force(geom, &nutrient, &f, bending.s_inv);
    let slip = slip_velocity(geom, &nutrient, params);
    let weights = kress_weights(geom.n() / 2);
    let stresslet = assemble_stresslet(geom);
    let force = force_term(geom, &weights, &stresslet, &jump, &slip);
    let (v2, v, report) = solve_velocity(geom, &stresslet, &force, params, opts.stokes)?;
    Ok((nutrient, StokesTrace { jump, slip, force, v2, v, report }))
}

/// The full tumor model as a field solver for the time stepper.
#[derive(Debug, Clone)]
pub struct TumorModel {
    pub params: PhysParams,
    pub bending: BendingModel,
    pub options: SolverOptions,
    /// When set to a mode number `l`, `A` is recomputed before every solve
    /// from the current effective radius so that mode `l` neither grows nor
    /// decays in the linear theory.
    pub self_similar_mode: Option<u32>,
}

impl TumorModel {
    pub fn new(params: PhysParams, bending: BendingModel) -> Self {
        Self { params, bending, options: SolverOptions::default(), self_similar_mode: None }
    }

    pub fn self_similar(mut self, l: u32) -> Self {
        self.self_similar_mode = Some(l);
        self
    }
}

impl FieldSolver for TumorModel {
    type Error = StokesError;

    fn normal_velocity(&mut self, curve: &Curve) -> Result<FieldSample, StokesError> {
        if let Some(l) = self.self_similar_mode {
            let r = curve.reconstruct().geometry_stats()?.effective_radius;
            let a = self_similar_a(r, l, self.params.lambda, self.bending.s_inv)?;
            self.params = PhysParams::new(a, self.params.lambda)?;
        }
        let (nutrient, stokes) = solve_interface(curve, &self.params, &self.bending, &self.options)?;
        Ok(FieldSample {
            v: stokes.v,
            nutrient_iters: nutrient.report.iterations,
            stokes_iters: stokes.report.iterations,
        })
    }

    fn apoptosis(&self) -> f64 {
        self.params.a
    }

    /// Large-`l` limit of the bending term in the linear growth rate,
    /// `S_inv l³ / (2 (1+λ) R³)`; rigidity weakening only lowers it.
    fn stiffness(&self) -> Option<f64> {
        Some(self.bending.s_inv / (2.0 * (1.0 + self.params.lambda)))
    }
}
