//! Bending rigidity laws and the interfacial bending force.

use thiserror::Error;

use crate::curvegeom::Curve;
use crate::specialfn::{FilterSettings, Spectrum};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MembraneError {
    #[error("bending strength S_inv must be nonnegative and finite, got {0}")]
    BendingStrength(f64),
    #[error("rigidity fraction C must lie in [0, 1), got {0}")]
    RigidityFraction(f64),
    #[error("characteristic radius lambda_c must be positive, got {0}")]
    CharacteristicRadius(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BendingKind {
    Uniform,
    Weakening,
}

/// Normalized rigidity `ν(κ) = C exp(-λc² κ²) + 1 - C` scaled by `S_inv`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BendingModel {
    pub kind: BendingKind,
    pub s_inv: f64,
    pub c: f64,
    pub lambda_c: f64,
}

impl BendingModel {
    pub fn uniform(s_inv: f64) -> Result<Self, MembraneError> {
        check_strength(s_inv)?;
        Ok(Self { kind: BendingKind::Uniform, s_inv, c: 0.0, lambda_c: 1.0 })
    }

    pub fn weakening(s_inv: f64, c: f64, lambda_c: f64) -> Result<Self, MembraneError> {
        check_strength(s_inv)?;
        if !(0.0..1.0).contains(&c) {
            return Err(MembraneError::RigidityFraction(c));
        }
        if !(lambda_c > 0.0) || !lambda_c.is_finite() {
            return Err(MembraneError::CharacteristicRadius(lambda_c));
        }
        Ok(Self { kind: BendingKind::Weakening, s_inv, c, lambda_c })
    }
}

fn check_strength(s_inv: f64) -> Result<(), MembraneError> {
    if !(s_inv >= 0.0) || !s_inv.is_finite() {
        return Err(MembraneError::BendingStrength(s_inv));
    }
    Ok(())
}

/// `(ν, ν', ν'', ν''')` at curvature `kappa`.
pub fn nu_and_derivatives(kappa: f64, model: &BendingModel) -> (f64, f64, f64, f64) {
    match model.kind {
        BendingKind::Uniform => (1.0, 0.0, 0.0, 0.0),
        BendingKind::Weakening => {
            let u = model.lambda_c * model.lambda_c;
            let cg = model.c * (-u * kappa * kappa).exp();
            let k2 = kappa * kappa;
            (
                cg + 1.0 - model.c,
                cg * (-2.0 * u * kappa),
                cg * (4.0 * u * u * k2 - 2.0 * u),
                cg * (-8.0 * u * u * u * k2 * kappa + 12.0 * u * u * kappa),
            )
        }
    }
}

/// `f(κ)` with the default smoothing filter applied to the tangent angle first.
pub fn bending_force(curve: &Curve, model: &BendingModel) -> Vec<f64> {
    bending_force_filtered(curve, model, &FilterSettings::default())
}

/// Bending force before multiplication by `S_inv`:
/// uniform `κ³/2 + κ_ss`; weakening
/// `(ν''κ²/2 + 2ν'κ + ν) κ_ss + (ν'''κ²/2 + 3ν''κ + 3ν') κ_s² + (ν'κ/2 + ν/2) κ³`,
/// the normal variation of `½ ∮ ν(κ) κ² ds`.
pub fn bending_force_filtered(curve: &Curve, model: &BendingModel, filter: &FilterSettings) -> Vec<f64> {
    let sa = curve.s_alpha();
    let phi = filter.smooth(&Spectrum::from_grid(curve.phi()));
    let d1 = phi.derivative(1);
    let kappa: Vec<f64> = d1.to_grid().into_iter().map(|v| (1.0 + v) / sa).collect();
    let kappa_s: Vec<f64> = d1.derivative(1).to_grid().into_iter().map(|v| v / (sa * sa)).collect();
    let kappa_ss: Vec<f64> = d1.derivative(2).to_grid().into_iter().map(|v| v / (sa * sa * sa)).collect();
    (0..curve.n())
        .map(|j| {
            let (k, ks, kss) = (kappa[j], kappa_s[j], kappa_ss[j]);
            match model.kind {
                BendingKind::Uniform => kss + 0.5 * k * k * k,
                BendingKind::Weakening => {
                    let (nu, n1, n2, n3) = nu_and_derivatives(k, model);
                    (0.5 * n2 * k * k + 2.0 * n1 * k + nu) * kss
                        + (0.5 * n3 * k * k + 3.0 * n2 * k + 3.0 * n1) * ks * ks
                        + (0.5 * n1 * k + 0.5 * nu) * k * k * k
                }
            }
        })
        .collect()
}
