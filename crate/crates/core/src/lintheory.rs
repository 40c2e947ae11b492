//! Linear stability theory for a perturbed circular tumor.
//!
//! `dR/dt = I1(R)/I0(R) - A R / 2` and `d(δ/R)/dt = (δ/R) B(R)` with
//! `B = λA/(1+λ) - l S_inv (l² - 3/2)/(2R³(1+λ)) + (1 - I1 I_{l+1}/(I0 I_l))/(1+λ) - (2/R) I1/I0`.
//!
//! The bending term carries the same `1/(1+λ)` mobility as the other
//! stress-jump term; it is the exact first-order response of the interface
//! model in [`crate::stokesbim`] (the commonly quoted `l S_inv (l² - 3/2)/(4R³)`
//! agrees only at `λ = 1`).

use thiserror::Error;

use crate::specialfn::{bessel_i_ratio, MAX_ORDER};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LinTheoryError {
    #[error("mode number {0} must satisfy 2 <= l < {max}", max = MAX_ORDER)]
    Mode(u32),
    #[error("no steady radius for A = {0}; need 1e-3 <= A < 1")]
    NoSteadyRadius(f64),
    #[error("radius must be positive, got {0}")]
    Radius(f64),
}

/// Parameters entering the shape bracket.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinParams {
    pub a: f64,
    pub lambda: f64,
    pub s_inv: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearState {
    pub r: f64,
    pub delta_over_r: f64,
    pub l: u32,
    pub params: LinParams,
}

fn check_mode(l: u32) -> Result<(), LinTheoryError> {
    if !(2..MAX_ORDER).contains(&l) {
        return Err(LinTheoryError::Mode(l));
    }
    Ok(())
}

fn check_radius(r: f64) -> Result<(), LinTheoryError> {
    if !(r > 0.0) || !r.is_finite() {
        return Err(LinTheoryError::Radius(r));
    }
    Ok(())
}

fn ratio(order: u32, r: f64) -> f64 {
    bessel_i_ratio(order, r).expect("validated positive radius")
}

/// `dR/dt = I1(R)/I0(R) - A R / 2`.
pub fn radius_rate(r: f64, a: f64) -> f64 {
    ratio(0, r) - 0.5 * a * r
}

/// Pieces of the bracket: `(A coefficient, S_inv coefficient, remainder)`.
fn bracket_parts(r: f64, l: u32, lambda: f64) -> (f64, f64, f64) {
    let lf = l as f64;
    let r01 = ratio(0, r);
    let rl = ratio(l, r);
    let a_coef = lambda / (1.0 + lambda);
    let s_coef = -lf * (lf * lf - 1.5) / (2.0 * r * r * r * (1.0 + lambda));
    let rest = (1.0 - r01 * rl) / (1.0 + lambda) - 2.0 / r * r01;
    (a_coef, s_coef, rest)
}

/// Growth rate of the shape factor per unit shape factor.
pub fn bracket(r: f64, l: u32, p: &LinParams) -> Result<f64, LinTheoryError> {
    check_mode(l)?;
    check_radius(r)?;
    let (ac, sc, rest) = bracket_parts(r, l, p.lambda);
    Ok(ac * p.a + sc * p.s_inv + rest)
}

/// `d(δ/R)/dt`.
pub fn shape_rate(state: &LinearState) -> Result<f64, LinTheoryError> {
    Ok(state.delta_over_r * bracket(state.r, state.l, &state.params)?)
}

/// Root of `radius_rate(·, A)` by bisection.
pub fn steady_radius(a: f64) -> Result<f64, LinTheoryError> {
    if !(1e-3..1.0).contains(&a) {
        return Err(LinTheoryError::NoSteadyRadius(a));
    }
    let (mut lo, mut hi) = (1e-6, 2.0 / a + 2.0);
    while hi - lo > 1e-12 * hi {
        let mid = 0.5 * (lo + hi);
        if radius_rate(mid, a) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// `S_inv` at which the bracket vanishes.
pub fn marginal_s_inv(l: u32, a: f64, r: f64, lambda: f64) -> Result<f64, LinTheoryError> {
    check_mode(l)?;
    check_radius(r)?;
    let (ac, sc, rest) = bracket_parts(r, l, lambda);
    Ok(-(ac * a + rest) / sc)
}

/// Apoptosis ratio that freezes the shape factor.
pub fn self_similar_a(r: f64, l: u32, lambda: f64, s_inv: f64) -> Result<f64, LinTheoryError> {
    check_mode(l)?;
    check_radius(r)?;
    let (ac, sc, rest) = bracket_parts(r, l, lambda);
    Ok(-(sc * s_inv + rest) / ac)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ASchedule {
    Constant,
    SelfSimilar,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearSample {
    pub t: f64,
    pub r: f64,
    pub delta_over_r: f64,
    pub a: f64,
}

/// Classical RK4 on `(R, δ/R)`; the last step is shortened to land on `t_final`.
pub fn integrate_linear(
    initial: &LinearState,
    schedule: ASchedule,
    t_final: f64,
    dt: f64,
) -> Result<Vec<LinearSample>, LinTheoryError> {
    check_mode(initial.l)?;
    check_radius(initial.r)?;
    let p = initial.params;
    let l = initial.l;
    let a_at = |r: f64| -> Result<f64, LinTheoryError> {
        match schedule {
            ASchedule::Constant => Ok(p.a),
            ASchedule::SelfSimilar => self_similar_a(r, l, p.lambda, p.s_inv),
        }
    };
    let rhs = |y: [f64; 2]| -> Result<[f64; 2], LinTheoryError> {
        check_radius(y[0])?;
        let a = a_at(y[0])?;
        let b = bracket(y[0], l, &LinParams { a, ..p })?;
        Ok([radius_rate(y[0], a), y[1] * b])
    };
    let mut y = [initial.r, initial.delta_over_r];
    let mut t = 0.0;
    let mut out = vec![LinearSample { t, r: y[0], delta_over_r: y[1], a: a_at(y[0])? }];
    let steps = (t_final / dt).ceil() as usize;
    for k in 0..steps {
        let h = if k + 1 == steps { t_final - t } else { dt };
        let k1 = rhs(y)?;
        let k2 = rhs([y[0] + 0.5 * h * k1[0], y[1] + 0.5 * h * k1[1]])?;
        let k3 = rhs([y[0] + 0.5 * h * k2[0], y[1] + 0.5 * h * k2[1]])?;
        let k4 = rhs([y[0] + h * k3[0], y[1] + h * k3[1]])?;
        for i in 0..2 {
            y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        t = if k + 1 == steps { t_final } else { t + h };
        out.push(LinearSample { t, r: y[0], delta_over_r: y[1], a: a_at(y[0])? });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn steady_radii() {
        assert!((steady_radius(0.5).unwrap() - 3.326).abs() < 1e-3);
        assert!((steady_radius(0.7).unwrap() - 1.988).abs() < 1e-3);
        assert!(steady_radius(5e-4).is_err());
        assert!(steady_radius(1.0).is_err());
    }

    #[test]
    fn round_trips() {
        let m = marginal_s_inv(3, 0.5, 1.988, 0.5).unwrap();
        assert!(m > 0.001 && m < 2.0);
        let p = LinParams { a: 0.5, lambda: 0.5, s_inv: m };
        assert!(bracket(1.988, 3, &p).unwrap().abs() < 1e-14);
        let a = self_similar_a(2.0, 3, 0.5, 0.3).unwrap();
        let p = LinParams { a, lambda: 0.5, s_inv: 0.3 };
        assert!(bracket(2.0, 3, &p).unwrap().abs() < 1e-14);
    }

    #[test]
    fn mode_and_radius_checks() {
        let p = LinParams { a: 0.5, lambda: 1.0, s_inv: 1.0 };
        assert_eq!(bracket(1.0, 1, &p), Err(LinTheoryError::Mode(1)));
        assert_eq!(bracket(1.0, 64, &p), Err(LinTheoryError::Mode(64)));
        assert_eq!(bracket(0.0, 3, &p), Err(LinTheoryError::Radius(0.0)));
    }
}
