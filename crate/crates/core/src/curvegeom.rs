//! Closed planar curves in tangent-angle / arclength form.
//!
//! A [`Curve`] stores `phi(alpha) = theta(alpha) - alpha` on the uniform grid,
//! the (spatially constant) arclength metric `s_alpha = L / 2pi` and the
//! position of the `alpha = 0` marker. Orientation is counterclockwise with
//! unit tangent `(cos theta, sin theta)` and outward normal `(sin theta, -cos theta)`.

use std::f64::consts::PI;

use thiserror::Error;

use crate::specialfn::{derivative, grid, periodic_antiderivative, TrigInterpolant};

/// Newton iterations allowed per marker when equalizing arclength.
pub const NEWTON_MAX_ITER: usize = 50;
/// Residual tolerance for the arclength equation, relative to `max(L, 1)`.
pub const NEWTON_TOL: f64 = 1e-13;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CurveError {
    #[error("point count {0} is not a power of two (>= 8)")]
    NotPowerOfTwo(usize),
    #[error("curve length must be positive, got metric {0}")]
    NonPositiveMetric(f64),
    #[error("arclength reparametrization did not converge at marker {marker} after {iterations} Newton steps")]
    NewtonDiverged { marker: usize, iterations: usize },
    #[error("enclosed area {0} is not positive; curve is degenerate or self-intersecting")]
    DegenerateArea(f64),
}

pub(crate) fn check_grid_size(n: usize) -> Result<(), CurveError> {
    if n < 8 || !n.is_power_of_two() {
        return Err(CurveError::NotPowerOfTwo(n));
    }
    Ok(())
}

/// Interface in tangent-angle form on an equal-arclength grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Curve {
    phi: Vec<f64>,
    s_alpha: f64,
    ref_point: [f64; 2],
}

/// Marker points ordered along the curve.
#[derive(Debug, Clone, PartialEq)]
pub struct MarkerCurve {
    pub points: Vec<[f64; 2]>,
}

/// Area-based summary of a closed curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeometryStats {
    pub area: f64,
    pub effective_radius: f64,
    pub centroid: [f64; 2],
}

/// Pointwise geometry sampled on the grid, as consumed by the layer-potential kernels.
#[derive(Debug, Clone)]
pub struct Geometry {
    pub points: Vec<[f64; 2]>,
    pub tangent: Vec<[f64; 2]>,
    pub normal: Vec<[f64; 2]>,
    pub kappa: Vec<f64>,
    pub s_alpha: f64,
}

impl Geometry {
    pub fn n(&self) -> usize {
        self.points.len()
    }

    /// Grid spacing `2 pi / N`.
    pub fn h(&self) -> f64 {
        2.0 * PI / self.points.len() as f64
    }
}

/// Outcome of an arclength reparametrization.
#[derive(Debug, Clone)]
pub struct Reparametrization {
    pub curve: Curve,
    /// Largest number of Newton steps needed by any marker.
    pub max_newton_iterations: usize,
}

impl Curve {
    pub fn new(phi: Vec<f64>, s_alpha: f64, ref_point: [f64; 2]) -> Result<Self, CurveError> {
        check_grid_size(phi.len())?;
        if !(s_alpha > 0.0) || !s_alpha.is_finite() {
            return Err(CurveError::NonPositiveMetric(s_alpha));
        }
        Ok(Self { phi, s_alpha, ref_point })
    }

    /// Circle of the given radius, first marker at angle zero.
    pub fn circle(n: usize, radius: f64, center: [f64; 2]) -> Result<Self, CurveError> {
        Self::new(vec![PI / 2.0; n], radius, [center[0] + radius, center[1]])
    }

    pub fn n(&self) -> usize {
        self.phi.len()
    }

    pub fn phi(&self) -> &[f64] {
        &self.phi
    }

    pub fn s_alpha(&self) -> f64 {
        self.s_alpha
    }

    pub fn ref_point(&self) -> [f64; 2] {
        self.ref_point
    }

    pub fn length(&self) -> f64 {
        2.0 * PI * self.s_alpha
    }

    pub fn theta(&self) -> Vec<f64> {
        grid(self.n()).iter().zip(&self.phi).map(|(a, p)| a + p).collect()
    }

    /// `theta_alpha = 1 + phi_alpha`.
    pub fn theta_alpha(&self) -> Vec<f64> {
        derivative(&self.phi, 1).into_iter().map(|d| 1.0 + d).collect()
    }

    /// `kappa = theta_alpha / s_alpha`.
    pub fn curvature(&self) -> Vec<f64> {
        self.theta_alpha().into_iter().map(|t| t / self.s_alpha).collect()
    }

    /// Markers from the mean-subtracted antiderivative of `s_alpha (cos theta, sin theta)`.
    pub fn reconstruct(&self) -> MarkerCurve {
        let theta = self.theta();
        let cos: Vec<f64> = theta.iter().map(|t| t.cos()).collect();
        let sin: Vec<f64> = theta.iter().map(|t| t.sin()).collect();
        let (px, _) = periodic_antiderivative(&cos);
        let (py, _) = periodic_antiderivative(&sin);
        let [x0, y0] = self.ref_point;
        let points = px
            .iter()
            .zip(&py)
            .map(|(a, b)| [x0 + self.s_alpha * a, y0 + self.s_alpha * b])
            .collect();
        MarkerCurve { points }
    }

    pub fn geometry(&self) -> Geometry {
        let theta = self.theta();
        Geometry {
            points: self.reconstruct().points,
            tangent: theta.iter().map(|t| [t.cos(), t.sin()]).collect(),
            normal: theta.iter().map(|t| [t.sin(), -t.cos()]).collect(),
            kappa: self.curvature(),
            s_alpha: self.s_alpha,
        }
    }

    /// Equal-arclength curve through an arbitrary closed marker sequence.
    pub fn from_markers(points: &[[f64; 2]]) -> Result<Self, CurveError> {
        Ok(reparametrize(points)?.curve)
    }

    /// Shifts `phi` by a multiple of `2 pi` so its mean is closest to `target_mean`.
    pub(crate) fn align_branch(&mut self, target_mean: f64) {
        let mean = self.phi.iter().sum::<f64>() / self.n() as f64;
        let shift = ((target_mean - mean) / (2.0 * PI)).round() * 2.0 * PI;
        if shift != 0.0 {
            self.phi.iter_mut().for_each(|p| *p += shift);
        }
    }
}

/// Equalizes arclength along `points` by Newton iteration on the Fourier
/// interpolant of the cumulative arclength.
pub fn reparametrize(points: &[[f64; 2]]) -> Result<Reparametrization, CurveError> {
    let n = points.len();
    check_grid_size(n)?;
    let mut pts = points.to_vec();
    if signed_area(&pts) < 0.0 {
        // reverse orientation, keeping the first marker in place
        pts = (0..n).map(|j| points[(n - j) % n]).collect();
    }
    let xs: Vec<f64> = pts.iter().map(|p| p[0]).collect();
    let ys: Vec<f64> = pts.iter().map(|p| p[1]).collect();
    let dx = derivative(&xs, 1);
    let dy = derivative(&ys, 1);
    let speed: Vec<f64> = dx.iter().zip(&dy).map(|(a, b)| a.hypot(*b)).collect();
    let (cum, mean_speed) = periodic_antiderivative(&speed);
    let length = 2.0 * PI * mean_speed;
    if !(length > 0.0) {
        return Err(CurveError::NonPositiveMetric(mean_speed));
    }
    let x_int = TrigInterpolant::new(&xs);
    let y_int = TrigInterpolant::new(&ys);
    let cum_int = TrigInterpolant::new(&cum);
    let beta = grid(n);
    // cumulative arclength at the original nodes, used to seed Newton
    let s_nodes: Vec<f64> = beta.iter().zip(&cum).map(|(b, c)| mean_speed * b + c).collect();

    let tol = NEWTON_TOL * length.max(1.0);
    let mut max_iter = 0;
    let mut new_beta = vec![0.0; n];
    let mut bracket = 0usize;
    for (j, nb) in new_beta.iter_mut().enumerate().skip(1) {
        let target = length * j as f64 / n as f64;
        while bracket + 1 < n && s_nodes[bracket + 1] <= target {
            bracket += 1;
        }
        let (s_lo, b_lo) = (s_nodes[bracket], beta[bracket]);
        let (s_hi, b_hi) = if bracket + 1 < n {
            (s_nodes[bracket + 1], beta[bracket + 1])
        } else {
            (length, 2.0 * PI)
        };
        let mut b = b_lo + (target - s_lo) / (s_hi - s_lo) * (b_hi - b_lo);
        let mut converged = false;
        for it in 1..=NEWTON_MAX_ITER {
            let (c, dc) = cum_int.eval_with_derivative(b);
            let resid = mean_speed * b + c - target;
            let slope = mean_speed + dc;
            if !(slope > 0.0) {
                break;
            }
            b -= resid / slope;
            max_iter = max_iter.max(it);
            if resid.abs() < tol {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(CurveError::NewtonDiverged { marker: j, iterations: NEWTON_MAX_ITER });
        }
        *nb = b;
    }

    let alpha = grid(n);
    let mut phi = Vec::with_capacity(n);
    let mut prev_theta = 0.0;
    for (j, &b) in new_beta.iter().enumerate() {
        let (_, xb) = x_int.eval_with_derivative(b);
        let (_, yb) = y_int.eval_with_derivative(b);
        let raw = yb.atan2(xb);
        let theta = if j == 0 {
            raw
        } else {
            raw + ((prev_theta - raw) / (2.0 * PI)).round() * 2.0 * PI
        };
        prev_theta = theta;
        phi.push(theta - alpha[j]);
    }
    let curve = Curve::new(phi, length / (2.0 * PI), pts[0])?;
    Ok(Reparametrization { curve, max_newton_iterations: max_iter })
}

fn signed_area(points: &[[f64; 2]]) -> f64 {
    let xs: Vec<f64> = points.iter().map(|p| p[0]).collect();
    let ys: Vec<f64> = points.iter().map(|p| p[1]).collect();
    let dx = derivative(&xs, 1);
    let dy = derivative(&ys, 1);
    let n = points.len() as f64;
    let sum: f64 = (0..points.len()).map(|j| xs[j] * dy[j] - ys[j] * dx[j]).sum();
    0.5 * sum * 2.0 * PI / n
}

/// Polar-angle sampling for perturbed circles `r = r0 + sum a cos/sin(l alpha)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ModePhase {
    Cos,
    Sin,
}

impl MarkerCurve {
    pub fn n(&self) -> usize {
        self.points.len()
    }

    /// Samples `r(alpha) = r0 + sum_i a_i trig(l_i alpha)` uniformly in polar angle.
    pub fn polar(n: usize, r0: f64, modes: &[(u32, f64, ModePhase)]) -> Self {
        let points = grid(n)
            .into_iter()
            .map(|a| {
                let r = r0
                    + modes
                        .iter()
                        .map(|&(l, amp, ph)| match ph {
                            ModePhase::Cos => amp * (l as f64 * a).cos(),
                            ModePhase::Sin => amp * (l as f64 * a).sin(),
                        })
                        .sum::<f64>();
                [r * a.cos(), r * a.sin()]
            })
            .collect();
        Self { points }
    }

    /// Area, effective radius and area centroid by spectral shoelace quadrature.
    pub fn geometry_stats(&self) -> Result<GeometryStats, CurveError> {
        let xs: Vec<f64> = self.points.iter().map(|p| p[0]).collect();
        let ys: Vec<f64> = self.points.iter().map(|p| p[1]).collect();
        let dx = derivative(&xs, 1);
        let dy = derivative(&ys, 1);
        let w = 2.0 * PI / self.n() as f64;
        let mut area = 0.0;
        let mut mx = 0.0;
        let mut my = 0.0;
        for j in 0..self.n() {
            area += 0.5 * (xs[j] * dy[j] - ys[j] * dx[j]);
            mx += 0.5 * xs[j] * xs[j] * dy[j];
            my -= 0.5 * ys[j] * ys[j] * dx[j];
        }
        area *= w;
        if !(area > 0.0) {
            return Err(CurveError::DegenerateArea(area));
        }
        Ok(GeometryStats {
            area,
            effective_radius: (area / PI).sqrt(),
            centroid: [mx * w / area, my * w / area],
        })
    }

    /// `max_j |x_j - c| / R - 1` about the area centroid `c`, `R` the effective radius.
    pub fn shape_factor(&self) -> Result<f64, CurveError> {
        let stats = self.geometry_stats()?;
        let [cx, cy] = stats.centroid;
        let r = stats.effective_radius;
        let far = self
            .points
            .iter()
            .map(|p| (p[0] - cx).hypot(p[1] - cy))
            .fold(0.0, f64::max);
        Ok((far / r - 1.0).max(0.0))
    }

    /// Spectral curvature of the marker sequence in its own parametrization.
    pub fn curvature(&self) -> Vec<f64> {
        let xs: Vec<f64> = self.points.iter().map(|p| p[0]).collect();
        let ys: Vec<f64> = self.points.iter().map(|p| p[1]).collect();
        let (x1, y1) = (derivative(&xs, 1), derivative(&ys, 1));
        let (x2, y2) = (derivative(&xs, 2), derivative(&ys, 2));
        (0..self.n())
            .map(|j| (x1[j] * y2[j] - x2[j] * y1[j]) / x1[j].hypot(y1[j]).powi(3))
            .collect()
    }
}
