//! Periodic spectral calculus on the uniform grid `alpha_j = 2 pi j / N`.
//!
//! Coefficients are stored in standard FFT ordering and are *unnormalized*:
//! `c_k = sum_j f_j exp(-i k alpha_j)`, so a unit-amplitude mode has modulus
//! `N / 2`. The Nyquist mode `k = N/2` is treated as a cosine; odd-order
//! operators (first derivative, antiderivative, Hilbert transform) zero it.

use std::cell::RefCell;
use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

fn plan(n: usize, inverse: bool) -> Arc<dyn Fft<f64>> {
    PLANNER.with(|p| {
        let mut p = p.borrow_mut();
        if inverse {
            p.plan_fft_inverse(n)
        } else {
            p.plan_fft_forward(n)
        }
    })
}

/// Signed wavenumber of FFT slot `idx` on an `n`-point grid.
#[inline]
pub fn wavenumber(idx: usize, n: usize) -> i64 {
    if idx <= n / 2 {
        idx as i64
    } else {
        idx as i64 - n as i64
    }
}

/// Fourier coefficients of a real 2π-periodic grid function.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub coeffs: Vec<Complex64>,
}

impl Spectrum {
    pub fn from_grid(values: &[f64]) -> Self {
        let mut coeffs: Vec<Complex64> = values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        plan(values.len(), false).process(&mut coeffs);
        Self { coeffs }
    }

    pub fn zeros(n: usize) -> Self {
        Self { coeffs: vec![Complex64::new(0.0, 0.0); n] }
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Inverse transform; the imaginary part is discarded.
    pub fn to_grid(&self) -> Vec<f64> {
        let n = self.coeffs.len();
        let mut buf = self.coeffs.clone();
        plan(n, true).process(&mut buf);
        let scale = 1.0 / n as f64;
        buf.iter().map(|c| c.re * scale).collect()
    }

    /// Mean value of the underlying grid function.
    pub fn mean(&self) -> f64 {
        self.coeffs[0].re / self.coeffs.len() as f64
    }

    /// Applies a real symbol `m(k)` coefficient-wise.
    pub fn map_symbol(&self, mut symbol: impl FnMut(i64) -> f64) -> Self {
        let n = self.coeffs.len();
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(idx, c)| c * symbol(wavenumber(idx, n)))
            .collect();
        Self { coeffs }
    }

    /// `p`-th derivative with respect to alpha.
    pub fn derivative(&self, order: u32) -> Self {
        let n = self.coeffs.len();
        let nyq = (n / 2) as i64;
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(idx, c)| {
                let k = wavenumber(idx, n);
                if k == nyq && order % 2 == 1 {
                    return Complex64::new(0.0, 0.0);
                }
                c * Complex64::new(0.0, k as f64).powu(order)
            })
            .collect();
        Self { coeffs }
    }

    /// Periodic Hilbert transform, symbol `-i sgn(k)`.
    pub fn hilbert(&self) -> Self {
        let n = self.coeffs.len();
        let nyq = (n / 2) as i64;
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(idx, c)| {
                let k = wavenumber(idx, n);
                if k == 0 || k == nyq {
                    Complex64::new(0.0, 0.0)
                } else {
                    c * Complex64::new(0.0, -(k.signum() as f64))
                }
            })
            .collect();
        Self { coeffs }
    }

    /// High-order exponential filter `exp(-strength (|k| / (N/2))^order)`.
    pub fn fourier_filter(&self, order: u32, strength: f64) -> Self {
        let half = (self.coeffs.len() / 2) as f64;
        self.map_symbol(|k| (-strength * (k.unsigned_abs() as f64 / half).powi(order as i32)).exp())
    }

    /// Zeroes every coefficient with modulus below `threshold`.
    pub fn krasny_filter(&self, threshold: f64) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .map(|&c| if c.norm() < threshold { Complex64::new(0.0, 0.0) } else { c })
            .collect();
        Self { coeffs }
    }
}

/// Spectral derivative of a grid function.
pub fn derivative(values: &[f64], order: u32) -> Vec<f64> {
    Spectrum::from_grid(values).derivative(order).to_grid()
}

/// Antiderivative of the mean-free part of `values`, normalized to vanish at
/// `alpha = 0`. Returns `(P, mean)` so that `int_0^alpha f = mean*alpha + P(alpha)`.
pub fn periodic_antiderivative(values: &[f64]) -> (Vec<f64>, f64) {
    let spec = Spectrum::from_grid(values);
    let n = values.len();
    let nyq = (n / 2) as i64;
    let mean = spec.mean();
    let coeffs = spec
        .coeffs
        .iter()
        .enumerate()
        .map(|(idx, c)| {
            let k = wavenumber(idx, n);
            if k == 0 || k == nyq {
                Complex64::new(0.0, 0.0)
            } else {
                c / Complex64::new(0.0, k as f64)
            }
        })
        .collect();
    let mut p = Spectrum { coeffs }.to_grid();
    let p0 = p[0];
    p.iter_mut().for_each(|v| *v -= p0);
    (p, mean)
}

/// Grid `alpha_j = 2 pi j / n`.
pub fn grid(n: usize) -> Vec<f64> {
    (0..n).map(|j| 2.0 * PI * j as f64 / n as f64).collect()
}

/// Band-limited trigonometric interpolant of a real periodic grid function,
/// evaluable at arbitrary alpha.
#[derive(Debug, Clone)]
pub struct TrigInterpolant {
    n: usize,
    /// Normalized coefficients for `k = 0..=N/2`.
    half: Vec<Complex64>,
}

impl TrigInterpolant {
    pub fn new(values: &[f64]) -> Self {
        let n = values.len();
        let spec = Spectrum::from_grid(values);
        let scale = 1.0 / n as f64;
        let half = spec.coeffs[..=n / 2].iter().map(|c| c * scale).collect();
        Self { n, half }
    }

    /// Value and first derivative at `alpha`.
    pub fn eval_with_derivative(&self, alpha: f64) -> (f64, f64) {
        let m = self.n / 2;
        let step = Complex64::from_polar(1.0, alpha);
        let mut rot = step;
        let mut val = self.half[0].re;
        let mut der = 0.0;
        for k in 1..m {
            let t = self.half[k] * rot;
            val += 2.0 * t.re;
            der -= 2.0 * k as f64 * t.im;
            rot *= step;
        }
        // Nyquist term as a cosine: Re(c) cos(m a) (imaginary part is zero on a real grid)
        let (s, c) = (m as f64 * alpha).sin_cos();
        val += self.half[m].re * c;
        der -= self.half[m].re * m as f64 * s;
        (val, der)
    }

    pub fn eval(&self, alpha: f64) -> f64 {
        self.eval_with_derivative(alpha).0
    }
}
