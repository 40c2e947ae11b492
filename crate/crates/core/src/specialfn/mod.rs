//! Special functions and periodic spectral operators shared by every solver.

pub mod bessel;
pub mod fourier;

pub use bessel::{
    bessel01, bessel_i, bessel_i_ratio, bessel_i_scaled, bessel_k, k0_regular, k1_regular, Bessel01,
    SpecialFnError, EULER_GAMMA, MAX_ORDER,
};
pub use fourier::{derivative, grid, periodic_antiderivative, Spectrum, TrigInterpolant};

/// Default exponent of the high-order smoothing filter.
pub const FILTER_ORDER: u32 = 25;
/// Default damping strength of the smoothing filter at the Nyquist mode.
pub const FILTER_STRENGTH: f64 = 10.0;
/// Default Krasny level, per normalized coefficient.
pub const KRASNY_LEVEL: f64 = 1e-13;

/// Smoothing plus Krasny filter parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FilterSettings {
    pub order: u32,
    pub strength: f64,
    /// Krasny level per normalized coefficient; `0` disables the filter.
    pub krasny_level: f64,
}

impl Default for FilterSettings {
    fn default() -> Self {
        Self { order: FILTER_ORDER, strength: FILTER_STRENGTH, krasny_level: KRASNY_LEVEL }
    }
}

impl FilterSettings {
    /// Smoothing filter only.
    pub fn smooth(&self, s: &Spectrum) -> Spectrum {
        s.fourier_filter(self.order, self.strength)
    }

    /// Smoothing filter followed by the Krasny filter.
    pub fn apply(&self, s: &Spectrum) -> Spectrum {
        let n = s.len() as f64;
        self.smooth(s).krasny_filter(self.krasny_level * n)
    }
}
