//! Modified Bessel functions of integer order.
//!
//! `I_n`: ascending series for `x <= 20` (all terms positive, no cancellation);
//! for larger arguments `I_0` from the Hankel asymptotic expansion and higher
//! orders by downward recurrence seeded with a continued fraction for
//! `I_{n+1}/I_n`. `K_0`, `K_1`: logarithmic series for `x <= 2`, Steed's
//! continued fraction (Temme's CF2) beyond.

use std::f64::consts::PI;

use thiserror::Error;

pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Largest order accepted by [`bessel_i`].
pub const MAX_ORDER: u32 = 64;
/// Largest argument for which unscaled `I_n` is returned.
pub const MAX_ARG: f64 = 700.0;

const SERIES_LIMIT: f64 = 20.0;
const K_SERIES_LIMIT: f64 = 2.0;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpecialFnError {
    #[error("argument {0} outside the domain of the function")]
    Domain(f64),
    #[error("order {0} not supported")]
    Order(u32),
    #[error("argument {0} overflows double precision")]
    Overflow(f64),
}

/// Ascending series for `e^{-x} I_n(x)`, `x <= SERIES_LIMIT`.
fn i_scaled_series(n: u32, x: f64) -> f64 {
    let half = 0.5 * x;
    let mut term = 1.0;
    for k in 1..=n {
        term *= half / k as f64;
    }
    if term == 0.0 {
        return 0.0;
    }
    let q = half * half;
    let mut sum = term;
    let mut k = 0u32;
    loop {
        k += 1;
        term *= q / (k as f64 * (k + n) as f64);
        sum += term;
        if term < 1e-17 * sum {
            break;
        }
    }
    sum * (-x).exp()
}

/// Hankel expansion for `e^{-x} I_0(x)`, accurate to rounding for `x >= 20`.
fn i0_scaled_asymptotic(x: f64) -> f64 {
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..60 {
        let odd = (2 * k - 1) as f64;
        let next = term * odd * odd / (8.0 * k as f64 * x);
        if next.abs() > term.abs() {
            break;
        }
        term = next;
        sum += term;
        if term < 1e-17 * sum {
            break;
        }
    }
    sum / (2.0 * PI * x).sqrt()
}

/// Continued fraction for `I_{n+1}(x)/I_n(x)` (modified Lentz).
fn i_ratio_cf(n: u32, x: f64) -> f64 {
    let tiny = 1e-300;
    let inv = 2.0 / x;
    // I_{n+1}/I_n = 1 / (b_1 + 1/(b_2 + ...)), b_j = 2(n+j)/x; Lentz with b_0 = 0
    let mut f = tiny;
    let mut c = f;
    let mut d = 0.0;
    for j in 1..200_000u32 {
        let b = (n + j) as f64 * inv;
        let a = 1.0;
        d = b + a * d;
        if d == 0.0 {
            d = tiny;
        }
        c = b + a / c;
        if c == 0.0 {
            c = tiny;
        }
        d = 1.0 / d;
        let delta = c * d;
        f *= delta;
        if (delta - 1.0).abs() < 1e-16 {
            break;
        }
    }
    f
}

/// `e^{-x} I_n(x)` for `x >= 0`, `n <= MAX_ORDER`.
pub fn bessel_i_scaled(order: u32, x: f64) -> Result<f64, SpecialFnError> {
    if order > MAX_ORDER {
        return Err(SpecialFnError::Order(order));
    }
    if !(x >= 0.0) || !x.is_finite() {
        return Err(SpecialFnError::Domain(x));
    }
    if x <= SERIES_LIMIT {
        return Ok(i_scaled_series(order, x));
    }
    let i0 = i0_scaled_asymptotic(x);
    if order == 0 {
        return Ok(i0);
    }
    // downward recurrence I_{m-1} = I_{m+1} + (2m/x) I_m, seeded at the top order
    let mut upper = i_ratio_cf(order, x);
    let mut current = 1.0;
    for m in (1..=order).rev() {
        let lower = upper + 2.0 * m as f64 / x * current;
        upper = current;
        current = lower;
    }
    Ok(i0 / current)
}

/// Modified Bessel function of the first kind `I_n(x)`.
pub fn bessel_i(order: u32, x: f64) -> Result<f64, SpecialFnError> {
    if x > MAX_ARG {
        return Err(SpecialFnError::Overflow(x));
    }
    Ok(bessel_i_scaled(order, x)? * x.exp())
}

/// `I_{n+1}(x) / I_n(x)` without overflow, for any `x > 0`.
pub fn bessel_i_ratio(order: u32, x: f64) -> Result<f64, SpecialFnError> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(SpecialFnError::Domain(x));
    }
    if x <= SERIES_LIMIT {
        Ok(i_scaled_series(order + 1, x) / i_scaled_series(order, x))
    } else {
        Ok(i_ratio_cf(order, x))
    }
}

/// Values `I_0, I_1, K_0, K_1` and the log-regular parts of `K_0, K_1` at one argument.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bessel01 {
    pub i0: f64,
    pub i1: f64,
    pub k0: f64,
    pub k1: f64,
    /// `K_0(x) + I_0(x) ln(x/2)`
    pub k0_reg: f64,
    /// `K_1(x) - 1/x - I_1(x) ln(x/2)`
    pub k1_reg: f64,
}

/// Joint series for `x <= 2`. Returns `(i0, i1, k0_reg, k1_reg)`.
fn small_arg_series(x: f64) -> (f64, f64, f64, f64) {
    let q = 0.25 * x * x;
    // t_k = q^k / (k!)^2, u_k = q^k / (k! (k+1)!)
    let mut t = 1.0;
    let mut u = 1.0;
    let mut h = 0.0; // harmonic number H_k
    let mut i0 = 1.0;
    let mut i1s = 1.0;
    let mut k0s = 0.0;
    // psi(k+1) + psi(k+2) = H_k + H_{k+1} - 2 gamma
    let mut k1s = 1.0 - 2.0 * EULER_GAMMA;
    for k in 1..60 {
        let kf = k as f64;
        t *= q / (kf * kf);
        u *= q / (kf * (kf + 1.0));
        h += 1.0 / kf;
        i0 += t;
        i1s += u;
        k0s += h * t;
        k1s += (2.0 * h + 1.0 / (kf + 1.0) - 2.0 * EULER_GAMMA) * u;
        if t < 1e-18 * i0 {
            break;
        }
    }
    let i1 = 0.5 * x * i1s;
    let k0_reg = -EULER_GAMMA * i0 + k0s;
    let k1_reg = -0.25 * x * k1s;
    (i0, i1, k0_reg, k1_reg)
}

/// Unscaled joint series for `(I_0, I_1)`.
fn i01_series(x: f64) -> (f64, f64) {
    let q = 0.25 * x * x;
    let (mut t, mut u) = (1.0, 1.0);
    let (mut i0, mut i1s) = (1.0, 1.0);
    let mut k = 1.0;
    while t >= 1e-17 * i0 {
        t *= q / (k * k);
        u *= q / (k * (k + 1.0));
        i0 += t;
        i1s += u;
        k += 1.0;
    }
    (i0, 0.5 * x * i1s)
}

/// Steed/Temme continued fraction for `(K_0, K_1)`, `x >= 2`.
fn k01_cf(x: f64) -> (f64, f64) {
    let mut b = 2.0 * (1.0 + x);
    let mut d = 1.0 / b;
    let mut h = d;
    let mut delh = d;
    let mut q1 = 0.0;
    let mut q2 = 1.0;
    let a1 = 0.25;
    let mut q = a1;
    let mut c = a1;
    let mut a = -a1;
    let mut s = 1.0 + q * delh;
    for i in 2..10_000 {
        a -= 2.0 * (i - 1) as f64;
        c = -a * c / i as f64;
        let qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2.0;
        d = 1.0 / (b + a * d);
        delh = (b * d - 1.0) * delh;
        h += delh;
        let dels = q * delh;
        s += dels;
        if (dels / s).abs() < 1e-17 {
            break;
        }
    }
    h *= a1;
    let k0 = (PI / (2.0 * x)).sqrt() * (-x).exp() / s;
    let k1 = k0 * (x + 0.5 - h) / x;
    (k0, k1)
}

/// `I_0, I_1, K_0, K_1` and the log-regular parts for `x > 0`; at `x = 0` only
/// the regular parts are meaningful (`K` entries are infinite).
pub fn bessel01(x: f64) -> Bessel01 {
    if x <= K_SERIES_LIMIT {
        let (i0, i1, k0_reg, k1_reg) = small_arg_series(x);
        if x == 0.0 {
            return Bessel01 { i0, i1, k0: f64::INFINITY, k1: f64::INFINITY, k0_reg, k1_reg };
        }
        let l = (0.5 * x).ln();
        let k0 = k0_reg - i0 * l;
        let k1 = k1_reg + 1.0 / x + i1 * l;
        Bessel01 { i0, i1, k0, k1, k0_reg, k1_reg }
    } else {
        let (i0, i1) = if x <= SERIES_LIMIT {
            i01_series(x)
        } else {
            let i0 = i0_scaled_asymptotic(x) * x.exp();
            (i0, i0 * i_ratio_cf(0, x))
        };
        let (k0, k1) = k01_cf(x);
        let l = (0.5 * x).ln();
        Bessel01 { i0, i1, k0, k1, k0_reg: k0 + i0 * l, k1_reg: k1 - 1.0 / x - i1 * l }
    }
}

/// Modified Bessel function of the second kind, orders 0 and 1.
pub fn bessel_k(order: u32, x: f64) -> Result<f64, SpecialFnError> {
    if order > 1 {
        return Err(SpecialFnError::Order(order));
    }
    if !(x > 0.0) || !x.is_finite() {
        return Err(SpecialFnError::Domain(x));
    }
    let b = bessel01(x);
    Ok(if order == 0 { b.k0 } else { b.k1 })
}

/// `K_0(x) + I_0(x) ln(x/2)`, finite at `x = 0` where it equals `-gamma`.
pub fn k0_regular(x: f64) -> f64 {
    bessel01(x).k0_reg
}

/// `K_1(x) - 1/x - I_1(x) ln(x/2)`, vanishing at `x = 0`.
pub fn k1_regular(x: f64) -> f64 {
    bessel01(x).k1_reg
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    // Reference values from 30-digit arbitrary precision evaluation.
    const K_TABLE: &[(f64, f64, f64)] = &[
        (0.1, 2.4270690247020165578, 9.8538447808706055744),
        (0.5, 0.92441907122766586178, 1.6564411200033008937),
        (1.0, 0.42102443824070833334, 0.60190723019723457474),
        (2.0, 0.11389387274953343565, 0.13986588181652242728),
        (2.5, 0.062347553200366186029, 0.073890816347747063649),
        (3.0, 0.034739504386279248072, 0.040156431128194184377),
        (5.0, 0.0036910983340425942747, 0.0040446134454521642084),
        (10.0, 0.000017780062316167651811, 0.000018648773453825584597),
        (20.0, 5.7412378153365242927e-10, 5.8830579695570381777e-10),
        (21.0, 2.0617679699853177299e-10, 2.1102992233127965238e-10),
        (35.0, 1.3310351491429468528e-16, 1.3499178340011056862e-16),
        (50.0, 3.4101677497894955139e-23, 3.4441022267175556126e-23),
    ];

    const I_TABLE: &[(u32, f64, f64)] = &[
        (0, 1.0, 1.2660658777520083356),
        (1, 1.0, 0.56515910399248502721),
        (4, 2.0, 0.050728569979180238238),
        (3, 3.326, 1.4679634411686973865),
        (4, 3.326, 0.54141495888474603215),
        (10, 7.5, 0.51226533907676107917),
        (64, 30.0, 4.2934827245697254547e-13),
        (2, 50.0, 2.8164306402451940548e+20),
        (0, 50.0, 2.9325537838493363267e+20),
        (1, 50.0, 2.9030785901035567968e+20),
        (0, 25.0, 5774560606.4663103158),
        (5, 25.0, 3472466208.7419167348),
        (20, 5.0, 5.0242393579718059921e-11),
        (0, 300.0, 4.4758473679350521181e+128),
        (3, 100.0, 1.0262740175651900583e+42),
    ];

    #[test]
    fn k_matches_reference_table() {
        for &(x, k0, k1) in K_TABLE {
            assert!(rel(bessel_k(0, x).unwrap(), k0) < 1e-13, "K0({x})");
            assert!(rel(bessel_k(1, x).unwrap(), k1) < 1e-13, "K1({x})");
        }
    }

    #[test]
    fn i_matches_reference_table() {
        for &(n, x, v) in I_TABLE {
            let got = bessel_i(n, x).unwrap();
            assert!(rel(got, v) < 1e-13, "I{n}({x}) = {got} vs {v}");
        }
    }

    #[test]
    fn constant_terms_at_zero() {
        assert_eq!(bessel_i(0, 0.0).unwrap(), 1.0);
        assert_eq!(bessel_i(1, 0.0).unwrap(), 0.0);
        assert!((k0_regular(0.0) + EULER_GAMMA).abs() < 1e-16);
        assert_eq!(k1_regular(0.0), 0.0);
    }

    #[test]
    fn domain_and_range_errors() {
        assert!(matches!(bessel_k(0, 0.0), Err(SpecialFnError::Domain(_))));
        assert!(matches!(bessel_k(1, -1.0), Err(SpecialFnError::Domain(_))));
        assert!(matches!(bessel_i(0, 701.0), Err(SpecialFnError::Overflow(_))));
        assert!(matches!(bessel_i(65, 1.0), Err(SpecialFnError::Order(65))));
        assert!(matches!(bessel_k(2, 1.0), Err(SpecialFnError::Order(2))));
    }

    #[test]
    fn branches_agree_at_switch_points() {
        let (i0, i1, k0_reg, k1_reg) = small_arg_series(2.0);
        let (k0, k1) = k01_cf(2.0);
        assert!((k0_reg - k0).abs() < 1e-15);
        assert!((k1_reg - (k1 - 0.5)).abs() < 1e-15);
        assert!(rel(i0 * (-2f64).exp(), i_scaled_series(0, 2.0)) < 1e-15);
        assert!(rel(i1 * (-2f64).exp(), i_scaled_series(1, 2.0)) < 1e-15);
        let series = i_scaled_series(1, 20.0);
        let asym = i0_scaled_asymptotic(20.0) * i_ratio_cf(0, 20.0);
        assert!(rel(series, asym) < 1e-14);
    }

    #[test]
    fn ratio_is_finite_for_huge_arguments() {
        let r = bessel_i_ratio(0, 2000.0).unwrap();
        assert!(r < 1.0 && r > 0.999);
        assert!(rel(bessel_i_ratio(0, 1.0).unwrap(), 0.44638996589653450705) < 1e-14);
    }
}
