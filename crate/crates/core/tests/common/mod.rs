//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tumorbim::curvegeom::{Curve, MarkerCurve, ModePhase};
use tumorbim::evolver::{run, EvolverOptions, RunOptions, Trajectory};
use tumorbim::membrane::{bending_force, nu_and_derivatives, BendingModel};
use tumorbim::specialfn::{derivative, grid};
use tumorbim::stokesbim::TumorModel;

/// Plain power series for `(I_0(x), I_1(x))`, adequate for `x < 10`.
pub fn i01(x: f64) -> (f64, f64) {
    let q = 0.25 * x * x;
    let (mut t0, mut t1) = (1.0, 0.5 * x);
    let (mut s0, mut s1) = (t0, t1);
    for k in 1..80 {
        let k = k as f64;
        t0 *= q / (k * k);
        t1 *= q / (k * (k + 1.0));
        s0 += t0;
        s1 += t1;
    }
    (s0, s1)
}

pub fn ratio10(x: f64) -> f64 {
    let (a, b) = i01(x);
    b / a
}

/// Circle radius under `dR/dt = I1/I0 - A R/2`, classical RK4 with fixed `dt`.
pub fn radius_rk4(r0: f64, a: f64, t_final: f64, dt: f64) -> f64 {
    let f = |r: f64| ratio10(r) - 0.5 * a * r;
    let steps = (t_final / dt).round() as usize;
    let h = t_final / steps as f64;
    let mut r = r0;
    for _ in 0..steps {
        let k1 = f(r);
        let k2 = f(r + 0.5 * h * k1);
        let k3 = f(r + 0.5 * h * k2);
        let k4 = f(r + h * k3);
        r += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    r
}

/// `½ ∮ ν(κ) κ² ds` of a marker curve in its own parametrization.
pub fn energy(points: &[[f64; 2]], model: &BendingModel) -> f64 {
    let n = points.len();
    let xs: Vec<f64> = points.iter().map(|p| p[0]).collect();
    let ys: Vec<f64> = points.iter().map(|p| p[1]).collect();
    let (x1, y1) = (derivative(&xs, 1), derivative(&ys, 1));
    let (x2, y2) = (derivative(&xs, 2), derivative(&ys, 2));
    let h = 2.0 * std::f64::consts::PI / n as f64;
    (0..n)
        .map(|j| {
            let sp = x1[j].hypot(y1[j]);
            let k = (x1[j] * y2[j] - x2[j] * y1[j]) / sp.powi(3);
            0.5 * nu_and_derivatives(k, model).0 * k * k * sp * h
        })
        .sum()
}

fn random_curve(rng: &mut ChaCha8Rng, n: usize) -> (Curve, Vec<f64>) {
    let modes: Vec<(u32, f64, ModePhase)> = (2..=4)
        .flat_map(|l| {
            [(l, rng.gen_range(-0.06..0.06), ModePhase::Cos), (l, rng.gen_range(-0.06..0.06), ModePhase::Sin)]
        })
        .collect();
    let m = MarkerCurve::polar(n, rng.gen_range(0.8..1.5), &modes);
    let c = Curve::from_markers(&m.points).unwrap();
    let a: Vec<f64> = (0..3).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let psi = grid(n)
        .into_iter()
        .map(|t| 1.0 + a[0] * t.cos() + a[1] * (2.0 * t).sin() + a[2] * (3.0 * t).cos())
        .collect();
    (c, psi)
}

/// Relative mismatch between `dE/dε` (Richardson-extrapolated central
/// differences along `ψ n`) and `-∮ f ψ ds`, for three random curves.
pub fn energy_variation_errors(model: &BendingModel, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = 512;
    (0..3)
        .map(|_| {
            let (c, psi) = random_curve(&mut rng, n);
            let g = c.geometry();
            let moved = |eps: f64| -> f64 {
                let pts: Vec<[f64; 2]> = (0..n)
                    .map(|j| {
                        [g.points[j][0] + eps * psi[j] * g.normal[j][0], g.points[j][1] + eps * psi[j] * g.normal[j][1]]
                    })
                    .collect();
                energy(&pts, model)
            };
            let fd = |e: f64| (moved(e) - moved(-e)) / (2.0 * e);
            let e = 1e-5;
            let dedeps = (4.0 * fd(e / 2.0) - fd(e)) / 3.0;
            let f = bending_force(&c, model);
            let predicted: f64 = -(0..n).map(|j| f[j] * psi[j]).sum::<f64>() * g.h() * g.s_alpha;
            (dedeps - predicted).abs() / predicted.abs()
        })
        .collect()
}

pub fn polar_curve(n: usize, r0: f64, modes: &[(u32, f64, ModePhase)]) -> Curve {
    Curve::from_markers(&MarkerCurve::polar(n, r0, modes).points).unwrap()
}

/// Runs `steps` steps and returns the diagnostics (one row per step, including
/// the initial and final states) plus the final curve.
pub fn evolve(
    curve: Curve,
    model: &mut TumorModel,
    dt: f64,
    steps: usize,
    snapshot_interval: usize,
) -> Result<(Trajectory, Curve), String> {
    let mut traj = Trajectory::default();
    let state = run(curve, model, &EvolverOptions::new(dt), &RunOptions { n_steps: steps, snapshot_interval }, &mut traj)
        .map_err(|e| e.to_string())?;
    Ok((traj, state.curve))
}
