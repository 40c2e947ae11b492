use std::f64::consts::PI;

use tumorbim::curvegeom::{Curve, Geometry, MarkerCurve, ModePhase};
use tumorbim::singquad::{
    kress_weights, log_quadrature, split_modified_helmholtz_double, split_modified_helmholtz_single,
    split_stokeslet_log, stokeslet_rational, stresslet_normal, assemble_modified_helmholtz,
};
use tumorbim::specialfn::{bessel01, grid};

fn fine_curve() -> Geometry {
    let shape = [(3, 0.12, ModePhase::Cos), (2, 0.06, ModePhase::Sin)];
    Curve::from_markers(&MarkerCurve::polar(1024, 1.4, &shape).points).unwrap().geometry()
}

/// Limit at zero separation from symmetric averages at offsets 1, 2, 4 (even series in the offset).
fn richardson(f: impl Fn(usize) -> f64) -> f64 {
    let (a, b, c) = (f(1), f(2), f(4));
    let r1 = (4.0 * a - b) / 3.0;
    let r2 = (4.0 * b - c) / 3.0;
    (16.0 * r1 - r2) / 15.0
}

fn sym(g: &Geometry, i: usize, k: usize, f: &dyn Fn(usize, usize) -> f64) -> f64 {
    let n = g.n();
    0.5 * (f((i + k) % n, i) + f((i + n - k) % n, i))
}

#[test]
fn weight_sum_matches_dense_oracle() {
    // int_0^pi ln(2 sin(t/2)) = (pi ln pi - pi) + int_0^pi ln(2 sin(t/2) / t), the latter smooth
    let m = 1_000_000;
    let h = PI / m as f64;
    let smooth: f64 = (0..m)
        .map(|j| {
            let t = (j as f64 + 0.5) * h;
            (2.0 * (0.5 * t).sin() / t).ln()
        })
        .sum::<f64>()
        * h;
    let half = PI * PI.ln() - PI + smooth;
    assert!(half.abs() < 1e-10, "{half:e}");
    for m in [4, 16, 64] {
        assert!(kress_weights(m).q().iter().sum::<f64>().abs() < 1e-12);
    }
}

#[test]
fn log_quadrature_is_spectral() {
    // 1/(1 - r cos t) = (1 + 2 sum q^k cos kt) / sqrt(1 - r^2) and ln|2 sin(t/2)| = -sum cos(kt)/k
    let r: f64 = 0.5;
    let q = (1.0 - (1.0 - r * r).sqrt()) / r;
    let exact: f64 = (1..200).map(|k| -2.0 * PI * q.powi(k) / k as f64).sum::<f64>() / (1.0 - r * r).sqrt();
    let errs: Vec<f64> = [8usize, 16, 32]
        .iter()
        .map(|&n| {
            let f: Vec<f64> = grid(n).iter().map(|t| 1.0 / (1.0 - r * t.cos())).collect();
            (log_quadrature(&f, 0, &kress_weights(n / 2)) - exact).abs()
        })
        .collect();
    for w in errs.windows(2) {
        assert!(w[1] < 1e-13 || w[0] / w[1] >= 10.0, "{errs:?}");
    }
}

#[test]
fn single_layer_diagonal_matches_extrapolation() {
    let g = fine_curve();
    for i in [0, 100, 517] {
        let lim = richardson(|k| sym(&g, i, k, &|s, t| split_modified_helmholtz_single(&g, s, t).g2));
        let d = split_modified_helmholtz_single(&g, i, i).g2;
        assert!((lim - d).abs() < 1e-8, "{lim} {d}");
    }
}

#[test]
fn double_layer_diagonal_matches_extrapolation_and_closed_form() {
    let g = fine_curve();
    for i in [0, 100, 517] {
        let lim = richardson(|k| sym(&g, i, k, &|s, t| split_modified_helmholtz_double(&g, s, t).g2));
        let d = split_modified_helmholtz_double(&g, i, i).g2;
        assert!((lim - d).abs() < 1e-8, "{lim} {d}");
    }
    let c = Curve::circle(64, 2.5, [0.0, 0.0]).unwrap().geometry();
    assert!((split_modified_helmholtz_double(&c, 3, 3).g2 + 1.0 / (4.0 * PI)).abs() < 1e-15);
}

#[test]
fn stokeslet_and_stresslet_diagonals_match_extrapolation() {
    let g = fine_curve();
    for i in [0, 333] {
        let lim = richardson(|k| sym(&g, i, k, &|s, t| split_stokeslet_log(&g, s, t).g2));
        assert!((lim - split_stokeslet_log(&g, i, i).g2).abs() < 1e-8);
        for (a, b) in [(0, 0), (0, 1), (1, 1)] {
            let lim = richardson(|k| sym(&g, i, k, &|s, t| stokeslet_rational(&g, s, t)[a][b]));
            assert!((lim - stokeslet_rational(&g, i, i)[a][b]).abs() < 1e-8);
            let lim = richardson(|k| sym(&g, i, k, &|s, t| stresslet_normal(&g, s, t)[a][b]));
            let d = stresslet_normal(&g, i, i)[a][b];
            assert!((lim - d).abs() < 1e-8, "{lim} {d}");
        }
    }
}

#[test]
fn split_reproduces_raw_double_layer() {
    let g = fine_curve();
    for (i, j) in [(0, 1), (10, 600), (1000, 3)] {
        let d = [g.points[j][0] - g.points[i][0], g.points[j][1] - g.points[i][1]];
        let r = d[0].hypot(d[1]);
        let raw = -bessel01(r).k1 * (d[0] * g.normal[j][0] + d[1] * g.normal[j][1]) / (2.0 * PI * r) * g.s_alpha;
        let l = tumorbim::singquad::log_sin(g.n(), i, j);
        assert!((split_modified_helmholtz_double(&g, j, i).combine(l) - raw).abs() < 1e-12);
    }
}

#[test]
fn stresslet_is_odd_in_separation() {
    let g = fine_curve();
    // T(-x) = -T(x): swapping source and target with the same normal flips the sign
    let (i, j) = (5, 300);
    let d = [g.points[j][0] - g.points[i][0], g.points[j][1] - g.points[i][1]];
    let r2 = d[0] * d[0] + d[1] * d[1];
    let n = g.normal[j];
    let t = |s: f64| -4.0 * (s * d[0]) * (s * d[0]) * (s * d[0] * n[0] + s * d[1] * n[1]) / (r2 * r2);
    assert_eq!(t(-1.0), -t(1.0));
    assert!((stresslet_normal(&g, j, i)[0][0] - g.s_alpha * t(1.0)).abs() < 1e-12 * t(1.0).abs().max(1.0));
}

#[test]
fn single_layer_of_unit_density_on_unit_circle() {
    let c = Curve::circle(128, 1.0, [0.0, 0.0]).unwrap().geometry();
    let ops = assemble_modified_helmholtz(&c, &kress_weights(64));
    let v = ops.single.matvec(&vec![1.0; 128]);
    let b = bessel01(1.0);
    // Graf: the angular mean of K0(|x - x'|) on a circle of radius R is I0(R) K0(R)
    assert!(v.iter().all(|x| (x + b.i0 * b.k0).abs() < 1e-13));
}
