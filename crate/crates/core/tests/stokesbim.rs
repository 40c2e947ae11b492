use std::f64::consts::PI;

use tumorbim::curvegeom::{Curve, MarkerCurve, ModePhase};
use tumorbim::linalg::GmresOptions;
use tumorbim::membrane::BendingModel;
use tumorbim::nutrientbim::solve_nutrient;
use tumorbim::singquad::{assemble_stresslet, kress_weights, stresslet_apply};
use tumorbim::stokesbim::{force_term, slip_velocity, solve_interface, stress_jump, PhysParams, SolverOptions};
use tumorbim::specialfn::bessel_i_ratio;

fn circle_v_error(n: usize, r: f64, lambda: f64, s_inv: f64, a: f64) -> (f64, f64) {
    let c = Curve::circle(n, r, [0.0, 0.0]).unwrap();
    let params = PhysParams::new(a, lambda).unwrap();
    let bending = BendingModel::uniform(s_inv).unwrap();
    let (_, st) = solve_interface(&c, &params, &bending, &SolverOptions::default()).unwrap();
    let exact = bessel_i_ratio(0, r).unwrap() - a * r / 2.0;
    let mean = st.v.iter().sum::<f64>() / n as f64;
    let spread = st.v.iter().map(|v| (v - mean).abs()).fold(0.0, f64::max);
    let err = st.v.iter().map(|v| (v - exact).abs()).fold(0.0, f64::max);
    (spread, err)
}

#[test]
fn circle_velocity_is_independent_of_viscosity_and_bending() {
    for lambda in [0.5, 1.0, 2.5] {
        for s_inv in [0.001, 2.0] {
            for a in [0.0, 0.5] {
                let (spread, err) = circle_v_error(256, 2.0, lambda, s_inv, a);
                assert!(spread < 1e-8, "spread {spread:e} at {lambda} {s_inv} {a}");
                assert!(err < 1e-6, "err {err:e} at {lambda} {s_inv} {a}");
            }
        }
    }
}

#[test]
fn steady_circle_is_stationary() {
    let (_, err) = circle_v_error(128, 3.326, 1.5, 2.0, 0.5);
    let r = 3.326;
    let v = bessel_i_ratio(0, r).unwrap() - 0.5 * r / 2.0;
    assert!(v.abs() < 1e-3 && err < 1e-8);
}

#[test]
fn unit_viscosity_ratio_needs_no_iterations() {
    let c = Curve::circle(64, 1.0, [0.0, 0.0]).unwrap();
    let params = PhysParams::new(0.3, 1.0).unwrap();
    let (_, st) = solve_interface(&c, &params, &BendingModel::uniform(1.0).unwrap(), &SolverOptions::default()).unwrap();
    assert_eq!(st.report.iterations, 0);
    for (v, f) in st.v2.iter().zip(&st.force) {
        assert!((v[0] - f[0] / 2.0).abs() < 1e-15 && (v[1] - f[1] / 2.0).abs() < 1e-15);
    }
}

#[test]
fn stresslet_eigenrelations_on_circle() {
    let n = 64;
    let c = Curve::circle(n, 1.7, [0.4, -0.2]).unwrap();
    let g = c.geometry();
    let normal = g.normal.clone();
    let constant = vec![[0.3, -1.1]; n];
    for i in [0, 13, 40] {
        let dn = stresslet_apply(&g, &normal, i);
        assert!((dn[0] - normal[i][0] / 2.0).abs() < 1e-13 && (dn[1] - normal[i][1] / 2.0).abs() < 1e-13);
        let dc = stresslet_apply(&g, &constant, i);
        assert!((dc[0] + 0.15).abs() < 1e-13 && (dc[1] - 0.55).abs() < 1e-13);
    }
}

#[test]
fn stresslet_matches_refined_quadrature_on_perturbed_curve() {
    let shape = [(3, 0.15, ModePhase::Cos), (2, 0.05, ModePhase::Sin)];
    let coarse = Curve::from_markers(&MarkerCurve::polar(128, 1.3, &shape).points).unwrap();
    let fine = Curve::from_markers(&MarkerCurve::polar(512, 1.3, &shape).points).unwrap();
    let (gc, gf) = (coarse.geometry(), fine.geometry());
    // density c n with c smooth along the curve
    let dens = |g: &tumorbim::curvegeom::Geometry| -> Vec<[f64; 2]> {
        g.points.iter().zip(&g.normal).map(|(p, nn)| {
            let w = 1.0 + 0.3 * p[0];
            [w * nn[0], w * nn[1]]
        }).collect()
    };
    let (dc, df) = (dens(&gc), dens(&gf));
    // marker 0 is the same physical point on both grids
    let a = stresslet_apply(&gc, &dc, 0);
    let b = stresslet_apply(&gf, &df, 0);
    assert!((a[0] - b[0]).abs() < 1e-10 && (a[1] - b[1]).abs() < 1e-10, "{a:?} {b:?}");
}

#[test]
fn force_term_is_radial_and_zero_for_zero_data() {
    let c = Curve::circle(64, 2.0, [0.0, 0.0]).unwrap();
    let g = c.geometry();
    let w = kress_weights(32);
    let d = assemble_stresslet(&g);
    let zero = vec![[0.0; 2]; 64];
    assert!(force_term(&g, &w, &d, &zero, &zero).iter().all(|f| f[0] == 0.0 && f[1] == 0.0));
    let nut = solve_nutrient(&c, GmresOptions::default()).unwrap();
    let params = PhysParams::new(0.5, 2.5).unwrap();
    let jump = stress_jump(&c, &nut, &BendingModel::uniform(2.0).unwrap());
    let slip = slip_velocity(&g, &nut, &params);
    let f = force_term(&g, &w, &d, &jump, &slip);
    let radial: Vec<f64> = f.iter().zip(&g.normal).map(|(f, n)| f[0] * n[0] + f[1] * n[1]).collect();
    for (fi, (ri, t)) in f.iter().zip(radial.iter().zip(&g.tangent)) {
        assert!((fi[0] * t[0] + fi[1] * t[1]).abs() < 1e-10);
        assert!((ri - radial[0]).abs() < 1e-10);
    }
    // jump on the circle is normal with the composed magnitude
    let ratio = bessel_i_ratio(0, 2.0).unwrap();
    let mag = -2.0 / (2.0 * 8.0) + 2.0 * (1.0 - ratio / 2.0) - 2.0;
    for (j, n) in jump.iter().zip(&g.normal) {
        assert!((j[0] - mag * n[0]).abs() < 1e-10 && (j[1] - mag * n[1]).abs() < 1e-10);
    }
}

#[test]
fn rotation_equivariance() {
    let shape = [(3, 0.1, ModePhase::Cos)];
    let m = MarkerCurve::polar(64, 1.5, &shape);
    let rot = 0.7f64;
    let (cr, sr) = (rot.cos(), rot.sin());
    let rotated: Vec<[f64; 2]> = m.points.iter().map(|p| [cr * p[0] - sr * p[1], sr * p[0] + cr * p[1]]).collect();
    let params = PhysParams::new(0.2, 0.5).unwrap();
    let bend = BendingModel::uniform(0.5).unwrap();
    let opts = SolverOptions::default();
    let (_, a) = solve_interface(&Curve::from_markers(&m.points).unwrap(), &params, &bend, &opts).unwrap();
    let (_, b) = solve_interface(&Curve::from_markers(&rotated).unwrap(), &params, &bend, &opts).unwrap();
    for (va, vb) in a.v2.iter().zip(&b.v2) {
        let r = [cr * va[0] - sr * va[1], sr * va[0] + cr * va[1]];
        assert!((r[0] - vb[0]).abs() < 1e-10 && (r[1] - vb[1]).abs() < 1e-10);
    }
}

#[test]
fn flux_equals_area_growth_on_circles() {
    for r in [1.0, 2.0, 3.0] {
        let n = 128;
        let c = Curve::circle(n, r, [0.0, 0.0]).unwrap();
        let params = PhysParams::new(0.5, 0.5).unwrap();
        let (_, st) = solve_interface(&c, &params, &BendingModel::uniform(1.0).unwrap(), &SolverOptions::default()).unwrap();
        let flux = st.v.iter().sum::<f64>() * 2.0 * PI / n as f64 * c.s_alpha();
        let exact = 2.0 * PI * r * (bessel_i_ratio(0, r).unwrap() - 0.5 * r / 2.0);
        assert!((flux - exact).abs() < 1e-6);
    }
}

/// Growth rate of `δ/R` read off a slightly perturbed circle: project `V` on
/// `cos lθ` in the polar angle (markers are not uniform in θ).
fn measured_bracket(r: f64, l: u32, eps: f64, params: PhysParams, s_inv: f64) -> f64 {
    let n = 128;
    let m = MarkerCurve::polar(n, r, &[(l, eps, ModePhase::Cos)]);
    let c = Curve::from_markers(&m.points).unwrap();
    let (_, st) = solve_interface(&c, &params, &BendingModel::uniform(s_inv).unwrap(), &SolverOptions::default()).unwrap();
    let g = c.geometry();
    let xs: Vec<f64> = g.points.iter().map(|p| p[0]).collect();
    let ys: Vec<f64> = g.points.iter().map(|p| p[1]).collect();
    let (dx, dy) = (tumorbim::specialfn::derivative(&xs, 1), tumorbim::specialfn::derivative(&ys, 1));
    let h = 2.0 * PI / n as f64;
    let (mut v0, mut vl) = (0.0, 0.0);
    for j in 0..n {
        let (x, y) = (xs[j], ys[j]);
        let dtheta = (x * dy[j] - y * dx[j]) / (x * x + y * y) * h;
        let th = y.atan2(x);
        v0 += st.v[j] * dtheta / (2.0 * PI);
        vl += st.v[j] * (l as f64 * th).cos() * dtheta / PI;
    }
    vl / eps - v0 / r
}

#[test]
fn perturbation_growth_matches_linear_theory() {
    use tumorbim::lintheory::{bracket, LinParams};
    for (lambda, a, s_inv) in [(1.0, 0.0, 0.0), (0.5, 0.5, 2.0), (2.5, 0.2, 0.5)] {
        let params = PhysParams::new(a, lambda).unwrap();
        let got = measured_bracket(2.0, 3, 1e-5, params, s_inv);
        let want = bracket(2.0, 3, &LinParams { a, lambda, s_inv }).unwrap();
        assert!((got - want).abs() < 1e-4, "λ={lambda} A={a} S={s_inv}: {got} vs {want}");
    }
}
