//! Python bindings: linear theory, interface construction and full runs.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use tumorbim::cli::{cmd_simulate, config_from_value, CliError};
use tumorbim::curvegeom::{Curve, MarkerCurve, ModePhase};
use tumorbim::lintheory::{self, LinParams};
use tumorbim::specialfn::grid;

fn value_err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// Radius of the stable circular tumor for apoptosis ratio `a`.
#[pyfunction]
fn steady_radius(a: f64) -> PyResult<f64> {
    lintheory::steady_radius(a).map_err(value_err)
}

/// Circle growth rate `dR/dt`.
#[pyfunction]
fn radius_rate(r: f64, a: f64) -> f64 {
    lintheory::radius_rate(r, a)
}

/// Linear growth rate of the shape factor of mode `l`.
#[pyfunction]
fn shape_growth_rate(r: f64, l: u32, a: f64, lam: f64, s_inv: f64) -> PyResult<f64> {
    lintheory::bracket(r, l, &LinParams { a, lambda: lam, s_inv }).map_err(value_err)
}

#[pyfunction]
fn marginal_s_inv(l: u32, a: f64, r: f64, lam: f64) -> PyResult<f64> {
    lintheory::marginal_s_inv(l, a, r, lam).map_err(value_err)
}

#[pyfunction]
fn self_similar_a(r: f64, l: u32, lam: f64, s_inv: f64) -> PyResult<f64> {
    lintheory::self_similar_a(r, l, lam, s_inv).map_err(value_err)
}

/// Equal-arclength markers of `r = r0 + sum a trig(l α)`; modes are
/// `(l, a, "cos" | "sin")`. Returns `(alpha, x, y, kappa)`.
#[pyfunction]
#[allow(clippy::type_complexity)]
fn perturbed_circle(n: usize, r0: f64, modes: Vec<(u32, f64, String)>) -> PyResult<(Vec<f64>, Vec<f64>, Vec<f64>, Vec<f64>)> {
    let modes = modes
        .into_iter()
        .map(|(l, a, ph)| match ph.as_str() {
            "cos" => Ok((l, a, ModePhase::Cos)),
            "sin" => Ok((l, a, ModePhase::Sin)),
            other => Err(value_err(format!("phase must be cos or sin, got {other}"))),
        })
        .collect::<PyResult<Vec<_>>>()?;
    let c = Curve::from_markers(&MarkerCurve::polar(n, r0, &modes).points).map_err(value_err)?;
    let pts = c.reconstruct().points;
    Ok((grid(n), pts.iter().map(|p| p[0]).collect(), pts.iter().map(|p| p[1]).collect(), c.curvature()))
}

/// Runs a simulation from a JSON config string (same schema as the CLI) and
/// returns the diagnostics rows
/// `(t, R_eff, area, length, shape_factor, A, nutrient_iters, stokes_iters)`.
/// Output files go to the config's `output_dir`.
#[pyfunction]
#[allow(clippy::type_complexity)]
fn simulate(py: Python<'_>, config_json: &str) -> PyResult<Vec<(f64, f64, f64, f64, f64, f64, usize, usize)>> {
    let value = serde_json::from_str(config_json).map_err(value_err)?;
    let config = config_from_value(value).map_err(value_err)?;
    let rows = py.detach(|| cmd_simulate(&config)).map_err(|e| match e {
        CliError::Config(c) => value_err(c),
        other => PyRuntimeError::new_err(other.to_string()),
    })?;
    Ok(rows
        .iter()
        .map(|r| (r.t, r.r_eff, r.area, r.length, r.shape_factor, r.a, r.gmres_nutrient_iters, r.gmres_stokes_iters))
        .collect())
}

#[pymodule]
#[pyo3(name = "tumorbim")]
fn tumorbim_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(steady_radius, m)?)?;
    m.add_function(wrap_pyfunction!(radius_rate, m)?)?;
    m.add_function(wrap_pyfunction!(shape_growth_rate, m)?)?;
    m.add_function(wrap_pyfunction!(marginal_s_inv, m)?)?;
    m.add_function(wrap_pyfunction!(self_similar_a, m)?)?;
    m.add_function(wrap_pyfunction!(perturbed_circle, m)?)?;
    m.add_function(wrap_pyfunction!(simulate, m)?)?;
    Ok(())
}
