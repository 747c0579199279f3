//! Browser bindings: torus boundary jets, the Liouville decay table and a
//! manufactured convergence study. Each export returns a JSON string.

use ansl::degenerate::{
    estimate_ratio, liouville_limit_check, solve_model, DegenerateMesh, DegenerateProblem, Domain, LiouvilleData,
    NormKind,
};
use ansl::fixtures::torus_fixture;
use ansl::jet::{jet_recursion, mean_curvature_jet, Field};
use serde_json::json;
use wasm_bindgen::prelude::*;

pub const MAX_LIOUVILLE_RADIUS: f64 = 32.0;
pub const MAX_STUDY_MESH: usize = 512;

/// `∂_t^m` of `L, M, N, H` at the boundary of the `(a, R)` torus.
pub fn torus_jet_json(a: f64, r: f64, order: usize) -> Result<String, String> {
    let fx = torus_fixture(a, r).map_err(|e| e.to_string())?;
    let chart = fx.chart(8, 16).map_err(|e| e.to_string())?;
    let jet = jet_recursion(&chart, order).map_err(|e| e.to_string())?;
    let h = mean_curvature_jet(&jet, &chart).map_err(|e| e.to_string())?;
    let first = |f: Field| -> Vec<f64> { (0..=order).filter_map(|m| jet.derivative(f, m).map(|v| v[0])).collect() };
    let h0: Vec<f64> = h.iter().map(|v| v[0]).collect();
    Ok(json!({
        "a": a, "R": r, "order": order,
        "L": first(Field::L), "M": first(Field::M), "N": first(Field::N), "H": h0,
    })
    .to_string())
}

pub fn liouville_json(c: f64, radii: &[f64]) -> Result<String, String> {
    if radii.iter().any(|&r| !(r > 0.0 && r <= MAX_LIOUVILLE_RADIUS)) {
        return Err(format!("radii must lie in (0, {MAX_LIOUVILLE_RADIUS}]"));
    }
    let table = liouville_limit_check(c, radii, LiouvilleData::YCosX).map_err(|e| e.to_string())?;
    serde_json::to_string(&table).map_err(|e| e.to_string())
}

/// Max error and `I_2` ratio of `e^{-t} cos s` for meshes `16, 32, …, n_max`.
pub fn degenerate_study_json(a: f64, n_max: usize) -> Result<String, String> {
    if !(16..=MAX_STUDY_MESH).contains(&n_max) {
        return Err(format!("n_max must lie in [16, {MAX_STUDY_MESH}]"));
    }
    let domain = Domain::Periodic {
        period: 2.0 * std::f64::consts::PI,
        t_max: 8.0,
    };
    let problem = DegenerateProblem::manufactured(a, 1, domain);
    let mut rows = Vec::new();
    let mut n = 16;
    while n <= n_max {
        let sol = solve_model(&problem, DegenerateMesh { n_s: n, n_tau: n }).map_err(|e| e.to_string())?;
        let ratio = estimate_ratio(&sol, NormKind::Lp { p: 2.0 }).map_err(|e| e.to_string())?;
        rows.push(json!({ "n": n, "error": sol.max_error(&problem), "i2_ratio": ratio }));
        n *= 2;
    }
    Ok(json!({ "a": a, "rows": rows }).to_string())
}

fn js(r: Result<String, String>) -> Result<String, JsError> {
    r.map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = torusJet)]
pub fn torus_jet(a: f64, r: f64, order: usize) -> Result<String, JsError> {
    js(torus_jet_json(a, r, order))
}

#[wasm_bindgen]
pub fn liouville(c: f64, radii: Vec<f64>) -> Result<String, JsError> {
    js(liouville_json(c, &radii))
}

#[wasm_bindgen(js_name = degenerateStudy)]
pub fn degenerate_study(a: f64, n_max: usize) -> Result<String, JsError> {
    js(degenerate_study_json(a, n_max))
}
