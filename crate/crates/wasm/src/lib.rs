//! wasm-bindgen entry points for the static demo page in `www/`.
//!
//! Each function takes plain numbers, returns JSON text or a number, and
//! reports invalid input as a thrown JS error. A non-finite `r_outer`
//! (e.g. `Infinity`) means no outer wall.

use serde_json::{json, Value};
use shellconf_core::degeneracy::{enumerate_atlas, AtlasOptions};
use shellconf_core::response::{dipole_sublevel, polarizability as dipole};
use shellconf_core::{solve_radial, ConfinementGeometry, GridSpec, OuterRadius, PotentialKind, PotentialModel};
use wasm_bindgen::prelude::*;

/// Grid used by the demo; smaller than the library default to stay interactive.
const DEMO_POINTS: usize = 120;
/// Samples of `u(r)` returned for plotting.
const PLOT_SAMPLES: usize = 400;

fn model(kind: &str, lambda: f64) -> Result<PotentialModel, String> {
    let kind = match kind {
        "coulomb" => PotentialKind::Coulomb,
        "debye" => PotentialKind::Debye,
        "expcos" => PotentialKind::ExpCosine,
        k => return Err(format!("unknown potential '{k}'")),
    };
    PotentialModel::new(kind, 1.0, if kind == PotentialKind::Coulomb { 0.0 } else { lambda }).map_err(|e| e.to_string())
}

fn geometry(r_inner: f64, r_outer: f64) -> Result<ConfinementGeometry, String> {
    let outer = if r_outer.is_finite() { OuterRadius::Finite(r_outer) } else { OuterRadius::Unbounded };
    ConfinementGeometry::new(r_inner, outer).map_err(|e| e.to_string())
}

fn spec() -> GridSpec {
    GridSpec::default().with_points(DEMO_POINTS)
}

/// Energy, node count and a sampled `u(r)` of one state, as JSON.
pub fn state_json(kind: &str, lambda: f64, r_inner: f64, r_outer: f64, ell: u32, state_index: usize) -> Result<Value, String> {
    let g = geometry(r_inner, r_outer)?;
    let m = model(kind, lambda)?;
    let spectrum = solve_radial(&g, &m, ell, state_index + 1, &spec()).map_err(|e| e.to_string())?;
    let s = spectrum.get(state_index).map_err(|e| e.to_string())?;
    // plot window: the box, or where the bound state has decayed
    let hi = r_outer.min(r_inner + 4.0 * ((state_index as f64 + ell as f64 + 1.0).powi(2) + 2.0));
    let r: Vec<f64> = (0..=PLOT_SAMPLES).map(|i| r_inner + (hi - r_inner) * i as f64 / PLOT_SAMPLES as f64).collect();
    let u: Vec<f64> = r.iter().map(|&x| s.u_at(x)).collect();
    Ok(json!({
        "geometry": g.to_string(),
        "regime": g.regime().label(),
        "energy": s.energy,
        "nodes": s.node_count(),
        "r": r,
        "u": u,
    }))
}

/// Dipole polarizability (m-averaged and stretched sublevel), as JSON.
pub fn polarizability_json(kind: &str, lambda: f64, r_inner: f64, r_outer: f64, ell: u32, state_index: usize) -> Result<Value, String> {
    let g = geometry(r_inner, r_outer)?;
    let m = model(kind, lambda)?;
    let resp = dipole(1, ell, state_index, &g, &m, &spec()).map_err(|e| e.to_string())?;
    let stretched = dipole_sublevel(&resp, ell as i32).map_err(|e| e.to_string())?;
    Ok(json!({
        "alpha": resp.total,
        "alpha_stretched": stretched,
        "negative": resp.total < 0.0,
        "channels": resp.per_channel.iter().map(|(l, a)| json!({"ell": l, "alpha": a})).collect::<Vec<_>>(),
    }))
}

/// Degeneracy atlas of the free level `n` (energies only), as JSON rows.
pub fn atlas_json(kind: &str, lambda: f64, n: u32) -> Result<Value, String> {
    if !(1..=6).contains(&n) {
        return Err("the demo atlas is limited to n = 1..6".into());
    }
    let m = model(kind, lambda)?;
    let options = AtlasOptions { spec: spec(), ..AtlasOptions::default() };
    let rows = enumerate_atlas(n, &m, &options).map_err(|e| e.to_string())?;
    Ok(Value::Array(
        rows.iter()
            .map(|r| {
                json!({
                    "serial": r.serial,
                    "state": r.label(),
                    "r_inner": r.geometry.r_inner(),
                    "r_outer": r.geometry.r_outer().finite(),
                    "regime": r.regime.label(),
                    "energy": r.energy,
                })
            })
            .collect(),
    ))
}

fn js(result: Result<Value, String>) -> Result<String, JsError> {
    result.map(|v| v.to_string()).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = solveState)]
pub fn solve_state(kind: &str, lambda: f64, r_inner: f64, r_outer: f64, ell: u32, state_index: usize) -> Result<String, JsError> {
    js(state_json(kind, lambda, r_inner, r_outer, ell, state_index))
}

#[wasm_bindgen(js_name = dipolePolarizability)]
pub fn dipole_polarizability(kind: &str, lambda: f64, r_inner: f64, r_outer: f64, ell: u32, state_index: usize) -> Result<String, JsError> {
    js(polarizability_json(kind, lambda, r_inner, r_outer, ell, state_index))
}

#[wasm_bindgen(js_name = degeneracyAtlas)]
pub fn degeneracy_atlas(kind: &str, lambda: f64, n: u32) -> Result<String, JsError> {
    js(atlas_json(kind, lambda, n))
}
