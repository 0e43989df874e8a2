//! Browser bindings: patch geometry, one decoded sampling cycle, and the overhead table.
//! Each binding returns a JSON string; the plain functions are usable natively.

use cccs_core::decoder::{classify_residual, residual, Decoder, ResidualClass};
use cccs_core::noise::{extract_syndrome, sample_errors, ErrorModel};
use cccs_core::region::{build_simplified_region, CodeFamily, SimplifiedRegion};
use cccs_core::resources::overheads;
use cccs_core::{Color, Result};
use serde::Serialize;
use wasm_bindgen::prelude::*;

/// Largest distance the page may request; keeps a cycle interactive.
pub const MAX_DISTANCE: usize = 9;

#[derive(Serialize)]
struct PatchFace {
    color: Color,
    corners: Vec<[f64; 2]>,
}

#[derive(Serialize)]
struct Patch {
    code: CodeFamily,
    d: usize,
    vertices: Vec<[f64; 2]>,
    faces: Vec<PatchFace>,
}

#[derive(Serialize)]
struct Marked {
    id: usize,
    x: f64,
    y: f64,
    t: usize,
}

#[derive(Serialize)]
struct CycleView {
    code: CodeFamily,
    d: usize,
    layers: usize,
    errors: Vec<Marked>,
    correction: Vec<Marked>,
    flipped: Vec<Marked>,
    color: Option<Color>,
    logical: bool,
}

fn check_distance(d: usize) -> Result<()> {
    if d > MAX_DISTANCE {
        return Err(cccs_core::Error::InvalidInput(format!("distance {d} exceeds the demo limit {MAX_DISTANCE}")));
    }
    Ok(())
}

/// Geometry of the triangular color-code patch used by the CCCS regions.
pub fn patch_json(code: &str, d: usize) -> Result<String> {
    check_distance(d)?;
    let code: CodeFamily = code.parse()?;
    let region = build_simplified_region(code, d, 1)?;
    let patch = region
        .patch
        .as_ref()
        .ok_or_else(|| cccs_core::Error::Unsupported("rtcs regions have no color-code patch".into()))?;
    let faces = patch
        .faces
        .iter()
        .map(|f| PatchFace { color: f.color, corners: f.cycle.iter().map(|&v| patch.vertices[v].pos).collect() })
        .collect();
    let out = Patch { code, d, vertices: patch.vertices.iter().map(|v| v.pos).collect(), faces };
    Ok(serde_json::to_string(&out).expect("patch serializes"))
}

fn mark(region: &SimplifiedRegion, ids: &[usize]) -> Vec<Marked> {
    ids.iter()
        .map(|&q| {
            let qb = &region.graph.qubits[q];
            Marked { id: q, x: qb.pos[0], y: qb.pos[1], t: qb.t }
        })
        .collect()
}

/// Samples cycle `index` at physical rate `p`, decodes it and classifies the residual.
pub fn decode_cycle_json(code: &str, d: usize, half_span: usize, p: f64, seed: u64, index: u64) -> Result<String> {
    check_distance(d)?;
    let code: CodeFamily = code.parse()?;
    let region = build_simplified_region(code, d, half_span)?;
    let decoder = Decoder::new(&region)?;
    let model = ErrorModel::from_p_phys(p)?;
    let errors = sample_errors(&region, &model, seed, index);
    let syndrome = extract_syndrome(&region, &errors);
    let decoded = decoder.decode(&region, &syndrome)?;
    let class = classify_residual(&region, &residual(&errors, &decoded.correction))?;
    let flipped = syndrome
        .iter()
        .map(|&k| {
            let c = &region.checks[k];
            let (x, y) = c.support.iter().fold((0.0, 0.0), |(x, y), &q| {
                let pos = region.graph.qubits[q].pos;
                (x + pos[0], y + pos[1])
            });
            let n = c.support.len() as f64;
            Marked { id: k, x: x / n, y: y / n, t: c.t }
        })
        .collect();
    let view = CycleView {
        code,
        d,
        layers: region.num_layers(),
        errors: mark(&region, &errors),
        correction: mark(&region, &decoded.correction),
        flipped,
        color: decoded.color,
        logical: class == ResidualClass::Logical,
    };
    Ok(serde_json::to_string(&view).expect("cycle serializes"))
}

/// Leading-order overheads for all three families.
pub fn overhead_table_json() -> Result<String> {
    let rows = CodeFamily::ALL.into_iter().map(overheads).collect::<Result<Vec<_>>>()?;
    Ok(serde_json::to_string(&rows).expect("rows serialize"))
}

fn to_js<T>(r: Result<T>) -> std::result::Result<T, JsError> {
    r.map_err(|e| JsError::new(&e.to_string()))
}

#[wasm_bindgen]
pub fn patch(code: &str, d: usize) -> std::result::Result<String, JsError> {
    to_js(patch_json(code, d))
}

#[wasm_bindgen(js_name = decodeCycle)]
pub fn decode_cycle(code: &str, d: usize, half_span: usize, p: f64, seed: u64, index: u64) -> std::result::Result<String, JsError> {
    to_js(decode_cycle_json(code, d, half_span, p, seed, index))
}

#[wasm_bindgen(js_name = overheadTable)]
pub fn overhead_table() -> std::result::Result<String, JsError> {
    to_js(overhead_table_json())
}
