//! Browser bindings. The `demo_*` functions hold the logic and run
//! natively; the exported wrappers only convert errors for JavaScript.

use multres::driver::resolve_plane_curve;
use multres::elimination::elim_report;
use multres::json::canonical;
use multres::poly::format_rational;
use multres::{parse, Generator, Grid, MonicPoly, ReesAlgebra, RingCtx};
use serde_json::json;
use wasm_bindgen::prelude::*;

/// Largest box edge the page accepts, to keep the sampled grid small.
const MAX_EDGE: i64 = 6;

pub fn demo_resolve_curve(poly: &str) -> Result<String, String> {
    let ring = RingCtx::parse("Q[x,y]").map_err(|e| e.to_string())?;
    let f = parse(poly, &ring).map_err(|e| e.to_string())?;
    let r = resolve_plane_curve(&f).map_err(|e| e.to_string())?;
    Ok(canonical(&json!({
        "outcome": r.report.summary["outcome"],
        "blowups": r.blowups,
        "sequences": r.report.summary["sequences"],
        "leaves": r.report.summary["leaves"],
        "indicators": r.report.indicators,
    })))
}

pub fn demo_elimination(ring: &str, monic: &str, var: &str) -> Result<String, String> {
    let base = RingCtx::parse(ring).map_err(|e| e.to_string())?;
    let f = MonicPoly::parse(monic, var, &base).map_err(|e| e.to_string())?;
    elim_report(&f).map(|v| canonical(&v)).map_err(|e| e.to_string())
}

/// `generators` holds one `poly : weight` per line.
pub fn demo_sing_grid(ring: &str, generators: &str, lo: i64, hi: i64) -> Result<String, String> {
    if lo > hi || hi - lo > MAX_EDGE {
        return Err(format!("grid edge must be between 0 and {MAX_EDGE}"));
    }
    let ring = RingCtx::parse(ring).map_err(|e| e.to_string())?;
    let mut gens = Vec::new();
    for line in generators.lines().map(str::trim).filter(|l| !l.is_empty()) {
        let (poly, weight) = line.rsplit_once(':').ok_or_else(|| format!("`{line}` is not poly : weight"))?;
        let weight: u32 = weight.trim().parse().map_err(|_| format!("bad weight in `{line}`"))?;
        gens.push(Generator::new(parse(poly, &ring).map_err(|e| e.to_string())?, weight));
    }
    let g = ReesAlgebra::new(&ring, gens).map_err(|e| e.to_string())?;
    let points = g.sing_on_grid(&Grid::Box { lo, hi }).map_err(|e| e.to_string())?;
    let sing = g.sing_generators().map_err(|e| e.to_string())?;
    Ok(canonical(&json!({
        "sing_generators": sing.generators.iter().map(ToString::to_string).collect::<Vec<_>>(),
        "points": points.iter().map(|p| p.iter().map(format_rational).collect::<Vec<_>>()).collect::<Vec<_>>(),
    })))
}

#[wasm_bindgen]
pub fn resolve_curve(poly: &str) -> Result<String, JsError> {
    demo_resolve_curve(poly).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn elimination(ring: &str, monic: &str, var: &str) -> Result<String, JsError> {
    demo_elimination(ring, monic, var).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn sing_grid(ring: &str, generators: &str, lo: i32, hi: i32) -> Result<String, JsError> {
    demo_sing_grid(ring, generators, lo.into(), hi.into()).map_err(|e| JsError::new(&e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn demo_operations() {
        let v: serde_json::Value = serde_json::from_str(&demo_resolve_curve("y^2 - x^4").unwrap()).unwrap();
        assert_eq!(v["sequences"][0]["sequence"], json!([2, 2, 1]));
        let v: serde_json::Value = serde_json::from_str(&demo_elimination("Q[x,y]", "Z^2 - x^2*y", "Z").unwrap()).unwrap();
        assert_eq!(v["generators"][0]["poly"], "-x^2*y");
        let v: serde_json::Value =
            serde_json::from_str(&demo_sing_grid("Q[x,y,z]", "z^2 - x^2*y : 2\n", -1, 1).unwrap()).unwrap();
        assert_eq!(v["points"].as_array().unwrap().len(), 3);
        assert!(demo_sing_grid("Q[x]", "x : 1", -5, 5).is_err());
        assert!(demo_resolve_curve("y^2 -").is_err());
    }
}
