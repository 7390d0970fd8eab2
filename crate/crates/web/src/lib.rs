//! Browser demo: jet extraction for a chosen κ, the Kan grid of K(V,n) and a
//! small calculator on the phase chart.
//!
//! The `*_text` functions are plain Rust and carry the logic; the exported
//! wrappers only convert errors for JavaScript.

use std::fmt::Write;

use courant_core::cli::kappa_from_str;
use courant_core::graded::{de_rham, parse, ChartScheme};
use courant_core::groupoid::GroupoidChart;
use courant_core::jet::exact_theorem;
use courant_core::phase::{poisson, standard_q};
use courant_core::simplicial::horn_restriction;
use wasm_bindgen::prelude::*;

/// Largest d accepted by the page.
pub const DEMO_MAX_DIM: u8 = 4;
pub const DEMO_MAX_SIMPLEX: u8 = 5;

/// Jet of ω_𝒯 − q_𝒯*ϰ next to ω − ℒιικ for a κ document.
pub fn jet_text(kappa_json: &str) -> Result<String, String> {
    let kappa = kappa_from_str(kappa_json, false).map_err(|e| e.to_string())?;
    if kappa.dim() > DEMO_MAX_DIM {
        return Err(format!("d = {} is above the demo limit {DEMO_MAX_DIM}", kappa.dim()));
    }
    let (e, residual) = exact_theorem(&GroupoidChart::new(kappa.dim()), &kappa).map_err(|e| e.to_string())?;
    let expected = &e.jet - &residual;
    let mut out = String::new();
    let _ = writeln!(out, "kappa          = {}", kappa.form().poly());
    let _ = writeln!(out, "1-Jet(w_T - k) = {}", e.jet);
    let _ = writeln!(out, "w - L i i k    = {expected}");
    let _ = write!(out, "residual       = {residual}");
    Ok(out)
}

/// Horn classes of K(R^dim_v, n) for m = 1..=max_m, one row per m.
pub fn kan_grid_text(dim_v: usize, n: u8, max_m: u8) -> Result<String, String> {
    if !(1..=3).contains(&dim_v) || n > 3 || !(1..=DEMO_MAX_SIMPLEX).contains(&max_m) {
        return Err(format!("need 1 <= dim V <= 3, n <= 3, 1 <= m <= {DEMO_MAX_SIMPLEX}"));
    }
    let mut out = format!("K(R^{dim_v}, {n})\n");
    for m in 1..=max_m {
        let cells: Vec<String> = (0..=m)
            .map(|j| {
                let h = horn_restriction(dim_v, n, m, j);
                format!("{}({}/{})", short(&h.class.to_string()), h.rank, h.horn_dim)
            })
            .collect();
        let _ = writeln!(out, "m={m}: {}", cells.join("  "));
    }
    out.push_str("B = bijective, S = surjective only, N = neither; (rank/horn dim)");
    Ok(out)
}

fn short(class: &str) -> &'static str {
    match class {
        "bijective" => "B",
        "neither" => "N",
        _ => "S",
    }
}

/// `op` is one of `mul`, `poisson`, `q`, `d`; `g` is ignored by the unary ops.
pub fn calculate_text(dim: u8, op: &str, f: &str, g: &str) -> Result<String, String> {
    if !(1..=DEMO_MAX_DIM).contains(&dim) {
        return Err(format!("d must be in 1..={DEMO_MAX_DIM}"));
    }
    let s = ChartScheme::phase(dim);
    let f = parse(&s, f).map_err(|e| format!("f: {e}"))?;
    let binary = |g: &str| parse(&s, g).map_err(|e| format!("g: {e}"));
    let r = match op {
        "mul" => Ok(&f * &binary(g)?),
        "poisson" => poisson(&f, &binary(g)?),
        "q" => standard_q(&s).apply(&f),
        "d" => de_rham(&s).and_then(|d| d.apply(&f)),
        _ => return Err(format!("unknown operation {op}")),
    };
    r.map(|p| p.to_string()).map_err(|e| e.to_string())
}

#[wasm_bindgen]
pub fn jet(kappa_json: &str) -> Result<String, JsValue> {
    jet_text(kappa_json).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn kan_grid(dim_v: usize, n: u8, max_m: u8) -> Result<String, JsValue> {
    kan_grid_text(dim_v, n, max_m).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn calculate(dim: u8, op: &str, f: &str, g: &str) -> Result<String, JsValue> {
    calculate_text(dim, op, f, g).map_err(|e| JsValue::from_str(&e))
}
