//! WebAssembly bindings for the browser demo in `www/`.
//!
//! Each exported function has a plain-Rust twin returning `Result<_, String>`
//! so the logic is testable natively.

use chipfire::difftable::{diff_row, signs};
use chipfire::lattice::intermediate_configuration;
use chipfire::svg::{render, FigureKind, FigureOptions};
use wasm_bindgen::prelude::*;

/// Keeps page renders responsive: 2^16 chips draw about 30k dots.
pub const MAX_DEMO_N: u32 = 16;

fn check_n(n: u32) -> Result<(), String> {
    if n > MAX_DEMO_N {
        Err(format!("n must be at most {MAX_DEMO_N} in the demo"))
    } else {
        Ok(())
    }
}

fn figure(kind: FigureKind, n: u32, width: u32, height: u32) -> Result<String, String> {
    check_n(n)?;
    let opts = FigureOptions {
        width,
        height,
        radius: if n > 10 { 1.5 } else { 3.0 },
    };
    render(kind, n, &opts).map_err(|e| e.to_string())
}

pub fn stable_svg(n: u32, width: u32, height: u32) -> Result<String, String> {
    figure(FigureKind::StableDots, n, width, height)
}

pub fn distance_svg(n: u32, width: u32, height: u32) -> Result<String, String> {
    figure(FigureKind::DistancePolyline, n, width, height)
}

/// Number of nonzero rows for `n`, for sizing the row slider.
pub fn row_count(n: u32) -> Result<usize, String> {
    check_n(n)?;
    let mut rows = 0;
    for r in intermediate_configuration(n, None).map_err(|e| e.to_string())? {
        r.map_err(|e| e.to_string())?;
        rows += 1;
    }
    Ok(rows)
}

/// Text description of row `index`: its entries, its stable chips and the
/// difference row below it.
pub fn describe_row(n: u32, index: usize) -> Result<String, String> {
    check_n(n)?;
    let row = intermediate_configuration(n, None)
        .map_err(|e| e.to_string())?
        .nth(index)
        .transpose()
        .map_err(|e| e.to_string())?
        .ok_or_else(|| format!("n = {n} has no row {index}"))?;
    let d = diff_row(&row);
    let join = |v: Vec<String>| v.join(" ");
    let chips: String = row
        .values()
        .iter()
        .map(|v| if v % 2 == 1 { '1' } else { '.' })
        .collect();
    let sign: String = signs(&d).into_iter().map(|s| s.symbol()).collect();
    Ok(format!(
        "row {index}, y = {}..{}, {} entries, sum {}\n\
         F      : {}\n\
         chips  : {chips}\n\
         F'     : {}\n\
         signs  : {sign}\n",
        row.y_min(),
        row.y_max().unwrap_or(row.y_min()),
        row.len(),
        row.sum(),
        join(row.values().iter().map(|v| v.to_string()).collect()),
        join(d.values().iter().map(|v| v.to_string()).collect()),
    ))
}

#[wasm_bindgen(js_name = stableSvg)]
pub fn stable_svg_js(n: u32, width: u32, height: u32) -> Result<String, JsError> {
    stable_svg(n, width, height).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = distanceSvg)]
pub fn distance_svg_js(n: u32, width: u32, height: u32) -> Result<String, JsError> {
    distance_svg(n, width, height).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = rowCount)]
pub fn row_count_js(n: u32) -> Result<usize, JsError> {
    row_count(n).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = describeRow)]
pub fn describe_row_js(n: u32, index: usize) -> Result<String, JsError> {
    describe_row(n, index).map_err(|e| JsError::new(&e))
}
