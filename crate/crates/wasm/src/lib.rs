//! Browser bindings for the demo page in `www/`.
//!
//! Every export returns a JSON string; the plain `*_json` functions carry the
//! logic so they can be tested natively.

use cubenorm::connectivity::is_k_affine_connected;
use cubenorm::constructions::{chebyshev_weights, hamming_ball, mela_approximator};
use cubenorm::fourier::{fwht, reduced_spectral_norm, spectral_norm};
use cubenorm::set::SubsetOfCube;
use serde_json::json;
use wasm_bindgen::prelude::*;

/// Largest dimension the page accepts; the spectrum is listed in full.
pub const DEMO_N_MAX: usize = 10;

pub fn spectrum_json(n: usize, members: &[u32], k: usize) -> Result<String, String> {
    if n > DEMO_N_MAX {
        return Err(format!("n must be at most {DEMO_N_MAX}"));
    }
    let a = SubsetOfCube::from_members(n, members.iter().map(|&x| x as usize)).map_err(|e| e.to_string())?;
    let f = a.indicator();
    let spec = fwht(&f).map_err(|e| e.to_string())?;
    let verdict = |s: &SubsetOfCube| -> Result<Option<bool>, String> {
        if k == 0 || k > 4 || k > n {
            return Ok(None);
        }
        is_k_affine_connected(s, k).map(|v| Some(v.connected)).map_err(|e| e.to_string())
    };
    Ok(json!({
        "n": n,
        "size": a.size(),
        "spectrum": spec.values(),
        "norm": spectral_norm(&f).map_err(|e| e.to_string())?,
        "reduced_norm": reduced_spectral_norm(&f).map_err(|e| e.to_string())?,
        "k": k,
        "set_connected": verdict(&a)?,
        "complement_connected": verdict(&a.complement())?,
        "lower_bound": (k as f64).sqrt() / 2.0,
    })
    .to_string())
}

/// Values of the approximation and of `1_{B_k}` at one point of each Hamming weight.
pub fn mela_json(k: usize, epsilon: f64) -> Result<String, String> {
    let r = mela_approximator(k, epsilon).map_err(|e| e.to_string())?;
    let ball = hamming_ball(k);
    let rows: Vec<_> = (0..=k)
        .map(|w| {
            let x = (1usize << w) - 1;
            json!({ "weight": w, "approx": r.approx.get(x), "ball": ball.contains(x) as u8 })
        })
        .collect();
    Ok(json!({
        "k": k,
        "epsilon": epsilon,
        "m": r.m,
        "rows": rows,
        "approx_norm": r.approx_norm,
        "ball_norm": spectral_norm(&ball.indicator()).map_err(|e| e.to_string())?,
        "log_bound": 5.0 * (1.0 / epsilon).log2(),
        "sup_error": r.sup_error,
    })
    .to_string())
}

pub fn chebyshev_json(m: usize) -> Result<String, String> {
    let w = chebyshev_weights(m).map_err(|e| e.to_string())?;
    Ok(json!({ "m": m, "eta": w.eta, "sigma": w.sigma, "l1": w.l1(), "residual": w.residual() }).to_string())
}

#[wasm_bindgen]
pub fn spectrum(n: usize, members: &[u32], k: usize) -> Result<String, JsError> {
    spectrum_json(n, members, k).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn mela(k: usize, epsilon: f64) -> Result<String, JsError> {
    mela_json(k, epsilon).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn chebyshev(m: usize) -> Result<String, JsError> {
    chebyshev_json(m).map_err(|e| JsError::new(&e))
}
