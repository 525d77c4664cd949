//! WebAssembly bindings behind `www/index.html`.
//!
//! Every export is a thin wrapper over a plain function in [`model`], so the
//! numerics are exercised by native tests and the browser only sees flat
//! `Float64Array`s.

pub mod model;

use wasm_bindgen::prelude::*;

fn js_err(e: gaussfid::Error) -> JsValue {
    JsValue::from_str(&e.to_string())
}

/// Underdamped oscillator in unit mass and ħ, coupled to a thermal bath.
#[wasm_bindgen]
#[derive(Debug, Clone, Copy)]
pub struct Setup(model::Setup);

#[wasm_bindgen]
impl Setup {
    #[wasm_bindgen(constructor)]
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        omega: f64,
        lambda: f64,
        mu: f64,
        c: f64,
        delta: f64,
        r: f64,
        q0: f64,
        p0: f64,
    ) -> Setup {
        Setup(model::Setup {
            omega,
            lambda,
            mu,
            c,
            delta,
            r,
            q0,
            p0,
        })
    }

    /// Empty when the parameters are admissible, otherwise the error message.
    pub fn problem(&self) -> String {
        self.0
            .build()
            .err()
            .map(|e| e.to_string())
            .unwrap_or_default()
    }
}

/// `points` samples of F(t) on `[0, t_max]`.
#[wasm_bindgen]
pub fn fidelity_curve(setup: &Setup, t_max: f64, points: usize) -> Result<Vec<f64>, JsValue> {
    model::fidelity_curve(&setup.0, t_max, points).map_err(js_err)
}

/// F(∞) on a `nc × nd` grid, row-major with C varying slowest.
#[wasm_bindgen]
pub fn asymptote_grid(
    r: f64,
    delta_min: f64,
    delta_max: f64,
    nd: usize,
    c_min: f64,
    c_max: f64,
    nc: usize,
) -> Result<Vec<f64>, JsValue> {
    model::asymptote_grid(r, (delta_min, delta_max, nd), (c_min, c_max, nc)).map_err(js_err)
}

/// Flattened `[q, p, var_qq, var_pp, cov_pq]` per sample.
#[wasm_bindgen]
pub fn phase_trajectory(setup: &Setup, t_max: f64, points: usize) -> Result<Vec<f64>, JsValue> {
    model::phase_trajectory(&setup.0, t_max, points).map_err(js_err)
}
