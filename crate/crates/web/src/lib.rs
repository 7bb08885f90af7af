//! Browser bindings for three cheap, visual computations: an IET orbit, the
//! weak-mixing spectrum, and route growth on the track carried by a permutation.
//!
//! The `demo_*` functions are plain Rust so they can be tested natively. The
//! `#[wasm_bindgen]` wrappers only translate errors.

use horolab::iet::{uniform_theta_grid, weak_mix_statistic, Iet};
use horolab::traintrack::TrainTrack;
use wasm_bindgen::prelude::*;

#[derive(Debug, thiserror::Error)]
pub enum DemoError {
    #[error(transparent)]
    Core(#[from] horolab::Error),
    #[error("{0} must be at most {1}")]
    TooLarge(&'static str, usize),
}

const MAX_STEPS: usize = 200_000;
const MAX_SAMPLES: usize = 50_000;
const MAX_GRID: usize = 4_000;
const MAX_BOUND: f64 = 60.0;

fn build(images: &[u32], lengths: &[f64]) -> Result<Iet<f64>, DemoError> {
    let images: Vec<usize> = images.iter().map(|&k| k as usize).collect();
    Ok(Iet::from_images(lengths.to_vec(), &images)?)
}

/// Orbit of `x0` under the IET given by 1-based `images`, first point included.
pub fn demo_orbit(images: &[u32], lengths: &[f64], x0: f64, steps: usize) -> Result<Vec<f64>, DemoError> {
    if steps > MAX_STEPS {
        return Err(DemoError::TooLarge("steps", MAX_STEPS));
    }
    Ok(build(images, lengths)?.orbit(&x0, steps)?)
}

/// Spectrum values on the uniform grid `k/grid`, sampled along the orbit of `x0`.
pub fn demo_weak_mix(images: &[u32], lengths: &[f64], x0: f64, samples: usize, grid: usize) -> Result<Vec<f64>, DemoError> {
    if samples > MAX_SAMPLES {
        return Err(DemoError::TooLarge("samples", MAX_SAMPLES));
    }
    if grid > MAX_GRID {
        return Err(DemoError::TooLarge("grid", MAX_GRID));
    }
    let iet = build(images, lengths)?;
    Ok(weak_mix_statistic(&iet, &uniform_theta_grid(grid), samples, x0)?.values)
}

/// Route counts `N(L)` for each bound, as floats for the JS side.
pub fn demo_route_growth(images: &[u32], lengths: &[f64], bounds: &[f64]) -> Result<Vec<f64>, DemoError> {
    if bounds.iter().any(|&l| l > MAX_BOUND) {
        return Err(DemoError::TooLarge("route length bound", MAX_BOUND as usize));
    }
    let track = TrainTrack::from_permutation(&build(images, lengths)?)?;
    Ok(bounds.iter().map(|&l| track.count_routes(l) as f64).collect())
}

fn js(e: DemoError) -> JsError {
    JsError::new(&e.to_string())
}

#[wasm_bindgen]
pub fn orbit(images: &[u32], lengths: &[f64], x0: f64, steps: usize) -> Result<Vec<f64>, JsError> {
    demo_orbit(images, lengths, x0, steps).map_err(js)
}

#[wasm_bindgen(js_name = weakMix)]
pub fn weak_mix(images: &[u32], lengths: &[f64], x0: f64, samples: usize, grid: usize) -> Result<Vec<f64>, JsError> {
    demo_weak_mix(images, lengths, x0, samples, grid).map_err(js)
}

#[wasm_bindgen(js_name = routeGrowth)]
pub fn route_growth(images: &[u32], lengths: &[f64], bounds: &[f64]) -> Result<Vec<f64>, JsError> {
    demo_route_growth(images, lengths, bounds).map_err(js)
}
