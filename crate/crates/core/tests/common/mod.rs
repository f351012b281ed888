#![allow(dead_code)]

use chns_core::spectral::leray_project;
use chns_core::{Grid, ScalarField, VectorField};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// White noise in `[-1, 1)`.
pub fn noise(grid: Grid, seed: u64) -> ScalarField {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let v = (0..grid.len())
        .map(|_| rng.random_range(-1.0..1.0))
        .collect();
    ScalarField::new(grid, v).unwrap()
}

/// Random field with modes `|k_j| <= band` only.
pub fn band_limited(grid: Grid, band: usize, seed: u64) -> ScalarField {
    chns_core::solver::initial::spinodal(grid, 0.0, 1.0, band, seed).unwrap()
}

pub fn noise_vector(grid: Grid, seed: u64) -> VectorField {
    VectorField::new(
        (0..grid.dim())
            .map(|i| noise(grid, seed * 7 + i as u64))
            .collect(),
    )
    .unwrap()
}

pub fn band_limited_solenoidal(grid: Grid, band: usize, seed: u64) -> VectorField {
    let comps = (0..grid.dim())
        .map(|i| band_limited(grid, band, seed * 7 + i as u64))
        .collect();
    leray_project(&VectorField::new(comps).unwrap())
}

pub fn max_diff(a: &ScalarField, b: &ScalarField) -> f64 {
    a.sub(b).max_abs()
}

pub fn rel_err(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}
