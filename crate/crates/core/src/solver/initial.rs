//! Initial data generators.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::spectral::{leray_project, to_physical, to_spectral, Grid, ScalarField, VectorField};

/// Taylor–Green vortex of unit amplitude.
///
/// 2D: `(sin x cos y, -cos x sin y)`; 3D: `(sin x cos y cos z, -cos x sin y cos z, 0)`.
pub fn taylor_green(grid: Grid, amplitude: f64) -> VectorField {
    let u = VectorField::from_fn(grid, |x| {
        let (s0, c0) = x[0].sin_cos();
        let (s1, c1) = x[1].sin_cos();
        let cz = if grid.dim() == 3 { x[2].cos() } else { 1.0 };
        [amplitude * s0 * c1 * cz, -amplitude * c0 * s1 * cz, 0.0]
    });
    leray_project(&u)
}

/// Exact 2D Taylor–Green velocity at time `t` for viscosity `nu`.
pub fn taylor_green_exact(grid: Grid, nu: f64, t: f64) -> VectorField {
    taylor_green(grid, (-2.0 * nu * t).exp())
}

/// Band-limited random perturbation of a constant: `mean + amplitude · g`,
/// where `g` has zero mean, `max|g| = 1` and only modes with every
/// `|k_j| <= band`.
pub fn spinodal(
    grid: Grid,
    mean: f64,
    amplitude: f64,
    band: usize,
    seed: u64,
) -> Result<ScalarField> {
    if band == 0 || 3 * band > grid.n() {
        return Err(Error::Config(format!(
            "initial.band must lie in 1..={} for n = {}",
            grid.n() / 3,
            grid.n()
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let noise: Vec<f64> = (0..grid.len())
        .map(|_| rng.random_range(-1.0..1.0))
        .collect();
    let mut s = to_spectral(&ScalarField::from_vec(grid, noise));
    let modes = grid.modes();
    for (c, k) in s.coeffs_mut().iter_mut().zip(&modes) {
        let inside = k.iter().all(|&v| v.unsigned_abs() as usize <= band);
        if !inside || k.iter().all(|&v| v == 0) {
            *c = 0.0.into();
        }
    }
    let g = to_physical(&s);
    let peak = g.max_abs();
    if peak == 0.0 {
        return Ok(ScalarField::constant(grid, mean));
    }
    Ok(g.map(|v| mean + amplitude * v / peak))
}
