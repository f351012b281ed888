//! Solenoidal test fields with a prescribed Hölder exponent.
//!
//! The field is a lacunary sum `Σ_j 2^{-αj} U(2^j x)` whose building block
//! `U` is a triad of plane waves with wavevectors `a = (1,0)`, `b = (0,2)`,
//! `c = (-1,-2)` (so `a + b + c = 0`), each with its amplitude perpendicular
//! to the wavevector. Triads of unequal magnitudes carry a one-signed energy
//! flux across scales, which the commutator terms then pick up. The `a` and
//! `b` legs of the coarsest shell are amplified by `1/(1 - 2^{α-1})`, the
//! gradient of the coarser scales a truncated series lacks, so that
//! `max|∇f_ε|` follows `ε^{α-1}` down to the coarsest radius.

use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::spectral::{leray_project, Grid, ScalarField, VectorField};

const TRIAD: [[i64; 2]; 3] = [[1, 0], [0, 2], [-1, -2]];

/// Largest octave count the grid resolves with every wavevector inside the
/// 2/3 band.
pub fn synth_octave_limit(grid: Grid) -> usize {
    let mut j = 0;
    while 3 * (2usize << (j + 1)) <= grid.n() {
        j += 1;
    }
    j
}

/// Lacunary field with shells `j = 0..=n_octaves`, deterministic in `seed`.
pub fn synth_holder_field(
    grid: Grid,
    alpha: f64,
    n_octaves: usize,
    seed: u64,
) -> Result<VectorField> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::Config(format!(
            "synthetic field exponent must lie in (0, 1), got {alpha}"
        )));
    }
    if 3 * (2usize << n_octaves) > grid.n() {
        return Err(Error::Config(format!(
            "{n_octaves} octaves put wavenumber {} beyond n/3 = {} (at most {} octaves fit)",
            2usize << n_octaves,
            grid.n() / 3,
            synth_octave_limit(grid)
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let phases: Vec<f64> = (0..3).map(|_| rng.random_range(0.0..TAU)).collect();
    let signs: Vec<f64> = (0..3)
        .map(|_| if rng.random_bool(0.5) { 1.0 } else { -1.0 })
        .collect();
    // Out-of-plane tilt of each leg's amplitude (3D only).
    let tilts: Vec<f64> = (0..3).map(|_| rng.random_range(0.0..TAU)).collect();
    let boost = 1.0 / (1.0 - 2f64.powf(alpha - 1.0));

    let mut legs = Vec::new();
    for j in 0..=n_octaves {
        let scale = (1i64 << j) as f64;
        for (m, dir) in TRIAD.iter().enumerate() {
            let mut amp = 2f64.powf(-alpha * j as f64);
            if j == 0 {
                amp = if m < 2 { boost } else { 1.0 };
            }
            let k = [dir[0] as f64 * scale, dir[1] as f64 * scale];
            let norm = k[0].hypot(k[1]);
            let perp = [-k[1] / norm * signs[m], k[0] / norm * signs[m]];
            let a = if grid.dim() == 3 {
                let (s, c) = tilts[m].sin_cos();
                [c * perp[0], c * perp[1], s]
            } else {
                [perp[0], perp[1], 0.0]
            };
            legs.push((k, a.map(|v| v * amp), phases[m]));
        }
    }

    let comps = (0..grid.dim())
        .map(|i| {
            ScalarField::from_fn(grid, |x| {
                legs.iter()
                    .map(|(k, a, ph)| a[i] * (k[0] * x[0] + k[1] * x[1] + ph).cos())
                    .sum()
            })
        })
        .collect();
    Ok(leray_project(&VectorField::new(comps)?))
}
