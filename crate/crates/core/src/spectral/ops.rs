//! Spectral differentiation, projection and dealiasing.
//!
//! First derivatives multiply by `i k_eff`, where `k_eff` zeroes the Nyquist
//! component of each axis; the Leray projector uses the same `k_eff`, so the
//! discrete divergence of a projected field vanishes identically. The
//! Laplacian multiplies by the true `-|k|²`.

use rayon::prelude::*;
use rustfft::num_complex::Complex64;

use super::{fft, ScalarField, SpectralField, VectorField};

const I: Complex64 = Complex64::new(0.0, 1.0);

pub fn to_spectral(f: &ScalarField) -> SpectralField {
    SpectralField::from_vec(f.grid(), fft::forward(f.grid(), f.values()))
}

pub fn to_physical(f: &SpectralField) -> ScalarField {
    ScalarField::from_vec(f.grid(), fft::inverse(f.grid(), f.coeffs()))
}

pub fn gradient(f: &ScalarField) -> VectorField {
    let g = f.grid();
    let comps = spectral_gradient(&to_spectral(f))
        .iter()
        .map(to_physical)
        .collect();
    VectorField::from_parts(g, comps, false)
}

pub fn laplacian(f: &ScalarField) -> ScalarField {
    let g = f.grid();
    let t = fft::tables(g);
    let mut s = to_spectral(f);
    s.coeffs_mut()
        .par_iter_mut()
        .zip(t.ksq.par_iter())
        .for_each(|(c, &k2)| *c *= -k2);
    to_physical(&s)
}

pub fn divergence(v: &VectorField) -> ScalarField {
    let s: Vec<SpectralField> = v.components().iter().map(to_spectral).collect();
    to_physical(&spectral_divergence(&s))
}

/// Removes the gradient part of `v` mode by mode; the mean is kept.
pub fn leray_project(v: &VectorField) -> VectorField {
    let g = v.grid();
    let mut s: Vec<SpectralField> = v.components().iter().map(to_spectral).collect();
    project_in_place(&mut s);
    VectorField::from_parts(g, s.iter().map(to_physical).collect(), true)
}

/// Zeroes every mode with some `|k_j| > n/3`.
pub fn dealias(f: &SpectralField) -> SpectralField {
    let mut out = f.clone();
    dealias_in_place(&mut out);
    out
}

/// `max_k |k_eff·v̂_k| / max_k |v̂_k|` (0 for the zero field).
pub fn divergence_defect(v: &VectorField) -> f64 {
    let s: Vec<SpectralField> = v.components().iter().map(to_spectral).collect();
    let vmax = s.iter().fold(0.0_f64, |m, c| m.max(c.max_abs()));
    if vmax == 0.0 {
        return 0.0;
    }
    spectral_divergence(&s).max_abs() / vmax
}

pub(crate) fn spectral_gradient(f: &SpectralField) -> Vec<SpectralField> {
    let g = f.grid();
    let t = fft::tables(g);
    (0..g.dim())
        .map(|j| {
            let coeffs = f
                .coeffs()
                .par_iter()
                .zip(t.keff.par_iter())
                .map(|(c, k)| I * k[j] * c)
                .collect();
            SpectralField::from_vec(g, coeffs)
        })
        .collect()
}

pub(crate) fn spectral_divergence(v: &[SpectralField]) -> SpectralField {
    let g = v[0].grid();
    let t = fft::tables(g);
    let coeffs = (0..g.spectral_len())
        .into_par_iter()
        .map(|s| {
            let k = &t.keff[s];
            let mut acc = Complex64::new(0.0, 0.0);
            for (j, comp) in v.iter().enumerate() {
                acc += k[j] * comp.coeffs()[s];
            }
            I * acc
        })
        .collect();
    SpectralField::from_vec(g, coeffs)
}

pub(crate) fn project_in_place(v: &mut [SpectralField]) {
    let g = v[0].grid();
    let d = g.dim();
    let t = fft::tables(g);
    let mut cols: Vec<&mut [Complex64]> = v.iter_mut().map(|c| c.coeffs_mut()).collect();
    for s in 0..g.spectral_len() {
        let k = &t.keff[s];
        let k2: f64 = k[..d].iter().map(|x| x * x).sum();
        if k2 == 0.0 {
            continue;
        }
        let mut kv = Complex64::new(0.0, 0.0);
        for j in 0..d {
            kv += k[j] * cols[j][s];
        }
        let r = kv / k2;
        for j in 0..d {
            cols[j][s] -= k[j] * r;
        }
    }
}

pub(crate) fn dealias_in_place(f: &mut SpectralField) {
    let t = fft::tables(f.grid());
    f.coeffs_mut()
        .par_iter_mut()
        .zip(t.resolved.par_iter())
        .for_each(|(c, &keep)| {
            if !keep {
                *c = Complex64::new(0.0, 0.0);
            }
        });
}
