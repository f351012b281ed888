//! Periodic fields on the torus `[0, 2π)^dim` and their Fourier representation.

mod fft;
mod ops;

use std::f64::consts::PI;

use rayon::prelude::*;
use rustfft::num_complex::Complex64;

use crate::error::{Error, Result};

pub(crate) use fft::tables;
pub use ops::{
    dealias, divergence, divergence_defect, gradient, laplacian, leray_project, to_physical,
    to_spectral,
};
pub(crate) use ops::{dealias_in_place, project_in_place, spectral_divergence, spectral_gradient};

/// Uniform periodic lattice with `n` points per axis on `[0, 2π)^dim`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Grid {
    dim: usize,
    n: usize,
}

impl Grid {
    pub fn new(dim: usize, n: usize) -> Result<Self> {
        if dim != 2 && dim != 3 {
            return Err(Error::Config(format!(
                "grid dimension must be 2 or 3, got {dim}"
            )));
        }
        if n < 8 || !n.is_multiple_of(2) {
            return Err(Error::Config(format!(
                "grid resolution must be even and at least 8, got {n}"
            )));
        }
        Ok(Self { dim, n })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn spacing(&self) -> f64 {
        2.0 * PI / self.n as f64
    }

    /// Volume element `spacing^dim` of the grid quadrature.
    pub fn cell_volume(&self) -> f64 {
        self.spacing().powi(self.dim as i32)
    }

    /// Number of physical grid points, `n^dim`.
    pub fn len(&self) -> usize {
        self.n.pow(self.dim as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Number of stored coefficients in the Hermitian-reduced layout.
    pub fn spectral_len(&self) -> usize {
        self.n.pow(self.dim as u32 - 1) * (self.n / 2 + 1)
    }

    /// Signed wavenumber of FFT index `i` along a full axis.
    pub fn wavenumber(&self, i: usize) -> i64 {
        if i <= self.n / 2 {
            i as i64
        } else {
            i as i64 - self.n as i64
        }
    }

    /// Multi-index of a flat row-major physical index.
    pub fn index(&self, flat: usize) -> [usize; 3] {
        let n = self.n;
        match self.dim {
            2 => [flat / n, flat % n, 0],
            _ => [flat / (n * n), (flat / n) % n, flat % n],
        }
    }

    /// Flat row-major index of a (wrapped) multi-index.
    pub fn flat(&self, idx: [i64; 3]) -> usize {
        let n = self.n as i64;
        let w = |i: i64| i.rem_euclid(n) as usize;
        match self.dim {
            2 => w(idx[0]) * self.n + w(idx[1]),
            _ => (w(idx[0]) * self.n + w(idx[1])) * self.n + w(idx[2]),
        }
    }

    /// Coordinates of a flat physical index (unused trailing entries are 0).
    pub fn point(&self, flat: usize) -> [f64; 3] {
        let h = self.spacing();
        let i = self.index(flat);
        [i[0] as f64 * h, i[1] as f64 * h, i[2] as f64 * h]
    }

    /// Integer wavevector of every stored spectral coefficient.
    pub fn modes(&self) -> Vec<[i32; 3]> {
        fft::tables(*self).modes.clone()
    }

    /// Weight of a stored coefficient in full-lattice sums: 2 for slots whose
    /// conjugate partner is not stored, 1 otherwise.
    pub(crate) fn hermitian_weight(&self, slot: usize) -> f64 {
        let nh = self.n / 2 + 1;
        let j = slot % nh;
        if j == 0 || j == nh - 1 {
            1.0
        } else {
            2.0
        }
    }
}

/// Real scalar field sampled on a grid, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarField {
    grid: Grid,
    values: Vec<f64>,
}

impl ScalarField {
    pub fn new(grid: Grid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::Config(format!(
                "field has {} values, grid needs {}",
                values.len(),
                grid.len()
            )));
        }
        Ok(Self { grid, values })
    }

    pub(crate) fn from_vec(grid: Grid, values: Vec<f64>) -> Self {
        debug_assert_eq!(values.len(), grid.len());
        Self { grid, values }
    }

    pub fn zeros(grid: Grid) -> Self {
        Self::constant(grid, 0.0)
    }

    pub fn constant(grid: Grid, value: f64) -> Self {
        Self {
            grid,
            values: vec![value; grid.len()],
        }
    }

    /// Samples `f` at every grid point. Coordinates beyond `dim` are 0.
    pub fn from_fn(grid: Grid, f: impl Fn([f64; 3]) -> f64 + Sync) -> Self {
        let values = (0..grid.len())
            .into_par_iter()
            .map(|i| f(grid.point(i)))
            .collect();
        Self { grid, values }
    }

    pub fn grid(&self) -> Grid {
        self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn map(&self, f: impl Fn(f64) -> f64 + Sync) -> Self {
        Self {
            grid: self.grid,
            values: self.values.par_iter().map(|&v| f(v)).collect(),
        }
    }

    pub fn scale(&self, a: f64) -> Self {
        self.map(|v| a * v)
    }

    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.values.len() as f64
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Grid quadrature `spacing^dim * Σ f`.
    pub fn integral(&self) -> f64 {
        self.values.iter().sum::<f64>() * self.grid.cell_volume()
    }

    /// Discrete L² inner product.
    pub fn inner(&self, other: &ScalarField) -> f64 {
        let s: f64 = self
            .values
            .par_iter()
            .zip(other.values.par_iter())
            .map(|(a, b)| a * b)
            .sum();
        s * self.grid.cell_volume()
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|v| v.is_finite())
    }

    pub(crate) fn zip_with(&self, other: &ScalarField, f: impl Fn(f64, f64) -> f64 + Sync) -> Self {
        Self {
            grid: self.grid,
            values: self
                .values
                .par_iter()
                .zip(other.values.par_iter())
                .map(|(&a, &b)| f(a, b))
                .collect(),
        }
    }

    pub fn add(&self, other: &ScalarField) -> Self {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &ScalarField) -> Self {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn mul(&self, other: &ScalarField) -> Self {
        self.zip_with(other, |a, b| a * b)
    }
}

/// Real vector field with `dim` components on a common grid.
///
/// The solenoidal tag is set only by operations that guarantee a vanishing
/// spectral divergence.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorField {
    grid: Grid,
    components: Vec<ScalarField>,
    solenoidal: bool,
}

impl VectorField {
    pub fn new(components: Vec<ScalarField>) -> Result<Self> {
        let grid = match components.first() {
            Some(c) => c.grid(),
            None => return Err(Error::Config("vector field needs components".into())),
        };
        if components.len() != grid.dim() || components.iter().any(|c| c.grid() != grid) {
            return Err(Error::Config(format!(
                "vector field on a {}-dimensional grid needs {} components on that grid",
                grid.dim(),
                grid.dim()
            )));
        }
        Ok(Self {
            grid,
            components,
            solenoidal: false,
        })
    }

    pub(crate) fn from_parts(grid: Grid, components: Vec<ScalarField>, solenoidal: bool) -> Self {
        debug_assert_eq!(components.len(), grid.dim());
        Self {
            grid,
            components,
            solenoidal,
        }
    }

    pub fn zeros(grid: Grid) -> Self {
        Self {
            grid,
            components: (0..grid.dim()).map(|_| ScalarField::zeros(grid)).collect(),
            solenoidal: true,
        }
    }

    pub fn from_fn(grid: Grid, f: impl Fn([f64; 3]) -> [f64; 3] + Sync) -> Self {
        let components = (0..grid.dim())
            .map(|j| ScalarField::from_fn(grid, |x| f(x)[j]))
            .collect();
        Self {
            grid,
            components,
            solenoidal: false,
        }
    }

    pub fn grid(&self) -> Grid {
        self.grid
    }

    pub fn dim(&self) -> usize {
        self.grid.dim()
    }

    pub fn components(&self) -> &[ScalarField] {
        &self.components
    }

    pub fn component(&self, j: usize) -> &ScalarField {
        &self.components[j]
    }

    pub fn into_components(self) -> Vec<ScalarField> {
        self.components
    }

    pub fn is_solenoidal(&self) -> bool {
        self.solenoidal
    }

    /// Tags the field solenoidal after checking its spectral divergence
    /// against `tol · max|v̂|`.
    pub fn try_tag_solenoidal(mut self, tol: f64) -> Result<Self> {
        let d = divergence_defect(&self);
        if d > tol {
            return Err(Error::Input(format!(
                "velocity is not divergence-free (relative spectral divergence {d:e})"
            )));
        }
        self.solenoidal = true;
        Ok(self)
    }

    pub fn scale(&self, a: f64) -> Self {
        Self {
            grid: self.grid,
            components: self.components.iter().map(|c| c.scale(a)).collect(),
            solenoidal: self.solenoidal,
        }
    }

    pub fn mean(&self) -> Vec<f64> {
        self.components.iter().map(ScalarField::mean).collect()
    }

    /// Pointwise Euclidean magnitude.
    pub fn magnitude(&self) -> ScalarField {
        let g = self.grid;
        let values = (0..g.len())
            .into_par_iter()
            .map(|i| {
                self.components
                    .iter()
                    .map(|c| c.values[i] * c.values[i])
                    .sum::<f64>()
                    .sqrt()
            })
            .collect();
        ScalarField::from_vec(g, values)
    }

    /// Maximum of the pointwise Euclidean magnitude.
    pub fn max_abs(&self) -> f64 {
        self.magnitude().max_abs()
    }

    /// Discrete L² inner product summed over components.
    pub fn inner(&self, other: &VectorField) -> f64 {
        self.components
            .iter()
            .zip(&other.components)
            .map(|(a, b)| a.inner(b))
            .sum()
    }

    pub fn is_finite(&self) -> bool {
        self.components.iter().all(ScalarField::is_finite)
    }

    pub fn sub(&self, other: &VectorField) -> Self {
        Self {
            grid: self.grid,
            components: self
                .components
                .iter()
                .zip(&other.components)
                .map(|(a, b)| a.sub(b))
                .collect(),
            solenoidal: false,
        }
    }

    /// Pointwise dot product with another vector field.
    pub fn dot(&self, other: &VectorField) -> ScalarField {
        let mut acc = ScalarField::zeros(self.grid);
        for (a, b) in self.components.iter().zip(&other.components) {
            acc = acc.zip_with(&a.mul(b), |x, y| x + y);
        }
        acc
    }

    /// Multiplies every component by a scalar field.
    pub fn mul_scalar(&self, s: &ScalarField) -> Self {
        Self {
            grid: self.grid,
            components: self.components.iter().map(|c| c.mul(s)).collect(),
            solenoidal: false,
        }
    }
}

/// Fourier coefficients of a real field in Hermitian-reduced layout.
///
/// Index layout: `i0*nh + j` in 2D and `(i0*n + i1)*nh + j` in 3D with
/// `nh = n/2 + 1`; `j` runs over the non-negative last-axis wavenumbers.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralField {
    grid: Grid,
    coeffs: Vec<Complex64>,
}

impl SpectralField {
    pub fn new(grid: Grid, coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() != grid.spectral_len() {
            return Err(Error::Config(format!(
                "spectral field has {} coefficients, grid needs {}",
                coeffs.len(),
                grid.spectral_len()
            )));
        }
        Ok(Self { grid, coeffs })
    }

    pub(crate) fn from_vec(grid: Grid, coeffs: Vec<Complex64>) -> Self {
        debug_assert_eq!(coeffs.len(), grid.spectral_len());
        Self { grid, coeffs }
    }

    pub fn zeros(grid: Grid) -> Self {
        Self {
            grid,
            coeffs: vec![Complex64::new(0.0, 0.0); grid.spectral_len()],
        }
    }

    pub fn grid(&self) -> Grid {
        self.grid
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [Complex64] {
        &mut self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Complex64> {
        self.coeffs
    }

    /// Coefficient of the integer wavevector `k`, using conjugate symmetry
    /// for wavevectors whose last component is negative.
    pub fn coefficient(&self, k: [i64; 3]) -> Complex64 {
        let g = self.grid;
        let n = g.n as i64;
        let nh = g.n / 2 + 1;
        let last = g.dim - 1;
        let (kk, conj) = if k[last].rem_euclid(n) > n / 2 {
            (k.map(|v| -v), true)
        } else {
            (k, false)
        };
        let w = |i: i64| i.rem_euclid(n) as usize;
        let slot = match g.dim {
            2 => w(kk[0]) * nh + w(kk[1]),
            _ => (w(kk[0]) * g.n + w(kk[1])) * nh + w(kk[2]),
        };
        let c = self.coeffs[slot];
        if conj {
            c.conj()
        } else {
            c
        }
    }

    /// `Σ_k |f̂_k|²` over the full (unreduced) lattice.
    pub fn norm_sq(&self) -> f64 {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(s, c)| self.grid.hermitian_weight(s) * c.norm_sqr())
            .sum()
    }

    /// Largest coefficient magnitude.
    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |m, c| m.max(c.norm()))
    }
}
