//! The standard bump mollifier on a periodic lattice.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::OnceLock;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::spectral::{
    tables, to_physical, to_spectral, Grid, ScalarField, SpectralField, VectorField,
};

/// How a convolution with the kernel is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Backend {
    /// Circular convolution with the lattice samples of the kernel. This is
    /// the discretization shared by all commutator diagnostics.
    #[default]
    Quadrature,
    /// Multiplication by the continuous Fourier transform of the kernel.
    Spectral,
}

/// `ρ_ε(x) = ε^{-d} ρ(x/ε)` with `ρ(x) ∝ exp(-1/(1 - |x|²))` on `|x| < 1`.
#[derive(Debug)]
pub struct MollifierKernel {
    grid: Grid,
    epsilon: f64,
    support: Vec<([i64; 3], f64)>,
    quadrature: Vec<f64>,
    spectral: OnceLock<Vec<f64>>,
}

fn bump(r: f64) -> f64 {
    if r < 1.0 {
        (-1.0 / (1.0 - r * r)).exp()
    } else {
        0.0
    }
}

/// Builds the kernel for `3·spacing <= epsilon <= 1`.
pub fn make_mollifier(grid: Grid, epsilon: f64) -> Result<MollifierKernel> {
    let h = grid.spacing();
    if !(epsilon.is_finite() && epsilon >= 3.0 * h * (1.0 - 1e-12) && epsilon <= 1.0) {
        return Err(Error::Resolvability {
            epsilon,
            spacing: h,
        });
    }
    Ok(build(grid, epsilon))
}

/// Builds the kernel for any `spacing < epsilon < π`, skipping the
/// resolvability bound. Meant for checks on small grids.
pub fn make_mollifier_unchecked(grid: Grid, epsilon: f64) -> Result<MollifierKernel> {
    let h = grid.spacing();
    if !(epsilon.is_finite() && epsilon > h && epsilon < PI) {
        return Err(Error::Resolvability {
            epsilon,
            spacing: h,
        });
    }
    Ok(build(grid, epsilon))
}

fn build(grid: Grid, epsilon: f64) -> MollifierKernel {
    let h = grid.spacing();
    let d = grid.dim();
    let reach = (epsilon / h).ceil() as i64;
    let mut support = Vec::new();
    let range = -reach..=reach;
    for i0 in range.clone() {
        for i1 in range.clone() {
            let third = if d == 3 { range.clone() } else { 0..=0 };
            for i2 in third {
                let r = h * ((i0 * i0 + i1 * i1 + i2 * i2) as f64).sqrt() / epsilon;
                let w = bump(r);
                if w > 0.0 {
                    support.push(([i0, i1, i2], w));
                }
            }
        }
    }
    let total: f64 = support.iter().map(|(_, w)| w).sum();
    for (_, w) in &mut support {
        *w /= total;
    }

    let mut samples = vec![0.0; grid.len()];
    for (off, w) in &support {
        samples[grid.flat(*off)] += w;
    }
    let scale = grid.len() as f64;
    let quadrature = to_spectral(&ScalarField::from_vec(grid, samples))
        .coeffs()
        .iter()
        .map(|c| c.re * scale)
        .collect();
    MollifierKernel {
        grid,
        epsilon,
        support,
        quadrature,
        spectral: OnceLock::new(),
    }
}

impl MollifierKernel {
    pub fn grid(&self) -> Grid {
        self.grid
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    /// Lattice offsets `y` inside the support and their quadrature weights
    /// `spacing^d ρ_ε(y)`, which sum to 1.
    pub fn support(&self) -> &[([i64; 3], f64)] {
        &self.support
    }

    /// Periodic wrap of `ρ_ε` on the grid; `sum · spacing^d = 1`.
    pub fn profile(&self) -> ScalarField {
        let mut v = vec![0.0; self.grid.len()];
        let inv = 1.0 / self.grid.cell_volume();
        for (off, w) in &self.support {
            v[self.grid.flat(*off)] += w * inv;
        }
        ScalarField::from_vec(self.grid, v)
    }

    /// Fourier multiplier of the requested convolution, per stored slot.
    pub fn multiplier(&self, backend: Backend) -> &[f64] {
        match backend {
            Backend::Quadrature => &self.quadrature,
            Backend::Spectral => self
                .spectral
                .get_or_init(|| continuous_multiplier(self.grid, self.epsilon)),
        }
    }

    pub fn convolve(&self, f: &ScalarField, backend: Backend) -> ScalarField {
        to_physical(&self.convolve_spectral(&to_spectral(f), backend))
    }

    pub(crate) fn convolve_spectral(&self, f: &SpectralField, backend: Backend) -> SpectralField {
        let m = self.multiplier(backend);
        let coeffs = f
            .coeffs()
            .par_iter()
            .zip(m.par_iter())
            .map(|(c, &w)| c * w)
            .collect();
        SpectralField::new(self.grid, coeffs).expect("kernel and field share a grid")
    }

    /// Convolves every component; a solenoidal input stays tagged.
    pub fn convolve_vector(&self, v: &VectorField, backend: Backend) -> VectorField {
        let comps = v
            .components()
            .iter()
            .map(|c| self.convolve(c, backend))
            .collect();
        let out = VectorField::new(comps).expect("components share a grid");
        if v.is_solenoidal() {
            out.try_tag_solenoidal(f64::INFINITY)
                .expect("infinite tolerance")
        } else {
            out
        }
    }
}

/// Fields that can be mollified component by component.
pub trait Mollify: Sized {
    fn mollify_with(&self, kernel: &MollifierKernel, backend: Backend) -> Self;
}

impl Mollify for ScalarField {
    fn mollify_with(&self, kernel: &MollifierKernel, backend: Backend) -> Self {
        kernel.convolve(self, backend)
    }
}

impl Mollify for VectorField {
    fn mollify_with(&self, kernel: &MollifierKernel, backend: Backend) -> Self {
        kernel.convolve_vector(self, backend)
    }
}

/// `f_ε` through the continuous Fourier transform of the kernel.
pub fn mollify<T: Mollify>(f: &T, kernel: &MollifierKernel) -> T {
    f.mollify_with(kernel, Backend::Spectral)
}

/// `f_ε` as the lattice sum `Σ_y spacing^d ρ_ε(y) f(x - y)`.
pub fn convolve_quadrature<T: Mollify>(f: &T, kernel: &MollifierKernel) -> T {
    f.mollify_with(kernel, Backend::Quadrature)
}

/// Continuous transform of the radial kernel at every stored slot,
/// evaluated once per distinct `|k|²`.
fn continuous_multiplier(grid: Grid, epsilon: f64) -> Vec<f64> {
    let t = tables(grid);
    let mut keys: Vec<u64> = t.ksq.iter().map(|&k| k as u64).collect();
    keys.sort_unstable();
    keys.dedup();
    let d = grid.dim();
    let norm = radial_transform(d, 0.0);
    let values: HashMap<u64, f64> = keys
        .par_iter()
        .map(|&k2| (k2, radial_transform(d, epsilon * (k2 as f64).sqrt()) / norm))
        .collect();
    t.ksq.iter().map(|&k| values[&(k as u64)]).collect()
}

/// `∫_0^1 ρ(r) J0(s r) r dr` in 2D and `∫_0^1 ρ(r) sinc(s r) r² dr` in 3D,
/// by composite 16-point Gauss–Legendre with panels refined for large `s`.
fn radial_transform(dim: usize, s: f64) -> f64 {
    let (nodes, weights) = gauss_legendre_16();
    let panels = 4 + (s / 2.0).ceil() as usize;
    let width = 1.0 / panels as f64;
    let mut sum = 0.0;
    for p in 0..panels {
        let a = p as f64 * width;
        for (x, w) in nodes.iter().zip(weights) {
            let r = a + 0.5 * width * (x + 1.0);
            let radial = match dim {
                2 => libm::j0(s * r) * r,
                _ => {
                    let z = s * r;
                    let sinc = if z == 0.0 { 1.0 } else { z.sin() / z };
                    sinc * r * r
                }
            };
            sum += 0.5 * width * w * bump(r) * radial;
        }
    }
    sum
}

fn gauss_legendre_16() -> &'static (Vec<f64>, Vec<f64>) {
    static RULE: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    RULE.get_or_init(|| gauss_legendre(16))
}

/// Nodes and weights of the `n`-point Gauss–Legendre rule on `[-1, 1]`.
pub(crate) fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}
