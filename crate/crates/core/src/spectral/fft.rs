//! Multi-dimensional real-to-complex transforms in Hermitian-reduced layout.
//!
//! The last axis is transformed with a real FFT and keeps `n/2 + 1`
//! coefficients; the remaining axes are full complex transforms. The forward
//! transform divides by `n^dim`, so the zero mode is the field mean.
//!
//! Plans and wavevector tables are built once per grid and shared read-only
//! through a process-wide cache.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use rayon::prelude::*;
use realfft::{ComplexToReal, RealFftPlanner, RealToComplex};
use rustfft::num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use super::Grid;

/// Lines per rayon task for the strided complex passes.
const LINES_PER_TASK: usize = 64;

pub(crate) struct Tables {
    r2c: Arc<dyn RealToComplex<f64>>,
    c2r: Arc<dyn ComplexToReal<f64>>,
    fwd: Arc<dyn Fft<f64>>,
    inv: Arc<dyn Fft<f64>>,
    /// Integer wavevector of every spectral slot, padded with zeros to 3.
    pub(crate) modes: Vec<[i32; 3]>,
    /// Wavevector used for first derivatives: Nyquist components set to 0.
    pub(crate) keff: Vec<[f64; 3]>,
    /// True `|k|²` of every slot.
    pub(crate) ksq: Vec<f64>,
    /// Slots kept by the 2/3 rule (every `|k_j| <= n/3`).
    pub(crate) resolved: Vec<bool>,
}

fn cache() -> &'static Mutex<HashMap<Grid, Arc<Tables>>> {
    static CACHE: OnceLock<Mutex<HashMap<Grid, Arc<Tables>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

pub(crate) fn tables(grid: Grid) -> Arc<Tables> {
    let mut map = cache().lock().unwrap_or_else(|e| e.into_inner());
    map.entry(grid)
        .or_insert_with(|| Arc::new(Tables::build(grid)))
        .clone()
}

impl Tables {
    fn build(grid: Grid) -> Self {
        let n = grid.n();
        let mut real = RealFftPlanner::<f64>::new();
        let mut cplx = FftPlanner::<f64>::new();
        let nh = n / 2 + 1;
        let mut modes = Vec::with_capacity(grid.spectral_len());
        match grid.dim() {
            2 => {
                for i0 in 0..n {
                    for j in 0..nh {
                        modes.push([grid.wavenumber(i0) as i32, j as i32, 0]);
                    }
                }
            }
            _ => {
                for i0 in 0..n {
                    for i1 in 0..n {
                        for j in 0..nh {
                            modes.push([
                                grid.wavenumber(i0) as i32,
                                grid.wavenumber(i1) as i32,
                                j as i32,
                            ]);
                        }
                    }
                }
            }
        }
        let half = (n / 2) as i32;
        let keff = modes
            .iter()
            .map(|k| k.map(|v| if v.abs() == half { 0.0 } else { v as f64 }))
            .collect();
        let ksq = modes
            .iter()
            .map(|k| k.iter().map(|&v| (v as f64) * (v as f64)).sum())
            .collect();
        let resolved = modes
            .iter()
            .map(|k| k.iter().all(|&v| 3 * v.unsigned_abs() as usize <= n))
            .collect();
        Self {
            keff,
            ksq,
            resolved,
            r2c: real.plan_fft_forward(n),
            c2r: real.plan_fft_inverse(n),
            fwd: cplx.plan_fft_forward(n),
            inv: cplx.plan_fft_inverse(n),
            modes,
        }
    }
}

/// Forward transform of `values` (row-major, length `n^dim`), normalized by `n^dim`.
pub(crate) fn forward(grid: Grid, values: &[f64]) -> Vec<Complex64> {
    let t = tables(grid);
    let n = grid.n();
    let nh = n / 2 + 1;
    let rows = values.len() / n;
    let mut out = vec![Complex64::new(0.0, 0.0); rows * nh];

    out.par_chunks_mut(nh)
        .zip(values.par_chunks(n))
        .for_each_init(
            || (vec![0.0; n], t.r2c.make_scratch_vec()),
            |(buf, scratch), (dst, src)| {
                buf.copy_from_slice(src);
                t.r2c
                    .process_with_scratch(buf, dst, scratch)
                    .expect("real FFT buffer sizes are fixed by the grid");
            },
        );

    for axis in 0..grid.dim() - 1 {
        strided_pass(grid, &mut out, axis, &t.fwd);
    }

    let scale = 1.0 / grid.len() as f64;
    out.par_iter_mut().for_each(|c| *c *= scale);
    out
}

/// Inverse of [`forward`]. The imaginary parts of the self-conjugate
/// slots on the last axis are discarded, which is the real part of the
/// full complex inverse.
pub(crate) fn inverse(grid: Grid, coeffs: &[Complex64]) -> Vec<f64> {
    let t = tables(grid);
    let n = grid.n();
    let nh = n / 2 + 1;
    let mut work = coeffs.to_vec();
    for axis in 0..grid.dim() - 1 {
        strided_pass(grid, &mut work, axis, &t.inv);
    }
    let rows = work.len() / nh;
    let mut out = vec![0.0; rows * n];
    out.par_chunks_mut(n)
        .zip(work.par_chunks_mut(nh))
        .for_each_init(
            || t.c2r.make_scratch_vec(),
            |scratch, (dst, src)| {
                src[0].im = 0.0;
                src[nh - 1].im = 0.0;
                t.c2r
                    .process_with_scratch(src, dst, scratch)
                    .expect("real FFT buffer sizes are fixed by the grid");
            },
        );
    out
}

/// Complex FFT along one of the full (non-reduced) axes.
fn strided_pass(grid: Grid, data: &mut [Complex64], axis: usize, fft: &Arc<dyn Fft<f64>>) {
    let n = grid.n();
    let nh = n / 2 + 1;
    // spectral shape is [n; dim-1] x nh
    let stride = match (grid.dim(), axis) {
        (2, 0) => nh,
        (3, 0) => n * nh,
        (3, 1) => nh,
        _ => unreachable!("axis {axis} is not a full axis"),
    };
    let outer = data.len() / (n * stride);
    let lines = outer * stride;

    let mut buf = vec![Complex64::new(0.0, 0.0); lines * n];
    for o in 0..outer {
        for s in 0..stride {
            let line = o * stride + s;
            let base = o * n * stride + s;
            let dst = &mut buf[line * n..(line + 1) * n];
            for (k, d) in dst.iter_mut().enumerate() {
                *d = data[base + k * stride];
            }
        }
    }
    buf.par_chunks_mut(n * LINES_PER_TASK)
        .for_each(|chunk| fft.process(chunk));
    for o in 0..outer {
        for s in 0..stride {
            let line = o * stride + s;
            let base = o * n * stride + s;
            let src = &buf[line * n..(line + 1) * n];
            for (k, v) in src.iter().enumerate() {
                data[base + k * stride] = *v;
            }
        }
    }
}
