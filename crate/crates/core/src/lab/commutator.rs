//! The quadratic commutator `r_ε(u,u) = ∫ρ_ε(y)[u(x-y)-u(x)]⊗[u(x-y)-u(x)]dy`
//! and the identity `(u⊗u)_ε = u_ε⊗u_ε + r_ε - (u-u_ε)⊗(u-u_ε)`.

use rayon::prelude::*;

use crate::error::Result;
use crate::spectral::{Grid, ScalarField, VectorField};

use super::kernel::{Backend, MollifierKernel};

/// Symmetric `dim × dim` tensor field, stored in full.
#[derive(Debug, Clone, PartialEq)]
pub struct TensorField {
    grid: Grid,
    entries: Vec<Vec<ScalarField>>,
}

impl TensorField {
    pub fn grid(&self) -> Grid {
        self.grid
    }

    pub fn get(&self, i: usize, j: usize) -> &ScalarField {
        &self.entries[i][j]
    }

    /// Entries at one grid point, row-major `dim × dim`.
    pub fn at(&self, point: usize) -> Vec<f64> {
        self.entries
            .iter()
            .flat_map(|row| row.iter().map(move |e| e.values()[point]))
            .collect()
    }

    /// Pointwise `A : B = Σ_ij A_ij B_ij` against a full gradient table
    /// `grad[i][j]`.
    pub fn contract(&self, grad: &[Vec<ScalarField>]) -> ScalarField {
        let d = self.grid.dim();
        let mut acc = ScalarField::zeros(self.grid);
        for i in 0..d {
            for j in 0..d {
                acc = acc.add(&self.entries[i][j].mul(&grad[i][j]));
            }
        }
        acc
    }
}

/// `r_ε(u,u)` by a direct lattice sum over the kernel support.
pub fn cet_commutator(u: &VectorField, kernel: &MollifierKernel) -> Result<TensorField> {
    let g = u.grid();
    let d = g.dim();
    let comps: Vec<&[f64]> = u.components().iter().map(|c| c.values()).collect();
    let support = kernel.support();
    let pairs: Vec<(usize, usize)> = (0..d).flat_map(|i| (i..d).map(move |j| (i, j))).collect();
    let np = pairs.len();

    let mut flat = vec![0.0; g.len() * np];
    flat.par_chunks_mut(np).enumerate().for_each(|(x, out)| {
        let idx = g.index(x);
        let mut diff = [0.0; 3];
        for (off, w) in support {
            let y = g.flat([
                idx[0] as i64 - off[0],
                idx[1] as i64 - off[1],
                idx[2] as i64 - off[2],
            ]);
            for k in 0..d {
                diff[k] = comps[k][y] - comps[k][x];
            }
            for (p, &(i, j)) in pairs.iter().enumerate() {
                out[p] += w * diff[i] * diff[j];
            }
        }
    });

    let mut entries = vec![vec![ScalarField::zeros(g); d]; d];
    for (p, &(i, j)) in pairs.iter().enumerate() {
        let values: Vec<f64> = flat.iter().skip(p).step_by(np).copied().collect();
        let f = ScalarField::new(g, values)?;
        entries[j][i] = f.clone();
        entries[i][j] = f;
    }
    Ok(TensorField { grid: g, entries })
}

/// `max |(u⊗u)_ε - u_ε⊗u_ε - r_ε + (u-u_ε)⊗(u-u_ε)|` with every
/// convolution on the lattice quadrature of `r_ε`.
pub fn cet_identity_residual(u: &VectorField, kernel: &MollifierKernel) -> Result<f64> {
    cet_identity_residual_with(u, kernel, Backend::Quadrature)
}

/// As [`cet_identity_residual`], but `(u⊗u)_ε` and `u_ε` are computed with
/// `backend` while `r_ε` stays a lattice sum.
pub fn cet_identity_residual_with(
    u: &VectorField,
    kernel: &MollifierKernel,
    backend: Backend,
) -> Result<f64> {
    let d = u.dim();
    let r = cet_commutator(u, kernel)?;
    let ue = kernel.convolve_vector(u, backend);
    let w = u.sub(&ue);
    let mut worst = 0.0_f64;
    for i in 0..d {
        for j in i..d {
            let uu = kernel.convolve(&u.component(i).mul(u.component(j)), backend);
            let res = uu
                .sub(&ue.component(i).mul(ue.component(j)))
                .sub(r.get(i, j))
                .add(&w.component(i).mul(w.component(j)));
            worst = worst.max(res.max_abs());
        }
    }
    Ok(worst)
}
