//! Hölder seminorm `[f]_α = sup |f(x+y) - f(x)| / |y|^α` over lattice shifts.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::spectral::{Grid, ScalarField, VectorField};

/// Default number of shift magnitudes per direction.
pub const DEFAULT_SHIFT_BUDGET: usize = 24;

/// Scalar or vector samples on a grid; increments are measured in the
/// Euclidean norm over channels.
pub trait Sampled: Sync {
    fn grid(&self) -> Grid;
    fn channels(&self) -> Vec<&[f64]>;
}

impl Sampled for ScalarField {
    fn grid(&self) -> Grid {
        ScalarField::grid(self)
    }
    fn channels(&self) -> Vec<&[f64]> {
        vec![self.values()]
    }
}

impl Sampled for VectorField {
    fn grid(&self) -> Grid {
        VectorField::grid(self)
    }
    fn channels(&self) -> Vec<&[f64]> {
        self.components().iter().map(|c| c.values()).collect()
    }
}

/// Primitive lattice directions with entries in `[-2, 2]`, one per ± pair.
fn directions(dim: usize) -> Vec<[i64; 3]> {
    let mut out = Vec::new();
    let r = -2..=2i64;
    for a in r.clone() {
        for b in r.clone() {
            let third = if dim == 3 { r.clone() } else { 0..=0 };
            for c in third {
                let v = [a, b, c];
                if v == [0, 0, 0] || gcd(gcd(a.abs(), b.abs()), c.abs()) != 1 {
                    continue;
                }
                let first = v.iter().copied().find(|&x| x != 0).unwrap();
                if first > 0 {
                    out.push(v);
                }
            }
        }
    }
    out
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Shifts used by [`holder_seminorm`]: every direction of [`directions`]
/// times a geometric ladder of `shift_budget` integer multipliers from 1 to
/// `n/2`, dropping shifts that leave the half-period box.
pub fn sampled_shifts(grid: Grid, shift_budget: usize) -> Vec<[i64; 3]> {
    let half = (grid.n() / 2) as i64;
    let mut mags: Vec<i64> = (0..shift_budget)
        .map(|i| {
            let t = if shift_budget == 1 {
                0.0
            } else {
                i as f64 / (shift_budget - 1) as f64
            };
            (half as f64).powf(t).round() as i64
        })
        .collect();
    mags.sort_unstable();
    mags.dedup();
    let mut out = Vec::new();
    for d in directions(grid.dim()) {
        for &m in &mags {
            let s = d.map(|v| v * m);
            if s.iter().all(|v| v.abs() <= half) {
                out.push(s);
            }
        }
    }
    out
}

/// Torus distance of a lattice shift.
pub fn torus_distance(grid: Grid, shift: [i64; 3]) -> f64 {
    let n = grid.n() as i64;
    let h = grid.spacing();
    shift
        .iter()
        .take(grid.dim())
        .map(|&s| {
            let w = s.rem_euclid(n);
            let m = w.min(n - w) as f64 * h;
            m * m
        })
        .sum::<f64>()
        .sqrt()
}

/// `max_x |f(x + y) - f(x)|` for the lattice shift `y`.
pub fn shift_increment<F: Sampled + ?Sized>(f: &F, shift: [i64; 3]) -> f64 {
    let g = f.grid();
    let ch = f.channels();
    (0..g.len())
        .into_par_iter()
        .with_min_len(1024)
        .map(|i| {
            let idx = g.index(i);
            let j = g.flat([
                idx[0] as i64 + shift[0],
                idx[1] as i64 + shift[1],
                idx[2] as i64 + shift[2],
            ]);
            ch.iter()
                .map(|c| {
                    let d = c[j] - c[i];
                    d * d
                })
                .sum::<f64>()
        })
        .reduce(|| 0.0, f64::max)
        .sqrt()
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha <= 1.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "Hölder exponent must lie in (0, 1], got {alpha}"
        )))
    }
}

/// Seminorm over the sampled shifts of [`sampled_shifts`].
pub fn holder_seminorm<F: Sampled + ?Sized>(f: &F, alpha: f64, shift_budget: usize) -> Result<f64> {
    check_alpha(alpha)?;
    let g = f.grid();
    if shift_budget < g.dim() {
        return Err(Error::Domain(format!(
            "shift budget {shift_budget} is below the dimension {}",
            g.dim()
        )));
    }
    Ok(sup_over(f, alpha, &sampled_shifts(g, shift_budget)))
}

/// Seminorm over every nonzero lattice shift. Costs `O(n^{2d})`.
pub fn holder_seminorm_brute_force<F: Sampled + ?Sized>(f: &F, alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    let g = f.grid();
    let shifts: Vec<[i64; 3]> = (1..g.len())
        .map(|i| {
            let idx = g.index(i);
            [idx[0] as i64, idx[1] as i64, idx[2] as i64]
        })
        .collect();
    Ok(sup_over(f, alpha, &shifts))
}

fn sup_over<F: Sampled + ?Sized>(f: &F, alpha: f64, shifts: &[[i64; 3]]) -> f64 {
    let g = f.grid();
    shifts
        .iter()
        .map(|&s| shift_increment(f, s) / torus_distance(g, s).powf(alpha))
        .fold(0.0, f64::max)
}
