//! Mollification diagnostics: the bump kernel, Hölder seminorms, mollifier
//! bounds, the quadratic commutator and the ε-decay of the remainder terms
//! in the energy balance of mollified solutions.

mod commutator;
mod fit;
mod holder;
mod kernel;
mod lemma;
mod synth;
mod terms;

use std::f64::consts::FRAC_PI_4;

use crate::error::{Error, Result};
use crate::spectral::Grid;

pub use commutator::{
    cet_commutator, cet_identity_residual, cet_identity_residual_with, TensorField,
};
pub use fit::{decay_fit, DecayFit};
pub use holder::{
    holder_seminorm, holder_seminorm_brute_force, sampled_shifts, shift_increment, torus_distance,
    Sampled, DEFAULT_SHIFT_BUDGET,
};
pub use kernel::{
    convolve_quadrature, make_mollifier, make_mollifier_unchecked, mollify, Backend,
    MollifierKernel, Mollify,
};
pub use lemma::{lemma1_check, Lemma1Report};
pub use synth::{synth_holder_field, synth_octave_limit};
pub use terms::{proof_terms, proof_terms_at, ProofTermReport, ProofTerms};

/// Quantities tracked across a sweep of mollification radii.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Term {
    I11,
    I12,
    I21,
    I221,
    J111,
    J112,
    J21,
    /// Mollified minus unmollified change of the interfacial plus bulk
    /// energy between the first and last sample.
    J12,
    CetResidual,
    Conv2Ratio,
    Conv3Ratio,
}

impl Term {
    pub const PROOF_TERMS: [Term; 8] = [
        Term::I11,
        Term::I12,
        Term::I21,
        Term::I221,
        Term::J111,
        Term::J112,
        Term::J21,
        Term::J12,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Term::I11 => "I11",
            Term::I12 => "I12",
            Term::I21 => "I21",
            Term::I221 => "I221",
            Term::J111 => "J111",
            Term::J112 => "J112",
            Term::J21 => "J21",
            Term::J12 => "J12",
            Term::CetResidual => "CET_residual",
            Term::Conv2Ratio => "conv2_ratio",
            Term::Conv3Ratio => "conv3_ratio",
        }
    }
}

impl std::fmt::Display for Term {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// One term evaluated over a decreasing list of radii, with its log-log fit.
#[derive(Debug, Clone, PartialEq)]
pub struct DecayReport {
    pub term: Term,
    pub epsilons: Vec<f64>,
    pub values: Vec<f64>,
    pub fit: DecayFit,
    pub predicted_slope: Option<f64>,
    pub alpha: f64,
}

impl DecayReport {
    /// Report whose fit is taken over `values` themselves.
    pub fn new(
        term: Term,
        epsilons: Vec<f64>,
        values: Vec<f64>,
        predicted_slope: Option<f64>,
        alpha: f64,
    ) -> Result<Self> {
        let fit = decay_fit(&epsilons, &values)?;
        Self::with_fit(term, epsilons, values, fit, predicted_slope, alpha)
    }

    pub fn with_fit(
        term: Term,
        epsilons: Vec<f64>,
        values: Vec<f64>,
        fit: DecayFit,
        predicted_slope: Option<f64>,
        alpha: f64,
    ) -> Result<Self> {
        check_ladder(&epsilons)?;
        if values.len() != epsilons.len() {
            return Err(Error::Input("one value per radius expected".into()));
        }
        Ok(Self {
            term,
            epsilons,
            values,
            fit,
            predicted_slope,
            alpha,
        })
    }
}

pub(crate) fn check_ladder(epsilons: &[f64]) -> Result<()> {
    if epsilons.windows(2).any(|w| !(w[1] < w[0])) {
        return Err(Error::Input("radii must be strictly decreasing".into()));
    }
    Ok(())
}

/// `count` radii spaced geometrically from π/4 down to `4·spacing`. When
/// that span is under an octave the ladder ends at `3·spacing` instead,
/// the smallest resolvable radius.
pub fn epsilon_ladder(grid: Grid, count: usize) -> Result<Vec<f64>> {
    let h = grid.spacing();
    if count < 3 {
        return Err(Error::Input(
            "a radius ladder needs at least three entries".into(),
        ));
    }
    let (hi, lo) = if FRAC_PI_4 >= 2.0 * 4.0 * h {
        (FRAC_PI_4, 4.0 * h)
    } else {
        (FRAC_PI_4, 3.0 * h)
    };
    if lo >= hi {
        return Err(Error::Resolvability {
            epsilon: lo,
            spacing: h,
        });
    }
    let ratio = (lo / hi).ln() / (count - 1) as f64;
    Ok((0..count)
        .map(|i| {
            if i == count - 1 {
                lo
            } else {
                hi * (ratio * i as f64).exp()
            }
        })
        .collect())
}

/// Default 8-point ladder, see [`epsilon_ladder`].
pub fn default_epsilons(grid: Grid) -> Result<Vec<f64>> {
    epsilon_ladder(grid, 8)
}
