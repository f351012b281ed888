//! Mollifier bounds `max|f - f_ε| <= [f]_α ε^α` and
//! `max|∇f_ε| <= C [f]_α ε^{α-1}`.

use crate::error::Result;
use crate::spectral::{gradient, ScalarField};

use super::holder::{holder_seminorm, Sampled, DEFAULT_SHIFT_BUDGET};
use super::kernel::{make_mollifier, Backend};
use super::{check_ladder, decay_fit, DecayReport, Term};

#[derive(Debug, Clone, PartialEq)]
pub struct Lemma1Report {
    /// Values are `max|f - f_ε| / ([f]_α ε^α)`; the fit and predicted slope
    /// (`α`) refer to `max|f - f_ε|` itself.
    pub conv2: DecayReport,
    /// Values are `max|∇f_ε| / ([f]_α ε^{α-1})`; the fit and predicted slope
    /// (`α - 1`) refer to `max|∇f_ε|` itself.
    pub conv3: DecayReport,
    /// Sampled seminorm `[f]_α` used for the ratios.
    pub seminorm: f64,
    pub max_diff: Vec<f64>,
    pub max_grad: Vec<f64>,
}

/// Evaluates both bounds for each radius with the lattice-quadrature kernel.
pub fn lemma1_check<F: Sampled + ?Sized>(
    f: &F,
    alpha: f64,
    epsilons: &[f64],
) -> Result<Lemma1Report> {
    check_ladder(epsilons)?;
    let g = f.grid();
    let seminorm = holder_seminorm(f, alpha, DEFAULT_SHIFT_BUDGET)?;
    let channels: Vec<ScalarField> = f
        .channels()
        .into_iter()
        .map(|c| ScalarField::new(g, c.to_vec()))
        .collect::<Result<_>>()?;

    let mut max_diff = Vec::with_capacity(epsilons.len());
    let mut max_grad = Vec::with_capacity(epsilons.len());
    for &eps in epsilons {
        let kernel = make_mollifier(g, eps)?;
        let mut diff_sq = ScalarField::zeros(g);
        let mut grad_sq = ScalarField::zeros(g);
        for c in &channels {
            let ce = kernel.convolve(c, Backend::Quadrature);
            let d = c.sub(&ce);
            diff_sq = diff_sq.add(&d.mul(&d));
            for gc in gradient(&ce).components() {
                grad_sq = grad_sq.add(&gc.mul(gc));
            }
        }
        max_diff.push(diff_sq.max_abs().sqrt());
        max_grad.push(grad_sq.max_abs().sqrt());
    }

    let ratio = |raw: &[f64], power: f64| -> Vec<f64> {
        raw.iter()
            .zip(epsilons)
            .map(|(v, e)| {
                if seminorm == 0.0 {
                    0.0
                } else {
                    v / (seminorm * e.powf(power))
                }
            })
            .collect()
    };
    let conv2 = DecayReport::with_fit(
        Term::Conv2Ratio,
        epsilons.to_vec(),
        ratio(&max_diff, alpha),
        decay_fit(epsilons, &max_diff)?,
        Some(alpha),
        alpha,
    )?;
    let conv3 = DecayReport::with_fit(
        Term::Conv3Ratio,
        epsilons.to_vec(),
        ratio(&max_grad, alpha - 1.0),
        decay_fit(epsilons, &max_grad)?,
        Some(alpha - 1.0),
        alpha,
    )?;
    Ok(Lemma1Report {
        conv2,
        conv3,
        seminorm,
        max_diff,
        max_grad,
    })
}
