//! Energy functional, dissipation rates and the energy defect.

use crate::error::{Error, Result};
use crate::lab::holder_seminorm;
use crate::solver::{chemical_potential, PhysParams, State};
use crate::spectral::{gradient, ScalarField, VectorField};

/// Energies and dissipation rates at one instant.
///
/// `cum_dissipation` integrates `grad_sq_rate + mobility_rate`, the rate at
/// which the stepper's `νΔu` term actually removes kinetic energy;
/// `viscous_rate = ν∫|𝔻u|²` is half of `grad_sq_rate` for solenoidal `u`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct EnergyRecord {
    pub t: f64,
    pub kinetic: f64,
    pub interfacial: f64,
    pub bulk: f64,
    pub viscous_rate: f64,
    pub grad_sq_rate: f64,
    pub mobility_rate: f64,
    pub cum_dissipation: f64,
    pub defect: f64,
    pub max_abs_c: f64,
}

impl EnergyRecord {
    pub fn total(&self) -> f64 {
        self.kinetic + self.interfacial + self.bulk
    }

    /// Instantaneous dissipation rate entering `cum_dissipation`.
    pub fn dissipation_rate(&self) -> f64 {
        self.grad_sq_rate + self.mobility_rate
    }
}

/// Velocity gradient tensor `∂_j u_i`, indexed `[i][j]`.
pub fn velocity_gradient(u: &VectorField) -> Vec<Vec<ScalarField>> {
    u.components()
        .iter()
        .map(|ui| gradient(ui).into_components())
        .collect()
}

/// `(∫|∇u|², ∫|𝔻u|²)` by grid quadrature.
pub fn gradient_norms(u: &VectorField) -> (f64, f64) {
    let du = velocity_gradient(u);
    let d = u.dim();
    let mut grad_sq = 0.0;
    let mut sym_sq = 0.0;
    for i in 0..d {
        for j in 0..d {
            grad_sq += du[i][j].inner(&du[i][j]);
            let s = du[i][j].zip_with(&du[j][i], |a, b| 0.5 * (a + b));
            sym_sq += s.inner(&s);
        }
    }
    (grad_sq, sym_sq)
}

/// Energies and rates of `state`; `cum_dissipation` and `defect` are 0.
pub fn energy(state: &State, params: &PhysParams) -> Result<EnergyRecord> {
    let u = &state.u;
    let c = &state.c;
    let kinetic = 0.5 * u.inner(u);
    let grad_c = gradient(c);
    let interfacial = 0.5 * params.gamma * grad_c.inner(&grad_c);
    let pot = params.potential;
    if c.values().iter().any(|v| v.is_nan()) {
        return Err(Error::Domain("order parameter contains NaN".into()));
    }
    let bulk = c.map(|s| pot.free_energy_raw(s)).integral();
    let (grad_sq, sym_sq) = gradient_norms(u);
    let mu = chemical_potential(c, params)?;
    let grad_mu = gradient(&mu);
    Ok(EnergyRecord {
        t: state.t,
        kinetic,
        interfacial,
        bulk,
        viscous_rate: params.nu * sym_sq,
        grad_sq_rate: params.nu * grad_sq,
        mobility_rate: params.mobility * grad_mu.inner(&grad_mu),
        cum_dissipation: 0.0,
        defect: 0.0,
        max_abs_c: c.max_abs(),
    })
}

/// Recomputes `cum_dissipation` by the trapezoidal rule and attaches
/// `defect(t) = E(t) + cum_dissipation(t) - E(0)` to every record.
pub fn attach_defect(series: &mut [EnergyRecord]) -> Result<()> {
    for w in series.windows(2) {
        if !(w[1].t > w[0].t) {
            return Err(Error::Input(format!(
                "energy series is not strictly increasing in time ({} then {})",
                w[0].t, w[1].t
            )));
        }
    }
    let Some(first) = series.first().copied() else {
        return Ok(());
    };
    let e0 = first.total();
    let mut cum = 0.0;
    let mut prev = first;
    for (i, r) in series.iter_mut().enumerate() {
        if i > 0 {
            cum += 0.5 * (r.t - prev.t) * (r.dissipation_rate() + prev.dissipation_rate());
        }
        prev = *r;
        r.cum_dissipation = cum;
        r.defect = if i == 0 { 0.0 } else { r.total() + cum - e0 };
    }
    Ok(())
}

/// Defect of every record, see [`attach_defect`].
pub fn energy_defect(series: &[EnergyRecord]) -> Result<Vec<f64>> {
    let mut s = series.to_vec();
    attach_defect(&mut s)?;
    Ok(s.iter().map(|r| r.defect).collect())
}

/// `max|u| + [u]_α`.
pub fn holder_norm(u: &VectorField, alpha: f64) -> Result<f64> {
    Ok(u.max_abs() + holder_seminorm(u, alpha, crate::lab::DEFAULT_SHIFT_BUDGET)?)
}

/// Time-integrated Hölder norm `(Σ_j w_j ‖u(t_j)‖_{C^α}^p)^{1/p}` with
/// `p = 2/(1+α) + δ` and trapezoidal weights.
pub fn hypothesis_norm(snapshots: &[(f64, &VectorField)], alpha: f64, delta: f64) -> Result<f64> {
    if snapshots.len() < 2 {
        return Err(Error::Input(
            "time-integrated norm needs at least two snapshots".into(),
        ));
    }
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::Domain(format!(
            "Hölder exponent must lie in (0, 1), got {alpha}"
        )));
    }
    if !(delta > 0.0 && delta.is_finite()) {
        return Err(Error::Domain(format!(
            "delta must be positive, got {delta}"
        )));
    }
    for w in snapshots.windows(2) {
        if !(w[1].0 > w[0].0) {
            return Err(Error::Input("snapshots are not sorted by time".into()));
        }
    }
    let p = 2.0 / (1.0 + alpha) + delta;
    let norms = snapshots
        .iter()
        .map(|(_, u)| holder_norm(u, alpha).map(|v| v.powf(p)))
        .collect::<Result<Vec<f64>>>()?;
    let mut sum = 0.0;
    for j in 1..snapshots.len() {
        sum += 0.5 * (snapshots[j].0 - snapshots[j - 1].0) * (norms[j] + norms[j - 1]);
    }
    Ok(sum.powf(1.0 / p))
}
