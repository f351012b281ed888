//! First-order IMEX time stepping for the coupled Navier–Stokes/Cahn–Hilliard
//! system with constant viscosity, capillarity and mobility.
//!
//! Advection, the capillary force and the nonlinear part of `f(c)` are
//! explicit; viscosity, `γΔ²c` and a linear stabilization `S Δc` are implicit
//! and diagonal in Fourier space.

pub mod initial;
mod run;

use rayon::prelude::*;
use rustfft::num_complex::Complex64;

use crate::error::{Error, Result};
use crate::potential::PotentialSpec;
use crate::spectral::{
    dealias_in_place, project_in_place, spectral_divergence, spectral_gradient, tables,
    to_physical, to_spectral, ScalarField, SpectralField, VectorField,
};

pub use run::{simulate, simulate_with, OutputPlan, RunSummary};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysParams {
    pub nu: f64,
    pub gamma: f64,
    pub mobility: f64,
    pub potential: PotentialSpec,
    pub stabilization: f64,
}

impl PhysParams {
    /// Parameters with the stabilization set to the potential's `α`.
    pub fn new(nu: f64, gamma: f64, mobility: f64, potential: PotentialSpec) -> Result<Self> {
        let p = Self {
            nu,
            gamma,
            mobility,
            potential,
            stabilization: potential.stabilization_alpha()?,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn with_stabilization(mut self, s: f64) -> Result<Self> {
        self.stabilization = s;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |name: &str, what: &str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(Error::Config(format!(
                    "{name} must be a positive constant ({what}), got {v}"
                )))
            }
        };
        positive("params.nu", "viscosity", self.nu)?;
        positive("params.gamma", "capillary coefficient", self.gamma)?;
        positive("params.mobility", "non-degenerate mobility", self.mobility)?;
        self.potential.validate()?;
        if !(self.stabilization >= 0.0 && self.stabilization.is_finite()) {
            return Err(Error::Config(format!(
                "params.stabilization must be nonnegative, got {}",
                self.stabilization
            )));
        }
        Ok(())
    }

    /// True when `S >= α/2`, the stabilization level the stepper is
    /// designed around.
    pub fn is_stabilized(&self) -> bool {
        self.potential
            .stabilization_alpha()
            .map(|a| self.stabilization >= 0.5 * a)
            .unwrap_or(false)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scheme {
    Imex1,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepperConfig {
    pub dt: f64,
    pub scheme: Scheme,
    pub dealias: bool,
}

impl StepperConfig {
    pub fn new(dt: f64) -> Result<Self> {
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(Error::Config(format!(
                "stepper.dt must be positive, got {dt}"
            )));
        }
        Ok(Self {
            dt,
            scheme: Scheme::Imex1,
            dealias: true,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct State {
    pub t: f64,
    pub u: VectorField,
    pub c: ScalarField,
}

impl State {
    pub fn new(t: f64, u: VectorField, c: ScalarField) -> Result<Self> {
        if u.grid() != c.grid() {
            return Err(Error::Config(
                "velocity and order parameter grids differ".into(),
            ));
        }
        Ok(Self { t, u, c })
    }

    pub fn grid(&self) -> crate::Grid {
        self.c.grid()
    }
}

/// `μ = f(c) - γΔc`, with `f(c)` evaluated pointwise and dealiased.
pub fn chemical_potential(c: &ScalarField, params: &PhysParams) -> Result<ScalarField> {
    let c_hat = to_spectral(c);
    let f_hat = bulk_force_hat(c, params, true)?;
    Ok(to_physical(&mu_hat(&c_hat, &f_hat, params)))
}

/// `P(μ∇c)` with the product dealiased.
pub fn capillary_force(c: &ScalarField, mu: &ScalarField, _params: &PhysParams) -> VectorField {
    let grad_c = crate::spectral::gradient(c);
    let mut prod: Vec<SpectralField> = grad_c
        .components()
        .iter()
        .map(|g| {
            let mut s = to_spectral(&g.mul(mu));
            dealias_in_place(&mut s);
            s
        })
        .collect();
    project_in_place(&mut prod);
    VectorField::from_parts(c.grid(), prod.iter().map(to_physical).collect(), true)
}

/// `P(-γ div(∇c ⊗ ∇c))` with products dealiased. Equal to
/// [`capillary_force`] up to a gradient, which the projection removes.
pub fn korteweg_force(c: &ScalarField, params: &PhysParams) -> VectorField {
    let g = c.grid();
    let grad_c = crate::spectral::gradient(c);
    let d = g.dim();
    let mut out: Vec<SpectralField> = (0..d)
        .map(|i| {
            let row: Vec<SpectralField> = (0..d)
                .map(|j| {
                    let mut s = to_spectral(&grad_c.component(i).mul(grad_c.component(j)));
                    dealias_in_place(&mut s);
                    s
                })
                .collect();
            let mut div = spectral_divergence(&row);
            div.coeffs_mut()
                .iter_mut()
                .for_each(|c| *c *= -params.gamma);
            div
        })
        .collect();
    project_in_place(&mut out);
    VectorField::from_parts(g, out.iter().map(to_physical).collect(), true)
}

/// One first-order IMEX step.
pub fn step(state: &State, params: &PhysParams, cfg: &StepperConfig) -> Result<State> {
    let g = state.grid();
    let d = g.dim();
    let dt = cfg.dt;
    let tab = tables(g);
    let dealias = |s: &mut SpectralField| {
        if cfg.dealias {
            dealias_in_place(s)
        }
    };

    let c_hat = to_spectral(&state.c);
    let f_hat = bulk_force_hat(&state.c, params, cfg.dealias)?;
    let mu = to_physical(&mu_hat(&c_hat, &f_hat, params));
    let grad_c: Vec<ScalarField> = spectral_gradient(&c_hat).iter().map(to_physical).collect();
    let u = state.u.components();

    // Momentum: -div(u⊗u) + μ∇c.
    let mut n_u: Vec<SpectralField> = (0..d)
        .map(|i| {
            let row: Vec<SpectralField> = (0..d)
                .map(|j| {
                    let mut s = to_spectral(&u[i].mul(&u[j]));
                    dealias(&mut s);
                    s
                })
                .collect();
            let adv = spectral_divergence(&row);
            let mut cap = to_spectral(&mu.mul(&grad_c[i]));
            dealias(&mut cap);
            let coeffs = cap
                .coeffs()
                .iter()
                .zip(adv.coeffs())
                .map(|(a, b)| a - b)
                .collect();
            let mut s = SpectralField::from_vec(g, coeffs);
            s.coeffs_mut()[0] = Complex64::new(0.0, 0.0);
            s
        })
        .collect();
    project_in_place(&mut n_u);

    // Order parameter advection: -div(cu).
    let flux: Vec<SpectralField> = (0..d)
        .map(|j| {
            let mut s = to_spectral(&state.c.mul(&u[j]));
            dealias(&mut s);
            s
        })
        .collect();
    let n_c = spectral_divergence(&flux);

    let (nu, m, gamma, s_stab) = (
        params.nu,
        params.mobility,
        params.gamma,
        params.stabilization,
    );
    let c_new: Vec<Complex64> = (0..g.spectral_len())
        .into_par_iter()
        .map(|s| {
            let k2 = tab.ksq[s];
            let rhs = c_hat.coeffs()[s]
                - dt * n_c.coeffs()[s]
                - dt * m * k2 * (f_hat.coeffs()[s] - s_stab * c_hat.coeffs()[s]);
            rhs / (1.0 + dt * m * gamma * k2 * k2 + dt * s_stab * m * k2)
        })
        .collect();

    let mut u_new: Vec<SpectralField> = u
        .iter()
        .zip(&n_u)
        .map(|(ui, ni)| {
            let ui_hat = to_spectral(ui);
            let coeffs = (0..g.spectral_len())
                .into_par_iter()
                .map(|s| (ui_hat.coeffs()[s] + dt * ni.coeffs()[s]) / (1.0 + dt * nu * tab.ksq[s]))
                .collect();
            SpectralField::from_vec(g, coeffs)
        })
        .collect();
    project_in_place(&mut u_new);

    let c = to_physical(&SpectralField::from_vec(g, c_new));
    let u = VectorField::from_parts(g, u_new.iter().map(to_physical).collect(), true);
    let t = state.t + dt;
    if !c.is_finite() || !u.is_finite() {
        return Err(Error::BlowUp { t, dt });
    }
    Ok(State { t, u, c })
}

/// Transform of `f(c)`, optionally dealiased.
fn bulk_force_hat(c: &ScalarField, params: &PhysParams, dealias: bool) -> Result<SpectralField> {
    if c.values().iter().any(|v| v.is_nan()) {
        return Err(Error::Domain("order parameter contains NaN".into()));
    }
    let pot = params.potential;
    let mut f_hat = to_spectral(&c.map(|s| pot.f_raw(s)));
    if dealias {
        dealias_in_place(&mut f_hat);
    }
    Ok(f_hat)
}

fn mu_hat(c_hat: &SpectralField, f_hat: &SpectralField, params: &PhysParams) -> SpectralField {
    let g = c_hat.grid();
    let tab = tables(g);
    let coeffs = f_hat
        .coeffs()
        .par_iter()
        .zip(c_hat.coeffs().par_iter())
        .zip(tab.ksq.par_iter())
        .map(|((f, c), &k2)| f + params.gamma * k2 * c)
        .collect();
    SpectralField::from_vec(g, coeffs)
}
