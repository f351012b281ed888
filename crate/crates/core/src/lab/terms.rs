//! Remainder terms of the energy balance for mollified solutions.
//!
//! Testing the momentum equation with `u_ε` and the order-parameter equation
//! with `μ_ε` leaves commutator remainders that must vanish as `ε → 0` for
//! the energy equality to hold. Each is evaluated here on a sequence of
//! states, with space integrals by grid quadrature and time integrals by the
//! trapezoidal rule.

use crate::error::{Error, Result};
use crate::solver::{chemical_potential, PhysParams, State};
use crate::spectral::{gradient, ScalarField, VectorField};

use super::commutator::cet_commutator;
use super::kernel::{make_mollifier, Backend, MollifierKernel};
use super::{check_ladder, DecayReport, Term};

/// All remainder terms at one radius.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ProofTerms {
    pub epsilon: f64,
    /// `∫∫ r_ε(u,u) : ∇u_ε`
    pub i11: f64,
    /// `-∫∫ (u-u_ε)⊗(u-u_ε) : ∇u_ε`
    pub i12: f64,
    /// `-γ∫∫ (Δc_ε∇c_ε - (Δc∇c)_ε + ∇c_ε·∇(∇c)_ε - ∇c·∇(∇c)_ε)·u_ε`
    pub i21: f64,
    /// `-∫∫ (f(c)_ε - f(c_ε)) u_ε·∇c_ε`
    pub i221: f64,
    /// `∫∫ μ_ε u_ε·∇c_ε`
    pub i222: f64,
    /// `-∫∫ (f(c)_ε - f(c_ε)) (u·∇c)_ε`
    pub j111: f64,
    /// `-m∫∫ ∇(f(c)_ε - f(c_ε))·∇μ_ε`
    pub j112: f64,
    /// Change of `∫F(c_ε) + γ/2|∇c_ε|²` over the run minus the same change
    /// without mollification.
    pub j12: f64,
    /// `∫∫ ∇μ_ε·(c_ε u_ε - (cu)_ε)`
    pub j21: f64,
    /// `J21 - ∫∫ μ_ε div((cu)_ε)`; cancels `I222`.
    pub j22: f64,
    /// Largest CET identity residual over the states, relative to `max|u|²`.
    pub cet_residual: f64,
}

impl ProofTerms {
    pub fn value(&self, term: Term) -> f64 {
        match term {
            Term::I11 => self.i11,
            Term::I12 => self.i12,
            Term::I21 => self.i21,
            Term::I221 => self.i221,
            Term::J111 => self.j111,
            Term::J112 => self.j112,
            Term::J21 => self.j21,
            Term::J12 => self.j12,
            Term::CetResidual => self.cet_residual,
            Term::Conv2Ratio | Term::Conv3Ratio => f64::NAN,
        }
    }

    /// `|I222 + J22| / |I222|` (0 when both vanish).
    pub fn cancellation_defect(&self) -> f64 {
        let s = (self.i222 + self.j22).abs();
        if s == 0.0 {
            0.0
        } else {
            s / self.i222.abs()
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProofTermReport {
    pub reports: Vec<DecayReport>,
    pub per_epsilon: Vec<ProofTerms>,
}

impl ProofTermReport {
    pub fn report(&self, term: Term) -> Option<&DecayReport> {
        self.reports.iter().find(|r| r.term == term)
    }
}

/// Space integrals at one instant.
#[derive(Default, Clone, Copy)]
struct Integrands {
    i11: f64,
    i12: f64,
    i21: f64,
    i221: f64,
    i222: f64,
    j111: f64,
    j112: f64,
    j21: f64,
    j22: f64,
    boundary_moll: f64,
    boundary_raw: f64,
    cet: f64,
}

fn sum_dot(a: &[ScalarField], b: &[ScalarField]) -> ScalarField {
    let mut acc = ScalarField::zeros(a[0].grid());
    for (x, y) in a.iter().zip(b) {
        acc = acc.add(&x.mul(y));
    }
    acc
}

fn integrands(
    state: &State,
    params: &PhysParams,
    kernel: &MollifierKernel,
    backend: Backend,
) -> Result<Integrands> {
    let g = state.grid();
    let d = g.dim();
    let moll = |f: &ScalarField| kernel.convolve(f, backend);
    let pot = params.potential;
    let u: Vec<ScalarField> = state.u.components().to_vec();
    let c = &state.c;

    let mu = chemical_potential(c, params)?;
    let grad_c = gradient(c).into_components();
    let lap_c = crate::spectral::laplacian(c);

    let ue: Vec<ScalarField> = u.iter().map(moll).collect();
    let ce = moll(c);
    let mue = moll(&mu);
    let grad_ce = gradient(&ce).into_components();
    let grad_mue = gradient(&mue).into_components();
    let lap_ce = crate::spectral::laplacian(&ce);
    // hess_ce[i][j] = ∂_j ∂_i c_ε
    let hess_ce: Vec<Vec<ScalarField>> = grad_ce
        .iter()
        .map(|gc| gradient(gc).into_components())
        .collect();
    let grad_ue: Vec<Vec<ScalarField>> =
        ue.iter().map(|ui| gradient(ui).into_components()).collect();

    let w: Vec<ScalarField> = u.iter().zip(&ue).map(|(a, b)| a.sub(b)).collect();
    let mut i12_int = ScalarField::zeros(g);
    for i in 0..d {
        for j in 0..d {
            i12_int = i12_int.add(&w[i].mul(&w[j]).mul(&grad_ue[i][j]));
        }
    }
    let u_field = VectorField::new(u.clone())?;
    let r = cet_commutator(&u_field, kernel)?;
    let i11 = r.contract(&grad_ue).integral();

    // Residual of (u⊗u)_ε = u_ε⊗u_ε + r_ε - (u-u_ε)⊗(u-u_ε).
    let umax2 = u_field.max_abs().powi(2);
    let mut cet = 0.0_f64;
    for i in 0..d {
        for j in i..d {
            let res = moll(&u[i].mul(&u[j]))
                .sub(&ue[i].mul(&ue[j]))
                .sub(r.get(i, j))
                .add(&w[i].mul(&w[j]));
            cet = cet.max(res.max_abs());
        }
    }
    if umax2 > 0.0 {
        cet /= umax2;
    }

    let mut v_dot_ue = ScalarField::zeros(g);
    for i in 0..d {
        let mut vi = lap_ce.mul(&grad_ce[i]).sub(&moll(&lap_c.mul(&grad_c[i])));
        for j in 0..d {
            vi = vi.add(&grad_ce[j].sub(&grad_c[j]).mul(&hess_ce[i][j]));
        }
        v_dot_ue = v_dot_ue.add(&vi.mul(&ue[i]));
    }
    let i21 = -params.gamma * v_dot_ue.integral();

    let f_moll = moll(&c.map(|s| pot.f_raw(s)));
    let f_of_ce = ce.map(|s| pot.f_raw(s));
    let f_diff = f_moll.sub(&f_of_ce);
    let ue_grad_ce = sum_dot(&ue, &grad_ce);
    let i221 = -f_diff.mul(&ue_grad_ce).integral();
    let i222 = mue.mul(&ue_grad_ce).integral();

    let u_grad_c = moll(&sum_dot(&u, &grad_c));
    let j111 = -f_diff.mul(&u_grad_c).integral();
    let grad_fdiff = gradient(&f_diff).into_components();
    let j112 = -params.mobility * sum_dot(&grad_fdiff, &grad_mue).integral();

    let cu_e: Vec<ScalarField> = u.iter().map(|ui| moll(&c.mul(ui))).collect();
    let flux_gap: Vec<ScalarField> = ue
        .iter()
        .zip(&cu_e)
        .map(|(uei, cui)| ce.mul(uei).sub(cui))
        .collect();
    let j21 = sum_dot(&grad_mue, &flux_gap).integral();
    let div_cu_e = crate::spectral::divergence(&VectorField::new(cu_e)?);
    let j22 = j21 - mue.mul(&div_cu_e).integral();

    let free = |c: &ScalarField, grad: &[ScalarField]| {
        c.map(|s| pot.free_energy_raw(s)).integral()
            + 0.5 * params.gamma * sum_dot(grad, grad).integral()
    };

    Ok(Integrands {
        i11,
        i12: -i12_int.integral(),
        i21,
        i221,
        i222,
        j111,
        j112,
        j21,
        j22,
        boundary_moll: free(&ce, &grad_ce),
        boundary_raw: free(c, &grad_c),
        cet,
    })
}

/// Every remainder term at the radius of `kernel`.
pub fn proof_terms_at(
    states: &[State],
    params: &PhysParams,
    kernel: &MollifierKernel,
    backend: Backend,
) -> Result<ProofTerms> {
    if states.len() < 2 {
        return Err(Error::Input(
            "remainder terms need at least two time samples".into(),
        ));
    }
    if states.windows(2).any(|w| !(w[1].t > w[0].t)) {
        return Err(Error::Input("states are not sorted by time".into()));
    }
    if states.iter().any(|s| s.grid() != kernel.grid()) {
        return Err(Error::Input(
            "states and kernel live on different grids".into(),
        ));
    }
    let vals = states
        .iter()
        .map(|s| integrands(s, params, kernel, backend))
        .collect::<Result<Vec<_>>>()?;
    let trap = |get: fn(&Integrands) -> f64| -> f64 {
        states
            .windows(2)
            .zip(vals.windows(2))
            .map(|(s, v)| 0.5 * (s[1].t - s[0].t) * (get(&v[0]) + get(&v[1])))
            .sum()
    };
    let first = vals[0];
    let last = vals[vals.len() - 1];
    Ok(ProofTerms {
        epsilon: kernel.epsilon(),
        i11: trap(|v| v.i11),
        i12: trap(|v| v.i12),
        i21: trap(|v| v.i21),
        i221: trap(|v| v.i221),
        i222: trap(|v| v.i222),
        j111: trap(|v| v.j111),
        j112: trap(|v| v.j112),
        j21: trap(|v| v.j21),
        j22: trap(|v| v.j22),
        j12: (last.boundary_moll - first.boundary_moll) - (last.boundary_raw - first.boundary_raw),
        cet_residual: vals.iter().map(|v| v.cet).fold(0.0, f64::max),
    })
}

/// Sweeps `epsilons` (strictly decreasing) and fits the decay of every
/// term. `alpha` is the Hölder exponent assumed for the velocity; the
/// predicted slope of `I11` and `I12` is `3α - 1`.
pub fn proof_terms(
    states: &[State],
    params: &PhysParams,
    epsilons: &[f64],
    alpha: f64,
    backend: Backend,
) -> Result<ProofTermReport> {
    check_ladder(epsilons)?;
    let grid = states
        .first()
        .ok_or_else(|| Error::Input("no states given".into()))?
        .grid();
    let per_epsilon = epsilons
        .iter()
        .map(|&e| proof_terms_at(states, params, &make_mollifier(grid, e)?, backend))
        .collect::<Result<Vec<_>>>()?;
    let mut reports = Vec::new();
    for term in Term::PROOF_TERMS.iter().chain(&[Term::CetResidual]) {
        let predicted = match term {
            Term::I11 | Term::I12 => Some(3.0 * alpha - 1.0),
            _ => None,
        };
        let values = per_epsilon.iter().map(|p| p.value(*term)).collect();
        reports.push(DecayReport::new(
            *term,
            epsilons.to_vec(),
            values,
            predicted,
            alpha,
        )?);
    }
    Ok(ProofTermReport {
        reports,
        per_epsilon,
    })
}
