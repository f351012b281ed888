//! Homogeneous free energy densities `F`, `f = F'`, `f'` and the constant
//! `α` in the lower bound `f'(s) >= -α`.

use crate::error::{Error, Result};

pub const DEFAULT_CLAMP_DELTA: f64 = 1e-8;
pub const MAX_CLAMP_DELTA: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PotentialKind {
    /// `F(s) = (s² - 1)² / 4`.
    Polynomial,
    /// Flory–Huggins: `(θ/2)[(1+s)ln(1+s) + (1-s)ln(1-s)] - (θ_c/2)s²`.
    Logarithmic,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PotentialSpec {
    pub kind: PotentialKind,
    pub theta: f64,
    pub theta_c: f64,
    pub clamp_delta: f64,
}

impl PotentialSpec {
    pub fn polynomial() -> Self {
        Self {
            kind: PotentialKind::Polynomial,
            theta: 0.0,
            theta_c: 0.0,
            clamp_delta: DEFAULT_CLAMP_DELTA,
        }
    }

    pub fn logarithmic(theta: f64, theta_c: f64, clamp_delta: f64) -> Result<Self> {
        let spec = Self {
            kind: PotentialKind::Logarithmic,
            theta,
            theta_c,
            clamp_delta,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.kind == PotentialKind::Polynomial {
            return Ok(());
        }
        if !(self.theta > 0.0 && self.theta.is_finite()) {
            return Err(Error::Config(format!(
                "potential.theta must be positive, got {}",
                self.theta
            )));
        }
        if !(self.theta_c > 0.0 && self.theta_c.is_finite()) {
            return Err(Error::Config(format!(
                "potential.theta_c must be positive, got {}",
                self.theta_c
            )));
        }
        if self.theta >= self.theta_c {
            return Err(Error::Config(format!(
                "logarithmic potential needs theta < theta_c (got theta = {}, theta_c = {}); \
                 otherwise f' has no negative lower bound and there is no phase separation",
                self.theta, self.theta_c
            )));
        }
        if !(self.clamp_delta > 0.0 && self.clamp_delta <= MAX_CLAMP_DELTA) {
            return Err(Error::Config(format!(
                "potential.clamp_delta must lie in (0, {MAX_CLAMP_DELTA}], got {}",
                self.clamp_delta
            )));
        }
        Ok(())
    }

    /// `F(s)`; logarithm arguments are clamped to at least `clamp_delta`.
    pub fn free_energy(&self, s: f64) -> Result<f64> {
        check_nan(s)?;
        Ok(self.free_energy_raw(s))
    }

    /// `f(s) = F'(s)`; for the logarithmic kind `s` is clamped to
    /// `[-1 + δ, 1 - δ]`.
    pub fn f(&self, s: f64) -> Result<f64> {
        check_nan(s)?;
        Ok(self.f_raw(s))
    }

    /// `f'(s)`, clamped like [`PotentialSpec::f`].
    pub fn f_prime(&self, s: f64) -> Result<f64> {
        check_nan(s)?;
        Ok(self.f_prime_raw(s))
    }

    /// `f(s)` without clamping; the logarithmic kind rejects `|s| >= 1`.
    pub fn f_unclamped(&self, s: f64) -> Result<f64> {
        self.check_open_interval(s)?;
        Ok(match self.kind {
            PotentialKind::Polynomial => s * s * s - s,
            PotentialKind::Logarithmic => {
                0.5 * self.theta * ((1.0 + s) / (1.0 - s)).ln() - self.theta_c * s
            }
        })
    }

    /// `f'(s)` without clamping; the logarithmic kind rejects `|s| >= 1`.
    pub fn f_prime_unclamped(&self, s: f64) -> Result<f64> {
        self.check_open_interval(s)?;
        Ok(match self.kind {
            PotentialKind::Polynomial => 3.0 * s * s - 1.0,
            PotentialKind::Logarithmic => self.theta / (1.0 - s * s) - self.theta_c,
        })
    }

    /// Sharp constant `α > 0` with `f'(s) >= -α` on `(-1, 1)`.
    pub fn stabilization_alpha(&self) -> Result<f64> {
        match self.kind {
            PotentialKind::Polynomial => Ok(1.0),
            PotentialKind::Logarithmic => {
                self.validate()?;
                Ok(self.theta_c - self.theta)
            }
        }
    }

    /// Largest value of `f'` over `[-1, 1]` after clamping.
    pub fn f_prime_sup(&self) -> f64 {
        match self.kind {
            PotentialKind::Polynomial => 2.0,
            PotentialKind::Logarithmic => self.f_prime_raw(1.0),
        }
    }

    /// True when `f'` extends continuously to the closed interval `[-1, 1]`.
    /// Only the polynomial kind qualifies; the logarithmic `f'` blows up like
    /// `θ/(1 - s²)`.
    pub fn f_prime_continuous_on_closed_interval(&self) -> bool {
        self.kind == PotentialKind::Polynomial
    }

    pub(crate) fn free_energy_raw(&self, s: f64) -> f64 {
        match self.kind {
            PotentialKind::Polynomial => {
                let q = s * s - 1.0;
                0.25 * q * q
            }
            PotentialKind::Logarithmic => {
                let d = self.clamp_delta;
                let a = 1.0 + s;
                let b = 1.0 - s;
                0.5 * self.theta * (a * a.max(d).ln() + b * b.max(d).ln())
                    - 0.5 * self.theta_c * s * s
            }
        }
    }

    pub(crate) fn f_raw(&self, s: f64) -> f64 {
        match self.kind {
            PotentialKind::Polynomial => s * s * s - s,
            PotentialKind::Logarithmic => {
                let s = self.clamp(s);
                0.5 * self.theta * ((1.0 + s) / (1.0 - s)).ln() - self.theta_c * s
            }
        }
    }

    pub(crate) fn f_prime_raw(&self, s: f64) -> f64 {
        match self.kind {
            PotentialKind::Polynomial => 3.0 * s * s - 1.0,
            PotentialKind::Logarithmic => {
                let s = self.clamp(s);
                self.theta / (1.0 - s * s) - self.theta_c
            }
        }
    }

    fn clamp(&self, s: f64) -> f64 {
        let lim = 1.0 - self.clamp_delta;
        s.clamp(-lim, lim)
    }

    fn check_open_interval(&self, s: f64) -> Result<()> {
        check_nan(s)?;
        if self.kind == PotentialKind::Logarithmic && s.abs() >= 1.0 {
            return Err(Error::Domain(format!(
                "logarithmic potential is undefined at s = {s} (needs |s| < 1)"
            )));
        }
        Ok(())
    }
}

fn check_nan(s: f64) -> Result<()> {
    if s.is_nan() {
        Err(Error::Domain("potential evaluated at NaN".into()))
    } else {
        Ok(())
    }
}

pub fn free_energy(spec: &PotentialSpec, s: f64) -> Result<f64> {
    spec.free_energy(s)
}

pub fn f_of_potential(spec: &PotentialSpec, s: f64) -> Result<f64> {
    spec.f(s)
}

pub fn f_prime_of_potential(spec: &PotentialSpec, s: f64) -> Result<f64> {
    spec.f_prime(s)
}

pub fn stabilization_alpha(spec: &PotentialSpec) -> Result<f64> {
    spec.stabilization_alpha()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn log12() -> PotentialSpec {
        PotentialSpec::logarithmic(1.0, 2.0, DEFAULT_CLAMP_DELTA).unwrap()
    }

    #[test]
    fn polynomial_values() {
        let p = PotentialSpec::polynomial();
        assert_eq!(p.free_energy(0.0).unwrap(), 0.25);
        assert_eq!(p.free_energy(1.0).unwrap(), 0.0);
        assert_eq!(p.free_energy(-1.0).unwrap(), 0.0);
        assert_eq!(p.stabilization_alpha().unwrap(), 1.0);
        assert_eq!(p.f_prime(0.0).unwrap(), -1.0);
    }

    #[test]
    fn logarithmic_values() {
        let p = log12();
        assert_eq!(p.free_energy(0.0).unwrap(), 0.0);
        assert_eq!(p.f(0.0).unwrap(), 0.0);
        assert_eq!(p.stabilization_alpha().unwrap(), 1.0);
        assert!(p.f(1.0 - 1e-6).unwrap() > 5.0);
        let q = PotentialSpec::logarithmic(1.5, 2.0, DEFAULT_CLAMP_DELTA).unwrap();
        assert_eq!(q.stabilization_alpha().unwrap(), 0.5);
    }

    #[test]
    fn rejects_bad_specs() {
        assert!(matches!(
            PotentialSpec::logarithmic(2.0, 2.0, 1e-8),
            Err(Error::Config(_))
        ));
        assert!(PotentialSpec::logarithmic(1.0, 2.0, 0.0).is_err());
        assert!(PotentialSpec::logarithmic(1.0, 2.0, 2e-3).is_err());
    }

    #[test]
    fn domain_errors() {
        let p = log12();
        assert!(matches!(p.free_energy(f64::NAN), Err(Error::Domain(_))));
        assert!(matches!(p.f_unclamped(1.0), Err(Error::Domain(_))));
        assert!(matches!(p.f_prime_unclamped(-1.5), Err(Error::Domain(_))));
        assert!(p.f(1.0).unwrap().is_finite());
    }

    #[test]
    fn continuity_predicate() {
        assert!(PotentialSpec::polynomial().f_prime_continuous_on_closed_interval());
        assert!(!log12().f_prime_continuous_on_closed_interval());
    }
}
