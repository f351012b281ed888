use std::path::{Path, PathBuf};

use crate::energy::{energy, EnergyRecord};
use crate::error::{Error, Result};
use crate::io::{write_energy_csv, write_snapshot};

use super::{step, PhysParams, State, StepperConfig};

/// What a run records and where it writes.
#[derive(Debug, Clone, PartialEq)]
pub struct OutputPlan {
    /// Record energies every this many steps (the first and last step are
    /// always recorded).
    pub energy_every: usize,
    /// Snapshot times; each is taken at the first step within `dt/2` of it.
    pub snapshot_times: Vec<f64>,
    /// Directory for `energy.csv` and snapshot files; nothing is written
    /// when `None`.
    pub dir: Option<PathBuf>,
    /// Keep snapshot states in the returned summary.
    pub keep_snapshots: bool,
}

impl Default for OutputPlan {
    fn default() -> Self {
        Self {
            energy_every: 1,
            snapshot_times: Vec::new(),
            dir: None,
            keep_snapshots: false,
        }
    }
}

#[derive(Debug, Clone)]
pub struct RunSummary {
    pub final_state: State,
    pub steps: usize,
    pub records: Vec<EnergyRecord>,
    pub snapshots: Vec<State>,
    pub snapshot_paths: Vec<PathBuf>,
    pub energy_csv: Option<PathBuf>,
}

/// Advances `initial` to `t_end`; see [`simulate_with`].
pub fn simulate(
    initial: State,
    params: &PhysParams,
    cfg: &StepperConfig,
    t_end: f64,
    plan: &OutputPlan,
) -> Result<RunSummary> {
    simulate_with(initial, params, cfg, t_end, plan, |_| {})
}

/// Advances `initial` to `t_end` in steps of `cfg.dt` (the last step is
/// shortened to land on `t_end`), calling `on_step` with every new state.
///
/// On blow-up the energy records gathered so far are flushed to disk
/// before the error is returned.
pub fn simulate_with(
    initial: State,
    params: &PhysParams,
    cfg: &StepperConfig,
    t_end: f64,
    plan: &OutputPlan,
    mut on_step: impl FnMut(&State),
) -> Result<RunSummary> {
    params.validate()?;
    let t0 = initial.t;
    if !(t_end > t0) {
        return Err(Error::Config(format!(
            "end time {t_end} must exceed the initial time {t0}"
        )));
    }
    if plan.energy_every == 0 {
        return Err(Error::Config(
            "output.energy_every must be at least 1".into(),
        ));
    }
    if let Some(dir) = &plan.dir {
        std::fs::create_dir_all(dir)?;
    }
    let dt = cfg.dt;
    let span = t_end - t0;
    let full = (span / dt * (1.0 + 1e-12)).floor() as usize;
    let rest = span - full as f64 * dt;
    let steps = if rest > 1e-9 * dt { full + 1 } else { full };

    let mut times = plan.snapshot_times.clone();
    times.sort_by(f64::total_cmp);
    let mut next_snap = 0;

    let mut out = Output {
        plan,
        records: Vec::new(),
        snapshots: Vec::new(),
        snapshot_paths: Vec::new(),
    };

    let mut state = initial;
    out.record(&state, params)?;
    out.snapshots_due(&state, &times, &mut next_snap, dt)?;

    for k in 1..=steps {
        let mut sub = *cfg;
        if k > full {
            sub.dt = rest;
        }
        state = match step(&state, params, &sub) {
            Ok(mut s) => {
                s.t = if k > full { t_end } else { t0 + k as f64 * dt };
                s
            }
            Err(e) => {
                out.flush()?;
                return Err(e);
            }
        };
        on_step(&state);
        if k % plan.energy_every == 0 || k == steps {
            out.record(&state, params)?;
        }
        out.snapshots_due(&state, &times, &mut next_snap, dt)?;
    }

    let energy_csv = out.flush()?;
    Ok(RunSummary {
        final_state: state,
        steps,
        records: out.records,
        snapshots: out.snapshots,
        snapshot_paths: out.snapshot_paths,
        energy_csv,
    })
}

struct Output<'a> {
    plan: &'a OutputPlan,
    records: Vec<EnergyRecord>,
    snapshots: Vec<State>,
    snapshot_paths: Vec<PathBuf>,
}

impl Output<'_> {
    fn record(&mut self, state: &State, params: &PhysParams) -> Result<()> {
        let mut r = energy(state, params)?;
        if let (Some(first), Some(prev)) = (self.records.first(), self.records.last()) {
            r.cum_dissipation = prev.cum_dissipation
                + 0.5 * (r.t - prev.t) * (r.dissipation_rate() + prev.dissipation_rate());
            r.defect = r.total() + r.cum_dissipation - first.total();
        }
        self.records.push(r);
        Ok(())
    }

    fn snapshots_due(
        &mut self,
        state: &State,
        times: &[f64],
        next: &mut usize,
        dt: f64,
    ) -> Result<()> {
        let mut taken = false;
        while *next < times.len() && state.t >= times[*next] - 0.5 * dt {
            *next += 1;
            if taken {
                continue;
            }
            taken = true;
            if let Some(dir) = &self.plan.dir {
                let path = snapshot_path(dir, self.snapshot_paths.len());
                write_snapshot(state, &path)?;
                self.snapshot_paths.push(path);
            }
            if self.plan.keep_snapshots {
                self.snapshots.push(state.clone());
            }
        }
        Ok(())
    }

    fn flush(&self) -> Result<Option<PathBuf>> {
        match &self.plan.dir {
            Some(dir) => {
                let path = dir.join("energy.csv");
                write_energy_csv(&self.records, &path)?;
                Ok(Some(path))
            }
            None => Ok(None),
        }
    }
}

pub(crate) fn snapshot_path(dir: &Path, index: usize) -> PathBuf {
    dir.join(format!("snapshot_{index:04}.nsch"))
}
