//! Flat `section.key = value` run configuration.
//!
//! Blank lines and `#` comments are ignored. Unknown, duplicated or
//! inapplicable keys are errors.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use crate::error::{Error, ParseError, Result};
use crate::io::read_snapshot;
use crate::potential::{PotentialKind, PotentialSpec, DEFAULT_CLAMP_DELTA};
use crate::solver::initial::{spinodal, taylor_green};
use crate::solver::{OutputPlan, PhysParams, State, StepperConfig};
use crate::spectral::{Grid, VectorField};

#[derive(Debug, Clone, PartialEq)]
pub enum InitialSpec {
    TaylorGreen {
        amplitude: f64,
    },
    /// Band-limited noise around `mean`, optionally with a Taylor–Green
    /// velocity of amplitude `velocity_amplitude`.
    Spinodal {
        mean: f64,
        amplitude: f64,
        band: usize,
        seed: u64,
        velocity_amplitude: f64,
    },
    File {
        path: PathBuf,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct OutputSpec {
    pub energy_every: usize,
    pub snapshot_times: Vec<f64>,
    pub dir: PathBuf,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub grid: Grid,
    pub params: PhysParams,
    pub stepper: StepperConfig,
    pub t_end: f64,
    pub initial: InitialSpec,
    pub output: OutputSpec,
}

const KEYS: &[&str] = &[
    "grid.dim",
    "grid.n",
    "params.nu",
    "params.gamma",
    "params.mobility",
    "params.stabilization",
    "potential.kind",
    "potential.theta",
    "potential.theta_c",
    "potential.clamp_delta",
    "stepper.dt",
    "stepper.t_end",
    "stepper.dealias",
    "initial.kind",
    "initial.amplitude",
    "initial.mean",
    "initial.band",
    "initial.seed",
    "initial.velocity_amplitude",
    "initial.path",
    "output.energy_every",
    "output.snapshot_times",
    "output.dir",
];

struct Entries {
    map: BTreeMap<String, (usize, String)>,
    used: Vec<String>,
}

impl Entries {
    fn raw(&mut self, key: &str) -> Option<(usize, String)> {
        let v = self.map.get(key).cloned();
        if v.is_some() {
            self.used.push(key.to_string());
        }
        v
    }

    fn required(&mut self, key: &str) -> std::result::Result<(usize, String), ParseError> {
        self.raw(key)
            .ok_or_else(|| ParseError::new(0, format!("missing required key `{key}`")))
    }

    fn num<T: std::str::FromStr>(
        &mut self,
        key: &str,
        default: Option<T>,
    ) -> std::result::Result<(usize, T), ParseError> {
        let (line, text) = match (self.raw(key), default) {
            (Some(v), _) => v,
            (None, Some(d)) => return Ok((0, d)),
            (None, None) => {
                return Err(ParseError::new(0, format!("missing required key `{key}`")))
            }
        };
        text.parse::<T>()
            .map(|v| (line, v))
            .map_err(|_| ParseError::new(line, format!("`{key}`: malformed number {text:?}")))
    }

    fn positive(
        &mut self,
        key: &str,
        default: Option<f64>,
        meaning: &str,
    ) -> std::result::Result<f64, ParseError> {
        let (line, v) = self.num::<f64>(key, default)?;
        if !(v > 0.0 && v.is_finite()) {
            return Err(ParseError::new(
                line,
                format!("`{key}` = {v}: {meaning} must be a positive constant"),
            ));
        }
        Ok(v)
    }
}

pub fn parse_config(text: &str) -> Result<RunConfig> {
    Ok(parse(text)?)
}

fn parse(text: &str) -> std::result::Result<RunConfig, ParseError> {
    let mut map = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let Some((k, v)) = body.split_once('=') else {
            return Err(ParseError::new(
                line,
                format!("expected `section.key = value`, got {body:?}"),
            ));
        };
        let key = k.trim().to_string();
        let value = v.trim().to_string();
        if !KEYS.contains(&key.as_str()) {
            return Err(ParseError::new(line, format!("unknown key `{key}`")));
        }
        if value.is_empty() {
            return Err(ParseError::new(line, format!("`{key}` has no value")));
        }
        if let Some((first, _)) = map.insert(key.clone(), (line, value)) {
            return Err(ParseError::new(
                line,
                format!("`{key}` already set on line {first}"),
            ));
        }
    }
    let mut e = Entries {
        map,
        used: Vec::new(),
    };

    let (dim_line, dim) = e.num::<usize>("grid.dim", None)?;
    let (n_line, n) = e.num::<usize>("grid.n", None)?;
    let grid = Grid::new(dim, n).map_err(|err| {
        let line = if dim == 2 || dim == 3 {
            n_line
        } else {
            dim_line
        };
        ParseError::new(line, err.to_string())
    })?;

    let (kind_line, kind) = e.required("potential.kind")?;
    let potential = match kind.as_str() {
        "polynomial" => PotentialSpec::polynomial(),
        "logarithmic" => {
            let theta = e.positive("potential.theta", None, "the temperature")?;
            let theta_c = e.positive("potential.theta_c", None, "the critical temperature")?;
            let (dl, delta) = e.num::<f64>("potential.clamp_delta", Some(DEFAULT_CLAMP_DELTA))?;
            PotentialSpec::logarithmic(theta, theta_c, delta).map_err(|err| {
                let line = if err.to_string().contains("clamp_delta") {
                    dl
                } else {
                    kind_line
                };
                ParseError::new(line, err.to_string())
            })?
        }
        other => {
            return Err(ParseError::new(
                kind_line,
                format!("`potential.kind` must be `polynomial` or `logarithmic`, got {other:?}"),
            ))
        }
    };
    let alpha = potential
        .stabilization_alpha()
        .map_err(|err| ParseError::new(kind_line, err.to_string()))?;

    let nu = e.positive("params.nu", None, "the viscosity")?;
    let gamma = e.positive("params.gamma", Some(1.0), "the capillary coefficient")?;
    let mobility = e.positive("params.mobility", None, "the mobility")?;
    let (s_line, stabilization) = e.num::<f64>("params.stabilization", Some(alpha))?;
    if !(stabilization >= 0.0 && stabilization.is_finite()) {
        return Err(ParseError::new(
            s_line,
            format!("`params.stabilization` = {stabilization} must be nonnegative"),
        ));
    }
    let params = PhysParams {
        nu,
        gamma,
        mobility,
        potential,
        stabilization,
    };

    let dt = e.positive("stepper.dt", None, "the time step")?;
    let t_end = e.positive("stepper.t_end", None, "the end time")?;
    let (_, dealias) = e.num::<bool>("stepper.dealias", Some(true))?;
    let stepper = StepperConfig {
        dealias,
        ..StepperConfig::new(dt).map_err(|err| ParseError::new(0, err.to_string()))?
    };

    let (ik_line, ikind) = e.required("initial.kind")?;
    let initial = match ikind.as_str() {
        "taylor_green" => InitialSpec::TaylorGreen {
            amplitude: e.num::<f64>("initial.amplitude", Some(1.0))?.1,
        },
        "spinodal" => {
            let mean = e.num::<f64>("initial.mean", Some(0.0))?.1;
            let amplitude = e.num::<f64>("initial.amplitude", Some(0.05))?.1;
            let (bl, band) = e.num::<usize>("initial.band", Some((n / 8).max(1)))?;
            if band == 0 || 3 * band > n {
                return Err(ParseError::new(
                    bl,
                    format!("`initial.band` = {band} must lie in 1..={}", n / 3),
                ));
            }
            let seed = e.num::<u64>("initial.seed", Some(0))?.1;
            let velocity_amplitude = e.num::<f64>("initial.velocity_amplitude", Some(0.0))?.1;
            InitialSpec::Spinodal {
                mean,
                amplitude,
                band,
                seed,
                velocity_amplitude,
            }
        }
        "file" => InitialSpec::File {
            path: PathBuf::from(e.required("initial.path")?.1),
        },
        other => {
            return Err(ParseError::new(
                ik_line,
                format!(
                    "`initial.kind` must be `taylor_green`, `spinodal` or `file`, got {other:?}"
                ),
            ))
        }
    };

    let (ee_line, energy_every) = e.num::<usize>("output.energy_every", Some(1))?;
    if energy_every == 0 {
        return Err(ParseError::new(
            ee_line,
            "`output.energy_every` must be at least 1",
        ));
    }
    let snapshot_times = match e.raw("output.snapshot_times") {
        None => Vec::new(),
        Some((line, text)) => {
            let mut v = Vec::new();
            for item in text.split(',') {
                let item = item.trim();
                let t: f64 = item.parse().map_err(|_| {
                    ParseError::new(
                        line,
                        format!("`output.snapshot_times`: malformed number {item:?}"),
                    )
                })?;
                if !(0.0..=t_end).contains(&t) {
                    return Err(ParseError::new(
                        line,
                        format!("snapshot time {t} lies outside [0, {t_end}]"),
                    ));
                }
                v.push(t);
            }
            v
        }
    };
    let dir = PathBuf::from(
        e.raw("output.dir")
            .map(|v| v.1)
            .unwrap_or_else(|| "out".into()),
    );

    if let Some((key, (line, _))) = e.map.iter().find(|(k, _)| !e.used.contains(k)) {
        return Err(ParseError::new(
            *line,
            format!("`{key}` does not apply to this configuration"),
        ));
    }

    Ok(RunConfig {
        grid,
        params,
        stepper,
        t_end,
        initial,
        output: OutputSpec {
            energy_every,
            snapshot_times,
            dir,
        },
    })
}

impl RunConfig {
    /// Canonical text form with every default made explicit. Parsing the
    /// dump yields the same configuration.
    pub fn dump(&self) -> String {
        let mut s = String::new();
        let mut kv = |k: &str, v: String| {
            let _ = writeln!(s, "{k} = {v}");
        };
        kv("grid.dim", self.grid.dim().to_string());
        kv("grid.n", self.grid.n().to_string());
        kv("params.nu", format!("{:?}", self.params.nu));
        kv("params.gamma", format!("{:?}", self.params.gamma));
        kv("params.mobility", format!("{:?}", self.params.mobility));
        kv(
            "params.stabilization",
            format!("{:?}", self.params.stabilization),
        );
        let p = self.params.potential;
        match p.kind {
            PotentialKind::Polynomial => kv("potential.kind", "polynomial".into()),
            PotentialKind::Logarithmic => {
                kv("potential.kind", "logarithmic".into());
                kv("potential.theta", format!("{:?}", p.theta));
                kv("potential.theta_c", format!("{:?}", p.theta_c));
                kv("potential.clamp_delta", format!("{:?}", p.clamp_delta));
            }
        }
        kv("stepper.dt", format!("{:?}", self.stepper.dt));
        kv("stepper.t_end", format!("{:?}", self.t_end));
        kv("stepper.dealias", self.stepper.dealias.to_string());
        match &self.initial {
            InitialSpec::TaylorGreen { amplitude } => {
                kv("initial.kind", "taylor_green".into());
                kv("initial.amplitude", format!("{amplitude:?}"));
            }
            InitialSpec::Spinodal {
                mean,
                amplitude,
                band,
                seed,
                velocity_amplitude,
            } => {
                kv("initial.kind", "spinodal".into());
                kv("initial.mean", format!("{mean:?}"));
                kv("initial.amplitude", format!("{amplitude:?}"));
                kv("initial.band", band.to_string());
                kv("initial.seed", seed.to_string());
                kv(
                    "initial.velocity_amplitude",
                    format!("{velocity_amplitude:?}"),
                );
            }
            InitialSpec::File { path } => {
                kv("initial.kind", "file".into());
                kv("initial.path", path.display().to_string());
            }
        }
        kv("output.energy_every", self.output.energy_every.to_string());
        if !self.output.snapshot_times.is_empty() {
            let list: Vec<String> = self
                .output
                .snapshot_times
                .iter()
                .map(|t| format!("{t:?}"))
                .collect();
            kv("output.snapshot_times", list.join(", "));
        }
        kv("output.dir", self.output.dir.display().to_string());
        s
    }

    /// Builds the initial state. Relative file paths resolve against
    /// `base_dir`; a state loaded from file keeps its time, so `t_end` is
    /// an absolute end time.
    pub fn initial_state(&self, base_dir: &Path) -> Result<State> {
        let g = self.grid;
        match &self.initial {
            InitialSpec::TaylorGreen { amplitude } => State::new(
                0.0,
                taylor_green(g, *amplitude),
                crate::spectral::ScalarField::zeros(g),
            ),
            InitialSpec::Spinodal {
                mean,
                amplitude,
                band,
                seed,
                velocity_amplitude,
            } => {
                let c = spinodal(g, *mean, *amplitude, *band, *seed)?;
                let u = if *velocity_amplitude == 0.0 {
                    VectorField::zeros(g)
                } else {
                    taylor_green(g, *velocity_amplitude)
                };
                State::new(0.0, u, c)
            }
            InitialSpec::File { path } => {
                let path = base_dir.join(path);
                let s = read_snapshot(&path)?;
                if s.grid() != g {
                    return Err(Error::Config(format!(
                        "{} holds a {}-dimensional n = {} field, configuration expects {}-dimensional n = {}",
                        path.display(),
                        s.grid().dim(),
                        s.grid().n(),
                        g.dim(),
                        g.n()
                    )));
                }
                if !s.u.is_solenoidal() {
                    return Err(Error::Input(format!(
                        "{}: initial velocity is not divergence-free",
                        path.display()
                    )));
                }
                Ok(s)
            }
        }
    }

    pub fn output_plan(&self, base_dir: &Path) -> OutputPlan {
        OutputPlan {
            energy_every: self.output.energy_every,
            snapshot_times: self.output.snapshot_times.clone(),
            dir: Some(base_dir.join(&self.output.dir)),
            keep_snapshots: false,
        }
    }
}
