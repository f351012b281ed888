//! `chns`: run simulations and mollification diagnostics from the shell.
//!
//! Exit codes: 0 success, 1 error, 2 numerical blow-up, 64 usage error.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use chns_core::energy::{attach_defect, hypothesis_norm};
use chns_core::io::{
    parse_config, read_energy_csv, read_snapshot, write_decay_csv, write_snapshot,
};
use chns_core::lab::{
    epsilon_ladder, holder_seminorm, holder_seminorm_brute_force, lemma1_check, proof_terms,
    synth_holder_field, Backend, Sampled, Term, DEFAULT_SHIFT_BUDGET,
};
use chns_core::potential::PotentialSpec;
use chns_core::solver::{simulate, PhysParams, State};
use chns_core::{Error, Grid, Result, ScalarField};
use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};

const EXIT_ERROR: u8 = 1;
const EXIT_BLOW_UP: u8 = 2;
const EXIT_USAGE: u8 = 64;

#[derive(Parser)]
#[command(
    name = "chns",
    version,
    about = "Cahn-Hilliard/Navier-Stokes runs and diagnostics"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a configuration, writing energy.csv and snapshots.
    Simulate { config: PathBuf },
    /// Recompute the energy defect of one or more runs; with several runs,
    /// estimate its order in dt and extrapolate to dt = 0.
    EnergyAudit {
        #[arg(required = true)]
        csv: Vec<PathBuf>,
        /// Time step of each run, in the order given (default: smallest
        /// spacing between recorded times).
        #[arg(long, value_delimiter = ',')]
        dt: Vec<f64>,
    },
    /// Sweep mollification radii over a snapshot series and write the
    /// decay of every remainder term and the commutator-identity residual.
    DiagnoseCommutator {
        #[arg(required = true)]
        snapshots: Vec<PathBuf>,
        #[arg(long)]
        alpha: f64,
        #[arg(long, default_value_t = 8)]
        eps_count: usize,
        #[command(flatten)]
        backend: BackendFlags,
        /// Run configuration supplying gamma and the potential (default:
        /// gamma = 1, polynomial potential).
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long, default_value = "decay.csv")]
        out: PathBuf,
    },
    /// Hölder seminorm and norm of the fields in a snapshot.
    HolderNorm {
        snapshot: PathBuf,
        #[arg(long)]
        alpha: f64,
        /// Use every lattice shift instead of the sampled set.
        #[arg(long)]
        brute_force: bool,
    },
    /// Time-integrated Hölder norm of the velocity over a snapshot series.
    HypothesisNorm {
        #[arg(required = true)]
        snapshots: Vec<PathBuf>,
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        delta: f64,
    },
    /// Write a divergence-free lacunary velocity of prescribed Hölder
    /// exponent (with c = 0) as a snapshot.
    MakeSynthetic {
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        octaves: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 2)]
        dim: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Mollifier bound ratios for one field of a snapshot.
    Lemma1 {
        snapshot: PathBuf,
        #[arg(long)]
        alpha: f64,
        #[arg(long, value_enum, default_value_t = FieldChoice::U)]
        field: FieldChoice,
        #[arg(long, default_value_t = 8)]
        eps_count: usize,
        #[arg(long, default_value = "lemma1.csv")]
        out: PathBuf,
    },
}

#[derive(Args)]
#[group(multiple = false)]
struct BackendFlags {
    /// Convolve with the sampled lattice kernel (default).
    #[arg(long)]
    quadrature: bool,
    /// Multiply by the continuous transform of the kernel.
    #[arg(long)]
    spectral: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum FieldChoice {
    U,
    C,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(EXIT_USAGE),
            };
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::BlowUp { .. } => ExitCode::from(EXIT_BLOW_UP),
                _ => ExitCode::from(EXIT_ERROR),
            }
        }
    }
}

fn run(command: Command) -> Result<()> {
    match command {
        Command::Simulate { config } => simulate_cmd(&config),
        Command::EnergyAudit { csv, dt } => energy_audit(&csv, &dt),
        Command::DiagnoseCommutator {
            snapshots,
            alpha,
            eps_count,
            backend,
            config,
            out,
        } => {
            let backend = if backend.spectral {
                Backend::Spectral
            } else {
                Backend::Quadrature
            };
            diagnose(
                &snapshots,
                alpha,
                eps_count,
                backend,
                config.as_deref(),
                &out,
            )
        }
        Command::HolderNorm {
            snapshot,
            alpha,
            brute_force,
        } => holder(&snapshot, alpha, brute_force),
        Command::HypothesisNorm {
            snapshots,
            alpha,
            delta,
        } => {
            let states = read_series(&snapshots)?;
            let series: Vec<_> = states.iter().map(|s| (s.t, &s.u)).collect();
            let v = hypothesis_norm(&series, alpha, delta)?;
            println!("hypothesis_norm = {v:.16e}");
            Ok(())
        }
        Command::MakeSynthetic {
            alpha,
            octaves,
            seed,
            n,
            dim,
            out,
        } => {
            let g = Grid::new(dim, n)?;
            let u = synth_holder_field(g, alpha, octaves, seed)?;
            write_snapshot(&State::new(0.0, u, ScalarField::zeros(g))?, &out)?;
            println!("wrote {}", out.display());
            Ok(())
        }
        Command::Lemma1 {
            snapshot,
            alpha,
            field,
            eps_count,
            out,
        } => lemma1(&snapshot, alpha, field, eps_count, &out),
    }
}

fn simulate_cmd(config: &Path) -> Result<()> {
    let text = std::fs::read_to_string(config)?;
    let cfg = parse_config(&text)?;
    let base = config.parent().unwrap_or(Path::new("."));
    let initial = cfg.initial_state(base)?;
    let plan = cfg.output_plan(base);
    let run = simulate(initial, &cfg.params, &cfg.stepper, cfg.t_end, &plan)?;
    let last = run
        .records
        .last()
        .expect("a run records at least one state");
    println!("steps = {}", run.steps);
    println!("t = {:.16e}", run.final_state.t);
    println!("total_energy = {:.16e}", last.total());
    println!("defect = {:.16e}", last.defect);
    println!("max_abs_c = {:.16e}", last.max_abs_c);
    if let Some(p) = &run.energy_csv {
        println!("energy_csv = {}", p.display());
    }
    for p in &run.snapshot_paths {
        println!("snapshot = {}", p.display());
    }
    Ok(())
}

struct Audit {
    dt: f64,
    final_defect: f64,
}

fn energy_audit(paths: &[PathBuf], dts: &[f64]) -> Result<()> {
    if !dts.is_empty() && dts.len() != paths.len() {
        return Err(Error::Input(format!(
            "{} time steps given for {} files",
            dts.len(),
            paths.len()
        )));
    }
    let mut audits = Vec::new();
    for (i, path) in paths.iter().enumerate() {
        let stored = read_energy_csv(path)?;
        let mut series = stored.clone();
        attach_defect(&mut series)?;
        let Some(last) = series.last() else {
            return Err(Error::Input(format!("{}: no records", path.display())));
        };
        let (t_max, max_defect) = series
            .iter()
            .map(|r| (r.t, r.defect.abs()))
            .fold((last.t, 0.0), |a, b| if b.1 > a.1 { b } else { a });
        let mismatch = stored
            .iter()
            .zip(&series)
            .map(|(a, b)| (a.defect - b.defect).abs())
            .fold(0.0, f64::max);
        let dt = match dts.get(i) {
            Some(&dt) => dt,
            None => series
                .windows(2)
                .map(|w| w[1].t - w[0].t)
                .fold(f64::INFINITY, f64::min),
        };
        let e0 = series[0].total();
        println!("{}", path.display());
        println!("  records = {}", series.len());
        println!("  dt = {dt:.6e}");
        println!("  max_abs_defect = {max_defect:.16e} (t = {t_max:.6e})");
        println!("  relative_max_abs_defect = {:.6e}", max_defect / e0.abs());
        println!("  final_defect = {:.16e}", last.defect);
        println!("  stored_column_mismatch = {mismatch:.3e}");
        audits.push(Audit {
            dt,
            final_defect: last.defect,
        });
    }
    if audits.len() < 2 {
        println!("extrapolation: needs runs at two or more time steps");
        return Ok(());
    }
    for w in audits.windows(2) {
        let (a, b) = (&w[0], &w[1]);
        if !(a.dt > 0.0 && b.dt > 0.0 && a.dt != b.dt && a.dt.is_finite() && b.dt.is_finite()) {
            return Err(Error::Input(format!(
                "cannot extrapolate between time steps {} and {}",
                a.dt, b.dt
            )));
        }
        let order = (a.final_defect / b.final_defect).abs().ln() / (a.dt / b.dt).ln();
        // First-order Richardson: defect(dt) = D0 + C dt.
        let d0 = (a.dt * b.final_defect - b.dt * a.final_defect) / (a.dt - b.dt);
        println!(
            "dt {:.6e} -> {:.6e}: observed_order = {order:.4}, extrapolated_defect = {d0:.6e}",
            a.dt, b.dt
        );
    }
    Ok(())
}

fn read_series(paths: &[PathBuf]) -> Result<Vec<State>> {
    let mut states = paths
        .iter()
        .map(|p| read_snapshot(p))
        .collect::<Result<Vec<_>>>()?;
    states.sort_by(|a, b| a.t.total_cmp(&b.t));
    Ok(states)
}

fn diagnose(
    paths: &[PathBuf],
    alpha: f64,
    eps_count: usize,
    backend: Backend,
    config: Option<&Path>,
    out: &Path,
) -> Result<()> {
    let states = read_series(paths)?;
    let params = match config {
        Some(p) => parse_config(&std::fs::read_to_string(p)?)?.params,
        None => PhysParams::new(1.0, 1.0, 1.0, PotentialSpec::polynomial())?,
    };
    let epsilons = epsilon_ladder(states[0].grid(), eps_count)?;
    let report = proof_terms(&states, &params, &epsilons, alpha, backend)?;
    write_decay_csv(&report.reports, out)?;
    println!(
        "{:<14}{:>12}{:>12}{:>10}",
        "term", "slope", "predicted", "r2"
    );
    for rep in &report.reports {
        let predicted = rep
            .predicted_slope
            .map_or("-".to_string(), |p| format!("{p:.4}"));
        if rep.fit.identically_zero {
            println!(
                "{:<14}{:>12}{predicted:>12}{:>10}",
                rep.term.name(),
                "zero",
                "-"
            );
        } else {
            println!(
                "{:<14}{:>12.4}{predicted:>12}{:>10.4}",
                rep.term.name(),
                rep.fit.slope,
                rep.fit.r_squared
            );
        }
    }
    let cancellation = report
        .per_epsilon
        .iter()
        .map(|p| p.cancellation_defect())
        .fold(0.0, f64::max);
    println!("max_cancellation_defect = {cancellation:.3e}");
    println!("wrote {}", out.display());
    Ok(())
}

fn holder(path: &Path, alpha: f64, brute_force: bool) -> Result<()> {
    let s = read_snapshot(path)?;
    let seminorm = |f: &dyn Sampled| {
        if brute_force {
            holder_seminorm_brute_force(f, alpha)
        } else {
            holder_seminorm(f, alpha, DEFAULT_SHIFT_BUDGET)
        }
    };
    let su = seminorm(&s.u)?;
    let sc = seminorm(&s.c)?;
    println!(
        "u: seminorm = {su:.16e}, norm = {:.16e}",
        s.u.max_abs() + su
    );
    println!(
        "c: seminorm = {sc:.16e}, norm = {:.16e}",
        s.c.max_abs() + sc
    );
    Ok(())
}

fn lemma1(path: &Path, alpha: f64, field: FieldChoice, eps_count: usize, out: &Path) -> Result<()> {
    let s = read_snapshot(path)?;
    let epsilons = epsilon_ladder(s.grid(), eps_count)?;
    let rep = match field {
        FieldChoice::U => lemma1_check(&s.u, alpha, &epsilons)?,
        FieldChoice::C => lemma1_check(&s.c, alpha, &epsilons)?,
    };
    write_decay_csv(&[rep.conv2.clone(), rep.conv3.clone()], out)?;
    println!("seminorm = {:.16e}", rep.seminorm);
    println!(
        "{:>14}{:>16}{:>16}",
        "epsilon",
        Term::Conv2Ratio.name(),
        Term::Conv3Ratio.name()
    );
    for ((e, a), b) in epsilons
        .iter()
        .zip(&rep.conv2.values)
        .zip(&rep.conv3.values)
    {
        println!("{e:>14.6e}{a:>16.6}{b:>16.6}");
    }
    println!(
        "slopes: conv2 = {:.4} (predicted {alpha}), conv3 = {:.4} (predicted {})",
        rep.conv2.fit.slope,
        rep.conv3.fit.slope,
        alpha - 1.0
    );
    println!("wrote {}", out.display());
    Ok(())
}
