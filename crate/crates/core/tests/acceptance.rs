//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
//! criterion fails.

use std::f64::consts::PI;
use std::time::Instant;

use chns_core::energy::{attach_defect, gradient_norms};
use chns_core::lab::{
    cet_identity_residual, default_epsilons, holder_seminorm, holder_seminorm_brute_force,
    lemma1_check, make_mollifier, make_mollifier_unchecked, proof_terms, proof_terms_at,
    synth_holder_field, synth_octave_limit, Backend, Term, DEFAULT_SHIFT_BUDGET,
};
use chns_core::potential::PotentialSpec;
use chns_core::solver::initial::{spinodal, taylor_green, taylor_green_exact};
use chns_core::solver::{simulate, OutputPlan, PhysParams, State, StepperConfig};
use chns_core::spectral::{divergence_defect, leray_project};
use chns_core::{Grid, ScalarField, VectorField};

type Outcome = (bool, String);

fn polynomial(nu: f64, gamma: f64, mobility: f64) -> PhysParams {
    PhysParams::new(nu, gamma, mobility, PotentialSpec::polynomial()).unwrap()
}

fn random_solenoidal(grid: Grid, band: usize, seed: u64) -> VectorField {
    let comps = (0..grid.dim())
        .map(|i| spinodal(grid, 0.0, 1.0, band, seed + i as u64).unwrap())
        .collect();
    leray_project(&VectorField::new(comps).unwrap())
}

fn c1_taylor_green() -> Outcome {
    let g = Grid::new(2, 64).unwrap();
    let nu = 0.1;
    let params = polynomial(nu, 1.0, 1.0);
    let state = State::new(0.0, taylor_green(g, 1.0), ScalarField::zeros(g)).unwrap();
    let start = Instant::now();
    let run = simulate(
        state,
        &params,
        &StepperConfig::new(1e-3).unwrap(),
        1.0,
        &OutputPlan::default(),
    )
    .unwrap();
    let secs = start.elapsed().as_secs_f64();
    let worst_ke = run
        .records
        .iter()
        .map(|r| {
            let exact = PI * PI * (-4.0 * nu * r.t).exp();
            (r.kinetic - exact).abs() / exact
        })
        .fold(0.0, f64::max);
    let exact = taylor_green_exact(g, nu, 1.0);
    let err = run.final_state.u.sub(&exact);
    let l2 = err.inner(&err).sqrt();
    let t_end = run.final_state.t;
    (
        worst_ke <= 1e-3 && l2 <= 1e-3 && secs <= 60.0 && t_end == 1.0,
        format!("max rel KE error {worst_ke:.2e}, L2 error at t=1 {l2:.2e}, {secs:.1} s"),
    )
}

fn smooth_3d_params() -> PhysParams {
    polynomial(0.05, 0.05, 0.1)
}

fn smooth_3d_initial() -> State {
    let g = Grid::new(3, 32).unwrap();
    let c = spinodal(g, 0.0, 0.1, 1, 7).unwrap();
    State::new(0.0, taylor_green(g, 0.2), c).unwrap()
}

fn max_defect(dt: f64, snapshots: &[f64]) -> (f64, f64, Vec<State>) {
    let plan = OutputPlan {
        snapshot_times: snapshots.to_vec(),
        keep_snapshots: true,
        ..OutputPlan::default()
    };
    let run = simulate(
        smooth_3d_initial(),
        &smooth_3d_params(),
        &StepperConfig::new(dt).unwrap(),
        0.5,
        &plan,
    )
    .unwrap();
    let mut recs = run.records;
    attach_defect(&mut recs).unwrap();
    let worst = recs.iter().map(|r| r.defect.abs()).fold(0.0, f64::max);
    (worst, recs[0].total(), run.snapshots)
}

fn c2_energy_identity(snapshots: &mut Vec<State>) -> Outcome {
    let start = Instant::now();
    let times: Vec<f64> = (0..=4).map(|i| 0.125 * i as f64).collect();
    let (d1, e0, snaps) = max_defect(5e-4, &times);
    let (d2, _, _) = max_defect(2.5e-4, &[]);
    let secs = start.elapsed().as_secs_f64();
    *snapshots = snaps;
    let rel = d1 / e0;
    let ratio = d1 / d2;
    (
        rel <= 1e-3 && (1.6..=2.5).contains(&ratio) && secs <= 300.0,
        format!("max|defect|/E(0) = {rel:.2e} at dt=5e-4, halving ratio {ratio:.3}, {secs:.1} s"),
    )
}

fn c3_energy_decrease() -> Outcome {
    let g = Grid::new(2, 64).unwrap();
    let params = polynomial(1.0, 0.01, 1.0);
    let ok_s = params.stabilization >= 0.5 * params.potential.stabilization_alpha().unwrap();
    let c = spinodal(g, 0.0, 0.05, 16, 3).unwrap();
    let state = State::new(0.0, VectorField::zeros(g), c).unwrap();
    let run = simulate(
        state,
        &params,
        &StepperConfig::new(1e-2).unwrap(),
        5.0,
        &OutputPlan::default(),
    )
    .unwrap();
    let mut worst = f64::NEG_INFINITY;
    for w in run.records.windows(2) {
        let (a, b) = (w[0].total(), w[1].total());
        worst = worst.max((b - a) / a.abs());
    }
    let drop = run.records[0].total() - run.records.last().unwrap().total();
    (
        ok_s && worst <= 1e-12 && drop > 0.0,
        format!(
            "{} steps, largest relative step increase {worst:.2e}, total decrease {drop:.3e}",
            run.steps
        ),
    )
}

fn c4_conservation() -> Outcome {
    let g = Grid::new(2, 64).unwrap();
    let params = polynomial(0.02, 0.01, 0.5);
    let c = spinodal(g, 0.2, 0.3, 12, 11).unwrap();
    let drift = [0.1, -0.05];
    let comps = random_solenoidal(g, 8, 21)
        .components()
        .iter()
        .zip(drift)
        .map(|(ui, m)| ui.map(|v| 0.5 * v + m))
        .collect();
    let u = leray_project(&VectorField::new(comps).unwrap());
    let state = State::new(0.0, u, c).unwrap();
    let c0 = state.c.mean();
    let u0 = state.u.mean();
    let mut worst_c = 0.0_f64;
    let mut worst_div = 0.0_f64;
    let mut worst_u = 0.0_f64;
    let cfg = StepperConfig::new(2e-3).unwrap();
    let mut s = state;
    for _ in 0..500 {
        s = chns_core::solver::step(&s, &params, &cfg).unwrap();
        worst_c = worst_c.max((s.c.mean() - c0).abs());
        worst_div = worst_div.max(divergence_defect(&s.u));
        for (a, b) in s.u.mean().iter().zip(&u0) {
            worst_u = worst_u.max((a - b).abs());
        }
    }
    (
        worst_c <= 1e-12 && worst_div <= 1e-12 && worst_u <= 1e-12,
        format!("mean(c) drift {worst_c:.1e}, divergence {worst_div:.1e}, mean(u) drift {worst_u:.1e} over 500 steps"),
    )
}

fn c5_lemma1() -> Outcome {
    let start = Instant::now();
    let g = Grid::new(2, 128).unwrap();
    let eps = default_epsilons(g).unwrap();
    let mut ok = true;
    let mut notes = Vec::new();
    for alpha in [0.4, 0.6] {
        let u = synth_holder_field(g, alpha, synth_octave_limit(g), 1).unwrap();
        let rep = lemma1_check(&u, alpha, &eps).unwrap();
        let worst = rep.conv2.values.iter().copied().fold(0.0, f64::max);
        let slope = rep.conv3.fit.slope;
        ok &= worst <= 1.05 && (slope - (alpha - 1.0)).abs() <= 0.15;
        notes.push(format!(
            "alpha {alpha}: max conv2 ratio {worst:.3}, conv3 slope {slope:.3}"
        ));
    }
    let secs = start.elapsed().as_secs_f64();
    ok &= secs <= 120.0;
    (ok, format!("{}, {secs:.1} s", notes.join("; ")))
}

fn c6_cet_identity() -> Outcome {
    let g = Grid::new(2, 64).unwrap();
    let u = random_solenoidal(g, 20, 5);
    let umax2 = u.max_abs().powi(2);
    let mut worst = 0.0_f64;
    for eps in [0.9, 0.5, 0.3] {
        let k = make_mollifier(g, eps).unwrap();
        worst = worst.max(cet_identity_residual(&u, &k).unwrap() / umax2);
    }
    (
        worst <= 1e-10,
        format!("max residual / max|u|^2 = {worst:.2e}"),
    )
}

fn c7_onsager_decay() -> Outcome {
    let start = Instant::now();
    let g = Grid::new(2, 256).unwrap();
    let alpha = 0.5;
    let octaves = synth_octave_limit(g);
    let u = synth_holder_field(g, alpha, octaves, 1).unwrap();
    let c = ScalarField::zeros(g);
    let states = [
        State::new(0.0, u.clone(), c.clone()).unwrap(),
        State::new(1.0, u, c).unwrap(),
    ];
    let eps = default_epsilons(g).unwrap();
    let rep = proof_terms(
        &states,
        &polynomial(1.0, 1.0, 1.0),
        &eps,
        alpha,
        Backend::Quadrature,
    )
    .unwrap();
    let floor = 3.0 * alpha - 1.0 - 0.2;
    let mut ok = octaves >= 5;
    let mut notes = Vec::new();
    for term in [Term::I11, Term::I12] {
        let fit = rep.report(term).unwrap().fit;
        ok &= fit.slope >= floor && fit.r_squared >= 0.9;
        notes.push(format!(
            "{term} slope {:.3} (r2 {:.3})",
            fit.slope, fit.r_squared
        ));
    }
    let secs = start.elapsed().as_secs_f64();
    ok &= secs <= 300.0;
    (
        ok,
        format!("{octaves} octaves, {}, {secs:.1} s", notes.join(", ")),
    )
}

fn c8_cancellation(snapshots: &[State]) -> Outcome {
    let g = snapshots[0].grid();
    let params = smooth_3d_params();
    let mut worst = 0.0_f64;
    for eps in default_epsilons(g).unwrap() {
        let k = make_mollifier(g, eps).unwrap();
        let terms = proof_terms_at(snapshots, &params, &k, Backend::Quadrature).unwrap();
        worst = worst.max(terms.cancellation_defect());
    }
    (
        worst <= 1e-12,
        format!("max |I222 + J22| / |I222| = {worst:.2e}"),
    )
}

fn c9_smooth_vanishing(snapshots: &[State]) -> Outcome {
    let g = snapshots[0].grid();
    let eps = default_epsilons(g).unwrap();
    let rep = proof_terms(
        snapshots,
        &smooth_3d_params(),
        &eps,
        1.0,
        Backend::Quadrature,
    )
    .unwrap();
    let mut ok = true;
    let mut notes = Vec::new();
    for term in [
        Term::I11,
        Term::I12,
        Term::I21,
        Term::I221,
        Term::J111,
        Term::J112,
        Term::J21,
    ] {
        let slope = rep.report(term).unwrap().fit.slope;
        ok &= slope >= 1.0;
        notes.push(format!("{term} {slope:.2}"));
    }
    (ok, format!("slopes {}", notes.join(", ")))
}

fn c10_symmetric_gradient() -> Outcome {
    let nu = 0.3;
    let mut worst = 0.0_f64;
    for (dim, n) in [(2, 32), (3, 16)] {
        let g = Grid::new(dim, n).unwrap();
        for seed in 0..3 {
            let u = random_solenoidal(g, n / 3, seed);
            let (grad, sym) = gradient_norms(&u);
            worst = worst.max((2.0 * nu * sym - nu * grad).abs() / (nu * grad));
        }
    }
    (worst <= 1e-10, format!("max relative gap {worst:.2e}"))
}

fn c11_brute_force() -> Outcome {
    let mut worst_holder = 0.0_f64;
    let mut fields: Vec<(VectorField, f64)> = Vec::new();
    for (dim, n) in [(2, 32), (2, 16), (3, 16)] {
        let g = Grid::new(dim, n).unwrap();
        fields.push((random_solenoidal(g, n / 3, 9), 0.5));
        if synth_octave_limit(g) >= 1 {
            fields.push((
                synth_holder_field(g, 0.4, synth_octave_limit(g), 2).unwrap(),
                0.4,
            ));
        }
    }
    for (u, alpha) in &fields {
        let sampled = holder_seminorm(u, *alpha, DEFAULT_SHIFT_BUDGET).unwrap();
        let exact = holder_seminorm_brute_force(u, *alpha).unwrap();
        worst_holder = worst_holder.max((exact - sampled).abs() / exact);
    }

    let g = Grid::new(2, 16).unwrap();
    let f = spinodal(g, 0.3, 1.0, 5, 4).unwrap();
    let mut worst_conv = 0.0_f64;
    for eps in [0.5, 1.2, 2.5] {
        let k = make_mollifier_unchecked(g, eps).unwrap();
        let fast = k.convolve(&f, Backend::Quadrature);
        let n = g.n() as i64;
        for x in 0..n {
            for y in 0..n {
                let mut direct = 0.0;
                for a in 0..n {
                    for b in 0..n {
                        let dx = (x - a + n / 2).rem_euclid(n) - n / 2;
                        let dy = (y - b + n / 2).rem_euclid(n) - n / 2;
                        let w: f64 = k
                            .support()
                            .iter()
                            .filter(|(o, _)| {
                                (o[0] - dx).rem_euclid(n) == 0 && (o[1] - dy).rem_euclid(n) == 0
                            })
                            .map(|(_, w)| w)
                            .sum();
                        direct += w * f.values()[(a * n + b) as usize];
                    }
                }
                worst_conv = worst_conv.max((direct - fast.values()[(x * n + y) as usize]).abs());
            }
        }
    }
    (
        worst_holder <= 0.1 && worst_conv <= 1e-8,
        format!(
            "seminorm max relative gap {worst_holder:.3}, convolution max error {worst_conv:.2e}"
        ),
    )
}

fn main() {
    let mut snapshots = Vec::new();
    let mut failed = 0;
    let mut report = |id: usize, name: &str, (ok, detail): Outcome| {
        let verdict = if ok { "PASS" } else { "FAIL" };
        if !ok {
            failed += 1;
        }
        println!("{verdict} criterion {id:>2} ({name}): {detail}");
    };
    report(1, "Taylor-Green exactness", c1_taylor_green());
    report(2, "energy identity", c2_energy_identity(&mut snapshots));
    report(3, "energy decrease", c3_energy_decrease());
    report(4, "conservation", c4_conservation());
    report(5, "mollifier bounds", c5_lemma1());
    report(6, "CET identity", c6_cet_identity());
    report(7, "Onsager-type decay", c7_onsager_decay());
    report(8, "cancellation", c8_cancellation(&snapshots));
    report(9, "smooth-field vanishing", c9_smooth_vanishing(&snapshots));
    report(10, "symmetric-gradient identity", c10_symmetric_gradient());
    report(11, "brute-force oracles", c11_brute_force());
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
