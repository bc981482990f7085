//! End-to-end acceptance checks. Each criterion prints one PASS/FAIL line
//! with its measured figures and wall time; the process fails if any does.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use spectral_inverse::experiment::{compare_energy, ExperimentConfig, Study};
use spectral_inverse::forward::{
    forward_fd_heat, forward_l1_subdiffusion, FdOperator, OracleGrids, SpaceGrid, TimeGrid,
};
use spectral_inverse::mittag_leffler::{ml_neg, simon_bounds, FractionalOrder};
use spectral_inverse::operator::{make_operator, EigenSystem, OperatorDescriptor};
use spectral_inverse::{solve, solve_heat, FieldSample, ProblemData};

type Outcome = Result<String, String>;

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn shipped() -> Vec<OperatorDescriptor> {
    vec![
        OperatorDescriptor::DirichletLaplacian { a: 0.0, b: std::f64::consts::PI },
        OperatorDescriptor::Involution { epsilon: 0.9 },
        OperatorDescriptor::HarmonicOscillator { window: 12.0, nodes: 513 },
    ]
}

fn mittag_leffler_correctness() -> Outcome {
    let one = FractionalOrder::ONE;
    let mut worst_exp: f64 = 0.0;
    for i in 0..=5000 {
        let x = 50.0 * i as f64 / 5000.0;
        let exact = (-x).exp();
        worst_exp = worst_exp.max((ml_neg(one, x).unwrap() - exact).abs() / exact);
    }
    let half = FractionalOrder::new(0.5).unwrap();
    let mut worst_half: f64 = 0.0;
    for i in 0..=2000 {
        let x = 10.0 * i as f64 / 2000.0;
        let exact = (x * x).exp() * libm::erfc(x);
        worst_half = worst_half.max((ml_neg(half, x).unwrap() - exact).abs() / exact);
    }
    let mut violations = 0;
    for i in 1..=9 {
        let a = FractionalOrder::new(i as f64 / 10.0).unwrap();
        for j in 0..60 {
            let x = 10f64.powf(-3.0 + 6.0 * j as f64 / 59.0);
            let e = ml_neg(a, x).unwrap();
            let (lo, hi) = simon_bounds(a, x);
            if !(lo * (1.0 - 1e-14) <= e && e <= hi * (1.0 + 1e-14)) {
                violations += 1;
            }
        }
    }
    check(
        worst_exp <= 1e-12 && worst_half <= 1e-8 && violations == 0,
        format!("alpha=1 rel {worst_exp:.1e}, alpha=1/2 rel {worst_half:.1e}, Simon violations {violations}/540"),
    )
}

fn random_in_span(sys: &EigenSystem, rng: &mut StdRng, modes: usize) -> FieldSample {
    let coeffs: Vec<f64> = (0..modes).map(|_| rng.gen_range(-1.0..1.0)).collect();
    sys.synthesize(&coeffs).unwrap()
}

fn structural_identities() -> Outcome {
    let mut rng = StdRng::seed_from_u64(20);
    let (mut worst_u0, mut worst_ut, mut worst_heat) = (0.0f64, 0.0f64, 0.0f64);
    for desc in shipped() {
        let sys = make_operator(&desc).unwrap();
        for _ in 0..100 {
            let phi = random_in_span(&sys, &mut rng, 20);
            let psi = random_in_span(&sys, &mut rng, 20);
            let horizon = rng.gen_range(0.1..3.0);
            let alpha = FractionalOrder::new(rng.gen_range(0.05..1.0)).unwrap();
            let data = ProblemData::new(phi.clone(), psi.clone(), horizon, alpha).unwrap();
            let sol = solve(&sys, &data, 20).unwrap();
            worst_u0 = worst_u0.max(sol.evaluate_u(0.0).unwrap().sup_distance(&phi));
            let miss = sol.evaluate_u(horizon).unwrap().add_scaled(-1.0, &psi).unwrap();
            worst_ut = worst_ut.max(sys.l2_norm(&miss).unwrap());

            let classical = ProblemData::new(phi.clone(), psi.clone(), horizon, FractionalOrder::ONE).unwrap();
            let frac = solve(&sys, &classical, 20).unwrap();
            let heat = solve_heat(&sys, &phi, &psi, horizon, 20).unwrap();
            for (a, b) in frac
                .c_coeffs()
                .iter()
                .chain(frac.f_coeffs())
                .zip(heat.c_coeffs().iter().chain(heat.f_coeffs()))
            {
                worst_heat = worst_heat.max((a - b).abs() / b.abs().max(1.0));
            }
        }
    }
    check(
        worst_u0 <= 1e-12 && worst_ut <= 1e-8 && worst_heat <= 1e-12,
        format!("u(0) sup {worst_u0:.1e}, u(T) L2 {worst_ut:.1e}, heat path {worst_heat:.1e} (300 pairs)"),
    )
}

fn round_trip() -> Outcome {
    let grids = OracleGrids { space_n: 401, time_m: 4000 };
    let mut details = Vec::new();
    let mut ok = true;
    for (alpha, tolerance) in [(1.0, 5e-3), (0.5, 1e-2)] {
        for epsilon in [0.0, 0.9] {
            let cfg = ExperimentConfig {
                alpha: FractionalOrder::new(alpha).unwrap(),
                ..ExperimentConfig::default()
            };
            let study = Study::new(&cfg, OperatorDescriptor::Involution { epsilon }).unwrap();
            let rec = study.reconstruct(50).unwrap();
            let report = study.verify(&rec, grids, tolerance).unwrap();
            ok &= report.passed;
            details.push(format!("alpha={alpha} eps={epsilon}: {:.2e}", report.terminal_error));
        }
    }
    check(ok, details.join(", "))
}

fn energy_ordering() -> Outcome {
    let cfg = ExperimentConfig {
        epsilons: vec![0.0, 0.9],
        truncations: vec![20],
        snapshots: vec![2.5],
        ..ExperimentConfig::default()
    };
    let table = compare_energy(&cfg).unwrap();
    let (plain, coupled) = (table.row(0.0).unwrap(), table.row(0.9).unwrap());
    check(
        coupled.f_norm > plain.f_norm && coupled.free_norms[0] > plain.free_norms[0],
        format!(
            "|f| {:.4} vs {:.4}, free |u(2.5)| {:.4} vs {:.4} (eps 0.9 vs 0)",
            coupled.f_norm, plain.f_norm, coupled.free_norms[0], plain.free_norms[0]
        ),
    )
}

fn truncation_convergence() -> Outcome {
    let mut ok = true;
    let mut details = Vec::new();
    for epsilon in [0.0, 0.9] {
        let study = Study::new(&ExperimentConfig::default(), OperatorDescriptor::Involution { epsilon }).unwrap();
        let reference = study.reconstruct(40).unwrap().f;
        let gaps: Vec<f64> = [7, 10, 20]
            .iter()
            .map(|&l| {
                let f = study.reconstruct(l).unwrap().f;
                study.system().l2_norm(&f.add_scaled(-1.0, &reference).unwrap()).unwrap()
            })
            .collect();
        ok &= gaps[0] > gaps[1] && gaps[1] > gaps[2];
        details.push(format!("eps={epsilon}: {:.2e} > {:.2e} > {:.2e}", gaps[0], gaps[1], gaps[2]));
    }
    check(ok, details.join(", "))
}

fn oracle_orders() -> Outcome {
    let mut ok = true;
    let mut details = Vec::new();
    let mut errors = Vec::new();
    for level in 0..3 {
        let n = 32 * (1 << level) - 1;
        let grid = SpaceGrid::new(n).unwrap();
        let op = FdOperator::involution(0.0, grid).unwrap();
        let time = TimeGrid::new(10 * (1 << level), 1.0).unwrap();
        let u = forward_fd_heat(&op, &grid.sample(f64::sin).unwrap(), &FieldSample::zeros(n), &time).unwrap();
        let exact = grid.sample(|x| (-1.0f64).exp() * x.sin()).unwrap();
        errors.push(grid.l2_norm(&u.add_scaled(-1.0, &exact).unwrap()));
    }
    for w in errors.windows(2) {
        let ratio = w[0] / w[1];
        ok &= (3.6..=4.4).contains(&ratio);
        details.push(format!("CN ratio {ratio:.3}"));
    }

    let grid = SpaceGrid::new(15).unwrap();
    let op = FdOperator::involution(0.0, grid).unwrap();
    let h = grid.spacing();
    let mu = (2.0 - 2.0 * h.cos()) / (h * h);
    for alpha in [0.3, 0.5, 0.7] {
        let a = FractionalOrder::new(alpha).unwrap();
        let amp = ml_neg(a, mu).unwrap();
        let exact = grid.sample(|x| amp * x.sin()).unwrap();
        let err = |m: usize| {
            let time = TimeGrid::new(m, 1.0).unwrap();
            let u = forward_l1_subdiffusion(&op, &grid.sample(f64::sin).unwrap(), &FieldSample::zeros(15), a, &time)
                .unwrap();
            grid.l2_norm(&u.add_scaled(-1.0, &exact).unwrap())
        };
        let rate = (err(1280) / err(2560)).log2();
        let target = 2.0 - alpha;
        ok &= (rate - target).abs() <= 0.2 * target;
        details.push(format!("L1 alpha={alpha} rate {rate:.3}"));
    }
    check(ok, details.join(", "))
}

fn uniqueness_and_linearity() -> Outcome {
    let mut rng = StdRng::seed_from_u64(7);
    let (mut zero, mut linear, mut stationary) = (0.0f64, 0.0f64, 0.0f64);
    let l = 20;
    for desc in shipped() {
        let sys = make_operator(&desc).unwrap();
        let n = sys.nodes().len();
        let alpha = FractionalOrder::new(0.6).unwrap();
        let horizon = 2.0;

        let z = FieldSample::zeros(n);
        let sol = solve(&sys, &ProblemData::new(z.clone(), z.clone(), horizon, alpha).unwrap(), l).unwrap();
        zero = zero
            .max(sol.evaluate_f().unwrap().sup_norm())
            .max(sol.evaluate_u(1.0).unwrap().sup_norm());

        let fields: Vec<FieldSample> = (0..4).map(|_| random_in_span(&sys, &mut rng, 25)).collect();
        let (a, b) = (rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0));
        let mix = |i: usize, j: usize| fields[i].scaled(a).add_scaled(b, &fields[j]).unwrap();
        let run = |phi: FieldSample, psi: FieldSample| {
            solve(&sys, &ProblemData::new(phi, psi, horizon, alpha).unwrap(), l).unwrap()
        };
        let s1 = run(fields[0].clone(), fields[1].clone());
        let s2 = run(fields[2].clone(), fields[3].clone());
        let s12 = run(mix(0, 2), mix(1, 3));
        let combo = |x: FieldSample, y: FieldSample| x.scaled(a).add_scaled(b, &y).unwrap();
        let f_gap = s12
            .evaluate_f()
            .unwrap()
            .sup_distance(&combo(s1.evaluate_f().unwrap(), s2.evaluate_f().unwrap()));
        let u_gap = s12
            .evaluate_u(0.7)
            .unwrap()
            .sup_distance(&combo(s1.evaluate_u(0.7).unwrap(), s2.evaluate_u(0.7).unwrap()));
        let scale = s12.evaluate_f().unwrap().sup_norm().max(1.0);
        linear = linear.max(f_gap / scale).max(u_gap);

        let phi = fields[0].clone();
        let sol = run(phi.clone(), phi.clone());
        let l_phi = sys.apply_operator(&phi, l).unwrap();
        stationary = stationary.max(sol.evaluate_f().unwrap().sup_distance(&l_phi) / l_phi.sup_norm().max(1.0));
        for t in [0.3, 1.1, horizon] {
            stationary = stationary.max(sol.evaluate_u(t).unwrap().sup_distance(&phi));
        }
    }
    check(
        zero == 0.0 && linear <= 1e-10 && stationary <= 1e-10,
        format!("zero data {zero:.1e}, linearity {linear:.1e}, phi=psi {stationary:.1e}"),
    )
}

type Criterion = (&'static str, fn() -> Outcome, u64);

fn main() {
    let criteria: [Criterion; 7] = [
        ("Mittag-Leffler correctness", mittag_leffler_correctness, 1),
        ("structural identities", structural_identities, 10),
        ("inverse -> forward round trip", round_trip, 60),
        ("energy ordering", energy_ordering, 10),
        ("truncation convergence", truncation_convergence, 5),
        ("oracle convergence orders", oracle_orders, 30),
        ("uniqueness and linearity", uniqueness_and_linearity, 5),
    ];
    let mut failures = 0;
    for (i, (name, run, budget)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|_| Err("panicked".into()));
        let elapsed = start.elapsed();
        let in_budget = elapsed <= Duration::from_secs(budget);
        let (verdict, detail) = match (&outcome, in_budget) {
            (Ok(d), true) => ("PASS", d.clone()),
            (Ok(d), false) => ("FAIL", format!("{d}; over the {budget} s budget")),
            (Err(d), _) => ("FAIL", d.clone()),
        };
        if verdict == "FAIL" {
            failures += 1;
        }
        println!(
            "criterion {} {verdict}: {name} [{detail}] ({:.2} s)",
            i + 1,
            elapsed.as_secs_f64()
        );
    }
    if failures > 0 {
        println!("{failures} of 7 acceptance criteria failed");
        std::process::exit(1);
    }
    println!("all 7 acceptance criteria passed");
}
