//! The rod-cooling study as a reproducible pipeline: reconstruct `(u, f)` for
//! every `(ε, l)` cell, verify each source with the finite-difference oracle,
//! and write CSV tables, optional SVG plots and a checksummed manifest.

mod config;
mod output;

use std::path::Path;

use serde::Serialize;

pub use config::{ExperimentConfig, Overrides, Profile};
pub use output::{csv_table, sha256_hex, svg_plot, Manifest, ManifestEntry, Role};

use crate::error::{Error, Result};
use crate::forward::{forward_modal, verify_source, OracleGrids, VerificationReport};
use crate::inverse::{solve, InverseSolution, ProblemData};
use crate::operator::{make_operator, Domain, EigenSystem, OperatorDescriptor};
use crate::quadrature::FieldSample;

/// Problem data of one operator, with `Lφ` in closed form.
///
/// The reconstructed source is `Lφ - Σ_{k≤l} λ_k C_k e_k`. Using the exact
/// `Lφ` rather than its truncated expansion keeps the high modes of `f`,
/// which is what makes the `l`-sweep converge visibly.
#[derive(Debug, Clone)]
pub struct Study {
    system: EigenSystem,
    data: ProblemData,
    l_phi: FieldSample,
}

/// One cell of a sweep.
#[derive(Debug, Clone)]
pub struct Reconstruction {
    pub solution: InverseSolution,
    pub f: FieldSample,
}

impl Study {
    pub fn new(cfg: &ExperimentConfig, operator: OperatorDescriptor) -> Result<Self> {
        let system = make_operator(&operator)?;
        let (phi, l_phi) = profile(&system, cfg.phi)?;
        let (psi, _) = profile(&system, cfg.psi)?;
        let data = ProblemData::new(phi, psi, cfg.horizon, cfg.alpha)?;
        Ok(Study { system, data, l_phi })
    }

    pub fn system(&self) -> &EigenSystem {
        &self.system
    }

    pub fn data(&self) -> &ProblemData {
        &self.data
    }

    pub fn l_phi(&self) -> &FieldSample {
        &self.l_phi
    }

    pub fn reconstruct(&self, l: usize) -> Result<Reconstruction> {
        let solution = solve(&self.system, &self.data, l)?;
        let f = solution.evaluate_f_with(&self.l_phi)?;
        Ok(Reconstruction { solution, f })
    }

    pub fn verify(&self, rec: &Reconstruction, grids: OracleGrids, tolerance: f64) -> Result<VerificationReport> {
        verify_source(&rec.solution, &self.data, &rec.f, grids, tolerance)
    }
}

/// `(v, Lv)` on the quadrature nodes.
fn profile(sys: &EigenSystem, p: Profile) -> Result<(FieldSample, FieldSample)> {
    let n = sys.nodes().len();
    match p {
        Profile::Zero => Ok((FieldSample::zeros(n), FieldSample::zeros(n))),
        Profile::Mode(k) => {
            sys.check_modes(k)?;
            let e = sys.mode(k);
            let le = e.scaled(sys.eigenvalue(k));
            Ok((e, le))
        }
        Profile::Rod => {
            let Domain::Interval { a, b } = sys.operator().domain() else {
                return Err(Error::Config("the rod profile needs a bounded interval".into()));
            };
            let value = |x: f64| ((x - a) * (b - x)).powi(3);
            let second = |x: f64| {
                let (p, q) = (x - a, b - x);
                6.0 * p * q * (q * q - 3.0 * p * q + p * p)
            };
            let epsilon = match sys.descriptor() {
                OperatorDescriptor::Involution { epsilon } => epsilon,
                _ => 0.0,
            };
            let phi = sys.sample(value)?;
            let l_phi = sys.sample(|x| -second(x) + epsilon * second(a + b - x))?;
            Ok((phi, l_phi))
        }
    }
}

fn label(op: &OperatorDescriptor) -> String {
    match op {
        OperatorDescriptor::Involution { epsilon } => format!("eps{epsilon}"),
        other => other.name().to_string(),
    }
}

fn cell_context(op: &OperatorDescriptor, l: usize) -> String {
    match op {
        OperatorDescriptor::Involution { epsilon } => format!("cell (l = {l}, epsilon = {epsilon})"),
        other => format!("cell (l = {l}, {other})"),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CellSummary {
    pub operator: String,
    pub modes: usize,
    pub f_norm: f64,
    pub report: VerificationReport,
}

#[derive(Debug, Clone)]
pub struct ExperimentRun {
    pub manifest: Manifest,
    pub cells: Vec<CellSummary>,
}

impl ExperimentRun {
    pub fn all_passed(&self) -> bool {
        self.cells.iter().all(|c| c.report.passed)
    }
}

struct CellOutput {
    u_csv: String,
    f_csv: String,
    report_json: String,
    u_svg: Option<String>,
    f: FieldSample,
    summary: CellSummary,
}

fn snapshot_times(cfg: &ExperimentConfig) -> Vec<f64> {
    let mut times = vec![0.0];
    times.extend(cfg.snapshots.iter().copied().filter(|&t| t != 0.0));
    times
}

fn run_cell(cfg: &ExperimentConfig, study: &Study, l: usize) -> Result<CellOutput> {
    let rec = study.reconstruct(l)?;
    let times = snapshot_times(cfg);
    let x = study.system.nodes();
    let snapshots = times
        .iter()
        .map(|&t| rec.solution.evaluate_u(t).map(FieldSample::into_values))
        .collect::<Result<Vec<_>>>()?;

    let mut header = vec!["x".to_string()];
    header.extend(times.iter().map(|t| format!("u(t={t})")));
    let mut columns: Vec<&[f64]> = vec![x];
    columns.extend(snapshots.iter().map(Vec::as_slice));
    let u_csv = csv_table(&header, &columns);
    let f_csv = csv_table(&["x".into(), "f".into()], &[x, rec.f.values()]);

    let grids = OracleGrids {
        space_n: cfg.space_n,
        time_m: cfg.time_m,
    };
    let report = study.verify(&rec, grids, cfg.tolerance)?;
    let op = study.system.descriptor();
    let summary = CellSummary {
        operator: op.to_string(),
        modes: l,
        f_norm: study.system.l2_norm(&rec.f)?,
        report,
    };
    let mut report_json = serde_json::to_string_pretty(&summary)?;
    report_json.push('\n');
    let u_svg = cfg.emit_plots.then(|| {
        let series: Vec<(String, Vec<f64>)> = times
            .iter()
            .zip(snapshots)
            .map(|(t, v)| (format!("t = {t}"), v))
            .collect();
        svg_plot(&format!("u(x, t), {op}, l = {l}"), x, &series)
    });
    Ok(CellOutput {
        u_csv,
        f_csv,
        report_json,
        u_svg,
        f: rec.f,
        summary,
    })
}

/// Runs every `(ε, l)` cell and writes the artifacts into the output
/// directory. Cells are computed concurrently; files are written in a fixed
/// order, so identical configurations give byte-identical output.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentRun> {
    cfg.validate()?;
    let studies = cfg
        .operators()
        .into_iter()
        .map(|op| Study::new(cfg, op).map_err(|e| e.in_cell(format!("operator {op}"))))
        .collect::<Result<Vec<_>>>()?;
    let jobs: Vec<(usize, usize)> = (0..studies.len())
        .flat_map(|s| cfg.truncations.iter().map(move |&l| (s, l)))
        .collect();

    let results: Vec<Result<CellOutput>> = parallel_map(&jobs, |&(s, l)| {
        let study = &studies[s];
        run_cell(cfg, study, l).map_err(|e| e.in_cell(cell_context(&study.system.descriptor(), l)))
    });

    let dir = cfg.output_dir.as_path();
    std::fs::create_dir_all(dir)?;
    let mut manifest = Manifest::default();
    let mut cells = Vec::with_capacity(jobs.len());
    let mut outputs = Vec::with_capacity(jobs.len());
    for (&(s, l), result) in jobs.iter().zip(results) {
        let out = result?;
        let tag = format!("{}_l{l}", label(&studies[s].system.descriptor()));
        manifest.write(dir, &format!("u_{tag}.csv"), Role::USnapshots, &out.u_csv)?;
        manifest.write(dir, &format!("f_{tag}.csv"), Role::Source, &out.f_csv)?;
        manifest.write(dir, &format!("verify_{tag}.json"), Role::Verification, &out.report_json)?;
        if let Some(svg) = &out.u_svg {
            manifest.write(dir, &format!("u_{tag}.svg"), Role::Plot, svg)?;
        }
        cells.push(out.summary.clone());
        outputs.push((s, l, out.f));
    }
    if cfg.emit_plots {
        for (s, study) in studies.iter().enumerate() {
            let op = study.system.descriptor();
            let series: Vec<(String, Vec<f64>)> = outputs
                .iter()
                .filter(|(owner, _, _)| *owner == s)
                .map(|(_, l, f)| (format!("l = {l}"), f.values().to_vec()))
                .collect();
            let svg = svg_plot(&format!("f(x), {op}"), study.system.nodes(), &series);
            manifest.write(dir, &format!("f_{}.svg", label(&op)), Role::Plot, &svg)?;
        }
    }
    manifest.finish(dir)?;
    Ok(ExperimentRun { manifest, cells })
}

/// Maps `f` over `items` on scoped threads, preserving order.
fn parallel_map<T: Sync, R: Send>(items: &[T], f: impl Fn(&T) -> R + Sync) -> Vec<R> {
    let workers = std::thread::available_parallelism().map_or(1, |n| n.get()).max(1);
    let chunk = items.len().div_ceil(workers).max(1);
    std::thread::scope(|scope| {
        let handles: Vec<_> = items
            .chunks(chunk)
            .map(|part| {
                let f = &f;
                scope.spawn(move || part.iter().map(f).collect::<Vec<R>>())
            })
            .collect();
        handles
            .into_iter()
            .flat_map(|h| h.join().expect("worker panicked"))
            .collect()
    })
}

/// Per-`ε` energy figures of the rod study.
#[derive(Debug, Clone, Serialize)]
pub struct EnergyRow {
    pub epsilon: f64,
    /// `‖f‖` of the cooling source.
    pub f_norm: f64,
    /// `‖u(·, t)‖` of the controlled solution at each snapshot.
    pub u_norms: Vec<f64>,
    /// `‖u(·, t)‖` with `f = 0` at each snapshot.
    pub free_norms: Vec<f64>,
    pub terminal_error: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct EnergyTable {
    pub modes: usize,
    pub snapshots: Vec<f64>,
    pub rows: Vec<EnergyRow>,
}

impl EnergyTable {
    pub fn row(&self, epsilon: f64) -> Option<&EnergyRow> {
        self.rows.iter().find(|r| r.epsilon == epsilon)
    }

    pub fn to_csv(&self) -> String {
        let mut header = vec!["epsilon".to_string(), "f_norm".to_string()];
        header.extend(self.snapshots.iter().map(|t| format!("u_norm(t={t})")));
        header.extend(self.snapshots.iter().map(|t| format!("free_norm(t={t})")));
        header.push("terminal_error".into());
        let mut columns: Vec<Vec<f64>> = vec![
            self.rows.iter().map(|r| r.epsilon).collect(),
            self.rows.iter().map(|r| r.f_norm).collect(),
        ];
        for j in 0..self.snapshots.len() {
            columns.push(self.rows.iter().map(|r| r.u_norms[j]).collect());
        }
        for j in 0..self.snapshots.len() {
            columns.push(self.rows.iter().map(|r| r.free_norms[j]).collect());
        }
        columns.push(self.rows.iter().map(|r| r.terminal_error).collect());
        let refs: Vec<&[f64]> = columns.iter().map(Vec::as_slice).collect();
        csv_table(&header, &refs)
    }
}

/// Compares the energy needed to cool the rod across involution couplings,
/// at the largest configured truncation.
pub fn compare_energy(cfg: &ExperimentConfig) -> Result<EnergyTable> {
    cfg.validate()?;
    if cfg.epsilons.len() < 2 {
        return Err(Error::Config(format!(
            "energy comparison needs at least two epsilon values, got {}",
            cfg.epsilons.len()
        )));
    }
    let l = *cfg.truncations.last().expect("validated non-empty");
    let grids = OracleGrids {
        space_n: cfg.space_n,
        time_m: cfg.time_m,
    };
    let ops = cfg.operators();
    let rows = parallel_map(&ops, |op| {
        energy_row(cfg, *op, l, grids).map_err(|e| e.in_cell(cell_context(op, l)))
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    Ok(EnergyTable {
        modes: l,
        snapshots: cfg.snapshots.clone(),
        rows,
    })
}

fn energy_row(cfg: &ExperimentConfig, op: OperatorDescriptor, l: usize, grids: OracleGrids) -> Result<EnergyRow> {
    let study = Study::new(cfg, op)?;
    let sys = &study.system;
    let rec = study.reconstruct(l)?;
    let u_norms = cfg
        .snapshots
        .iter()
        .map(|&t| sys.l2_norm(&rec.solution.evaluate_u(t)?))
        .collect::<Result<Vec<_>>>()?;
    let zero = FieldSample::zeros(sys.nodes().len());
    let free_norms = forward_modal(sys, &study.data.phi, &zero, cfg.alpha, l, &cfg.snapshots)?
        .iter()
        .map(|u| sys.l2_norm(u))
        .collect::<Result<Vec<_>>>()?;
    let report = study.verify(&rec, grids, cfg.tolerance)?;
    Ok(EnergyRow {
        epsilon: op.involution_epsilon().unwrap_or(0.0),
        f_norm: sys.l2_norm(&rec.f)?,
        u_norms,
        free_norms,
        terminal_error: report.terminal_error,
    })
}

/// Writes the comparison table plus a manifest into `dir`.
pub fn write_energy_table(table: &EnergyTable, dir: &Path) -> Result<Manifest> {
    std::fs::create_dir_all(dir)?;
    let mut manifest = Manifest::default();
    manifest.write(dir, "energy_comparison.csv", Role::EnergyTable, &table.to_csv())?;
    manifest.finish(dir)?;
    Ok(manifest)
}
