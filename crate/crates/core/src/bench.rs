//! Benchmark grids: deterministic instances per cell, a worker pool, and T-count scaling fits.

use crate::boolean::{synth_oracle, TruthTable};
use crate::diagonal::{synth_batched, synth_diagonal, tensor_matrix, unitary_error};
use crate::error::{Error, Result};
use crate::mass::synth_mass;
use crate::sim::{BitSim, DiagonalSpec};
use crate::squbit::haar_unitary;
use crate::state::{synth_state_lks, synth_state_with, StateConfig, TargetState, EPS_MIN};
use crate::SynthReport;
use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::fmt;
use std::str::FromStr;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Instant;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Task {
    State,
    StateLks,
    Diagonal,
    Batched,
    Mass,
    Oracle,
}

impl Task {
    pub const ALL: [Task; 6] = [Task::State, Task::StateLks, Task::Diagonal, Task::Batched, Task::Mass, Task::Oracle];

    pub fn name(self) -> &'static str {
        match self {
            Task::State => "state",
            Task::StateLks => "state-lks",
            Task::Diagonal => "diagonal",
            Task::Batched => "batched",
            Task::Mass => "mass",
            Task::Oracle => "oracle",
        }
    }

    /// Default largest n; every cell is checked against a dense or per-basis simulation.
    pub fn default_cap(self) -> u32 {
        match self {
            Task::State | Task::StateLks => 8,
            Task::Diagonal | Task::Batched | Task::Mass => 10,
            Task::Oracle => 12,
        }
    }

    /// Oracles are exact, so the ε axis collapses to one column.
    pub fn is_exact(self) -> bool {
        self == Task::Oracle
    }
}

impl fmt::Display for Task {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Task {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Task::ALL
            .into_iter()
            .find(|t| t.name() == s)
            .ok_or_else(|| Error::InvalidInput(format!("unknown task `{s}`")))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BenchGrid {
    pub task: Task,
    pub ns: Vec<u32>,
    pub eps: Vec<f64>,
    pub instances: u32,
    pub seed: u64,
}

fn parse_list<T: FromStr>(key: &str, v: &str) -> Result<Vec<T>> {
    v.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse().map_err(|_| Error::InvalidInput(format!("bad {key} value `{s}`"))))
        .collect()
}

impl BenchGrid {
    /// `task=diagonal;n=2..8;eps=1e-1,1e-2;instances=3;seed=0`. `n` takes `a..b` (inclusive)
    /// or a comma list; missing keys default to one instance, seed 0 and ε = 1e-2.
    pub fn parse(spec: &str) -> Result<Self> {
        let mut g = BenchGrid { task: Task::Diagonal, ns: Vec::new(), eps: vec![1e-2], instances: 1, seed: 0 };
        let mut have_task = false;
        for part in spec.split(';').map(str::trim).filter(|p| !p.is_empty()) {
            let (k, v) = part.split_once('=').ok_or_else(|| Error::InvalidInput(format!("expected key=value, got `{part}`")))?;
            let v = v.trim();
            match k.trim() {
                "task" => {
                    g.task = v.parse()?;
                    have_task = true;
                }
                "n" => {
                    g.ns = match v.split_once("..") {
                        Some((a, b)) => {
                            let lo: u32 = a.trim().parse().map_err(|_| Error::InvalidInput(format!("bad n range `{v}`")))?;
                            let hi: u32 = b.trim().parse().map_err(|_| Error::InvalidInput(format!("bad n range `{v}`")))?;
                            (lo..=hi).collect()
                        }
                        None => parse_list("n", v)?,
                    }
                }
                "eps" => g.eps = parse_list("eps", v)?,
                "instances" => g.instances = v.parse().map_err(|_| Error::InvalidInput(format!("bad instances `{v}`")))?,
                "seed" => g.seed = v.parse().map_err(|_| Error::InvalidInput(format!("bad seed `{v}`")))?,
                other => return Err(Error::InvalidInput(format!("unknown grid key `{other}`"))),
            }
        }
        if !have_task {
            return Err(Error::InvalidInput("grid needs task=<name>".into()));
        }
        if let Some(e) = g.eps.iter().find(|e| !(EPS_MIN..=0.5).contains(*e)) {
            return Err(Error::InvalidInput(format!("eps {e} outside [{EPS_MIN}, 1/2]")));
        }
        Ok(g)
    }

    /// Cells in key order; ε is 0 for exact tasks.
    pub fn cells(&self) -> Vec<Cell> {
        let eps: Vec<f64> = if self.task.is_exact() { vec![0.0] } else { self.eps.clone() };
        let mut out = Vec::new();
        for &n in &self.ns {
            for &e in &eps {
                for instance in 0..self.instances {
                    out.push(Cell { task: self.task, n, eps: e, instance, seed: instance_seed(self.seed, n, instance) });
                }
            }
        }
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Cell {
    pub task: Task,
    pub n: u32,
    pub eps: f64,
    pub instance: u32,
    /// Seeds both the instance and any randomized synthesis step.
    pub seed: u64,
}

/// Depends on n and the instance only, so `state` and `state-lks` see the same targets.
pub fn instance_seed(seed: u64, n: u32, instance: u32) -> u64 {
    let mut z = seed ^ (n as u64) << 32 ^ instance as u64;
    // splitmix64 finalizer
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[derive(Clone, Debug, PartialEq)]
pub struct BenchRow {
    pub task: Task,
    pub n: u32,
    pub epsilon: f64,
    pub instance: u32,
    pub seed: u64,
    pub t_count: usize,
    pub clifford_count: usize,
    pub ancillas: u32,
    pub measured_error: f64,
    pub wall_ms: f64,
}

pub const CSV_HEADER: [&str; 10] =
    ["task", "n", "epsilon", "instance", "seed", "t_count", "clifford_count", "ancillas", "measured_error", "wall_ms"];

impl BenchRow {
    pub fn from_report(cell: &Cell, r: &SynthReport) -> Self {
        BenchRow {
            task: cell.task,
            n: cell.n,
            epsilon: cell.eps,
            instance: cell.instance,
            seed: cell.seed,
            t_count: r.t_count,
            clifford_count: r.clifford_count,
            ancillas: r.ancilla_count,
            measured_error: r.measured_error,
            wall_ms: r.wall_time * 1e3,
        }
    }

    pub fn record(&self) -> [String; 10] {
        [
            self.task.to_string(),
            self.n.to_string(),
            self.epsilon.to_string(),
            self.instance.to_string(),
            self.seed.to_string(),
            self.t_count.to_string(),
            self.clifford_count.to_string(),
            self.ancillas.to_string(),
            self.measured_error.to_string(),
            format!("{:.3}", self.wall_ms),
        ]
    }
}

/// Phases drawn uniformly from [0, 2π).
pub fn random_phases(n: u32, rng: &mut impl Rng) -> DiagonalSpec {
    DiagonalSpec::new((0..1usize << n).map(|_| rng.gen_range(0.0..std::f64::consts::TAU)).collect()).expect("power of two")
}

pub fn run_cell(cell: &Cell) -> Result<BenchRow> {
    let mut rng = ChaCha8Rng::seed_from_u64(cell.seed);
    let (n, eps) = (cell.n, cell.eps);
    let start = Instant::now();
    let report = match cell.task {
        Task::State => {
            let psi = TargetState::random(n, &mut rng);
            synth_state_with(&psi, eps, &StateConfig { seed: cell.seed, ..Default::default() })?.1
        }
        Task::StateLks => synth_state_lks(&TargetState::random(n, &mut rng), eps)?.1,
        Task::Diagonal => synth_diagonal(&random_phases(n, &mut rng), eps)?.1,
        Task::Batched => {
            let units: Vec<_> = (0..n).map(|_| haar_unitary(&mut rng)).collect();
            let c = synth_batched(&units, eps)?;
            let e = unitary_error(&c, &tensor_matrix(&units))?;
            SynthReport::for_circuit(&c, e, start.elapsed())?
        }
        Task::Mass => {
            let u = haar_unitary(&mut rng);
            let c = synth_mass(&u, n, eps)?;
            let e = unitary_error(&c, &tensor_matrix(&vec![u; n as usize]))?;
            SynthReport::for_circuit(&c, e, start.elapsed())?
        }
        Task::Oracle => {
            let f = TruthTable::from_fn(n, 1, |_| rng.gen_range(0..2));
            let c = synth_oracle(&f);
            let sim = BitSim::new(&c)?;
            let outs = sim.run_all(&(0..n).collect::<Vec<_>>());
            let wrong = outs.iter().enumerate().filter(|(x, o)| o[n as usize] != f.get(*x as u64, 0)).count();
            SynthReport::for_circuit(&c, wrong as f64 / outs.len() as f64, start.elapsed())?
        }
    };
    let mut row = BenchRow::from_report(cell, &report);
    row.wall_ms = start.elapsed().as_secs_f64() * 1e3;
    Ok(row)
}

#[derive(Clone, Debug, PartialEq)]
pub struct Skipped {
    pub cell: Cell,
    pub reason: String,
}

/// Runs every feasible cell on `jobs` threads; rows come back in cell order. Cells above
/// `cap` qubits and cells whose synthesis fails are returned as skipped with the reason.
pub fn run_grid(grid: &BenchGrid, cap: u32, jobs: usize) -> (Vec<BenchRow>, Vec<Skipped>) {
    let mut skipped = Vec::new();
    let cells: Vec<Cell> = grid
        .cells()
        .into_iter()
        .filter(|c| {
            let ok = c.n <= cap && c.n >= 1;
            if !ok {
                skipped.push(Skipped { cell: *c, reason: format!("n = {} outside 1..={cap}", c.n) });
            }
            ok
        })
        .collect();
    let results: Vec<Mutex<Option<Result<BenchRow>>>> = cells.iter().map(|_| Mutex::new(None)).collect();
    let next = AtomicUsize::new(0);
    std::thread::scope(|s| {
        for _ in 0..jobs.max(1).min(cells.len().max(1)) {
            s.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(cell) = cells.get(i) else { break };
                *results[i].lock().expect("unpoisoned") = Some(run_cell(cell));
            });
        }
    });
    let mut rows = Vec::with_capacity(cells.len());
    for (cell, r) in cells.iter().zip(results) {
        match r.into_inner().expect("unpoisoned").expect("every cell ran") {
            Ok(row) => rows.push(row),
            Err(e) => skipped.push(Skipped { cell: *cell, reason: e.to_string() }),
        }
    }
    (rows, skipped)
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScalingFit {
    pub coeffs: Vec<f64>,
    pub max_rel_residual: f64,
    pub r2: f64,
    pub points: usize,
}

/// Least squares for y ≈ X·c, X given row by row.
pub fn least_squares(rows: &[Vec<f64>], y: &[f64]) -> Result<ScalingFit> {
    let p = rows.first().map_or(0, Vec::len);
    if rows.len() < p || p == 0 {
        return Err(Error::InvalidInput(format!("{} points for {p} coefficients", rows.len())));
    }
    let x = DMatrix::from_fn(rows.len(), p, |i, j| rows[i][j]);
    let yv = DVector::from_column_slice(y);
    let c = x.clone().svd(true, true).solve(&yv, 1e-12).map_err(|e| Error::InvalidInput(e.to_string()))?;
    let pred = &x * &c;
    let mean = y.iter().sum::<f64>() / y.len() as f64;
    let ss_tot: f64 = y.iter().map(|v| (v - mean).powi(2)).sum();
    let ss_res: f64 = y.iter().zip(pred.iter()).map(|(v, p)| (v - p).powi(2)).sum();
    let max_rel = y.iter().zip(pred.iter()).map(|(v, p)| if *v == 0.0 { (v - p).abs() } else { ((v - p) / v).abs() }).fold(0.0, f64::max);
    Ok(ScalingFit {
        coeffs: c.iter().copied().collect(),
        max_rel_residual: max_rel,
        r2: if ss_tot > 0.0 { 1.0 - ss_res / ss_tot } else { 1.0 },
        points: y.len(),
    })
}

/// Regressors of the approximate tasks: √(2^n log₂(1/ε)), log₂(1/ε), 1.
pub fn model_terms(n: u32, eps: f64) -> Vec<f64> {
    let l = (1.0 / eps).log2();
    vec![((1u64 << n) as f64 * l).sqrt(), l, 1.0]
}

/// Fit of t_count against the task's model; oracles use √(b·2^n) and a constant with b = 1.
pub fn fit_rows(rows: &[BenchRow]) -> Result<ScalingFit> {
    let x: Vec<Vec<f64>> = rows
        .iter()
        .map(|r| if r.task.is_exact() { vec![((1u64 << r.n) as f64).sqrt(), 1.0] } else { model_terms(r.n, r.epsilon) })
        .collect();
    let y: Vec<f64> = rows.iter().map(|r| r.t_count as f64).collect();
    least_squares(&x, &y)
}
