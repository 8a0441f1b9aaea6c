use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;
use tforge::bench::{instance_seed, run_grid, BenchGrid, BenchRow, Cell, Task, CSV_HEADER};
use tforge::boolean::{synth_oracle, TruthTable};
use tforge::circuit::{parse, serialize};
use tforge::diagonal::{synth_batched, synth_diagonal, tensor_matrix, unitary_error};
use tforge::mass::synth_mass;
use tforge::sim::{measure_diagonal, parse_state, BitSim, DiagonalSpec};
use tforge::squbit::Mat2;
use tforge::state::{synth_state_lks, synth_state_with, verify_state, StateConfig, TargetState};
use tforge::{Circuit, SynthReport};

#[derive(Parser)]
#[command(name = "tforge", version, about = "Clifford+T synthesis and benchmarks")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Synthesize a circuit and print a report row.
    Synth {
        task: Task,
        #[command(flatten)]
        target: Target,
        #[arg(long, default_value_t = 1e-2)]
        eps: f64,
        #[arg(long, env = "TFORGE_SEED", default_value_t = 0)]
        seed: u64,
        /// Circuit file; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Report CSV; stderr when absent.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Re-measure a circuit against its reference; nonzero exit on a mismatch.
    Verify {
        task: Task,
        circuit: PathBuf,
        #[command(flatten)]
        target: Target,
        /// Largest acceptable error. Defaults to the report's ε, else 1e-9.
        #[arg(long)]
        eps: Option<f64>,
        /// Synthesis-time report to check the measured error against.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Run a benchmark grid and print CSV plus a scaling summary.
    Bench {
        /// e.g. `task=diagonal;n=2..8;eps=1e-1,1e-2,1e-3;instances=2`
        #[arg(long)]
        grid: String,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        jobs: Option<usize>,
        /// Overrides the task's default qubit cap.
        #[arg(long)]
        max_qubits: Option<u32>,
        #[arg(long, env = "TFORGE_SEED")]
        seed: Option<u64>,
    },
}

#[derive(Args)]
struct Target {
    /// State file, diagonal spec file, or unitary list (batched, mass).
    #[arg(long)]
    input: Option<PathBuf>,
    /// Qubits for --phases; copies for mass.
    #[arg(long)]
    n: Option<u32>,
    /// Comma-separated diagonal phases in radians.
    #[arg(long)]
    phases: Option<String>,
    /// Truth table file.
    #[arg(long)]
    table: Option<PathBuf>,
}

fn read(p: &Path) -> Result<String> {
    fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))
}

fn diagonal_target(t: &Target) -> Result<DiagonalSpec> {
    if let Some(ph) = &t.phases {
        let phases = ph.split(',').map(|s| s.trim().parse::<f64>().map_err(|_| anyhow!("bad phase `{s}`"))).collect::<Result<Vec<_>>>()?;
        let spec = DiagonalSpec::new(phases)?;
        if let Some(n) = t.n {
            if n != spec.n {
                bail!("--n {n} but {} phases", spec.phases.len());
            }
        }
        return Ok(spec);
    }
    let p = t.input.as_ref().ok_or_else(|| anyhow!("diagonal needs --phases or --input"))?;
    Ok(DiagonalSpec::parse(&read(p)?)?)
}

fn state_target(t: &Target) -> Result<TargetState> {
    let p = t.input.as_ref().ok_or_else(|| anyhow!("state needs --input"))?;
    Ok(TargetState::from_sparse(&parse_state(&read(p)?)?)?)
}

fn table_target(t: &Target) -> Result<TruthTable> {
    let p = t.table.as_ref().ok_or_else(|| anyhow!("oracle needs --table"))?;
    Ok(TruthTable::parse(&read(p)?)?)
}

/// One unitary per line: eight numbers, re and im of the row-major entries.
fn unitary_target(t: &Target) -> Result<Vec<Mat2>> {
    let p = t.input.as_ref().ok_or_else(|| anyhow!("needs --input with one unitary per line"))?;
    let mut out = Vec::new();
    for (i, line) in read(p)?.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let v = line.split_whitespace().map(str::parse::<f64>).collect::<std::result::Result<Vec<_>, _>>().map_err(|_| anyhow!("line {}: bad number", i + 1))?;
        if v.len() != 8 {
            bail!("line {}: expected 8 numbers, found {}", i + 1, v.len());
        }
        out.push(std::array::from_fn(|k| Complex64::new(v[2 * k], v[2 * k + 1])));
    }
    if out.is_empty() {
        bail!("no unitaries in {}", p.display());
    }
    Ok(out)
}

fn mass_target(t: &Target) -> Result<(Mat2, u32)> {
    let us = unitary_target(t)?;
    if us.len() != 1 {
        bail!("mass takes one unitary, found {}", us.len());
    }
    Ok((us[0], t.n.ok_or_else(|| anyhow!("mass needs --n copies"))?))
}

fn oracle_error(c: &Circuit, f: &TruthTable) -> Result<f64> {
    let sim = BitSim::new(c)?;
    let xs: Vec<u32> = (0..f.n).collect();
    let mut wrong = 0usize;
    for (x, out) in sim.run_all(&xs).iter().enumerate() {
        let y_ok = (0..f.b).all(|i| out[(f.n + i) as usize] == f.get(x as u64, i));
        let anc_ok = out[(f.n + f.b) as usize..].iter().all(|b| !b);
        wrong += (!y_ok || !anc_ok) as usize;
    }
    Ok(wrong as f64 / (1u64 << f.n) as f64)
}

fn synthesize(task: Task, t: &Target, eps: f64, seed: u64) -> Result<(Circuit, SynthReport, u32)> {
    let start = Instant::now();
    Ok(match task {
        Task::State => {
            let psi = state_target(t)?;
            let (o, r) = synth_state_with(&psi, eps, &StateConfig { seed, ..Default::default() })?;
            (o.circuit, r, psi.n)
        }
        Task::StateLks => {
            let psi = state_target(t)?;
            let (c, r) = synth_state_lks(&psi, eps)?;
            (c, r, psi.n)
        }
        Task::Diagonal => {
            let spec = diagonal_target(t)?;
            let (c, r) = synth_diagonal(&spec, eps)?;
            (c, r, spec.n)
        }
        Task::Oracle => {
            let f = table_target(t)?;
            let c = synth_oracle(&f);
            let e = oracle_error(&c, &f)?;
            let r = SynthReport::for_circuit(&c, e, start.elapsed())?;
            (c, r, f.n)
        }
        Task::Batched => {
            let us = unitary_target(t)?;
            let c = synth_batched(&us, eps)?;
            let e = unitary_error(&c, &tensor_matrix(&us))?;
            let r = SynthReport::for_circuit(&c, e, start.elapsed())?;
            (c, r, us.len() as u32)
        }
        Task::Mass => {
            let (u, m) = mass_target(t)?;
            let c = synth_mass(&u, m, eps)?;
            let e = unitary_error(&c, &tensor_matrix(&vec![u; m as usize]))?;
            let r = SynthReport::for_circuit(&c, e, start.elapsed())?;
            (c, r, m)
        }
    })
}

fn measure(task: Task, c: &Circuit, t: &Target) -> Result<f64> {
    Ok(match task {
        Task::State | Task::StateLks => verify_state(c, &state_target(t)?)?.error,
        Task::Diagonal => {
            let spec = diagonal_target(t)?;
            if c.input_count != spec.n {
                bail!("circuit has {} inputs, reference has {}", c.input_count, spec.n);
            }
            measure_diagonal(c, spec.n)?.error(&spec)
        }
        Task::Oracle => {
            let f = table_target(t)?;
            if c.input_count != f.n + f.b {
                bail!("circuit has {} inputs, table needs {}", c.input_count, f.n + f.b);
            }
            oracle_error(c, &f)?
        }
        Task::Batched => {
            let us = unitary_target(t)?;
            unitary_error(c, &tensor_matrix(&us))?
        }
        Task::Mass => {
            let (u, m) = mass_target(t)?;
            unitary_error(c, &tensor_matrix(&vec![u; m as usize]))?
        }
    })
}

fn write_csv(w: impl Write, rows: &[BenchRow]) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(CSV_HEADER)?;
    for r in rows {
        out.write_record(r.record())?;
    }
    out.flush()?;
    Ok(())
}

/// epsilon and measured_error of the first data row.
fn read_report(p: &Path) -> Result<(f64, f64)> {
    let text = read(p)?;
    let mut rd = csv::Reader::from_reader(text.as_bytes());
    let head = rd.headers()?.clone();
    let col = |name: &str| head.iter().position(|h| h == name).ok_or_else(|| anyhow!("report has no `{name}` column"));
    let (ce, cm) = (col("epsilon")?, col("measured_error")?);
    let rec = rd.records().next().ok_or_else(|| anyhow!("empty report"))??;
    let num = |i: usize| rec.get(i).unwrap_or("").parse::<f64>().map_err(|_| anyhow!("bad number in report"));
    Ok((num(ce)?, num(cm)?))
}

fn output(path: &Option<PathBuf>, text: &[u8]) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => Ok(std::io::stdout().write_all(text)?),
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.cmd {
        Cmd::Synth { task, target, eps, seed, out, report } => {
            let (c, r, n) = synthesize(task, &target, eps, seed)?;
            output(&out, serialize(&c).as_bytes())?;
            let eps_col = if task.is_exact() { 0.0 } else { eps };
            let cell = Cell { task, n, eps: eps_col, instance: 0, seed };
            let mut buf = Vec::new();
            write_csv(&mut buf, &[BenchRow::from_report(&cell, &r)])?;
            match report {
                Some(p) => fs::write(&p, &buf).with_context(|| format!("writing {}", p.display()))?,
                None => std::io::stderr().write_all(&buf)?,
            }
        }
        Cmd::Verify { task, circuit, target, eps, report } => {
            let c = parse(&read(&circuit)?)?;
            let measured = measure(task, &c, &target)?;
            let reported = report.as_deref().map(read_report).transpose()?;
            let tol = eps.or(reported.map(|r| r.0)).unwrap_or(1e-9);
            println!("measured_error {measured}");
            if !(measured <= tol) {
                bail!("measured error {measured} exceeds {tol}");
            }
            if let Some((_, rm)) = reported {
                if !((measured - rm).abs() <= 1e-9) {
                    bail!("measured error {measured} differs from reported {rm}");
                }
            }
        }
        Cmd::Bench { grid, out, jobs, max_qubits, seed } => {
            let mut g = BenchGrid::parse(&grid)?;
            if let Some(s) = seed {
                if !grid.contains("seed=") {
                    g.seed = s;
                }
            }
            let cap = match max_qubits {
                Some(m) if m > g.task.default_cap() => {
                    eprintln!("warning: --max-qubits {m} is above the {} cap of {}", g.task, g.task.default_cap());
                    m
                }
                Some(m) => m,
                None => g.task.default_cap(),
            };
            let jobs = jobs.unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
            let (rows, skipped) = run_grid(&g, cap, jobs);
            for s in &skipped {
                eprintln!(
                    "skipped {} n={} eps={} instance={} (seed {}): {}",
                    s.cell.task, s.cell.n, s.cell.eps, s.cell.instance, instance_seed(g.seed, s.cell.n, s.cell.instance), s.reason
                );
            }
            let mut buf = Vec::new();
            write_csv(&mut buf, &rows)?;
            output(&out, &buf)?;
            match tforge::bench::fit_rows(&rows) {
                Ok(f) => eprintln!(
                    "fit over {} rows: coefficients {:?}, max relative residual {:.3}, R² {:.4}",
                    f.points, f.coeffs, f.max_rel_residual, f.r2
                ),
                Err(e) => eprintln!("no fit: {e}"),
            }
        }
    }
    Ok(())
}

fn main() -> std::process::ExitCode {
    match run(Cli::parse()) {
        Ok(()) => std::process::ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            std::process::ExitCode::FAILURE
        }
    }
}
