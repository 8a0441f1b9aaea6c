use super::ladder::{classify_columns, emit_ladder, Column};
use super::table::{build_sequence_table_with, GateSequenceTable};
use crate::boolean::{choose_split, emit_oracle_around, emit_phase_oracle, PhaseTable, TruthTable};
use crate::circuit::{Builder, Circuit, Gate, Qubit, SynthReport};
use crate::error::{Error, Result};
use crate::sim::{measure_diagonal, DiagonalSpec};
use crate::squbit::{default_synthesizer, Synthesizer};
use std::f64::consts::{FRAC_PI_4, PI};
use std::time::Instant;

/// Which construction produced the circuit.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Route {
    /// Every phase is zero.
    Identity,
    /// Every phase is a multiple of π.
    PhaseOracle,
    /// Phases are (π/4)·(c₀ + Σ cᵢxᵢ): single-qubit T powers and a global phase.
    Affine,
    /// Sequence table written by an oracle, controlled ladder, table erased again.
    Ladder,
}

#[derive(Clone, Debug)]
pub struct DiagonalOutput {
    pub circuit: Circuit,
    pub route: Route,
    pub table: Option<GateSequenceTable>,
    /// T-count of writing the table and erasing it again.
    pub oracle_t: usize,
    /// T-count of the ladder between the two.
    pub ladder_t: usize,
    /// Largest per-row word error.
    pub word_error: f64,
}

fn multiple_of(theta: f64, unit: f64) -> Option<i64> {
    let k = (theta / unit).round();
    ((theta - k * unit).abs() <= 1e-12).then_some(k as i64)
}

/// T^k on q with the fewest gates.
fn t_power(q: Qubit, k: i64) -> Vec<Gate> {
    match k.rem_euclid(8) {
        0 => vec![],
        1 => vec![Gate::T(q)],
        2 => vec![Gate::S(q)],
        3 => vec![Gate::S(q), Gate::T(q)],
        4 => vec![Gate::Z(q)],
        5 => vec![Gate::Z(q), Gate::T(q)],
        6 => vec![Gate::Sdg(q)],
        _ => vec![Gate::Tdg(q)],
    }
}

fn affine_coeffs(k: &[i64], n: u32) -> Option<(i64, Vec<i64>)> {
    let c0 = k[0];
    let c: Vec<i64> = (0..n).map(|i| k[1 << i] - c0).collect();
    for (j, &kj) in k.iter().enumerate() {
        let want = c0 + (0..n).filter(|i| j >> i & 1 == 1).map(|i| c[i as usize]).sum::<i64>();
        if (kj - want).rem_euclid(8) != 0 {
            return None;
        }
    }
    Some((c0, c))
}

fn emit_global_omega(bld: &mut Builder, k: i64, q: Option<Qubit>) {
    let k = k.rem_euclid(8);
    if k == 0 {
        return;
    }
    let tmp = q.is_none().then(|| bld.pool.alloc());
    let q = q.or(tmp).unwrap();
    // (SH)³ = e^{iπ/4}·I
    for _ in 0..k {
        for _ in 0..3 {
            bld.extend([Gate::H(q), Gate::S(q)]);
        }
    }
    if let Some(t) = tmp {
        bld.pool.release(t);
    }
}

/// Circuit on inputs 0..n plus ancillas implementing diag(e^{iθ_j}) to within `eps`, unverified.
pub fn build_diagonal(spec: &DiagonalSpec, eps: f64, synth: &Synthesizer) -> Result<DiagonalOutput> {
    if !(eps > 0.0) {
        return Err(Error::InvalidInput(format!("tolerance {eps} must be positive")));
    }
    let n = spec.n;
    let xs: Vec<Qubit> = (0..n).collect();
    let mut bld = Builder::new(n);
    let label = format!("diagonal n={n} eps={eps:e}");
    let simple = |circuit: Circuit, route| DiagonalOutput {
        circuit,
        route,
        table: None,
        oracle_t: 0,
        ladder_t: 0,
        word_error: 0.0,
    };
    let by_pi: Option<Vec<i64>> = spec.phases.iter().map(|&t| multiple_of(t, PI)).collect();
    if let Some(k) = &by_pi {
        if k.iter().all(|&x| x.rem_euclid(2) == 0) {
            return Ok(simple(bld.finish(label), Route::Identity));
        }
        let g = PhaseTable::new(k.iter().map(|&x| x.rem_euclid(2) == 1).collect())?;
        emit_phase_oracle(&mut bld, &g, &xs);
        return Ok(simple(bld.finish(label), Route::PhaseOracle));
    }
    let by_quarter: Option<Vec<i64>> = spec.phases.iter().map(|&t| multiple_of(t, FRAC_PI_4)).collect();
    if let Some((c0, c)) = by_quarter.as_deref().and_then(|k| affine_coeffs(k, n)) {
        for (i, &ci) in c.iter().enumerate() {
            bld.extend(t_power(i as Qubit, ci));
        }
        emit_global_omega(&mut bld, c0, xs.first().copied());
        return Ok(simple(bld.finish(label), Route::Affine));
    }

    let table = build_sequence_table_with(spec, eps, synth)?;
    let cols = classify_columns(&table);
    let var_cols: Vec<u32> = cols.iter().enumerate().filter(|c| *c.1 == Column::Var).map(|c| c.0 as u32).collect();
    let mut f = TruthTable::zeros(n, var_cols.len() as u32);
    for j in 0..1u64 << n {
        for (i, &col) in var_cols.iter().enumerate() {
            f.set(j, i as u32, table.rows.get(j, col));
        }
    }
    let work = bld.pool.alloc();
    let seq = bld.pool.alloc_many(var_cols.len());
    let start = bld.gates.len();
    let mut ladder_t = 0;
    emit_oracle_around(&mut bld, &f, &xs, &seq, choose_split(n, f.b), |b| {
        let ladder_start = b.gates.len();
        emit_ladder(b, &cols, &seq, work);
        ladder_t = count_t(&b.gates[ladder_start..]);
    });
    let total_t = count_t(&bld.gates[start..]);
    bld.pool.release_all(&seq);
    bld.pool.release(work);
    let word_error = table.errors.iter().copied().fold(0.0, f64::max);
    Ok(DiagonalOutput {
        circuit: bld.finish(label),
        route: Route::Ladder,
        table: Some(table),
        oracle_t: total_t - ladder_t,
        ladder_t,
        word_error,
    })
}

fn count_t(gates: &[Gate]) -> usize {
    gates.iter().map(|g| g.t_cost().expect("no placeholders")).sum()
}

/// Build, then measure the error by simulating every input basis state.
pub fn synth_diagonal_with(spec: &DiagonalSpec, eps: f64, synth: &Synthesizer) -> Result<(DiagonalOutput, SynthReport)> {
    let t0 = Instant::now();
    let out = build_diagonal(spec, eps, synth)?;
    let m = measure_diagonal(&out.circuit, spec.n)?;
    let report = SynthReport::for_circuit(&out.circuit, m.error(spec), t0.elapsed())?;
    Ok((out, report))
}

pub fn synth_diagonal(spec: &DiagonalSpec, eps: f64) -> Result<(Circuit, SynthReport)> {
    let (out, report) = synth_diagonal_with(spec, eps, default_synthesizer())?;
    Ok((out.circuit, report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{C_CH, C_CT};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn zero_spec_is_empty() {
        let (c, r) = synth_diagonal(&DiagonalSpec::zeros(3), 1e-3).unwrap();
        assert!(c.is_empty());
        assert_eq!(r.measured_error, 0.0);
    }

    #[test]
    fn boolean_spec_is_exact() {
        let spec = DiagonalSpec::new(vec![0.0, PI, PI, 0.0, -PI, 0.0, 3.0 * PI, PI]).unwrap();
        let s = default_synthesizer();
        let (out, r) = synth_diagonal_with(&spec, 1e-2, s).unwrap();
        assert_eq!(out.route, Route::PhaseOracle);
        assert!(r.measured_error < 1e-12, "{}", r.measured_error);
    }

    #[test]
    fn affine_quarter_turns() {
        let spec = DiagonalSpec::new(vec![0.0, FRAC_PI_4]).unwrap();
        let (out, r) = synth_diagonal_with(&spec, 1e-3, default_synthesizer()).unwrap();
        assert_eq!(out.route, Route::Affine);
        assert_eq!(out.circuit.gates, vec![Gate::T(0)]);
        assert!(r.measured_error < 1e-12);
        // global e^{i3π/4} with a sign pattern on qubit 1 ... plus a T on qubit 0
        let k = [3i64, 4, 1, 2];
        let spec = DiagonalSpec::new(k.iter().map(|&x| x as f64 * FRAC_PI_4).collect()).unwrap();
        let (out, r) = synth_diagonal_with(&spec, 1e-3, default_synthesizer()).unwrap();
        assert_eq!(out.route, Route::Affine);
        assert!(r.measured_error < 1e-12);
        assert_eq!(r.t_count, 1);
    }

    #[test]
    fn random_specs_meet_tolerance() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for (n, eps) in [(0u32, 1e-2), (1, 1e-2), (3, 1e-1), (4, 1e-3)] {
            let spec = DiagonalSpec::new((0..1 << n).map(|_| rng.gen_range(-PI..PI)).collect()).unwrap();
            let (out, r) = synth_diagonal_with(&spec, eps, default_synthesizer()).unwrap();
            assert_eq!(out.route, Route::Ladder);
            assert!(r.measured_error <= eps, "n={n}: {} > {eps}", r.measured_error);
            assert!(r.measured_error <= out.word_error + 1e-9);
            // exact accounting of the three pieces
            assert_eq!(r.t_count, out.oracle_t + out.ladder_t);
            let t = out.table.as_ref().unwrap();
            let cols = classify_columns(t);
            let ones_t = cols.iter().enumerate().filter(|(l, c)| l % 2 == 1 && **c == Column::One).count();
            let vars: Vec<usize> = cols.iter().enumerate().filter(|c| *c.1 == Column::Var).map(|c| c.0).collect();
            let ch = vars.iter().filter(|&&l| l % 2 == 0).count();
            assert_eq!(out.ladder_t, ch * C_CH + (vars.len() - ch) * C_CT + ones_t);
        }
    }
}
