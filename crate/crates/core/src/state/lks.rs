use super::synth::{verify_state, EPS_MIN};
use super::{peel_phases, TargetState};
use crate::circuit::{Builder, Circuit, Qubit, SynthReport};
use crate::diagonal::{build_diagonal, synth_block_diag};
use crate::error::{Error, Result};
use crate::squbit::word::IDENTITY;
use crate::squbit::{default_synthesizer, Mat2};
use num_complex::Complex64;
use std::time::Instant;

/// Rotation taking |0⟩ to √p0|0⟩ + √p1|1⟩; identity on an empty branch.
fn marginal_rotation(p0: f64, p1: f64) -> Mat2 {
    let tot = p0 + p1;
    if !(tot > 0.0) {
        return IDENTITY;
    }
    let (c, s) = ((p0 / tot).sqrt(), (p1 / tot).sqrt());
    let z = |x: f64| Complex64::new(x, 0.0);
    [z(c), z(-s), z(s), z(c)]
}

/// Qubit-by-qubit conditional rotations: level k rotates qubit k conditioned on qubits 0..k,
/// each level a block diagonal at (ε/2)/2^{n−k}; the phases follow as a diagonal at ε/2.
pub fn synth_state_lks(psi: &TargetState, eps: f64) -> Result<(Circuit, SynthReport)> {
    if !(EPS_MIN..=0.5).contains(&eps) {
        return Err(Error::InvalidInput(format!("eps {eps} outside [{EPS_MIN}, 1/2]")));
    }
    let start = Instant::now();
    let n = psi.n;
    let (phases, real) = peel_phases(psi);
    let prob: Vec<f64> = real.amps.iter().map(|a| a.norm_sqr()).collect();
    let mut bld = Builder::new(n);
    for k in 0..n {
        let mask = (1usize << k) - 1;
        let mut p = vec![[0.0f64; 2]; 1 << k];
        for (x, &w) in prob.iter().enumerate() {
            p[x & mask][x >> k & 1] += w;
        }
        let units: Vec<Mat2> = p.iter().map(|q| marginal_rotation(q[0], q[1])).collect();
        if units.iter().all(|u| *u == IDENTITY) {
            continue;
        }
        let eps_k = eps / 2.0 / (1u64 << (n - k)) as f64;
        let qs: Vec<Qubit> = (0..=k).collect();
        bld.append_with_ancillas(&synth_block_diag(&units, eps_k)?, &qs);
    }
    let d = build_diagonal(&phases, eps / 2.0, default_synthesizer())?;
    let xs: Vec<Qubit> = (0..n).collect();
    bld.append_with_ancillas(&d.circuit, &xs);
    let c = bld.finish(format!("grover-rudolph n={n}"));
    let v = verify_state(&c, psi)?;
    Ok((c.clone(), SynthReport::for_circuit(&c, v.error, start.elapsed())?))
}
