//! m copies of one single-qubit unitary through Hamming-weight phase registers.

use crate::boolean::{hamming_width, synth_hamming};
use crate::circuit::{Builder, Circuit, Gate, Qubit};
use crate::diagonal::build_diagonal;
use crate::error::{Error, Result};
use crate::sim::DiagonalSpec;
use crate::squbit::approx::check_unitary;
use crate::squbit::{default_synthesizer, euler_hdh, Mat2};
use std::f64::consts::TAU;

fn trivial(spec: &DiagonalSpec) -> bool {
    spec.phases.iter().all(|p| {
        let r = p.rem_euclid(TAU);
        r.min(TAU - r) < 1e-15
    })
}

/// Phase of diag(e^{iθ0}, e^{iθ1})^{⊗m} on a weight-c input, for every c of the weight register.
fn weight_spec(d: &Mat2, m: u32) -> DiagonalSpec {
    let (t0, t1) = (d[0].arg(), d[3].arg());
    let w = hamming_width(m);
    let ph = (0..1u32 << w).map(|c| if c <= m { (m - c) as f64 * t0 + c as f64 * t1 } else { 0.0 }).collect();
    DiagonalSpec::new(ph).expect("power of two")
}

/// Weight into a fresh register, the weight diagonal, weight out again.
fn weight_stage(bld: &mut Builder, spec: &DiagonalSpec, eps: f64, xs: &[Qubit]) -> Result<()> {
    if trivial(spec) {
        return Ok(());
    }
    let m = xs.len() as u32;
    let ham = synth_hamming(m);
    let ys = bld.pool.alloc_many(hamming_width(m) as usize);
    let mut io = xs.to_vec();
    io.extend_from_slice(&ys);
    bld.append_with_ancillas(&ham, &io);
    let d = build_diagonal(spec, eps, default_synthesizer())?;
    bld.append_with_ancillas(&d.circuit, &ys);
    bld.append_with_ancillas(&ham.adjoint(), &io);
    bld.pool.release_all(&ys);
    Ok(())
}

/// U^{⊗m} = A^{⊗m} H^{⊗m} B^{⊗m} H^{⊗m} C^{⊗m}, each diagonal power a phase on the Hamming weight at ε/3.
pub fn synth_mass(u: &Mat2, m: u32, eps: f64) -> Result<Circuit> {
    check_unitary(u)?;
    if m == 0 || !(eps > 0.0) {
        return Err(Error::InvalidInput(format!("m {m}, eps {eps}")));
    }
    let (a, b, c) = euler_hdh(u);
    let xs: Vec<Qubit> = (0..m).collect();
    let hs: Vec<Gate> = xs.iter().map(|&q| Gate::H(q)).collect();
    let mut bld = Builder::new(m);
    weight_stage(&mut bld, &weight_spec(&c, m), eps / 3.0, &xs)?;
    let bs = weight_spec(&b, m);
    if !trivial(&bs) {
        bld.extend(hs.iter().cloned());
        weight_stage(&mut bld, &bs, eps / 3.0, &xs)?;
        bld.extend(hs);
    }
    weight_stage(&mut bld, &weight_spec(&a, m), eps / 3.0, &xs)?;
    Ok(bld.finish(format!("mass m={m}")))
}
