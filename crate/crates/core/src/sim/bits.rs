use crate::circuit::{Circuit, Gate};
use crate::error::{Error, Result};

/// Bit-parallel simulation of X/CX/CCX/SWAP circuits: lane word q holds qubit q for 64 inputs.
pub fn run_bits(c: &Circuit, lanes: &mut [u64]) -> Result<()> {
    if lanes.len() != c.width as usize {
        return Err(Error::WidthMismatch { circuit: c.width, state: lanes.len() as u32 });
    }
    for g in &c.gates {
        match *g {
            Gate::X(q) => lanes[q as usize] = !lanes[q as usize],
            Gate::Cx(a, b) => lanes[b as usize] ^= lanes[a as usize],
            Gate::Ccx(a, b, t) => lanes[t as usize] ^= lanes[a as usize] & lanes[b as usize],
            Gate::Swap(a, b) => lanes.swap(a as usize, b as usize),
            _ => return Err(Error::InvalidGate(format!("{} is not a classical gate", g.name()))),
        }
    }
    Ok(())
}

/// Evaluates a classical circuit on many basis inputs, 64 at a time.
pub struct BitSim<'a> {
    circuit: &'a Circuit,
}

impl<'a> BitSim<'a> {
    pub fn new(circuit: &'a Circuit) -> Result<Self> {
        if let Some(g) = circuit.gates.iter().find(|g| !g.is_classical()) {
            return Err(Error::InvalidGate(format!("{} is not a classical gate", g.name())));
        }
        Ok(BitSim { circuit })
    }

    /// Output basis states for `inputs`; each value is a full-width bit vector (qubit 0 first).
    pub fn run(&self, inputs: &[Vec<bool>]) -> Vec<Vec<bool>> {
        let w = self.circuit.width as usize;
        let mut out = Vec::with_capacity(inputs.len());
        for chunk in inputs.chunks(64) {
            let mut lanes = vec![0u64; w];
            for (j, x) in chunk.iter().enumerate() {
                assert_eq!(x.len(), w);
                for (q, &b) in x.iter().enumerate() {
                    lanes[q] |= (b as u64) << j;
                }
            }
            run_bits(self.circuit, &mut lanes).expect("classical circuit");
            for j in 0..chunk.len() {
                out.push((0..w).map(|q| lanes[q] >> j & 1 == 1).collect());
            }
        }
        out
    }

    /// Outputs for the inputs x ↦ (x on the listed qubits, 0 elsewhere), x in 0..2^qubits.len().
    pub fn run_all(&self, qubits: &[u32]) -> Vec<Vec<bool>> {
        let w = self.circuit.width as usize;
        let inputs: Vec<Vec<bool>> = (0..1u64 << qubits.len())
            .map(|x| {
                let mut v = vec![false; w];
                for (i, &q) in qubits.iter().enumerate() {
                    v[q as usize] = x >> i & 1 == 1;
                }
                v
            })
            .collect();
        self.run(&inputs)
    }
}
