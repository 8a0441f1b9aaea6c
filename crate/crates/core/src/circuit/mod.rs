//! Gate alphabet, circuits, macro expansion and the text format.

mod expand;
mod gate;
mod pool;
mod report;
mod text;

pub use expand::{expand_macros, rccx_gates, word_gates, CH_V_WORD, C_CCX, C_CH, C_CT, C_RCCX};
pub use gate::{Gate, Qubit};
pub use pool::{Builder, QubitPool};
pub use report::SynthReport;
pub use text::{parse, serialize};

use crate::error::{Error, Result};
use crate::squbit::approx::check_unitary;

#[derive(Clone, Debug, PartialEq, Default)]
pub struct Circuit {
    pub width: u32,
    /// Qubits 0..input_count are inputs; the rest are ancillas starting at |0⟩.
    pub input_count: u32,
    pub gates: Vec<Gate>,
    pub label: String,
}

impl Circuit {
    pub fn new(width: u32, input_count: u32) -> Self {
        assert!(input_count <= width, "input_count exceeds width");
        Circuit { width, input_count, gates: Vec::new(), label: String::new() }
    }

    pub fn with_gates(width: u32, input_count: u32, gates: Vec<Gate>) -> Result<Self> {
        let c = Circuit { width, input_count, gates, label: String::new() };
        c.validate()?;
        Ok(c)
    }

    pub fn push(&mut self, g: Gate) {
        debug_assert!(check_gate(&g, self.width).is_ok(), "bad gate {g:?} for width {}", self.width);
        self.gates.push(g);
    }

    pub fn extend(&mut self, gates: impl IntoIterator<Item = Gate>) {
        for g in gates {
            self.push(g);
        }
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn validate(&self) -> Result<()> {
        if self.input_count > self.width {
            return Err(Error::InvalidGate(format!("input count {} exceeds width {}", self.input_count, self.width)));
        }
        for g in &self.gates {
            check_gate(g, self.width)?;
        }
        Ok(())
    }

    /// Reversed circuit with every gate inverted.
    pub fn adjoint(&self) -> Circuit {
        Circuit {
            width: self.width,
            input_count: self.input_count,
            gates: self.gates.iter().rev().map(Gate::inverse).collect(),
            label: self.label.clone(),
        }
    }

    /// T and T† count of the expanded circuit.
    pub fn t_count(&self) -> Result<usize> {
        self.gates.iter().map(Gate::t_cost).sum()
    }

    /// Non-T primitive count of the expanded circuit.
    pub fn clifford_count(&self) -> Result<usize> {
        self.gates.iter().map(Gate::clifford_cost).sum()
    }

    pub fn ancilla_count(&self) -> u32 {
        self.width - self.input_count
    }
}

pub fn t_count(c: &Circuit) -> Result<usize> {
    c.t_count()
}

pub fn adjoint(c: &Circuit) -> Circuit {
    c.adjoint()
}

impl Gate {
    /// T gates in the expansion of this gate.
    pub fn t_cost(&self) -> Result<usize> {
        Ok(match self {
            Gate::T(_) | Gate::Tdg(_) => 1,
            Gate::Ccx(..) => C_CCX,
            Gate::Ch(..) => C_CH,
            Gate::Ct(..) | Gate::Ctdg(..) => C_CT,
            Gate::Sq1(..) => return Err(Error::UnresolvedPlaceholder),
            _ => 0,
        })
    }

    /// Non-T primitives in the expansion of this gate.
    pub fn clifford_cost(&self) -> Result<usize> {
        Ok(match self {
            Gate::T(_) | Gate::Tdg(_) => 0,
            Gate::Ccx(..) => expand::CCX_CLIFFORDS,
            Gate::Ch(..) => expand::CH_CLIFFORDS,
            Gate::Ct(..) | Gate::Ctdg(..) => 2 * expand::CCX_CLIFFORDS,
            Gate::Sq1(..) => return Err(Error::UnresolvedPlaceholder),
            _ => 1,
        })
    }
}

fn check_gate(g: &Gate, width: u32) -> Result<()> {
    let qs = g.qubits();
    for (i, &q) in qs.iter().enumerate() {
        if q >= width {
            return Err(Error::InvalidGate(format!("{} operand {q} outside width {width}", g.name())));
        }
        if qs[..i].contains(&q) {
            return Err(Error::InvalidGate(format!("{} repeats operand {q}", g.name())));
        }
    }
    if let Gate::Sq1(_, m) = g {
        check_unitary(m)?;
    }
    Ok(())
}
