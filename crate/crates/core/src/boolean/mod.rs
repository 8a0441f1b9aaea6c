//! Exact reversible oracles: truth tables, ±1 phase oracles, and the Hamming-weight circuit.

mod hamming;
mod oracle;
mod phase;
mod table;

pub use hamming::{emit_hamming, hamming_width, synth_hamming};
pub use oracle::{anf, choose_split, emit_oracle, emit_oracle_around, oracle_ccx_bound, synth_oracle};
pub use phase::{emit_multi_controlled_z, emit_phase_oracle, emit_zero_reflection, synth_phase_oracle};
pub use table::{PhaseTable, TruthTable};
