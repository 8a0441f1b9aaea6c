//! Diagonal unitaries through a gate-sequence table, and the single-qubit batch compilers built on them.

mod batch;
mod ladder;
mod synth;
mod table;

pub use batch::{batch_group_size, block_diag_matrix, synth_batched, synth_block_diag, synth_tensor_singles, tensor_matrix, unitary_error};
pub use ladder::{classify_columns, controlled_ladder, emit_ladder, Column};
pub use synth::{build_diagonal, synth_diagonal, synth_diagonal_with, DiagonalOutput, Route};
pub use table::{build_sequence_table, build_sequence_table_with, ladder_word, GateSequenceTable};
