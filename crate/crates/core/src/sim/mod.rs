//! Sparse state-vector simulation and the error metrics used for verification.

mod bits;
mod diagonal;
mod io;
mod metrics;
mod state;

pub use bits::{run_bits, BitSim};
pub use diagonal::{extract_diagonal, extract_diagonal_with, measure_diagonal, run_columns, Columns, DiagonalMeasure, DiagonalSpec};
pub use io::{parse_state, serialize_state};
pub use metrics::{ancilla_clean_weight, diagonal_op_norm_error, l2_phase_min_distance, restrict_to_inputs};
pub use state::{run, SparseState, PRUNE};
