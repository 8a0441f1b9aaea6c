//! Clifford+T synthesis: single-qubit words, Boolean oracles, diagonal unitaries,
//! state preparation and batched single-qubit gates, with a sparse simulator to check them.

pub mod bench;
pub mod boolean;
pub mod circuit;
pub mod diagonal;
pub mod error;
pub mod mass;
pub mod scalar;
pub mod sim;
pub mod squbit;
pub mod state;

pub use circuit::{Circuit, Gate, SynthReport};
pub use error::{Error, Result};
pub use scalar::Real;

/// Double-precision sparse state.
pub type State = sim::SparseState<f64>;
/// Single-precision sparse state.
pub type StateF32 = sim::SparseState<f32>;
