use super::Circuit;
use crate::error::Result;
use std::time::Duration;

#[derive(Clone, Debug, PartialEq, Default)]
pub struct SynthReport {
    pub t_count: usize,
    pub clifford_count: usize,
    pub ancilla_count: u32,
    pub measured_error: f64,
    /// Seconds.
    pub wall_time: f64,
    /// Seed of any randomized step.
    pub seed: Option<u64>,
}

impl SynthReport {
    pub fn for_circuit(c: &Circuit, measured_error: f64, wall: Duration) -> Result<Self> {
        Ok(SynthReport {
            t_count: c.t_count()?,
            clifford_count: c.clifford_count()?,
            ancilla_count: c.ancilla_count(),
            measured_error,
            wall_time: wall.as_secs_f64(),
            seed: None,
        })
    }
}
