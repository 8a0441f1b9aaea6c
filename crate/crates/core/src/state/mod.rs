//! State preparation: phase peel, sign flattening, residual refinement, flagged
//! linear combination and exact amplitude amplification.

mod coarse;
mod lcu;
mod lks;
mod refine;
mod synth;

pub use coarse::{coarse_approx, flattening_score, flattening_samples, fwht, CoarseApprox, CoarseConfig};
pub use lcu::{amplitude_amplify, build_lcu, plan_aa, AAPlan};
pub use lks::synth_state_lks;
pub use refine::{cycling_fixtures, refine, RefineConfig, RefinementPlan, TRule};
pub use synth::{qubit_mass, synth_state, synth_state_with, verify_state, StateConfig, StateOutput, StateRoute, StateVerdict, EPS_MIN};

use crate::error::{Error, Result};
use crate::sim::{DiagonalSpec, SparseState};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

/// Dense normalized amplitude vector on n qubits, qubit 0 the low bit.
#[derive(Clone, Debug, PartialEq)]
pub struct TargetState {
    pub n: u32,
    pub amps: Vec<Complex64>,
}

impl TargetState {
    pub fn new(amps: Vec<Complex64>) -> Result<Self> {
        if !amps.len().is_power_of_two() {
            return Err(Error::InvalidInput(format!("{} amplitudes is not a power of two", amps.len())));
        }
        let norm: f64 = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if !((norm - 1.0).abs() <= 1e-10) {
            return Err(Error::InvalidInput(format!("state norm {norm} is not 1")));
        }
        Ok(TargetState { n: amps.len().trailing_zeros(), amps })
    }

    /// Rescales to unit norm first.
    pub fn normalized(amps: Vec<Complex64>) -> Result<Self> {
        let norm: f64 = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if !(norm > 0.0) || !norm.is_finite() {
            return Err(Error::InvalidInput("zero or non-finite vector".into()));
        }
        Self::new(amps.into_iter().map(|a| a / norm).collect())
    }

    pub fn from_real(amps: &[f64]) -> Result<Self> {
        Self::new(amps.iter().map(|&a| Complex64::new(a, 0.0)).collect())
    }

    pub fn basis(n: u32, x: u64) -> Self {
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n];
        amps[x as usize] = Complex64::new(1.0, 0.0);
        TargetState { n, amps }
    }

    /// Gaussian amplitudes, normalized (Haar-distributed).
    pub fn random(n: u32, rng: &mut impl Rng) -> Self {
        let amps = (0..1usize << n)
            .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
            .collect();
        Self::normalized(amps).expect("nonzero with probability one")
    }

    pub fn random_real(n: u32, rng: &mut impl Rng) -> Self {
        let amps = (0..1usize << n).map(|_| Complex64::new(rng.sample(StandardNormal), 0.0)).collect();
        Self::normalized(amps).expect("nonzero with probability one")
    }

    pub fn from_sparse(s: &SparseState) -> Result<Self> {
        Self::new(s.to_dense())
    }

    pub fn to_sparse(&self) -> SparseState {
        SparseState::from_entries(self.n, self.amps.iter().enumerate().filter(|(_, a)| a.norm() > 0.0).map(|(i, &a)| (i as u64, a)))
    }

    pub fn real_parts(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a.re).collect()
    }
}

/// Phases θ_x = arg ψ_x (0 where ψ_x = 0) and the state of moduli |ψ_x|.
pub fn peel_phases(psi: &TargetState) -> (DiagonalSpec, TargetState) {
    let phases = psi.amps.iter().map(|a| if a.norm() == 0.0 { 0.0 } else { a.arg() }).collect();
    let mods: Vec<Complex64> = psi.amps.iter().map(|a| Complex64::new(a.norm(), 0.0)).collect();
    let real = TargetState::normalized(mods).expect("normalized input");
    (DiagonalSpec::new(phases).expect("power of two"), real)
}

pub(crate) fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    #[test]
    fn peel_of_real_state_is_trivial() {
        let psi = TargetState::from_real(&[0.6, 0.0, 0.8, 0.0]).unwrap();
        let (d, r) = peel_phases(&psi);
        assert!(d.phases.iter().all(|&p| p == 0.0));
        assert_eq!(r, psi);
    }

    #[test]
    fn peel_minus_state() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let psi = TargetState::from_real(&[s, -s]).unwrap();
        let (d, r) = peel_phases(&psi);
        assert_eq!(d.phases[0], 0.0);
        assert!((d.phases[1] - PI).abs() < 1e-15);
        assert!((r.amps[1].re - s).abs() < 1e-15);
    }

    #[test]
    fn peel_recomposes() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for n in 1..6 {
            let psi = TargetState::random(n, &mut rng);
            let (d, r) = peel_phases(&psi);
            for x in 0..1usize << n {
                let back = d.entry(x) * r.amps[x];
                assert!((back - psi.amps[x]).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn rejects_unnormalized() {
        assert!(TargetState::from_real(&[1.0, 1.0]).is_err());
        assert!(TargetState::from_real(&[1.0, 0.0, 0.0]).is_err());
    }
}
