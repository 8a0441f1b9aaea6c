use crate::boolean::PhaseTable;
use crate::circuit::{Builder, Circuit, Gate, Qubit};
use crate::error::{Error, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// In-place unnormalized Walsh–Hadamard transform.
pub fn fwht(v: &mut [f64]) {
    let n = v.len();
    assert!(n.is_power_of_two());
    let mut h = 1;
    while h < n {
        for i in (0..n).step_by(2 * h) {
            for j in i..i + h {
                let (a, b) = (v[j], v[j + h]);
                v[j] = a + b;
                v[j + h] = a - b;
            }
        }
        h *= 2;
    }
}

/// ‖H^{⊗n} diag(s) ψ‖₁ / √(2^n) and the transformed vector (unnormalized by √(2^n)).
pub fn flattening_score(psi: &[f64], signs: &[bool]) -> (f64, Vec<f64>) {
    let mut v: Vec<f64> = psi.iter().zip(signs).map(|(&a, &m)| if m { -a } else { a }).collect();
    fwht(&mut v);
    let dim = psi.len() as f64;
    (v.iter().map(|x| x.abs()).sum::<f64>() / dim, v)
}

/// Scores of `count` uniformly random sign tables.
pub fn flattening_samples(psi: &[f64], count: usize, rng: &mut impl Rng) -> Vec<f64> {
    (0..count)
        .map(|_| {
            let signs: Vec<bool> = (0..psi.len()).map(|_| rng.gen()).collect();
            flattening_score(psi, &signs).0
        })
        .collect()
}

/// φ = B₂ H^{⊗n} B₁ H^{⊗n} |0^n⟩ with its overlap with the state it was fitted to.
#[derive(Clone, Debug, PartialEq)]
pub struct CoarseApprox {
    pub b1: PhaseTable,
    pub b2: PhaseTable,
    pub overlap: f64,
}

impl CoarseApprox {
    pub fn n(&self) -> u32 {
        self.b1.n
    }

    /// Dense real amplitudes of φ.
    pub fn state(&self) -> Vec<f64> {
        let dim = 1usize << self.n();
        let mut v: Vec<f64> = (0..dim).map(|x| self.b1.sign(x)).collect();
        fwht(&mut v);
        v.iter().enumerate().map(|(x, a)| a * self.b2.sign(x) / dim as f64).collect()
    }

    /// H layer, B₁, H layer, B₂ on qubits 0..n.
    pub fn circuit(&self) -> Circuit {
        let n = self.n();
        let xs: Vec<Qubit> = (0..n).collect();
        let mut bld = Builder::new(n);
        emit_coarse(&mut bld, &self.b1, &self.b2, &xs);
        bld.finish(format!("coarse n={n}"))
    }
}

pub(crate) fn emit_coarse(bld: &mut Builder, b1: &PhaseTable, b2: &PhaseTable, xs: &[Qubit]) {
    use crate::boolean::emit_phase_oracle;
    bld.extend(xs.iter().map(|&q| Gate::H(q)));
    emit_phase_oracle(bld, b1, xs);
    bld.extend(xs.iter().map(|&q| Gate::H(q)));
    emit_phase_oracle(bld, b2, xs);
}

#[derive(Clone, Debug)]
pub struct CoarseConfig {
    /// Sign tables tried.
    pub budget: usize,
    pub gamma_min: f64,
    pub seed: u64,
}

impl Default for CoarseConfig {
    fn default() -> Self {
        CoarseConfig { budget: 256, gamma_min: 0.63, seed: 0 }
    }
}

/// Best sign table B₂ among `budget` candidates for the real unit vector `psi`, B₁ = sign(H B₂ ψ).
///
/// The all-plus table is tried first. When every table up to a global sign fits in the
/// budget the search is exhaustive, otherwise the remaining candidates are random.
pub fn coarse_approx(psi: &[f64], cfg: &CoarseConfig) -> Result<CoarseApprox> {
    let dim = psi.len();
    if !dim.is_power_of_two() || cfg.budget == 0 {
        return Err(Error::InvalidInput(format!("length {dim}, budget {}", cfg.budget)));
    }
    let exhaustive = dim < usize::BITS as usize && (1usize << (dim - 1)) <= cfg.budget;
    let count = if exhaustive { 1usize << (dim - 1) } else { cfg.budget };
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut best: Option<(f64, Vec<bool>, Vec<f64>)> = None;
    for c in 0..count {
        let signs: Vec<bool> = if exhaustive {
            // bit 0 fixed: a global sign does not change the score
            (0..dim).map(|x| x > 0 && c >> (x - 1) & 1 == 1).collect()
        } else if c == 0 {
            vec![false; dim]
        } else {
            (0..dim).map(|_| rng.gen()).collect()
        };
        let (score, v) = flattening_score(psi, &signs);
        if best.as_ref().map_or(true, |b| score > b.0) {
            let done = score >= 1.0 - 1e-12;
            best = Some((score, signs, v));
            if done {
                break;
            }
        }
    }
    let (score, signs, v) = best.expect("budget is positive");
    if score < cfg.gamma_min {
        return Err(Error::FlatteningFailed { best: score, floor: cfg.gamma_min });
    }
    let n = dim.trailing_zeros();
    let b1 = PhaseTable::new(v.iter().map(|&a| a < 0.0).collect()).expect("power of two");
    let b2 = PhaseTable::new(signs).expect("power of two");
    debug_assert_eq!(b1.n, n);
    Ok(CoarseApprox { b1, b2, overlap: score })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::{run, SparseState};
    use crate::state::TargetState;

    fn dot(a: &[f64], b: &[f64]) -> f64 {
        a.iter().zip(b).map(|(x, y)| x * y).sum()
    }

    #[test]
    fn fwht_matches_dense_hadamard() {
        let v0 = vec![0.3, -1.2, 0.5, 2.0, 0.0, 1.0, -0.7, 0.25];
        let mut v = v0.clone();
        fwht(&mut v);
        for (y, &got) in v.iter().enumerate() {
            let want: f64 = v0.iter().enumerate().map(|(x, a)| if (x & y).count_ones() % 2 == 1 { -a } else { *a }).sum();
            assert!((got - want).abs() < 1e-12);
        }
    }

    #[test]
    fn overlap_identity_holds() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in 1..8 {
            let psi = TargetState::random_real(n, &mut rng).real_parts();
            let c = coarse_approx(&psi, &CoarseConfig { gamma_min: 0.0, ..Default::default() }).unwrap();
            let phi = c.state();
            assert!((dot(&phi, &phi) - 1.0).abs() < 1e-10);
            assert!((dot(&psi, &phi) - c.overlap).abs() < 1e-10, "n={n}");
            assert!(c.overlap >= 0.63, "n={n}: {}", c.overlap);
        }
    }

    #[test]
    fn basis_state_is_flat() {
        let mut psi = vec![0.0; 16];
        psi[5] = 1.0;
        let c = coarse_approx(&psi, &CoarseConfig::default()).unwrap();
        assert!((c.overlap - 1.0).abs() < 1e-12);
        let phi = c.state();
        assert!((phi[5] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn uniform_state_reaches_floor() {
        // needs a bent sign table; found by the exhaustive search for two qubits
        let psi = vec![0.5; 4];
        let c = coarse_approx(&psi, &CoarseConfig::default()).unwrap();
        assert!((c.overlap - 1.0).abs() < 1e-12);
        let psi = vec![1.0 / 8f64.sqrt(); 8];
        let c = coarse_approx(&psi, &CoarseConfig::default()).unwrap();
        assert!(c.overlap >= 0.63);
    }

    #[test]
    fn circuit_prepares_state() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for n in 1..6 {
            let psi = TargetState::random_real(n, &mut rng).real_parts();
            let c = coarse_approx(&psi, &CoarseConfig { gamma_min: 0.0, ..Default::default() }).unwrap();
            let circ = c.circuit();
            let out = run(&circ, &SparseState::<f64>::zero(circ.width)).unwrap();
            let phi = c.state();
            for (x, &a) in phi.iter().enumerate() {
                assert!((out.amplitude(x as u64).re - a).abs() < 1e-10);
                assert!(out.amplitude(x as u64).im.abs() < 1e-10);
            }
        }
    }

    #[test]
    fn floor_violation_reported() {
        let psi = vec![1.0 / 8f64.sqrt(); 8];
        let r = coarse_approx(&psi, &CoarseConfig { budget: 1, gamma_min: 0.9, seed: 0 });
        assert!(matches!(r, Err(Error::FlatteningFailed { .. })));
    }
}
