use super::diagonal::DiagonalSpec;
use super::state::SparseState;
use crate::scalar::Real;
use num_complex::{Complex, Complex64};

/// min over θ of ‖a − e^{iθ} b‖ = √(2 − 2|⟨a|b⟩|) for normalized states.
pub fn l2_phase_min_distance<R: Real>(a: &SparseState<R>, b: &SparseState<R>) -> f64 {
    assert_eq!(a.width(), b.width(), "width mismatch");
    let b_map: rustc_hash::FxHashMap<&[u64], Complex<R>> = b.iter().collect();
    let mut ip = Complex::new(R::zero(), R::zero());
    for (k, x) in a.iter() {
        if let Some(&y) = b_map.get(k) {
            ip = ip + x.conj() * y;
        }
    }
    (2.0 - 2.0 * ip.norm().to_f64()).max(0.0).sqrt()
}

/// Largest |e^{iθ_j} − e^{iφ_j}|.
pub fn diagonal_op_norm_error(got: &DiagonalSpec, want: &DiagonalSpec) -> f64 {
    assert_eq!(got.n, want.n, "qubit count mismatch");
    got.phases
        .iter()
        .zip(&want.phases)
        .map(|(&a, &b)| (Complex64::from_polar(1.0, a) - Complex64::from_polar(1.0, b)).norm())
        .fold(0.0, f64::max)
}

fn ancilla_dirty(key: &[u64], input_count: u32) -> bool {
    let (w, b) = ((input_count / 64) as usize, input_count % 64);
    if w >= key.len() {
        return false;
    }
    key[w] >> b != 0 || key[w + 1..].iter().any(|&x| x != 0)
}

/// Probability mass on keys whose non-input qubits are not all zero.
pub fn ancilla_clean_weight<R: Real>(s: &SparseState<R>, input_count: u32) -> f64 {
    s.iter().filter(|(k, _)| ancilla_dirty(k, input_count)).map(|(_, a)| a.norm_sqr().to_f64()).sum()
}

/// Component with every non-input qubit at |0⟩, as a state on the inputs alone (not renormalized).
pub fn restrict_to_inputs<R: Real>(s: &SparseState<R>, input_count: u32) -> SparseState<R> {
    assert!(input_count <= 64);
    SparseState::from_entries(input_count, s.iter().filter(|(k, _)| !ancilla_dirty(k, input_count)).map(|(k, a)| (k[0], a)))
}
