use super::synth::build_diagonal;
use crate::circuit::{Builder, Circuit, Gate, Qubit};
use crate::error::{Error, Result};
use crate::sim::{run_columns, DiagonalSpec};
use crate::squbit::approx::check_unitary;
use crate::squbit::{default_synthesizer, euler_hdh, Mat2};
use nalgebra::DMatrix;
use num_complex::Complex64;

/// Append an exact-or-approximate diagonal on `qubits`, fresh ancillas from the shared pool.
fn append_diagonal(bld: &mut Builder, spec: &DiagonalSpec, eps: f64, qubits: &[Qubit]) -> Result<()> {
    let d = build_diagonal(spec, eps, default_synthesizer())?;
    bld.append_with_ancillas(&d.circuit, qubits);
    Ok(())
}

/// C, H layer, B, H layer, A in time order, each diagonal at ε/3; the Hadamards cancel when B is trivial.
fn three_stage(bld: &mut Builder, [c, b, a]: [DiagonalSpec; 3], hs: &[Gate], eps: f64, qubits: &[Qubit]) -> Result<()> {
    append_diagonal(bld, &c, eps / 3.0, qubits)?;
    if b.phases.iter().any(|&p| p != 0.0) {
        bld.extend(hs.iter().cloned());
        append_diagonal(bld, &b, eps / 3.0, qubits)?;
        bld.extend(hs.iter().cloned());
    }
    append_diagonal(bld, &a, eps / 3.0, qubits)
}

fn diag_entry(m: &Mat2, x: usize) -> f64 {
    m[3 * x].arg()
}

fn check_all(units: &[Mat2]) -> Result<()> {
    for u in units {
        check_unitary(u)?;
    }
    Ok(())
}

/// diag(U_0, …, U_{2^n−1}): control value j on qubits 0..n, target qubit n.
/// Built as three diagonals at ε/3 around two Hadamards on the target.
pub fn synth_block_diag(units: &[Mat2], eps: f64) -> Result<Circuit> {
    if !units.len().is_power_of_two() {
        return Err(Error::InvalidInput(format!("{} blocks is not a power of two", units.len())));
    }
    check_all(units)?;
    let n = units.len().trailing_zeros();
    let parts: Vec<(Mat2, Mat2, Mat2)> = units.iter().map(euler_hdh).collect();
    let spec = |pick: fn(&(Mat2, Mat2, Mat2)) -> &Mat2| {
        let mut ph = vec![0.0; 2 << n];
        for (j, p) in parts.iter().enumerate() {
            for x in 0..2 {
                ph[j + (x << n)] = diag_entry(pick(p), x);
            }
        }
        DiagonalSpec::new(ph).expect("power of two")
    };
    let qubits: Vec<Qubit> = (0..=n).collect();
    let mut bld = Builder::new(n + 1);
    three_stage(&mut bld, [spec(|p| &p.2), spec(|p| &p.1), spec(|p| &p.0)], &[Gate::H(n)], eps, &qubits)?;
    Ok(bld.finish(format!("block diagonal n={n}")))
}

/// U_0 ⊗ … ⊗ U_{m−1}, unit i on qubit i, as A·H^{⊗m}·B·H^{⊗m}·C with diagonals at ε/3.
pub fn synth_tensor_singles(units: &[Mat2], eps: f64) -> Result<Circuit> {
    if units.is_empty() {
        return Err(Error::InvalidInput("no unitaries".into()));
    }
    check_all(units)?;
    let m = units.len() as u32;
    let parts: Vec<(Mat2, Mat2, Mat2)> = units.iter().map(euler_hdh).collect();
    let spec = |pick: fn(&(Mat2, Mat2, Mat2)) -> &Mat2| {
        let ph = (0..1usize << m)
            .map(|x| parts.iter().enumerate().map(|(i, p)| diag_entry(pick(p), x >> i & 1)).sum())
            .collect();
        DiagonalSpec::new(ph).expect("power of two")
    };
    let qubits: Vec<Qubit> = (0..m).collect();
    let hs: Vec<Gate> = qubits.iter().map(|&q| Gate::H(q)).collect();
    let mut bld = Builder::new(m);
    three_stage(&mut bld, [spec(|p| &p.2), spec(|p| &p.1), spec(|p| &p.0)], &hs, eps, &qubits)?;
    Ok(bld.finish(format!("tensor m={m}")))
}

/// max(1, ⌈log₂ log₂(1/ε)⌉).
pub fn batch_group_size(eps: f64) -> usize {
    let l = (1.0 / eps).log2();
    if l <= 1.0 {
        return 1;
    }
    (l.log2().ceil() as usize).max(1)
}

/// Groups of batch_group_size(ε) units, each a tensor synthesis at ε/(group count).
pub fn synth_batched(units: &[Mat2], eps: f64) -> Result<Circuit> {
    if units.is_empty() {
        return Err(Error::InvalidInput("no unitaries".into()));
    }
    let g = batch_group_size(eps);
    let groups = units.len().div_ceil(g);
    let mut bld = Builder::new(units.len() as u32);
    for (k, chunk) in units.chunks(g).enumerate() {
        let c = synth_tensor_singles(chunk, eps / groups as f64)?;
        let qs: Vec<Qubit> = (0..chunk.len()).map(|i| (k * g + i) as Qubit).collect();
        bld.append_with_ancillas(&c, &qs);
    }
    Ok(bld.finish(format!("batched m={} groups={groups}", units.len())))
}

/// Operator-norm distance of the circuit (ancillas starting and required back at |0⟩) from `target`.
pub fn unitary_error(c: &Circuit, target: &DMatrix<Complex64>) -> Result<f64> {
    Ok(run_columns(c, c.input_count)?.op_error(target))
}

/// Dense U_0 ⊗ … ⊗ U_{m−1} with qubit 0 as the low bit.
pub fn tensor_matrix(units: &[Mat2]) -> DMatrix<Complex64> {
    let dim = 1usize << units.len();
    DMatrix::from_fn(dim, dim, |r, c| {
        units.iter().enumerate().fold(Complex64::new(1.0, 0.0), |acc, (i, u)| acc * u[2 * (r >> i & 1) + (c >> i & 1)])
    })
}

/// Dense diag(U_0, …) with the block index on the low qubits and the target on top.
pub fn block_diag_matrix(units: &[Mat2]) -> DMatrix<Complex64> {
    let n = units.len().trailing_zeros();
    let dim = 2 * units.len();
    DMatrix::from_fn(dim, dim, |r, c| {
        let (jr, jc) = (r & (units.len() - 1), c & (units.len() - 1));
        if jr != jc {
            return Complex64::new(0.0, 0.0);
        }
        units[jr][2 * (r >> n) + (c >> n)]
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::squbit::word::{mat_h, mat_t, IDENTITY};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn group_sizes() {
        assert_eq!(batch_group_size(1e-4), 4);
        assert_eq!(batch_group_size(1e-2), 3);
        assert_eq!(batch_group_size(0.5), 1);
    }

    #[test]
    fn identity_blocks_are_exact() {
        let c = synth_block_diag(&[IDENTITY; 4], 1e-2).unwrap();
        assert!(c.is_empty());
        let c = synth_tensor_singles(&[mat_h(), IDENTITY], 1e-2).unwrap();
        assert!(unitary_error(&c, &tensor_matrix(&[mat_h(), IDENTITY])).unwrap() <= 1e-2);
        let c = synth_tensor_singles(&[IDENTITY; 3], 1e-2).unwrap();
        assert!(c.is_empty());
    }

    #[test]
    fn hadamard_block() {
        let c = synth_block_diag(&[mat_h()], 1e-2).unwrap();
        let e = unitary_error(&c, &block_diag_matrix(&[mat_h()])).unwrap();
        assert!(e <= 1e-2, "{e}");
    }

    #[test]
    fn tensor_of_t_gates() {
        let want = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![
            Complex64::new(1.0, 0.0),
            Complex64::from_polar(1.0, std::f64::consts::FRAC_PI_4),
            Complex64::from_polar(1.0, std::f64::consts::FRAC_PI_4),
            Complex64::new(0.0, 1.0),
        ]));
        assert!((tensor_matrix(&[mat_t(), mat_t()]) - &want).norm() < 1e-15);
        let c = synth_tensor_singles(&[mat_t(), mat_t()], 1e-2).unwrap();
        assert!(unitary_error(&c, &want).unwrap() <= 1e-2);
    }

    #[test]
    fn random_blocks_and_batches() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let us: Vec<Mat2> = (0..4).map(|_| crate::squbit::haar_unitary(&mut rng)).collect();
        let c = synth_block_diag(&us, 1e-2).unwrap();
        let e = unitary_error(&c, &block_diag_matrix(&us)).unwrap();
        assert!(e <= 1e-2, "block {e}");
        let c = synth_batched(&us, 1e-2).unwrap();
        let e = unitary_error(&c, &tensor_matrix(&us)).unwrap();
        assert!(e <= 1e-2, "batched {e}");
    }
}
