use super::state::SparseState;
use crate::circuit::Circuit;
use crate::error::{parse_err, Error, Result};
use nalgebra::DMatrix;
use num_complex::Complex64;
use rustc_hash::FxHashMap;
use std::fmt::Write;

/// Diagonal unitary diag(e^{iθ_0}, …, e^{iθ_{2^n−1}}).
#[derive(Clone, Debug, PartialEq)]
pub struct DiagonalSpec {
    pub n: u32,
    pub phases: Vec<f64>,
}

impl DiagonalSpec {
    pub fn new(phases: Vec<f64>) -> Result<Self> {
        let len = phases.len();
        if !len.is_power_of_two() {
            return Err(Error::InvalidInput(format!("{len} phases is not a power of two")));
        }
        if let Some(p) = phases.iter().find(|p| !p.is_finite()) {
            return Err(Error::InvalidInput(format!("phase {p} is not finite")));
        }
        Ok(DiagonalSpec { n: len.trailing_zeros(), phases })
    }

    pub fn zeros(n: u32) -> Self {
        DiagonalSpec { n, phases: vec![0.0; 1 << n] }
    }

    pub fn entry(&self, j: usize) -> Complex64 {
        Complex64::from_polar(1.0, self.phases[j])
    }

    /// `N <n>` header, then one phase in radians per line.
    pub fn serialize(&self) -> String {
        let mut s = format!("N {}\n", self.n);
        for p in &self.phases {
            let _ = writeln!(s, "{p}");
        }
        s
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut n = None;
        let mut phases = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            match n {
                None => {
                    let t: Vec<&str> = line.split_whitespace().collect();
                    if t.len() != 2 || t[0] != "N" {
                        return Err(parse_err(i + 1, "expected `N <n>`"));
                    }
                    let v: u32 = t[1].parse().map_err(|_| parse_err(i + 1, "bad qubit count"))?;
                    if v > 30 {
                        return Err(parse_err(i + 1, "too many qubits"));
                    }
                    n = Some(v);
                }
                Some(_) => phases.push(line.parse::<f64>().map_err(|_| parse_err(i + 1, format!("bad phase `{line}`")))?),
            }
        }
        let n = n.ok_or_else(|| parse_err(0, "missing header"))?;
        if phases.len() != 1 << n {
            return Err(parse_err(0, format!("expected {} phases, found {}", 1u64 << n, phases.len())));
        }
        DiagonalSpec::new(phases)
    }
}

/// Action of a circuit on every input basis state with its ancillas at |0⟩.
#[derive(Clone, Debug)]
pub struct Columns {
    pub n: u32,
    /// Per input j: output entries whose ancillas are all zero, as (input value, amplitude).
    pub clean: Vec<Vec<(u64, Complex64)>>,
    /// Per input j: weight on outputs with some ancilla set.
    pub leak: Vec<f64>,
    /// D†D for the dirty part D of the columns.
    dirty_gram: DMatrix<Complex64>,
}

fn bits_at(key: &[u64], lo: u32, len: u32) -> u64 {
    let mut v = 0u64;
    for i in 0..len {
        let q = lo + i;
        v |= (key[(q / 64) as usize] >> (q % 64) & 1) << i;
    }
    v
}

/// Runs all 2^n inputs at once: each input carries a copy of its index in extra tag
/// qubits the circuit never touches, so the branches cannot interfere.
pub fn run_columns(c: &Circuit, n: u32) -> Result<Columns> {
    if c.input_count != n {
        return Err(Error::InvalidInput(format!("circuit has {} inputs, expected {n}", c.input_count)));
    }
    if n > 16 {
        return Err(Error::InvalidInput(format!("{n} inputs is too many to tabulate")));
    }
    c.validate()?;
    let w = c.width;
    let total = w + n;
    let stride = (total as usize).div_ceil(64);
    let entries = (0..1u64 << n).map(|j| {
        let mut key = vec![0u64; stride];
        for i in 0..n {
            if j >> i & 1 == 1 {
                key[(i / 64) as usize] |= 1 << (i % 64);
                let t = w + i;
                key[(t / 64) as usize] |= 1 << (t % 64);
            }
        }
        (key, Complex64::new(1.0, 0.0))
    });
    let mut s: SparseState<f64> = SparseState::from_wide_entries(total, entries);
    for g in &c.gates {
        s.apply(g)?;
    }
    let dim = 1usize << n;
    let mut clean = vec![Vec::new(); dim];
    let mut leak = vec![0.0; dim];
    let mut dirty: FxHashMap<Vec<u64>, Vec<(usize, Complex64)>> = FxHashMap::default();
    for (k, a) in s.iter() {
        let tag = bits_at(k, w, n) as usize;
        let anc_dirty = (n..w).any(|q| k[(q / 64) as usize] >> (q % 64) & 1 == 1);
        if anc_dirty {
            leak[tag] += a.norm_sqr();
            let mut body = k.to_vec();
            for i in 0..n {
                let t = w + i;
                body[(t / 64) as usize] &= !(1 << (t % 64));
            }
            dirty.entry(body).or_default().push((tag, a));
        } else {
            clean[tag].push((bits_at(k, 0, n), a));
        }
    }
    let mut gram = DMatrix::zeros(if n <= 10 { dim } else { 0 }, if n <= 10 { dim } else { 0 });
    if n <= 10 {
        for list in dirty.values() {
            for &(j, x) in list {
                for &(k, y) in list {
                    gram[(j, k)] += x.conj() * y;
                }
            }
        }
    }
    Ok(Columns { n, clean, leak, dirty_gram: gram })
}

impl Columns {
    /// Clean block as a dense 2^n × 2^n matrix.
    pub fn dense(&self) -> DMatrix<Complex64> {
        let dim = 1usize << self.n;
        let mut m = DMatrix::zeros(dim, dim);
        for (j, col) in self.clean.iter().enumerate() {
            for &(i, a) in col {
                m[(i as usize, j)] += a;
            }
        }
        m
    }

    /// ‖V(I⊗|0⟩) − target⊗|0⟩‖, counting the ancilla leakage exactly.
    pub fn op_error(&self, target: &DMatrix<Complex64>) -> f64 {
        assert!(self.n <= 10, "dense error for {} qubits", self.n);
        let diff = self.dense() - target;
        let m = diff.adjoint() * &diff + &self.dirty_gram;
        let m = (&m + m.adjoint()) * Complex64::new(0.5, 0.0);
        let ev = m.symmetric_eigenvalues();
        ev.iter().copied().fold(0.0f64, f64::max).max(0.0).sqrt()
    }
}

/// Diagonal amplitudes and per-input leakage of a circuit.
#[derive(Clone, Debug)]
pub struct DiagonalMeasure {
    pub amps: Vec<Complex64>,
    /// Weight off |j⟩|0…0⟩ for input j.
    pub leak: Vec<f64>,
}

impl DiagonalMeasure {
    pub fn phases(&self) -> DiagonalSpec {
        DiagonalSpec::new(self.amps.iter().map(|a| a.arg()).collect()).expect("power of two")
    }

    /// max_j ‖V|j,0⟩ − e^{iθ_j}|j,0⟩‖.
    pub fn error(&self, want: &DiagonalSpec) -> f64 {
        assert_eq!(self.amps.len(), want.phases.len());
        self.amps
            .iter()
            .zip(&self.leak)
            .enumerate()
            .map(|(j, (a, l))| ((a - want.entry(j)).norm_sqr() + l).sqrt())
            .fold(0.0, f64::max)
    }

    pub fn max_leak(&self) -> f64 {
        self.leak.iter().copied().fold(0.0, f64::max)
    }
}

pub fn measure_diagonal(c: &Circuit, n: u32) -> Result<DiagonalMeasure> {
    let cols = run_columns(c, n)?;
    let mut amps = Vec::with_capacity(cols.clean.len());
    let mut leak = cols.leak.clone();
    for (j, col) in cols.clean.iter().enumerate() {
        let mut a = Complex64::new(0.0, 0.0);
        for &(i, x) in col {
            if i as usize == j {
                a += x;
            } else {
                leak[j] += x.norm_sqr();
            }
        }
        amps.push(a);
    }
    Ok(DiagonalMeasure { amps, leak })
}

/// Phases of a diagonal circuit; fails if any input leaks more than 1e-9 off |j⟩|0…0⟩.
pub fn extract_diagonal(c: &Circuit, n: u32) -> Result<DiagonalSpec> {
    extract_diagonal_with(c, n, 1e-9)
}

pub fn extract_diagonal_with(c: &Circuit, n: u32, leak_tol: f64) -> Result<DiagonalSpec> {
    let m = measure_diagonal(c, n)?;
    for (j, &l) in m.leak.iter().enumerate() {
        if !(l < leak_tol) {
            return Err(Error::NotDiagonal { basis: j, leak: l });
        }
    }
    Ok(m.phases())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::Gate;
    use std::f64::consts::{FRAC_PI_4, PI};

    #[test]
    fn simple_diagonals() {
        let c = Circuit::new(1, 1);
        assert_eq!(extract_diagonal(&c, 1).unwrap().phases, vec![0.0, 0.0]);
        let mut c = Circuit::new(1, 1);
        c.push(Gate::T(0));
        let d = extract_diagonal(&c, 1).unwrap();
        assert!(d.phases[0].abs() < 1e-15 && (d.phases[1] - FRAC_PI_4).abs() < 1e-15);
        let mut c = Circuit::new(2, 2);
        c.push(Gate::Cz(0, 1));
        let d = extract_diagonal(&c, 2).unwrap();
        assert_eq!(&d.phases[..3], &[0.0, 0.0, 0.0]);
        assert!((d.phases[3].abs() - PI).abs() < 1e-15);
    }

    #[test]
    fn leaks_are_reported() {
        let mut c = Circuit::new(2, 1);
        c.push(Gate::Cx(0, 1));
        assert!(matches!(extract_diagonal(&c, 1), Err(Error::NotDiagonal { basis: 1, .. })));
        let mut c = Circuit::new(1, 1);
        c.push(Gate::H(0));
        assert!(extract_diagonal(&c, 1).is_err());
        let m = measure_diagonal(&c, 1).unwrap();
        assert!((m.leak[0] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn dense_error_counts_leakage() {
        // a Hadamard on the input, then a CX copying into the ancilla
        let mut c = Circuit::new(2, 1);
        c.push(Gate::H(0));
        let cols = run_columns(&c, 1).unwrap();
        let h = crate::squbit::word::mat_h();
        let target = DMatrix::from_row_slice(2, 2, &h);
        assert!(cols.op_error(&target) < 1e-12);
        c.push(Gate::Cx(0, 1));
        let cols = run_columns(&c, 1).unwrap();
        // V maps the |1⟩ branches out of the clean space entirely
        let e = cols.op_error(&target);
        assert!(e > 0.5, "{e}");
        let id = DMatrix::identity(2, 2);
        let z = Circuit::new(3, 1);
        assert!(run_columns(&z, 1).unwrap().op_error(&id) == 0.0);
    }

    #[test]
    fn spec_file_round_trip() {
        let d = DiagonalSpec::new(vec![0.0, 0.5, -1.25, PI]).unwrap();
        assert_eq!(DiagonalSpec::parse(&d.serialize()).unwrap(), d);
        assert!(DiagonalSpec::parse("N 1\n0.0\n").is_err());
        assert!(DiagonalSpec::new(vec![0.0; 3]).is_err());
    }
}
