use crate::circuit::{Circuit, Gate, Qubit};
use crate::error::{Error, Result};
use crate::scalar::Real;
use hashbrown::HashTable;
use num_complex::Complex;
use rustc_hash::FxHasher;
use std::hash::Hasher;

/// Amplitudes below this modulus are dropped after a branching gate.
pub const PRUNE: f64 = 1e-14;

/// Map from basis key to amplitude. Qubit 0 is the least significant bit; keys wider
/// than 64 qubits span several words.
#[derive(Clone, Debug)]
pub struct SparseState<R: Real = f64> {
    width: u32,
    stride: usize,
    keys: Vec<u64>,
    amps: Vec<Complex<R>>,
}

fn stride_for(width: u32) -> usize {
    (width as usize).div_ceil(64).max(1)
}

fn hash_words(w: &[u64]) -> u64 {
    let mut h = FxHasher::default();
    for &x in w {
        h.write_u64(x);
    }
    h.finish()
}

#[inline]
fn bit(key: &[u64], q: Qubit) -> bool {
    key[(q / 64) as usize] >> (q % 64) & 1 == 1
}

#[inline]
fn flip(key: &mut [u64], q: Qubit) {
    key[(q / 64) as usize] ^= 1 << (q % 64);
}

impl<R: Real> SparseState<R> {
    /// |0…0⟩.
    pub fn zero(width: u32) -> Self {
        Self::basis(width, 0)
    }

    pub fn basis(width: u32, index: u64) -> Self {
        let stride = stride_for(width);
        assert!(width >= 64 || index >> width == 0, "index {index} wider than {width} qubits");
        let mut keys = vec![0; stride];
        keys[0] = index;
        SparseState { width, stride, keys, amps: vec![Complex::new(R::one(), R::zero())] }
    }

    /// State from (index, amplitude) pairs; repeated indices add.
    pub fn from_entries(width: u32, entries: impl IntoIterator<Item = (u64, Complex<R>)>) -> Self {
        Self::from_wide_entries(
            width,
            entries.into_iter().map(|(k, a)| {
                let mut key = vec![0; stride_for(width)];
                key[0] = k;
                (key, a)
            }),
        )
    }

    /// As `from_entries` with multi-word keys.
    pub fn from_wide_entries(width: u32, entries: impl IntoIterator<Item = (Vec<u64>, Complex<R>)>) -> Self {
        let stride = stride_for(width);
        let mut s = SparseState { width, stride, keys: Vec::new(), amps: Vec::new() };
        let mut table: HashTable<usize> = HashTable::new();
        for (key, a) in entries {
            assert_eq!(key.len(), stride);
            for q in width..(stride as u32 * 64) {
                assert!(!bit(&key, q), "key wider than {width} qubits");
            }
            let h = hash_words(&key);
            let keys = &s.keys;
            match table.find(h, |&i| keys[i * stride..(i + 1) * stride] == key[..]) {
                Some(&i) => s.amps[i] = s.amps[i] + a,
                None => {
                    let i = s.amps.len();
                    s.keys.extend_from_slice(&key);
                    s.amps.push(a);
                    let keys = &s.keys;
                    table.insert_unique(h, i, |&j| hash_words(&keys[j * stride..(j + 1) * stride]));
                }
            }
        }
        s
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn len(&self) -> usize {
        self.amps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amps.is_empty()
    }

    pub fn key(&self, i: usize) -> &[u64] {
        &self.keys[i * self.stride..(i + 1) * self.stride]
    }

    /// Low 64 bits of the i-th key.
    pub fn index(&self, i: usize) -> u64 {
        self.keys[i * self.stride]
    }

    pub fn amp(&self, i: usize) -> Complex<R> {
        self.amps[i]
    }

    pub fn iter(&self) -> impl Iterator<Item = (&[u64], Complex<R>)> + '_ {
        self.keys.chunks_exact(self.stride).zip(self.amps.iter().copied())
    }

    /// Amplitude of a basis state of at most 64 qubits.
    pub fn amplitude(&self, index: u64) -> Complex<R> {
        self.iter()
            .find(|(k, _)| k[0] == index && k[1..].iter().all(|&w| w == 0))
            .map_or(Complex::new(R::zero(), R::zero()), |(_, a)| a)
    }

    pub fn norm_sqr(&self) -> R {
        self.amps.iter().fold(R::zero(), |s, a| s + a.norm_sqr())
    }

    /// Dense amplitude vector; width must be small.
    pub fn to_dense(&self) -> Vec<Complex<R>> {
        assert!(self.width <= 26, "dense vector of {} qubits", self.width);
        let mut v = vec![Complex::new(R::zero(), R::zero()); 1 << self.width];
        for (k, a) in self.iter() {
            v[k[0] as usize] = a;
        }
        v
    }

    /// Same amplitudes in a register of `width` qubits; the new qubits are |0⟩.
    pub fn widen(&self, width: u32) -> Self {
        assert!(width >= self.width);
        let stride = stride_for(width);
        let mut keys = Vec::with_capacity(self.len() * stride);
        for k in self.keys.chunks_exact(self.stride) {
            keys.extend_from_slice(k);
            keys.extend(std::iter::repeat(0).take(stride - self.stride));
        }
        SparseState { width, stride, keys, amps: self.amps.clone() }
    }

    fn phase_if(&mut self, cond: impl Fn(&[u64]) -> bool, ph: Complex<R>) {
        let stride = self.stride;
        for (k, a) in self.keys.chunks_exact(stride).zip(self.amps.iter_mut()) {
            if cond(k) {
                *a = *a * ph;
            }
        }
    }

    fn permute(&mut self, f: impl Fn(&mut [u64])) {
        for k in self.keys.chunks_exact_mut(self.stride) {
            f(k);
        }
    }

    /// Apply a 2×2 matrix (row-major) on qubit q, optionally controlled on qubit c.
    fn apply_1q(&mut self, q: Qubit, m: [Complex<R>; 4], control: Option<Qubit>) {
        let stride = self.stride;
        let zero = Complex::new(R::zero(), R::zero());
        let mut keys = Vec::with_capacity(self.keys.len());
        let mut amps = Vec::with_capacity(self.amps.len());
        let mut slot_keys: Vec<u64> = Vec::new();
        let mut slot_amps: Vec<[Complex<R>; 2]> = Vec::new();
        let mut table: HashTable<usize> = HashTable::new();
        let mut masked = vec![0u64; stride];
        for (k, &a) in self.keys.chunks_exact(stride).zip(self.amps.iter()) {
            if let Some(c) = control {
                if !bit(k, c) {
                    keys.extend_from_slice(k);
                    amps.push(a);
                    continue;
                }
            }
            let b = bit(k, q) as usize;
            masked.copy_from_slice(k);
            if b == 1 {
                flip(&mut masked, q);
            }
            let h = hash_words(&masked);
            let sk = &slot_keys;
            let slot = match table.find(h, |&i| sk[i * stride..(i + 1) * stride] == masked[..]) {
                Some(&i) => i,
                None => {
                    let i = slot_amps.len();
                    slot_keys.extend_from_slice(&masked);
                    slot_amps.push([zero; 2]);
                    let sk = &slot_keys;
                    table.insert_unique(h, i, |&j| hash_words(&sk[j * stride..(j + 1) * stride]));
                    i
                }
            };
            slot_amps[slot][b] = slot_amps[slot][b] + a;
        }
        let prune = R::from_f64(PRUNE);
        for (i, [a0, a1]) in slot_amps.into_iter().enumerate() {
            let k = &slot_keys[i * stride..(i + 1) * stride];
            let o0 = m[0] * a0 + m[1] * a1;
            let o1 = m[2] * a0 + m[3] * a1;
            if o0.norm() >= prune {
                keys.extend_from_slice(k);
                amps.push(o0);
            }
            if o1.norm() >= prune {
                let at = keys.len();
                keys.extend_from_slice(k);
                flip(&mut keys[at..], q);
                amps.push(o1);
            }
        }
        self.keys = keys;
        self.amps = amps;
    }

    pub fn apply(&mut self, g: &Gate) -> Result<()> {
        for q in g.qubits() {
            if q >= self.width {
                return Err(Error::InvalidGate(format!("{} operand {q} outside width {}", g.name(), self.width)));
            }
        }
        let c = |re: f64, im: f64| Complex::new(R::from_f64(re), R::from_f64(im));
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let h = [c(s, 0.0), c(s, 0.0), c(s, 0.0), c(-s, 0.0)];
        let w = c(s, s);
        match *g {
            Gate::H(q) => self.apply_1q(q, h, None),
            Gate::T(q) => self.phase_if(|k| bit(k, q), w),
            Gate::Tdg(q) => self.phase_if(|k| bit(k, q), w.conj()),
            Gate::S(q) => self.phase_if(|k| bit(k, q), c(0.0, 1.0)),
            Gate::Sdg(q) => self.phase_if(|k| bit(k, q), c(0.0, -1.0)),
            Gate::Z(q) => self.phase_if(|k| bit(k, q), c(-1.0, 0.0)),
            Gate::X(q) => self.permute(|k| flip(k, q)),
            Gate::Y(q) => {
                // Y|0⟩ = i|1⟩, Y|1⟩ = −i|0⟩
                self.phase_if(|k| bit(k, q), c(-1.0, 0.0));
                self.phase_if(|_| true, c(0.0, 1.0));
                self.permute(|k| flip(k, q));
            }
            Gate::Cx(a, b) => self.permute(|k| {
                if bit(k, a) {
                    flip(k, b)
                }
            }),
            Gate::Cz(a, b) => self.phase_if(|k| bit(k, a) && bit(k, b), c(-1.0, 0.0)),
            Gate::Swap(a, b) => self.permute(|k| {
                if bit(k, a) != bit(k, b) {
                    flip(k, a);
                    flip(k, b);
                }
            }),
            Gate::Ccx(a, b, t) => self.permute(|k| {
                if bit(k, a) && bit(k, b) {
                    flip(k, t)
                }
            }),
            Gate::Ch(a, t) => self.apply_1q(t, h, Some(a)),
            Gate::Ct(a, b) => self.phase_if(|k| bit(k, a) && bit(k, b), w),
            Gate::Ctdg(a, b) => self.phase_if(|k| bit(k, a) && bit(k, b), w.conj()),
            Gate::Sq1(q, ref m) => {
                let m = [0, 1, 2, 3].map(|i| c(m[i].re, m[i].im));
                self.apply_1q(q, m, None)
            }
        }
        Ok(())
    }
}

/// Apply every gate of `c` to `input`. Macros are simulated by their defining matrices,
/// which the expansions reproduce exactly.
pub fn run<R: Real>(c: &Circuit, input: &SparseState<R>) -> Result<SparseState<R>> {
    if input.width != c.width {
        return Err(Error::WidthMismatch { circuit: c.width, state: input.width });
    }
    let mut s = input.clone();
    for g in &c.gates {
        s.apply(g)?;
    }
    Ok(s)
}
