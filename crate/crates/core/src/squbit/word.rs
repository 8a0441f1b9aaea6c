use crate::error::{Error, Result};
use num_complex::Complex64;
use std::f64::consts::FRAC_1_SQRT_2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Letter {
    H,
    T,
}

/// H^{a_1}T^{b_1}·…·H^{a_K}T^{b_K}, leftmost factor first in matrix order.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct HTWord {
    pub pairs: Vec<(bool, bool)>,
}

pub type Mat2 = [Complex64; 4];

pub const IDENTITY: Mat2 = [
    Complex64::new(1.0, 0.0),
    Complex64::new(0.0, 0.0),
    Complex64::new(0.0, 0.0),
    Complex64::new(1.0, 0.0),
];

pub fn mat_h() -> Mat2 {
    let s = Complex64::new(FRAC_1_SQRT_2, 0.0);
    [s, s, s, -s]
}

pub fn mat_t() -> Mat2 {
    [
        Complex64::new(1.0, 0.0),
        Complex64::new(0.0, 0.0),
        Complex64::new(0.0, 0.0),
        Complex64::from_polar(1.0, std::f64::consts::FRAC_PI_4),
    ]
}

pub fn mat_mul(a: &Mat2, b: &Mat2) -> Mat2 {
    [
        a[0] * b[0] + a[1] * b[2],
        a[0] * b[1] + a[1] * b[3],
        a[2] * b[0] + a[3] * b[2],
        a[2] * b[1] + a[3] * b[3],
    ]
}

pub fn mat_adjoint(a: &Mat2) -> Mat2 {
    [a[0].conj(), a[2].conj(), a[1].conj(), a[3].conj()]
}

pub fn mat_det(a: &Mat2) -> Complex64 {
    a[0] * a[3] - a[1] * a[2]
}

pub fn diag(a: Complex64, b: Complex64) -> Mat2 {
    let z = Complex64::new(0.0, 0.0);
    [a, z, z, b]
}

/// Operator norm of a 2×2 complex matrix.
pub fn op_norm(a: &Mat2) -> f64 {
    // largest eigenvalue of A†A
    let g = mat_mul(&mat_adjoint(a), a);
    let tr = (g[0] + g[3]).re;
    let det = (g[0] * g[3] - g[1] * g[2]).re;
    let disc = (tr * tr / 4.0 - det).max(0.0).sqrt();
    (tr / 2.0 + disc).max(0.0).sqrt()
}

pub fn op_dist(a: &Mat2, b: &Mat2) -> f64 {
    let d = [a[0] - b[0], a[1] - b[1], a[2] - b[2], a[3] - b[3]];
    op_norm(&d)
}

/// Reduce HH and T⁸ in a letter string.
pub fn canonicalize(letters: &[Letter]) -> Vec<Letter> {
    let mut out: Vec<Letter> = Vec::with_capacity(letters.len());
    for &l in letters {
        out.push(l);
        let n = out.len();
        if l == Letter::H && n >= 2 && out[n - 2] == Letter::H {
            out.truncate(n - 2);
        } else if l == Letter::T && n >= 8 && out[n - 8..].iter().all(|&x| x == Letter::T) {
            out.truncate(n - 8);
        }
    }
    out
}

impl HTWord {
    pub fn empty() -> Self {
        HTWord { pairs: Vec::new() }
    }

    /// Greedy blocking: an H followed by a T shares one block.
    pub fn from_letters(letters: &[Letter]) -> Self {
        let mut pairs = Vec::new();
        let mut i = 0;
        while i < letters.len() {
            match letters[i] {
                Letter::H => {
                    if letters.get(i + 1) == Some(&Letter::T) {
                        pairs.push((true, true));
                        i += 2;
                    } else {
                        pairs.push((true, false));
                        i += 1;
                    }
                }
                Letter::T => {
                    pairs.push((false, true));
                    i += 1;
                }
            }
        }
        HTWord { pairs }
    }

    pub fn letters(&self) -> Vec<Letter> {
        let mut out = Vec::with_capacity(2 * self.pairs.len());
        for &(a, b) in &self.pairs {
            if a {
                out.push(Letter::H);
            }
            if b {
                out.push(Letter::T);
            }
        }
        out
    }

    /// Number of blocks K.
    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Number of T letters.
    pub fn t_count(&self) -> usize {
        self.pairs.iter().filter(|p| p.1).count()
    }

    /// T gates after runs of T letters are folded into S and Z: the number of odd runs.
    pub fn clifford_t_count(&self) -> usize {
        let mut count = 0;
        let mut run = 0;
        for l in self.letters().into_iter().chain([Letter::H]) {
            match l {
                Letter::T => run += 1,
                Letter::H => {
                    count += run % 2;
                    run = 0;
                }
            }
        }
        count
    }

    pub fn matrix(&self) -> Mat2 {
        let h = mat_h();
        let t = mat_t();
        let mut m = IDENTITY;
        for &(a, b) in &self.pairs {
            if a {
                m = mat_mul(&m, &h);
            }
            if b {
                m = mat_mul(&m, &t);
            }
        }
        m
    }

    /// Concatenate and re-block after cancelling HH and T⁸.
    pub fn concat(&self, other: &HTWord) -> HTWord {
        let mut l = self.letters();
        l.extend(other.letters());
        HTWord::from_letters(&canonicalize(&l))
    }

    /// Interleaved (a, b) bits padded with identity blocks.
    pub fn encode(&self, k_pad: usize) -> Result<Vec<bool>> {
        if self.pairs.len() > k_pad {
            return Err(Error::WordOverflow { blocks: self.pairs.len(), pad: k_pad });
        }
        let mut bits = Vec::with_capacity(2 * k_pad);
        for &(a, b) in &self.pairs {
            bits.push(a);
            bits.push(b);
        }
        bits.resize(2 * k_pad, false);
        Ok(bits)
    }

    pub fn decode(bits: &[bool]) -> Result<HTWord> {
        if bits.len() % 2 != 0 {
            return Err(Error::InvalidInput(format!("odd bit count {}", bits.len())));
        }
        Ok(HTWord { pairs: bits.chunks(2).map(|c| (c[0], c[1])).collect() })
    }

    /// Drop trailing identity blocks.
    pub fn trimmed(&self) -> HTWord {
        let mut pairs = self.pairs.clone();
        while pairs.last() == Some(&(false, false)) {
            pairs.pop();
        }
        HTWord { pairs }
    }

    pub fn to_bit_string(&self, k_pad: usize) -> Result<String> {
        Ok(self.encode(k_pad)?.into_iter().map(|b| if b { '1' } else { '0' }).collect())
    }
}
