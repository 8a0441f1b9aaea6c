//! Single-qubit H/T synthesis.

pub mod approx;
pub mod db;
pub mod dioph;
pub mod euler;
pub mod exact;
pub mod grid;
pub mod ring;
pub mod word;

pub use approx::{approx_su2, default_synthesizer, Approx, SynthConfig, Synthesizer, ERROR_MARGIN};
pub use euler::euler_hdh;
pub use word::{HTWord, Letter, Mat2};

use crate::error::Result;

/// Interleaved (a, b) bits of `w`, padded with identity blocks to `k_pad`.
pub fn encode_word(w: &HTWord, k_pad: usize) -> Result<Vec<bool>> {
    w.encode(k_pad)
}

pub fn decode_word(bits: &[bool]) -> Result<HTWord> {
    HTWord::decode(bits)
}

/// Haar-random U(2): a uniform unit quaternion times a uniform phase.
pub fn haar_unitary(rng: &mut impl rand::Rng) -> Mat2 {
    use num_complex::Complex64;
    let g: [f64; 4] = std::array::from_fn(|_| rng.sample(rand_distr::StandardNormal));
    let r = g.iter().map(|x| x * x).sum::<f64>().sqrt();
    let (a, b) = (Complex64::new(g[0], g[1]) / r, Complex64::new(g[2], g[3]) / r);
    let ph = Complex64::from_polar(1.0, rng.gen_range(0.0..std::f64::consts::TAU));
    [a * ph, -b.conj() * ph, b * ph, a.conj() * ph]
}
