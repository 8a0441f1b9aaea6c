use crate::boolean::TruthTable;
use crate::error::Result;
use crate::sim::DiagonalSpec;
use crate::squbit::{default_synthesizer, HTWord, Letter, Synthesizer};

/// Rows are words in ladder order: block ℓ applies H^{a_ℓ} then T^{b_ℓ}, earliest block first.
#[derive(Clone, Debug)]
pub struct GateSequenceTable {
    pub n: u32,
    pub k_pad: usize,
    /// Approximations of diag(e^{iθ_j}, e^{−iθ_j}), in matrix order.
    pub words: Vec<HTWord>,
    /// Operator-norm error of each word.
    pub errors: Vec<f64>,
    /// Row j is encode_word(ladder_word(words[j]), k_pad).
    pub rows: TruthTable,
}

/// Re-block a matrix-order word into time order, so the ladder (CH then CT per block) reproduces it.
pub fn ladder_word(w: &HTWord) -> HTWord {
    let mut l: Vec<Letter> = w.letters();
    l.reverse();
    HTWord::from_letters(&l)
}

pub fn build_sequence_table(spec: &DiagonalSpec, eps: f64) -> Result<GateSequenceTable> {
    build_sequence_table_with(spec, eps, default_synthesizer())
}

pub fn build_sequence_table_with(spec: &DiagonalSpec, eps: f64, synth: &Synthesizer) -> Result<GateSequenceTable> {
    let mut words = Vec::with_capacity(spec.phases.len());
    let mut errors = Vec::with_capacity(spec.phases.len());
    // equal phases share one search
    let mut cache: Vec<(f64, HTWord, f64)> = Vec::new();
    for &theta in &spec.phases {
        if let Some((_, w, e)) = cache.iter().find(|c| c.0 == theta) {
            words.push(w.clone());
            errors.push(*e);
            continue;
        }
        let a = synth.approx_diag(theta, eps)?;
        cache.push((theta, a.word.clone(), a.error));
        words.push(a.word);
        errors.push(a.error);
    }
    let ladder: Vec<HTWord> = words.iter().map(ladder_word).collect();
    let k_pad = ladder.iter().map(HTWord::len).max().unwrap_or(0);
    let mut rows = TruthTable::zeros(spec.n, 2 * k_pad as u32);
    for (j, w) in ladder.iter().enumerate() {
        for (i, bit) in w.encode(k_pad)?.into_iter().enumerate() {
            rows.set(j as u64, i as u32, bit);
        }
    }
    Ok(GateSequenceTable { n: spec.n, k_pad, words, errors, rows })
}

impl GateSequenceTable {
    pub fn row_bits(&self, j: u64) -> Vec<bool> {
        (0..2 * self.k_pad as u32).map(|i| self.rows.get(j, i)).collect()
    }

    /// Decoded row j, back in matrix order.
    pub fn row_word(&self, j: u64) -> Result<HTWord> {
        let w = HTWord::decode(&self.row_bits(j))?.trimmed();
        let mut l = w.letters();
        l.reverse();
        Ok(HTWord::from_letters(&l))
    }
}
