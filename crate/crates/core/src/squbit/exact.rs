//! Exact Clifford+T unitaries and their H/T words.

use super::ring::{ZOmega, ZRoot2};
use super::word::{Letter, Mat2};
use rustc_hash::FxHashMap;
use std::collections::hash_map::Entry;
use std::sync::OnceLock;

/// Row-major 2×2 matrix with entries e[i]/√2^k.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ExactU2 {
    pub e: [ZOmega; 4],
    pub k: u32,
}

impl ExactU2 {
    pub fn identity() -> Self {
        ExactU2 { e: [ZOmega::ONE, ZOmega::ZERO, ZOmega::ZERO, ZOmega::ONE], k: 0 }
    }

    pub fn h() -> Self {
        let o = ZOmega::ONE;
        ExactU2 { e: [o, o, o, -o], k: 1 }
    }

    pub fn t() -> Self {
        ExactU2 { e: [ZOmega::ONE, ZOmega::ZERO, ZOmega::ZERO, ZOmega::OMEGA], k: 0 }
    }

    pub fn letter(l: Letter) -> Self {
        match l {
            Letter::H => Self::h(),
            Letter::T => Self::t(),
        }
    }

    /// [[u, −t†], [t, u†]] / √2^k, determinant 1 when u†u + t†t = 2^k.
    pub fn from_column(u: ZOmega, t: ZOmega, k: u32) -> Self {
        ExactU2 { e: [u, -t.conj(), t, u.conj()], k }.reduced()
    }

    pub fn reduced(mut self) -> Self {
        while self.k > 0 && self.e.iter().all(|x| x.divisible_by_sqrt2()) {
            for x in self.e.iter_mut() {
                *x = x.div_sqrt2().unwrap();
            }
            self.k -= 1;
        }
        self
    }

    pub fn mul(&self, o: &ExactU2) -> ExactU2 {
        let a = &self.e;
        let b = &o.e;
        ExactU2 {
            e: [
                a[0] * b[0] + a[1] * b[2],
                a[0] * b[1] + a[1] * b[3],
                a[2] * b[0] + a[3] * b[2],
                a[2] * b[1] + a[3] * b[3],
            ],
            k: self.k + o.k,
        }
        .reduced()
    }

    pub fn to_complex(&self) -> Mat2 {
        self.e.map(|x| x.to_complex_scaled(self.k))
    }

    pub fn from_letters(letters: &[Letter]) -> Self {
        letters.iter().fold(Self::identity(), |m, &l| m.mul(&Self::letter(l)))
    }

    /// Smallest denominator exponent of |u00|².
    pub fn sde_top(&self) -> u32 {
        sde_abs2(self.e[0], self.k)
    }
}

/// sde of |z|² for z = e/√2^k.
pub fn sde_abs2(e: ZOmega, k: u32) -> u32 {
    let mut x = e.norm_sq();
    let mut s = 2 * k;
    if x.is_zero() {
        return 0;
    }
    while s > 0 {
        match x.div_sqrt2() {
            Some(y) if x.divisible_by_sqrt2() => {
                x = y;
                s -= 1;
            }
            _ => break,
        }
    }
    s
}

fn sde_after_step(e0: ZOmega, e1: ZOmega, k: u32, j: u32) -> u32 {
    sde_abs2(e0 + e1.mul_omega_pow(j), k + 1)
}

const BASE_SDE: u32 = 3;
const BASE_LETTERS: usize = 26;

struct BaseTable {
    words: FxHashMap<ExactU2, Vec<Letter>>,
}

fn base_table() -> &'static BaseTable {
    static TABLE: OnceLock<BaseTable> = OnceLock::new();
    TABLE.get_or_init(|| {
        // breadth-first over canonical words, recording every matrix whose top entry is shallow
        let mut words: FxHashMap<ExactU2, Vec<Letter>> = FxHashMap::default();
        let mut seen: FxHashMap<ExactU2, ()> = FxHashMap::default();
        let id = ExactU2::identity();
        words.insert(id, Vec::new());
        seen.insert(id, ());
        let mut frontier: Vec<(ExactU2, Vec<Letter>)> = vec![(id, Vec::new())];
        for _ in 0..BASE_LETTERS {
            let mut next = Vec::new();
            for (m, w) in &frontier {
                for l in [Letter::H, Letter::T] {
                    if l == Letter::H && w.last() == Some(&Letter::H) {
                        continue;
                    }
                    let n = m.mul(&ExactU2::letter(l));
                    if n.sde_top() > BASE_SDE + 2 {
                        continue;
                    }
                    if let Entry::Vacant(v) = seen.entry(n) {
                        v.insert(());
                        let mut nw = w.clone();
                        nw.push(l);
                        if n.sde_top() <= BASE_SDE {
                            words.entry(n).or_insert_with(|| nw.clone());
                        }
                        next.push((n, nw));
                    }
                }
            }
            if next.is_empty() {
                break;
            }
            frontier = next;
        }
        BaseTable { words }
    })
}

/// Number of shallow matrices known to the base table.
pub fn base_table_len() -> usize {
    base_table().words.len()
}

/// Exact H/T word for a Clifford+T unitary, in matrix-product order.
pub fn exact_word(u: &ExactU2) -> Option<Vec<Letter>> {
    let mut m = u.reduced();
    let mut prefix: Vec<Letter> = Vec::new();
    let table = base_table();
    loop {
        if let Some(w) = table.words.get(&m) {
            prefix.extend_from_slice(w);
            return Some(prefix);
        }
        let s = m.sde_top();
        // H T^j lowers the sde for some j; j and j+4 act alike up to X
        let mut best: Option<(u32, u32)> = None;
        for j in 0..8u32 {
            if sde_after_step(m.e[0], m.e[2], m.k, j) < s {
                let cost = (8 - j) % 8;
                if best.map_or(true, |(c, _)| cost < c) {
                    best = Some((cost, j));
                }
            }
        }
        let (cost, j) = best?;
        let step = ExactU2::h().mul(&ExactU2 {
            e: [ZOmega::ONE, ZOmega::ZERO, ZOmega::ZERO, ZOmega::OMEGA.pow(j)],
            k: 0,
        });
        m = step.mul(&m);
        prefix.extend(std::iter::repeat(Letter::T).take(cost as usize));
        prefix.push(Letter::H);
    }
}

/// Exact word for the unitary with first column (u, t)/√2^k.
pub fn exact_word_from_column(u: ZOmega, t: ZOmega, k: u32) -> Option<Vec<Letter>> {
    let total = u.norm_sq() + t.norm_sq();
    if total != ZRoot2::from_int(1i128 << k) {
        return None;
    }
    exact_word(&ExactU2::from_column(u, t, k))
}
