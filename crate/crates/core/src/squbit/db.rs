//! Meet-in-the-middle table of near-diagonal H/T words.
//!
//! Rows e₀ᵀW and columns W′e₀ of short words are enumerated exactly; pairs whose
//! product W·W′ is close to diagonal are kept, determinant-fixed with T powers on
//! both ends, and indexed by the phase of their top-left entry.

use super::exact::ExactU2;
use super::ring::ZOmega;
use super::word::{canonicalize, HTWord, Letter, Mat2};
use num_complex::Complex64;
use rustc_hash::{FxHashMap, FxHashSet};
use std::f64::consts::PI;

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
struct Vec2 {
    e: [ZOmega; 2],
    k: u32,
}

impl Vec2 {
    fn reduced(mut self) -> Self {
        while self.k > 0 && self.e[0].divisible_by_sqrt2() && self.e[1].divisible_by_sqrt2() {
            self.e = [self.e[0].div_sqrt2().unwrap(), self.e[1].div_sqrt2().unwrap()];
            self.k -= 1;
        }
        self
    }
    fn h(self) -> Self {
        Vec2 { e: [self.e[0] + self.e[1], self.e[0] - self.e[1]], k: self.k + 1 }.reduced()
    }
    fn t(self) -> Self {
        Vec2 { e: [self.e[0], self.e[1].mul_omega()], k: self.k }
    }
    fn to_complex(self) -> [Complex64; 2] {
        [self.e[0].to_complex_scaled(self.k), self.e[1].to_complex_scaled(self.k)]
    }
}

/// Block codes: 1 = H, 2 = T, 3 = HT.
fn block_letters(code: u8) -> &'static [Letter] {
    match code {
        1 => &[Letter::H],
        2 => &[Letter::T],
        _ => &[Letter::H, Letter::T],
    }
}

struct Side {
    vecs: Vec<[Complex64; 2]>,
    det: Vec<u8>,
    len: Vec<u8>,
    parent: Vec<u32>,
    code: Vec<u8>,
    level_end: Vec<usize>,
}

impl Side {
    /// Row side applies r ↦ r·B (H then T); column side applies c ↦ B·c (T then H).
    fn build(rows: bool, levels: usize) -> Side {
        let start = Vec2 { e: [ZOmega::ONE, ZOmega::ZERO], k: 0 };
        let mut seen: FxHashSet<Vec2> = FxHashSet::default();
        seen.insert(start);
        let mut s = Side {
            vecs: vec![start.to_complex()],
            det: vec![0],
            len: vec![0],
            parent: vec![u32::MAX],
            code: vec![0],
            level_end: vec![1],
        };
        let mut frontier = vec![(start, 0u32)];
        for l in 1..=levels {
            let mut next = Vec::new();
            for &(v, idx) in &frontier {
                for code in 1u8..4 {
                    let (a, b) = (code & 1 != 0, code & 2 != 0);
                    let mut n = v;
                    if rows {
                        if a {
                            n = n.h();
                        }
                        if b {
                            n = n.t();
                        }
                    } else {
                        if b {
                            n = n.t();
                        }
                        if a {
                            n = n.h();
                        }
                    }
                    if seen.insert(n) {
                        let det = (s.det[idx as usize] + if a { 4 } else { 0 } + if b { 1 } else { 0 }) % 8;
                        let id = s.vecs.len() as u32;
                        s.vecs.push(n.to_complex());
                        s.det.push(det);
                        s.len.push(l as u8);
                        s.parent.push(idx);
                        s.code.push(code);
                        next.push((n, id));
                    }
                }
            }
            s.level_end.push(s.vecs.len());
            frontier = next;
        }
        s
    }

    fn codes(&self, mut i: u32) -> Vec<u8> {
        let mut out = Vec::new();
        while self.parent[i as usize] != u32::MAX {
            out.push(self.code[i as usize]);
            i = self.parent[i as usize];
        }
        out.reverse();
        out
    }
}

fn bloch(a: Complex64, b: Complex64) -> [f64; 3] {
    let x = a.conj() * b;
    [2.0 * x.re, 2.0 * x.im, a.norm_sqr() - b.norm_sqr()]
}

/// A determinant-1 word close to diag(e^{iθ}, e^{-iθ}).
#[derive(Clone, Debug)]
pub struct Entry {
    pub theta: f64,
    pub perp: f64,
    pub cost: usize,
    pub word: HTWord,
    pub matrix: Mat2,
}

pub struct WordTable {
    /// Sorted by θ.
    pub entries: Vec<Entry>,
    pub min_cost: usize,
}

/// Entries below this off-diagonal size take part in pair products.
pub const PAIR_PERP: f64 = 0.05;
/// Table words longer than this are never returned; the lattice search is cheaper there.
pub const TABLE_MAX_COST: usize = 44;
const PAIR_BUDGET: f64 = 40_000.0;

impl WordTable {
    pub fn build(levels: usize) -> WordTable {
        let rows = Side::build(true, levels);
        let cols = Side::build(false, levels);
        // raw hits keyed by quantized (θ, perp), keeping the shortest
        let mut raw: FxHashMap<(i64, i64), (usize, u32, u32, f64, f64, u8)> = FxHashMap::default();
        let mut lt = 2;
        while lt <= levels {
            let nr = rows.level_end[lt];
            let nc = cols.level_end[lt];
            let delta = (PAIR_BUDGET.sqrt() / ((nr as f64) * (nc as f64)).sqrt()).min(0.1);
            let h = 2.0 * delta;
            let cell = |p: [f64; 3]| ((p[0] / h).floor() as i32, (p[1] / h).floor() as i32, (p[2] / h).floor() as i32);
            let mut grid: FxHashMap<(i32, i32, i32), Vec<u32>> = FxHashMap::default();
            for i in 0..nc {
                let v = cols.vecs[i];
                grid.entry(cell(bloch(v[0], v[1]))).or_default().push(i as u32);
            }
            for i in 0..nr {
                let p = rows.vecs[i];
                let (kx, ky, kz) = cell(bloch(p[0].conj(), p[1].conj()));
                for dx in -1..=1 {
                    for dy in -1..=1 {
                        for dz in -1..=1 {
                            let Some(list) = grid.get(&(kx + dx, ky + dy, kz + dz)) else { continue };
                            for &j in list {
                                let s = cols.vecs[j as usize];
                                let perp = (p[0].conj() * s[1] - p[1].conj() * s[0]).norm();
                                if perp > delta {
                                    continue;
                                }
                                let u = p[0] * s[0] + p[1] * s[1];
                                let theta = u.arg();
                                let len = rows.len[i] as usize + cols.len[j as usize] as usize;
                                let det = (rows.det[i] + cols.det[j as usize]) % 8;
                                let key = ((theta * 1e11).round() as i64, (perp * 1e11).round() as i64);
                                let cand = (len, i as u32, j, theta, perp, det);
                                raw.entry(key)
                                    .and_modify(|e| {
                                        if (cand.0, cand.1, cand.2) < (e.0, e.1, e.2) {
                                            *e = cand;
                                        }
                                    })
                                    .or_insert(cand);
                            }
                        }
                    }
                }
            }
            lt += 2;
        }
        let mut hits: Vec<_> = raw.into_values().collect();
        hits.sort_by(|a, b| (a.0, a.1, a.2).cmp(&(b.0, b.1, b.2)));
        let mut entries: Vec<Entry> = hits
            .into_iter()
            .map(|(_, i, j, theta, perp, det)| {
                let mut letters = Vec::new();
                for c in rows.codes(i) {
                    letters.extend_from_slice(block_letters(c));
                }
                let mut ccodes = cols.codes(j);
                ccodes.reverse();
                for c in ccodes {
                    letters.extend_from_slice(block_letters(c));
                }
                let (word, cost) = fix_determinant(&letters, det);
                let matrix = ExactU2::from_letters(&word.letters()).to_complex();
                Entry { theta, perp, cost, word, matrix }
            })
            .collect();
        entries.sort_by(|a, b| a.theta.total_cmp(&b.theta).then(a.cost.cmp(&b.cost)));
        let min_cost = entries.iter().map(|e| e.cost).min().unwrap_or(0);
        WordTable { entries, min_cost }
    }

    fn window(&self, center: f64, half: f64) -> impl Iterator<Item = usize> + '_ {
        // θ lives on a circle: query up to three unwrapped ranges
        let mut ranges = Vec::new();
        if half >= PI {
            ranges.push((0usize, self.entries.len()));
        } else {
            let c = wrap(center);
            for shift in [-2.0 * PI, 0.0, 2.0 * PI] {
                let lo = c + shift - half;
                let hi = c + shift + half;
                if hi < -PI || lo > PI {
                    continue;
                }
                let a = self.entries.partition_point(|e| e.theta < lo);
                let b = self.entries.partition_point(|e| e.theta <= hi);
                ranges.push((a, b));
            }
        }
        ranges.into_iter().flat_map(|(a, b)| a..b)
    }

    /// Cheapest single entry or ordered pair within `eps` of diag(e^{iθ}, e^{-iθ}).
    pub fn query(&self, theta: f64, eps: f64, max_blocks: usize) -> Option<(HTWord, f64)> {
        let max_blocks = max_blocks.min(TABLE_MAX_COST);
        let target = [
            Complex64::from_polar(1.0, theta),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::from_polar(1.0, -theta),
        ];
        let accept = super::approx::accept_tol(eps);
        // (cost, kind, first, second)
        let mut best: Option<(usize, u8, usize, usize, f64)> = None;
        let half1 = 2.0 * (eps / 2.0).min(1.0).asin() + 1e-12;
        for i in self.window(theta, half1) {
            let e = &self.entries[i];
            if e.cost > max_blocks {
                continue;
            }
            let err = super::word::op_dist(&e.matrix, &target);
            if err <= accept {
                let cand = (e.cost, 0u8, i, 0usize, err);
                if best.map_or(true, |b| (cand.0, cand.1, cand.2, cand.3) < (b.0, b.1, b.2, b.3)) {
                    best = Some(cand);
                }
            }
        }
        let mut order: Vec<usize> = (0..self.entries.len()).filter(|&i| self.entries[i].perp <= PAIR_PERP).collect();
        order.sort_by_key(|&i| (self.entries[i].cost, i));
        for &i in &order {
            let e = &self.entries[i];
            if e.cost + self.min_cost > max_blocks {
                break;
            }
            if let Some(b) = best {
                if e.cost + self.min_cost > b.0 {
                    break;
                }
            }
            let slack = 1.0 - eps * eps / 2.0 - e.perp * (PAIR_PERP - e.perp);
            let half = slack.max(-1.0).acos() + 1e-12;
            for j in self.window(theta - e.theta, half) {
                let f = &self.entries[j];
                if e.perp + f.perp > PAIR_PERP {
                    continue;
                }
                let cost = e.cost + f.cost;
                if cost > max_blocks {
                    continue;
                }
                if let Some(b) = best {
                    if (cost, 1u8, i, j) >= (b.0, b.1, b.2, b.3) {
                        continue;
                    }
                }
                let m = super::word::mat_mul(&e.matrix, &f.matrix);
                let err = super::word::op_dist(&m, &target);
                if err <= accept {
                    best = Some((cost, 1, i, j, err));
                }
            }
        }
        best.map(|(_, kind, i, j, err)| {
            let w = if kind == 0 {
                self.entries[i].word.clone()
            } else {
                let mut p = self.entries[i].word.pairs.clone();
                p.extend_from_slice(&self.entries[j].word.pairs);
                HTWord { pairs: p }
            };
            (w, err)
        })
    }
}

fn wrap(x: f64) -> f64 {
    (x + PI).rem_euclid(2.0 * PI) - PI
}

/// Choose T^a·W·T^b with a + b ≡ −det (mod 8) and fewest blocks.
fn fix_determinant(letters: &[Letter], det: u8) -> (HTWord, usize) {
    let need = (8 - det as usize) % 8;
    let mut best: Option<(usize, HTWord)> = None;
    for a in 0..8usize {
        let b = (need + 8 - a) % 8;
        let mut l = vec![Letter::T; a];
        l.extend_from_slice(letters);
        l.extend(std::iter::repeat(Letter::T).take(b));
        let w = HTWord::from_letters(&canonicalize(&l));
        if best.as_ref().map_or(true, |(c, _)| w.len() < *c) {
            best = Some((w.len(), w));
        }
    }
    let (c, w) = best.unwrap();
    (w, c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::squbit::word::{mat_det, op_dist};

    #[test]
    fn entries_are_det_one_and_near_diagonal() {
        let t = WordTable::build(12);
        assert!(t.entries.len() > 100);
        for e in t.entries.iter().step_by(7) {
            let m = e.word.matrix();
            assert!((mat_det(&m) - Complex64::new(1.0, 0.0)).norm() < 1e-9);
            assert!((m[2].norm() - e.perp).abs() < 1e-9);
            assert!(op_dist(&m, &e.matrix) < 1e-9);
            assert!((m[0].arg() - e.theta).abs() < 1e-9 || (m[0].arg() - e.theta).abs() > 6.0);
            assert_eq!(e.cost, e.word.len());
        }
    }

    #[test]
    fn identity_costs_nothing() {
        let t = WordTable::build(8);
        let (w, err) = t.query(0.0, 0.1, 100).unwrap();
        assert!(w.is_empty());
        assert!(err < 1e-12);
    }

    #[test]
    fn query_meets_tolerance() {
        let t = WordTable::build(14);
        let mut found = 0;
        for i in 0..30 {
            let theta = -3.0 + 0.2 * i as f64;
            if let Some((w, err)) = t.query(theta, 0.05, 200) {
                found += 1;
                let target = [
                    Complex64::from_polar(1.0, theta),
                    Complex64::new(0.0, 0.0),
                    Complex64::new(0.0, 0.0),
                    Complex64::from_polar(1.0, -theta),
                ];
                let d = op_dist(&w.matrix(), &target);
                assert!(d <= 0.05, "{d}");
                assert!((d - err).abs() < 1e-9);
            }
        }
        assert!(found >= 25, "{found}");
    }
}
