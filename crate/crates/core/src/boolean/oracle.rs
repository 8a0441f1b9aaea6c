use super::table::TruthTable;
use crate::circuit::{rccx_gates, Builder, Circuit, Gate, Qubit};
use std::collections::BTreeMap;

/// argmin over d ∈ 0..=n of b·2^d + 2^{n−d}, ties toward smaller d.
pub fn choose_split(n: u32, b: u32) -> u32 {
    (0..=n).min_by_key(|&d| ((b as u128) << d) + (1u128 << (n - d))).unwrap_or(0)
}

/// b·2^{d*} + 2^{n−d*} with d* = choose_split(n, b).
pub fn oracle_ccx_bound(n: u32, b: u32) -> u128 {
    let d = choose_split(n, b);
    ((b as u128) << d) + (1u128 << (n - d))
}

const LOW_MASKS: [u64; 6] = [
    0x5555_5555_5555_5555,
    0x3333_3333_3333_3333,
    0x0F0F_0F0F_0F0F_0F0F,
    0x00FF_00FF_00FF_00FF,
    0x0000_FFFF_0000_FFFF,
    0x0000_0000_FFFF_FFFF,
];

/// Algebraic normal form of a column: bit M of the result is the coefficient of ∧_{i∈M} x_i.
/// The transform is its own inverse.
pub fn anf(col: &[u64], n: u32) -> Vec<u64> {
    let mut c = col.to_vec();
    for i in 0..n.min(6) {
        for w in c.iter_mut() {
            *w ^= (*w & LOW_MASKS[i as usize]) << (1 << i);
        }
    }
    for i in 6..n {
        let step = 1usize << (i - 6);
        for base in (0..c.len()).step_by(2 * step) {
            for j in base..base + step {
                c[j + step] ^= c[j];
            }
        }
    }
    c
}

pub(super) fn monomials(coeffs: &[u64]) -> impl Iterator<Item = u64> + '_ {
    coeffs.iter().enumerate().flat_map(|(wi, &w)| {
        let mut bits = w;
        std::iter::from_fn(move || {
            if bits == 0 {
                return None;
            }
            let b = bits.trailing_zeros() as u64;
            bits &= bits - 1;
            Some(wi as u64 * 64 + b)
        })
    })
}

/// Monomials of degree at least two needed to build `wanted` by dropping top variables,
/// lowest degree first.
pub(super) fn prefix_closure(wanted: impl IntoIterator<Item = u64>) -> Vec<u64> {
    let mut need: Vec<u64> = Vec::new();
    let mut seen = std::collections::BTreeSet::new();
    for m in wanted {
        let mut m = m;
        while m.count_ones() >= 2 && seen.insert(m) {
            need.push(m);
            m &= !(1 << (63 - m.leading_zeros()));
        }
    }
    need.sort_by_key(|m| (m.count_ones(), *m));
    need
}

/// Conjunction ancillas for a set of monomials, each built from its prefix.
pub(super) struct Conjunctions {
    map: BTreeMap<u64, Qubit>,
    pub(super) compute: Vec<Gate>,
}

impl Conjunctions {
    pub(super) fn build(bld: &mut Builder, xs: &[Qubit], wanted: impl IntoIterator<Item = u64>) -> Self {
        let need = prefix_closure(wanted);
        let mut c = Conjunctions { map: BTreeMap::new(), compute: Vec::new() };
        for m in need {
            let top = 63 - m.leading_zeros();
            let parent = m & !(1 << top);
            let a = bld.pool.alloc();
            let p = c.qubit(parent, xs).expect("parent is not constant");
            c.compute.push(Gate::Ccx(p, xs[top as usize], a));
            c.map.insert(m, a);
        }
        c
    }

    /// Qubit holding the conjunction; None for the empty (constant 1) monomial.
    pub(super) fn qubit(&self, m: u64, xs: &[Qubit]) -> Option<Qubit> {
        match m.count_ones() {
            0 => None,
            1 => Some(xs[m.trailing_zeros() as usize]),
            _ => Some(self.map[&m]),
        }
    }

    /// Return the ancillas to the pool; the caller has already uncomputed them.
    pub(super) fn free(self, bld: &mut Builder) {
        let qs: Vec<Qubit> = self.map.values().copied().collect();
        bld.pool.release_all(&qs);
    }
}

/// Conjunction ancillas, the output gates between them, and the shared scratch qubit.
struct OracleParts {
    lo: Conjunctions,
    hi: Conjunctions,
    middle: Vec<Gate>,
    scratch: Option<Qubit>,
}

impl OracleParts {
    fn build(bld: &mut Builder, f: &TruthTable, xs: &[Qubit], ys: &[Qubit], d: u32) -> Self {
        let n = f.n;
        assert_eq!(xs.len(), n as usize);
        assert_eq!(ys.len(), f.b as usize);
        assert!(d <= n);
        let hi_mask = (1u64 << d) - 1;
        // groups[S][i] = lo monomials T with coefficient of x^S x^T in output i
        let mut groups: BTreeMap<u64, Vec<Vec<u64>>> = BTreeMap::new();
        for i in 0..f.b {
            for m in monomials(&anf(f.column(i), n)) {
                groups.entry(m & hi_mask).or_insert_with(|| vec![Vec::new(); f.b as usize])[i as usize].push(m & !hi_mask);
            }
        }
        let lo = Conjunctions::build(bld, xs, groups.values().flatten().flatten().copied().collect::<Vec<_>>());
        let hi = Conjunctions::build(bld, xs, groups.keys().copied().collect::<Vec<_>>());
        let term = |t: u64, target: Qubit| match lo.qubit(t, xs) {
            None => Gate::X(target),
            Some(q) => Gate::Cx(q, target),
        };
        let mut middle = Vec::new();
        let mut scratch: Option<Qubit> = None;
        for (&s, outs) in &groups {
            for (i, ts) in outs.iter().enumerate() {
                if ts.is_empty() {
                    continue;
                }
                let y = ys[i];
                let Some(qs) = hi.qubit(s, xs) else {
                    middle.extend(ts.iter().map(|&t| term(t, y)));
                    continue;
                };
                match ts[..] {
                    [t] => middle.push(match lo.qubit(t, xs) {
                        None => Gate::Cx(qs, y),
                        Some(qt) => Gate::Ccx(qs, qt, y),
                    }),
                    _ => {
                        let a = *scratch.get_or_insert_with(|| bld.pool.alloc());
                        let fan: Vec<Gate> = ts.iter().map(|&t| term(t, a)).collect();
                        middle.extend(fan.iter().cloned());
                        middle.push(Gate::Ccx(qs, a, y));
                        middle.extend(fan.into_iter().rev());
                    }
                }
            }
        }
        OracleParts { lo, hi, middle, scratch }
    }

    fn free(self, bld: &mut Builder) {
        if let Some(a) = self.scratch {
            bld.pool.release(a);
        }
        self.hi.free(bld);
        self.lo.free(bld);
    }
}

/// XOR f(x) into `ys` using split d: f = ⊕_{S ⊆ first d inputs} x^S ∧ h_S(remaining inputs).
/// Every ancilla is returned to |0⟩.
pub fn emit_oracle(bld: &mut Builder, f: &TruthTable, xs: &[Qubit], ys: &[Qubit], d: u32) {
    let parts = OracleParts::build(bld, f, xs, ys, d);
    let compute: Vec<Gate> = parts.lo.compute.iter().chain(&parts.hi.compute).cloned().collect();
    bld.extend(compute.iter().cloned());
    bld.extend(parts.middle.iter().cloned());
    bld.extend(compute.into_iter().rev());
    parts.free(bld);
}

/// Toffolis swapped for relative-phase ones, then `body`, then the exact inverse. Exact
/// whenever `body` leaves every qubit of `compute` in its basis state.
pub(super) fn conjugate_relative(bld: &mut Builder, compute: &[Gate], body: impl FnOnce(&mut Builder)) {
    let gates: Vec<Gate> = compute
        .iter()
        .flat_map(|g| match *g {
            Gate::Ccx(a, b, c) => rccx_gates(a, b, c),
            ref g => vec![g.clone()],
        })
        .collect();
    bld.extend(gates.iter().cloned());
    body(bld);
    bld.extend(gates.iter().rev().map(Gate::inverse));
}

/// f(x) XORed into `ys`, then `body`, then f(x) XORed out again. Built from relative-phase
/// Toffolis and their exact inverses; `body` must not change `xs` or `ys` in the
/// computational basis (it may act on other qubits controlled by them).
pub fn emit_oracle_around(bld: &mut Builder, f: &TruthTable, xs: &[Qubit], ys: &[Qubit], d: u32, body: impl FnOnce(&mut Builder)) {
    let parts = OracleParts::build(bld, f, xs, ys, d);
    let mut gates: Vec<Gate> = parts.lo.compute.iter().chain(&parts.hi.compute).cloned().collect();
    gates.extend(parts.middle.iter().cloned());
    conjugate_relative(bld, &gates, body);
    parts.free(bld);
}

/// U_f on |x⟩|y⟩|0…⟩: inputs are qubits 0..n, outputs n..n+b, ancillas above.
pub fn synth_oracle(f: &TruthTable) -> Circuit {
    let (n, b) = (f.n, f.b);
    let mut bld = Builder::new(n + b);
    let xs: Vec<Qubit> = (0..n).collect();
    let ys: Vec<Qubit> = (n..n + b).collect();
    emit_oracle(&mut bld, f, &xs, &ys, choose_split(n, b));
    bld.finish(format!("oracle n={n} b={b}"))
}
