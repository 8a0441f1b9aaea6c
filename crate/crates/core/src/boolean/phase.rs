use super::oracle::{anf, conjugate_relative, monomials, prefix_closure, Conjunctions};
use super::table::PhaseTable;
use crate::circuit::{Builder, Circuit, Gate, Qubit};

/// Global phase −1 on any state of q: (ZX)² = −I.
fn minus_one(q: Qubit) -> [Gate; 4] {
    [Gate::Z(q), Gate::X(q), Gate::Z(q), Gate::X(q)]
}

/// −1 on the all-ones state of `qs` (a global −1 when `qs` is empty).
pub fn emit_multi_controlled_z(bld: &mut Builder, qs: &[Qubit]) {
    match *qs {
        [] => {
            let a = bld.pool.alloc();
            bld.extend(minus_one(a));
            bld.pool.release(a);
        }
        [a] => bld.push(Gate::Z(a)),
        [a, b] => bld.push(Gate::Cz(a, b)),
        [a, b, c] => bld.extend([Gate::H(c), Gate::Ccx(a, b, c), Gate::H(c)]),
        _ => {
            let m = qs.len();
            let anc = bld.pool.alloc_many(m - 2);
            let mut ladder = vec![Gate::Ccx(qs[0], qs[1], anc[0])];
            for i in 1..m - 2 {
                ladder.push(Gate::Ccx(anc[i - 1], qs[i + 1], anc[i]));
            }
            conjugate_relative(bld, &ladder, |b| b.push(Gate::Cz(anc[m - 3], qs[m - 1])));
            bld.pool.release_all(&anc);
        }
    }
}

/// 2|0⟩⟨0| − I on `qs`, exactly, global phase included.
pub fn emit_zero_reflection(bld: &mut Builder, qs: &[Qubit]) {
    bld.extend(qs.iter().map(|&q| Gate::X(q)));
    emit_multi_controlled_z(bld, qs);
    bld.extend(qs.iter().map(|&q| Gate::X(q)));
    match qs.first() {
        Some(&q) => bld.extend(minus_one(q)),
        None => emit_multi_controlled_z(bld, &[]),
    }
}

/// |x⟩ ↦ g(x)|x⟩ on `xs`. Monomials of degree at most two in the sign function are
/// applied as Z and CZ. Each higher monomial is split at a variable boundary into a high
/// and a low conjunction, held on ancillas, and applied as one CZ between them.
pub fn emit_phase_oracle(bld: &mut Builder, g: &PhaseTable, xs: &[Qubit]) {
    let n = g.n;
    assert_eq!(xs.len(), n as usize);
    let coeffs = anf(g.indicator().column(0), n);
    let mut high = Vec::new();
    for m in monomials(&coeffs) {
        if m.count_ones() <= 2 {
            let qs: Vec<Qubit> = (0..n).filter(|i| m >> i & 1 == 1).map(|i| xs[i as usize]).collect();
            emit_multi_controlled_z(bld, &qs);
        } else {
            high.push(m);
        }
    }
    if high.is_empty() {
        return;
    }
    let split = |d: u32| {
        let hm = (1u64 << d) - 1;
        prefix_closure(high.iter().map(|m| m & hm)).len() + prefix_closure(high.iter().map(|m| m & !hm)).len()
    };
    let d = (0..=n).min_by_key(|&d| split(d)).expect("n ≥ 3");
    let hm = (1u64 << d) - 1;
    let lo = Conjunctions::build(bld, xs, high.iter().map(|m| m & !hm));
    let hi = Conjunctions::build(bld, xs, high.iter().map(|m| m & hm));
    let mut compute = lo.compute.clone();
    compute.extend(hi.compute.iter().cloned());
    conjugate_relative(bld, &compute, |b| {
        for &m in &high {
            b.push(match (hi.qubit(m & hm, xs), lo.qubit(m & !hm, xs)) {
                (Some(p), Some(q)) => Gate::Cz(p, q),
                (Some(p), None) | (None, Some(p)) => Gate::Z(p),
                (None, None) => unreachable!("degree at least three"),
            });
        }
    });
    lo.free(bld);
    hi.free(bld);
}

pub fn synth_phase_oracle(g: &PhaseTable) -> Circuit {
    let mut bld = Builder::new(g.n);
    let xs: Vec<Qubit> = (0..g.n).collect();
    emit_phase_oracle(&mut bld, g, &xs);
    bld.finish(format!("phase oracle n={}", g.n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::{extract_diagonal, run_columns};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn check(g: &PhaseTable, c: &Circuit) {
        let d = extract_diagonal(c, g.n).unwrap();
        for (x, p) in d.phases.iter().enumerate() {
            let want = if g.minus[x] { PI } else { 0.0 };
            assert!((p.abs() - want).abs() < 1e-9, "x={x}: {p}");
        }
    }

    #[test]
    fn trivial_tables() {
        let c = synth_phase_oracle(&PhaseTable::all_plus(3));
        assert!(c.is_empty());
        let z = PhaseTable::from_signs(&[1, -1]).unwrap();
        let c = synth_phase_oracle(&z);
        assert_eq!(c.gates, vec![Gate::Z(0)]);
        let neg = PhaseTable::from_signs(&[-1]).unwrap();
        check(&neg, &synth_phase_oracle(&neg));
    }

    #[test]
    fn random_tables_match() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for n in 1..=8 {
            let g = PhaseTable::new((0..1 << n).map(|_| rng.gen()).collect()).unwrap();
            let c = synth_phase_oracle(&g);
            check(&g, &c);
        }
    }

    #[test]
    fn multi_controlled_z_and_reflection() {
        for m in 0..=6u32 {
            let mut bld = Builder::new(m.max(1));
            let qs: Vec<Qubit> = (0..m).collect();
            emit_zero_reflection(&mut bld, &qs);
            let c = bld.finish("");
            let cols = run_columns(&c, m.max(1)).unwrap();
            for (j, col) in cols.clean.iter().enumerate() {
                assert_eq!(col.len(), 1);
                let want = if j == 0 || m == 0 { 1.0 } else { -1.0 };
                assert_eq!(col[0].0, j as u64);
                assert!((col[0].1.re - want).abs() < 1e-12 && col[0].1.im.abs() < 1e-12, "m={m} j={j}");
            }
        }
    }
}
