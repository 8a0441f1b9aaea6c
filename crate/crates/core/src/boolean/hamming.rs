use crate::circuit::{Builder, Circuit, Gate, Qubit};

/// ⌈log₂(m+1)⌉: bits needed to hold a weight in 0..=m.
pub fn hamming_width(m: u32) -> u32 {
    32 - m.leading_zeros()
}

/// Out-of-place sum of two registers holding values up to `ca` and `cb`.
fn add(bld: &mut Builder, gates: &mut Vec<Gate>, a: &[Qubit], b: &[Qubit], ca: u32, cb: u32) -> Vec<Qubit> {
    let w = hamming_width(ca + cb) as usize;
    let s = bld.pool.alloc_many(w);
    let k = a.len().max(b.len());
    for i in 0..k {
        let carry_out = (i + 1 < w).then(|| s[i + 1]);
        match (a.get(i).copied(), b.get(i).copied()) {
            (Some(x), Some(y)) => {
                if let Some(c) = carry_out {
                    gates.push(Gate::Ccx(x, y, c));
                }
                gates.push(Gate::Cx(x, y));
                if let (Some(c), true) = (carry_out, i > 0) {
                    gates.push(Gate::Ccx(y, s[i], c));
                }
                gates.push(Gate::Cx(y, s[i]));
                gates.push(Gate::Cx(x, y));
            }
            (Some(x), None) | (None, Some(x)) => {
                if let (Some(c), true) = (carry_out, i > 0) {
                    gates.push(Gate::Ccx(x, s[i], c));
                }
                gates.push(Gate::Cx(x, s[i]));
            }
            (None, None) => unreachable!(),
        }
    }
    s
}

/// XOR the Hamming weight of `xs` into `ys` (little-endian, at least ⌈log₂(m+1)⌉ bits).
pub fn emit_hamming(bld: &mut Builder, xs: &[Qubit], ys: &[Qubit]) {
    let m = xs.len() as u32;
    assert!(ys.len() >= hamming_width(m) as usize);
    if m == 0 {
        return;
    }
    let mut nums: Vec<(Vec<Qubit>, u32)> = xs.iter().map(|&q| (vec![q], 1)).collect();
    let mut gates = Vec::new();
    let mut anc = Vec::new();
    while nums.len() > 1 {
        let mut next = Vec::with_capacity(nums.len().div_ceil(2));
        let mut it = nums.into_iter();
        while let Some((a, ca)) = it.next() {
            match it.next() {
                Some((b, cb)) => {
                    let s = add(bld, &mut gates, &a, &b, ca, cb);
                    anc.extend_from_slice(&s);
                    next.push((s, ca + cb));
                }
                None => next.push((a, ca)),
            }
        }
        nums = next;
    }
    let (sum, _) = &nums[0];
    bld.extend(gates.iter().cloned());
    bld.extend(sum.iter().zip(ys).map(|(&s, &y)| Gate::Cx(s, y)));
    bld.extend(gates.into_iter().rev());
    bld.pool.release_all(&anc);
}

/// |x⟩|y⟩|0…⟩ ↦ |x⟩|y ⊕ wt(x)⟩|0…⟩ with x on qubits 0..m and y on the next ⌈log₂(m+1)⌉.
pub fn synth_hamming(m: u32) -> Circuit {
    let w = hamming_width(m);
    let mut bld = Builder::new(m + w);
    let xs: Vec<Qubit> = (0..m).collect();
    let ys: Vec<Qubit> = (m..m + w).collect();
    emit_hamming(&mut bld, &xs, &ys);
    bld.finish(format!("hamming m={m}"))
}
