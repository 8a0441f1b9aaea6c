use super::{Circuit, Gate, Qubit};

/// Ancilla allocator over the qubits above the inputs.
#[derive(Clone, Debug)]
pub struct QubitPool {
    width: u32,
    free: Vec<Qubit>,
    in_use: Vec<bool>,
}

impl QubitPool {
    /// Pool whose first `inputs` qubits are permanently in use.
    pub fn new(inputs: u32) -> Self {
        QubitPool { width: inputs, free: Vec::new(), in_use: vec![true; inputs as usize] }
    }

    /// Lowest free ancilla, or a fresh one.
    pub fn alloc(&mut self) -> Qubit {
        if let Some(q) = self.free.pop() {
            self.in_use[q as usize] = true;
            return q;
        }
        let q = self.width;
        self.width += 1;
        self.in_use.push(true);
        q
    }

    pub fn alloc_many(&mut self, n: usize) -> Vec<Qubit> {
        (0..n).map(|_| self.alloc()).collect()
    }

    pub fn release(&mut self, q: Qubit) {
        assert!(self.in_use[q as usize], "qubit {q} released twice");
        self.in_use[q as usize] = false;
        self.free.push(q);
        // keep the lowest index on top
        self.free.sort_unstable_by(|a, b| b.cmp(a));
    }

    pub fn release_all(&mut self, qs: &[Qubit]) {
        for &q in qs.iter().rev() {
            self.release(q);
        }
    }

    pub fn is_free(&self, q: Qubit) -> bool {
        !self.in_use[q as usize]
    }

    /// High-water mark: every index ever handed out is below it.
    pub fn width(&self) -> u32 {
        self.width
    }
}

/// Gate list plus allocator; finishes into a circuit whose width is the high-water mark.
#[derive(Clone, Debug)]
pub struct Builder {
    pub inputs: u32,
    pub pool: QubitPool,
    pub gates: Vec<Gate>,
}

impl Builder {
    pub fn new(inputs: u32) -> Self {
        Builder { inputs, pool: QubitPool::new(inputs), gates: Vec::new() }
    }

    pub fn push(&mut self, g: Gate) {
        self.gates.push(g);
    }

    pub fn extend(&mut self, gs: impl IntoIterator<Item = Gate>) {
        self.gates.extend(gs);
    }

    /// Append `c` with its qubit i mapped to `map[i]`.
    pub fn append_mapped(&mut self, c: &Circuit, map: &[Qubit]) {
        assert!(map.len() >= c.width as usize);
        self.gates.extend(c.gates.iter().map(|g| g.map_qubits(|q| map[q as usize])));
    }

    /// Append a circuit, allocating fresh ancillas for its non-input qubits.
    pub fn append_with_ancillas(&mut self, c: &Circuit, inputs: &[Qubit]) {
        assert_eq!(inputs.len(), c.input_count as usize);
        let anc = self.pool.alloc_many((c.width - c.input_count) as usize);
        let mut map = inputs.to_vec();
        map.extend_from_slice(&anc);
        self.append_mapped(c, &map);
        self.pool.release_all(&anc);
    }

    pub fn finish(self, label: impl Into<String>) -> Circuit {
        let c = Circuit { width: self.pool.width(), input_count: self.inputs, gates: self.gates, label: label.into() };
        debug_assert!(c.validate().is_ok());
        c
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reuse_and_high_water() {
        let mut p = QubitPool::new(2);
        let a = p.alloc();
        let b = p.alloc();
        assert_eq!((a, b), (2, 3));
        p.release(a);
        assert!(p.is_free(a) && !p.is_free(b));
        assert_eq!(p.alloc(), a);
        assert_eq!(p.width(), 4);
        p.release(b);
        p.release(a);
        assert_eq!(p.alloc(), 2);
        assert_eq!(p.width(), 4);
    }

    #[test]
    #[should_panic]
    fn double_release_panics() {
        let mut p = QubitPool::new(0);
        let a = p.alloc();
        p.release(a);
        p.release(a);
    }
}
