use crate::error::{parse_err, Error, Result};
use std::fmt::Write;

/// f: {0,1}^n → {0,1}^b, stored column by column as bitsets over the 2^n inputs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruthTable {
    pub n: u32,
    pub b: u32,
    cols: Vec<Vec<u64>>,
}

fn words(n: u32) -> usize {
    (1usize << n).div_ceil(64)
}

impl TruthTable {
    pub fn zeros(n: u32, b: u32) -> Self {
        assert!(n <= 30, "truth table over {n} inputs");
        TruthTable { n, b, cols: vec![vec![0; words(n)]; b as usize] }
    }

    /// Table of x ↦ f(x) with output bit i at bit i of the returned word.
    pub fn from_fn(n: u32, b: u32, mut f: impl FnMut(u64) -> u64) -> Self {
        assert!(b <= 64);
        let mut t = Self::zeros(n, b);
        for x in 0..1u64 << n {
            let v = f(x);
            for i in 0..b {
                t.set(x, i, v >> i & 1 == 1);
            }
        }
        t
    }

    pub fn get(&self, x: u64, i: u32) -> bool {
        self.cols[i as usize][(x / 64) as usize] >> (x % 64) & 1 == 1
    }

    pub fn set(&mut self, x: u64, i: u32, v: bool) {
        let w = &mut self.cols[i as usize][(x / 64) as usize];
        if v {
            *w |= 1 << (x % 64);
        } else {
            *w &= !(1 << (x % 64));
        }
    }

    /// Output column i as a bitset over the inputs.
    pub fn column(&self, i: u32) -> &[u64] {
        &self.cols[i as usize]
    }

    /// Row x as an integer; b must be at most 64.
    pub fn row(&self, x: u64) -> u64 {
        assert!(self.b <= 64);
        (0..self.b).fold(0, |acc, i| acc | (self.get(x, i) as u64) << i)
    }

    /// `N <n> B <b>` header, then one b-character row per input; character i is output bit i.
    pub fn serialize(&self) -> String {
        let mut s = format!("N {} B {}\n", self.n, self.b);
        for x in 0..1u64 << self.n {
            for i in 0..self.b {
                s.push(if self.get(x, i) { '1' } else { '0' });
            }
            s.push('\n');
        }
        s
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'));
        let (hl, header) = lines.next().ok_or_else(|| parse_err(0, "missing header"))?;
        let t: Vec<&str> = header.split_whitespace().collect();
        if t.len() != 4 || t[0] != "N" || t[2] != "B" {
            return Err(parse_err(hl + 1, "expected `N <n> B <b>`"));
        }
        let n: u32 = t[1].parse().map_err(|_| parse_err(hl + 1, "bad input count"))?;
        let b: u32 = t[3].parse().map_err(|_| parse_err(hl + 1, "bad output count"))?;
        if n > 24 || b == 0 {
            return Err(parse_err(hl + 1, "unsupported table size"));
        }
        let mut tt = TruthTable::zeros(n, b);
        let mut x = 0u64;
        for (ln, line) in lines {
            let row = line.trim();
            if x >> n != 0 {
                return Err(parse_err(ln + 1, "more rows than 2^n"));
            }
            if row.len() != b as usize {
                return Err(parse_err(ln + 1, format!("row has {} characters, expected {b}", row.len())));
            }
            for (i, ch) in row.chars().enumerate() {
                match ch {
                    '0' => {}
                    '1' => tt.set(x, i as u32, true),
                    _ => return Err(parse_err(ln + 1, format!("bad character `{ch}`"))),
                }
            }
            x += 1;
        }
        if x != 1 << n {
            return Err(Error::Parse { line: 0, msg: format!("expected {} rows, found {x}", 1u64 << n) });
        }
        Ok(tt)
    }
}

/// Diagonal oracle with ±1 entries; `true` marks −1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PhaseTable {
    pub n: u32,
    pub minus: Vec<bool>,
}

impl PhaseTable {
    pub fn new(minus: Vec<bool>) -> Result<Self> {
        if !minus.len().is_power_of_two() {
            return Err(Error::InvalidInput(format!("{} signs is not a power of two", minus.len())));
        }
        Ok(PhaseTable { n: minus.len().trailing_zeros(), minus })
    }

    pub fn all_plus(n: u32) -> Self {
        PhaseTable { n, minus: vec![false; 1 << n] }
    }

    pub fn from_signs(signs: &[i8]) -> Result<Self> {
        Self::new(signs.iter().map(|&s| s < 0).collect())
    }

    pub fn sign(&self, x: usize) -> f64 {
        if self.minus[x] {
            -1.0
        } else {
            1.0
        }
    }

    /// Indicator of the −1 entries as a one-output truth table.
    pub fn indicator(&self) -> TruthTable {
        let mut t = TruthTable::zeros(self.n, 1);
        for (x, &m) in self.minus.iter().enumerate() {
            t.set(x as u64, 0, m);
        }
        t
    }

    /// `N <n>` header, then one `+` or `-` per line.
    pub fn serialize(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "N {}", self.n);
        for &m in &self.minus {
            s.push_str(if m { "-\n" } else { "+\n" });
        }
        s
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut n = None;
        let mut minus = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if n.is_none() {
                let t: Vec<&str> = line.split_whitespace().collect();
                if t.len() != 2 || t[0] != "N" {
                    return Err(parse_err(i + 1, "expected `N <n>`"));
                }
                let v: u32 = t[1].parse().map_err(|_| parse_err(i + 1, "bad input count"))?;
                if v > 24 {
                    return Err(parse_err(i + 1, "unsupported table size"));
                }
                n = Some(v);
                continue;
            }
            match line {
                "+" => minus.push(false),
                "-" => minus.push(true),
                _ => return Err(parse_err(i + 1, format!("expected `+` or `-`, found `{line}`"))),
            }
        }
        let n = n.ok_or_else(|| parse_err(0, "missing header"))?;
        if minus.len() != 1 << n {
            return Err(parse_err(0, format!("expected {} signs, found {}", 1u64 << n, minus.len())));
        }
        Ok(PhaseTable { n, minus })
    }
}
