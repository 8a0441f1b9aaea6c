use super::state::SparseState;
use crate::error::{parse_err, Error, Result};
use num_complex::Complex64;
use std::fmt::Write;

/// `QUBITS n` header, then `index re im` lines; unlisted entries are zero.
pub fn serialize_state(s: &SparseState) -> String {
    let mut out = format!("QUBITS {}\n", s.width());
    let mut rows: Vec<(u64, Complex64)> = s.iter().map(|(k, a)| (k[0], a)).collect();
    rows.sort_by_key(|r| r.0);
    for (k, a) in rows {
        let _ = writeln!(out, "{k} {} {}", a.re, a.im);
    }
    out
}

/// Parse a state file; the state must be normalized to 1e-6.
pub fn parse_state(text: &str) -> Result<SparseState> {
    let mut width = None;
    let mut entries = Vec::new();
    let mut seen = rustc_hash::FxHashSet::default();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let toks: Vec<&str> = line.split_whitespace().collect();
        if width.is_none() {
            if toks.len() != 2 || toks[0] != "QUBITS" {
                return Err(parse_err(line_no, "expected `QUBITS <n>`"));
            }
            let n: u32 = toks[1].parse().map_err(|_| parse_err(line_no, "bad qubit count"))?;
            if n > 64 {
                return Err(parse_err(line_no, "state files hold at most 64 qubits"));
            }
            width = Some(n);
            continue;
        }
        let n = width.unwrap();
        if toks.len() != 3 {
            return Err(parse_err(line_no, "expected `<index> <re> <im>`"));
        }
        let k: u64 = toks[0].parse().map_err(|_| parse_err(line_no, "bad index"))?;
        if n < 64 && k >> n != 0 {
            return Err(parse_err(line_no, format!("index {k} outside {n} qubits")));
        }
        if !seen.insert(k) {
            return Err(parse_err(line_no, format!("index {k} repeated")));
        }
        let re: f64 = toks[1].parse().map_err(|_| parse_err(line_no, "bad real part"))?;
        let im: f64 = toks[2].parse().map_err(|_| parse_err(line_no, "bad imaginary part"))?;
        entries.push((k, Complex64::new(re, im)));
    }
    let n = width.ok_or_else(|| parse_err(0, "missing header"))?;
    let s = SparseState::from_entries(n, entries);
    let norm = s.norm_sqr();
    if (norm - 1.0).abs() > 1e-6 {
        return Err(Error::InvalidInput(format!("state norm² {norm} is not 1")));
    }
    Ok(s)
}
