//! Sparse SDPA format (`.dat-s`).
//!
//! SDPA states the pair `min c'x s.t. Σ F_i x_i - F_0 ⪰ 0` /
//! `max F_0 • Y s.t. F_i • Y = c_i, Y ⪰ 0`. A [`ConicProgram`] maps onto the
//! second form with `Y = X`, `F_i = A_i`, `c_i = b_i` and `F_0 = C` for a
//! maximization or `F_0 = -C` for a minimization. The sense is recorded in the
//! leading comment line so that import restores the original program.

use std::fmt::Write;

use crate::error::ConicError;
use crate::program::{BlockKind, BlockSparse, ConicProgram, Constraint, Sense};

const HEADER_MAX: &str = "* kpoint conic program; sense: maximize (F0 = C)";
const HEADER_MIN: &str = "* kpoint conic program; sense: minimize (F0 = -C)";

/// Shortest decimal text that parses back to exactly `v`.
fn fmt_num(v: f64) -> String {
    if v == v.trunc() && v.abs() < 1e15 {
        format!("{}", v as i64)
    } else if (1e-4..1e15).contains(&v.abs()) {
        format!("{v}")
    } else {
        format!("{v:e}")
    }
}

pub fn export_sdpa(p: &ConicProgram) -> String {
    let mut out = String::new();
    let sign = match p.sense() {
        Sense::Maximize => {
            out.push_str(HEADER_MAX);
            1.0
        }
        Sense::Minimize => {
            out.push_str(HEADER_MIN);
            -1.0
        }
    };
    out.push('\n');
    let _ = writeln!(out, "{}", p.num_constraints());
    let _ = writeln!(out, "{}", p.blocks().len());
    let sizes: Vec<String> = p
        .blocks()
        .iter()
        .map(|b| match b {
            BlockKind::Psd(n) => format!("{n}"),
            BlockKind::Diagonal(n) => format!("-{n}"),
        })
        .collect();
    let _ = writeln!(out, "{}", sizes.join(" "));
    let rhs: Vec<String> = p.rhs().into_iter().map(fmt_num).collect();
    let _ = writeln!(out, "{}", rhs.join(" "));
    let mut write_matrix = |matno: usize, m: &BlockSparse, scale: f64| {
        for e in m.entries() {
            let _ = writeln!(out, "{} {} {} {} {}", matno, e.block + 1, e.i + 1, e.j + 1, fmt_num(scale * e.value));
        }
    };
    write_matrix(0, p.objective(), sign);
    for (k, c) in p.constraints().iter().enumerate() {
        write_matrix(k + 1, &c.coeffs, 1.0);
    }
    out
}

struct Tokens<'a> {
    items: Vec<(usize, &'a str)>,
    pos: usize,
}

impl<'a> Tokens<'a> {
    fn next_num<T: std::str::FromStr>(&mut self, what: &str) -> Result<(usize, T), ConicError> {
        while let Some(&(line, tok)) = self.items.get(self.pos) {
            self.pos += 1;
            if let Ok(v) = tok.parse::<T>() {
                return Ok((line, v));
            }
            // Tolerate decorations like "=mDIM" on header lines.
            if tok.starts_with('=') || tok.chars().all(|c| c.is_alphabetic()) {
                continue;
            }
            return Err(ConicError::Sdpa { line, msg: format!("expected {what}, found '{tok}'") });
        }
        let line = self.items.last().map(|x| x.0).unwrap_or(0);
        Err(ConicError::Sdpa { line, msg: format!("unexpected end of input while reading {what}") })
    }

    fn done(&self) -> bool {
        self.pos >= self.items.len()
    }
}

pub fn import_sdpa(text: &str) -> Result<ConicProgram, ConicError> {
    let mut sense = Sense::Maximize;
    let mut items = Vec::new();
    let mut in_header = true;
    for (ln, raw) in text.lines().enumerate() {
        let line = ln + 1;
        let trimmed = raw.trim_start();
        if in_header && (trimmed.starts_with('*') || trimmed.starts_with('"')) {
            if trimmed.contains("sense: minimize") {
                sense = Sense::Minimize;
            }
            continue;
        }
        in_header = false;
        for tok in raw.split(|c: char| c.is_whitespace() || ",{}()".contains(c)) {
            if !tok.is_empty() {
                items.push((line, tok));
            }
        }
    }
    let mut toks = Tokens { items, pos: 0 };
    let (_, m) = toks.next_num::<usize>("number of constraints")?;
    let (_, nblocks) = toks.next_num::<usize>("number of blocks")?;
    let mut blocks = Vec::with_capacity(nblocks);
    for _ in 0..nblocks {
        let (line, s) = toks.next_num::<i64>("block size")?;
        blocks.push(match s {
            0 => return Err(ConicError::Sdpa { line, msg: "zero block size".into() }),
            s if s > 0 => BlockKind::Psd(s as usize),
            s => BlockKind::Diagonal(s.unsigned_abs() as usize),
        });
    }
    let mut rhs = Vec::with_capacity(m);
    for _ in 0..m {
        rhs.push(toks.next_num::<f64>("objective vector entry")?.1);
    }
    let mut mats = vec![BlockSparse::new(); m + 1];
    while !toks.done() {
        let (line, matno) = toks.next_num::<usize>("matrix number")?;
        let blk = toks.next_num::<usize>("block number")?.1;
        let i = toks.next_num::<usize>("row")?.1;
        let j = toks.next_num::<usize>("column")?.1;
        let v = toks.next_num::<f64>("value")?.1;
        if matno > m || blk == 0 || blk > nblocks || i == 0 || j == 0 {
            return Err(ConicError::Sdpa { line, msg: "index out of range".into() });
        }
        mats[matno].add(blk - 1, i - 1, j - 1, v);
    }
    let mut mats = mats.into_iter();
    let mut objective = mats.next().expect("F0 present");
    if sense == Sense::Minimize {
        let mut neg = BlockSparse::new();
        for e in objective.entries() {
            neg.add(e.block, e.i, e.j, -e.value);
        }
        objective = neg;
    }
    let constraints = mats.zip(rhs).map(|(a, b)| Constraint::new(a, b)).collect();
    ConicProgram::new(blocks, sense, objective, constraints)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn number_format_round_trips() {
        for v in [1.0, -2.0, 0.5, 1.0 / 3.0, 1e-7, -2.5e20, 123456.789] {
            assert_eq!(fmt_num(v).parse::<f64>().unwrap(), v, "{}", fmt_num(v));
        }
        assert_eq!(fmt_num(-3.0), "-3");
    }

    #[test]
    fn reads_decorated_headers() {
        let text = "\"comment\n1 =mDIM\n1 =nBLOCK\n(2) =bLOCKsTRUCT\n{2.0}\n0 1 1 2 1\n1 1 1 1 1\n1 1 2 2 1\n";
        let p = import_sdpa(text).unwrap();
        assert_eq!(p.blocks(), &[BlockKind::Psd(2)]);
        assert_eq!(p.rhs(), vec![2.0]);
        assert_eq!(p.sense(), Sense::Maximize);
    }

    #[test]
    fn bad_index_reports_line() {
        let text = "1\n1\n2\n1\n0 3 1 1 1\n";
        match import_sdpa(text) {
            Err(ConicError::Sdpa { line, .. }) => assert_eq!(line, 5),
            other => panic!("{other:?}"),
        }
    }
}
