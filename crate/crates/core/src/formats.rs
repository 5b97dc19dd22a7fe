//! Plain-text file formats.
//!
//! * Block (design) file: optional header `M N w`, then one block per line as
//!   space-separated 0-based point indices.
//! * Matrix file: header `M N w`, then `N` lines each holding a sorted support.
//! * Code file: header `q n N`, then `N` lines of space-separated alphabet indices.
//!
//! Blank lines and lines starting with `#` are ignored on input.

use thiserror::Error;

use crate::codes::{load_design, CodeError, ConstantWeightCode, QaryCode};

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("header says {expected} entries, found {found}")]
    Count { expected: usize, found: usize },
    #[error(transparent)]
    Code(#[from] CodeError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn parse_numbers<T: std::str::FromStr>(line: usize, s: &str) -> Result<Vec<T>, FormatError> {
    s.split_whitespace()
        .map(|tok| {
            tok.parse().map_err(|_| FormatError::Parse {
                line,
                msg: format!("not a non-negative integer: {tok:?}"),
            })
        })
        .collect()
}

fn header3(line: usize, s: &str) -> Result<[usize; 3], FormatError> {
    let v: Vec<usize> = parse_numbers(line, s)?;
    <[usize; 3]>::try_from(v).map_err(|v| FormatError::Parse {
        line,
        msg: format!("header needs 3 numbers, got {}", v.len()),
    })
}

/// Parses a block file.
///
/// A first line of three numbers is read as the `M N w` header only when the
/// rest of the file is consistent with it (exactly `N` blocks of size `w`);
/// otherwise it is the first block and `M` is the largest point plus one.
pub fn parse_blocks(text: &str) -> Result<ConstantWeightCode, FormatError> {
    let mut rows = Vec::new();
    for (line, s) in content_lines(text) {
        rows.push((line, parse_numbers::<u32>(line, s)?));
    }
    let header = match rows.first() {
        Some((_, first)) if first.len() == 3 => {
            let (m, n, w) = (first[0] as usize, first[1] as usize, first[2] as usize);
            let rest = &rows[1..];
            let fits = rest.len() == n
                && rest.iter().all(|(_, b)| b.len() == w)
                && rest.iter().flat_map(|(_, b)| b).all(|&x| (x as usize) < m);
            fits.then_some(m)
        }
        _ => None,
    };
    let (points, blocks) = match header {
        Some(m) => (m, rows.into_iter().skip(1).map(|(_, b)| b).collect::<Vec<_>>()),
        None => {
            let m = rows
                .iter()
                .flat_map(|(_, b)| b)
                .max()
                .map_or(0, |&x| x as usize + 1);
            (m, rows.into_iter().map(|(_, b)| b).collect())
        }
    };
    Ok(load_design(points, blocks)?)
}

/// Parses a matrix file (header required).
pub fn parse_matrix(text: &str) -> Result<ConstantWeightCode, FormatError> {
    let mut lines = content_lines(text);
    let (hl, hs) = lines.next().ok_or(FormatError::Parse {
        line: 1,
        msg: "missing header".into(),
    })?;
    let [m, n, w] = header3(hl, hs)?;
    let mut cols = Vec::with_capacity(n);
    for (line, s) in lines {
        let col: Vec<u32> = parse_numbers(line, s)?;
        if col.windows(2).any(|p| p[0] >= p[1]) {
            return Err(FormatError::Parse {
                line,
                msg: "support is not strictly increasing".into(),
            });
        }
        cols.push(col);
    }
    if cols.len() != n {
        return Err(FormatError::Count {
            expected: n,
            found: cols.len(),
        });
    }
    Ok(ConstantWeightCode::new(m, w, cols)?)
}

pub fn write_matrix(code: &ConstantWeightCode) -> String {
    code.canonical_text()
}

pub fn parse_code(text: &str) -> Result<QaryCode, FormatError> {
    let mut lines = content_lines(text);
    let (hl, hs) = lines.next().ok_or(FormatError::Parse {
        line: 1,
        msg: "missing header".into(),
    })?;
    let [q, n, count] = header3(hl, hs)?;
    let mut words = Vec::with_capacity(count);
    for (line, s) in lines {
        words.push(parse_numbers::<u16>(line, s)?);
    }
    if words.len() != count {
        return Err(FormatError::Count {
            expected: count,
            found: words.len(),
        });
    }
    Ok(QaryCode::new(q, n, words)?)
}

pub fn write_code(code: &QaryCode) -> String {
    let mut out = format!("{} {} {}\n", code.alphabet_size(), code.length(), code.len());
    for cw in code.codewords() {
        let line: Vec<String> = cw.iter().map(u16::to_string).collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
    out
}
