//! Code constructions that feed test matrices.
//!
//! A test matrix is stored by columns: column `j` is the support (sorted set of
//! row indices holding a one) of the `j`-th codeword of a binary constant-weight
//! code. The constructions here are
//!
//! * Reed-Solomon evaluation codes over GF(q) and the Kautz-Singleton map that
//!   turns any q-ary code into a constant-weight binary code,
//! * narrow-sense primitive binary BCH codes (parity-check form) and the
//!   constant-weight code made of all their codewords of a fixed weight,
//! * explicit block lists (designs) read from files.
//!
//! Column order is deterministic everywhere: message-lexicographic for RS,
//! support-lexicographic for subcodes, file order for designs.

use std::collections::BTreeMap;
use std::collections::HashSet;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::galois::{FieldSpec, GaloisError};
use crate::Budgets;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CodeError {
    #[error(transparent)]
    Field(#[from] GaloisError),
    #[error("invalid parameter: {0}")]
    InvalidParam(String),
    #[error("{what} needs {needed} units of work, budget is {budget}")]
    BudgetExceeded {
        what: &'static str,
        needed: u128,
        budget: u64,
    },
    #[error("invalid code: {0}")]
    Invalid(String),
}

/// An explicit q-ary code: `N` codewords of length `n` over alphabet indices `0..q`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QaryCode {
    q: usize,
    n: usize,
    symbols: Vec<u16>,
    field: Option<FieldSpec>,
}

impl QaryCode {
    /// Builds a code from explicit codewords, checking lengths, alphabet and distinctness.
    pub fn new(q: usize, n: usize, codewords: Vec<Vec<u16>>) -> Result<Self, CodeError> {
        if q < 2 || q > u16::MAX as usize + 1 {
            return Err(CodeError::InvalidParam(format!("alphabet size {q}")));
        }
        let mut seen = HashSet::with_capacity(codewords.len());
        let mut symbols = Vec::with_capacity(codewords.len() * n);
        for (i, cw) in codewords.iter().enumerate() {
            if cw.len() != n {
                return Err(CodeError::Invalid(format!(
                    "codeword {i} has length {}, expected {n}",
                    cw.len()
                )));
            }
            if let Some(s) = cw.iter().find(|&&s| s as usize >= q) {
                return Err(CodeError::Invalid(format!(
                    "codeword {i} uses symbol {s} outside alphabet of size {q}"
                )));
            }
            if !seen.insert(cw.as_slice()) {
                return Err(CodeError::Invalid(format!("codeword {i} is a duplicate")));
            }
            symbols.extend_from_slice(cw);
        }
        Ok(Self {
            q,
            n,
            symbols,
            field: None,
        })
    }

    pub fn alphabet_size(&self) -> usize {
        self.q
    }

    pub fn length(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        if self.n == 0 {
            0
        } else {
            self.symbols.len() / self.n
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn field(&self) -> Option<&FieldSpec> {
        self.field.as_ref()
    }

    pub fn codeword(&self, i: usize) -> &[u16] {
        &self.symbols[i * self.n..(i + 1) * self.n]
    }

    pub fn codewords(&self) -> impl Iterator<Item = &[u16]> {
        self.symbols.chunks_exact(self.n.max(1))
    }

    /// Hamming distance between codewords `i` and `j`.
    pub fn distance(&self, i: usize, j: usize) -> usize {
        self.codeword(i)
            .iter()
            .zip(self.codeword(j))
            .filter(|(a, b)| a != b)
            .count()
    }
}

/// Reed-Solomon code of dimension `k`: evaluations of all polynomials of degree
/// below `k` at the nonzero field elements in canonical order.
///
/// Codeword order follows the message `(m_0, ..., m_{k-1})` read as a base-q
/// number with `m_0` most significant; the polynomial is `sum m_i x^i`.
pub fn rs_code(field: &FieldSpec, k: usize, budgets: &Budgets) -> Result<QaryCode, CodeError> {
    let q = field.order();
    if k < 1 || k > q - 1 {
        return Err(CodeError::InvalidParam(format!(
            "RS dimension k={k} must lie in 1..={}",
            q - 1
        )));
    }
    let size = (q as u128).checked_pow(k as u32).unwrap_or(u128::MAX);
    if size > budgets.code_size as u128 {
        return Err(CodeError::BudgetExceeded {
            what: "Reed-Solomon enumeration",
            needed: size,
            budget: budgets.code_size,
        });
    }
    let n = q - 1;
    let size = size as usize;
    let tables = field.tables();
    // powers[pt][i] = pt^i for evaluation point index pt in 1..q
    let powers: Vec<Vec<u32>> = (1..q as u32)
        .map(|pt| {
            let mut row = Vec::with_capacity(k);
            let mut acc = 1u32;
            for _ in 0..k {
                row.push(acc);
                acc = tables.mul(acc, pt);
            }
            row
        })
        .collect();
    let mut symbols = Vec::with_capacity(size * n);
    let mut message = vec![0u32; k];
    for idx in 0..size {
        let mut rest = idx;
        for slot in message.iter_mut().rev() {
            *slot = (rest % q) as u32;
            rest /= q;
        }
        for pw in &powers {
            let v = message
                .iter()
                .zip(pw)
                .fold(0u32, |acc, (&m, &x)| tables.add(acc, tables.mul(m, x)));
            symbols.push(v as u16);
        }
    }
    Ok(QaryCode {
        q,
        n,
        symbols,
        field: Some(field.clone()),
    })
}

/// Binary linear code given by a full-rank parity-check matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryLinearCode {
    n: usize,
    /// Rows of the reduced parity-check matrix as bitsets over the `n` coordinates.
    rows: Vec<Vec<u64>>,
}

fn words_for(bits: usize) -> usize {
    bits.div_ceil(64)
}

#[inline]
fn get_bit(v: &[u64], i: usize) -> bool {
    v[i / 64] >> (i % 64) & 1 == 1
}

#[inline]
fn set_bit(v: &mut [u64], i: usize) {
    v[i / 64] |= 1 << (i % 64);
}

/// Row-reduces a GF(2) matrix and drops zero rows.
fn row_reduce(mut rows: Vec<Vec<u64>>, n: usize) -> Vec<Vec<u64>> {
    let mut rank = 0;
    for col in 0..n {
        let Some(pivot) = (rank..rows.len()).find(|&r| get_bit(&rows[r], col)) else {
            continue;
        };
        rows.swap(rank, pivot);
        let pivot_row = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && get_bit(row, col) {
                row.iter_mut().zip(&pivot_row).for_each(|(a, b)| *a ^= b);
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rows.truncate(rank);
    rows
}

impl BinaryLinearCode {
    pub fn from_parity_rows(n: usize, rows: Vec<Vec<bool>>) -> Result<Self, CodeError> {
        let mut packed = Vec::with_capacity(rows.len());
        for row in rows {
            if row.len() != n {
                return Err(CodeError::Invalid(format!(
                    "parity row of length {}, expected {n}",
                    row.len()
                )));
            }
            let mut bits = vec![0u64; words_for(n)];
            row.iter()
                .enumerate()
                .filter(|(_, &b)| b)
                .for_each(|(i, _)| set_bit(&mut bits, i));
            packed.push(bits);
        }
        Ok(Self {
            n,
            rows: row_reduce(packed, n),
        })
    }

    pub fn length(&self) -> usize {
        self.n
    }

    /// Number of independent parity checks, `n - k`.
    pub fn redundancy(&self) -> usize {
        self.rows.len()
    }

    pub fn dimension(&self) -> usize {
        self.n - self.rows.len()
    }

    pub fn parity_row(&self, r: usize) -> Vec<bool> {
        (0..self.n).map(|i| get_bit(&self.rows[r], i)).collect()
    }

    /// Syndrome column of coordinate `i` packed as bits over the parity rows.
    fn column_syndrome(&self, i: usize) -> Vec<u64> {
        let mut s = vec![0u64; words_for(self.rows.len()).max(1)];
        for (r, row) in self.rows.iter().enumerate() {
            if get_bit(row, i) {
                set_bit(&mut s, r);
            }
        }
        s
    }

    /// Whether the binary vector with the given support satisfies every check.
    pub fn contains_support(&self, support: &[usize]) -> bool {
        self.rows.iter().all(|row| {
            support.iter().filter(|&&i| get_bit(row, i)).count() % 2 == 0
        })
    }
}

/// Narrow-sense primitive binary BCH code of length `2^m - 1` with zeros
/// `alpha, alpha^2, ..., alpha^(delta-1)`, where `alpha` is the primitive element
/// of GF(2^m) with the smallest canonical index.
pub fn bch_code(m: u32, delta: usize) -> Result<BinaryLinearCode, CodeError> {
    if !(2..=16).contains(&m) {
        return Err(CodeError::InvalidParam(format!(
            "BCH exponent m={m} must lie in 2..=16"
        )));
    }
    let field = FieldSpec::new(2, m)?;
    let n = field.order() - 1;
    if delta < 2 || delta > n {
        return Err(CodeError::InvalidParam(format!(
            "designed distance {delta} must lie in 2..={n}"
        )));
    }
    let alpha = field.primitive_element();
    let mut rows = Vec::new();
    for i in 1..delta {
        let step = field.pow_unchecked(&alpha, i as u64);
        let mut block = vec![vec![0u64; words_for(n)]; m as usize];
        let mut acc = field.one();
        for j in 0..n {
            for (b, row) in block.iter_mut().enumerate() {
                if acc.coeffs()[b] == 1 {
                    set_bit(row, j);
                }
            }
            acc = field.mul_unchecked(&acc, &step);
        }
        rows.extend(block);
    }
    Ok(BinaryLinearCode {
        n,
        rows: row_reduce(rows, n),
    })
}

/// Binary constant-weight code stored as column supports over `0..length`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstantWeightCode {
    length: usize,
    weight: usize,
    columns: Vec<Vec<u32>>,
}

impl ConstantWeightCode {
    /// Validates and wraps supports. Each support is sorted on the way in.
    pub fn new(length: usize, weight: usize, columns: Vec<Vec<u32>>) -> Result<Self, CodeError> {
        let mut seen = HashSet::with_capacity(columns.len());
        let mut sorted = Vec::with_capacity(columns.len());
        for (j, mut col) in columns.into_iter().enumerate() {
            col.sort_unstable();
            if col.len() != weight {
                return Err(CodeError::Invalid(format!(
                    "column {j} has weight {}, expected {weight}",
                    col.len()
                )));
            }
            if col.windows(2).any(|p| p[0] == p[1]) {
                return Err(CodeError::Invalid(format!("column {j} repeats a point")));
            }
            if let Some(&x) = col.iter().find(|&&x| x as usize >= length) {
                return Err(CodeError::Invalid(format!(
                    "column {j} uses point {x} outside 0..{length}"
                )));
            }
            if !seen.insert(col.clone()) {
                return Err(CodeError::Invalid(format!("column {j} is a duplicate")));
            }
            sorted.push(col);
        }
        Ok(Self {
            length,
            weight,
            columns: sorted,
        })
    }

    /// Number of rows `M`.
    pub fn length(&self) -> usize {
        self.length
    }

    pub fn weight(&self) -> usize {
        self.weight
    }

    /// Number of columns `N`.
    pub fn len(&self) -> usize {
        self.columns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.columns.is_empty()
    }

    pub fn columns(&self) -> &[Vec<u32>] {
        &self.columns
    }

    pub fn column(&self, j: usize) -> &[u32] {
        &self.columns[j]
    }

    /// Smallest pairwise Hamming distance, `None` for fewer than two columns.
    pub fn min_distance(&self) -> Option<usize> {
        TestMatrix::from_code(self.clone()).min_distance()
    }

    /// Canonical text form: header `M N w`, then one sorted support per line.
    pub fn canonical_text(&self) -> String {
        let mut out = format!("{} {} {}\n", self.length, self.len(), self.weight);
        for col in &self.columns {
            let line: Vec<String> = col.iter().map(u32::to_string).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        out
    }

    /// SHA-256 of [`Self::canonical_text`], hex encoded.
    pub fn digest(&self) -> String {
        hex::encode(Sha256::digest(self.canonical_text().as_bytes()))
    }
}

/// Where a matrix came from.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub family: String,
    pub params: BTreeMap<String, String>,
    pub digest: String,
}

/// An `M x N` binary test matrix stored as column supports, with each column
/// also packed into fixed-width bit blocks for containment tests. Columns
/// usually share one weight (a constant-weight code) but need not.
#[derive(Debug, Clone)]
pub struct TestMatrix {
    rows: usize,
    supports: Vec<Vec<u32>>,
    weight: Option<usize>,
    provenance: Provenance,
    words: usize,
    bits: Vec<u64>,
}

impl TestMatrix {
    pub fn from_code(code: ConstantWeightCode) -> Self {
        Self::with_provenance(code, "explicit", BTreeMap::new())
    }

    pub fn with_provenance(
        code: ConstantWeightCode,
        family: &str,
        params: BTreeMap<String, String>,
    ) -> Self {
        let provenance = Provenance {
            family: family.to_string(),
            params,
            digest: code.digest(),
        };
        Self::pack(code.length, code.columns, Some(code.weight), provenance)
    }

    /// A general matrix; supports may differ in weight and repeat.
    pub fn from_supports(rows: usize, supports: Vec<Vec<u32>>) -> Result<Self, CodeError> {
        let mut cols = Vec::with_capacity(supports.len());
        for (j, mut col) in supports.into_iter().enumerate() {
            col.sort_unstable();
            col.dedup();
            if let Some(&x) = col.iter().find(|&&x| x as usize >= rows) {
                return Err(CodeError::Invalid(format!(
                    "column {j} uses row {x} outside 0..{rows}"
                )));
            }
            cols.push(col);
        }
        let weight = match cols.first() {
            Some(c) if cols.iter().all(|d| d.len() == c.len()) => Some(c.len()),
            None => Some(0),
            _ => None,
        };
        let mut text = format!("{rows} {}\n", cols.len());
        for c in &cols {
            let line: Vec<String> = c.iter().map(u32::to_string).collect();
            text.push_str(&line.join(" "));
            text.push('\n');
        }
        let provenance = Provenance {
            family: "explicit".into(),
            params: BTreeMap::new(),
            digest: hex::encode(Sha256::digest(text.as_bytes())),
        };
        Ok(Self::pack(rows, cols, weight, provenance))
    }

    fn pack(rows: usize, supports: Vec<Vec<u32>>, weight: Option<usize>, provenance: Provenance) -> Self {
        let words = words_for(rows).max(1);
        let mut bits = vec![0u64; words * supports.len()];
        for (j, col) in supports.iter().enumerate() {
            let block = &mut bits[j * words..(j + 1) * words];
            col.iter().for_each(|&r| set_bit(block, r as usize));
        }
        Self {
            rows,
            supports,
            weight,
            provenance,
            words,
            bits,
        }
    }

    /// The constant-weight code formed by the columns, if they share a weight
    /// and are distinct.
    pub fn code(&self) -> Option<ConstantWeightCode> {
        ConstantWeightCode::new(self.rows, self.weight?, self.supports.clone()).ok()
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn columns(&self) -> usize {
        self.supports.len()
    }

    /// Common column weight, `None` when weights differ.
    pub fn weight(&self) -> Option<usize> {
        self.weight
    }

    pub fn max_weight(&self) -> usize {
        self.supports.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn support(&self, j: usize) -> &[u32] {
        &self.supports[j]
    }

    /// Number of `u64` words per packed column.
    pub fn words(&self) -> usize {
        self.words
    }

    #[inline]
    pub fn column_bits(&self, j: usize) -> &[u64] {
        &self.bits[j * self.words..(j + 1) * self.words]
    }

    #[inline]
    pub fn intersection(&self, i: usize, j: usize) -> usize {
        self.column_bits(i)
            .iter()
            .zip(self.column_bits(j))
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    /// Whether column `j` lies inside the packed row set `cover`.
    #[inline]
    pub fn covered_by(&self, j: usize, cover: &[u64]) -> bool {
        self.column_bits(j)
            .iter()
            .zip(cover)
            .all(|(c, u)| c & !u == 0)
    }

    /// Smallest pairwise Hamming distance, `None` for fewer than two columns.
    pub fn min_distance(&self) -> Option<usize> {
        let n = self.columns();
        (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .map(|(i, j)| self.supports[i].len() + self.supports[j].len() - 2 * self.intersection(i, j))
            .min()
    }

    /// The dense 0/1 matrix, row-major.
    pub fn dense(&self) -> Vec<Vec<u8>> {
        let mut out = vec![vec![0u8; self.columns()]; self.rows()];
        for (j, col) in self.supports.iter().enumerate() {
            for &r in col {
                out[r as usize][j] = 1;
            }
        }
        out
    }
}

/// Kautz-Singleton map: symbol `a` at position `i` becomes a one in row `i*q + a`.
pub fn kautz_singleton(code: &QaryCode) -> Result<TestMatrix, CodeError> {
    if code.is_empty() {
        return Err(CodeError::InvalidParam("Kautz-Singleton of an empty code".into()));
    }
    let q = code.q;
    let columns = code
        .codewords()
        .map(|cw| {
            cw.iter()
                .enumerate()
                .map(|(i, &a)| (i * q + a as usize) as u32)
                .collect()
        })
        .collect();
    let cw = ConstantWeightCode::new(q * code.n, code.n, columns)?;
    let mut params = BTreeMap::new();
    params.insert("q".into(), q.to_string());
    params.insert("n".into(), code.n.to_string());
    params.insert("N".into(), code.len().to_string());
    Ok(TestMatrix::with_provenance(cw, "kautz-singleton", params))
}

fn binomial_u128(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.saturating_mul((n - i) as u128) / (i as u128 + 1);
    }
    acc
}

/// All weight-`w` codewords of a binary linear code as column supports, in
/// lexicographic order. Returns an empty code when none exist.
pub fn fixed_weight_subcode(
    code: &BinaryLinearCode,
    w: usize,
    budgets: &Budgets,
) -> Result<ConstantWeightCode, CodeError> {
    let n = code.n;
    if w == 0 || w > n {
        return Err(CodeError::InvalidParam(format!("weight {w} outside 1..={n}")));
    }
    let needed = binomial_u128(n, w);
    if needed > budgets.subcode as u128 {
        return Err(CodeError::BudgetExceeded {
            what: "fixed-weight enumeration",
            needed,
            budget: budgets.subcode,
        });
    }
    let syndromes: Vec<Vec<u64>> = (0..n).map(|i| code.column_syndrome(i)).collect();
    let sw = syndromes[0].len();
    // stack[d] = syndrome of the first d chosen coordinates
    let mut stack = vec![vec![0u64; sw]; w + 1];
    let mut chosen = Vec::with_capacity(w);
    let mut out = Vec::new();
    fn walk(
        start: usize,
        n: usize,
        w: usize,
        syndromes: &[Vec<u64>],
        stack: &mut [Vec<u64>],
        chosen: &mut Vec<u32>,
        out: &mut Vec<Vec<u32>>,
    ) {
        let depth = chosen.len();
        if depth == w {
            if stack[depth].iter().all(|&x| x == 0) {
                out.push(chosen.clone());
            }
            return;
        }
        for i in start..=n - (w - depth) {
            let (lo, hi) = stack.split_at_mut(depth + 1);
            hi[0]
                .iter_mut()
                .zip(&lo[depth])
                .zip(&syndromes[i])
                .for_each(|((d, a), b)| *d = a ^ b);
            chosen.push(i as u32);
            walk(i + 1, n, w, syndromes, stack, chosen, out);
            chosen.pop();
        }
    }
    walk(0, n, w, &syndromes, &mut stack, &mut chosen, &mut out);
    ConstantWeightCode::new(n, w, out)
}

/// Wraps an external block list as a constant-weight code. Strength is not
/// assumed; measure it with the Hahn transform.
pub fn load_design(points: usize, blocks: Vec<Vec<u32>>) -> Result<ConstantWeightCode, CodeError> {
    let w = blocks.first().map_or(0, Vec::len);
    if let Some((i, b)) = blocks.iter().enumerate().find(|(_, b)| b.len() != w) {
        return Err(CodeError::Invalid(format!(
            "block {i} has {} points, block 0 has {w}",
            b.len()
        )));
    }
    ConstantWeightCode::new(points, w, blocks)
}
