//! Distance distributions and their dual transforms.
//!
//! Everything here is exact: pair counts are integers and every derived
//! quantity is a big rational, so moment identities are checked as equalities.
//!
//! Conventions:
//!
//! * `A_i = counts_i / N` for a q-ary code, where `counts_i` is the number of
//!   ordered codeword pairs at Hamming distance `i`. The dual spectrum is
//!   normalised, `A'_j = (1/N) sum_i A_i K_j(i)`, so `A'_0 = 1` and, for a linear
//!   code, `A'` is the weight distribution of the dual code.
//! * For a constant-weight code the index is `i = w - |supp(x) & supp(y)|`,
//!   i.e. half the Hamming distance, and `b'_j = (1/N) sum_i b_i Q_j(i)`.
//! * The dual distance is the least `j >= 1` with a positive dual entry, `None`
//!   when there is none.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::codes::{ConstantWeightCode, QaryCode, TestMatrix};
use crate::par;
use crate::rational::{self, binomial, factorial, from_int, int, Rational};
use crate::Budgets;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpectraError {
    #[error("code is empty")]
    EmptyCode,
    #[error("exact spectrum of {size} codewords exceeds the budget of {budget}; use sampling")]
    BudgetExceeded { size: u64, budget: u64 },
    #[error("argument outside the scheme: {0}")]
    Domain(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HammingSpectrum {
    pub n: usize,
    pub q: usize,
    /// Code size `N`.
    pub size: u64,
    /// Ordered pair counts by distance (sampled pair counts when not exact).
    pub counts: Vec<u64>,
    /// `N^2` when exact, number of sampled pairs otherwise.
    pub total_pairs: u64,
    pub exact: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CWSpectrum {
    /// Length `M`.
    pub length: usize,
    pub weight: usize,
    pub size: u64,
    /// Ordered pair counts by `i = w - |intersection|`, `i = 0..=w`.
    pub counts: Vec<u64>,
    pub total_pairs: u64,
    pub exact: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DualSpectrum {
    pub values: Vec<Rational>,
    pub dual_distance: Option<usize>,
}

impl DualSpectrum {
    fn from_values(values: Vec<Rational>) -> Self {
        let dual_distance = values
            .iter()
            .enumerate()
            .skip(1)
            .find(|(_, v)| v.is_positive())
            .map(|(j, _)| j);
        Self {
            values,
            dual_distance,
        }
    }

    /// Whether every entry is non-negative (Delsarte).
    pub fn nonnegative(&self) -> bool {
        self.values.iter().all(|v| !v.is_negative())
    }

    /// `d' - 1`, the strength of the design formed by a constant-weight code.
    pub fn strength(&self) -> Option<usize> {
        self.dual_distance.map(|d| d - 1)
    }
}

fn distribution(counts: &[u64], size: u64, total: u64) -> Vec<Rational> {
    // A_i = N * counts_i / total; with total = N^2 this is counts_i / N
    counts
        .iter()
        .map(|&c| Rational::new(int(c as i64) * size as i64, int(total as i64)))
        .collect()
}

impl HammingSpectrum {
    pub fn distribution(&self) -> Vec<Rational> {
        distribution(&self.counts, self.size, self.total_pairs)
    }
}

impl CWSpectrum {
    pub fn distribution(&self) -> Vec<Rational> {
        distribution(&self.counts, self.size, self.total_pairs)
    }

    /// The average pairwise half-distance over all weight-`w` vectors,
    /// `w (M - w) / M`.
    pub fn vartheta(&self) -> Rational {
        Rational::new(
            int((self.weight * (self.length - self.weight)) as i64),
            int(self.length as i64),
        )
    }
}

/// Exact ordered pair counts by Hamming distance.
pub fn hamming_spectrum(code: &QaryCode, budgets: &Budgets) -> Result<HammingSpectrum, SpectraError> {
    let size = code.len() as u64;
    if size == 0 {
        return Err(SpectraError::EmptyCode);
    }
    if size > budgets.spectrum_size {
        return Err(SpectraError::BudgetExceeded {
            size,
            budget: budgets.spectrum_size,
        });
    }
    let n = code.length();
    let counts = par::histogram(code.len(), n + 1, |i, h| {
        for j in 0..code.len() {
            h[code.distance(i, j)] += 1;
        }
    });
    Ok(HammingSpectrum {
        n,
        q: code.alphabet_size(),
        size,
        counts,
        total_pairs: size * size,
        exact: true,
    })
}

fn sample_pairs(size: usize, pairs: u64, seed: u64, bins: usize, dist: impl Fn(usize, usize) -> usize + Sync + Send) -> Vec<u64> {
    const CHUNK: u64 = 4096;
    let chunks = pairs.div_ceil(CHUNK) as usize;
    par::histogram(chunks, bins, |c, h| {
        let lo = c as u64 * CHUNK;
        let hi = (lo + CHUNK).min(pairs);
        for t in lo..hi {
            let mut rng = crate::testing::trial_rng(seed, t);
            let i = rng.random_range(0..size);
            let j = rng.random_range(0..size);
            h[dist(i, j)] += 1;
        }
    })
}

/// Distance counts over `pairs` uniformly sampled ordered pairs. Marked non-exact.
pub fn hamming_spectrum_sampled(code: &QaryCode, pairs: u64, seed: u64) -> Result<HammingSpectrum, SpectraError> {
    if code.is_empty() {
        return Err(SpectraError::EmptyCode);
    }
    let n = code.length();
    let counts = sample_pairs(code.len(), pairs, seed, n + 1, |i, j| code.distance(i, j));
    Ok(HammingSpectrum {
        n,
        q: code.alphabet_size(),
        size: code.len() as u64,
        counts,
        total_pairs: pairs,
        exact: false,
    })
}

/// Exact ordered pair counts by `w - |intersection|`.
pub fn cw_spectrum(code: &ConstantWeightCode, budgets: &Budgets) -> Result<CWSpectrum, SpectraError> {
    let size = code.len() as u64;
    if size == 0 {
        return Err(SpectraError::EmptyCode);
    }
    if size > budgets.spectrum_size {
        return Err(SpectraError::BudgetExceeded {
            size,
            budget: budgets.spectrum_size,
        });
    }
    let m = TestMatrix::from_code(code.clone());
    cw_spectrum_of_matrix(&m)
}

/// Same as [`cw_spectrum`] on an already packed matrix, without a size budget.
pub fn cw_spectrum_of_matrix(m: &TestMatrix) -> Result<CWSpectrum, SpectraError> {
    let size = m.columns() as u64;
    if size == 0 {
        return Err(SpectraError::EmptyCode);
    }
    let w = m
        .weight()
        .ok_or_else(|| SpectraError::Domain("columns differ in weight".into()))?;
    let counts = par::histogram(m.columns(), w + 1, |i, h| {
        for j in 0..m.columns() {
            h[w - m.intersection(i, j)] += 1;
        }
    });
    Ok(CWSpectrum {
        length: m.rows(),
        weight: w,
        size,
        counts,
        total_pairs: size * size,
        exact: true,
    })
}

pub fn cw_spectrum_sampled(code: &ConstantWeightCode, pairs: u64, seed: u64) -> Result<CWSpectrum, SpectraError> {
    if code.is_empty() {
        return Err(SpectraError::EmptyCode);
    }
    let m = TestMatrix::from_code(code.clone());
    let w = code.weight();
    let counts = sample_pairs(m.columns(), pairs, seed, w + 1, |i, j| w - m.intersection(i, j));
    Ok(CWSpectrum {
        length: m.rows(),
        weight: w,
        size: m.columns() as u64,
        counts,
        total_pairs: pairs,
        exact: false,
    })
}

/// `K_j(i) = sum_l (-1)^l C(i,l) C(n-i, j-l) (q-1)^(j-l)`.
pub fn krawtchouk(q: usize, n: usize, j: usize, i: usize) -> BigInt {
    let (n, j, i) = (n as i64, j as i64, i as i64);
    let qm1 = int(q as i64 - 1);
    (0..=j).fold(BigInt::zero(), |acc, l| {
        let term = binomial(i, l) * binomial(n - i, j - l) * qm1.pow((j - l) as u32);
        if l % 2 == 0 {
            acc + term
        } else {
            acc - term
        }
    })
}

/// Normalised Krawtchouk transform of a Hamming spectrum.
pub fn dual_spectrum_hamming(spec: &HammingSpectrum) -> DualSpectrum {
    let denom = int(spec.total_pairs as i64);
    let values = (0..=spec.n)
        .map(|j| {
            let s = spec
                .counts
                .iter()
                .enumerate()
                .filter(|(_, &c)| c > 0)
                .fold(BigInt::zero(), |acc, (i, &c)| {
                    acc + krawtchouk(spec.q, spec.n, j, i) * c
                });
            Rational::new(s, denom.clone())
        })
        .collect();
    DualSpectrum::from_values(values)
}

fn johnson_domain(m: usize, w: usize, k: usize, i: usize) -> Result<(), SpectraError> {
    if 2 * w > m || k > w || i > w {
        return Err(SpectraError::Domain(format!(
            "need k, i <= w <= M/2, got M={m} w={w} k={k} i={i}"
        )));
    }
    Ok(())
}

/// Eberlein polynomial `E_k(i) = sum_j (-1)^j C(i,j) C(w-i,k-j) C(M-w-i,k-j)`.
pub fn eberlein(m: usize, w: usize, k: usize, i: usize) -> Result<BigInt, SpectraError> {
    johnson_domain(m, w, k, i)?;
    let (m, w, k, i) = (m as i64, w as i64, k as i64, i as i64);
    Ok((0..=k).fold(BigInt::zero(), |acc, j| {
        let term = binomial(i, j) * binomial(w - i, k - j) * binomial(m - w - i, k - j);
        if j % 2 == 0 {
            acc + term
        } else {
            acc - term
        }
    }))
}

/// Valency `v_i = C(w,i) C(M-w,i)`.
pub fn valency(m: usize, w: usize, i: usize) -> BigInt {
    binomial(w as i64, i as i64) * binomial((m - w) as i64, i as i64)
}

/// Multiplicity `mu_k = C(M,k) - C(M,k-1)`.
pub fn multiplicity(m: usize, k: usize) -> BigInt {
    binomial(m as i64, k as i64) - binomial(m as i64, k as i64 - 1)
}

/// Hahn polynomial `Q_k(i) = mu_k E_i(k) / v_i`.
pub fn hahn(m: usize, w: usize, k: usize, i: usize) -> Result<Rational, SpectraError> {
    johnson_domain(m, w, k, i)?;
    let e = eberlein(m, w, i, k)?;
    Ok(Rational::new(multiplicity(m, k) * e, valency(m, w, i)))
}

/// Hahn transform of a constant-weight spectrum. Codes with `w > M/2` are
/// transformed through their complements, which have the same index vector.
pub fn dual_spectrum_cw(spec: &CWSpectrum) -> Result<DualSpectrum, SpectraError> {
    let m = spec.length;
    let w = spec.weight.min(m - spec.weight);
    // indices above the complement weight cannot occur
    if spec.counts.iter().skip(w + 1).any(|&c| c > 0) {
        return Err(SpectraError::Domain("spectrum inconsistent with its weight".into()));
    }
    let denom = int(spec.total_pairs as i64);
    let mut values = Vec::with_capacity(w + 1);
    for j in 0..=w {
        let mut s = Rational::zero();
        for (i, &c) in spec.counts.iter().enumerate().take(w + 1) {
            if c > 0 {
                s += hahn(m, w, j, i)? * from_int(int(c as i64));
            }
        }
        values.push(s / from_int(denom.clone()));
    }
    Ok(DualSpectrum::from_values(values))
}

/// Stirling number of the second kind from `S(r,v) = (1/v!) sum_i (-1)^(v-i) C(v,i) i^r`.
pub fn stirling2(r: u32, v: u32) -> BigInt {
    if v > r {
        return BigInt::zero();
    }
    let s = (0..=v as i64).fold(BigInt::zero(), |acc, i| {
        let term = binomial(v as i64, i) * int(i).pow(r);
        if (v as i64 - i) % 2 == 0 {
            acc + term
        } else {
            acc - term
        }
    });
    s / factorial(v as u64)
}

/// Both sides of a Pless power moment identity truncated to its `A'_0` term.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlessCheck {
    pub r: u32,
    /// `sum_j j^r A_j`.
    pub lhs: Rational,
    /// `sum_v v! S(r,v) q^(k-v) (q-1)^v C(n, n-v)` with `q^k = N`.
    pub rhs: Rational,
    pub equal: bool,
}

pub fn pless_raw_moment(spec: &HammingSpectrum, r: u32) -> PlessCheck {
    let a = spec.distribution();
    let lhs = a
        .iter()
        .enumerate()
        .fold(Rational::zero(), |acc, (j, aj)| acc + aj * from_int(int(j as i64).pow(r)));
    let q = spec.q as i64;
    let n = spec.n as i64;
    let size = from_int(int(spec.size as i64));
    let rhs = (0..=r).fold(Rational::zero(), |acc, v| {
        let num = factorial(v as u64) * stirling2(r, v) * int(q - 1).pow(v) * binomial(n, n - v as i64);
        acc + &size * Rational::new(num, int(q).pow(v))
    });
    let equal = lhs == rhs;
    PlessCheck { r, lhs, rhs, equal }
}

fn theta(q: usize) -> Rational {
    Rational::new(int(q as i64 - 1), int(q as i64))
}

/// `(1/N) sum_j (j - theta n)^l A_j` with `theta = (q-1)/q`.
pub fn central_moment_hamming(spec: &HammingSpectrum, ell: u32) -> Rational {
    let center = theta(spec.q) * from_int(int(spec.n as i64));
    let size = from_int(int(spec.size as i64));
    spec.distribution()
        .iter()
        .enumerate()
        .fold(Rational::zero(), |acc, (j, aj)| {
            acc + aj * rational::pow(&(from_int(int(j as i64)) - &center), ell)
        })
        / size
}

/// `sum_j (j - theta n)^l C(n,j) theta^j (1-theta)^(n-j)`.
pub fn binomial_rhs(n: usize, q: usize, ell: u32) -> Rational {
    let th = theta(q);
    let one_m = Rational::one() - &th;
    let center = &th * from_int(int(n as i64));
    (0..=n).fold(Rational::zero(), |acc, j| {
        let w = from_int(binomial(n as i64, j as i64))
            * rational::pow(&th, j as u32)
            * rational::pow(&one_m, (n - j) as u32);
        acc + w * rational::pow(&(from_int(int(j as i64)) - &center), ell)
    })
}

/// `E (X - EX)^r` for `X` hypergeometric: intersection of a fixed and a
/// uniformly random `w`-subset of an `M`-set.
pub fn hypergeometric_central_moment(m: usize, w: usize, r: u32) -> Result<Rational, SpectraError> {
    if w > m || m == 0 {
        return Err(SpectraError::Domain(format!("need 0 <= w <= M, got M={m} w={w}")));
    }
    let (mi, wi) = (m as i64, w as i64);
    let mean = Rational::new(int(wi * wi), int(mi));
    let total = binomial(mi, wi);
    Ok((0..=wi).fold(Rational::zero(), |acc, i| {
        let p = Rational::new(binomial(wi, i) * binomial(mi - wi, wi - i), total.clone());
        acc + p * rational::pow(&(from_int(int(i)) - &mean), r)
    }))
}

/// `(1/N) sum_i (vartheta - i)^r b_i`.
pub fn cw_central_moment(spec: &CWSpectrum, r: u32) -> Rational {
    let vt = spec.vartheta();
    let size = from_int(int(spec.size as i64));
    spec.distribution()
        .iter()
        .enumerate()
        .fold(Rational::zero(), |acc, (i, bi)| {
            acc + bi * rational::pow(&(&vt - from_int(int(i as i64))), r)
        })
        / size
}

/// Mean and variance of the half-distance `Z` between two uniformly chosen codewords.
pub fn cw_mean_variance(spec: &CWSpectrum) -> (Rational, Rational) {
    let size = from_int(int(spec.size as i64));
    let b = spec.distribution();
    let mean = b
        .iter()
        .enumerate()
        .fold(Rational::zero(), |acc, (i, bi)| acc + bi * from_int(int(i as i64)))
        / &size;
    let var = b.iter().enumerate().fold(Rational::zero(), |acc, (i, bi)| {
        acc + bi * rational::pow(&(from_int(int(i as i64)) - &mean), 2)
    }) / &size;
    (mean, var)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    Equal,
    Greater,
    Less,
}

/// One row of a moment comparison: code-side value against the reference value.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MomentRow {
    pub r: u32,
    pub code: String,
    pub reference: String,
    pub relation: Relation,
    /// Whether `r < d'`, where equality is predicted.
    pub below_dual_distance: bool,
}

fn relation(a: &Rational, b: &Rational) -> Relation {
    match a.cmp(b) {
        std::cmp::Ordering::Equal => Relation::Equal,
        std::cmp::Ordering::Greater => Relation::Greater,
        std::cmp::Ordering::Less => Relation::Less,
    }
}

/// Central moments of a constant-weight spectrum against the hypergeometric ones.
pub fn cw_moment_table(spec: &CWSpectrum, dual: &DualSpectrum, rmax: u32) -> Result<Vec<MomentRow>, SpectraError> {
    (0..=rmax)
        .map(|r| {
            let a = cw_central_moment(spec, r);
            let b = hypergeometric_central_moment(spec.length, spec.weight, r)?;
            Ok(MomentRow {
                r,
                code: rational::to_string(&a),
                reference: rational::to_string(&b),
                relation: relation(&a, &b),
                below_dual_distance: dual.dual_distance.is_none_or(|d| (r as usize) < d),
            })
        })
        .collect()
}

/// Central moments of a Hamming spectrum against the binomial ones.
pub fn hamming_moment_table(spec: &HammingSpectrum, dual: &DualSpectrum, rmax: u32) -> Vec<MomentRow> {
    (0..=rmax)
        .map(|r| {
            let a = central_moment_hamming(spec, r);
            let b = binomial_rhs(spec.n, spec.q, r);
            MomentRow {
                r,
                code: rational::to_string(&a),
                reference: rational::to_string(&b),
                relation: relation(&a, &b),
                below_dual_distance: dual.dual_distance.is_none_or(|d| (r as usize) < d),
            }
        })
        .collect()
}

/// JSON-facing spectrum summary; rationals are `"p/q"` strings.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpectrumReport {
    pub scheme: String,
    /// `n` (Hamming) or `M` (Johnson).
    pub length: usize,
    /// `q` (Hamming) or `w` (Johnson).
    pub parameter: usize,
    #[serde(rename = "N")]
    pub size: u64,
    pub exact: bool,
    pub counts: Vec<u64>,
    pub distribution: Vec<String>,
    pub dual: Vec<String>,
    pub dual_distance: Option<usize>,
    pub dual_nonnegative: bool,
    pub moments: Vec<MomentRow>,
    /// Normalisation used for `distribution` and `dual`.
    pub convention: String,
}

const CONVENTION: &str =
    "distribution[i] = (ordered pairs at distance i) / N, so distribution[0] = 1; dual = N^-2 * sum_i counts[i] * eigenvalue, so dual[0] = 1";

impl SpectrumReport {
    pub fn hamming(spec: &HammingSpectrum, dual: &DualSpectrum, rmax: u32) -> Self {
        Self {
            scheme: "hamming".into(),
            length: spec.n,
            parameter: spec.q,
            size: spec.size,
            exact: spec.exact,
            counts: spec.counts.clone(),
            distribution: spec.distribution().iter().map(rational::to_string).collect(),
            dual: dual.values.iter().map(rational::to_string).collect(),
            dual_distance: dual.dual_distance,
            dual_nonnegative: dual.nonnegative(),
            moments: hamming_moment_table(spec, dual, rmax),
            convention: CONVENTION.into(),
        }
    }

    pub fn johnson(spec: &CWSpectrum, dual: &DualSpectrum, rmax: u32) -> Result<Self, SpectraError> {
        Ok(Self {
            scheme: "johnson".into(),
            length: spec.length,
            parameter: spec.weight,
            size: spec.size,
            exact: spec.exact,
            counts: spec.counts.clone(),
            distribution: spec.distribution().iter().map(rational::to_string).collect(),
            dual: dual.values.iter().map(rational::to_string).collect(),
            dual_distance: dual.dual_distance,
            dual_nonnegative: dual.nonnegative(),
            moments: cw_moment_table(spec, dual, rmax)?,
            convention: CONVENTION.into(),
        })
    }
}
