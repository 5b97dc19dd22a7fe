//! Measuring disjunctness: exact enumeration, Monte Carlo estimation, the
//! pairwise relaxation and COMP decoding.
//!
//! The probability `P_A(t, N)` is taken over a uniform `t`-subset `I` of the
//! columns and a uniform probe column `j` outside `I`; the event is
//! `supp(j) ⊆ ∪_{k∈I} supp(k)`.
//!
//! Every Monte Carlo trial draws from its own ChaCha8 stream, selected by the
//! trial index under a key derived from the seed, so results do not depend on
//! how trials are spread over threads.

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use statrs::distribution::{Beta, ContinuousCDF, Normal};
use thiserror::Error;

use crate::codes::TestMatrix;
use crate::par;
use crate::rational::{binomial, Rational};
use crate::Budgets;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TestingError {
    #[error("need 1 <= t < N, got t={t} with N={n}")]
    InvalidT { t: usize, n: usize },
    #[error("{what} needs {needed} operations, budget is {budget}")]
    BudgetExceeded {
        what: &'static str,
        needed: u128,
        budget: u64,
    },
    #[error("{0}")]
    Invalid(String),
}

type Result<T> = std::result::Result<T, TestingError>;

/// The random stream used for Monte Carlo trial `trial`.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// A defective set and, for `P_A` trials, a probe column outside it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DefectiveScenario {
    /// Sorted column indices.
    pub defectives: Vec<usize>,
    pub probe: Option<usize>,
}

impl DefectiveScenario {
    pub fn new(n: usize, mut defectives: Vec<usize>, probe: Option<usize>) -> Result<Self> {
        defectives.sort_unstable();
        if defectives.windows(2).any(|w| w[0] == w[1]) {
            return Err(TestingError::Invalid("repeated defective".into()));
        }
        if defectives.iter().chain(probe.iter()).any(|&x| x >= n) {
            return Err(TestingError::Invalid(format!("column index outside 0..{n}")));
        }
        if probe.is_some_and(|p| defectives.binary_search(&p).is_ok()) {
            return Err(TestingError::Invalid("probe is one of the defectives".into()));
        }
        Ok(Self { defectives, probe })
    }

    /// Uniform `t`-subset of `0..n` and a uniform probe from its complement.
    pub fn draw(rng: &mut impl Rng, n: usize, t: usize) -> Self {
        let mut defectives = rand::seq::index::sample(rng, n, t).into_vec();
        defectives.sort_unstable();
        let mut probe = rng.random_range(0..n - t);
        for &d in &defectives {
            if d <= probe {
                probe += 1;
            }
        }
        Self {
            defectives,
            probe: Some(probe),
        }
    }
}

fn check_t(m: &TestMatrix, t: usize) -> Result<()> {
    if t == 0 || t >= m.columns() {
        return Err(TestingError::InvalidT { t, n: m.columns() });
    }
    Ok(())
}

fn binomial_u128(n: usize, k: usize) -> u128 {
    binomial(n as i64, k as i64).to_u128().unwrap_or(u128::MAX)
}

fn enumeration_cost(m: &TestMatrix, t: usize) -> u128 {
    binomial_u128(m.columns(), t)
        .saturating_mul((m.columns() - t) as u128)
        .saturating_mul(m.max_weight().max(1) as u128)
}

fn check_enumeration(m: &TestMatrix, t: usize, budgets: &Budgets) -> Result<()> {
    let needed = enumeration_cost(m, t);
    if needed > budgets.disjunct_ops as u128 {
        return Err(TestingError::BudgetExceeded {
            what: "subset enumeration",
            needed,
            budget: budgets.disjunct_ops,
        });
    }
    Ok(())
}

/// Largest `t` for which a constant-weight code of weight `w` and minimum
/// distance `d` is guaranteed `t`-disjunct.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TGuarantee {
    Finite(usize),
    /// Supports are pairwise disjoint.
    Unbounded,
}

/// `t = floor((w - 1) / (w - d/2))`.
pub fn disjunct_t_guarantee(m: usize, w: usize, d: usize) -> Result<TGuarantee> {
    if d == 0 || d % 2 == 1 || d > 2 * w || w > m {
        return Err(TestingError::Invalid(format!(
            "need even 0 < d <= 2w and w <= M, got M={m} w={w} d={d}"
        )));
    }
    let meet = w - d / 2;
    Ok(if meet == 0 {
        TGuarantee::Unbounded
    } else {
        TGuarantee::Finite((w - 1) / meet)
    })
}

/// Advances `c` to the next `k`-subset of `0..limit` in colexicographic order.
fn next_colex(c: &mut [usize], limit: usize) -> bool {
    let k = c.len();
    for i in 0..k {
        let cap = if i + 1 < k { c[i + 1] } else { limit };
        if c[i] + 1 < cap {
            c[i] += 1;
            for (l, x) in c.iter_mut().enumerate().take(i) {
                *x = l;
            }
            return true;
        }
    }
    false
}

/// Calls `visit(I, union)` for every `t`-subset `I` with maximum `top`, in
/// colex order. Stops early when `visit` returns `Some`.
fn for_subsets_with_top<T>(
    m: &TestMatrix,
    t: usize,
    top: usize,
    mut visit: impl FnMut(&[usize], &[u64]) -> Option<T>,
) -> Option<T> {
    let words = m.words();
    let mut rest: Vec<usize> = (0..t - 1).collect();
    let mut set = vec![0usize; t];
    let mut union = vec![0u64; words];
    loop {
        set[..t - 1].copy_from_slice(&rest);
        set[t - 1] = top;
        union.copy_from_slice(m.column_bits(top));
        for &k in &rest {
            union.iter_mut().zip(m.column_bits(k)).for_each(|(u, b)| *u |= b);
        }
        if let Some(r) = visit(&set, &union) {
            return Some(r);
        }
        if !next_colex(&mut rest, top) {
            return None;
        }
    }
}

/// A pair `(I, j)` with `supp(j)` inside the union over `I`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub defectives: Vec<usize>,
    pub probe: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DisjunctCheck {
    pub t: usize,
    pub disjunct: bool,
    /// The first violation with `I` in colex order and then the smallest `j`.
    pub witness: Option<Witness>,
}

/// Exhaustive `t`-disjunctness test.
pub fn is_t_disjunct(m: &TestMatrix, t: usize, budgets: &Budgets) -> Result<DisjunctCheck> {
    check_t(m, t)?;
    check_enumeration(m, t, budgets)?;
    let n = m.columns();
    let witness = par::find_first(n - (t - 1), |off| {
        let top = off + t - 1;
        for_subsets_with_top(m, t, top, |set, union| {
            (0..n)
                .filter(|j| !set.contains(j))
                .find(|&j| m.covered_by(j, union))
                .map(|j| Witness {
                    defectives: set.to_vec(),
                    probe: j,
                })
        })
    });
    Ok(DisjunctCheck {
        t,
        disjunct: witness.is_none(),
        witness,
    })
}

/// Violation and total counts behind an exact `P_A`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PaCounts {
    pub violations: BigInt,
    /// `C(N, t) (N - t)`.
    pub total: BigInt,
}

impl PaCounts {
    pub fn probability(&self) -> Rational {
        Rational::new(self.violations.clone(), self.total.clone())
    }
}

fn total_pairs(n: usize, t: usize) -> BigInt {
    binomial(n as i64, t as i64) * (n - t)
}

/// `P_A` by direct enumeration of every `(I, j)`.
pub fn exact_pa_enumerated(m: &TestMatrix, t: usize, budgets: &Budgets) -> Result<PaCounts> {
    check_t(m, t)?;
    check_enumeration(m, t, budgets)?;
    let n = m.columns();
    let h = par::histogram(n - (t - 1), 1, |off, h| {
        for_subsets_with_top(m, t, off + t - 1, |set, union| {
            h[0] += (0..n)
                .filter(|j| !set.contains(j) && m.covered_by(*j, union))
                .count() as u64;
            None::<()>
        });
    });
    Ok(PaCounts {
        violations: BigInt::from(h[0]),
        total: total_pairs(n, t),
    })
}

/// Largest column weight handled by inclusion-exclusion.
pub const INCLUSION_EXCLUSION_MAX_WEIGHT: usize = 20;

fn inclusion_exclusion_cost(m: &TestMatrix) -> u128 {
    let n = m.columns() as u128;
    let w = m.max_weight();
    n.saturating_mul(n * m.words() as u128 + (1u128 << w) * w.max(1) as u128)
}

/// Number of `t`-subsets of the other columns whose union covers column `j`:
/// `sum_{S ⊆ supp(j)} (-1)^|S| C(#{k != j : supp(k) ∩ S = ∅}, t)`.
fn covering_subsets(m: &TestMatrix, j: usize, binom_t: &[BigInt]) -> BigInt {
    let supp = m.support(j);
    let w = supp.len();
    let mut f = vec![0u64; 1 << w];
    for k in (0..m.columns()).filter(|&k| k != j) {
        let bits = m.column_bits(k);
        let mask = supp.iter().enumerate().fold(0usize, |acc, (b, &r)| {
            let r = r as usize;
            acc | ((((bits[r / 64] >> (r % 64)) & 1) as usize) << b)
        });
        f[mask] += 1;
    }
    // subset sums: f[U] = #{k : trace_k ⊆ U}
    for b in 0..w {
        for u in 0..1usize << w {
            if u & (1 << b) != 0 {
                f[u] += f[u ^ (1 << b)];
            }
        }
    }
    let full = (1usize << w) - 1;
    (0..1usize << w).fold(BigInt::zero(), |acc, s| {
        let term = &binom_t[f[full ^ s] as usize];
        if s.count_ones() % 2 == 0 {
            acc + term
        } else {
            acc - term
        }
    })
}

/// Exact `P_A(t, N)`. Uses inclusion-exclusion over each probe's support when
/// the weight allows, and enumeration of all `(I, j)` otherwise.
pub fn exact_pa(m: &TestMatrix, t: usize, budgets: &Budgets) -> Result<PaCounts> {
    check_t(m, t)?;
    let ie_cost = inclusion_exclusion_cost(m);
    if m.max_weight() > INCLUSION_EXCLUSION_MAX_WEIGHT || ie_cost > budgets.disjunct_ops as u128 {
        return exact_pa_enumerated(m, t, budgets).map_err(|e| match e {
            TestingError::BudgetExceeded { budget, .. } => TestingError::BudgetExceeded {
                what: "exact P_A",
                needed: ie_cost.min(enumeration_cost(m, t)),
                budget,
            },
            e => e,
        });
    }
    let n = m.columns();
    let binom_t: Vec<BigInt> = (0..n).map(|k| binomial(k as i64, t as i64)).collect();
    let per_column = par::map_collect(n, |j| covering_subsets(m, j, &binom_t));
    Ok(PaCounts {
        violations: per_column.into_iter().sum(),
        total: total_pairs(n, t),
    })
}

/// Probability over `(I, j)` that `|supp(j)| <= sum_{k∈I} |supp(j) ∩ supp(k)|`,
/// i.e. `w <= sum_k (w - d_jk/2)` for a constant-weight code. Covering implies
/// this event, so the value bounds `P_A` from above.
pub fn pairwise_relaxation_prob(m: &TestMatrix, t: usize, budgets: &Budgets) -> Result<PaCounts> {
    check_t(m, t)?;
    let n = m.columns();
    let needed = (n as u128).pow(2) * m.words() as u128;
    if needed > budgets.disjunct_ops as u128 {
        return Err(TestingError::BudgetExceeded {
            what: "pairwise relaxation",
            needed,
            budget: budgets.disjunct_ops,
        });
    }
    let per_column = par::map_collect(n, |j| {
        let w = m.support(j).len();
        let mut mult = vec![0usize; w + 1];
        for k in (0..n).filter(|&k| k != j) {
            mult[m.intersection(j, k)] += 1;
        }
        // dp[s][v]: ways to pick s columns with intersection sum min(v, w)
        let mut dp = vec![vec![BigInt::zero(); w + 1]; t + 1];
        dp[0][0] = BigInt::from(1);
        for (c, &mc) in mult.iter().enumerate() {
            if mc == 0 {
                continue;
            }
            let mut next = vec![vec![BigInt::zero(); w + 1]; t + 1];
            for s in 0..=t {
                for v in 0..=w {
                    if dp[s][v].is_zero() {
                        continue;
                    }
                    for a in 0..=mc.min(t - s) {
                        let nv = (v + a * c).min(w);
                        next[s + a][nv] += &dp[s][v] * binomial(mc as i64, a as i64);
                    }
                }
            }
            dp = next;
        }
        dp[t][w].clone()
    });
    Ok(PaCounts {
        violations: per_column.into_iter().sum(),
        total: total_pairs(n, t),
    })
}

/// Outcome vector: row `i` is positive iff it meets some defective support.
pub fn run_tests(m: &TestMatrix, defectives: &[usize]) -> Result<Vec<bool>> {
    if let Some(&d) = defectives.iter().find(|&&d| d >= m.columns()) {
        return Err(TestingError::Invalid(format!("defective {d} outside 0..{}", m.columns())));
    }
    let union = union_bits(m, defectives);
    Ok((0..m.rows()).map(|r| union[r / 64] >> (r % 64) & 1 == 1).collect())
}

fn union_bits(m: &TestMatrix, cols: &[usize]) -> Vec<u64> {
    let mut union = vec![0u64; m.words()];
    for &k in cols {
        union.iter_mut().zip(m.column_bits(k)).for_each(|(u, b)| *u |= b);
    }
    union
}

fn comp_decode_bits(m: &TestMatrix, outcomes: &[u64]) -> Vec<usize> {
    (0..m.columns()).filter(|&j| m.covered_by(j, outcomes)).collect()
}

/// COMP: every column all of whose tests are positive.
pub fn comp_decode(m: &TestMatrix, outcomes: &[bool]) -> Result<Vec<usize>> {
    if outcomes.len() != m.rows() {
        return Err(TestingError::Invalid(format!(
            "{} outcomes for {} tests",
            outcomes.len(),
            m.rows()
        )));
    }
    let mut bits = vec![0u64; m.words()];
    for (r, _) in outcomes.iter().enumerate().filter(|(_, &o)| o) {
        bits[r / 64] |= 1 << (r % 64);
    }
    Ok(comp_decode_bits(m, &bits))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Exact,
    MonteCarlo,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IntervalKind {
    Wilson,
    ClopperPearson,
}

/// Confidence interval for a binomial proportion.
pub fn binomial_interval(successes: u64, trials: u64, confidence: f64, kind: IntervalKind) -> Result<(f64, f64)> {
    if !(confidence > 0.0 && confidence < 1.0) {
        return Err(TestingError::Invalid(format!("confidence {confidence} outside (0, 1)")));
    }
    if trials == 0 || successes > trials {
        return Err(TestingError::Invalid("need 0 <= successes <= trials, trials > 0".into()));
    }
    let (x, n) = (successes as f64, trials as f64);
    let p = x / n;
    let alpha = 1.0 - confidence;
    let (lo, hi) = match kind {
        IntervalKind::Wilson => {
            let z = normal_quantile(1.0 - alpha / 2.0);
            let z2 = z * z;
            let denom = 1.0 + z2 / n;
            let center = (p + z2 / (2.0 * n)) / denom;
            let half = z / denom * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt();
            (center - half, center + half)
        }
        IntervalKind::ClopperPearson => {
            let lo = if successes == 0 {
                0.0
            } else {
                Beta::new(x, n - x + 1.0).unwrap().inverse_cdf(alpha / 2.0)
            };
            let hi = if successes == trials {
                1.0
            } else {
                Beta::new(x + 1.0, n - x).unwrap().inverse_cdf(1.0 - alpha / 2.0)
            };
            (lo, hi)
        }
    };
    Ok((lo.max(0.0).min(p), hi.min(1.0).max(p)))
}

fn normal_quantile(p: f64) -> f64 {
    Normal::standard().inverse_cdf(p)
}

/// Standard error of the Wilson estimate, the interval half-width over `z`.
pub fn wilson_std_error(successes: u64, trials: u64) -> f64 {
    let (x, n) = (successes as f64, trials as f64);
    let p = x / n;
    let z2 = normal_quantile(0.975).powi(2);
    (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / (1.0 + z2 / n)
}

/// Settings shared by the Monte Carlo entry points.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct McConfig {
    pub trials: u64,
    pub seed: u64,
    pub confidence: f64,
    pub interval: IntervalKind,
}

impl Default for McConfig {
    fn default() -> Self {
        Self {
            trials: 100_000,
            seed: crate::DEFAULT_SEED,
            confidence: 0.99,
            interval: IntervalKind::Wilson,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationReport {
    pub mode: Mode,
    pub t: usize,
    #[serde(rename = "N")]
    pub columns: usize,
    /// Number of `(I, j)` draws, or all `C(N,t)(N-t)` pairs in exact mode.
    pub trials: u128,
    /// Draws with `supp(j)` covered by the union over `I`.
    pub violations: u128,
    pub p_hat: f64,
    /// `P_A` as `"p/q"` in exact mode.
    pub exact: Option<String>,
    pub ci: (f64, f64),
    pub confidence: f64,
    pub interval: Option<IntervalKind>,
    pub std_error: f64,
    pub seed: Option<u64>,
    /// Decoding runs: trials by number of false positives.
    pub false_positive_histogram: Option<Vec<u64>>,
    pub total_false_positives: Option<u64>,
    /// `total_false_positives / (trials (N - t))`.
    pub per_item_fp_rate: Option<f64>,
    /// Average number of false positives per trial.
    pub mean_false_positives: Option<f64>,
    pub false_negatives: u64,
}

/// Exact `P_A` wrapped as a report.
pub fn exact_report(m: &TestMatrix, t: usize, budgets: &Budgets) -> Result<SimulationReport> {
    let counts = exact_pa(m, t, budgets)?;
    let p = counts.probability();
    let p_hat = crate::rational::to_f64(&p);
    Ok(SimulationReport {
        mode: Mode::Exact,
        t,
        columns: m.columns(),
        trials: counts.total.to_u128().unwrap_or(u128::MAX),
        violations: counts.violations.to_u128().unwrap_or(u128::MAX),
        p_hat,
        exact: Some(crate::rational::to_string(&p)),
        ci: (p_hat, p_hat),
        confidence: 1.0,
        interval: None,
        std_error: 0.0,
        seed: None,
        false_positive_histogram: None,
        total_false_positives: None,
        per_item_fp_rate: None,
        mean_false_positives: None,
        false_negatives: 0,
    })
}

/// One Monte Carlo draw, as written to the CSV dump.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub trial: u64,
    pub defectives: Vec<usize>,
    pub probe: usize,
    pub violation: bool,
    /// Decoding runs only.
    pub false_positives: Option<usize>,
    pub false_negatives: Option<usize>,
}

/// Trial `trial` of [`estimate_pa`].
pub fn pa_trial(m: &TestMatrix, t: usize, seed: u64, trial: u64) -> TrialRecord {
    let sc = DefectiveScenario::draw(&mut trial_rng(seed, trial), m.columns(), t);
    let probe = sc.probe.unwrap();
    let union = union_bits(m, &sc.defectives);
    TrialRecord {
        trial,
        violation: m.covered_by(probe, &union),
        defectives: sc.defectives,
        probe,
        false_positives: None,
        false_negatives: None,
    }
}

/// Trial `trial` of [`simulate_decoding`]; draws the same `(I, j)` as [`pa_trial`].
pub fn decoding_trial(m: &TestMatrix, t: usize, seed: u64, trial: u64) -> TrialRecord {
    let sc = DefectiveScenario::draw(&mut trial_rng(seed, trial), m.columns(), t);
    let probe = sc.probe.unwrap();
    let union = union_bits(m, &sc.defectives);
    let decoded = comp_decode_bits(m, &union);
    let found = sc
        .defectives
        .iter()
        .filter(|d| decoded.binary_search(d).is_ok())
        .count();
    TrialRecord {
        trial,
        violation: decoded.binary_search(&probe).is_ok(),
        false_positives: Some(decoded.len() - found),
        false_negatives: Some(sc.defectives.len() - found),
        defectives: sc.defectives,
        probe,
    }
}

const CHUNK: u64 = 1024;

fn run_chunks(trials: u64, bins: usize, f: impl Fn(u64, &mut [u64]) + Sync + Send) -> Vec<u64> {
    let chunks = trials.div_ceil(CHUNK) as usize;
    par::histogram(chunks, bins, |c, h| {
        let lo = c as u64 * CHUNK;
        for trial in lo..(lo + CHUNK).min(trials) {
            f(trial, h);
        }
    })
}

fn mc_report(m: &TestMatrix, t: usize, cfg: &McConfig, violations: u64) -> Result<SimulationReport> {
    let ci = binomial_interval(violations, cfg.trials, cfg.confidence, cfg.interval)?;
    Ok(SimulationReport {
        mode: Mode::MonteCarlo,
        t,
        columns: m.columns(),
        trials: cfg.trials as u128,
        violations: violations as u128,
        p_hat: violations as f64 / cfg.trials as f64,
        exact: None,
        ci,
        confidence: cfg.confidence,
        interval: Some(cfg.interval),
        std_error: wilson_std_error(violations, cfg.trials),
        seed: Some(cfg.seed),
        false_positive_histogram: None,
        total_false_positives: None,
        per_item_fp_rate: None,
        mean_false_positives: None,
        false_negatives: 0,
    })
}

fn check_mc(m: &TestMatrix, t: usize, cfg: &McConfig) -> Result<()> {
    check_t(m, t)?;
    if cfg.trials == 0 {
        return Err(TestingError::Invalid("trials must be positive".into()));
    }
    Ok(())
}

/// Monte Carlo estimate of `P_A(t, N)`.
pub fn estimate_pa(m: &TestMatrix, t: usize, cfg: &McConfig) -> Result<SimulationReport> {
    check_mc(m, t, cfg)?;
    let h = run_chunks(cfg.trials, 1, |trial, h| {
        h[0] += pa_trial(m, t, cfg.seed, trial).violation as u64;
    });
    mc_report(m, t, cfg, h[0])
}

/// COMP decoding of random `t`-sets. `violations` counts trials whose probe
/// column was wrongly declared defective.
pub fn simulate_decoding(m: &TestMatrix, t: usize, cfg: &McConfig) -> Result<SimulationReport> {
    check_mc(m, t, cfg)?;
    let n = m.columns();
    // bins: violations, false negatives, total false positives, histogram
    let h = run_chunks(cfg.trials, 3 + n - t + 1, |trial, h| {
        let r = decoding_trial(m, t, cfg.seed, trial);
        let fp = r.false_positives.unwrap();
        h[0] += r.violation as u64;
        h[1] += r.false_negatives.unwrap() as u64;
        h[2] += fp as u64;
        h[3 + fp] += 1;
    });
    let mut rep = mc_report(m, t, cfg, h[0])?;
    let mut hist = h[3..].to_vec();
    while hist.len() > 1 && hist.last() == Some(&0) {
        hist.pop();
    }
    rep.false_negatives = h[1];
    rep.total_false_positives = Some(h[2]);
    rep.per_item_fp_rate = Some(h[2] as f64 / (cfg.trials as f64 * (n - t) as f64));
    rep.mean_false_positives = Some(h[2] as f64 / cfg.trials as f64);
    rep.false_positive_histogram = Some(hist);
    Ok(rep)
}

/// CSV dump, one row per trial.
pub fn trials_csv(records: &[TrialRecord]) -> String {
    let mut out = String::from("trial,defectives,probe,violations,false_positives\n");
    for r in records {
        let d: Vec<String> = r.defectives.iter().map(usize::to_string).collect();
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            r.trial,
            d.join(";"),
            r.probe,
            r.violation as u8,
            r.false_positives.map_or(String::new(), |f| f.to_string())
        ));
    }
    out
}
