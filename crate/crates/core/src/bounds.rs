//! Upper bounds on the false-positive probability of code-based testing matrices.
//!
//! All ε values are computed as natural logarithms first and exponentiated at
//! the end; `(18 l t)^(l/2)` alone overflows a double for moderate `l t`.
//! Failing a precondition yields a report without ε rather than an error;
//! malformed input (odd `l`, zero parameters) is an error.

use std::collections::BTreeMap;
use std::f64::consts::E;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::galois::prime_power;
use crate::rational::{self, binomial, int, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BoundError {
    #[error("invalid parameter: {0}")]
    InvalidParam(String),
    #[error("missing parameter `{0}` for this family")]
    Missing(&'static str),
    #[error("no admissible even l below d' = {0}")]
    NoAdmissibleEll(u64),
}

type Result<T> = std::result::Result<T, BoundError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    /// Kautz-Singleton image of a q-ary code, `B(l,t)` factor.
    Nonbinary,
    /// Constant-weight code, `B(l,t) = min` of the two factors below.
    Cw,
    /// Constant-weight code, Minkowski factor `t^l`.
    CwMinkowski,
    /// Constant-weight code, Marcinkiewicz-Zygmund factor `(18 l t)^(l/2)`.
    CwMz,
    CwRosenthal,
    /// Variance bound, `l = 2` only.
    CwL2,
    /// Reed-Solomon asymptotic display.
    RsAsymptotic,
}

impl Family {
    pub const ALL: [Family; 7] = [
        Family::Nonbinary,
        Family::Cw,
        Family::CwMinkowski,
        Family::CwMz,
        Family::CwRosenthal,
        Family::CwL2,
        Family::RsAsymptotic,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::Nonbinary => "nonbinary",
            Family::Cw => "cw",
            Family::CwMinkowski => "cw_minkowski",
            Family::CwMz => "cw_mz",
            Family::CwRosenthal => "cw_rosenthal",
            Family::CwL2 => "cw_l2",
            Family::RsAsymptotic => "rs_asymptotic",
        }
    }

    pub fn from_name(s: &str) -> Option<Family> {
        Family::ALL.into_iter().find(|f| f.name() == s)
    }
}

/// A named condition. Required conditions gate ε; the others are advisory.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub holds: bool,
    pub required: bool,
}

impl Check {
    fn required(name: &str, holds: bool) -> Self {
        Self {
            name: name.into(),
            holds,
            required: true,
        }
    }

    fn advisory(name: &str, holds: bool) -> Self {
        Self {
            name: name.into(),
            holds,
            required: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub formula_id: String,
    /// `exp(log_epsilon)`; may exceed 1 (see `trivial`) or be `inf`.
    pub epsilon: Option<f64>,
    pub log_epsilon: Option<f64>,
    /// Exact value as `"p/q"` when the formula is rational.
    pub epsilon_exact: Option<String>,
    pub trivial: bool,
    pub preconditions_met: bool,
    pub conditions: Vec<Check>,
    pub inputs: BTreeMap<String, u64>,
    pub notes: Vec<String>,
}

impl BoundReport {
    fn new(formula_id: &str, inputs: &[(&str, u64)], conditions: Vec<Check>) -> Self {
        let preconditions_met = conditions.iter().all(|c| c.holds || !c.required);
        Self {
            formula_id: formula_id.into(),
            epsilon: None,
            log_epsilon: None,
            epsilon_exact: None,
            trivial: false,
            preconditions_met,
            conditions,
            inputs: inputs.iter().map(|&(k, v)| (k.to_string(), v)).collect(),
            notes: Vec::new(),
        }
    }

    /// Fills in ε from its logarithm when every required condition holds.
    fn with_log(mut self, log_eps: impl FnOnce() -> f64) -> Self {
        if self.preconditions_met {
            let l = log_eps();
            let e = l.exp();
            self.log_epsilon = Some(l);
            self.epsilon = Some(e);
            self.trivial = e >= 1.0;
        }
        self
    }
}

fn check_ell(ell: u64) -> Result<()> {
    if ell < 2 || ell % 2 == 1 {
        return Err(BoundError::InvalidParam(format!("l must be even and >= 2, got {ell}")));
    }
    Ok(())
}

fn positive(name: &str, v: u64) -> Result<()> {
    if v == 0 {
        return Err(BoundError::InvalidParam(format!("{name} must be positive")));
    }
    Ok(())
}

fn ln(x: u64) -> f64 {
    (x as f64).ln()
}

/// `ln sum_{i=0}^{k} x^i` for `x > 0`.
fn log_geometric(log_x: f64, k: u64) -> f64 {
    let terms: Vec<f64> = (0..=k).map(|i| i as f64 * log_x).collect();
    let max = terms.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    max + terms.iter().map(|t| (t - max).exp()).sum::<f64>().ln()
}

/// `ln B(l, t)`.
pub fn log_b_factor(ell: u64, t: u64) -> f64 {
    let mz = ell as f64 / 2.0 * (18.0 * ell as f64 * t as f64).ln();
    let mink = ell as f64 * ln(t);
    mz.min(mink)
}

/// `B(l,t) = min{(18 l t)^(l/2), t^l}`.
pub fn b_factor(ell: u64, t: u64) -> Result<f64> {
    check_ell(ell)?;
    positive("t", t)?;
    Ok(log_b_factor(ell, t).exp())
}

/// Kautz-Singleton image of a q-ary code of length `n` and dual distance `> l`.
pub fn eps_nonbinary(q: u64, n: u64, t: u64, ell: u64) -> Result<BoundReport> {
    check_ell(ell)?;
    positive("q", q)?;
    positive("n", n)?;
    positive("t", t)?;
    if t > q {
        return Err(BoundError::InvalidParam(format!("need t <= q, got t={t} q={q}")));
    }
    let conditions = vec![Check::required("t < q", t < q)];
    let inputs = [("q", q), ("n", n), ("t", t), ("ell", ell)];
    Ok(BoundReport::new("nonbinary", &inputs, conditions).with_log(|| {
        let (qf, nf, lf) = (q as f64, n as f64, ell as f64);
        let base = E * lf * (qf - 1.0) / (2.0 * nf * ((q - t) as f64).powi(2));
        let x = (qf - 1.0) * lf / (2.0 * nf * E);
        log_b_factor(ell, t) + lf / 2.0 * base.ln() + log_geometric(x.ln(), ell / 2)
    }))
}

fn cw_conditions(m: u64, w: u64, t: u64) -> Vec<Check> {
    vec![
        Check::required("w < M/2", 2 * w < m),
        Check::required("t < M/w", t * w < m),
    ]
}

fn cw_validate(m: u64, w: u64, t: u64) -> Result<()> {
    positive("M", m)?;
    positive("w", w)?;
    positive("t", t)?;
    if w > m {
        return Err(BoundError::InvalidParam(format!("need w <= M, got w={w} M={m}")));
    }
    Ok(())
}

fn log_cw_moment_part(m: u64, w: u64, t: u64, ell: u64) -> f64 {
    let (mf, wf, lf) = (m as f64, w as f64, ell as f64);
    let base = E * lf * (mf - wf) / (2.0 * ((m - t * w) as f64).powi(2));
    let x = (mf - wf) * lf / (2.0 * E * wf * wf);
    lf / 2.0 * base.ln() + log_geometric(x.ln(), ell / 2)
}

fn eps_cw_factor(id: &str, m: u64, w: u64, t: u64, ell: u64, log_factor: fn(u64, u64) -> f64) -> Result<BoundReport> {
    check_ell(ell)?;
    cw_validate(m, w, t)?;
    let inputs = [("M", m), ("w", w), ("t", t), ("ell", ell)];
    Ok(BoundReport::new(id, &inputs, cw_conditions(m, w, t))
        .with_log(|| log_factor(ell, t) + log_cw_moment_part(m, w, t, ell)))
}

/// Constant-weight code of length `M`, weight `w`, dual distance `> l`.
pub fn eps_cw(m: u64, w: u64, t: u64, ell: u64) -> Result<BoundReport> {
    eps_cw_factor("cw", m, w, t, ell, log_b_factor)
}

pub fn eps_cw_minkowski(m: u64, w: u64, t: u64, ell: u64) -> Result<BoundReport> {
    eps_cw_factor("cw_minkowski", m, w, t, ell, |ell, t| ell as f64 * ln(t))
}

pub fn eps_cw_mz(m: u64, w: u64, t: u64, ell: u64) -> Result<BoundReport> {
    eps_cw_factor("cw_mz", m, w, t, ell, |ell, t| {
        ell as f64 / 2.0 * (18.0 * ell as f64 * t as f64).ln()
    })
}

/// Rosenthal-type bound `t (2 l^2 (M-w) / (ln l * w (M - t w)))^l`.
pub fn eps_cw_rosenthal(m: u64, w: u64, t: u64, ell: u64) -> Result<BoundReport> {
    check_ell(ell)?;
    cw_validate(m, w, t)?;
    let (mf, wf, lf) = (m as f64, w as f64, ell as f64);
    let mut conditions = cw_conditions(m, w, t);
    conditions.push(Check::required(
        "M >= 4w^2t/l^2",
        m as u128 * (ell as u128).pow(2) >= 4 * (w as u128).pow(2) * t as u128,
    ));
    conditions.push(Check::required("M >= w + 2ew^2/l", mf >= wf + 2.0 * E * wf * wf / lf));
    let inputs = [("M", m), ("w", w), ("t", t), ("ell", ell)];
    Ok(BoundReport::new("cw_rosenthal", &inputs, conditions).with_log(|| {
        let base = 2.0 * lf * lf * (mf - wf) / (lf.ln() * wf * (m - t * w) as f64);
        ln(t) + lf * base.ln()
    }))
}

/// Exact `t (M-w)^2 / ((M-1)(M-wt)^2)`; `None` unless `wt < M` and `M >= 2`.
pub fn eps_cw_l2_exact(m: u64, w: u64, t: u64) -> Option<Rational> {
    if t * w >= m || m < 2 || w > m {
        return None;
    }
    let (mi, wi, ti) = (m as i64, w as i64, t as i64);
    Some(Rational::new(
        int(ti) * int(mi - wi).pow(2),
        int(mi - 1) * int(mi - wi * ti).pow(2),
    ))
}

/// Variance bound for `l = 2`.
pub fn eps_cw_l2(m: u64, w: u64, t: u64) -> Result<BoundReport> {
    cw_validate(m, w, t)?;
    let conditions = vec![Check::required("wt < M", t * w < m), Check::required("M >= 2", m >= 2)];
    let inputs = [("M", m), ("w", w), ("t", t)];
    let mut rep = BoundReport::new("cw_l2", &inputs, conditions).with_log(|| {
        let (mf, wf) = (m as f64, w as f64);
        ln(t) + 2.0 * (mf - wf).ln() - (mf - 1.0).ln() - 2.0 * ((m - w * t) as f64).ln()
    });
    rep.epsilon_exact = eps_cw_l2_exact(m, w, t).map(|r| rational::to_string(&r));
    Ok(rep)
}

/// RS constant used by the asymptotic display.
pub const RS_CONSTANT: f64 = 2.13;

fn log_eps_rs(q: f64, t: f64, ell: f64) -> f64 {
    (ell / (2.0 * E)).ln() + ell * (RS_CONSTANT * ell.powf(1.5) * t.sqrt() / (q - t)).ln()
}

/// `q` at which the base of the RS display equals one.
pub fn rs_threshold(t: u64, ell: u64) -> f64 {
    RS_CONSTANT * (ell as f64).powf(1.5) * (t as f64).sqrt() + t as f64
}

/// `(l/2e) (2.13 l^(3/2) sqrt(t) / (q-t))^l` for RS codes over GF(q).
pub fn eps_rs(q: u64, t: u64, ell: u64) -> Result<BoundReport> {
    check_ell(ell)?;
    positive("q", q)?;
    positive("t", t)?;
    let conditions = vec![
        Check::required("q > t", q > t),
        Check::advisory("q > 2.13 l^(3/2) sqrt(t) + t", q as f64 > rs_threshold(t, ell)),
    ];
    let inputs = [("q", q), ("t", t), ("ell", ell)];
    let mut rep = BoundReport::new("rs_asymptotic", &inputs, conditions)
        .with_log(|| log_eps_rs(q as f64, t as f64, ell as f64));
    rep.notes.push("asymptotic display".into());
    Ok(rep)
}

/// Moment bound on a standardised binomial and its exact value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MuReport {
    pub n: u64,
    pub p: f64,
    pub r: u32,
    /// `(ner)^r sum_{i=0}^r (pr/((1-p)ne))^i`.
    pub bound: f64,
    /// Exact `mu_n(2r)` at the exact rational value of `p`.
    pub exact: f64,
    pub exact_rational: String,
    /// `(ner)^r / (1 - 1/e)`, present when `p/(1-p) <= n/r`.
    pub simplified: Option<f64>,
}

/// `mu_n(2r) = sum_j ((j - np)/sqrt(p(1-p)))^(2r) C(n,j) p^j (1-p)^(n-j)`.
pub fn mu_exact(n: u64, p: &Rational, r: u32) -> Rational {
    // p = a/b; accumulate over the common denominator b^(n + 2r)
    let (a, b) = (p.numer().clone(), p.denom().clone());
    let c = &b - &a;
    let na = &a * int(n as i64);
    let mut sum = BigInt::zero();
    let mut a_pow = BigInt::one();
    let mut c_pows = vec![BigInt::one()];
    for _ in 0..n {
        let next = c_pows.last().unwrap() * &c;
        c_pows.push(next);
    }
    for j in 0..=n {
        let dev = &b * int(j as i64) - &na;
        sum += binomial(n as i64, j as i64) * &a_pow * &c_pows[(n - j) as usize] * dev.pow(2 * r);
        a_pow *= &a;
    }
    // divide by b^(n+2r) and by (ac/b^2)^r
    Rational::new(sum, b.pow(n as u32) * (a * c).pow(r))
}

pub fn mu_bound(n: u64, p: f64, r: u32) -> Result<MuReport> {
    positive("n", n)?;
    if r == 0 {
        return Err(BoundError::InvalidParam("r must be >= 1".into()));
    }
    if !(p > 0.5 && p < 1.0) {
        return Err(BoundError::InvalidParam(format!("need 1/2 < p < 1, got {p}")));
    }
    let (nf, rf) = (n as f64, r as f64);
    let lead = rf * (nf * E * rf).ln();
    let x = p * rf / ((1.0 - p) * nf * E);
    let bound = (lead + log_geometric(x.ln(), r as u64)).exp();
    let simplified = (p / (1.0 - p) <= nf / rf).then(|| (lead - (1.0 - (-1.0f64).exp()).ln()).exp());
    let pr = rational::from_f64(p).expect("finite p");
    let exact = mu_exact(n, &pr, r);
    Ok(MuReport {
        n,
        p,
        r,
        bound,
        exact: rational::to_f64(&exact),
        exact_rational: rational::to_string(&exact),
        simplified,
    })
}

/// Parameters of Kautz-Singleton matrices from Hermitian codes over GF(q0^2).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HermitianParams {
    pub q0: u64,
    pub q: u64,
    pub r: u64,
    pub n: u64,
    pub genus: u64,
    /// `log_{q0} N = 2 (r + 1 - g)`, from the Riemann-Roch dimension.
    pub log_q0_n: i64,
    /// The exponent `2 (r + 1 - q (q-1)/2)` read literally with `q = q0^2`.
    pub log_q0_n_literal: i64,
    pub dprime_lb: i64,
    #[serde(rename = "M")]
    pub m: u64,
    pub t_suggested: u64,
}

pub fn hermitian_params(q0: u64, r: u64) -> Result<HermitianParams> {
    if q0 < 2 || prime_power(q0).is_none() {
        return Err(BoundError::InvalidParam(format!("q0 must be a prime power, got {q0}")));
    }
    let q = q0 * q0;
    let lo = q - q0 - 2;
    let hi = q0.checked_pow(6).ok_or_else(|| BoundError::InvalidParam("q0 too large".into()))?;
    if r < lo || r > hi {
        return Err(BoundError::InvalidParam(format!("need {lo} <= r <= {hi}, got {r}")));
    }
    let genus = q0 * (q0 - 1) / 2;
    let (ri, qi) = (r as i64, q as i64);
    Ok(HermitianParams {
        q0,
        q,
        r,
        n: q0.pow(3),
        genus,
        log_q0_n: 2 * (ri + 1 - genus as i64),
        log_q0_n_literal: 2 * (ri + 1 - qi * (qi - 1) / 2),
        dprime_lb: ri + q0 as i64 + 2 - qi,
        m: q0.pow(5),
        t_suggested: q - 1,
    })
}

/// Parameters of Kautz-Singleton matrices from Suzuki codes, `q0 = 2^m`, `q = 2 q0^2`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuzukiParams {
    pub q0: u64,
    pub q: u64,
    pub r: u64,
    pub n: u64,
    /// `log_q N = r + 1 - q0 (q-1)`.
    pub log_q_n: i64,
    pub dprime_lb: i64,
    #[serde(rename = "M")]
    pub m: u64,
    pub t_suggested: u64,
}

pub fn suzuki_params(m: u32, r: u64) -> Result<SuzukiParams> {
    if m == 0 || m > 10 {
        return Err(BoundError::InvalidParam(format!("need 1 <= m <= 10, got {m}")));
    }
    let q0 = 1u64 << m;
    let q = 2 * q0 * q0;
    let lo = 2 * q0 * (q - 1) - 2;
    let hi = q * q;
    if r <= lo || r >= hi {
        return Err(BoundError::InvalidParam(format!("need {lo} < r < {hi}, got {r}")));
    }
    let (ri, q0i, qi) = (r as i64, q0 as i64, q as i64);
    Ok(SuzukiParams {
        q0,
        q,
        r,
        n: q * q,
        log_q_n: ri + 1 - q0i * (qi - 1),
        dprime_lb: ri - 2 * (q0i * (qi - 1) - 1),
        m: q * q * q,
        t_suggested: q / 2,
    })
}

/// A bound evaluation request; unused parameters stay `None`.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct BoundRequest {
    pub family: Option<Family>,
    pub q: Option<u64>,
    pub n: Option<u64>,
    #[serde(rename = "M")]
    pub mlen: Option<u64>,
    pub w: Option<u64>,
    pub t: Option<u64>,
    pub ell: Option<u64>,
    pub dprime: Option<u64>,
}

impl BoundRequest {
    pub fn new(family: Family) -> Self {
        Self {
            family: Some(family),
            ..Self::default()
        }
    }

    fn get(v: Option<u64>, name: &'static str) -> Result<u64> {
        v.ok_or(BoundError::Missing(name))
    }

    /// Evaluates the requested family. With `dprime` set, `l < d'` is an extra
    /// required condition.
    pub fn evaluate(&self) -> Result<BoundReport> {
        let family = self.family.ok_or(BoundError::Missing("family"))?;
        let t = Self::get(self.t, "t")?;
        let ell = || Self::get(self.ell, "ell");
        let cw = || Ok::<_, BoundError>((Self::get(self.mlen, "M")?, Self::get(self.w, "w")?));
        let mut rep = match family {
            Family::Nonbinary => eps_nonbinary(Self::get(self.q, "q")?, Self::get(self.n, "n")?, t, ell()?)?,
            Family::Cw => {
                let (m, w) = cw()?;
                eps_cw(m, w, t, ell()?)?
            }
            Family::CwMinkowski => {
                let (m, w) = cw()?;
                eps_cw_minkowski(m, w, t, ell()?)?
            }
            Family::CwMz => {
                let (m, w) = cw()?;
                eps_cw_mz(m, w, t, ell()?)?
            }
            Family::CwRosenthal => {
                let (m, w) = cw()?;
                eps_cw_rosenthal(m, w, t, ell()?)?
            }
            Family::CwL2 => {
                let (m, w) = cw()?;
                eps_cw_l2(m, w, t)?
            }
            Family::RsAsymptotic => eps_rs(Self::get(self.q, "q")?, t, ell()?)?,
        };
        if let Some(d) = self.dprime {
            let used = if family == Family::CwL2 { 2 } else { ell()? };
            rep.inputs.insert("dprime".into(), d);
            if used >= d {
                rep.conditions.push(Check::required("l < d'", false));
                rep.preconditions_met = false;
                rep.epsilon = None;
                rep.log_epsilon = None;
                rep.epsilon_exact = None;
                rep.trivial = false;
            } else {
                rep.conditions.push(Check::required("l < d'", true));
            }
        }
        Ok(rep)
    }
}

/// Scans every even `l` in `[2, d'-1]` and returns the one minimising ε, ties
/// to the smaller `l`. Values of `l` whose preconditions fail are skipped.
pub fn best_even_ell(dprime: u64, request: &BoundRequest) -> Result<(u64, BoundReport)> {
    if dprime <= 2 {
        return Err(BoundError::NoAdmissibleEll(dprime));
    }
    let mut best: Option<(u64, BoundReport)> = None;
    let mut ell = 2;
    while ell < dprime {
        let req = BoundRequest {
            ell: Some(ell),
            dprime: Some(dprime),
            ..request.clone()
        };
        let rep = req.evaluate()?;
        if let Some(l) = rep.log_epsilon {
            if best.as_ref().is_none_or(|(_, b)| l < b.log_epsilon.unwrap()) {
                best = Some((ell, rep));
            }
        }
        if request.family == Some(Family::CwL2) {
            break;
        }
        ell += 2;
    }
    best.ok_or(BoundError::NoAdmissibleEll(dprime))
}

/// Conditions under which the Rosenthal bound decays exponentially in `l`.
pub fn check_cor_conditions(m: u64, w: u64, t: u64, ell: u64) -> Vec<Check> {
    let (mf, wf, tf, lf) = (m as f64, w as f64, t as f64, ell as f64);
    let lnl = lf.ln();
    vec![
        Check::required("w > 2l^2/ln l", lnl > 0.0 && wf * lnl > 2.0 * lf * lf),
        Check::required(
            "M > 4w^2t/l^2",
            m as u128 * (ell as u128).pow(2) > 4 * (w as u128).pow(2) * t as u128,
        ),
        Check::required("M > w + 2ew^2/l", mf > wf + 2.0 * E * wf * wf / lf),
        Check::required("M > wt ln l", mf > wf * tf * lnl),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn b_factor_values() {
        assert!(rel(b_factor(2, 1).unwrap(), 1.0) < 1e-12);
        assert!(rel(b_factor(2, 100).unwrap(), 3600.0) < 1e-12);
        assert!(rel(b_factor(4, 2).unwrap(), 16.0) < 1e-12);
        assert!(b_factor(3, 2).is_err());
        assert!(b_factor(2, 0).is_err());
        // huge values stay finite in log space
        assert!(log_b_factor(1000, 1000).is_finite());
    }

    #[test]
    fn b_factor_crossover() {
        // t^l <= (18lt)^(l/2) iff t <= 18l
        for ell in [2u64, 4, 6, 8] {
            for t in 1..400u64 {
                let b = log_b_factor(ell, t);
                if t <= 18 * ell {
                    assert!((b - ell as f64 * (t as f64).ln()).abs() < 1e-9);
                } else {
                    assert!(b < ell as f64 * (t as f64).ln());
                }
            }
        }
    }

    fn direct_nonbinary(q: f64, n: f64, t: f64, ell: f64) -> f64 {
        let b = (18.0 * ell * t).powf(ell / 2.0).min(t.powf(ell));
        let base = (E * ell * (q - 1.0) / (2.0 * n * (q - t).powi(2))).powf(ell / 2.0);
        let s: f64 = (0..=(ell as i32 / 2)).map(|i| ((q - 1.0) * ell / (2.0 * n * E)).powi(i)).sum();
        b * base * s
    }

    #[test]
    fn nonbinary_matches_direct_formula() {
        let rep = eps_nonbinary(64, 63, 4, 4).unwrap();
        let e = rep.epsilon.unwrap();
        assert!(rel(e, direct_nonbinary(64.0, 63.0, 4.0, 4.0)) < 1e-9);
        let e2 = eps_nonbinary(64, 63, 2, 4).unwrap().epsilon.unwrap();
        assert!(e2 <= e);
        assert_eq!(rep.trivial, e >= 1.0);
    }

    #[test]
    fn nonbinary_edge_cases() {
        let rep = eps_nonbinary(8, 7, 8, 2).unwrap();
        assert!(!rep.preconditions_met);
        assert!(rep.epsilon.is_none());
        assert!(eps_nonbinary(8, 7, 9, 2).is_err());
        assert!(eps_nonbinary(8, 7, 2, 3).is_err());
    }

    #[test]
    fn cw_reference_point() {
        let rep = eps_cw(1024, 32, 8, 4).unwrap();
        let e = rep.epsilon.unwrap();
        assert!((e - 0.7605).abs() < 1e-3, "{e}");
        assert!(!rep.trivial);
        let rep = eps_cw(1024, 32, 32, 4).unwrap();
        assert!(!rep.preconditions_met && rep.epsilon.is_none());
        assert!(!eps_cw(100, 50, 1, 2).unwrap().preconditions_met);
    }

    #[test]
    fn cw_ell2_substitution() {
        let (m, w, t) = (500.0, 5.0, 3.0);
        let direct = 3.0f64.powi(2).min(36.0 * 3.0)
            * (E * (m - w) / (m - t * w).powi(2))
            * (1.0 + (m - w) / (E * w * w));
        let e = eps_cw(500, 5, 3, 2).unwrap().epsilon.unwrap();
        assert!(rel(e, direct) < 1e-12);
    }

    #[test]
    fn cw_is_min_of_its_factors() {
        for (m, w, t, ell) in [(1024, 32, 8, 4), (4000, 20, 100, 6), (300, 10, 2, 2)] {
            let a = eps_cw(m, w, t, ell).unwrap().epsilon.unwrap();
            let b = eps_cw_minkowski(m, w, t, ell).unwrap().epsilon.unwrap();
            let c = eps_cw_mz(m, w, t, ell).unwrap().epsilon.unwrap();
            assert!(rel(a, b.min(c)) < 1e-12);
        }
    }

    #[test]
    fn rosenthal_cases() {
        let rep = eps_cw_rosenthal(100_000, 40, 10, 2).unwrap();
        let direct = 10.0 * (8.0 * (100_000.0 - 40.0) / (2f64.ln() * 40.0 * (100_000.0 - 400.0))).powi(2);
        assert!(rel(rep.epsilon.unwrap(), direct) < 1e-12);
        // a point satisfying every corollary condition at both l values
        let (m, w, t) = (10_000_000, 200, 20);
        assert!(check_cor_conditions(m, w, t, 4).iter().all(|c| c.holds));
        assert!(check_cor_conditions(m, w, t, 8).iter().all(|c| c.holds));
        let e4 = eps_cw_rosenthal(m, w, t, 4).unwrap().epsilon.unwrap();
        let e8 = eps_cw_rosenthal(m, w, t, 8).unwrap().epsilon.unwrap();
        assert!(e8 < e4);
        let low = eps_cw_rosenthal(100, 20, 2, 2).unwrap();
        assert!(!low.preconditions_met && low.epsilon.is_none());
    }

    #[test]
    fn l2_values() {
        assert_eq!(eps_cw_l2_exact(7, 3, 1), Some(ratio(1, 6)));
        assert_eq!(eps_cw_l2_exact(63, 3, 5), Some(ratio(125, 992)));
        let rep = eps_cw_l2(63, 3, 5).unwrap();
        assert_eq!(rep.epsilon_exact.as_deref(), Some("125/992"));
        assert!(rel(rep.epsilon.unwrap(), 125.0 / 992.0) < 1e-12);
        // t approaching M/w
        let rep = eps_cw_l2(301, 3, 100).unwrap();
        assert!(rep.trivial);
        assert!(!eps_cw_l2(300, 3, 100).unwrap().preconditions_met);
    }

    #[test]
    fn rs_display() {
        let rep = eps_rs(64, 2, 4).unwrap();
        assert!((rep.epsilon.unwrap() - 0.0168).abs() < 5e-4);
        assert!(rep.conditions[1].holds);
        assert_eq!(rep.notes, vec!["asymptotic display".to_string()]);
        // base one at the threshold
        let q = rs_threshold(3, 4);
        let l = log_eps_rs(q, 3.0, 4.0);
        assert!(rel(l.exp(), 4.0 / (2.0 * E)) < 1e-12);
        let rep = eps_rs(20, 3, 4).unwrap();
        assert!(!rep.conditions[1].holds && rep.preconditions_met);
        assert!(!eps_rs(3, 3, 2).unwrap().preconditions_met);
    }

    #[test]
    fn mu_examples() {
        let r1 = mu_bound(10, 0.6, 1).unwrap();
        assert!(rel(r1.exact, 10.0) < 1e-12);
        assert!(r1.bound >= 10.0);
        let r2 = mu_bound(10, 0.6, 2).unwrap();
        assert!((r2.exact - 281.67).abs() < 0.01, "{}", r2.exact);
        assert!((r2.bound - 3317.8).abs() < 0.1, "{}", r2.bound);
        assert!(r2.simplified.unwrap() >= r2.bound);
        assert!(mu_bound(10, 0.5, 1).is_err());
        assert!(mu_bound(10, 0.6, 0).is_err());
    }

    #[test]
    fn mu_exact_second_moment_is_n() {
        for n in 1..12 {
            assert_eq!(mu_exact(n, &ratio(3, 4), 1), ratio(n as i64, 1));
        }
    }

    #[test]
    fn hermitian_values() {
        let h = hermitian_params(3, 9).unwrap();
        assert_eq!((h.n, h.dprime_lb, h.m, h.log_q0_n), (27, 5, 243, 14));
        assert_eq!(h.log_q0_n_literal, 2 * (10 - 36));
        let h = hermitian_params(4, 16).unwrap();
        assert_eq!((h.dprime_lb, h.m), (6, 1024));
        assert!(hermitian_params(3, 3).is_err());
        assert!(hermitian_params(6, 30).is_err());
        assert!(hermitian_params(2, 65).is_err());
    }

    #[test]
    fn suzuki_values() {
        let s = suzuki_params(1, 32).unwrap();
        assert_eq!((s.q, s.n, s.dprime_lb, s.m, s.log_q_n), (8, 64, 6, 512, 19));
        assert_eq!(s.dprime_lb as u64, 2 * s.q0 + 2);
        assert!(suzuki_params(1, 26).is_err());
        assert!(suzuki_params(1, 27).is_ok());
        assert!(suzuki_params(1, 64).is_err());
    }

    #[test]
    fn best_ell_scan() {
        let mut req = BoundRequest::new(Family::Cw);
        req.mlen = Some(1024);
        req.w = Some(32);
        req.t = Some(8);
        assert_eq!(best_even_ell(3, &req).unwrap().0, 2);
        let (ell, rep) = best_even_ell(5, &req).unwrap();
        let e2 = eps_cw(1024, 32, 8, 2).unwrap().epsilon.unwrap();
        let e4 = eps_cw(1024, 32, 8, 4).unwrap().epsilon.unwrap();
        assert_eq!(ell, if e4 < e2 { 4 } else { 2 });
        assert_eq!(rep.epsilon.unwrap(), e2.min(e4));
        assert!(best_even_ell(2, &req).is_err());
        // Rosenthal decays in l on this point, so the largest admissible l wins
        let mut req = BoundRequest::new(Family::CwRosenthal);
        req.mlen = Some(1_000_000_000);
        req.w = Some(2000);
        req.t = Some(2);
        let eps: Vec<f64> = (1..=5)
            .map(|h| eps_cw_rosenthal(1_000_000_000, 2000, 2, 2 * h).unwrap().epsilon.unwrap())
            .collect();
        assert!(eps.windows(2).all(|p| p[1] < p[0]));
        assert_eq!(best_even_ell(11, &req).unwrap().0, 10);
        assert_eq!(best_even_ell(12, &req).unwrap().0, 10);
    }

    #[test]
    fn request_dual_distance_gate() {
        let req = BoundRequest {
            family: Some(Family::Nonbinary),
            q: Some(64),
            n: Some(63),
            t: Some(4),
            ell: Some(4),
            dprime: Some(4),
            ..Default::default()
        };
        let rep = req.evaluate().unwrap();
        assert!(!rep.preconditions_met && rep.epsilon.is_none());
        let rep = BoundRequest { dprime: Some(5), ..req.clone() }.evaluate().unwrap();
        assert!(rep.preconditions_met);
        assert_eq!(BoundRequest { q: None, ..req }.evaluate(), Err(BoundError::Missing("q")));
    }

    #[test]
    fn cor_conditions_strict() {
        // M l^2 = 4 w^2 t exactly
        let c = check_cor_conditions(64, 8, 4, 4);
        assert!(!c[1].holds);
        assert_eq!(c.len(), 4);
    }

    #[test]
    fn family_names_round_trip() {
        for f in Family::ALL {
            assert_eq!(Family::from_name(f.name()), Some(f));
        }
    }
}
