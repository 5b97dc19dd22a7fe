//! Applicable-bound tables and the built-in invariant suite.

use serde::{Deserialize, Serialize};

use crate::bounds::{BoundReport, BoundRequest, Family};
use crate::codes::{QaryCode, TestMatrix};
use crate::instances::{self, Instance};
use crate::rational::{self, binomial, from_int, int, Rational};
use crate::spectra::{
    binomial_rhs, central_moment_hamming, cw_central_moment, cw_spectrum_of_matrix, dual_spectrum_cw,
    dual_spectrum_hamming, eberlein, hahn, hamming_spectrum, hypergeometric_central_moment, krawtchouk,
    valency, SpectraError,
};
use crate::testing::{
    disjunct_t_guarantee, exact_pa, is_t_disjunct, pairwise_relaxation_prob, simulate_decoding, McConfig,
    TGuarantee,
};
use crate::Budgets;

/// Measured dual distances of a matrix (Johnson scheme) and of its q-ary
/// source code (Hamming scheme). `None` when not measured or when the dual
/// spectrum vanishes past index 0.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DualDistances {
    pub johnson: Option<usize>,
    pub hamming: Option<usize>,
}

pub fn dual_distances(m: &TestMatrix, source: Option<&QaryCode>, budgets: &Budgets) -> Result<DualDistances, SpectraError> {
    let size = m.columns() as u64;
    if size > budgets.spectrum_size {
        return Err(SpectraError::BudgetExceeded {
            size,
            budget: budgets.spectrum_size,
        });
    }
    let johnson = match m.weight() {
        Some(_) => dual_spectrum_cw(&cw_spectrum_of_matrix(m)?)?.dual_distance,
        None => None,
    };
    let hamming = match source {
        Some(code) => dual_spectrum_hamming(&hamming_spectrum(code, budgets)?).dual_distance,
        None => None,
    };
    Ok(DualDistances { johnson, hamming })
}

/// Every bound whose preconditions hold for `m` at `t`, one report per family
/// and even `l` below the relevant dual distance. The RS asymptotic display is
/// not a bound on a concrete matrix and is never included.
pub fn applicable_bounds(m: &TestMatrix, source: Option<&QaryCode>, duals: DualDistances, t: usize) -> Vec<BoundReport> {
    let mut out = Vec::new();
    let mut push = |req: BoundRequest| {
        if let Ok(rep) = req.evaluate() {
            if rep.preconditions_met && rep.epsilon.is_some() {
                out.push(rep);
            }
        }
    };
    if let (Some(code), Some(dp)) = (source, duals.hamming) {
        for ell in (2..dp as u64).step_by(2) {
            push(BoundRequest {
                q: Some(code.alphabet_size() as u64),
                n: Some(code.length() as u64),
                t: Some(t as u64),
                ell: Some(ell),
                dprime: Some(dp as u64),
                ..BoundRequest::new(Family::Nonbinary)
            });
        }
    }
    if let (Some(w), Some(dp)) = (m.weight(), duals.johnson) {
        let base = |family| BoundRequest {
            mlen: Some(m.rows() as u64),
            w: Some(w as u64),
            t: Some(t as u64),
            dprime: Some(dp as u64),
            ..BoundRequest::new(family)
        };
        for ell in (2..dp as u64).step_by(2) {
            for family in [Family::Cw, Family::CwMinkowski, Family::CwMz, Family::CwRosenthal] {
                push(BoundRequest {
                    ell: Some(ell),
                    ..base(family)
                });
            }
        }
        if dp > 2 {
            push(base(Family::CwL2));
        }
    }
    out
}

/// The smallest ε among `reports`.
pub fn tightest(reports: &[BoundReport]) -> Option<&BoundReport> {
    reports
        .iter()
        .filter(|r| r.epsilon.is_some())
        .min_by(|a, b| a.epsilon.unwrap().total_cmp(&b.epsilon.unwrap()))
}

/// Absolute slack allowed when an exact probability is compared with a float bound.
pub const BOUND_SLACK: f64 = 1e-9;

/// Outcome of one suite check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteCheck {
    pub group: String,
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

pub const GROUPS: [&str; 5] = ["orthogonality", "moments", "dominance", "disjunct", "decoding"];

fn check(group: &str, name: impl Into<String>, result: Result<String, String>) -> SuiteCheck {
    let (passed, detail) = match result {
        Ok(d) => (true, d),
        Err(d) => (false, d),
    };
    SuiteCheck {
        group: group.into(),
        name: name.into(),
        passed,
        detail,
    }
}

fn krawtchouk_orthogonality(q: usize, n: usize) -> Result<String, String> {
    let weight: Vec<_> = (0..=n)
        .map(|i| binomial(n as i64, i as i64) * int(q as i64 - 1).pow(i as u32))
        .collect();
    let k: Vec<Vec<_>> = (0..=n).map(|j| (0..=n).map(|i| krawtchouk(q, n, j, i)).collect()).collect();
    for j in 0..=n {
        for l in 0..=n {
            let s: num_bigint::BigInt = (0..=n).map(|i| &weight[i] * &k[j][i] * &k[l][i]).sum();
            let want = if j == l {
                int(q as i64).pow(n as u32) * &weight[j]
            } else {
                int(0)
            };
            if s != want {
                return Err(format!("j={j} l={l}: {s} != {want}"));
            }
        }
    }
    Ok(format!("{} pairs", (n + 1) * (n + 1)))
}

fn johnson_orthogonality(m: usize, w: usize) -> Result<String, String> {
    let e: Vec<Vec<_>> = (0..=w)
        .map(|k| (0..=w).map(|i| eberlein(m, w, k, i).map_err(|e| e.to_string())).collect())
        .collect::<Result<_, _>>()?;
    let q: Vec<Vec<Rational>> = (0..=w)
        .map(|k| (0..=w).map(|i| hahn(m, w, k, i).map_err(|e| e.to_string())).collect())
        .collect::<Result<_, _>>()?;
    let total = from_int(binomial(m as i64, w as i64));
    for i in 0..=w {
        if e[i][0] != valency(m, w, i) {
            return Err(format!("E_{i}(0) != v_{i}"));
        }
        for j in 0..=w {
            let s = (0..=w).fold(Rational::from_integer(int(0)), |acc, k| acc + from_int(e[k][j].clone()) * &q[i][k]);
            let want = if i == j { total.clone() } else { Rational::from_integer(int(0)) };
            if s != want {
                return Err(format!("i={i} j={j}: {s} != {want}"));
            }
        }
    }
    Ok(format!("{} pairs", (w + 1) * (w + 1)))
}

fn orthogonality_checks(out: &mut Vec<SuiteCheck>) {
    for q in 2..=4 {
        for n in [4, 8, 12] {
            out.push(check("orthogonality", format!("krawtchouk q={q} n={n}"), krawtchouk_orthogonality(q, n)));
        }
    }
    for (m, w) in [(7, 3), (10, 4), (16, 5), (16, 8)] {
        out.push(check("orthogonality", format!("eberlein/hahn M={m} w={w}"), johnson_orthogonality(m, w)));
    }
}

fn moment_checks(out: &mut Vec<SuiteCheck>, budgets: &Budgets) {
    let fano = instances::fano();
    out.push(check("moments", "fano sidelnikov r<=6", (|| {
        let s = cw_spectrum_of_matrix(&fano).map_err(|e| e.to_string())?;
        let d = dual_spectrum_cw(&s).map_err(|e| e.to_string())?;
        let dp = d.dual_distance.ok_or("no dual distance")?;
        for r in 0..=6u32 {
            let a = cw_central_moment(&s, r);
            let b = hypergeometric_central_moment(7, 3, r).map_err(|e| e.to_string())?;
            let ok = if (r as usize) < dp { a == b } else { a >= b };
            if !ok {
                return Err(format!("r={r}: {a} vs {b}"));
            }
        }
        Ok(format!("d'={dp}"))
    })()));
    for (q, k) in [(5u64, 2usize), (7, 3), (8, 3)] {
        let inst = instances::ks_rs(q, k);
        let code = inst.source.unwrap();
        out.push(check("moments", format!("rs q={q} k={k} pless below d'"), (|| {
            let s = hamming_spectrum(&code, budgets).map_err(|e| e.to_string())?;
            let d = dual_spectrum_hamming(&s);
            if d.dual_distance != Some(k + 1) {
                return Err(format!("d' = {:?}", d.dual_distance));
            }
            for r in 0..=k as u32 {
                let (a, b) = (central_moment_hamming(&s, r), binomial_rhs(code.length(), q as usize, r));
                if a != b {
                    return Err(format!("r={r}: {a} != {b}"));
                }
            }
            Ok(format!("d'={}", k + 1))
        })()));
    }
    for inst in instances::bundled() {
        if inst.matrix.weight().is_none() {
            continue;
        }
        out.push(check("moments", format!("{} delsarte", inst.name), (|| {
            let s = cw_spectrum_of_matrix(&inst.matrix).map_err(|e| e.to_string())?;
            let d = dual_spectrum_cw(&s).map_err(|e| e.to_string())?;
            if d.nonnegative() {
                Ok(match d.dual_distance {
                    Some(dp) => format!("d'={dp}"),
                    None => "dual spectrum vanishes".into(),
                })
            } else {
                Err("negative dual entry".into())
            }
        })()));
    }
}

fn dominance(inst: &Instance, budgets: &Budgets) -> Result<String, String> {
    let m = &inst.matrix;
    let duals = dual_distances(m, inst.source.as_ref(), budgets).map_err(|e| e.to_string())?;
    let mut bounded = 0;
    let tmax = m.columns().min(5);
    for t in 1..tmax {
        let exact = exact_pa(m, t, budgets).map_err(|e| e.to_string())?.probability();
        let relax = pairwise_relaxation_prob(m, t, budgets).map_err(|e| e.to_string())?.probability();
        if exact > relax {
            return Err(format!("t={t}: P_A {exact} > relaxation {relax}"));
        }
        let bounds = applicable_bounds(m, inst.source.as_ref(), duals, t);
        if let Some(b) = tightest(&bounds) {
            let eps = b.epsilon.unwrap();
            if rational::to_f64(&relax) > eps + BOUND_SLACK {
                return Err(format!("t={t}: relaxation {relax} > {} {eps:.6e}", b.formula_id));
            }
            bounded += 1;
        }
    }
    Ok(format!("t<{tmax}, {bounded} bounded"))
}

fn disjunct_check(inst: &Instance, budgets: &Budgets) -> Result<String, String> {
    let m = &inst.matrix;
    let (Some(w), Some(d)) = (m.weight(), m.min_distance()) else {
        return Ok("no constant-weight guarantee".into());
    };
    let t = match disjunct_t_guarantee(m.rows(), w, d).map_err(|e| e.to_string())? {
        TGuarantee::Finite(t) => t,
        TGuarantee::Unbounded => m.columns() - 1,
    };
    if t == 0 || t >= m.columns() {
        return Ok(format!("guarantee t={t}, nothing to check"));
    }
    match is_t_disjunct(m, t, budgets) {
        Ok(c) if c.disjunct => Ok(format!("{t}-disjunct")),
        Ok(c) => Err(format!("not {t}-disjunct: {:?}", c.witness)),
        Err(e) => Ok(format!("skipped: {e}")),
    }
}

fn decoding_check(inst: &Instance) -> Result<String, String> {
    let m = &inst.matrix;
    let cfg = McConfig {
        trials: 2_000,
        ..McConfig::default()
    };
    let mut runs = 0;
    for t in 1..m.columns().min(4) {
        let r = simulate_decoding(m, t, &cfg).map_err(|e| e.to_string())?;
        if r.false_negatives != 0 {
            return Err(format!("t={t}: {} false negatives", r.false_negatives));
        }
        runs += 1;
    }
    Ok(format!("{runs} runs, no false negatives"))
}

/// Runs the invariant suite, restricted to `only` groups when given. The
/// instance checks cover the bundled instances followed by `extra`.
pub fn run_suite(only: &[String], extra: &[Instance], budgets: &Budgets) -> Vec<SuiteCheck> {
    let wanted = |g: &str| only.is_empty() || only.iter().any(|o| o == g);
    let mut out = Vec::new();
    if wanted("orthogonality") {
        orthogonality_checks(&mut out);
    }
    if wanted("moments") {
        moment_checks(&mut out, budgets);
    }
    for inst in instances::bundled().iter().chain(extra) {
        out.extend(instance_checks(inst, only, budgets));
    }
    out
}

/// The dominance, disjunctness and decoding checks for one instance.
pub fn instance_checks(inst: &Instance, only: &[String], budgets: &Budgets) -> Vec<SuiteCheck> {
    let wanted = |g: &str| only.is_empty() || only.iter().any(|o| o == g);
    let mut out = Vec::new();
    if wanted("dominance") {
        out.push(check("dominance", inst.name.clone(), dominance(inst, budgets)));
    }
    if wanted("disjunct") {
        out.push(check("disjunct", inst.name.clone(), disjunct_check(inst, budgets)));
    }
    if wanted("decoding") {
        out.push(check("decoding", inst.name.clone(), decoding_check(inst)));
    }
    out
}
