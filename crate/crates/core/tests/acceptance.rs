//! Acceptance criteria. Prints one PASS/FAIL line per criterion and exits
//! nonzero on any unexpected failure.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use disjunct::bounds::{
    eps_cw, eps_cw_l2, eps_cw_minkowski, eps_cw_mz, eps_cw_rosenthal, eps_nonbinary, eps_rs,
    hermitian_params, mu_bound, mu_exact, suzuki_params, BoundReport,
};
use disjunct::codes::{bch_code, fixed_weight_subcode, rs_code, ConstantWeightCode, TestMatrix};
use disjunct::galois::FieldSpec;
use disjunct::instances::{self, Instance};
use disjunct::rational::{self, binomial, from_int, int, ratio, to_f64, Rational};
use disjunct::spectra::*;
use disjunct::testing::*;
use disjunct::Budgets;
use num_traits::{One, Zero};
use rand::seq::index::sample;
use rand::SeedableRng;

/// Absolute slack when comparing an exact probability with a float bound.
const BOUND_SLACK: f64 = 1e-9;
/// Wilson interval level for Monte Carlo calibration.
const MC_CONFIDENCE: f64 = 0.99;
const MC_TRIALS: u64 = 100_000;
const MC_SEEDS: u64 = 100;
const MC_MIN_COVERED: u64 = 95;
/// Allowed excess of a simulated rate over a bound, in Wilson standard errors.
const SE_SLACK: f64 = 3.0;
const DECODING_TRIALS: u64 = 10_000;

/// Criteria that cannot be met as stated, with the failure message they are
/// expected to produce.
const EXPECTED_FAILURES: &[(u32, &str)] = &[(10, "weight-3 subcode of BCH(m=6, delta=5) is empty")];

type Outcome = Result<String, String>;

fn budgets() -> Budgets {
    Budgets::default()
}

fn c1_fano_moments() -> Outcome {
    let m = instances::fano();
    let s = cw_spectrum_of_matrix(&m).map_err(|e| e.to_string())?;
    let d = dual_spectrum_cw(&s).map_err(|e| e.to_string())?;
    // oracle: the 49 ordered pairs meet in 3 (diagonal) or 1 point
    let mut counts = [0u64; 4];
    for a in instances::FANO_BLOCKS {
        for b in instances::FANO_BLOCKS {
            counts[3 - a.iter().filter(|x| b.contains(x)).count()] += 1;
        }
    }
    if s.counts != counts {
        return Err(format!("pair counts {:?} != brute force {:?}", s.counts, counts));
    }
    for (r, want) in [(1, ratio(0, 1)), (2, ratio(24, 49))] {
        let a = cw_central_moment(&s, r);
        let b = hypergeometric_central_moment(7, 3, r).map_err(|e| e.to_string())?;
        if a != want || b != want {
            return Err(format!("r={r}: code {a}, hypergeometric {b}, expected {want}"));
        }
    }
    if d.dual_distance != Some(3) {
        return Err(format!("d' = {:?}", d.dual_distance));
    }
    Ok("r=1: 0, r=2: 24/49 on both sides; d' = 3".into())
}

fn c2_pless_rs() -> Outcome {
    let mut parts = Vec::new();
    for (q, k) in [(5u64, 2usize), (7, 3)] {
        let f = FieldSpec::with_order(q).map_err(|e| e.to_string())?;
        let code = rs_code(&f, k, &budgets()).map_err(|e| e.to_string())?;
        let s = hamming_spectrum(&code, &budgets()).map_err(|e| e.to_string())?;
        let d = dual_spectrum_hamming(&s);
        if d.dual_distance != Some(k + 1) {
            return Err(format!("RS({q},{k}): d' = {:?}", d.dual_distance));
        }
        for ell in 0..=k as u32 {
            let a = central_moment_hamming(&s, ell);
            let b = binomial_rhs(code.length(), q as usize, ell);
            if a != b {
                return Err(format!("RS({q},{k}) l={ell}: {a} != {b}"));
            }
        }
        parts.push(format!("RS({q},{k}) l<{}", k + 1));
    }
    Ok(parts.join(", "))
}

fn c3_ks_disjunct() -> Outcome {
    let inst = instances::ks_rs(5, 2);
    let m = &inst.matrix;
    let w = m.weight().unwrap();
    let d = m.min_distance().unwrap();
    let g = disjunct_t_guarantee(m.rows(), w, d).map_err(|e| e.to_string())?;
    if g != TGuarantee::Finite(3) {
        return Err(format!("guarantee {g:?} with w={w} d={d}"));
    }
    let at3 = is_t_disjunct(m, 3, &budgets()).map_err(|e| e.to_string())?;
    let at4 = is_t_disjunct(m, 4, &budgets()).map_err(|e| e.to_string())?;
    if !at3.disjunct {
        return Err(format!("not 3-disjunct, witness {:?}", at3.witness));
    }
    if at4.disjunct {
        return Err("unexpectedly 4-disjunct".into());
    }
    Ok("3-disjunct over C(25,3)*22 checks; witness found at t=4".into())
}

/// Every applicable ε over families and even l below the measured dual distance.
fn applicable_bounds(inst: &Instance, t: usize, johnson_dprime: Option<usize>, hamming_dprime: Option<usize>) -> Vec<(String, f64)> {
    let mut out = Vec::new();
    let mut push = |rep: Result<BoundReport, disjunct::bounds::BoundError>, ell: usize| {
        if let Ok(r) = rep {
            if let (true, Some(e)) = (r.preconditions_met, r.epsilon) {
                out.push((format!("{}(l={ell})", r.formula_id), e));
            }
        }
    };
    let t64 = t as u64;
    if let (Some(code), Some(dp)) = (&inst.source, hamming_dprime) {
        for ell in (2..dp).step_by(2) {
            push(eps_nonbinary(code.alphabet_size() as u64, code.length() as u64, t64, ell as u64), ell);
        }
    }
    if let (Some(w), Some(dp)) = (inst.matrix.weight(), johnson_dprime) {
        let (m, w) = (inst.matrix.rows() as u64, w as u64);
        for ell in (2..dp).step_by(2) {
            let l = ell as u64;
            push(eps_cw(m, w, t64, l), ell);
            push(eps_cw_minkowski(m, w, t64, l), ell);
            push(eps_cw_mz(m, w, t64, l), ell);
            push(eps_cw_rosenthal(m, w, t64, l), ell);
        }
        if dp > 2 {
            push(eps_cw_l2(m, w, t64), 2);
        }
    }
    out
}

fn c4_bound_dominance() -> Outcome {
    let mut checks = 0;
    let mut bounded = 0;
    for inst in instances::bundled() {
        let m = &inst.matrix;
        let johnson = match cw_spectrum_of_matrix(m) {
            Ok(s) => dual_spectrum_cw(&s).map_err(|e| e.to_string())?.dual_distance,
            Err(_) => None,
        };
        let hamming = match &inst.source {
            Some(code) => dual_spectrum_hamming(&hamming_spectrum(code, &budgets()).map_err(|e| e.to_string())?).dual_distance,
            None => None,
        };
        for t in 1..m.columns().min(5) {
            let exact = exact_pa(m, t, &budgets()).map_err(|e| e.to_string())?.probability();
            let relax = pairwise_relaxation_prob(m, t, &budgets()).map_err(|e| e.to_string())?.probability();
            if exact > relax {
                return Err(format!("{} t={t}: P_A {exact} > relaxation {relax}", inst.name));
            }
            checks += 1;
            let bounds = applicable_bounds(&inst, t, johnson, hamming);
            if let Some((name, eps)) = bounds.iter().min_by(|a, b| a.1.total_cmp(&b.1)) {
                if to_f64(&relax) > eps + BOUND_SLACK {
                    return Err(format!(
                        "{} t={t}: relaxation {} > {name} = {eps:.6e}",
                        inst.name,
                        rational::to_string(&relax)
                    ));
                }
                bounded += 1;
            }
        }
    }
    Ok(format!("{checks} (instance, t) chains, {bounded} with an applicable bound"))
}

fn coverage(m: &TestMatrix, t: usize, exact: f64) -> Result<u64, String> {
    let mut covered = 0;
    for s in 0..MC_SEEDS {
        let cfg = McConfig {
            trials: MC_TRIALS,
            seed: 0xacce_0000 + s,
            confidence: MC_CONFIDENCE,
            interval: IntervalKind::Wilson,
        };
        let r = estimate_pa(m, t, &cfg).map_err(|e| e.to_string())?;
        if r.ci.0 <= exact && exact <= r.ci.1 {
            covered += 1;
        }
    }
    Ok(covered)
}

fn c5_monte_carlo() -> Outcome {
    let toy = instances::nested_toy();
    let toy_exact = exact_pa(&toy, 1, &budgets()).map_err(|e| e.to_string())?.probability();
    if toy_exact != ratio(1, 2) {
        return Err(format!("toy P_A = {toy_exact}"));
    }
    let a = coverage(&toy, 1, 0.5)?;
    let ks = instances::ks_rs(8, 3).matrix;
    let ks_exact = exact_pa(&ks, 2, &budgets()).map_err(|e| e.to_string())?.probability();
    let b = coverage(&ks, 2, to_f64(&ks_exact))?;
    // t=2 is within the disjunctness guarantee, so also calibrate past it
    let ks4 = exact_pa(&ks, 4, &budgets()).map_err(|e| e.to_string())?.probability();
    let c = coverage(&ks, 4, to_f64(&ks4))?;
    let msg = format!(
        "toy {a}/{MC_SEEDS}, KS(RS(8,3)) t=2 (P_A = {ks_exact}) {b}/{MC_SEEDS}, t=4 (P_A = {:.4e}) {c}/{MC_SEEDS}",
        to_f64(&ks4)
    );
    if a >= MC_MIN_COVERED && b >= MC_MIN_COVERED && c >= MC_MIN_COVERED {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn c6_spectral_algebra() -> Outcome {
    for q in 2..=4usize {
        for n in 1..=24usize {
            let weight: Vec<_> = (0..=n)
                .map(|i| binomial(n as i64, i as i64) * int(q as i64 - 1).pow(i as u32))
                .collect();
            let k: Vec<Vec<_>> = (0..=n).map(|j| (0..=n).map(|i| krawtchouk(q, n, j, i)).collect()).collect();
            for j in 0..=n {
                for l in 0..=n {
                    let s: num_bigint::BigInt = (0..=n).map(|i| &weight[i] * &k[j][i] * &k[l][i]).sum();
                    let want = if j == l { int(q as i64).pow(n as u32) * &weight[j] } else { int(0) };
                    if s != want {
                        return Err(format!("Krawtchouk q={q} n={n} j={j} l={l}"));
                    }
                }
            }
        }
    }
    for m in 2..=24usize {
        for w in 1..=(m / 2).min(12) {
            let e: Vec<Vec<_>> = (0..=w)
                .map(|k| (0..=w).map(|i| eberlein(m, w, k, i).unwrap()).collect())
                .collect();
            let q: Vec<Vec<Rational>> = (0..=w)
                .map(|k| (0..=w).map(|i| hahn(m, w, k, i).unwrap()).collect())
                .collect();
            let total = from_int(binomial(m as i64, w as i64));
            for i in 0..=w {
                for j in 0..=w {
                    let s = (0..=w).fold(Rational::zero(), |acc, k| acc + from_int(e[k][j].clone()) * &q[i][k]);
                    let want = if i == j { total.clone() } else { Rational::zero() };
                    if s != want {
                        return Err(format!("Eberlein/Hahn M={m} w={w} i={i} j={j}"));
                    }
                }
                if e[i][0] != valency(m, w, i) {
                    return Err(format!("E_k(0) != v_k at M={m} w={w} k={i}"));
                }
                let q1 = from_int(int(m as i64 - 1))
                    * (Rational::one() - Rational::new(int((m * i) as i64), int((w * (m - w)) as i64)));
                if q[1][i] != q1 {
                    return Err(format!("Q_1 closed form at M={m} w={w} i={i}"));
                }
            }
        }
    }
    Ok("Krawtchouk n<=24 q<=4; Eberlein/Hahn M<=24 w<=12; E_k(0)=v_k; Q_1 closed form".into())
}

fn c7_mu_grid() -> Outcome {
    let mut cells = 0;
    let mut simplified = 0;
    for n in 5..=50u64 {
        for step in 0..9 {
            let p_exact = ratio(55 + 5 * step, 100);
            let p = to_f64(&p_exact);
            for r in 1..=6u32 {
                let rep = mu_bound(n, p, r).map_err(|e| e.to_string())?;
                // exact value at the decimal p as well as at its double
                let exact_dec = to_f64(&mu_exact(n, &p_exact, r));
                let exact = rep.exact.max(exact_dec);
                if rep.bound < exact {
                    return Err(format!("n={n} p={p} r={r}: bound {} < exact {exact}", rep.bound));
                }
                if let Some(sv) = rep.simplified {
                    if sv < exact {
                        return Err(format!("n={n} p={p} r={r}: simplified {sv} < exact {exact}"));
                    }
                    simplified += 1;
                }
                cells += 1;
            }
        }
    }
    Ok(format!("{cells} grid cells, {simplified} with the simplified form"))
}

fn c8_parameter_tables() -> Outcome {
    let h = hermitian_params(3, 9).map_err(|e| e.to_string())?;
    if (h.m, h.dprime_lb) != (243, 5) {
        return Err(format!("Hermitian M={} d'>={}", h.m, h.dprime_lb));
    }
    let s = suzuki_params(1, 32).map_err(|e| e.to_string())?;
    if (s.m, s.dprime_lb) != (512, 6) {
        return Err(format!("Suzuki M={} d'>={}", s.m, s.dprime_lb));
    }
    for (q, t, ell) in [(64u64, 2u64, 4u64), (20, 3, 4), (33, 3, 4)] {
        let rep = eps_rs(q, t, ell).map_err(|e| e.to_string())?;
        let predicate = rep.conditions.iter().find(|c| !c.required).map(|c| c.holds);
        let direct = q as f64 > 2.13 * (ell as f64).powf(1.5) * (t as f64).sqrt() + t as f64;
        if predicate != Some(direct) {
            return Err(format!("RS feasibility at q={q} t={t} l={ell}: {predicate:?} vs {direct}"));
        }
    }
    Ok("Hermitian(3,9): M=243 d'>=5; Suzuki(1,32): M=512 d'>=6; 3 RS feasibility probes".into())
}

fn c9_comp_soundness() -> Outcome {
    let mut runs = 0;
    for inst in instances::bundled() {
        let m = &inst.matrix;
        let guaranteed = match (m.weight(), m.min_distance()) {
            (Some(w), Some(d)) if d > 0 => match disjunct_t_guarantee(m.rows(), w, d) {
                Ok(TGuarantee::Finite(t)) => Some(t),
                Ok(TGuarantee::Unbounded) => Some(m.columns() - 1),
                Err(_) => None,
            },
            _ => None,
        };
        let mut ts: Vec<usize> = vec![1, 2, 3];
        ts.extend(guaranteed);
        ts.retain(|&t| t >= 1 && t < m.columns());
        ts.dedup();
        for t in ts {
            let cfg = McConfig {
                trials: DECODING_TRIALS,
                seed: 9,
                ..McConfig::default()
            };
            let r = simulate_decoding(m, t, &cfg).map_err(|e| e.to_string())?;
            if r.false_negatives != 0 {
                return Err(format!("{} t={t}: {} false negatives", inst.name, r.false_negatives));
            }
            if Some(t) == guaranteed && r.total_false_positives != Some(0) {
                return Err(format!("{} at guaranteed t={t}: {:?} false positives", inst.name, r.total_false_positives));
            }
            runs += 1;
        }
    }
    Ok(format!("{runs} decoding runs of {DECODING_TRIALS} trials, no false negatives"))
}

/// Simulated per-item rate against the variance bound at `t`.
fn l2_check(m: &TestMatrix, t: usize) -> Result<String, String> {
    let w = m.weight().ok_or("not constant weight")?;
    let cfg = McConfig {
        trials: MC_TRIALS,
        seed: 10,
        ..McConfig::default()
    };
    let r = simulate_decoding(m, t, &cfg).map_err(|e| e.to_string())?;
    let rep = eps_cw_l2(m.rows() as u64, w as u64, t as u64).map_err(|e| e.to_string())?;
    let eps = rep.epsilon.ok_or("variance bound preconditions fail")?;
    let rate = r.per_item_fp_rate.unwrap();
    let limit = eps + SE_SLACK * r.std_error;
    if rate <= limit {
        Ok(format!("t={t}: rate {rate:.3e} <= eps {eps:.3e}"))
    } else {
        Err(format!("t={t}: rate {rate:.3e} > eps {eps:.3e} + {SE_SLACK} SE"))
    }
}

fn bch_pipeline(m: u32, delta: usize, w: usize) -> Outcome {
    let code = bch_code(m, delta).map_err(|e| e.to_string())?;
    let sub = fixed_weight_subcode(&code, w, &budgets()).map_err(|e| e.to_string())?;
    if sub.is_empty() {
        return Err(format!("weight-{w} subcode of BCH(m={m}, delta={delta}) is empty"));
    }
    let s = cw_spectrum(&sub, &Budgets { spectrum_size: 100_000, ..budgets() }).map_err(|e| e.to_string())?;
    let d = dual_spectrum_cw(&s).map_err(|e| e.to_string())?;
    let dp = d.dual_distance.ok_or("no dual distance")?;
    if dp <= 2 {
        return Err(format!("d' = {dp}, variance bound needs l = 2 < d'"));
    }
    let matrix = TestMatrix::from_code(sub.clone());
    let mut parts = vec![format!("N={} d'={dp}", sub.len())];
    for t in [2, 3] {
        parts.push(l2_check(&matrix, t)?);
    }
    Ok(parts.join("; "))
}

fn c10_bch_pipeline() -> Outcome {
    bch_pipeline(6, 5, 3)
}

fn c10b_bch_companion() -> Outcome {
    bch_pipeline(6, 3, 3)
}

/// Random constant-weight matrix with the shape of `like`.
fn random_like(like: &ConstantWeightCode, seed: u64) -> TestMatrix {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut cols = std::collections::BTreeSet::new();
    while cols.len() < like.len() {
        let mut c: Vec<u32> = sample(&mut rng, like.length(), like.weight())
            .into_iter()
            .map(|x| x as u32)
            .collect();
        c.sort_unstable();
        cols.insert(c);
    }
    TestMatrix::from_code(ConstantWeightCode::new(like.length(), like.weight(), cols.into_iter().collect()).unwrap())
}

fn bch_vs_random_report() -> String {
    let mut lines = Vec::new();
    for (m, delta, w) in [(6u32, 3usize, 3usize), (6, 5, 5)] {
        let Ok(code) = bch_code(m, delta) else { continue };
        let Ok(sub) = fixed_weight_subcode(&code, w, &budgets()) else { continue };
        if sub.is_empty() {
            continue;
        }
        let bch = TestMatrix::from_code(sub.clone());
        let rnd = random_like(&sub, 77);
        for t in [3, 5] {
            let cfg = McConfig {
                trials: 20_000,
                seed: 11,
                ..McConfig::default()
            };
            let a = simulate_decoding(&bch, t, &cfg).unwrap();
            let b = simulate_decoding(&rnd, t, &cfg).unwrap();
            lines.push(format!(
                "BCH(m={m},delta={delta}) w={w} N={} t={t}: mean FP bch {:.4} random {:.4}",
                sub.len(),
                a.mean_false_positives.unwrap(),
                b.mean_false_positives.unwrap()
            ));
        }
    }
    lines.join("\n       ")
}

struct Criterion {
    id: u32,
    label: &'static str,
    limit: Duration,
    run: fn() -> Outcome,
}

fn main() -> ExitCode {
    let criteria = [
        Criterion { id: 1, label: "Fano moment identity", limit: Duration::from_secs(1), run: c1_fano_moments },
        Criterion { id: 2, label: "Pless identity on RS codes", limit: Duration::from_secs(5), run: c2_pless_rs },
        Criterion { id: 3, label: "KS(RS(5,2)) 3-disjunct", limit: Duration::from_secs(1), run: c3_ks_disjunct },
        Criterion { id: 4, label: "bound dominance chain", limit: Duration::from_secs(60), run: c4_bound_dominance },
        Criterion { id: 5, label: "Monte Carlo calibration", limit: Duration::from_secs(120), run: c5_monte_carlo },
        Criterion { id: 6, label: "spectral algebra", limit: Duration::from_secs(10), run: c6_spectral_algebra },
        Criterion { id: 7, label: "binomial moment bound grid", limit: Duration::from_secs(10), run: c7_mu_grid },
        Criterion { id: 8, label: "parameter tables", limit: Duration::from_secs(1), run: c8_parameter_tables },
        Criterion { id: 9, label: "COMP soundness", limit: Duration::from_secs(120), run: c9_comp_soundness },
        Criterion { id: 10, label: "BCH(6,5) w=3 pipeline", limit: Duration::from_secs(300), run: c10_bch_pipeline },
    ];
    let mut unexpected = 0;
    for c in &criteria {
        let start = Instant::now();
        let out = (c.run)();
        let elapsed = start.elapsed();
        let out = match out {
            Ok(msg) if elapsed > c.limit => Err(format!("{msg}; took {elapsed:.2?}, limit {:?}", c.limit)),
            o => o,
        };
        match out {
            Ok(msg) => println!("PASS [{:>2}] {}: {msg} ({elapsed:.2?})", c.id, c.label),
            Err(msg) => {
                let expected = EXPECTED_FAILURES.iter().any(|&(id, m)| id == c.id && msg == m);
                println!(
                    "FAIL [{:>2}] {}: {msg} ({elapsed:.2?}){}",
                    c.id,
                    c.label,
                    if expected { " [known, see README]" } else { "" }
                );
                if !expected {
                    unexpected += 1;
                }
            }
        }
    }
    let start = Instant::now();
    match c10b_bch_companion() {
        Ok(msg) => println!("PASS [10b] BCH(6,3) w=3 pipeline: {msg} ({:.2?})", start.elapsed()),
        Err(msg) => {
            println!("FAIL [10b] BCH(6,3) w=3 pipeline: {msg}");
            unexpected += 1;
        }
    }
    println!("REPORT BCH vs random: {}", bch_vs_random_report());
    if unexpected == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{unexpected} unexpected failure(s)");
        ExitCode::FAILURE
    }
}
