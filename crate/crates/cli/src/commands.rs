use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use disjunct::bounds::{best_even_ell, BoundError, BoundReport, BoundRequest, Family};
use disjunct::codes::{bch_code, fixed_weight_subcode, kautz_singleton, rs_code, ConstantWeightCode, QaryCode, TestMatrix};
use disjunct::formats::{parse_blocks, parse_code, parse_matrix, write_code, write_matrix};
use disjunct::galois::FieldSpec;
use disjunct::instances::Instance;
use disjunct::spectra::{
    cw_spectrum, cw_spectrum_sampled, dual_spectrum_cw, dual_spectrum_hamming, hamming_spectrum,
    hamming_spectrum_sampled, SpectrumReport,
};
use disjunct::testing::{
    decoding_trial, exact_report, simulate_decoding, trials_csv, IntervalKind, McConfig, Mode, SimulationReport,
    TestingError,
};
use disjunct::verify::{self, DualDistances, SuiteCheck, BOUND_SLACK};
use disjunct::Budgets;
use serde::Serialize;

use crate::render::{csv_table, emit, opt};
use crate::{
    BoundArgs, CliError, Command, ConstructArgs, ConstructFamily, Global, Interval, SimulateArgs, SpectraArgs,
    VerifyArgs,
};

type Result<T> = std::result::Result<T, CliError>;

pub fn run(cmd: &Command, g: &Global) -> Result<String> {
    let budgets = g.budgets();
    match cmd {
        Command::Construct(a) => construct(a, g, &budgets),
        Command::Spectra(a) => spectra(a, g, &budgets),
        Command::Bound(a) => bound(a, g, &budgets),
        Command::Simulate(a) => simulate(a, g, &budgets),
        Command::Verify(a) => verify_cmd(a, g, &budgets),
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn load_matrix(path: &Path) -> Result<ConstantWeightCode> {
    parse_matrix(&read(path)?).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn load_code(path: &Path) -> Result<QaryCode> {
    parse_code(&read(path)?).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn need<T: Copy>(v: Option<T>, flag: &str, family: &str) -> Result<T> {
    v.ok_or_else(|| CliError::Input(format!("--{flag} is required for --family {family}")))
}

#[derive(Serialize)]
struct ConstructReport {
    family: String,
    params: BTreeMap<String, u64>,
    #[serde(rename = "M")]
    rows: usize,
    #[serde(rename = "N")]
    columns: usize,
    w: usize,
    min_distance: Option<usize>,
    digest: String,
    matrix_file: Option<String>,
    code_file: Option<String>,
}

fn construct(a: &ConstructArgs, g: &Global, budgets: &Budgets) -> Result<String> {
    let mut params = BTreeMap::new();
    let mut source = None;
    let (family, code) = match a.family {
        ConstructFamily::KsRs => {
            let q = need(a.q, "q", "ks-rs")?;
            let k = need(a.k, "k", "ks-rs")?;
            params.insert("q".to_string(), q);
            params.insert("k".to_string(), k as u64);
            let field = FieldSpec::with_order(q)?;
            let rs = rs_code(&field, k, budgets)?;
            let m = kautz_singleton(&rs)?;
            source = Some(rs);
            ("ks-rs", m.code().expect("constant weight"))
        }
        ConstructFamily::BchCw => {
            let m = need(a.m, "m", "bch-cw")?;
            let delta = need(a.delta, "delta", "bch-cw")?;
            let w = need(a.w, "w", "bch-cw")?;
            params.insert("m".to_string(), m as u64);
            params.insert("delta".to_string(), delta as u64);
            params.insert("w".to_string(), w as u64);
            let bch = bch_code(m, delta)?;
            ("bch-cw", fixed_weight_subcode(&bch, w, budgets)?)
        }
        ConstructFamily::Design => {
            let path = a
                .input
                .as_deref()
                .ok_or_else(|| CliError::Input("--in is required for --family design".into()))?;
            let code = parse_blocks(&read(path)?).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
            ("design", code)
        }
    };
    if let Some(path) = &a.out {
        write(path, &write_matrix(&code))?;
    }
    match (&a.code_out, &source) {
        (Some(path), Some(rs)) => write(path, &write_code(rs))?,
        (Some(_), None) => return Err(CliError::Input("--code-out applies to --family ks-rs only".into())),
        _ => {}
    }
    let report = ConstructReport {
        family: family.into(),
        params,
        rows: code.length(),
        columns: code.len(),
        w: code.weight(),
        min_distance: code.min_distance(),
        digest: code.digest(),
        matrix_file: a.out.as_ref().map(|p| p.display().to_string()),
        code_file: a.code_out.as_ref().map(|p| p.display().to_string()),
    };
    Ok(emit(
        g.format,
        &report,
        |r| {
            csv_table(
                &["family", "M", "N", "w", "min_distance", "digest"],
                [vec![
                    r.family.clone(),
                    r.rows.to_string(),
                    r.columns.to_string(),
                    r.w.to_string(),
                    opt(&r.min_distance),
                    r.digest.clone(),
                ]],
            )
        },
        |r| {
            format!(
                "{} M={} N={} w={} min distance {}\ndigest {}\n",
                r.family,
                r.rows,
                r.columns,
                r.w,
                r.min_distance.map_or("n/a".into(), |d| d.to_string()),
                r.digest
            )
        },
    ))
}

#[derive(Serialize)]
struct SpectraOutput {
    johnson: Option<SpectrumReport>,
    hamming: Option<SpectrumReport>,
}

fn spectra(a: &SpectraArgs, g: &Global, budgets: &Budgets) -> Result<String> {
    if a.matrix.is_none() && a.code.is_none() {
        return Err(CliError::Input("give --matrix, --code or both".into()));
    }
    let johnson = match &a.matrix {
        Some(path) => {
            let code = load_matrix(path)?;
            let spec = match a.sample {
                Some(pairs) => cw_spectrum_sampled(&code, pairs, a.seed)?,
                None => cw_spectrum(&code, budgets)?,
            };
            let dual = dual_spectrum_cw(&spec)?;
            Some(SpectrumReport::johnson(&spec, &dual, a.rmax)?)
        }
        None => None,
    };
    let hamming = match &a.code {
        Some(path) => {
            let code = load_code(path)?;
            let spec = match a.sample {
                Some(pairs) => hamming_spectrum_sampled(&code, pairs, a.seed)?,
                None => hamming_spectrum(&code, budgets)?,
            };
            let dual = dual_spectrum_hamming(&spec);
            Some(SpectrumReport::hamming(&spec, &dual, a.rmax))
        }
        None => None,
    };
    let out = SpectraOutput { johnson, hamming };
    let reports = |o: &SpectraOutput| -> Vec<SpectrumReport> { o.johnson.iter().chain(&o.hamming).cloned().collect() };
    Ok(emit(
        g.format,
        &out,
        |o| {
            let rows = reports(o).into_iter().flat_map(|r| {
                (0..r.counts.len())
                    .map(|i| {
                        vec![
                            r.scheme.clone(),
                            i.to_string(),
                            r.counts[i].to_string(),
                            r.distribution[i].clone(),
                            r.dual[i].clone(),
                        ]
                    })
                    .collect::<Vec<_>>()
            });
            csv_table(&["scheme", "index", "count", "distribution", "dual"], rows)
        },
        |o| {
            let mut s = String::new();
            for r in reports(o) {
                s += &format!(
                    "{} scheme: length {} parameter {} N={}{}\n",
                    r.scheme,
                    r.length,
                    r.parameter,
                    r.size,
                    if r.exact { "" } else { " (sampled)" }
                );
                s += &format!("  distribution  {}\n", r.distribution.join(" "));
                s += &format!("  dual          {}\n", r.dual.join(" "));
                s += &format!(
                    "  dual distance {}, dual nonnegative {}\n",
                    r.dual_distance.map_or("none".into(), |d| d.to_string()),
                    r.dual_nonnegative
                );
                for m in &r.moments {
                    s += &format!(
                        "  r={:<2} {:?}{} code {} reference {}\n",
                        m.r,
                        m.relation,
                        if m.below_dual_distance { " (r < d')" } else { "" },
                        m.code,
                        m.reference
                    );
                }
            }
            s
        },
    ))
}

#[derive(Serialize)]
struct BoundEntry {
    family: String,
    ell: Option<u64>,
    report: BoundReport,
}

#[derive(Serialize)]
struct Skipped {
    family: String,
    reason: String,
}

#[derive(Serialize)]
struct BoundOutput {
    reports: Vec<BoundEntry>,
    skipped: Vec<Skipped>,
}

fn parse_families(names: &[String]) -> Result<(Vec<Family>, bool)> {
    if names.iter().any(|n| n == "all") {
        return Ok((Family::ALL.to_vec(), true));
    }
    let fams = names
        .iter()
        .map(|n| {
            Family::from_name(&n.replace('-', "_")).ok_or_else(|| {
                let known: Vec<_> = Family::ALL.iter().map(|f| f.name()).collect();
                CliError::Input(format!("unknown family {n:?}; known: {}, all", known.join(", ")))
            })
        })
        .collect::<Result<_>>()?;
    Ok((fams, false))
}

fn measured_dprime(code: &ConstantWeightCode, budgets: &Budgets) -> Result<Option<u64>> {
    Ok(dual_spectrum_cw(&cw_spectrum(code, budgets)?)?.dual_distance.map(|d| d as u64))
}

fn bound(a: &BoundArgs, g: &Global, budgets: &Budgets) -> Result<String> {
    let (families, lenient) = parse_families(&a.family)?;
    let matrix = a.matrix.as_deref().map(load_matrix).transpose()?;
    let code = a.code.as_deref().map(load_code).transpose()?;
    let johnson = match &matrix {
        Some(m) if a.dprime.is_none() => measured_dprime(m, budgets)?,
        _ => None,
    };
    let hamming = match &code {
        Some(c) if a.dprime.is_none() => dual_spectrum_hamming(&hamming_spectrum(c, budgets)?)
            .dual_distance
            .map(|d| d as u64),
        _ => None,
    };
    let auto = a.ell.as_deref() == Some("auto");
    let ell = match a.ell.as_deref() {
        None | Some("auto") => None,
        Some(s) => Some(
            s.parse::<u64>()
                .map_err(|_| CliError::Input(format!("--ell must be a number or auto, got {s:?}")))?,
        ),
    };
    let mut out = BoundOutput {
        reports: Vec::new(),
        skipped: Vec::new(),
    };
    for family in families {
        let hamming_side = matches!(family, Family::Nonbinary | Family::RsAsymptotic);
        let dprime = a.dprime.or(if hamming_side { hamming } else { johnson });
        let req = BoundRequest {
            family: Some(family),
            q: a.q.or(code.as_ref().map(|c| c.alphabet_size() as u64)),
            n: a.n.or(code.as_ref().map(|c| c.length() as u64)),
            mlen: a.mlen.or(matrix.as_ref().map(|m| m.length() as u64)),
            w: a.w.or(matrix.as_ref().map(|m| m.weight() as u64)),
            t: Some(a.t),
            ell,
            dprime,
        };
        let result = if auto {
            match dprime {
                Some(d) => best_even_ell(d, &req).map(|(l, r)| (Some(l), r)),
                None => Err(BoundError::Missing("dprime")),
            }
        } else {
            req.evaluate().map(|r| (r.inputs.get("ell").copied(), r))
        };
        match result {
            Ok((ell, report)) => out.reports.push(BoundEntry {
                family: family.name().into(),
                ell,
                report,
            }),
            Err(e @ (BoundError::Missing(_) | BoundError::NoAdmissibleEll(_))) if lenient => out.skipped.push(Skipped {
                family: family.name().into(),
                reason: e.to_string(),
            }),
            Err(e) => return Err(CliError::Input(format!("{}: {e}", family.name()))),
        }
    }
    Ok(emit(
        g.format,
        &out,
        |o| {
            csv_table(
                &["family", "ell", "epsilon", "log_epsilon", "epsilon_exact", "trivial", "preconditions_met"],
                o.reports.iter().map(|e| {
                    vec![
                        e.family.clone(),
                        opt(&e.ell),
                        opt(&e.report.epsilon),
                        opt(&e.report.log_epsilon),
                        opt(&e.report.epsilon_exact),
                        e.report.trivial.to_string(),
                        e.report.preconditions_met.to_string(),
                    ]
                }),
            )
        },
        |o| {
            let mut s = String::new();
            for e in &o.reports {
                let eps = match e.report.epsilon {
                    Some(v) => format!("{v:.6e}{}", if e.report.trivial { " (trivial)" } else { "" }),
                    None => "n/a".into(),
                };
                s += &format!("{:<14} l={:<4} eps={eps}\n", e.family, opt(&e.ell));
                for c in &e.report.conditions {
                    s += &format!(
                        "    [{}] {}{}\n",
                        if c.holds { "ok" } else { "no" },
                        c.name,
                        if c.required { "" } else { " (advisory)" }
                    );
                }
                for n in &e.report.notes {
                    s += &format!("    note: {n}\n");
                }
            }
            for k in &o.skipped {
                s += &format!("{:<14} skipped: {}\n", k.family, k.reason);
            }
            s
        },
    ))
}

#[derive(Serialize)]
struct BoundRow {
    formula_id: String,
    ell: Option<u64>,
    epsilon: f64,
    /// Exact mode: `P_A <= epsilon`. Monte Carlo: `epsilon` is above the
    /// interval's lower end.
    consistent: bool,
}

#[derive(Serialize)]
struct SimulateOutput {
    report: SimulationReport,
    dual_distances: Option<DualDistances>,
    bounds: Vec<BoundRow>,
    notes: Vec<String>,
}

fn simulate(a: &SimulateArgs, g: &Global, budgets: &Budgets) -> Result<String> {
    let code = load_matrix(&a.matrix)?;
    let matrix = TestMatrix::from_code(code);
    let source = a.code.as_deref().map(load_code).transpose()?;
    if let Some(src) = &source {
        let image = kautz_singleton(src)?;
        if image.code().map(|c| c.digest()) != matrix.code().map(|c| c.digest()) {
            return Err(CliError::Input("--code is not the source of --matrix".into()));
        }
    }
    let mut notes = Vec::new();
    let cfg = McConfig {
        trials: a.trials,
        seed: a.seed,
        confidence: a.confidence,
        interval: match a.interval {
            Interval::Wilson => IntervalKind::Wilson,
            Interval::ClopperPearson => IntervalKind::ClopperPearson,
        },
    };
    let exact = if a.exact {
        match exact_report(&matrix, a.t, budgets) {
            Ok(r) => Some(r),
            Err(e @ TestingError::BudgetExceeded { .. }) => {
                notes.push(format!("exact enumeration skipped ({e}); Monte Carlo used"));
                None
            }
            Err(e) => return Err(e.into()),
        }
    } else {
        None
    };
    let report = match exact {
        Some(r) => r,
        None => simulate_decoding(&matrix, a.t, &cfg)?,
    };
    if let Some(path) = &a.trials_csv {
        let records: Vec<_> = (0..a.trials).map(|i| decoding_trial(&matrix, a.t, a.seed, i)).collect();
        write(path, &trials_csv(&records))?;
    }
    let duals = match verify::dual_distances(&matrix, source.as_ref(), budgets) {
        Ok(d) => Some(d),
        Err(e) => {
            notes.push(format!("dual distance not measured ({e}); bound table omitted"));
            None
        }
    };
    let bounds = duals
        .map(|d| verify::applicable_bounds(&matrix, source.as_ref(), d, a.t))
        .unwrap_or_default()
        .into_iter()
        .map(|r| {
            let eps = r.epsilon.unwrap();
            let consistent = match report.mode {
                Mode::Exact => report.p_hat <= eps + BOUND_SLACK,
                Mode::MonteCarlo => report.ci.0 <= eps,
            };
            BoundRow {
                ell: r.inputs.get("ell").copied().or((r.formula_id == "cw_l2").then_some(2)),
                formula_id: r.formula_id,
                epsilon: eps,
                consistent,
            }
        })
        .collect::<Vec<_>>();
    if duals.is_some() && bounds.is_empty() {
        notes.push("no bound applies: every family needs l < d' with its preconditions".into());
    }
    let out = SimulateOutput {
        report,
        dual_distances: duals,
        bounds,
        notes,
    };
    Ok(emit(
        g.format,
        &out,
        |o| {
            let r = &o.report;
            let mut rows = vec![vec![
                "measured".to_string(),
                String::new(),
                r.p_hat.to_string(),
                r.ci.0.to_string(),
                r.ci.1.to_string(),
                String::new(),
            ]];
            rows.extend(o.bounds.iter().map(|b| {
                vec![
                    b.formula_id.clone(),
                    opt(&b.ell),
                    b.epsilon.to_string(),
                    String::new(),
                    String::new(),
                    b.consistent.to_string(),
                ]
            }));
            csv_table(&["source", "ell", "value", "ci_low", "ci_high", "consistent"], rows)
        },
        |o| {
            let r = &o.report;
            let mut s = format!(
                "{} t={} N={}: {} of {} draws violate, p = {:.6e}",
                match r.mode {
                    Mode::Exact => "exact",
                    Mode::MonteCarlo => "monte carlo",
                },
                r.t,
                r.columns,
                r.violations,
                r.trials,
                r.p_hat
            );
            match (&r.exact, r.mode) {
                (Some(x), _) => s += &format!(" ({x})\n"),
                (None, _) => s += &format!(" [{:.3e}, {:.3e}] at {}\n", r.ci.0, r.ci.1, r.confidence),
            }
            if let (Some(rate), Some(mean)) = (r.per_item_fp_rate, r.mean_false_positives) {
                s += &format!(
                    "COMP: {mean:.4} false positives per trial, per-item rate {rate:.3e}, {} false negatives\n",
                    r.false_negatives
                );
            }
            for b in &o.bounds {
                s += &format!(
                    "  {:<14} l={:<3} eps={:.6e} {}\n",
                    b.formula_id,
                    opt(&b.ell),
                    b.epsilon,
                    if b.consistent { "ok" } else { "VIOLATED" }
                );
            }
            for n in &o.notes {
                s += &format!("note: {n}\n");
            }
            s
        },
    ))
}

#[derive(Serialize)]
struct VerifyOutput {
    passed: bool,
    total: usize,
    failed: usize,
    checks: Vec<SuiteCheck>,
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn verify_cmd(a: &VerifyArgs, g: &Global, budgets: &Budgets) -> Result<String> {
    for o in &a.only {
        if !verify::GROUPS.contains(&o.as_str()) {
            return Err(CliError::Input(format!(
                "unknown group {o:?}; known: {}",
                verify::GROUPS.join(", ")
            )));
        }
    }
    let mut extra = Vec::new();
    if let Some(path) = &a.matrix {
        extra.push(Instance {
            name: path.display().to_string(),
            matrix: TestMatrix::from_code(load_matrix(path)?),
            source: None,
        });
    }
    let checks = verify::run_suite(&a.only, &extra, budgets);
    let failed = checks.iter().filter(|c| !c.passed).count();
    let out = VerifyOutput {
        passed: failed == 0,
        total: checks.len(),
        failed,
        checks,
    };
    let text = emit(
        g.format,
        &out,
        |o| {
            csv_table(
                &["group", "name", "passed", "detail"],
                o.checks.iter().map(|c| {
                    vec![
                        csv_field(&c.group),
                        csv_field(&c.name),
                        c.passed.to_string(),
                        csv_field(&c.detail),
                    ]
                }),
            )
        },
        |o| {
            let mut s = String::new();
            for c in &o.checks {
                s += &format!(
                    "{} {:<13} {}: {}\n",
                    if c.passed { "PASS" } else { "FAIL" },
                    c.group,
                    c.name,
                    c.detail
                );
            }
            s += &format!("{} of {} checks passed\n", o.total - o.failed, o.total);
            s
        },
    );
    if out.passed {
        Ok(text)
    } else {
        Err(CliError::Failed(text))
    }
}
