//! Browser bindings. Every export takes plain numbers or strings and returns a
//! JSON document; failures come back as `{"error": "..."}` so the page needs a
//! single code path.
//!
//! Instances are named by short strings: `fano`, `ks-rs:Q:K` or
//! `bch-cw:M:DELTA:W`.

use disjunct::bounds::{eps_cw, eps_cw_l2, eps_cw_minkowski, eps_cw_mz, eps_cw_rosenthal, BoundReport};
use disjunct::codes::TestMatrix;
use disjunct::instances::{self, Instance};
use disjunct::spectra::{
    cw_spectrum_of_matrix, dual_spectrum_cw, dual_spectrum_hamming, hamming_spectrum, SpectrumReport,
};
use disjunct::testing::{exact_report, simulate_decoding, McConfig, SimulationReport};
use disjunct::verify::{applicable_bounds, dual_distances, DualDistances};
use disjunct::Budgets;
use serde::Serialize;
use serde_json::json;
use wasm_bindgen::prelude::wasm_bindgen;

/// Work limits kept small enough for an interactive page.
fn budgets() -> Budgets {
    Budgets {
        code_size: 20_000,
        subcode: 2_000_000,
        spectrum_size: 4_000,
        disjunct_ops: 20_000_000,
    }
}

fn respond<T: Serialize>(r: Result<T, String>) -> String {
    match r {
        Ok(v) => serde_json::to_string(&v).expect("serializable"),
        Err(e) => json!({ "error": e }).to_string(),
    }
}

fn field<T: std::str::FromStr>(parts: &[&str], i: usize, name: &str) -> Result<T, String> {
    parts
        .get(i)
        .ok_or(format!("missing {name}"))?
        .trim()
        .parse()
        .map_err(|_| format!("{name} must be a non-negative integer"))
}

fn check_ks(q: u64, k: usize) -> Result<(), String> {
    if disjunct::galois::prime_power(q).is_none() {
        return Err(format!("{q} is not a prime power"));
    }
    if k == 0 || k as u64 >= q || (q as f64).powi(k as i32) > budgets().code_size as f64 {
        return Err(format!("need 1 <= k < q and q^k <= {}", budgets().code_size));
    }
    Ok(())
}

/// Parses an instance name.
pub fn parse_instance(spec: &str) -> Result<Instance, String> {
    let parts: Vec<&str> = spec.trim().split(':').collect();
    match parts[0] {
        "fano" => Ok(Instance {
            name: "fano".into(),
            matrix: instances::fano(),
            source: None,
        }),
        "ks-rs" => {
            let (q, k) = (field::<u64>(&parts, 1, "q")?, field::<usize>(&parts, 2, "k")?);
            check_ks(q, k)?;
            Ok(instances::ks_rs(q, k))
        }
        "bch-cw" => {
            let m = field::<u32>(&parts, 1, "m")?;
            let delta = field::<usize>(&parts, 2, "delta")?;
            let w = field::<usize>(&parts, 3, "w")?;
            if !(3..=7).contains(&m) {
                return Err("m must be between 3 and 7".into());
            }
            let code = disjunct::codes::bch_code(m, delta).map_err(|e| e.to_string())?;
            let sub = disjunct::codes::fixed_weight_subcode(&code, w, &budgets()).map_err(|e| e.to_string())?;
            if sub.is_empty() {
                return Err(format!("no codewords of weight {w}"));
            }
            Ok(Instance {
                name: spec.trim().into(),
                matrix: TestMatrix::from_code(sub),
                source: None,
            })
        }
        other => Err(format!("unknown instance {other:?}")),
    }
}

#[derive(Serialize)]
struct Curve {
    family: &'static str,
    /// `(t, epsilon)` points where the preconditions hold.
    points: Vec<(u64, f64)>,
}

pub fn bound_curves_json(mlen: u32, w: u32, ell: u32, t_max: u32) -> Result<serde_json::Value, String> {
    if t_max == 0 || t_max > 10_000 {
        return Err("t_max must be between 1 and 10000".into());
    }
    type Eval = fn(u64, u64, u64, u64) -> Result<BoundReport, disjunct::bounds::BoundError>;
    let families: [(&str, Eval); 5] = [
        ("cw", eps_cw),
        ("cw_minkowski", eps_cw_minkowski),
        ("cw_mz", eps_cw_mz),
        ("cw_rosenthal", eps_cw_rosenthal),
        ("cw_l2", |m, w, t, _| eps_cw_l2(m, w, t)),
    ];
    let (m, w, ell) = (mlen as u64, w as u64, ell as u64);
    let mut curves = Vec::new();
    for (family, eval) in families {
        let mut points = Vec::new();
        for t in 1..=t_max as u64 {
            let rep = eval(m, w, t, ell).map_err(|e| e.to_string())?;
            if let (true, Some(e)) = (rep.preconditions_met, rep.epsilon) {
                if e.is_finite() {
                    points.push((t, e));
                }
            }
        }
        curves.push(Curve { family, points });
    }
    Ok(json!({ "M": m, "w": w, "ell": ell, "curves": curves }))
}

/// ε against `t` for each constant-weight family at fixed `M`, `w`, `l`.
#[wasm_bindgen]
pub fn bound_curves(mlen: u32, w: u32, ell: u32, t_max: u32) -> String {
    respond(bound_curves_json(mlen, w, ell, t_max))
}

pub fn spectrum_json(instance: &str, rmax: u32) -> Result<serde_json::Value, String> {
    let inst = parse_instance(instance)?;
    let m = &inst.matrix;
    if m.columns() as u64 > budgets().spectrum_size {
        return Err(format!("N = {} is above the page limit of {}", m.columns(), budgets().spectrum_size));
    }
    let spec = cw_spectrum_of_matrix(m).map_err(|e| e.to_string())?;
    let dual = dual_spectrum_cw(&spec).map_err(|e| e.to_string())?;
    let johnson = SpectrumReport::johnson(&spec, &dual, rmax).map_err(|e| e.to_string())?;
    let hamming = match &inst.source {
        Some(code) => {
            let s = hamming_spectrum(code, &budgets()).map_err(|e| e.to_string())?;
            Some(SpectrumReport::hamming(&s, &dual_spectrum_hamming(&s), rmax))
        }
        None => None,
    };
    Ok(json!({
        "instance": inst.name,
        "M": m.rows(),
        "N": m.columns(),
        "w": m.weight(),
        "johnson": johnson,
        "hamming": hamming,
    }))
}

/// Distance distribution, dual spectrum and moment table of an instance.
#[wasm_bindgen]
pub fn spectrum(instance: &str, rmax: u32) -> String {
    respond(spectrum_json(instance, rmax))
}

#[derive(Serialize)]
struct Simulation {
    instance: String,
    exact: Option<SimulationReport>,
    monte_carlo: SimulationReport,
    /// `None` when the instance is too large to measure on the page.
    dual_distances: Option<DualDistances>,
    bounds: Vec<BoundReport>,
}

pub fn simulate_json(instance: &str, t: u32, trials: u32, seed: u32) -> Result<serde_json::Value, String> {
    let inst = parse_instance(instance)?;
    let m = &inst.matrix;
    let t = t as usize;
    if trials == 0 || trials > 1_000_000 {
        return Err("trials must be between 1 and 1000000".into());
    }
    let cfg = McConfig {
        trials: trials as u64,
        seed: seed as u64,
        ..McConfig::default()
    };
    let monte_carlo = simulate_decoding(m, t, &cfg).map_err(|e| e.to_string())?;
    let exact = exact_report(m, t, &budgets()).ok();
    let duals = dual_distances(m, inst.source.as_ref(), &budgets()).ok();
    let bounds = duals.map_or_else(Vec::new, |d| applicable_bounds(m, inst.source.as_ref(), d, t));
    let sim = Simulation {
        instance: inst.name,
        exact,
        monte_carlo,
        dual_distances: duals,
        bounds,
    };
    serde_json::to_value(sim).map_err(|e| e.to_string())
}

/// COMP decoding of random `t`-sets, exact `P_A` when cheap, and every bound
/// that applies to the instance.
#[wasm_bindgen]
pub fn simulate(instance: &str, t: u32, trials: u32, seed: u32) -> String {
    respond(simulate_json(instance, t, trials, seed))
}
