//! Browser bindings: zenith sweeps, single-point reports and crossovers as JSON.
//!
//! Every export takes a scenario reference (a named default or a full JSON
//! document) plus a JSON object of `key: value` overrides using the same keys
//! as the command line `--set` flag.

use qkdlink::config::{NamedScenario, Scenario};
use qkdlink::evaluate::evaluate_point;
use qkdlink::protocols::Protocol;
use qkdlink::sweep::{find_crossover, run_sweep, Metric, SweepSpec, SweepTable};
use serde::Serialize;
use serde_json::{json, Map, Value};
use wasm_bindgen::prelude::*;

fn scenario(reference: &str, overrides: &str) -> Result<Scenario, String> {
    let text = reference.trim();
    let base = if text.starts_with('{') {
        Scenario::from_json_str(text)
    } else {
        text.parse::<NamedScenario>().map(NamedScenario::scenario)
    }
    .map_err(|e| e.to_string())?;
    let overrides = overrides.trim();
    if overrides.is_empty() {
        return Ok(base);
    }
    let map: Map<String, Value> = serde_json::from_str(overrides).map_err(|e| format!("overrides: {e}"))?;
    let pairs: Vec<(String, String)> = map
        .into_iter()
        .map(|(k, v)| {
            let raw = match v {
                Value::String(s) => s,
                other => other.to_string(),
            };
            (k, raw)
        })
        .collect();
    base.with_overrides(&pairs).map_err(|e| e.to_string())
}

fn table(s: &Scenario, start: f64, end: f64, step: f64) -> Result<SweepTable, String> {
    let spec = SweepSpec {
        theta_start_deg: start,
        theta_end_deg: end,
        theta_step_deg: step,
        scenarios: vec![s.name.clone()],
        protocols: Protocol::ALL.to_vec(),
    };
    spec.validate().map_err(|e| e.to_string())?;
    run_sweep(&spec, std::slice::from_ref(s)).map_err(|e| e.to_string())
}

#[derive(Serialize, Default)]
struct Curves {
    theta_deg: Vec<f64>,
    eta_total: Vec<Option<f64>>,
    qber: Map<String, Value>,
    keyrate: Map<String, Value>,
}

pub fn sweep_curves(reference: &str, overrides: &str, start: f64, end: f64, step: f64) -> Result<String, String> {
    let s = scenario(reference, overrides)?;
    let t = table(&s, start, end, step)?;
    let mut out = Curves::default();
    let mut qber: Vec<Vec<Option<f64>>> = vec![Vec::new(); Protocol::ALL.len()];
    let mut rate = qber.clone();
    for row in &t.rows {
        out.theta_deg.push(row.theta_deg);
        out.eta_total.push(row.data.as_ref().map(|d| d.breakdown.eta_total));
        for (i, p) in Protocol::ALL.iter().enumerate() {
            let sample = row.data.as_ref().and_then(|d| d.sample(*p));
            qber[i].push(sample.map(|x| x.qber));
            rate[i].push(sample.map(|x| x.keyrate));
        }
    }
    for (i, p) in Protocol::ALL.iter().enumerate() {
        out.qber.insert(p.as_str().into(), json!(qber[i]));
        out.keyrate.insert(p.as_str().into(), json!(rate[i]));
    }
    serde_json::to_string(&out).map_err(|e| e.to_string())
}

pub fn point_report(reference: &str, overrides: &str, theta_deg: f64) -> Result<String, String> {
    let s = scenario(reference, overrides)?;
    let p = evaluate_point(&s, theta_deg).map_err(|e| e.to_string())?;
    serde_json::to_string(&p).map_err(|e| e.to_string())
}

pub fn crossover_report(reference: &str, overrides: &str, pair: &str, metric: &str, threshold: f64) -> Result<String, String> {
    let s = scenario(reference, overrides)?;
    let (a, b) = pair.split_once(',').ok_or_else(|| format!("pair `{pair}` needs two protocols"))?;
    let pair: (Protocol, Protocol) = (a.parse().map_err(|e: qkdlink::Error| e.to_string())?, b.parse().map_err(|e: qkdlink::Error| e.to_string())?);
    let metric: Metric = metric.parse().map_err(|e: qkdlink::Error| e.to_string())?;
    let t = table(&s, 0.0, s.geometry.max_zenith_deg, 1.0)?;
    let angle = find_crossover(&t, metric, pair, threshold).map_err(|e| e.to_string())?;
    Ok(json!({ "crossover_deg": angle }).to_string())
}

pub fn scenario_document(reference: &str) -> Result<String, String> {
    scenario(reference, "").map(|s| s.to_json_string())
}

#[wasm_bindgen]
pub fn sweep(reference: &str, overrides: &str, start: f64, end: f64, step: f64) -> Result<String, JsValue> {
    sweep_curves(reference, overrides, start, end, step).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn point(reference: &str, overrides: &str, theta_deg: f64) -> Result<String, JsValue> {
    point_report(reference, overrides, theta_deg).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn crossover(reference: &str, overrides: &str, pair: &str, metric: &str, threshold: f64) -> Result<String, JsValue> {
    crossover_report(reference, overrides, pair, metric, threshold).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn default_scenario(reference: &str) -> Result<String, JsValue> {
    scenario_document(reference).map_err(|e| JsValue::from_str(&e))
}
