//! Zenith-angle sweeps and protocol crossover detection.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::config::{resolve_scenario, Scenario};
use crate::evaluate::evaluate_point_for;
use crate::link::TransmittanceBreakdown;
use crate::protocols::Protocol;
use crate::{check_finite, Error, Result};

/// Upper end of any sweep, in degrees.
pub const SWEEP_LIMIT_DEG: f64 = 85.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub theta_start_deg: f64,
    pub theta_end_deg: f64,
    pub theta_step_deg: f64,
    pub scenarios: Vec<String>,
    pub protocols: Vec<Protocol>,
}

impl Default for SweepSpec {
    fn default() -> Self {
        SweepSpec {
            theta_start_deg: 0.0,
            theta_end_deg: SWEEP_LIMIT_DEG,
            theta_step_deg: 1.0,
            scenarios: crate::config::NamedScenario::ALL.iter().map(|n| n.as_str().to_string()).collect(),
            protocols: Protocol::ALL.to_vec(),
        }
    }
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        check_finite("theta_start", self.theta_start_deg)?;
        check_finite("theta_end", self.theta_end_deg)?;
        check_finite("theta_step", self.theta_step_deg)?;
        if !(self.theta_start_deg >= 0.0 && self.theta_start_deg < self.theta_end_deg && self.theta_end_deg <= SWEEP_LIMIT_DEG) {
            return Err(Error::validation("theta_range", format!("need 0 <= start < end <= {SWEEP_LIMIT_DEG}")));
        }
        if !(self.theta_step_deg > 0.0) {
            return Err(Error::validation("theta_step", "must be > 0"));
        }
        if self.scenarios.is_empty() {
            return Err(Error::validation("scenarios", "must not be empty"));
        }
        if self.protocols.is_empty() {
            return Err(Error::validation("protocols", "must not be empty"));
        }
        Ok(())
    }

    /// Sample angles `start + i step` up to and including `end`.
    pub fn angles(&self) -> Vec<f64> {
        let span = (self.theta_end_deg - self.theta_start_deg) / self.theta_step_deg;
        let n = (span + 1e-9).floor() as usize + 1;
        (0..n).map(|i| self.theta_start_deg + i as f64 * self.theta_step_deg).collect()
    }
}

/// Parses `start:end:step` in degrees.
pub fn parse_theta_range(text: &str) -> Result<(f64, f64, f64)> {
    let parts: Vec<&str> = text.split(':').collect();
    let bad = || Error::validation("theta_range", format!("expected start:end:step, got `{text}`"));
    if parts.len() != 3 {
        return Err(bad());
    }
    let mut v = [0.0; 3];
    for (slot, p) in v.iter_mut().zip(&parts) {
        *slot = p.trim().parse().map_err(|_| bad())?;
    }
    Ok((v[0], v[1], v[2]))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProtocolSample {
    pub protocol: Protocol,
    pub qber: f64,
    pub keyrate: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RowData {
    pub breakdown: TransmittanceBreakdown,
    pub stray_per_window: f64,
    pub p_click: f64,
    pub p_coin: f64,
    pub protocols: Vec<ProtocolSample>,
}

impl RowData {
    pub fn sample(&self, p: Protocol) -> Option<&ProtocolSample> {
        self.protocols.iter().find(|s| s.protocol == p)
    }
}

/// One `(scenario, zenith)` sample; failed points carry the error message.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub scenario: String,
    pub theta_deg: f64,
    pub data: Option<RowData>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct SweepTable {
    pub rows: Vec<SweepRow>,
}

impl SweepTable {
    pub fn scenario_rows<'a>(&'a self, name: &'a str) -> impl Iterator<Item = &'a SweepRow> + 'a {
        self.rows.iter().filter(move |r| r.scenario == name)
    }

    /// Subtable holding only the rows of one scenario.
    pub fn for_scenario(&self, name: &str) -> SweepTable {
        SweepTable { rows: self.scenario_rows(name).cloned().collect() }
    }

    pub fn errors(&self) -> impl Iterator<Item = &SweepRow> {
        self.rows.iter().filter(|r| r.error.is_some())
    }
}

pub fn sweep_row(s: &Scenario, theta_deg: f64, protocols: &[Protocol]) -> SweepRow {
    match evaluate_point_for(s, theta_deg, protocols) {
        Ok(p) => SweepRow {
            scenario: s.name.clone(),
            theta_deg,
            data: Some(RowData {
                breakdown: p.budget.breakdown,
                stray_per_window: p.stray.photons_per_window,
                p_click: p.outcome.clicks.p_click,
                p_coin: p.outcome.coincidences.p_coin,
                protocols: p
                    .outcome
                    .results
                    .iter()
                    .map(|r| ProtocolSample { protocol: r.protocol, qber: r.qber, keyrate: r.keyrate })
                    .collect(),
            }),
            error: None,
        },
        Err(e) => SweepRow { scenario: s.name.clone(), theta_deg, data: None, error: Some(e.to_string()) },
    }
}

/// Runs the sweep over `catalog`, picking scenarios by name in spec order.
pub fn run_sweep(spec: &SweepSpec, catalog: &[Scenario]) -> Result<SweepTable> {
    spec.validate()?;
    let mut chosen = Vec::with_capacity(spec.scenarios.len());
    for name in &spec.scenarios {
        let s = catalog
            .iter()
            .find(|s| &s.name == name)
            .ok_or_else(|| Error::UnknownScenario(name.clone()))?;
        chosen.push(s);
    }
    let angles = spec.angles();
    let mut rows = Vec::with_capacity(chosen.len() * angles.len());
    for s in chosen {
        for &theta in &angles {
            rows.push(sweep_row(s, theta, &spec.protocols));
        }
    }
    Ok(SweepTable { rows })
}

/// Resolves every scenario named in the spec and runs the sweep.
pub fn run_named_sweep(spec: &SweepSpec) -> Result<SweepTable> {
    let catalog = spec.scenarios.iter().map(|n| resolve_scenario(n)).collect::<Result<Vec<_>>>()?;
    let mut spec = spec.clone();
    spec.scenarios = catalog.iter().map(|s| s.name.clone()).collect();
    run_sweep(&spec, &catalog)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Metric {
    Qber,
    Keyrate,
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Metric::Qber => "qber",
            Metric::Keyrate => "keyrate",
        })
    }
}

impl FromStr for Metric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "qber" => Ok(Metric::Qber),
            "keyrate" | "rate" => Ok(Metric::Keyrate),
            _ => Err(Error::validation("metric", format!("expected qber or keyrate, got `{s}`"))),
        }
    }
}

/// Default relative QBER gap that counts as the protocols having separated.
pub const DEFAULT_QBER_GAP: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GapSample {
    pub theta_deg: f64,
    pub first: f64,
    pub second: f64,
    /// `first - second` for keyrates, `|first - second| / max` for QBERs.
    pub gap: f64,
}

fn metric_value(row: &RowData, metric: Metric, p: Protocol) -> Option<f64> {
    row.sample(p).map(|s| match metric {
        Metric::Qber => s.qber,
        Metric::Keyrate => s.keyrate,
    })
}

/// Pairwise comparison along a single-scenario table, skipping failed rows.
pub fn gap_profile(table: &SweepTable, metric: Metric, pair: (Protocol, Protocol)) -> Result<Vec<GapSample>> {
    let Some(first_row) = table.rows.first() else {
        return Err(Error::validation("table", "needs at least two rows"));
    };
    if table.rows.iter().any(|r| r.scenario != first_row.scenario) {
        return Err(Error::validation("table", "crossover needs rows from a single scenario"));
    }
    if table.rows.len() < 2 {
        return Err(Error::validation("table", "needs at least two rows"));
    }
    let mut out = Vec::new();
    for row in &table.rows {
        let Some(data) = &row.data else { continue };
        let (Some(a), Some(b)) = (metric_value(data, metric, pair.0), metric_value(data, metric, pair.1)) else {
            return Err(Error::validation("pair", format!("protocol {} or {} missing from table", pair.0, pair.1)));
        };
        let gap = match metric {
            Metric::Keyrate => a - b,
            Metric::Qber => {
                let top = a.abs().max(b.abs());
                if top == 0.0 { 0.0 } else { (a - b).abs() / top }
            }
        };
        out.push(GapSample { theta_deg: row.theta_deg, first: a, second: b, gap });
    }
    Ok(out)
}

/// Keyrate metric: smallest angle where `first - second` changes sign, linearly
/// interpolated; samples where both coincide carry no sign. QBER metric: first
/// sampled angle whose relative gap exceeds `qber_gap`.
pub fn find_crossover(
    table: &SweepTable,
    metric: Metric,
    pair: (Protocol, Protocol),
    qber_gap: f64,
) -> Result<Option<f64>> {
    let profile = gap_profile(table, metric, pair)?;
    Ok(match metric {
        Metric::Qber => profile.iter().find(|g| g.gap > qber_gap).map(|g| g.theta_deg),
        Metric::Keyrate => sign_change(&profile),
    })
}

fn sign_change(profile: &[GapSample]) -> Option<f64> {
    let mut last: Option<(usize, &GapSample)> = None;
    for (i, g) in profile.iter().enumerate() {
        if g.gap == 0.0 {
            continue;
        }
        if let Some((j, p)) = last {
            if p.gap.signum() != g.gap.signum() {
                if i == j + 1 {
                    let t = p.gap / (p.gap - g.gap);
                    return Some(p.theta_deg + t * (g.theta_deg - p.theta_deg));
                }
                return Some(profile[j + 1].theta_deg);
            }
        }
        last = Some((i, g));
    }
    None
}
