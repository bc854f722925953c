//! Full point evaluation: transmittance, noise, QBER and keyrate for every protocol.

use serde::Serialize;

use crate::background::{stray_counts, StrayReport};
use crate::config::{ProtocolParams, Scenario};
use crate::keyrate::{rate_entangled, rate_prepare_measure, SecurityTerms};
use crate::link::{link_budget, LinkBudget};
use crate::protocols::{
    coincidence_model_split, p_dark, p_signal, qber_entangled, qber_prepare_measure, ClickModel,
    CoincidenceModel, Protocol,
};
use crate::Result;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProtocolResult {
    pub protocol: Protocol,
    pub qber: f64,
    pub keyrate: f64,
    /// Present for the prepare-and-measure protocols.
    pub security: Option<SecurityTerms>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProtocolOutcome {
    pub clicks: ClickModel,
    pub coincidences: CoincidenceModel,
    pub results: Vec<ProtocolResult>,
}

impl ProtocolOutcome {
    pub fn result(&self, p: Protocol) -> Option<&ProtocolResult> {
        self.results.iter().find(|r| r.protocol == p)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PointEvaluation {
    pub scenario: String,
    pub zenith_deg: f64,
    pub budget: LinkBudget,
    pub stray: StrayReport,
    pub outcome: ProtocolOutcome,
}

impl PointEvaluation {
    pub fn result(&self, p: Protocol) -> Option<&ProtocolResult> {
        self.outcome.result(p)
    }
}

/// QBER and keyrate for `protocols` given the channel transmittance and noise.
pub fn protocol_outcome(
    params: &ProtocolParams,
    detector_efficiency: f64,
    eta_total: f64,
    dark_prob: f64,
    stray_prob: f64,
    protocols: &[Protocol],
) -> Result<ProtocolOutcome> {
    let clicks = ClickModel::new(
        p_signal(detector_efficiency, eta_total, params.mean_photon_number),
        p_dark(dark_prob)?,
        stray_prob,
    )?;
    let coincidences = coincidence_model_split(
        detector_efficiency,
        eta_total,
        dark_prob,
        stray_prob,
        params.source_split_fraction,
    )?;
    let c = params.intrinsic_error;
    let mut results = Vec::with_capacity(protocols.len());
    for &protocol in protocols {
        let r = if protocol.is_entangled() {
            let e = qber_entangled(protocol, c, &coincidences)?;
            ProtocolResult {
                protocol,
                qber: e,
                keyrate: rate_entangled(protocol, &coincidences, e, params)?,
                security: None,
            }
        } else {
            let e = qber_prepare_measure(protocol, c, &clicks)?;
            let terms = SecurityTerms::prepare_measure(e, clicks.p_click, params.mean_photon_number, &params.ec_factor)?;
            ProtocolResult {
                protocol,
                qber: e,
                keyrate: rate_prepare_measure(protocol, &clicks, &terms, e)?,
                security: Some(terms),
            }
        };
        results.push(r);
    }
    Ok(ProtocolOutcome { clicks, coincidences, results })
}

pub fn evaluate_point(s: &Scenario, zenith_deg: f64) -> Result<PointEvaluation> {
    evaluate_point_for(s, zenith_deg, &Protocol::ALL)
}

pub fn evaluate_point_for(s: &Scenario, zenith_deg: f64, protocols: &[Protocol]) -> Result<PointEvaluation> {
    s.validate()?;
    let budget = link_budget(s, zenith_deg)?;
    let stray = stray_counts(s);
    let outcome = protocol_outcome(
        &s.protocol,
        s.detector.efficiency,
        budget.breakdown.eta_total,
        s.detector.dark_prob_per_window,
        stray.probability,
        protocols,
    )?;
    Ok(PointEvaluation {
        scenario: s.name.clone(),
        zenith_deg,
        budget,
        stray,
        outcome,
    })
}
