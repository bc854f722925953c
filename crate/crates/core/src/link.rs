//! Link geometry and the transmittance chain.

use serde::{Deserialize, Serialize};

use crate::config::{validate_zenith, LinkGeometry, Scenario};
use crate::scattering::{eta_scatt_at, ScatteringModel};
use crate::turbulence::{self, TurbulenceReport};
use crate::{Error, Result};

/// Per-mechanism efficiencies and their product.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TransmittanceBreakdown {
    pub eta_geo: f64,
    pub eta_scatt: f64,
    pub eta_turb: f64,
    pub eta_bw: f64,
    /// Transmitter times receiver optics efficiency.
    pub eta_optics: f64,
    pub eta_total: f64,
    pub slant_distance_m: f64,
}

impl TransmittanceBreakdown {
    pub fn new(eta_geo: f64, eta_scatt: f64, eta_turb: f64, eta_bw: f64, eta_optics: f64, slant_distance_m: f64) -> Self {
        TransmittanceBreakdown {
            eta_geo,
            eta_scatt,
            eta_turb,
            eta_bw,
            eta_optics,
            eta_total: eta_geo * eta_scatt * eta_turb * eta_bw * eta_optics,
            slant_distance_m,
        }
    }

    pub fn factors(&self) -> [f64; 5] {
        [self.eta_geo, self.eta_scatt, self.eta_turb, self.eta_bw, self.eta_optics]
    }
}

/// Transmittance together with the turbulence intermediates behind it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LinkBudget {
    pub breakdown: TransmittanceBreakdown,
    pub turbulence: TurbulenceReport,
}

/// Slant distance at the geometry's own zenith angle.
pub fn slant_distance(geom: &LinkGeometry) -> Result<f64> {
    slant_distance_at(geom, geom.zenith_deg)
}

/// `L = (H - h0) / cos(zenith)`.
pub fn slant_distance_at(geom: &LinkGeometry, zenith_deg: f64) -> Result<f64> {
    if !(zenith_deg >= 0.0 && zenith_deg <= geom.max_zenith_deg) {
        return Err(Error::Domain(format!(
            "zenith {zenith_deg} deg beyond max_zenith {} deg",
            geom.max_zenith_deg
        )));
    }
    Ok((geom.satellite_altitude_m - geom.ground_altitude_m) / zenith_deg.to_radians().cos())
}

/// Geometric collection efficiency `dr^2 / (dt + L theta)^2`, at most 1.
pub fn eta_geo(dt: f64, dr: f64, divergence_rad: f64, distance_m: f64) -> f64 {
    let footprint = dt + distance_m * divergence_rad;
    (dr * dr / (footprint * footprint)).min(1.0)
}

pub fn total_transmittance(s: &Scenario, zenith_deg: f64) -> Result<TransmittanceBreakdown> {
    Ok(link_budget(s, zenith_deg)?.breakdown)
}

pub fn link_budget(s: &Scenario, zenith_deg: f64) -> Result<LinkBudget> {
    validate_zenith(&s.geometry, zenith_deg)?;
    let l = slant_distance_at(&s.geometry, zenith_deg)?;
    let o = &s.optics;
    let geo = eta_geo(o.transmitter_diameter_m, o.receiver_diameter_m, o.beam_divergence_rad, l);
    let scatt = eta_scatt_at(&s.geometry, &ScatteringModel::from_scenario(s), zenith_deg)?;
    let turb = turbulence::evaluate(s, zenith_deg, l)?;
    let breakdown = TransmittanceBreakdown::new(
        geo,
        scatt,
        turb.eta_turb,
        turb.eta_bw,
        o.transmitter_efficiency * o.receiver_efficiency,
        l,
    );
    Ok(LinkBudget { breakdown, turbulence: turb })
}
