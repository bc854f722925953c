//! Stray environmental photons reaching the receiver in one detection window.

use serde::Serialize;

use crate::config::{Direction, EnvironmentParams, Scenario};
use crate::{PLANCK, SPEED_OF_LIGHT};

#[derive(Debug, Clone, PartialEq)]
pub struct StrayCountInputs {
    pub env: EnvironmentParams,
    pub fov_sr: f64,
    pub telescope_radius_m: f64,
    pub filter_width_nm: f64,
    pub window_s: f64,
    pub wavelength_nm: f64,
}

impl StrayCountInputs {
    pub fn from_scenario(s: &Scenario) -> Self {
        StrayCountInputs {
            env: s.environment.clone(),
            fov_sr: s.detector.fov_sr,
            telescope_radius_m: s.optics.telescope_radius_m,
            filter_width_nm: s.detector.filter_width_nm,
            window_s: s.detector.time_window_s,
            wavelength_nm: s.optics.wavelength_nm,
        }
    }
}

/// Moonlight reflected by the earth into a satellite receiver at night.
pub fn stray_uplink_night(inp: &StrayCountInputs) -> f64 {
    let e = &inp.env;
    let a = inp.telescope_radius_m;
    e.earth_albedo
        * e.moon_albedo
        * e.moon_radius_m
        * e.moon_radius_m
        * a
        * a
        * (inp.fov_sr / (e.earth_moon_distance_m * e.earth_moon_distance_m))
        * inp.filter_width_nm
        * inp.window_s
        * e.solar_irradiance_photons_s_nm_m2
}

/// Sky background power (W) collected by a ground telescope.
pub fn background_power_downlink(inp: &StrayCountInputs) -> f64 {
    let a = inp.telescope_radius_m;
    inp.env.sky_brightness_w_m2_sr_nm * inp.fov_sr * std::f64::consts::PI * a * a * inp.filter_width_nm
}

pub fn photon_energy(wavelength_nm: f64) -> f64 {
    PLANCK * SPEED_OF_LIGHT / (wavelength_nm * 1e-9)
}

/// Sky background photons per window at a ground receiver.
pub fn stray_downlink(inp: &StrayCountInputs) -> f64 {
    background_power_downlink(inp) * inp.window_s / photon_energy(inp.wavelength_nm)
}

/// Probability of at least one Poisson-distributed stray photon.
pub fn stray_probability(mean_photons: f64) -> f64 {
    -(-mean_photons).exp_m1()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StrayReport {
    pub photons_per_window: f64,
    /// Probability of a stray detection, after the receiver optics if enabled.
    pub probability: f64,
}

pub fn stray_counts(s: &Scenario) -> StrayReport {
    let inp = StrayCountInputs::from_scenario(s);
    let n = match s.geometry.direction {
        Direction::Uplink => stray_uplink_night(&inp),
        Direction::Downlink => stray_downlink(&inp),
    };
    let through = if s.protocol.stray_through_receiver { s.optics.receiver_efficiency } else { 1.0 };
    StrayReport { photons_per_window: n, probability: stray_probability(n) * through }
}
