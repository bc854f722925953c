//! Optical turbulence: Hufnagel-Valley profile, Rytov variance, aperture-averaged
//! scintillation, Fried parameter, beam wander and the resulting dB losses.
//!
//! All lengths are in metres, angles in radians and wavenumbers in rad/m.

use serde::Serialize;

use crate::config::{Direction, Scenario, TurbulencePath};
use crate::quadrature::{integrate_with_breakpoints, DEFAULT_REL_TOL};
use crate::{Error, Result};

/// An altitude profile of the refractive-index structure parameter.
pub trait StructureProfile {
    fn cn2(&self, altitude_m: f64) -> f64;

    /// Altitudes where the profile changes character, used to split quadrature.
    fn breakpoints(&self) -> &[f64] {
        &[]
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HufnagelValley {
    /// Ground-layer strength A (m^-2/3).
    pub ground_strength: f64,
    /// High-altitude wind speed (m/s).
    pub wind_m_s: f64,
}

impl HufnagelValley {
    pub fn from_scenario(s: &Scenario) -> Self {
        HufnagelValley {
            ground_strength: s.atmosphere.hv_ground_strength,
            wind_m_s: s.atmosphere.hv_wind_m_s,
        }
    }
}

impl StructureProfile for HufnagelValley {
    fn cn2(&self, h: f64) -> f64 {
        0.00594 * (self.wind_m_s / 27.0).powi(2) * (1e-5 * h).powi(10) * (-h / 1000.0).exp()
            + 2.7e-16 * (-h / 1500.0).exp()
            + self.ground_strength * (-h / 100.0).exp()
    }

    fn breakpoints(&self) -> &[f64] {
        &[500.0, 3000.0, 10_000.0, 30_000.0, 60_000.0]
    }
}

/// Altitude-independent profile, mostly useful for tests.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConstantProfile(pub f64);

impl StructureProfile for ConstantProfile {
    fn cn2(&self, _: f64) -> f64 {
        self.0
    }
}

/// `integral of Cn2(h) dh` over `[lo, hi]` metres.
pub fn cn2_integral<P: StructureProfile + ?Sized>(profile: &P, lo: f64, hi: f64) -> Result<f64> {
    if !(hi > lo) {
        return Ok(0.0);
    }
    let mut points = vec![lo];
    points.extend(profile.breakpoints().iter().copied().filter(|&b| b > lo && b < hi));
    points.push(hi);
    integrate_with_breakpoints(|h| profile.cn2(h), &points, DEFAULT_REL_TOL)
}

/// Integral average over `[0, H]` rescaled by the layer thickness `t`.
pub fn cn2_average<P: StructureProfile + ?Sized>(profile: &P, h_sat: f64, thickness: f64) -> Result<f64> {
    if !(h_sat > 0.0 && thickness > 0.0) {
        return Err(Error::Domain("altitude and layer thickness must be positive".into()));
    }
    Ok(cn2_integral(profile, 0.0, h_sat)? / thickness)
}

/// Cn2 estimated from a temperature difference `delta_t` (K) between two
/// probes `separation_m` apart, at pressure `pressure` (hPa) and temperature
/// `temperature_k`.
pub fn cn2_from_micrometeorology(
    pressure: f64,
    temperature_k: f64,
    delta_t: f64,
    separation_m: f64,
) -> Result<f64> {
    if !(temperature_k > 0.0) {
        return Err(Error::Domain(format!("temperature must be positive, got {temperature_k}")));
    }
    if !(separation_m > 0.0) {
        return Err(Error::Domain(format!("probe separation must be positive, got {separation_m}")));
    }
    let ct2 = delta_t * delta_t * separation_m.powf(-1.0 / 3.0);
    Ok(79e-6 * pressure / (temperature_k * temperature_k) * ct2)
}

/// Fried parameter; `f64::INFINITY` when the integrated turbulence vanishes.
pub fn fried_parameter<P: StructureProfile + ?Sized>(
    profile: &P,
    zenith_rad: f64,
    k: f64,
    h0: f64,
    h_sat: f64,
) -> Result<f64> {
    if !(0.0..std::f64::consts::FRAC_PI_2).contains(&zenith_rad) {
        return Err(Error::Domain(format!("zenith {zenith_rad} rad outside [0, pi/2)")));
    }
    let integral = cn2_integral(profile, h0, h_sat)?;
    Ok(fried_from_integral(integral, zenith_rad, k))
}

pub(crate) fn fried_from_integral(integral: f64, zenith_rad: f64, k: f64) -> f64 {
    if integral <= 0.0 {
        return f64::INFINITY;
    }
    (0.423 * k * k / zenith_rad.cos() * integral).powf(-0.6)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Wave {
    /// Downlink: the beam reaches the atmosphere already expanded.
    Plane,
    /// Uplink: turbulence sits next to the point-like transmitter.
    Spherical,
}

impl Wave {
    pub fn for_direction(direction: Direction) -> Self {
        match direction {
            Direction::Uplink => Wave::Spherical,
            Direction::Downlink => Wave::Plane,
        }
    }

    fn coefficients(self) -> (f64, f64) {
        match self {
            Wave::Plane => (0.65, 1.11),
            Wave::Spherical => (0.18, 0.56),
        }
    }
}

/// Inputs of the aperture-averaged scintillation chain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScintillationInputs {
    pub cn2_avg: f64,
    pub wavenumber: f64,
    /// Path length through turbulence entering the Rytov variance.
    pub turb_path_m: f64,
    /// Full link distance entering the aperture parameter.
    pub full_path_m: f64,
    pub receiver_diameter_m: f64,
    pub wave: Wave,
}

impl ScintillationInputs {
    pub fn rytov(&self) -> f64 {
        rytov_variance(self.cn2_avg, self.wavenumber, self.turb_path_m, self.wave)
    }

    pub fn aperture(&self) -> f64 {
        aperture_parameter(self.wavenumber, self.receiver_diameter_m, self.full_path_m)
    }

    pub fn scintillation_index(&self) -> f64 {
        scintillation_index(self.rytov(), self.aperture(), self.wave)
    }
}

pub fn rytov_variance(cn2: f64, k: f64, path_m: f64, wave: Wave) -> f64 {
    let plane = 1.23 * cn2 * k.powf(7.0 / 6.0) * path_m.powf(11.0 / 6.0);
    match wave {
        Wave::Plane => plane,
        Wave::Spherical => 0.4 * plane,
    }
}

/// `d = sqrt(k dr^2 / 4L)`.
pub fn aperture_parameter(k: f64, dr: f64, distance_m: f64) -> f64 {
    (k * dr * dr / (4.0 * distance_m)).sqrt()
}

/// Aperture-averaged scintillation index.
pub fn scintillation_index(rytov: f64, d: f64, wave: Wave) -> f64 {
    let (c1, c2) = wave.coefficients();
    let s = rytov;
    let s125 = s.powf(1.2);
    let d2 = d * d;
    let first = 0.49 * s / (1.0 + c1 * d2 + c2 * s125).powf(7.0 / 6.0);
    let second = 0.51 * s * (1.0 + 0.69 * s125).powf(-5.0 / 6.0) / (1.0 + 0.90 * d2 + 0.62 * d2 * s125);
    (first + second).exp_m1()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BeamWanderInputs {
    pub satellite_altitude_m: f64,
    pub ground_altitude_m: f64,
    pub zenith_rad: f64,
    pub beam_radius_m: f64,
    pub fried_m: f64,
    pub scaling: f64,
    /// Long-term beam radius at the receiver.
    pub receiver_beam_radius_m: f64,
    pub slant_distance_m: f64,
}

impl BeamWanderInputs {
    fn height_sec_sq(&self) -> f64 {
        let dh = self.satellite_altitude_m - self.ground_altitude_m;
        let sec = 1.0 / self.zenith_rad.cos();
        dh * dh * sec * sec
    }

    fn strength(&self) -> f64 {
        if self.fried_m.is_infinite() {
            0.0
        } else {
            (2.0 * self.beam_radius_m / self.fried_m).powf(5.0 / 3.0)
        }
    }
}

/// Variance of the beam-centroid displacement (m^2).
pub fn beam_wander_variance(inp: &BeamWanderInputs, wavelength_m: f64) -> f64 {
    let lw = wavelength_m / (2.0 * inp.beam_radius_m);
    0.54 * inp.height_sec_sq() * lw * lw * inp.strength()
}

/// Effective pointing-error variance left after the tracked long-term tilt.
pub fn pointing_error_variance(rc2: f64, w0: f64, r0: f64, scaling: f64) -> f64 {
    if rc2 == 0.0 {
        return 0.0;
    }
    let x = (scaling * w0 / r0).powi(2);
    if !x.is_finite() {
        return 0.0;
    }
    // 1 - (x/(1+x))^(1/6) = -expm1(-ln(1+1/x)/6), stable for large x.
    rc2 * -(-(1.0 / x).ln_1p() / 6.0).exp_m1()
}

/// Scintillation produced by beam wander, given the pointing-error variance.
pub fn beam_wander_scintillation(inp: &BeamWanderInputs, sigma_pe2: f64) -> f64 {
    let alpha = sigma_pe2.sqrt() / inp.slant_distance_m;
    let ratio = alpha / inp.receiver_beam_radius_m;
    5.95 * inp.height_sec_sq() * inp.strength() * ratio * ratio
}

/// `3.3 - 5.77 sqrt(-ln p)`; negative for `p < 0.721`.
pub fn loss_bracket(threshold_prob: f64) -> f64 {
    3.3 - 5.77 * (-threshold_prob.ln()).sqrt()
}

/// Fade loss in dB for an irradiance variance `sigma2` at outage probability `pthr`.
pub fn loss_db(sigma2: f64, pthr: f64) -> Result<f64> {
    if !(pthr > 0.0 && pthr < 1.0) || !(loss_bracket(pthr) < 0.0) {
        return Err(Error::Domain(format!(
            "threshold probability {pthr} gives a non-negative loss bracket"
        )));
    }
    if !(sigma2 >= 0.0) {
        return Err(Error::Domain(format!("variance must be non-negative, got {sigma2}")));
    }
    Ok(loss_bracket(pthr) * sigma2.powf(0.4))
}

pub fn eta_from_db(a_db: f64) -> Result<f64> {
    if !(a_db <= 0.0) {
        return Err(Error::Domain(format!("loss must be <= 0 dB, got {a_db}")));
    }
    Ok(10f64.powf(a_db / 10.0))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BeamWanderReport {
    pub displacement_variance_m2: f64,
    pub pointing_variance_m2: f64,
    pub receiver_beam_radius_m: f64,
    pub scintillation: f64,
    pub loss_db: f64,
}

/// Every turbulence intermediate at one zenith angle.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TurbulenceReport {
    pub cn2_avg: f64,
    pub wavenumber: f64,
    pub turb_path_m: f64,
    pub rytov: f64,
    pub aperture: f64,
    pub scintillation_index: f64,
    pub loss_db: f64,
    pub eta_turb: f64,
    pub fried_m: f64,
    pub beam_wander: Option<BeamWanderReport>,
    pub eta_bw: f64,
}

/// Long-term beam radius at the receiver, half the geometric footprint.
pub fn receiver_beam_radius(s: &Scenario, slant_m: f64) -> f64 {
    0.5 * (s.optics.transmitter_diameter_m + slant_m * s.optics.beam_divergence_rad)
}

pub fn evaluate(s: &Scenario, zenith_deg: f64, slant_m: f64) -> Result<TurbulenceReport> {
    let g = &s.geometry;
    let zenith = zenith_deg.to_radians();
    let profile = HufnagelValley::from_scenario(s);
    let k = s.wavenumber();
    let pthr = s.detector.threshold_prob;
    let cn2_avg = cn2_average(&profile, g.satellite_altitude_m, g.atmospheric_thickness_m)?;
    let turb_path_m = match s.atmosphere.turbulence_path {
        TurbulencePath::Layer => g.atmospheric_thickness_m / zenith.cos(),
        TurbulencePath::FullLink => slant_m,
    };
    let scint = ScintillationInputs {
        cn2_avg,
        wavenumber: k,
        turb_path_m,
        full_path_m: slant_m,
        receiver_diameter_m: s.optics.receiver_diameter_m,
        wave: Wave::for_direction(g.direction),
    };
    let rytov = scint.rytov();
    let aperture = scint.aperture();
    let sigma_i2 = scintillation_index(rytov, aperture, scint.wave);
    let a_sci = loss_db(sigma_i2, pthr)?;
    let eta_turb = eta_from_db(a_sci)?;
    let fried_m = fried_parameter(&profile, zenith, k, g.ground_altitude_m, g.satellite_altitude_m)?;

    let (beam_wander, eta_bw) = match g.direction {
        Direction::Downlink => (None, 1.0),
        Direction::Uplink => {
            let inp = BeamWanderInputs {
                satellite_altitude_m: g.satellite_altitude_m,
                ground_altitude_m: g.ground_altitude_m,
                zenith_rad: zenith,
                beam_radius_m: s.optics.transmitter_beam_radius_m,
                fried_m,
                scaling: s.atmosphere.beam_wander_scaling,
                receiver_beam_radius_m: receiver_beam_radius(s, slant_m),
                slant_distance_m: slant_m,
            };
            let rc2 = beam_wander_variance(&inp, s.wavelength_m());
            let spe2 = pointing_error_variance(rc2, inp.beam_radius_m, fried_m, inp.scaling);
            let sil2 = beam_wander_scintillation(&inp, spe2);
            let a_bw = loss_db(sil2, pthr)?;
            let report = BeamWanderReport {
                displacement_variance_m2: rc2,
                pointing_variance_m2: spe2,
                receiver_beam_radius_m: inp.receiver_beam_radius_m,
                scintillation: sil2,
                loss_db: a_bw,
            };
            (Some(report), eta_from_db(a_bw)?)
        }
    };

    Ok(TurbulenceReport {
        cn2_avg,
        wavenumber: k,
        turb_path_m,
        rytov,
        aperture,
        scintillation_index: sigma_i2,
        loss_db: a_sci,
        eta_turb,
        fried_m,
        beam_wander,
        eta_bw,
    })
}
