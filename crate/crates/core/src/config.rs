//! Scenario description, named defaults, JSON loading and validation.
//!
//! A scenario file is a JSON object whose sections mirror [`Scenario`]. Every
//! field is optional: the file is deep-merged over the named default given by
//! its `scenario` key (or inferred from `geometry.direction` and
//! `time_of_day`), so `{"scenario": "downlink-night"}` is a complete file.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::turbulence::loss_bracket;
use crate::{check_finite, Error, Result};

/// Environment variable naming the directory searched for scenario files.
pub const SCENARIO_DIR_ENV: &str = "QKDLINK_SCENARIO_DIR";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    /// Ground transmitter, satellite receiver.
    Uplink,
    /// Satellite transmitter, ground receiver.
    Downlink,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TimeOfDay {
    Day,
    Night,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NamedScenario {
    UplinkNight,
    DownlinkDay,
    DownlinkNight,
}

impl NamedScenario {
    pub const ALL: [NamedScenario; 3] = [
        NamedScenario::UplinkNight,
        NamedScenario::DownlinkDay,
        NamedScenario::DownlinkNight,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            NamedScenario::UplinkNight => "uplink-night",
            NamedScenario::DownlinkDay => "downlink-day",
            NamedScenario::DownlinkNight => "downlink-night",
        }
    }

    pub fn direction(self) -> Direction {
        match self {
            NamedScenario::UplinkNight => Direction::Uplink,
            _ => Direction::Downlink,
        }
    }

    pub fn time_of_day(self) -> TimeOfDay {
        match self {
            NamedScenario::DownlinkDay => TimeOfDay::Day,
            _ => TimeOfDay::Night,
        }
    }

    pub fn from_parts(direction: Direction, time: TimeOfDay) -> Result<Self> {
        match (direction, time) {
            (Direction::Uplink, TimeOfDay::Night) => Ok(NamedScenario::UplinkNight),
            (Direction::Uplink, TimeOfDay::Day) => Err(Error::DayUplinkUnsupported),
            (Direction::Downlink, TimeOfDay::Day) => Ok(NamedScenario::DownlinkDay),
            (Direction::Downlink, TimeOfDay::Night) => Ok(NamedScenario::DownlinkNight),
        }
    }

    /// The default scenario for this link configuration.
    pub fn scenario(self) -> Scenario {
        named_default(self)
    }
}

impl fmt::Display for NamedScenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for NamedScenario {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().replace('_', "-").as_str() {
            "uplink-night" => Ok(NamedScenario::UplinkNight),
            "downlink-day" => Ok(NamedScenario::DownlinkDay),
            "downlink-night" => Ok(NamedScenario::DownlinkNight),
            "uplink-day" => Err(Error::DayUplinkUnsupported),
            _ => Err(Error::UnknownScenario(s.to_string())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LinkGeometry {
    pub direction: Direction,
    pub ground_altitude_m: f64,
    pub satellite_altitude_m: f64,
    /// Thickness of the turbulent/scattering layer above the ground.
    pub atmospheric_thickness_m: f64,
    pub zenith_deg: f64,
    pub max_zenith_deg: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OpticsParams {
    pub transmitter_diameter_m: f64,
    pub receiver_diameter_m: f64,
    /// Full-angle divergence of the transmitted beam.
    pub beam_divergence_rad: f64,
    pub transmitter_beam_radius_m: f64,
    pub transmitter_efficiency: f64,
    pub receiver_efficiency: f64,
    pub wavelength_nm: f64,
    /// Radius of the receiving telescope that collects stray light.
    pub telescope_radius_m: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DetectorParams {
    pub efficiency: f64,
    /// Dark-count probability per detector per time window.
    pub dark_prob_per_window: f64,
    pub time_window_s: f64,
    pub fov_sr: f64,
    pub filter_width_nm: f64,
    /// Outage probability used to convert scintillation into a dB loss.
    pub threshold_prob: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TurbulencePath {
    /// Rytov variance over the slant path through the turbulent layer.
    Layer,
    /// Rytov variance over the whole ground-satellite distance.
    FullLink,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AtmosphereParams {
    /// Hufnagel-Valley ground-layer strength A (m^-2/3).
    pub hv_ground_strength: f64,
    /// Hufnagel-Valley high-altitude wind speed (m/s).
    pub hv_wind_m_s: f64,
    pub ground_visibility_km: f64,
    pub beam_wander_scaling: f64,
    pub slant_correct_scattering: bool,
    pub scattering_floor_m: f64,
    pub turbulence_path: TurbulencePath,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnvironmentParams {
    pub sky_brightness_w_m2_sr_nm: f64,
    pub solar_irradiance_photons_s_nm_m2: f64,
    pub earth_albedo: f64,
    pub moon_albedo: f64,
    pub moon_radius_m: f64,
    pub earth_moon_distance_m: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EcFactor {
    Constant(f64),
    /// `(qber, f)` knots, interpolated linearly and clamped at the ends.
    Table(Vec<(f64, f64)>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EntangledRateMode {
    /// `sift * p_coin * (1 - tau - f H2)`.
    Corrected,
    /// `sift * p_coin * (tau - f H2)`, the bracket exactly as printed.
    VerbatimPaper,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProtocolParams {
    pub mean_photon_number: f64,
    pub intrinsic_error: f64,
    pub ec_factor: EcFactor,
    pub entangled_rate_mode: EntangledRateMode,
    pub double_blinding: bool,
    /// Pass stray light through the receiver efficiency before detection.
    pub stray_through_receiver: bool,
    /// Position of the entangled source as a fraction of the link.
    pub source_split_fraction: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub name: String,
    pub time_of_day: TimeOfDay,
    pub geometry: LinkGeometry,
    pub optics: OpticsParams,
    pub detector: DetectorParams,
    pub atmosphere: AtmosphereParams,
    pub environment: EnvironmentParams,
    pub protocol: ProtocolParams,
}

/// Factory defaults for each supported link.
pub fn named_default(which: NamedScenario) -> Scenario {
    let geometry = LinkGeometry {
        direction: which.direction(),
        ground_altitude_m: 0.0,
        satellite_altitude_m: 500e3,
        atmospheric_thickness_m: 20e3,
        zenith_deg: 0.0,
        max_zenith_deg: 85.0,
    };
    let optics = match which.direction() {
        // Small ground telescope, turbulence-broadened beam, satellite receiver.
        Direction::Uplink => OpticsParams {
            transmitter_diameter_m: 0.1,
            receiver_diameter_m: 0.3,
            beam_divergence_rad: 30e-6,
            transmitter_beam_radius_m: 0.05,
            transmitter_efficiency: 0.8,
            receiver_efficiency: 0.8,
            wavelength_nm: 800.0,
            telescope_radius_m: 0.15,
        },
        Direction::Downlink => OpticsParams {
            transmitter_diameter_m: 0.3,
            receiver_diameter_m: 1.0,
            beam_divergence_rad: 5e-6,
            transmitter_beam_radius_m: 0.15,
            transmitter_efficiency: 0.8,
            receiver_efficiency: 0.8,
            wavelength_nm: 800.0,
            telescope_radius_m: 0.5,
        },
    };
    let (fov_sr, filter_width_nm, sky) = match which {
        NamedScenario::UplinkNight => (30e-6f64.powi(2), 1.0, 1.5e-6),
        NamedScenario::DownlinkDay => (10e-6f64.powi(2), 0.2, 1.5e-3),
        NamedScenario::DownlinkNight => (100e-6f64.powi(2), 1.0, 1.5e-6),
    };
    let detector = DetectorParams {
        efficiency: 0.5,
        dark_prob_per_window: 4e-8,
        time_window_s: 0.5e-9,
        fov_sr,
        filter_width_nm,
        threshold_prob: 1e-3,
    };
    let (strength, visibility) = match which.time_of_day() {
        TimeOfDay::Day => (2.75e-14, 23.0),
        // Tabulated night Cn2 is 1.2e-16; this A integrates to about 0.82e-16.
        TimeOfDay::Night => (1.10e-14, 10.0),
    };
    let atmosphere = AtmosphereParams {
        hv_ground_strength: strength,
        hv_wind_m_s: 21.0,
        ground_visibility_km: visibility,
        beam_wander_scaling: 2.0 * std::f64::consts::PI,
        slant_correct_scattering: true,
        scattering_floor_m: 1.0,
        turbulence_path: TurbulencePath::Layer,
    };
    let environment = EnvironmentParams {
        sky_brightness_w_m2_sr_nm: sky,
        solar_irradiance_photons_s_nm_m2: 4.61e18,
        earth_albedo: 0.3,
        moon_albedo: 0.136,
        moon_radius_m: 1.737e6,
        earth_moon_distance_m: 3.6e8,
    };
    let protocol = ProtocolParams {
        mean_photon_number: 0.1,
        intrinsic_error: 0.02,
        ec_factor: EcFactor::Constant(1.22),
        entangled_rate_mode: EntangledRateMode::Corrected,
        double_blinding: false,
        stray_through_receiver: true,
        source_split_fraction: 0.5,
    };
    Scenario {
        name: which.as_str().to_string(),
        time_of_day: which.time_of_day(),
        geometry,
        optics,
        detector,
        atmosphere,
        environment,
        protocol,
    }
}

impl Scenario {
    /// The named configuration this scenario derives from.
    pub fn kind(&self) -> Result<NamedScenario> {
        NamedScenario::from_parts(self.geometry.direction, self.time_of_day)
    }

    pub fn wavelength_m(&self) -> f64 {
        self.optics.wavelength_nm * 1e-9
    }

    pub fn wavenumber(&self) -> f64 {
        2.0 * std::f64::consts::PI / self.wavelength_m()
    }

    /// Checks every invariant, naming the offending field on failure.
    pub fn validate(&self) -> Result<()> {
        self.kind()?;
        let g = &self.geometry;
        for (field, v) in [
            ("geometry.ground_altitude_m", g.ground_altitude_m),
            ("geometry.satellite_altitude_m", g.satellite_altitude_m),
            ("geometry.atmospheric_thickness_m", g.atmospheric_thickness_m),
            ("geometry.zenith_deg", g.zenith_deg),
            ("geometry.max_zenith_deg", g.max_zenith_deg),
        ] {
            check_finite(field, v)?;
        }
        if !(g.max_zenith_deg > 0.0 && g.max_zenith_deg < 90.0) {
            return Err(Error::validation("geometry.max_zenith_deg", "must lie in (0, 90) degrees"));
        }
        validate_zenith(g, g.zenith_deg)?;
        if g.ground_altitude_m < 0.0 {
            return Err(Error::validation("geometry.ground_altitude_m", "must be >= 0"));
        }
        if !(g.atmospheric_thickness_m > 0.0) {
            return Err(Error::validation("geometry.atmospheric_thickness_m", "must be > 0"));
        }
        if !(g.satellite_altitude_m > g.atmospheric_thickness_m) {
            return Err(Error::validation(
                "geometry.satellite_altitude_m",
                "must exceed the atmospheric thickness",
            ));
        }
        if !(g.satellite_altitude_m > g.ground_altitude_m) {
            return Err(Error::validation(
                "geometry.satellite_altitude_m",
                "must exceed the ground altitude",
            ));
        }

        let o = &self.optics;
        for (field, v) in [
            ("optics.transmitter_diameter_m", o.transmitter_diameter_m),
            ("optics.receiver_diameter_m", o.receiver_diameter_m),
            ("optics.beam_divergence_rad", o.beam_divergence_rad),
            ("optics.transmitter_beam_radius_m", o.transmitter_beam_radius_m),
            ("optics.telescope_radius_m", o.telescope_radius_m),
        ] {
            positive(field, v)?;
        }
        fraction("optics.transmitter_efficiency", o.transmitter_efficiency)?;
        fraction("optics.receiver_efficiency", o.receiver_efficiency)?;
        check_finite("optics.wavelength_nm", o.wavelength_nm)?;
        if !(300.0..=2000.0).contains(&o.wavelength_nm) {
            return Err(Error::validation("optics.wavelength_nm", "must lie in [300, 2000] nm"));
        }

        let d = &self.detector;
        fraction("detector.efficiency", d.efficiency)?;
        check_finite("detector.dark_prob_per_window", d.dark_prob_per_window)?;
        if !(d.dark_prob_per_window > 0.0 && d.dark_prob_per_window < 0.25) {
            return Err(Error::validation(
                "detector.dark_prob_per_window",
                "must lie in (0, 0.25) so that 4d is a probability",
            ));
        }
        positive("detector.time_window_s", d.time_window_s)?;
        positive("detector.fov_sr", d.fov_sr)?;
        positive("detector.filter_width_nm", d.filter_width_nm)?;
        check_finite("detector.threshold_prob", d.threshold_prob)?;
        if !(d.threshold_prob > 0.0 && loss_bracket(d.threshold_prob) < 0.0) {
            return Err(Error::validation(
                "detector.threshold_prob",
                "must lie in (0, 0.721) so that the scintillation loss is negative",
            ));
        }

        let a = &self.atmosphere;
        positive("atmosphere.hv_ground_strength", a.hv_ground_strength)?;
        positive("atmosphere.hv_wind_m_s", a.hv_wind_m_s)?;
        positive("atmosphere.ground_visibility_km", a.ground_visibility_km)?;
        positive("atmosphere.scattering_floor_m", a.scattering_floor_m)?;
        check_finite("atmosphere.beam_wander_scaling", a.beam_wander_scaling)?;
        if !(1.0..=2.0 * std::f64::consts::PI).contains(&a.beam_wander_scaling) {
            return Err(Error::validation("atmosphere.beam_wander_scaling", "must lie in [1, 2 pi]"));
        }

        let e = &self.environment;
        positive("environment.sky_brightness_w_m2_sr_nm", e.sky_brightness_w_m2_sr_nm)?;
        positive(
            "environment.solar_irradiance_photons_s_nm_m2",
            e.solar_irradiance_photons_s_nm_m2,
        )?;
        unit_interval("environment.earth_albedo", e.earth_albedo)?;
        unit_interval("environment.moon_albedo", e.moon_albedo)?;
        positive("environment.moon_radius_m", e.moon_radius_m)?;
        positive("environment.earth_moon_distance_m", e.earth_moon_distance_m)?;

        let p = &self.protocol;
        check_finite("protocol.mean_photon_number", p.mean_photon_number)?;
        if !(p.mean_photon_number > 0.0 && p.mean_photon_number <= 1.0) {
            return Err(Error::validation("protocol.mean_photon_number", "must lie in (0, 1]"));
        }
        check_finite("protocol.intrinsic_error", p.intrinsic_error)?;
        if !(p.intrinsic_error >= 0.0 && p.intrinsic_error < 0.5) {
            return Err(Error::validation("protocol.intrinsic_error", "must lie in [0, 0.5)"));
        }
        check_finite("protocol.source_split_fraction", p.source_split_fraction)?;
        if !(p.source_split_fraction > 0.0 && p.source_split_fraction < 1.0) {
            return Err(Error::validation("protocol.source_split_fraction", "must lie in (0, 1)"));
        }
        match &p.ec_factor {
            EcFactor::Constant(f) => {
                check_finite("protocol.ec_factor", *f)?;
                if *f < 1.0 {
                    return Err(Error::validation("protocol.ec_factor", "must be >= 1"));
                }
            }
            EcFactor::Table(knots) => {
                if knots.is_empty() {
                    return Err(Error::validation("protocol.ec_factor", "table must not be empty"));
                }
                for &(e, f) in knots {
                    if !(e.is_finite() && f.is_finite() && (0.0..=1.0).contains(&e) && f >= 1.0) {
                        return Err(Error::validation(
                            "protocol.ec_factor",
                            "table knots need qber in [0, 1] and f >= 1",
                        ));
                    }
                }
                if knots.windows(2).any(|w| w[1].0 < w[0].0) {
                    return Err(Error::validation(
                        "protocol.ec_factor",
                        "table must be sorted by qber",
                    ));
                }
            }
        }
        Ok(())
    }

    /// Parses a scenario document, filling omitted fields from its named default.
    pub fn from_json_str(text: &str) -> Result<Scenario> {
        let value: Value =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        Scenario::from_value(value)
    }

    pub fn from_value(value: Value) -> Result<Scenario> {
        let Value::Object(mut patch) = value else {
            return Err(Error::Parse("scenario document must be a JSON object".into()));
        };
        let base = match patch.remove("scenario") {
            Some(Value::String(name)) => name.parse::<NamedScenario>()?,
            Some(other) => {
                return Err(Error::validation("scenario", format!("expected a name, got {other}")))
            }
            None => infer_base(&patch)?,
        };
        let mut merged = to_value(&named_default(base));
        merge(&mut merged, Value::Object(patch));
        let scenario: Scenario =
            serde_json::from_value(merged).map_err(|e| Error::Parse(e.to_string()))?;
        scenario.validate()?;
        Ok(scenario)
    }

    /// Full document including the `scenario` base key.
    pub fn to_value(&self) -> Value {
        let mut v = to_value(self);
        if let (Value::Object(map), Ok(kind)) = (&mut v, self.kind()) {
            map.insert("scenario".into(), Value::String(kind.as_str().into()));
        }
        v
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&self.to_value()).expect("scenario serializes")
    }

    /// Returns a copy with `key=value` overrides applied and revalidated.
    ///
    /// Keys are dotted paths (`protocol.mean_photon_number`), a field name
    /// unique across sections (`mean_photon_number`) or a short alias (`mu`).
    pub fn with_overrides<K, V>(&self, overrides: &[(K, V)]) -> Result<Scenario>
    where
        K: AsRef<str>,
        V: AsRef<str>,
    {
        let mut doc = to_value(self);
        for (key, raw) in overrides {
            set_path(&mut doc, key.as_ref(), raw.as_ref())?;
        }
        let scenario: Scenario =
            serde_json::from_value(doc).map_err(|e| Error::Parse(e.to_string()))?;
        scenario.validate()?;
        Ok(scenario)
    }
}

/// Rejects negative zenith angles and those beyond the validity limit.
pub fn validate_zenith(geom: &LinkGeometry, zenith_deg: f64) -> Result<()> {
    check_finite("geometry.zenith_deg", zenith_deg)?;
    if zenith_deg < 0.0 {
        return Err(Error::validation("geometry.zenith_deg", "must be >= 0"));
    }
    if zenith_deg > geom.max_zenith_deg {
        return Err(Error::validation(
            "geometry.zenith_deg",
            format!("zenith beyond max_zenith ({zenith_deg} > {})", geom.max_zenith_deg),
        ));
    }
    Ok(())
}

/// Parses one `key=value` override argument.
pub fn parse_override(arg: &str) -> Result<(String, String)> {
    match arg.split_once('=') {
        Some((k, v)) if !k.trim().is_empty() => Ok((k.trim().to_string(), v.trim().to_string())),
        _ => Err(Error::validation(arg, "override must have the form key=value")),
    }
}

pub fn load_scenario(path: impl AsRef<Path>) -> Result<Scenario> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    Scenario::from_json_str(&text)
}

pub fn save_scenario(scenario: &Scenario, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, scenario.to_json_string() + "\n").map_err(|e| Error::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

/// Resolves a scenario name or file.
///
/// Named defaults win, then a literal path, then `<dir>/<name>` and
/// `<dir>/<name>.json` under [`SCENARIO_DIR_ENV`].
pub fn resolve_scenario(reference: &str) -> Result<Scenario> {
    match reference.parse::<NamedScenario>() {
        Ok(named) => return Ok(named.scenario()),
        Err(Error::DayUplinkUnsupported) => return Err(Error::DayUplinkUnsupported),
        Err(_) => {}
    }
    candidate_paths(reference)
        .into_iter()
        .find(|p| p.is_file())
        .map(load_scenario)
        .unwrap_or_else(|| Err(Error::UnknownScenario(reference.to_string())))
}

fn candidate_paths(reference: &str) -> Vec<PathBuf> {
    let mut out = vec![PathBuf::from(reference)];
    if let Some(dir) = std::env::var_os(SCENARIO_DIR_ENV) {
        let dir = PathBuf::from(dir);
        out.push(dir.join(reference));
        out.push(dir.join(format!("{reference}.json")));
    }
    out
}

fn infer_base(patch: &Map<String, Value>) -> Result<NamedScenario> {
    let direction = patch
        .get("geometry")
        .and_then(|g| g.get("direction"))
        .cloned()
        .map(serde_json::from_value::<Direction>)
        .transpose()
        .map_err(|e| Error::Parse(format!("geometry.direction: {e}")))?;
    let time = patch
        .get("time_of_day")
        .cloned()
        .map(serde_json::from_value::<TimeOfDay>)
        .transpose()
        .map_err(|e| Error::Parse(format!("time_of_day: {e}")))?;
    match (direction, time) {
        (Some(d), Some(t)) => NamedScenario::from_parts(d, t),
        _ => Err(Error::validation(
            "scenario",
            "missing; give a base name or both geometry.direction and time_of_day",
        )),
    }
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("plain data serializes")
}

/// Fields holding externally tagged enums are replaced rather than merged.
const REPLACE_WHOLE: &[&str] = &["ec_factor"];

fn merge(base: &mut Value, patch: Value) {
    match (base, patch) {
        (Value::Object(b), Value::Object(p)) => {
            for (k, v) in p {
                match b.get_mut(&k) {
                    Some(slot) if !REPLACE_WHOLE.contains(&k.as_str()) => merge(slot, v),
                    _ => {
                        b.insert(k, v);
                    }
                }
            }
        }
        (slot, v) => *slot = v,
    }
}

const ALIASES: &[(&str, &str)] = &[
    ("mu", "protocol.mean_photon_number"),
    ("c", "protocol.intrinsic_error"),
    ("f", "protocol.ec_factor"),
    ("double_blinding", "protocol.double_blinding"),
    ("lambda", "optics.wavelength_nm"),
    ("dt", "optics.transmitter_diameter_m"),
    ("dr", "optics.receiver_diameter_m"),
    ("divergence", "optics.beam_divergence_rad"),
    ("w0", "optics.transmitter_beam_radius_m"),
    ("a", "optics.telescope_radius_m"),
    ("eta_t", "optics.transmitter_efficiency"),
    ("eta_r", "optics.receiver_efficiency"),
    ("eta_d", "detector.efficiency"),
    ("d", "detector.dark_prob_per_window"),
    ("pthr", "detector.threshold_prob"),
    ("fov", "detector.fov_sr"),
    ("bf", "detector.filter_width_nm"),
    ("A", "atmosphere.hv_ground_strength"),
    ("v", "atmosphere.hv_wind_m_s"),
    ("V0", "atmosphere.ground_visibility_km"),
    ("Cr", "atmosphere.beam_wander_scaling"),
    ("theta", "geometry.zenith_deg"),
    ("H", "geometry.satellite_altitude_m"),
    ("h0", "geometry.ground_altitude_m"),
    ("t", "geometry.atmospheric_thickness_m"),
    ("hb", "environment.sky_brightness_w_m2_sr_nm"),
];

fn resolve_key(doc: &Value, key: &str) -> Result<Vec<String>> {
    if key.contains('.') {
        return Ok(key.split('.').map(str::to_string).collect());
    }
    if let Some((_, path)) = ALIASES.iter().find(|(alias, _)| *alias == key) {
        return Ok(path.split('.').map(str::to_string).collect());
    }
    let mut hits = Vec::new();
    if let Value::Object(top) = doc {
        if top.contains_key(key) {
            hits.push(vec![key.to_string()]);
        }
        for (section, inner) in top {
            if let Value::Object(fields) = inner {
                if fields.contains_key(key) {
                    hits.push(vec![section.clone(), key.to_string()]);
                }
            }
        }
    }
    match hits.len() {
        1 => Ok(hits.pop().unwrap()),
        0 => Err(Error::validation(key, "unknown parameter")),
        _ => Err(Error::validation(key, "ambiguous parameter; use section.field")),
    }
}

fn set_path(doc: &mut Value, key: &str, raw: &str) -> Result<()> {
    let path = resolve_key(doc, key)?;
    let mut value: Value = serde_json::from_str(raw).unwrap_or_else(|_| Value::String(raw.into()));
    if path.last().map(String::as_str) == Some("ec_factor") && value.is_number() {
        value = serde_json::json!({ "constant": value });
    }
    let mut slot = &mut *doc;
    for part in &path {
        slot = match slot {
            Value::Object(map) if map.contains_key(part) => map.get_mut(part).unwrap(),
            _ => return Err(Error::validation(key, format!("unknown parameter `{}`", path.join(".")))),
        };
    }
    *slot = value;
    Ok(())
}

fn positive(field: &str, v: f64) -> Result<()> {
    check_finite(field, v)?;
    if v > 0.0 {
        Ok(())
    } else {
        Err(Error::validation(field, format!("must be > 0, got {v}")))
    }
}

fn fraction(field: &str, v: f64) -> Result<()> {
    check_finite(field, v)?;
    if v > 0.0 && v <= 1.0 {
        Ok(())
    } else {
        Err(Error::validation(field, format!("must lie in (0, 1], got {v}")))
    }
}

fn unit_interval(field: &str, v: f64) -> Result<()> {
    check_finite(field, v)?;
    if (0.0..=1.0).contains(&v) {
        Ok(())
    } else {
        Err(Error::validation(field, format!("must lie in [0, 1], got {v}")))
    }
}
