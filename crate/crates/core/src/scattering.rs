//! Mie scattering through the lower atmosphere using the Kruse visibility model.
//!
//! Altitudes and visibilities are in km and attenuation in km^-1; the
//! wavelength enters only through the ratio `lambda / 550 nm`.

use crate::config::{LinkGeometry, Scenario};
use crate::quadrature::{integrate_with_breakpoints, DEFAULT_REL_TOL};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct ScatteringModel {
    pub wavelength_nm: f64,
    pub ground_visibility_km: f64,
    /// Scale the vertical optical depth by `sec(zenith)`.
    pub slant_correct: bool,
    pub quadrature_rel_tol: f64,
    /// Lowest altitude of the integration band, avoiding `V(0) = 0`.
    pub floor_m: f64,
}

impl ScatteringModel {
    pub fn from_scenario(s: &Scenario) -> Self {
        ScatteringModel {
            wavelength_nm: s.optics.wavelength_nm,
            ground_visibility_km: s.atmosphere.ground_visibility_km,
            slant_correct: s.atmosphere.slant_correct_scattering,
            quadrature_rel_tol: DEFAULT_REL_TOL,
            floor_m: s.atmosphere.scattering_floor_m,
        }
    }

    fn check(&self) -> Result<()> {
        if !(self.ground_visibility_km > 0.0) {
            return Err(Error::Domain("ground visibility must be positive".into()));
        }
        if !(self.quadrature_rel_tol > 0.0 && self.quadrature_rel_tol <= 1e-3) {
            return Err(Error::Domain("quadrature tolerance must lie in (0, 1e-3]".into()));
        }
        if !(self.floor_m > 0.0) {
            return Err(Error::Domain("scattering floor must be positive".into()));
        }
        Ok(())
    }
}

/// Visibility range `V = 3 V0 h^0.26`.
pub fn visibility(h_km: f64, v0_km: f64) -> f64 {
    3.0 * v0_km * h_km.powf(0.26)
}

/// Kruse wavelength exponent; `V = 50` and `V = 6` take the lower branch.
pub fn kruse_exponent(v_km: f64) -> Result<f64> {
    if !(v_km > 0.0) {
        return Err(Error::Domain(format!("visibility must be positive, got {v_km}")));
    }
    Ok(if v_km > 50.0 {
        1.6
    } else if v_km > 6.0 {
        1.3
    } else {
        0.585 * v_km.cbrt()
    })
}

/// Specific attenuation in km^-1 at altitude `h_km`.
pub fn beta(wavelength_nm: f64, h_km: f64, model: &ScatteringModel) -> Result<f64> {
    if !(h_km > 0.0) {
        return Err(Error::Domain(format!("attenuation undefined at altitude {h_km} km")));
    }
    let v = visibility(h_km, model.ground_visibility_km);
    let p = kruse_exponent(v)?;
    Ok(3.91 / v * (wavelength_nm / 550.0).powf(-p))
}

/// Altitude (km) at which the visibility reaches `v_km`.
fn altitude_for_visibility(v_km: f64, v0_km: f64) -> f64 {
    (v_km / (3.0 * v0_km)).powf(1.0 / 0.26)
}

/// Vertical optical depth `integral of beta dh` over `[lo_km, hi_km]`.
pub fn optical_depth(model: &ScatteringModel, lo_km: f64, hi_km: f64) -> Result<f64> {
    model.check()?;
    if !(hi_km > lo_km) {
        return Ok(0.0);
    }
    if !(lo_km > 0.0) {
        return Err(Error::Domain("optical depth band must start above the ground".into()));
    }
    let v0 = model.ground_visibility_km;
    let mut points = vec![lo_km];
    for v in [6.0, 50.0] {
        let h = altitude_for_visibility(v, v0);
        if h > lo_km && h < hi_km {
            points.push(h);
        }
    }
    points.push(hi_km);
    let ratio = model.wavelength_nm / 550.0;
    let mut depth = 0.0;
    for w in points.windows(2) {
        // Pin the Kruse branch per piece so that no sample lands on the wrong side of a jump.
        let mid_v = visibility(0.5 * (w[0] + w[1]), v0);
        let f = |h: f64| {
            let v = visibility(h, v0);
            let p = if mid_v > 50.0 {
                1.6
            } else if mid_v > 6.0 {
                1.3
            } else {
                0.585 * v.cbrt()
            };
            3.91 / v * ratio.powf(-p)
        };
        depth += integrate_with_breakpoints(f, w, model.quadrature_rel_tol)?;
    }
    Ok(depth)
}

/// Altitude band (km) crossed by the scattering layer for this geometry.
pub fn scattering_band_km(geom: &LinkGeometry, model: &ScatteringModel) -> (f64, f64) {
    let lo = geom.ground_altitude_m.max(model.floor_m);
    let hi = geom.satellite_altitude_m.min(geom.atmospheric_thickness_m);
    (lo / 1e3, hi / 1e3)
}

/// Scattering transmittance at the geometry's own zenith angle.
pub fn eta_scatt(geom: &LinkGeometry, model: &ScatteringModel) -> Result<f64> {
    eta_scatt_at(geom, model, geom.zenith_deg)
}

pub fn eta_scatt_at(geom: &LinkGeometry, model: &ScatteringModel, zenith_deg: f64) -> Result<f64> {
    let (lo, hi) = scattering_band_km(geom, model);
    let depth = optical_depth(model, lo, hi)?;
    let slant = if model.slant_correct { 1.0 / zenith_deg.to_radians().cos() } else { 1.0 };
    Ok((-depth * slant).exp())
}
