//! Link-budget simulator for satellite-ground quantum key distribution.
//!
//! The crate models the optical channel between a ground station and a LEO
//! satellite (geometric spreading, Mie scattering, turbulence-induced
//! scintillation and beam wander), the stray-light and dark-count noise seen
//! by the receiver, and the resulting QBER and secure keyrate of the BB84,
//! B92, BBM92 and E91 protocols as a function of zenith angle.
//!
//! ```
//! use qkdlink::{config::NamedScenario, evaluate::evaluate_point, protocols::Protocol};
//!
//! let scenario = NamedScenario::DownlinkNight.scenario();
//! let point = evaluate_point(&scenario, 30.0).unwrap();
//! let bb84 = point.result(Protocol::Bb84).unwrap();
//! assert!(bb84.qber > 0.02 && bb84.qber < 0.5);
//! assert!(point.budget.breakdown.eta_total < 1e-2);
//! ```

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod background;
pub mod config;
pub mod error;
pub mod evaluate;
pub mod keyrate;
pub mod link;
pub mod protocols;
pub mod quadrature;
pub mod scattering;
pub mod sweep;
pub mod turbulence;

pub use error::{Error, Result};

/// Planck constant (J s).
pub const PLANCK: f64 = 6.626_070_15e-34;
/// Speed of light in vacuum (m/s).
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

pub(crate) fn check_finite(field: &str, value: f64) -> Result<()> {
    if value.is_finite() {
        Ok(())
    } else {
        Err(Error::validation(field, format!("must be finite, got {value}")))
    }
}
