//! Detection and coincidence probabilities, and the QBER of each protocol.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Protocol {
    Bb84,
    B92,
    Bbm92,
    E91,
}

impl Protocol {
    pub const ALL: [Protocol; 4] = [Protocol::Bb84, Protocol::B92, Protocol::Bbm92, Protocol::E91];

    pub fn as_str(self) -> &'static str {
        match self {
            Protocol::Bb84 => "bb84",
            Protocol::B92 => "b92",
            Protocol::Bbm92 => "bbm92",
            Protocol::E91 => "e91",
        }
    }

    /// Share of noise clicks that land as errors in the sifted key.
    pub fn noise_fraction(self) -> f64 {
        match self {
            Protocol::Bb84 | Protocol::Bbm92 => 0.5,
            Protocol::B92 => 0.25,
            Protocol::E91 => 1.0 / 3.0,
        }
    }

    /// Share of raw detections kept after basis reconciliation.
    pub fn sift_factor(self) -> f64 {
        match self {
            Protocol::Bb84 | Protocol::Bbm92 => 0.5,
            Protocol::B92 => 0.25,
            Protocol::E91 => 1.0 / 3.0,
        }
    }

    pub fn is_entangled(self) -> bool {
        matches!(self, Protocol::Bbm92 | Protocol::E91)
    }
}

impl fmt::Display for Protocol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Protocol {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "bb84" => Ok(Protocol::Bb84),
            "b92" => Ok(Protocol::B92),
            "bbm92" => Ok(Protocol::Bbm92),
            "e91" => Ok(Protocol::E91),
            _ => Err(Error::validation("protocol", format!("unknown protocol `{s}`"))),
        }
    }
}

/// Single-receiver click probabilities for prepare-and-measure protocols.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClickModel {
    pub p_signal: f64,
    pub p_dark: f64,
    pub p_stray: f64,
    pub p_click: f64,
}

impl ClickModel {
    pub fn new(p_signal: f64, p_dark: f64, p_stray: f64) -> Result<Self> {
        let p_click = checked_sum("p_click", [("p_signal", p_signal), ("p_dark", p_dark), ("p_stray", p_stray)])?;
        Ok(ClickModel { p_signal, p_dark, p_stray, p_click })
    }
}

/// Two-receiver coincidence probabilities for entanglement-based protocols.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoincidenceModel {
    pub p_true: f64,
    pub p_false: f64,
    pub p_stray: f64,
    pub p_coin: f64,
}

impl CoincidenceModel {
    pub fn new(p_true: f64, p_false: f64, p_stray: f64) -> Result<Self> {
        let p_coin = checked_sum("p_coin", [("p_true", p_true), ("p_false", p_false), ("p_stray", p_stray)])?;
        Ok(CoincidenceModel { p_true, p_false, p_stray, p_coin })
    }
}

fn checked_sum(total: &str, parts: [(&str, f64); 3]) -> Result<f64> {
    for (name, p) in parts {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::Domain(format!("{name} = {p} is not a probability")));
        }
    }
    let sum = parts.iter().map(|(_, p)| p).sum::<f64>();
    if sum > 1.0 {
        return Err(Error::Domain(format!("{total} = {sum} exceeds 1")));
    }
    Ok(sum)
}

/// `1 - exp(-eta_d eta_T mu)`.
pub fn p_signal(eta_d: f64, eta_t: f64, mu: f64) -> f64 {
    -(-eta_d * eta_t * mu).exp_m1()
}

/// Dark clicks over the four detectors, `4 d`.
pub fn p_dark(d: f64) -> Result<f64> {
    if !(0.0..=0.25).contains(&d) {
        return Err(Error::Domain(format!("dark probability {d} gives 4d outside [0, 1]")));
    }
    Ok(4.0 * d)
}

pub fn qber_prepare_measure(kind: Protocol, c: f64, cm: &ClickModel) -> Result<f64> {
    if kind.is_entangled() {
        return Err(Error::Domain(format!("{kind} is not a prepare-and-measure protocol")));
    }
    if cm.p_click <= 0.0 {
        return Err(Error::DegenerateLink("no detections"));
    }
    Ok((c * cm.p_signal + kind.noise_fraction() * (cm.p_dark + cm.p_stray)) / cm.p_click)
}

/// Coincidences with the source at the middle of the link.
pub fn coincidence_model(eta_det: f64, eta_t: f64, d: f64, p_stray: f64) -> Result<CoincidenceModel> {
    coincidence_model_split(eta_det, eta_t, d, p_stray, 0.5)
}

/// Coincidences with the source a fraction `split` of the way along the link.
///
/// Each arm carries `eta_T^split` and `eta_T^(1-split)`, so their product always
/// reproduces `eta_det^2 eta_T` for true coincidences.
pub fn coincidence_model_split(
    eta_det: f64,
    eta_t: f64,
    d: f64,
    p_stray: f64,
    split: f64,
) -> Result<CoincidenceModel> {
    if !(split > 0.0 && split < 1.0) {
        return Err(Error::Domain(format!("source split {split} outside (0, 1)")));
    }
    let near = eta_det * eta_t.powf(split);
    let far = eta_det * eta_t.powf(1.0 - split);
    let p_true = eta_det * eta_det * eta_t;
    let p_false = 4.0 * near * d + 4.0 * far * d + 16.0 * d * d;
    CoincidenceModel::new(p_true, p_false, p_stray)
}

pub fn qber_entangled(kind: Protocol, c: f64, cm: &CoincidenceModel) -> Result<f64> {
    if !kind.is_entangled() {
        return Err(Error::Domain(format!("{kind} is not an entanglement-based protocol")));
    }
    if cm.p_coin <= 0.0 {
        return Err(Error::DegenerateLink("no coincidences"));
    }
    Ok((c * cm.p_true + kind.noise_fraction() * (cm.p_false + cm.p_stray)) / cm.p_coin)
}
