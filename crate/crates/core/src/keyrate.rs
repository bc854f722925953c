//! Privacy amplification, error-correction leakage and secure keyrates.

use serde::{Deserialize, Serialize};

use crate::config::{EcFactor, EntangledRateMode, ProtocolParams};
use crate::protocols::{ClickModel, CoincidenceModel, Protocol};
use crate::{Error, Result};

/// `e log2 e + (1 - e) log2(1 - e)`, i.e. minus the binary entropy.
pub fn entropy_term(e: f64) -> f64 {
    let xlog = |x: f64| if x <= 0.0 { 0.0 } else { x * x.log2() };
    xlog(e) + xlog(1.0 - e)
}

pub fn binary_entropy(e: f64) -> f64 {
    -entropy_term(e)
}

/// Fraction of sifted key discarded by privacy amplification.
pub fn tau(e: f64) -> f64 {
    if e >= 0.5 {
        1.0
    } else {
        // log2(1 + 4e(1 - e))
        (4.0 * e * (1.0 - e)).ln_1p() / std::f64::consts::LN_2
    }
}

/// Probability that a weak coherent pulse carries more than one photon,
/// `1 - (1 + mu + mu^2/2 + mu^3/12) exp(-mu)`.
pub fn p_prime(mu: f64) -> f64 {
    if mu <= 0.0 {
        return 0.0;
    }
    if mu > 5.0 {
        return 1.0 - (1.0 + mu + mu * mu / 2.0 + mu.powi(3) / 12.0) * (-mu).exp();
    }
    // exp(-mu) (mu^3/12 + sum_{n>=4} mu^n/n!) avoids cancellation at small mu.
    let mut term = mu.powi(3) / 6.0;
    let mut tail = 0.0;
    for n in 4..200 {
        term *= mu / n as f64;
        tail += term;
        if term < 1e-20 * tail {
            break;
        }
    }
    (-mu).exp() * (mu.powi(3) / 12.0 + tail)
}

/// Security parameter `(p_click - p') / p_click`.
pub fn security_beta(p_click: f64, p_prime: f64) -> Result<f64> {
    if !(p_click > 0.0) {
        return Err(Error::DegenerateLink("no detections"));
    }
    Ok((p_click - p_prime) / p_click)
}

/// `tau(e / beta)`, or 1 when no secure fraction survives.
pub fn tau_prime(e: f64, p_click: f64, p_prime: f64) -> Result<f64> {
    let beta = security_beta(p_click, p_prime)?;
    Ok(tau_prime_from_beta(e, beta))
}

fn tau_prime_from_beta(e: f64, beta: f64) -> f64 {
    if beta <= 0.0 || e / beta >= 0.5 {
        1.0
    } else {
        tau(e / beta)
    }
}

/// Error-correction inefficiency at QBER `e`.
pub fn f_ec(e: f64, mode: &EcFactor) -> f64 {
    match mode {
        EcFactor::Constant(f) => *f,
        EcFactor::Table(knots) => {
            let Some(first) = knots.first() else { return 1.0 };
            let last = knots[knots.len() - 1];
            if e <= first.0 {
                return first.1;
            }
            if e >= last.0 {
                return last.1;
            }
            let i = knots.partition_point(|k| k.0 <= e);
            let (e0, f0) = knots[i - 1];
            let (e1, f1) = knots[i];
            if e1 == e0 {
                f1
            } else {
                f0 + (f1 - f0) * (e - e0) / (e1 - e0)
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SecurityTerms {
    pub tau: f64,
    pub tau_prime: f64,
    pub beta: f64,
    pub p_prime: f64,
    pub f_ec: f64,
}

impl SecurityTerms {
    pub fn prepare_measure(e: f64, p_click: f64, mu: f64, ec: &EcFactor) -> Result<Self> {
        let pp = p_prime(mu);
        Self::with_p_prime(e, p_click, pp, ec)
    }

    pub fn with_p_prime(e: f64, p_click: f64, p_prime: f64, ec: &EcFactor) -> Result<Self> {
        let beta = security_beta(p_click, p_prime)?;
        Ok(SecurityTerms {
            tau: tau(e),
            tau_prime: tau_prime_from_beta(e, beta),
            beta,
            p_prime,
            f_ec: f_ec(e, ec),
        })
    }
}

/// Secure bits per pulse for BB84 or B92, clamped at zero.
pub fn rate_prepare_measure(kind: Protocol, cm: &ClickModel, terms: &SecurityTerms, e: f64) -> Result<f64> {
    if kind.is_entangled() {
        return Err(Error::Domain(format!("{kind} is not a prepare-and-measure protocol")));
    }
    let bracket = 1.0 - terms.tau_prime + terms.f_ec * entropy_term(e);
    Ok((kind.sift_factor() * cm.p_click * bracket).max(0.0))
}

/// Secure bits per pulse for BBM92 or E91, clamped at zero.
pub fn rate_entangled(kind: Protocol, cm: &CoincidenceModel, e: f64, params: &ProtocolParams) -> Result<f64> {
    if !kind.is_entangled() {
        return Err(Error::Domain(format!("{kind} is not an entanglement-based protocol")));
    }
    let t = if params.double_blinding { 0.0 } else { tau(e) };
    let leak = f_ec(e, &params.ec_factor) * binary_entropy(e);
    let bracket = match params.entangled_rate_mode {
        EntangledRateMode::Corrected => 1.0 - t - leak,
        EntangledRateMode::VerbatimPaper => t - leak,
    };
    Ok((kind.sift_factor() * cm.p_coin * bracket).max(0.0))
}
