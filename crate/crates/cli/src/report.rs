//! Human-readable reports.

use std::io::{self, Write};

use qkdlink::config::Scenario;
use qkdlink::evaluate::PointEvaluation;
use qkdlink::protocols::Protocol;
use qkdlink::sweep::{GapSample, Metric};

use crate::numfmt::sig9;

pub fn write_point(w: &mut dyn Write, s: &Scenario, p: &PointEvaluation) -> io::Result<()> {
    let b = &p.budget.breakdown;
    let t = &p.budget.turbulence;
    writeln!(w, "scenario        {}", p.scenario)?;
    writeln!(w, "zenith_deg      {}", sig9(p.zenith_deg))?;
    writeln!(w, "slant_m         {}", sig9(b.slant_distance_m))?;
    writeln!(w)?;
    writeln!(w, "[transmittance]")?;
    writeln!(w, "eta_geo         {}", sig9(b.eta_geo))?;
    writeln!(w, "eta_scatt       {}", sig9(b.eta_scatt))?;
    writeln!(w, "eta_turb        {}", sig9(b.eta_turb))?;
    writeln!(w, "eta_bw          {}", sig9(b.eta_bw))?;
    writeln!(w, "eta_optics      {}", sig9(b.eta_optics))?;
    writeln!(w, "eta_total       {}", sig9(b.eta_total))?;
    writeln!(w)?;
    writeln!(w, "[turbulence]")?;
    writeln!(w, "cn2_avg         {}", sig9(t.cn2_avg))?;
    writeln!(w, "turb_path_m     {}", sig9(t.turb_path_m))?;
    writeln!(w, "rytov           {}", sig9(t.rytov))?;
    writeln!(w, "aperture_d      {}", sig9(t.aperture))?;
    writeln!(w, "sigma_i2        {}", sig9(t.scintillation_index))?;
    writeln!(w, "a_sci_db        {}", sig9(t.loss_db))?;
    writeln!(w, "fried_r0_m      {}", sig9(t.fried_m))?;
    if let Some(bw) = &t.beam_wander {
        writeln!(w, "wander_rc2_m2   {}", sig9(bw.displacement_variance_m2))?;
        writeln!(w, "pointing_m2     {}", sig9(bw.pointing_variance_m2))?;
        writeln!(w, "beam_radius_m   {}", sig9(bw.receiver_beam_radius_m))?;
        writeln!(w, "sigma_il2       {}", sig9(bw.scintillation))?;
        writeln!(w, "a_bw_db         {}", sig9(bw.loss_db))?;
    }
    writeln!(w)?;
    writeln!(w, "[noise]")?;
    writeln!(w, "stray_photons   {}", sig9(p.stray.photons_per_window))?;
    writeln!(w, "p_stray         {}", sig9(p.stray.probability))?;
    let c = &p.outcome.clicks;
    writeln!(w, "p_signal        {}", sig9(c.p_signal))?;
    writeln!(w, "p_dark          {}", sig9(c.p_dark))?;
    writeln!(w, "p_click         {}", sig9(c.p_click))?;
    let k = &p.outcome.coincidences;
    writeln!(w, "p_true          {}", sig9(k.p_true))?;
    writeln!(w, "p_false         {}", sig9(k.p_false))?;
    writeln!(w, "p_coin          {}", sig9(k.p_coin))?;
    writeln!(w)?;
    writeln!(w, "[protocols]  mu={} c={}", sig9(s.protocol.mean_photon_number), sig9(s.protocol.intrinsic_error))?;
    writeln!(w, "{:<8}{:>16}{:>16}", "protocol", "qber", "keyrate")?;
    for r in &p.outcome.results {
        writeln!(w, "{:<8}{:>16}{:>16}", r.protocol.as_str(), sig9(r.qber), sig9(r.keyrate))?;
    }
    Ok(())
}

pub fn write_crossover(
    w: &mut dyn Write,
    scenario: &str,
    metric: Metric,
    pair: (Protocol, Protocol),
    threshold: f64,
    angle: Option<f64>,
    profile: &[GapSample],
) -> io::Result<()> {
    writeln!(w, "scenario        {scenario}")?;
    writeln!(w, "metric          {metric}")?;
    writeln!(w, "pair            {} vs {}", pair.0, pair.1)?;
    if metric == Metric::Qber {
        writeln!(w, "threshold       {}", sig9(threshold))?;
    }
    match angle {
        Some(a) => writeln!(w, "crossover_deg   {}", sig9(a))?,
        None => writeln!(w, "crossover_deg   none")?,
    }
    writeln!(w)?;
    writeln!(w, "{:>10}{:>16}{:>16}{:>16}", "theta_deg", pair.0.as_str(), pair.1.as_str(), "gap")?;
    for g in profile {
        writeln!(w, "{:>10}{:>16}{:>16}{:>16}", sig9(g.theta_deg), sig9(g.first), sig9(g.second), sig9(g.gap))?;
    }
    Ok(())
}
