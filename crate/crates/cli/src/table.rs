//! CSV and JSON encodings of sweep tables.

use std::io::{Read, Write};

use qkdlink::link::TransmittanceBreakdown;
use qkdlink::protocols::Protocol;
use qkdlink::sweep::{ProtocolSample, RowData, SweepRow, SweepTable};

use crate::numfmt::sig9;
use crate::CliError;

/// Frozen column order of the sweep CSV.
pub const CSV_COLUMNS: [&str; 19] = [
    "scenario",
    "theta_deg",
    "L_m",
    "eta_geo",
    "eta_scatt",
    "eta_turb",
    "eta_bw",
    "eta_total",
    "stray_per_window",
    "p_click",
    "p_coin",
    "qber_bb84",
    "rate_bb84",
    "qber_b92",
    "rate_b92",
    "qber_bbm92",
    "rate_bbm92",
    "qber_e91",
    "rate_e91",
];

fn csv_err(e: csv::Error) -> CliError {
    CliError::Table(e.to_string())
}

pub fn write_csv<W: Write>(table: &SweepTable, out: W) -> Result<(), CliError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_COLUMNS).map_err(csv_err)?;
    for row in &table.rows {
        let mut rec = vec![row.scenario.clone(), sig9(row.theta_deg)];
        match &row.data {
            Some(d) => {
                let b = &d.breakdown;
                for v in [b.slant_distance_m, b.eta_geo, b.eta_scatt, b.eta_turb, b.eta_bw, b.eta_total, d.stray_per_window, d.p_click, d.p_coin] {
                    rec.push(sig9(v));
                }
                for p in Protocol::ALL {
                    match d.sample(p) {
                        Some(s) => {
                            rec.push(sig9(s.qber));
                            rec.push(sig9(s.keyrate));
                        }
                        None => rec.extend([String::new(), String::new()]),
                    }
                }
            }
            None => rec.extend(std::iter::repeat_n(String::new(), CSV_COLUMNS.len() - 2)),
        }
        w.write_record(&rec).map_err(csv_err)?;
    }
    w.flush().map_err(|e| CliError::Table(e.to_string()))?;
    Ok(())
}

pub fn read_csv<R: Read>(input: R) -> Result<SweepTable, CliError> {
    let mut r = csv::Reader::from_reader(input);
    let headers = r.headers().map_err(csv_err)?.clone();
    let mut index = Vec::with_capacity(CSV_COLUMNS.len());
    for col in CSV_COLUMNS {
        let i = headers
            .iter()
            .position(|h| h == col)
            .ok_or_else(|| CliError::Table(format!("missing column `{col}`")))?;
        index.push(i);
    }
    let mut rows = Vec::new();
    for (line, rec) in r.records().enumerate() {
        let rec = rec.map_err(csv_err)?;
        let cell = |k: usize| rec.get(index[k]).unwrap_or("").trim();
        let num = |k: usize| -> Result<Option<f64>, CliError> {
            let c = cell(k);
            if c.is_empty() {
                return Ok(None);
            }
            c.parse::<f64>()
                .map(Some)
                .map_err(|_| CliError::Table(format!("row {}: bad number `{c}` in `{}`", line + 2, CSV_COLUMNS[k])))
        };
        let theta = num(1)?.ok_or_else(|| CliError::Table(format!("row {}: missing theta_deg", line + 2)))?;
        let head: Vec<Option<f64>> = (2..11).map(num).collect::<Result<_, _>>()?;
        let data = if head.iter().all(Option::is_some) {
            let h: Vec<f64> = head.into_iter().map(Option::unwrap).collect();
            let mut protocols = Vec::new();
            for (j, p) in Protocol::ALL.into_iter().enumerate() {
                if let (Some(q), Some(k)) = (num(11 + 2 * j)?, num(12 + 2 * j)?) {
                    protocols.push(ProtocolSample { protocol: p, qber: q, keyrate: k });
                }
            }
            Some(RowData {
                breakdown: TransmittanceBreakdown {
                    eta_geo: h[1],
                    eta_scatt: h[2],
                    eta_turb: h[3],
                    eta_bw: h[4],
                    eta_optics: if (h[1] * h[2] * h[3] * h[4]) > 0.0 { h[5] / (h[1] * h[2] * h[3] * h[4]) } else { 0.0 },
                    eta_total: h[5],
                    slant_distance_m: h[0],
                },
                stray_per_window: h[6],
                p_click: h[7],
                p_coin: h[8],
                protocols,
            })
        } else {
            None
        };
        let error = data.is_none().then(|| "no data".to_string());
        rows.push(SweepRow { scenario: cell(0).to_string(), theta_deg: theta, data, error });
    }
    Ok(SweepTable { rows })
}

pub fn write_json<W: Write>(table: &SweepTable, mut out: W) -> Result<(), CliError> {
    serde_json::to_writer_pretty(&mut out, table).map_err(|e| CliError::Table(e.to_string()))?;
    writeln!(out).map_err(|e| CliError::Table(e.to_string()))
}

pub fn read_json<R: Read>(input: R) -> Result<SweepTable, CliError> {
    serde_json::from_reader(input).map_err(|e| CliError::Table(e.to_string()))
}
