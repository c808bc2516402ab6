//! CSV output. Every float is written with 17 significant digits so the
//! files parse back to the exact `f64` that was computed.

use std::io::Write;

use casimir_core::analysis::{DistanceScan, PhaseDiagramGrid};
use casimir_core::lifshitz::ForceResult;
use casimir_core::units::{ideal_pressure_si, NaturalUnits};

pub fn fmt(x: f64) -> String {
    format!("{x:.16e}")
}

/// One row of the `force` table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ForceRow {
    pub d_m: f64,
    pub ratio: f64,
    pub force_pa: f64,
    pub err: f64,
    pub sign: &'static str,
}

impl ForceRow {
    pub fn new(result: &ForceResult, units: &NaturalUnits) -> Self {
        let d_m = units.distance_to_meters(result.distance);
        let f0 = ideal_pressure_si(d_m);
        Self {
            d_m,
            ratio: result.ratio,
            force_pa: result.ratio * f0,
            err: result.quad_error,
            sign: result.sign.as_str(),
        }
    }
}

pub fn write_force_csv<W: Write>(out: W, rows: &[ForceRow]) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["d_m", "ratio", "force_Pa", "err", "sign"])?;
    for r in rows {
        w.write_record([fmt(r.d_m), fmt(r.ratio), fmt(r.force_pa), fmt(r.err), r.sign.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_scan_csv<W: Write>(out: W, scan: &DistanceScan, units: &NaturalUnits) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["d_m", "ratio", "sign"])?;
    for r in &scan.results {
        w.write_record([fmt(units.distance_to_meters(r.distance)), fmt(r.ratio), r.sign.as_str().to_string()])?;
    }
    w.flush()?;
    Ok(())
}

/// Cells outside the passivity bound are written with ratio `NaN` and sign
/// `excluded`.
pub fn write_phase_csv<W: Write>(out: W, grid: &PhaseDiagramGrid) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record([grid.spec.axis1.name, grid.spec.axis2.name, "ratio", "sign"])?;
    for c in &grid.cells {
        let (ratio, sign) = match c.force {
            Some(f) => (fmt(f.ratio), f.sign.as_str()),
            None => ("NaN".to_string(), "excluded"),
        };
        w.write_record([fmt(c.axis1), fmt(c.axis2), ratio, sign.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

/// Rows of `(coupling, exact, expansion, residual)`.
pub fn write_asymptotics_csv<W: Write>(out: W, rows: &[[f64; 4]]) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["coupling", "exact", "expansion", "residual"])?;
    for r in rows {
        w.write_record(r.iter().map(|&x| fmt(x)))?;
    }
    w.flush()?;
    Ok(())
}

/// `phase_d0.1um` for `d_m = 1e-7`.
pub fn phase_file_stem(d_m: f64) -> String {
    let um = format!("{:.6}", d_m * 1e6);
    let um = um.trim_end_matches('0').trim_end_matches('.');
    format!("phase_d{um}um")
}
