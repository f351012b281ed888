//! Energy and decay-report CSV files. Floats are written with 17
//! significant digits so they parse back to the same `f64`.

use std::path::Path;

use crate::energy::EnergyRecord;
use crate::error::{Error, Result};
use crate::lab::DecayReport;

pub const ENERGY_HEADER: [&str; 11] = [
    "t",
    "kinetic",
    "interfacial",
    "bulk",
    "total",
    "viscous_rate",
    "grad_sq_rate",
    "mobility_rate",
    "cum_dissipation",
    "defect",
    "max_abs_c",
];

pub const DECAY_HEADER: [&str; 6] = [
    "term",
    "epsilon",
    "value",
    "slope",
    "predicted_slope",
    "alpha",
];

fn fmt(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn write_energy_csv(records: &[EnergyRecord], path: &Path) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(ENERGY_HEADER)?;
    for r in records {
        w.write_record(
            [
                r.t,
                r.kinetic,
                r.interfacial,
                r.bulk,
                r.total(),
                r.viscous_rate,
                r.grad_sq_rate,
                r.mobility_rate,
                r.cum_dissipation,
                r.defect,
                r.max_abs_c,
            ]
            .map(fmt),
        )?;
    }
    w.flush()?;
    Ok(())
}

/// Reads an energy CSV written by [`write_energy_csv`]. The `total` column
/// is not stored; [`EnergyRecord::total`] recomputes it from its parts.
pub fn read_energy_csv(path: &Path) -> Result<Vec<EnergyRecord>> {
    let mut r = csv::Reader::from_path(path)?;
    let header = r.headers()?.clone();
    if header.iter().ne(ENERGY_HEADER.iter().copied()) {
        return Err(Error::Input(format!(
            "{}: unexpected energy CSV header {:?}",
            path.display(),
            header.iter().collect::<Vec<_>>()
        )));
    }
    let mut out = Vec::new();
    for (i, row) in r.records().enumerate() {
        let row = row?;
        let v: Vec<f64> = row
            .iter()
            .map(|s| {
                s.trim().parse::<f64>().map_err(|_| {
                    Error::Input(format!(
                        "{}: row {}: malformed number {s:?}",
                        path.display(),
                        i + 2
                    ))
                })
            })
            .collect::<Result<_>>()?;
        out.push(EnergyRecord {
            t: v[0],
            kinetic: v[1],
            interfacial: v[2],
            bulk: v[3],
            viscous_rate: v[5],
            grad_sq_rate: v[6],
            mobility_rate: v[7],
            cum_dissipation: v[8],
            defect: v[9],
            max_abs_c: v[10],
        });
    }
    Ok(out)
}

pub fn write_decay_csv(reports: &[DecayReport], path: &Path) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(DECAY_HEADER)?;
    for rep in reports {
        let slope = rep.fit.slope;
        let predicted = rep.predicted_slope.unwrap_or(f64::NAN);
        for (e, v) in rep.epsilons.iter().zip(&rep.values) {
            w.write_record([
                rep.term.name().to_string(),
                fmt(*e),
                fmt(*v),
                fmt(slope),
                fmt(predicted),
                fmt(rep.alpha),
            ])?;
        }
    }
    w.flush()?;
    Ok(())
}
