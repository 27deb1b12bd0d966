//! CSV ingestion and export of signals, decompositions and diagnostics.

use std::fs::File;
use std::io::{BufWriter, Read, Write};
use std::path::Path;

use crate::alif::MaskField;
use crate::error::{Error, Result};
use crate::instfreq::FreqResult;
use crate::iterfilt::Decomposition;
use crate::signal::Signal;
use crate::signals::{Component, ExampleCase, MatchReport};

/// Layout of a delimited time-series file.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeriesFormat {
    pub delimiter: u8,
    /// Column holding the time stamps; without one the grid starts at 0.
    pub time_column: Option<usize>,
    pub value_column: usize,
    pub header_rows: usize,
    /// Sample spacing to use instead of the time stamps.
    pub dx_override: Option<f64>,
}

impl Default for TimeSeriesFormat {
    fn default() -> Self {
        Self {
            delimiter: b',',
            time_column: Some(0),
            value_column: 1,
            header_rows: 0,
            dx_override: None,
        }
    }
}

/// Relative tolerance on the spacing of consecutive time stamps.
pub const SPACING_TOLERANCE: f64 = 1e-6;

fn csv_error(e: csv::Error, row: usize) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::Io(io),
        other => Error::Parse {
            row,
            reason: format!("{other:?}"),
        },
    }
}

fn parse_field(record: &csv::StringRecord, col: usize, row: usize) -> Result<f64> {
    let raw = record.get(col).ok_or_else(|| Error::Parse {
        row,
        reason: format!("missing column {col}"),
    })?;
    raw.trim().parse().map_err(|_| Error::Parse {
        row,
        reason: format!("not a number: '{raw}'"),
    })
}

/// Reads one value column (and optionally a time column) into a signal.
///
/// Rows are numbered from 0 in file order, headers included.
pub fn load_timeseries_csv(path: impl AsRef<Path>, fmt: &TimeSeriesFormat) -> Result<Signal> {
    parse_timeseries_csv(File::open(path)?, fmt)
}

/// [`load_timeseries_csv`] for any reader.
pub fn parse_timeseries_csv(input: impl Read, fmt: &TimeSeriesFormat) -> Result<Signal> {
    if let Some(dx) = fmt.dx_override {
        if !(dx > 0.0 && dx.is_finite()) {
            return Err(Error::InvalidConfig(format!("dx override must be positive, got {dx}")));
        }
    }
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .delimiter(fmt.delimiter)
        .flexible(true)
        .from_reader(input);
    let mut times = Vec::new();
    let mut values = Vec::new();
    for (row, record) in reader.records().enumerate() {
        let record = record.map_err(|e| csv_error(e, row))?;
        if row < fmt.header_rows {
            continue;
        }
        values.push(parse_field(&record, fmt.value_column, row)?);
        if let Some(tc) = fmt.time_column {
            times.push(parse_field(&record, tc, row)?);
        }
    }
    if values.is_empty() {
        return Err(Error::Parse {
            row: fmt.header_rows,
            reason: "no data rows".into(),
        });
    }
    let x0 = times.first().copied().unwrap_or(0.0);
    let dx = match fmt.dx_override {
        Some(dx) => dx,
        None if times.len() >= 2 => {
            let dx = times[1] - times[0];
            for (i, pair) in times.windows(2).enumerate() {
                let step = pair[1] - pair[0];
                if !(dx > 0.0) || (step - dx).abs() > SPACING_TOLERANCE * dx.abs() {
                    return Err(Error::NonUniformSpacing {
                        row: fmt.header_rows + i + 1,
                    });
                }
            }
            dx
        }
        None => 1.0,
    };
    Signal::new(values, dx, x0)
}

const LOD_CSV: &str = include_str!("../data/lod_1973_1000d.csv");

/// The bundled excess length-of-day sample: 1000 daily values in
/// milliseconds from 1973-01-01, on a grid of modified Julian days.
pub fn bundled_lod() -> Result<Signal> {
    let fmt = TimeSeriesFormat {
        header_rows: 1,
        ..Default::default()
    };
    parse_timeseries_csv(LOD_CSV.as_bytes(), &fmt)
}

/// Header and numeric columns of a CSV file written by this module.
pub fn read_columns_csv(path: impl AsRef<Path>) -> Result<(Vec<String>, Vec<Vec<f64>>)> {
    let mut reader = csv::ReaderBuilder::new()
        .from_path(path)
        .map_err(|e| csv_error(e, 0))?;
    let header: Vec<String> = reader
        .headers()
        .map_err(|e| csv_error(e, 0))?
        .iter()
        .map(str::to_string)
        .collect();
    let mut columns = vec![Vec::new(); header.len()];
    for (i, record) in reader.records().enumerate() {
        let record = record.map_err(|e| csv_error(e, i + 1))?;
        for (col, out) in columns.iter_mut().enumerate() {
            out.push(parse_field(&record, col, i + 1)?);
        }
    }
    Ok((header, columns))
}

fn num(v: f64) -> String {
    format!("{v:.16e}")
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    Ok(BufWriter::new(File::create(path)?))
}

fn write_rows(
    path: &Path,
    header: &[String],
    rows: impl Iterator<Item = Vec<String>>,
) -> Result<()> {
    let mut out = create(path)?;
    writeln!(out, "{}", header.join(","))?;
    for row in rows {
        writeln!(out, "{}", row.join(","))?;
    }
    out.flush()?;
    Ok(())
}

/// Columns `x, input, imf_1 .. imf_m, remainder`, 17 significant digits.
pub fn write_decomposition_csv(dec: &Decomposition, path: impl AsRef<Path>) -> Result<()> {
    let mut header = vec!["x".to_string(), "input".to_string()];
    header.extend((1..=dec.imfs.len()).map(|i| format!("imf_{i}")));
    header.push("remainder".into());
    let s = &dec.input;
    write_rows(
        path.as_ref(),
        &header,
        (0..s.len()).map(|i| {
            let mut row = vec![num(s.x(i)), num(s.samples()[i])];
            row.extend(dec.imfs.iter().map(|m| num(m.samples()[i])));
            row.push(num(dec.remainder.samples()[i]));
            row
        }),
    )
}

/// Per-IMF summary: iterations, final SD, mask length and, for adaptive
/// runs, the final ε and δ products.
pub fn write_diagnostics_csv(dec: &Decomposition, path: impl AsRef<Path>) -> Result<()> {
    let header: Vec<String> = [
        "imf",
        "iterations",
        "final_sd",
        "mask_half_length",
        "eps_product",
        "delta_product",
    ]
    .map(String::from)
    .to_vec();
    write_rows(
        path.as_ref(),
        &header,
        dec.diagnostics.iter().enumerate().map(|(i, d)| {
            let (eps, delta) = dec
                .convergence
                .get(i)
                .map(|c| (num(c.final_eps_product()), num(c.final_delta_product())))
                .unwrap_or_default();
            vec![
                (i + 1).to_string(),
                d.iterations.to_string(),
                num(d.final_sd),
                num(d.mask_half_length),
                eps,
                delta,
            ]
        }),
    )
}

/// Long format `imf, step, sd`.
pub fn write_sd_history_csv(dec: &Decomposition, path: impl AsRef<Path>) -> Result<()> {
    let header: Vec<String> = ["imf", "step", "sd"].map(String::from).to_vec();
    write_rows(
        path.as_ref(),
        &header,
        dec.diagnostics.iter().enumerate().flat_map(|(i, d)| {
            d.sd_history
                .iter()
                .enumerate()
                .map(move |(k, sd)| vec![(i + 1).to_string(), (k + 1).to_string(), num(*sd)])
        }),
    )
}

/// Columns `x, theta, omega, f1, f2, method, low_confidence_flag`.
pub fn write_freq_csv(fr: &FreqResult, path: impl AsRef<Path>) -> Result<()> {
    let header: Vec<String> = ["x", "theta", "omega", "f1", "f2", "method", "low_confidence_flag"]
        .map(String::from)
        .to_vec();
    write_rows(
        path.as_ref(),
        &header,
        (0..fr.len()).map(|i| {
            vec![
                num(fr.x(i)),
                num(fr.theta[i]),
                num(fr.omega[i]),
                num(fr.f1[i]),
                num(fr.f2[i]),
                fr.method.as_str().to_string(),
                u8::from(fr.low_confidence[i]).to_string(),
            ]
        }),
    )
}

/// Columns `x, l_samples` on the grid of `s`.
pub fn write_mask_csv(s: &Signal, field: &MaskField, path: impl AsRef<Path>) -> Result<()> {
    if field.len() != s.len() {
        return Err(Error::LengthMismatch(s.len(), field.len()));
    }
    let header: Vec<String> = ["x", "l_samples"].map(String::from).to_vec();
    write_rows(
        path.as_ref(),
        &header,
        field
            .values()
            .iter()
            .enumerate()
            .map(|(i, l)| vec![num(s.x(i)), num(*l)]),
    )
}

/// Columns `x, signal, truth_1 .. truth_m`.
pub fn write_example_csv(case: &ExampleCase, path: impl AsRef<Path>) -> Result<()> {
    let mut header = vec!["x".to_string(), "signal".to_string()];
    header.extend((1..=case.truth.len()).map(|i| format!("truth_{i}")));
    let s = &case.signal;
    write_rows(
        path.as_ref(),
        &header,
        (0..s.len()).map(|i| {
            let mut row = vec![num(s.x(i)), num(s.samples()[i])];
            row.extend(case.truth.iter().map(|t| num(t.samples()[i])));
            row
        }),
    )
}

/// One row per truth component: its name, the paired output and the scores.
pub fn write_match_report_csv(
    report: &MatchReport,
    names: &[String],
    path: impl AsRef<Path>,
) -> Result<()> {
    let header: Vec<String> = ["truth", "name", "component", "correlation", "rel_l2"]
        .map(String::from)
        .to_vec();
    write_rows(
        path.as_ref(),
        &header,
        report.matches.iter().map(|m| {
            let component = match m.component {
                Some(Component::Imf(i)) => format!("imf_{}", i + 1),
                Some(Component::Remainder) => "remainder".into(),
                None => "none".into(),
            };
            vec![
                (m.truth + 1).to_string(),
                names.get(m.truth).cloned().unwrap_or_default(),
                component,
                num(m.correlation),
                num(m.rel_l2),
            ]
        }),
    )
}
