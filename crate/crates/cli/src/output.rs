use std::io::Write;

use serde::{Deserialize, Serialize, Serializer};

use crate::args::Format;
use crate::error::CliResult;

/// Rounds to 12 significant digits so that output is stable across
/// platforms and insensitive to last-bit noise.
pub fn round12(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.11e}").parse().unwrap_or(x)
}

fn sig12<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_f64(round12(*x))
}

/// A record type with a fixed column order.
pub trait Row: Serialize {
    const COLUMNS: &'static [&'static str];
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResonanceRow {
    pub n: usize,
    pub method: String,
    #[serde(serialize_with = "sig12")]
    pub re_lambda: f64,
    #[serde(serialize_with = "sig12")]
    pub im_lambda: f64,
    #[serde(serialize_with = "sig12")]
    pub re_z: f64,
    #[serde(serialize_with = "sig12")]
    pub im_z: f64,
    #[serde(serialize_with = "sig12")]
    pub residual_abs: f64,
    pub iterations: usize,
    pub status: String,
}

impl Row for ResonanceRow {
    const COLUMNS: &'static [&'static str] =
        &["n", "method", "re_lambda", "im_lambda", "re_z", "im_z", "residual_abs", "iterations", "status"];
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnvelopeRow {
    #[serde(serialize_with = "sig12")]
    pub theta: f64,
    #[serde(serialize_with = "sig12")]
    pub a_theta: f64,
    #[serde(serialize_with = "sig12")]
    pub x: f64,
    #[serde(serialize_with = "sig12")]
    pub y: f64,
}

impl Row for EnvelopeRow {
    const COLUMNS: &'static [&'static str] = &["theta", "a_theta", "x", "y"];
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundsRow {
    pub name: String,
    #[serde(serialize_with = "sig12")]
    pub value: f64,
    pub verdict: String,
}

impl Row for BoundsRow {
    const COLUMNS: &'static [&'static str] = &["name", "value", "verdict"];
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PerturbRow {
    #[serde(serialize_with = "sig12")]
    pub eps: f64,
    #[serde(serialize_with = "sig12")]
    pub re_lambda: f64,
    #[serde(serialize_with = "sig12")]
    pub im_lambda: f64,
    #[serde(serialize_with = "sig12")]
    pub re_shift: f64,
    #[serde(serialize_with = "sig12")]
    pub im_shift: f64,
    #[serde(serialize_with = "sig12")]
    pub re_predicted: f64,
    #[serde(serialize_with = "sig12")]
    pub im_predicted: f64,
    pub status: String,
}

impl Row for PerturbRow {
    const COLUMNS: &'static [&'static str] = &[
        "eps",
        "re_lambda",
        "im_lambda",
        "re_shift",
        "im_shift",
        "re_predicted",
        "im_predicted",
        "status",
    ];
}

/// Result rows of one task.
#[derive(Debug, Clone, PartialEq)]
pub enum Table {
    Resonances(Vec<ResonanceRow>),
    Envelope(Vec<EnvelopeRow>),
    Bounds(Vec<BoundsRow>),
    Perturb(Vec<PerturbRow>),
}

impl Table {
    pub fn len(&self) -> usize {
        match self {
            Table::Resonances(r) => r.len(),
            Table::Envelope(r) => r.len(),
            Table::Bounds(r) => r.len(),
            Table::Perturb(r) => r.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn write<W: Write>(&self, w: W, format: Format) -> CliResult<()> {
        match self {
            Table::Resonances(r) => write_rows(w, r, format),
            Table::Envelope(r) => write_rows(w, r, format),
            Table::Bounds(r) => write_rows(w, r, format),
            Table::Perturb(r) => write_rows(w, r, format),
        }
    }
}

pub fn write_rows<W: Write, R: Row>(mut w: W, rows: &[R], format: Format) -> CliResult<()> {
    match format {
        Format::Csv => {
            let mut csv = csv::WriterBuilder::new()
                .has_headers(false)
                .terminator(csv::Terminator::Any(b'\n'))
                .from_writer(&mut w);
            csv.write_record(R::COLUMNS)?;
            for r in rows {
                csv.serialize(r)?;
            }
            csv.flush()?;
        }
        Format::Json => {
            serde_json::to_writer_pretty(&mut w, rows)?;
            w.write_all(b"\n")?;
        }
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rounding_keeps_twelve_digits() {
        assert_eq!(round12(0.1234567890123456), 0.123456789012);
        assert_eq!(round12(-37.70593078901234), -37.7059307890);
        assert_eq!(round12(1e-20), 1e-20);
        assert!(round12(f64::NAN).is_nan());
    }

    #[test]
    fn csv_has_header_even_without_rows() {
        let mut buf = Vec::new();
        write_rows::<_, EnvelopeRow>(&mut buf, &[], Format::Csv).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "theta,a_theta,x,y\n");
    }

    #[test]
    fn csv_and_json_share_field_names() {
        let row = BoundsRow { name: "threshold".into(), value: 1.0 / 3.0, verdict: "bound".into() };
        let mut csv = Vec::new();
        write_rows(&mut csv, std::slice::from_ref(&row), Format::Csv).unwrap();
        assert_eq!(String::from_utf8(csv).unwrap(), "name,value,verdict\nthreshold,0.333333333333,bound\n");
        let mut json = Vec::new();
        write_rows(&mut json, &[row], Format::Json).unwrap();
        let v: serde_json::Value = serde_json::from_slice(&json).unwrap();
        let keys: Vec<&str> = v[0].as_object().unwrap().keys().map(String::as_str).collect();
        let mut expected = BoundsRow::COLUMNS.to_vec();
        expected.sort();
        let mut keys = keys;
        keys.sort();
        assert_eq!(keys, expected);
    }
}
