//! Result tables in CSV or JSON.
//!
//! Both formats carry the columns
//! `label,condition,trial,seed,s_equiv,s_inv,k_a,k_a_prime,r`, with scores
//! printed to six decimal places.

use std::fmt;
use std::fs;
use std::io::Write;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use serde_json::value::RawValue;

use crate::error::{Result, SeisError};

pub const CSV_HEADER: [&str; 9] = [
    "label",
    "condition",
    "trial",
    "seed",
    "s_equiv",
    "s_inv",
    "k_a",
    "k_a_prime",
    "r",
];

/// One scored pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRow {
    pub label: String,
    pub condition: String,
    pub trial: usize,
    pub seed: u64,
    pub s_equiv: f64,
    pub s_inv: f64,
    pub k_a: usize,
    pub k_a_prime: usize,
    pub r: usize,
}

impl ResultRow {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("s_equiv", self.s_equiv), ("s_inv", self.s_inv)] {
            if !(0.0..=1.0).contains(&v) {
                return Err(SeisError::Validation(format!("{name} = {v} is outside [0, 1]")));
            }
        }
        if self.r != self.k_a.min(self.k_a_prime) {
            return Err(SeisError::Validation(format!(
                "r = {} but min(k_a, k_a_prime) = {}",
                self.r,
                self.k_a.min(self.k_a_prime)
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

impl FromStr for OutputFormat {
    type Err = SeisError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(SeisError::Parse(format!("unknown output format {other:?}"))),
        }
    }
}

impl fmt::Display for OutputFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OutputFormat::Csv => "csv",
            OutputFormat::Json => "json",
        })
    }
}

pub fn fmt6(v: f64) -> String {
    format!("{v:.6}")
}

#[derive(Serialize)]
struct JsonRow<'a> {
    label: &'a str,
    condition: &'a str,
    trial: usize,
    seed: u64,
    s_equiv: Box<RawValue>,
    s_inv: Box<RawValue>,
    k_a: usize,
    k_a_prime: usize,
    r: usize,
}

fn raw_float(v: f64) -> Box<RawValue> {
    RawValue::from_string(fmt6(v)).expect("fixed-point float is valid JSON")
}

/// Renders rows in the requested format.
pub fn render_results(rows: &[ResultRow], format: OutputFormat) -> Result<Vec<u8>> {
    for row in rows {
        row.validate()?;
    }
    match format {
        OutputFormat::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            let fail = |e: csv::Error| SeisError::Format(format!("csv: {e}"));
            w.write_record(CSV_HEADER).map_err(fail)?;
            for r in rows {
                w.write_record([
                    r.label.clone(),
                    r.condition.clone(),
                    r.trial.to_string(),
                    r.seed.to_string(),
                    fmt6(r.s_equiv),
                    fmt6(r.s_inv),
                    r.k_a.to_string(),
                    r.k_a_prime.to_string(),
                    r.r.to_string(),
                ])
                .map_err(fail)?;
            }
            w.into_inner()
                .map_err(|e| SeisError::Format(format!("csv: {e}")))
        }
        OutputFormat::Json => {
            let json_rows: Vec<JsonRow<'_>> = rows
                .iter()
                .map(|r| JsonRow {
                    label: &r.label,
                    condition: &r.condition,
                    trial: r.trial,
                    seed: r.seed,
                    s_equiv: raw_float(r.s_equiv),
                    s_inv: raw_float(r.s_inv),
                    k_a: r.k_a,
                    k_a_prime: r.k_a_prime,
                    r: r.r,
                })
                .collect();
            let mut out = serde_json::to_vec_pretty(&json_rows)
                .map_err(|e| SeisError::Format(format!("json: {e}")))?;
            out.push(b'\n');
            Ok(out)
        }
    }
}

pub fn write_results(rows: &[ResultRow], path: impl AsRef<Path>, format: OutputFormat) -> Result<()> {
    let path = path.as_ref();
    let bytes = render_results(rows, format)?;
    let mut f = fs::File::create(path).map_err(|e| SeisError::io(path, e))?;
    f.write_all(&bytes).map_err(|e| SeisError::io(path, e))
}

pub fn parse_results(bytes: &[u8], format: OutputFormat) -> Result<Vec<ResultRow>> {
    match format {
        OutputFormat::Csv => {
            let mut rdr = csv::Reader::from_reader(bytes);
            let headers = rdr
                .headers()
                .map_err(|e| SeisError::Parse(format!("csv: {e}")))?
                .clone();
            if headers.iter().ne(CSV_HEADER) {
                return Err(SeisError::Parse(format!("unexpected csv header {headers:?}")));
            }
            rdr.deserialize()
                .map(|r| r.map_err(|e| SeisError::Parse(format!("csv: {e}"))))
                .collect()
        }
        OutputFormat::Json => {
            serde_json::from_slice(bytes).map_err(|e| SeisError::Parse(format!("json: {e}")))
        }
    }
}

pub fn read_results(path: impl AsRef<Path>, format: OutputFormat) -> Result<Vec<ResultRow>> {
    let path = path.as_ref();
    let bytes = fs::read(path).map_err(|e| SeisError::io(path, e))?;
    parse_results(&bytes, format)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row() -> ResultRow {
        ResultRow {
            label: "layer1".into(),
            condition: "rotation".into(),
            trial: 3,
            seed: 42,
            s_equiv: 0.987654321,
            s_inv: 0.5,
            k_a: 12,
            k_a_prime: 10,
            r: 10,
        }
    }

    #[test]
    fn csv_one_row_two_lines() {
        let text = String::from_utf8(render_results(&[row()], OutputFormat::Csv).unwrap()).unwrap();
        let lines: Vec<_> = text.lines().collect();
        assert_eq!(lines.len(), 2);
        assert_eq!(lines[0], "label,condition,trial,seed,s_equiv,s_inv,k_a,k_a_prime,r");
        assert_eq!(lines[1], "layer1,rotation,3,42,0.987654,0.500000,12,10,10");
    }

    #[test]
    fn csv_empty_is_header_only() {
        let text = String::from_utf8(render_results(&[], OutputFormat::Csv).unwrap()).unwrap();
        assert_eq!(text, "label,condition,trial,seed,s_equiv,s_inv,k_a,k_a_prime,r\n");
    }

    #[test]
    fn json_single_element_array() {
        let bytes = render_results(&[row()], OutputFormat::Json).unwrap();
        let v: serde_json::Value = serde_json::from_slice(&bytes).unwrap();
        let arr = v.as_array().unwrap();
        assert_eq!(arr.len(), 1);
        let keys: Vec<_> = arr[0].as_object().unwrap().keys().cloned().collect();
        let mut expected: Vec<_> = CSV_HEADER.iter().map(|s| s.to_string()).collect();
        expected.sort();
        let mut keys_sorted = keys.clone();
        keys_sorted.sort();
        assert_eq!(keys_sorted, expected);
        assert!(String::from_utf8(bytes).unwrap().contains("\"s_inv\": 0.500000"));
    }

    #[test]
    fn invalid_rows_rejected() {
        let mut r = row();
        r.s_inv = 1.5;
        assert!(render_results(&[r], OutputFormat::Csv).is_err());
        let mut r = row();
        r.r = 12;
        assert!(render_results(&[r], OutputFormat::Json).is_err());
    }

    #[test]
    fn format_parsing() {
        assert_eq!("JSON".parse::<OutputFormat>().unwrap(), OutputFormat::Json);
        assert!("xml".parse::<OutputFormat>().is_err());
    }
}
