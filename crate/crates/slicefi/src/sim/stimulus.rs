//! Stimulus: per-cycle input vectors, loaded from and saved to CSV.
//!
//! The CSV header names every non-clock input (any order); an optional
//! `cycle` column must count 0, 1, 2, ... Values are decimal or 0x-hex.

use thiserror::Error;

use crate::bits::mask;
use crate::frontend::{ElaboratedDesign, SignalId};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum StimulusError {
    #[error("stimulus CSV: {0}")]
    Csv(String),
    #[error("stimulus row {row}: bad value `{value}`")]
    BadValue { row: usize, value: String },
    #[error("stimulus row {row}: value {value} does not fit input `{signal}` ({width} bits)")]
    ValueTooWide {
        row: usize,
        signal: String,
        value: u64,
        width: u32,
    },
    #[error("stimulus does not cover input `{0}`")]
    MissingInput(String),
    #[error("stimulus column `{0}` is not an input of the design")]
    UnknownColumn(String),
    #[error("duplicate stimulus column `{0}`")]
    DuplicateColumn(String),
    #[error("stimulus row {row}: `cycle` column must equal the row index")]
    BadCycleColumn { row: usize },
    #[error("stimulus row {row}: expected {expected} values, found {found}")]
    RowShape {
        row: usize,
        expected: usize,
        found: usize,
    },
}

/// Input vectors for a simulation horizon. Row layout matches `inputs`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Stimulus {
    inputs: Vec<SignalId>,
    rows: Vec<Vec<u64>>,
}

impl Stimulus {
    /// Build from already-ordered rows; values are masked to each
    /// input's width.
    pub fn new(design: &ElaboratedDesign, inputs: Vec<SignalId>, rows: Vec<Vec<u64>>) -> Self {
        let masked = rows
            .into_iter()
            .map(|row| {
                row.iter()
                    .zip(&inputs)
                    .map(|(v, s)| v & mask(design.signal(*s).width))
                    .collect()
            })
            .collect();
        Self {
            inputs,
            rows: masked,
        }
    }

    pub fn inputs(&self) -> &[SignalId] {
        &self.inputs
    }

    pub fn rows(&self) -> &[Vec<u64>] {
        &self.rows
    }

    pub fn row(&self, cycle: usize) -> &[u64] {
        &self.rows[cycle]
    }

    pub fn n_cycles(&self) -> usize {
        self.rows.len()
    }

    pub fn from_csv_str(design: &ElaboratedDesign, text: &str) -> Result<Self, StimulusError> {
        let mut reader = csv::ReaderBuilder::new()
            .trim(csv::Trim::All)
            .from_reader(text.as_bytes());
        let headers = reader
            .headers()
            .map_err(|e| StimulusError::Csv(e.to_string()))?
            .clone();

        let expected = design.stimulus_inputs();
        let mut cycle_col = None;
        // column index -> position in `expected`
        let mut col_map: Vec<Option<usize>> = vec![None; headers.len()];
        let mut seen = vec![false; expected.len()];
        for (i, name) in headers.iter().enumerate() {
            if name == "cycle" {
                if cycle_col.is_some() {
                    return Err(StimulusError::DuplicateColumn("cycle".into()));
                }
                cycle_col = Some(i);
                continue;
            }
            let pos = expected
                .iter()
                .position(|s| design.signal(*s).name == name)
                .ok_or_else(|| StimulusError::UnknownColumn(name.to_string()))?;
            if seen[pos] {
                return Err(StimulusError::DuplicateColumn(name.to_string()));
            }
            seen[pos] = true;
            col_map[i] = Some(pos);
        }
        if let Some(missing) = seen.iter().position(|s| !s) {
            return Err(StimulusError::MissingInput(
                design.signal(expected[missing]).name.clone(),
            ));
        }

        let mut rows = Vec::new();
        for (row_idx, record) in reader.records().enumerate() {
            let record = record.map_err(|e| StimulusError::Csv(e.to_string()))?;
            if record.len() != headers.len() {
                return Err(StimulusError::RowShape {
                    row: row_idx,
                    expected: headers.len(),
                    found: record.len(),
                });
            }
            let mut row = vec![0u64; expected.len()];
            for (i, field) in record.iter().enumerate() {
                let value = parse_value(field).ok_or_else(|| StimulusError::BadValue {
                    row: row_idx,
                    value: field.to_string(),
                })?;
                if Some(i) == cycle_col {
                    if value != row_idx as u64 {
                        return Err(StimulusError::BadCycleColumn { row: row_idx });
                    }
                    continue;
                }
                let pos = col_map[i].expect("mapped column");
                let decl = design.signal(expected[pos]);
                if decl.width < 64 && value >= (1u64 << decl.width) {
                    return Err(StimulusError::ValueTooWide {
                        row: row_idx,
                        signal: decl.name.clone(),
                        value,
                        width: decl.width,
                    });
                }
                row[pos] = value;
            }
            rows.push(row);
        }
        Ok(Self {
            inputs: expected,
            rows,
        })
    }

    /// Canonical CSV: a `cycle` column followed by inputs in declaration
    /// order, decimal values.
    pub fn to_csv_string(&self, design: &ElaboratedDesign) -> String {
        let mut out = String::from("cycle");
        for s in &self.inputs {
            out.push(',');
            out.push_str(&design.signal(*s).name);
        }
        out.push('\n');
        for (c, row) in self.rows.iter().enumerate() {
            out.push_str(&c.to_string());
            for v in row {
                out.push(',');
                out.push_str(&v.to_string());
            }
            out.push('\n');
        }
        out
    }
}

fn parse_value(field: &str) -> Option<u64> {
    if let Some(hex) = field.strip_prefix("0x").or_else(|| field.strip_prefix("0X")) {
        u64::from_str_radix(hex, 16).ok()
    } else {
        field.parse().ok()
    }
}
