//! File formats: the `jspec-1` tuple JSON schema, bound report JSON, and the
//! 17-significant-digit float serialization that round-trips every 64-bit
//! float exactly.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::bounds::{BoundKind, BoundReport};
use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;
use crate::tuple::{HypothesisReport, MatrixTuple, Tolerances};

pub const TUPLE_SCHEMA_VERSION: &str = "jspec-1";

/// JSON formatter that writes every float as a decimal with 17 significant
/// digits, which is always enough to reproduce the exact f64 bits on parse.
struct SigDigitFormatter;

impl serde_json::ser::Formatter for SigDigitFormatter {
    fn write_f64<W>(&mut self, writer: &mut W, value: f64) -> std::io::Result<()>
    where
        W: ?Sized + Write,
    {
        write!(writer, "{value:.16e}")
    }
}

/// Serializes any value with 17-significant-digit floats, trailing newline
/// included.
pub fn to_json_string<T: Serialize>(value: &T) -> Result<String> {
    let mut buffer = Vec::new();
    let mut serializer = serde_json::Serializer::with_formatter(&mut buffer, SigDigitFormatter);
    value.serialize(&mut serializer)?;
    buffer.push(b'\n');
    Ok(String::from_utf8(buffer).expect("serde_json emits UTF-8"))
}

pub fn write_json_file<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    std::fs::write(path, to_json_string(value)?)?;
    Ok(())
}

/// On-disk representation of a matrix tuple.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TupleFile {
    pub schema_version: String,
    pub n: usize,
    pub m: usize,
    /// `matrices[k][i][j]` is the `[re, im]` pair of entry (i, j) of member k.
    pub matrices: Vec<Vec<Vec<[f64; 2]>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metadata: Option<BTreeMap<String, serde_json::Value>>,
}

impl TupleFile {
    pub fn from_tuple(
        tuple: &MatrixTuple,
        metadata: Option<BTreeMap<String, serde_json::Value>>,
    ) -> Self {
        let matrices = tuple
            .members()
            .iter()
            .map(|m| {
                (0..m.n_rows())
                    .map(|i| {
                        (0..m.n_cols())
                            .map(|j| {
                                let z = m.get(i, j);
                                [z.re, z.im]
                            })
                            .collect()
                    })
                    .collect()
            })
            .collect();
        Self {
            schema_version: TUPLE_SCHEMA_VERSION.to_string(),
            n: tuple.n(),
            m: tuple.m(),
            matrices,
            metadata,
        }
    }

    pub fn into_tuple(self) -> Result<MatrixTuple> {
        if self.schema_version != TUPLE_SCHEMA_VERSION {
            return Err(Error::SchemaVersion {
                found: self.schema_version,
                expected: TUPLE_SCHEMA_VERSION.to_string(),
            });
        }
        if self.matrices.len() != self.m {
            return Err(Error::dims(format!(
                "file declares m = {} but holds {} matrices",
                self.m,
                self.matrices.len()
            )));
        }
        let mut members = Vec::with_capacity(self.m);
        for rows in &self.matrices {
            if rows.len() != self.n || rows.iter().any(|r| r.len() != self.n) {
                return Err(Error::dims(format!(
                    "file declares n = {} but holds a mismatched matrix",
                    self.n
                )));
            }
            let entries: Vec<Complex64> = rows
                .iter()
                .flatten()
                .map(|&[re, im]| Complex64::new(re, im))
                .collect();
            members.push(ComplexMatrix::new(self.n, self.n, entries)?);
        }
        MatrixTuple::new(members)
    }
}

pub fn read_tuple_file(path: &Path) -> Result<MatrixTuple> {
    let text = std::fs::read_to_string(path)?;
    let file: TupleFile = serde_json::from_str(&text)?;
    file.into_tuple().map_err(|e| match e {
        Error::Io(_) | Error::Json(_) | Error::SchemaVersion { .. } => e,
        other => Error::FileFormat(other.to_string()),
    })
}

pub fn write_tuple_file(
    path: &Path,
    tuple: &MatrixTuple,
    metadata: Option<BTreeMap<String, serde_json::Value>>,
) -> Result<()> {
    write_json_file(path, &TupleFile::from_tuple(tuple, metadata))
}

/// On-disk representation of a bound report. Mirrors [`BoundReport`], with
/// the permutation published 1-indexed.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ReportFile {
    pub bound_kind: BoundKind,
    pub permutation: Vec<usize>,
    pub lhs: f64,
    pub lhs_sqrt: f64,
    pub rhs: f64,
    pub slack: f64,
    pub holds: bool,
    pub hypothesis_a: HypothesisReport,
    pub hypothesis_b: HypothesisReport,
    pub tolerances: Tolerances,
    pub seed: u64,
}

impl ReportFile {
    pub fn from_report(report: &BoundReport) -> Self {
        Self {
            bound_kind: report.kind,
            permutation: report.permutation.iter().map(|&j| j + 1).collect(),
            lhs: report.lhs,
            lhs_sqrt: report.lhs_sqrt,
            rhs: report.rhs,
            slack: report.slack,
            holds: report.holds,
            hypothesis_a: report.hypothesis_a.clone(),
            hypothesis_b: report.hypothesis_b.clone(),
            tolerances: report.tolerances,
            seed: report.seed,
        }
    }
}
