//! Label-indexed dense integer matrices and vectors.
//!
//! Entries are arbitrary-precision [`BigInt`]s; row and column indices are
//! named, and every operation checks that label sequences line up instead of
//! silently mixing coordinate systems. Vectors are columns and matrices act
//! by left multiplication.

use std::collections::HashSet;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::de::Error as DeError;
use serde::ser::SerializeStruct;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatrixError {
    #[error("duplicate label `{0}`")]
    DuplicateLabel(String),
    #[error("shape mismatch: expected {expected} {what}, found {found}")]
    Shape {
        what: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("label mismatch: {0}")]
    LabelMismatch(String),
}

fn check_labels(labels: &[String]) -> Result<(), MatrixError> {
    let mut seen = HashSet::new();
    for l in labels {
        if !seen.insert(l.as_str()) {
            return Err(MatrixError::DuplicateLabel(l.clone()));
        }
    }
    Ok(())
}

/// Dense integer matrix with named rows and columns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    row_labels: Vec<String>,
    col_labels: Vec<String>,
    entries: Vec<Vec<BigInt>>,
}

impl IntMatrix {
    pub fn new(
        row_labels: Vec<String>,
        col_labels: Vec<String>,
        entries: Vec<Vec<BigInt>>,
    ) -> Result<Self, MatrixError> {
        check_labels(&row_labels)?;
        check_labels(&col_labels)?;
        if entries.len() != row_labels.len() {
            return Err(MatrixError::Shape {
                what: "rows",
                expected: row_labels.len(),
                found: entries.len(),
            });
        }
        for row in &entries {
            if row.len() != col_labels.len() {
                return Err(MatrixError::Shape {
                    what: "columns",
                    expected: col_labels.len(),
                    found: row.len(),
                });
            }
        }
        Ok(IntMatrix {
            row_labels,
            col_labels,
            entries,
        })
    }

    pub fn zeros(row_labels: Vec<String>, col_labels: Vec<String>) -> Result<Self, MatrixError> {
        let entries = vec![vec![BigInt::zero(); col_labels.len()]; row_labels.len()];
        IntMatrix::new(row_labels, col_labels, entries)
    }

    /// Square identity with the same labels on both axes.
    pub fn identity(labels: Vec<String>) -> Result<Self, MatrixError> {
        let n = labels.len();
        let mut m = IntMatrix::zeros(labels.clone(), labels)?;
        for i in 0..n {
            m.entries[i][i] = BigInt::from(1);
        }
        Ok(m)
    }

    /// Builds a matrix with synthesized positional labels `r0..`, `c0..`.
    pub fn from_entries(entries: Vec<Vec<BigInt>>) -> Result<Self, MatrixError> {
        let rows = entries.len();
        let cols = entries.first().map_or(0, Vec::len);
        let row_labels = (0..rows).map(|i| format!("r{i}")).collect();
        let col_labels = (0..cols).map(|j| format!("c{j}")).collect();
        IntMatrix::new(row_labels, col_labels, entries)
    }

    pub fn from_i64(
        row_labels: &[&str],
        col_labels: &[&str],
        entries: &[&[i64]],
    ) -> Result<Self, MatrixError> {
        let entries = entries
            .iter()
            .map(|row| row.iter().map(|&v| BigInt::from(v)).collect())
            .collect();
        IntMatrix::new(
            row_labels.iter().map(|s| s.to_string()).collect(),
            col_labels.iter().map(|s| s.to_string()).collect(),
            entries,
        )
    }

    pub fn n_rows(&self) -> usize {
        self.row_labels.len()
    }

    pub fn n_cols(&self) -> usize {
        self.col_labels.len()
    }

    pub fn row_labels(&self) -> &[String] {
        &self.row_labels
    }

    pub fn col_labels(&self) -> &[String] {
        &self.col_labels
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.entries[i][j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: BigInt) {
        self.entries[i][j] = value;
    }

    pub fn entries(&self) -> &[Vec<BigInt>] {
        &self.entries
    }

    pub fn row(&self, i: usize) -> IntVector {
        IntVector {
            labels: self.col_labels.clone(),
            entries: self.entries[i].clone(),
        }
    }

    pub fn column(&self, j: usize) -> IntVector {
        IntVector {
            labels: self.row_labels.clone(),
            entries: self.entries.iter().map(|r| r[j].clone()).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|r| r.iter().all(Zero::is_zero))
    }

    pub fn max_abs(&self) -> BigInt {
        let mut best = BigInt::zero();
        for row in &self.entries {
            for e in row {
                let a = e.abs();
                if a > best {
                    best = a;
                }
            }
        }
        best
    }

    pub fn mul(&self, rhs: &IntMatrix) -> Result<IntMatrix, MatrixError> {
        if self.col_labels != rhs.row_labels {
            return Err(MatrixError::LabelMismatch(
                "left factor's columns must match right factor's rows".into(),
            ));
        }
        let mut out = IntMatrix::zeros(self.row_labels.clone(), rhs.col_labels.clone())?;
        for i in 0..self.n_rows() {
            for k in 0..self.n_cols() {
                let a = &self.entries[i][k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.n_cols() {
                    let term = a * &rhs.entries[k][j];
                    out.entries[i][j] += term;
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &IntVector) -> Result<IntVector, MatrixError> {
        if self.col_labels != v.labels {
            return Err(MatrixError::LabelMismatch(
                "matrix columns must match vector labels".into(),
            ));
        }
        let entries = self
            .entries
            .iter()
            .map(|row| row.iter().zip(&v.entries).map(|(a, b)| a * b).sum())
            .collect();
        Ok(IntVector {
            labels: self.row_labels.clone(),
            entries,
        })
    }

    pub fn sub(&self, rhs: &IntMatrix) -> Result<IntMatrix, MatrixError> {
        if self.row_labels != rhs.row_labels || self.col_labels != rhs.col_labels {
            return Err(MatrixError::LabelMismatch(
                "subtraction needs identical labels".into(),
            ));
        }
        let entries = self
            .entries
            .iter()
            .zip(&rhs.entries)
            .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x - y).collect())
            .collect();
        IntMatrix::new(self.row_labels.clone(), self.col_labels.clone(), entries)
    }

    /// `self - I`; requires a square matrix.
    pub fn minus_identity(&self) -> Result<IntMatrix, MatrixError> {
        if self.n_rows() != self.n_cols() {
            return Err(MatrixError::Shape {
                what: "columns (square matrix required)",
                expected: self.n_rows(),
                found: self.n_cols(),
            });
        }
        let mut out = self.clone();
        for i in 0..out.n_rows() {
            let v = &out.entries[i][i] - 1;
            out.entries[i][i] = v;
        }
        Ok(out)
    }

    /// Submatrix keeping the given row/column positions, labels included.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> IntMatrix {
        let row_labels = rows.iter().map(|&i| self.row_labels[i].clone()).collect();
        let col_labels = cols.iter().map(|&j| self.col_labels[j].clone()).collect();
        let entries = rows
            .iter()
            .map(|&i| cols.iter().map(|&j| self.entries[i][j].clone()).collect())
            .collect();
        IntMatrix {
            row_labels,
            col_labels,
            entries,
        }
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, row) in self.entries.iter().enumerate() {
            write!(f, "{:>8} |", self.row_labels[i])?;
            for e in row {
                write!(f, " {e:>6}")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// Column vector with named entries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntVector {
    labels: Vec<String>,
    entries: Vec<BigInt>,
}

impl IntVector {
    pub fn new(labels: Vec<String>, entries: Vec<BigInt>) -> Result<Self, MatrixError> {
        check_labels(&labels)?;
        if labels.len() != entries.len() {
            return Err(MatrixError::Shape {
                what: "entries",
                expected: labels.len(),
                found: entries.len(),
            });
        }
        Ok(IntVector { labels, entries })
    }

    pub fn zeros(labels: Vec<String>) -> Result<Self, MatrixError> {
        let entries = vec![BigInt::zero(); labels.len()];
        IntVector::new(labels, entries)
    }

    pub fn from_i64(labels: &[&str], entries: &[i64]) -> Result<Self, MatrixError> {
        IntVector::new(
            labels.iter().map(|s| s.to_string()).collect(),
            entries.iter().map(|&v| BigInt::from(v)).collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.entries
    }

    pub fn get(&self, i: usize) -> &BigInt {
        &self.entries[i]
    }

    pub fn get_by_label(&self, label: &str) -> Option<&BigInt> {
        self.labels
            .iter()
            .position(|l| l == label)
            .map(|i| &self.entries[i])
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    pub fn max_abs(&self) -> BigInt {
        self.entries
            .iter()
            .map(Signed::abs)
            .max()
            .unwrap_or_else(BigInt::zero)
    }

    pub fn add(&self, rhs: &IntVector) -> Result<IntVector, MatrixError> {
        if self.labels != rhs.labels {
            return Err(MatrixError::LabelMismatch(
                "addition needs identical labels".into(),
            ));
        }
        let entries = self
            .entries
            .iter()
            .zip(&rhs.entries)
            .map(|(a, b)| a + b)
            .collect();
        Ok(IntVector {
            labels: self.labels.clone(),
            entries,
        })
    }

    pub fn sub(&self, rhs: &IntVector) -> Result<IntVector, MatrixError> {
        if self.labels != rhs.labels {
            return Err(MatrixError::LabelMismatch(
                "subtraction needs identical labels".into(),
            ));
        }
        let entries = self
            .entries
            .iter()
            .zip(&rhs.entries)
            .map(|(a, b)| a - b)
            .collect();
        Ok(IntVector {
            labels: self.labels.clone(),
            entries,
        })
    }

    pub fn dot(&self, rhs: &IntVector) -> Result<BigInt, MatrixError> {
        if self.labels != rhs.labels {
            return Err(MatrixError::LabelMismatch(
                "dot product needs identical labels".into(),
            ));
        }
        Ok(self
            .entries
            .iter()
            .zip(&rhs.entries)
            .map(|(a, b)| a * b)
            .sum())
    }

    /// Picks out the entries for `labels`, in the order given.
    pub fn restrict(&self, labels: &[String]) -> Result<IntVector, MatrixError> {
        let mut entries = Vec::with_capacity(labels.len());
        for l in labels {
            match self.get_by_label(l) {
                Some(v) => entries.push(v.clone()),
                None => {
                    return Err(MatrixError::LabelMismatch(format!(
                        "label `{l}` not present in vector"
                    )))
                }
            }
        }
        IntVector::new(labels.to_vec(), entries)
    }
}

impl fmt::Display for IntVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, (l, e)) in self.labels.iter().zip(&self.entries).enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{l}: {e}")?;
        }
        write!(f, ")")
    }
}

// JSON form: {"rows": [..], "cols": [..], "entries": [[..], ..]}.
// Entries are numbers while every magnitude fits in 2^53 - 1, and decimal
// strings otherwise, so big values survive bit-exactly.

const MAX_SAFE: i64 = (1 << 53) - 1;

fn fits_json_number(v: &BigInt) -> bool {
    v.abs() <= BigInt::from(MAX_SAFE)
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum JsonInt {
    Small(i64),
    Big(String),
}

fn encode_int(v: &BigInt, as_string: bool) -> JsonInt {
    if as_string {
        JsonInt::Big(v.to_string())
    } else {
        // fits_json_number guarantees this conversion succeeds
        JsonInt::Small(i64::try_from(v).expect("entry fits in i64"))
    }
}

fn decode_int(raw: JsonInt) -> Result<BigInt, String> {
    match raw {
        JsonInt::Small(v) => Ok(BigInt::from(v)),
        JsonInt::Big(s) => s
            .trim()
            .parse::<BigInt>()
            .map_err(|e| format!("invalid integer literal `{s}`: {e}")),
    }
}

/// `serialize_with` helpers for scalar and list-shaped big integers, using
/// the same number-unless-big policy as the matrix entries.
pub(crate) mod int_serde {
    use super::*;

    pub fn bigint<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        encode_int(v, !fits_json_number(v)).serialize(s)
    }

    pub fn bigint_vec<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
        let encoded: Vec<JsonInt> = v
            .iter()
            .map(|x| encode_int(x, !fits_json_number(x)))
            .collect();
        encoded.serialize(s)
    }

    pub fn bigint_pair_vec<S: Serializer>(
        v: &[(BigInt, BigInt)],
        s: S,
    ) -> Result<S::Ok, S::Error> {
        let encoded: Vec<(JsonInt, JsonInt)> = v
            .iter()
            .map(|(a, b)| {
                (
                    encode_int(a, !fits_json_number(a)),
                    encode_int(b, !fits_json_number(b)),
                )
            })
            .collect();
        encoded.serialize(s)
    }
}

impl Serialize for IntMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let as_string = !fits_json_number(&self.max_abs());
        let entries: Vec<Vec<JsonInt>> = self
            .entries
            .iter()
            .map(|row| row.iter().map(|e| encode_int(e, as_string)).collect())
            .collect();
        let mut st = serializer.serialize_struct("IntMatrix", 3)?;
        st.serialize_field("rows", &self.row_labels)?;
        st.serialize_field("cols", &self.col_labels)?;
        st.serialize_field("entries", &entries)?;
        st.end()
    }
}

impl<'de> Deserialize<'de> for IntMatrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            rows: Vec<String>,
            cols: Vec<String>,
            entries: Vec<Vec<JsonInt>>,
        }
        let raw = Raw::deserialize(deserializer)?;
        let mut entries = Vec::with_capacity(raw.entries.len());
        for row in raw.entries {
            let mut out = Vec::with_capacity(row.len());
            for cell in row {
                out.push(decode_int(cell).map_err(DeError::custom)?);
            }
            entries.push(out);
        }
        IntMatrix::new(raw.rows, raw.cols, entries).map_err(DeError::custom)
    }
}

impl Serialize for IntVector {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let as_string = !fits_json_number(&self.max_abs());
        let entries: Vec<JsonInt> = self
            .entries
            .iter()
            .map(|e| encode_int(e, as_string))
            .collect();
        let mut st = serializer.serialize_struct("IntVector", 2)?;
        st.serialize_field("labels", &self.labels)?;
        st.serialize_field("entries", &entries)?;
        st.end()
    }
}

impl<'de> Deserialize<'de> for IntVector {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            labels: Vec<String>,
            entries: Vec<JsonInt>,
        }
        let raw = Raw::deserialize(deserializer)?;
        let mut entries = Vec::with_capacity(raw.entries.len());
        for cell in raw.entries {
            entries.push(decode_int(cell).map_err(DeError::custom)?);
        }
        IntVector::new(raw.labels, entries).map_err(DeError::custom)
    }
}
