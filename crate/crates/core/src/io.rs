//! File formats.
//!
//! Matrices: `{"dim": N, "entries": [[re, im], ...]}`, row-major, `N²` entries.
//! Vectors use the same shape with `N` entries. An anti-linear operator is its
//! matrix plus `"conjugates": true`. Sweeps are written as CSV with a header
//! row and `\n` line endings.

use std::fs;
use std::path::Path;

use serde::de::{DeserializeOwned, Error as _};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::antilinear::AntilinearOperator;
use crate::error::{Error, Result};
use crate::evolution::BrachRecord;
use crate::linalg::{ComplexMatrix, C64};

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MatrixJson {
    dim: usize,
    entries: Vec<[f64; 2]>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct AntilinearJson {
    dim: usize,
    entries: Vec<[f64; 2]>,
    conjugates: bool,
}

fn to_pairs(values: &[C64]) -> Vec<[f64; 2]> {
    values.iter().map(|z| [z.re, z.im]).collect()
}

fn from_pairs(entries: &[[f64; 2]], expected: usize) -> Result<Vec<C64>> {
    if entries.len() != expected {
        return Err(Error::schema(
            "entries",
            format!("expected {expected} entries, found {}", entries.len()),
        ));
    }
    entries
        .iter()
        .enumerate()
        .map(|(k, &[re, im])| {
            if re.is_finite() && im.is_finite() {
                Ok(C64::new(re, im))
            } else {
                Err(Error::schema(format!("entries[{k}]"), "non-finite value"))
            }
        })
        .collect()
}

impl MatrixJson {
    fn into_matrix(self) -> Result<ComplexMatrix> {
        let expected = self
            .dim
            .checked_mul(self.dim)
            .ok_or_else(|| Error::schema("dim", "too large"))?;
        ComplexMatrix::from_row_major(self.dim, from_pairs(&self.entries, expected)?)
    }
}

impl Serialize for ComplexMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        MatrixJson {
            dim: self.dim(),
            entries: to_pairs(self.entries()),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for ComplexMatrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        MatrixJson::deserialize(deserializer)?
            .into_matrix()
            .map_err(D::Error::custom)
    }
}

fn parse<T: DeserializeOwned>(text: &str, origin: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Schema {
        field: origin.to_string(),
        message: e.to_string(),
    })
}

fn with_origin(e: Error, origin: &str) -> Error {
    match e {
        Error::Schema { field, message } => Error::Schema {
            field: format!("{origin}: {field}"),
            message,
        },
        Error::NonFinite { index } => {
            Error::schema(format!("{origin}: entries[{index}]"), "non-finite value")
        }
        other => other,
    }
}

pub fn matrix_from_json(text: &str) -> Result<ComplexMatrix> {
    let raw: MatrixJson = parse(text, "matrix")?;
    raw.into_matrix()
}

pub fn matrix_to_json(m: &ComplexMatrix) -> Result<String> {
    m.validate()?;
    Ok(serde_json::to_string(m).expect("matrix serialization is infallible") + "\n")
}

pub fn vector_from_json(text: &str) -> Result<Vec<C64>> {
    let raw: MatrixJson = parse(text, "vector")?;
    from_pairs(&raw.entries, raw.dim)
}

pub fn vector_to_json(v: &[C64]) -> Result<String> {
    if let Some(index) = v
        .iter()
        .position(|z| !(z.re.is_finite() && z.im.is_finite()))
    {
        return Err(Error::NonFinite { index });
    }
    let raw = MatrixJson {
        dim: v.len(),
        entries: to_pairs(v),
    };
    Ok(serde_json::to_string(&raw).expect("vector serialization is infallible") + "\n")
}

pub fn antilinear_from_json(text: &str) -> Result<AntilinearOperator> {
    let raw: AntilinearJson = parse(text, "antilinear operator")?;
    if !raw.conjugates {
        return Err(Error::schema(
            "conjugates",
            "must be true for an anti-linear operator",
        ));
    }
    let m = MatrixJson {
        dim: raw.dim,
        entries: raw.entries,
    }
    .into_matrix()?;
    AntilinearOperator::new(m)
}

pub fn antilinear_to_json(a: &AntilinearOperator) -> String {
    let raw = AntilinearJson {
        dim: a.dim(),
        entries: to_pairs(a.matrix().entries()),
        conjugates: true,
    };
    serde_json::to_string(&raw).expect("operator serialization is infallible") + "\n"
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn write(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

pub fn load_matrix(path: impl AsRef<Path>) -> Result<ComplexMatrix> {
    let path = path.as_ref();
    matrix_from_json(&read(path)?).map_err(|e| with_origin(e, &path.display().to_string()))
}

pub fn save_matrix(path: impl AsRef<Path>, m: &ComplexMatrix) -> Result<()> {
    write(path.as_ref(), &matrix_to_json(m)?)
}

pub fn load_vector(path: impl AsRef<Path>) -> Result<Vec<C64>> {
    let path = path.as_ref();
    vector_from_json(&read(path)?).map_err(|e| with_origin(e, &path.display().to_string()))
}

pub fn save_vector(path: impl AsRef<Path>, v: &[C64]) -> Result<()> {
    write(path.as_ref(), &vector_to_json(v)?)
}

pub fn load_antilinear(path: impl AsRef<Path>) -> Result<AntilinearOperator> {
    let path = path.as_ref();
    antilinear_from_json(&read(path)?).map_err(|e| with_origin(e, &path.display().to_string()))
}

/// Pretty-printed JSON with a trailing newline.
pub fn to_json_pretty<T: Serialize>(value: &T) -> Result<String> {
    serde_json::to_string_pretty(value)
        .map(|s| s + "\n")
        .map_err(|e| Error::Io(e.to_string()))
}

pub fn write_json<T: Serialize>(path: impl AsRef<Path>, value: &T) -> Result<()> {
    write(path.as_ref(), &to_json_pretty(value)?)
}

/// Rows of `records` as CSV text, header first.
pub fn csv_string<T: Serialize>(records: &[T]) -> Result<String> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    for r in records {
        w.serialize(r).map_err(|e| Error::Io(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Io(e.to_string()))
}

pub fn csv_parse<T: DeserializeOwned>(text: &str) -> Result<Vec<T>> {
    csv::Reader::from_reader(text.as_bytes())
        .deserialize()
        .enumerate()
        .map(|(k, row)| {
            row.map_err(|e| Error::Schema {
                field: format!("row {}", k + 1),
                message: e.to_string(),
            })
        })
        .collect()
}

pub fn write_csv<T: Serialize>(path: impl AsRef<Path>, records: &[T]) -> Result<()> {
    write(path.as_ref(), &csv_string(records)?)
}

pub fn read_brach_csv(path: impl AsRef<Path>) -> Result<Vec<BrachRecord>> {
    let path = path.as_ref();
    csv_parse(&read(path)?).map_err(|e| with_origin(e, &path.display().to_string()))
}
