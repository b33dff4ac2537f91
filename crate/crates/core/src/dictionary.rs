//! Finite dictionaries of unit-norm atoms.
//!
//! Atoms are stored row-major in one contiguous buffer. The symmetric
//! counterpart `-g` of every atom is never materialized; selection searches
//! over signed inner products instead.

use std::io::Read;

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::vector::{check_dims, norm, Vector};

/// Atoms with norm below this are rejected before normalization.
pub const ZERO_ATOM_TOL: f64 = 1e-12;

/// Maximum deviation of a stored atom's norm from one.
pub const UNIT_NORM_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DictionaryFormat {
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Dictionary {
    dim: usize,
    data: Vec<f64>,
    label: String,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct JsonDictionary {
    dim: usize,
    atoms: Vec<Vec<f64>>,
}

impl Dictionary {
    /// Builds a dictionary from raw rows, normalizing each to unit length.
    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R], label: impl Into<String>) -> Result<Self> {
        let first = rows.first().ok_or(Error::EmptyDictionary)?;
        let dim = first.as_ref().len();
        Self::from_rows_with_dim(rows, dim, label.into())
    }

    fn from_rows_with_dim<R: AsRef<[f64]>>(rows: &[R], dim: usize, label: String) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::EmptyDictionary);
        }
        if dim == 0 {
            return Err(Error::EmptyVector);
        }
        let mut data = Vec::with_capacity(rows.len() * dim);
        for (row, atom) in rows.iter().enumerate() {
            let atom = atom.as_ref();
            if atom.len() != dim {
                return Err(Error::InconsistentRow {
                    row,
                    expected: dim,
                    found: atom.len(),
                });
            }
            if let Some(position) = atom.iter().position(|x| !x.is_finite()) {
                return Err(Error::NonFinite { position });
            }
            let n = norm(atom);
            if n < ZERO_ATOM_TOL {
                return Err(Error::ZeroAtom { row });
            }
            data.extend(atom.iter().map(|x| x / n));
        }
        Ok(Dictionary { dim, data, label })
    }

    /// The standard basis of `R^dim`.
    pub fn orthonormal(dim: usize) -> Self {
        assert!(dim >= 1, "dictionary dimension must be positive");
        let mut data = vec![0.0; dim * dim];
        for i in 0..dim {
            data[i * dim + i] = 1.0;
        }
        Dictionary {
            dim,
            data,
            label: format!("orthonormal:{dim}"),
        }
    }

    pub fn load(source: impl Read, format: DictionaryFormat, label: impl Into<String>) -> Result<Self> {
        match format {
            DictionaryFormat::Csv => Self::load_csv(source, label),
            DictionaryFormat::Json => Self::load_json(source, label),
        }
    }

    /// One atom per row, comma-separated coordinates, no header.
    pub fn load_csv(source: impl Read, label: impl Into<String>) -> Result<Self> {
        let rows = read_csv_rows(source)?;
        Self::from_rows(&rows, label)
    }

    /// `{"dim": n, "atoms": [[...], ...]}`.
    pub fn load_json(source: impl Read, label: impl Into<String>) -> Result<Self> {
        let parsed: JsonDictionary = serde_json::from_reader(source).map_err(|e| Error::Parse {
            format: "json",
            message: e.to_string(),
        })?;
        Self::from_rows_with_dim(&parsed.atoms, parsed.dim, label.into())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.data.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn atom(&self, index: usize) -> &[f64] {
        &self.data[index * self.dim..(index + 1) * self.dim]
    }

    pub fn atoms(&self) -> impl ExactSizeIterator<Item = &[f64]> + '_ {
        self.data.chunks_exact(self.dim)
    }

    pub fn atom_vector(&self, index: usize) -> Vector {
        Vector::new(self.atom(index).to_vec()).expect("atoms are finite and non-empty")
    }

    /// Largest `|<g_i, g_j>|` over distinct atom pairs; zero for a single atom.
    pub fn mutual_coherence(&self) -> f64 {
        let mut best = 0.0_f64;
        for i in 0..self.len() {
            for j in (i + 1)..self.len() {
                best = best.max(crate::vector::dot(self.atom(i), self.atom(j)).abs());
            }
        }
        best
    }

    pub(crate) fn check_signal(&self, f: &Vector) -> Result<()> {
        check_dims(self.dim, f.dim())
    }

    /// Serializes atoms as CSV rows using the shortest round-trip float form.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for atom in self.atoms() {
            let row: Vec<String> = atom.iter().map(|x| format!("{x}")).collect();
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }
}

/// Reads headerless CSV rows of floats; blank lines are skipped.
pub fn read_csv_rows(source: impl Read) -> Result<Vec<Vec<f64>>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(source);
    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| Error::Parse {
            format: "csv",
            message: e.to_string(),
        })?;
        if record.iter().all(str::is_empty) {
            continue;
        }
        let row = record
            .iter()
            .map(|field| {
                field.parse::<f64>().map_err(|e| Error::Parse {
                    format: "csv",
                    message: format!("line {}: {field:?}: {e}", rows.len() + 1),
                })
            })
            .collect::<Result<Vec<f64>>>()?;
        rows.push(row);
    }
    Ok(rows)
}

/// Reads a signal stored as a single CSV row.
pub fn read_signal_csv(source: impl Read) -> Result<Vector> {
    let mut rows = read_csv_rows(source)?;
    match rows.len() {
        1 => Vector::new(rows.pop().unwrap()),
        0 => Err(Error::EmptyVector),
        n => Err(Error::Parse {
            format: "csv",
            message: format!("signal file must hold a single row, found {n}"),
        }),
    }
}
