//! JSON schema shared by every command.
//!
//! Matrix: `{"rows": r, "cols": c, "entries": [[re, im], ...]}` row-major.
//! Kraus set: `{"dim_in", "dim_out", "operators": [matrix, ...], "label"}`.
//! Code: `{"n_sys", "n_anc", "projector": matrix, "encoder": matrix, "description"}`.
//! Pure state: `{"dim", "amplitudes": [[re, im], ...]}`.
//!
//! Floats are written with 17 significant digits (`{:.16e}`); non-finite
//! values are written as `null`.

use std::fs;
use std::path::Path;

use num_complex::Complex;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::value::RawValue;

use qchan::channels::KrausSet;
use qchan::linalg::ComplexMatrix;
use qchan::recovery::CodeSpec;
use qchan::states::PureState;

use crate::error::{CliError, CliResult};

/// A float with fixed-width serialization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Num(pub f64);

impl Serialize for Num {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if !self.0.is_finite() {
            return s.serialize_none();
        }
        let raw = RawValue::from_string(format!("{:.16e}", self.0)).map_err(serde::ser::Error::custom)?;
        raw.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Num {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        f64::deserialize(d).map(Num)
    }
}

impl From<f64> for Num {
    fn from(x: f64) -> Self {
        Num(x)
    }
}

/// `[re, im]`
pub type ComplexJson = [Num; 2];

pub fn complex_json(z: Complex<f64>) -> ComplexJson {
    [Num(z.re), Num(z.im)]
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MatrixJson {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<ComplexJson>,
}

impl MatrixJson {
    pub fn from_matrix(m: &ComplexMatrix<f64>) -> Self {
        Self {
            rows: m.rows(),
            cols: m.cols(),
            entries: m.as_slice().iter().map(|&z| complex_json(z)).collect(),
        }
    }

    pub fn to_matrix(&self, path: &Path, field: &str) -> CliResult<ComplexMatrix<f64>> {
        let data = self
            .entries
            .iter()
            .map(|[r, i]| Complex::new(r.0, i.0))
            .collect::<Vec<_>>();
        ComplexMatrix::from_row_major(self.rows, self.cols, data).map_err(|e| invalid(path, field, e))
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct KrausJson {
    pub dim_in: usize,
    pub dim_out: usize,
    pub operators: Vec<MatrixJson>,
    #[serde(default)]
    pub label: String,
}

impl KrausJson {
    pub fn from_set(k: &KrausSet<f64>) -> Self {
        Self {
            dim_in: k.dim_in(),
            dim_out: k.dim_out(),
            operators: k.operators().iter().map(MatrixJson::from_matrix).collect(),
            label: k.label().to_string(),
        }
    }

    /// Builds the set without requiring completeness; callers decide.
    pub fn to_set(&self, path: &Path) -> CliResult<KrausSet<f64>> {
        let ops = self
            .operators
            .iter()
            .enumerate()
            .map(|(i, m)| m.to_matrix(path, &format!("operators[{i}]")))
            .collect::<CliResult<Vec<_>>>()?;
        let set = KrausSet::raw(ops, self.label.clone()).map_err(|e| invalid(path, "operators", e))?;
        if set.dim_in() != self.dim_in || set.dim_out() != self.dim_out {
            return Err(invalid(
                path,
                "dim_in/dim_out",
                format!(
                    "declared {}->{}, operators are {}->{}",
                    self.dim_in,
                    self.dim_out,
                    set.dim_in(),
                    set.dim_out()
                ),
            ));
        }
        Ok(set)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CodeJson {
    pub n_sys: usize,
    pub n_anc: usize,
    pub projector: MatrixJson,
    pub encoder: MatrixJson,
    #[serde(default)]
    pub description: String,
}

impl CodeJson {
    pub fn from_code(c: &CodeSpec<f64>) -> Self {
        Self {
            n_sys: c.n_sys,
            n_anc: c.n_anc,
            projector: MatrixJson::from_matrix(&c.projector),
            encoder: MatrixJson::from_matrix(&c.encoder),
            description: c.description.clone(),
        }
    }

    pub fn to_code(&self, path: &Path) -> CliResult<CodeSpec<f64>> {
        let p = self.projector.to_matrix(path, "projector")?;
        let u = self.encoder.to_matrix(path, "encoder")?;
        CodeSpec::new(self.n_sys, self.n_anc, p, u, self.description.clone()).map_err(|e| invalid(path, "code", e))
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PureStateJson {
    pub dim: usize,
    pub amplitudes: Vec<ComplexJson>,
}

impl PureStateJson {
    pub fn from_state(psi: &PureState<f64>) -> Self {
        Self {
            dim: psi.dim(),
            amplitudes: psi.amplitudes().iter().map(|&z| complex_json(z)).collect(),
        }
    }

    pub fn to_state(&self, path: &Path) -> CliResult<PureState<f64>> {
        if self.amplitudes.len() != self.dim {
            return Err(invalid(
                path,
                "amplitudes",
                format!("expected {} entries, got {}", self.dim, self.amplitudes.len()),
            ));
        }
        let amps = self.amplitudes.iter().map(|[r, i]| Complex::new(r.0, i.0)).collect();
        PureState::new(amps).map_err(|e| invalid(path, "amplitudes", e))
    }
}

fn invalid(path: &Path, field: &str, e: impl ToString) -> CliError {
    CliError::InvalidField {
        path: path.to_path_buf(),
        field: field.to_string(),
        message: e.to_string(),
    }
}

/// Reads and parses `path`, reporting syntax and schema errors with position.
pub fn read_json<T: DeserializeOwned>(path: &Path) -> CliResult<T> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|e| CliError::MalformedInput {
        path: path.to_path_buf(),
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })
}

/// Pretty JSON with a trailing newline.
pub fn to_json_string<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report types serialize");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers_have_fixed_width() {
        assert_eq!(serde_json::to_string(&Num(0.1)).unwrap(), "1.0000000000000001e-1");
        assert_eq!(serde_json::to_string(&Num(-2.0)).unwrap(), "-2.0000000000000000e0");
        assert_eq!(serde_json::to_string(&Num(f64::NAN)).unwrap(), "null");
        let back: f64 = serde_json::from_str("1.0000000000000001e-1").unwrap();
        assert_eq!(back, 0.1);
    }

    #[test]
    fn matrix_round_trip_is_exact() {
        let m = ComplexMatrix::<f64>::from_fn(2, 3, |i, j| Complex::new(i as f64 / 3.0, -(j as f64).sqrt()));
        let text = serde_json::to_string(&MatrixJson::from_matrix(&m)).unwrap();
        let back: MatrixJson = serde_json::from_str(&text).unwrap();
        assert_eq!(back.to_matrix(Path::new("-"), "m").unwrap(), m);
    }

    #[test]
    fn wrong_entry_count_names_the_field() {
        let j = MatrixJson {
            rows: 2,
            cols: 2,
            entries: vec![[Num(1.0), Num(0.0)]],
        };
        let err = j.to_matrix(Path::new("in.json"), "projector").unwrap_err();
        assert!(err.to_string().contains("projector"));
    }
}
