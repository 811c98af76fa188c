//! Versioned artifact files. Every file records a schema tag, the hash of
//! the artifacts it was computed from and the hash of its own payload, so an
//! edited file or a file computed from different inputs is refused.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::algebra::HeckeAlgebra;
use crate::basis::{Gen, RANK};
use crate::laurent::LaurentPoly;
use crate::matrix::Matrix;
use crate::verify::VerificationReport;
use crate::ExactMatrix;

pub const MATRICES_SCHEMA: &str = "hecke13.matrices/1";
pub const GRAM_SCHEMA: &str = "hecke13.gram/1";
pub const REPORT_SCHEMA: &str = "hecke13.report/1";
pub const MATRIX_SCHEMA: &str = "hecke13.matrix/1";

#[derive(Debug, thiserror::Error)]
pub enum IoError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}: malformed JSON: {message}")]
    Json { path: PathBuf, message: String },
    #[error("{path}: schema {found:?}, expected {expected:?}")]
    Schema { path: PathBuf, found: String, expected: String },
    #[error("{path}: content hash does not match the payload")]
    Corrupt { path: PathBuf },
    #[error("{path}: computed from different inputs (stale); rerun the {stage} stage")]
    Stale { path: PathBuf, stage: &'static str },
    #[error("{path}: missing; run the {stage} stage first")]
    Missing { path: PathBuf, stage: &'static str },
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

fn json_hash<T: Serialize>(value: &T) -> String {
    sha256_hex(&serde_json::to_vec(value).expect("serialisable"))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Artifact<T> {
    pub schema: String,
    pub input_hash: String,
    pub content_hash: String,
    pub payload: T,
}

impl<T: Serialize + DeserializeOwned> Artifact<T> {
    pub fn new(schema: &str, input_hash: String, payload: T) -> Self {
        let content_hash = json_hash(&payload);
        Artifact { schema: schema.to_string(), input_hash, content_hash, payload }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("serialisable")
    }

    pub fn write(&self, path: &Path) -> Result<(), IoError> {
        write_file(path, &self.to_json())
    }

    /// Parse and check the schema tag and the payload hash.
    pub fn from_json(path: &Path, text: &str, schema: &str) -> Result<Self, IoError> {
        let raw: serde_json::Value =
            serde_json::from_str(text).map_err(|e| IoError::Json { path: path.into(), message: e.to_string() })?;
        let found = raw.get("schema").and_then(|s| s.as_str()).unwrap_or("").to_string();
        if found != schema {
            return Err(IoError::Schema { path: path.into(), found, expected: schema.to_string() });
        }
        let art: Artifact<T> =
            serde_json::from_value(raw).map_err(|e| IoError::Json { path: path.into(), message: e.to_string() })?;
        if json_hash(&art.payload) != art.content_hash {
            return Err(IoError::Corrupt { path: path.into() });
        }
        Ok(art)
    }

    pub fn read(path: &Path, schema: &str, stage: &'static str) -> Result<Self, IoError> {
        if !path.exists() {
            return Err(IoError::Missing { path: path.into(), stage });
        }
        let text = fs::read_to_string(path).map_err(|source| IoError::Io { path: path.into(), source })?;
        Self::from_json(path, &text, schema)
    }

    /// Refuse a file computed from other inputs than `expected`.
    pub fn require_inputs(&self, path: &Path, expected: &str, stage: &'static str) -> Result<(), IoError> {
        if self.input_hash == expected {
            Ok(())
        } else {
            Err(IoError::Stale { path: path.into(), stage })
        }
    }
}

pub fn write_file(path: &Path, text: &str) -> Result<(), IoError> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir).map_err(|source| IoError::Io { path: dir.into(), source })?;
    }
    fs::write(path, text).map_err(|source| IoError::Io { path: path.into(), source })
}

/// `rows[j][n]` is `λ_{j+1,n+1}`, the coefficient of `b_{n+1}` in `g b_{j+1}`.
pub type Rows = Vec<Vec<LaurentPoly>>;

pub fn to_rows(m: &ExactMatrix) -> Rows {
    (0..m.cols()).map(|j| m.column(j)).collect()
}

pub fn from_rows(rows: Rows) -> ExactMatrix {
    Matrix::from_rows(rows).transpose()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BuildInfo {
    pub derived_rules: usize,
    pub degree_a: usize,
    pub degree_c: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatricesPayload {
    pub build: BuildInfo,
    pub lambda_s: Rows,
    pub lambda_t: Rows,
    pub lambda_u: Rows,
    pub lambda_z: Rows,
    /// Coordinates of `z^4`.
    pub mu: Vec<LaurentPoly>,
}

impl MatricesPayload {
    pub fn new(build: BuildInfo, alg: &HeckeAlgebra) -> Self {
        let rows = |g: Gen| to_rows(&alg.generator(g).entries);
        MatricesPayload {
            build,
            lambda_s: rows(Gen::S),
            lambda_t: rows(Gen::T),
            lambda_u: rows(Gen::U),
            lambda_z: to_rows(&alg.z_matrix().entries),
            mu: alg.z4().to_vec(),
        }
    }

    /// Rebuild the algebra; `M_z` and `μ` are recomputed and must match the
    /// stored copies.
    pub fn algebra(&self, path: &Path) -> Result<HeckeAlgebra, IoError> {
        let ok = |r: &Rows| r.len() == RANK && r.iter().all(|x| x.len() == RANK);
        if !(ok(&self.lambda_s)
            && ok(&self.lambda_t)
            && ok(&self.lambda_u)
            && ok(&self.lambda_z)
            && self.mu.len() == RANK)
        {
            return Err(IoError::Json { path: path.into(), message: "tables must be 96 x 96".into() });
        }
        let alg = HeckeAlgebra::new(
            from_rows(self.lambda_s.clone()),
            from_rows(self.lambda_t.clone()),
            from_rows(self.lambda_u.clone()),
        );
        if to_rows(&alg.z_matrix().entries) != self.lambda_z || alg.z4() != self.mu.as_slice() {
            return Err(IoError::Corrupt { path: path.into() });
        }
        Ok(alg)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GramPayload {
    pub gram: Rows,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportPayload {
    pub det_mode: String,
    pub seed: u64,
    pub points: usize,
    pub oracle_pairs: usize,
    pub report: VerificationReport,
}

/// A single exported table.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatrixPayload {
    pub name: String,
    pub rows: Rows,
}

/// Input identity of the matrices file. The tables do not depend on the
/// seed or the budget, only on the code that computes them.
pub fn build_input_hash() -> String {
    sha256_hex(format!("hecke13 {} matrices", env!("CARGO_PKG_VERSION")).as_bytes())
}

/// Plain-text dump: one line `row col value` per non-zero entry, where
/// `row` indexes the multiplied basis element.
pub fn text_dump(name: &str, rows: &Rows) -> String {
    let mut out = format!("# {name}\n");
    for (j, row) in rows.iter().enumerate() {
        for (n, x) in row.iter().enumerate() {
            if !x.is_empty() {
                writeln!(out, "{} {} {}", j + 1, n + 1, x).expect("string write");
            }
        }
    }
    out
}
