//! JSON training-set and model files.
//!
//! Complex numbers are always two-element `[re, im]` arrays. Doubles are
//! written in shortest round-trip form and parsed with correct rounding,
//! so serialize/parse reproduces every finite value bit for bit.
//!
//! ```json
//! { "dim": 2,
//!   "pairs": [ { "x": [[1, 0], [0, 0]], "y": [[0.7071067811865475, 0], [0.7071067811865475, 0]] } ],
//!   "metadata": { "name": "hadamard", "source": "generated" } }
//! ```

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{is_unitary, Complex, Matrix, StateVector};
use crate::perceptron::{PerceptronModel, TrainingPair, TrainingSet};

pub type ComplexPair = [f64; 2];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairFile {
    pub x: Vec<ComplexPair>,
    pub y: Vec<ComplexPair>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Metadata {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrainingSetFile {
    pub dim: usize,
    pub pairs: Vec<PairFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metadata: Option<Metadata>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelFile {
    pub dim: usize,
    pub f: Vec<Vec<ComplexPair>>,
    pub w_new: Vec<Vec<ComplexPair>>,
    pub unitary: Vec<Vec<ComplexPair>>,
    pub sigma: Vec<f64>,
    pub rank: usize,
    pub rank_tol: f64,
}

fn to_pairs(v: &[Complex]) -> Vec<ComplexPair> {
    v.iter().map(|z| [z.re, z.im]).collect()
}

fn from_pairs(v: &[ComplexPair]) -> Vec<Complex> {
    v.iter().map(|&[re, im]| Complex::new(re, im)).collect()
}

fn matrix_to_rows(m: &Matrix) -> Vec<Vec<ComplexPair>> {
    (0..m.rows()).map(|i| to_pairs(m.row(i))).collect()
}

fn matrix_from_rows(rows: &[Vec<ComplexPair>], dim: usize, what: &str) -> Result<Matrix> {
    if rows.len() != dim || rows.iter().any(|r| r.len() != dim) {
        return Err(Error::Validation {
            pair: None,
            message: format!("`{what}` must be {dim}x{dim}"),
        });
    }
    Matrix::from_rows(rows.iter().map(|r| from_pairs(r)).collect()).map_err(|e| Error::Validation {
        pair: None,
        message: format!("`{what}`: {e}"),
    })
}

impl TrainingSetFile {
    pub fn from_set(set: &TrainingSet, metadata: Option<Metadata>) -> Self {
        Self {
            dim: set.dim(),
            pairs: set
                .pairs()
                .iter()
                .map(|p| PairFile {
                    x: to_pairs(p.input().amplitudes()),
                    y: to_pairs(p.target().amplitudes()),
                })
                .collect(),
            metadata,
        }
    }

    pub fn to_set(&self) -> Result<TrainingSet> {
        if self.dim == 0 {
            return Err(Error::Validation {
                pair: None,
                message: "dim must be positive".into(),
            });
        }
        if self.pairs.is_empty() {
            return Err(Error::Validation {
                pair: None,
                message: "pairs list is empty".into(),
            });
        }
        let mut pairs = Vec::with_capacity(self.pairs.len());
        for (idx, p) in self.pairs.iter().enumerate() {
            let state = |v: &[ComplexPair], which: &str| {
                if v.len() != self.dim {
                    return Err(Error::Validation {
                        pair: Some(idx),
                        message: format!("`{which}` has length {}, expected {}", v.len(), self.dim),
                    });
                }
                StateVector::new(from_pairs(v)).map_err(|e| Error::Validation {
                    pair: Some(idx),
                    message: format!("`{which}`: {e}"),
                })
            };
            let x = state(&p.x, "x")?;
            let y = state(&p.y, "y")?;
            pairs.push(TrainingPair::new(x, y)?);
        }
        TrainingSet::new(pairs)
    }
}

impl ModelFile {
    pub fn from_model(m: &PerceptronModel) -> Self {
        Self {
            dim: m.dim,
            f: matrix_to_rows(&m.f),
            w_new: matrix_to_rows(&m.w_new),
            unitary: matrix_to_rows(&m.unitary),
            sigma: m.sigma.clone(),
            rank: m.rank,
            rank_tol: m.rank_tol,
        }
    }

    pub fn to_model(&self) -> Result<PerceptronModel> {
        let f = matrix_from_rows(&self.f, self.dim, "f")?;
        let w_new = matrix_from_rows(&self.w_new, self.dim, "w_new")?;
        let unitary = matrix_from_rows(&self.unitary, self.dim, "unitary")?;
        if self.sigma.len() != self.dim || self.sigma.iter().any(|s| !s.is_finite() || *s < 0.0) {
            return Err(Error::Validation {
                pair: None,
                message: format!("`sigma` must hold {} non-negative values", self.dim),
            });
        }
        if self.rank > self.dim {
            return Err(Error::Validation {
                pair: None,
                message: format!("rank {} exceeds dim {}", self.rank, self.dim),
            });
        }
        if !is_unitary(&unitary, 1e-9)? {
            return Err(Error::Validation {
                pair: None,
                message: "`unitary` is not unitary".into(),
            });
        }
        Ok(PerceptronModel {
            f,
            sigma: self.sigma.clone(),
            w_new,
            unitary,
            rank: self.rank,
            rank_tol: self.rank_tol,
            dim: self.dim,
        })
    }
}

fn parse_json<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}

fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("plain data always serializes")
}

pub fn parse_training_set(text: &str) -> Result<TrainingSet> {
    parse_json::<TrainingSetFile>(text)?.to_set()
}

pub fn parse_training_set_file(text: &str) -> Result<TrainingSetFile> {
    parse_json(text)
}

pub fn serialize_training_set(set: &TrainingSet, metadata: Option<Metadata>) -> String {
    to_json(&TrainingSetFile::from_set(set, metadata))
}

pub fn parse_model(text: &str) -> Result<PerceptronModel> {
    parse_json::<ModelFile>(text)?.to_model()
}

pub fn serialize_model(m: &PerceptronModel) -> String {
    to_json(&ModelFile::from_model(m))
}

/// A state written as a JSON list of `[re, im]` pairs.
pub fn parse_state_literal(text: &str) -> Result<Vec<Complex>> {
    Ok(from_pairs(&parse_json::<Vec<ComplexPair>>(text)?))
}

pub fn serialize_state(amps: &[Complex]) -> String {
    serde_json::to_string(&to_pairs(amps)).expect("plain data always serializes")
}

pub fn serialize_matrix(m: &Matrix) -> String {
    to_json(&matrix_to_rows(m))
}
