//! Sentence ranking: similarity matrix with threshold normalization and
//! directed centrality.
//!
//! The raw matrix holds pairwise similarities of sentence vectors. A global
//! threshold `tau = min + beta * (max - min)` over the off-diagonal entries
//! is subtracted and negatives clip to zero, so only relatively strong links
//! contribute. A sentence's score weights links to earlier sentences by
//! `lambda1` and to later sentences by `lambda2`.

use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;

use crate::corpus::Document;
use crate::embed::EmbeddingTable;
use crate::error::{Error, Result};
use crate::graph::HeteroGraph;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Similarity {
    Dot,
    Cosine,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RankConfig {
    /// Threshold position between the off-diagonal min and max. In [0, 1).
    pub beta: f64,
    /// Weight of links to earlier sentences (j < i).
    pub lambda1: f64,
    /// Weight of links to later sentences (j > i).
    pub lambda2: f64,
    /// Sentences to select.
    pub k: usize,
    pub similarity: Similarity,
    /// L2-normalize the graph and semantic parts before concatenation.
    pub normalize_parts: bool,
}

impl Default for RankConfig {
    fn default() -> Self {
        RankConfig {
            beta: 0.3,
            lambda1: 1.0,
            lambda2: 1.0,
            k: 1,
            similarity: Similarity::Dot,
            normalize_parts: false,
        }
    }
}

impl RankConfig {
    pub fn validate(&self) -> Result<()> {
        if !(0.0..1.0).contains(&self.beta) {
            return Err(Error::InvalidConfig("beta must be in [0, 1)".into()));
        }
        if self.k < 1 {
            return Err(Error::InvalidConfig("k must be >= 1".into()));
        }
        if self.lambda1 == 0.0 && self.lambda2 == 0.0 {
            return Err(Error::InvalidConfig(
                "lambda1 and lambda2 must not both be 0".into(),
            ));
        }
        Ok(())
    }
}

/// A sentence's representation: the graph embedding of its sentence node,
/// optionally concatenated with an externally supplied semantic vector.
#[derive(Debug, Clone, PartialEq)]
pub struct SentenceVector {
    pub graph_part: Vec<f64>,
    pub semantic_part: Option<Vec<f64>>,
}

impl SentenceVector {
    pub fn dim(&self) -> usize {
        self.graph_part.len() + self.semantic_part.as_ref().map_or(0, Vec::len)
    }

    pub fn combined(&self) -> Vec<f64> {
        let mut v = self.graph_part.clone();
        if let Some(semantic) = &self.semantic_part {
            v.extend_from_slice(semantic);
        }
        v
    }
}

fn l2_normalize(v: &mut [f64]) {
    let norm: f64 = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm > 0.0 {
        v.iter_mut().for_each(|x| *x /= norm);
    }
}

/// Build the per-sentence vectors for a document.
///
/// `external`, when given, must hold one vector per sentence and all vectors
/// must share a dimension.
pub fn sentence_vectors(
    doc: &Document,
    g: &HeteroGraph,
    table: &EmbeddingTable,
    external: Option<&[Vec<f64>]>,
    config: &RankConfig,
) -> Result<Vec<SentenceVector>> {
    let m = doc.sentences.len();
    if let Some(rows) = external {
        if rows.len() != m {
            return Err(Error::DimensionMismatch(format!(
                "external vectors have {} rows for {} sentences",
                rows.len(),
                m
            )));
        }
        if let Some(first) = rows.first() {
            if rows.iter().any(|r| r.len() != first.len()) {
                return Err(Error::DimensionMismatch(
                    "external vector rows differ in dimension".into(),
                ));
            }
        }
    }
    let mut out = Vec::with_capacity(m);
    for i in 0..m {
        let node = g
            .sentence_node(i)
            .ok_or_else(|| Error::UnknownNode(format!("s:{i}")))?;
        let mut graph_part = table.node_vector(node)?;
        let mut semantic_part = external.map(|rows| rows[i].clone());
        if config.normalize_parts {
            l2_normalize(&mut graph_part);
            if let Some(part) = &mut semantic_part {
                l2_normalize(part);
            }
        }
        out.push(SentenceVector {
            graph_part,
            semantic_part,
        });
    }
    Ok(out)
}

/// Pairwise sentence similarities plus their thresholded form.
///
/// The diagonal is excluded from the min/max statistics and from centrality.
#[derive(Debug, Clone)]
pub struct SimilarityMatrix {
    m: usize,
    raw: Vec<f64>,
    normalized: Vec<f64>,
    pub beta: f64,
    pub lambda1: f64,
    pub lambda2: f64,
}

impl SimilarityMatrix {
    /// Apply threshold normalization to an explicit raw matrix
    /// (row-major, m x m; the diagonal is ignored).
    pub fn from_raw(raw: Vec<f64>, m: usize, config: &RankConfig) -> Result<Self> {
        config.validate()?;
        if raw.len() != m * m {
            return Err(Error::DimensionMismatch(format!(
                "raw matrix has {} entries for m = {m}",
                raw.len()
            )));
        }
        if m < 2 {
            return Err(Error::InvalidConfig(
                "similarity matrix needs at least 2 sentences".into(),
            ));
        }
        let mut min = f64::INFINITY;
        let mut max = f64::NEG_INFINITY;
        for i in 0..m {
            for j in 0..m {
                if i == j {
                    continue;
                }
                let value = raw[i * m + j];
                if !value.is_finite() {
                    return Err(Error::NonFiniteSimilarity(i, j));
                }
                min = min.min(value);
                max = max.max(value);
            }
        }
        let tau = min + config.beta * (max - min);
        let mut normalized = vec![0.0; m * m];
        for i in 0..m {
            for j in 0..m {
                if i != j {
                    normalized[i * m + j] = (raw[i * m + j] - tau).max(0.0);
                }
            }
        }
        Ok(SimilarityMatrix {
            m,
            raw,
            normalized,
            beta: config.beta,
            lambda1: config.lambda1,
            lambda2: config.lambda2,
        })
    }

    pub fn from_vectors(vectors: &[SentenceVector], config: &RankConfig) -> Result<Self> {
        let m = vectors.len();
        if m < 2 {
            return Err(Error::InvalidConfig(
                "similarity matrix needs at least 2 sentences".into(),
            ));
        }
        let dim = vectors[0].dim();
        if vectors.iter().any(|v| v.dim() != dim) {
            return Err(Error::DimensionMismatch(
                "sentence vectors differ in dimension".into(),
            ));
        }
        let combined: Vec<Vec<f64>> = vectors.iter().map(SentenceVector::combined).collect();
        let mut raw = vec![0.0; m * m];
        for i in 0..m {
            for j in (i + 1)..m {
                let value = match config.similarity {
                    Similarity::Dot => dot(&combined[i], &combined[j]),
                    Similarity::Cosine => cosine(&combined[i], &combined[j]),
                };
                raw[i * m + j] = value;
                raw[j * m + i] = value;
            }
        }
        SimilarityMatrix::from_raw(raw, m, config)
    }

    pub fn size(&self) -> usize {
        self.m
    }

    pub fn raw(&self, i: usize, j: usize) -> f64 {
        self.raw[i * self.m + j]
    }

    pub fn normalized(&self, i: usize, j: usize) -> f64 {
        self.normalized[i * self.m + j]
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn cosine(a: &[f64], b: &[f64]) -> f64 {
    let na = dot(a, a).sqrt();
    let nb = dot(b, b).sqrt();
    if na == 0.0 || nb == 0.0 {
        0.0
    } else {
        dot(a, b) / (na * nb)
    }
}

/// Threshold-normalized similarity matrix of a document's sentence vectors.
pub fn similarity_matrix(
    vectors: &[SentenceVector],
    config: &RankConfig,
) -> Result<SimilarityMatrix> {
    SimilarityMatrix::from_vectors(vectors, config)
}

/// Directed centrality: `lambda1 * sum_{j<i} Q_ij + lambda2 * sum_{j>i} Q_ij`.
pub fn centrality(q: &SimilarityMatrix) -> Vec<f64> {
    let m = q.size();
    (0..m)
        .map(|i| {
            let backward: f64 = (0..i).map(|j| q.normalized(i, j)).sum();
            let forward: f64 = ((i + 1)..m).map(|j| q.normalized(i, j)).sum();
            q.lambda1 * backward + q.lambda2 * forward
        })
        .collect()
}

/// Indices of the k highest-scoring sentences, ties broken by smaller index,
/// returned in document order.
pub fn select(scores: &[f64], k: usize) -> Vec<usize> {
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| {
        scores[b]
            .partial_cmp(&scores[a])
            .unwrap_or(std::cmp::Ordering::Equal)
            .then_with(|| a.cmp(&b))
    });
    let mut chosen: Vec<usize> = order.into_iter().take(k).collect();
    chosen.sort_unstable();
    chosen
}

/// Read an external semantic-vector file: first line `<m> <dim>`, then m
/// lines of dim floats in sentence order.
pub fn read_external_vectors(path: &Path) -> Result<Vec<Vec<f64>>> {
    let file = File::open(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let mut lines = BufReader::new(file).lines();
    let header = lines
        .next()
        .transpose()
        .map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?
        .ok_or_else(|| Error::Format {
            path: path.to_path_buf(),
            message: "missing header line".into(),
        })?;
    let mut parts = header.split_whitespace();
    let parse_header = |s: Option<&str>| -> Result<usize> {
        s.and_then(|x| x.parse().ok()).ok_or_else(|| Error::Format {
            path: path.to_path_buf(),
            message: format!("bad header {header:?}, expected `<m> <dim>`"),
        })
    };
    let m = parse_header(parts.next())?;
    let dim = parse_header(parts.next())?;

    let mut rows = Vec::with_capacity(m);
    for (i, line) in lines.enumerate() {
        let line = line.map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        if line.trim().is_empty() {
            continue;
        }
        let row: Vec<f64> = line
            .split_whitespace()
            .map(|x| x.parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| Error::Format {
                path: path.to_path_buf(),
                message: format!("line {}: non-numeric value", i + 2),
            })?;
        if row.len() != dim {
            return Err(Error::Format {
                path: path.to_path_buf(),
                message: format!("line {}: expected {dim} values, got {}", i + 2, row.len()),
            });
        }
        rows.push(row);
    }
    if rows.len() != m {
        return Err(Error::Format {
            path: path.to_path_buf(),
            message: format!("expected {m} rows, got {}", rows.len()),
        });
    }
    Ok(rows)
}
