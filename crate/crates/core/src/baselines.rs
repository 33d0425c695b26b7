//! Reference systems: LEAD, TextRank over TF-IDF sentence similarity, and
//! the greedy ROUGE oracle upper bound.

use std::collections::HashMap;

use crate::corpus::Document;
use crate::keywords::IdfTable;
use crate::rank::select;
use crate::rouge::{rouge_n, RougeConfig};

/// First-k-sentences baseline.
pub fn lead(doc: &Document, k: usize) -> Vec<usize> {
    (0..doc.sentences.len().min(k)).collect()
}

/// Power-iteration parameters for [`textrank`].
#[derive(Debug, Clone, PartialEq)]
pub struct TextRankParams {
    pub damping: f64,
    pub tolerance: f64,
    pub max_iterations: usize,
}

impl Default for TextRankParams {
    fn default() -> Self {
        TextRankParams {
            damping: 0.85,
            tolerance: 1e-6,
            max_iterations: 200,
        }
    }
}

/// PageRank scores over the cosine-of-TF-IDF sentence graph, plus the
/// iteration count and whether the tolerance was reached.
pub fn textrank_scores(
    doc: &Document,
    idf: &IdfTable,
    params: &TextRankParams,
) -> (Vec<f64>, usize, bool) {
    let (scores, deltas, converged) = textrank_power_iteration(doc, idf, params);
    (scores, deltas.len(), converged)
}

/// L1 distance between successive score vectors, one entry per iteration.
pub fn textrank_deltas(doc: &Document, idf: &IdfTable, params: &TextRankParams) -> Vec<f64> {
    textrank_power_iteration(doc, idf, params).1
}

fn textrank_power_iteration(
    doc: &Document,
    idf: &IdfTable,
    params: &TextRankParams,
) -> (Vec<f64>, Vec<f64>, bool) {
    let m = doc.sentences.len();
    if m == 0 {
        return (Vec::new(), Vec::new(), true);
    }
    if m == 1 {
        return (vec![1.0], Vec::new(), true);
    }

    // Sparse TF-IDF sentence vectors over the document vocabulary.
    let vectors: Vec<HashMap<&str, f64>> = doc
        .sentences
        .iter()
        .map(|s| {
            let mut tf: HashMap<&str, f64> = HashMap::new();
            for token in &s.tokens {
                *tf.entry(token).or_insert(0.0) += 1.0;
            }
            tf.iter_mut().for_each(|(w, v)| *v *= idf.lookup(w));
            tf
        })
        .collect();
    let norms: Vec<f64> = vectors
        .iter()
        .map(|v| v.values().map(|x| x * x).sum::<f64>().sqrt())
        .collect();
    let cosine = |i: usize, j: usize| -> f64 {
        if norms[i] == 0.0 || norms[j] == 0.0 {
            return 0.0;
        }
        let (small, large) = if vectors[i].len() <= vectors[j].len() {
            (&vectors[i], &vectors[j])
        } else {
            (&vectors[j], &vectors[i])
        };
        let dot: f64 = small
            .iter()
            .map(|(w, x)| x * large.get(w).copied().unwrap_or(0.0))
            .sum();
        dot / (norms[i] * norms[j])
    };

    let mut sim = vec![0.0; m * m];
    for i in 0..m {
        for j in (i + 1)..m {
            let value = cosine(i, j);
            sim[i * m + j] = value;
            sim[j * m + i] = value;
        }
    }
    // Row-normalize; all-zero rows teleport uniformly.
    let row_sums: Vec<f64> = (0..m).map(|i| sim[i * m..(i + 1) * m].iter().sum()).collect();

    let uniform = 1.0 / m as f64;
    let mut scores = vec![uniform; m];
    let mut next = vec![0.0; m];
    let mut deltas = Vec::new();
    let mut converged = false;
    while deltas.len() < params.max_iterations {
        let dangling_mass: f64 = (0..m)
            .filter(|&i| row_sums[i] == 0.0)
            .map(|i| scores[i])
            .sum();
        for j in 0..m {
            let mut incoming = 0.0;
            for i in 0..m {
                if row_sums[i] > 0.0 {
                    incoming += scores[i] * sim[i * m + j] / row_sums[i];
                }
            }
            incoming += dangling_mass * uniform;
            next[j] = (1.0 - params.damping) * uniform + params.damping * incoming;
        }
        let delta: f64 = scores
            .iter()
            .zip(&next)
            .map(|(a, b)| (a - b).abs())
            .sum();
        std::mem::swap(&mut scores, &mut next);
        deltas.push(delta);
        if delta < params.tolerance {
            converged = true;
            break;
        }
    }
    (scores, deltas, converged)
}

/// TextRank baseline: top-k sentences by PageRank score, ties broken by
/// smaller index, returned in document order.
pub fn textrank(doc: &Document, idf: &IdfTable, params: &TextRankParams, k: usize) -> Vec<usize> {
    let (scores, _, _) = textrank_scores(doc, idf, params);
    select(&scores, k)
}

/// Greedy oracle: repeatedly add the sentence that maximizes the mean of
/// ROUGE-1 and ROUGE-2 F1 of the selection (joined in document order)
/// against the reference. Stops after k sentences or when no sentence gives
/// a strict gain; ties prefer the smaller index. Returns indices in
/// selection order.
pub fn oracle_greedy(
    doc: &Document,
    reference: &[String],
    k: usize,
    config: &RougeConfig,
) -> Vec<usize> {
    if reference.is_empty() {
        return Vec::new();
    }
    let gold = reference.join(" ");
    let mut selected: Vec<usize> = Vec::new();
    let mut best_score = 0.0f64;
    while selected.len() < k.min(doc.sentences.len()) {
        let mut best: Option<(usize, f64)> = None;
        for i in 0..doc.sentences.len() {
            if selected.contains(&i) {
                continue;
            }
            let score = oracle_gain(doc, &selected, i, &gold, config);
            if best.is_none_or(|(_, b)| score > b) {
                best = Some((i, score));
            }
        }
        match best {
            Some((i, score)) if score > best_score => {
                selected.push(i);
                best_score = score;
            }
            _ => break,
        }
    }
    selected
}

/// Score of `selected + {candidate}` against the reference under the oracle
/// gain metric: mean of ROUGE-1 and ROUGE-2 F1, sentences joined in
/// document order.
pub fn oracle_gain(
    doc: &Document,
    selected: &[usize],
    candidate: usize,
    gold: &str,
    config: &RougeConfig,
) -> f64 {
    let mut indices: Vec<usize> = selected.to_vec();
    indices.push(candidate);
    indices.sort_unstable();
    let text = indices
        .iter()
        .map(|&i| doc.sentences[i].raw.as_str())
        .collect::<Vec<_>>()
        .join(" ");
    let r1 = rouge_n(&text, gold, 1, config).f1;
    let r2 = rouge_n(&text, gold, 2, config).f1;
    (r1 + r2) / 2.0
}
