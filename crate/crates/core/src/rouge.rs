//! ROUGE-1, ROUGE-2, and ROUGE-L F1 scoring.
//!
//! Character units (whitespace stripped) are the default, matching common
//! practice for Chinese; token units split on whitespace for pre-tokenized
//! comparison. Single-reference scoring only.

use std::collections::HashMap;
use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;

use serde::Deserialize;

use crate::corpus::Document;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RougeUnit {
    Character,
    Token,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RougeConfig {
    pub unit: RougeUnit,
    pub lowercase: bool,
}

impl Default for RougeConfig {
    fn default() -> Self {
        RougeConfig {
            unit: RougeUnit::Character,
            lowercase: true,
        }
    }
}

/// Precision / recall / F1 triple for one ROUGE variant.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Prf {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

impl Prf {
    fn from_counts(overlap: f64, candidate_total: f64, reference_total: f64) -> Prf {
        if candidate_total == 0.0 || reference_total == 0.0 {
            return Prf::default();
        }
        let precision = overlap / candidate_total;
        let recall = overlap / reference_total;
        Prf {
            precision,
            recall,
            f1: f1(precision, recall),
        }
    }
}

fn f1(p: f64, r: f64) -> f64 {
    if p + r > 0.0 {
        2.0 * p * r / (p + r)
    } else {
        0.0
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct RougeScore {
    pub r1: Prf,
    pub r2: Prf,
    pub rl: Prf,
}

/// Split a string into scoring units under the config.
pub fn units(text: &str, config: &RougeConfig) -> Vec<String> {
    let text = if config.lowercase {
        text.to_lowercase()
    } else {
        text.to_string()
    };
    match config.unit {
        RougeUnit::Character => text
            .chars()
            .filter(|c| !c.is_whitespace())
            .map(|c| c.to_string())
            .collect(),
        RougeUnit::Token => text.split_whitespace().map(|t| t.to_string()).collect(),
    }
}

fn ngram_counts(units: &[String], n: usize) -> HashMap<&[String], usize> {
    let mut counts = HashMap::new();
    if units.len() >= n && n > 0 {
        for gram in units.windows(n) {
            *counts.entry(gram).or_insert(0) += 1;
        }
    }
    counts
}

/// Clipped n-gram overlap ROUGE-N (n = 1 or 2).
pub fn rouge_n(candidate: &str, reference: &str, n: usize, config: &RougeConfig) -> Prf {
    let cand = units(candidate, config);
    let refr = units(reference, config);
    let cand_grams = ngram_counts(&cand, n);
    let ref_grams = ngram_counts(&refr, n);
    let cand_total: usize = cand_grams.values().sum();
    let ref_total: usize = ref_grams.values().sum();
    let overlap: usize = cand_grams
        .iter()
        .map(|(gram, &count)| count.min(ref_grams.get(gram).copied().unwrap_or(0)))
        .sum();
    Prf::from_counts(overlap as f64, cand_total as f64, ref_total as f64)
}

/// Longest-common-subsequence ROUGE-L.
pub fn rouge_l(candidate: &str, reference: &str, config: &RougeConfig) -> Prf {
    let cand = units(candidate, config);
    let refr = units(reference, config);
    if cand.is_empty() || refr.is_empty() {
        return Prf::default();
    }
    let lcs = lcs_length(&cand, &refr) as f64;
    Prf::from_counts(lcs, cand.len() as f64, refr.len() as f64)
}

/// Two-row dynamic-programming LCS length.
pub fn lcs_length(a: &[String], b: &[String]) -> usize {
    let mut prev = vec![0usize; b.len() + 1];
    let mut curr = vec![0usize; b.len() + 1];
    for x in a {
        for (j, y) in b.iter().enumerate() {
            curr[j + 1] = if x == y {
                prev[j] + 1
            } else {
                prev[j + 1].max(curr[j])
            };
        }
        std::mem::swap(&mut prev, &mut curr);
    }
    prev[b.len()]
}

/// ROUGE-1/2/L in one call.
pub fn rouge_all(candidate: &str, reference: &str, config: &RougeConfig) -> RougeScore {
    RougeScore {
        r1: rouge_n(candidate, reference, 1, config),
        r2: rouge_n(candidate, reference, 2, config),
        rl: rouge_l(candidate, reference, config),
    }
}

/// Arithmetic mean of per-document scores, component-wise.
pub fn mean_scores(scores: &[RougeScore]) -> RougeScore {
    if scores.is_empty() {
        return RougeScore::default();
    }
    let n = scores.len() as f64;
    let mut sum = RougeScore::default();
    for s in scores {
        for (acc, part) in [
            (&mut sum.r1, &s.r1),
            (&mut sum.r2, &s.r2),
            (&mut sum.rl, &s.rl),
        ] {
            acc.precision += part.precision;
            acc.recall += part.recall;
            acc.f1 += part.f1;
        }
    }
    for part in [&mut sum.r1, &mut sum.r2, &mut sum.rl] {
        part.precision /= n;
        part.recall /= n;
        part.f1 /= n;
    }
    sum
}

#[derive(Debug, Deserialize)]
struct PredictionLine {
    id: String,
    summary: Vec<String>,
}

/// Score a predictions JSONL file (`{"id", "summary": [...]}` per line)
/// against the corpus references. Every prediction id must name a document
/// with a reference summary; multi-sentence texts are joined before scoring.
///
/// Returns the corpus mean and the number of scored documents.
pub fn evaluate_corpus(
    predictions: &Path,
    corpus: &[Document],
    config: &RougeConfig,
) -> Result<(RougeScore, usize)> {
    let by_id: HashMap<&str, &Document> =
        corpus.iter().map(|d| (d.id.as_str(), d)).collect();
    let file = File::open(predictions).map_err(|source| Error::Io {
        path: predictions.to_path_buf(),
        source,
    })?;

    let mut scores = Vec::new();
    let mut missing = Vec::new();
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|source| Error::LineIo {
            path: predictions.to_path_buf(),
            line: i + 1,
            source,
        })?;
        if line.trim().is_empty() {
            continue;
        }
        let pred: PredictionLine =
            serde_json::from_str(&line).map_err(|e| Error::Format {
                path: predictions.to_path_buf(),
                message: format!("line {}: {e}", i + 1),
            })?;
        match by_id.get(pred.id.as_str()).and_then(|d| d.reference.as_ref()) {
            Some(reference) => {
                let candidate = pred.summary.join(" ");
                let gold = reference.join(" ");
                scores.push(rouge_all(&candidate, &gold, config));
            }
            None => missing.push(pred.id),
        }
    }
    if !missing.is_empty() {
        return Err(Error::MissingIds(missing));
    }
    let n = scores.len();
    Ok((mean_scores(&scores), n))
}

/// Report rows as TSV: `system<TAB>R-1<TAB>R-2<TAB>R-L`, F1 percentages to
/// one decimal.
pub fn format_report(rows: &[(String, RougeScore)]) -> String {
    let mut out = String::from("system\tR-1\tR-2\tR-L\n");
    for (label, score) in rows {
        out.push_str(&format!(
            "{label}\t{:.1}\t{:.1}\t{:.1}\n",
            score.r1.f1 * 100.0,
            score.r2.f1 * 100.0,
            score.rl.f1 * 100.0
        ));
    }
    out
}
