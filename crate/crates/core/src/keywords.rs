//! TF-IDF keyword extraction for the keyword-node graph variant.
//!
//! IDF is computed from the evaluation corpus itself:
//! `idf(w) = ln((1 + N) / (1 + df(w))) + 1`, which stays positive and gives
//! unseen words the maximum value.

use std::collections::{HashMap, HashSet};
use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use crate::corpus::Document;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Default)]
pub struct IdfTable {
    idf: HashMap<String, f64>,
    doc_count: usize,
}

impl IdfTable {
    pub fn doc_count(&self) -> usize {
        self.doc_count
    }

    /// IDF of a word; absent words get the unseen smoothing
    /// `ln(1 + N) + 1`.
    pub fn lookup(&self, word: &str) -> f64 {
        self.idf
            .get(word)
            .copied()
            .unwrap_or_else(|| ((1.0 + self.doc_count as f64).ln()) + 1.0)
    }

    pub fn len(&self) -> usize {
        self.idf.len()
    }

    pub fn is_empty(&self) -> bool {
        self.idf.is_empty()
    }

    /// Cache format: `word<TAB>idf`, one entry per line, plus a header line
    /// recording the document count.
    pub fn write_tsv(&self, path: &Path) -> Result<()> {
        let mut file = File::create(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        let mut rows: Vec<(&String, &f64)> = self.idf.iter().collect();
        rows.sort_by(|a, b| a.0.cmp(b.0));
        let mut body = format!("#doc_count\t{}\n", self.doc_count);
        for (word, idf) in rows {
            body.push_str(&format!("{word}\t{idf}\n"));
        }
        file.write_all(body.as_bytes()).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })
    }

    pub fn read_tsv(path: &Path) -> Result<Self> {
        let file = File::open(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        let mut table = IdfTable::default();
        for (i, line) in BufReader::new(file).lines().enumerate() {
            let line = line.map_err(|source| Error::Io {
                path: path.to_path_buf(),
                source,
            })?;
            if line.is_empty() {
                continue;
            }
            let mut parts = line.splitn(2, '\t');
            let key = parts.next().unwrap_or_default();
            let value = parts.next().ok_or_else(|| Error::Format {
                path: path.to_path_buf(),
                message: format!("line {}: expected word<TAB>idf", i + 1),
            })?;
            if key == "#doc_count" {
                table.doc_count = value.parse().map_err(|_| Error::Format {
                    path: path.to_path_buf(),
                    message: format!("line {}: bad doc_count {value:?}", i + 1),
                })?;
                continue;
            }
            let idf: f64 = value.parse().map_err(|_| Error::Format {
                path: path.to_path_buf(),
                message: format!("line {}: bad idf {value:?}", i + 1),
            })?;
            table.idf.insert(key.to_string(), idf);
        }
        Ok(table)
    }
}

/// Document frequencies over the corpus, then the smoothed IDF.
pub fn build_idf(corpus: &[Document]) -> IdfTable {
    let mut df: HashMap<String, usize> = HashMap::new();
    for doc in corpus {
        let mut seen: HashSet<&str> = HashSet::new();
        for sentence in &doc.sentences {
            for token in &sentence.tokens {
                if seen.insert(token) {
                    *df.entry(token.clone()).or_insert(0) += 1;
                }
            }
        }
    }
    let n = corpus.len();
    let idf = df
        .into_iter()
        .map(|(word, df)| {
            let value = ((1.0 + n as f64) / (1.0 + df as f64)).ln() + 1.0;
            (word, value)
        })
        .collect();
    IdfTable { idf, doc_count: n }
}

/// Top-k words of a document by `tf * idf`, ties broken by earlier first
/// occurrence, then lexicographically.
pub fn top_keywords(doc: &Document, idf: &IdfTable, k: usize) -> Vec<String> {
    let mut tf: HashMap<&str, usize> = HashMap::new();
    let mut first_pos: HashMap<&str, usize> = HashMap::new();
    let mut position = 0usize;
    for sentence in &doc.sentences {
        for token in &sentence.tokens {
            *tf.entry(token).or_insert(0) += 1;
            first_pos.entry(token).or_insert(position);
            position += 1;
        }
    }
    let mut scored: Vec<(&str, f64)> = tf
        .iter()
        .map(|(&word, &count)| (word, count as f64 * idf.lookup(word)))
        .collect();
    scored.sort_by(|a, b| {
        b.1.partial_cmp(&a.1)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then_with(|| first_pos[a.0].cmp(&first_pos[b.0]))
            .then_with(|| a.0.cmp(b.0))
    });
    scored
        .into_iter()
        .take(k)
        .map(|(word, _)| word.to_string())
        .collect()
}
