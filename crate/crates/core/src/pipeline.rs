//! End-to-end orchestration: corpus -> graph -> walks -> embeddings ->
//! ranking -> selection, plus the ablation sweeps.
//!
//! Documents are processed by a rayon worker pool. Every per-document seed
//! derives from the master seed and the document's position, so parallel
//! and serial runs produce identical output files.

use std::collections::HashSet;
use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::baselines::{lead, oracle_greedy, textrank};
use crate::config::{RunConfig, SystemKind};
use crate::corpus::{load_corpus, Document};
use crate::embed::train;
use crate::error::{Error, Result};
use crate::graph::{build_graph, NodeVocabulary};
use crate::keywords::{build_idf, top_keywords, IdfTable};
use crate::rank::{
    centrality, read_external_vectors, select, sentence_vectors, similarity_matrix,
};
use crate::rouge::{format_report, mean_scores, rouge_all, RougeScore};
use crate::seeding::derive_seed;
use crate::walks::generate_walks;

const WALK_STREAM: u64 = 1;
const TRAIN_STREAM: u64 = 2;

/// Walk configuration for the document at `index`: the shared settings with
/// a per-document seed derived from the master seed.
pub fn document_walk_config(config: &RunConfig, index: usize) -> crate::walks::WalkConfig {
    let mut walk_config = config.walks.clone();
    walk_config.seed = derive_seed(config.seed, index as u64, WALK_STREAM);
    walk_config
}

/// Training configuration for the document at `index`.
pub fn document_train_config(config: &RunConfig, index: usize) -> crate::embed::TrainConfig {
    let mut train_config = config.train.clone();
    train_config.seed = derive_seed(config.seed, index as u64, TRAIN_STREAM);
    train_config
}

/// The keyword set constraining a document's graph vocabulary, when the
/// config asks for one.
pub fn document_keywords(
    config: &RunConfig,
    doc: &Document,
    idf: Option<&IdfTable>,
) -> Option<HashSet<String>> {
    match config.graph.node_vocabulary {
        NodeVocabulary::AllWords => None,
        NodeVocabulary::Keywords(k) => {
            let idf = idf.expect("idf table built for keyword vocabulary");
            Some(top_keywords(doc, idf, k).into_iter().collect())
        }
    }
}

/// One output line of a summarization run.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SummaryRecord {
    pub id: String,
    /// Selected sentence indices, in document order.
    pub selected: Vec<usize>,
    /// The selected sentences' original strings.
    pub summary: Vec<String>,
}

/// Summarize every document under the configured system.
pub fn summarize_documents(
    config: &RunConfig,
    documents: &[Document],
) -> Result<Vec<SummaryRecord>> {
    config.validate()?;
    let needs_idf = config.system == SystemKind::TextRank
        || (matches!(
            config.system,
            SystemKind::Hge | SystemKind::HgeExternal
        ) && matches!(config.graph.node_vocabulary, NodeVocabulary::Keywords(_)));
    let idf = needs_idf.then(|| build_idf(documents));

    documents
        .par_iter()
        .enumerate()
        .map(|(index, doc)| {
            process_document(config, doc, index, idf.as_ref())
                .map_err(|e| e.for_document(&doc.id))
        })
        .collect()
}

fn process_document(
    config: &RunConfig,
    doc: &Document,
    index: usize,
    idf: Option<&IdfTable>,
) -> Result<SummaryRecord> {
    if doc.sentences.is_empty() {
        return Err(Error::EmptyDocument(doc.id.clone()));
    }
    let selected = match config.system {
        SystemKind::Lead => lead(doc, config.rank.k),
        SystemKind::TextRank => {
            let idf = idf.expect("idf table built for textrank");
            textrank(doc, idf, &config.textrank, config.rank.k)
        }
        SystemKind::Oracle => {
            let reference = doc
                .reference
                .as_ref()
                .ok_or_else(|| Error::MissingReference(doc.id.clone()))?;
            let mut picked = oracle_greedy(doc, reference, config.rank.k, &config.rouge);
            picked.sort_unstable();
            picked
        }
        SystemKind::Hge | SystemKind::HgeExternal => hge_select(config, doc, index, idf)?,
    };
    let summary = selected
        .iter()
        .map(|&i| doc.sentences[i].raw.clone())
        .collect();
    Ok(SummaryRecord {
        id: doc.id.clone(),
        selected,
        summary,
    })
}

fn hge_select(
    config: &RunConfig,
    doc: &Document,
    index: usize,
    idf: Option<&IdfTable>,
) -> Result<Vec<usize>> {
    // Single-sentence documents bypass ranking.
    if doc.sentences.len() == 1 {
        return Ok(vec![0]);
    }
    let keywords = document_keywords(config, doc, idf);
    let graph = build_graph(doc, &config.graph, keywords.as_ref())?;
    let walks = generate_walks(&graph, &document_walk_config(config, index))?;
    let table = train(&walks, &graph, &document_train_config(config, index))?;

    let external = match config.system {
        SystemKind::HgeExternal => {
            let dir = config.external_vectors_dir.as_ref().ok_or_else(|| {
                Error::InvalidConfig("hge+external requires external_vectors_dir".into())
            })?;
            Some(read_external_vectors(&dir.join(format!("{}.vec", doc.id)))?)
        }
        _ => None,
    };

    let vectors = sentence_vectors(doc, &graph, &table, external.as_deref(), &config.rank)?;
    let matrix = similarity_matrix(&vectors, &config.rank)?;
    let scores = centrality(&matrix);
    Ok(select(&scores, config.rank.k))
}

/// Mean ROUGE of records against the documents that carry references.
/// None when no document has a reference.
pub fn rouge_over_records(
    records: &[SummaryRecord],
    documents: &[Document],
    config: &crate::rouge::RougeConfig,
) -> Option<(RougeScore, usize)> {
    let by_id: std::collections::HashMap<&str, &SummaryRecord> =
        records.iter().map(|r| (r.id.as_str(), r)).collect();
    let scores: Vec<RougeScore> = documents
        .iter()
        .filter_map(|doc| {
            let reference = doc.reference.as_ref()?;
            let record = by_id.get(doc.id.as_str())?;
            let candidate = record.summary.join(" ");
            Some(rouge_all(&candidate, &reference.join(" "), config))
        })
        .collect();
    if scores.is_empty() {
        None
    } else {
        Some((mean_scores(&scores), scores.len()))
    }
}

/// Files produced by [`run_summarize`].
#[derive(Debug)]
pub struct RunArtifacts {
    pub summary_path: PathBuf,
    /// Present when at least one document had a reference summary.
    pub metrics_path: Option<PathBuf>,
    pub manifest_path: PathBuf,
    pub records: Vec<SummaryRecord>,
    pub rouge: Option<(RougeScore, usize)>,
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Encode records as summary JSONL, one object per line.
pub fn records_to_jsonl(records: &[SummaryRecord]) -> String {
    let mut out = String::new();
    for record in records {
        out.push_str(&serde_json::to_string(record).expect("record serializes"));
        out.push('\n');
    }
    out
}

/// Full run: load the corpus, summarize, and write `summaries.jsonl`,
/// `metrics.tsv` (when references exist), and `run_manifest.txt` under
/// `out_dir`.
pub fn run_summarize(
    config: &RunConfig,
    corpus_path: &Path,
    out_dir: &Path,
) -> Result<RunArtifacts> {
    let load = load_corpus(corpus_path, &config.preprocess)?;
    let records = summarize_documents(config, &load.documents)?;

    fs::create_dir_all(out_dir).map_err(|source| Error::Io {
        path: out_dir.to_path_buf(),
        source,
    })?;

    let summary_path = out_dir.join("summaries.jsonl");
    write_file(&summary_path, &records_to_jsonl(&records))?;

    let rouge = rouge_over_records(&records, &load.documents, &config.rouge);
    let metrics_path = match &rouge {
        Some((score, _)) => {
            let path = out_dir.join("metrics.tsv");
            write_file(&path, &format_report(&[(config.system.to_string(), *score)]))?;
            Some(path)
        }
        None => None,
    };

    let manifest_path = out_dir.join("run_manifest.txt");
    let manifest = format!(
        "version = {}\n{}",
        env!("CARGO_PKG_VERSION"),
        config.to_kv()
    );
    write_file(&manifest_path, &manifest)?;

    Ok(RunArtifacts {
        summary_path,
        metrics_path,
        manifest_path,
        records,
        rouge,
    })
}

/// Sweep axes for [`run_ablation`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AblationAxis {
    /// The four edge-family combinations: WS; WW+WS; WS+SS; WW+WS+SS.
    EdgeTypes,
    /// Word nodes vs keyword nodes.
    NodeTypes,
    Beta,
    Lambda,
}

impl std::str::FromStr for AblationAxis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "edge_types" | "edges" => Ok(AblationAxis::EdgeTypes),
            "node_types" | "nodes" => Ok(AblationAxis::NodeTypes),
            "beta" => Ok(AblationAxis::Beta),
            "lambda" => Ok(AblationAxis::Lambda),
            other => Err(Error::InvalidConfig(format!("unknown axis {other:?}"))),
        }
    }
}

#[derive(Debug, Clone)]
pub struct AblationOptions {
    pub axes: Vec<AblationAxis>,
    /// Values swept by the beta axis.
    pub betas: Vec<f64>,
    /// (lambda1, lambda2) pairs swept by the lambda axis.
    pub lambdas: Vec<(f64, f64)>,
}

impl Default for AblationOptions {
    fn default() -> Self {
        AblationOptions {
            axes: vec![AblationAxis::EdgeTypes],
            betas: vec![0.0, 0.3, 0.6],
            lambdas: vec![(1.0, 1.0), (0.0, 1.0), (1.0, 0.0)],
        }
    }
}

#[derive(Debug, Clone)]
enum AxisValue {
    Edges { ww: bool, ss: bool },
    Nodes(NodeVocabulary),
    Beta(f64),
    Lambda(f64, f64),
}

/// One metrics row of an ablation sweep.
#[derive(Debug, Clone)]
pub struct AblationRow {
    /// One label per sweep column.
    pub labels: Vec<String>,
    pub score: RougeScore,
    pub documents: usize,
}

#[derive(Debug, Clone)]
pub struct AblationTable {
    /// Sweep column names, followed in the TSV by R-1, R-2, R-L.
    pub columns: Vec<String>,
    pub rows: Vec<AblationRow>,
}

impl AblationTable {
    /// Table layout mirroring the run reports: sweep columns, then F1
    /// percentages to one decimal.
    pub fn to_tsv(&self) -> String {
        let mut out = self.columns.join("\t");
        out.push_str("\tR-1\tR-2\tR-L\n");
        for row in &self.rows {
            out.push_str(&row.labels.join("\t"));
            out.push_str(&format!(
                "\t{:.1}\t{:.1}\t{:.1}\n",
                row.score.r1.f1 * 100.0,
                row.score.r2.f1 * 100.0,
                row.score.rl.f1 * 100.0
            ));
        }
        out
    }
}

fn axis_variants(
    axis: AblationAxis,
    config: &RunConfig,
    options: &AblationOptions,
) -> (Vec<String>, Vec<(Vec<String>, AxisValue)>) {
    match axis {
        AblationAxis::EdgeTypes => {
            let mark = |on: bool| if on { "x" } else { "" }.to_string();
            let combos = [(false, false), (true, false), (false, true), (true, true)];
            (
                vec!["W-W".into(), "W-S".into(), "S-S".into()],
                combos
                    .iter()
                    .map(|&(ww, ss)| {
                        (
                            vec![mark(ww), mark(true), mark(ss)],
                            AxisValue::Edges { ww, ss },
                        )
                    })
                    .collect(),
            )
        }
        AblationAxis::NodeTypes => {
            let k = match config.graph.node_vocabulary {
                NodeVocabulary::Keywords(k) => k,
                NodeVocabulary::AllWords => 20,
            };
            (
                vec!["node_type".into()],
                vec![
                    (vec!["word".into()], AxisValue::Nodes(NodeVocabulary::AllWords)),
                    (
                        vec!["keyword".into()],
                        AxisValue::Nodes(NodeVocabulary::Keywords(k)),
                    ),
                ],
            )
        }
        AblationAxis::Beta => (
            vec!["beta".into()],
            options
                .betas
                .iter()
                .map(|&b| (vec![b.to_string()], AxisValue::Beta(b)))
                .collect(),
        ),
        AblationAxis::Lambda => (
            vec!["lambda1".into(), "lambda2".into()],
            options
                .lambdas
                .iter()
                .map(|&(l1, l2)| {
                    (vec![l1.to_string(), l2.to_string()], AxisValue::Lambda(l1, l2))
                })
                .collect(),
        ),
    }
}

fn apply_value(config: &mut RunConfig, value: &AxisValue) {
    match value {
        AxisValue::Edges { ww, ss } => {
            config.graph.use_ww = *ww;
            config.graph.use_ws = true;
            config.graph.use_ss = *ss;
        }
        AxisValue::Nodes(vocabulary) => config.graph.node_vocabulary = *vocabulary,
        AxisValue::Beta(b) => config.rank.beta = *b,
        AxisValue::Lambda(l1, l2) => {
            config.rank.lambda1 = *l1;
            config.rank.lambda2 = *l2;
        }
    }
}

/// Run the cross-product of the requested sweep axes and collect one ROUGE
/// row per configuration. The corpus must carry reference summaries.
pub fn run_ablation(
    config: &RunConfig,
    documents: &[Document],
    options: &AblationOptions,
) -> Result<AblationTable> {
    if options.axes.is_empty() {
        return Err(Error::InvalidConfig(
            "ablation requires at least one axis".into(),
        ));
    }
    if !documents.iter().any(|d| d.reference.is_some()) {
        return Err(Error::InvalidConfig(
            "ablation requires reference summaries".into(),
        ));
    }

    let mut columns = Vec::new();
    // Cross-product, first axis outermost.
    let mut combos: Vec<(Vec<String>, Vec<AxisValue>)> = vec![(Vec::new(), Vec::new())];
    for &axis in &options.axes {
        let (axis_columns, variants) = axis_variants(axis, config, options);
        columns.extend(axis_columns);
        let mut next = Vec::with_capacity(combos.len() * variants.len());
        for (labels, values) in &combos {
            for (variant_labels, variant_value) in &variants {
                let mut labels = labels.clone();
                labels.extend(variant_labels.iter().cloned());
                let mut values = values.clone();
                values.push(variant_value.clone());
                next.push((labels, values));
            }
        }
        combos = next;
    }

    let mut rows = Vec::with_capacity(combos.len());
    for (labels, values) in combos {
        let mut row_config = config.clone();
        for value in &values {
            apply_value(&mut row_config, value);
        }
        let records = summarize_documents(&row_config, documents)?;
        let (score, scored) = rouge_over_records(&records, documents, &row_config.rouge)
            .expect("corpus has references");
        rows.push(AblationRow {
            labels,
            score,
            documents: scored,
        });
    }
    Ok(AblationTable { columns, rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::Sentence;

    fn doc(id: &str, sentences: &[&str], reference: Option<&str>) -> Document {
        Document {
            id: id.to_string(),
            sentences: sentences
                .iter()
                .enumerate()
                .map(|(index, raw)| Sentence {
                    index,
                    tokens: raw.split_whitespace().map(|t| t.to_string()).collect(),
                    raw: raw.to_string(),
                })
                .collect(),
            reference: reference.map(|r| vec![r.to_string()]),
        }
    }

    fn tiny_corpus() -> Vec<Document> {
        vec![
            doc(
                "d0",
                &["cat dog bird fish", "cat dog", "tree house", "bird fish tree"],
                Some("cat dog bird fish"),
            ),
            doc(
                "d1",
                &["sun moon star", "star cloud", "sun moon"],
                Some("sun moon star"),
            ),
        ]
    }

    fn fast_config(system: SystemKind) -> RunConfig {
        let mut config = RunConfig {
            system,
            ..RunConfig::default()
        };
        config.walks.walks_per_node = 4;
        config.walks.walk_length = 12;
        config.train.dim = 16;
        config.train.epochs = 2;
        config.train.window = 3;
        config.train.negatives = 3;
        config
    }

    #[test]
    fn lead_system_delegates() {
        let documents = tiny_corpus();
        let records =
            summarize_documents(&fast_config(SystemKind::Lead), &documents).unwrap();
        assert_eq!(records[0].selected, vec![0]);
        assert_eq!(records[0].summary, vec!["cat dog bird fish".to_string()]);
        assert_eq!(records[1].selected, vec![0]);
    }

    #[test]
    fn oracle_requires_reference() {
        let documents = vec![doc("x", &["a b"], None)];
        let err = summarize_documents(&fast_config(SystemKind::Oracle), &documents)
            .unwrap_err();
        assert!(err.to_string().contains('x'));
    }

    #[test]
    fn hge_runs_are_deterministic() {
        let documents = tiny_corpus();
        let config = fast_config(SystemKind::Hge);
        let a = summarize_documents(&config, &documents).unwrap();
        let b = summarize_documents(&config, &documents).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn single_sentence_documents_bypass_ranking() {
        let documents = vec![doc("one", &["only sentence"], None)];
        let records =
            summarize_documents(&fast_config(SystemKind::Hge), &documents).unwrap();
        assert_eq!(records[0].selected, vec![0]);
    }

    #[test]
    fn keyword_vocabulary_pipeline_runs() {
        let documents = tiny_corpus();
        let mut config = fast_config(SystemKind::Hge);
        config.graph.node_vocabulary = NodeVocabulary::Keywords(3);
        let records = summarize_documents(&config, &documents).unwrap();
        assert_eq!(records.len(), 2);
    }

    #[test]
    fn ablation_layouts_match_the_tables() {
        let documents = tiny_corpus();
        let config = fast_config(SystemKind::Hge);

        let edges = run_ablation(
            &config,
            &documents,
            &AblationOptions {
                axes: vec![AblationAxis::EdgeTypes],
                ..AblationOptions::default()
            },
        )
        .unwrap();
        assert_eq!(edges.columns, vec!["W-W", "W-S", "S-S"]);
        assert_eq!(edges.rows.len(), 4);
        let patterns: Vec<Vec<String>> = edges.rows.iter().map(|r| r.labels.clone()).collect();
        assert_eq!(
            patterns,
            vec![
                vec!["", "x", ""],
                vec!["x", "x", ""],
                vec!["", "x", "x"],
                vec!["x", "x", "x"],
            ]
            .into_iter()
            .map(|row: Vec<&str>| row.into_iter().map(String::from).collect::<Vec<_>>())
            .collect::<Vec<_>>()
        );

        let nodes = run_ablation(
            &config,
            &documents,
            &AblationOptions {
                axes: vec![AblationAxis::NodeTypes],
                ..AblationOptions::default()
            },
        )
        .unwrap();
        assert_eq!(nodes.columns, vec!["node_type"]);
        assert_eq!(nodes.rows.len(), 2);
        assert_eq!(nodes.rows[0].labels, vec!["word"]);
        assert_eq!(nodes.rows[1].labels, vec!["keyword"]);
    }

    #[test]
    fn full_edge_ablation_row_matches_standalone_run() {
        let documents = tiny_corpus();
        let config = fast_config(SystemKind::Hge);
        let table = run_ablation(
            &config,
            &documents,
            &AblationOptions {
                axes: vec![AblationAxis::EdgeTypes],
                ..AblationOptions::default()
            },
        )
        .unwrap();
        let standalone = summarize_documents(&config, &documents).unwrap();
        let (standalone_score, _) =
            rouge_over_records(&standalone, &documents, &config.rouge).unwrap();
        let full_row = &table.rows[3];
        assert_eq!(full_row.score, standalone_score);
    }

    #[test]
    fn empty_axes_rejected() {
        let documents = tiny_corpus();
        let config = fast_config(SystemKind::Hge);
        let options = AblationOptions {
            axes: vec![],
            ..AblationOptions::default()
        };
        assert!(run_ablation(&config, &documents, &options).is_err());
    }

    #[test]
    fn single_axis_single_value_equals_run_summarize() {
        let documents = tiny_corpus();
        let config = fast_config(SystemKind::Hge);
        let options = AblationOptions {
            axes: vec![AblationAxis::Beta],
            betas: vec![config.rank.beta],
            lambdas: vec![],
        };
        let table = run_ablation(&config, &documents, &options).unwrap();
        assert_eq!(table.rows.len(), 1);
        let records = summarize_documents(&config, &documents).unwrap();
        let (score, _) = rouge_over_records(&records, &documents, &config.rouge).unwrap();
        assert_eq!(table.rows[0].score, score);
    }
}
