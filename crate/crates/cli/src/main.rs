//! `hgsum` — extractive summarization over heterogeneous text graphs.
//!
//! Subcommands cover the full experiment loop: `summarize` runs a system
//! over a JSONL corpus, `ablate` sweeps edge/node/beta/lambda axes,
//! `evaluate` scores prediction files with ROUGE, and `keywords`,
//! `dump-graph`, `dump-walks` expose intermediate artifacts. A flat
//! `key = value` config file supplies defaults; flags override. Log level
//! comes from `RUST_LOG`.

use std::fs;
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use hgsum::config::RunConfig;
use hgsum::corpus::{load_corpus, Document};
use hgsum::graph::build_graph;
use hgsum::keywords::{build_idf, top_keywords};
use hgsum::pipeline::{
    document_keywords, document_walk_config, run_ablation, run_summarize, AblationAxis,
    AblationOptions,
};
use hgsum::rouge::{evaluate_corpus, format_report};
use hgsum::walks::{generate_walks, walks_to_text};

#[derive(Parser)]
#[command(
    name = "hgsum",
    version,
    about = "Unsupervised extractive summarization over heterogeneous word/sentence graphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Summarize a corpus and write summaries, metrics, and a run manifest.
    Summarize(SummarizeArgs),
    /// Sweep config axes and emit one metrics row per combination.
    Ablate(AblateArgs),
    /// Score a predictions JSONL file against corpus references.
    Evaluate(EvaluateArgs),
    /// Print each document's top TF-IDF keywords.
    Keywords(KeywordsArgs),
    /// Export document graphs as TSV edge lists.
    DumpGraph(DumpArgs),
    /// Export metapath walk corpora, one walk per line.
    DumpWalks(DumpArgs),
}

/// Config file plus per-field overrides. Every key of the config file has a
/// flag of the same name.
#[derive(Args, Default)]
struct ConfigArgs {
    /// Flat key=value config file providing defaults.
    #[arg(long)]
    config: Option<PathBuf>,

    /// System to run: hge, hge+external, lead, textrank, oracle.
    #[arg(long)]
    system: Option<String>,
    /// Master seed; all per-document randomness derives from it.
    #[arg(long)]
    seed: Option<u64>,

    /// Stopword file, one token per line.
    #[arg(long = "stopword-path")]
    stopword_path: Option<String>,
    #[arg(long)]
    min_sentence_tokens: Option<usize>,
    /// Characters splitting raw text into sentences.
    #[arg(long)]
    sentence_delimiters: Option<String>,

    #[arg(long)]
    ww_window: Option<usize>,
    #[arg(long)]
    ss_window: Option<usize>,
    #[arg(long)]
    use_ww: Option<bool>,
    #[arg(long)]
    use_ws: Option<bool>,
    #[arg(long)]
    use_ss: Option<bool>,
    #[arg(long)]
    unweighted: Option<bool>,
    /// `all` or `keywords:<k>`.
    #[arg(long)]
    node_vocabulary: Option<String>,

    #[arg(long)]
    walks_per_node: Option<usize>,
    #[arg(long)]
    walk_length: Option<usize>,
    /// Comma-separated metapath schemas, e.g. `s-w-s,w-s-w,s-s,w-w`.
    #[arg(long)]
    schemas: Option<String>,

    #[arg(long)]
    dim: Option<usize>,
    #[arg(long)]
    context_window: Option<usize>,
    #[arg(long)]
    negatives: Option<usize>,
    #[arg(long)]
    epochs: Option<usize>,
    #[arg(long)]
    lr_start: Option<f64>,
    #[arg(long)]
    lr_end: Option<f64>,
    #[arg(long)]
    noise_power: Option<f64>,

    #[arg(long)]
    beta: Option<f64>,
    #[arg(long)]
    lambda1: Option<f64>,
    #[arg(long)]
    lambda2: Option<f64>,
    /// Sentences to select per document.
    #[arg(long)]
    top_k: Option<usize>,
    /// `dot` or `cosine`.
    #[arg(long)]
    similarity: Option<String>,
    #[arg(long)]
    normalize_parts: Option<bool>,

    #[arg(long)]
    damping: Option<f64>,
    #[arg(long)]
    tolerance: Option<f64>,
    #[arg(long)]
    max_iterations: Option<usize>,

    /// `character` or `token`.
    #[arg(long)]
    rouge_unit: Option<String>,
    #[arg(long)]
    lowercase: Option<bool>,

    /// Directory of `<doc_id>.vec` files for hge+external.
    #[arg(long)]
    external_vectors_dir: Option<String>,
}

impl ConfigArgs {
    fn resolve(&self) -> Result<RunConfig> {
        let mut config = match &self.config {
            Some(path) => {
                let text = fs::read_to_string(path)
                    .with_context(|| format!("reading config file {}", path.display()))?;
                RunConfig::from_kv(&text)?
            }
            None => RunConfig::default(),
        };
        let mut set = |key: &str, value: Option<String>| -> Result<()> {
            if let Some(v) = value {
                config.set(key, &v)?;
            }
            Ok(())
        };
        set("system", self.system.clone())?;
        set("seed", self.seed.map(|v| v.to_string()))?;
        set("stopword_path", self.stopword_path.clone())?;
        set(
            "min_sentence_tokens",
            self.min_sentence_tokens.map(|v| v.to_string()),
        )?;
        set("sentence_delimiters", self.sentence_delimiters.clone())?;
        set("ww_window", self.ww_window.map(|v| v.to_string()))?;
        set("ss_window", self.ss_window.map(|v| v.to_string()))?;
        set("use_ww", self.use_ww.map(|v| v.to_string()))?;
        set("use_ws", self.use_ws.map(|v| v.to_string()))?;
        set("use_ss", self.use_ss.map(|v| v.to_string()))?;
        set("unweighted", self.unweighted.map(|v| v.to_string()))?;
        set("node_vocabulary", self.node_vocabulary.clone())?;
        set("walks_per_node", self.walks_per_node.map(|v| v.to_string()))?;
        set("walk_length", self.walk_length.map(|v| v.to_string()))?;
        set("schemas", self.schemas.clone())?;
        set("dim", self.dim.map(|v| v.to_string()))?;
        set("context_window", self.context_window.map(|v| v.to_string()))?;
        set("negatives", self.negatives.map(|v| v.to_string()))?;
        set("epochs", self.epochs.map(|v| v.to_string()))?;
        set("lr_start", self.lr_start.map(|v| v.to_string()))?;
        set("lr_end", self.lr_end.map(|v| v.to_string()))?;
        set("noise_power", self.noise_power.map(|v| v.to_string()))?;
        set("beta", self.beta.map(|v| v.to_string()))?;
        set("lambda1", self.lambda1.map(|v| v.to_string()))?;
        set("lambda2", self.lambda2.map(|v| v.to_string()))?;
        set("top_k", self.top_k.map(|v| v.to_string()))?;
        set("similarity", self.similarity.clone())?;
        set("normalize_parts", self.normalize_parts.map(|v| v.to_string()))?;
        set("damping", self.damping.map(|v| v.to_string()))?;
        set("tolerance", self.tolerance.map(|v| v.to_string()))?;
        set("max_iterations", self.max_iterations.map(|v| v.to_string()))?;
        set("rouge_unit", self.rouge_unit.clone())?;
        set("lowercase", self.lowercase.map(|v| v.to_string()))?;
        set("external_vectors_dir", self.external_vectors_dir.clone())?;

        // from_kv applies these couplings; flag overrides need them too.
        config.walks.seed = config.seed;
        config.train.seed = config.seed;
        config.walks.unweighted = config.graph.unweighted;
        Ok(config)
    }
}

#[derive(Args)]
struct SummarizeArgs {
    /// JSONL corpus path.
    #[arg(long)]
    corpus: PathBuf,
    /// Output directory for summaries.jsonl, metrics.tsv, run_manifest.txt.
    #[arg(long)]
    out: PathBuf,
    #[command(flatten)]
    config: ConfigArgs,
}

#[derive(Args)]
struct AblateArgs {
    #[arg(long)]
    corpus: PathBuf,
    /// Comma-separated axes: edge_types, node_types, beta, lambda.
    #[arg(long, default_value = "edge_types")]
    axes: String,
    /// Beta values for the beta axis, comma-separated.
    #[arg(long)]
    betas: Option<String>,
    /// Lambda pairs for the lambda axis, e.g. `1:1,0:1,1:0`.
    #[arg(long)]
    lambdas: Option<String>,
    /// Output TSV path (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
    #[command(flatten)]
    config: ConfigArgs,
}

#[derive(Args)]
struct EvaluateArgs {
    /// Predictions JSONL: {"id", "summary": [...]} per line.
    #[arg(long)]
    predictions: PathBuf,
    /// Corpus holding the reference summaries.
    #[arg(long)]
    corpus: PathBuf,
    /// Row label in the report.
    #[arg(long, default_value = "system")]
    system_label: String,
    #[command(flatten)]
    config: ConfigArgs,
}

#[derive(Args)]
struct KeywordsArgs {
    #[arg(long)]
    corpus: PathBuf,
    /// Keywords per document.
    #[arg(long, default_value_t = 20)]
    top: usize,
    /// Output path (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
    #[command(flatten)]
    config: ConfigArgs,
}

#[derive(Args)]
struct DumpArgs {
    #[arg(long)]
    corpus: PathBuf,
    /// Restrict to one document id (all documents when omitted).
    #[arg(long)]
    doc_id: Option<String>,
    /// Output path (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
    #[command(flatten)]
    config: ConfigArgs,
}

fn main() {
    env_logger::init();
    let cli = Cli::parse();
    if let Err(e) = run(cli) {
        eprintln!("error: {e:#}");
        std::process::exit(1);
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Summarize(args) => summarize(args),
        Command::Ablate(args) => ablate(args),
        Command::Evaluate(args) => evaluate(args),
        Command::Keywords(args) => keywords(args),
        Command::DumpGraph(args) => dump(args, DumpKind::Graph),
        Command::DumpWalks(args) => dump(args, DumpKind::Walks),
    }
}

fn emit(out: &Option<PathBuf>, contents: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, contents)
            .with_context(|| format!("writing {}", path.display())),
        None => {
            print!("{contents}");
            Ok(())
        }
    }
}

fn summarize(args: SummarizeArgs) -> Result<()> {
    let config = args.config.resolve()?;
    let artifacts = run_summarize(&config, &args.corpus, &args.out)?;
    eprintln!(
        "wrote {} summaries to {}",
        artifacts.records.len(),
        artifacts.summary_path.display()
    );
    if let Some((score, n)) = &artifacts.rouge {
        eprint!(
            "ROUGE over {n} reference documents:\n{}",
            format_report(&[(config.system.to_string(), *score)])
        );
    }
    Ok(())
}

fn ablate(args: AblateArgs) -> Result<()> {
    let config = args.config.resolve()?;
    let axes = args
        .axes
        .split(',')
        .map(|a| a.parse::<AblationAxis>())
        .collect::<hgsum::Result<Vec<_>>>()?;
    let mut options = AblationOptions {
        axes,
        ..AblationOptions::default()
    };
    if let Some(betas) = &args.betas {
        options.betas = betas
            .split(',')
            .map(|b| b.trim().parse::<f64>().context("bad beta value"))
            .collect::<Result<Vec<_>>>()?;
    }
    if let Some(lambdas) = &args.lambdas {
        options.lambdas = lambdas
            .split(',')
            .map(|pair| -> Result<(f64, f64)> {
                let (l1, l2) = pair
                    .split_once(':')
                    .with_context(|| format!("lambda pair {pair:?} is not `l1:l2`"))?;
                Ok((l1.trim().parse()?, l2.trim().parse()?))
            })
            .collect::<Result<Vec<_>>>()?;
    }
    let load = load_corpus(&args.corpus, &config.preprocess)?;
    let table = run_ablation(&config, &load.documents, &options)?;
    emit(&args.out, &table.to_tsv())
}

fn evaluate(args: EvaluateArgs) -> Result<()> {
    let config = args.config.resolve()?;
    let load = load_corpus(&args.corpus, &config.preprocess)?;
    let (score, n) = evaluate_corpus(&args.predictions, &load.documents, &config.rouge)?;
    eprintln!("scored {n} documents");
    print!("{}", format_report(&[(args.system_label, score)]));
    Ok(())
}

fn keywords(args: KeywordsArgs) -> Result<()> {
    let config = args.config.resolve()?;
    let load = load_corpus(&args.corpus, &config.preprocess)?;
    let idf = build_idf(&load.documents);
    let mut out = String::new();
    for doc in &load.documents {
        let words = top_keywords(doc, &idf, args.top);
        let line = serde_json::json!({ "id": doc.id, "keywords": words });
        out.push_str(&line.to_string());
        out.push('\n');
    }
    emit(&args.out, &out)
}

enum DumpKind {
    Graph,
    Walks,
}

fn dump(args: DumpArgs, kind: DumpKind) -> Result<()> {
    let config = args.config.resolve()?;
    let load = load_corpus(&args.corpus, &config.preprocess)?;
    let selected: Vec<(usize, &Document)> = load
        .documents
        .iter()
        .enumerate()
        .filter(|(_, d)| args.doc_id.as_ref().is_none_or(|id| &d.id == id))
        .collect();
    if selected.is_empty() {
        bail!(
            "no document matches{}",
            args.doc_id
                .as_ref()
                .map(|id| format!(" id {id:?}"))
                .unwrap_or_default()
        );
    }
    let needs_idf = matches!(
        config.graph.node_vocabulary,
        hgsum::graph::NodeVocabulary::Keywords(_)
    );
    let idf = needs_idf.then(|| build_idf(&load.documents));

    let mut out = String::new();
    let single = selected.len() == 1;
    for (index, doc) in selected {
        if !single {
            out.push_str(&format!("# doc_id={}\n", doc.id));
        }
        let kw = document_keywords(&config, doc, idf.as_ref());
        let graph = build_graph(doc, &config.graph, kw.as_ref())?;
        match kind {
            DumpKind::Graph => out.push_str(&graph.to_tsv()),
            DumpKind::Walks => {
                let walks = generate_walks(&graph, &document_walk_config(&config, index))?;
                out.push_str(&walks_to_text(&graph, &walks));
            }
        }
    }
    emit(&args.out, &out)
}
