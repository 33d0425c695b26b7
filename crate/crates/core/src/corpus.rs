//! Corpus ingestion: JSONL loading, sentence splitting, token filtering.
//!
//! Input documents are either pre-tokenized (`"sentences"`, an array of
//! token arrays) or raw text (`"text"`), in which case a fallback segmenter
//! splits on sentence delimiters and tokenizes CJK per character and Latin
//! runs on whitespace.

use std::collections::{BTreeSet, HashSet};
use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::{Path, PathBuf};

use serde::Deserialize;
use unicode_general_category::{get_general_category, GeneralCategory};

use crate::error::{Error, Result};

/// A preprocessed sentence: filtered tokens plus the original surface form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sentence {
    /// 0-based position in the document after preprocessing.
    pub index: usize,
    /// Tokens surviving stopword/punctuation filtering. Never empty.
    pub tokens: Vec<String>,
    /// Original string, used for summary output and ROUGE.
    pub raw: String,
}

/// An ordered document, optionally with a gold summary.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Document {
    pub id: String,
    pub sentences: Vec<Sentence>,
    /// Gold summary sentences, when the corpus provides them.
    pub reference: Option<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PreprocessConfig {
    /// Stopword list, one token per line, `#` comments. None = punctuation-only filtering.
    pub stopword_path: Option<PathBuf>,
    /// Sentences with fewer surviving tokens are dropped. Must be >= 1.
    pub min_sentence_tokens: usize,
    /// Characters that end a sentence when splitting raw `text` fields.
    pub sentence_delimiters: BTreeSet<char>,
}

impl Default for PreprocessConfig {
    fn default() -> Self {
        PreprocessConfig {
            stopword_path: None,
            min_sentence_tokens: 1,
            sentence_delimiters: "。！？；.!?".chars().collect(),
        }
    }
}

impl PreprocessConfig {
    pub fn validate(&self) -> Result<()> {
        if self.min_sentence_tokens < 1 {
            return Err(Error::InvalidConfig(
                "min_sentence_tokens must be >= 1".into(),
            ));
        }
        Ok(())
    }
}

/// Per-line failure record produced while loading a corpus.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LineError {
    /// 1-based line number in the JSONL file.
    pub line: usize,
    pub message: String,
}

/// Outcome of [`load_corpus`]: documents plus the counts of everything else.
///
/// `documents.len() + skipped.len() + malformed.len()` equals the number of
/// input lines.
#[derive(Debug, Default)]
pub struct CorpusLoad {
    pub documents: Vec<Document>,
    /// Ids of documents whose every sentence emptied under filtering.
    pub skipped: Vec<String>,
    pub malformed: Vec<LineError>,
}

#[derive(Deserialize)]
struct RawDoc {
    id: String,
    #[serde(default)]
    sentences: Option<Vec<Vec<String>>>,
    #[serde(default)]
    text: Option<String>,
    #[serde(default)]
    summary: Option<Vec<String>>,
}

/// Load a UTF-8 JSONL corpus.
///
/// Malformed lines are recorded and skipped; documents that empty under
/// filtering are skipped with a warning. I/O failures abort with the line
/// number reached.
pub fn load_corpus(path: &Path, config: &PreprocessConfig) -> Result<CorpusLoad> {
    config.validate()?;
    let stopwords = match &config.stopword_path {
        Some(p) => load_stopwords(p)?,
        None => HashSet::new(),
    };

    let file = File::open(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let reader = BufReader::new(file);

    let mut out = CorpusLoad::default();
    for (i, line) in reader.lines().enumerate() {
        let line_no = i + 1;
        let line = line.map_err(|source| Error::LineIo {
            path: path.to_path_buf(),
            line: line_no,
            source,
        })?;
        let raw: RawDoc = match serde_json::from_str(&line) {
            Ok(raw) => raw,
            Err(e) => {
                log::warn!("{}:{}: skipping malformed line: {}", path.display(), line_no, e);
                out.malformed.push(LineError {
                    line: line_no,
                    message: e.to_string(),
                });
                continue;
            }
        };

        let sentences = match (&raw.sentences, &raw.text) {
            (Some(pre), _) => preprocess_tokenized(pre, &stopwords, config),
            (None, Some(text)) => preprocess_text(text, &stopwords, config),
            (None, None) => {
                let message = format!(
                    "document {:?} has neither \"sentences\" nor \"text\"",
                    raw.id
                );
                log::warn!("{}:{}: {}", path.display(), line_no, message);
                out.malformed.push(LineError {
                    line: line_no,
                    message,
                });
                continue;
            }
        };

        if sentences.is_empty() {
            log::warn!(
                "{}:{}: document {:?} emptied by filtering, skipping",
                path.display(),
                line_no,
                raw.id
            );
            out.skipped.push(raw.id);
            continue;
        }
        out.documents.push(Document {
            id: raw.id,
            sentences,
            reference: raw.summary,
        });
    }
    Ok(out)
}

/// Load a stopword file: one token per line, lines starting with `#` ignored.
pub fn load_stopwords(path: &Path) -> Result<HashSet<String>> {
    let file = File::open(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let mut set = HashSet::new();
    for line in BufReader::new(file).lines() {
        let line = line.map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        let token = line.trim();
        if token.is_empty() || token.starts_with('#') {
            continue;
        }
        set.insert(token.to_string());
    }
    Ok(set)
}

fn preprocess_tokenized(
    pre: &[Vec<String>],
    stopwords: &HashSet<String>,
    config: &PreprocessConfig,
) -> Vec<Sentence> {
    let mut sentences = Vec::new();
    for tokens in pre {
        let raw = tokens.join(" ");
        let kept = filter_tokens(tokens, stopwords);
        if kept.len() >= config.min_sentence_tokens {
            sentences.push(Sentence {
                index: sentences.len(),
                tokens: kept,
                raw,
            });
        }
    }
    sentences
}

fn preprocess_text(
    text: &str,
    stopwords: &HashSet<String>,
    config: &PreprocessConfig,
) -> Vec<Sentence> {
    let mut sentences = Vec::new();
    for raw in split_sentences(text, &config.sentence_delimiters) {
        let tokens = tokenize_fallback(&raw);
        let kept = filter_tokens(&tokens, stopwords);
        if kept.len() >= config.min_sentence_tokens {
            sentences.push(Sentence {
                index: sentences.len(),
                tokens: kept,
                raw,
            });
        }
    }
    sentences
}

/// Split raw text into sentence strings on the delimiter set. Delimiters are
/// dropped; empty segments are discarded.
pub fn split_sentences(text: &str, delimiters: &BTreeSet<char>) -> Vec<String> {
    let mut out = Vec::new();
    let mut current = String::new();
    for c in text.chars() {
        if delimiters.contains(&c) {
            let segment = current.trim();
            if !segment.is_empty() {
                out.push(segment.to_string());
            }
            current.clear();
        } else {
            current.push(c);
        }
    }
    let segment = current.trim();
    if !segment.is_empty() {
        out.push(segment.to_string());
    }
    out
}

/// Fallback tokenizer for raw text: CJK characters become single-character
/// tokens, alphanumeric runs stay together, everything else is its own token.
pub fn tokenize_fallback(text: &str) -> Vec<String> {
    let mut tokens = Vec::new();
    let mut run = String::new();
    let flush = |run: &mut String, tokens: &mut Vec<String>| {
        if !run.is_empty() {
            tokens.push(std::mem::take(run));
        }
    };
    for c in text.chars() {
        if c.is_whitespace() {
            flush(&mut run, &mut tokens);
        } else if is_cjk(c) {
            flush(&mut run, &mut tokens);
            tokens.push(c.to_string());
        } else if c.is_alphanumeric() {
            run.push(c);
        } else {
            flush(&mut run, &mut tokens);
            tokens.push(c.to_string());
        }
    }
    flush(&mut run, &mut tokens);
    tokens
}

fn is_cjk(c: char) -> bool {
    matches!(c as u32,
        0x4E00..=0x9FFF       // CJK Unified Ideographs
        | 0x3400..=0x4DBF     // Extension A
        | 0x20000..=0x2A6DF   // Extension B
        | 0xF900..=0xFAFF     // Compatibility Ideographs
        | 0x3040..=0x30FF     // Hiragana and Katakana
    )
}

/// Remove stopwords and tokens made purely of punctuation, symbol, or
/// separator characters (Unicode categories P*, S*, Z*). Order is preserved
/// and surviving tokens are unmodified.
pub fn filter_tokens(tokens: &[String], stopwords: &HashSet<String>) -> Vec<String> {
    tokens
        .iter()
        .filter(|t| !stopwords.contains(t.as_str()) && !is_ignorable(t))
        .cloned()
        .collect()
}

fn is_ignorable(token: &str) -> bool {
    token.chars().all(is_filterable_char)
}

fn is_filterable_char(c: char) -> bool {
    use GeneralCategory::*;
    c.is_whitespace()
        || matches!(
            get_general_category(c),
            ConnectorPunctuation
                | DashPunctuation
                | OpenPunctuation
                | ClosePunctuation
                | InitialPunctuation
                | FinalPunctuation
                | OtherPunctuation
                | MathSymbol
                | CurrencySymbol
                | ModifierSymbol
                | OtherSymbol
                | SpaceSeparator
                | LineSeparator
                | ParagraphSeparator
        )
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn set(words: &[&str]) -> HashSet<String> {
        words.iter().map(|s| s.to_string()).collect()
    }

    fn strs(words: &[&str]) -> Vec<String> {
        words.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn filter_removes_stopwords_and_punctuation() {
        let tokens = strs(&["我", "爱", "，", "你"]);
        assert_eq!(filter_tokens(&tokens, &set(&["我"])), strs(&["爱", "你"]));
    }

    #[test]
    fn filter_empty_is_empty() {
        assert_eq!(filter_tokens(&[], &HashSet::new()), Vec::<String>::new());
    }

    #[test]
    fn filter_identity_without_stopwords() {
        let tokens = strs(&["hello"]);
        assert_eq!(filter_tokens(&tokens, &HashSet::new()), tokens);
    }

    #[test]
    fn filter_is_idempotent() {
        let tokens = strs(&["a", "。", "b", "--", "$", "c"]);
        let stop = set(&["b"]);
        let once = filter_tokens(&tokens, &stop);
        let twice = filter_tokens(&once, &stop);
        assert_eq!(once, twice);
    }

    #[test]
    fn fallback_tokenizer_mixes_cjk_and_latin() {
        assert_eq!(
            tokenize_fallback("今天ABC下雨"),
            strs(&["今", "天", "ABC", "下", "雨"])
        );
        assert_eq!(tokenize_fallback("Hello, world"), strs(&["Hello", ",", "world"]));
        assert_eq!(tokenize_fallback(""), Vec::<String>::new());
    }

    #[test]
    fn sentence_split_on_default_delimiters() {
        let config = PreprocessConfig::default();
        assert_eq!(
            split_sentences("今天下雨。明天晴。", &config.sentence_delimiters),
            strs(&["今天下雨", "明天晴"])
        );
    }

    fn write_jsonl(lines: &[&str]) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        for line in lines {
            writeln!(f, "{line}").unwrap();
        }
        f.flush().unwrap();
        f
    }

    #[test]
    fn load_pretokenized_document() {
        let f = write_jsonl(&[r#"{"id":"d1","sentences":[["深度","学习"],["图","模型"]]}"#]);
        let load = load_corpus(f.path(), &PreprocessConfig::default()).unwrap();
        assert_eq!(load.documents.len(), 1);
        let doc = &load.documents[0];
        assert_eq!(doc.id, "d1");
        assert_eq!(doc.sentences.len(), 2);
        assert_eq!(doc.sentences[0].tokens, strs(&["深度", "学习"]));
        assert_eq!(doc.sentences[1].tokens, strs(&["图", "模型"]));
        assert_eq!(doc.sentences[1].index, 1);
    }

    #[test]
    fn load_raw_text_document() {
        let f = write_jsonl(&[r#"{"id":"d2","text":"今天下雨。明天晴。"}"#]);
        let load = load_corpus(f.path(), &PreprocessConfig::default()).unwrap();
        let doc = &load.documents[0];
        assert_eq!(doc.sentences.len(), 2);
        assert_eq!(doc.sentences[0].raw, "今天下雨");
        assert_eq!(doc.sentences[0].tokens, strs(&["今", "天", "下", "雨"]));
        assert_eq!(doc.sentences[1].raw, "明天晴");
    }

    #[test]
    fn load_empty_file() {
        let f = write_jsonl(&[]);
        let load = load_corpus(f.path(), &PreprocessConfig::default()).unwrap();
        assert!(load.documents.is_empty());
        assert!(load.skipped.is_empty());
        assert!(load.malformed.is_empty());
    }

    #[test]
    fn line_accounting_matches_input() {
        let f = write_jsonl(&[
            r#"{"id":"ok","sentences":[["a"]]}"#,
            r#"not json"#,
            r#"{"id":"empty","sentences":[["。"]]}"#,
            r#"{"id":"none"}"#,
        ]);
        let load = load_corpus(f.path(), &PreprocessConfig::default()).unwrap();
        assert_eq!(load.documents.len(), 1);
        assert_eq!(load.skipped, vec!["empty".to_string()]);
        assert_eq!(load.malformed.len(), 2);
        assert_eq!(
            load.documents.len() + load.skipped.len() + load.malformed.len(),
            4
        );
        assert_eq!(load.malformed[0].line, 2);
        assert_eq!(load.malformed[1].line, 4);
    }

    #[test]
    fn summary_field_becomes_reference() {
        let f = write_jsonl(&[r#"{"id":"d","sentences":[["a"]],"summary":["gold"]}"#]);
        let load = load_corpus(f.path(), &PreprocessConfig::default()).unwrap();
        assert_eq!(load.documents[0].reference, Some(strs(&["gold"])));
    }

    #[test]
    fn min_sentence_tokens_drops_short_sentences() {
        let f = write_jsonl(&[r#"{"id":"d","sentences":[["a"],["b","c"]]}"#]);
        let config = PreprocessConfig {
            min_sentence_tokens: 2,
            ..PreprocessConfig::default()
        };
        let load = load_corpus(f.path(), &config).unwrap();
        let doc = &load.documents[0];
        assert_eq!(doc.sentences.len(), 1);
        assert_eq!(doc.sentences[0].tokens, strs(&["b", "c"]));
        assert_eq!(doc.sentences[0].index, 0);
    }

    #[test]
    fn stopword_file_ignores_comments() {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        writeln!(f, "# comment").unwrap();
        writeln!(f, "的").unwrap();
        writeln!(f).unwrap();
        writeln!(f, "the").unwrap();
        f.flush().unwrap();
        let stops = load_stopwords(f.path()).unwrap();
        assert_eq!(stops, set(&["的", "the"]));
    }
}
