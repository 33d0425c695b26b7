//! Run configuration: the union of every stage's settings, a system
//! selector, and one master seed. Serializes to a flat `key = value` file
//! that round-trips losslessly; the CLI reads the file first and applies
//! flag overrides on top.

use std::collections::BTreeSet;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use crate::baselines::TextRankParams;
use crate::corpus::PreprocessConfig;
use crate::embed::TrainConfig;
use crate::error::{Error, Result};
use crate::graph::{GraphConfig, NodeVocabulary};
use crate::rank::{RankConfig, Similarity};
use crate::rouge::{RougeConfig, RougeUnit};
use crate::walks::{MetapathSchema, WalkConfig};

/// Which summarizer runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SystemKind {
    /// Graph embeddings only.
    Hge,
    /// Graph embeddings concatenated with external sentence vectors.
    HgeExternal,
    Lead,
    TextRank,
    Oracle,
}

impl fmt::Display for SystemKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            SystemKind::Hge => "hge",
            SystemKind::HgeExternal => "hge+external",
            SystemKind::Lead => "lead",
            SystemKind::TextRank => "textrank",
            SystemKind::Oracle => "oracle",
        };
        write!(f, "{name}")
    }
}

impl FromStr for SystemKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "hge" => Ok(SystemKind::Hge),
            "hge+external" | "hge-external" => Ok(SystemKind::HgeExternal),
            "lead" => Ok(SystemKind::Lead),
            "textrank" => Ok(SystemKind::TextRank),
            "oracle" => Ok(SystemKind::Oracle),
            other => Err(Error::InvalidConfig(format!("unknown system {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub system: SystemKind,
    /// Master seed; per-document walk and training seeds derive from it.
    pub seed: u64,
    pub preprocess: PreprocessConfig,
    pub graph: GraphConfig,
    pub walks: WalkConfig,
    pub train: TrainConfig,
    pub rank: RankConfig,
    pub rouge: RougeConfig,
    pub textrank: TextRankParams,
    /// Directory holding `<doc_id>.vec` files for the hge+external system.
    pub external_vectors_dir: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        let seed = 42;
        RunConfig {
            system: SystemKind::Hge,
            seed,
            preprocess: PreprocessConfig::default(),
            graph: GraphConfig::default(),
            walks: WalkConfig {
                seed,
                ..WalkConfig::default()
            },
            train: TrainConfig {
                seed,
                ..TrainConfig::default()
            },
            rank: RankConfig::default(),
            rouge: RougeConfig::default(),
            textrank: TextRankParams::default(),
            external_vectors_dir: None,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        self.preprocess.validate()?;
        self.graph.validate()?;
        self.walks.validate()?;
        self.train.validate()?;
        self.rank.validate()?;
        if !(0.0 < self.textrank.damping && self.textrank.damping < 1.0) {
            return Err(Error::InvalidConfig("damping must be in (0, 1)".into()));
        }
        if self.textrank.max_iterations < 1 {
            return Err(Error::InvalidConfig("max_iterations must be >= 1".into()));
        }
        let uses_embeddings = matches!(self.system, SystemKind::Hge | SystemKind::HgeExternal);
        if uses_embeddings && !self.graph.use_ws {
            return Err(Error::InvalidConfig(
                "sentence ranking over graph embeddings requires W-S edges (use_ws)".into(),
            ));
        }
        if self.system == SystemKind::HgeExternal && self.external_vectors_dir.is_none() {
            return Err(Error::InvalidConfig(
                "hge+external requires external_vectors_dir".into(),
            ));
        }
        Ok(())
    }

    /// Serialize as a flat `key = value` file covering every setting.
    pub fn to_kv(&self) -> String {
        let mut out = String::new();
        let mut put = |key: &str, value: String| {
            out.push_str(key);
            out.push_str(" = ");
            out.push_str(&value);
            out.push('\n');
        };
        put("system", self.system.to_string());
        put("seed", self.seed.to_string());
        put(
            "stopword_path",
            self.preprocess
                .stopword_path
                .as_ref()
                .map(|p| p.display().to_string())
                .unwrap_or_default(),
        );
        put(
            "min_sentence_tokens",
            self.preprocess.min_sentence_tokens.to_string(),
        );
        put(
            "sentence_delimiters",
            self.preprocess.sentence_delimiters.iter().collect(),
        );
        put("ww_window", self.graph.ww_window.to_string());
        put("ss_window", self.graph.ss_window.to_string());
        put("use_ww", self.graph.use_ww.to_string());
        put("use_ws", self.graph.use_ws.to_string());
        put("use_ss", self.graph.use_ss.to_string());
        put("unweighted", self.graph.unweighted.to_string());
        put(
            "node_vocabulary",
            match self.graph.node_vocabulary {
                NodeVocabulary::AllWords => "all".to_string(),
                NodeVocabulary::Keywords(k) => format!("keywords:{k}"),
            },
        );
        put("walks_per_node", self.walks.walks_per_node.to_string());
        put("walk_length", self.walks.walk_length.to_string());
        put(
            "schemas",
            self.walks
                .schemas
                .iter()
                .map(MetapathSchema::name)
                .collect::<Vec<_>>()
                .join(","),
        );
        put("dim", self.train.dim.to_string());
        put("context_window", self.train.window.to_string());
        put("negatives", self.train.negatives.to_string());
        put("epochs", self.train.epochs.to_string());
        put("lr_start", self.train.lr_start.to_string());
        put("lr_end", self.train.lr_end.to_string());
        put("noise_power", self.train.noise_power.to_string());
        put("beta", self.rank.beta.to_string());
        put("lambda1", self.rank.lambda1.to_string());
        put("lambda2", self.rank.lambda2.to_string());
        put("top_k", self.rank.k.to_string());
        put(
            "similarity",
            match self.rank.similarity {
                Similarity::Dot => "dot".to_string(),
                Similarity::Cosine => "cosine".to_string(),
            },
        );
        put("normalize_parts", self.rank.normalize_parts.to_string());
        put("damping", self.textrank.damping.to_string());
        put("tolerance", self.textrank.tolerance.to_string());
        put("max_iterations", self.textrank.max_iterations.to_string());
        put(
            "rouge_unit",
            match self.rouge.unit {
                RougeUnit::Character => "character".to_string(),
                RougeUnit::Token => "token".to_string(),
            },
        );
        put("lowercase", self.rouge.lowercase.to_string());
        put(
            "external_vectors_dir",
            self.external_vectors_dir
                .as_ref()
                .map(|p| p.display().to_string())
                .unwrap_or_default(),
        );
        out
    }

    /// Parse a flat key=value file; unset keys keep their defaults. `#`
    /// lines and blank lines are ignored.
    pub fn from_kv(text: &str) -> Result<RunConfig> {
        let mut config = RunConfig::default();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(Error::InvalidConfig(format!(
                    "line {}: expected key = value, got {line:?}",
                    i + 1
                )));
            };
            config.set(key.trim(), value.trim())?;
        }
        // The master seed is the one source of randomness.
        config.walks.seed = config.seed;
        config.train.seed = config.seed;
        config.walks.unweighted = config.graph.unweighted;
        Ok(config)
    }

    /// Set a single field from its config-file key.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        fn parse<T: FromStr>(key: &str, value: &str) -> Result<T> {
            value.parse().map_err(|_| {
                Error::InvalidConfig(format!("bad value {value:?} for key {key:?}"))
            })
        }
        match key {
            "system" => self.system = value.parse()?,
            "seed" => self.seed = parse(key, value)?,
            "stopword_path" => {
                self.preprocess.stopword_path =
                    (!value.is_empty()).then(|| PathBuf::from(value));
            }
            "min_sentence_tokens" => self.preprocess.min_sentence_tokens = parse(key, value)?,
            "sentence_delimiters" => {
                let set: BTreeSet<char> = value.chars().collect();
                if set.is_empty() {
                    return Err(Error::InvalidConfig(
                        "sentence_delimiters must not be empty".into(),
                    ));
                }
                self.preprocess.sentence_delimiters = set;
            }
            "ww_window" => self.graph.ww_window = parse(key, value)?,
            "ss_window" => self.graph.ss_window = parse(key, value)?,
            "use_ww" => self.graph.use_ww = parse(key, value)?,
            "use_ws" => self.graph.use_ws = parse(key, value)?,
            "use_ss" => self.graph.use_ss = parse(key, value)?,
            "unweighted" => {
                let flag = parse(key, value)?;
                self.graph.unweighted = flag;
                self.walks.unweighted = flag;
            }
            "node_vocabulary" => {
                self.graph.node_vocabulary = match value {
                    "all" => NodeVocabulary::AllWords,
                    other => match other.strip_prefix("keywords:") {
                        Some(k) => NodeVocabulary::Keywords(parse(key, k)?),
                        None => {
                            return Err(Error::InvalidConfig(format!(
                                "node_vocabulary must be `all` or `keywords:<k>`, got {other:?}"
                            )))
                        }
                    },
                };
            }
            "walks_per_node" => self.walks.walks_per_node = parse(key, value)?,
            "walk_length" => self.walks.walk_length = parse(key, value)?,
            "schemas" => {
                self.walks.schemas = value
                    .split(',')
                    .map(|s| MetapathSchema::parse(s.trim()))
                    .collect::<Result<Vec<_>>>()?;
            }
            "dim" => self.train.dim = parse(key, value)?,
            "context_window" => self.train.window = parse(key, value)?,
            "negatives" => self.train.negatives = parse(key, value)?,
            "epochs" => self.train.epochs = parse(key, value)?,
            "lr_start" => self.train.lr_start = parse(key, value)?,
            "lr_end" => self.train.lr_end = parse(key, value)?,
            "noise_power" => self.train.noise_power = parse(key, value)?,
            "beta" => self.rank.beta = parse(key, value)?,
            "lambda1" => self.rank.lambda1 = parse(key, value)?,
            "lambda2" => self.rank.lambda2 = parse(key, value)?,
            "top_k" => self.rank.k = parse(key, value)?,
            "similarity" => {
                self.rank.similarity = match value.to_ascii_lowercase().as_str() {
                    "dot" => Similarity::Dot,
                    "cosine" => Similarity::Cosine,
                    other => {
                        return Err(Error::InvalidConfig(format!(
                            "similarity must be dot or cosine, got {other:?}"
                        )))
                    }
                };
            }
            "normalize_parts" => self.rank.normalize_parts = parse(key, value)?,
            "damping" => self.textrank.damping = parse(key, value)?,
            "tolerance" => self.textrank.tolerance = parse(key, value)?,
            "max_iterations" => self.textrank.max_iterations = parse(key, value)?,
            "rouge_unit" => {
                self.rouge.unit = match value.to_ascii_lowercase().as_str() {
                    "character" | "char" => RougeUnit::Character,
                    "token" => RougeUnit::Token,
                    other => {
                        return Err(Error::InvalidConfig(format!(
                            "rouge_unit must be character or token, got {other:?}"
                        )))
                    }
                };
            }
            "lowercase" => self.rouge.lowercase = parse(key, value)?,
            "external_vectors_dir" => {
                self.external_vectors_dir = (!value.is_empty()).then(|| PathBuf::from(value));
            }
            other => {
                return Err(Error::InvalidConfig(format!("unknown config key {other:?}")));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_round_trips() {
        let config = RunConfig::default();
        let text = config.to_kv();
        let back = RunConfig::from_kv(&text).unwrap();
        assert_eq!(back, config);
        assert_eq!(back.to_kv(), text);
    }

    #[test]
    fn modified_config_round_trips() {
        let mut config = RunConfig::default();
        config.set("system", "textrank").unwrap();
        config.set("seed", "7").unwrap();
        config.set("beta", "0.45").unwrap();
        config.set("node_vocabulary", "keywords:20").unwrap();
        config.set("schemas", "s-w-s,w-w").unwrap();
        config.set("use_ss", "false").unwrap();
        config.set("unweighted", "true").unwrap();
        config.set("lr_end", "0.00025").unwrap();
        // from_kv syncs the derived seed fields the same way the file path does.
        config.walks.seed = config.seed;
        config.train.seed = config.seed;
        let text = config.to_kv();
        let back = RunConfig::from_kv(&text).unwrap();
        assert_eq!(back, config);
        assert_eq!(back.to_kv(), text);
    }

    #[test]
    fn comments_and_blank_lines_are_ignored() {
        let text = "# a comment\n\nseed = 9\n";
        let config = RunConfig::from_kv(text).unwrap();
        assert_eq!(config.seed, 9);
    }

    #[test]
    fn unknown_key_is_an_error() {
        assert!(RunConfig::from_kv("bogus = 1\n").is_err());
        assert!(RunConfig::from_kv("seed: 1\n").is_err());
    }

    #[test]
    fn validation_catches_cross_field_problems() {
        let mut config = RunConfig::default();
        config.set("use_ws", "false").unwrap();
        assert!(config.validate().is_err());

        let mut config = RunConfig::default();
        config.set("system", "hge+external").unwrap();
        assert!(config.validate().is_err());
        config
            .set("external_vectors_dir", "/tmp/vectors")
            .unwrap();
        assert!(config.validate().is_ok());
    }

    #[test]
    fn system_names_parse() {
        for name in ["hge", "hge+external", "lead", "textrank", "oracle"] {
            let system: SystemKind = name.parse().unwrap();
            assert_eq!(system.to_string(), name);
        }
        assert!("pagerank".parse::<SystemKind>().is_err());
    }
}
