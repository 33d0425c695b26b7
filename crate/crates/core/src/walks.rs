//! Metapath-constrained random walks over a heterogeneous graph.
//!
//! A metapath schema is an ordered pattern of node kinds; walks visit the
//! kind the schema demands at each position, extending the schema cyclically
//! (without repeating the first kind at the seam) up to the walk length.
//! The walk corpus is the training input for the skip-gram model.

use std::collections::HashSet;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{EdgeType, HeteroGraph, NodeKind};
use crate::seeding::derive_seed;

/// An ordered pattern of node kinds constraining a walk.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MetapathSchema {
    name: String,
    kinds: Vec<NodeKind>,
}

impl MetapathSchema {
    /// Build a schema from a kind sequence of length >= 2.
    pub fn new(kinds: Vec<NodeKind>) -> Result<Self> {
        if kinds.len() < 2 {
            return Err(Error::InvalidConfig(
                "metapath schema needs at least two kinds".into(),
            ));
        }
        let name = kinds
            .iter()
            .map(|k| match k {
                NodeKind::Word => "w",
                NodeKind::Sentence => "s",
            })
            .collect::<Vec<_>>()
            .join("-");
        Ok(MetapathSchema { name, kinds })
    }

    /// Parse a dash-separated kind string such as `s-w-s`.
    pub fn parse(text: &str) -> Result<Self> {
        let kinds = text
            .split('-')
            .map(|part| match part.trim() {
                "w" | "W" => Ok(NodeKind::Word),
                "s" | "S" => Ok(NodeKind::Sentence),
                other => Err(Error::InvalidConfig(format!(
                    "unknown node kind {other:?} in schema {text:?}"
                ))),
            })
            .collect::<Result<Vec<_>>>()?;
        MetapathSchema::new(kinds)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn kinds(&self) -> &[NodeKind] {
        &self.kinds
    }

    /// The repeating unit: the full kind list, dropping the last element when
    /// it equals the first so the seam kind is not doubled.
    pub fn cycle(&self) -> &[NodeKind] {
        if self.kinds.len() > 1 && self.kinds.first() == self.kinds.last() {
            &self.kinds[..self.kinds.len() - 1]
        } else {
            &self.kinds
        }
    }

    /// Node kind demanded at walk position `pos` under cyclic extension.
    pub fn kind_at(&self, pos: usize) -> NodeKind {
        let cycle = self.cycle();
        cycle[pos % cycle.len()]
    }
}

impl fmt::Display for MetapathSchema {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name)
    }
}

/// The default schema set: every node kind is an origin and every edge
/// family is exercised.
pub fn default_schemas() -> Vec<MetapathSchema> {
    ["s-w-s", "w-s-w", "s-s", "w-w"]
        .iter()
        .map(|s| MetapathSchema::parse(s).expect("static schema"))
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct WalkConfig {
    pub walks_per_node: usize,
    /// Maximum walk length in nodes. Walks truncate early when no
    /// conforming neighbor exists.
    pub walk_length: usize,
    pub schemas: Vec<MetapathSchema>,
    pub seed: u64,
    /// Sample transitions uniformly instead of proportionally to edge weight.
    pub unweighted: bool,
}

impl Default for WalkConfig {
    fn default() -> Self {
        WalkConfig {
            walks_per_node: 10,
            walk_length: 40,
            schemas: default_schemas(),
            seed: 42,
            unweighted: false,
        }
    }
}

impl WalkConfig {
    pub fn validate(&self) -> Result<()> {
        if self.walks_per_node < 1 {
            return Err(Error::InvalidConfig("walks_per_node must be >= 1".into()));
        }
        if self.walk_length < 2 {
            return Err(Error::InvalidConfig("walk_length must be >= 2".into()));
        }
        if self.schemas.is_empty() {
            return Err(Error::InvalidConfig("at least one schema required".into()));
        }
        Ok(())
    }
}

/// One metapath instance: node indices into the generating graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Walk {
    pub nodes: Vec<usize>,
    /// Name of the generating schema.
    pub schema: String,
}

/// Generate the walk corpus: for each schema and each node matching the
/// schema's first kind, `walks_per_node` walks in canonical serial order
/// (schema-major, then node index, then repeat index).
pub fn generate_walks(g: &HeteroGraph, config: &WalkConfig) -> Result<Vec<Walk>> {
    config.validate()?;
    if g.node_count() == 0 {
        return Err(Error::InvalidConfig("graph has no nodes".into()));
    }
    let mut walks = Vec::new();
    let mut warned: HashSet<(usize, EdgeType)> = HashSet::new();
    for (si, schema) in config.schemas.iter().enumerate() {
        let origin_kind = schema.kinds()[0];
        for v in 0..g.node_count() {
            if g.kind(v) != origin_kind {
                continue;
            }
            let mut rng =
                ChaCha8Rng::seed_from_u64(derive_seed(config.seed, si as u64, v as u64));
            for _ in 0..config.walks_per_node {
                walks.push(walk_from(g, v, si, schema, config, &mut rng, &mut warned));
            }
        }
    }
    Ok(walks)
}

fn walk_from(
    g: &HeteroGraph,
    origin: usize,
    schema_index: usize,
    schema: &MetapathSchema,
    config: &WalkConfig,
    rng: &mut ChaCha8Rng,
    warned: &mut HashSet<(usize, EdgeType)>,
) -> Walk {
    let mut nodes = vec![origin];
    let mut current = origin;
    for pos in 1..config.walk_length {
        let next_kind = schema.kind_at(pos);
        let family = EdgeType::between(g.kind(current), next_kind);
        if g.family_edge_count(family) == 0 {
            if warned.insert((schema_index, family)) {
                log::warn!(
                    "schema {} needs {} edges but the graph has none; walks truncate",
                    schema.name(),
                    family.label()
                );
            }
            break;
        }
        match step(g, current, next_kind, rng, config.unweighted) {
            Some(next) => {
                nodes.push(next);
                current = next;
            }
            None => break,
        }
    }
    Walk {
        nodes,
        schema: schema.name().to_string(),
    }
}

/// One walk step: a neighbor of `v` with kind `next_kind`, sampled with
/// probability proportional to edge weight. None when no neighbor qualifies.
pub fn transition(
    g: &HeteroGraph,
    v: usize,
    next_kind: NodeKind,
    rng: &mut ChaCha8Rng,
) -> Option<usize> {
    step(g, v, next_kind, rng, false)
}

fn step(
    g: &HeteroGraph,
    v: usize,
    next_kind: NodeKind,
    rng: &mut ChaCha8Rng,
    unweighted: bool,
) -> Option<usize> {
    let candidates = g.neighbors_of_kind(v, next_kind);
    if candidates.is_empty() {
        return None;
    }
    if candidates.len() == 1 {
        return Some(candidates[0].0);
    }
    let total: f64 = if unweighted {
        candidates.len() as f64
    } else {
        candidates.iter().map(|&(_, w)| w).sum()
    };
    let target = rng.random::<f64>() * total;
    let mut cumulative = 0.0;
    for &(n, w) in &candidates {
        cumulative += if unweighted { 1.0 } else { w };
        if target < cumulative {
            return Some(n);
        }
    }
    Some(candidates[candidates.len() - 1].0)
}

/// Walk-corpus dump: one walk per line, space-separated `w:<word>` /
/// `s:<index>` tokens.
pub fn walks_to_text(g: &HeteroGraph, walks: &[Walk]) -> String {
    let mut out = String::new();
    for walk in walks {
        let line = walk
            .nodes
            .iter()
            .map(|&n| g.node(n).token())
            .collect::<Vec<_>>()
            .join(" ");
        out.push_str(&line);
        out.push('\n');
    }
    out
}

/// Check every consecutive pair of every walk against the schema's kind
/// pattern and the graph's edge families. Returns the number of violations.
pub fn conformance_violations(
    g: &HeteroGraph,
    walks: &[Walk],
    schemas: &[MetapathSchema],
) -> usize {
    let mut violations = 0;
    for walk in walks {
        let Some(schema) = schemas.iter().find(|s| s.name() == walk.schema) else {
            violations += walk.nodes.len();
            continue;
        };
        for (pos, &node) in walk.nodes.iter().enumerate() {
            if g.kind(node) != schema.kind_at(pos) {
                violations += 1;
            }
        }
        for pair in walk.nodes.windows(2) {
            let (u, v) = (pair[0], pair[1]);
            let family = EdgeType::between(g.kind(u), g.kind(v));
            let connected = g
                .neighbors_of_kind(u, g.kind(v))
                .iter()
                .any(|&(n, _)| n == v);
            if !connected || g.family_edge_count(family) == 0 {
                violations += 1;
            }
        }
    }
    violations
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build_graph, GraphConfig, NodeId};
    use crate::corpus::{Document, Sentence};

    fn doc(sentences: &[&[&str]]) -> Document {
        Document {
            id: "d".into(),
            sentences: sentences
                .iter()
                .enumerate()
                .map(|(index, toks)| Sentence {
                    index,
                    tokens: toks.iter().map(|t| t.to_string()).collect(),
                    raw: toks.join(" "),
                })
                .collect(),
            reference: None,
        }
    }

    #[test]
    fn schema_cycle_drops_seam() {
        let sws = MetapathSchema::parse("s-w-s").unwrap();
        assert_eq!(sws.cycle(), &[NodeKind::Sentence, NodeKind::Word]);
        assert_eq!(sws.kind_at(0), NodeKind::Sentence);
        assert_eq!(sws.kind_at(1), NodeKind::Word);
        assert_eq!(sws.kind_at(2), NodeKind::Sentence);
        assert_eq!(sws.kind_at(3), NodeKind::Word);

        let ss = MetapathSchema::parse("s-s").unwrap();
        assert_eq!(ss.cycle(), &[NodeKind::Sentence]);
        assert_eq!(ss.kind_at(7), NodeKind::Sentence);

        let ws = MetapathSchema::parse("w-s").unwrap();
        assert_eq!(ws.cycle(), &[NodeKind::Word, NodeKind::Sentence]);
    }

    #[test]
    fn schema_parse_rejects_garbage() {
        assert!(MetapathSchema::parse("s").is_err());
        assert!(MetapathSchema::parse("s-x").is_err());
    }

    #[test]
    fn config_validation() {
        for (walks_per_node, walk_length, schemas) in [
            (0, 40, default_schemas()),
            (1, 1, default_schemas()),
            (1, 40, vec![]),
        ] {
            let config = WalkConfig {
                walks_per_node,
                walk_length,
                schemas,
                ..WalkConfig::default()
            };
            assert!(config.validate().is_err());
        }
        assert!(WalkConfig::default().validate().is_ok());
    }

    #[test]
    fn walks_alternate_on_path_graph() {
        // a - S0 - b with WS edges only.
        let d = doc(&[&["a", "b"]]);
        let config = GraphConfig {
            use_ww: false,
            use_ss: false,
            ..GraphConfig::default()
        };
        let g = build_graph(&d, &config, None).unwrap();
        let walk_config = WalkConfig {
            walks_per_node: 20,
            walk_length: 5,
            schemas: vec![MetapathSchema::parse("s-w-s").unwrap()],
            seed: 7,
            unweighted: false,
        };
        let walks = generate_walks(&g, &walk_config).unwrap();
        assert_eq!(walks.len(), 20); // one sentence origin
        let s0 = g.node_index(&NodeId::Sentence(0)).unwrap();
        for walk in &walks {
            assert_eq!(walk.nodes.len(), 5);
            for (pos, &n) in walk.nodes.iter().enumerate() {
                if pos % 2 == 0 {
                    assert_eq!(n, s0);
                } else {
                    assert_eq!(g.kind(n), NodeKind::Word);
                }
            }
        }
    }

    #[test]
    fn isolated_node_truncates_immediately() {
        let d = doc(&[&["a"]]);
        let config = GraphConfig {
            use_ww: false,
            use_ws: true,
            use_ss: false,
            ..GraphConfig::default()
        };
        let g = build_graph(&d, &config, None).unwrap();
        // w-w walks from the word node: no WW edges exist, so length 1.
        let walk_config = WalkConfig {
            walks_per_node: 3,
            walk_length: 4,
            schemas: vec![MetapathSchema::parse("w-w").unwrap()],
            seed: 1,
            unweighted: false,
        };
        let walks = generate_walks(&g, &walk_config).unwrap();
        assert_eq!(walks.len(), 3);
        assert!(walks.iter().all(|w| w.nodes.len() == 1));
    }

    #[test]
    fn transition_follows_edge_weights() {
        // One sentence with "x" once and "y" three times: WS weights 1 and 3.
        let d = doc(&[&["x", "y", "y", "y"]]);
        let g = build_graph(&d, &GraphConfig::default(), None).unwrap();
        let s0 = 0;
        let y = g.word_node("y").unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let trials = 100_000;
        let mut y_hits = 0;
        for _ in 0..trials {
            if transition(&g, s0, NodeKind::Word, &mut rng) == Some(y) {
                y_hits += 1;
            }
        }
        let p = y_hits as f64 / trials as f64;
        assert!((p - 0.75).abs() < 0.02, "P(y) = {p}");
    }

    #[test]
    fn transition_with_no_candidate_is_none() {
        let d = doc(&[&["a"]]);
        let config = GraphConfig {
            use_ww: false,
            use_ss: false,
            ..GraphConfig::default()
        };
        let g = build_graph(&d, &config, None).unwrap();
        let a = g.word_node("a").unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert_eq!(transition(&g, a, NodeKind::Word, &mut rng), None);
        // Exactly one qualifying neighbor: always that neighbor.
        for _ in 0..10 {
            assert_eq!(transition(&g, a, NodeKind::Sentence, &mut rng), Some(0));
        }
    }

    #[test]
    fn corpus_is_deterministic_and_covers_origins() {
        let d = doc(&[&["a", "b"], &["b", "c"], &["c", "d"]]);
        let g = build_graph(&d, &GraphConfig::default(), None).unwrap();
        let config = WalkConfig {
            walks_per_node: 4,
            ..WalkConfig::default()
        };
        let w1 = generate_walks(&g, &config).unwrap();
        let w2 = generate_walks(&g, &config).unwrap();
        assert_eq!(w1, w2);

        // Every node starts walks_per_node walks per matching schema.
        for v in 0..g.node_count() {
            let matching = config
                .schemas
                .iter()
                .filter(|s| s.kinds()[0] == g.kind(v))
                .count();
            let origins = w1.iter().filter(|w| w.nodes[0] == v).count();
            assert_eq!(origins, config.walks_per_node * matching);
        }
    }

    #[test]
    fn generated_walks_conform() {
        let d = doc(&[&["a", "b", "c"], &["b", "d"], &["e"]]);
        let g = build_graph(&d, &GraphConfig::default(), None).unwrap();
        let config = WalkConfig::default();
        let walks = generate_walks(&g, &config).unwrap();
        assert_eq!(conformance_violations(&g, &walks, &config.schemas), 0);
    }
}
