//! Heterogeneous text graph: word and sentence nodes with typed, weighted,
//! undirected edges.
//!
//! Three edge families exist: word-word co-occurrence inside a sliding
//! window within each sentence, word-sentence containment (weighted by term
//! frequency), and sentence-sentence adjacency within a sentence window.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;

use crate::corpus::Document;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NodeKind {
    Word,
    Sentence,
}

impl fmt::Display for NodeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NodeKind::Word => write!(f, "word"),
            NodeKind::Sentence => write!(f, "sentence"),
        }
    }
}

/// A node: a distinct word surface form or a sentence position.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum NodeId {
    Word(String),
    Sentence(usize),
}

impl NodeId {
    pub fn kind(&self) -> NodeKind {
        match self {
            NodeId::Word(_) => NodeKind::Word,
            NodeId::Sentence(_) => NodeKind::Sentence,
        }
    }

    /// Compact token form used in walk and embedding dumps: `w:<word>` or `s:<index>`.
    pub fn token(&self) -> String {
        match self {
            NodeId::Word(w) => format!("w:{w}"),
            NodeId::Sentence(i) => format!("s:{i}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum EdgeType {
    WW,
    WS,
    SS,
}

impl EdgeType {
    pub const ALL: [EdgeType; 3] = [EdgeType::WW, EdgeType::WS, EdgeType::SS];

    pub(crate) fn slot(self) -> usize {
        match self {
            EdgeType::WW => 0,
            EdgeType::WS => 1,
            EdgeType::SS => 2,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            EdgeType::WW => "ww",
            EdgeType::WS => "ws",
            EdgeType::SS => "ss",
        }
    }

    /// The edge family connecting two node kinds.
    pub fn between(a: NodeKind, b: NodeKind) -> EdgeType {
        match (a, b) {
            (NodeKind::Word, NodeKind::Word) => EdgeType::WW,
            (NodeKind::Sentence, NodeKind::Sentence) => EdgeType::SS,
            _ => EdgeType::WS,
        }
    }
}

/// Which words become graph nodes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NodeVocabulary {
    /// Every distinct word in the document.
    AllWords,
    /// Only the document's top-k keywords; k is resolved by the caller.
    Keywords(usize),
}

#[derive(Debug, Clone, PartialEq)]
pub struct GraphConfig {
    /// Word pairs at token distance < ww_window within a sentence are connected. Must be >= 2.
    pub ww_window: usize,
    /// Sentence pairs at index distance <= ss_window are connected. Must be >= 1.
    pub ss_window: usize,
    pub use_ww: bool,
    pub use_ws: bool,
    pub use_ss: bool,
    /// Force every edge weight to 1 instead of co-occurrence counts.
    pub unweighted: bool,
    pub node_vocabulary: NodeVocabulary,
}

impl Default for GraphConfig {
    fn default() -> Self {
        GraphConfig {
            ww_window: 5,
            ss_window: 1,
            use_ww: true,
            use_ws: true,
            use_ss: true,
            unweighted: false,
            node_vocabulary: NodeVocabulary::AllWords,
        }
    }
}

impl GraphConfig {
    pub fn validate(&self) -> Result<()> {
        if self.ww_window < 2 {
            return Err(Error::InvalidConfig("ww_window must be >= 2".into()));
        }
        if self.ss_window < 1 {
            return Err(Error::InvalidConfig("ss_window must be >= 1".into()));
        }
        if !(self.use_ww || self.use_ws || self.use_ss) {
            return Err(Error::InvalidConfig(
                "at least one edge family must be enabled".into(),
            ));
        }
        if let NodeVocabulary::Keywords(k) = self.node_vocabulary {
            if k < 1 {
                return Err(Error::InvalidConfig("keyword count must be >= 1".into()));
            }
        }
        Ok(())
    }
}

/// The heterogeneous graph of one document.
///
/// Sentence nodes occupy indices `0..num_sentences` in source order; word
/// nodes follow in first-occurrence order. Adjacency is symmetric, has no
/// self-loops, and merges parallel co-occurrences into accumulated weights.
#[derive(Debug, Clone)]
pub struct HeteroGraph {
    doc_id: String,
    nodes: Vec<NodeId>,
    num_sentences: usize,
    word_index: HashMap<String, usize>,
    /// Per node, per edge family: (neighbor index, weight), sorted by neighbor.
    adj: Vec<[Vec<(usize, f64)>; 3]>,
    /// Undirected edge count per family.
    edge_counts: [usize; 3],
}

impl HeteroGraph {
    /// Assemble a graph from an explicit typed edge list. Duplicate edges
    /// accumulate weight; self-loops and kind/family mismatches are errors.
    pub fn from_typed_edges(
        doc_id: &str,
        nodes: Vec<NodeId>,
        edges: &[(usize, usize, EdgeType, f64)],
    ) -> Result<Self> {
        let num_sentences = nodes
            .iter()
            .take_while(|n| n.kind() == NodeKind::Sentence)
            .count();
        // Sentence nodes must form the prefix, in index order.
        for (i, node) in nodes.iter().enumerate() {
            match node {
                NodeId::Sentence(s) if i < num_sentences && *s == i => {}
                NodeId::Sentence(_) => {
                    return Err(Error::InvalidConfig(
                        "sentence nodes must occupy the node-list prefix in order".into(),
                    ))
                }
                NodeId::Word(_) => {}
            }
        }
        let mut word_index = HashMap::new();
        for (i, node) in nodes.iter().enumerate() {
            if let NodeId::Word(w) = node {
                if word_index.insert(w.clone(), i).is_some() {
                    return Err(Error::InvalidConfig(format!("duplicate word node {w:?}")));
                }
            }
        }

        let mut merged: BTreeMap<(usize, usize, usize), f64> = BTreeMap::new();
        for &(u, v, t, w) in edges {
            if u >= nodes.len() || v >= nodes.len() {
                return Err(Error::UnknownNode(format!("edge endpoint {}", u.max(v))));
            }
            if u == v {
                return Err(Error::InvalidConfig("self-loop edge".into()));
            }
            if EdgeType::between(nodes[u].kind(), nodes[v].kind()) != t {
                return Err(Error::InvalidConfig(format!(
                    "edge type {} cannot connect {} and {}",
                    t.label(),
                    nodes[u].kind(),
                    nodes[v].kind()
                )));
            }
            if !(w.is_finite() && w > 0.0) {
                return Err(Error::InvalidConfig("edge weight must be positive".into()));
            }
            let key = (t.slot(), u.min(v), u.max(v));
            *merged.entry(key).or_insert(0.0) += w;
        }

        let mut adj: Vec<[Vec<(usize, f64)>; 3]> = vec![Default::default(); nodes.len()];
        let mut edge_counts = [0usize; 3];
        for (&(slot, u, v), &w) in &merged {
            adj[u][slot].push((v, w));
            adj[v][slot].push((u, w));
            edge_counts[slot] += 1;
        }
        for lists in &mut adj {
            for list in lists.iter_mut() {
                list.sort_by_key(|&(n, _)| n);
            }
        }

        Ok(HeteroGraph {
            doc_id: doc_id.to_string(),
            nodes,
            num_sentences,
            word_index,
            adj,
            edge_counts,
        })
    }

    pub fn doc_id(&self) -> &str {
        &self.doc_id
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn num_sentences(&self) -> usize {
        self.num_sentences
    }

    pub fn node(&self, index: usize) -> &NodeId {
        &self.nodes[index]
    }

    pub fn kind(&self, index: usize) -> NodeKind {
        self.nodes[index].kind()
    }

    pub fn node_index(&self, id: &NodeId) -> Option<usize> {
        match id {
            NodeId::Sentence(i) => (*i < self.num_sentences).then_some(*i),
            NodeId::Word(w) => self.word_index.get(w).copied(),
        }
    }

    /// Node index of sentence `i`. Sentence nodes occupy the prefix.
    pub fn sentence_node(&self, i: usize) -> Option<usize> {
        (i < self.num_sentences).then_some(i)
    }

    pub fn word_node(&self, word: &str) -> Option<usize> {
        self.word_index.get(word).copied()
    }

    /// Undirected edge count for one family.
    pub fn family_edge_count(&self, t: EdgeType) -> usize {
        self.edge_counts[t.slot()]
    }

    /// Weighted degree of a node over one family.
    pub fn family_degree(&self, index: usize, t: EdgeType) -> f64 {
        self.adj[index][t.slot()].iter().map(|&(_, w)| w).sum()
    }

    /// Neighbors of `index` whose kind is `kind`, ordered by node index.
    ///
    /// Every edge family is consulted; the typing invariants make this
    /// equivalent to reading the single family connecting the two kinds.
    pub fn neighbors_of_kind(&self, index: usize, kind: NodeKind) -> Vec<(usize, f64)> {
        let mut out: Vec<(usize, f64)> = self.adj[index]
            .iter()
            .flatten()
            .filter(|&&(n, _)| self.nodes[n].kind() == kind)
            .copied()
            .collect();
        out.sort_by_key(|&(n, _)| n);
        out
    }

    /// Neighbors of a node, filtered to one kind, with weights.
    pub fn neighbors(&self, v: &NodeId, kind: NodeKind) -> Result<Vec<(NodeId, f64)>> {
        let index = self
            .node_index(v)
            .ok_or_else(|| Error::UnknownNode(v.token()))?;
        Ok(self
            .neighbors_of_kind(index, kind)
            .into_iter()
            .map(|(n, w)| (self.nodes[n].clone(), w))
            .collect())
    }

    /// Debug export: one line per undirected edge,
    /// `src_kind src_key dst_kind dst_key edge_type weight`.
    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        for (u, lists) in self.adj.iter().enumerate() {
            for t in EdgeType::ALL {
                for &(v, w) in &lists[t.slot()] {
                    if u < v {
                        let (uk, un) = self.tsv_key(u);
                        let (vk, vn) = self.tsv_key(v);
                        out.push_str(&format!(
                            "{uk}\t{un}\t{vk}\t{vn}\t{}\t{w}\n",
                            t.label()
                        ));
                    }
                }
            }
        }
        out
    }

    fn tsv_key(&self, index: usize) -> (String, String) {
        match &self.nodes[index] {
            NodeId::Word(w) => ("word".into(), w.clone()),
            NodeId::Sentence(i) => ("sentence".into(), i.to_string()),
        }
    }
}

/// Build the heterogeneous graph of one document.
///
/// When the vocabulary is [`NodeVocabulary::Keywords`], `keywords` must be a
/// non-empty set and only those words become nodes.
pub fn build_graph(
    doc: &Document,
    config: &GraphConfig,
    keywords: Option<&HashSet<String>>,
) -> Result<HeteroGraph> {
    config.validate()?;
    if doc.sentences.is_empty() {
        return Err(Error::EmptyDocument(doc.id.clone()));
    }
    let keyword_filter = match config.node_vocabulary {
        NodeVocabulary::AllWords => None,
        NodeVocabulary::Keywords(_) => match keywords {
            Some(set) if !set.is_empty() => Some(set),
            _ => {
                return Err(Error::InvalidConfig(
                    "keyword vocabulary requires a non-empty keyword set".into(),
                ))
            }
        },
    };
    let admitted = |word: &str| keyword_filter.is_none_or(|set| set.contains(word));

    let m = doc.sentences.len();
    let mut nodes: Vec<NodeId> = (0..m).map(NodeId::Sentence).collect();
    let mut word_of: HashMap<&str, usize> = HashMap::new();
    for sentence in &doc.sentences {
        for token in &sentence.tokens {
            if admitted(token) && !word_of.contains_key(token.as_str()) {
                word_of.insert(token, nodes.len());
                nodes.push(NodeId::Word(token.clone()));
            }
        }
    }
    if word_of.is_empty() && config.use_ws {
        return Err(Error::NoWordNodes);
    }

    let mut edges: BTreeMap<(usize, usize, EdgeType), f64> = BTreeMap::new();
    fn add(edges: &mut BTreeMap<(usize, usize, EdgeType), f64>, u: usize, v: usize, t: EdgeType) {
        let key = (u.min(v), u.max(v), t);
        *edges.entry(key).or_insert(0.0) += 1.0;
    }

    for (si, sentence) in doc.sentences.iter().enumerate() {
        let tokens = &sentence.tokens;
        if config.use_ww {
            for i in 0..tokens.len() {
                let Some(&u) = word_of.get(tokens[i].as_str()) else {
                    continue;
                };
                for j in (i + 1)..tokens.len().min(i + config.ww_window) {
                    let Some(&v) = word_of.get(tokens[j].as_str()) else {
                        continue;
                    };
                    if u != v {
                        add(&mut edges, u, v, EdgeType::WW);
                    }
                }
            }
        }
        if config.use_ws {
            for token in tokens {
                if let Some(&u) = word_of.get(token.as_str()) {
                    add(&mut edges, u, si, EdgeType::WS);
                }
            }
        }
        if config.use_ss {
            for sj in (si + 1)..m.min(si + config.ss_window + 1) {
                edges.insert((si, sj, EdgeType::SS), 1.0);
            }
        }
    }

    let list: Vec<(usize, usize, EdgeType, f64)> = edges
        .into_iter()
        .map(|((u, v, t), w)| (u, v, t, if config.unweighted { 1.0 } else { w }))
        .collect();
    HeteroGraph::from_typed_edges(&doc.id, nodes, &list)
}
