//! Heterogeneous skip-gram training over the walk corpus.
//!
//! For every walk position, each context node within the window yields one
//! negative-sampling update: the positive (center, context) pair plus M
//! noise nodes drawn from the context kind's noise distribution. Centers and
//! contexts use separate parameter matrices; the input vectors are the
//! reported embeddings.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{HeteroGraph, NodeKind};
use crate::walks::Walk;

#[derive(Debug, Clone, PartialEq)]
pub struct TrainConfig {
    /// Embedding dimension. Must be >= 2.
    pub dim: usize,
    /// Skip-gram context radius in walk positions.
    pub window: usize,
    /// Noise nodes per positive pair.
    pub negatives: usize,
    pub epochs: usize,
    pub lr_start: f64,
    pub lr_end: f64,
    pub seed: u64,
    /// Exponent applied to walk-corpus unigram counts in the noise
    /// distribution. In [0, 1].
    pub noise_power: f64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            dim: 128,
            window: 5,
            negatives: 5,
            epochs: 5,
            lr_start: 0.025,
            lr_end: 1e-4,
            seed: 42,
            noise_power: 0.75,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        if self.dim < 2 {
            return Err(Error::InvalidConfig("dim must be >= 2".into()));
        }
        if self.window < 1 {
            return Err(Error::InvalidConfig("window must be >= 1".into()));
        }
        if self.negatives < 1 {
            return Err(Error::InvalidConfig("negatives must be >= 1".into()));
        }
        if self.epochs < 1 {
            return Err(Error::InvalidConfig("epochs must be >= 1".into()));
        }
        if !(self.lr_start > 0.0 && self.lr_end > 0.0) {
            return Err(Error::InvalidConfig("learning rates must be positive".into()));
        }
        if self.lr_end > self.lr_start {
            return Err(Error::InvalidConfig("lr_end must be <= lr_start".into()));
        }
        if !(0.0..=1.0).contains(&self.noise_power) {
            return Err(Error::InvalidConfig("noise_power must be in [0, 1]".into()));
        }
        Ok(())
    }
}

/// Node embeddings: one input (center) and one output (context) vector per
/// node, rows indexed identically to the graph's node list.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingTable {
    dim: usize,
    n_nodes: usize,
    input: Vec<f64>,
    output: Vec<f64>,
}

impl EmbeddingTable {
    /// Input vectors uniform in [-0.5/dim, 0.5/dim], output vectors zero.
    pub fn new_seeded(n_nodes: usize, dim: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let input = (0..n_nodes * dim)
            .map(|_| (rng.random::<f64>() - 0.5) / dim as f64)
            .collect();
        EmbeddingTable {
            dim,
            n_nodes,
            input,
            output: vec![0.0; n_nodes * dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.n_nodes
    }

    pub fn is_empty(&self) -> bool {
        self.n_nodes == 0
    }

    pub fn input_row(&self, node: usize) -> &[f64] {
        &self.input[node * self.dim..(node + 1) * self.dim]
    }

    pub fn output_row(&self, node: usize) -> &[f64] {
        &self.output[node * self.dim..(node + 1) * self.dim]
    }

    pub fn input_row_mut(&mut self, node: usize) -> &mut [f64] {
        &mut self.input[node * self.dim..(node + 1) * self.dim]
    }

    pub fn output_row_mut(&mut self, node: usize) -> &mut [f64] {
        &mut self.output[node * self.dim..(node + 1) * self.dim]
    }

    /// Copy of the input vector for a node; the reported embedding.
    pub fn node_vector(&self, node: usize) -> Result<Vec<f64>> {
        if node >= self.n_nodes {
            return Err(Error::UnknownNode(format!("node index {node}")));
        }
        Ok(self.input_row(node).to_vec())
    }

    /// Text dump: `<node_count> <dim>` then one line per node with its token
    /// and the input vector.
    pub fn to_text(&self, g: &HeteroGraph) -> String {
        let mut out = format!("{} {}\n", self.n_nodes, self.dim);
        for node in 0..self.n_nodes {
            out.push_str(&g.node(node).token());
            for value in self.input_row(node) {
                out.push_str(&format!(" {value:.6}"));
            }
            out.push('\n');
        }
        out
    }
}

/// Per-kind noise distribution with P(u) proportional to
/// `count(u)^noise_power` over the walk corpus.
#[derive(Debug, Clone)]
pub struct NoiseDistribution {
    kinds: [KindTable; 2],
}

#[derive(Debug, Clone, Default)]
struct KindTable {
    nodes: Vec<usize>,
    /// Cumulative probabilities; last entry is exactly 1.
    cdf: Vec<f64>,
    weights: Vec<f64>,
    total: f64,
}

fn kind_slot(kind: NodeKind) -> usize {
    match kind {
        NodeKind::Word => 0,
        NodeKind::Sentence => 1,
    }
}

impl NoiseDistribution {
    /// Build from per-node occurrence counts over the walk corpus.
    pub fn from_counts(g: &HeteroGraph, counts: &[u64], power: f64) -> Self {
        let mut kinds: [KindTable; 2] = Default::default();
        for (node, &count) in counts.iter().enumerate() {
            if count == 0 {
                continue;
            }
            let table = &mut kinds[kind_slot(g.kind(node))];
            let weight = (count as f64).powf(power);
            table.nodes.push(node);
            table.weights.push(weight);
            table.total += weight;
        }
        for table in &mut kinds {
            let mut cumulative = 0.0;
            table.cdf = table
                .weights
                .iter()
                .map(|w| {
                    cumulative += w / table.total;
                    cumulative
                })
                .collect();
            if let Some(last) = table.cdf.last_mut() {
                *last = 1.0;
            }
        }
        NoiseDistribution { kinds }
    }

    /// Count node occurrences over a walk corpus.
    pub fn count_occurrences(g: &HeteroGraph, walks: &[Walk]) -> Vec<u64> {
        let mut counts = vec![0u64; g.node_count()];
        for walk in walks {
            for &node in &walk.nodes {
                counts[node] += 1;
            }
        }
        counts
    }

    /// Sampling probability of a node under its kind's table.
    pub fn prob(&self, kind: NodeKind, node: usize) -> f64 {
        let table = &self.kinds[kind_slot(kind)];
        table
            .nodes
            .iter()
            .position(|&n| n == node)
            .map_or(0.0, |i| table.weights[i] / table.total)
    }

    /// Sum of probabilities over one kind's support (1 unless empty).
    pub fn mass(&self, kind: NodeKind) -> f64 {
        let table = &self.kinds[kind_slot(kind)];
        if table.nodes.is_empty() {
            0.0
        } else {
            table.weights.iter().map(|w| w / table.total).sum()
        }
    }

    pub fn sample(&self, kind: NodeKind, rng: &mut ChaCha8Rng) -> Option<usize> {
        let table = &self.kinds[kind_slot(kind)];
        if table.nodes.is_empty() {
            return None;
        }
        let x = rng.random::<f64>();
        let i = table.cdf.partition_point(|&c| c <= x);
        Some(table.nodes[i.min(table.nodes.len() - 1)])
    }
}

fn sigmoid(x: f64) -> f64 {
    1.0 / (1.0 + (-x).exp())
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// One negative-sampling ascent step on the pair objective
/// `log sigma(X'_c . X_v) + sum_m log sigma(-X'_u_m . X_v)`.
///
/// All gradients are evaluated at the incoming parameter values: context and
/// negative output rows move along the old center vector, and the center's
/// accumulated gradient (from the old output rows) is applied last. The
/// caller guarantees the negatives share the context's kind.
///
/// Returns false when a non-finite dot product was encountered.
pub fn sgd_step(
    table: &mut EmbeddingTable,
    center: usize,
    context: usize,
    negatives: &[usize],
    lr: f64,
) -> bool {
    let dim = table.dim;
    let pos_dot = dot(table.output_row(context), table.input_row(center));
    let neg_dots: Vec<f64> = negatives
        .iter()
        .map(|&u| dot(table.output_row(u), table.input_row(center)))
        .collect();
    let finite = pos_dot.is_finite() && neg_dots.iter().all(|d| d.is_finite());

    let g_pos = lr * (1.0 - sigmoid(pos_dot));
    let g_negs: Vec<f64> = neg_dots.iter().map(|&d| lr * -sigmoid(d)).collect();

    // Center gradient, accumulated from the old output rows.
    let mut acc = vec![0.0; dim];
    {
        let row = table.output_row(context);
        for d in 0..dim {
            acc[d] += g_pos * row[d];
        }
    }
    for (&u, &g) in negatives.iter().zip(&g_negs) {
        let row = table.output_row(u);
        for d in 0..dim {
            acc[d] += g * row[d];
        }
    }

    // Output updates along the old center vector.
    let center_off = center * dim;
    let context_off = context * dim;
    for d in 0..dim {
        table.output[context_off + d] += g_pos * table.input[center_off + d];
    }
    for (&u, &g) in negatives.iter().zip(&g_negs) {
        let off = u * dim;
        for d in 0..dim {
            table.output[off + d] += g * table.input[center_off + d];
        }
    }

    for d in 0..dim {
        table.input[center_off + d] += acc[d];
    }
    finite
}

/// Train node embeddings on a walk corpus.
///
/// Deterministic for a fixed (walks, config) in this single-threaded form.
/// The learning rate decays linearly from `lr_start` to `lr_end` over the
/// total number of (center, context) updates.
pub fn train(walks: &[Walk], g: &HeteroGraph, config: &TrainConfig) -> Result<EmbeddingTable> {
    config.validate()?;
    if walks.is_empty() {
        return Err(Error::InvalidConfig("walk corpus is empty".into()));
    }

    let counts = NoiseDistribution::count_occurrences(g, walks);
    let noise = NoiseDistribution::from_counts(g, &counts, config.noise_power);

    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut table = EmbeddingTable::new_seeded(g.node_count(), config.dim, config.seed);

    let pairs_per_epoch: u64 = walks
        .iter()
        .map(|walk| {
            let len = walk.nodes.len();
            (0..len)
                .map(|p| (p.min(config.window) + config.window.min(len - 1 - p)) as u64)
                .sum::<u64>()
        })
        .sum();
    let total_updates = pairs_per_epoch * config.epochs as u64;
    let lr_span = if total_updates > 1 {
        (config.lr_end - config.lr_start) / (total_updates - 1) as f64
    } else {
        0.0
    };

    let mut update: u64 = 0;
    let mut negatives = Vec::with_capacity(config.negatives);
    for _ in 0..config.epochs {
        for walk in walks {
            let len = walk.nodes.len();
            for p in 0..len {
                let center = walk.nodes[p];
                let lo = p.saturating_sub(config.window);
                let hi = (p + config.window).min(len - 1);
                for q in lo..=hi {
                    if q == p {
                        continue;
                    }
                    let context = walk.nodes[q];
                    let kind = g.kind(context);
                    negatives.clear();
                    for _ in 0..config.negatives {
                        if let Some(u) = noise.sample(kind, &mut rng) {
                            if u != context {
                                negatives.push(u);
                            }
                        }
                    }
                    let lr = config.lr_start + lr_span * update as f64;
                    if !sgd_step(&mut table, center, context, &negatives, lr) {
                        return Err(Error::NonFinite(update));
                    }
                    update += 1;
                }
            }
        }
    }
    Ok(table)
}

/// Exact per-kind softmax probability of `context` given `center`: input
/// vectors on both sides, normalized over all nodes of the context's kind.
/// Diagnostic/oracle use only; training goes through negative sampling.
pub fn softmax_prob(
    table: &EmbeddingTable,
    g: &HeteroGraph,
    center: usize,
    context: usize,
) -> f64 {
    let kind = g.kind(context);
    let center_row = table.input_row(center);
    let logits: Vec<(usize, f64)> = (0..g.node_count())
        .filter(|&u| g.kind(u) == kind)
        .map(|u| (u, dot(table.input_row(u), center_row)))
        .collect();
    let max = logits
        .iter()
        .map(|&(_, l)| l)
        .fold(f64::NEG_INFINITY, f64::max);
    let denom: f64 = logits.iter().map(|&(_, l)| (l - max).exp()).sum();
    let numer = logits
        .iter()
        .find(|&&(u, _)| u == context)
        .map(|&(_, l)| (l - max).exp())
        .unwrap_or(0.0);
    numer / denom
}

/// The pair objective evaluated at the current parameters; the quantity one
/// [`sgd_step`] ascends.
pub fn pair_objective(
    table: &EmbeddingTable,
    center: usize,
    context: usize,
    negatives: &[usize],
) -> f64 {
    let center_row = table.input_row(center);
    let mut obj = sigmoid(dot(table.output_row(context), center_row)).ln();
    for &u in negatives {
        obj += sigmoid(-dot(table.output_row(u), center_row)).ln();
    }
    obj
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{EdgeType, HeteroGraph, NodeId};
    use crate::walks::{generate_walks, MetapathSchema, WalkConfig};

    /// Two K4 word cliques joined by a single bridge edge.
    pub(crate) fn two_clique_graph() -> HeteroGraph {
        let nodes: Vec<NodeId> = (0..8)
            .map(|i| NodeId::Word(format!("n{i}")))
            .collect();
        let mut edges = Vec::new();
        for base in [0usize, 4] {
            for i in base..base + 4 {
                for j in (i + 1)..base + 4 {
                    edges.push((i, j, EdgeType::WW, 1.0));
                }
            }
        }
        edges.push((3, 4, EdgeType::WW, 1.0));
        HeteroGraph::from_typed_edges("clique", nodes, &edges).unwrap()
    }

    fn clique_walks(g: &HeteroGraph, seed: u64) -> Vec<crate::walks::Walk> {
        let config = WalkConfig {
            walks_per_node: 10,
            walk_length: 20,
            schemas: vec![MetapathSchema::parse("w-w").unwrap()],
            seed,
            unweighted: false,
        };
        generate_walks(g, &config).unwrap()
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

    pub(crate) fn clique_separation(table: &EmbeddingTable) -> (f64, f64) {
        let mut intra = Vec::new();
        let mut inter = Vec::new();
        for i in 0..8 {
            for j in (i + 1)..8 {
                let c = cosine(table.input_row(i), table.input_row(j));
                if (i < 4) == (j < 4) {
                    intra.push(c);
                } else {
                    inter.push(c);
                }
            }
        }
        let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
        (mean(&intra), mean(&inter))
    }

    #[test]
    fn cliques_separate_with_default_config() {
        let g = two_clique_graph();
        let walks = clique_walks(&g, 11);
        let table = train(&walks, &g, &TrainConfig::default()).unwrap();
        let (intra, inter) = clique_separation(&table);
        assert!(
            intra > inter,
            "intra {intra} should exceed inter {inter}"
        );
    }

    #[test]
    fn zero_epochs_rejected() {
        let config = TrainConfig {
            epochs: 0,
            ..TrainConfig::default()
        };
        assert!(config.validate().is_err());
    }

    #[test]
    fn empty_walk_corpus_rejected() {
        let g = two_clique_graph();
        assert!(train(&[], &g, &TrainConfig::default()).is_err());
    }

    #[test]
    fn cooccurring_context_outscores_never_cooccurring_node() {
        // In the two-clique graph, nodes 0 and 7 sit in different cliques at
        // path distance 3, so with window 2 they never share a context; 0
        // and 1 share one constantly.
        let g = two_clique_graph();
        let walks = clique_walks(&g, 9);
        let config = TrainConfig {
            dim: 16,
            window: 2,
            epochs: 3,
            ..TrainConfig::default()
        };
        let table = train(&walks, &g, &config).unwrap();
        let a = table.input_row(0);
        let score_cooccurring = sigmoid(dot(table.output_row(1), a));
        let score_distant = sigmoid(dot(table.output_row(7), a));
        assert!(
            score_cooccurring > score_distant,
            "{score_cooccurring} <= {score_distant}"
        );
    }

    #[test]
    fn first_update_from_zero_output_moves_exactly_half_lr() {
        let mut table = EmbeddingTable::new_seeded(3, 8, 5);
        let before_center = table.input_row(0).to_vec();
        let lr = 0.1;
        sgd_step(&mut table, 0, 1, &[], lr);
        // sigma(0) = 0.5, so the context row moves by 0.5 * lr * X_v exactly.
        for d in 0..8 {
            let expected = 0.5 * lr * before_center[d];
            assert!((table.output_row(1)[d] - expected).abs() < 1e-15);
        }
    }

    #[test]
    fn zero_learning_rate_is_identity() {
        let mut table = EmbeddingTable::new_seeded(4, 8, 5);
        let snapshot = table.clone();
        sgd_step(&mut table, 0, 1, &[2, 3], 0.0);
        assert_eq!(table, snapshot);
    }

    #[test]
    fn gradient_matches_finite_differences() {
        let g = two_clique_graph();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..10 {
            let mut table = EmbeddingTable::new_seeded(8, 8, rng.random());
            // Randomize output rows too; zeros would hide sign errors.
            for value in &mut table.output {
                *value = rng.random::<f64>() - 0.5;
            }
            let center = rng.random_range(0..8);
            let context = (center + 1) % 8;
            let negatives: Vec<usize> = (0..3)
                .map(|_| rng.random_range(0..8))
                .filter(|&u| u != context)
                .collect();
            assert!(max_gradient_rel_error(&g, &table, center, context, &negatives) < 1e-4);
        }
    }

    /// Finite-difference oracle: largest relative error between the
    /// sgd_step delta and central differences of the pair objective, over
    /// every touched coordinate.
    pub(crate) fn max_gradient_rel_error(
        _g: &HeteroGraph,
        table: &EmbeddingTable,
        center: usize,
        context: usize,
        negatives: &[usize],
    ) -> f64 {
        let lr = 1.0; // delta / lr is the analytic gradient
        let eps = 1e-5;
        let mut stepped = table.clone();
        sgd_step(&mut stepped, center, context, negatives, lr);

        let dim = table.dim;
        let mut worst: f64 = 0.0;
        let mut check = |analytic: f64, plus: f64, minus: f64| {
            let numeric = (plus - minus) / (2.0 * eps);
            let scale = numeric.abs().max(analytic.abs()).max(1e-8);
            worst = worst.max((analytic - numeric).abs() / scale);
        };

        // Input row of the center.
        for d in 0..dim {
            let analytic = stepped.input_row(center)[d] - table.input_row(center)[d];
            let mut plus = table.clone();
            plus.input[center * dim + d] += eps;
            let mut minus = table.clone();
            minus.input[center * dim + d] -= eps;
            check(
                analytic,
                pair_objective(&plus, center, context, negatives),
                pair_objective(&minus, center, context, negatives),
            );
        }
        // Output rows of the context and negatives.
        let mut rows: Vec<usize> = std::iter::once(context)
            .chain(negatives.iter().copied())
            .collect();
        rows.sort_unstable();
        rows.dedup();
        for row in rows {
            for d in 0..dim {
                let analytic = stepped.output_row(row)[d] - table.output_row(row)[d];
                let mut plus = table.clone();
                plus.output[row * dim + d] += eps;
                let mut minus = table.clone();
                minus.output[row * dim + d] -= eps;
                check(
                    analytic,
                    pair_objective(&plus, center, context, negatives),
                    pair_objective(&minus, center, context, negatives),
                );
            }
        }
        worst
    }

    #[test]
    fn softmax_sums_to_one_and_matches_direct_computation() {
        let g = two_clique_graph();
        let table = EmbeddingTable::new_seeded(8, 5, 123);
        let total: f64 = (0..8).map(|u| softmax_prob(&table, &g, 2, u)).sum();
        assert!((total - 1.0).abs() < 1e-9);

        // Direct exponent-and-normalize, no max shift.
        let center = table.input_row(2);
        let direct: Vec<f64> = (0..8)
            .map(|u| dot(table.input_row(u), center).exp())
            .collect();
        let denom: f64 = direct.iter().sum();
        for u in 0..8 {
            assert!((softmax_prob(&table, &g, 2, u) - direct[u] / denom).abs() < 1e-12);
        }
    }

    #[test]
    fn softmax_uniform_on_zero_table() {
        let g = two_clique_graph();
        let mut table = EmbeddingTable::new_seeded(8, 4, 0);
        table.input.iter_mut().for_each(|v| *v = 0.0);
        for u in 0..8 {
            assert!((softmax_prob(&table, &g, 0, u) - 1.0 / 8.0).abs() < 1e-12);
        }
    }

    #[test]
    fn text_dump_has_header_and_node_tokens() {
        let g = two_clique_graph();
        let table = EmbeddingTable::new_seeded(8, 4, 2);
        let dump = table.to_text(&g);
        let mut lines = dump.lines();
        assert_eq!(lines.next(), Some("8 4"));
        let first = lines.next().unwrap();
        assert!(first.starts_with("w:n0 "));
        assert_eq!(first.split_whitespace().count(), 5);
        assert_eq!(dump.lines().count(), 9);
    }

    #[test]
    fn node_vector_is_stored_row() {
        let table = EmbeddingTable::new_seeded(3, 6, 9);
        let v = table.node_vector(1).unwrap();
        assert_eq!(v.len(), 6);
        assert_eq!(v.as_slice(), table.input_row(1));
        assert!(table.node_vector(3).is_err());
    }

    #[test]
    fn trained_nodes_differ() {
        let g = two_clique_graph();
        let walks = clique_walks(&g, 21);
        let config = TrainConfig {
            dim: 16,
            epochs: 2,
            ..TrainConfig::default()
        };
        let table = train(&walks, &g, &config).unwrap();
        assert_ne!(table.node_vector(0).unwrap(), table.node_vector(7).unwrap());
    }

    #[test]
    fn noise_table_is_monotone_and_normalized() {
        let g = two_clique_graph();
        let counts: Vec<u64> = (0..8).map(|i| (i as u64 + 1) * 3).collect();
        let noise = NoiseDistribution::from_counts(&g, &counts, 0.75);
        assert!((noise.mass(NodeKind::Word) - 1.0).abs() < 1e-9);
        let mut last = 0.0;
        for node in 0..8 {
            let p = noise.prob(NodeKind::Word, node);
            assert!(p >= last);
            last = p;
        }
        assert_eq!(noise.mass(NodeKind::Sentence), 0.0);
    }

    #[test]
    fn training_is_deterministic() {
        let g = two_clique_graph();
        let walks = clique_walks(&g, 77);
        let config = TrainConfig {
            dim: 8,
            epochs: 2,
            ..TrainConfig::default()
        };
        let a = train(&walks, &g, &config).unwrap();
        let b = train(&walks, &g, &config).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn objective_does_not_decrease_over_first_epoch() {
        let g = two_clique_graph();
        let walks = clique_walks(&g, 5);
        let counts = NoiseDistribution::count_occurrences(&g, &walks);
        let noise = NoiseDistribution::from_counts(&g, &counts, 0.75);
        let mut rng = ChaCha8Rng::seed_from_u64(17);

        // Freeze one epoch of (center, context, negatives) triples.
        let window = 5;
        let mut corpus = Vec::new();
        for walk in &walks {
            let len = walk.nodes.len();
            for p in 0..len {
                let lo = p.saturating_sub(window);
                let hi = (p + window).min(len - 1);
                for q in lo..=hi {
                    if q == p {
                        continue;
                    }
                    let context = walk.nodes[q];
                    let negs: Vec<usize> = (0..5)
                        .filter_map(|_| noise.sample(g.kind(context), &mut rng))
                        .filter(|&u| u != context)
                        .collect();
                    corpus.push((walk.nodes[p], context, negs));
                }
            }
        }

        let total = |table: &EmbeddingTable| -> f64 {
            corpus
                .iter()
                .map(|(v, c, negs)| pair_objective(table, *v, *c, negs))
                .sum()
        };

        let mut table = EmbeddingTable::new_seeded(g.node_count(), 16, 1);
        let before = total(&table);
        for (v, c, negs) in &corpus {
            sgd_step(&mut table, *v, *c, negs, 0.025);
        }
        let after = total(&table);
        assert!(after >= before, "objective fell from {before} to {after}");
    }
}
