//! Network bootstrapping: grow a "real-looking" network from a small seed by
//! iterative node attachment and classifier-score pruning.
//!
//! Two attachment mechanisms are provided. Vertex copy picks a random
//! template node and fills the new node's neighbor set by copying the
//! template's links with probability `beta` (uniform nodes otherwise).
//! Triadic closure draws a target degree from the original network's degree
//! sequence scaled by `n/N`, then picks each neighbor either uniformly or by
//! closing a triangle through an already-chosen friend. After every growth
//! step all node features are recomputed, every node is scored by the
//! classifier, and nodes scoring below the threshold are removed in one
//! batch.

use std::collections::BTreeSet;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::features::extract_features;
use crate::forest::{train_forest, ForestModel, TrainConfig};
use crate::graph::{Graph, GraphCollection};
use crate::models::gen_configuration;
use crate::seeds::{self, tags};

/// Class id the realness classifier assigns to nodes of the original network;
/// [`train_realness_forest`] trains with this convention and
/// [`grow_network`] scores against it.
pub const REAL_CLASS: usize = 1;

/// Consecutive iterations with an unchanged node count before the growth
/// loop declares a stall.
const STALL_LIMIT: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AttachmentKind {
    VertexCopy,
    TriadicClosure,
}

impl std::str::FromStr for AttachmentKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<AttachmentKind> {
        match s.to_ascii_lowercase().as_str() {
            "vertex-copy" | "vertexcopy" => Ok(AttachmentKind::VertexCopy),
            "triadic-closure" | "triadicclosure" => Ok(AttachmentKind::TriadicClosure),
            other => Err(Error::InvalidInput(format!(
                "unknown attachment mechanism {other:?}"
            ))),
        }
    }
}

fn default_growth_rate() -> f64 {
    0.05
}

fn default_score_threshold() -> f64 {
    0.8
}

fn default_max_iterations() -> usize {
    500
}

/// Growth loop configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrowthConfig {
    pub beta: f64,
    pub attachment: AttachmentKind,
    #[serde(default = "default_growth_rate")]
    pub growth_rate: f64,
    #[serde(default = "default_score_threshold")]
    pub score_threshold: f64,
    #[serde(default = "default_max_iterations")]
    pub max_iterations: usize,
    /// Node count to grow to; 0 means the original network's size.
    #[serde(default)]
    pub target_n: usize,
    /// Draw budget per attachment; `None` means ten times the target degree.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_trials: Option<usize>,
    /// Score with the lightweight feature set (the classifier must have been
    /// trained on the same set).
    #[serde(default)]
    pub rescore_lightweight: bool,
    pub seed: u64,
}

impl GrowthConfig {
    pub fn new(attachment: AttachmentKind, beta: f64, seed: u64) -> GrowthConfig {
        GrowthConfig {
            beta,
            attachment,
            growth_rate: default_growth_rate(),
            score_threshold: default_score_threshold(),
            max_iterations: default_max_iterations(),
            target_n: 0,
            max_trials: None,
            rescore_lightweight: false,
            seed,
        }
    }

    fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.beta) {
            return Err(Error::InvalidInput("beta must be in [0, 1]".into()));
        }
        if self.growth_rate <= 0.0 {
            return Err(Error::InvalidInput("growth_rate must be positive".into()));
        }
        if !(0.0..=1.0).contains(&self.score_threshold) {
            return Err(Error::InvalidInput(
                "score_threshold must be in [0, 1]".into(),
            ));
        }
        Ok(())
    }
}

/// One growth-loop iteration record.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrowthRecord {
    pub iteration: usize,
    pub n_before_add: usize,
    pub n_added: usize,
    pub n_pruned: usize,
    pub n_after: usize,
    /// Mean real-class score over all nodes present after adding, before
    /// pruning.
    pub mean_score: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GrowthStatus {
    ReachedTarget,
    MaxIterations,
    Stalled,
}

/// Full growth trajectory.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrowthTrace {
    pub records: Vec<GrowthRecord>,
    pub status: GrowthStatus,
    /// Attachments that found no friends within the trial budget.
    pub skipped_attachments: usize,
}

impl GrowthTrace {
    /// CSV `iteration,n_before,added,pruned,n_after,mean_score`.
    pub fn write_csv(&self, mut w: impl std::io::Write) -> std::io::Result<()> {
        writeln!(w, "iteration,n_before,added,pruned,n_after,mean_score")?;
        for r in &self.records {
            writeln!(
                w,
                "{},{},{},{},{},{}",
                r.iteration, r.n_before_add, r.n_added, r.n_pruned, r.n_after, r.mean_score
            )?;
        }
        Ok(())
    }
}

/// Result of [`grow_network`].
#[derive(Debug, Clone)]
pub struct GrowthOutcome {
    pub graph: Graph,
    pub trace: GrowthTrace,
}

// Editable adjacency-list graph for the growth loop. Neighbor lists stay
// sorted via BTreeSet semantics on insert.
struct MutableGraph {
    adj: Vec<Vec<u32>>,
}

impl MutableGraph {
    fn from_graph(g: &Graph) -> MutableGraph {
        MutableGraph {
            adj: (0..g.n() as u32).map(|u| g.neighbors(u).to_vec()).collect(),
        }
    }

    fn n(&self) -> usize {
        self.adj.len()
    }

    fn degree(&self, u: u32) -> usize {
        self.adj[u as usize].len()
    }

    fn neighbors(&self, u: u32) -> &[u32] {
        &self.adj[u as usize]
    }

    fn add_node_with_edges(&mut self, friends: &BTreeSet<u32>) -> u32 {
        let u = self.adj.len() as u32;
        self.adj.push(friends.iter().copied().collect());
        for &w in friends {
            self.adj[w as usize].push(u);
        }
        u
    }

    // Drop every node whose keep flag is false, compacting ids.
    fn retain_nodes(&mut self, keep: &[bool]) {
        let mut remap = vec![u32::MAX; self.adj.len()];
        let mut next = 0u32;
        for (u, &k) in keep.iter().enumerate() {
            if k {
                remap[u] = next;
                next += 1;
            }
        }
        let mut new_adj: Vec<Vec<u32>> = Vec::with_capacity(next as usize);
        for (u, nbrs) in self.adj.iter().enumerate() {
            if !keep[u] {
                continue;
            }
            new_adj.push(
                nbrs.iter()
                    .filter(|&&v| keep[v as usize])
                    .map(|&v| remap[v as usize])
                    .collect(),
            );
        }
        self.adj = new_adj;
    }

    fn to_graph(&self) -> Graph {
        let edges = self.adj.iter().enumerate().flat_map(|(u, nbrs)| {
            nbrs.iter()
                .filter(move |&&v| (u as u32) < v)
                .map(move |&v| (u as u32, v))
        });
        Graph::from_edges(self.n(), edges)
    }
}

// Collect the new node's neighbor set by vertex copy: uniform template v with
// deg >= 1, then draws from N(v) with probability beta, uniform nodes
// otherwise, until deg(v) friends or the trial budget runs out.
fn vertex_copy_friends(
    g: &MutableGraph,
    beta: f64,
    max_trials: Option<usize>,
    rng: &mut ChaCha8Rng,
) -> BTreeSet<u32> {
    let mut friends = BTreeSet::new();
    if g.n() == 0 {
        return friends;
    }
    // Resample templates with degree 0; bail out if none qualifies.
    let mut template = None;
    for _ in 0..4 * g.n() {
        let v = rng.random_range(0..g.n() as u32);
        if g.degree(v) > 0 {
            template = Some(v);
            break;
        }
    }
    let v = match template {
        Some(v) => v,
        None => return friends,
    };
    let k = g.degree(v);
    let budget = max_trials.unwrap_or(10 * k);
    let mut count = 0;
    while friends.len() < k && count < budget {
        let w = if rng.random::<f64>() < beta {
            let nbrs = g.neighbors(v);
            nbrs[rng.random_range(0..nbrs.len())]
        } else {
            rng.random_range(0..g.n() as u32)
        };
        friends.insert(w);
        count += 1;
    }
    friends
}

// Collect the new node's neighbor set by triadic closure: target degree
// sampled from the original degree sequence scaled by n/N, each draw either
// closing a triangle through an existing friend (probability beta, once any
// friend exists) or picking a uniform node.
fn triadic_closure_friends(
    g: &MutableGraph,
    beta: f64,
    original_degrees: &[u32],
    original_n: usize,
    max_trials: Option<usize>,
    rng: &mut ChaCha8Rng,
) -> BTreeSet<u32> {
    let mut friends = BTreeSet::new();
    if g.n() == 0 || original_degrees.is_empty() {
        return friends;
    }
    let sampled = original_degrees[rng.random_range(0..original_degrees.len())] as f64;
    let scaled = sampled * g.n() as f64 / original_n as f64;
    let k = (scaled.round() as usize).clamp(1, g.n().saturating_sub(1).max(1));
    let budget = max_trials.unwrap_or(10 * k);
    let mut count = 0;
    while friends.len() < k && count < budget {
        // The first draw always takes the uniform branch: no friend exists to
        // close a triangle through yet.
        let w = if !friends.is_empty() && rng.random::<f64>() < beta {
            let idx = rng.random_range(0..friends.len());
            let v = *friends.iter().nth(idx).expect("index in range");
            let nbrs = g.neighbors(v);
            if nbrs.is_empty() {
                rng.random_range(0..g.n() as u32)
            } else {
                nbrs[rng.random_range(0..nbrs.len())]
            }
        } else {
            rng.random_range(0..g.n() as u32)
        };
        friends.insert(w);
        count += 1;
    }
    friends
}

/// Add one node to `g` by the vertex-copy mechanism. Errors when no friend
/// was found within the trial budget.
pub fn vertex_copy_attach(
    g: &Graph,
    beta: f64,
    max_trials: Option<usize>,
    seed: u64,
) -> Result<Graph> {
    if g.n() < 2 {
        return Err(Error::InvalidInput(
            "vertex copy needs at least two nodes".into(),
        ));
    }
    let mut rng = seeds::rng(seed, &[tags::ATTACH]);
    let mut mg = MutableGraph::from_graph(g);
    let friends = vertex_copy_friends(&mg, beta, max_trials, &mut rng);
    if friends.is_empty() {
        return Err(Error::GeneratorFailed(
            "vertex copy found no friends within the trial budget".into(),
        ));
    }
    mg.add_node_with_edges(&friends);
    Ok(mg.to_graph())
}

/// Add one node to `g` by the triadic-closure mechanism, drawing the target
/// degree from `original_degrees` scaled by `g.n() / original_n`.
pub fn triadic_closure_attach(
    g: &Graph,
    beta: f64,
    original_degrees: &[u32],
    original_n: usize,
    max_trials: Option<usize>,
    seed: u64,
) -> Result<Graph> {
    if g.n() < 2 {
        return Err(Error::InvalidInput(
            "triadic closure needs at least two nodes".into(),
        ));
    }
    if original_degrees.is_empty() || original_n == 0 {
        return Err(Error::InvalidInput(
            "triadic closure needs the original degree sequence".into(),
        ));
    }
    let mut rng = seeds::rng(seed, &[tags::ATTACH]);
    let mut mg = MutableGraph::from_graph(g);
    let friends =
        triadic_closure_friends(&mg, beta, original_degrees, original_n, max_trials, &mut rng);
    if friends.is_empty() {
        return Err(Error::GeneratorFailed(
            "triadic closure found no friends within the trial budget".into(),
        ));
    }
    mg.add_node_with_edges(&friends);
    Ok(mg.to_graph())
}

/// Train the realness classifier for growth: class [`REAL_CLASS`] holds all
/// nodes of the original network, class 0 all nodes of one fresh
/// configuration-model twin with the same degree sequence.
pub fn train_realness_forest(
    original: &Graph,
    lightweight: bool,
    train: &TrainConfig,
    seed: u64,
) -> Result<ForestModel> {
    let twin = gen_configuration(&original.degree_sequence(), seeds::derive(seed, &[tags::TWIN]))?;
    let collection = GraphCollection::new(
        vec![twin, original.clone()],
        vec![0, REAL_CLASS],
        vec![0, 1],
    );
    let (dataset, _) = crate::experiments::build_node_dataset(&collection, lightweight, seed)?;
    train_forest(&dataset, &train.with_seed(seeds::derive(seed, &[tags::TRAIN])))
}

/// Grow a network from `seed_graph` toward the size of `original`: each
/// iteration adds `ceil(n * growth_rate)` nodes with the configured
/// attachment, rescores every node with `classifier`, and prunes all nodes
/// whose real-class score falls below the threshold (scores are computed on
/// the pre-prune graph and nodes are removed in one batch).
///
/// `snapshot` (when given) is invoked after each iteration's prune step.
pub fn grow_network(
    seed_graph: &Graph,
    original: &Graph,
    classifier: &ForestModel,
    cfg: &GrowthConfig,
    mut snapshot: Option<&mut dyn FnMut(usize, &Graph)>,
) -> Result<GrowthOutcome> {
    cfg.validate()?;
    if seed_graph.n() == 0 {
        return Err(Error::InvalidInput("seed graph is empty".into()));
    }
    let expected_cols = if cfg.rescore_lightweight { 5 } else { 7 };
    if classifier.feature_names.len() != expected_cols {
        return Err(Error::InvalidInput(format!(
            "classifier expects {} features but rescoring produces {expected_cols}",
            classifier.feature_names.len()
        )));
    }
    if classifier.num_classes <= REAL_CLASS {
        return Err(Error::InvalidInput(
            "classifier does not score a real class".into(),
        ));
    }

    let target = if cfg.target_n == 0 { original.n() } else { cfg.target_n };
    let original_degrees = original.degree_sequence();
    let mut rng = seeds::rng(cfg.seed, &[tags::BOOTSTRAP]);
    let mut g = MutableGraph::from_graph(seed_graph);

    let mut records = Vec::new();
    let mut skipped = 0usize;
    let mut stall_streak = 0usize;
    let mut status = GrowthStatus::MaxIterations;

    for iteration in 1..=cfg.max_iterations {
        let n_before = g.n();
        if n_before == 0 {
            status = GrowthStatus::Stalled;
            break;
        }
        let to_add = (n_before as f64 * cfg.growth_rate).ceil() as usize;
        let mut added = 0usize;
        for _ in 0..to_add {
            let friends = match cfg.attachment {
                AttachmentKind::VertexCopy => {
                    vertex_copy_friends(&g, cfg.beta, cfg.max_trials, &mut rng)
                }
                AttachmentKind::TriadicClosure => triadic_closure_friends(
                    &g,
                    cfg.beta,
                    &original_degrees,
                    original.n(),
                    cfg.max_trials,
                    &mut rng,
                ),
            };
            if friends.is_empty() {
                skipped += 1;
                continue;
            }
            g.add_node_with_edges(&friends);
            added += 1;
        }

        let grown = g.to_graph();
        let matrix = extract_features(
            &grown,
            cfg.rescore_lightweight,
            seeds::derive(cfg.seed, &[tags::FEATURES, iteration as u64]),
        );
        let scores = classifier.predict_proba(matrix.data(), matrix.n_cols())?;
        let real: Vec<f64> = (0..grown.n()).map(|i| scores.row(i)[REAL_CLASS]).collect();
        let mean_score = if real.is_empty() {
            0.0
        } else {
            real.iter().sum::<f64>() / real.len() as f64
        };

        let keep: Vec<bool> = real.iter().map(|&s| s >= cfg.score_threshold).collect();
        let n_pruned = keep.iter().filter(|&&k| !k).count();
        g.retain_nodes(&keep);
        // Loop invariant: every survivor met the threshold when scored.
        for (i, &kept) in keep.iter().enumerate() {
            if kept {
                assert!(real[i] >= cfg.score_threshold);
            }
        }

        let n_after = g.n();
        assert_eq!(n_after, n_before + added - n_pruned);
        records.push(GrowthRecord {
            iteration,
            n_before_add: n_before,
            n_added: added,
            n_pruned,
            n_after,
            mean_score,
        });
        if let Some(hook) = snapshot.as_deref_mut() {
            hook(iteration, &grown);
        }

        if n_after >= target {
            status = GrowthStatus::ReachedTarget;
            break;
        }
        if n_after == 0 {
            status = GrowthStatus::Stalled;
            break;
        }
        if n_after == n_before {
            stall_streak += 1;
            if stall_streak >= STALL_LIMIT {
                status = GrowthStatus::Stalled;
                break;
            }
        } else {
            stall_streak = 0;
        }
    }

    Ok(GrowthOutcome {
        graph: g.to_graph(),
        trace: GrowthTrace {
            records,
            status,
            skipped_attachments: skipped,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::gen_holme_kim;

    fn fixture_graph() -> Graph {
        gen_holme_kim(40, 120, 1.0, 3).unwrap()
    }

    #[test]
    fn vertex_copy_beta1_copies_template_neighborhood() {
        let g = fixture_graph();
        for seed in 0..50 {
            let grown = vertex_copy_attach(&g, 1.0, Some(10_000), seed).unwrap();
            let u = (grown.n() - 1) as u32;
            let friends: Vec<u32> = grown.neighbors(u).to_vec();
            assert!(!friends.is_empty());
            // With beta = 1 every draw comes from one template's neighborhood.
            let matches = (0..g.n() as u32).any(|v| {
                friends.len() == g.degree(v)
                    && friends.iter().all(|&w| g.neighbors(v).contains(&w))
            });
            assert!(matches, "seed {seed}: no template covers {friends:?}");
        }
    }

    #[test]
    fn vertex_copy_on_single_edge_attaches_degree_one() {
        let g = Graph::from_edges(2, [(0, 1)]);
        let grown = vertex_copy_attach(&g, 0.5, None, 4).unwrap();
        assert_eq!(grown.n(), 3);
        assert_eq!(grown.degree(2), 1);
    }

    #[test]
    fn vertex_copy_beta0_draws_uniform_distinct_nodes() {
        let g = fixture_graph();
        for seed in 0..20 {
            let grown = vertex_copy_attach(&g, 0.0, Some(10_000), seed).unwrap();
            let u = (grown.n() - 1) as u32;
            // Distinctness comes from the friend set; the graph must stay simple.
            let nbrs = grown.neighbors(u);
            let unique: BTreeSet<u32> = nbrs.iter().copied().collect();
            assert_eq!(unique.len(), nbrs.len());
        }
    }

    #[test]
    fn triadic_closure_beta0_hits_scaled_degree() {
        // Same size as the original: k is exactly the sampled degree (2).
        let g = Graph::from_edges(3, [(0, 1), (1, 2), (0, 2)]);
        let grown = triadic_closure_attach(&g, 0.0, &[2, 2, 2], 3, Some(10_000), 9).unwrap();
        assert_eq!(grown.n(), 4);
        assert_eq!(grown.degree(3), 2);
    }

    #[test]
    fn triadic_closure_beta1_closes_triangles_on_triangle_seed() {
        let g = Graph::from_edges(3, [(0, 1), (1, 2), (0, 2)]);
        for seed in 0..20 {
            let grown =
                triadic_closure_attach(&g, 1.0, &[2, 2, 2], 3, Some(10_000), seed).unwrap();
            let u = (grown.n() - 1) as u32;
            let friends = grown.neighbors(u);
            if friends.len() >= 2 {
                let closed = friends.iter().enumerate().any(|(i, &a)| {
                    friends[i + 1..].iter().any(|&b| grown.has_edge(a, b))
                });
                assert!(closed, "seed {seed}: neighborhood induces no edge");
            }
        }
    }

    fn quick_classifier(original: &Graph, seed: u64) -> ForestModel {
        let train = TrainConfig {
            num_trees: 20,
            seed,
            ..TrainConfig::default()
        };
        train_realness_forest(original, true, &train, seed).unwrap()
    }

    #[test]
    fn growth_without_pruning_is_geometric() {
        let original = gen_holme_kim(200, 600, 1.0, 5).unwrap();
        let classifier = quick_classifier(&original, 5);
        let seed_graph = crate::graph::ego_network(&original, 0);
        let n0 = 100;
        let seed_graph = if seed_graph.n() >= n0 {
            seed_graph
        } else {
            gen_holme_kim(n0, 300, 1.0, 6).unwrap()
        };
        let n0 = seed_graph.n();
        let mut cfg = GrowthConfig::new(AttachmentKind::VertexCopy, 0.9, 11);
        cfg.score_threshold = 0.0;
        cfg.rescore_lightweight = true;
        cfg.target_n = 2 * n0;
        let outcome = grow_network(&seed_graph, &original, &classifier, &cfg, None).unwrap();
        assert_eq!(outcome.trace.status, GrowthStatus::ReachedTarget);
        for r in &outcome.trace.records {
            assert_eq!(r.n_pruned, 0);
            assert_eq!(r.n_after, r.n_before_add + r.n_added - r.n_pruned);
        }
        let expected = ((2.0f64).ln() / 1.05f64.ln()).ceil() as i64;
        let actual = outcome.trace.records.len() as i64;
        assert!(
            (actual - expected).abs() <= 1,
            "took {actual} iterations, expected about {expected}"
        );
    }

    #[test]
    fn growth_trace_identity_and_simplicity_with_pruning() {
        let original = gen_holme_kim(150, 450, 1.0, 7).unwrap();
        let classifier = quick_classifier(&original, 7);
        let seed_graph = gen_holme_kim(40, 120, 1.0, 8).unwrap();
        let mut cfg = GrowthConfig::new(AttachmentKind::TriadicClosure, 0.8, 13);
        cfg.rescore_lightweight = true;
        cfg.score_threshold = 0.5;
        cfg.max_iterations = 30;
        cfg.target_n = 150;
        let outcome = grow_network(&seed_graph, &original, &classifier, &cfg, None).unwrap();
        for r in &outcome.trace.records {
            assert_eq!(r.n_after, r.n_before_add + r.n_added - r.n_pruned);
        }
        // Simplicity: neighbor lists hold no duplicates.
        let g = &outcome.graph;
        for u in 0..g.n() as u32 {
            let nbrs = g.neighbors(u);
            let unique: BTreeSet<u32> = nbrs.iter().copied().collect();
            assert_eq!(unique.len(), nbrs.len());
            assert!(!nbrs.contains(&u));
        }
    }

    #[test]
    fn growth_snapshot_hook_fires() {
        let original = gen_holme_kim(100, 300, 1.0, 2).unwrap();
        let classifier = quick_classifier(&original, 2);
        let seed_graph = gen_holme_kim(30, 90, 1.0, 3).unwrap();
        let mut cfg = GrowthConfig::new(AttachmentKind::VertexCopy, 0.9, 4);
        cfg.rescore_lightweight = true;
        cfg.score_threshold = 0.0;
        cfg.max_iterations = 5;
        cfg.target_n = 1_000_000;
        let mut calls = 0usize;
        let mut hook = |_it: usize, _g: &Graph| calls += 1;
        let outcome =
            grow_network(&seed_graph, &original, &classifier, &cfg, Some(&mut hook)).unwrap();
        assert_eq!(outcome.trace.status, GrowthStatus::MaxIterations);
        assert_eq!(calls, outcome.trace.records.len());
    }

    #[test]
    fn growth_trace_csv_header() {
        let trace = GrowthTrace {
            records: vec![GrowthRecord {
                iteration: 1,
                n_before_add: 10,
                n_added: 1,
                n_pruned: 0,
                n_after: 11,
                mean_score: 0.9,
            }],
            status: GrowthStatus::MaxIterations,
            skipped_attachments: 0,
        };
        let mut buf = Vec::new();
        trace.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("iteration,n_before,added,pruned,n_after,mean_score\n"));
        assert_eq!(text.lines().count(), 2);
    }

    #[test]
    fn classifier_feature_mismatch_is_rejected() {
        let original = gen_holme_kim(60, 180, 1.0, 2).unwrap();
        let classifier = quick_classifier(&original, 2); // lightweight: 5 cols
        let seed_graph = gen_holme_kim(20, 60, 1.0, 3).unwrap();
        let mut cfg = GrowthConfig::new(AttachmentKind::VertexCopy, 0.9, 4);
        cfg.rescore_lightweight = false; // produces 7 cols
        assert!(grow_network(&seed_graph, &original, &classifier, &cfg, None).is_err());
    }
}
