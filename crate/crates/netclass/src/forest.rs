//! From-scratch random forest classifier with probability scores and
//! impurity-based feature importances.
//!
//! Each tree trains on a bootstrap resample; each split draws
//! `max_features` candidate features without replacement and takes the best
//! Gini-impurity-decrease threshold, ties broken by lowest feature index then
//! lowest threshold. Probabilities are tree-vote fractions. Trees train in
//! parallel with per-tree derived seeds and aggregate in fixed order, so a
//! given `(data, config)` always yields the identical model.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::seeds::{self, tags};

/// Serialization format version for [`ForestModel`].
pub const MODEL_FORMAT_VERSION: u32 = 1;

/// Random forest training configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainConfig {
    pub num_trees: usize,
    /// Features sampled per split; `None` means `ceil(sqrt(d))`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_features: Option<usize>,
    pub min_leaf: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_depth: Option<usize>,
    pub seed: u64,
}

impl Default for TrainConfig {
    fn default() -> TrainConfig {
        TrainConfig {
            num_trees: 100,
            max_features: None,
            min_leaf: 1,
            max_depth: None,
            seed: 0,
        }
    }
}

impl TrainConfig {
    pub fn with_seed(&self, seed: u64) -> TrainConfig {
        TrainConfig { seed, ..self.clone() }
    }

    fn resolved_max_features(&self, d: usize) -> usize {
        self.max_features
            .unwrap_or_else(|| (d as f64).sqrt().ceil() as usize)
            .clamp(1, d)
    }
}

/// Feature rows tagged with a class label and an origin-network id.
#[derive(Debug, Clone)]
pub struct LabeledNodeDataset {
    features: Vec<f64>,
    n_cols: usize,
    feature_names: Vec<String>,
    labels: Vec<u32>,
    network_ids: Vec<u32>,
    num_classes: usize,
}

impl LabeledNodeDataset {
    pub fn new(
        features: Vec<f64>,
        n_cols: usize,
        feature_names: Vec<String>,
        labels: Vec<u32>,
        network_ids: Vec<u32>,
    ) -> Result<LabeledNodeDataset> {
        if n_cols == 0 || feature_names.len() != n_cols {
            return Err(Error::InvalidInput(
                "feature_names length must equal column count".into(),
            ));
        }
        if features.len() % n_cols != 0 {
            return Err(Error::InvalidInput(
                "feature buffer is not a whole number of rows".into(),
            ));
        }
        let n_rows = features.len() / n_cols;
        if labels.len() != n_rows || network_ids.len() != n_rows {
            return Err(Error::InvalidInput(
                "labels/network_ids length must equal row count".into(),
            ));
        }
        if let Some(bad) = features.iter().find(|v| !v.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "non-finite feature value {bad}"
            )));
        }
        let num_classes = labels.iter().copied().max().map_or(0, |c| c as usize + 1);
        Ok(LabeledNodeDataset {
            features,
            n_cols,
            feature_names,
            labels,
            network_ids,
            num_classes,
        })
    }

    pub fn n_rows(&self) -> usize {
        self.labels.len()
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn num_classes(&self) -> usize {
        self.num_classes
    }

    pub fn feature_names(&self) -> &[String] {
        &self.feature_names
    }

    pub fn labels(&self) -> &[u32] {
        &self.labels
    }

    pub fn network_ids(&self) -> &[u32] {
        &self.network_ids
    }

    pub fn features(&self) -> &[f64] {
        &self.features
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[f64] {
        &self.features[i * self.n_cols..(i + 1) * self.n_cols]
    }

    #[inline]
    fn value(&self, row: u32, col: usize) -> f64 {
        self.features[row as usize * self.n_cols + col]
    }

    /// Rows per class, mostly for imbalance reporting.
    pub fn class_counts(&self) -> Vec<usize> {
        let mut counts = vec![0usize; self.num_classes];
        for &l in &self.labels {
            counts[l as usize] += 1;
        }
        counts
    }

    /// Copy of the selected rows, preserving order.
    pub fn subset(&self, rows: &[u32]) -> LabeledNodeDataset {
        let mut features = Vec::with_capacity(rows.len() * self.n_cols);
        let mut labels = Vec::with_capacity(rows.len());
        let mut network_ids = Vec::with_capacity(rows.len());
        for &r in rows {
            features.extend_from_slice(self.row(r as usize));
            labels.push(self.labels[r as usize]);
            network_ids.push(self.network_ids[r as usize]);
        }
        LabeledNodeDataset {
            features,
            n_cols: self.n_cols,
            feature_names: self.feature_names.clone(),
            labels,
            network_ids,
            num_classes: self.num_classes,
        }
    }
}

/// One tree node: an axis-aligned threshold split (`value < threshold` goes
/// left) or a leaf holding per-class sample counts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TreeNode {
    Split {
        feature: u16,
        threshold: f64,
        left: u32,
        right: u32,
    },
    Leaf {
        counts: Vec<u32>,
    },
}

/// A single decision tree; node 0 is the root.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Tree {
    pub nodes: Vec<TreeNode>,
}

impl Tree {
    /// Class votes at the leaf reached by `row`: majority class, tie going to
    /// the lower class id.
    fn predict(&self, row: &[f64]) -> u32 {
        let mut node = 0usize;
        loop {
            match &self.nodes[node] {
                TreeNode::Split {
                    feature,
                    threshold,
                    left,
                    right,
                } => {
                    node = if row[*feature as usize] < *threshold {
                        *left as usize
                    } else {
                        *right as usize
                    };
                }
                TreeNode::Leaf { counts } => {
                    let mut best = 0usize;
                    for (c, &count) in counts.iter().enumerate().skip(1) {
                        if count > counts[best] {
                            best = c;
                        }
                    }
                    return best as u32;
                }
            }
        }
    }
}

/// Trained random forest.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ForestModel {
    pub version: u32,
    pub num_classes: usize,
    pub feature_names: Vec<String>,
    /// Normalized mean impurity decrease per feature; sums to 1 when any
    /// split exists.
    pub importances: Vec<f64>,
    pub config: TrainConfig,
    pub trees: Vec<Tree>,
}

/// Per-row per-class scores, rows summing to 1.
#[derive(Debug, Clone)]
pub struct ClassScores {
    data: Vec<f64>,
    n_classes: usize,
}

impl ClassScores {
    pub fn n_rows(&self) -> usize {
        self.data.len() / self.n_classes
    }

    pub fn n_classes(&self) -> usize {
        self.n_classes
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n_classes..(i + 1) * self.n_classes]
    }
}

/// Bootstrap resample: `n` draws with replacement from `0..n`.
pub fn bootstrap_indices(n: usize, rng: &mut ChaCha8Rng) -> Vec<u32> {
    (0..n).map(|_| rng.random_range(0..n) as u32).collect()
}

#[inline]
fn gini(counts: &[u64], total: f64) -> f64 {
    let mut acc = 1.0;
    for &c in counts {
        let p = c as f64 / total;
        acc -= p * p;
    }
    acc
}

struct TreeBuilder<'a> {
    data: &'a LabeledNodeDataset,
    rng: ChaCha8Rng,
    max_features: usize,
    min_leaf: usize,
    max_depth: usize,
    num_classes: usize,
    nodes: Vec<TreeNode>,
    importance: Vec<f64>,
    n_root: f64,
    // scratch
    pairs: Vec<(f64, u32)>,
    feat_order: Vec<u16>,
    left_buf: Vec<u32>,
    right_buf: Vec<u32>,
}

struct BestSplit {
    decrease: f64,
    feature: u16,
    threshold: f64,
}

// One pending subtree: rows idx[lo..hi] to grow into node `slot`.
struct WorkItem {
    lo: usize,
    hi: usize,
    slot: usize,
    depth: usize,
    counts: Vec<u64>,
}

impl<'a> TreeBuilder<'a> {
    fn build(mut self, mut idx: Vec<u32>) -> (Tree, Vec<f64>) {
        let root_counts = self.class_counts(&idx);
        self.nodes.push(TreeNode::Leaf { counts: vec![] }); // placeholder
        // Explicit work stack: tree depth is unbounded by default and must
        // not translate into call-stack depth.
        let mut work = vec![WorkItem {
            lo: 0,
            hi: idx.len(),
            slot: 0,
            depth: 0,
            counts: root_counts,
        }];
        while let Some(item) = work.pop() {
            self.grow(&mut idx, item, &mut work);
        }
        (Tree { nodes: self.nodes }, self.importance)
    }

    fn class_counts(&self, idx: &[u32]) -> Vec<u64> {
        let mut counts = vec![0u64; self.num_classes];
        for &r in idx {
            counts[self.data.labels()[r as usize] as usize] += 1;
        }
        counts
    }

    fn make_leaf(&mut self, slot: usize, counts: &[u64]) {
        self.nodes[slot] = TreeNode::Leaf {
            counts: counts.iter().map(|&c| c as u32).collect(),
        };
    }

    fn grow(&mut self, idx: &mut [u32], item: WorkItem, work: &mut Vec<WorkItem>) {
        let WorkItem {
            lo,
            hi,
            slot,
            depth,
            counts,
        } = item;
        let n_node = hi - lo;
        let pure = counts.iter().filter(|&&c| c > 0).count() <= 1;
        if pure || n_node < 2 * self.min_leaf || depth >= self.max_depth {
            self.make_leaf(slot, &counts);
            return;
        }
        let parent_gini = gini(&counts, n_node as f64);
        let best = match self.find_best_split(&idx[lo..hi], parent_gini, &counts) {
            Some(b) => b,
            None => {
                self.make_leaf(slot, &counts);
                return;
            }
        };

        self.importance[best.feature as usize] += (n_node as f64 / self.n_root) * best.decrease;

        self.left_buf.clear();
        self.right_buf.clear();
        for &r in &idx[lo..hi] {
            if self.data.value(r, best.feature as usize) < best.threshold {
                self.left_buf.push(r);
            } else {
                self.right_buf.push(r);
            }
        }
        let n_left = self.left_buf.len();
        idx[lo..lo + n_left].copy_from_slice(&self.left_buf);
        idx[lo + n_left..hi].copy_from_slice(&self.right_buf);

        let left_slot = self.nodes.len();
        self.nodes.push(TreeNode::Leaf { counts: vec![] });
        let right_slot = self.nodes.len();
        self.nodes.push(TreeNode::Leaf { counts: vec![] });
        self.nodes[slot] = TreeNode::Split {
            feature: best.feature,
            threshold: best.threshold,
            left: left_slot as u32,
            right: right_slot as u32,
        };

        let left_counts = self.class_counts(&idx[lo..lo + n_left]);
        let mut right_counts = counts;
        for (r, l) in right_counts.iter_mut().zip(&left_counts) {
            *r -= l;
        }
        work.push(WorkItem {
            lo: lo + n_left,
            hi,
            slot: right_slot,
            depth: depth + 1,
            counts: right_counts,
        });
        work.push(WorkItem {
            lo,
            hi: lo + n_left,
            slot: left_slot,
            depth: depth + 1,
            counts: left_counts,
        });
    }

    fn find_best_split(
        &mut self,
        idx: &[u32],
        parent_gini: f64,
        counts: &[u64],
    ) -> Option<BestSplit> {
        let n_node = idx.len() as f64;
        let d = self.feat_order.len();
        // Partial Fisher–Yates: the first max_features entries become the
        // feature sample for this node.
        for i in 0..self.max_features {
            let j = self.rng.random_range(i..d);
            self.feat_order.swap(i, j);
        }

        let mut best: Option<BestSplit> = None;
        let mut left_counts = vec![0u64; self.num_classes];
        for fi in 0..self.max_features {
            let feature = self.feat_order[fi];
            self.pairs.clear();
            for &r in idx {
                self.pairs
                    .push((self.data.value(r, feature as usize), self.data.labels()[r as usize]));
            }
            self.pairs.sort_unstable_by(|a, b| a.0.total_cmp(&b.0));

            left_counts.iter_mut().for_each(|c| *c = 0);
            for i in 0..self.pairs.len() - 1 {
                left_counts[self.pairs[i].1 as usize] += 1;
                let (a, b) = (self.pairs[i].0, self.pairs[i + 1].0);
                if a >= b {
                    continue; // candidate thresholds sit between distinct values
                }
                let n_left = i + 1;
                let n_right = self.pairs.len() - n_left;
                if n_left < self.min_leaf || n_right < self.min_leaf {
                    continue;
                }
                let mut right_counts_g = 0.0;
                {
                    // gini(right) from parent minus left without materializing
                    let total = n_right as f64;
                    let mut acc = 1.0;
                    for (ci, &lc) in left_counts.iter().enumerate() {
                        let rc = counts[ci] - lc;
                        let p = rc as f64 / total;
                        acc -= p * p;
                    }
                    right_counts_g += acc;
                }
                let g_left = gini(&left_counts, n_left as f64);
                let decrease = parent_gini
                    - (n_left as f64 / n_node) * g_left
                    - (n_right as f64 / n_node) * right_counts_g;
                if decrease <= 0.0 {
                    continue;
                }
                let mut threshold = a / 2.0 + b / 2.0;
                if threshold <= a {
                    threshold = b; // midpoint rounded down to a; `< b` still separates
                }
                let better = match &best {
                    None => true,
                    Some(cur) => {
                        decrease > cur.decrease
                            || (decrease == cur.decrease
                                && (feature < cur.feature
                                    || (feature == cur.feature && threshold < cur.threshold)))
                    }
                };
                if better {
                    best = Some(BestSplit {
                        decrease,
                        feature,
                        threshold,
                    });
                }
            }
        }
        best
    }
}

fn train_tree(data: &LabeledNodeDataset, cfg: &TrainConfig, tree_seed: u64) -> (Tree, Vec<f64>) {
    let mut rng = seeds::rng(tree_seed, &[]);
    let idx = bootstrap_indices(data.n_rows(), &mut rng);
    let builder = TreeBuilder {
        data,
        rng,
        max_features: cfg.resolved_max_features(data.n_cols()),
        min_leaf: cfg.min_leaf.max(1),
        max_depth: cfg.max_depth.unwrap_or(usize::MAX),
        num_classes: data.num_classes(),
        nodes: Vec::new(),
        importance: vec![0.0; data.n_cols()],
        n_root: idx.len() as f64,
        pairs: Vec::with_capacity(idx.len()),
        feat_order: (0..data.n_cols() as u16).collect(),
        left_buf: Vec::with_capacity(idx.len()),
        right_buf: Vec::with_capacity(idx.len()),
    };
    builder.build(idx)
}

/// Train a random forest. Requires at least two classes present in the data.
pub fn train_forest(data: &LabeledNodeDataset, cfg: &TrainConfig) -> Result<ForestModel> {
    if data.n_rows() == 0 {
        return Err(Error::InvalidInput("cannot train on empty data".into()));
    }
    if cfg.num_trees == 0 {
        return Err(Error::InvalidInput("num_trees must be at least 1".into()));
    }
    let present = data.class_counts().iter().filter(|&&c| c > 0).count();
    if present < 2 {
        return Err(Error::InvalidInput(format!(
            "training data has {present} class(es); need at least 2"
        )));
    }

    let results: Vec<(Tree, Vec<f64>)> = (0..cfg.num_trees)
        .into_par_iter()
        .map(|t| train_tree(data, cfg, seeds::derive(cfg.seed, &[tags::TREE, t as u64])))
        .collect();

    let d = data.n_cols();
    let mut importances = vec![0.0f64; d];
    let mut trees = Vec::with_capacity(cfg.num_trees);
    for (tree, imp) in results {
        // Per-tree normalization before averaging, so deep trees do not
        // dominate the mean.
        let total: f64 = imp.iter().sum();
        if total > 0.0 {
            for (acc, v) in importances.iter_mut().zip(&imp) {
                *acc += v / total;
            }
        }
        trees.push(tree);
    }
    let total: f64 = importances.iter().sum();
    if total > 0.0 {
        for v in &mut importances {
            *v /= total;
        }
    }

    Ok(ForestModel {
        version: MODEL_FORMAT_VERSION,
        num_classes: data.num_classes(),
        feature_names: data.feature_names().to_vec(),
        importances,
        config: cfg.clone(),
        trees,
    })
}

impl ForestModel {
    /// Per-row per-class score: the fraction of trees voting for each class.
    pub fn predict_proba(&self, rows: &[f64], n_cols: usize) -> Result<ClassScores> {
        if n_cols != self.feature_names.len() {
            return Err(Error::InvalidInput(format!(
                "row width {n_cols} does not match model features {}",
                self.feature_names.len()
            )));
        }
        if rows.len() % n_cols != 0 {
            return Err(Error::InvalidInput(
                "row buffer is not a whole number of rows".into(),
            ));
        }
        let n_rows = rows.len() / n_cols;
        let inv = 1.0 / self.trees.len() as f64;
        let data: Vec<f64> = (0..n_rows)
            .into_par_iter()
            .flat_map_iter(|i| {
                let row = &rows[i * n_cols..(i + 1) * n_cols];
                let mut votes = vec![0u32; self.num_classes];
                for tree in &self.trees {
                    votes[tree.predict(row) as usize] += 1;
                }
                votes.into_iter().map(move |v| v as f64 * inv)
            })
            .collect();
        Ok(ClassScores {
            data,
            n_classes: self.num_classes,
        })
    }

    /// Argmax of [`ForestModel::predict_proba`], ties to the lower class id.
    pub fn predict_label(&self, rows: &[f64], n_cols: usize) -> Result<Vec<u32>> {
        let scores = self.predict_proba(rows, n_cols)?;
        Ok((0..scores.n_rows())
            .map(|i| argmax_lowest(scores.row(i)))
            .collect())
    }

    /// Importances in feature order, as percentages summing to 100.
    pub fn feature_importances_pct(&self) -> Vec<(String, f64)> {
        self.feature_names
            .iter()
            .cloned()
            .zip(self.importances.iter().map(|v| v * 100.0))
            .collect()
    }

    pub fn to_json_writer(&self, w: impl std::io::Write) -> Result<()> {
        serde_json::to_writer(w, self)?;
        Ok(())
    }

    pub fn from_json_reader(r: impl std::io::Read) -> Result<ForestModel> {
        let model: ForestModel = serde_json::from_reader(r)?;
        if model.version != MODEL_FORMAT_VERSION {
            return Err(Error::Format(format!(
                "unsupported model format version {}",
                model.version
            )));
        }
        Ok(model)
    }
}

/// Index of the maximum value, ties going to the lowest index.
pub fn argmax_lowest(values: &[f64]) -> u32 {
    let mut best = 0usize;
    for (i, &v) in values.iter().enumerate().skip(1) {
        if v > values[best] {
            best = i;
        }
    }
    best as u32
}
