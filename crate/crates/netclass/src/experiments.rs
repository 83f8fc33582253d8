//! Repeated k-fold cross-validation experiments: node-level CV between
//! specific networks, network-level CV over labeled collections, real-vs-model
//! separation, whole-network classification from node samples, and the
//! per-network feature baseline.
//!
//! Fold shuffles, training, model-graph generation, and node sampling all
//! draw from separate derived seed streams, so any fold of any repeat can be
//! re-run in isolation and reports are byte-identical across worker counts.

use std::fmt::Write as _;

use rand::seq::SliceRandom;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::features::{self, extract_features};
use crate::forest::{argmax_lowest, train_forest, ForestModel, LabeledNodeDataset, TrainConfig};
use crate::graph::{Graph, GraphCollection};
use crate::models::{ModelKind, ModelSpec};
use crate::seeds::{self, tags};

/// Which experiment a config drives.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentMode {
    NodeCv,
    NetworkCv,
    RealVsModel,
    WholeNetwork,
    Baseline,
}

fn default_folds() -> usize {
    10
}

fn default_repeats() -> usize {
    10
}

fn default_sample_fraction() -> f64 {
    1.0
}

fn default_score_threshold() -> f64 {
    0.8
}

/// Experiment configuration; serializable as the CLI's JSON config surface.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub mode: ExperimentMode,
    #[serde(default = "default_folds")]
    pub folds: usize,
    #[serde(default = "default_repeats")]
    pub repeats: usize,
    #[serde(default)]
    pub lightweight: bool,
    /// Fraction of nodes sampled per network for whole-network scoring.
    #[serde(default = "default_sample_fraction")]
    pub sample_fraction: f64,
    #[serde(default = "default_score_threshold")]
    pub score_threshold: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub model_spec: Option<ModelSpec>,
    pub seed: u64,
    #[serde(default)]
    pub train: TrainConfig,
    /// Collect per-test-node scores (distribution plot data).
    #[serde(default)]
    pub collect_node_scores: bool,
}

impl ExperimentConfig {
    pub fn new(mode: ExperimentMode, seed: u64) -> ExperimentConfig {
        ExperimentConfig {
            mode,
            folds: default_folds(),
            repeats: default_repeats(),
            lightweight: false,
            sample_fraction: default_sample_fraction(),
            score_threshold: default_score_threshold(),
            model_spec: None,
            seed,
            train: TrainConfig::default(),
            collect_node_scores: false,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.folds < 2 {
            return Err(Error::InvalidInput("folds must be at least 2".into()));
        }
        if self.repeats < 1 {
            return Err(Error::InvalidInput("repeats must be at least 1".into()));
        }
        if !(self.sample_fraction > 0.0 && self.sample_fraction <= 1.0) {
            return Err(Error::InvalidInput(
                "sample_fraction must be in (0, 1]".into(),
            ));
        }
        Ok(())
    }
}

/// One trained fold of one repeat.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FoldRecord {
    pub repeat: usize,
    pub fold: usize,
    /// Percent correct over the fold's pooled test units.
    pub accuracy: f64,
    pub n_test: usize,
    /// Fingerprint of the serialized model, for reproducibility audits.
    pub model_hash: String,
}

/// Cross-validation report: accuracy statistics, per-fold detail, and
/// averaged feature importances (percent).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CvReport {
    pub mode: ExperimentMode,
    pub accuracy_mean: f64,
    pub accuracy_std: f64,
    pub per_fold_accuracies: Vec<f64>,
    pub folds_detail: Vec<FoldRecord>,
    pub class_names: Vec<String>,
    /// Rows per class in the full dataset; imbalance stays visible.
    pub class_row_counts: Vec<usize>,
    pub feature_names: Vec<String>,
    pub feature_importance_mean: Vec<f64>,
    pub feature_importance_std: Vec<f64>,
    /// Realized sizes of generated model graphs (real-vs-model runs).
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub generated_models: Vec<GeneratedModelInfo>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
    pub config: ExperimentConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneratedModelInfo {
    pub repeat: usize,
    pub real_index: usize,
    pub n: usize,
    pub m: usize,
}

/// Score row for one test node of one fold (distribution plot data).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NodeScore {
    pub repeat: usize,
    pub fold: usize,
    pub network_id: u32,
    pub node_id: u32,
    pub true_label: u32,
    pub scores: Vec<f64>,
}

impl CvReport {
    pub fn to_json_pretty(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// CSV `fold,repeat,accuracy`.
    pub fn write_folds_csv(&self, mut w: impl std::io::Write) -> std::io::Result<()> {
        writeln!(w, "fold,repeat,accuracy")?;
        for rec in &self.folds_detail {
            writeln!(w, "{},{},{}", rec.fold, rec.repeat, rec.accuracy)?;
        }
        Ok(())
    }

    /// CSV `feature,importance_mean,importance_std` (percent).
    pub fn write_importances_csv(&self, mut w: impl std::io::Write) -> std::io::Result<()> {
        writeln!(w, "feature,importance_mean,importance_std")?;
        for (i, name) in self.feature_names.iter().enumerate() {
            writeln!(
                w,
                "{name},{},{}",
                self.feature_importance_mean[i], self.feature_importance_std[i]
            )?;
        }
        Ok(())
    }
}

/// CSV dump of per-node scores: one column per class.
pub fn write_node_scores_csv(
    scores: &[NodeScore],
    class_names: &[String],
    mut w: impl std::io::Write,
) -> std::io::Result<()> {
    write!(w, "repeat,fold,network_id,node_id,true_label")?;
    for name in class_names {
        write!(w, ",score_{name}")?;
    }
    writeln!(w)?;
    for s in scores {
        write!(
            w,
            "{},{},{},{},{}",
            s.repeat, s.fold, s.network_id, s.node_id, s.true_label
        )?;
        for v in &s.scores {
            write!(w, ",{v}")?;
        }
        writeln!(w)?;
    }
    Ok(())
}

fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

fn population_std(values: &[f64], mean: f64) -> f64 {
    (values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / values.len() as f64).sqrt()
}

fn model_hash(model: &ForestModel) -> String {
    let bytes = serde_json::to_vec(model).expect("model serializes");
    let digest = Sha256::digest(&bytes);
    let mut hex = String::with_capacity(16);
    for b in digest.iter().take(8) {
        let _ = write!(hex, "{b:02x}");
    }
    hex
}

/// Stratified fold assignment: every class's units are dealt round-robin over
/// a shuffled position permutation, so every unit lands in exactly one fold
/// and class balance holds per fold. Classes of equal size share one
/// permutation; units mirrored across such classes (the i-th member of each)
/// stay in the same fold. The chance-level control of a network against an
/// identical copy of itself depends on that alignment: once twin rows split
/// between train and test, a full-depth forest memorizes each twin's opposite
/// label and accuracy collapses far below chance. Errors when some class has
/// fewer units than folds.
pub fn stratified_folds(
    labels: &[usize],
    folds: usize,
    rng: &mut rand_chacha::ChaCha8Rng,
) -> Result<Vec<u32>> {
    let num_classes = labels.iter().copied().max().map_or(0, |c| c + 1);
    let mut assignment = vec![0u32; labels.len()];
    let mut perm_by_size: std::collections::BTreeMap<usize, Vec<usize>> =
        std::collections::BTreeMap::new();
    for class in 0..num_classes {
        let members: Vec<usize> = (0..labels.len()).filter(|&i| labels[i] == class).collect();
        if members.len() < folds {
            return Err(Error::InvalidInput(format!(
                "class {class} has {} unit(s); need at least {folds} for {folds}-fold CV",
                members.len()
            )));
        }
        let perm = perm_by_size.entry(members.len()).or_insert_with(|| {
            let mut p: Vec<usize> = (0..members.len()).collect();
            p.shuffle(rng);
            p
        });
        for (i, &unit) in members.iter().enumerate() {
            assignment[unit] = (perm[i] % folds) as u32;
        }
    }
    Ok(assignment)
}

/// Concatenate per-node features over all graphs of a collection, tagging
/// each row with the graph's class label and origin network id. Per-graph
/// community detection is seeded from `seed` and the graph index.
pub fn build_node_dataset(
    collection: &GraphCollection,
    lightweight: bool,
    seed: u64,
) -> Result<(LabeledNodeDataset, Vec<String>)> {
    if collection.is_empty() {
        return Err(Error::InvalidInput("empty graph collection".into()));
    }
    let mut warnings = Vec::new();
    let matrices: Vec<_> = collection
        .graphs
        .par_iter()
        .enumerate()
        .map(|(i, g)| {
            extract_features(g, lightweight, seeds::derive(seed, &[tags::FEATURES, i as u64]))
        })
        .collect();

    let n_cols = matrices[0].n_cols();
    let names: Vec<String> = matrices[0]
        .feature_names()
        .iter()
        .map(|s| s.to_string())
        .collect();
    let total_rows: usize = matrices.iter().map(|m| m.n_rows()).sum();
    let mut data = Vec::with_capacity(total_rows * n_cols);
    let mut labels = Vec::with_capacity(total_rows);
    let mut network_ids = Vec::with_capacity(total_rows);
    for (i, m) in matrices.iter().enumerate() {
        if m.n_rows() == 0 {
            warnings.push(format!(
                "graph {} (origin {}) has no nodes; contributes no rows",
                i, collection.origin_ids[i]
            ));
        }
        data.extend_from_slice(m.data());
        labels.extend(std::iter::repeat(collection.labels[i] as u32).take(m.n_rows()));
        network_ids.extend(std::iter::repeat(collection.origin_ids[i]).take(m.n_rows()));
    }
    let dataset = LabeledNodeDataset::new(data, n_cols, names, labels, network_ids)?;
    Ok((dataset, warnings))
}

struct FoldRun {
    repeat: usize,
    fold: usize,
    model_hash: String,
    /// One (accuracy, n_test) per view: a single node-level view, or one per
    /// sample fraction for whole-network scoring.
    accuracies: Vec<(f64, usize)>,
    importances: Vec<f64>,
    node_scores: Vec<NodeScore>,
}

/// Shared CV core: trains one forest per (repeat, fold) on the training rows
/// and scores the held-out rows. With `fractions` set, the accuracy unit
/// switches from pooled test nodes to whole test networks scored by averaged
/// sampled node probabilities, one evaluation per fraction off the same
/// trained model.
struct CvEngine<'a> {
    dataset: &'a LabeledNodeDataset,
    cfg: &'a ExperimentConfig,
    /// Label per fold unit (row or network).
    unit_labels: Vec<usize>,
    /// Row -> graph index; `None` means rows are the fold units themselves.
    network_of_row: Option<Vec<usize>>,
    network_labels: Option<Vec<usize>>,
    /// Sample fractions for whole-network scoring; `None` = node accuracy.
    fractions: Option<Vec<f64>>,
}

impl<'a> CvEngine<'a> {
    fn run(&self) -> Result<(Vec<FoldRun>, Vec<String>)> {
        let cfg = self.cfg;
        let mut warnings = Vec::new();
        let mut runs = Vec::with_capacity(cfg.repeats * cfg.folds);
        for repeat in 0..cfg.repeats {
            let mut rng = seeds::rng(cfg.seed, &[tags::FOLD_SHUFFLE, repeat as u64]);
            let unit_folds = stratified_folds(&self.unit_labels, cfg.folds, &mut rng)?;
            let fold_of_row: Vec<u32> = match &self.network_of_row {
                None => unit_folds.clone(),
                Some(net_of_row) => net_of_row.iter().map(|&n| unit_folds[n]).collect(),
            };
            debug_assert_eq!(fold_of_row.len(), self.dataset.n_rows());

            for fold in 0..cfg.folds {
                let (run, mut warn) = self.run_fold(repeat, fold, &fold_of_row, &unit_folds)?;
                warnings.append(&mut warn);
                runs.push(run);
            }
        }
        Ok((runs, warnings))
    }

    fn run_fold(
        &self,
        repeat: usize,
        fold: usize,
        fold_of_row: &[u32],
        unit_folds: &[u32],
    ) -> Result<(FoldRun, Vec<String>)> {
        let cfg = self.cfg;
        let mut warnings = Vec::new();
        let train_rows: Vec<u32> = (0..self.dataset.n_rows() as u32)
            .filter(|&r| fold_of_row[r as usize] != fold as u32)
            .collect();
        let test_rows: Vec<u32> = (0..self.dataset.n_rows() as u32)
            .filter(|&r| fold_of_row[r as usize] == fold as u32)
            .collect();
        if train_rows.is_empty() || test_rows.is_empty() {
            return Err(Error::InvalidInput(format!(
                "fold {fold} of repeat {repeat} has an empty train or test side"
            )));
        }
        let train_data = self.dataset.subset(&train_rows);
        let train_cfg = cfg
            .train
            .with_seed(seeds::derive(cfg.seed, &[tags::TRAIN, repeat as u64, fold as u64]));
        let model = train_forest(&train_data, &train_cfg)?;
        let hash = model_hash(&model);

        let test_data = self.dataset.subset(&test_rows);
        let scores = model.predict_proba(test_data.features(), test_data.n_cols())?;

        let mut node_scores = Vec::new();
        if cfg.collect_node_scores {
            for (i, &row) in test_rows.iter().enumerate() {
                node_scores.push(NodeScore {
                    repeat,
                    fold,
                    network_id: self.dataset.network_ids()[row as usize],
                    node_id: row,
                    true_label: self.dataset.labels()[row as usize],
                    scores: scores.row(i).to_vec(),
                });
            }
        }

        let accuracies = match &self.fractions {
            Some(fractions) => {
                let mut per_fraction = Vec::with_capacity(fractions.len());
                for &p in fractions {
                    let (correct, total, mut warn) =
                        self.score_networks(repeat, fold, &test_rows, &scores, unit_folds, p);
                    warnings.append(&mut warn);
                    per_fraction.push((100.0 * correct as f64 / total as f64, total));
                }
                per_fraction
            }
            None => {
                let mut correct = 0usize;
                for (i, &row) in test_rows.iter().enumerate() {
                    if argmax_lowest(scores.row(i)) == self.dataset.labels()[row as usize] {
                        correct += 1;
                    }
                }
                vec![(
                    100.0 * correct as f64 / test_rows.len() as f64,
                    test_rows.len(),
                )]
            }
        };

        Ok((
            FoldRun {
                repeat,
                fold,
                model_hash: hash,
                accuracies,
                importances: model.importances.clone(),
                node_scores,
            },
            warnings,
        ))
    }

    // Whole-network scoring: per test network, average the class scores of a
    // uniform sample of ceil(p * n) of its rows (at least one); the predicted
    // label is the argmax of the averaged scores, ties to the lower class.
    // The sampling stream depends on (repeat, fold, network) but not on p.
    fn score_networks(
        &self,
        repeat: usize,
        fold: usize,
        test_rows: &[u32],
        scores: &crate::forest::ClassScores,
        unit_folds: &[u32],
        fraction: f64,
    ) -> (usize, usize, Vec<String>) {
        let cfg = self.cfg;
        let net_of_row = self
            .network_of_row
            .as_ref()
            .expect("network-level accuracy requires network folds");
        let net_labels = self.network_labels.as_ref().expect("network labels");
        let mut warnings = Vec::new();

        // Score-matrix positions of each test network's rows, in row order.
        let mut rows_of_net: std::collections::BTreeMap<usize, Vec<usize>> =
            std::collections::BTreeMap::new();
        for (i, &row) in test_rows.iter().enumerate() {
            rows_of_net
                .entry(net_of_row[row as usize])
                .or_default()
                .push(i);
        }

        let mut correct = 0usize;
        let mut total = 0usize;
        for (net, unit_fold) in unit_folds.iter().enumerate() {
            if *unit_fold != fold as u32 {
                continue;
            }
            total += 1;
            let rows = rows_of_net.get(&net).map(Vec::as_slice).unwrap_or(&[]);
            if rows.is_empty() {
                warnings.push(format!(
                    "repeat {repeat} fold {fold}: network {net} is empty; counted as misclassified"
                ));
                continue;
            }
            let want = ((fraction * rows.len() as f64).ceil() as usize).clamp(1, rows.len());
            let mut rng = seeds::rng(
                cfg.seed,
                &[tags::SAMPLE, repeat as u64, fold as u64, net as u64],
            );
            let picked = rand::seq::index::sample(&mut rng, rows.len(), want);
            let mut avg = vec![0.0f64; scores.n_classes()];
            for k in picked.iter() {
                for (a, s) in avg.iter_mut().zip(scores.row(rows[k])) {
                    *a += s;
                }
            }
            for a in &mut avg {
                *a /= want as f64;
            }
            if argmax_lowest(&avg) as usize == net_labels[net] {
                correct += 1;
            }
        }
        (correct, total, warnings)
    }
}

// Build one report from the runs' `view`-th accuracy column (node-level runs
// have a single view; whole-network runs have one per sample fraction).
fn summarize_view(
    mode: ExperimentMode,
    cfg: &ExperimentConfig,
    dataset: &LabeledNodeDataset,
    class_names: Vec<String>,
    runs: &[FoldRun],
    view: usize,
    warnings: Vec<String>,
    generated_models: Vec<GeneratedModelInfo>,
) -> CvReport {
    let per_fold: Vec<f64> = runs.iter().map(|r| r.accuracies[view].0).collect();
    let acc_mean = mean(&per_fold);
    let acc_std = population_std(&per_fold, acc_mean);

    let d = dataset.n_cols();
    let mut imp_mean = vec![0.0f64; d];
    for run in runs {
        for (acc, v) in imp_mean.iter_mut().zip(&run.importances) {
            *acc += v * 100.0;
        }
    }
    for v in &mut imp_mean {
        *v /= runs.len() as f64;
    }
    let mut imp_std = vec![0.0f64; d];
    for run in runs {
        for ((s, &m), v) in imp_std.iter_mut().zip(&imp_mean).zip(&run.importances) {
            let x = v * 100.0 - m;
            *s += x * x;
        }
    }
    for v in &mut imp_std {
        *v = (*v / runs.len() as f64).sqrt();
    }

    let folds_detail: Vec<FoldRecord> = runs
        .iter()
        .map(|run| FoldRecord {
            repeat: run.repeat,
            fold: run.fold,
            accuracy: run.accuracies[view].0,
            n_test: run.accuracies[view].1,
            model_hash: run.model_hash.clone(),
        })
        .collect();

    CvReport {
        mode,
        accuracy_mean: acc_mean,
        accuracy_std: acc_std,
        per_fold_accuracies: per_fold,
        folds_detail,
        class_names,
        class_row_counts: dataset.class_counts(),
        feature_names: dataset.feature_names().to_vec(),
        feature_importance_mean: imp_mean,
        feature_importance_std: imp_std,
        generated_models,
        warnings,
        config: cfg.clone(),
    }
}

fn drain_node_scores(runs: &mut [FoldRun]) -> Vec<NodeScore> {
    let mut node_scores = Vec::new();
    for run in runs {
        node_scores.append(&mut run.node_scores);
    }
    node_scores
}

/// Node-level CV between k specific graphs: nodes are labeled by the graph
/// they belong to and folds partition nodes, stratified by label.
pub fn kfold_node_cv(graphs: &[Graph], cfg: &ExperimentConfig) -> Result<CvReport> {
    cfg.validate()?;
    if graphs.len() < 2 {
        return Err(Error::InvalidInput(
            "node-level CV needs at least two graphs".into(),
        ));
    }
    for (i, g) in graphs.iter().enumerate() {
        if g.n() < cfg.folds {
            return Err(Error::InvalidInput(format!(
                "graph {i} has {} node(s); need at least {}",
                g.n(),
                cfg.folds
            )));
        }
    }
    let collection = GraphCollection::new(
        graphs.to_vec(),
        (0..graphs.len()).collect(),
        (0..graphs.len() as u32).collect(),
    );
    let (dataset, mut warnings) = build_node_dataset(&collection, cfg.lightweight, cfg.seed)?;
    let engine = CvEngine {
        dataset: &dataset,
        cfg,
        unit_labels: dataset.labels().iter().map(|&l| l as usize).collect(),
        network_of_row: None,
        network_labels: None,
        fractions: None,
    };
    let (runs, mut warn) = engine.run()?;
    warnings.append(&mut warn);
    let class_names = (0..graphs.len()).map(|i| format!("graph_{i}")).collect();
    Ok(summarize_view(
        ExperimentMode::NodeCv,
        cfg,
        &dataset,
        class_names,
        &runs,
        0,
        warnings,
        Vec::new(),
    ))
}

fn network_cv_impl(
    mode: ExperimentMode,
    collection: &GraphCollection,
    class_names: Vec<String>,
    cfg: &ExperimentConfig,
    fractions: Option<Vec<f64>>,
) -> Result<(Vec<CvReport>, Vec<NodeScore>)> {
    cfg.validate()?;
    let (dataset, mut warnings) = build_node_dataset(collection, cfg.lightweight, cfg.seed)?;
    let mut net_of_row = Vec::with_capacity(dataset.n_rows());
    for (i, g) in collection.graphs.iter().enumerate() {
        net_of_row.extend(std::iter::repeat(i).take(g.n()));
    }
    let views: Vec<Option<f64>> = match &fractions {
        None => vec![None],
        Some(fs) => fs.iter().map(|&p| Some(p)).collect(),
    };
    let engine = CvEngine {
        dataset: &dataset,
        cfg,
        unit_labels: collection.labels.clone(),
        network_of_row: Some(net_of_row),
        network_labels: Some(collection.labels.clone()),
        fractions,
    };
    let (mut runs, mut warn) = engine.run()?;
    warnings.append(&mut warn);
    let node_scores = drain_node_scores(&mut runs);
    let reports = views
        .iter()
        .enumerate()
        .map(|(view, p)| {
            let mut view_cfg = cfg.clone();
            if let Some(p) = p {
                view_cfg.sample_fraction = *p;
            }
            summarize_view(
                mode,
                &view_cfg,
                &dataset,
                class_names.clone(),
                &runs,
                view,
                warnings.clone(),
                Vec::new(),
            )
        })
        .collect();
    Ok((reports, node_scores))
}

fn dense_class_names(num_classes: usize) -> Vec<String> {
    (0..num_classes).map(|c| format!("class_{c}")).collect()
}

/// Network-level CV over a labeled collection: folds partition networks
/// (stratified by class); the classifier trains on all nodes of the training
/// networks and fold accuracy pools all test nodes.
pub fn kfold_network_cv(collection: &GraphCollection, cfg: &ExperimentConfig) -> Result<CvReport> {
    kfold_network_cv_with_scores(collection, cfg).map(|(report, _)| report)
}

/// Like [`kfold_network_cv`] but also returns the per-test-node score dump
/// (empty unless `cfg.collect_node_scores` is set).
pub fn kfold_network_cv_with_scores(
    collection: &GraphCollection,
    cfg: &ExperimentConfig,
) -> Result<(CvReport, Vec<NodeScore>)> {
    network_cv_impl(
        ExperimentMode::NetworkCv,
        collection,
        dense_class_names(collection.num_classes),
        cfg,
        None,
    )
    .map(|(mut reports, scores)| (reports.remove(0), scores))
}

/// Real-vs-model: every repeat pairs each real graph with a freshly generated
/// matched model graph (label 0 = model, 1 = real) and runs one network-fold
/// pass; fold accuracies from all repeats pool into one report.
pub fn real_vs_model_experiment(
    reals: &[Graph],
    kind: ModelKind,
    cfg: &ExperimentConfig,
) -> Result<(CvReport, Vec<NodeScore>)> {
    cfg.validate()?;
    if reals.is_empty() {
        return Err(Error::InvalidInput("need at least one real graph".into()));
    }

    let mut all_runs: Vec<FoldRun> = Vec::new();
    let mut all_warnings: Vec<String> = Vec::new();
    let mut generated = Vec::new();
    let mut last_dataset: Option<LabeledNodeDataset> = None;

    for repeat in 0..cfg.repeats {
        let mut graphs = Vec::new();
        let mut labels = Vec::new();
        let mut origin_ids = Vec::new();
        for (i, real) in reals.iter().enumerate() {
            let model_seed = seeds::derive(cfg.seed, &[tags::MODEL_GRAPH, repeat as u64, i as u64]);
            let spec = match cfg.model_spec.as_ref() {
                Some(base) => {
                    let mut s = base.clone();
                    s.kind = kind;
                    s.n = real.n();
                    s.m = real.m();
                    if kind == ModelKind::Configuration {
                        s.degree_sequence = Some(real.degree_sequence());
                    }
                    s.with_seed(model_seed)
                }
                None => ModelSpec::matched(kind, real, model_seed),
            };
            match spec.generate() {
                Ok(model_graph) => {
                    generated.push(GeneratedModelInfo {
                        repeat,
                        real_index: i,
                        n: model_graph.n(),
                        m: model_graph.m(),
                    });
                    graphs.push(real.clone());
                    labels.push(1usize);
                    origin_ids.push((2 * i) as u32);
                    graphs.push(model_graph);
                    labels.push(0usize);
                    origin_ids.push((2 * i + 1) as u32);
                }
                Err(e) => {
                    // Skip the real twin too, keeping the classes paired.
                    all_warnings.push(format!(
                        "repeat {repeat}: generator failed for real graph {i}: {e}; pair skipped"
                    ));
                }
            }
        }
        if graphs.is_empty() {
            all_warnings.push(format!("repeat {repeat}: no model graphs generated; skipped"));
            continue;
        }
        let collection = GraphCollection::new(graphs, labels, origin_ids);

        // Fresh graphs per repeat need fresh features; run the engine for a
        // single repeat with a repeat-specific seed stream.
        let repeat_cfg = ExperimentConfig {
            repeats: 1,
            seed: seeds::derive(cfg.seed, &[tags::MODEL_GRAPH, repeat as u64]),
            ..cfg.clone()
        };
        let (dataset, warnings) =
            build_node_dataset(&collection, repeat_cfg.lightweight, repeat_cfg.seed)?;
        all_warnings.extend(warnings);
        let mut net_of_row = Vec::with_capacity(dataset.n_rows());
        for (i, g) in collection.graphs.iter().enumerate() {
            net_of_row.extend(std::iter::repeat(i).take(g.n()));
        }
        let engine = CvEngine {
            dataset: &dataset,
            cfg: &repeat_cfg,
            unit_labels: collection.labels.clone(),
            network_of_row: Some(net_of_row),
            network_labels: Some(collection.labels.clone()),
            fractions: None,
        };
        let (runs, warn) = engine.run()?;
        all_warnings.extend(warn);
        for mut run in runs {
            // The engine numbered everything repeat 0; restore the outer index.
            run.repeat = repeat;
            for s in &mut run.node_scores {
                s.repeat = repeat;
            }
            all_runs.push(run);
        }
        last_dataset = Some(dataset);
    }

    let dataset = last_dataset
        .ok_or_else(|| Error::GeneratorFailed("all repeats failed to generate models".into()))?;
    let class_names = vec![kind.name().to_string(), "real".to_string()];
    let node_scores = drain_node_scores(&mut all_runs);
    let report = summarize_view(
        ExperimentMode::RealVsModel,
        cfg,
        &dataset,
        class_names,
        &all_runs,
        0,
        all_warnings,
        generated,
    );
    Ok((report, node_scores))
}

/// Whole-network classification: training is identical to
/// [`kfold_network_cv`]; fold accuracy counts test networks whose averaged
/// sampled node scores pick the right label.
pub fn whole_network_classify(
    collection: &GraphCollection,
    cfg: &ExperimentConfig,
) -> Result<CvReport> {
    whole_network_classify_multi(collection, cfg, &[cfg.sample_fraction])
        .map(|mut reports| reports.remove(0))
}

/// Whole-network classification evaluated at several sample fractions off the
/// same trained models (one report per fraction, identical fold models).
pub fn whole_network_classify_multi(
    collection: &GraphCollection,
    cfg: &ExperimentConfig,
    fractions: &[f64],
) -> Result<Vec<CvReport>> {
    if fractions.is_empty() {
        return Err(Error::InvalidInput("no sample fractions given".into()));
    }
    for &p in fractions {
        if !(p > 0.0 && p <= 1.0) {
            return Err(Error::InvalidInput(format!(
                "sample fraction {p} outside (0, 1]"
            )));
        }
    }
    network_cv_impl(
        ExperimentMode::WholeNetwork,
        collection,
        dense_class_names(collection.num_classes),
        cfg,
        Some(fractions.to_vec()),
    )
    .map(|(reports, _)| reports)
}

/// Per-network feature names for the baseline classifier.
pub const BASELINE_FEATURE_NAMES: [&str; 6] = [
    "avg_degree",
    "triangles",
    "avg_clustering",
    "assortativity",
    "density",
    "transitivity",
];

/// Degree assortativity: Pearson correlation of endpoint degrees over all
/// directed edge instances. `None` when degenerate (no edges or zero degree
/// variance).
pub fn degree_assortativity(g: &Graph) -> Option<f64> {
    if g.m() == 0 {
        return None;
    }
    let mut sx = 0.0f64;
    let mut sxx = 0.0f64;
    let mut sxy = 0.0f64;
    let count = (2 * g.m()) as f64;
    for (u, v) in g.edges() {
        let (du, dv) = (g.degree(u) as f64, g.degree(v) as f64);
        sx += du + dv;
        sxx += du * du + dv * dv;
        sxy += 2.0 * du * dv;
    }
    let mean = sx / count;
    let var = sxx / count - mean * mean;
    if var <= 1e-12 {
        return None;
    }
    Some((sxy / count - mean * mean) / var)
}

/// Whole-graph feature row for the baseline classifier; the flag reports an
/// undefined assortativity that was substituted with 0.
pub fn baseline_features(g: &Graph) -> (Vec<f64>, bool) {
    let n = g.n().max(1) as f64;
    let m = g.m() as f64;
    let (tri, triples) = g.triangles_and_triples();
    let transitivity = if triples > 0 {
        3.0 * tri as f64 / triples as f64
    } else {
        0.0
    };
    let avg_clustering = if g.n() == 0 {
        0.0
    } else {
        mean(&features::local_clustering(g))
    };
    let density = if g.n() > 1 {
        2.0 * m / (n * (n - 1.0))
    } else {
        0.0
    };
    let (assort, flagged) = match degree_assortativity(g) {
        Some(a) => (a, false),
        None => (0.0, true),
    };
    (
        vec![2.0 * m / n, tri as f64, avg_clustering, assort, density, transitivity],
        flagged,
    )
}

/// Feature-based whole-network baseline: one row per network, evaluated with
/// network-level folds (here each row is its own fold unit).
pub fn feature_based_baseline(
    collection: &GraphCollection,
    cfg: &ExperimentConfig,
) -> Result<CvReport> {
    cfg.validate()?;
    if collection.is_empty() {
        return Err(Error::InvalidInput("empty graph collection".into()));
    }
    let mut warnings = Vec::new();
    let rows: Vec<(Vec<f64>, bool)> = collection.graphs.par_iter().map(baseline_features).collect();
    let mut data = Vec::with_capacity(rows.len() * BASELINE_FEATURE_NAMES.len());
    for (i, (row, flagged)) in rows.iter().enumerate() {
        if *flagged {
            warnings.push(format!(
                "graph {i} (origin {}): assortativity undefined, set to 0",
                collection.origin_ids[i]
            ));
        }
        data.extend_from_slice(row);
    }
    let dataset = LabeledNodeDataset::new(
        data,
        BASELINE_FEATURE_NAMES.len(),
        BASELINE_FEATURE_NAMES.iter().map(|s| s.to_string()).collect(),
        collection.labels.iter().map(|&l| l as u32).collect(),
        collection.origin_ids.clone(),
    )?;
    let engine = CvEngine {
        dataset: &dataset,
        cfg,
        unit_labels: collection.labels.clone(),
        network_of_row: None,
        network_labels: None,
        fractions: None,
    };
    let (runs, mut warn) = engine.run()?;
    warnings.append(&mut warn);
    Ok(summarize_view(
        ExperimentMode::Baseline,
        cfg,
        &dataset,
        dense_class_names(collection.num_classes),
        &runs,
        0,
        warnings,
        Vec::new(),
    ))
}
