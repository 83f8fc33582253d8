//! End-to-end experiment checks on synthetic graphs: separable model pairs
//! score high, same-distribution controls sit at chance.

use netclass::experiments::{
    feature_based_baseline, kfold_node_cv, real_vs_model_experiment, whole_network_classify,
    ExperimentConfig, ExperimentMode,
};
use netclass::graph::{Graph, GraphCollection};
use netclass::models::{gen_ba, gen_er, gen_holme_kim, gen_ws, ModelKind};

fn cfg(mode: ExperimentMode, folds: usize, repeats: usize, seed: u64) -> ExperimentConfig {
    let mut cfg = ExperimentConfig::new(mode, seed);
    cfg.folds = folds;
    cfg.repeats = repeats;
    cfg.train.num_trees = 50;
    cfg
}

#[test]
fn node_cv_separates_er_from_ba() {
    let er = gen_er(500, 1500, 31).unwrap();
    let ba = gen_ba(500, 1500, 32).unwrap();
    let report = kfold_node_cv(&[er, ba], &cfg(ExperimentMode::NodeCv, 5, 1, 33)).unwrap();
    assert!(
        report.accuracy_mean >= 90.0,
        "ER vs BA accuracy {}",
        report.accuracy_mean
    );
}

#[test]
fn real_vs_model_ws_stand_ins_vs_er_separate() {
    // WS keeps lattice clustering that ER lacks.
    let reals: Vec<Graph> = (0..20)
        .map(|i| gen_ws(200, 600, 0.1, 50 + i).unwrap())
        .collect();
    let mut c = cfg(ExperimentMode::RealVsModel, 4, 1, 51);
    c.lightweight = true;
    let (report, _) = real_vs_model_experiment(&reals, ModelKind::Er, &c).unwrap();
    assert!(
        report.accuracy_mean >= 90.0,
        "WS vs ER accuracy {}",
        report.accuracy_mean
    );
}

#[test]
fn real_vs_model_same_kind_is_chance() {
    // Holme-Kim "reals" against freshly drawn Holme-Kim models: identical
    // distributions, so the classifier cannot beat chance.
    let reals: Vec<Graph> = (0..10)
        .map(|i| gen_holme_kim(150, 450, 1.0, 70 + i).unwrap())
        .collect();
    let mut c = cfg(ExperimentMode::RealVsModel, 5, 2, 71);
    c.lightweight = true;
    let (report, _) = real_vs_model_experiment(&reals, ModelKind::HolmeKim, &c).unwrap();
    assert!(
        (report.accuracy_mean - 50.0).abs() <= 5.0,
        "same-kind control accuracy {}",
        report.accuracy_mean
    );
}

#[test]
fn whole_network_separable_classes_reach_full_accuracy() {
    // Triangle-rich vs random graphs separate perfectly at p = 1.
    let mut graphs = Vec::new();
    let mut labels = Vec::new();
    for i in 0..12u64 {
        graphs.push(gen_holme_kim(60, 180, 1.0, 90 + i).unwrap());
        labels.push(0);
        graphs.push(gen_er(60, 180, 190 + i).unwrap());
        labels.push(1);
    }
    let n = graphs.len() as u32;
    let coll = GraphCollection::new(graphs, labels, (0..n).collect());
    let mut c = cfg(ExperimentMode::WholeNetwork, 4, 1, 91);
    c.lightweight = true;
    c.sample_fraction = 1.0;
    let report = whole_network_classify(&coll, &c).unwrap();
    assert_eq!(report.accuracy_mean, 100.0);
}

#[test]
fn baseline_identical_distribution_control_is_chance() {
    // Two "classes" drawn from the same ER ensemble.
    let mut graphs = Vec::new();
    let mut labels = Vec::new();
    for i in 0..100u64 {
        graphs.push(gen_er(60, 150, 300 + i).unwrap());
        labels.push((i % 2) as usize);
    }
    let coll = GraphCollection::new(graphs, labels, (0..100).collect());
    let report =
        feature_based_baseline(&coll, &cfg(ExperimentMode::Baseline, 5, 4, 301)).unwrap();
    assert!(
        (report.accuracy_mean - 50.0).abs() <= 5.0,
        "baseline control accuracy {}",
        report.accuracy_mean
    );
}
