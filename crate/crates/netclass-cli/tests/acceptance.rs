//! Acceptance suite: one test per criterion, each printing a PASS/FAIL line
//! (visible with `--nocapture`; failures always show the detail).
//!
//! Criteria 1, 2, 5 and 6 evaluate the TU benchmark datasets (IMDB-BINARY,
//! IMDB-MULTI, REDDIT-BINARY, COLLAB) expected under `data/` in the workspace
//! root or under `$NETCLASS_DATA_DIR`; the README documents the layout. The
//! two large datasets run a 2-fold x 1-repeat protocol to stay inside a small
//! CI budget; tolerances are unchanged.

use std::path::{Path, PathBuf};
use std::process::Command;
use std::sync::LazyLock;
use std::time::Instant;

use netclass::bootstrap::{
    grow_network, train_realness_forest, AttachmentKind, GrowthConfig, GrowthStatus,
};
use netclass::experiments::{
    kfold_network_cv, kfold_node_cv, real_vs_model_experiment, whole_network_classify_multi,
    CvReport, ExperimentConfig, ExperimentMode,
};
use netclass::features::{
    betweenness, closeness, coreness, eigenvector_centrality, local_clustering,
};
use netclass::forest::TrainConfig;
use netclass::graph::{ego_network, load_tu_dataset, Graph, TuDataset};
use netclass::models::{gen_ba, gen_configuration, gen_er, gen_holme_kim, gen_ws};

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

const MASTER_SEED: u64 = 20260810;

fn check(criterion: &str, pass: bool, detail: &str) {
    println!(
        "criterion {criterion}: {} - {detail}",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass, "criterion {criterion} failed: {detail}");
}

fn data_dir() -> PathBuf {
    match std::env::var_os("NETCLASS_DATA_DIR") {
        Some(dir) => PathBuf::from(dir),
        None => Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data"),
    }
}

fn load_benchmark(name: &str) -> TuDataset {
    let dir = data_dir().join(name);
    let ds = load_tu_dataset(&dir, name).unwrap_or_else(|e| {
        panic!(
            "benchmark dataset {name} not usable at {}: {e}\n\
             place the TU-format files there (see README, section Datasets)",
            dir.display()
        )
    });
    // Independent shape oracle: the loader's graph count must equal the
    // label-file line count.
    let labels = std::fs::read_to_string(dir.join(format!("{name}_graph_labels.txt"))).unwrap();
    let expected = labels.lines().filter(|l| !l.trim().is_empty()).count();
    assert_eq!(ds.collection.len(), expected, "{name} graph count");
    ds
}

fn rank_of(report: &CvReport, feature: &str) -> usize {
    let target = report
        .feature_names
        .iter()
        .position(|n| n == feature)
        .expect("feature present");
    let mine = report.feature_importance_mean[target];
    1 + report
        .feature_importance_mean
        .iter()
        .filter(|&&v| v > mine)
        .count()
}

// ---------------------------------------------------------------------------
// Criterion 1: IMDB-BINARY node-level accuracy, 10x10-fold network CV,
// within +/-5 points of 72.33 (lightweight: 72.77), under 10 minutes.
// ---------------------------------------------------------------------------

#[test]
fn criterion_01_imdb_binary_node_accuracy() {
    let ds = load_benchmark("IMDB-BINARY");
    let t0 = Instant::now();
    let mut cfg = ExperimentConfig::new(ExperimentMode::NetworkCv, MASTER_SEED);
    cfg.folds = 10;
    cfg.repeats = 10;
    let full = kfold_network_cv(&ds.collection, &cfg).unwrap();
    let full_elapsed = t0.elapsed();

    cfg.lightweight = true;
    let light = kfold_network_cv(&ds.collection, &cfg).unwrap();

    let pass_full = (full.accuracy_mean - 72.33).abs() <= 5.0;
    let pass_light = (light.accuracy_mean - 72.77).abs() <= 5.0;
    let pass_time = full_elapsed.as_secs_f64() < 600.0;
    check(
        "1",
        pass_full && pass_light && pass_time,
        &format!(
            "IMDB-BINARY 10x10: full {:.2}+/-{:.2} (target 72.33+/-5), \
             lightweight {:.2}+/-{:.2} (target 72.77+/-5), full run {:.0}s (< 600s)",
            full.accuracy_mean,
            full.accuracy_std,
            light.accuracy_mean,
            light.accuracy_std,
            full_elapsed.as_secs_f64()
        ),
    );
}

// ---------------------------------------------------------------------------
// Criterion 2: IMDB-MULTI within +/-5 of 52.03 (multi-class path).
// ---------------------------------------------------------------------------

#[test]
fn criterion_02_imdb_multi_node_accuracy() {
    let ds = load_benchmark("IMDB-MULTI");
    assert_eq!(ds.collection.num_classes, 3);
    let mut cfg = ExperimentConfig::new(ExperimentMode::NetworkCv, MASTER_SEED);
    cfg.folds = 10;
    cfg.repeats = 10;
    let report = kfold_network_cv(&ds.collection, &cfg).unwrap();
    check(
        "2",
        (report.accuracy_mean - 52.03).abs() <= 5.0,
        &format!(
            "IMDB-MULTI 10x10: {:.2}+/-{:.2} (target 52.03+/-5)",
            report.accuracy_mean, report.accuracy_std
        ),
    );
}

// ---------------------------------------------------------------------------
// Criterion 3: same-distribution controls sit at chance level.
// ---------------------------------------------------------------------------

#[test]
fn criterion_03_same_distribution_controls() {
    let g = gen_er(500, 1500, MASTER_SEED).unwrap();
    let mut cfg = ExperimentConfig::new(ExperimentMode::NodeCv, MASTER_SEED);
    cfg.folds = 10;
    cfg.repeats = 3;
    let copy_report = kfold_node_cv(&[g.clone(), g.clone()], &cfg).unwrap();

    let g2 = gen_er(500, 1500, MASTER_SEED + 1).unwrap();
    let fresh_report = kfold_node_cv(&[g, g2], &cfg).unwrap();

    let pass_copy = (copy_report.accuracy_mean - 50.0).abs() <= 3.0;
    let pass_fresh = (fresh_report.accuracy_mean - 50.0).abs() <= 5.0;
    check(
        "3",
        pass_copy && pass_fresh,
        &format!(
            "identical copy {:.2}+/-{:.2} (50+/-3), independent ER pair {:.2}+/-{:.2} (50+/-5)",
            copy_report.accuracy_mean,
            copy_report.accuracy_std,
            fresh_report.accuracy_mean,
            fresh_report.accuracy_std
        ),
    );
}

// ---------------------------------------------------------------------------
// Criterion 4: real-vs-model separability surrogate at desk scale.
// ---------------------------------------------------------------------------

#[test]
fn criterion_04_real_vs_model_separability() {
    let reals: Vec<Graph> = (0..8)
        .map(|i| gen_holme_kim(2000, 8000, 1.0, MASTER_SEED + i).unwrap())
        .collect();
    let mut cfg = ExperimentConfig::new(ExperimentMode::RealVsModel, MASTER_SEED);
    cfg.folds = 4;
    cfg.repeats = 2;
    let (report, _) =
        real_vs_model_experiment(&reals, netclass::models::ModelKind::Er, &cfg).unwrap();
    check(
        "4",
        report.accuracy_mean >= 90.0,
        &format!(
            "Holme-Kim(p=1, n=2000) cohort vs matched ER: {:.2}+/-{:.2} (>= 90 required)",
            report.accuracy_mean, report.accuracy_std
        ),
    );
}

// ---------------------------------------------------------------------------
// Criteria 5 and 6 share one REDDIT-BINARY training pass (2-fold, 1 repeat)
// and one COLLAB pass.
// ---------------------------------------------------------------------------

static REDDIT_RUN: LazyLock<Vec<CvReport>> = LazyLock::new(|| {
    let ds = load_benchmark("REDDIT-BINARY");
    let mut cfg = ExperimentConfig::new(ExperimentMode::WholeNetwork, MASTER_SEED);
    cfg.folds = 2;
    cfg.repeats = 1;
    whole_network_classify_multi(&ds.collection, &cfg, &[1.0, 0.1]).unwrap()
});

static COLLAB_RUN: LazyLock<CvReport> = LazyLock::new(|| {
    let ds = load_benchmark("COLLAB");
    let mut cfg = ExperimentConfig::new(ExperimentMode::NetworkCv, MASTER_SEED);
    cfg.folds = 2;
    cfg.repeats = 1;
    kfold_network_cv(&ds.collection, &cfg).unwrap()
});

#[test]
fn criterion_05_reddit_whole_network_accuracy() {
    let reports = &*REDDIT_RUN;
    let p1 = &reports[0];
    let p01 = &reports[1];
    let pass_p1 = (p1.accuracy_mean - 86.51).abs() <= 5.0;
    let pass_converged = (p01.accuracy_mean - p1.accuracy_mean).abs() <= 5.0;
    check(
        "5",
        pass_p1 && pass_converged,
        &format!(
            "REDDIT-BINARY whole-network: p=1 {:.2} (target 86.51+/-5), p=0.1 {:.2} (within 5 of p=1)",
            p1.accuracy_mean, p01.accuracy_mean
        ),
    );
}

#[test]
fn criterion_06_feature_importance_ranks() {
    let reddit_rank = rank_of(&REDDIT_RUN[0], "degree");
    let collab_rank = rank_of(&COLLAB_RUN, "coreness");
    check(
        "6",
        reddit_rank == 1 && collab_rank == 1,
        &format!(
            "degree rank {reddit_rank} on REDDIT-BINARY (want 1), \
             coreness rank {collab_rank} on COLLAB (want 1)"
        ),
    );
}

// ---------------------------------------------------------------------------
// Criterion 7: brute-force oracle agreement on small graphs.
// ---------------------------------------------------------------------------

fn random_graph(n: usize, edge_p: f64, rng: &mut ChaCha8Rng) -> Graph {
    let mut edges = Vec::new();
    for u in 0..n as u32 {
        for v in u + 1..n as u32 {
            if rng.random::<f64>() < edge_p {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, edges)
}

// Exhaustive simple-path shortest-path enumeration: every path from s is
// walked recursively; shortest ones are counted, including how many pass
// through each interior node. Independent of both Brandes and the BFS-DP
// oracle used in the unit suite.
fn enumerate_shortest_paths(g: &Graph, s: u32, t: u32) -> (usize, Vec<usize>, usize) {
    fn walk(
        g: &Graph,
        t: u32,
        path: &mut Vec<u32>,
        on_path: &mut Vec<bool>,
        best: &mut usize,
        found: &mut Vec<Vec<u32>>,
    ) {
        let last = *path.last().unwrap();
        if last == t {
            if path.len() < *best {
                *best = path.len();
                found.clear();
            }
            if path.len() == *best {
                found.push(path.clone());
            }
            return;
        }
        if path.len() >= *best {
            return;
        }
        for &w in g.neighbors(last) {
            if !on_path[w as usize] {
                path.push(w);
                on_path[w as usize] = true;
                walk(g, t, path, on_path, best, found);
                on_path[w as usize] = false;
                path.pop();
            }
        }
    }
    let mut path = vec![s];
    let mut on_path = vec![false; g.n()];
    on_path[s as usize] = true;
    let mut best = usize::MAX;
    let mut found = Vec::new();
    walk(g, t, &mut path, &mut on_path, &mut best, &mut found);
    let mut through = vec![0usize; g.n()];
    for p in &found {
        for &v in &p[1..p.len() - 1] {
            through[v as usize] += 1;
        }
    }
    let dist = if found.is_empty() { usize::MAX } else { best - 1 };
    (found.len(), through, dist)
}

#[test]
fn criterion_07_oracle_suites() {
    let mut rng = ChaCha8Rng::seed_from_u64(MASTER_SEED);
    let mut graphs_checked = 0usize;
    let mut max_err: f64 = 0.0;
    while graphs_checked < 220 {
        let n = rng.random_range(2..=8);
        let p = rng.random_range(0.2..0.95);
        let g = random_graph(n, p, &mut rng);
        graphs_checked += 1;

        // Betweenness against exhaustive path enumeration.
        let b = betweenness(&g);
        let mut expected = vec![0.0f64; n];
        let mut dist = vec![vec![usize::MAX; n]; n];
        for s in 0..n as u32 {
            for t in s + 1..n as u32 {
                let (count, through, d) = enumerate_shortest_paths(&g, s, t);
                dist[s as usize][t as usize] = d;
                dist[t as usize][s as usize] = d;
                if count == 0 {
                    continue;
                }
                for v in 0..n {
                    expected[v] += through[v] as f64 / count as f64;
                }
            }
        }
        if n >= 3 {
            let scale = 2.0 / ((n as f64 - 1.0) * (n as f64 - 2.0));
            for e in &mut expected {
                *e *= scale;
            }
        } else {
            expected.iter_mut().for_each(|e| *e = 0.0);
        }
        for (x, y) in b.iter().zip(&expected) {
            max_err = max_err.max((x - y).abs());
            assert!((x - y).abs() < 1e-9, "betweenness {x} vs {y} on {g:?}");
        }

        // Closeness from the enumerated distances.
        let c = closeness(&g);
        for u in 0..n {
            let reach: Vec<usize> = (0..n)
                .filter(|&v| v != u && dist[u][v] != usize::MAX)
                .collect();
            let expected = if reach.is_empty() || n < 2 {
                0.0
            } else {
                let total: usize = reach.iter().map(|&v| dist[u][v]).sum();
                (reach.len() as f64 / (n as f64 - 1.0)) * (reach.len() as f64 / total as f64)
            };
            max_err = max_err.max((c[u] - expected).abs());
            assert!((c[u] - expected).abs() < 1e-9, "closeness on {g:?}");
        }

        // Clustering by neighbor-pair counting.
        let cl = local_clustering(&g);
        for u in 0..n as u32 {
            let nbrs = g.neighbors(u);
            let expected = if nbrs.len() < 2 {
                0.0
            } else {
                let mut links = 0usize;
                for (i, &a) in nbrs.iter().enumerate() {
                    for &b in &nbrs[i + 1..] {
                        if g.has_edge(a, b) {
                            links += 1;
                        }
                    }
                }
                links as f64 / (nbrs.len() * (nbrs.len() - 1) / 2) as f64
            };
            max_err = max_err.max((cl[u as usize] - expected).abs());
            assert!((cl[u as usize] - expected).abs() < 1e-9);
        }

        // Coreness by repeated deletion.
        let k = coreness(&g);
        let max_deg = (0..n as u32).map(|u| g.degree(u)).max().unwrap_or(0);
        let mut expected = vec![0u32; n];
        for target in 1..=max_deg {
            let mut alive = vec![true; n];
            loop {
                let mut removed = false;
                for u in 0..n {
                    if alive[u]
                        && g.neighbors(u as u32)
                            .iter()
                            .filter(|&&v| alive[v as usize])
                            .count()
                            < target
                    {
                        alive[u] = false;
                        removed = true;
                    }
                }
                if !removed {
                    break;
                }
            }
            for u in 0..n {
                if alive[u] {
                    expected[u] = target as u32;
                }
            }
        }
        assert_eq!(k, expected, "coreness on {g:?}");
    }

    // Eigenvector residual on connected graphs.
    let mut max_resid: f64 = 0.0;
    let mut connected_checked = 0usize;
    while connected_checked < 40 {
        let n = rng.random_range(4..=40);
        let g = random_graph(n, 0.25, &mut rng);
        let (_, comps) = g.components();
        if comps != 1 || g.m() == 0 {
            continue;
        }
        connected_checked += 1;
        let e = eigenvector_centrality(&g, 1e-10, 100_000);
        let x = &e.values;
        let ax: Vec<f64> = (0..n)
            .map(|u| g.neighbors(u as u32).iter().map(|&v| x[v as usize]).sum())
            .collect();
        let lambda: f64 = (0..n).map(|u| x[u] * ax[u]).sum();
        for u in 0..n {
            max_resid = max_resid.max((ax[u] - lambda * x[u]).abs());
        }
    }
    check(
        "7",
        max_resid < 1e-6,
        &format!(
            "{graphs_checked} small graphs against brute force (max err {max_err:.2e} < 1e-9), \
             eigen residual {max_resid:.2e} < 1e-6 on {connected_checked} connected graphs"
        ),
    );
}

// ---------------------------------------------------------------------------
// Criterion 8: generator invariants over 100 seeds per model.
// ---------------------------------------------------------------------------

fn assert_simple(g: &Graph) {
    let mut seen = std::collections::BTreeSet::new();
    let mut degree_sum = 0usize;
    for (u, v) in g.edges() {
        assert!(u != v, "self loop {u}");
        assert!(seen.insert((u, v)), "duplicate edge ({u}, {v})");
    }
    for u in 0..g.n() as u32 {
        degree_sum += g.degree(u);
    }
    assert_eq!(degree_sum, 2 * g.m());
}

#[test]
fn criterion_08_generator_invariants() {
    let mut config_checked = 0usize;
    for seed in 0..100u64 {
        let er = gen_er(60, 150, seed).unwrap();
        assert_eq!(er.m(), 150, "ER m drift at seed {seed}");
        assert_simple(&er);

        let ws = gen_ws(60, 120, 0.1, seed).unwrap();
        assert_eq!(ws.m(), 120, "WS m drift at seed {seed}");
        assert_simple(&ws);

        let ba = gen_ba(60, 170, seed).unwrap();
        assert_simple(&ba);

        let hk = gen_holme_kim(60, 170, 1.0, seed).unwrap();
        assert_simple(&hk);

        let mut target = ba.degree_sequence();
        let cm = gen_configuration(&target, seed).unwrap();
        assert_simple(&cm);
        let mut got = cm.degree_sequence();
        assert_eq!(got, target, "configuration degrees differ at seed {seed}");
        target.sort_unstable();
        got.sort_unstable();
        assert_eq!(got, target);
        config_checked += 1;
    }
    check(
        "8",
        config_checked == 100,
        "exact m for ER/WS, exact degree multiset for configuration, simplicity for all five models, 100 seeds each",
    );
}

// ---------------------------------------------------------------------------
// Criterion 9: bootstrapping reaches the target with vertex copy and
// plateaus with triadic closure (3 of 5 seeds each); the score-threshold
// loop invariant is asserted inside grow_network itself.
// ---------------------------------------------------------------------------

#[test]
fn criterion_09_bootstrap_growth_shapes() {
    let original = gen_holme_kim(3000, 24000, 1.0, MASTER_SEED).unwrap();
    let train = TrainConfig {
        num_trees: 100,
        seed: MASTER_SEED,
        ..TrainConfig::default()
    };
    let classifier = train_realness_forest(&original, true, &train, MASTER_SEED).unwrap();

    // Seed ego network: sampled among nodes whose ego network has at least
    // 100 nodes, as in the growth protocol.
    let candidates: Vec<u32> = (0..original.n() as u32)
        .filter(|&u| original.degree(u) >= 100)
        .collect();
    assert!(!candidates.is_empty());
    let mut pick = netclass::seeds::rng(MASTER_SEED, &[0x5eed]);
    let ego = candidates[pick.random_range(0..candidates.len())];
    let seed_graph = ego_network(&original, ego);

    let mut vc_reached_per_beta = Vec::new();
    for beta in [0.75, 0.9] {
        let mut reached = 0usize;
        for seed in 0..5u64 {
            let mut cfg = GrowthConfig::new(AttachmentKind::VertexCopy, beta, seed);
            cfg.rescore_lightweight = true;
            cfg.target_n = original.n();
            // The >= 0.8 survivor-score loop invariant is asserted inside
            // grow_network on every iteration.
            let outcome = grow_network(&seed_graph, &original, &classifier, &cfg, None).unwrap();
            if outcome.trace.status == GrowthStatus::ReachedTarget {
                reached += 1;
            }
        }
        vc_reached_per_beta.push((beta, reached));
    }

    let mut tc_plateaued = 0usize;
    for seed in 0..5u64 {
        let mut cfg = GrowthConfig::new(AttachmentKind::TriadicClosure, 0.9, seed);
        cfg.rescore_lightweight = true;
        cfg.target_n = original.n();
        let outcome = grow_network(&seed_graph, &original, &classifier, &cfg, None).unwrap();
        if outcome.trace.status != GrowthStatus::ReachedTarget {
            tc_plateaued += 1;
        }
    }

    let vc_pass = vc_reached_per_beta.iter().all(|&(_, r)| r >= 3);
    let tc_pass = tc_plateaued >= 3;
    // Currently red on the vertex-copy clause: a Holme-Kim original gives
    // every node the same shell index, so the twin classifier learns a
    // razor-thin core band; vertex copying densifies the grown graph (mean
    // degree scales with n) and sweeps through that band far below the
    // target size, while triadic closure, which is essentially the Holme-Kim
    // arrival rule itself, stays on the learned manifold and plateaus. The
    // reach-the-target behavior asked of vertex copy shows up only on
    // originals with a spread core structure.
    check(
        "9",
        vc_pass && tc_pass,
        &format!(
            "vertex copy reached target in {vc_reached_per_beta:?} of 5 runs per beta (need >= 3 each), \
             triadic closure plateaued below target in {tc_plateaued}/5 (need >= 3)"
        ),
    );
}

// ---------------------------------------------------------------------------
// Criterion 10: CLI byte-determinism across --jobs.
// ---------------------------------------------------------------------------

fn netclass_bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_netclass"))
}

fn write_tu_fixture(dir: &Path, name: &str, graphs: usize) {
    let mut a = String::new();
    let mut ind = String::new();
    let mut lab = String::new();
    let mut next = 1usize;
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    for g in 0..graphs {
        let class = g % 2;
        let n = rng.random_range(8..14usize);
        let gen = if class == 0 {
            gen_er(n, 2 * n, rng.random()).unwrap()
        } else {
            gen_holme_kim(n, 2 * n, 1.0, rng.random()).unwrap()
        };
        for (u, v) in gen.edges() {
            let (u, v) = (next + u as usize, next + v as usize);
            a.push_str(&format!("{u}, {v}\n{v}, {u}\n"));
        }
        for _ in 0..gen.n() {
            ind.push_str(&format!("{}\n", g + 1));
        }
        next += gen.n();
        lab.push_str(&format!("{class}\n"));
    }
    std::fs::create_dir_all(dir).unwrap();
    std::fs::write(dir.join(format!("{name}_A.txt")), a).unwrap();
    std::fs::write(dir.join(format!("{name}_graph_indicator.txt")), ind).unwrap();
    std::fs::write(dir.join(format!("{name}_graph_labels.txt")), lab).unwrap();
}

#[test]
fn criterion_10_cli_determinism_across_jobs() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("data");
    write_tu_fixture(&data.join("ACC"), "ACC", 16);

    let original = dir.path().join("original.edges");
    netclass::graph::export_graph(
        &gen_holme_kim(300, 1200, 1.0, 5).unwrap(),
        None,
        &original,
    )
    .unwrap();

    let mut mismatches = Vec::new();
    let runs: Vec<(&str, Vec<String>, Vec<&str>)> = vec![
        (
            "network-cv",
            vec![
                "network-cv".into(),
                "--data-dir".into(), data.display().to_string(),
                "--dataset".into(), "ACC".into(),
                "--folds".into(), "4".into(),
                "--repeats".into(), "2".into(),
                "--trees".into(), "40".into(),
                "--node-scores".into(),
                "--seed".into(), "404".into(),
            ],
            vec!["report.json", "folds.csv", "importances.csv", "node_scores.csv", "manifest.json"],
        ),
        (
            "classify-networks",
            vec![
                "classify-networks".into(),
                "--data-dir".into(), data.display().to_string(),
                "--dataset".into(), "ACC".into(),
                "--sample-fraction".into(), "0.5".into(),
                "--folds".into(), "4".into(),
                "--repeats".into(), "2".into(),
                "--trees".into(), "40".into(),
                "--seed".into(), "404".into(),
            ],
            vec!["report.json", "folds.csv", "importances.csv", "manifest.json"],
        ),
        (
            "bootstrap",
            vec![
                "bootstrap".into(),
                "--original".into(), original.display().to_string(),
                "--attachment".into(), "vertex-copy".into(),
                "--beta".into(), "0.9".into(),
                "--threshold".into(), "0.5".into(),
                "--max-iterations".into(), "8".into(),
                "--seed-min-size".into(), "10".into(),
                "--lightweight-rescore".into(),
                "--trees".into(), "30".into(),
                "--seed".into(), "404".into(),
            ],
            vec!["trace.csv", "grown.edges", "model.json", "manifest.json"],
        ),
    ];

    for (label, args, files) in &runs {
        let mut outputs = Vec::new();
        for jobs in ["1", "8"] {
            let out = dir.path().join(format!("{label}_jobs{jobs}"));
            let status = netclass_bin()
                .args(args)
                .args(["--jobs", jobs, "--out", out.to_str().unwrap()])
                .status()
                .unwrap();
            assert_eq!(status.code(), Some(0), "{label} with --jobs {jobs} failed");
            outputs.push(out);
        }
        for file in files {
            let a = std::fs::read(outputs[0].join(file)).unwrap();
            let b = std::fs::read(outputs[1].join(file)).unwrap();
            if a != b {
                mismatches.push(format!("{label}/{file}"));
            }
        }
    }
    check(
        "10",
        mismatches.is_empty(),
        &format!(
            "network-cv, classify-networks and bootstrap byte-identical between --jobs 1 and 8{}",
            if mismatches.is_empty() {
                String::new()
            } else {
                format!("; mismatches: {mismatches:?}")
            }
        ),
    );
}
