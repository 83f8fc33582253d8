//! `netclass` command line: feature extraction, graph statistics, model
//! generation, classifier training, the cross-validation experiments, and
//! network bootstrapping. Every run writes a manifest with the resolved seed
//! and config so it can be reproduced bit-for-bit.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rand::Rng;

use netclass::bootstrap::{
    grow_network, train_realness_forest, AttachmentKind, GrowthConfig,
};
use netclass::experiments::{
    feature_based_baseline, kfold_network_cv_with_scores, kfold_node_cv,
    real_vs_model_experiment, whole_network_classify, write_node_scores_csv, CvReport,
    ExperimentConfig, ExperimentMode, NodeScore,
};
use netclass::features::extract_features;
use netclass::forest::{train_forest, TrainConfig};
use netclass::graph::{
    ego_network, export_graph, graph_stats, load_edge_list, load_tu_dataset, Graph,
};
use netclass::models::{ModelKind, ModelSpec};

#[derive(Parser)]
#[command(name = "netclass", version, about = "Node-level network classification toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct CommonArgs {
    /// Output directory for reports and artifacts.
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Master seed; omitted means a random seed (recorded in the manifest).
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads for parallel sections (0 = automatic).
    #[arg(long, default_value_t = 0)]
    jobs: usize,
    /// Increase log verbosity (-v, -vv).
    #[arg(short, long, action = clap::ArgAction::Count)]
    verbose: u8,
}

#[derive(Args, Clone)]
struct CvArgs {
    /// Optional JSON experiment config; explicit flags override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    folds: Option<usize>,
    #[arg(long)]
    repeats: Option<usize>,
    /// Drop betweenness and closeness (linear-time features only).
    #[arg(long)]
    lightweight: bool,
    /// Trees per forest.
    #[arg(long)]
    trees: Option<usize>,
    /// Minimum samples per leaf.
    #[arg(long)]
    min_leaf: Option<usize>,
    /// Maximum tree depth.
    #[arg(long)]
    max_depth: Option<usize>,
}

#[derive(Args, Clone)]
struct DatasetArgs {
    /// Directory holding TU-format datasets (one subdirectory per dataset).
    #[arg(long, default_value = "data")]
    data_dir: PathBuf,
    /// Dataset name, e.g. IMDB-BINARY.
    #[arg(long)]
    dataset: String,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the structural node features of a graph into features.csv.
    Features {
        /// Edge-list file (whitespace-separated pairs, # comments).
        #[arg(long)]
        input: PathBuf,
        /// Treat file node ids as 1-indexed.
        #[arg(long)]
        one_indexed: bool,
        #[arg(long)]
        lightweight: bool,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Whole-graph summary statistics into stats.json.
    Stats {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        one_indexed: bool,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Generate a random model graph into graph.edges.
    Generate {
        /// Model kind: er, configuration, ba, ws, holme-kim.
        #[arg(long)]
        model: String,
        /// Node count (ignored by the configuration model).
        #[arg(long, default_value_t = 0)]
        nodes: usize,
        /// Target edge count (ignored by the configuration model).
        #[arg(long, default_value_t = 0)]
        edges: usize,
        /// Rewiring probability for WS.
        #[arg(long, default_value_t = 0.1)]
        rewire_p: f64,
        /// Triangle-closing probability for Holme-Kim.
        #[arg(long, default_value_t = 1.0)]
        triangle_p: f64,
        /// Edge-list file whose degree sequence the configuration model copies.
        #[arg(long)]
        degree_source: Option<PathBuf>,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Train a node-level classifier on a TU dataset into model.json.
    Train {
        #[command(flatten)]
        dataset: DatasetArgs,
        #[arg(long)]
        lightweight: bool,
        #[arg(long)]
        trees: Option<usize>,
        #[arg(long)]
        min_leaf: Option<usize>,
        #[arg(long)]
        max_depth: Option<usize>,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Node-level CV between specific networks (one edge file per class).
    NodeCv {
        /// Edge-list files; nodes are labeled by source file.
        #[arg(long, num_args = 2.., required = true)]
        inputs: Vec<PathBuf>,
        #[arg(long)]
        one_indexed: bool,
        #[command(flatten)]
        cv: CvArgs,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Network-level CV over a TU dataset collection.
    NetworkCv {
        #[command(flatten)]
        dataset: DatasetArgs,
        /// Also dump per-test-node scores to node_scores.csv.
        #[arg(long)]
        node_scores: bool,
        #[command(flatten)]
        cv: CvArgs,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Distinguish real networks from freshly generated matched model graphs.
    RealVsModel {
        #[arg(long, num_args = 1.., required = true)]
        inputs: Vec<PathBuf>,
        #[arg(long)]
        one_indexed: bool,
        /// Model kind: er, configuration, ba, ws, holme-kim.
        #[arg(long)]
        model: String,
        #[arg(long, default_value_t = 0.1)]
        rewire_p: f64,
        #[arg(long, default_value_t = 1.0)]
        triangle_p: f64,
        #[command(flatten)]
        cv: CvArgs,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Whole-network classification from sampled node scores.
    ClassifyNetworks {
        #[command(flatten)]
        dataset: DatasetArgs,
        /// Fraction of nodes sampled per test network.
        #[arg(long, default_value_t = 1.0)]
        sample_fraction: f64,
        #[command(flatten)]
        cv: CvArgs,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Whole-network feature baseline (one feature row per network).
    Baseline {
        #[command(flatten)]
        dataset: DatasetArgs,
        #[command(flatten)]
        cv: CvArgs,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Grow a real-looking network from an ego-network seed.
    Bootstrap {
        /// Edge-list file of the original network.
        #[arg(long)]
        original: PathBuf,
        #[arg(long)]
        one_indexed: bool,
        /// Attachment mechanism: vertex-copy or triadic-closure.
        #[arg(long)]
        attachment: String,
        #[arg(long)]
        beta: f64,
        #[arg(long, default_value_t = 0.8)]
        threshold: f64,
        #[arg(long, default_value_t = 0.05)]
        growth_rate: f64,
        #[arg(long, default_value_t = 500)]
        max_iterations: usize,
        /// Stop once the grown network reaches this size (0 = original size).
        #[arg(long, default_value_t = 0)]
        target_n: usize,
        /// Pick the seed ego network from nodes with at least this degree.
        #[arg(long, default_value_t = 100)]
        seed_min_size: usize,
        /// Use a specific ego node instead of sampling one.
        #[arg(long)]
        ego: Option<u32>,
        /// Score with the lightweight feature set during growth.
        #[arg(long)]
        lightweight_rescore: bool,
        #[arg(long)]
        trees: Option<usize>,
        /// Export the grown graph every K iterations under snapshots/.
        #[arg(long)]
        snapshot_every: Option<usize>,
        #[command(flatten)]
        common: CommonArgs,
    },
}

#[derive(serde::Serialize)]
struct Manifest<'a> {
    toolkit_version: &'a str,
    command: &'a str,
    seed: u64,
    inputs: Vec<String>,
    config: serde_json::Value,
}

fn write_manifest(
    out: &Path,
    command: &str,
    seed: u64,
    inputs: &[&Path],
    config: serde_json::Value,
) -> anyhow::Result<()> {
    let manifest = Manifest {
        toolkit_version: env!("CARGO_PKG_VERSION"),
        command,
        seed,
        inputs: inputs.iter().map(|p| p.display().to_string()).collect(),
        config,
    };
    let file = File::create(out.join("manifest.json"))?;
    let mut w = BufWriter::new(file);
    serde_json::to_writer_pretty(&mut w, &manifest)?;
    w.write_all(b"\n")?;
    Ok(())
}

fn setup(common: &CommonArgs) -> anyhow::Result<u64> {
    let level = match common.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    let _ = env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level))
        .format_timestamp(None)
        .try_init();
    if common.jobs > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(common.jobs)
            .build_global()
            .ok();
    }
    std::fs::create_dir_all(&common.out)?;
    Ok(common.seed.unwrap_or_else(|| rand::rng().random()))
}

fn build_experiment_config(
    mode: ExperimentMode,
    cv: &CvArgs,
    seed: u64,
) -> anyhow::Result<ExperimentConfig> {
    let mut cfg = match &cv.config {
        Some(path) => {
            let file = File::open(path)
                .map_err(|e| anyhow::anyhow!("cannot open config {}: {e}", path.display()))?;
            serde_json::from_reader(file)?
        }
        None => ExperimentConfig::new(mode, seed),
    };
    cfg.mode = mode;
    cfg.seed = seed;
    if let Some(folds) = cv.folds {
        cfg.folds = folds;
    }
    if let Some(repeats) = cv.repeats {
        cfg.repeats = repeats;
    }
    if cv.lightweight {
        cfg.lightweight = true;
    }
    if let Some(trees) = cv.trees {
        cfg.train.num_trees = trees;
    }
    if let Some(min_leaf) = cv.min_leaf {
        cfg.train.min_leaf = min_leaf;
    }
    if let Some(depth) = cv.max_depth {
        cfg.train.max_depth = Some(depth);
    }
    Ok(cfg)
}

fn save_report(out: &Path, report: &CvReport) -> anyhow::Result<()> {
    let mut json = BufWriter::new(File::create(out.join("report.json"))?);
    json.write_all(report.to_json_pretty()?.as_bytes())?;
    json.write_all(b"\n")?;
    report.write_folds_csv(BufWriter::new(File::create(out.join("folds.csv"))?))?;
    report.write_importances_csv(BufWriter::new(File::create(out.join("importances.csv"))?))?;
    println!(
        "accuracy {:.2} +/- {:.2} over {} folds",
        report.accuracy_mean,
        report.accuracy_std,
        report.per_fold_accuracies.len()
    );
    Ok(())
}

fn save_node_scores(out: &Path, scores: &[NodeScore], class_names: &[String]) -> anyhow::Result<()> {
    let file = BufWriter::new(File::create(out.join("node_scores.csv"))?);
    write_node_scores_csv(scores, class_names, file)?;
    Ok(())
}

fn load_graph(path: &Path, one_indexed: bool) -> anyhow::Result<Graph> {
    Ok(load_edge_list(path, one_indexed)?.graph)
}

fn run(cli: Cli) -> anyhow::Result<()> {
    match cli.command {
        Command::Features {
            input,
            one_indexed,
            lightweight,
            common,
        } => {
            let seed = setup(&common)?;
            let g = load_graph(&input, one_indexed)?;
            let matrix = extract_features(&g, lightweight, seed);
            let file = BufWriter::new(File::create(common.out.join("features.csv"))?);
            matrix.write_csv(file)?;
            write_manifest(
                &common.out,
                "features",
                seed,
                &[&input],
                serde_json::json!({ "lightweight": lightweight, "one_indexed": one_indexed }),
            )?;
            println!(
                "wrote features.csv ({} nodes x {} features)",
                matrix.n_rows(),
                matrix.n_cols()
            );
        }
        Command::Stats {
            input,
            one_indexed,
            common,
        } => {
            let seed = setup(&common)?;
            let loaded = load_edge_list(&input, one_indexed)?;
            let stats = graph_stats(&loaded.graph)?;
            let mut w = BufWriter::new(File::create(common.out.join("stats.json"))?);
            serde_json::to_writer_pretty(&mut w, &stats)?;
            w.write_all(b"\n")?;
            write_manifest(
                &common.out,
                "stats",
                seed,
                &[&input],
                serde_json::json!({
                    "one_indexed": one_indexed,
                    "dropped_records": loaded.dropped,
                }),
            )?;
            println!("{}", serde_json::to_string_pretty(&stats)?);
        }
        Command::Generate {
            model,
            nodes,
            edges,
            rewire_p,
            triangle_p,
            degree_source,
            common,
        } => {
            let seed = setup(&common)?;
            let kind: ModelKind = model.parse()?;
            let degree_sequence = match (&degree_source, kind) {
                (Some(path), ModelKind::Configuration) => {
                    Some(load_graph(path, false)?.degree_sequence())
                }
                (None, ModelKind::Configuration) => anyhow::bail!(
                    "configuration model needs --degree-source <edge file>"
                ),
                _ => None,
            };
            let (n, m) = match &degree_sequence {
                Some(seq) => (
                    seq.len(),
                    seq.iter().map(|&d| d as usize).sum::<usize>() / 2,
                ),
                None => {
                    anyhow::ensure!(nodes > 0, "--nodes must be positive for {}", kind.name());
                    (nodes, edges)
                }
            };
            let spec = ModelSpec {
                kind,
                n,
                m,
                degree_sequence,
                ws_rewire_p: rewire_p,
                hk_triangle_p: triangle_p,
                seed,
            };
            let g = spec.generate()?;
            let path = common.out.join("graph.edges");
            export_graph(&g, None, &path)?;
            write_manifest(
                &common.out,
                "generate",
                seed,
                &[],
                serde_json::to_value(&spec)?,
            )?;
            println!("wrote graph.edges (n={}, m={})", g.n(), g.m());
        }
        Command::Train {
            dataset,
            lightweight,
            trees,
            min_leaf,
            max_depth,
            common,
        } => {
            let seed = setup(&common)?;
            let dir = dataset.data_dir.join(&dataset.dataset);
            let tu = load_tu_dataset(&dir, &dataset.dataset)?;
            let (data, warnings) =
                netclass::experiments::build_node_dataset(&tu.collection, lightweight, seed)?;
            for w in &warnings {
                log::warn!("{w}");
            }
            let mut train_cfg = TrainConfig {
                seed,
                ..TrainConfig::default()
            };
            if let Some(t) = trees {
                train_cfg.num_trees = t;
            }
            if let Some(l) = min_leaf {
                train_cfg.min_leaf = l;
            }
            train_cfg.max_depth = max_depth;
            let model = train_forest(&data, &train_cfg)?;
            let mut w = BufWriter::new(File::create(common.out.join("model.json"))?);
            model.to_json_writer(&mut w)?;
            w.write_all(b"\n")?;
            write_manifest(
                &common.out,
                "train",
                seed,
                &[&dir],
                serde_json::json!({
                    "dataset": dataset.dataset,
                    "lightweight": lightweight,
                    "train": train_cfg,
                    "rows": data.n_rows(),
                    "class_rows": data.class_counts(),
                }),
            )?;
            println!(
                "trained on {} rows; importances: {:?}",
                data.n_rows(),
                model.feature_importances_pct()
            );
        }
        Command::NodeCv {
            inputs,
            one_indexed,
            cv,
            common,
        } => {
            let seed = setup(&common)?;
            let cfg = build_experiment_config(ExperimentMode::NodeCv, &cv, seed)?;
            let graphs: Vec<Graph> = inputs
                .iter()
                .map(|p| load_graph(p, one_indexed))
                .collect::<anyhow::Result<_>>()?;
            let report = kfold_node_cv(&graphs, &cfg)?;
            save_report(&common.out, &report)?;
            let input_refs: Vec<&Path> = inputs.iter().map(PathBuf::as_path).collect();
            write_manifest(&common.out, "node-cv", seed, &input_refs, serde_json::to_value(&cfg)?)?;
        }
        Command::NetworkCv {
            dataset,
            node_scores,
            cv,
            common,
        } => {
            let seed = setup(&common)?;
            let mut cfg = build_experiment_config(ExperimentMode::NetworkCv, &cv, seed)?;
            cfg.collect_node_scores = node_scores;
            let dir = dataset.data_dir.join(&dataset.dataset);
            let tu = load_tu_dataset(&dir, &dataset.dataset)?;
            let (report, scores) = kfold_network_cv_with_scores(&tu.collection, &cfg)?;
            save_report(&common.out, &report)?;
            if node_scores {
                save_node_scores(&common.out, &scores, &report.class_names)?;
            }
            write_manifest(&common.out, "network-cv", seed, &[&dir], serde_json::to_value(&cfg)?)?;
        }
        Command::RealVsModel {
            inputs,
            one_indexed,
            model,
            rewire_p,
            triangle_p,
            cv,
            common,
        } => {
            let seed = setup(&common)?;
            let kind: ModelKind = model.parse()?;
            let mut cfg = build_experiment_config(ExperimentMode::RealVsModel, &cv, seed)?;
            cfg.collect_node_scores = true;
            if cfg.model_spec.is_none() {
                cfg.model_spec = Some(ModelSpec {
                    kind,
                    n: 0,
                    m: 0,
                    degree_sequence: None,
                    ws_rewire_p: rewire_p,
                    hk_triangle_p: triangle_p,
                    seed,
                });
            }
            let graphs: Vec<Graph> = inputs
                .iter()
                .map(|p| load_graph(p, one_indexed))
                .collect::<anyhow::Result<_>>()?;
            let (report, scores) = real_vs_model_experiment(&graphs, kind, &cfg)?;
            save_report(&common.out, &report)?;
            save_node_scores(&common.out, &scores, &report.class_names)?;
            let input_refs: Vec<&Path> = inputs.iter().map(PathBuf::as_path).collect();
            write_manifest(
                &common.out,
                "real-vs-model",
                seed,
                &input_refs,
                serde_json::to_value(&cfg)?,
            )?;
        }
        Command::ClassifyNetworks {
            dataset,
            sample_fraction,
            cv,
            common,
        } => {
            let seed = setup(&common)?;
            let mut cfg = build_experiment_config(ExperimentMode::WholeNetwork, &cv, seed)?;
            cfg.sample_fraction = sample_fraction;
            let dir = dataset.data_dir.join(&dataset.dataset);
            let tu = load_tu_dataset(&dir, &dataset.dataset)?;
            let report = whole_network_classify(&tu.collection, &cfg)?;
            save_report(&common.out, &report)?;
            write_manifest(
                &common.out,
                "classify-networks",
                seed,
                &[&dir],
                serde_json::to_value(&cfg)?,
            )?;
        }
        Command::Baseline { dataset, cv, common } => {
            let seed = setup(&common)?;
            let cfg = build_experiment_config(ExperimentMode::Baseline, &cv, seed)?;
            let dir = dataset.data_dir.join(&dataset.dataset);
            let tu = load_tu_dataset(&dir, &dataset.dataset)?;
            let report = feature_based_baseline(&tu.collection, &cfg)?;
            save_report(&common.out, &report)?;
            write_manifest(&common.out, "baseline", seed, &[&dir], serde_json::to_value(&cfg)?)?;
        }
        Command::Bootstrap {
            original,
            one_indexed,
            attachment,
            beta,
            threshold,
            growth_rate,
            max_iterations,
            target_n,
            seed_min_size,
            ego,
            lightweight_rescore,
            trees,
            snapshot_every,
            common,
        } => {
            let seed = setup(&common)?;
            let attachment: AttachmentKind = attachment.parse()?;
            let g = load_graph(&original, one_indexed)?;

            // Seed network: an ego network with at least `seed_min_size`
            // nodes (its size equals the ego's degree).
            let ego_node = match ego {
                Some(u) => {
                    anyhow::ensure!((u as usize) < g.n(), "ego {u} out of range");
                    u
                }
                None => {
                    let candidates: Vec<u32> = (0..g.n() as u32)
                        .filter(|&u| g.degree(u) >= seed_min_size)
                        .collect();
                    anyhow::ensure!(
                        !candidates.is_empty(),
                        "no node has degree >= {seed_min_size}; lower --seed-min-size"
                    );
                    let mut rng = netclass::seeds::rng(seed, &[0x5eed]);
                    candidates[rng.random_range(0..candidates.len())]
                }
            };
            let seed_graph = ego_network(&g, ego_node);

            let mut train_cfg = TrainConfig {
                seed,
                ..TrainConfig::default()
            };
            if let Some(t) = trees {
                train_cfg.num_trees = t;
            }
            let classifier = train_realness_forest(&g, lightweight_rescore, &train_cfg, seed)?;
            let mut model_out = BufWriter::new(File::create(common.out.join("model.json"))?);
            classifier.to_json_writer(&mut model_out)?;
            model_out.write_all(b"\n")?;

            let mut growth_cfg = GrowthConfig::new(attachment, beta, seed);
            growth_cfg.score_threshold = threshold;
            growth_cfg.growth_rate = growth_rate;
            growth_cfg.max_iterations = max_iterations;
            growth_cfg.target_n = if target_n == 0 { g.n() } else { target_n };
            growth_cfg.rescore_lightweight = lightweight_rescore;

            let snapshot_dir = common.out.join("snapshots");
            if snapshot_every.is_some() {
                std::fs::create_dir_all(&snapshot_dir)?;
            }
            let mut snapshot_err: Option<netclass::Error> = None;
            let mut hook = |iteration: usize, grown: &Graph| {
                if let Some(every) = snapshot_every {
                    if every > 0 && iteration % every == 0 {
                        let path = snapshot_dir.join(format!("iter_{iteration:04}.edges"));
                        if let Err(e) = export_graph(grown, None, &path) {
                            snapshot_err.get_or_insert(e);
                        }
                    }
                }
            };
            let outcome = grow_network(&seed_graph, &g, &classifier, &growth_cfg, Some(&mut hook))?;
            if let Some(e) = snapshot_err {
                return Err(e.into());
            }

            outcome
                .trace
                .write_csv(BufWriter::new(File::create(common.out.join("trace.csv"))?))?;
            export_graph(&outcome.graph, None, common.out.join("grown.edges"))?;
            write_manifest(
                &common.out,
                "bootstrap",
                seed,
                &[&original],
                serde_json::json!({
                    "growth": growth_cfg,
                    "train": train_cfg,
                    "ego_node": ego_node,
                    "seed_graph_n": seed_graph.n(),
                    "snapshot_every": snapshot_every,
                }),
            )?;
            println!(
                "growth finished: status {:?}, n={} after {} iterations",
                outcome.trace.status,
                outcome.graph.n(),
                outcome.trace.records.len()
            );
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    // Usage problems exit 1; data/processing problems exit 2.
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // clap renders --help/--version as "errors" with success status.
            if e.use_stderr() {
                eprint!("{e}");
                return ExitCode::from(1);
            }
            print!("{e}");
            return ExitCode::SUCCESS;
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
