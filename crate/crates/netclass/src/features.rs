//! The seven structural node features: degree centrality, local clustering,
//! betweenness, eigenvector centrality, closeness, coreness, and link
//! diversity.
//!
//! Betweenness and closeness run their per-source searches in parallel;
//! partial results are combined in fixed node order so the output is
//! bit-identical regardless of worker count.

use std::collections::VecDeque;

use rayon::prelude::*;

use crate::community::{detect_communities, Partition};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::seeds::{self, tags};

pub const FEATURE_NAMES_FULL: [&str; 7] = [
    "degree",
    "clustering",
    "betweenness",
    "eigenvector",
    "closeness",
    "coreness",
    "link_diversity",
];

pub const FEATURE_NAMES_LIGHTWEIGHT: [&str; 5] = [
    "degree",
    "clustering",
    "eigenvector",
    "coreness",
    "link_diversity",
];

pub const DEFAULT_EIGEN_TOL: f64 = 1e-8;
pub const DEFAULT_EIGEN_MAX_ITER: usize = 1000;

/// Degree divided by the node count.
pub fn degree_centrality(g: &Graph) -> Vec<f64> {
    let n = g.n() as f64;
    (0..g.n() as u32).map(|u| g.degree(u) as f64 / n).collect()
}

/// Edge density among each node's neighbors; 0 for degree < 2.
pub fn local_clustering(g: &Graph) -> Vec<f64> {
    (0..g.n() as u32)
        .into_par_iter()
        .map(|u| {
            let nbrs = g.neighbors(u);
            let k = nbrs.len();
            if k < 2 {
                return 0.0;
            }
            let mut links = 0u64;
            for (i, &v) in nbrs.iter().enumerate() {
                for &w in &nbrs[i + 1..] {
                    if g.has_edge(v, w) {
                        links += 1;
                    }
                }
            }
            links as f64 / (k as f64 * (k as f64 - 1.0) / 2.0)
        })
        .collect()
}

// Sources are processed in fixed-size chunks; each chunk accumulates its own
// partial in source order and chunk partials are folded in chunk order, so
// floating-point summation never depends on the worker count.
const BETWEENNESS_CHUNK: usize = 64;

/// Betweenness centrality via Brandes' accumulation, normalized by
/// `1/((n-1)(n-2))` so every value lands in `[0, 1]`. Graphs with `n < 3`
/// get all zeros.
pub fn betweenness(g: &Graph) -> Vec<f64> {
    let n = g.n();
    if n < 3 {
        return vec![0.0; n];
    }
    let sources: Vec<u32> = (0..n as u32).collect();
    let partials: Vec<Vec<f64>> = sources
        .par_chunks(BETWEENNESS_CHUNK)
        .map(|chunk| {
            let mut acc = vec![0.0f64; n];
            let mut state = BrandesState::new(n);
            for &s in chunk {
                state.accumulate(g, s, &mut acc);
            }
            acc
        })
        .collect();

    let mut total = vec![0.0f64; n];
    for partial in partials {
        for (t, p) in total.iter_mut().zip(partial) {
            *t += p;
        }
    }
    // Brandes over all sources counts each unordered pair twice.
    let scale = 1.0 / ((n as f64 - 1.0) * (n as f64 - 2.0));
    for v in &mut total {
        *v *= scale;
    }
    total
}

struct BrandesState {
    stack: Vec<u32>,
    sigma: Vec<f64>,
    dist: Vec<i32>,
    delta: Vec<f64>,
    preds: Vec<Vec<u32>>,
    queue: VecDeque<u32>,
}

impl BrandesState {
    fn new(n: usize) -> BrandesState {
        BrandesState {
            stack: Vec::with_capacity(n),
            sigma: vec![0.0; n],
            dist: vec![-1; n],
            delta: vec![0.0; n],
            preds: vec![Vec::new(); n],
            queue: VecDeque::new(),
        }
    }

    fn accumulate(&mut self, g: &Graph, s: u32, acc: &mut [f64]) {
        self.stack.clear();
        self.queue.clear();
        for v in 0..g.n() {
            self.sigma[v] = 0.0;
            self.dist[v] = -1;
            self.delta[v] = 0.0;
            self.preds[v].clear();
        }
        self.sigma[s as usize] = 1.0;
        self.dist[s as usize] = 0;
        self.queue.push_back(s);

        while let Some(v) = self.queue.pop_front() {
            self.stack.push(v);
            let dv = self.dist[v as usize];
            for &w in g.neighbors(v) {
                if self.dist[w as usize] < 0 {
                    self.dist[w as usize] = dv + 1;
                    self.queue.push_back(w);
                }
                if self.dist[w as usize] == dv + 1 {
                    self.sigma[w as usize] += self.sigma[v as usize];
                    self.preds[w as usize].push(v);
                }
            }
        }
        while let Some(w) = self.stack.pop() {
            for i in 0..self.preds[w as usize].len() {
                let v = self.preds[w as usize][i];
                self.delta[v as usize] += (self.sigma[v as usize] / self.sigma[w as usize])
                    * (1.0 + self.delta[w as usize]);
            }
            if w != s {
                acc[w as usize] += self.delta[w as usize];
            }
        }
    }
}

/// Closeness centrality with the component-size correction: for node `u` with
/// reachable set `R(u)`, the value is `(|R|/(n-1)) * (|R| / sum of distances)`.
/// Isolated nodes get 0.
pub fn closeness(g: &Graph) -> Vec<f64> {
    let n = g.n();
    if n <= 1 {
        return vec![0.0; n];
    }
    (0..n as u32)
        .into_par_iter()
        .map(|u| {
            let dist = g.bfs_distances(u);
            let mut reachable = 0u64;
            let mut total = 0u64;
            for (v, &d) in dist.iter().enumerate() {
                if v as u32 != u && d != u32::MAX {
                    reachable += 1;
                    total += d as u64;
                }
            }
            if reachable == 0 {
                0.0
            } else {
                (reachable as f64 / (n as f64 - 1.0)) * (reachable as f64 / total as f64)
            }
        })
        .collect()
}

/// Result of the eigenvector power iteration.
#[derive(Debug, Clone)]
pub struct EigenvectorCentrality {
    pub values: Vec<f64>,
    pub converged: bool,
    pub iterations: usize,
}

/// Power iteration for the principal adjacency eigenvector from a uniform
/// positive start, L2-normalized each step, stopping once the L1 change drops
/// below `tol * n`. Values are nonnegative with unit L2 norm.
///
/// The iteration runs on `A + I`: the shift leaves the eigenvector unchanged
/// but keeps bipartite graphs (where `+lambda` and `-lambda` tie in
/// magnitude) from oscillating forever.
pub fn eigenvector_centrality(g: &Graph, tol: f64, max_iter: usize) -> EigenvectorCentrality {
    let n = g.n();
    if g.m() == 0 {
        // Zero matrix: every value is 0 by convention.
        return EigenvectorCentrality {
            values: vec![0.0; n],
            converged: true,
            iterations: 0,
        };
    }
    let mut x = vec![1.0 / (n as f64).sqrt(); n];
    let mut next = vec![0.0f64; n];
    for iter in 1..=max_iter {
        for u in 0..n {
            let mut acc = x[u];
            for &v in g.neighbors(u as u32) {
                acc += x[v as usize];
            }
            next[u] = acc;
        }
        let norm = next.iter().map(|v| v * v).sum::<f64>().sqrt();
        for v in &mut next {
            *v /= norm;
        }
        let change: f64 = x.iter().zip(&next).map(|(a, b)| (a - b).abs()).sum();
        std::mem::swap(&mut x, &mut next);
        if change < tol * n as f64 {
            return EigenvectorCentrality {
                values: x,
                converged: true,
                iterations: iter,
            };
        }
    }
    log::warn!("eigenvector centrality did not converge after {max_iter} iterations");
    EigenvectorCentrality {
        values: x,
        converged: false,
        iterations: max_iter,
    }
}

/// Shell index per node via bucketed minimum-degree peeling, O(M).
pub fn coreness(g: &Graph) -> Vec<u32> {
    let n = g.n();
    if n == 0 {
        return Vec::new();
    }
    let mut degree: Vec<usize> = (0..n as u32).map(|u| g.degree(u)).collect();
    let max_deg = degree.iter().copied().max().unwrap_or(0);

    // Bucket sort nodes by degree: bin[d] is the start of degree-d nodes in pos.
    let mut bin = vec![0usize; max_deg + 2];
    for &d in &degree {
        bin[d + 1] += 1;
    }
    for d in 1..bin.len() {
        bin[d] += bin[d - 1];
    }
    let mut pos = vec![0usize; n];
    let mut vert = vec![0u32; n];
    {
        let mut cursor = bin.clone();
        for v in 0..n {
            pos[v] = cursor[degree[v]];
            vert[pos[v]] = v as u32;
            cursor[degree[v]] += 1;
        }
    }

    let mut core = vec![0u32; n];
    for i in 0..n {
        let v = vert[i];
        core[v as usize] = degree[v as usize] as u32;
        for &u in g.neighbors(v) {
            if degree[u as usize] > degree[v as usize] {
                // Move u one bucket down: swap with the first node of its bucket.
                let du = degree[u as usize];
                let pu = pos[u as usize];
                let pw = bin[du];
                let w = vert[pw];
                if u != w {
                    pos[u as usize] = pw;
                    pos[w as usize] = pu;
                    vert[pu] = w;
                    vert[pw] = u;
                }
                bin[du] += 1;
                degree[u as usize] -= 1;
            }
        }
    }
    core
}

/// Fraction of each node's neighbors assigned to a different community.
/// Degree-0 nodes get 0.
pub fn link_diversity(g: &Graph, partition: &Partition) -> Result<Vec<f64>> {
    if partition.len() != g.n() {
        return Err(Error::InvalidInput(format!(
            "partition covers {} nodes, graph has {}",
            partition.len(),
            g.n()
        )));
    }
    Ok((0..g.n() as u32)
        .map(|u| {
            let deg = g.degree(u);
            if deg == 0 {
                return 0.0;
            }
            let own = partition.community_of(u);
            let outside = g
                .neighbors(u)
                .iter()
                .filter(|&&v| partition.community_of(v) != own)
                .count();
            outside as f64 / deg as f64
        })
        .collect())
}

/// One node's feature values. Betweenness and closeness are `None` when the
/// matrix was extracted in lightweight mode.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureVector {
    pub degree_centrality: f64,
    pub clustering: f64,
    pub betweenness: Option<f64>,
    pub eigenvector: f64,
    pub closeness: Option<f64>,
    pub coreness: u32,
    pub link_diversity: f64,
}

/// Per-node rows of the structural features, row-major.
#[derive(Debug, Clone)]
pub struct FeatureMatrix {
    data: Vec<f64>,
    n_rows: usize,
    names: Vec<&'static str>,
    lightweight: bool,
}

impl FeatureMatrix {
    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.names.len()
    }

    pub fn feature_names(&self) -> &[&'static str] {
        &self.names
    }

    pub fn lightweight(&self) -> bool {
        self.lightweight
    }

    pub fn row(&self, i: usize) -> &[f64] {
        let c = self.n_cols();
        &self.data[i * c..(i + 1) * c]
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn feature_vector(&self, i: usize) -> FeatureVector {
        let row = self.row(i);
        if self.lightweight {
            FeatureVector {
                degree_centrality: row[0],
                clustering: row[1],
                betweenness: None,
                eigenvector: row[2],
                closeness: None,
                coreness: row[3] as u32,
                link_diversity: row[4],
            }
        } else {
            FeatureVector {
                degree_centrality: row[0],
                clustering: row[1],
                betweenness: Some(row[2]),
                eigenvector: row[3],
                closeness: Some(row[4]),
                coreness: row[5] as u32,
                link_diversity: row[6],
            }
        }
    }

    /// Write the matrix as CSV with a `node_id` column first.
    pub fn write_csv(&self, mut w: impl std::io::Write) -> std::io::Result<()> {
        write!(w, "node_id")?;
        for name in &self.names {
            write!(w, ",{name}")?;
        }
        writeln!(w)?;
        for i in 0..self.n_rows {
            write!(w, "{i}")?;
            for v in self.row(i) {
                write!(w, ",{v}")?;
            }
            writeln!(w)?;
        }
        Ok(())
    }
}

/// Compute all feature columns for every node of `g`. Community detection for
/// link diversity runs internally, seeded from `seed`. With
/// `lightweight=true` the betweenness and closeness columns are omitted.
pub fn extract_features(g: &Graph, lightweight: bool, seed: u64) -> FeatureMatrix {
    let degree = degree_centrality(g);
    let clustering = local_clustering(g);
    let eigen = eigenvector_centrality(g, DEFAULT_EIGEN_TOL, DEFAULT_EIGEN_MAX_ITER);
    let core = coreness(g);
    let partition = detect_communities(g, 1.0, seeds::derive(seed, &[tags::COMMUNITY]));
    let diversity = link_diversity(g, &partition).expect("partition covers all nodes");

    let n = g.n();
    let (names, n_cols): (Vec<&'static str>, usize) = if lightweight {
        (FEATURE_NAMES_LIGHTWEIGHT.to_vec(), 5)
    } else {
        (FEATURE_NAMES_FULL.to_vec(), 7)
    };
    let mut data = Vec::with_capacity(n * n_cols);
    if lightweight {
        for u in 0..n {
            data.extend_from_slice(&[
                degree[u],
                clustering[u],
                eigen.values[u],
                core[u] as f64,
                diversity[u],
            ]);
        }
    } else {
        let btw = betweenness(g);
        let cls = closeness(g);
        for u in 0..n {
            data.extend_from_slice(&[
                degree[u],
                clustering[u],
                btw[u],
                eigen.values[u],
                cls[u],
                core[u] as f64,
                diversity[u],
            ]);
        }
    }
    FeatureMatrix {
        data,
        n_rows: n,
        names,
        lightweight,
    }
}
