//! Undirected simple graph, file ingestion, ego-network extraction, summary
//! statistics, and export.
//!
//! Graphs are stored in CSR form (offset array + flat neighbor array) with
//! contiguous node ids `0..n`. Neighbor lists are sorted, which gives
//! `has_edge` by binary search and deterministic iteration everywhere.

use std::collections::VecDeque;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use crate::error::{Error, Result};

/// Immutable undirected simple graph with contiguous node ids.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    offsets: Vec<usize>,
    targets: Vec<u32>,
}

impl Graph {
    /// Build a graph on `n` nodes from an edge iterator. Self-loops and
    /// duplicate edges are dropped silently; use [`Graph::from_edges_counted`]
    /// when the drop counts matter.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (u32, u32)>) -> Graph {
        Graph::from_edges_counted(n, edges).0
    }

    /// Like [`Graph::from_edges`] but also reports how many records were
    /// dropped as self-loops or duplicates.
    pub fn from_edges_counted(
        n: usize,
        edges: impl IntoIterator<Item = (u32, u32)>,
    ) -> (Graph, DroppedRecords) {
        let mut dropped = DroppedRecords::default();
        let mut pairs: Vec<(u32, u32)> = Vec::new();
        for (u, v) in edges {
            assert!((u as usize) < n && (v as usize) < n, "edge endpoint out of range");
            if u == v {
                dropped.self_loops += 1;
                continue;
            }
            pairs.push((u.min(v), u.max(v)));
        }
        pairs.sort_unstable();
        let before = pairs.len();
        pairs.dedup();
        dropped.duplicates += before - pairs.len();

        let mut degrees = vec![0usize; n];
        for &(u, v) in &pairs {
            degrees[u as usize] += 1;
            degrees[v as usize] += 1;
        }
        let mut offsets = Vec::with_capacity(n + 1);
        let mut acc = 0usize;
        offsets.push(0);
        for &d in &degrees {
            acc += d;
            offsets.push(acc);
        }
        let mut cursor = offsets.clone();
        let mut targets = vec![0u32; acc];
        for &(u, v) in &pairs {
            targets[cursor[u as usize]] = v;
            cursor[u as usize] += 1;
            targets[cursor[v as usize]] = u;
            cursor[v as usize] += 1;
        }
        // Sorted (u, v) insertion order already leaves each list sorted for the
        // lower endpoint; sort per node to cover the upper endpoints too.
        for u in 0..n {
            targets[offsets[u]..offsets[u + 1]].sort_unstable();
        }
        (Graph { offsets, targets }, dropped)
    }

    /// Number of nodes.
    #[inline]
    pub fn n(&self) -> usize {
        self.offsets.len() - 1
    }

    /// Number of undirected edges.
    #[inline]
    pub fn m(&self) -> usize {
        self.targets.len() / 2
    }

    #[inline]
    pub fn degree(&self, u: u32) -> usize {
        self.offsets[u as usize + 1] - self.offsets[u as usize]
    }

    /// Sorted neighbor list of `u`.
    #[inline]
    pub fn neighbors(&self, u: u32) -> &[u32] {
        &self.targets[self.offsets[u as usize]..self.offsets[u as usize + 1]]
    }

    pub fn has_edge(&self, u: u32, v: u32) -> bool {
        self.neighbors(u).binary_search(&v).is_ok()
    }

    /// Undirected edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        (0..self.n() as u32).flat_map(move |u| {
            self.neighbors(u)
                .iter()
                .copied()
                .filter(move |&v| u < v)
                .map(move |v| (u, v))
        })
    }

    pub fn degree_sequence(&self) -> Vec<u32> {
        (0..self.n() as u32).map(|u| self.degree(u) as u32).collect()
    }

    /// BFS hop distances from `src`; unreachable nodes get `u32::MAX`.
    pub fn bfs_distances(&self, src: u32) -> Vec<u32> {
        let mut dist = vec![u32::MAX; self.n()];
        let mut queue = VecDeque::new();
        dist[src as usize] = 0;
        queue.push_back(src);
        while let Some(u) = queue.pop_front() {
            let du = dist[u as usize];
            for &v in self.neighbors(u) {
                if dist[v as usize] == u32::MAX {
                    dist[v as usize] = du + 1;
                    queue.push_back(v);
                }
            }
        }
        dist
    }

    /// Connected component id per node, ids dense in first-seen order.
    pub fn components(&self) -> (Vec<u32>, usize) {
        let n = self.n();
        let mut comp = vec![u32::MAX; n];
        let mut count = 0u32;
        let mut queue = VecDeque::new();
        for s in 0..n as u32 {
            if comp[s as usize] != u32::MAX {
                continue;
            }
            comp[s as usize] = count;
            queue.push_back(s);
            while let Some(u) = queue.pop_front() {
                for &v in self.neighbors(u) {
                    if comp[v as usize] == u32::MAX {
                        comp[v as usize] = count;
                        queue.push_back(v);
                    }
                }
            }
            count += 1;
        }
        (comp, count as usize)
    }

    /// Number of triangles and connected triples (paths of length two).
    pub fn triangles_and_triples(&self) -> (u64, u64) {
        let triples: u64 = (0..self.n() as u32)
            .map(|u| {
                let d = self.degree(u) as u64;
                d * d.saturating_sub(1) / 2
            })
            .sum();
        // Each triangle is counted once per edge; sorted-list intersection.
        let twice_tri: u64 = (0..self.n() as u32)
            .into_par_iter()
            .map(|u| {
                let mut acc = 0u64;
                for &v in self.neighbors(u) {
                    if v <= u {
                        continue;
                    }
                    acc += sorted_intersection_len(self.neighbors(u), self.neighbors(v));
                }
                acc
            })
            .sum();
        (twice_tri / 3, triples)
    }
}

fn sorted_intersection_len(a: &[u32], b: &[u32]) -> u64 {
    let (mut i, mut j, mut count) = (0, 0, 0u64);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                count += 1;
                i += 1;
                j += 1;
            }
        }
    }
    count
}

/// Counts of records dropped while building a simple graph.
#[derive(Debug, Default, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub struct DroppedRecords {
    pub self_loops: usize,
    pub duplicates: usize,
}

impl DroppedRecords {
    pub fn total(&self) -> usize {
        self.self_loops + self.duplicates
    }
}

/// Result of loading a plain edge list: the graph, the original node ids in
/// relabel order, and the drop summary.
#[derive(Debug)]
pub struct EdgeListFile {
    pub graph: Graph,
    /// `id_map[new_id]` is the id the node carried in the file.
    pub id_map: Vec<i64>,
    pub dropped: DroppedRecords,
}

/// Load a whitespace-separated edge list. Lines starting with `#` are ignored.
///
/// Nodes are relabeled to `0..n` in first-appearance order; `one_indexed` only
/// records how the file's ids should be read back, the structure is identical
/// either way. Duplicate edges and self-loops are dropped and counted.
pub fn load_edge_list(path: impl AsRef<Path>, one_indexed: bool) -> Result<EdgeListFile> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let reader = BufReader::new(file);

    let mut id_map: Vec<i64> = Vec::new();
    let mut index: std::collections::HashMap<i64, u32> = std::collections::HashMap::new();
    let mut intern = |raw: i64, id_map: &mut Vec<i64>| -> u32 {
        *index.entry(raw).or_insert_with(|| {
            id_map.push(raw);
            (id_map.len() - 1) as u32
        })
    };

    let mut edges: Vec<(u32, u32)> = Vec::new();
    let mut saw_data = false;
    for (lineno, line) in reader.lines().enumerate() {
        let line = line.map_err(|e| Error::io(path, e))?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        saw_data = true;
        let mut tokens = trimmed.split_whitespace();
        let (a, b) = match (tokens.next(), tokens.next(), tokens.next()) {
            (Some(a), Some(b), None) => (a, b),
            _ => {
                return Err(Error::parse(
                    path,
                    lineno + 1,
                    format!("expected two integer tokens, got {trimmed:?}"),
                ))
            }
        };
        let parse = |tok: &str| -> Result<i64> {
            tok.parse::<i64>().map_err(|_| {
                Error::parse(path, lineno + 1, format!("invalid integer {tok:?}"))
            })
        };
        let (mut ra, mut rb) = (parse(a)?, parse(b)?);
        if one_indexed {
            if ra < 1 || rb < 1 {
                return Err(Error::parse(
                    path,
                    lineno + 1,
                    format!("node id below 1 in one-indexed file: {trimmed:?}"),
                ));
            }
            ra -= 1;
            rb -= 1;
        }
        let u = intern(ra, &mut id_map);
        let v = intern(rb, &mut id_map);
        edges.push((u, v));
    }
    if !saw_data {
        return Err(Error::Format(format!(
            "{}: edge list contains no edges",
            path.display()
        )));
    }
    let (graph, dropped) = Graph::from_edges_counted(id_map.len(), edges);
    if dropped.total() > 0 {
        log::warn!(
            "{}: dropped {} self-loop(s) and {} duplicate edge(s)",
            path.display(),
            dropped.self_loops,
            dropped.duplicates
        );
    }
    Ok(EdgeListFile {
        graph,
        id_map,
        dropped,
    })
}

/// A labeled set of graphs, e.g. ego networks tagged by the network class they
/// were extracted from.
#[derive(Debug, Clone)]
pub struct GraphCollection {
    pub graphs: Vec<Graph>,
    /// Dense class label per graph, `0..num_classes`.
    pub labels: Vec<usize>,
    /// Source identifier per graph.
    pub origin_ids: Vec<u32>,
    pub num_classes: usize,
}

impl GraphCollection {
    pub fn new(graphs: Vec<Graph>, labels: Vec<usize>, origin_ids: Vec<u32>) -> GraphCollection {
        assert_eq!(graphs.len(), labels.len());
        assert_eq!(graphs.len(), origin_ids.len());
        let num_classes = labels.iter().copied().max().map_or(0, |c| c + 1);
        GraphCollection {
            graphs,
            labels,
            origin_ids,
            num_classes,
        }
    }

    pub fn len(&self) -> usize {
        self.graphs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.graphs.is_empty()
    }
}

/// Summary returned alongside a TU dataset load.
#[derive(Debug, Default, Clone, serde::Serialize)]
pub struct TuLoadSummary {
    /// Directed records in the `_A.txt` file.
    pub directed_records: usize,
    /// Undirected edges after folding both directions.
    pub undirected_edges: usize,
    /// Pairs that appeared in one direction only (folded with a warning).
    pub asymmetric_pairs: usize,
    pub dropped_self_loops: usize,
    /// Original label value for each dense class id.
    pub label_values: Vec<i64>,
}

/// A loaded TU benchmark dataset.
#[derive(Debug)]
pub struct TuDataset {
    pub collection: GraphCollection,
    pub summary: TuLoadSummary,
}

fn read_lines(path: &Path) -> Result<Vec<String>> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    BufReader::new(file)
        .lines()
        .map(|l| l.map_err(|e| Error::io(path, e)))
        .collect()
}

/// Load a TU-format dataset: `<name>_A.txt` (comma-separated, 1-indexed,
/// both directions per edge), `<name>_graph_indicator.txt`, and
/// `<name>_graph_labels.txt`.
///
/// Per-graph node ids are densified in global-id order; duplicate directed
/// records fold into one undirected edge. Labels are mapped to `0..C`
/// preserving the sorted order of the original label values.
pub fn load_tu_dataset(dir: impl AsRef<Path>, name: &str) -> Result<TuDataset> {
    let dir = dir.as_ref();
    let a_path = dir.join(format!("{name}_A.txt"));
    let ind_path = dir.join(format!("{name}_graph_indicator.txt"));
    let lab_path = dir.join(format!("{name}_graph_labels.txt"));

    // Graph id (1-indexed in file) per global node.
    let indicator: Vec<usize> = read_lines(&ind_path)?
        .iter()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| {
            l.trim()
                .parse::<usize>()
                .map_err(|_| Error::parse(&ind_path, i + 1, format!("invalid graph id {l:?}")))
        })
        .collect::<Result<_>>()?;
    if indicator.is_empty() {
        return Err(Error::Format(format!(
            "{}: empty graph indicator",
            ind_path.display()
        )));
    }
    let num_graphs = *indicator.iter().max().unwrap();
    if indicator.iter().any(|&g| g == 0) {
        return Err(Error::Format(format!(
            "{}: graph ids must be 1-indexed",
            ind_path.display()
        )));
    }

    // Raw labels, densified over sorted distinct values.
    let raw_labels: Vec<i64> = read_lines(&lab_path)?
        .iter()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| {
            let t = l.trim();
            // Some distributions write labels as floats ("1.0").
            t.parse::<i64>()
                .or_else(|_| t.parse::<f64>().map(|f| f as i64))
                .map_err(|_| Error::parse(&lab_path, i + 1, format!("invalid label {t:?}")))
        })
        .collect::<Result<_>>()?;
    if raw_labels.len() != num_graphs {
        return Err(Error::Format(format!(
            "label count {} does not match graph count {num_graphs}",
            raw_labels.len()
        )));
    }
    let mut label_values: Vec<i64> = raw_labels.clone();
    label_values.sort_unstable();
    label_values.dedup();
    let labels: Vec<usize> = raw_labels
        .iter()
        .map(|l| label_values.binary_search(l).unwrap())
        .collect();

    // Per-graph local ids for every global node, in global-id order.
    let mut graph_sizes = vec![0usize; num_graphs];
    let mut local_id: Vec<u32> = Vec::with_capacity(indicator.len());
    for &g in &indicator {
        local_id.push(graph_sizes[g - 1] as u32);
        graph_sizes[g - 1] += 1;
    }

    let mut per_graph_edges: Vec<Vec<(u32, u32)>> = vec![Vec::new(); num_graphs];
    let mut summary = TuLoadSummary {
        label_values,
        ..TuLoadSummary::default()
    };

    let a_file = File::open(&a_path).map_err(|e| Error::io(&a_path, e))?;
    for (lineno, line) in BufReader::new(a_file).lines().enumerate() {
        let line = line.map_err(|e| Error::io(&a_path, e))?;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        let mut parts = trimmed.split(',');
        let (a, b) = match (parts.next(), parts.next(), parts.next()) {
            (Some(a), Some(b), None) => (a.trim(), b.trim()),
            _ => {
                return Err(Error::parse(
                    &a_path,
                    lineno + 1,
                    format!("expected \"u, v\", got {trimmed:?}"),
                ))
            }
        };
        let parse = |tok: &str| -> Result<usize> {
            tok.parse::<usize>()
                .map_err(|_| Error::parse(&a_path, lineno + 1, format!("invalid node id {tok:?}")))
        };
        let (gu, gv) = (parse(a)?, parse(b)?);
        if gu == 0 || gv == 0 || gu > indicator.len() || gv > indicator.len() {
            return Err(Error::parse(
                &a_path,
                lineno + 1,
                format!("node id out of range: {trimmed:?}"),
            ));
        }
        summary.directed_records += 1;
        let (gi, gj) = (indicator[gu - 1], indicator[gv - 1]);
        if gi != gj {
            return Err(Error::Format(format!(
                "{}:{}: edge ({gu}, {gv}) crosses graphs {gi} and {gj}",
                a_path.display(),
                lineno + 1
            )));
        }
        if gu == gv {
            summary.dropped_self_loops += 1;
            continue;
        }
        let (lu, lv) = (local_id[gu - 1], local_id[gv - 1]);
        per_graph_edges[gi - 1].push((lu.min(lv), lu.max(lv)));
    }

    let mut graphs = Vec::with_capacity(num_graphs);
    for (g, mut edges) in per_graph_edges.into_iter().enumerate() {
        edges.sort_unstable();
        edges.dedup();
        summary.undirected_edges += edges.len();
        graphs.push(Graph::from_edges(graph_sizes[g], edges));
    }
    // Both-direction convention: every pair should contribute two records.
    // A shortfall means some edges were listed in one direction only.
    summary.asymmetric_pairs = (2 * summary.undirected_edges)
        .saturating_sub(summary.directed_records - summary.dropped_self_loops);
    if summary.asymmetric_pairs > 0 {
        log::warn!(
            "{name}: {} edge(s) listed in one direction only; folded",
            summary.asymmetric_pairs
        );
    }

    let origin_ids: Vec<u32> = (0..num_graphs as u32).collect();
    Ok(TuDataset {
        collection: GraphCollection::new(graphs, labels, origin_ids),
        summary,
    })
}

/// Induced subgraph on the neighbors of `ego`, with the ego itself removed and
/// nodes relabeled to `0..deg(ego)` preserving neighbor order.
pub fn ego_network(g: &Graph, ego: u32) -> Graph {
    let nbrs = g.neighbors(ego);
    let k = nbrs.len();
    let mut edges = Vec::new();
    for (i, &u) in nbrs.iter().enumerate() {
        for (j, &v) in nbrs.iter().enumerate().skip(i + 1) {
            if g.has_edge(u, v) {
                edges.push((i as u32, j as u32));
            }
        }
    }
    Graph::from_edges(k, edges)
}

/// Whole-graph summary statistics.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct GraphStats {
    pub n: usize,
    pub m: usize,
    pub avg_degree: f64,
    pub density: f64,
    pub transitivity: f64,
    /// Hop diameter; for disconnected graphs, the diameter of the largest
    /// component (see `connected`).
    pub diameter: u32,
    pub connected: bool,
}

/// Compute [`GraphStats`]. Errors on the empty graph. The diameter scan runs
/// a BFS from every node of the (largest) component.
pub fn graph_stats(g: &Graph) -> Result<GraphStats> {
    let n = g.n();
    if n == 0 {
        return Err(Error::InvalidInput("graph_stats on empty graph".into()));
    }
    let m = g.m();
    let avg_degree = 2.0 * m as f64 / n as f64;
    let density = if n > 1 {
        2.0 * m as f64 / (n as f64 * (n as f64 - 1.0))
    } else {
        0.0
    };
    let (tri, triples) = g.triangles_and_triples();
    let transitivity = if triples > 0 {
        3.0 * tri as f64 / triples as f64
    } else {
        0.0
    };

    let (comp, num_comps) = g.components();
    let connected = num_comps == 1;
    let largest = if connected {
        0u32
    } else {
        let mut sizes = vec![0usize; num_comps];
        for &c in &comp {
            sizes[c as usize] += 1;
        }
        (0..num_comps as u32).max_by_key(|&c| sizes[c as usize]).unwrap()
    };
    let members: Vec<u32> = (0..n as u32).filter(|&u| comp[u as usize] == largest).collect();
    let diameter = members
        .par_iter()
        .map(|&s| {
            let dist = g.bfs_distances(s);
            members
                .iter()
                .map(|&t| dist[t as usize])
                .max()
                .unwrap_or(0)
        })
        .max()
        .unwrap_or(0);
    if !connected {
        log::warn!("graph is disconnected; diameter of largest component reported");
    }
    Ok(GraphStats {
        n,
        m,
        avg_degree,
        density,
        transitivity,
        diameter,
        connected,
    })
}

/// Write `g` as an edge list at `path`. When `scores` is given, a companion
/// CSV `<stem>.scores.csv` with header `node_id,score` is written next to it.
/// The output round-trips through [`load_edge_list`] with `one_indexed=false`.
pub fn export_graph(g: &Graph, scores: Option<&[f64]>, path: impl AsRef<Path>) -> Result<PathBuf> {
    let path = path.as_ref();
    if let Some(s) = scores {
        if s.len() != g.n() {
            return Err(Error::InvalidInput(format!(
                "scores length {} does not match node count {}",
                s.len(),
                g.n()
            )));
        }
    }
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = BufWriter::new(file);
    writeln!(w, "# nodes {} edges {}", g.n(), g.m()).map_err(|e| Error::io(path, e))?;
    // The loader relabels by first appearance, so ids must first appear in
    // increasing order for the round-trip to be the identity. `upto` tracks
    // the appeared prefix (all ids < upto have appeared); where the sorted
    // edge stream would skip ahead, or for isolated nodes, a self-loop line
    // declares the missing ids. The loader drops it while keeping the node.
    let mut upto = 0u32;
    let declare_below = |target: u32, upto: &mut u32, w: &mut BufWriter<File>| -> Result<()> {
        while *upto < target {
            writeln!(w, "{upto} {upto}").map_err(|e| Error::io(path, e))?;
            *upto += 1;
        }
        Ok(())
    };
    for (u, v) in g.edges() {
        // The line introduces u then v; both must extend the prefix.
        declare_below(u, &mut upto, &mut w)?;
        if v > upto.max(u + 1) {
            declare_below(v, &mut upto, &mut w)?;
        }
        writeln!(w, "{u} {v}").map_err(|e| Error::io(path, e))?;
        upto = upto.max(v + 1);
    }
    declare_below(g.n() as u32, &mut upto, &mut w)?;
    w.flush().map_err(|e| Error::io(path, e))?;

    let scores_path = path.with_extension("scores.csv");
    if let Some(s) = scores {
        let file = File::create(&scores_path).map_err(|e| Error::io(&scores_path, e))?;
        let mut w = BufWriter::new(file);
        writeln!(w, "node_id,score").map_err(|e| Error::io(&scores_path, e))?;
        for (u, score) in s.iter().enumerate() {
            writeln!(w, "{u},{score}").map_err(|e| Error::io(&scores_path, e))?;
        }
        w.flush().map_err(|e| Error::io(&scores_path, e))?;
    }
    Ok(scores_path)
}
