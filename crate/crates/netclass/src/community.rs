//! Modularity-based community detection in the Leiden style: local moving,
//! refinement within communities, aggregation, repeated until no move
//! improves modularity. Node visit order is shuffled from the supplied seed,
//! so results are reproducible per seed.

use rand::seq::SliceRandom;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::seeds;

/// Assignment of every node to exactly one community, ids dense `0..c`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    assignment: Vec<u32>,
    num_communities: usize,
}

impl Partition {
    /// Densify arbitrary community ids, preserving first-appearance order.
    pub fn from_assignment(raw: Vec<u32>) -> Partition {
        let mut remap: Vec<u32> = Vec::new();
        let mut dense = vec![u32::MAX; raw.len()];
        let mut table: std::collections::HashMap<u32, u32> = std::collections::HashMap::new();
        for (i, &c) in raw.iter().enumerate() {
            let id = *table.entry(c).or_insert_with(|| {
                remap.push(c);
                (remap.len() - 1) as u32
            });
            dense[i] = id;
        }
        Partition {
            assignment: dense,
            num_communities: remap.len(),
        }
    }

    pub fn singletons(n: usize) -> Partition {
        Partition {
            assignment: (0..n as u32).collect(),
            num_communities: n,
        }
    }

    #[inline]
    pub fn community_of(&self, u: u32) -> u32 {
        self.assignment[u as usize]
    }

    pub fn len(&self) -> usize {
        self.assignment.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assignment.is_empty()
    }

    pub fn num_communities(&self) -> usize {
        self.num_communities
    }

    pub fn assignment(&self) -> &[u32] {
        &self.assignment
    }

    /// CSV export with header `node_id,community_id`.
    pub fn write_csv(&self, mut w: impl std::io::Write) -> std::io::Result<()> {
        writeln!(w, "node_id,community_id")?;
        for (u, c) in self.assignment.iter().enumerate() {
            writeln!(w, "{u},{c}")?;
        }
        Ok(())
    }
}

/// Newman–Girvan modularity with a resolution parameter:
/// `Q = sum_c [ L_c/m - resolution * (D_c/(2m))^2 ]`.
pub fn modularity(g: &Graph, p: &Partition, resolution: f64) -> Result<f64> {
    if p.len() != g.n() {
        return Err(Error::InvalidInput(format!(
            "partition covers {} nodes, graph has {}",
            p.len(),
            g.n()
        )));
    }
    let m = g.m() as f64;
    if g.m() == 0 {
        return Err(Error::InvalidInput("modularity of an edgeless graph".into()));
    }
    let c = p.num_communities();
    let mut intra = vec![0u64; c];
    let mut degree_total = vec![0u64; c];
    for u in 0..g.n() as u32 {
        degree_total[p.community_of(u) as usize] += g.degree(u) as u64;
    }
    for (u, v) in g.edges() {
        if p.community_of(u) == p.community_of(v) {
            intra[p.community_of(u) as usize] += 1;
        }
    }
    let two_m = 2.0 * m;
    Ok((0..c)
        .map(|i| {
            let frac = degree_total[i] as f64 / two_m;
            intra[i] as f64 / m - resolution * frac * frac
        })
        .sum())
}

// Working graph for one aggregation level. Edge weights count multiplicity of
// folded edges; self-loop weight holds intra-supernode edges (each counted
// once here, twice in strength).
struct LevelGraph {
    adj: Vec<Vec<(u32, f64)>>,
    self_loop: Vec<f64>,
    strength: Vec<f64>,
    two_m: f64,
}

impl LevelGraph {
    fn from_graph(g: &Graph) -> LevelGraph {
        let n = g.n();
        let mut adj = Vec::with_capacity(n);
        for u in 0..n as u32 {
            adj.push(g.neighbors(u).iter().map(|&v| (v, 1.0)).collect());
        }
        let strength: Vec<f64> = (0..n as u32).map(|u| g.degree(u) as f64).collect();
        let two_m = strength.iter().sum();
        LevelGraph {
            adj,
            self_loop: vec![0.0; n],
            strength,
            two_m,
        }
    }

    fn n(&self) -> usize {
        self.adj.len()
    }

    fn aggregate(&self, part: &[u32], num_comms: usize) -> LevelGraph {
        let mut self_loop = vec![0.0f64; num_comms];
        let mut strength = vec![0.0f64; num_comms];
        let mut maps: Vec<std::collections::BTreeMap<u32, f64>> =
            vec![std::collections::BTreeMap::new(); num_comms];
        for u in 0..self.n() {
            let cu = part[u] as usize;
            strength[cu] += self.strength[u];
            self_loop[cu] += self.self_loop[u];
            for &(v, w) in &self.adj[u] {
                let cv = part[v as usize] as usize;
                if cu == cv {
                    // Each intra pair visited from both endpoints.
                    if (v as usize) > u {
                        self_loop[cu] += w;
                    }
                } else {
                    *maps[cu].entry(cv as u32).or_insert(0.0) += w;
                }
            }
        }
        let adj: Vec<Vec<(u32, f64)>> = maps
            .into_iter()
            .map(|m| m.into_iter().collect())
            .collect();
        LevelGraph {
            adj,
            self_loop,
            strength,
            two_m: self.two_m,
        }
    }
}

const GAIN_EPS: f64 = 1e-12;

// Local moving: visit nodes in seeded random order, moving each to the
// neighboring community with the highest modularity gain; movers re-enqueue
// their neighbors until the queue drains with no improving move left.
fn local_move(
    level: &LevelGraph,
    part: &mut [u32],
    comm_tot: &mut [f64],
    resolution: f64,
    rng: &mut rand_chacha::ChaCha8Rng,
) -> bool {
    let n = level.n();
    let mut order: Vec<u32> = (0..n as u32).collect();
    order.shuffle(rng);
    let mut in_queue = vec![true; n];
    let mut queue: std::collections::VecDeque<u32> = order.into_iter().collect();

    let mut weight_to: Vec<f64> = vec![0.0; comm_tot.len()];
    let mut touched: Vec<u32> = Vec::new();

    let mut improved = false;
    while let Some(u) = queue.pop_front() {
        let uu = u as usize;
        in_queue[uu] = false;
        let cu = part[uu] as usize;
        let ku = level.strength[uu];

        touched.clear();
        for &(v, w) in &level.adj[uu] {
            let cv = part[v as usize] as usize;
            if weight_to[cv] == 0.0 {
                touched.push(cv as u32);
            }
            weight_to[cv] += w;
        }

        // Gain of staying, with u notionally removed from its community;
        // ties keep the node where it is.
        let stay_gain = weight_to[cu] - resolution * ku * (comm_tot[cu] - ku) / level.two_m;
        let mut best_comm = cu;
        let mut best_gain = stay_gain;
        for &c in &touched {
            let c = c as usize;
            if c == cu {
                continue;
            }
            let gain = weight_to[c] - resolution * ku * comm_tot[c] / level.two_m;
            if gain > best_gain + GAIN_EPS {
                best_gain = gain;
                best_comm = c;
            }
        }
        for &c in &touched {
            weight_to[c as usize] = 0.0;
        }

        if best_comm != cu {
            comm_tot[cu] -= ku;
            comm_tot[best_comm] += ku;
            part[uu] = best_comm as u32;
            improved = true;
            for &(v, _) in &level.adj[uu] {
                if !in_queue[v as usize] {
                    in_queue[v as usize] = true;
                    queue.push_back(v);
                }
            }
        }
    }
    improved
}

// Refinement: starting from singletons, merge nodes that still sit alone into
// neighboring sub-communities, never crossing a phase-1 community boundary.
// Only-singletons-move keeps every refined community connected.
fn refine(
    level: &LevelGraph,
    phase1: &[u32],
    resolution: f64,
    rng: &mut rand_chacha::ChaCha8Rng,
) -> Vec<u32> {
    let n = level.n();
    let mut refined: Vec<u32> = (0..n as u32).collect();
    let mut comm_tot: Vec<f64> = level.strength.clone();
    let mut comm_size = vec![1u32; n];

    let mut order: Vec<u32> = (0..n as u32).collect();
    order.shuffle(rng);

    let mut weight_to: Vec<f64> = vec![0.0; n];
    let mut touched: Vec<u32> = Vec::new();

    for &u in &order {
        let uu = u as usize;
        if comm_size[refined[uu] as usize] > 1 {
            continue;
        }
        let cu = refined[uu] as usize;
        let ku = level.strength[uu];

        touched.clear();
        for &(v, w) in &level.adj[uu] {
            if phase1[v as usize] != phase1[uu] {
                continue;
            }
            let cv = refined[v as usize] as usize;
            if weight_to[cv] == 0.0 {
                touched.push(cv as u32);
            }
            weight_to[cv] += w;
        }

        // Staying singleton has gain 0 after removing u from its own community.
        let mut best_comm = cu;
        let mut best_gain = 0.0;
        for &c in &touched {
            let c = c as usize;
            if c == cu {
                continue;
            }
            let gain = weight_to[c] - resolution * ku * comm_tot[c] / level.two_m;
            if gain > best_gain + GAIN_EPS {
                best_gain = gain;
                best_comm = c;
            }
        }
        for &c in &touched {
            weight_to[c as usize] = 0.0;
        }

        if best_comm != cu {
            comm_tot[cu] -= ku;
            comm_tot[best_comm] += ku;
            comm_size[cu] -= 1;
            comm_size[best_comm] += 1;
            refined[uu] = best_comm as u32;
        }
    }
    refined
}

fn densify(part: &mut [u32]) -> usize {
    let mut remap: std::collections::HashMap<u32, u32> = std::collections::HashMap::new();
    let mut next = 0u32;
    for p in part.iter_mut() {
        let id = *remap.entry(*p).or_insert_with(|| {
            let id = next;
            next += 1;
            id
        });
        *p = id;
    }
    next as usize
}

/// Detect communities by maximizing modularity at the given resolution
/// (default 1.0). The procedure is seeded and deterministic per seed.
pub fn detect_communities(g: &Graph, resolution: f64, seed: u64) -> Partition {
    let n = g.n();
    if n == 0 {
        return Partition::singletons(0);
    }
    if g.m() == 0 {
        return Partition::singletons(n);
    }
    let mut rng = seeds::rng(seed, &[]);

    let mut level = LevelGraph::from_graph(g);
    // membership[u] = supernode of original node u at the current level.
    let mut membership: Vec<u32> = (0..n as u32).collect();

    for _level_idx in 0..64 {
        // Phase 1: local moving from singletons on the level graph.
        let mut part: Vec<u32> = (0..level.n() as u32).collect();
        let mut comm_tot: Vec<f64> = level.strength.clone();
        let moved = local_move(&level, &mut part, &mut comm_tot, resolution, &mut rng);
        if !moved {
            break;
        }

        // Phase 2: refinement within phase-1 communities.
        let mut refined = refine(&level, &part, resolution, &mut rng);
        let mut num_refined = densify(&mut refined);
        if num_refined == level.n() {
            // Refinement kept everything singleton; aggregate on the phase-1
            // partition so the level's progress is not thrown away.
            refined = part.clone();
            num_refined = densify(&mut refined);
            if num_refined == level.n() {
                break;
            }
        }

        // Phase 3: aggregate on the refined partition.
        let aggregated = level.aggregate(&refined, num_refined);
        for m in membership.iter_mut() {
            *m = refined[*m as usize];
        }
        level = aggregated;
    }

    // Final polish on the original graph: sweep single-node moves until no
    // move improves modularity, which is the termination contract.
    let level0 = LevelGraph::from_graph(g);
    let mut part = membership;
    let communities = densify(&mut part);
    let mut comm_tot = vec![0.0f64; communities];
    for u in 0..n {
        comm_tot[part[u] as usize] += level0.strength[u];
    }
    for _sweep in 0..64 {
        if !local_move(&level0, &mut part, &mut comm_tot, resolution, &mut rng) {
            break;
        }
    }

    Partition::from_assignment(part)
}
