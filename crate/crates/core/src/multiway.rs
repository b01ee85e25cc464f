//! Rulial multiway graphs: frontier BFS over canonical configurations,
//! geodesic-ball growth sequences, layered foliations, slice graphs, and
//! the local vertex-transitivity check.

use crate::error::Error;
use crate::iso::DiGraph;
use crate::machine::{predecessors, successors, Config, MachineSpec};
use crate::Result;
use rayon::prelude::*;
use std::collections::HashMap;

/// Build limits and worker count. Defaults: 5e6 node cap, one worker.
#[derive(Debug, Clone)]
pub struct BuildOptions {
    pub max_nodes: usize,
    pub threads: usize,
}

impl Default for BuildOptions {
    fn default() -> Self {
        BuildOptions { max_nodes: 5_000_000, threads: 1 }
    }
}

pub type NodeId = u32;

#[derive(Debug, Clone)]
pub struct Node {
    pub config: Config,
    pub key: String,
    /// BFS first-reach layer; a revisited config keeps its first layer.
    pub layer: u32,
}

/// A directed labeled edge: applying micro-rule `mr` (index into
/// `enumerate_micro_rules` order) to `src` yields `dst`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Edge {
    pub src: NodeId,
    pub mr: u16,
    pub dst: NodeId,
}

/// The rulial multiway graph out to a given depth. Nodes are canonical
/// configurations; parallel edges with distinct micro-rule labels are kept.
#[derive(Debug, Clone)]
pub struct MultiwayGraph {
    pub spec: MachineSpec,
    pub nodes: Vec<Node>,
    pub edges: Vec<Edge>,
    pub root: NodeId,
    /// Layers fully expanded: every node with `layer < depth` has all its
    /// out-edges in the graph.
    pub depth: u32,
    /// True when a layer added no new nodes (finite tapes only).
    pub saturated: bool,
    index: HashMap<Config, NodeId>,
    out_adj: Vec<Vec<u32>>,
}

impl MultiwayGraph {
    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn node_id(&self, config: &Config) -> Option<NodeId> {
        self.index.get(config).copied()
    }

    pub fn out_edges(&self, v: NodeId) -> impl Iterator<Item = &Edge> {
        self.out_adj[v as usize].iter().map(move |&e| &self.edges[e as usize])
    }

    /// True when `v` has all its out-edges present.
    pub fn is_expanded(&self, v: NodeId) -> bool {
        self.saturated || self.nodes[v as usize].layer < self.depth
    }

    /// Distinct `(src, dst)` pairs, for renderings that drop repeated edges.
    pub fn dedup_edges(&self) -> Vec<(NodeId, NodeId)> {
        let mut pairs: Vec<(NodeId, NodeId)> = self.edges.iter().map(|e| (e.src, e.dst)).collect();
        pairs.sort_unstable();
        pairs.dedup();
        pairs
    }

    /// Walk step-sets: `sets[t]` holds every node reachable from the root
    /// by a directed walk of exactly `t` edges, for `t <= t_max <= depth`.
    pub fn step_sets(&self, t_max: u32) -> Result<Vec<Vec<NodeId>>> {
        if t_max > self.depth {
            return Err(Error::LayerOutOfRange { layer: t_max, depth: self.depth });
        }
        let mut sets: Vec<Vec<NodeId>> = vec![vec![self.root]];
        for _ in 0..t_max {
            let prev = sets.last().unwrap();
            let mut next: Vec<NodeId> = prev
                .iter()
                .flat_map(|&v| self.out_edges(v).map(|e| e.dst))
                .collect();
            next.sort_unstable();
            next.dedup();
            sets.push(next);
        }
        Ok(sets)
    }
}

/// Breadth-first construction: expand every newly reached configuration,
/// recording all micro-rule applications discovered (including edges back
/// into already-seen nodes). Node ids follow discovery order; each layer's
/// frontier is sorted by canonical key, so the result is deterministic and
/// independent of the worker count.
pub fn build_rulial_graph(
    spec: &MachineSpec,
    init: &Config,
    t: u32,
    opts: &BuildOptions,
) -> Result<MultiwayGraph> {
    init.validate(spec)?;
    let mut g = MultiwayGraph {
        spec: spec.clone(),
        nodes: vec![Node { config: init.clone(), key: init.key(), layer: 0 }],
        edges: Vec::new(),
        root: 0,
        depth: 0,
        saturated: false,
        index: HashMap::from([(init.clone(), 0)]),
        out_adj: vec![Vec::new()],
    };
    let mut frontier: Vec<NodeId> = vec![0];
    for layer in 1..=t {
        if frontier.is_empty() {
            g.saturated = true;
            break;
        }
        let expansions = expand(spec, &g, &frontier, opts);
        let mut next_frontier = Vec::new();
        for (src, succ) in frontier.iter().copied().zip(expansions) {
            for (m, cfg) in succ {
                let dst = match g.index.get(&cfg) {
                    Some(&id) => id,
                    None => {
                        if g.nodes.len() + 1 > opts.max_nodes {
                            return Err(Error::NodeCapExceeded {
                                layer,
                                projected: g.nodes.len() + 1,
                                cap: opts.max_nodes,
                            });
                        }
                        let id = g.nodes.len() as NodeId;
                        g.index.insert(cfg.clone(), id);
                        g.nodes.push(Node { key: cfg.key(), config: cfg, layer });
                        g.out_adj.push(Vec::new());
                        next_frontier.push(id);
                        id
                    }
                };
                let eid = g.edges.len() as u32;
                g.edges.push(Edge { src, mr: m, dst });
                g.out_adj[src as usize].push(eid);
            }
        }
        g.depth = layer;
        next_frontier.sort_by(|&a, &b| g.nodes[a as usize].key.cmp(&g.nodes[b as usize].key));
        frontier = next_frontier;
    }
    if frontier.is_empty() {
        g.saturated = true;
    }
    Ok(g)
}

/// Build until a layer adds nothing new (finite tapes reach `n*s*k^n`
/// configurations; unbounded tapes never saturate, so a cap is enforced).
pub fn build_rulial_graph_saturated(
    spec: &MachineSpec,
    init: &Config,
    opts: &BuildOptions,
) -> Result<MultiwayGraph> {
    build_rulial_graph(spec, init, u32::MAX, opts)
}

fn expand(
    spec: &MachineSpec,
    g: &MultiwayGraph,
    frontier: &[NodeId],
    opts: &BuildOptions,
) -> Vec<Vec<(u16, Config)>> {
    let one = |&v: &NodeId| -> Vec<(u16, Config)> {
        successors(spec, &g.nodes[v as usize].config)
            .into_iter()
            .map(|(m, c)| (m.index(spec) as u16, c))
            .collect()
    };
    if opts.threads > 1 && frontier.len() > 64 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(opts.threads)
            .build()
            .expect("thread pool");
        pool.install(|| frontier.par_iter().map(one).collect())
    } else {
        frontier.iter().map(one).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum GrowthMode {
    Directed,
    Undirected,
}

/// Sizes of successively larger geodesic balls around the start
/// configuration: `counts[t]` is the number of distinct configurations
/// within graph distance `t`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrowthSequence {
    pub spec: MachineSpec,
    pub mode: GrowthMode,
    pub counts: Vec<u64>,
}

/// `counts[t]` = configurations within `t` forward steps of `init`.
pub fn directed_ball_counts(
    spec: &MachineSpec,
    init: &Config,
    t_max: u32,
    opts: &BuildOptions,
) -> Result<GrowthSequence> {
    ball_counts(spec, init, t_max, GrowthMode::Directed, opts)
}

/// Same, ignoring edge direction (successors and predecessors).
pub fn undirected_ball_counts(
    spec: &MachineSpec,
    init: &Config,
    t_max: u32,
    opts: &BuildOptions,
) -> Result<GrowthSequence> {
    ball_counts(spec, init, t_max, GrowthMode::Undirected, opts)
}

fn ball_counts(
    spec: &MachineSpec,
    init: &Config,
    t_max: u32,
    mode: GrowthMode,
    opts: &BuildOptions,
) -> Result<GrowthSequence> {
    init.validate(spec)?;
    let mut seen: HashMap<Config, ()> = HashMap::from([(init.clone(), ())]);
    let mut frontier = vec![init.clone()];
    let mut counts = vec![1u64];
    for layer in 1..=t_max {
        let neighbor_lists = neighbors(spec, &frontier, mode, opts);
        let mut next = Vec::new();
        for list in neighbor_lists {
            for cfg in list {
                if !seen.contains_key(&cfg) {
                    if seen.len() + 1 > opts.max_nodes {
                        return Err(Error::NodeCapExceeded {
                            layer,
                            projected: seen.len() + 1,
                            cap: opts.max_nodes,
                        });
                    }
                    seen.insert(cfg.clone(), ());
                    next.push(cfg);
                }
            }
        }
        counts.push(seen.len() as u64);
        next.sort_by_cached_key(|c| c.key());
        frontier = next;
        if frontier.is_empty() {
            // saturated: remaining counts stay constant
            while counts.len() <= t_max as usize {
                counts.push(*counts.last().unwrap());
            }
            break;
        }
    }
    Ok(GrowthSequence { spec: spec.clone(), mode, counts })
}

fn neighbors(
    spec: &MachineSpec,
    frontier: &[Config],
    mode: GrowthMode,
    opts: &BuildOptions,
) -> Vec<Vec<Config>> {
    let one = |c: &Config| -> Vec<Config> {
        let mut out: Vec<Config> = successors(spec, c).into_iter().map(|(_, c)| c).collect();
        if mode == GrowthMode::Undirected {
            out.extend(predecessors(spec, c).into_iter().map(|(_, c)| c));
        }
        out
    };
    if opts.threads > 1 && frontier.len() > 64 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(opts.threads)
            .build()
            .expect("thread pool");
        pool.install(|| frontier.par_iter().map(one).collect())
    } else {
        frontier.iter().map(one).collect()
    }
}

/// Closed-form ball sizes where one exists: 1 at `t = 0`, `2sk + 1` at
/// `t = 1`, and `(2t+1)s` for `k = 1, t > 1` (default moves, unbounded
/// tape). `None` otherwise.
pub fn ball_count_formula(s: u8, k: u8, t: u32) -> Option<u64> {
    match t {
        0 => Some(1),
        1 => Some(2 * s as u64 * k as u64 + 1),
        _ if k == 1 => Some((2 * t as u64 + 1) * s as u64),
        _ => None,
    }
}

/// Which foliation defines a slice's node set.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Foliation {
    /// Nodes whose BFS first-reach layer equals the slice index.
    FirstReach,
    /// Nodes reachable by a directed walk of exactly `layer` steps.
    Step,
}

/// An undirected slice (transversal) graph: configurations in one
/// foliation layer, joined when they share a parent in the previous layer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SliceGraph {
    pub layer: u32,
    pub nodes: Vec<NodeId>,
    pub edges: Vec<(NodeId, NodeId)>,
}

/// Transversal graph of one foliation layer of `g`.
pub fn rulial_slice(g: &MultiwayGraph, layer: u32, foliation: Foliation) -> Result<SliceGraph> {
    if layer < 1 || layer > g.depth {
        return Err(Error::LayerOutOfRange { layer, depth: g.depth });
    }
    let (parents, members): (Vec<NodeId>, Vec<NodeId>) = match foliation {
        Foliation::FirstReach => {
            let at = |l: u32| -> Vec<NodeId> {
                (0..g.nodes.len() as NodeId).filter(|&v| g.nodes[v as usize].layer == l).collect()
            };
            (at(layer - 1), at(layer))
        }
        Foliation::Step => {
            let sets = g.step_sets(layer)?;
            (sets[layer as usize - 1].clone(), sets[layer as usize].clone())
        }
    };
    let in_slice: std::collections::HashSet<NodeId> = members.iter().copied().collect();
    let mut edges = Vec::new();
    for &p in &parents {
        if !g.is_expanded(p) {
            continue;
        }
        let mut children: Vec<NodeId> =
            g.out_edges(p).map(|e| e.dst).filter(|d| in_slice.contains(d)).collect();
        children.sort_unstable();
        children.dedup();
        for i in 0..children.len() {
            for j in i + 1..children.len() {
                edges.push((children[i], children[j]));
            }
        }
    }
    edges.sort_unstable();
    edges.dedup();
    let mut nodes = members;
    nodes.sort_by(|&a, &b| g.nodes[a as usize].key.cmp(&g.nodes[b as usize].key));
    Ok(SliceGraph { layer, nodes, edges })
}

/// Outcome of the vertex-transitivity check.
#[derive(Debug, Clone)]
pub struct TransitivityReport {
    pub expected_degree: usize,
    pub degree_nodes_checked: usize,
    pub degree_ok: bool,
    /// First `(key, out_degree, in_degree)` violating the expected degree.
    pub degree_violation: Option<(String, usize, usize)>,
    pub balls_checked: usize,
    pub balls_ok: bool,
    /// First pair of node keys whose radius-2 out-neighborhoods differ.
    pub ball_violation: Option<(String, String)>,
    /// Full root-moving automorphism search; only run for graphs with at
    /// most 200 nodes.
    pub automorphism_transitive: Option<bool>,
    pub passed: bool,
}

/// Checks uniform out/in-degree `|moves|*s*k` and pairwise isomorphism of
/// radius-2 out-neighborhoods (a local transitivity proxy), plus a full
/// automorphism search on graphs of at most 200 nodes. Only nodes whose
/// neighborhoods are fully built are examined, so unbounded-tape graphs
/// are checked on their interior.
pub fn check_vertex_transitivity(g: &MultiwayGraph) -> TransitivityReport {
    let expected = g.spec.outcome_count();
    let mut in_deg = vec![0usize; g.nodes.len()];
    for e in &g.edges {
        in_deg[e.dst as usize] += 1;
    }
    // out-degree valid for expanded nodes; in-degree only where every
    // predecessor config is itself expanded
    let out_checkable = |v: NodeId| g.is_expanded(v);
    let in_checkable = |v: NodeId| g.saturated || g.nodes[v as usize].layer + 1 < g.depth;

    let mut degree_ok = true;
    let mut degree_violation = None;
    let mut degree_nodes_checked = 0;
    for v in 0..g.nodes.len() as NodeId {
        let out_bad = out_checkable(v) && g.out_adj[v as usize].len() != expected;
        let in_bad = in_checkable(v) && in_deg[v as usize] != expected;
        if out_checkable(v) || in_checkable(v) {
            degree_nodes_checked += 1;
        }
        if (out_bad || in_bad) && degree_ok {
            degree_ok = false;
            degree_violation =
                Some((g.nodes[v as usize].key.clone(), g.out_adj[v as usize].len(), in_deg[v as usize]));
        }
    }

    // radius-2 out-neighborhood comparison, rooted
    let ball_checkable = |v: NodeId| {
        g.saturated
            || (g.nodes[v as usize].layer + 2 <= g.depth
                && g.out_edges(v).all(|e| g.is_expanded(e.dst)))
    };
    let candidates: Vec<NodeId> =
        (0..g.nodes.len() as NodeId).filter(|&v| ball_checkable(v)).collect();
    let mut balls_ok = true;
    let mut ball_violation = None;
    if let Some(&first) = candidates.first() {
        let reference = out_ball(g, first);
        for &v in &candidates[1..] {
            let ball = out_ball(g, v);
            if crate::iso::find_rooted_isomorphism(&reference.0, &ball.0, reference.1, ball.1)
                .is_none()
            {
                balls_ok = false;
                ball_violation = Some((
                    g.nodes[first as usize].key.clone(),
                    g.nodes[v as usize].key.clone(),
                ));
                break;
            }
        }
    }

    let automorphism_transitive = if g.saturated && g.nodes.len() <= 200 {
        let dg = to_digraph(g);
        let root = 0usize;
        Some((1..g.nodes.len()).all(|w| crate::iso::find_rooted_isomorphism(&dg, &dg, root, w).is_some()))
    } else {
        None
    };

    let passed = degree_ok && balls_ok && automorphism_transitive.unwrap_or(true);
    TransitivityReport {
        expected_degree: expected,
        degree_nodes_checked,
        degree_ok,
        degree_violation,
        balls_checked: candidates.len(),
        balls_ok,
        ball_violation,
        automorphism_transitive,
        passed,
    }
}

/// Rooted multigraph on the out-ball of radius 2 around `v`; edges are the
/// expansions of `v` and of its direct successors.
fn out_ball(g: &MultiwayGraph, v: NodeId) -> (DiGraph, usize) {
    let mut ids: Vec<NodeId> = vec![v];
    let mut local: HashMap<NodeId, usize> = HashMap::from([(v, 0)]);
    let mut edges = Vec::new();
    let shell: Vec<NodeId> = g.out_edges(v).map(|e| e.dst).collect();
    for src in std::iter::once(v).chain(shell.iter().copied()) {
        for e in g.out_edges(src) {
            let a = *local.entry(e.src).or_insert_with(|| {
                ids.push(e.src);
                ids.len() - 1
            });
            let b = *local.entry(e.dst).or_insert_with(|| {
                ids.push(e.dst);
                ids.len() - 1
            });
            edges.push((a, b));
        }
    }
    (DiGraph::from_edges(ids.len(), &edges), 0)
}

pub fn to_digraph(g: &MultiwayGraph) -> DiGraph {
    let edges: Vec<(usize, usize)> =
        g.edges.iter().map(|e| (e.src as usize, e.dst as usize)).collect();
    DiGraph::from_edges(g.nodes.len(), &edges)
}
