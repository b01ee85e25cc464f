//! Causal graphs: per-machine dependency DAGs for deterministic
//! evolutions (head carrier + cell revisit), the rulial multiway causal
//! graph, and extraction of individual causal graphs from it.
//!
//! Multiway events are layer-stamped: the evolution re-applies every
//! micro-rule to every configuration present at a step, so a configuration
//! reached again later spawns fresh events at the later layer. Causal
//! edges are state-mediated: `e1 -> e2` iff `e1.output = e2.input` and
//! `e2.layer = e1.layer + 1`. This keeps the graph acyclic even though
//! configurations recur.

use crate::error::Error;
use crate::machine::{det_evolve, Config, DetRule, MachineSpec, MicroRule};
use crate::multiway::{build_rulial_graph, BuildOptions, MultiwayGraph, NodeId};
use crate::Result;
use std::collections::HashMap;

/// One deterministic update event (step `tau` transforms `trace[tau-1]`
/// into `trace[tau]`).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DetEvent {
    pub step: u32,
    /// Cell written by this event (head position before the move).
    pub head_pos: i32,
    pub pre_state: u8,
    pub post_state: u8,
    pub pre_color: u8,
    pub post_color: u8,
    pub mv: i32,
}

/// Why one event depends on another.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DepKind {
    /// The head carries state from each event to the next.
    Head,
    /// The next event reading the cell this event wrote.
    Cell,
}

/// Dependency DAG over the events of one deterministic trace. Edges are
/// `(from_step, to_step, kind)` with steps 1-based and strictly increasing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DetCausalGraph {
    pub events: Vec<DetEvent>,
    pub edges: Vec<(u32, u32, DepKind)>,
}

/// Causal graph of a deterministic evolution: successive head locations,
/// plus an edge to the next event that revisits each written cell.
pub fn det_causal_graph(
    spec: &MachineSpec,
    rule: &DetRule,
    init: &Config,
    t: usize,
) -> DetCausalGraph {
    let trace = det_evolve(spec, rule, init, t);
    let mut events = Vec::with_capacity(trace.configs.len().saturating_sub(1));
    for (i, w) in trace.configs.windows(2).enumerate() {
        let (pre, post) = (&w[0], &w[1]);
        let head_pos = pre.pos;
        events.push(DetEvent {
            step: i as u32 + 1,
            head_pos,
            pre_state: pre.state,
            post_state: post.state,
            pre_color: pre.color_at(head_pos),
            post_color: post.color_at(head_pos),
            mv: post.pos - pre.pos,
        });
    }
    let mut edges = Vec::new();
    for i in 0..events.len() {
        if i + 1 < events.len() {
            edges.push((events[i].step, events[i + 1].step, DepKind::Head));
        }
        // earliest later event whose head returns to this cell
        if let Some(next) = events[i + 1..].iter().find(|e| e.head_pos == events[i].head_pos) {
            edges.push((events[i].step, next.step, DepKind::Cell));
        }
    }
    DetCausalGraph { events, edges }
}

/// One micro-rule application at a definite step of the all-rules
/// evolution. Keyed `E:<layer>:<input key>:<microrule index>` in exports.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MultiwayEvent {
    pub layer: u32,
    pub input: NodeId,
    pub mr: u16,
    pub output: NodeId,
}

/// The rulial multiway causal graph built to `t` steps, together with the
/// state graph it was derived from.
#[derive(Debug, Clone)]
pub struct MultiwayCausalGraph {
    pub graph: MultiwayGraph,
    pub events: Vec<MultiwayEvent>,
    /// Indices into `events`; `e1 -> e2` iff `e1.output = e2.input` at the
    /// next layer.
    pub edges: Vec<(u32, u32)>,
    /// `step_sets[t]` = configurations present at step `t` of the
    /// evolution (walk semantics).
    pub step_sets: Vec<Vec<NodeId>>,
    /// Offsets of each layer's event block: events of layer `l` occupy
    /// `layer_offsets[l-1]..layer_offsets[l]`.
    pub layer_offsets: Vec<usize>,
    lookup: HashMap<(u32, NodeId, u16), u32>,
}

impl MultiwayCausalGraph {
    pub fn event_key(&self, idx: usize) -> String {
        let e = &self.events[idx];
        format!("E:{}:{}:{}", e.layer, self.graph.nodes[e.input as usize].key, e.mr)
    }

    pub fn events_at_layer(&self, layer: u32) -> &[MultiwayEvent] {
        let l = layer as usize;
        &self.events[self.layer_offsets[l - 1]..self.layer_offsets[l]]
    }

    /// In-degree of each event: the number of previous-layer events that
    /// produce its input configuration.
    pub fn in_degrees(&self) -> Vec<usize> {
        let mut deg = vec![0usize; self.events.len()];
        for &(_, b) in &self.edges {
            deg[b as usize] += 1;
        }
        deg
    }
}

/// Builds the state graph to `t` steps and instantiates every micro-rule
/// application of the evolution as a layer-stamped event.
pub fn rulial_multiway_causal_graph(
    spec: &MachineSpec,
    init: &Config,
    t: u32,
    opts: &BuildOptions,
) -> Result<MultiwayCausalGraph> {
    let graph = build_rulial_graph(spec, init, t, opts)?;
    let step_sets = graph.step_sets(t.min(graph.depth))?;
    let mut events = Vec::new();
    let mut layer_offsets = vec![0usize];
    // events of layer l expand every config present at step l-1
    for sources in step_sets.iter().take(step_sets.len().saturating_sub(1)) {
        for &v in sources {
            for e in graph.out_edges(v) {
                events.push(MultiwayEvent {
                    layer: layer_offsets.len() as u32,
                    input: v,
                    mr: e.mr,
                    output: e.dst,
                });
            }
        }
        layer_offsets.push(events.len());
    }

    // group events by (layer, input) for edge construction
    let mut by_layer_input: HashMap<(u32, NodeId), Vec<u32>> = HashMap::new();
    let mut lookup = HashMap::with_capacity(events.len());
    for (i, e) in events.iter().enumerate() {
        by_layer_input.entry((e.layer, e.input)).or_default().push(i as u32);
        lookup.insert((e.layer, e.input, e.mr), i as u32);
    }
    let mut edges = Vec::new();
    for (i, e) in events.iter().enumerate() {
        if let Some(next) = by_layer_input.get(&(e.layer + 1, e.output)) {
            for &j in next {
                edges.push((i as u32, j));
            }
        }
    }
    Ok(MultiwayCausalGraph { graph, events, edges, step_sets, layer_offsets, lookup })
}

/// The restriction of the multiway causal graph to one deterministic
/// rule's trace: asserts it forms a path and reports its length.
#[derive(Debug, Clone)]
pub struct IndividualCausalGraph {
    /// Event indices into the multiway causal graph, in step order.
    pub event_indices: Vec<u32>,
    pub is_path: bool,
    /// Number of events (equals the steps taken before any boundary halt).
    pub length: usize,
}

pub fn extract_individual_causal_graph(
    mwcg: &MultiwayCausalGraph,
    spec: &MachineSpec,
    rule: &DetRule,
    init: &Config,
    t: u32,
) -> Result<IndividualCausalGraph> {
    let trace = det_evolve(spec, rule, init, t as usize);
    let mut event_indices = Vec::new();
    for (i, w) in trace.configs.windows(2).enumerate() {
        let layer = i as u32 + 1;
        let input = mwcg.graph.node_id(&w[0]).ok_or_else(|| {
            Error::InvalidConfig(format!("trace config {} not in graph", w[0].key()))
        })?;
        let m: MicroRule = rule.micro_rule_at(spec, &w[0]);
        let idx =
            mwcg.lookup.get(&(layer, input, m.index(spec) as u16)).copied().ok_or_else(|| {
                Error::InvalidConfig(format!("event for step {layer} not in causal graph"))
            })?;
        event_indices.push(idx);
    }
    // path check: consecutive events linked, no other causal edges among
    // the selected set
    let selected: std::collections::HashSet<u32> = event_indices.iter().copied().collect();
    let mut internal = Vec::new();
    for &(a, b) in &mwcg.edges {
        if selected.contains(&a) && selected.contains(&b) {
            internal.push((a, b));
        }
    }
    let mut is_path = internal.len() == event_indices.len().saturating_sub(1);
    for w in event_indices.windows(2) {
        if !internal.contains(&(w[0], w[1])) {
            is_path = false;
        }
    }
    Ok(IndividualCausalGraph { length: event_indices.len(), event_indices, is_path })
}

/// A branching pair of events and the merge that closes it.
#[derive(Debug, Clone)]
pub struct MergeWitness {
    pub branch: (u32, u32),
    pub merge_output: NodeId,
    pub merge_events: (u32, u32),
}

/// Causal-invariance witness search: for every pair of events with the
/// same input in the graph built to `t`, find a downstream merge (two
/// distinct events producing one configuration) within the graph built to
/// `t + 2`. Returns the first branching pair with no merge, if any.
pub fn find_unmerged_branch(
    spec: &MachineSpec,
    init: &Config,
    t: u32,
    opts: &BuildOptions,
) -> Result<Option<(String, String)>> {
    let wide = rulial_multiway_causal_graph(spec, init, t + 2, opts)?;
    // forward reachability over configs: outputs reachable from an event
    // within the remaining layers
    for layer in 1..=t {
        let events = wide.events_at_layer(layer);
        let base = wide.layer_offsets[layer as usize - 1];
        for (ai, a) in events.iter().enumerate() {
            for (bj, b) in events.iter().enumerate().skip(ai + 1) {
                if a.input != b.input {
                    continue;
                }
                if !merge_exists(&wide, a, b) {
                    return Ok(Some((
                        wide.event_key(base + ai),
                        wide.event_key(base + bj),
                    )));
                }
            }
        }
    }
    Ok(None)
}

fn merge_exists(wide: &MultiwayCausalGraph, a: &MultiwayEvent, b: &MultiwayEvent) -> bool {
    // immediate merge: two distinct events already share an output
    if a.output == b.output {
        return true;
    }
    // otherwise follow the state graph forward from both outputs looking
    // for a common config with distinct incoming final transitions
    let g = &wide.graph;
    let mut reach_a: HashMap<NodeId, NodeId> = HashMap::from([(a.output, a.input)]);
    let mut reach_b: HashMap<NodeId, NodeId> = HashMap::from([(b.output, b.input)]);
    let mut fa = vec![a.output];
    let mut fb = vec![b.output];
    let remaining = wide.step_sets.len() as u32 - 1 - a.layer;
    for _ in 0..remaining {
        let step = |frontier: &Vec<NodeId>, reach: &mut HashMap<NodeId, NodeId>| {
            let mut next = Vec::new();
            for &v in frontier {
                if !g.is_expanded(v) {
                    continue;
                }
                for e in g.out_edges(v) {
                    if !reach.contains_key(&e.dst) {
                        reach.insert(e.dst, v);
                        next.push(e.dst);
                    }
                }
            }
            next
        };
        fa = step(&fa, &mut reach_a);
        fb = step(&fb, &mut reach_b);
        for (&cfg, &pa) in &reach_a {
            if let Some(&pb) = reach_b.get(&cfg) {
                // distinct final transitions into the common config
                if pa != pb || cfg == a.output || cfg == b.output {
                    return true;
                }
            }
        }
    }
    false
}
