//! The deterministic-computation subspace: run every deterministic rule,
//! overlay the reached region on the rulial multiway graph, and compute
//! reachability statistics.

use crate::error::Error;
use crate::machine::{
    det_step, rule_from_id, Config, DetRule, MachineSpec, MicroRule,
};
use crate::multiway::{MultiwayGraph, NodeId};
use crate::Result;
use std::collections::HashMap;

/// Caps for the all-rules sweep.
#[derive(Debug, Clone)]
pub struct SweepOptions {
    /// Maximum `rule_count * t_max` budget.
    pub max_rule_steps: u64,
}

impl Default for SweepOptions {
    fn default() -> Self {
        SweepOptions { max_rule_steps: 10_000_000 }
    }
}

/// What every deterministic machine together can reach from one start.
#[derive(Debug, Clone)]
pub struct ReachProfile {
    pub spec: MachineSpec,
    /// `cumulative[t]` = distinct configurations visited by any rule
    /// within `t` steps.
    pub cumulative: Vec<u64>,
    /// First differences (`novel[0] = 1` for the start configuration).
    pub novel: Vec<u64>,
    /// Step at which each configuration was first visited.
    pub first_visit: HashMap<Config, u32>,
    /// Union of all traversed transitions as `(src, microrule index)`;
    /// the target is determined by the pair.
    pub union_edges: Vec<(Config, u16)>,
    pub init: Config,
}

impl ReachProfile {
    pub fn visited(&self, c: &Config) -> bool {
        self.first_visit.contains_key(c)
    }
}

/// Evolves every deterministic rule `t_max` steps from `init`,
/// accumulating the visited set per step and the union graph of traversed
/// edges. A transition memo keyed by `(config, case outcome)` makes the
/// sweep cheap; rules are not deduplicated up front.
pub fn det_reach_profile(
    spec: &MachineSpec,
    init: &Config,
    t_max: u32,
    opts: &SweepOptions,
) -> Result<ReachProfile> {
    init.validate(spec)?;
    let rule_count = spec.rule_count()?;
    let requested = rule_count.saturating_mul(t_max as u64);
    if requested > opts.max_rule_steps {
        return Err(Error::RuleStepCapExceeded { requested, cap: opts.max_rule_steps });
    }

    let mut first_visit: HashMap<Config, u32> = HashMap::from([(init.clone(), 0)]);
    let mut union_edges: HashMap<(Config, u16), ()> = HashMap::new();
    // memo: one deterministic step under a fixed case outcome
    let mut step_memo: HashMap<(Config, u16), Option<Config>> = HashMap::new();

    for id in 0..rule_count {
        let rule = rule_from_id(spec, id)?;
        let mut current = init.clone();
        for step in 1..=t_max {
            let m: MicroRule = rule.micro_rule_at(spec, &current);
            let mr = m.index(spec) as u16;
            let next = step_memo
                .entry((current.clone(), mr))
                .or_insert_with(|| det_step(spec, &rule, &current))
                .clone();
            let Some(next) = next else {
                break; // bounded-tape halt
            };
            union_edges.entry((current, mr)).or_insert(());
            // keep the minimum step over all rules
            first_visit
                .entry(next.clone())
                .and_modify(|s| *s = (*s).min(step))
                .or_insert(step);
            current = next;
        }
    }

    let mut per_step_new = vec![0u64; t_max as usize + 1];
    for &step in first_visit.values() {
        per_step_new[step as usize] += 1;
    }
    let mut cumulative = Vec::with_capacity(t_max as usize + 1);
    let mut acc = 0u64;
    for &n in &per_step_new {
        acc += n;
        cumulative.push(acc);
    }
    let mut union_edges: Vec<(Config, u16)> = union_edges.into_keys().collect();
    union_edges.sort_by_cached_key(|(c, mr)| (c.key(), *mr));
    Ok(ReachProfile {
        spec: spec.clone(),
        cumulative,
        novel: per_step_new,
        first_visit,
        union_edges,
        init: init.clone(),
    })
}

/// A rulial graph annotated with deterministic reachability.
#[derive(Debug, Clone)]
pub struct Overlay {
    /// Per node of the graph: reachable by some deterministic rule within
    /// the graph depth.
    pub node_marked: Vec<bool>,
    /// Per edge of the graph: traversed by some deterministic rule.
    pub edge_marked: Vec<bool>,
    pub nodes_marked: usize,
    pub edges_marked: usize,
}

/// Marks each node and edge of `g` as deterministic-reachable or not,
/// using visits within `g.depth` steps.
pub fn overlay(g: &MultiwayGraph, p: &ReachProfile) -> Overlay {
    let node_marked: Vec<bool> = g
        .nodes
        .iter()
        .map(|n| p.first_visit.get(&n.config).is_some_and(|&s| s <= g.depth))
        .collect();
    let union: HashMap<(NodeId, u16), ()> = p
        .union_edges
        .iter()
        .filter_map(|(c, mr)| g.node_id(c).map(|id| ((id, *mr), ())))
        .collect();
    let edge_marked: Vec<bool> =
        g.edges.iter().map(|e| union.contains_key(&(e.src, e.mr))).collect();
    Overlay {
        nodes_marked: node_marked.iter().filter(|&&b| b).count(),
        edges_marked: edge_marked.iter().filter(|&&b| b).count(),
        node_marked,
        edge_marked,
    }
}

/// One deterministic machine's walk through the rulial graph, with the
/// geodesic comparison.
#[derive(Debug, Clone)]
pub struct MachinePath {
    pub node_keys: Vec<String>,
    /// Rulial graph distance from the start to the endpoint.
    pub distance: u32,
    /// `t - distance`; zero iff the walk is a geodesic.
    pub slack: u32,
    pub halted_at: Option<usize>,
}

/// Runs `rule` for `t` steps and reports how far from the start the
/// endpoint sits in `g` (which must contain the trace, i.e. be built to
/// at least `t` layers from the same start).
pub fn machine_path(
    spec: &MachineSpec,
    g: &MultiwayGraph,
    rule: &DetRule,
    init: &Config,
    t: u32,
) -> Result<MachinePath> {
    let trace = crate::machine::det_evolve(spec, rule, init, t as usize);
    let mut node_keys = Vec::with_capacity(trace.configs.len());
    for c in &trace.configs {
        let id = g.node_id(c).ok_or_else(|| {
            Error::InvalidConfig(format!("trace config {} not in graph", c.key()))
        })?;
        node_keys.push(g.nodes[id as usize].key.clone());
    }
    let steps = trace.configs.len() as u32 - 1;
    // first-reach layer is exactly the BFS distance from the root
    let end = g.node_id(trace.configs.last().unwrap()).unwrap();
    let distance = g.nodes[end as usize].layer;
    Ok(MachinePath { node_keys, distance, slack: steps - distance, halted_at: trace.halted_at })
}

/// Undirected BFS layer sizes within the union graph of deterministic
/// transitions, starting from `from`.
pub fn geodesic_layer_profile(p: &ReachProfile, from: &Config) -> Result<Vec<u64>> {
    let spec = &p.spec;
    // materialize union adjacency (undirected)
    let mut ids: HashMap<Config, u32> = HashMap::new();
    let mut configs: Vec<Config> = Vec::new();
    let mut intern = |c: &Config, ids: &mut HashMap<Config, u32>, configs: &mut Vec<Config>| {
        *ids.entry(c.clone()).or_insert_with(|| {
            configs.push(c.clone());
            configs.len() as u32 - 1
        })
    };
    let mut adj: Vec<Vec<u32>> = Vec::new();
    for (src, mr) in &p.union_edges {
        let m = MicroRule::from_index(spec, *mr as usize)
            .ok_or_else(|| Error::InvalidConfig("bad micro-rule index".into()))?;
        let dst = crate::machine::apply_micro_rule(spec, src, &m)
            .ok_or_else(|| Error::InvalidConfig("union edge does not apply".into()))?;
        let a = intern(src, &mut ids, &mut configs);
        let b = intern(&dst, &mut ids, &mut configs);
        let need = configs.len();
        adj.resize(need, Vec::new());
        adj[a as usize].push(b);
        adj[b as usize].push(a);
    }
    let start = *ids
        .get(from)
        .ok_or_else(|| Error::InvalidConfig(format!("{} not in union graph", from.key())))?;
    adj.resize(configs.len(), Vec::new());

    let mut dist: Vec<Option<u32>> = vec![None; configs.len()];
    dist[start as usize] = Some(0);
    let mut frontier = vec![start];
    let mut layers = vec![1u64];
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for &v in &frontier {
            for &w in &adj[v as usize] {
                if dist[w as usize].is_none() {
                    dist[w as usize] = Some(layers.len() as u32);
                    next.push(w);
                }
            }
        }
        if next.is_empty() {
            break;
        }
        layers.push(next.len() as u64);
        frontier = next;
    }
    Ok(layers)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::machine::{apply_micro_rule, successors, CaseOutcome};
    use crate::multiway::{build_rulial_graph, directed_ball_counts, BuildOptions};

    fn spec22() -> MachineSpec {
        MachineSpec::new(2, 2).unwrap()
    }

    #[test]
    fn cumulative_matches_nondeterministic_at_small_t() {
        let sp = spec22();
        let p = det_reach_profile(&sp, &Config::blank(&sp), 3, &SweepOptions::default()).unwrap();
        assert_eq!(p.cumulative[..3], [1, 9, 36]);
        assert_eq!(p.cumulative[3], 68);
        let ball = directed_ball_counts(&sp, &Config::blank(&sp), 3, &BuildOptions::default())
            .unwrap()
            .counts;
        assert_eq!(ball[3], 100);
    }

    #[test]
    fn rule_step_cap() {
        let sp = MachineSpec::new(2, 3).unwrap();
        let err = det_reach_profile(
            &sp,
            &Config::blank(&sp),
            10,
            &SweepOptions { max_rule_steps: 1000 },
        )
        .unwrap_err();
        assert!(matches!(err, Error::RuleStepCapExceeded { .. }));
    }

    #[test]
    fn novel_is_first_difference_and_bounded() {
        let sp = spec22();
        let p = det_reach_profile(&sp, &Config::blank(&sp), 8, &SweepOptions::default()).unwrap();
        let rules = sp.rule_count().unwrap();
        assert_eq!(p.novel[0], 1);
        for t in 1..p.cumulative.len() {
            assert_eq!(p.novel[t], p.cumulative[t] - p.cumulative[t - 1]);
            assert!(p.novel[t] <= rules);
        }
    }

    #[test]
    fn cumulative_bounded_by_ball_and_rule_count() {
        let sp = spec22();
        let t = 6;
        let p = det_reach_profile(&sp, &Config::blank(&sp), t, &SweepOptions::default()).unwrap();
        let ball =
            directed_ball_counts(&sp, &Config::blank(&sp), t, &BuildOptions::default()).unwrap();
        for i in 0..=t as usize {
            assert!(p.cumulative[i] <= ball.counts[i]);
            if i > 0 {
                assert!(p.cumulative[i] <= p.cumulative[i - 1] + 4096);
            }
        }
    }

    #[test]
    fn union_graph_is_subgraph_of_rulial() {
        let sp = spec22();
        let p = det_reach_profile(&sp, &Config::blank(&sp), 4, &SweepOptions::default()).unwrap();
        for (src, mr) in &p.union_edges {
            let m = MicroRule::from_index(&sp, *mr as usize).unwrap();
            let dst = apply_micro_rule(&sp, src, &m).expect("edge applies");
            assert!(successors(&sp, src).iter().any(|(sm, sc)| *sm == m && *sc == dst));
        }
    }

    #[test]
    fn overlay_t1_everything_reachable() {
        let sp = spec22();
        let g = build_rulial_graph(&sp, &Config::blank(&sp), 1, &BuildOptions::default()).unwrap();
        let p = det_reach_profile(&sp, &Config::blank(&sp), 1, &SweepOptions::default()).unwrap();
        let o = overlay(&g, &p);
        assert_eq!(o.nodes_marked, 9);
        assert_eq!(o.edges_marked, 8);
    }

    #[test]
    fn overlay_t2_all_nodes_fewer_edges() {
        let sp = spec22();
        let g = build_rulial_graph(&sp, &Config::blank(&sp), 2, &BuildOptions::default()).unwrap();
        let p = det_reach_profile(&sp, &Config::blank(&sp), 2, &SweepOptions::default()).unwrap();
        let o = overlay(&g, &p);
        assert_eq!(o.nodes_marked, 36);
        assert!(o.edges_marked < g.edge_count(), "not through quite as many paths");
    }

    #[test]
    fn overlay_t3_68_of_100() {
        let sp = spec22();
        let g = build_rulial_graph(&sp, &Config::blank(&sp), 3, &BuildOptions::default()).unwrap();
        let p = det_reach_profile(&sp, &Config::blank(&sp), 3, &SweepOptions::default()).unwrap();
        let o = overlay(&g, &p);
        assert_eq!(g.node_count(), 100);
        assert_eq!(o.nodes_marked, 68);
    }

    #[test]
    fn straight_mover_has_zero_slack() {
        let sp = spec22();
        let right = sp.move_index(1).unwrap() as u8;
        let rule = DetRule {
            outcomes: (0..sp.case_count())
                .map(|_| CaseOutcome { write_state: 0, write_color: 1, move_idx: right })
                .collect(),
        };
        let g = build_rulial_graph(&sp, &Config::blank(&sp), 4, &BuildOptions::default()).unwrap();
        let path = machine_path(&sp, &g, &rule, &Config::blank(&sp), 4).unwrap();
        assert_eq!(path.slack, 0);
        assert_eq!(path.distance, 4);
    }

    #[test]
    fn slack_nonnegative_and_sometimes_positive_by_t4() {
        let sp = spec22();
        let t = 4;
        let g = build_rulial_graph(&sp, &Config::blank(&sp), t, &BuildOptions::default()).unwrap();
        let mut saw_positive = false;
        for id in 0..sp.rule_count().unwrap() {
            let rule = rule_from_id(&sp, id).unwrap();
            let path = machine_path(&sp, &g, &rule, &Config::blank(&sp), t).unwrap();
            if path.slack > 0 {
                saw_positive = true;
            }
        }
        assert!(saw_positive, "some rule wastes steps by t = 4");
    }

    #[test]
    fn geodesic_layers_shape() {
        let sp = spec22();
        let p = det_reach_profile(&sp, &Config::blank(&sp), 12, &SweepOptions::default()).unwrap();
        let layers = geodesic_layer_profile(&p, &Config::blank(&sp)).unwrap();
        assert_eq!(layers[0], 1);
        assert!(layers.iter().all(|&n| n <= 4096));
        assert!(layers.iter().sum::<u64>() <= p.cumulative[12]);
    }
}
