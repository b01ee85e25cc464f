//! The elementary cellular automaton analog: configuration-reach graphs
//! for the 256 k=2, r=1 rules evolved from a single black cell.
//!
//! Configurations are stored as (background, window): the infinite
//! periodic background plus a finite window trimmed of background-valued
//! ends. Odd rules, whose background flips under `rule(0,0,0) = 1`, are
//! handled exactly rather than excluded.

use crate::error::Error;
use crate::Result;
use std::collections::HashMap;

/// An elementary rule number; bit `4l + 2c + r` gives the new value of a
/// cell with neighborhood `(l, c, r)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CaRule(pub u8);

impl CaRule {
    pub fn apply(&self, l: u8, c: u8, r: u8) -> u8 {
        (self.0 >> ((l << 2) | (c << 1) | r)) & 1
    }

    /// Left-right mirror image of this rule.
    pub fn reflected(&self) -> CaRule {
        let mut out = 0u8;
        for n in 0..8u8 {
            let (l, c, r) = (n >> 2, (n >> 1) & 1, n & 1);
            let m = (r << 2) | (c << 1) | l;
            out |= self.apply(l, c, r) << m;
        }
        CaRule(out)
    }

    pub fn all() -> Vec<CaRule> {
        (0..=255).map(CaRule).collect()
    }

    /// Rules with `rule(0,0,0) = 0`, which leave a blank state blank.
    pub fn even() -> Vec<CaRule> {
        (0..=255).filter(|n| n % 2 == 0).map(CaRule).collect()
    }
}

/// A CA configuration: periodic `background` outside the window, window
/// `cells` starting at absolute position `offset`, trimmed so its first
/// and last cells differ from the background (or empty with offset 0).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CaConfig {
    pub background: u8,
    pub offset: i32,
    pub cells: Vec<u8>,
}

impl CaConfig {
    pub fn uniform(background: u8) -> CaConfig {
        CaConfig { background, offset: 0, cells: Vec::new() }
    }

    /// The single-black-cell start configuration.
    pub fn single_black() -> CaConfig {
        CaConfig { background: 0, offset: 0, cells: vec![1] }
    }

    pub fn cell_at(&self, pos: i32) -> u8 {
        let idx = pos as i64 - self.offset as i64;
        if idx < 0 || idx >= self.cells.len() as i64 {
            self.background
        } else {
            self.cells[idx as usize]
        }
    }

    /// Re-trim background-valued ends (idempotent).
    pub fn trimmed(mut self) -> CaConfig {
        let bg = self.background;
        match self.cells.iter().position(|&c| c != bg) {
            None => {
                self.cells.clear();
                self.offset = 0;
            }
            Some(start) => {
                let end = self.cells.iter().rposition(|&c| c != bg).unwrap();
                self.cells.drain(end + 1..);
                self.cells.drain(..start);
                self.offset += start as i32;
            }
        }
        self
    }

    /// Mirror image around the origin.
    pub fn reflected(&self) -> CaConfig {
        let mut cells = self.cells.clone();
        cells.reverse();
        let offset = -(self.offset + self.cells.len() as i32 - 1);
        CaConfig { background: self.background, offset, cells }.trimmed()
    }

    /// Canonical text key, e.g. `b0:o-2:1101`.
    pub fn key(&self) -> String {
        let mut out = format!("b{}:o{}:", self.background, self.offset);
        for &c in &self.cells {
            out.push(if c == 0 { '0' } else { '1' });
        }
        out
    }
}

/// One synchronous update: every cell (window grown by one on each side)
/// through the rule's neighborhood table; the background maps through
/// `rule(b, b, b)`.
pub fn ca_step(rule: CaRule, c: &CaConfig) -> CaConfig {
    let b = c.background;
    let new_bg = rule.apply(b, b, b);
    let lo = c.offset - 1;
    let hi = c.offset + c.cells.len() as i32;
    let mut cells = Vec::with_capacity((hi - lo + 1) as usize);
    for pos in lo..=hi {
        cells.push(rule.apply(c.cell_at(pos - 1), c.cell_at(pos), c.cell_at(pos + 1)));
    }
    CaConfig { background: new_bg, offset: lo, cells }.trimmed()
}

/// The reach graph of a rule subset: distinct configurations first reached
/// at each step, with per-rule transition edges.
#[derive(Debug, Clone)]
pub struct CaReachGraph {
    pub rules: Vec<CaRule>,
    pub nodes: Vec<CaNode>,
    /// `(src, rule, dst)` transitions, deduplicated.
    pub edges: Vec<(u32, CaRule, u32)>,
    /// `counts[t]` = configurations first reached at step `t`.
    pub counts: Vec<u64>,
    index: HashMap<CaConfig, u32>,
}

#[derive(Debug, Clone)]
pub struct CaNode {
    pub config: CaConfig,
    pub key: String,
    pub first_step: u32,
    /// Lowest rule number reaching it at `first_step` (ties broken by
    /// (step, rule) order for determinism).
    pub first_rule: CaRule,
}

impl CaReachGraph {
    pub fn node_id(&self, c: &CaConfig) -> Option<u32> {
        self.index.get(c).copied()
    }
}

/// Evolves every rule in `rules` from the single-black-cell configuration
/// for `t_max` steps.
pub fn ca_reach_graph(rules: &[CaRule], t_max: u32, max_nodes: usize) -> Result<CaReachGraph> {
    let init = CaConfig::single_black();
    let mut nodes = vec![CaNode {
        config: init.clone(),
        key: init.key(),
        first_step: 0,
        first_rule: *rules.first().unwrap_or(&CaRule(0)),
    }];
    let mut index = HashMap::from([(init.clone(), 0u32)]);
    let mut counts = vec![1u64];
    let mut edges: Vec<(u32, CaRule, u32)> = Vec::new();

    // per-rule current configuration; rules iterate in ascending order so
    // first-reach attribution is deterministic
    let mut sorted: Vec<CaRule> = rules.to_vec();
    sorted.sort();
    let mut current: Vec<(CaRule, CaConfig, u32)> =
        sorted.iter().map(|&r| (r, init.clone(), 0u32)).collect();

    for step in 1..=t_max {
        let mut new_count = 0u64;
        for (rule, cfg, src) in current.iter_mut() {
            let next = ca_step(*rule, cfg);
            let dst = match index.get(&next) {
                Some(&id) => id,
                None => {
                    if nodes.len() + 1 > max_nodes {
                        return Err(Error::NodeCapExceeded {
                            layer: step,
                            projected: nodes.len() + 1,
                            cap: max_nodes,
                        });
                    }
                    let id = nodes.len() as u32;
                    index.insert(next.clone(), id);
                    nodes.push(CaNode {
                        key: next.key(),
                        config: next.clone(),
                        first_step: step,
                        first_rule: *rule,
                    });
                    new_count += 1;
                    id
                }
            };
            edges.push((*src, *rule, dst));
            *cfg = next;
            *src = dst;
        }
        counts.push(new_count);
    }
    edges.sort_unstable_by_key(|&(s, r, d)| (s, r.0, d));
    edges.dedup();
    Ok(CaReachGraph { rules: sorted, nodes, edges, counts, index })
}

/// Undirected BFS layer sizes of the reach graph from the start
/// configuration.
pub fn ca_geodesic_layers(g: &CaReachGraph) -> Vec<u64> {
    let n = g.nodes.len();
    let mut adj: Vec<Vec<u32>> = vec![Vec::new(); n];
    for &(a, _, b) in &g.edges {
        adj[a as usize].push(b);
        adj[b as usize].push(a);
    }
    let mut dist: Vec<Option<u32>> = vec![None; n];
    dist[0] = Some(0);
    let mut frontier = vec![0u32];
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
    layers
}
