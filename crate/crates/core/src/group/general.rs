//! Exploratory generalization to s > 1: elements `{q, i, u}` composing as
//! `(Z_s x Z_n) x| (Z_k)^n`, with the state component adding in `Z_s`.
//! Whether this reproduces the s > 1 cyclic-tape rulial graphs is checked
//! empirically in tests, not assumed.

use super::{digitwise_add, rotate_word, word_count};
use crate::error::Error;
use crate::machine::{Config, Tape};
use crate::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StatefulElement {
    pub q: u8,
    pub i: u32,
    pub u: u64,
}

/// Parameters of the generalized group `(Z_s x Z_n) x| (Z_k)^n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StatefulTmGroup {
    pub s: u8,
    pub n: u32,
    pub k: u8,
}

impl StatefulTmGroup {
    pub fn new(s: u8, n: u32, k: u8) -> Result<StatefulTmGroup> {
        if s < 1 || n < 1 || k < 1 {
            return Err(Error::InvalidGroup("require s, n, k >= 1".into()));
        }
        word_count(n, k)?;
        Ok(StatefulTmGroup { s, n, k })
    }

    pub fn order(&self) -> u64 {
        self.s as u64 * self.n as u64 * word_count(self.n, self.k).unwrap()
    }

    pub fn identity(&self) -> StatefulElement {
        StatefulElement { q: 0, i: 0, u: 0 }
    }

    pub fn multiply(&self, a: &StatefulElement, b: &StatefulElement) -> StatefulElement {
        StatefulElement {
            q: ((a.q as u32 + b.q as u32) % self.s as u32) as u8,
            i: (a.i + b.i) % self.n,
            u: digitwise_add(rotate_word(a.u, b.i, self.n, self.k), b.u, self.n, self.k),
        }
    }

    pub fn elements(&self) -> Vec<StatefulElement> {
        let words = word_count(self.n, self.k).unwrap();
        let mut out = Vec::with_capacity(self.order() as usize);
        for q in 0..self.s {
            for i in 0..self.n {
                for u in 0..words {
                    out.push(StatefulElement { q, i, u });
                }
            }
        }
        out
    }

    /// Images of the `2sk` machine transitions applied to the identity
    /// configuration: `{q', +-1 mod n, w}`.
    pub fn transition_generators(&self) -> Vec<StatefulElement> {
        let mut out = Vec::new();
        for q in 0..self.s {
            for w in 0..self.k {
                out.push(StatefulElement { q, i: 1 % self.n, u: w as u64 });
                out.push(StatefulElement { q, i: (self.n - 1) % self.n, u: w as u64 });
            }
        }
        out
    }

    /// The cyclic-tape configuration an element labels.
    pub fn to_config(&self, e: &StatefulElement) -> Config {
        let k = self.k as u64;
        let mut cells = Vec::with_capacity(self.n as usize);
        let mut rest = e.u;
        for _ in 0..self.n {
            cells.push((rest % k) as u8);
            rest /= k;
        }
        Config { state: e.q, pos: e.i as i32, tape: Tape::Finite { cells } }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::machine::{Config, MachineSpec, TapeModel};
    use crate::multiway::{build_rulial_graph_saturated, BuildOptions};
    use std::collections::BTreeMap;

    #[test]
    fn group_axioms_s2_k2_n3() {
        let g = StatefulTmGroup::new(2, 3, 2).unwrap();
        let elems = g.elements();
        assert_eq!(elems.len() as u64, g.order());
        let e = g.identity();
        for a in &elems {
            assert_eq!(g.multiply(a, &e), *a);
            assert_eq!(g.multiply(&e, a), *a);
        }
        // associativity sampled over a deterministic stride
        for (idx, a) in elems.iter().enumerate() {
            let b = &elems[(idx * 7 + 3) % elems.len()];
            let c = &elems[(idx * 13 + 11) % elems.len()];
            assert_eq!(g.multiply(&g.multiply(a, b), c), g.multiply(a, &g.multiply(b, c)));
        }
    }

    #[test]
    fn left_action_matches_s2_rulial_graph() {
        // empirical check: the left-multiplication Cayley graph of the
        // generalized group equals the s=2 cyclic-tape rulial graph under
        // the identity correspondence (q, i, u) <-> configuration
        let (s, k, n) = (2u8, 2u8, 3u32);
        let g = StatefulTmGroup::new(s, n, k).unwrap();
        let spec = MachineSpec::with_tape(s, k, TapeModel::Cyclic(n)).unwrap();
        let rulial =
            build_rulial_graph_saturated(&spec, &Config::blank(&spec), &BuildOptions::default())
                .unwrap();
        assert_eq!(rulial.node_count() as u64, g.order());

        let mut rulial_edges: BTreeMap<(String, String), u32> = BTreeMap::new();
        for e in &rulial.edges {
            *rulial_edges
                .entry((
                    rulial.nodes[e.src as usize].key.clone(),
                    rulial.nodes[e.dst as usize].key.clone(),
                ))
                .or_insert(0) += 1;
        }
        let mut cayley_edges: BTreeMap<(String, String), u32> = BTreeMap::new();
        for a in g.elements() {
            for gen in g.transition_generators() {
                let prod = g.multiply(&gen, &a);
                *cayley_edges
                    .entry((g.to_config(&a).key(), g.to_config(&prod).key()))
                    .or_insert(0) += 1;
            }
        }
        assert_eq!(rulial_edges, cayley_edges);
    }
}
