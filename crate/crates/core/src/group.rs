//! The Turing machine group on cyclic tapes: configurations `{i, u}` (head
//! offset, tape word) under the composition
//!
//! ```text
//! {i, u} * {j, v} = {(i + j) mod n, rot(u, j) (+) v}
//! ```
//!
//! where `rot(u, j)` cyclically rotates the n-digit tape word by `j` cells
//! and `(+)` is digit-wise addition mod k (XOR for k = 2). This is the
//! semidirect product `Z_n x| (Z_k)^n`, with the cyclic factor acting by
//! rotation. Rotation rather than a lossy shift is forced by invertibility;
//! the brute-force axiom checks below pin the convention down.
//!
//! Left multiplication by the four elements `{+-1, 0}`, `{+-1, 1}` is
//! exactly one non-deterministic machine transition, which is why the
//! Cayley graph of this group reproduces the rulial multiway graph.

use crate::error::Error;
use crate::iso::{self, DiGraph};
use crate::machine::{Config, MachineSpec, TapeModel};
use crate::multiway::{build_rulial_graph_saturated, BuildOptions};
use crate::Result;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, HashSet};
use std::fmt;

pub mod general;
mod perm;

pub use perm::{perm_closure, permutation_representation, Perm};

/// A group element: head offset `i` in `[0, n)` and tape word `u` in
/// `[0, k^n)`, digits little-endian (digit `j` is tape cell `j`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GroupElement {
    pub i: u32,
    pub u: u64,
    pub n: u32,
    pub k: u8,
}

/// Cyclic rotation of the n-digit base-k word by `j` cells: digit `b` of
/// the result is digit `(b - j) mod n` of `u`.
pub fn rotate_word(u: u64, j: u32, n: u32, k: u8) -> u64 {
    let j = j % n;
    if j == 0 {
        return u;
    }
    if k == 2 {
        let mask = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
        ((u << j) | (u >> (n - j))) & mask
    } else {
        let k = k as u64;
        let mut digits = vec![0u64; n as usize];
        let mut rest = u;
        for d in digits.iter_mut() {
            *d = rest % k;
            rest /= k;
        }
        let mut out = 0u64;
        for b in (0..n).rev() {
            let src = (b + n - j) % n;
            out = out * k + digits[src as usize];
        }
        out
    }
}

fn word_count(n: u32, k: u8) -> Result<u64> {
    let mut total: u64 = 1;
    for _ in 0..n {
        total = total
            .checked_mul(k as u64)
            .ok_or_else(|| Error::InvalidGroup(format!("k^n overflows u64 for n={n}, k={k}")))?;
    }
    Ok(total)
}

impl GroupElement {
    pub fn new(i: u32, u: u64, n: u32, k: u8) -> Result<GroupElement> {
        if n < 1 {
            return Err(Error::InvalidGroup("n must be >= 1".into()));
        }
        if k < 1 {
            return Err(Error::InvalidGroup("k must be >= 1".into()));
        }
        let words = word_count(n, k)?;
        if i >= n || u >= words {
            return Err(Error::InvalidGroup(format!("element ({i}, {u}) out of range")));
        }
        Ok(GroupElement { i, u, n, k })
    }

    pub fn identity(n: u32, k: u8) -> Result<GroupElement> {
        GroupElement::new(0, 0, n, k)
    }

    pub fn multiply(&self, other: &GroupElement) -> Result<GroupElement> {
        if self.n != other.n || self.k != other.k {
            return Err(Error::GroupMismatch(format!(
                "({}, {}) vs ({}, {})",
                self.n, self.k, other.n, other.k
            )));
        }
        let i = (self.i + other.i) % self.n;
        let rotated = rotate_word(self.u, other.i, self.n, self.k);
        let u = digitwise_add(rotated, other.u, self.n, self.k);
        Ok(GroupElement { i, u, n: self.n, k: self.k })
    }

    pub fn inverse(&self) -> GroupElement {
        let i = (self.n - self.i) % self.n;
        let rotated = rotate_word(self.u, i, self.n, self.k);
        GroupElement { i, u: digitwise_negate(rotated, self.n, self.k), n: self.n, k: self.k }
    }

    pub fn is_identity(&self) -> bool {
        self.i == 0 && self.u == 0
    }

    pub fn order(&self) -> u32 {
        let mut acc = *self;
        let mut ord = 1;
        while !acc.is_identity() {
            acc = acc.multiply(self).unwrap();
            ord += 1;
        }
        ord
    }

    /// Node key used in exports, e.g. `i2:u5`.
    pub fn key(&self) -> String {
        format!("i{}:u{}", self.i, self.u)
    }

    /// The cyclic-tape machine configuration this element labels: head at
    /// `i`, tape cell `j` = digit `j` of `u`.
    pub fn to_config(&self) -> Config {
        let k = self.k as u64;
        let mut cells = Vec::with_capacity(self.n as usize);
        let mut rest = self.u;
        for _ in 0..self.n {
            cells.push((rest % k) as u8);
            rest /= k;
        }
        Config { state: 0, pos: self.i as i32, tape: crate::machine::Tape::Finite { cells } }
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.i, self.u)
    }
}

fn digitwise_add(a: u64, b: u64, n: u32, k: u8) -> u64 {
    if k == 2 {
        return a ^ b;
    }
    let k = k as u64;
    let mut out = 0u64;
    let mut place = 1u64;
    let (mut ra, mut rb) = (a, b);
    for _ in 0..n {
        out += ((ra % k + rb % k) % k) * place;
        place *= k;
        ra /= k;
        rb /= k;
    }
    out
}

fn digitwise_negate(a: u64, n: u32, k: u8) -> u64 {
    if k == 2 {
        return a;
    }
    let k = k as u64;
    let mut out = 0u64;
    let mut place = 1u64;
    let mut ra = a;
    for _ in 0..n {
        out += ((k - ra % k) % k) * place;
        place *= k;
        ra /= k;
    }
    out
}

/// All `n * k^n` elements in `(i, u)` lexicographic order.
pub fn all_elements(n: u32, k: u8) -> Result<Vec<GroupElement>> {
    let words = word_count(n, k)?;
    let mut out = Vec::with_capacity((n as u64 * words) as usize);
    for i in 0..n {
        for u in 0..words {
            out.push(GroupElement { i, u, n, k });
        }
    }
    Ok(out)
}

/// Index of an element in the [`all_elements`] order.
pub fn element_index(e: &GroupElement) -> Result<usize> {
    let words = word_count(e.n, e.k)?;
    Ok((e.i as u64 * words + e.u) as usize)
}

/// The four standard generators `{1, 0}, {n-1, 0}, {1, 1}, {n-1, 1}` (for
/// general k: `{+-1, w}` for each write color `w`), i.e. the images of the
/// possible machine transitions applied to the identity configuration.
pub fn standard_generators(n: u32, k: u8) -> Result<Vec<GroupElement>> {
    let mut out = Vec::with_capacity(2 * k as usize);
    for w in 0..k {
        out.push(GroupElement::new(1 % n, w as u64, n, k)?);
        out.push(GroupElement::new((n - 1) % n, w as u64, n, k)?);
    }
    Ok(out)
}

/// The two-element generating set: `R = {1, 0}` (move right) and
/// `F = {0, 1}` (flip one cell).
pub fn minimal_generators(n: u32, k: u8) -> Result<(GroupElement, GroupElement)> {
    Ok((GroupElement::new(1 % n, 0, n, k)?, GroupElement::new(0, 1 % word_count(n, k)?, n, k)?))
}

/// Closure of a generating set under multiplication (BFS).
pub fn closure(gens: &[GroupElement]) -> Result<Vec<GroupElement>> {
    let first = gens.first().ok_or_else(|| Error::InvalidGroup("empty generator set".into()))?;
    let mut seen: HashSet<GroupElement> = HashSet::new();
    let e = GroupElement::identity(first.n, first.k)?;
    seen.insert(e);
    let mut frontier = vec![e];
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for g in frontier {
            for gen in gens {
                let h = g.multiply(gen)?;
                if seen.insert(h) {
                    next.push(h);
                }
            }
        }
        frontier = next;
    }
    let mut out: Vec<GroupElement> = seen.into_iter().collect();
    out.sort();
    Ok(out)
}

/// Full multiplication table; entry `[a][b]` is the element index of
/// `elements[a] * elements[b]` in `(i, u)` lex order.
pub fn multiplication_table(n: u32, k: u8) -> Result<Vec<Vec<usize>>> {
    let elements = all_elements(n, k)?;
    let mut table = Vec::with_capacity(elements.len());
    for a in &elements {
        let mut row = Vec::with_capacity(elements.len());
        for b in &elements {
            row.push(element_index(&a.multiply(b)?)?);
        }
        table.push(row);
    }
    Ok(table)
}

/// Result of checking `R^n = F^2 = 1` and `R F R^-1 F = F R F R^-1`, both
/// on group elements and on the permutation representation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationsReport {
    pub n: u32,
    pub r_pow_n: bool,
    pub f_squared: bool,
    pub commutation: bool,
    pub perm_r_pow_n: bool,
    pub perm_f_squared: bool,
    pub perm_commutation: bool,
}

impl RelationsReport {
    pub fn all_hold(&self) -> bool {
        self.r_pow_n
            && self.f_squared
            && self.commutation
            && self.perm_r_pow_n
            && self.perm_f_squared
            && self.perm_commutation
    }
}

pub fn check_relations(n: u32) -> Result<RelationsReport> {
    let (r, f) = minimal_generators(n, 2)?;
    let e = GroupElement::identity(n, 2)?;
    let mut r_n = e;
    for _ in 0..n {
        r_n = r_n.multiply(&r)?;
    }
    let lhs = r.multiply(&f)?.multiply(&r.inverse())?.multiply(&f)?;
    let rhs = f.multiply(&r)?.multiply(&f)?.multiply(&r.inverse())?;

    let (pf, pr) = permutation_representation(n);
    let pid = Perm::identity(2 * n as usize);
    let mut pr_n = pid.clone();
    for _ in 0..n {
        pr_n = pr_n.then(&pr);
    }
    let plhs = pr.then(&pf).then(&pr.inverse()).then(&pf);
    let prhs = pf.then(&pr).then(&pf).then(&pr.inverse());

    Ok(RelationsReport {
        n,
        r_pow_n: r_n == e,
        f_squared: f.multiply(&f)? == e,
        commutation: lhs == rhs,
        perm_r_pow_n: pr_n == pid,
        perm_f_squared: pf.then(&pf) == pid,
        perm_commutation: plhs == prhs,
    })
}

/// Structural identification of the group for one `n`: the tape subgroup
/// `{(0, u)}` and quotient, order statistics, and center size.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupStructureReport {
    pub n: u32,
    pub k: u8,
    pub order: u64,
    pub tape_subgroup_order: u64,
    pub tape_subgroup_normal: bool,
    /// Every non-identity tape element has order k (elementary abelian).
    pub tape_subgroup_elementary: bool,
    pub quotient_cyclic_of_order_n: bool,
    /// Multiset of element orders, as order -> count.
    pub order_statistics: BTreeMap<u32, u64>,
    pub center_size: u64,
}

pub fn identify_group(n: u32, k: u8) -> Result<GroupStructureReport> {
    let elements = all_elements(n, k)?;
    let words = word_count(n, k)?;

    let mut tape_subgroup_normal = true;
    let mut tape_subgroup_elementary = true;
    for u in 0..words {
        let h = GroupElement { i: 0, u, n, k };
        if u != 0 && h.order() != k as u32 {
            tape_subgroup_elementary = false;
        }
        for g in &elements {
            let conj = g.multiply(&h)?.multiply(&g.inverse())?;
            if conj.i != 0 {
                tape_subgroup_normal = false;
            }
        }
        for v in 0..words {
            if h.multiply(&GroupElement { i: 0, u: v, n, k })?.i != 0 {
                tape_subgroup_normal = false;
            }
        }
    }

    // the quotient by the tape subgroup is carried by the i-component;
    // cyclic of order n iff the coset of {1, 0} generates it
    let quotient_cyclic_of_order_n = {
        let r = GroupElement::new(1 % n, 0, n, k)?;
        let mut seen = HashSet::new();
        let mut acc = GroupElement::identity(n, k)?;
        loop {
            if !seen.insert(acc.i) {
                break;
            }
            acc = acc.multiply(&r)?;
        }
        seen.len() as u64 == n as u64
    };

    let mut order_statistics: BTreeMap<u32, u64> = BTreeMap::new();
    for g in &elements {
        *order_statistics.entry(g.order()).or_insert(0) += 1;
    }

    let mut center_size = 0u64;
    for g in &elements {
        let mut central = true;
        for h in &elements {
            if g.multiply(h)? != h.multiply(g)? {
                central = false;
                break;
            }
        }
        if central {
            center_size += 1;
        }
    }

    Ok(GroupStructureReport {
        n,
        k,
        order: n as u64 * words,
        tape_subgroup_order: words,
        tape_subgroup_normal,
        tape_subgroup_elementary,
        quotient_cyclic_of_order_n,
        order_statistics,
        center_size,
    })
}

/// A Cayley graph edge `from --gen--> from * gen`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CayleyEdge {
    pub from: u32,
    pub to: u32,
    pub gen: u32,
}

/// Cayley graph over all `n * k^n` elements; out-degree is the generator
/// count.
#[derive(Debug, Clone)]
pub struct CayleyGraph {
    pub n: u32,
    pub k: u8,
    pub elements: Vec<GroupElement>,
    pub generators: Vec<GroupElement>,
    pub edges: Vec<CayleyEdge>,
}

/// Which side generators act on: edges are `(g, g * gen)` for `Right`,
/// `(g, gen * g)` for `Left`. Left multiplication is the machine-transition
/// action and reproduces the rulial multiway graph with the identity node
/// correspondence.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Right,
    Left,
}

pub fn cayley_graph(n: u32, k: u8, generators: &[GroupElement], side: Side) -> Result<CayleyGraph> {
    let elements = all_elements(n, k)?;
    let mut edges = Vec::with_capacity(elements.len() * generators.len());
    for (ai, a) in elements.iter().enumerate() {
        for (gi, gen) in generators.iter().enumerate() {
            let prod = match side {
                Side::Right => a.multiply(gen)?,
                Side::Left => gen.multiply(a)?,
            };
            edges.push(CayleyEdge {
                from: ai as u32,
                to: element_index(&prod)? as u32,
                gen: gi as u32,
            });
        }
    }
    Ok(CayleyGraph { n, k, elements, generators: generators.to_vec(), edges })
}

impl CayleyGraph {
    pub fn to_digraph(&self) -> DiGraph {
        let edges: Vec<(usize, usize)> =
            self.edges.iter().map(|e| (e.from as usize, e.to as usize)).collect();
        DiGraph::from_edges(self.elements.len(), &edges)
    }

    /// Undirected simple graph (dedups reciprocal and parallel edges).
    pub fn undirected_simple(&self) -> UGraph {
        let mut edges: Vec<(usize, usize)> = self
            .edges
            .iter()
            .filter(|e| e.from != e.to)
            .map(|e| {
                let (a, b) = (e.from as usize, e.to as usize);
                (a.min(b), a.max(b))
            })
            .collect();
        edges.sort_unstable();
        edges.dedup();
        UGraph { n: self.elements.len(), edges }
    }
}

/// A simple undirected graph: deduplicated edges with `a < b`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UGraph {
    pub n: usize,
    pub edges: Vec<(usize, usize)>,
}

impl UGraph {
    pub fn to_digraph(&self) -> DiGraph {
        DiGraph::from_undirected_edges(self.n, &self.edges)
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.n];
        for &(a, b) in &self.edges {
            deg[a] += 1;
            deg[b] += 1;
        }
        deg
    }
}

/// The hypercube `Q_dim` on `2^dim` vertices.
pub fn hypercube(dim: u32) -> UGraph {
    let n = 1usize << dim;
    let mut edges = Vec::new();
    for v in 0..n {
        for b in 0..dim {
            let w = v ^ (1 << b);
            if v < w {
                edges.push((v, w));
            }
        }
    }
    UGraph { n, edges }
}

/// Cube-connected cycles `CCC_n`: each hypercube vertex `x` becomes an
/// n-cycle of nodes `(x, c)`; cycle edges join consecutive `c`, and the
/// dimension-c hypercube edge joins `(x, c)` to `(x ^ 2^c, c)`.
pub fn cube_connected_cycles(n: u32) -> UGraph {
    let cube = 1usize << n;
    let id = |x: usize, c: u32| x * n as usize + c as usize;
    let mut edges = Vec::new();
    for x in 0..cube {
        for c in 0..n {
            if n > 1 {
                let next = (c + 1) % n;
                let (a, b) = (id(x, c), id(x, next));
                if a != b {
                    edges.push((a.min(b), a.max(b)));
                }
            }
            let y = x ^ (1usize << c);
            if x < y {
                edges.push((id(x, c), id(y, c)));
            }
        }
    }
    edges.sort_unstable();
    edges.dedup();
    UGraph { n: cube * n as usize, edges }
}

/// Compares `graph` against an independently constructed `CCC_n`.
pub fn is_cube_connected_cycles(graph: &UGraph, n: u32) -> bool {
    let reference = cube_connected_cycles(n);
    if graph.n != reference.n || graph.edges.len() != reference.edges.len() {
        return false;
    }
    iso::find_isomorphism(&graph.to_digraph(), &reference.to_digraph()).is_some()
}

/// Outcome of matching the standard-generator Cayley graph against the
/// saturated cyclic-tape rulial multiway graph.
#[derive(Debug, Clone)]
pub struct RulialIsoResult {
    pub n: u32,
    pub isomorphic: bool,
    /// Element key -> config key, when an isomorphism was found.
    pub mapping: Option<Vec<(String, String)>>,
    /// A distinguishing invariant when not isomorphic.
    pub distinguishing: Option<String>,
}

/// Directed-graph isomorphism between `cayley_graph(n, standard)` and the
/// saturated `s = 1, k = 2` cyclic-tape rulial multiway graph.
///
/// With `Side::Left` the identity correspondence `(i, u) <-> configuration`
/// is itself the isomorphism. With `Side::Right` the graphs differ for
/// n >= 3 (generators act in the head's frame, rotating the tape), so a
/// full search runs and reports an honest negative.
pub fn isomorphic_to_rulial(n: u32, side: Side) -> Result<RulialIsoResult> {
    if n > 6 {
        return Err(Error::InvalidGroup("isomorphism search supported for n <= 6".into()));
    }
    let gens = standard_generators(n, 2)?;
    let cayley = cayley_graph(n, 2, &gens, side)?;
    let spec = MachineSpec::with_tape(1, 2, TapeModel::Cyclic(n))?;
    let rulial =
        build_rulial_graph_saturated(&spec, &Config::blank(&spec), &BuildOptions::default())?;

    let cg = cayley.to_digraph();
    let rg = crate::multiway::to_digraph(&rulial);
    if cg.n != rg.n {
        return Ok(RulialIsoResult {
            n,
            isomorphic: false,
            mapping: None,
            distinguishing: Some(format!("node counts differ: {} vs {}", cg.n, rg.n)),
        });
    }

    // the natural correspondence: element (i, u) is the configuration with
    // head at i and tape digits u; try it before searching
    let mut candidate: Vec<usize> = Vec::with_capacity(cg.n);
    let mut candidate_ok = true;
    for e in &cayley.elements {
        match rulial.node_id(&e.to_config()) {
            Some(id) => candidate.push(id as usize),
            None => {
                candidate_ok = false;
                break;
            }
        }
    }
    let map = if candidate_ok && iso::verify_isomorphism(&cg, &rg, &candidate) {
        Some(candidate)
    } else {
        iso::find_isomorphism(&cg, &rg)
    };

    match map {
        Some(map) => {
            let mapping = cayley
                .elements
                .iter()
                .enumerate()
                .map(|(ei, e)| (e.key(), rulial.nodes[map[ei]].key.clone()))
                .collect();
            Ok(RulialIsoResult { n, isomorphic: true, mapping: Some(mapping), distinguishing: None })
        }
        None => Ok(RulialIsoResult {
            n,
            isomorphic: false,
            mapping: None,
            distinguishing: Some("exhaustive search found no edge-preserving bijection".into()),
        }),
    }
}
