//! Small exact digraph-isomorphism search: Weisfeiler-Leman color
//! refinement for pruning plus backtracking. Handles parallel edges via
//! multiplicities. Intended for the graph sizes that arise here (a few
//! hundred nodes); not a general-purpose solver.

use std::collections::HashMap;

/// Directed multigraph with per-pair edge multiplicities; adjacency lists
/// are sorted by neighbor id.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiGraph {
    pub n: usize,
    out: Vec<Vec<(usize, u32)>>,
    inn: Vec<Vec<(usize, u32)>>,
}

impl DiGraph {
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> DiGraph {
        let mut out_m: Vec<HashMap<usize, u32>> = vec![HashMap::new(); n];
        let mut in_m: Vec<HashMap<usize, u32>> = vec![HashMap::new(); n];
        for &(a, b) in edges {
            *out_m[a].entry(b).or_insert(0) += 1;
            *in_m[b].entry(a).or_insert(0) += 1;
        }
        let sortv = |m: HashMap<usize, u32>| {
            let mut v: Vec<(usize, u32)> = m.into_iter().collect();
            v.sort_unstable();
            v
        };
        DiGraph {
            n,
            out: out_m.into_iter().map(sortv).collect(),
            inn: in_m.into_iter().map(sortv).collect(),
        }
    }

    /// Undirected graph as a symmetric digraph.
    pub fn from_undirected_edges(n: usize, edges: &[(usize, usize)]) -> DiGraph {
        let mut both = Vec::with_capacity(edges.len() * 2);
        for &(a, b) in edges {
            both.push((a, b));
            both.push((b, a));
        }
        DiGraph::from_edges(n, &both)
    }

    pub fn edge_count(&self) -> u64 {
        self.out.iter().flatten().map(|&(_, m)| m as u64).sum()
    }

    pub fn out_neighbors(&self, v: usize) -> &[(usize, u32)] {
        &self.out[v]
    }

    pub fn multiplicity(&self, a: usize, b: usize) -> u32 {
        match self.out[a].binary_search_by_key(&b, |&(t, _)| t) {
            Ok(i) => self.out[a][i].1,
            Err(_) => 0,
        }
    }
}

/// Stable color refinement. `seed` fixes initial colors (e.g. to pin a
/// root); colors are small consecutive ids, identical across graphs for
/// identical structure because signatures are canonicalized through a
/// shared interner.
fn refine(graphs: [&DiGraph; 2], seeds: [&[u32]; 2]) -> [Vec<u32>; 2] {
    let mut colors = [seeds[0].to_vec(), seeds[1].to_vec()];
    loop {
        let mut interner: HashMap<Vec<u64>, u32> = HashMap::new();
        let mut next: [Vec<u32>; 2] = [Vec::new(), Vec::new()];
        for side in 0..2 {
            let g = graphs[side];
            for v in 0..g.n {
                let mut sig: Vec<u64> = vec![colors[side][v] as u64];
                let mut outs: Vec<(u32, u32)> =
                    g.out[v].iter().map(|&(t, m)| (colors[side][t], m)).collect();
                outs.sort_unstable();
                sig.push(u64::MAX); // separator
                sig.extend(outs.iter().map(|&(c, m)| ((c as u64) << 32) | m as u64));
                let mut ins: Vec<(u32, u32)> =
                    g.inn[v].iter().map(|&(t, m)| (colors[side][t], m)).collect();
                ins.sort_unstable();
                sig.push(u64::MAX);
                sig.extend(ins.iter().map(|&(c, m)| ((c as u64) << 32) | m as u64));
                let id = interner.len() as u32;
                let c = *interner.entry(sig).or_insert(id);
                next[side].push(c);
            }
        }
        if next == colors {
            return colors;
        }
        let stable = {
            let count = |cs: &Vec<u32>| {
                let mut u: Vec<u32> = cs.clone();
                u.sort_unstable();
                u.dedup();
                u.len()
            };
            count(&next[0]) == count(&colors[0]) && count(&next[1]) == count(&colors[1])
        };
        colors = next;
        if stable {
            return colors;
        }
    }
}

fn histogram(colors: &[u32]) -> HashMap<u32, usize> {
    let mut h = HashMap::new();
    for &c in colors {
        *h.entry(c).or_insert(0) += 1;
    }
    h
}

/// Finds a multiplicity-preserving digraph isomorphism `a -> b`, or `None`.
pub fn find_isomorphism(a: &DiGraph, b: &DiGraph) -> Option<Vec<usize>> {
    search(a, b, None)
}

/// Isomorphism constrained to map `root_a` to `root_b`.
pub fn find_rooted_isomorphism(
    a: &DiGraph,
    b: &DiGraph,
    root_a: usize,
    root_b: usize,
) -> Option<Vec<usize>> {
    search(a, b, Some((root_a, root_b)))
}

fn search(a: &DiGraph, b: &DiGraph, roots: Option<(usize, usize)>) -> Option<Vec<usize>> {
    if a.n != b.n || a.edge_count() != b.edge_count() {
        return None;
    }
    if a.n == 0 {
        return Some(Vec::new());
    }
    let mut seed_a = vec![0u32; a.n];
    let mut seed_b = vec![0u32; b.n];
    if let Some((ra, rb)) = roots {
        seed_a[ra] = 1;
        seed_b[rb] = 1;
    }
    let colors = refine([a, b], [&seed_a, &seed_b]);
    if histogram(&colors[0]) != histogram(&colors[1]) {
        return None;
    }

    // assignment order: root first, then BFS-ish by constraint (vertices
    // adjacent to already-ordered ones first, smallest color class first)
    let order = assignment_order(a, roots.map(|r| r.0), &colors[0]);
    let mut by_color: HashMap<u32, Vec<usize>> = HashMap::new();
    for v in 0..b.n {
        by_color.entry(colors[1][v]).or_default().push(v);
    }

    let mut map: Vec<Option<usize>> = vec![None; a.n];
    let mut used = vec![false; b.n];
    if backtrack(a, b, &order, 0, &colors, &by_color, &mut map, &mut used) {
        Some(map.into_iter().map(Option::unwrap).collect())
    } else {
        None
    }
}

fn assignment_order(a: &DiGraph, root: Option<usize>, colors: &[u32]) -> Vec<usize> {
    let mut class_size: HashMap<u32, usize> = histogram(colors);
    let mut order = Vec::with_capacity(a.n);
    let mut placed = vec![false; a.n];
    let push = |v: usize, order: &mut Vec<usize>, placed: &mut Vec<bool>| {
        if !placed[v] {
            placed[v] = true;
            order.push(v);
        }
    };
    if let Some(r) = root {
        push(r, &mut order, &mut placed);
    }
    let mut i = 0;
    loop {
        while i < order.len() {
            let v = order[i];
            let mut nbrs: Vec<usize> = a.out[v]
                .iter()
                .chain(a.inn[v].iter())
                .map(|&(t, _)| t)
                .filter(|&t| !placed[t])
                .collect();
            nbrs.sort_by_key(|&t| (class_size.get(&colors[t]).copied().unwrap_or(0), t));
            for t in nbrs {
                push(t, &mut order, &mut placed);
            }
            i += 1;
        }
        // disconnected remainder: seed the smallest-class unplaced vertex
        match (0..a.n)
            .filter(|&v| !placed[v])
            .min_by_key(|&v| (class_size.get(&colors[v]).copied().unwrap_or(0), v))
        {
            Some(v) => push(v, &mut order, &mut placed),
            None => break,
        }
        class_size = histogram(colors);
    }
    order
}

#[allow(clippy::too_many_arguments)]
fn backtrack(
    a: &DiGraph,
    b: &DiGraph,
    order: &[usize],
    depth: usize,
    colors: &[Vec<u32>; 2],
    by_color: &HashMap<u32, Vec<usize>>,
    map: &mut Vec<Option<usize>>,
    used: &mut Vec<bool>,
) -> bool {
    if depth == order.len() {
        return true;
    }
    let u = order[depth];
    let Some(candidates) = by_color.get(&colors[0][u]) else {
        return false;
    };
    'cand: for &v in candidates {
        if used[v] {
            continue;
        }
        // all edges between u and already-assigned vertices must match
        for &(t, m) in &a.out[u] {
            if let Some(tv) = map[t] {
                if b.multiplicity(v, tv) != m {
                    continue 'cand;
                }
            }
        }
        for &(t, m) in &a.inn[u] {
            if let Some(tv) = map[t] {
                if b.multiplicity(tv, v) != m {
                    continue 'cand;
                }
            }
        }
        // self-loops
        if a.multiplicity(u, u) != b.multiplicity(v, v) {
            continue 'cand;
        }
        map[u] = Some(v);
        used[v] = true;
        if backtrack(a, b, order, depth + 1, colors, by_color, map, used) {
            return true;
        }
        map[u] = None;
        used[v] = false;
    }
    false
}

/// Checks that `map` is a multiplicity-preserving isomorphism `a -> b`.
pub fn verify_isomorphism(a: &DiGraph, b: &DiGraph, map: &[usize]) -> bool {
    if a.n != b.n || map.len() != a.n {
        return false;
    }
    let mut seen = vec![false; b.n];
    for &v in map {
        if v >= b.n || seen[v] {
            return false;
        }
        seen[v] = true;
    }
    if a.edge_count() != b.edge_count() {
        return false;
    }
    for u in 0..a.n {
        for &(t, m) in &a.out[u] {
            if b.multiplicity(map[u], map[t]) != m {
                return false;
            }
        }
    }
    true
}
