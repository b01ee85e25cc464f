//! Acceptance suite: every reference table and structural guarantee, one
//! test per criterion. Each prints a `ACCEPT <n> PASS` line (visible with
//! `--nocapture`); the `ruliad verify` subcommand prints the same checks
//! as a table.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use ruliad_core::ca::{ca_reach_graph, CaRule};
use ruliad_core::causal::find_unmerged_branch;
use ruliad_core::detspace::{det_reach_profile, machine_path, overlay, SweepOptions};
use ruliad_core::export::{to_json, ExportGraph};
use ruliad_core::golden;
use ruliad_core::group::{
    all_elements, cayley_graph, check_relations, closure, identify_group, is_cube_connected_cycles,
    isomorphic_to_rulial, minimal_generators, perm_closure, permutation_representation,
    GroupElement, Side,
};
use ruliad_core::machine::{predecessors, rule_from_id, successors};
use ruliad_core::multiway::{
    ball_count_formula, build_rulial_graph, build_rulial_graph_saturated,
    check_vertex_transitivity, directed_ball_counts, undirected_ball_counts, BuildOptions,
};
use ruliad_core::{Config, MachineSpec, TapeModel};
use std::collections::BTreeMap;

fn opts() -> BuildOptions {
    BuildOptions::default()
}

#[test]
fn accept_1_directed_ball_counts_match_tables() {
    for row in golden::directed_growth_rows() {
        let sp = MachineSpec::new(row.s, row.k).unwrap();
        let t_max = row.counts.len() as u32 - 1;
        let got = directed_ball_counts(&sp, &Config::blank(&sp), t_max, &opts()).unwrap();
        assert_eq!(got.counts, row.counts, "directed s={} k={}", row.s, row.k);
    }
    println!("ACCEPT 1 PASS: directed ball counts match all reference rows exactly");
}

#[test]
fn accept_2_undirected_ball_counts_match_tables() {
    for row in golden::undirected_growth_rows() {
        let sp = MachineSpec::new(row.s, row.k).unwrap();
        let t_max = row.counts.len() as u32 - 1;
        let got = undirected_ball_counts(&sp, &Config::blank(&sp), t_max, &opts()).unwrap();
        assert_eq!(got.counts, row.counts, "undirected s={} k={}", row.s, row.k);
    }
    println!("ACCEPT 2 PASS: undirected ball counts match all reference rows exactly");
}

#[test]
fn accept_3_closed_forms_and_ratios() {
    // M_1 = 2sk + 1
    for s in 1..=4u8 {
        for k in 1..=3u8 {
            let sp = MachineSpec::new(s, k).unwrap();
            let counts = directed_ball_counts(&sp, &Config::blank(&sp), 1, &opts()).unwrap();
            assert_eq!(counts.counts[1], 2 * s as u64 * k as u64 + 1);
        }
    }
    // M_t = (2t + 1) s for k = 1
    for s in 1..=4u8 {
        let sp = MachineSpec::new(s, 1).unwrap();
        let counts = directed_ball_counts(&sp, &Config::blank(&sp), 16, &opts()).unwrap();
        for t in 2..=16u32 {
            assert_eq!(counts.counts[t as usize], ball_count_formula(s, 1, t).unwrap());
        }
    }
    // growth ratio -> k within 10% by t = 12
    for s in [1u8, 2] {
        let sp = MachineSpec::new(s, 2).unwrap();
        let counts = directed_ball_counts(&sp, &Config::blank(&sp), 13, &opts()).unwrap().counts;
        let ratio = counts[13] as f64 / counts[12] as f64;
        assert!((ratio - 2.0).abs() <= 0.2, "s={s}: ratio {ratio}");
    }
    // undirected/directed -> k^2 / (2k - 1) within 5% at t = 10
    let sp = MachineSpec::new(2, 2).unwrap();
    let d = directed_ball_counts(&sp, &Config::blank(&sp), 10, &opts()).unwrap().counts[10];
    let u = undirected_ball_counts(&sp, &Config::blank(&sp), 10, &opts()).unwrap().counts[10];
    let ratio = u as f64 / d as f64;
    let target = 4.0 / 3.0;
    assert!((ratio - target).abs() / target <= 0.05, "ratio {ratio} vs {target}");
    println!("ACCEPT 3 PASS: closed forms and asymptotic ratios hold");
}

#[test]
fn accept_4_deterministic_reach() {
    let sp = MachineSpec::new(2, 2).unwrap();
    let blank = Config::blank(&sp);
    let p = det_reach_profile(&sp, &blank, 15, &SweepOptions::default()).unwrap();
    assert_eq!(p.cumulative, golden::det_cumulative_s2_k2());

    let g2 = build_rulial_graph(&sp, &blank, 2, &opts()).unwrap();
    let o2 = overlay(&g2, &det_reach_profile(&sp, &blank, 2, &SweepOptions::default()).unwrap());
    assert_eq!((o2.nodes_marked, g2.node_count()), (36, 36));

    let g3 = build_rulial_graph(&sp, &blank, 3, &opts()).unwrap();
    let o3 = overlay(&g3, &det_reach_profile(&sp, &blank, 3, &SweepOptions::default()).unwrap());
    assert_eq!((o3.nodes_marked, g3.node_count()), (68, 100));
    println!("ACCEPT 4 PASS: deterministic reach sequence and overlays match");
}

#[test]
fn accept_5_group_suite() {
    // axioms: exhaustive for n <= 3
    for n in 1..=3u32 {
        let elements = all_elements(n, 2).unwrap();
        let e = GroupElement::identity(n, 2).unwrap();
        for a in &elements {
            assert_eq!(a.multiply(&e).unwrap(), *a);
            assert_eq!(e.multiply(a).unwrap(), *a);
            assert_eq!(a.multiply(&a.inverse()).unwrap(), e);
            for b in &elements {
                for c in &elements {
                    assert_eq!(
                        a.multiply(b).unwrap().multiply(c).unwrap(),
                        a.multiply(&b.multiply(c).unwrap()).unwrap()
                    );
                }
            }
        }
    }
    // randomized for n = 4: 1e5 triples under a fixed seed
    let elements = all_elements(4, 2).unwrap();
    let e4 = GroupElement::identity(4, 2).unwrap();
    for a in &elements {
        assert_eq!(a.multiply(&a.inverse()).unwrap(), e4);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for _ in 0..100_000 {
        let a = elements[rng.gen_range(0..elements.len())];
        let b = elements[rng.gen_range(0..elements.len())];
        let c = elements[rng.gen_range(0..elements.len())];
        assert_eq!(
            a.multiply(&b).unwrap().multiply(&c).unwrap(),
            a.multiply(&b.multiply(&c).unwrap()).unwrap()
        );
    }
    // |group| = n * 2^n via two-generator closure for n = 2..6
    for n in 2..=6u32 {
        let (r, f) = minimal_generators(n, 2).unwrap();
        assert_eq!(closure(&[r, f]).unwrap().len() as u64, n as u64 * (1u64 << n));
    }
    // relations for n <= 8
    for n in 1..=8u32 {
        assert!(check_relations(n).unwrap().all_hold(), "relations at n={n}");
    }
    // permutation-representation closure orders
    for (n, expect) in [(2u32, 8usize), (3, 24)] {
        let (a, b) = permutation_representation(n);
        assert_eq!(perm_closure(&[a, b]).len(), expect);
    }
    // order statistics: D4 at n = 2, A4 x Z2 at n = 3 (oracle-constructed)
    let d4: BTreeMap<u32, u64> = [(1, 1), (2, 5), (4, 2)].into_iter().collect();
    let r2 = identify_group(2, 2).unwrap();
    assert_eq!(r2.order_statistics, d4);
    assert_eq!(r2.center_size, 2);
    let r3 = identify_group(3, 2).unwrap();
    assert_eq!(r3.order_statistics, a4_x_z2_order_statistics());
    assert!(r2.tape_subgroup_normal && r3.tape_subgroup_normal);
    assert!(r2.quotient_cyclic_of_order_n && r3.quotient_cyclic_of_order_n);
    // Cayley graph isomorphic to the cyclic-tape rulial graph, n = 2, 3, 4
    for n in [2u32, 3, 4] {
        let res = isomorphic_to_rulial(n, Side::Left).unwrap();
        assert!(res.isomorphic, "n={n}: {:?}", res.distinguishing);
    }
    // undirected minimal-generator graph is CCC_n for n = 3, 4
    for n in [3u32, 4] {
        let (r, f) = minimal_generators(n, 2).unwrap();
        let g = cayley_graph(n, 2, &[r, f], Side::Right).unwrap().undirected_simple();
        assert!(is_cube_connected_cycles(&g, n));
    }
    println!("ACCEPT 5 PASS: group axioms, relations, structure, Cayley/rulial and CCC checks");
}

fn a4_x_z2_order_statistics() -> BTreeMap<u32, u64> {
    // independent construction: even permutations of 4 points, times Z_2
    fn compose(p: &[usize; 4], q: &[usize; 4]) -> [usize; 4] {
        [q[p[0]], q[p[1]], q[p[2]], q[p[3]]]
    }
    fn order(p: &[usize; 4]) -> u32 {
        let id = [0, 1, 2, 3];
        let mut acc = *p;
        let mut ord = 1;
        while acc != id {
            acc = compose(&acc, p);
            ord += 1;
        }
        ord
    }
    let mut stats = BTreeMap::new();
    let idx = [0usize, 1, 2, 3];
    let mut perms = Vec::new();
    for a in idx {
        for b in idx {
            for c in idx {
                for d in idx {
                    let p = [a, b, c, d];
                    let mut sorted = p;
                    sorted.sort_unstable();
                    if sorted == [0, 1, 2, 3] {
                        perms.push(p);
                    }
                }
            }
        }
    }
    for p in perms {
        let even = {
            let mut inversions = 0;
            for i in 0..4 {
                for j in i + 1..4 {
                    if p[i] > p[j] {
                        inversions += 1;
                    }
                }
            }
            inversions % 2 == 0
        };
        if !even {
            continue;
        }
        for z_order in [1u32, 2] {
            let o = num_lcm(order(&p), z_order);
            *stats.entry(o).or_insert(0) += 1;
        }
    }
    stats
}

fn num_lcm(a: u32, b: u32) -> u32 {
    let mut x = a;
    let mut y = b;
    while y != 0 {
        let t = x % y;
        x = y;
        y = t;
    }
    a / x * b
}

#[test]
fn accept_6_cyclic_saturation_counts() {
    for s in 1..=2u8 {
        for k in 1..=2u8 {
            for n in 1..=5u32 {
                let sp = MachineSpec::with_tape(s, k, TapeModel::Cyclic(n)).unwrap();
                let g = build_rulial_graph_saturated(&sp, &Config::blank(&sp), &opts()).unwrap();
                let expect = n as u64 * s as u64 * (k as u64).pow(n);
                assert_eq!(g.node_count() as u64, expect, "s={s} k={k} n={n}");
            }
        }
    }
    println!("ACCEPT 6 PASS: cyclic-tape saturation node counts equal n*s*k^n");
}

#[test]
fn accept_7_ca_suite() {
    let g = ca_reach_graph(&CaRule::all(), 50, 10_000_000).unwrap();
    // exact per-step values, frozen after the first derivation (the
    // derivation was cross-checked against an independent wide-buffer
    // evolution)
    assert_eq!(g.counts, golden::ca_counts_all256());
    assert!(g.counts.iter().all(|&c| c <= 256));
    // plateau: period-4 alternation between 72 and 84 for non-power-of-two
    // t in [10, 50] outside the dip windows (2^m - 3 ..= 2^m)
    let dip_window = |t: usize| (13..=16).contains(&t) || (29..=32).contains(&t);
    let mut hits_72 = false;
    let mut hits_84 = false;
    for t in 10..=50usize {
        if t.is_power_of_two() || dip_window(t) {
            continue;
        }
        let c = g.counts[t];
        assert!((72..=84).contains(&c), "counts[{t}] = {c} outside the 72..84 band");
        hits_72 |= c == 72;
        hits_84 |= c == 84;
    }
    assert!(hits_72 && hits_84, "the alternation reaches both 72 and 84");
    // dips at t = 16 and 32: the period-4 window ending at 2^m sums lower
    // than a normal window
    let window = |end: usize| g.counts[end - 3..=end].iter().sum::<u64>();
    assert!(window(16) < window(20), "dip at 16");
    assert!(window(32) < window(28), "dip at 32");
    println!("ACCEPT 7 PASS: CA new-configuration counts match the frozen derivation");
}

#[test]
fn accept_8_property_suites() {
    // out-degree and in-degree |moves|*s*k everywhere: all configs within
    // radius 3 of blank, unbounded and cyclic
    for sp in [
        MachineSpec::new(2, 2).unwrap(),
        MachineSpec::new(1, 3).unwrap(),
        MachineSpec::with_tape(2, 2, TapeModel::Cyclic(4)).unwrap(),
    ] {
        let expect = sp.outcome_count();
        let mut frontier = vec![Config::blank(&sp)];
        let mut seen = std::collections::HashSet::new();
        seen.insert(frontier[0].clone());
        for _ in 0..3 {
            let mut next = Vec::new();
            for c in &frontier {
                assert_eq!(successors(&sp, c).len(), expect);
                assert_eq!(predecessors(&sp, c).len(), expect);
                for (_, d) in successors(&sp, c) {
                    if seen.insert(d.clone()) {
                        next.push(d);
                    }
                }
            }
            frontier = next;
        }
        // graph-level check on the saturated cyclic case
        if sp.tape_model != TapeModel::Unbounded {
            let g = build_rulial_graph_saturated(&sp, &Config::blank(&sp), &opts()).unwrap();
            let report = check_vertex_transitivity(&g);
            assert!(report.degree_ok && report.balls_ok);
        }
    }

    // every deterministic trace embeds edge-wise in the rulial graph
    let sp = MachineSpec::new(2, 2).unwrap();
    let blank = Config::blank(&sp);
    let g4 = build_rulial_graph(&sp, &blank, 4, &opts()).unwrap();
    for i in 0..256u64 {
        let id = (i * 16 + 5) % sp.rule_count().unwrap();
        let rule = rule_from_id(&sp, id).unwrap();
        let trace = ruliad_core::machine::det_evolve(&sp, &rule, &blank, 4);
        for w in trace.configs.windows(2) {
            let src = g4.node_id(&w[0]).unwrap();
            let dst = g4.node_id(&w[1]).unwrap();
            assert!(g4.out_edges(src).any(|e| e.dst == dst));
        }
    }

    // multiway causal branching pairs all have merge witnesses
    let sp12 = MachineSpec::new(1, 2).unwrap();
    let unmerged = find_unmerged_branch(&sp12, &Config::blank(&sp12), 3, &opts()).unwrap();
    assert_eq!(unmerged, None);

    // deterministic path slack: >= 0 for all 4096 rules at t = 4, with at
    // least one strictly positive instance
    let mut saw_positive = false;
    for id in 0..sp.rule_count().unwrap() {
        let rule = rule_from_id(&sp, id).unwrap();
        let path = machine_path(&sp, &g4, &rule, &blank, 4).unwrap();
        saw_positive |= path.slack > 0;
    }
    assert!(saw_positive);

    // exports byte-identical across 1 vs N workers
    let one = build_rulial_graph(&sp, &blank, 5, &opts()).unwrap();
    let many = build_rulial_graph(
        &sp,
        &blank,
        5,
        &BuildOptions { max_nodes: 5_000_000, threads: 4 },
    )
    .unwrap();
    assert_eq!(
        to_json(&ExportGraph::from_multiway(&one)),
        to_json(&ExportGraph::from_multiway(&many))
    );
    println!("ACCEPT 8 PASS: degree, embedding, causal-merge, slack, and determinism properties");
}
