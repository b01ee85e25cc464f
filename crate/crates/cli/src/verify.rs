//! `ruliad verify`: recompute every reference table and structural check
//! and print one PASS/FAIL line each. Exit 0 iff everything passes.

use anyhow::{anyhow, Result};
use ruliad_core::ca::{ca_reach_graph, CaRule};
use ruliad_core::causal::find_unmerged_branch;
use ruliad_core::detspace::{det_reach_profile, machine_path, overlay, SweepOptions};
use ruliad_core::export::{to_json, ExportGraph};
use ruliad_core::golden;
use ruliad_core::group;
use ruliad_core::machine::rule_from_id;
use ruliad_core::multiway::{
    ball_count_formula, build_rulial_graph, build_rulial_graph_saturated,
    check_vertex_transitivity, directed_ball_counts, undirected_ball_counts, BuildOptions,
    GrowthMode,
};
use ruliad_core::{Config, MachineSpec, TapeModel};
use std::process::ExitCode;

type Check = (String, Box<dyn FnOnce(&BuildOptions) -> Result<()>>);

fn growth_check(row: golden::GrowthRow) -> Check {
    let mode = row.mode;
    let name = format!(
        "{} ball counts s={} k={} ({} terms)",
        match mode {
            GrowthMode::Directed => "directed",
            GrowthMode::Undirected => "undirected",
        },
        row.s,
        row.k,
        row.counts.len()
    );
    (
        name,
        Box::new(move |opts| {
            let sp = MachineSpec::new(row.s, row.k)?;
            let t = row.counts.len() as u32 - 1;
            let init = Config::blank(&sp);
            let got = match mode {
                GrowthMode::Directed => directed_ball_counts(&sp, &init, t, opts)?,
                GrowthMode::Undirected => undirected_ball_counts(&sp, &init, t, opts)?,
            };
            if got.counts != row.counts {
                return Err(anyhow!("got {:?}", got.counts));
            }
            Ok(())
        }),
    )
}

fn checks() -> Vec<Check> {
    let mut list: Vec<Check> = Vec::new();
    for row in golden::directed_growth_rows() {
        list.push(growth_check(row));
    }
    for row in golden::undirected_growth_rows() {
        list.push(growth_check(row));
    }

    list.push((
        "closed forms M_1 = 2sk+1 and M_t = (2t+1)s".into(),
        Box::new(|opts| {
            for s in 1..=4u8 {
                for k in 1..=3u8 {
                    let sp = MachineSpec::new(s, k)?;
                    let got =
                        directed_ball_counts(&sp, &Config::blank(&sp), 1, opts)?.counts[1];
                    if got != 2 * s as u64 * k as u64 + 1 {
                        return Err(anyhow!("M_1 for s={s} k={k}: {got}"));
                    }
                }
                let sp = MachineSpec::new(s, 1)?;
                let counts = directed_ball_counts(&sp, &Config::blank(&sp), 16, opts)?.counts;
                for t in 2..=16u32 {
                    if counts[t as usize] != ball_count_formula(s, 1, t).unwrap() {
                        return Err(anyhow!("M_{t} for s={s} k=1"));
                    }
                }
            }
            Ok(())
        }),
    ));

    list.push((
        "growth ratio -> k (10%) and undirected/directed -> k^2/(2k-1) (5%)".into(),
        Box::new(|opts| {
            for s in [1u8, 2] {
                let sp = MachineSpec::new(s, 2)?;
                let c = directed_ball_counts(&sp, &Config::blank(&sp), 13, opts)?.counts;
                let ratio = c[13] as f64 / c[12] as f64;
                if (ratio - 2.0).abs() > 0.2 {
                    return Err(anyhow!("s={s}: growth ratio {ratio:.4}"));
                }
            }
            let sp = MachineSpec::new(2, 2)?;
            let d = directed_ball_counts(&sp, &Config::blank(&sp), 10, opts)?.counts[10];
            let u = undirected_ball_counts(&sp, &Config::blank(&sp), 10, opts)?.counts[10];
            let ratio = u as f64 / d as f64;
            let target = 4.0 / 3.0;
            if (ratio - target).abs() / target > 0.05 {
                return Err(anyhow!("undirected/directed {ratio:.4} vs {target:.4}"));
            }
            Ok(())
        }),
    ));

    list.push((
        "deterministic reach sequence (16 terms) and extension to t=20".into(),
        Box::new(|_| {
            let sp = MachineSpec::new(2, 2)?;
            let p = det_reach_profile(&sp, &Config::blank(&sp), 20, &SweepOptions::default())?;
            if p.cumulative[..16] != golden::det_cumulative_s2_k2()[..] {
                return Err(anyhow!("got {:?}", &p.cumulative[..16]));
            }
            if p.cumulative != golden::det_cumulative_s2_k2_extended() {
                return Err(anyhow!("extension diverged: {:?}", p.cumulative));
            }
            Ok(())
        }),
    ));

    list.push((
        "deterministic overlay 36/36 at t=2 and 68/100 at t=3".into(),
        Box::new(|opts| {
            let sp = MachineSpec::new(2, 2)?;
            let blank = Config::blank(&sp);
            for (t, marked, total) in [(2u32, 36usize, 36usize), (3, 68, 100)] {
                let g = build_rulial_graph(&sp, &blank, t, opts)?;
                let p = det_reach_profile(&sp, &blank, t, &SweepOptions::default())?;
                let o = overlay(&g, &p);
                if (o.nodes_marked, g.node_count()) != (marked, total) {
                    return Err(anyhow!(
                        "t={t}: {}/{} marked",
                        o.nodes_marked,
                        g.node_count()
                    ));
                }
            }
            Ok(())
        }),
    ));

    list.push((
        "group axioms (exhaustive n<=3, sampled n=4)".into(),
        Box::new(|_| {
            for n in 1..=3u32 {
                let elements = group::all_elements(n, 2)?;
                let e = group::GroupElement::identity(n, 2)?;
                for a in &elements {
                    if a.multiply(&e)? != *a || a.multiply(&a.inverse())? != e {
                        return Err(anyhow!("identity/inverse failed at n={n}"));
                    }
                    for b in &elements {
                        let ab = a.multiply(b)?;
                        for c in &elements {
                            if ab.multiply(c)? != a.multiply(&b.multiply(c)?)? {
                                return Err(anyhow!("associativity failed at n={n}"));
                            }
                        }
                    }
                }
            }
            let elements = group::all_elements(4, 2)?;
            for (i, a) in elements.iter().enumerate() {
                let b = &elements[(i * 17 + 5) % elements.len()];
                let c = &elements[(i * 29 + 11) % elements.len()];
                if a.multiply(b)?.multiply(c)? != a.multiply(&b.multiply(c)?)? {
                    return Err(anyhow!("associativity failed at n=4"));
                }
            }
            Ok(())
        }),
    ));

    list.push((
        "two-generator closure order n*2^n for n=2..6".into(),
        Box::new(|_| {
            for n in 2..=6u32 {
                let (r, f) = group::minimal_generators(n, 2)?;
                let got = group::closure(&[r, f])?.len() as u64;
                if got != n as u64 * (1u64 << n) {
                    return Err(anyhow!("n={n}: closure order {got}"));
                }
            }
            Ok(())
        }),
    ));

    list.push((
        "relations R^n = F^2 = e and R F R^-1 F = F R F R^-1 for n<=8".into(),
        Box::new(|_| {
            for n in 1..=8u32 {
                if !group::check_relations(n)?.all_hold() {
                    return Err(anyhow!("relations failed at n={n}"));
                }
            }
            Ok(())
        }),
    ));

    list.push((
        "permutation representation closure orders 8 (n=2) and 24 (n=3)".into(),
        Box::new(|_| {
            for (n, expect) in [(2u32, 8usize), (3, 24)] {
                let (a, b) = group::permutation_representation(n);
                let got = group::perm_closure(&[a, b]).len();
                if got != expect {
                    return Err(anyhow!("n={n}: order {got}"));
                }
            }
            Ok(())
        }),
    ));

    list.push((
        "order statistics: D4 at n=2, A4 x Z2 at n=3".into(),
        Box::new(|_| {
            let r2 = group::identify_group(2, 2)?;
            let d4: std::collections::BTreeMap<u32, u64> =
                [(1, 1), (2, 5), (4, 2)].into_iter().collect();
            if r2.order_statistics != d4 || r2.center_size != 2 {
                return Err(anyhow!("n=2: {:?}", r2.order_statistics));
            }
            let r3 = group::identify_group(3, 2)?;
            let a4xz2: std::collections::BTreeMap<u32, u64> =
                [(1, 1), (2, 7), (3, 8), (6, 8)].into_iter().collect();
            if r3.order_statistics != a4xz2 {
                return Err(anyhow!("n=3: {:?}", r3.order_statistics));
            }
            Ok(())
        }),
    ));

    list.push((
        "cayley graph isomorphic to cyclic rulial graph for n=2,3,4".into(),
        Box::new(|_| {
            for n in [2u32, 3, 4] {
                let res = group::isomorphic_to_rulial(n, group::Side::Left)?;
                if !res.isomorphic {
                    return Err(anyhow!("n={n}: {:?}", res.distinguishing));
                }
            }
            Ok(())
        }),
    ));

    list.push((
        "undirected two-generator cayley graph is CCC_n for n=3,4".into(),
        Box::new(|_| {
            for n in [3u32, 4] {
                let (r, f) = group::minimal_generators(n, 2)?;
                let g = group::cayley_graph(n, 2, &[r, f], group::Side::Right)?
                    .undirected_simple();
                if !group::is_cube_connected_cycles(&g, n) {
                    return Err(anyhow!("n={n}"));
                }
            }
            Ok(())
        }),
    ));

    list.push((
        "cyclic saturation node counts n*s*k^n".into(),
        Box::new(|opts| {
            for s in 1..=2u8 {
                for k in 1..=2u8 {
                    for n in 1..=5u32 {
                        let sp = MachineSpec::with_tape(s, k, TapeModel::Cyclic(n))?;
                        let g = build_rulial_graph_saturated(&sp, &Config::blank(&sp), opts)?;
                        let expect = n as u64 * s as u64 * (k as u64).pow(n);
                        if g.node_count() as u64 != expect {
                            return Err(anyhow!("s={s} k={k} n={n}: {}", g.node_count()));
                        }
                    }
                }
            }
            Ok(())
        }),
    ));

    list.push((
        "vertex transitivity of the cyclic n=3 s=1 k=2 graph".into(),
        Box::new(|opts| {
            let sp = MachineSpec::with_tape(1, 2, TapeModel::Cyclic(3))?;
            let g = build_rulial_graph_saturated(&sp, &Config::blank(&sp), opts)?;
            let report = check_vertex_transitivity(&g);
            if !report.passed {
                return Err(anyhow!("{:?}", report.degree_violation));
            }
            Ok(())
        }),
    ));

    list.push((
        "CA new-configuration counts, full 256 rules to t=50".into(),
        Box::new(|opts| {
            let g = ca_reach_graph(&CaRule::all(), 50, opts.max_nodes)?;
            if g.counts != golden::ca_counts_all256() {
                return Err(anyhow!("got {:?}", g.counts));
            }
            if g.counts.iter().any(|&c| c > 256) {
                return Err(anyhow!("count above 256"));
            }
            let dip_window = |t: usize| (13..=16).contains(&t) || (29..=32).contains(&t);
            for t in 10..=50usize {
                if t.is_power_of_two() || dip_window(t) {
                    continue;
                }
                if !(72..=84).contains(&g.counts[t]) {
                    return Err(anyhow!("counts[{t}] = {} off the plateau", g.counts[t]));
                }
            }
            let window = |end: usize| g.counts[end - 3..=end].iter().sum::<u64>();
            if window(16) >= window(20) || window(32) >= window(28) {
                return Err(anyhow!("missing dips at 16/32"));
            }
            Ok(())
        }),
    ));

    list.push((
        "multiway causal branches all merge (s=1 k=2, t=3)".into(),
        Box::new(|opts| {
            let sp = MachineSpec::new(1, 2)?;
            match find_unmerged_branch(&sp, &Config::blank(&sp), 3, opts)? {
                None => Ok(()),
                Some((a, b)) => Err(anyhow!("unmerged branch {a} / {b}")),
            }
        }),
    ));

    list.push((
        "deterministic slack >= 0 with positive instances by t=4".into(),
        Box::new(|opts| {
            let sp = MachineSpec::new(2, 2)?;
            let blank = Config::blank(&sp);
            let g = build_rulial_graph(&sp, &blank, 4, opts)?;
            let mut positive = false;
            for id in 0..sp.rule_count()? {
                let rule = rule_from_id(&sp, id)?;
                let p = machine_path(&sp, &g, &rule, &blank, 4)?;
                positive |= p.slack > 0;
            }
            if !positive {
                return Err(anyhow!("no rule wastes steps"));
            }
            Ok(())
        }),
    ));

    list.push((
        "exports byte-identical across 1 vs 4 workers".into(),
        Box::new(|opts| {
            let sp = MachineSpec::new(2, 2)?;
            let blank = Config::blank(&sp);
            let one = BuildOptions { max_nodes: opts.max_nodes, threads: 1 };
            let four = BuildOptions { max_nodes: opts.max_nodes, threads: 4 };
            let a = to_json(&ExportGraph::from_multiway(&build_rulial_graph(
                &sp, &blank, 5, &one,
            )?));
            let b = to_json(&ExportGraph::from_multiway(&build_rulial_graph(
                &sp, &blank, 5, &four,
            )?));
            if a != b {
                return Err(anyhow!("exports differ"));
            }
            Ok(())
        }),
    ));

    list
}

pub fn run(opts: &BuildOptions) -> Result<ExitCode> {
    let mut failures = 0usize;
    let all = checks();
    let total = all.len();
    for (name, check) in all {
        match check(opts) {
            Ok(()) => println!("PASS {name}"),
            Err(err) => {
                failures += 1;
                println!("FAIL {name}: {err}");
            }
        }
    }
    if failures == 0 {
        println!("all {total} checks passed");
        Ok(ExitCode::SUCCESS)
    } else {
        println!("{failures} of {total} checks failed");
        Ok(ExitCode::FAILURE)
    }
}
