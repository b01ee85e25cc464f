use crate::{cache, verify, Cli, Command, Format, GenArg, ModeArg, SideArg, TapeArg};
use anyhow::{bail, Context, Result};
use ruliad_core::causal;
use ruliad_core::detspace::{self, SweepOptions};
use ruliad_core::export::{self, ExportGraph};
use ruliad_core::group;
use ruliad_core::machine::{rule_from_id, TapeModel};
use ruliad_core::multiway::{
    build_rulial_graph, build_rulial_graph_saturated, BuildOptions,
};
use ruliad_core::{ca, Config, MachineSpec};
use serde::{Deserialize, Serialize};
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

/// Everything that determines a build artifact; its canonical JSON is the
/// cache key (the node cap is excluded: builds refuse rather than
/// truncate, so an artifact never depends on the cap).
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct ExperimentSpec {
    pub s: u8,
    pub k: u8,
    pub moves: Vec<i32>,
    pub tape: String,
    pub n: Option<u32>,
    pub t: u32,
    pub saturate: bool,
}

fn parse_moves(s: &str) -> Result<Vec<i32>> {
    s.split(',')
        .map(|m| m.trim().parse::<i32>().with_context(|| format!("bad move {m:?}")))
        .collect()
}

fn machine_spec(s: u8, k: u8, moves: &str, tape: TapeArg, n: Option<u32>) -> Result<MachineSpec> {
    let moves = parse_moves(moves)?;
    let model = match (tape, n) {
        (TapeArg::Unbounded, _) => TapeModel::Unbounded,
        (TapeArg::Cyclic, Some(n)) => TapeModel::Cyclic(n),
        (TapeArg::Bounded, Some(n)) => TapeModel::Bounded(n),
        _ => bail!("finite tape models require --n"),
    };
    Ok(MachineSpec::with_moves(s, k, moves, model)?)
}

fn write_out(out: &Option<PathBuf>, content: &str) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, content)
            .with_context(|| format!("writing {}", path.display()))?,
        None => std::io::stdout().write_all(content.as_bytes())?,
    }
    Ok(())
}

fn render(graph: &ExportGraph, format: Format) -> String {
    match format {
        Format::Json => export::to_json(graph),
        Format::Dot => export::to_dot(graph),
        Format::Graphml => export::to_graphml(graph),
    }
}

pub fn dispatch(cli: Cli) -> Result<ExitCode> {
    let opts = BuildOptions { max_nodes: cli.node_cap, threads: cli.threads };
    let cache_dir = cli
        .cache_dir
        .clone()
        .or_else(|| std::env::var_os("RULIAD_CACHE_DIR").map(PathBuf::from));

    match cli.command {
        Command::Build {
            s,
            k,
            moves,
            tape,
            n,
            t,
            saturate,
            dedup,
            format,
            out,
            check_determinism,
        } => {
            let spec = machine_spec(s, k, &moves, tape, n)?;
            let exp = ExperimentSpec {
                s,
                k,
                moves: spec.moves.clone(),
                tape: format!("{:?}", spec.tape_model),
                n,
                t,
                saturate,
            };
            let export = match cache_dir.as_ref().and_then(|d| cache::get(d, &exp)) {
                Some(hit) => hit,
                None => {
                    let init = Config::blank(&spec);
                    let g = if saturate {
                        build_rulial_graph_saturated(&spec, &init, &opts)?
                    } else {
                        build_rulial_graph(&spec, &init, t, &opts)?
                    };
                    let export = ExportGraph::from_multiway(&g);
                    if let Some(dir) = cache_dir.as_ref() {
                        cache::put(dir, &exp, &export)?;
                    }
                    export
                }
            };
            if check_determinism {
                let init = Config::blank(&spec);
                let single = BuildOptions { max_nodes: cli.node_cap, threads: 1 };
                let multi = BuildOptions { max_nodes: cli.node_cap, threads: cli.threads.max(4) };
                let a = ExportGraph::from_multiway(&build_rulial_graph(&spec, &init, t, &single)?);
                let b = ExportGraph::from_multiway(&build_rulial_graph(&spec, &init, t, &multi)?);
                if export::to_json(&a) != export::to_json(&b) {
                    bail!("exports differ between 1 and {} workers", multi.threads);
                }
                eprintln!("determinism check passed (1 vs {} workers)", multi.threads);
            }
            let export = if dedup { export.dedup_edges() } else { export };
            write_out(&out, &render(&export, format))?;
            Ok(ExitCode::SUCCESS)
        }

        Command::Growth { s, k, moves, tape, n, t, mode, out } => {
            let spec = machine_spec(s, k, &moves, tape, n)?;
            let init = Config::blank(&spec);
            let seq = match mode {
                ModeArg::Directed => {
                    ruliad_core::multiway::directed_ball_counts(&spec, &init, t, &opts)?
                }
                ModeArg::Undirected => {
                    ruliad_core::multiway::undirected_ball_counts(&spec, &init, t, &opts)?
                }
            };
            write_out(&out, &export::growth_csv(&seq))?;
            Ok(ExitCode::SUCCESS)
        }

        Command::Group {
            n,
            k,
            check,
            cayley,
            side,
            table,
            isomorphic,
            ccc,
            perm,
            format,
            out,
        } => {
            let side = match side {
                SideArg::Left => group::Side::Left,
                SideArg::Right => group::Side::Right,
            };
            let mut all_pass = true;
            let mut acted = false;
            if let Some(which) = check {
                acted = true;
                match which.as_str() {
                    "relations" => {
                        let r = group::check_relations(n)?;
                        let line = |ok: bool, name: &str| {
                            println!("{} {}", if ok { "PASS" } else { "FAIL" }, name);
                            ok
                        };
                        all_pass &= line(r.r_pow_n && r.perm_r_pow_n, &format!("R^{n} = e"));
                        all_pass &= line(r.f_squared && r.perm_f_squared, "F^2 = e");
                        all_pass &= line(
                            r.commutation && r.perm_commutation,
                            "R F R^-1 F = F R F R^-1",
                        );
                    }
                    "axioms" => {
                        let elements = group::all_elements(n, k)?;
                        let e = group::GroupElement::identity(n, k)?;
                        let mut ok = true;
                        for a in &elements {
                            ok &= a.multiply(&e)? == *a && a.multiply(&a.inverse())? == e;
                            for b in &elements {
                                let ab = a.multiply(b)?;
                                for c in &elements {
                                    ok &= ab.multiply(c)? == a.multiply(&b.multiply(c)?)?;
                                }
                            }
                        }
                        println!("{} group axioms n={n} k={k}", if ok { "PASS" } else { "FAIL" });
                        all_pass &= ok;
                    }
                    "identify" => {
                        let r = group::identify_group(n, k)?;
                        println!("order {}", r.order);
                        println!(
                            "{} tape subgroup normal, elementary of order {}",
                            if r.tape_subgroup_normal && r.tape_subgroup_elementary {
                                "PASS"
                            } else {
                                "FAIL"
                            },
                            r.tape_subgroup_order
                        );
                        println!(
                            "{} quotient cyclic of order {n}",
                            if r.quotient_cyclic_of_order_n { "PASS" } else { "FAIL" }
                        );
                        let stats: Vec<String> = r
                            .order_statistics
                            .iter()
                            .map(|(o, c)| format!("{o}:{c}"))
                            .collect();
                        println!("order statistics {{{}}}", stats.join(", "));
                        println!("center size {}", r.center_size);
                        all_pass &= r.tape_subgroup_normal
                            && r.tape_subgroup_elementary
                            && r.quotient_cyclic_of_order_n;
                    }
                    other => bail!("unknown check {other:?} (relations | axioms | identify)"),
                }
            }
            if perm {
                acted = true;
                let (f, r) = group::permutation_representation(n);
                let order = group::perm_closure(&[f, r]).len();
                println!("permutation representation on {} points, closure order {order}", 2 * n);
                all_pass &= order as u64 == n as u64 * (k as u64).pow(n);
            }
            if isomorphic {
                acted = true;
                let res = group::isomorphic_to_rulial(n, side)?;
                if res.isomorphic {
                    println!("PASS cayley graph isomorphic to rulial multiway graph (n={n})");
                } else {
                    println!(
                        "FAIL not isomorphic: {}",
                        res.distinguishing.unwrap_or_default()
                    );
                    all_pass = false;
                }
            }
            if ccc {
                acted = true;
                let (r, f) = group::minimal_generators(n, k)?;
                let g = group::cayley_graph(n, k, &[r, f], side)?.undirected_simple();
                let ok = group::is_cube_connected_cycles(&g, n);
                println!(
                    "{} undirected two-generator cayley graph is CCC_{n}",
                    if ok { "PASS" } else { "FAIL" }
                );
                all_pass &= ok;
            }
            if table {
                acted = true;
                let t = group::multiplication_table(n, k)?;
                write_out(&out, &export::table_csv(&t))?;
            }
            if let Some(gens) = cayley {
                acted = true;
                let gens = match gens {
                    GenArg::Standard => group::standard_generators(n, k)?,
                    GenArg::Minimal => {
                        let (r, f) = group::minimal_generators(n, k)?;
                        vec![r, f]
                    }
                };
                let g = group::cayley_graph(n, k, &gens, side)?;
                write_out(&out, &render(&ExportGraph::from_cayley(&g), format))?;
            }
            if !acted {
                bail!("nothing to do: pass --check/--cayley/--table/--isomorphic/--ccc/--perm");
            }
            Ok(if all_pass { ExitCode::SUCCESS } else { ExitCode::FAILURE })
        }

        Command::Causal { s, k, t, rule, multiway, combined, individual, format, out } => {
            let spec = MachineSpec::new(s, k)?;
            let init = Config::blank(&spec);
            if multiway || individual.is_some() {
                let mw = causal::rulial_multiway_causal_graph(&spec, &init, t, &opts)?;
                if let Some(id) = individual {
                    let rule = rule_from_id(&spec, id)?;
                    let ind =
                        causal::extract_individual_causal_graph(&mw, &spec, &rule, &init, t)?;
                    println!(
                        "rule {id}: {} events, path={}, keys:",
                        ind.length, ind.is_path
                    );
                    for &e in &ind.event_indices {
                        println!("  {}", mw.event_key(e as usize));
                    }
                } else {
                    let ex = if combined {
                        ExportGraph::from_multiway_causal_combined(&mw)
                    } else {
                        ExportGraph::from_multiway_causal(&mw)
                    };
                    write_out(&out, &render(&ex, format))?;
                }
            } else {
                let id = rule.context("pass --rule ID for a deterministic causal graph")?;
                let rule = rule_from_id(&spec, id)?;
                let g = causal::det_causal_graph(&spec, &rule, &init, t as usize);
                write_out(&out, &render(&ExportGraph::from_det_causal(&g), format))?;
            }
            Ok(ExitCode::SUCCESS)
        }

        Command::Det { s, k, t, overlay: want_overlay, path, layers, max_rule_steps, format, out } => {
            let spec = MachineSpec::new(s, k)?;
            let init = Config::blank(&spec);
            let sweep = SweepOptions { max_rule_steps };
            let profile = detspace::det_reach_profile(&spec, &init, t, &sweep)?;
            if let Some(id) = path {
                let g = build_rulial_graph(&spec, &init, t, &opts)?;
                let rule = rule_from_id(&spec, id)?;
                let p = detspace::machine_path(&spec, &g, &rule, &init, t)?;
                println!(
                    "rule {id}: {} steps, distance {}, slack {}{}",
                    p.node_keys.len() - 1,
                    p.distance,
                    p.slack,
                    p.halted_at.map(|h| format!(", halted at {h}")).unwrap_or_default()
                );
                for key in &p.node_keys {
                    println!("  {key}");
                }
            } else if layers {
                let l = detspace::geodesic_layer_profile(&profile, &init)?;
                write_out(&out, &export::counts_csv("layer_size", &l))?;
            } else if want_overlay {
                let g = build_rulial_graph(&spec, &init, t, &opts)?;
                let o = detspace::overlay(&g, &profile);
                eprintln!(
                    "{}/{} nodes and {}/{} edges deterministic-reachable",
                    o.nodes_marked,
                    g.node_count(),
                    o.edges_marked,
                    g.edge_count()
                );
                let ex = ExportGraph::from_multiway_overlay(&g, Some(&o));
                write_out(&out, &render(&ex, format))?;
            } else {
                write_out(&out, &export::reach_csv(&profile.cumulative, &profile.novel))?;
            }
            Ok(ExitCode::SUCCESS)
        }

        Command::Ca { rules, t, layers, graph, format, out } => {
            let rule_set: Vec<ca::CaRule> = match rules.as_str() {
                "all" => ca::CaRule::all(),
                "even" => ca::CaRule::even(),
                list => list
                    .split(',')
                    .map(|r| {
                        r.trim()
                            .parse::<u8>()
                            .map(ca::CaRule)
                            .with_context(|| format!("bad rule number {r:?}"))
                    })
                    .collect::<Result<_>>()?,
            };
            let g = ca::ca_reach_graph(&rule_set, t, cli.node_cap)?;
            if layers {
                write_out(&out, &export::counts_csv("layer_size", &ca::ca_geodesic_layers(&g)))?;
            } else if graph {
                let nodes = g
                    .nodes
                    .iter()
                    .map(|n| ruliad_core::export::ExportNode {
                        key: n.key.clone(),
                        layer: n.first_step,
                        det_reachable: None,
                    })
                    .collect();
                let edges = g
                    .edges
                    .iter()
                    .map(|&(a, r, b)| ruliad_core::export::ExportEdge {
                        src: g.nodes[a as usize].key.clone(),
                        dst: g.nodes[b as usize].key.clone(),
                        microrule: format!("r{}", r.0),
                        det_reachable: None,
                    })
                    .collect();
                let ex = ExportGraph::new(nodes, edges);
                write_out(&out, &render(&ex, format))?;
            } else {
                write_out(&out, &export::counts_csv("new_configs", &g.counts))?;
            }
            Ok(ExitCode::SUCCESS)
        }

        Command::Verify => verify::run(&opts),
    }
}
