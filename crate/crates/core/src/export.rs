//! Export writers. Every format sorts nodes and edges by canonical key,
//! so identical inputs produce byte-identical files regardless of how the
//! graph was built. All formats carry a version header.

use crate::causal::{DetCausalGraph, MultiwayCausalGraph};
use crate::detspace::Overlay;
use crate::group::CayleyGraph;
use crate::machine::MicroRule;
use crate::multiway::{GrowthSequence, MultiwayGraph};
use serde::{Deserialize, Serialize};

pub const FORMAT_VERSION: &str = "ruliad/v1";

/// Format-independent graph snapshot: sorted nodes and edges with string
/// keys and labels.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExportGraph {
    pub format: String,
    pub nodes: Vec<ExportNode>,
    pub edges: Vec<ExportEdge>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExportNode {
    pub key: String,
    pub layer: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub det_reachable: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExportEdge {
    pub src: String,
    pub dst: String,
    pub microrule: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub det_reachable: Option<bool>,
}

impl ExportGraph {
    /// Sorts nodes by key and edges by `(src, dst, label)`.
    pub fn new(nodes: Vec<ExportNode>, edges: Vec<ExportEdge>) -> ExportGraph {
        ExportGraph { format: FORMAT_VERSION.into(), nodes, edges }.finish()
    }

    fn finish(mut self) -> ExportGraph {
        self.nodes.sort_by(|a, b| a.key.cmp(&b.key));
        self.edges
            .sort_by(|a, b| (&a.src, &a.dst, &a.microrule).cmp(&(&b.src, &b.dst, &b.microrule)));
        self
    }

    pub fn from_multiway(g: &MultiwayGraph) -> ExportGraph {
        Self::from_multiway_overlay(g, None)
    }

    /// Multiway graph with optional deterministic-reachability marks.
    pub fn from_multiway_overlay(g: &MultiwayGraph, overlay: Option<&Overlay>) -> ExportGraph {
        let nodes = g
            .nodes
            .iter()
            .enumerate()
            .map(|(i, n)| ExportNode {
                key: n.key.clone(),
                layer: n.layer,
                det_reachable: overlay.map(|o| o.node_marked[i]),
            })
            .collect();
        let edges = g
            .edges
            .iter()
            .enumerate()
            .map(|(i, e)| ExportEdge {
                src: g.nodes[e.src as usize].key.clone(),
                dst: g.nodes[e.dst as usize].key.clone(),
                microrule: MicroRule::from_index(&g.spec, e.mr as usize)
                    .expect("edge label in range")
                    .to_string(),
                det_reachable: overlay.map(|o| o.edge_marked[i]),
            })
            .collect();
        ExportGraph { format: FORMAT_VERSION.into(), nodes, edges }.finish()
    }

    /// Same graph with parallel edges collapsed (repeated-edge removal for
    /// renderings); the surviving edge keeps the smallest label.
    pub fn dedup_edges(mut self) -> ExportGraph {
        self.edges.dedup_by(|a, b| a.src == b.src && a.dst == b.dst);
        self
    }

    pub fn from_cayley(g: &CayleyGraph) -> ExportGraph {
        let nodes = g
            .elements
            .iter()
            .map(|e| ExportNode { key: e.key(), layer: 0, det_reachable: None })
            .collect();
        let edges = g
            .edges
            .iter()
            .map(|e| ExportEdge {
                src: g.elements[e.from as usize].key(),
                dst: g.elements[e.to as usize].key(),
                microrule: format!("g{}", e.gen),
                det_reachable: None,
            })
            .collect();
        ExportGraph { format: FORMAT_VERSION.into(), nodes, edges }.finish()
    }

    pub fn from_det_causal(g: &DetCausalGraph) -> ExportGraph {
        let nodes = g
            .events
            .iter()
            .map(|e| ExportNode {
                key: format!("E:{}:p{}", e.step, e.head_pos),
                layer: e.step,
                det_reachable: None,
            })
            .collect();
        let key_of = |step: u32| {
            let e = &g.events[step as usize - 1];
            format!("E:{}:p{}", e.step, e.head_pos)
        };
        let edges = g
            .edges
            .iter()
            .map(|(a, b, kind)| ExportEdge {
                src: key_of(*a),
                dst: key_of(*b),
                microrule: match kind {
                    crate::causal::DepKind::Head => "head".into(),
                    crate::causal::DepKind::Cell => "cell".into(),
                },
                det_reachable: None,
            })
            .collect();
        ExportGraph { format: FORMAT_VERSION.into(), nodes, edges }.finish()
    }

    /// The pure multiway causal graph (events only).
    pub fn from_multiway_causal(g: &MultiwayCausalGraph) -> ExportGraph {
        let nodes = (0..g.events.len())
            .map(|i| ExportNode {
                key: g.event_key(i),
                layer: g.events[i].layer,
                det_reachable: None,
            })
            .collect();
        let edges = g
            .edges
            .iter()
            .map(|&(a, b)| ExportEdge {
                src: g.event_key(a as usize),
                dst: g.event_key(b as usize),
                microrule: String::new(),
                det_reachable: None,
            })
            .collect();
        ExportGraph { format: FORMAT_VERSION.into(), nodes, edges }.finish()
    }

    /// The combined states-and-events rendering: state instances per step
    /// plus events, bipartitely connected.
    pub fn from_multiway_causal_combined(g: &MultiwayCausalGraph) -> ExportGraph {
        let mut nodes = Vec::new();
        for (t, set) in g.step_sets.iter().enumerate() {
            for &v in set {
                nodes.push(ExportNode {
                    key: format!("S:{}:{}", t, g.graph.nodes[v as usize].key),
                    layer: t as u32,
                    det_reachable: None,
                });
            }
        }
        let mut edges = Vec::new();
        for (i, e) in g.events.iter().enumerate() {
            let ekey = g.event_key(i);
            nodes.push(ExportNode { key: ekey.clone(), layer: e.layer, det_reachable: None });
            edges.push(ExportEdge {
                src: format!("S:{}:{}", e.layer - 1, g.graph.nodes[e.input as usize].key),
                dst: ekey.clone(),
                microrule: String::new(),
                det_reachable: None,
            });
            edges.push(ExportEdge {
                src: ekey,
                dst: format!("S:{}:{}", e.layer, g.graph.nodes[e.output as usize].key),
                microrule: String::new(),
                det_reachable: None,
            });
        }
        ExportGraph { format: FORMAT_VERSION.into(), nodes, edges }.finish()
    }
}

fn dot_escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

pub fn to_dot(g: &ExportGraph) -> String {
    let mut out = String::new();
    out.push_str(&format!("// {}\n", g.format));
    out.push_str("digraph ruliad {\n");
    for n in &g.nodes {
        out.push_str(&format!("  \"{}\" [layer={}", dot_escape(&n.key), n.layer));
        if let Some(d) = n.det_reachable {
            out.push_str(&format!(", det_reachable={d}"));
        }
        out.push_str("];\n");
    }
    for e in &g.edges {
        out.push_str(&format!(
            "  \"{}\" -> \"{}\" [label=\"{}\"",
            dot_escape(&e.src),
            dot_escape(&e.dst),
            dot_escape(&e.microrule)
        ));
        if let Some(d) = e.det_reachable {
            out.push_str(&format!(", det_reachable={d}"));
        }
        out.push_str("];\n");
    }
    out.push_str("}\n");
    out
}

pub fn to_graphml(g: &ExportGraph) -> String {
    let mut out = String::new();
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    out.push_str("<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\">\n");
    out.push_str(&format!("  <desc>{}</desc>\n", xml_escape(&g.format)));
    out.push_str("  <key id=\"layer\" for=\"node\" attr.name=\"layer\" attr.type=\"int\"/>\n");
    out.push_str(
        "  <key id=\"microrule\" for=\"edge\" attr.name=\"microrule\" attr.type=\"string\"/>\n",
    );
    out.push_str(
        "  <key id=\"det\" for=\"all\" attr.name=\"det_reachable\" attr.type=\"boolean\"/>\n",
    );
    out.push_str("  <graph edgedefault=\"directed\">\n");
    for n in &g.nodes {
        out.push_str(&format!("    <node id=\"{}\">", xml_escape(&n.key)));
        out.push_str(&format!("<data key=\"layer\">{}</data>", n.layer));
        if let Some(d) = n.det_reachable {
            out.push_str(&format!("<data key=\"det\">{d}</data>"));
        }
        out.push_str("</node>\n");
    }
    for e in &g.edges {
        out.push_str(&format!(
            "    <edge source=\"{}\" target=\"{}\">",
            xml_escape(&e.src),
            xml_escape(&e.dst)
        ));
        out.push_str(&format!("<data key=\"microrule\">{}</data>", xml_escape(&e.microrule)));
        if let Some(d) = e.det_reachable {
            out.push_str(&format!("<data key=\"det\">{d}</data>"));
        }
        out.push_str("</edge>\n");
    }
    out.push_str("  </graph>\n</graphml>\n");
    out
}

pub fn to_json(g: &ExportGraph) -> String {
    let mut s = serde_json::to_string_pretty(g).expect("serializable");
    s.push('\n');
    s
}

pub fn from_json(s: &str) -> serde_json::Result<ExportGraph> {
    serde_json::from_str(s)
}

/// CSV for a growth sequence: `t,count` rows under a version header.
pub fn growth_csv(g: &GrowthSequence) -> String {
    let mut out = format!("# {}\nt,count\n", FORMAT_VERSION);
    for (t, c) in g.counts.iter().enumerate() {
        out.push_str(&format!("{t},{c}\n"));
    }
    out
}

/// CSV for the deterministic reach profile: `t,cumulative,novel`.
pub fn reach_csv(cumulative: &[u64], novel: &[u64]) -> String {
    let mut out = format!("# {}\nt,cumulative,novel\n", FORMAT_VERSION);
    for (t, (c, n)) in cumulative.iter().zip(novel).enumerate() {
        out.push_str(&format!("{t},{c},{n}\n"));
    }
    out
}

/// CSV for per-step counts (CA new configurations, geodesic layers).
pub fn counts_csv(label: &str, counts: &[u64]) -> String {
    let mut out = format!("# {}\nt,{label}\n", FORMAT_VERSION);
    for (t, c) in counts.iter().enumerate() {
        out.push_str(&format!("{t},{c}\n"));
    }
    out
}

/// CSV for a multiplication table: row/column = element index in `(i, u)`
/// lexicographic order.
pub fn table_csv(table: &[Vec<usize>]) -> String {
    let mut out = format!("# {}\n", FORMAT_VERSION);
    for row in table {
        let cells: Vec<String> = row.iter().map(|v| v.to_string()).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}
