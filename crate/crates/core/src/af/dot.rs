use std::collections::BTreeSet;
use std::fmt::Write as _;

use super::{ArgumentId, AttackGraph, Label, Labeling};

pub const IN_COLOR: &str = "#9BDFFB";
pub const OUT_COLOR: &str = "#FFC380";
pub const UNDEC_COLOR: &str = "#F0CC00";

pub fn label_color(label: Label) -> &'static str {
    match label {
        Label::In => IN_COLOR,
        Label::Out => OUT_COLOR,
        Label::Undec => UNDEC_COLOR,
    }
}

/// Renders the graph in Graphviz DOT. Attack edges are solid, execution
/// order edges dashed; nodes are filled by label when a labeling is given.
pub fn to_dot(
    graph: &AttackGraph,
    labeling: Option<&Labeling>,
    order_edges: Option<&BTreeSet<(ArgumentId, ArgumentId)>>,
) -> String {
    let mut out = String::from("digraph AF {\n");
    for arg in graph.arguments() {
        match labeling.and_then(|l| l.get(arg.as_str())) {
            Some(label) => writeln!(
                out,
                "  {} [style=filled, fillcolor=\"{}\"];",
                quote(arg.as_str()),
                label_color(label)
            ),
            None => writeln!(out, "  {};", quote(arg.as_str())),
        }
        .unwrap();
    }
    for (a, b) in graph.attacks() {
        writeln!(out, "  {} -> {};", quote(a.as_str()), quote(b.as_str())).unwrap();
    }
    for (a, b) in order_edges.into_iter().flatten() {
        writeln!(out, "  {} -> {} [style=dashed];", quote(a.as_str()), quote(b.as_str())).unwrap();
    }
    out.push_str("}\n");
    out
}

fn quote(id: &str) -> String {
    format!("\"{}\"", id.replace('\\', "\\\\").replace('"', "\\\""))
}
