//! Graphviz rendering of a labeled document.

use std::collections::HashMap;
use std::fmt::Write;

use crate::document::{EdgeRole, LabeledGraphDocument};
use crate::graph::Side;

/// Undirected DOT text; nodes and edges appear in document order. Nodes are
/// captioned with their label, edges with the induced label. The center
/// vertex is drawn as a filled double circle and connectors are bold.
pub fn export_dot(doc: &LabeledGraphDocument) -> String {
    let mut out = String::new();
    let title = format!("{} over {}", doc.spec, doc.base);
    writeln!(out, "graph graceful {{").unwrap();
    writeln!(out, "  label=\"{title}\";").unwrap();
    writeln!(out, "  node [shape=circle];").unwrap();

    let mut ids = HashMap::with_capacity(doc.vertices.len());
    for (k, (v, label)) in doc.vertices.iter().enumerate() {
        ids.insert(*v, k);
        let extra = if v.side == Side::Center {
            ", shape=doublecircle, style=filled, fillcolor=gold, class=center"
        } else {
            ""
        };
        writeln!(out, "  n{k} [label=\"{label}\", tooltip=\"{v}\"{extra}];").unwrap();
    }
    for r in &doc.edges {
        let (Some(a), Some(b)) = (ids.get(&r.edge.0), ids.get(&r.edge.1)) else {
            continue;
        };
        let extra = match r.role {
            EdgeRole::Copy => "",
            EdgeRole::Connector(_) => ", style=bold",
        };
        writeln!(out, "  n{a} -- n{b} [label=\"{}\"{extra}];", r.label).unwrap();
    }
    out.push_str("}\n");
    out
}
