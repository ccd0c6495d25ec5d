use std::fmt::Write;

use super::WfTree;

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// Graphviz rendering; each node shows its label and rank.
pub fn to_dot(t: &WfTree) -> String {
    let ranks = t.ranks();
    let mut out = String::from("digraph tree {\n");
    for n in t.nodes() {
        let _ = writeln!(
            out,
            "  n{} [label=\"{}\\nrank {}\"];",
            n.id,
            escape(&n.label),
            ranks[&n.id]
        );
    }
    for n in t.nodes() {
        if let Some(p) = n.parent {
            let _ = writeln!(out, "  n{p} -> n{};", n.id);
        }
    }
    out.push_str("}\n");
    out
}
