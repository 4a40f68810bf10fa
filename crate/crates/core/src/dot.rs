//! Graphviz export.

use std::fmt::Write;

use crate::graph::{NodeId, NodeSet, WebGraph};

/// DOT text for `g`. Nodes of `set` sit in a cluster. When `v` is given,
/// every node is labelled with its value and the cluster is laid out left to
/// right by decreasing value.
pub fn export_dot(g: &WebGraph, set: &NodeSet, v: Option<&[f64]>) -> String {
    let label = |i: NodeId| match v {
        Some(v) => format!("\"{i}\\n{:.3}\"", v[i - 1]),
        None => format!("\"{i}\""),
    };
    let mut out = String::from("digraph G {\n  rankdir=LR;\n");
    let members: Vec<NodeId> = set.iter().filter(|&i| i <= g.n()).collect();
    if !members.is_empty() {
        let mut order = members.clone();
        if let Some(v) = v {
            order.sort_by(|&a, &b| v[b - 1].total_cmp(&v[a - 1]).then(a.cmp(&b)));
        }
        out.push_str("  subgraph cluster_I {\n    label=\"I\";\n");
        for &i in &order {
            let _ = writeln!(out, "    {i} [label={}];", label(i));
        }
        for pair in order.windows(2) {
            let _ = writeln!(out, "    {} -> {} [style=invis];", pair[0], pair[1]);
        }
        out.push_str("  }\n");
    }
    for i in 1..=g.n() {
        if !set.contains(i) {
            let _ = writeln!(out, "  {i} [label={}];", label(i));
        }
    }
    for (i, j) in g.edges() {
        let _ = writeln!(out, "  {i} -> {j};");
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::pagerank::{visit_vector, RankingContext};

    #[test]
    fn cluster_for_set() {
        let g = fixtures::load("c3").unwrap();
        let dot = export_dot(&g, &NodeSet::new([1]), None);
        assert!(dot.contains("subgraph cluster_I"));
        assert!(dot.contains("1 -> 2;"));
        assert!(dot.contains("3 -> 1;"));
    }

    #[test]
    fn empty_set_has_no_cluster() {
        let g = fixtures::load("c3").unwrap();
        let dot = export_dot(&g, &NodeSet::empty(), None);
        assert!(!dot.contains("cluster"));
        assert_eq!(dot.matches(" -> ").count(), 3);
    }

    #[test]
    fn labels_carry_values() {
        let g = fixtures::load("g_fig2").unwrap();
        let set = NodeSet::new([1]);
        let ctx = RankingContext::uniform(11, 0.85).unwrap();
        let v = visit_vector(&g, &set, &ctx).unwrap();
        let dot = export_dot(&g, &set, Some(v.as_slice()));
        assert!(dot.contains("2 [label=\"2\\n4.359\"]"), "{dot}");
        assert!(dot.contains("5 [label=\"5\\n3.521\"]"));
    }

    #[test]
    fn cluster_ordered_by_decreasing_value() {
        let g = fixtures::load("g_ex12b").unwrap();
        let set = NodeSet::all(3);
        let ctx = RankingContext::uniform(4, 0.85).unwrap();
        let v = visit_vector(&g, &set, &ctx).unwrap();
        let dot = export_dot(&g, &set, Some(v.as_slice()));
        assert!(dot.contains("2 -> 1 [style=invis]"));
        assert!(dot.contains("1 -> 3 [style=invis]"));
    }
}
