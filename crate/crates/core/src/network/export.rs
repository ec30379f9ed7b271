use std::fmt::Write;

use super::PopulationGraph;

/// Graphviz description of the graph, one undirected edge per line.
pub fn to_dot(g: &PopulationGraph, name: &str) -> String {
    let mut out = format!("graph {name} {{\n");
    for n in g.nodes() {
        writeln!(out, "  {n};").unwrap();
    }
    for (a, b) in g.edges() {
        writeln!(out, "  {a} -- {b};").unwrap();
    }
    out.push_str("}\n");
    out
}

/// `source,target` CSV with one row per undirected edge, low id first.
pub fn edge_list_csv(g: &PopulationGraph) -> String {
    let mut out = String::from("source,target\n");
    for (a, b) in g.edges() {
        writeln!(out, "{a},{b}").unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ring_exports() {
        let g = PopulationGraph::new_ring(3).unwrap();
        assert_eq!(
            to_dot(&g, "ring"),
            "graph ring {\n  0;\n  1;\n  2;\n  0 -- 1;\n  0 -- 2;\n  1 -- 2;\n}\n"
        );
        assert_eq!(edge_list_csv(&g), "source,target\n0,1\n0,2\n1,2\n");
    }
}
