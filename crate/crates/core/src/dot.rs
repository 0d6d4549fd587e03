//! Graphviz export.

use std::fmt::Write;

use crate::shift::SftPresentation;

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// Vertices in presentation order, edges in sorted order.
pub fn to_dot(x: &SftPresentation, name: &str) -> String {
    let mut out = String::new();
    writeln!(out, "digraph {} {{", quote(name)).unwrap();
    writeln!(out, "  rankdir=LR;").unwrap();
    writeln!(out, "  node [shape=circle];").unwrap();
    for v in x.vertices() {
        writeln!(out, "  {};", quote(v)).unwrap();
    }
    for e in x.edges() {
        writeln!(
            out,
            "  {} -> {} [label={}];",
            quote(x.vertex_name(e.source)),
            quote(x.vertex_name(e.target)),
            quote(x.alphabet().name(e.symbol))
        )
        .unwrap();
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::shift::{build_from_forbidden, Alphabet};

    #[test]
    fn golden_mean_dot() {
        let x = build_from_forbidden(Alphabet::new(["0", "1"]).unwrap(), &[vec![1, 1]]).unwrap();
        let d = to_dot(&x, "golden");
        assert_eq!(d.matches("->").count(), 3);
        assert_eq!(d.lines().filter(|l| l.trim_end().ends_with(';') && !l.contains("->") && l.starts_with("  \"")).count(), 2);
        assert_eq!(d, to_dot(&x, "golden"));
    }

    #[test]
    fn product_with_fixed_point() {
        let a = Alphabet::new(["0", "1"]).unwrap();
        let full = build_from_forbidden(a.clone(), &[]).unwrap();
        let fix = SftPresentation::cycle(a, &[0]).unwrap();
        let d = to_dot(&full.product(&fix).unwrap(), "p");
        assert_eq!(d.matches("->").count(), 2);
        assert!(d.contains("label=\"(0,0)\"") && d.contains("label=\"(1,0)\""));
    }
}
