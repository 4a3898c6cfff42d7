use super::{LabeledFrame, Model};
use std::fmt::Write;

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// Graphviz rendering: `R` solid, `S_w` dashed and tagged with `w`.
/// Nodes list the variables true at the world; edge labels from `lf`, if
/// given, annotate `R`-edges.
pub fn to_dot(model: &Model, lf: Option<&LabeledFrame>) -> String {
    let frame = &model.frame;
    let mut out = String::from("digraph model {\n  node [shape=box];\n");
    for x in 0..frame.len() {
        let props: Vec<&str> = model
            .valuation
            .iter()
            .filter(|(_, set)| set.contains(x))
            .map(|(v, _)| v.as_str())
            .collect();
        let text = if props.is_empty() {
            frame.name(x).to_string()
        } else {
            format!("{}\\n{}", frame.name(x), props.join(", "))
        };
        let _ = writeln!(out, "  {} [label={}];", quote(frame.name(x)), quote(&text).replace("\\\\n", "\\n"));
    }
    for (x, y) in frame.r.pairs() {
        let label = lf.and_then(|lf| lf.edge_label(x, y));
        match label {
            Some(f) => {
                let _ = writeln!(
                    out,
                    "  {} -> {} [label={}];",
                    quote(frame.name(x)),
                    quote(frame.name(y)),
                    quote(&f.to_string())
                );
            }
            None => {
                let _ = writeln!(out, "  {} -> {};", quote(frame.name(x)), quote(frame.name(y)));
            }
        }
    }
    for (w, x, y) in frame.s_triples() {
        if x != y {
            let _ = writeln!(
                out,
                "  {} -> {} [style=dashed, label={}];",
                quote(frame.name(x)),
                quote(frame.name(y)),
                quote(frame.name(w))
            );
        }
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Frame;

    #[test]
    fn renders_both_relations() {
        let mut f = Frame::new(["w", "a", "b"]).unwrap();
        f.r.insert(0, 1);
        f.r.insert(0, 2);
        f.s[0].insert(1, 2);
        let mut m = Model::new(f);
        m.set_true("p", 1);
        let dot = to_dot(&m, None);
        assert!(dot.starts_with("digraph"));
        assert!(dot.contains("\"a\" [label=\"a\\np\"]"));
        assert!(dot.contains("\"w\" -> \"a\";"));
        assert!(dot.contains("\"a\" -> \"b\" [style=dashed, label=\"w\"]"));
    }
}
