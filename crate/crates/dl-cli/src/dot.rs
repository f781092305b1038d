//! DOT export for balls: one node per vertex labeled with its heights, one
//! deduplicated undirected edge per adjacency within the ball.

use std::collections::BTreeMap;
use std::fmt::Write;

use dl_core::dlgraph::{neighbors, GraphParams};
use dl_core::DLVertex;

pub fn ball_to_dot(ball: &BTreeMap<DLVertex, u64>, params: &GraphParams) -> String {
    let ids: BTreeMap<&DLVertex, usize> = ball.keys().zip(0..).collect();
    let mut out = String::from("graph dl {\n");
    for (v, &id) in &ids {
        let heights: Vec<String> = v.heights().iter().map(|h| h.to_string()).collect();
        let _ = writeln!(
            out,
            "  n{id} [label=\"({})\", tooltip=\"{v}\"];",
            heights.join(",")
        );
    }
    for (v, &id) in &ids {
        for n in neighbors(v, params) {
            if let Some(&other) = ids.get(&n) {
                if id < other {
                    let _ = writeln!(out, "  n{id} -- n{other};");
                }
            }
        }
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use dl_core::dlgraph::ball;

    #[test]
    fn dot_shape() {
        let params = GraphParams::new(2, 2).unwrap();
        let b = ball(&DLVertex::origin(&params), 1, &params);
        let dot = ball_to_dot(&b, &params);
        assert!(dot.starts_with("graph dl {"));
        assert_eq!(dot.matches("--").count(), 4, "origin has four ball edges");
        assert_eq!(dot.matches("label=").count(), 5);
        // Deterministic output.
        assert_eq!(dot, ball_to_dot(&b, &params));
    }
}
