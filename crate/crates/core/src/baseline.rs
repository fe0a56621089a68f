//! A trivial graph generator used as an end-to-end smoke test.

use crate::corpus::Task2Pair;
use crate::dot;
use crate::error::DotError;
use crate::graph::{RelationLabel, TemporalEdge, TemporalGraph};
use crate::metrics::Task2Prediction;

/// Copies the gold events and links consecutive ones with `before`.
///
/// Events are taken in order of first appearance in the gold DOT, which
/// stands in for document order.
pub fn chain_baseline(pair: &Task2Pair) -> Result<Task2Prediction, DotError> {
    let gold = dot::decode(&pair.dot)?;
    let events = gold.events().to_vec();
    let edges = events
        .windows(2)
        .map(|w| {
            TemporalEdge::rule(w[0].token_index, w[1].token_index, RelationLabel::Before)
                .expect("distinct events")
        })
        .collect();
    let graph = TemporalGraph::new(pair.doc_id.clone(), events, edges).expect("endpoints exist");
    Ok(Task2Prediction {
        doc_id: pair.doc_id.clone(),
        community_id: pair.community_id,
        text: dot::encode(&graph),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pair(dot: &str) -> Task2Pair {
        Task2Pair {
            doc_id: "d".into(),
            community_id: 0,
            text: String::new(),
            dot: dot.into(),
        }
    }

    #[test]
    fn links_consecutive_events() {
        let p = pair(
            "digraph g { \"a\" -> \"c\" [label=\"includes\"]; \"b\" -> \"a\" [label=\"after\"]; }",
        );
        let text = chain_baseline(&p).unwrap().text;
        assert_eq!(
            text,
            "digraph g {\n  \"a\" -> \"c\" [label=\"before\"];\n  \"c\" -> \"b\" [label=\"before\"];\n}\n"
        );
    }

    #[test]
    fn single_event_gives_node_only_graph() {
        let text = chain_baseline(&pair("digraph g { \"a\"; }")).unwrap().text;
        assert_eq!(text, "digraph g {\n  \"a\";\n}\n");
        assert!(chain_baseline(&pair("digraph g {")).is_err());
    }
}
