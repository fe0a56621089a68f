//! Node-set, temporal-awareness and structural comparison of two graphs.
//!
//! Nodes are matched across graphs by normalized phrase, edges by their
//! canonical `(source, target, label)` triple.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::algebra::{closure, reduction, CanonicalEdge, CanonicalEdgeSet};
use crate::graph::{RelationLabel, TemporalGraph};

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Prf {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

impl Prf {
    fn new(precision: f64, recall: f64) -> Prf {
        let f1 = if precision + recall == 0.0 {
            0.0
        } else {
            2.0 * precision * recall / (precision + recall)
        };
        Prf {
            precision,
            recall,
            f1,
        }
    }
}

/// `hits / size`, scoring 1 when both sides are empty and 0 when only the
/// denominator side is empty.
fn ratio(hits: usize, size: usize, other_size: usize) -> f64 {
    match (size, other_size) {
        (0, 0) => 1.0,
        (0, _) => 0.0,
        _ => hits as f64 / size as f64,
    }
}

/// Precision, recall and F1 of the predicted node phrases.
pub fn node_scores(gold: &TemporalGraph, pred: &TemporalGraph) -> Prf {
    let g = gold.phrase_set();
    let p = pred.phrase_set();
    let hits = g.intersection(&p).count();
    Prf::new(ratio(hits, p.len(), g.len()), ratio(hits, g.len(), p.len()))
}

/// Temporal awareness over canonical edge sets:
/// `P = |reduce(pred) ∩ close(gold)| / |reduce(pred)|` and
/// `R = |close(pred) ∩ reduce(gold)| / |reduce(gold)|`.
pub fn temporal_awareness(gold: &CanonicalEdgeSet, pred: &CanonicalEdgeSet) -> Prf {
    let (gold_plus, gold_minus) = (closure(gold), reduction(gold));
    let (pred_plus, pred_minus) = (closure(pred), reduction(pred));
    let precision = ratio(
        pred_minus.intersection_len(&gold_plus),
        pred_minus.len(),
        gold.len(),
    );
    let recall = ratio(
        pred_plus.intersection_len(&gold_minus),
        gold_minus.len(),
        pred.len(),
    );
    Prf::new(precision, recall)
}

type EdgeKey = (String, String, RelationLabel);

fn edge_keys(g: &TemporalGraph) -> BTreeSet<EdgeKey> {
    g.edges()
        .iter()
        .map(|e| {
            let (s, t) = (g.phrase(e.source), g.phrase(e.target));
            match CanonicalEdge::new(s, t, e.label) {
                Some(c) => (c.source, c.target, c.label),
                None => (s.to_string(), t.to_string(), e.label),
            }
        })
        .collect()
}

/// Add/remove edit distance with nodes anchored by phrase and edges by
/// canonical triple: `|V Δ V'| + |E Δ E'|`.
///
/// Edges incident to an added or removed node are part of the edge
/// symmetric difference and are counted there once.
pub fn ged(gold: &TemporalGraph, pred: &TemporalGraph) -> usize {
    let (gv, pv) = (gold.phrase_set(), pred.phrase_set());
    let (ge, pe) = (edge_keys(gold), edge_keys(pred));
    gv.symmetric_difference(&pv).count() + ge.symmetric_difference(&pe).count()
}

/// Node count up to which isomorphism is decided without a search budget.
pub const EXACT_ISO_NODES: usize = 12;
/// Search-step budget for larger graphs.
pub const ISO_STEP_BUDGET: u64 = 2_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IsoOutcome {
    pub isomorphic: bool,
    /// The step budget ran out before a decision; `isomorphic` is false.
    pub timed_out: bool,
}

/// Unlabeled directed simple graph.
struct Topology {
    out: Vec<BTreeSet<usize>>,
    inc: Vec<BTreeSet<usize>>,
}

impl Topology {
    fn of(g: &TemporalGraph) -> Topology {
        let n = g.events().len();
        let pos = |tok: usize| {
            g.events()
                .binary_search_by_key(&tok, |e| e.token_index)
                .expect("edge endpoint")
        };
        let mut out = vec![BTreeSet::new(); n];
        let mut inc = vec![BTreeSet::new(); n];
        for e in g.edges() {
            let (s, t) = (pos(e.source), pos(e.target));
            out[s].insert(t);
            inc[t].insert(s);
        }
        Topology { out, inc }
    }

    fn len(&self) -> usize {
        self.out.len()
    }

    fn edge_count(&self) -> usize {
        self.out.iter().map(BTreeSet::len).sum()
    }

    fn degree(&self, v: usize) -> (usize, usize) {
        (self.inc[v].len(), self.out[v].len())
    }

    fn has(&self, a: usize, b: usize) -> bool {
        self.out[a].contains(&b)
    }
}

struct Matcher<'a> {
    left: &'a Topology,
    right: &'a Topology,
    order: Vec<usize>,
    map: Vec<Option<usize>>,
    used: Vec<bool>,
    steps: u64,
    budget: Option<u64>,
}

impl Matcher<'_> {
    /// Returns `Some(found)` or `None` when the budget is exhausted.
    fn search(&mut self, depth: usize) -> Option<bool> {
        if depth == self.order.len() {
            return Some(true);
        }
        let u = self.order[depth];
        for v in 0..self.right.len() {
            if self.used[v] || self.left.degree(u) != self.right.degree(v) {
                continue;
            }
            self.steps += 1;
            if self.budget.is_some_and(|b| self.steps > b) {
                return None;
            }
            let consistent = self.order[..depth].iter().all(|&w| {
                let x = self.map[w].expect("mapped earlier");
                self.left.has(u, w) == self.right.has(v, x)
                    && self.left.has(w, u) == self.right.has(x, v)
            });
            if !consistent {
                continue;
            }
            self.map[u] = Some(v);
            self.used[v] = true;
            match self.search(depth + 1) {
                Some(true) => return Some(true),
                None => return None,
                Some(false) => {}
            }
            self.map[u] = None;
            self.used[v] = false;
        }
        Some(false)
    }
}

/// Visit order: repeatedly take the unvisited node with the most links to
/// already ordered nodes, then by total degree.
fn search_order(t: &Topology) -> Vec<usize> {
    let n = t.len();
    let mut order = Vec::with_capacity(n);
    let mut placed = vec![false; n];
    for _ in 0..n {
        let next = (0..n)
            .filter(|&v| !placed[v])
            .max_by_key(|&v| {
                let linked = order
                    .iter()
                    .filter(|&&w| t.has(v, w) || t.has(w, v))
                    .count();
                let (i, o) = t.degree(v);
                (linked, i + o, std::cmp::Reverse(v))
            })
            .expect("unplaced node remains");
        placed[next] = true;
        order.push(next);
    }
    order
}

/// Whether two graphs have the same unlabeled directed topology.
pub fn isomorphic(gold: &TemporalGraph, pred: &TemporalGraph) -> IsoOutcome {
    isomorphic_with_budget(gold, pred, ISO_STEP_BUDGET)
}

/// As [`isomorphic`], with an explicit step budget for graphs above
/// [`EXACT_ISO_NODES`] nodes.
pub fn isomorphic_with_budget(
    gold: &TemporalGraph,
    pred: &TemporalGraph,
    budget: u64,
) -> IsoOutcome {
    let (a, b) = (Topology::of(gold), Topology::of(pred));
    let no = IsoOutcome {
        isomorphic: false,
        timed_out: false,
    };
    if a.len() != b.len() || a.edge_count() != b.edge_count() {
        return no;
    }
    let degrees = |t: &Topology| {
        let mut d: Vec<_> = (0..t.len()).map(|v| t.degree(v)).collect();
        d.sort_unstable();
        d
    };
    if degrees(&a) != degrees(&b) {
        return no;
    }
    let mut m = Matcher {
        left: &a,
        right: &b,
        order: search_order(&a),
        map: vec![None; a.len()],
        used: vec![false; b.len()],
        steps: 0,
        budget: (a.len() > EXACT_ISO_NODES).then_some(budget),
    };
    match m.search(0) {
        Some(found) => IsoOutcome {
            isomorphic: found,
            timed_out: false,
        },
        None => IsoOutcome {
            isomorphic: false,
            timed_out: true,
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{Event, TemporalEdge};
    use RelationLabel::*;

    fn graph(nodes: &[&str], edges: &[(usize, usize, RelationLabel)]) -> TemporalGraph {
        TemporalGraph::new(
            "t",
            nodes
                .iter()
                .enumerate()
                .map(|(i, p)| Event::from_phrase(p, i))
                .collect(),
            edges
                .iter()
                .map(|&(s, t, l)| TemporalEdge::rule(s, t, l).unwrap())
                .collect(),
        )
        .unwrap()
    }

    fn edges(g: &TemporalGraph) -> CanonicalEdgeSet {
        CanonicalEdgeSet::from_graph(g).set
    }

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() < 1e-12
    }

    #[test]
    fn node_score_examples() {
        let gold = graph(&["a", "b", "c"], &[]);
        let s = node_scores(&gold, &graph(&["a", "b", "d"], &[]));
        assert!(
            close(s.precision, 2.0 / 3.0) && close(s.recall, 2.0 / 3.0) && close(s.f1, 2.0 / 3.0)
        );
        let s = node_scores(&gold, &gold);
        assert_eq!((s.precision, s.recall, s.f1), (1.0, 1.0, 1.0));
        let s = node_scores(&gold, &TemporalGraph::empty("t"));
        assert_eq!((s.precision, s.recall, s.f1), (0.0, 0.0, 0.0));
        let e = TemporalGraph::empty("t");
        let s = node_scores(&e, &e);
        assert_eq!((s.precision, s.recall, s.f1), (1.0, 1.0, 1.0));
    }

    #[test]
    fn node_precision_recall_swap() {
        let g = graph(&["a", "b", "c"], &[]);
        let p = graph(&["a", "x"], &[]);
        assert_eq!(node_scores(&g, &p).precision, node_scores(&p, &g).recall);
        assert_eq!(node_scores(&g, &p).recall, node_scores(&p, &g).precision);
    }

    #[test]
    fn temporal_awareness_hand_case() {
        let gold = graph(&["a", "b", "c"], &[(0, 1, Before), (1, 2, Before)]);
        let pred = graph(&["a", "b", "c"], &[(0, 1, Before), (0, 2, Before)]);
        let s = temporal_awareness(&edges(&gold), &edges(&pred));
        assert!(close(s.precision, 1.0));
        assert!(close(s.recall, 0.5));
        assert!(close(s.f1, 2.0 / 3.0));
    }

    #[test]
    fn temporal_awareness_conventions() {
        let gold = edges(&graph(&["a", "b"], &[(0, 1, Before)]));
        let s = temporal_awareness(&gold, &gold);
        assert_eq!((s.precision, s.recall, s.f1), (1.0, 1.0, 1.0));
        let s = temporal_awareness(&gold, &CanonicalEdgeSet::default());
        assert_eq!((s.precision, s.recall, s.f1), (0.0, 0.0, 0.0));
        let empty = CanonicalEdgeSet::default();
        let s = temporal_awareness(&empty, &empty);
        assert_eq!((s.precision, s.recall, s.f1), (1.0, 1.0, 1.0));
        // Inverse spelling of the same assertion matches.
        let inv = edges(&graph(&["a", "b"], &[(1, 0, After)]));
        assert_eq!(temporal_awareness(&gold, &inv).f1, 1.0);
    }

    #[test]
    fn ged_examples() {
        let gold = graph(&["a", "b", "c"], &[(0, 1, Before), (1, 2, Before)]);
        assert_eq!(ged(&gold, &gold), 0);
        let pred = graph(&["a", "b"], &[(0, 1, Before)]);
        assert_eq!(ged(&gold, &pred), 2);
        assert_eq!(ged(&pred, &gold), 2);
        let relabeled = graph(&["a", "b"], &[(0, 1, Includes)]);
        assert_eq!(ged(&pred, &relabeled), 2);
        let inverse = graph(&["a", "b"], &[(1, 0, After)]);
        assert_eq!(ged(&pred, &inverse), 0);
    }

    #[test]
    fn iso_examples() {
        let path = graph(&["a", "b", "c"], &[(0, 1, Before), (1, 2, Before)]);
        let other = graph(&["x", "y", "z"], &[(0, 1, Includes), (1, 2, After)]);
        assert!(isomorphic(&path, &other).isomorphic);
        let star = graph(&["x", "y", "z"], &[(0, 1, Before), (0, 2, Before)]);
        let r = isomorphic(&path, &star);
        assert!(!r.isomorphic && !r.timed_out);
        let e = TemporalGraph::empty("t");
        assert!(isomorphic(&e, &e).isomorphic);
        assert!(!isomorphic(&e, &graph(&["a"], &[])).isomorphic);
    }

    #[test]
    fn iso_budget_reports_timeout() {
        // Two 14-node graphs with equal degree sequences but different
        // structure: a 14-cycle versus two 7-cycles.
        let names: Vec<String> = (0..14).map(|i| format!("n{i}")).collect();
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        let cycle: Vec<_> = (0..14).map(|i| (i, (i + 1) % 14, Before)).collect();
        let split: Vec<_> = (0..14)
            .map(|i| (i, if i % 7 == 6 { i - 6 } else { i + 1 }, Before))
            .collect();
        let (a, b) = (graph(&refs, &cycle), graph(&refs, &split));
        let r = isomorphic_with_budget(&a, &b, 5);
        assert!(r.timed_out && !r.isomorphic);
        let r = isomorphic(&a, &b);
        assert!(!r.timed_out && !r.isomorphic);
        assert!(isomorphic(&a, &a).isomorphic);
    }
}
