//! Scoring prediction files against gold files.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::graph::{ged, isomorphic, node_scores, temporal_awareness, Prf};
use super::text::{bleu, rouge_l, task1_accuracy};
use crate::algebra::CanonicalEdgeSet;
use crate::corpus::{Task1Example, Task2Pair};
use crate::dot;
use crate::error::EvalError;
use crate::graph::{graph_stats, GraphStats, MeanStats, TemporalGraph};

/// A generated graph for one gold pair.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Task2Prediction {
    pub doc_id: String,
    pub community_id: usize,
    pub text: String,
}

/// A generated target event for one query.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Task1Prediction {
    pub doc_id: String,
    pub prompt: String,
    pub text: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Task2ExampleScores {
    pub doc_id: String,
    pub community_id: usize,
    /// No prediction was supplied; scored as an empty string.
    pub missing: bool,
    pub valid_dot: bool,
    pub bleu: f64,
    pub rouge_l: f64,
    pub nodes: Prf,
    pub edges: Prf,
    pub ged: usize,
    pub isomorphic: bool,
    pub iso_timed_out: bool,
    pub gold_size: GraphStats,
    pub pred_size: GraphStats,
    /// Phrase pairs dropped from the prediction for carrying two relations.
    pub conflicting_pairs: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Task2Aggregate {
    pub examples: usize,
    pub bleu: f64,
    pub rouge_l: f64,
    /// Fraction of predictions that parse.
    pub dot_rate: f64,
    pub v_p: f64,
    pub v_r: f64,
    pub v_f1: f64,
    pub e_p: f64,
    pub e_r: f64,
    pub e_f1: f64,
    pub ged: f64,
    pub iso_rate: f64,
    pub gold_size: MeanStats,
    pub pred_size: MeanStats,
    pub missing_predictions: usize,
    pub unparseable_predictions: usize,
    pub iso_timeouts: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Task2Report {
    pub aggregate: Task2Aggregate,
    pub examples: Vec<Task2ExampleScores>,
    /// `doc_id/community_id` of gold pairs without a prediction.
    pub missing_ids: Vec<String>,
    /// Predictions that match no gold pair; they are not scored.
    pub unmatched_ids: Vec<String>,
}

fn pair_id(doc_id: &str, community_id: usize) -> String {
    format!("{doc_id}/{community_id}")
}

/// Scores one prediction string against one gold pair. Unparseable
/// predictions are scored as the empty graph.
pub fn score_task2_example(gold: &Task2Pair, prediction: Option<&str>) -> Task2ExampleScores {
    let text = prediction.unwrap_or("");
    let gold_graph = dot::decode(&gold.dot).unwrap_or_else(|_| TemporalGraph::empty(&gold.doc_id));
    let parsed = dot::decode(text);
    let valid_dot = parsed.is_ok();
    let pred_graph = parsed.unwrap_or_else(|_| TemporalGraph::empty(&gold.doc_id));

    let gold_edges = CanonicalEdgeSet::from_graph(&gold_graph).set;
    let pred_edges = CanonicalEdgeSet::from_graph(&pred_graph);
    let iso = isomorphic(&gold_graph, &pred_graph);
    Task2ExampleScores {
        doc_id: gold.doc_id.clone(),
        community_id: gold.community_id,
        missing: prediction.is_none(),
        valid_dot,
        bleu: bleu(text, &gold.dot),
        rouge_l: rouge_l(text, &gold.dot),
        nodes: node_scores(&gold_graph, &pred_graph),
        edges: temporal_awareness(&gold_edges, &pred_edges.set),
        ged: ged(&gold_graph, &pred_graph),
        isomorphic: iso.isomorphic,
        iso_timed_out: iso.timed_out,
        gold_size: graph_stats(&gold_graph),
        pred_size: graph_stats(&pred_graph),
        conflicting_pairs: pred_edges.conflicts.len(),
    }
}

fn mean(values: impl Iterator<Item = f64>) -> f64 {
    let (sum, n) = values.fold((0.0, 0usize), |(s, n), v| (s + v, n + 1));
    if n == 0 {
        0.0
    } else {
        sum / n as f64
    }
}

impl Task2Aggregate {
    /// Macro average over examples, folded in the given order.
    pub fn from_examples(examples: &[Task2ExampleScores]) -> Task2Aggregate {
        let avg = |f: &dyn Fn(&Task2ExampleScores) -> f64| mean(examples.iter().map(f));
        let flag = |b: bool| if b { 1.0 } else { 0.0 };
        Task2Aggregate {
            examples: examples.len(),
            bleu: avg(&|e| e.bleu),
            rouge_l: avg(&|e| e.rouge_l),
            dot_rate: avg(&|e| flag(e.valid_dot)),
            v_p: avg(&|e| e.nodes.precision),
            v_r: avg(&|e| e.nodes.recall),
            v_f1: avg(&|e| e.nodes.f1),
            e_p: avg(&|e| e.edges.precision),
            e_r: avg(&|e| e.edges.recall),
            e_f1: avg(&|e| e.edges.f1),
            ged: avg(&|e| e.ged as f64),
            iso_rate: avg(&|e| flag(e.isomorphic)),
            gold_size: MeanStats::of(examples.iter().map(|e| &e.gold_size)),
            pred_size: MeanStats::of(examples.iter().map(|e| &e.pred_size)),
            missing_predictions: examples.iter().filter(|e| e.missing).count(),
            unparseable_predictions: examples.iter().filter(|e| !e.valid_dot).count(),
            iso_timeouts: examples.iter().filter(|e| e.iso_timed_out).count(),
        }
    }

    /// Human-readable summary grouped as string, structure and semantic
    /// metrics. Scores and rates are shown as percentages.
    pub fn render(&self) -> String {
        let pct = |v: f64| format!("{:.2}", 100.0 * v);
        let mut out = String::new();
        let _ = writeln!(out, "Graph string metrics ({} examples)", self.examples);
        let _ = writeln!(out, "{:>10}{:>10}{:>10}", "BLEU", "ROUGE-L", "DOT%");
        let _ = writeln!(
            out,
            "{:>10}{:>10}{:>10}\n",
            pct(self.bleu),
            pct(self.rouge_l),
            pct(self.dot_rate)
        );
        let _ = writeln!(out, "Graph structure metrics");
        let _ = writeln!(
            out,
            "{:>8}{:>8}{:>8}{:>8}{:>8}{:>8}{:>8}{:>8}",
            "GED", "ISO", "|V|", "|E|", "d(V)", "|V^|", "|E^|", "d(V^)"
        );
        let _ = writeln!(
            out,
            "{:>8.2}{:>8}{:>8.2}{:>8.2}{:>8.2}{:>8.2}{:>8.2}{:>8.2}\n",
            self.ged,
            pct(self.iso_rate),
            self.gold_size.nodes,
            self.gold_size.edges,
            self.gold_size.degree_ratio,
            self.pred_size.nodes,
            self.pred_size.edges,
            self.pred_size.degree_ratio
        );
        let _ = writeln!(out, "Graph semantic metrics");
        let _ = writeln!(
            out,
            "{:>8}{:>8}{:>8}{:>8}{:>8}{:>8}",
            "v_P", "v_R", "v_F1", "e_P", "e_R", "e_F1"
        );
        let _ = writeln!(
            out,
            "{:>8}{:>8}{:>8}{:>8}{:>8}{:>8}",
            pct(self.v_p),
            pct(self.v_r),
            pct(self.v_f1),
            pct(self.e_p),
            pct(self.e_r),
            pct(self.e_f1)
        );
        if self.missing_predictions + self.unparseable_predictions + self.iso_timeouts > 0 {
            let _ = writeln!(
                out,
                "\n{} missing predictions, {} unparseable (scored as empty graphs), {} isomorphism timeouts",
                self.missing_predictions, self.unparseable_predictions, self.iso_timeouts
            );
        }
        out
    }
}

/// Scores graph predictions against gold pairs, aligned by
/// `(doc_id, community_id)`. Examples are reported in that key order.
pub fn evaluate_task2(
    gold: &[Task2Pair],
    preds: &[Task2Prediction],
) -> Result<Task2Report, EvalError> {
    let mut gold_by_id: BTreeMap<(&str, usize), &Task2Pair> = BTreeMap::new();
    for g in gold {
        if gold_by_id.insert((&g.doc_id, g.community_id), g).is_some() {
            return Err(EvalError::DuplicateId(
                pair_id(&g.doc_id, g.community_id),
                "gold file",
            ));
        }
    }
    let mut pred_by_id: BTreeMap<(&str, usize), &str> = BTreeMap::new();
    for p in preds {
        if pred_by_id
            .insert((&p.doc_id, p.community_id), &p.text)
            .is_some()
        {
            return Err(EvalError::DuplicateId(
                pair_id(&p.doc_id, p.community_id),
                "prediction file",
            ));
        }
    }
    let unmatched_ids = pred_by_id
        .keys()
        .filter(|k| !gold_by_id.contains_key(*k))
        .map(|(d, c)| pair_id(d, *c))
        .collect();
    let jobs: Vec<(&Task2Pair, Option<&str>)> = gold_by_id
        .iter()
        .map(|(k, g)| (*g, pred_by_id.get(k).copied()))
        .collect();
    let examples: Vec<Task2ExampleScores> = jobs
        .par_iter()
        .map(|(g, p)| score_task2_example(g, *p))
        .collect();
    let missing_ids = examples
        .iter()
        .filter(|e| e.missing)
        .map(|e| pair_id(&e.doc_id, e.community_id))
        .collect();
    Ok(Task2Report {
        aggregate: Task2Aggregate::from_examples(&examples),
        examples,
        missing_ids,
        unmatched_ids,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Task1ExampleScores {
    pub doc_id: String,
    pub prompt: String,
    pub missing: bool,
    pub prediction: String,
    pub gold: Vec<String>,
    pub accuracy: f64,
    /// Best score over the gold answers.
    pub bleu: f64,
    pub rouge_l: f64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Task1Aggregate {
    pub queries: usize,
    pub bleu: f64,
    pub rouge_l: f64,
    pub accuracy: f64,
    pub missing_predictions: usize,
}

impl Task1Aggregate {
    pub fn render(&self) -> String {
        format!(
            "Next-event generation ({} queries)\n{:>10}{:>10}{:>10}\n{:>10.2}{:>10.2}{:>10.2}\n",
            self.queries,
            "BLEU",
            "ROUGE-L",
            "ACC",
            100.0 * self.bleu,
            100.0 * self.rouge_l,
            100.0 * self.accuracy
        )
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Task1Report {
    pub aggregate: Task1Aggregate,
    pub examples: Vec<Task1ExampleScores>,
    pub missing_ids: Vec<String>,
    pub unmatched_ids: Vec<String>,
}

/// Scores next-event predictions. Gold examples sharing `(doc_id, prompt)`
/// form one query whose answers are all accepted.
pub fn evaluate_task1(
    gold: &[Task1Example],
    preds: &[Task1Prediction],
) -> Result<Task1Report, EvalError> {
    let mut answers: BTreeMap<(&str, &str), Vec<String>> = BTreeMap::new();
    for g in gold {
        let entry = answers.entry((&g.doc_id, &g.prompt)).or_default();
        if !entry.contains(&g.target_event) {
            entry.push(g.target_event.clone());
        }
    }
    let mut pred_by_id: BTreeMap<(&str, &str), &str> = BTreeMap::new();
    for p in preds {
        if pred_by_id.insert((&p.doc_id, &p.prompt), &p.text).is_some() {
            return Err(EvalError::DuplicateId(
                format!("{}/{}", p.doc_id, p.prompt),
                "prediction file",
            ));
        }
    }
    let unmatched_ids = pred_by_id
        .keys()
        .filter(|k| !answers.contains_key(*k))
        .map(|(d, p)| format!("{d}/{p}"))
        .collect();
    let examples: Vec<Task1ExampleScores> = answers
        .iter()
        .map(|(&(doc_id, prompt), gold)| {
            let pred = pred_by_id.get(&(doc_id, prompt)).copied();
            let text = pred.unwrap_or("");
            let best =
                |f: fn(&str, &str) -> f64| gold.iter().map(|g| f(text, g)).fold(0.0, f64::max);
            Task1ExampleScores {
                doc_id: doc_id.to_string(),
                prompt: prompt.to_string(),
                missing: pred.is_none(),
                prediction: text.to_string(),
                gold: gold.clone(),
                accuracy: task1_accuracy(text, gold),
                bleu: best(bleu),
                rouge_l: best(rouge_l),
            }
        })
        .collect();
    let missing_ids: Vec<String> = examples
        .iter()
        .filter(|e| e.missing)
        .map(|e| format!("{}/{}", e.doc_id, e.prompt))
        .collect();
    let aggregate = Task1Aggregate {
        queries: examples.len(),
        bleu: mean(examples.iter().map(|e| e.bleu)),
        rouge_l: mean(examples.iter().map(|e| e.rouge_l)),
        accuracy: mean(examples.iter().map(|e| e.accuracy)),
        missing_predictions: missing_ids.len(),
    };
    Ok(Task1Report {
        aggregate,
        examples,
        missing_ids,
        unmatched_ids,
    })
}

/// Ids present in `gold` but in none of `preds`, for quick alignment checks.
pub fn missing_task2_ids(gold: &[Task2Pair], preds: &[Task2Prediction]) -> BTreeSet<String> {
    let have: BTreeSet<(&str, usize)> = preds
        .iter()
        .map(|p| (p.doc_id.as_str(), p.community_id))
        .collect();
    gold.iter()
        .filter(|g| !have.contains(&(g.doc_id.as_str(), g.community_id)))
        .map(|g| pair_id(&g.doc_id, g.community_id))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pair(doc: &str, id: usize, dot: &str) -> Task2Pair {
        Task2Pair {
            doc_id: doc.into(),
            community_id: id,
            text: "some text".into(),
            dot: dot.into(),
        }
    }

    fn pred(doc: &str, id: usize, text: &str) -> Task2Prediction {
        Task2Prediction {
            doc_id: doc.into(),
            community_id: id,
            text: text.into(),
        }
    }

    const CHAIN: &str = "digraph g {\n  \"a\" -> \"b\" [label=\"before\"];\n  \"b\" -> \"c\" [label=\"before\"];\n}\n";
    const FORK: &str = "digraph g {\n  \"a\" -> \"b\" [label=\"before\"];\n  \"a\" -> \"c\" [label=\"before\"];\n}\n";

    #[test]
    fn identity_calibration() {
        let gold = vec![pair("d1", 0, CHAIN), pair("d2", 0, FORK)];
        let preds: Vec<_> = gold
            .iter()
            .map(|g| pred(&g.doc_id, g.community_id, &g.dot))
            .collect();
        let r = evaluate_task2(&gold, &preds).unwrap();
        let a = &r.aggregate;
        assert_eq!(
            (a.bleu, a.dot_rate, a.v_f1, a.e_f1, a.ged, a.iso_rate),
            (1.0, 1.0, 1.0, 1.0, 0.0, 1.0)
        );
        assert!(r.missing_ids.is_empty() && r.unmatched_ids.is_empty());
    }

    #[test]
    fn empty_predictions_score_zero() {
        let gold = vec![pair("d1", 0, CHAIN), pair("d2", 0, FORK)];
        let preds: Vec<_> = gold
            .iter()
            .map(|g| pred(&g.doc_id, g.community_id, ""))
            .collect();
        let a = evaluate_task2(&gold, &preds).unwrap().aggregate;
        assert_eq!(a.dot_rate, 0.0);
        for v in [
            a.bleu, a.rouge_l, a.v_p, a.v_r, a.v_f1, a.e_p, a.e_r, a.e_f1, a.iso_rate,
        ] {
            assert_eq!(v, 0.0);
        }
        assert_eq!(a.ged, 5.0);
        assert_eq!(a.unparseable_predictions, 2);
    }

    #[test]
    fn missing_and_unmatched_are_flagged() {
        let gold = vec![pair("d1", 0, CHAIN), pair("d1", 1, FORK)];
        let preds = vec![pred("d1", 0, CHAIN), pred("zz", 0, CHAIN)];
        let r = evaluate_task2(&gold, &preds).unwrap();
        assert_eq!(r.missing_ids, vec!["d1/1".to_string()]);
        assert_eq!(r.unmatched_ids, vec!["zz/0".to_string()]);
        assert_eq!(r.aggregate.missing_predictions, 1);
        assert_eq!(missing_task2_ids(&gold, &preds).len(), 1);
        assert!(evaluate_task2(&gold, &[pred("d1", 0, ""), pred("d1", 0, "")]).is_err());
    }

    #[test]
    fn mixed_batch_means() {
        let gold = vec![pair("d1", 0, CHAIN), pair("d2", 0, CHAIN)];
        let preds = vec![pred("d1", 0, CHAIN), pred("d2", 0, FORK)];
        let r = evaluate_task2(&gold, &preds).unwrap();
        let second = &r.examples[1];
        // FORK vs CHAIN: reduce(pred) = {a<b, a<c} ⊆ close(chain) gives P = 1;
        // close(pred) ∩ reduce(chain) = {a<b} gives R = 1/2.
        assert_eq!(second.edges.precision, 1.0);
        assert_eq!(second.edges.recall, 0.5);
        assert_eq!(second.ged, 2);
        assert!(!second.isomorphic);
        let a = &r.aggregate;
        assert!((a.e_r - 0.75).abs() < 1e-12);
        assert!((a.e_f1 - (1.0 + 2.0 / 3.0) / 2.0).abs() < 1e-12);
        assert_eq!(a.iso_rate, 0.5);
        assert_eq!(a.ged, 1.0);
        assert!(a.render().contains("DOT%"));
    }

    #[test]
    fn task1_any_gold_answer_counts() {
        let ex = |target: &str| Task1Example {
            doc_id: "d".into(),
            prompt: "p".into(),
            context: "c".into(),
            query_event: "q".into(),
            relation: crate::graph::RelationLabel::Before,
            target_event: target.into(),
            context_sentences: vec![],
            query_sentence: 0,
            target_sentence: 0,
        };
        let gold = vec![ex("he was charged"), ex("he was acquitted")];
        let preds = vec![Task1Prediction {
            doc_id: "d".into(),
            prompt: "p".into(),
            text: "he was acquitted".into(),
        }];
        let r = evaluate_task1(&gold, &preds).unwrap();
        assert_eq!(r.aggregate.queries, 1);
        assert_eq!(r.aggregate.accuracy, 1.0);
        assert_eq!(r.aggregate.bleu, 1.0);
        let r = evaluate_task1(&gold, &[]).unwrap();
        assert_eq!(r.aggregate.accuracy, 0.0);
        assert_eq!(r.missing_ids.len(), 1);
    }
}
