use std::collections::BTreeMap;
use std::fmt::Write;

use serde::{Deserialize, Serialize};

use super::{AnnotatedDocument, Split};

/// Relation and event counts before and after pruning.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionReport {
    pub relations_before: u64,
    pub relations_after: u64,
    pub events_before: u64,
    pub events_after: u64,
}

/// Percentage reduction truncated (not rounded) to two decimals; zero when
/// there was nothing to reduce.
pub fn truncated_percent(before: u64, after: u64) -> f64 {
    if before == 0 || after >= before {
        return 0.0;
    }
    let hundredths = (before - after) as u128 * 10_000 / before as u128;
    hundredths as f64 / 100.0
}

fn thousands(n: u64) -> String {
    let digits = n.to_string();
    let mut out = String::new();
    for (i, c) in digits.chars().enumerate() {
        if i > 0 && (digits.len() - i).is_multiple_of(3) {
            out.push(',');
        }
        out.push(c);
    }
    out
}

impl ReductionReport {
    pub fn relation_reduction(&self) -> f64 {
        truncated_percent(self.relations_before, self.relations_after)
    }

    pub fn event_reduction(&self) -> f64 {
        truncated_percent(self.events_before, self.events_after)
    }

    /// Table layout: initial count, pruned count and percent reduction.
    pub fn render(&self) -> String {
        let rows = [
            (
                "#Relations",
                self.relations_before,
                self.relations_after,
                self.relation_reduction(),
            ),
            (
                "#Events",
                self.events_before,
                self.events_after,
                self.event_reduction(),
            ),
        ];
        let mut out = format!(
            "{:<12}{:>14}{:>14}{:>14}\n",
            "", "Initial", "Pruned", "% Reduction"
        );
        for (name, before, after, pct) in rows {
            let _ = writeln!(
                out,
                "{:<12}{:>14}{:>14}{:>14.2}",
                name,
                thousands(before),
                thousands(after),
                pct
            );
        }
        out
    }
}

/// Counts relations and events of a corpus before and after pruning.
pub fn corpus_report(before: &[AnnotatedDocument], after: &[AnnotatedDocument]) -> ReductionReport {
    let count = |docs: &[AnnotatedDocument]| -> (u64, u64) {
        docs.iter().fold((0, 0), |(r, e), d| {
            (r + d.tlinks.len() as u64, e + d.events.len() as u64)
        })
    };
    let (relations_before, events_before) = count(before);
    let (relations_after, events_after) = count(after);
    ReductionReport {
        relations_before,
        relations_after,
        events_before,
        events_after,
    }
}

/// Dataset sizes per split and per-graph averages.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct DatasetStats {
    pub documents: BTreeMap<Split, usize>,
    pub task1_examples: BTreeMap<Split, usize>,
    pub task2_pairs: BTreeMap<Split, usize>,
    pub mean_tokens_per_document: f64,
    pub mean_events_per_graph: f64,
    pub mean_edges_per_graph: f64,
}

impl DatasetStats {
    pub fn render(&self) -> String {
        let get = |m: &BTreeMap<Split, usize>, s| m.get(&s).copied().unwrap_or(0);
        let mut out = format!(
            "{:<10}{:>10}{:>10}{:>10}\n",
            "Task", "train", "valid", "test"
        );
        for (name, m) in [
            ("Documents", &self.documents),
            ("Task 1", &self.task1_examples),
            ("Task 2", &self.task2_pairs),
        ] {
            let _ = writeln!(
                out,
                "{:<10}{:>10}{:>10}{:>10}",
                name,
                get(m, Split::Train),
                get(m, Split::Valid),
                get(m, Split::Test)
            );
        }
        let _ = writeln!(
            out,
            "\n{:.2} tokens per document, {:.2} events and {:.2} edges per graph",
            self.mean_tokens_per_document, self.mean_events_per_graph, self.mean_edges_per_graph
        );
        out
    }
}
