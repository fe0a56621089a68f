use std::collections::BTreeMap;

use rayon::prelude::*;

use super::{
    build_task1_examples, build_task2_pairs, corpus_report, prune, split_doc_ids,
    AnnotatedDocument, DatasetStats, PruneConfig, ReductionReport, Split, SplitRatios,
    Task1Example, Task2Pair,
};
use crate::error::CorpusError;
use crate::graph::{graph_stats, GraphStats};

/// Everything derived from a single document.
#[derive(Clone, Debug)]
pub struct DocumentOutput {
    pub doc_id: String,
    pub tokens: usize,
    pub pruned: AnnotatedDocument,
    pub task2: Vec<Task2Pair>,
    pub graph_stats: Vec<GraphStats>,
    pub task1: Vec<Task1Example>,
    /// Task 1 examples whose context omits the target sentence.
    pub task1_minus_target: Vec<Task1Example>,
}

fn process(doc: &AnnotatedDocument, cfg: &PruneConfig) -> DocumentOutput {
    let pairs = build_task2_pairs(doc, cfg);
    DocumentOutput {
        doc_id: doc.doc_id.clone(),
        tokens: doc.token_count(),
        pruned: prune(doc, cfg),
        graph_stats: pairs.iter().map(|p| graph_stats(&p.graph)).collect(),
        task2: pairs.iter().map(|p| p.to_record()).collect(),
        task1: build_task1_examples(doc, cfg, true),
        task1_minus_target: build_task1_examples(doc, cfg, false),
    }
}

/// The full dataset, with per-document outputs ordered by doc id.
#[derive(Clone, Debug)]
pub struct BuiltDataset {
    pub documents: Vec<DocumentOutput>,
    pub assignment: BTreeMap<String, Split>,
    pub reduction: ReductionReport,
    pub stats: DatasetStats,
}

impl BuiltDataset {
    pub fn documents_in(&self, split: Split) -> impl Iterator<Item = &DocumentOutput> {
        self.documents
            .iter()
            .filter(move |d| self.assignment[&d.doc_id] == split)
    }

    pub fn task2(&self, split: Split) -> impl Iterator<Item = &Task2Pair> {
        self.documents_in(split).flat_map(|d| &d.task2)
    }

    pub fn task1(&self, split: Split) -> impl Iterator<Item = &Task1Example> {
        self.documents_in(split).flat_map(|d| &d.task1)
    }

    pub fn task1_minus_target(&self, split: Split) -> impl Iterator<Item = &Task1Example> {
        self.documents_in(split).flat_map(|d| &d.task1_minus_target)
    }
}

/// Runs pruning, community splitting and example construction over a corpus.
///
/// Documents are processed in parallel on the current rayon pool; outputs
/// are merged in doc id order, so the result does not depend on the input
/// order or the degree of parallelism.
pub fn build_dataset(
    docs: &[AnnotatedDocument],
    cfg: &PruneConfig,
    ratios: SplitRatios,
    seed: u64,
) -> Result<BuiltDataset, CorpusError> {
    if docs.is_empty() {
        return Err(CorpusError::EmptyCorpus);
    }
    let mut documents: Vec<DocumentOutput> = docs.par_iter().map(|d| process(d, cfg)).collect();
    documents.sort_by(|a, b| a.doc_id.cmp(&b.doc_id));
    let ids: Vec<&str> = documents.iter().map(|d| d.doc_id.as_str()).collect();
    let assignment = split_doc_ids(&ids, ratios, seed)?;

    let pruned: Vec<AnnotatedDocument> = documents.iter().map(|d| d.pruned.clone()).collect();
    let reduction = corpus_report(docs, &pruned);

    let mut stats = DatasetStats::default();
    for d in &documents {
        let split = assignment[&d.doc_id];
        *stats.documents.entry(split).or_insert(0) += 1;
        *stats.task1_examples.entry(split).or_insert(0) += d.task1.len();
        *stats.task2_pairs.entry(split).or_insert(0) += d.task2.len();
    }
    stats.mean_tokens_per_document =
        documents.iter().map(|d| d.tokens as f64).sum::<f64>() / documents.len() as f64;
    let graphs: Vec<&GraphStats> = documents.iter().flat_map(|d| &d.graph_stats).collect();
    if !graphs.is_empty() {
        let n = graphs.len() as f64;
        stats.mean_events_per_graph = graphs.iter().map(|g| g.node_count as f64).sum::<f64>() / n;
        stats.mean_edges_per_graph = graphs.iter().map(|g| g.edge_count as f64).sum::<f64>() / n;
    }

    Ok(BuiltDataset {
        documents,
        assignment,
        reduction,
        stats,
    })
}
