use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::{augment, prune, AnnotatedDocument, PruneConfig};
use crate::communities::{detect_communities, induced_subgraphs, UndirectedAdjacency};
use crate::dot;
use crate::error::CorpusError;
use crate::graph::{canonical_edge, RelationLabel, TemporalEdge, TemporalGraph};

/// One line of the graph-generation dataset.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Task2Pair {
    pub doc_id: String,
    pub community_id: usize,
    pub text: String,
    pub dot: String,
}

/// A community subgraph with the sentences that ground it.
#[derive(Clone, Debug, PartialEq)]
pub struct CommunityPair {
    pub community_id: usize,
    pub sentences: BTreeSet<usize>,
    pub text: String,
    pub graph: TemporalGraph,
}

impl CommunityPair {
    pub fn to_record(&self) -> Task2Pair {
        Task2Pair {
            doc_id: self.graph.doc_id.clone(),
            community_id: self.community_id,
            text: self.text.clone(),
            dot: dot::encode(&self.graph),
        }
    }
}

/// The whole-document graph of an already pruned document.
///
/// Edges are stored canonically; vague links are left out because they have
/// no canonical form. Events that share a phrase are merged so that phrase
/// identity and node identity coincide.
pub fn document_graph(pruned: &AnnotatedDocument) -> TemporalGraph {
    let edges: Vec<TemporalEdge> = pruned
        .tlinks
        .iter()
        .filter(|l| l.label != RelationLabel::Vague)
        .map(|l| {
            let e = TemporalEdge::new(l.source, l.target, l.label, l.origin, l.confidence)
                .expect("validated link");
            canonical_edge(&e).expect("non-vague")
        })
        .collect();
    TemporalGraph::new(pruned.doc_id.clone(), augment(pruned), edges)
        .expect("pruned links join surviving events")
        .merge_duplicate_phrases()
}

/// Prunes, augments and splits a document into community sub-documents.
///
/// Singleton communities are dropped. Each remaining community is paired
/// with the concatenation of the sentences holding its events.
pub fn build_task2_pairs(doc: &AnnotatedDocument, cfg: &PruneConfig) -> Vec<CommunityPair> {
    let pruned = prune(doc, cfg);
    let graph = document_graph(&pruned);
    let adj = UndirectedAdjacency::from_graph(&graph);
    let Ok(detection) = detect_communities(&adj) else {
        return Vec::new();
    };
    induced_subgraphs(&graph, &detection.partition)
        .into_iter()
        .enumerate()
        .map(|(community_id, sub)| {
            let sentences: BTreeSet<usize> =
                sub.events().iter().map(|e| e.sentence_index).collect();
            CommunityPair {
                community_id,
                text: pruned.sentences_text(&sentences),
                sentences,
                graph: sub,
            }
        })
        .collect()
}

/// A next-event query: given the context, a relation and a query event,
/// the target event is the answer.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Task1Example {
    pub doc_id: String,
    pub prompt: String,
    pub context: String,
    pub query_event: String,
    pub relation: RelationLabel,
    pub target_event: String,
    #[serde(skip)]
    pub context_sentences: Vec<usize>,
    #[serde(skip)]
    pub query_sentence: usize,
    #[serde(skip)]
    pub target_sentence: usize,
}

impl Task1Example {
    pub fn format_prompt(context: &str, relation: RelationLabel, query_event: &str) -> String {
        format!(
            "In the context of {context}, what happens {} {query_event}?",
            relation.as_words()
        )
    }

    /// Prompt tokens as input, target tokens as output.
    pub fn masked_sequence(&self) -> MaskedSequence {
        let x: Vec<String> = self.prompt.split_whitespace().map(str::to_string).collect();
        let y: Vec<String> = self
            .target_event
            .split_whitespace()
            .map(str::to_string)
            .collect();
        build_masked_sequence(&x, &y)
    }
}

fn neighborhood(sentence: usize, count: usize) -> impl Iterator<Item = usize> {
    sentence.saturating_sub(1)..=(sentence + 1).min(count - 1)
}

/// One example per distinct `(query, relation, target)` link of the pruned
/// document, in document order of the links.
///
/// The context holds the sentences of both events and their immediate
/// neighbours. With `include_target_sentence == false` the sentence holding
/// the target event is removed from it.
pub fn build_task1_examples(
    doc: &AnnotatedDocument,
    cfg: &PruneConfig,
    include_target_sentence: bool,
) -> Vec<Task1Example> {
    let pruned = prune(doc, cfg);
    let events: BTreeMap<usize, _> = augment(&pruned)
        .into_iter()
        .map(|e| (e.token_index, e))
        .collect();
    let mut links: Vec<TemporalEdge> = pruned
        .tlinks
        .iter()
        .filter(|l| l.label != RelationLabel::Vague)
        .map(|l| {
            TemporalEdge::new(l.source, l.target, l.label, l.origin, l.confidence)
                .expect("validated link")
        })
        .collect();
    links.sort_by_key(TemporalEdge::order_key);

    let count = pruned.sentences.len();
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for link in links {
        let (q, t) = (&events[&link.source], &events[&link.target]);
        if q.phrase == t.phrase || !seen.insert((q.phrase.clone(), link.label, t.phrase.clone())) {
            continue;
        }
        let mut sentences: BTreeSet<usize> = neighborhood(q.sentence_index, count)
            .chain(neighborhood(t.sentence_index, count))
            .collect();
        if !include_target_sentence {
            sentences.remove(&t.sentence_index);
        }
        let context = pruned.sentences_text(&sentences);
        out.push(Task1Example {
            doc_id: pruned.doc_id.clone(),
            prompt: Task1Example::format_prompt(&context, link.label, &q.phrase),
            context,
            query_event: q.phrase.clone(),
            relation: link.label,
            target_event: t.phrase.clone(),
            context_sentences: sentences.into_iter().collect(),
            query_sentence: q.sentence_index,
            target_sentence: t.sentence_index,
        });
    }
    out
}

/// Input and output tokens with a loss mask over their concatenation:
/// false on input positions, true on output positions.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MaskedSequence {
    pub input_tokens: Vec<String>,
    pub output_tokens: Vec<String>,
    pub mask: Vec<bool>,
}

impl MaskedSequence {
    /// Number of positions that contribute to the loss.
    pub fn weight(&self) -> usize {
        self.mask.iter().filter(|&&m| m).count()
    }
}

pub fn build_masked_sequence(x: &[String], y: &[String]) -> MaskedSequence {
    let mask = std::iter::repeat_n(false, x.len())
        .chain(std::iter::repeat_n(true, y.len()))
        .collect();
    MaskedSequence {
        input_tokens: x.to_vec(),
        output_tokens: y.to_vec(),
        mask,
    }
}

/// Masked negative log-likelihood of one sequence: `-Σ mask[j] * logprob[j]`.
pub fn masked_nll(per_position_logprob: &[f64], mask: &[bool]) -> Result<f64, CorpusError> {
    if per_position_logprob.len() != mask.len() {
        return Err(CorpusError::LengthMismatch {
            logprobs: per_position_logprob.len(),
            mask: mask.len(),
        });
    }
    Ok(-per_position_logprob
        .iter()
        .zip(mask)
        .filter(|(_, &m)| m)
        .map(|(lp, _)| lp)
        .sum::<f64>())
}
