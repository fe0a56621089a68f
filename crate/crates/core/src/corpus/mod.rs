//! Annotated-document ingestion and dataset construction.
//!
//! Documents arrive as one JSON record per line, already tokenized and
//! annotated with verb events and temporal links. From them this module
//! derives the community-split text/graph pairs, the next-event query
//! examples, loss masks and deterministic document-level splits.

mod config;
mod dataset;
mod pipeline;
mod prune;
mod report;
mod split;

use std::collections::BTreeSet;
use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use crate::error::CorpusError;
use crate::graph::{Origin, RelationLabel};

pub use config::{PruneConfig, LIGHT_VERBS, LOW_IDF_VERBS, REPORTING_VERBS};
pub use dataset::{
    build_masked_sequence, build_task1_examples, build_task2_pairs, document_graph, masked_nll,
    CommunityPair, MaskedSequence, Task1Example, Task2Pair,
};
pub use pipeline::{build_dataset, BuiltDataset, DocumentOutput};
pub use prune::{augment, prune};
pub use report::{corpus_report, truncated_percent, DatasetStats, ReductionReport};
pub use split::{split_corpus, split_doc_ids, Split, SplitRatios};

/// A raw verb event as produced by the upstream annotator.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawEvent {
    pub verb: String,
    pub sentence_index: usize,
    /// Document-level position of the verb token.
    pub token_index: usize,
    #[serde(default)]
    pub subject: Option<String>,
    #[serde(default)]
    pub object: Option<String>,
}

impl RawEvent {
    pub fn has_subject_and_object(&self) -> bool {
        let present = |s: &Option<String>| s.as_deref().is_some_and(|s| !s.trim().is_empty());
        present(&self.subject) && present(&self.object)
    }
}

/// A raw temporal link. Endpoints are document token positions; an endpoint
/// that is not an event (a time expression, say) is removed by pruning.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawLink {
    pub source: usize,
    pub target: usize,
    pub label: RelationLabel,
    pub origin: Origin,
    pub confidence: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnnotatedDocument {
    pub doc_id: String,
    pub sentences: Vec<Vec<String>>,
    pub events: Vec<RawEvent>,
    pub tlinks: Vec<RawLink>,
}

impl AnnotatedDocument {
    pub fn token_count(&self) -> usize {
        self.sentences.iter().map(Vec::len).sum()
    }

    /// Token offset of the first token of each sentence.
    pub fn sentence_offsets(&self) -> Vec<usize> {
        self.sentences
            .iter()
            .scan(0, |acc, s| {
                let start = *acc;
                *acc += s.len();
                Some(start)
            })
            .collect()
    }

    /// Text of one sentence, tokens joined by single spaces.
    pub fn sentence_text(&self, index: usize) -> String {
        self.sentences[index].join(" ")
    }

    /// Concatenation of the given sentences in ascending order.
    pub fn sentences_text(&self, indices: &BTreeSet<usize>) -> String {
        indices
            .iter()
            .map(|&i| self.sentence_text(i))
            .collect::<Vec<_>>()
            .join(" ")
    }

    pub fn event_tokens(&self) -> BTreeSet<usize> {
        self.events.iter().map(|e| e.token_index).collect()
    }

    /// Checks the structural invariants of a record.
    pub fn validate(&self) -> Result<(), String> {
        if self.doc_id.trim().is_empty() {
            return Err("empty doc_id".into());
        }
        let offsets = self.sentence_offsets();
        let total = self.token_count();
        let mut seen = BTreeSet::new();
        for e in &self.events {
            let Some(&start) = offsets.get(e.sentence_index) else {
                return Err(format!(
                    "event at token {} has sentence_index {} but the document has {} sentences",
                    e.token_index,
                    e.sentence_index,
                    self.sentences.len()
                ));
            };
            let end = start + self.sentences[e.sentence_index].len();
            if !(start..end).contains(&e.token_index) {
                return Err(format!(
                    "event token {} lies outside sentence {} (tokens {start}..{end})",
                    e.token_index, e.sentence_index
                ));
            }
            if !seen.insert(e.token_index) {
                return Err(format!("two events at token {}", e.token_index));
            }
            if e.verb.trim().is_empty() {
                return Err(format!(
                    "event at token {} has an empty verb",
                    e.token_index
                ));
            }
        }
        for l in &self.tlinks {
            if l.source >= total || l.target >= total {
                return Err(format!(
                    "tlink {} -> {} points past the last token ({total})",
                    l.source, l.target
                ));
            }
            if l.source == l.target {
                return Err(format!("tlink self-loop at token {}", l.source));
            }
            if !(0.0..=1.0).contains(&l.confidence) {
                return Err(format!("tlink confidence {} outside [0, 1]", l.confidence));
            }
        }
        Ok(())
    }
}

/// Reads one validated document per non-blank line. Errors carry the
/// 1-based line number.
pub fn read_corpus(reader: impl BufRead) -> Result<Vec<AnnotatedDocument>, CorpusError> {
    let mut docs = Vec::new();
    let mut ids = BTreeSet::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let schema = |message: String| CorpusError::Schema {
            line: i + 1,
            message,
        };
        let doc: AnnotatedDocument =
            serde_json::from_str(&line).map_err(|e| schema(e.to_string()))?;
        doc.validate().map_err(schema)?;
        if !ids.insert(doc.doc_id.clone()) {
            return Err(schema(format!("duplicate doc_id `{}`", doc.doc_id)));
        }
        docs.push(doc);
    }
    Ok(docs)
}

/// Reads any line-delimited JSON record type.
pub fn read_jsonl<T: serde::de::DeserializeOwned>(
    reader: impl BufRead,
) -> Result<Vec<T>, CorpusError> {
    let mut out = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        out.push(
            serde_json::from_str(&line).map_err(|e| CorpusError::Schema {
                line: i + 1,
                message: e.to_string(),
            })?,
        );
    }
    Ok(out)
}

pub fn write_jsonl<'a, T: Serialize + 'a>(
    mut writer: impl Write,
    records: impl IntoIterator<Item = &'a T>,
) -> std::io::Result<()> {
    for r in records {
        serde_json::to_writer(&mut writer, r)?;
        writer.write_all(b"\n")?;
    }
    writer.flush()
}
