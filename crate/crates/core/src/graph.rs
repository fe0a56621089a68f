//! Events, temporal relations and per-document temporal graphs.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::GraphError;

/// A temporal relation between two events.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RelationLabel {
    Before,
    After,
    Includes,
    #[serde(alias = "is included")]
    IsIncluded,
    Simultaneous,
    Vague,
}

impl RelationLabel {
    pub const ALL: [RelationLabel; 6] = [
        RelationLabel::Before,
        RelationLabel::After,
        RelationLabel::Includes,
        RelationLabel::IsIncluded,
        RelationLabel::Simultaneous,
        RelationLabel::Vague,
    ];

    /// The relation that holds when the arguments are swapped.
    pub fn inverse(self) -> RelationLabel {
        match self {
            RelationLabel::Before => RelationLabel::After,
            RelationLabel::After => RelationLabel::Before,
            RelationLabel::Includes => RelationLabel::IsIncluded,
            RelationLabel::IsIncluded => RelationLabel::Includes,
            RelationLabel::Simultaneous => RelationLabel::Simultaneous,
            RelationLabel::Vague => RelationLabel::Vague,
        }
    }

    /// True for the labels that survive canonicalization unchanged.
    pub fn is_canonical(self) -> bool {
        matches!(
            self,
            RelationLabel::Before | RelationLabel::Includes | RelationLabel::Simultaneous
        )
    }

    pub fn as_str(self) -> &'static str {
        match self {
            RelationLabel::Before => "before",
            RelationLabel::After => "after",
            RelationLabel::Includes => "includes",
            RelationLabel::IsIncluded => "is_included",
            RelationLabel::Simultaneous => "simultaneous",
            RelationLabel::Vague => "vague",
        }
    }

    /// Natural-language form used inside query prompts.
    pub fn as_words(self) -> &'static str {
        match self {
            RelationLabel::IsIncluded => "is included",
            other => other.as_str(),
        }
    }
}

impl fmt::Display for RelationLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for RelationLabel {
    type Err = GraphError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "before" => Ok(RelationLabel::Before),
            "after" => Ok(RelationLabel::After),
            "includes" => Ok(RelationLabel::Includes),
            "is_included" | "is included" => Ok(RelationLabel::IsIncluded),
            "simultaneous" => Ok(RelationLabel::Simultaneous),
            "vague" => Ok(RelationLabel::Vague),
            _ => Err(GraphError::UnknownLabel(s.to_string())),
        }
    }
}

/// Which kind of extraction sieve produced a link.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Origin {
    Rule,
    Statistical,
}

/// Lowercases, collapses whitespace runs to a single space and trims.
pub fn normalize_phrase(raw: &str) -> String {
    let mut out = String::with_capacity(raw.len());
    for word in raw.split_whitespace() {
        if !out.is_empty() {
            out.push(' ');
        }
        out.extend(word.chars().flat_map(char::to_lowercase));
    }
    out
}

/// An augmented event: a verb with its subject and object, anchored at the
/// verb's document token position.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Event {
    pub subject: String,
    pub verb: String,
    pub object: String,
    pub sentence_index: usize,
    pub token_index: usize,
    pub phrase: String,
}

impl Event {
    pub fn new(
        subject: &str,
        verb: &str,
        object: &str,
        sentence_index: usize,
        token_index: usize,
    ) -> Self {
        let phrase = normalize_phrase(&format!("{subject} {verb} {object}"));
        Event {
            subject: subject.trim().to_string(),
            verb: verb.trim().to_string(),
            object: object.trim().to_string(),
            sentence_index,
            token_index,
            phrase,
        }
    }

    /// An event known only by its phrase, as recovered from a serialized graph.
    pub fn from_phrase(phrase: &str, token_index: usize) -> Self {
        Event {
            subject: String::new(),
            verb: String::new(),
            object: String::new(),
            sentence_index: 0,
            token_index,
            phrase: normalize_phrase(phrase),
        }
    }
}

/// A directed temporal link between two events, identified by token index.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TemporalEdge {
    pub source: usize,
    pub target: usize,
    pub label: RelationLabel,
    pub origin: Origin,
    pub confidence: f64,
}

impl TemporalEdge {
    pub fn new(
        source: usize,
        target: usize,
        label: RelationLabel,
        origin: Origin,
        confidence: f64,
    ) -> Result<Self, GraphError> {
        if source == target {
            return Err(GraphError::SelfLoop(source));
        }
        if !(0.0..=1.0).contains(&confidence) {
            return Err(GraphError::Confidence(confidence));
        }
        let confidence = if origin == Origin::Rule {
            1.0
        } else {
            confidence
        };
        Ok(TemporalEdge {
            source,
            target,
            label,
            origin,
            confidence,
        })
    }

    /// A rule-origin edge, which always carries confidence 1.
    pub fn rule(source: usize, target: usize, label: RelationLabel) -> Result<Self, GraphError> {
        Self::new(source, target, label, Origin::Rule, 1.0)
    }

    /// The document-order sort key: (min endpoint, max endpoint, label, source).
    pub fn order_key(&self) -> (usize, usize, RelationLabel, usize) {
        (
            self.source.min(self.target),
            self.source.max(self.target),
            self.label,
            self.source,
        )
    }

    fn triple(&self) -> (usize, usize, RelationLabel) {
        (self.source, self.target, self.label)
    }
}

/// Rewrites inverse relations into their canonical direction.
///
/// `after(x, y)` becomes `before(y, x)`, `is_included(x, y)` becomes
/// `includes(y, x)` and `simultaneous` is oriented from the smaller token
/// index. Vague edges have no canonical form.
pub fn canonical_edge(e: &TemporalEdge) -> Result<TemporalEdge, GraphError> {
    let mut out = *e;
    match e.label {
        RelationLabel::Vague => return Err(GraphError::VagueEdge),
        RelationLabel::After | RelationLabel::IsIncluded => {
            out.source = e.target;
            out.target = e.source;
            out.label = e.label.inverse();
        }
        RelationLabel::Simultaneous if e.source > e.target => {
            out.source = e.target;
            out.target = e.source;
        }
        _ => {}
    }
    Ok(out)
}

/// Events and edges of one document or one community sub-document.
///
/// Events are kept in token order. Edges are kept in document order: sorted
/// by [`TemporalEdge::order_key`] for graphs built from documents, statement
/// order for graphs decoded from DOT.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "GraphRecord")]
pub struct TemporalGraph {
    pub doc_id: String,
    events: Vec<Event>,
    edges: Vec<TemporalEdge>,
}

/// Unvalidated serialized form; deserialization goes through
/// [`TemporalGraph::with_edge_order`].
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct GraphRecord {
    doc_id: String,
    events: Vec<Event>,
    edges: Vec<TemporalEdge>,
}

impl TryFrom<GraphRecord> for TemporalGraph {
    type Error = GraphError;

    fn try_from(r: GraphRecord) -> Result<Self, GraphError> {
        TemporalGraph::with_edge_order(r.doc_id, r.events, r.edges)
    }
}

impl TemporalGraph {
    /// Validates endpoints, drops duplicate `(source, target, label)` triples
    /// (the first occurrence wins) and sorts edges into document order.
    pub fn new(
        doc_id: impl Into<String>,
        events: Vec<Event>,
        edges: Vec<TemporalEdge>,
    ) -> Result<Self, GraphError> {
        let mut g = Self::with_edge_order(doc_id, events, edges)?;
        g.edges.sort_by_key(TemporalEdge::order_key);
        Ok(g)
    }

    /// As [`TemporalGraph::new`], but keeps the edges in the given order.
    pub fn with_edge_order(
        doc_id: impl Into<String>,
        mut events: Vec<Event>,
        edges: Vec<TemporalEdge>,
    ) -> Result<Self, GraphError> {
        events.sort_by_key(|e| e.token_index);
        for pair in events.windows(2) {
            if pair[0].token_index == pair[1].token_index {
                return Err(GraphError::DuplicateEvent(pair[0].token_index));
            }
        }
        let known: BTreeSet<usize> = events.iter().map(|e| e.token_index).collect();
        let mut seen = BTreeSet::new();
        let mut kept = Vec::with_capacity(edges.len());
        for edge in edges {
            for end in [edge.source, edge.target] {
                if !known.contains(&end) {
                    return Err(GraphError::MissingEndpoint(end));
                }
            }
            if edge.source == edge.target {
                return Err(GraphError::SelfLoop(edge.source));
            }
            if !(0.0..=1.0).contains(&edge.confidence) {
                return Err(GraphError::Confidence(edge.confidence));
            }
            if seen.insert(edge.triple()) {
                kept.push(edge);
            }
        }
        Ok(TemporalGraph {
            doc_id: doc_id.into(),
            events,
            edges: kept,
        })
    }

    pub fn empty(doc_id: impl Into<String>) -> Self {
        TemporalGraph {
            doc_id: doc_id.into(),
            events: Vec::new(),
            edges: Vec::new(),
        }
    }

    pub fn events(&self) -> &[Event] {
        &self.events
    }

    pub fn edges(&self) -> &[TemporalEdge] {
        &self.edges
    }

    pub fn event(&self, token_index: usize) -> Option<&Event> {
        self.events
            .binary_search_by_key(&token_index, |e| e.token_index)
            .ok()
            .map(|i| &self.events[i])
    }

    /// Phrase of the event at `token_index`. Panics if the index is unknown,
    /// which the construction invariant rules out for edge endpoints.
    pub fn phrase(&self, token_index: usize) -> &str {
        &self
            .event(token_index)
            .expect("edge endpoint is an event")
            .phrase
    }

    /// Events that are not an endpoint of any edge, in token order.
    pub fn isolated_events(&self) -> impl Iterator<Item = &Event> {
        let touched: BTreeSet<usize> = self
            .edges
            .iter()
            .flat_map(|e| [e.source, e.target])
            .collect();
        self.events
            .iter()
            .filter(move |e| !touched.contains(&e.token_index))
    }

    /// Set of normalized node phrases.
    pub fn phrase_set(&self) -> BTreeSet<String> {
        self.events.iter().map(|e| e.phrase.clone()).collect()
    }

    /// Multiset of `(source phrase, target phrase, label)` with labels as stored.
    pub fn phrase_edges(&self) -> BTreeMap<(String, String, RelationLabel), usize> {
        let mut out = BTreeMap::new();
        for e in &self.edges {
            let key = (
                self.phrase(e.source).to_string(),
                self.phrase(e.target).to_string(),
                e.label,
            );
            *out.entry(key).or_insert(0) += 1;
        }
        out
    }

    /// Merges events sharing a phrase into the earliest one, rewiring edges
    /// and dropping the self-loops and duplicates this creates.
    pub fn merge_duplicate_phrases(self) -> TemporalGraph {
        let mut first: BTreeMap<&str, usize> = BTreeMap::new();
        let mut remap: BTreeMap<usize, usize> = BTreeMap::new();
        for e in &self.events {
            let keep = *first.entry(e.phrase.as_str()).or_insert(e.token_index);
            remap.insert(e.token_index, keep);
        }
        let events: Vec<Event> = self
            .events
            .iter()
            .filter(|e| remap[&e.token_index] == e.token_index)
            .cloned()
            .collect();
        let edges: Vec<TemporalEdge> = self
            .edges
            .iter()
            .filter_map(|e| {
                let (s, t) = (remap[&e.source], remap[&e.target]);
                (s != t).then_some(TemporalEdge {
                    source: s,
                    target: t,
                    ..*e
                })
            })
            .collect();
        TemporalGraph::new(self.doc_id, events, edges).expect("remapped graph stays valid")
    }
}

/// Size statistics of one graph.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct GraphStats {
    pub node_count: usize,
    pub edge_count: usize,
    /// `|E| / |V|`, zero for an empty graph.
    pub degree_ratio: f64,
}

pub fn graph_stats(g: &TemporalGraph) -> GraphStats {
    let node_count = g.events.len();
    let edge_count = g.edges.len();
    let degree_ratio = if node_count == 0 {
        0.0
    } else {
        edge_count as f64 / node_count as f64
    };
    GraphStats {
        node_count,
        edge_count,
        degree_ratio,
    }
}

/// Arithmetic means of per-graph statistics.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct MeanStats {
    pub nodes: f64,
    pub edges: f64,
    pub degree_ratio: f64,
}

impl MeanStats {
    pub fn of<'a>(stats: impl IntoIterator<Item = &'a GraphStats>) -> MeanStats {
        let mut n = 0usize;
        let mut acc = MeanStats::default();
        for s in stats {
            n += 1;
            acc.nodes += s.node_count as f64;
            acc.edges += s.edge_count as f64;
            acc.degree_ratio += s.degree_ratio;
        }
        if n > 0 {
            acc.nodes /= n as f64;
            acc.edges /= n as f64;
            acc.degree_ratio /= n as f64;
        }
        acc
    }
}
