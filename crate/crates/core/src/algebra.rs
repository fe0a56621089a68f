//! Composition, transitive closure and transitive reduction over canonical
//! temporal edge sets.
//!
//! Relations are read as interval relations: `before` is strict precedence,
//! `includes` is containment and `simultaneous` is equality. Only
//! compositions with a single possible outcome are used, so the closure is
//! conservative.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::AlgebraError;
use crate::graph::{normalize_phrase, RelationLabel, TemporalGraph};

use RelationLabel::*;

/// Composition of two directed relations: given `a r1 b` and `b r2 c`,
/// the relation between `a` and `c` if it is fully determined.
pub(crate) fn compose_directed(r1: RelationLabel, r2: RelationLabel) -> Option<RelationLabel> {
    match (r1, r2) {
        (Vague, _) | (_, Vague) => None,
        (Simultaneous, r) | (r, Simultaneous) => Some(r),
        (Before, Before) | (Before, Includes) | (IsIncluded, Before) => Some(Before),
        (After, After) | (After, Includes) | (IsIncluded, After) => Some(After),
        (Includes, Includes) => Some(Includes),
        (IsIncluded, IsIncluded) => Some(IsIncluded),
        _ => None,
    }
}

/// Composition table over canonical labels.
pub fn compose(
    r1: RelationLabel,
    r2: RelationLabel,
) -> Result<Option<RelationLabel>, AlgebraError> {
    for r in [r1, r2] {
        if !r.is_canonical() {
            return Err(AlgebraError::NonCanonical(r));
        }
    }
    Ok(compose_directed(r1, r2))
}

/// A canonical edge between two normalized phrases.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct CanonicalEdge {
    pub source: String,
    pub target: String,
    pub label: RelationLabel,
}

impl CanonicalEdge {
    /// Canonicalizes a phrase-level edge. Returns `None` for vague labels and
    /// for edges whose endpoints normalize to the same phrase.
    pub fn new(source: &str, target: &str, label: RelationLabel) -> Option<CanonicalEdge> {
        let (s, t) = (normalize_phrase(source), normalize_phrase(target));
        if s == t {
            return None;
        }
        let (source, target, label) = match label {
            Vague => return None,
            After | IsIncluded => (t, s, label.inverse()),
            Simultaneous if s > t => (t, s, label),
            _ => (s, t, label),
        };
        Some(CanonicalEdge {
            source,
            target,
            label,
        })
    }

    fn pair(&self) -> (&str, &str) {
        if self.source <= self.target {
            (&self.source, &self.target)
        } else {
            (&self.target, &self.source)
        }
    }
}

/// A consistent set of canonical edges: no unordered pair of phrases carries
/// more than one relation.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CanonicalEdgeSet {
    edges: BTreeSet<CanonicalEdge>,
}

/// A canonical edge set plus the phrase pairs dropped because they carried
/// conflicting relations.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Canonicalized {
    pub set: CanonicalEdgeSet,
    pub conflicts: Vec<(String, String)>,
}

impl CanonicalEdgeSet {
    /// Canonicalizes phrase-level triples, dropping vague edges, self-loops
    /// and every pair asserted with more than one relation.
    pub fn from_triples<'a>(
        triples: impl IntoIterator<Item = (&'a str, &'a str, RelationLabel)>,
    ) -> Canonicalized {
        let mut by_pair: BTreeMap<(String, String), BTreeSet<CanonicalEdge>> = BTreeMap::new();
        for (s, t, l) in triples {
            if let Some(e) = CanonicalEdge::new(s, t, l) {
                let (a, b) = e.pair();
                by_pair
                    .entry((a.to_string(), b.to_string()))
                    .or_default()
                    .insert(e);
            }
        }
        let mut out = Canonicalized::default();
        for (pair, edges) in by_pair {
            if edges.len() == 1 {
                out.set.edges.extend(edges);
            } else {
                out.conflicts.push(pair);
            }
        }
        out
    }

    pub fn from_graph(g: &TemporalGraph) -> Canonicalized {
        Self::from_triples(
            g.edges()
                .iter()
                .map(|e| (g.phrase(e.source), g.phrase(e.target), e.label)),
        )
    }

    pub fn iter(&self) -> impl Iterator<Item = &CanonicalEdge> {
        self.edges.iter()
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn contains(&self, e: &CanonicalEdge) -> bool {
        self.edges.contains(e)
    }

    pub fn is_subset(&self, other: &CanonicalEdgeSet) -> bool {
        self.edges.is_subset(&other.edges)
    }

    pub fn intersection_len(&self, other: &CanonicalEdgeSet) -> usize {
        self.edges.intersection(&other.edges).count()
    }

    fn without(&self, e: &CanonicalEdge) -> CanonicalEdgeSet {
        let mut edges = self.edges.clone();
        edges.remove(e);
        CanonicalEdgeSet { edges }
    }
}

impl FromIterator<CanonicalEdge> for CanonicalEdgeSet {
    /// Collects edges without a consistency check.
    fn from_iter<I: IntoIterator<Item = CanonicalEdge>>(iter: I) -> Self {
        CanonicalEdgeSet {
            edges: iter.into_iter().collect(),
        }
    }
}

/// Closure output with the pairs whose inferred relations disagreed.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ClosureReport {
    pub closure: CanonicalEdgeSet,
    pub conflicts: Vec<(String, String)>,
}

/// Dense relation store over interned phrases: `rel[a][b]` is the directed
/// label from `a` to `b`, stored in both directions.
struct RelationStore {
    phrases: Vec<String>,
    rel: Vec<BTreeMap<usize, RelationLabel>>,
}

impl RelationStore {
    fn new(set: &CanonicalEdgeSet) -> Self {
        let phrases: Vec<String> = set
            .iter()
            .flat_map(|e| [e.source.clone(), e.target.clone()])
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let index = |p: &str| {
            phrases
                .binary_search_by(|x| x.as_str().cmp(p))
                .expect("interned")
        };
        let mut rel = vec![BTreeMap::new(); phrases.len()];
        for e in set.iter() {
            let (s, t) = (index(&e.source), index(&e.target));
            rel[s].insert(t, e.label);
            rel[t].insert(s, e.label.inverse());
        }
        RelationStore { phrases, rel }
    }

    fn canonical(&self) -> CanonicalEdgeSet {
        let mut edges = BTreeSet::new();
        for (a, row) in self.rel.iter().enumerate() {
            for (&b, &l) in row.range(a + 1..) {
                edges.insert(
                    CanonicalEdge::new(&self.phrases[a], &self.phrases[b], l)
                        .expect("stored relations are canonicalizable"),
                );
            }
        }
        CanonicalEdgeSet { edges }
    }
}

/// Least fixpoint of adding composition-implied edges, with a report of
/// pairs left out because inferences disagreed.
///
/// Existing edges take precedence over inferences. A pair that receives two
/// different inferred relations in the same round is never added.
pub fn closure_with_report(set: &CanonicalEdgeSet) -> ClosureReport {
    let mut store = RelationStore::new(set);
    let mut blocked: BTreeSet<(usize, usize)> = BTreeSet::new();
    let mut frontier: Vec<(usize, usize)> = store
        .rel
        .iter()
        .enumerate()
        .flat_map(|(a, row)| row.range(a + 1..).map(move |(&b, _)| (a, b)))
        .collect();

    while !frontier.is_empty() {
        // Candidates keyed by ordered pair (x < y) with the label from x to y.
        let mut candidates: BTreeMap<(usize, usize), BTreeSet<RelationLabel>> = BTreeMap::new();
        let mut offer = |x: usize, y: usize, l: RelationLabel| {
            if x == y {
                return;
            }
            let (key, label) = if x < y {
                ((x, y), l)
            } else {
                ((y, x), l.inverse())
            };
            candidates.entry(key).or_default().insert(label);
        };
        for &(a, b) in &frontier {
            let ab = store.rel[a][&b];
            for (&c, &bc) in &store.rel[b] {
                if let Some(l) = compose_directed(ab, bc) {
                    offer(a, c, l);
                }
            }
            for (&c, &ca_rev) in &store.rel[a] {
                // ca_rev is a -> c; we need c -> a.
                if let Some(l) = compose_directed(ca_rev.inverse(), ab) {
                    offer(c, b, l);
                }
            }
        }

        let mut next = Vec::new();
        for ((x, y), labels) in candidates {
            if store.rel[x].contains_key(&y) || blocked.contains(&(x, y)) {
                continue;
            }
            if labels.len() == 1 {
                let l = *labels.iter().next().expect("one label");
                store.rel[x].insert(y, l);
                store.rel[y].insert(x, l.inverse());
                next.push((x, y));
            } else {
                blocked.insert((x, y));
            }
        }
        frontier = next;
    }

    ClosureReport {
        closure: store.canonical(),
        conflicts: blocked
            .into_iter()
            .map(|(x, y)| (store.phrases[x].clone(), store.phrases[y].clone()))
            .collect(),
    }
}

/// Temporal transitive closure `E+`.
pub fn closure(set: &CanonicalEdgeSet) -> CanonicalEdgeSet {
    closure_with_report(set).closure
}

/// Transitive reduction `E-`.
///
/// Edges are visited in lexicographic order; an edge is dropped when the
/// remaining edges still close to the same set.
pub fn reduction(set: &CanonicalEdgeSet) -> CanonicalEdgeSet {
    let target = closure(set);
    let mut kept = set.clone();
    for e in set.iter() {
        let trial = kept.without(e);
        if closure(&trial) == target {
            kept = trial;
        }
    }
    kept
}
