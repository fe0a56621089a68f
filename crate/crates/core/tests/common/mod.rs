//! Independent reference implementations used as test oracles. None of
//! these call into the algorithms they check.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::sync::OnceLock;

use rand::seq::SliceRandom;
use rand::Rng;
use tgkit_core::corpus::{AnnotatedDocument, PruneConfig};
use tgkit_core::{Event, Origin, RelationLabel, TemporalEdge, TemporalGraph};

use RelationLabel::*;

pub const LABELS: [RelationLabel; 5] = [Before, After, Includes, IsIncluded, Simultaneous];

// ---------------------------------------------------------------- intervals

/// Closed interval `[start, end]` with `start <= end`.
pub type Interval = (u32, u32);

/// Relation of `a` to `b`; `None` for partial overlap.
pub fn interval_relation(a: Interval, b: Interval) -> Option<RelationLabel> {
    if a == b {
        Some(Simultaneous)
    } else if a.1 < b.0 {
        Some(Before)
    } else if b.1 < a.0 {
        Some(After)
    } else if a.0 <= b.0 && b.1 <= a.1 {
        Some(Includes)
    } else if b.0 <= a.0 && a.1 <= b.1 {
        Some(IsIncluded)
    } else {
        None
    }
}

fn all_intervals(points: u32) -> Vec<Interval> {
    (0..points)
        .flat_map(|s| (s..points).map(move |e| (s, e)))
        .collect()
}

/// Composition by enumeration: the relation of `a` to `c` over every
/// interval triple with `rel(a,b) = r1` and `rel(b,c) = r2`, if unique.
pub fn enumerated_compose(r1: RelationLabel, r2: RelationLabel) -> Option<RelationLabel> {
    static TABLE: OnceLock<BTreeMap<(RelationLabel, RelationLabel), Option<RelationLabel>>> =
        OnceLock::new();
    let table = TABLE.get_or_init(|| {
        let mut t = BTreeMap::new();
        for a in LABELS {
            for b in LABELS {
                t.insert((a, b), enumerate_compose(a, b));
            }
        }
        t
    });
    table[&(r1, r2)]
}

fn enumerate_compose(r1: RelationLabel, r2: RelationLabel) -> Option<RelationLabel> {
    let ivs = all_intervals(7);
    let mut seen: BTreeSet<Option<RelationLabel>> = BTreeSet::new();
    for &a in &ivs {
        for &b in &ivs {
            if interval_relation(a, b) != Some(r1) {
                continue;
            }
            for &c in &ivs {
                if interval_relation(b, c) == Some(r2) {
                    seen.insert(interval_relation(a, c));
                }
            }
        }
    }
    match seen.len() {
        1 => seen.into_iter().next().unwrap(),
        _ => None,
    }
}

fn inverse(l: RelationLabel) -> RelationLabel {
    match l {
        Before => After,
        After => Before,
        Includes => IsIncluded,
        IsIncluded => Includes,
        other => other,
    }
}

// ---------------------------------------------------------------- edges

pub type Triple = (String, String, RelationLabel);

/// Canonical form: forward labels only, simultaneous ordered by phrase.
pub fn canon(s: &str, t: &str, l: RelationLabel) -> Triple {
    match l {
        After | IsIncluded => (t.into(), s.into(), inverse(l)),
        Simultaneous if s > t => (t.into(), s.into(), l),
        _ => (s.into(), t.into(), l),
    }
}

/// Random consistent edge set over at most `max_events` events, labels
/// read off random intervals, written in a random direction.
pub fn consistent_triples(rng: &mut impl Rng, max_events: usize) -> Vec<Triple> {
    let n = rng.gen_range(2..=max_events);
    let ivs: Vec<Interval> = (0..n)
        .map(|_| {
            let s = rng.gen_range(0..8);
            (s, s + rng.gen_range(0..4))
        })
        .collect();
    let density = rng.gen_range(0.2..1.0);
    let mut out = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if !rng.gen_bool(density) {
                continue;
            }
            let (a, b) = if rng.gen_bool(0.5) { (i, j) } else { (j, i) };
            if let Some(l) = interval_relation(ivs[a], ivs[b]) {
                out.push((format!("e{a}"), format!("e{b}"), l));
            }
        }
    }
    out
}

/// Fixpoint of pairwise composition over the directed relation map.
pub fn naive_closure(triples: &[Triple]) -> BTreeSet<Triple> {
    let mut rel: BTreeMap<(String, String), RelationLabel> = BTreeMap::new();
    for (s, t, l) in triples {
        rel.insert((s.clone(), t.clone()), *l);
        rel.insert((t.clone(), s.clone()), inverse(*l));
    }
    loop {
        let mut added = Vec::new();
        for ((x, y), &r1) in &rel {
            for ((y2, z), &r2) in &rel {
                if y != y2 || x == z || rel.contains_key(&(x.clone(), z.clone())) {
                    continue;
                }
                if let Some(r) = enumerated_compose(r1, r2) {
                    added.push((x.clone(), z.clone(), r));
                }
            }
        }
        if added.is_empty() {
            break;
        }
        for (x, z, r) in added {
            rel.entry((z.clone(), x.clone())).or_insert(inverse(r));
            rel.entry((x, z)).or_insert(r);
        }
    }
    rel.into_iter()
        .map(|((s, t), l)| canon(&s, &t, l))
        .collect()
}

// ---------------------------------------------------------------- graphs

pub fn graph_from(phrases: &[String], edges: &[(usize, usize, RelationLabel)]) -> TemporalGraph {
    let events = phrases
        .iter()
        .enumerate()
        .map(|(i, p)| Event::from_phrase(p, i))
        .collect();
    let edges = edges
        .iter()
        .map(|&(s, t, l)| TemporalEdge::rule(s, t, l).unwrap())
        .collect();
    TemporalGraph::new("g", events, edges).unwrap()
}

/// Random graph with distinct phrases drawn from `pool`, non-vague labels
/// and at most `max_edges` edges, no two on the same ordered pair.
pub fn random_graph(
    rng: &mut impl Rng,
    max_nodes: usize,
    max_edges: usize,
    pool: &[String],
) -> TemporalGraph {
    let n = rng.gen_range(1..=max_nodes.min(pool.len()));
    let phrases: Vec<String> = pool.choose_multiple(rng, n).cloned().collect();
    let mut pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|s| (0..n).filter(move |&t| t != s).map(move |t| (s, t)))
        .collect();
    pairs.shuffle(rng);
    let k = rng.gen_range(0..=max_edges.min(pairs.len()));
    let edges: Vec<_> = pairs[..k]
        .iter()
        .map(|&(s, t)| (s, t, LABELS[rng.gen_range(0..LABELS.len())]))
        .collect();
    graph_from(&phrases, &edges)
}

pub fn phrase_pool(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("event {i}")).collect()
}

/// Phrase-level view: node phrases and canonical edge triples.
pub fn phrase_view(g: &TemporalGraph) -> (BTreeSet<String>, BTreeSet<Triple>) {
    let phrase = |tok: usize| {
        g.events()
            .iter()
            .find(|e| e.token_index == tok)
            .unwrap()
            .phrase
            .clone()
    };
    let nodes = g.events().iter().map(|e| e.phrase.clone()).collect();
    let edges = g
        .edges()
        .iter()
        .map(|e| canon(&phrase(e.source), &phrase(e.target), e.label))
        .collect();
    (nodes, edges)
}

/// Shortest add/remove edit script by breadth-first search. A node can be
/// removed only when isolated and an edge added only between present nodes.
pub fn ged_bfs(a: &TemporalGraph, b: &TemporalGraph) -> usize {
    let (na, ea) = phrase_view(a);
    let (nb, eb) = phrase_view(b);
    let nodes: Vec<String> = na.union(&nb).cloned().collect();
    let edges: Vec<Triple> = ea.union(&eb).cloned().collect();
    let node_ix = |p: &str| nodes.iter().position(|n| n == p).unwrap();
    let ends: Vec<(usize, usize)> = edges
        .iter()
        .map(|(s, t, _)| (node_ix(s), node_ix(t)))
        .collect();
    let encode = |ns: &BTreeSet<String>, es: &BTreeSet<Triple>| -> u64 {
        let mut m = 0u64;
        for (i, n) in nodes.iter().enumerate() {
            if ns.contains(n) {
                m |= 1 << i;
            }
        }
        for (i, e) in edges.iter().enumerate() {
            if es.contains(e) {
                m |= 1 << (nodes.len() + i);
            }
        }
        m
    };
    let (start, goal) = (encode(&na, &ea), encode(&nb, &eb));
    let nn = nodes.len();
    let mut dist: BTreeMap<u64, usize> = BTreeMap::from([(start, 0)]);
    let mut queue = VecDeque::from([start]);
    while let Some(s) = queue.pop_front() {
        let d = dist[&s];
        if s == goal {
            return d;
        }
        let mut next = Vec::new();
        for i in 0..nn {
            let bit = 1u64 << i;
            if s & bit == 0 {
                next.push(s | bit);
            } else {
                let incident = ends
                    .iter()
                    .enumerate()
                    .any(|(k, &(x, y))| s & (1 << (nn + k)) != 0 && (x == i || y == i));
                if !incident {
                    next.push(s & !bit);
                }
            }
        }
        for (k, &(x, y)) in ends.iter().enumerate() {
            let bit = 1u64 << (nn + k);
            if s & bit != 0 {
                next.push(s & !bit);
            } else if s & (1 << x) != 0 && s & (1 << y) != 0 {
                next.push(s | bit);
            }
        }
        for t in next {
            if let std::collections::btree_map::Entry::Vacant(v) = dist.entry(t) {
                v.insert(d + 1);
                queue.push_back(t);
            }
        }
    }
    unreachable!("goal is always reachable")
}

fn topology(g: &TemporalGraph) -> (usize, BTreeSet<(usize, usize)>) {
    let ix = |tok: usize| {
        g.events()
            .iter()
            .position(|e| e.token_index == tok)
            .unwrap()
    };
    let edges = g
        .edges()
        .iter()
        .map(|e| (ix(e.source), ix(e.target)))
        .collect();
    (g.events().len(), edges)
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

/// Unlabeled directed isomorphism by trying every bijection.
pub fn iso_by_permutation(a: &TemporalGraph, b: &TemporalGraph) -> bool {
    let (n, ea) = topology(a);
    let (m, eb) = topology(b);
    if n != m || ea.len() != eb.len() {
        return false;
    }
    permutations(n)
        .into_iter()
        .any(|p| ea.iter().all(|&(s, t)| eb.contains(&(p[s], p[t]))))
}

/// The same graph with phrases renamed and event order shuffled.
pub fn permuted_copy(rng: &mut impl Rng, g: &TemporalGraph) -> TemporalGraph {
    let n = g.events().len();
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    let phrases: Vec<String> = (0..n).map(|i| format!("renamed {i}")).collect();
    let (_, edges) = topology(g);
    let labels: Vec<RelationLabel> = g.edges().iter().map(|e| e.label).collect();
    let edges: Vec<_> = edges
        .iter()
        .zip(labels)
        .map(|(&(s, t), l)| (perm[s], perm[t], l))
        .collect();
    graph_from(&phrases, &edges)
}

// ---------------------------------------------------------------- modularity

/// `Q = 1/(2m) Σ_ij [A_ij − k_i k_j / 2m] δ(c_i, c_j)` over an undirected
/// simple graph given as an adjacency matrix.
pub fn brute_modularity(adj: &[Vec<bool>], community: &[usize]) -> f64 {
    let n = adj.len();
    let deg: Vec<f64> = adj
        .iter()
        .map(|r| r.iter().filter(|&&x| x).count() as f64)
        .collect();
    let two_m: f64 = deg.iter().sum();
    let mut q = 0.0;
    for i in 0..n {
        for j in 0..n {
            if community[i] == community[j] {
                let a = if adj[i][j] { 1.0 } else { 0.0 };
                q += a - deg[i] * deg[j] / two_m;
            }
        }
    }
    q / two_m
}

/// Every set partition of `0..n` as restricted growth strings.
pub fn set_partitions(n: usize) -> Vec<Vec<usize>> {
    fn go(i: usize, n: usize, cur: &mut Vec<usize>, max: usize, out: &mut Vec<Vec<usize>>) {
        if i == n {
            out.push(cur.clone());
            return;
        }
        for c in 0..=max + 1 {
            cur.push(c);
            go(i + 1, n, cur, max.max(c), out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if n == 0 {
        return vec![vec![]];
    }
    let mut cur = vec![0];
    go(1, n, &mut cur, 0, &mut out);
    out
}

pub fn adjacency_matrix(n: usize, pairs: &[(usize, usize)]) -> Vec<Vec<bool>> {
    let mut m = vec![vec![false; n]; n];
    for &(a, b) in pairs {
        m[a][b] = true;
        m[b][a] = true;
    }
    m
}

// ---------------------------------------------------------------- corpus

pub fn phrase_of(subject: &str, verb: &str, object: &str) -> String {
    format!("{subject} {verb} {object}")
        .split_whitespace()
        .map(str::to_lowercase)
        .collect::<Vec<_>>()
        .join(" ")
}

/// Pruning recomputed from the rules: returns the surviving events' tokens
/// and the surviving links.
pub fn recount_prune(
    doc: &AnnotatedDocument,
    cfg: &PruneConfig,
) -> (BTreeSet<usize>, Vec<(usize, usize, RelationLabel)>) {
    let kept: BTreeSet<usize> = doc
        .events
        .iter()
        .filter(|e| !cfg.banned_verbs.contains(&e.verb.trim().to_lowercase()))
        .filter(|e| {
            let ok = |s: &Option<String>| s.as_deref().is_some_and(|s| !s.trim().is_empty());
            ok(&e.subject) && ok(&e.object)
        })
        .map(|e| e.token_index)
        .collect();
    let links = doc
        .tlinks
        .iter()
        .filter(|l| kept.contains(&l.source) && kept.contains(&l.target))
        .filter(|l| l.label != Vague)
        .filter(|l| !(l.origin == Origin::Statistical && l.confidence < 0.5))
        .map(|l| (l.source, l.target, l.label))
        .collect();
    (kept, links)
}
