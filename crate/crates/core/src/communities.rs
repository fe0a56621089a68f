//! Modularity and greedy agglomerative community detection over the
//! undirected view of a temporal graph.
//!
//! Edge labels and directions are ignored: two events are adjacent when any
//! temporal link joins them. Gains are computed on integers scaled by
//! `(2m)^2`, so ties are exact and the tie-break rule is deterministic.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::CommunityError;
use crate::graph::TemporalGraph;

/// Symmetric 0/1 adjacency over events keyed by token index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UndirectedAdjacency {
    nodes: Vec<usize>,
    neighbors: BTreeMap<usize, BTreeSet<usize>>,
    edge_count: usize,
}

impl UndirectedAdjacency {
    /// Builds the adjacency over `nodes`. Parallel pairs, reversed pairs and
    /// self-pairs collapse; endpoints not listed in `nodes` are added.
    pub fn from_pairs(
        nodes: impl IntoIterator<Item = usize>,
        pairs: impl IntoIterator<Item = (usize, usize)>,
    ) -> Self {
        let mut neighbors: BTreeMap<usize, BTreeSet<usize>> =
            nodes.into_iter().map(|n| (n, BTreeSet::new())).collect();
        for (a, b) in pairs {
            neighbors.entry(a).or_default();
            neighbors.entry(b).or_default();
            if a != b {
                neighbors.get_mut(&a).expect("inserted").insert(b);
                neighbors.get_mut(&b).expect("inserted").insert(a);
            }
        }
        let edge_count = neighbors.values().map(BTreeSet::len).sum::<usize>() / 2;
        UndirectedAdjacency {
            nodes: neighbors.keys().copied().collect(),
            neighbors,
            edge_count,
        }
    }

    pub fn from_graph(g: &TemporalGraph) -> Self {
        Self::from_pairs(
            g.events().iter().map(|e| e.token_index),
            g.edges().iter().map(|e| (e.source, e.target)),
        )
    }

    /// Node ids in ascending order.
    pub fn nodes(&self) -> &[usize] {
        &self.nodes
    }

    /// Number of undirected edges, `m`.
    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn is_adjacent(&self, a: usize, b: usize) -> bool {
        self.neighbors.get(&a).is_some_and(|n| n.contains(&b))
    }

    /// Popularity `p(i)`: the number of events linked to `i`.
    pub fn degree(&self, node: usize) -> usize {
        self.neighbors.get(&node).map_or(0, BTreeSet::len)
    }

    pub fn neighbors(&self, node: usize) -> impl Iterator<Item = usize> + '_ {
        self.neighbors.get(&node).into_iter().flatten().copied()
    }
}

/// Assignment of every event to a community id.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Partition {
    pub assignment: BTreeMap<usize, usize>,
}

impl Partition {
    pub fn community_of(&self, node: usize) -> Option<usize> {
        self.assignment.get(&node).copied()
    }

    /// Every node in its own community.
    pub fn singletons(nodes: &[usize]) -> Self {
        Partition {
            assignment: nodes.iter().enumerate().map(|(i, &n)| (n, i)).collect(),
        }
    }

    /// Everything in community 0.
    pub fn single(nodes: &[usize]) -> Self {
        Partition {
            assignment: nodes.iter().map(|&n| (n, 0)).collect(),
        }
    }

    /// Members grouped by community, each group sorted, groups ordered by
    /// their smallest member.
    pub fn groups(&self) -> Vec<Vec<usize>> {
        let mut by_id: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (&node, &c) in &self.assignment {
            by_id.entry(c).or_default().push(node);
        }
        let mut groups: Vec<Vec<usize>> = by_id.into_values().collect();
        groups.sort_by_key(|g| g[0]);
        groups
    }

    /// Renumbers community ids to `0..k` in order of smallest member.
    pub fn relabeled(&self) -> Partition {
        let mut assignment = BTreeMap::new();
        for (id, group) in self.groups().into_iter().enumerate() {
            for n in group {
                assignment.insert(n, id);
            }
        }
        Partition { assignment }
    }
}

/// Newman modularity `Q` of a partition.
///
/// Evaluated per community as `L_c / m - (D_c / 2m)^2`, where `L_c` counts
/// intra-community edges and `D_c` sums member degrees.
pub fn modularity(adj: &UndirectedAdjacency, part: &Partition) -> Result<f64, CommunityError> {
    let m = adj.edge_count();
    if m == 0 {
        return Err(CommunityError::NoEdges);
    }
    let mut intra: BTreeMap<usize, usize> = BTreeMap::new();
    let mut degree: BTreeMap<usize, usize> = BTreeMap::new();
    for &node in adj.nodes() {
        let c = part
            .community_of(node)
            .ok_or(CommunityError::Uncovered(node))?;
        *degree.entry(c).or_insert(0) += adj.degree(node);
        for other in adj.neighbors(node).filter(|&o| o > node) {
            if part.community_of(other) == Some(c) {
                *intra.entry(c).or_insert(0) += 1;
            }
        }
    }
    let two_m = 2.0 * m as f64;
    Ok(degree
        .iter()
        .map(|(c, &d)| {
            let l = intra.get(c).copied().unwrap_or(0) as f64;
            l / m as f64 - (d as f64 / two_m).powi(2)
        })
        .sum())
}

/// Result of a greedy agglomeration run.
#[derive(Clone, Debug, PartialEq)]
pub struct Detection {
    pub partition: Partition,
    /// Modularity of `partition`, accumulated from the merge gains.
    pub modularity: f64,
    pub merges: usize,
}

struct Community {
    members: Vec<usize>,
    degree: i64,
}

/// Greedy modularity agglomeration.
///
/// Starts from singletons and repeatedly merges the pair of communities with
/// the largest gain until no merge has positive gain. Ties break toward the
/// pair whose smaller community-minimum is smallest, then whose larger
/// community-minimum is smallest.
pub fn detect_communities(adj: &UndirectedAdjacency) -> Result<Detection, CommunityError> {
    let m = adj.edge_count();
    if m == 0 {
        return Err(CommunityError::NoEdges);
    }
    let two_m = 2 * m as i64;

    // Communities are keyed by their smallest member, which stays stable
    // because a merge keeps the smaller key.
    let mut comms: BTreeMap<usize, Community> = adj
        .nodes()
        .iter()
        .map(|&n| {
            (
                n,
                Community {
                    members: vec![n],
                    degree: adj.degree(n) as i64,
                },
            )
        })
        .collect();
    // links[a][b] = number of undirected edges between communities a and b.
    let mut links: BTreeMap<usize, BTreeMap<usize, i64>> = BTreeMap::new();
    for &n in adj.nodes() {
        for o in adj.neighbors(n) {
            *links.entry(n).or_default().entry(o).or_insert(0) += 1;
        }
    }

    // Q * (2m)^2 for the singleton partition.
    let mut q_scaled: i64 = -comms.values().map(|c| c.degree * c.degree).sum::<i64>();
    let mut merges = 0;
    loop {
        // Gain * (2m)^2 = 2 * (2m * l_ab - d_a * d_b). Only linked pairs can
        // have a positive gain.
        let mut best: Option<(i64, usize, usize)> = None;
        for (&a, row) in &links {
            for (&b, &l) in row.range(a + 1..) {
                let gain = 2 * (two_m * l - comms[&a].degree * comms[&b].degree);
                let better = match best {
                    None => true,
                    Some((g, ba, bb)) => gain > g || (gain == g && (a, b) < (ba, bb)),
                };
                if better {
                    best = Some((gain, a, b));
                }
            }
        }
        let Some((gain, keep, gone)) = best.filter(|&(g, _, _)| g > 0) else {
            break;
        };

        let absorbed = comms.remove(&gone).expect("live community");
        let target = comms.get_mut(&keep).expect("live community");
        target.members.extend(absorbed.members);
        target.degree += absorbed.degree;

        let gone_row = links.remove(&gone).unwrap_or_default();
        for (other, l) in gone_row {
            if let Some(row) = links.get_mut(&other) {
                row.remove(&gone);
            }
            if other == keep {
                continue;
            }
            *links.entry(keep).or_default().entry(other).or_insert(0) += l;
            *links.entry(other).or_default().entry(keep).or_insert(0) += l;
        }
        if links.get(&keep).is_some_and(BTreeMap::is_empty) {
            links.remove(&keep);
        }
        q_scaled += gain;
        merges += 1;
    }

    let mut assignment = BTreeMap::new();
    for (id, c) in comms.values().enumerate() {
        for &n in &c.members {
            assignment.insert(n, id);
        }
    }
    Ok(Detection {
        partition: Partition { assignment },
        modularity: q_scaled as f64 / (two_m * two_m) as f64,
        merges,
    })
}

/// One directed subgraph per non-singleton community, containing only
/// intra-community edges, ordered by smallest member token index.
pub fn induced_subgraphs(g: &TemporalGraph, part: &Partition) -> Vec<TemporalGraph> {
    part.groups()
        .into_iter()
        .filter(|members| members.len() > 1)
        .map(|members| {
            let set: BTreeSet<usize> = members.iter().copied().collect();
            let events = g
                .events()
                .iter()
                .filter(|e| set.contains(&e.token_index))
                .cloned()
                .collect();
            let edges = g
                .edges()
                .iter()
                .filter(|e| set.contains(&e.source) && set.contains(&e.target))
                .copied()
                .collect();
            TemporalGraph::with_edge_order(g.doc_id.clone(), events, edges)
                .expect("induced subgraph of a valid graph")
        })
        .collect()
}
