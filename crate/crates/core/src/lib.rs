//! Temporal event graphs: construction from annotated documents, a DOT
//! codec, community splitting, relation algebra and evaluation metrics.

pub mod algebra;
pub mod baseline;
pub mod communities;
pub mod corpus;
pub mod dot;
pub mod error;
pub mod graph;
pub mod metrics;
pub mod synth;

pub use algebra::{closure, reduction, CanonicalEdge, CanonicalEdgeSet};
pub use communities::{detect_communities, modularity, Detection, Partition, UndirectedAdjacency};
pub use error::{AlgebraError, CommunityError, CorpusError, DotError, EvalError, GraphError};
pub use graph::{
    canonical_edge, graph_stats, normalize_phrase, Event, GraphStats, MeanStats, Origin,
    RelationLabel, TemporalEdge, TemporalGraph,
};
