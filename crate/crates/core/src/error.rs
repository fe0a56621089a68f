use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GraphError {
    #[error("unknown relation label `{0}`")]
    UnknownLabel(String),
    #[error("self-loop on event at token {0}")]
    SelfLoop(usize),
    #[error("confidence {0} outside [0, 1]")]
    Confidence(f64),
    #[error("vague edges have no canonical form")]
    VagueEdge,
    #[error("edge endpoint {0} is not an event of the graph")]
    MissingEndpoint(usize),
    #[error("two events share token index {0}")]
    DuplicateEvent(usize),
}

/// Failure to decode a DOT document. Offsets are byte offsets into the input.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DotError {
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("unknown relation label `{label}` at byte {offset}")]
    UnknownLabel { offset: usize, label: String },
    #[error("self-loop on `{phrase}` at byte {offset}")]
    SelfLoop { offset: usize, phrase: String },
}

impl DotError {
    pub fn offset(&self) -> usize {
        match self {
            DotError::Syntax { offset, .. }
            | DotError::UnknownLabel { offset, .. }
            | DotError::SelfLoop { offset, .. } => *offset,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CommunityError {
    #[error("modularity is undefined for a graph without edges")]
    NoEdges,
    #[error("event at token {0} has no community")]
    Uncovered(usize),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AlgebraError {
    #[error("label `{0}` is not canonical")]
    NonCanonical(crate::graph::RelationLabel),
}

/// Errors raised while ingesting or transforming corpus records.
#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("line {line}: {message}")]
    Schema { line: usize, message: String },
    #[error("document `{doc_id}`: {message}")]
    Invalid { doc_id: String, message: String },
    #[error("empty corpus")]
    EmptyCorpus,
    #[error("split ratios must be non-negative and sum to 1, got {0:?}")]
    Ratios(Vec<f64>),
    #[error("config: {0}")]
    Config(String),
    #[error("per-position log-probabilities ({logprobs}) and mask ({mask}) differ in length")]
    LengthMismatch { logprobs: usize, mask: usize },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Error)]
pub enum EvalError {
    #[error("line {line}: {message}")]
    Schema { line: usize, message: String },
    #[error("duplicate id {0} in {1}")]
    DuplicateId(String, &'static str),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
