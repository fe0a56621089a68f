//! String, structure and semantic metrics for generated events and graphs.

mod eval;
mod graph;
mod text;

pub use eval::{
    evaluate_task1, evaluate_task2, missing_task2_ids, score_task2_example, Task1Aggregate,
    Task1ExampleScores, Task1Prediction, Task1Report, Task2Aggregate, Task2ExampleScores,
    Task2Prediction, Task2Report,
};
pub use graph::{
    ged, isomorphic, isomorphic_with_budget, node_scores, temporal_awareness, IsoOutcome, Prf,
    EXACT_ISO_NODES, ISO_STEP_BUDGET,
};
pub use text::{bleu, rouge_l, task1_accuracy};
