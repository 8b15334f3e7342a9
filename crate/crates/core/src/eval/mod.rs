//! Metrics, aggregation, the comparison grid and report emitters.

pub mod grid;
pub mod metrics;
pub mod report;

pub use grid::{
    mean_accuracies, prepare_split, run_grid, CellOutcome, GridCell, GridOptions, GridReport, MeanCell, PreparedSplit,
};
pub use metrics::{
    aggregate, class_accuracy, class_metrics, overall_accuracy, Averages, ClassMetrics, ConfusionMatrix, EvalReport,
};
