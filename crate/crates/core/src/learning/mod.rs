//! Learning a weight matrix from data: stepwise log-ratio selection,
//! neighborhood lasso selection, smooth-signal graph learning, and the
//! graph normal density used to simulate data on a known graph.

mod density;
mod neighborhood;
mod preprocess;
mod smooth;
mod stepwise;

pub use density::{log_density, log_kernel, sample_log_normal};
pub use neighborhood::{
    lasso, lasso_kkt_residual, lasso_lambda_max, lasso_objective, mb_lambda_max, mb_select,
    neighborhood_coefficients, LassoOptions,
};
pub use preprocess::{clr_rows, double_center, zero_replace, PreprocessedData};
pub use smooth::{
    pairwise_smoothness, smooth_graph_learn, smooth_graph_solve, smooth_kkt_residual, SmoothOptions,
    SmoothSolution,
};
pub use stepwise::{
    explained_variance_trace, pca_cumulative_variance, stepwise_select, LearnedEdge, LearnedGraph,
    StepwiseOptions,
};
