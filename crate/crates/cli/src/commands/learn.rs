use std::fs;
use std::io::Write;

use gcoda::io::{format_number, write_learned_graph};
use gcoda::learning::{
    explained_variance_trace, mb_select, pca_cumulative_variance, smooth_graph_learn, stepwise_select, LearnedEdge,
    StepwiseOptions,
};
use gcoda::{LearnedGraph, PreprocessedData, WeightMatrix};
use serde::{Deserialize, Serialize};

use super::load_data;
use crate::cli::LearnArgs;
use crate::error::{CliError, Context, Result};
use crate::output::Outputs;

#[derive(Deserialize, Serialize, Debug, Clone, Copy, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Stepwise,
    Mb,
    Smooth,
}

/// Method configuration read from JSON.
#[derive(Deserialize, Serialize, Debug, Clone)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct LearnConfig {
    pub method: Method,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_edges: Option<usize>,
    #[serde(rename = "stopR2", skip_serializing_if = "Option::is_none")]
    pub stop_r2: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta: Option<f64>,
}

impl LearnConfig {
    fn require(&self, name: &str, value: Option<f64>) -> Result<f64> {
        value.ok_or_else(|| {
            CliError::validation(format!("method {:?} needs `{name}` in the config", self.method).to_lowercase())
        })
    }
}

#[derive(Serialize)]
struct Echo<'a> {
    #[serde(flatten)]
    args: &'a LearnArgs,
    method: &'a LearnConfig,
}

/// Orders the edges of a weight matrix by decreasing weight (ties by pair)
/// and attaches the cumulative R² of each prefix.
fn ranked_graph(data: &PreprocessedData, w: &WeightMatrix) -> LearnedGraph {
    let mut edges = w.edges();
    edges.sort_by(|a, b| b.2.total_cmp(&a.2).then((a.0, a.1).cmp(&(b.0, b.1))));
    let pairs: Vec<(usize, usize)> = edges.iter().map(|e| (e.0, e.1)).collect();
    let r2 = explained_variance_trace(data.z(), &pairs);
    let mut best = 0.0f64;
    let edges = edges
        .iter()
        .zip(r2)
        .map(|(&(i, j, weight), r)| {
            best = best.max(r);
            LearnedEdge { i, j, weight, r2: best }
        })
        .collect();
    LearnedGraph::new(w.dim(), edges)
}

fn learn(data: &PreprocessedData, cfg: &LearnConfig) -> Result<LearnedGraph> {
    let echo = || serde_json::to_string(cfg).unwrap_or_default();
    match cfg.method {
        Method::Stepwise => {
            let defaults = StepwiseOptions::default();
            let opts = StepwiseOptions {
                max_edges: cfg.max_edges,
                stop_r2: cfg.stop_r2.unwrap_or(defaults.stop_r2),
            };
            Ok(stepwise_select(data, &opts).context(echo())?)
        }
        Method::Mb => {
            let lambda = cfg.require("lambda", cfg.lambda)?;
            let w = mb_select(data, lambda).context(echo())?;
            Ok(ranked_graph(data, &w))
        }
        Method::Smooth => {
            let alpha = cfg.require("alpha", cfg.alpha)?;
            let beta = cfg.require("beta", cfg.beta)?;
            let w = smooth_graph_learn(data, alpha, beta).context(echo())?;
            Ok(ranked_graph(data, &w))
        }
    }
}

/// Rows `k, cumulative_R2, pca_cumulative` for `k = 0..=max(T, D-1)`; the
/// R² field is empty past the last learned edge.
fn write_trace(w: &mut dyn Write, trace: &[f64], pca: &[f64]) -> Result<()> {
    writeln!(w, "k,cumulative_R2,pca_cumulative")?;
    let rows = (trace.len() - 1).max(pca.len().saturating_sub(1));
    for k in 0..=rows {
        let r2 = trace.get(k).map(|&v| format_number(v)).unwrap_or_default();
        let p = if k == 0 { 0.0 } else { pca.get(k - 1).copied().unwrap_or(1.0) };
        writeln!(w, "{k},{r2},{}", format_number(p))?;
    }
    Ok(())
}

pub fn run(args: &LearnArgs) -> Result<()> {
    let text = fs::read_to_string(&args.config).context(args.config.display())?;
    let cfg: LearnConfig = serde_json::from_str(&text).context(args.config.display())?;
    let (names, x) = load_data(&args.data, None)?;
    let data = PreprocessedData::from_counts(&x, Some(names.clone()), args.zero_value)?;
    let graph = learn(&data, &cfg)?;

    let trace = graph.trace();
    if let Some(k) = trace.windows(2).position(|w| w[1] < w[0]) {
        return Err(CliError::numerical(format!(
            "cumulative R² decreases at step {}: {} < {}",
            k + 1,
            trace[k + 1],
            trace[k]
        )));
    }
    let pca = pca_cumulative_variance(data.z());

    let mut out = Outputs::create(&args.out)?;
    out.write("graph.csv", |w| Ok(write_learned_graph(w, &graph, &names)?))?;
    out.write("trace.csv", |w| write_trace(w, &trace, &pca))?;
    let echo = Echo { args, method: &cfg };
    out.finish("learn", &echo, &[args.data.as_path(), args.config.as_path()])
}
