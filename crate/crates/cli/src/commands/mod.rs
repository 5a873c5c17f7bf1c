pub mod laplacian;
pub mod learn;
pub mod regress;
pub mod transform;

use std::path::Path;

use gcoda::io::{read_data_matrix_file, read_edge_list_file, read_weight_matrix_file};
use gcoda::WeightMatrix;
use nalgebra::DMatrix;

use crate::cli::GraphInput;
use crate::error::{CliError, Context, Result};

/// Loads the weight graph and any part names from its header.
pub fn load_graph(g: &GraphInput) -> Result<(Option<Vec<String>>, WeightMatrix)> {
    match (&g.weights, &g.edges) {
        (Some(path), None) => read_weight_matrix_file(path).context(path.display()),
        (None, Some(path)) => Ok((None, read_edge_list_file(path, g.dim).context(path.display())?)),
        _ => Err(CliError::validation("give exactly one of --weights and --edges")),
    }
}

pub fn graph_path(g: &GraphInput) -> &Path {
    g.weights.as_deref().or(g.edges.as_deref()).expect("validated by clap")
}

/// Reads a data matrix and checks that it has `expected` columns.
pub fn load_data(path: &Path, expected: Option<usize>) -> Result<(Vec<String>, DMatrix<f64>)> {
    let (names, x) = read_data_matrix_file(path).context(path.display())?;
    if let Some(d) = expected {
        if x.ncols() != d {
            return Err(CliError::validation(format!(
                "{}: {} columns, but the graph has {d} vertices",
                path.display(),
                x.ncols()
            )));
        }
    }
    Ok((names, x))
}

/// Rejects entries that are not strictly positive, naming the first one.
pub fn check_positive(x: &DMatrix<f64>, names: &[String]) -> Result<()> {
    for r in 0..x.nrows() {
        for c in 0..x.ncols() {
            let v = x[(r, c)];
            if !v.is_finite() || v <= 0.0 {
                return Err(CliError::validation(format!(
                    "non-positive entry {v} at data row {}, column {} ({})",
                    r + 1,
                    c + 1,
                    names.get(c).map_or("?", String::as_str)
                )));
            }
        }
    }
    Ok(())
}

/// Resolves a part given by name or one-based index.
pub fn resolve_part(spec: &str, names: &[String]) -> Result<usize> {
    if let Some(i) = names.iter().position(|n| n == spec) {
        return Ok(i);
    }
    match spec.parse::<usize>() {
        Ok(i) if (1..=names.len()).contains(&i) => Ok(i - 1),
        _ => Err(CliError::validation(format!("unknown part `{spec}`"))),
    }
}
