use gcoda::graph::build_laplacian;
use gcoda::io::write_matrix;
use serde::Serialize;

use super::{graph_path, load_graph};
use crate::cli::LaplacianArgs;
use crate::error::Result;
use crate::output::Outputs;

#[derive(Serialize)]
struct Components {
    dim: usize,
    count: usize,
    /// One-based vertex indices of each component.
    components: Vec<Vec<usize>>,
    /// Laplacian eigenvalues, ascending.
    spectrum: Vec<f64>,
    numerical_zero_count: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    names: Option<Vec<String>>,
}

pub fn run(args: &LaplacianArgs) -> Result<()> {
    let (names, w) = load_graph(&args.graph)?;
    let l = build_laplacian(&w);
    let mut spectrum: Vec<f64> = l.spectrum().values().iter().copied().collect();
    spectrum.reverse();
    for v in spectrum.iter_mut().take(l.component_count()) {
        *v = 0.0;
    }
    let summary = Components {
        dim: l.dim(),
        count: l.component_count(),
        components: l
            .partition()
            .components()
            .iter()
            .map(|c| c.iter().map(|v| v + 1).collect())
            .collect(),
        spectrum,
        numerical_zero_count: l.numerical_zero_count(),
        names: names.clone(),
    };

    let mut out = Outputs::create(&args.out)?;
    out.write("laplacian.csv", |w| Ok(write_matrix(w, names.as_deref(), l.matrix())?))?;
    out.write_json("components.json", &summary)?;
    out.finish("laplacian", args, &[graph_path(&args.graph)])
}
