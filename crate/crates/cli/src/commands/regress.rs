use std::io::Write;

use gcoda::export::{styled_from_model, write_dot, write_graphml};
use gcoda::io::{format_number, read_learned_graph_file, read_response_file};
use gcoda::learning::zero_replace;
use gcoda::regression::{evaluate_splits, fit_zerosum_with, model_graph, project_coefficients, ModelEdge, SplitOptions, ZeroSumOptions};
use gcoda::regression::SplitEvaluation;
use nalgebra::DVector;

use super::load_data;
use crate::cli::RegressArgs;
use crate::error::{CliError, Context, Result};
use crate::output::Outputs;

fn standardize(y: &DVector<f64>) -> Result<DVector<f64>> {
    let n = y.len();
    if n < 2 {
        return Err(CliError::validation("the response needs at least 2 values"));
    }
    let mean = y.mean();
    let sd = (y.map(|v| (v - mean).powi(2)).sum() / (n - 1) as f64).sqrt();
    if sd.is_nan() || sd <= 0.0 {
        return Err(CliError::numerical("the response is constant and cannot be standardized"));
    }
    Ok(y.map(|v| (v - mean) / sd))
}

fn write_means(w: &mut dyn Write, eval: &SplitEvaluation<f64>) -> Result<()> {
    writeln!(w, "k,baseline_mse,projected_mse")?;
    for m in &eval.means {
        writeln!(w, "{},{},{}", m.k, format_number(m.baseline), format_number(m.projected))?;
    }
    Ok(())
}

fn write_runs(w: &mut dyn Write, eval: &SplitEvaluation<f64>) -> Result<()> {
    writeln!(w, "repetition,k,method,mse")?;
    for r in &eval.records {
        writeln!(w, "{},{},{},{}", r.repetition + 1, r.k, r.method.as_str(), format_number(r.mse))?;
    }
    Ok(())
}

fn write_model_edges(w: &mut dyn Write, edges: &[ModelEdge<f64>], names: &[String]) -> Result<()> {
    writeln!(w, "i,j,name_i,name_j,weight,sigma,display_weight,sign")?;
    for e in edges {
        writeln!(
            w,
            "{},{},{},{},{},{},{},{}",
            e.i + 1,
            e.j + 1,
            names[e.i],
            names[e.j],
            format_number(e.weight),
            format_number(e.sigma),
            format_number(e.display_weight),
            if e.positive { "positive" } else { "negative" }
        )?;
    }
    Ok(())
}

pub fn run(args: &RegressArgs) -> Result<()> {
    let (names, raw) = load_data(&args.data, None)?;
    let d = raw.ncols();
    let (x, _) = zero_replace(&raw, args.zero_value)?;
    let y = read_response_file(&args.response).context(args.response.display())?;
    if y.len() != x.nrows() {
        return Err(CliError::validation(format!(
            "{} has {} values but {} has {} rows",
            args.response.display(),
            y.len(),
            args.data.display(),
            x.nrows()
        )));
    }
    let y = if args.no_standardize { y } else { standardize(&y)? };
    let learned = read_learned_graph_file(&args.graph, d).context(args.graph.display())?;
    if learned.is_empty() {
        return Err(CliError::validation(format!("{} has no edges", args.graph.display())));
    }
    let ks = args.ks.clone().unwrap_or_else(|| (1..=learned.len()).collect());
    if ks.is_empty() || ks.contains(&0) {
        return Err(CliError::validation("--ks must list positive edge counts"));
    }
    let k_model = args.k.unwrap_or_else(|| *ks.iter().max().expect("nonempty"));
    if k_model == 0 || k_model > learned.len() {
        return Err(CliError::validation(format!(
            "--k {k_model} must lie in 1..={}",
            learned.len()
        )));
    }

    let opts = SplitOptions {
        repetitions: args.reps,
        train_fraction: args.train_fraction,
        lambda: args.lambda,
        seed: args.seed,
    };
    let eval = evaluate_splits(&x, &y, &learned, &ks, &opts)?;

    let model = fit_zerosum_with(&x, &y, args.lambda, &ZeroSumOptions::default())?;
    let projected = project_coefficients(&model, &learned.prefix(k_model).weight_matrix()?)?;
    let edges = model_graph(&projected, &x.map(f64::ln))?;
    let styled = styled_from_model(&edges);
    let title = format!("model_k{k_model}");

    let mut out = Outputs::create(&args.out)?;
    out.write("mse.csv", |w| write_means(w, &eval))?;
    out.write("mse_runs.csv", |w| write_runs(w, &eval))?;
    out.write("model_graph.csv", |w| write_model_edges(w, &edges, &names))?;
    out.write("model_graph.dot", |w| Ok(write_dot(w, &title, &names, &styled)?))?;
    out.write("model_graph.graphml", |w| Ok(write_graphml(w, &title, &names, &styled)?))?;
    out.write("coefficients.csv", |w| {
        writeln!(w, "part,clr_coefficient,projected_coefficient")?;
        let eff = projected.effective_coefficients();
        for (p, name) in names.iter().enumerate() {
            writeln!(
                w,
                "{name},{},{}",
                format_number(model.clr_coefficients()[p]),
                format_number(eff[p])
            )?;
        }
        Ok(())
    })?;
    out.finish(
        "regress",
        args,
        &[args.data.as_path(), args.response.as_path(), args.graph.as_path()],
    )
}
