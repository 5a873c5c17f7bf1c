use std::io::Write;

use gcoda::geometry::GraphSimplexSpec;
use gcoda::graph::build_laplacian;
use gcoda::io::{format_number, write_matrix};
use gcoda::transforms::pivot_orderings;
use gcoda::{GilrBasis, Laplacian};
use nalgebra::{DMatrix, DVector};

use super::{check_positive, graph_path, load_data, load_graph, resolve_part};
use crate::cli::{TransformArgs, TransformKind};
use crate::error::{CliError, Result};
use crate::output::Outputs;

/// Row-wise linear map on log data together with its display metadata.
struct Map {
    forward: DMatrix<f64>,
    /// Eigenvalue of each coordinate, for the spectral kinds.
    frequencies: Option<Vec<f64>>,
    basis: Option<GilrBasis>,
    prefix: &'static str,
}

fn build(args: &TransformArgs, l: &Laplacian, names: &[String]) -> Result<Map> {
    if !args.pivot.is_empty() && args.kind != TransformKind::Gilr1 {
        return Err(CliError::validation("--pivot applies only to --kind gilr1"));
    }
    let basis = match args.kind {
        TransformKind::Clrw => GilrBasis::weighted_clr(l, args.alpha)?,
        TransformKind::Gilr1 => {
            let pivots = args
                .pivot
                .iter()
                .map(|p| resolve_part(p, names))
                .collect::<Result<Vec<_>>>()?;
            let orderings = pivot_orderings(l.partition(), &pivots)?;
            GilrBasis::gilr1(l, args.alpha, Some(&orderings))?
        }
        TransformKind::Gilr2 => GilrBasis::gilr2(l, args.alpha)?,
        TransformKind::Fourier => {
            if args.alpha != 0.0 {
                return Err(CliError::validation("--alpha does not apply to --kind fourier"));
            }
            // Eigenvectors by increasing frequency, kernel first.
            let eig = l.spectrum();
            let d = l.dim();
            let order: Vec<usize> = (0..d).rev().collect();
            let forward = DMatrix::from_fn(d, d, |r, c| eig.vectors()[(c, order[r])]);
            let frequencies = order
                .iter()
                .map(|&k| if k >= eig.rank() { 0.0 } else { eig.values()[k] })
                .collect();
            return Ok(Map {
                forward,
                frequencies: Some(frequencies),
                basis: None,
                prefix: "f",
            });
        }
    };
    let prefix = match args.kind {
        TransformKind::Clrw => "clrw",
        TransformKind::Gilr1 => "gilr1_",
        _ => "gilr2_",
    };
    Ok(Map {
        forward: basis.forward().clone(),
        frequencies: basis.frequencies().map(|f| f.iter().copied().collect()),
        basis: Some(basis),
        prefix,
    })
}

fn coordinate_names(map: &Map) -> Vec<String> {
    (1..=map.forward.nrows()).map(|k| format!("{}{k}", map.prefix)).collect()
}

/// One row per coordinate: its eigenvalue followed by the eigenvector
/// entries scaled to `[-1, 1]`.
fn write_node_weights(w: &mut dyn Write, map: &Map, names: &[String]) -> Result<()> {
    let freqs = map.frequencies.as_ref().expect("spectral kind");
    write!(w, "coordinate,eigenvalue")?;
    for n in names {
        write!(w, ",{n}")?;
    }
    writeln!(w)?;
    for (k, row) in map.forward.row_iter().enumerate() {
        let scale = row.amax();
        write!(w, "{}{},{}", map.prefix, k + 1, format_number(freqs[k]))?;
        for &v in row.iter() {
            let s = if scale > 0.0 { v / scale } else { 0.0 };
            write!(w, ",{}", format_number(s))?;
        }
        writeln!(w)?;
    }
    Ok(())
}

pub fn run(args: &TransformArgs) -> Result<()> {
    let (graph_names, w) = load_graph(&args.graph)?;
    let l: Laplacian = build_laplacian(&w);
    let d = l.dim();
    if args.invert {
        return invert(args, &l, graph_names);
    }
    let (names, x) = load_data(&args.data, Some(d))?;
    check_positive(&x, &names)?;
    let map = build(args, &l, &names)?;
    let coords = x.map(f64::ln) * map.forward.transpose();

    let mut out = Outputs::create(&args.out)?;
    out.write("coords.csv", |w| Ok(write_matrix(w, Some(&coordinate_names(&map)), &coords)?))?;
    out.write("basis.csv", |w| Ok(write_matrix(w, Some(&names), &map.forward)?))?;
    if map.frequencies.is_some() {
        out.write("node_weights.csv", |w| write_node_weights(w, &map, &names))?;
    }
    out.finish("transform", args, &[args.data.as_path(), graph_path(&args.graph)])
}

fn invert(args: &TransformArgs, l: &Laplacian, graph_names: Option<Vec<String>>) -> Result<()> {
    let d = l.dim();
    let names = args
        .names
        .clone()
        .or(graph_names)
        .unwrap_or_else(|| (1..=d).map(|i| format!("x{i}")).collect());
    if names.len() != d {
        return Err(CliError::validation(format!("{} names for {d} parts", names.len())));
    }
    let map = build(args, l, &names)?;
    let (_, z) = load_data(&args.data, Some(map.forward.nrows()))?;
    let spec = GraphSimplexSpec::for_laplacian(l);
    let mut x = DMatrix::zeros(z.nrows(), d);
    for r in 0..z.nrows() {
        let zr: DVector<f64> = z.row(r).transpose();
        let comp = match &map.basis {
            Some(b) => b.invert_on(&zr, &spec)?,
            None => gcoda::Composition::from_log(&(map.forward.transpose() * zr))?,
        };
        x.set_row(r, &comp.values().transpose());
    }
    let mut out = Outputs::create(&args.out)?;
    out.write("composition.csv", |w| Ok(write_matrix(w, Some(&names), &x)?))?;
    out.finish("transform", args, &[args.data.as_path(), graph_path(&args.graph)])
}
