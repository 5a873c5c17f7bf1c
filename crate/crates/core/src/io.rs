//! CSV interchange. Numbers are written with 17 significant digits so they
//! round-trip exactly; vertex indices in files are one-based.

use std::io::{Read, Write};
use std::path::Path;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::graph::WeightMatrix;
use crate::learning::{LearnedEdge, LearnedGraph};
use crate::scalar::{lit, Scalar};

/// Round-trip formatting of a number.
pub fn format_number<T: Scalar>(v: T) -> String {
    let f = v.to_f64();
    if f == 0.0 {
        "0".to_string()
    } else {
        format!("{f:.16e}")
    }
}

fn reader<R: Read>(r: R) -> csv::Reader<R> {
    csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(r)
}

fn records<R: Read>(r: R) -> Result<Vec<csv::StringRecord>> {
    let mut out = Vec::new();
    for rec in reader(r).records() {
        let rec = rec?;
        if rec.iter().all(|f| f.is_empty()) {
            continue;
        }
        out.push(rec);
    }
    Ok(out)
}

fn parse_field<T: Scalar>(s: &str, row: usize, col: usize) -> Result<T> {
    let v: f64 = s
        .parse()
        .map_err(|_| Error::Parse(format!("row {row}, column {col}: `{s}` is not a number")))?;
    Ok(lit(v))
}

fn is_numeric_row(rec: &csv::StringRecord) -> bool {
    rec.iter().all(|f| f.parse::<f64>().is_ok())
}

fn open(path: &Path) -> Result<std::fs::File> {
    std::fs::File::open(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

/// Parses a numeric table; `header` says whether the first record holds
/// column names. Rows are numbered as in the file (one-based).
fn numeric_table<T: Scalar>(recs: &[csv::StringRecord], header: bool) -> Result<(Option<Vec<String>>, DMatrix<T>)> {
    let (names, body, offset) = if header {
        let first = recs
            .first()
            .ok_or_else(|| Error::Parse("missing header row".into()))?;
        (Some(first.iter().map(str::to_string).collect::<Vec<_>>()), &recs[1..], 2)
    } else {
        (None, recs, 1)
    };
    let ncols = names
        .as_ref()
        .map(Vec::len)
        .or_else(|| body.first().map(|r| r.len()))
        .unwrap_or(0);
    let mut values = Vec::with_capacity(body.len() * ncols);
    for (r, rec) in body.iter().enumerate() {
        if rec.len() != ncols {
            return Err(Error::Parse(format!(
                "row {} has {} fields, expected {ncols}",
                r + offset,
                rec.len()
            )));
        }
        for (c, f) in rec.iter().enumerate() {
            values.push(parse_field::<T>(f, r + offset, c + 1)?);
        }
    }
    Ok((names, DMatrix::from_row_slice(body.len(), ncols, &values)))
}

/// Square weight matrix; a non-numeric first row is taken as a header.
pub fn read_weight_matrix<T: Scalar, R: Read>(r: R) -> Result<(Option<Vec<String>>, WeightMatrix<T>)> {
    let recs = records(r)?;
    let header = recs.first().is_some_and(|rec| !is_numeric_row(rec));
    let (names, m) = numeric_table::<T>(&recs, header)?;
    if m.nrows() != m.ncols() {
        return Err(Error::InvalidWeights {
            invariant: "square shape",
            detail: format!("{} rows and {} columns", m.nrows(), m.ncols()),
        });
    }
    Ok((names, WeightMatrix::new(m)?))
}

pub fn read_weight_matrix_file<T: Scalar>(path: &Path) -> Result<(Option<Vec<String>>, WeightMatrix<T>)> {
    read_weight_matrix(open(path)?)
}

/// Edge list with one-based `i, j, w` per line (header optional). The
/// dimension defaults to the largest index present.
pub fn read_edge_list<T: Scalar, R: Read>(r: R, dim: Option<usize>) -> Result<WeightMatrix<T>> {
    let recs = records(r)?;
    let skip = usize::from(recs.first().is_some_and(|rec| !is_numeric_row(rec)));
    let mut edges = Vec::new();
    let mut max_index = 0;
    for (k, rec) in recs.iter().enumerate().skip(skip) {
        let row = k + 1;
        if rec.len() != 3 {
            return Err(Error::Parse(format!("row {row}: expected 3 fields (i, j, w), got {}", rec.len())));
        }
        let idx = |c: usize| -> Result<usize> {
            rec[c]
                .parse::<usize>()
                .ok()
                .filter(|&v| v >= 1)
                .ok_or_else(|| Error::Parse(format!("row {row}, column {}: `{}` is not a vertex index (1-based)", c + 1, &rec[c])))
        };
        let i = idx(0)?;
        let j = idx(1)?;
        let w: T = parse_field(&rec[2], row, 3)?;
        max_index = max_index.max(i).max(j);
        edges.push((i - 1, j - 1, w));
    }
    let d = dim.unwrap_or(max_index);
    WeightMatrix::from_edges(d, &edges)
}

pub fn read_edge_list_file<T: Scalar>(path: &Path, dim: Option<usize>) -> Result<WeightMatrix<T>> {
    read_edge_list(open(path)?, dim)
}

/// Data matrix with a mandatory header of part names.
pub fn read_data_matrix<T: Scalar, R: Read>(r: R) -> Result<(Vec<String>, DMatrix<T>)> {
    let recs = records(r)?;
    if recs.first().is_some_and(is_numeric_row) {
        return Err(Error::Parse("data files need a header row of part names".into()));
    }
    let (names, m) = numeric_table::<T>(&recs, true)?;
    Ok((names.unwrap_or_default(), m))
}

pub fn read_data_matrix_file<T: Scalar>(path: &Path) -> Result<(Vec<String>, DMatrix<T>)> {
    read_data_matrix(open(path)?)
}

/// Single-column response with a header.
pub fn read_response<T: Scalar, R: Read>(r: R) -> Result<DVector<T>> {
    let (_, m) = read_data_matrix::<T, R>(r)?;
    if m.ncols() != 1 {
        return Err(Error::Parse(format!("response must have one column, found {}", m.ncols())));
    }
    Ok(m.column(0).clone_owned())
}

pub fn read_response_file<T: Scalar>(path: &Path) -> Result<DVector<T>> {
    read_response(open(path)?)
}

/// Reads a graph written by [`write_learned_graph`] or
/// [`write_weight_edges`]. Rows are taken in `step` order; an empty R²
/// field reads as zero.
pub fn read_learned_graph<T: Scalar, R: Read>(r: R, dim: usize) -> Result<LearnedGraph<T>> {
    let recs = records(r)?;
    let header = recs
        .first()
        .ok_or_else(|| Error::Parse("graph file is empty".into()))?;
    let col = |name: &str| -> Result<usize> {
        header
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| Error::Parse(format!("graph file lacks a `{name}` column")))
    };
    let (cs, ci, cj, cw, cr) = (col("step")?, col("i")?, col("j")?, col("weight")?, col("cumulative_R2")?);
    let mut rows = Vec::new();
    for (k, rec) in recs.iter().enumerate().skip(1) {
        let row = k + 1;
        let field = |c: usize| rec.get(c).ok_or_else(|| Error::Parse(format!("row {row} is too short")));
        let step: usize = field(cs)?
            .parse()
            .map_err(|_| Error::Parse(format!("row {row}: bad step `{}`", &rec[cs])))?;
        let vertex = |c: usize| -> Result<usize> {
            let v: usize = field(c)?
                .parse()
                .map_err(|_| Error::Parse(format!("row {row}: bad vertex `{}`", &rec[c])))?;
            if v == 0 || v > dim {
                return Err(Error::InvalidParameter {
                    name: "graph",
                    detail: format!("row {row}: unknown vertex {v} (data has {dim} parts)"),
                });
            }
            Ok(v - 1)
        };
        let (i, j) = (vertex(ci)?, vertex(cj)?);
        let weight: T = parse_field(field(cw)?, row, cw + 1)?;
        let r2: T = match field(cr)? {
            "" => T::zero(),
            v => parse_field(v, row, cr + 1)?,
        };
        rows.push((step, LearnedEdge { i, j, weight, r2 }));
    }
    rows.sort_by_key(|r| r.0);
    Ok(LearnedGraph::new(dim, rows.into_iter().map(|r| r.1).collect()))
}

pub fn read_learned_graph_file<T: Scalar>(path: &Path, dim: usize) -> Result<LearnedGraph<T>> {
    read_learned_graph(open(path)?, dim)
}

/// Matrix as CSV, optionally with a header row.
pub fn write_matrix<T: Scalar, W: Write>(w: W, header: Option<&[String]>, m: &DMatrix<T>) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    if let Some(h) = header {
        out.write_record(h)?;
    }
    for row in m.row_iter() {
        out.write_record(row.iter().map(|&v| format_number(v)))?;
    }
    out.flush()?;
    Ok(())
}

/// `step, i, j, name_i, name_j, weight, cumulative_R2`.
pub fn write_learned_graph<T: Scalar, W: Write>(w: W, graph: &LearnedGraph<T>, names: &[String]) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["step", "i", "j", "name_i", "name_j", "weight", "cumulative_R2"])?;
    for (t, e) in graph.edges().iter().enumerate() {
        out.write_record([
            (t + 1).to_string(),
            (e.i + 1).to_string(),
            (e.j + 1).to_string(),
            names[e.i].clone(),
            names[e.j].clone(),
            format_number(e.weight),
            format_number(e.r2),
        ])?;
    }
    out.flush()?;
    Ok(())
}

/// Undirected graph in the same layout as [`write_learned_graph`]; steps
/// follow the lexicographic edge order and the R² column is left empty.
pub fn write_weight_edges<T: Scalar, W: Write>(w: W, weights: &WeightMatrix<T>, names: &[String]) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["step", "i", "j", "name_i", "name_j", "weight", "cumulative_R2"])?;
    for (t, (i, j, v)) in weights.edges().into_iter().enumerate() {
        out.write_record([
            (t + 1).to_string(),
            (i + 1).to_string(),
            (j + 1).to_string(),
            names[i].clone(),
            names[j].clone(),
            format_number(v),
            String::new(),
        ])?;
    }
    out.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weight_matrix_with_and_without_header() {
        let text = "a,b\n0,2\n2,0\n";
        let (names, w) = read_weight_matrix::<f64, _>(text.as_bytes()).unwrap();
        assert_eq!(names.unwrap(), vec!["a", "b"]);
        assert_eq!(w.get(0, 1), 2.0);
        let (names, _) = read_weight_matrix::<f64, _>("0,1\n1,0\n".as_bytes()).unwrap();
        assert!(names.is_none());
    }

    #[test]
    fn asymmetric_matrix_names_invariant() {
        let err = read_weight_matrix::<f64, _>("0,1\n2,0\n".as_bytes()).unwrap_err();
        assert!(err.to_string().contains("symmetry"), "{err}");
    }

    #[test]
    fn edge_list_is_one_based() {
        let w = read_edge_list::<f64, _>("i,j,w\n1,2,1\n1,3,1\n".as_bytes(), None).unwrap();
        assert_eq!(w.dim(), 3);
        assert_eq!(w.get(0, 2), 1.0);
        let w = read_edge_list::<f64, _>("i,j,w\n".as_bytes(), Some(4)).unwrap();
        assert_eq!(w.dim(), 4);
        assert!(read_edge_list::<f64, _>("0,1,1\n".as_bytes(), None).is_err());
    }

    #[test]
    fn data_needs_header_and_reports_position() {
        assert!(read_data_matrix::<f64, _>("1,2\n3,4\n".as_bytes()).is_err());
        let err = read_data_matrix::<f64, _>("a,b\n1,x\n".as_bytes()).unwrap_err();
        assert!(err.to_string().contains("row 2, column 2"), "{err}");
    }

    #[test]
    fn numbers_round_trip() {
        for v in [0.1f64, 1.0 / 3.0, -2.5e-300, 123456789.12345679] {
            let s = format_number(v);
            assert_eq!(s.parse::<f64>().unwrap(), v);
        }
    }

    #[test]
    fn learned_graph_round_trip() {
        let g = LearnedGraph::new(
            3,
            vec![
                LearnedEdge { i: 0, j: 2, weight: 0.6, r2: 0.6 },
                LearnedEdge { i: 1, j: 2, weight: 0.4, r2: 1.0 },
            ],
        );
        let names: Vec<String> = ["a", "b", "c"].iter().map(|s| s.to_string()).collect();
        let mut buf = Vec::new();
        write_learned_graph(&mut buf, &g, &names).unwrap();
        let back = read_learned_graph::<f64, _>(buf.as_slice(), 3).unwrap();
        assert_eq!(back, g);
        assert!(read_learned_graph::<f64, _>(buf.as_slice(), 2).is_err());
    }
}
