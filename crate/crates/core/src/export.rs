//! DOT and GraphML output. Signed edges are red when positive and blue
//! when negative; pen width grows with the display weight.

use std::io::Write;

use crate::error::Result;
use crate::graph::WeightMatrix;
use crate::io::format_number;
use crate::regression::ModelEdge;
use crate::scalar::Scalar;

const MIN_WIDTH: f64 = 0.5;
const MAX_WIDTH: f64 = 6.0;

/// An edge ready for drawing.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StyledEdge {
    pub i: usize,
    pub j: usize,
    pub weight: f64,
    /// Nonnegative magnitude that sets the pen width.
    pub display_weight: f64,
}

impl StyledEdge {
    fn color(&self) -> &'static str {
        if self.weight > 0.0 {
            "red"
        } else if self.weight < 0.0 {
            "blue"
        } else {
            "gray"
        }
    }
}

pub fn styled_from_model<T: Scalar>(edges: &[ModelEdge<T>]) -> Vec<StyledEdge> {
    edges
        .iter()
        .map(|e| StyledEdge {
            i: e.i,
            j: e.j,
            weight: e.weight.to_f64(),
            display_weight: e.display_weight.to_f64(),
        })
        .collect()
}

pub fn styled_from_weights<T: Scalar>(w: &WeightMatrix<T>) -> Vec<StyledEdge> {
    w.edges()
        .into_iter()
        .map(|(i, j, v)| StyledEdge {
            i,
            j,
            weight: v.to_f64(),
            display_weight: v.to_f64().abs(),
        })
        .collect()
}

fn widths(edges: &[StyledEdge]) -> Vec<f64> {
    let max = edges.iter().fold(0.0f64, |a, e| a.max(e.display_weight));
    edges
        .iter()
        .map(|e| {
            if max > 0.0 {
                MIN_WIDTH + (MAX_WIDTH - MIN_WIDTH) * e.display_weight / max
            } else {
                MIN_WIDTH
            }
        })
        .collect()
}

fn dot_escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
        .replace('\'', "&apos;")
}

/// Undirected DOT graph over all `names` (isolated vertices included).
pub fn write_dot<W: Write>(mut out: W, name: &str, names: &[String], edges: &[StyledEdge]) -> Result<()> {
    writeln!(out, "graph \"{}\" {{", dot_escape(name))?;
    writeln!(out, "  node [shape=ellipse];")?;
    for (v, n) in names.iter().enumerate() {
        writeln!(out, "  n{} [label=\"{}\"];", v + 1, dot_escape(n))?;
    }
    for (e, width) in edges.iter().zip(widths(edges)) {
        writeln!(
            out,
            "  n{} -- n{} [color={}, penwidth={:.3}, weight=\"{}\"];",
            e.i + 1,
            e.j + 1,
            e.color(),
            width,
            format_number(e.weight)
        )?;
    }
    writeln!(out, "}}")?;
    Ok(())
}

/// GraphML with `weight`, `display_weight`, `color` and `width` edge data.
pub fn write_graphml<W: Write>(mut out: W, name: &str, names: &[String], edges: &[StyledEdge]) -> Result<()> {
    writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#)?;
    writeln!(out, r#"<graphml xmlns="http://graphml.graphdrawing.org/xmlns">"#)?;
    writeln!(out, r#"  <key id="label" for="node" attr.name="label" attr.type="string"/>"#)?;
    writeln!(out, r#"  <key id="weight" for="edge" attr.name="weight" attr.type="double"/>"#)?;
    writeln!(out, r#"  <key id="display" for="edge" attr.name="display_weight" attr.type="double"/>"#)?;
    writeln!(out, r#"  <key id="color" for="edge" attr.name="color" attr.type="string"/>"#)?;
    writeln!(out, r#"  <key id="width" for="edge" attr.name="width" attr.type="double"/>"#)?;
    writeln!(out, r#"  <graph id="{}" edgedefault="undirected">"#, xml_escape(name))?;
    for (v, n) in names.iter().enumerate() {
        writeln!(out, r#"    <node id="n{}"><data key="label">{}</data></node>"#, v + 1, xml_escape(n))?;
    }
    for (k, (e, width)) in edges.iter().zip(widths(edges)).enumerate() {
        writeln!(out, r#"    <edge id="e{}" source="n{}" target="n{}">"#, k + 1, e.i + 1, e.j + 1)?;
        writeln!(out, r#"      <data key="weight">{}</data>"#, format_number(e.weight))?;
        writeln!(out, r#"      <data key="display">{}</data>"#, format_number(e.display_weight))?;
        writeln!(out, r#"      <data key="color">{}</data>"#, e.color())?;
        writeln!(out, r#"      <data key="width">{width:.3}</data>"#)?;
        writeln!(out, "    </edge>")?;
    }
    writeln!(out, "  </graph>")?;
    writeln!(out, "</graphml>")?;
    Ok(())
}
