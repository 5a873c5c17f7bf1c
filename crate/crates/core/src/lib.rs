//! Compositional data analysis on graphs.
//!
//! A weighted graph on the parts of a composition selects which log-ratios
//! carry information. Its Laplacian `L = diag(W1) - W` defines a
//! scale-invariant inner product `⟨x, y⟩_{W,α} = α⟨log x, log y⟩ +
//! log(x)ᵀ L log(y)` on the graph simplex; the complete graph with weights
//! `1/D` recovers the classical Aitchison geometry.
//!
//! The crate provides
//!
//! * [`graph`]: weight matrices, Laplacians, incidence matrices, components;
//! * [`geometry`]: graph simplex operations, inner products and q-norms;
//! * [`transforms`]: weighted clr, the Cholesky-based and spectral graph
//!   isometric log-ratio maps, pivot ilr and the graph Fourier transform;
//! * [`quotient`]: signed contrasts and the quotient-space geometry;
//! * [`learning`]: stepwise log-ratio selection, neighborhood lasso,
//!   smooth-signal graph learning and the graph normal density;
//! * [`regression`]: zero-sum regression and its projection onto a graph;
//! * [`io`] / [`export`]: CSV, DOT and GraphML interchange.
//!
//! Every numerical type is generic over [`Scalar`] (`f32` or `f64`). The
//! aliases at the crate root fix the scalar to `f64`; the `*32` variants
//! use `f32`.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod export;
pub mod geometry;
pub mod graph;
pub mod io;
pub mod learning;
pub mod linalg;
pub mod quotient;
pub mod regression;
pub mod scalar;
pub mod transforms;

pub use error::{Error, Result};
pub use scalar::Scalar;

pub type WeightMatrix = graph::WeightMatrix<f64>;
pub type Laplacian = graph::Laplacian<f64>;
pub type IncidenceMatrix = graph::IncidenceMatrix<f64>;
pub type Composition = geometry::Composition<f64>;
pub type GraphSimplexSpec = geometry::GraphSimplexSpec<f64>;
pub type InnerProductParams = geometry::InnerProductParams<f64>;
pub type EigenDecomposition = linalg::EigenDecomposition<f64>;
pub type GilrBasis = transforms::GilrBasis<f64>;
pub type ContrastMatrix = quotient::ContrastMatrix<f64>;
pub type QuotientSpace = quotient::QuotientSpace<f64>;
pub type PreprocessedData = learning::PreprocessedData<f64>;
pub type LearnedGraph = learning::LearnedGraph<f64>;
pub type AitchisonModel = regression::AitchisonModel<f64>;
pub type ProjectedModel = regression::ProjectedModel<f64>;

pub type WeightMatrix32 = graph::WeightMatrix<f32>;
pub type Laplacian32 = graph::Laplacian<f32>;
pub type Composition32 = geometry::Composition<f32>;
pub type GilrBasis32 = transforms::GilrBasis<f32>;
