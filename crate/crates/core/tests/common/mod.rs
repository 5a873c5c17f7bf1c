#![allow(dead_code)]

use gcoda::geometry::Composition;
use gcoda::graph::WeightMatrix;
use nalgebra::{DMatrix, DVector};
use rand::seq::SliceRandom;
use rand::Rng;

pub fn random_vector<R: Rng>(rng: &mut R, d: usize, scale: f64) -> DVector<f64> {
    DVector::from_fn(d, |_, _| rng.random_range(-scale..scale))
}

pub fn random_composition<R: Rng>(rng: &mut R, d: usize) -> Composition<f64> {
    Composition::from_log(&random_vector(rng, d, 2.0)).unwrap()
}

/// Edges of a random spanning tree on `vertices`.
pub fn random_tree<R: Rng>(rng: &mut R, vertices: &[usize]) -> Vec<(usize, usize)> {
    let mut order = vertices.to_vec();
    order.shuffle(rng);
    (1..order.len())
        .map(|k| {
            let parent = order[rng.random_range(0..k)];
            let (a, b) = (parent.min(order[k]), parent.max(order[k]));
            (a, b)
        })
        .collect()
}

/// Connected graph on each block: a spanning tree plus extra edges with
/// probability `extra`. Weights uniform in `[lo, hi)`.
pub fn random_graph_on_blocks<R: Rng>(
    rng: &mut R,
    d: usize,
    blocks: &[Vec<usize>],
    extra: f64,
    lo: f64,
    hi: f64,
) -> WeightMatrix<f64> {
    let mut w = DMatrix::zeros(d, d);
    for block in blocks {
        for (a, b) in random_tree(rng, block) {
            let v = rng.random_range(lo..hi);
            w[(a, b)] = v;
            w[(b, a)] = v;
        }
        for (x, &a) in block.iter().enumerate() {
            for &b in &block[x + 1..] {
                if w[(a, b)] == 0.0 && rng.random_bool(extra) {
                    let v = rng.random_range(lo..hi);
                    w[(a, b)] = v;
                    w[(b, a)] = v;
                }
            }
        }
    }
    WeightMatrix::new(w).unwrap()
}

pub fn random_connected<R: Rng>(rng: &mut R, d: usize) -> WeightMatrix<f64> {
    let all: Vec<usize> = (0..d).collect();
    random_graph_on_blocks(rng, d, &[all], 0.3, 0.1, 3.0)
}

/// Random partition of `0..d` into `m` nonempty blocks.
pub fn random_blocks<R: Rng>(rng: &mut R, d: usize, m: usize) -> Vec<Vec<usize>> {
    let mut labels: Vec<usize> = (0..d).collect();
    labels.shuffle(rng);
    let mut blocks = vec![Vec::new(); m];
    for (k, &v) in labels.iter().enumerate() {
        let b = if k < m { k } else { rng.random_range(0..m) };
        blocks[b].push(v);
    }
    blocks
}

/// Random graph with exactly `m` components.
pub fn random_with_components<R: Rng>(rng: &mut R, d: usize, m: usize) -> WeightMatrix<f64> {
    let blocks = random_blocks(rng, d, m);
    random_graph_on_blocks(rng, d, &blocks, 0.3, 0.1, 3.0)
}

/// `½ Σ_{i,j} (f_i − f_j)(g_i − g_j) w_ij` evaluated term by term.
pub fn half_double_sum(w: &DMatrix<f64>, f: &DVector<f64>, g: &DVector<f64>) -> f64 {
    let d = w.nrows();
    let mut s = 0.0;
    for i in 0..d {
        for j in 0..d {
            s += (f[i] - f[j]) * (g[i] - g[j]) * w[(i, j)];
        }
    }
    0.5 * s
}

pub fn max_abs(m: &DMatrix<f64>) -> f64 {
    m.iter().fold(0.0f64, |a, v| a.max(v.abs()))
}

/// Symmetric nonnegative weights from a flat upper-triangle vector; entries
/// below `cut` become zero so that disconnected graphs occur.
pub fn weights_from_flat(d: usize, flat: &[f64], cut: f64) -> WeightMatrix<f64> {
    let mut w = DMatrix::zeros(d, d);
    let mut it = flat.iter().copied();
    for i in 0..d {
        for j in (i + 1)..d {
            let v = it.next().unwrap_or(0.0);
            let v = if v < cut { 0.0 } else { v };
            w[(i, j)] = v;
            w[(j, i)] = v;
        }
    }
    WeightMatrix::new(w).unwrap()
}

pub mod strategies {
    use super::*;
    use proptest::prelude::*;

    pub const MAX_D: usize = 9;

    /// `(W, f, g)` with `D` in `2..=MAX_D` and about a third of pairs empty.
    pub fn graph_and_signals() -> impl Strategy<Value = (WeightMatrix<f64>, DVector<f64>, DVector<f64>)> {
        (2usize..=MAX_D).prop_flat_map(|d| {
            (
                prop::collection::vec(0.0f64..3.0, d * (d - 1) / 2),
                prop::collection::vec(-4.0f64..4.0, d),
                prop::collection::vec(-4.0f64..4.0, d),
            )
                .prop_map(move |(flat, f, g)| {
                    (
                        weights_from_flat(d, &flat, 1.0),
                        DVector::from_vec(f),
                        DVector::from_vec(g),
                    )
                })
        })
    }

    /// Connected graph: a path with positive weights plus random extras.
    pub fn connected_graph() -> impl Strategy<Value = WeightMatrix<f64>> {
        (2usize..=MAX_D).prop_flat_map(|d| {
            (
                prop::collection::vec(0.1f64..3.0, d - 1),
                prop::collection::vec(0.0f64..3.0, d * (d - 1) / 2),
            )
                .prop_map(move |(path, flat)| {
                    let mut w = weights_from_flat(d, &flat, 1.5).matrix().clone();
                    for (k, v) in path.into_iter().enumerate() {
                        w[(k, k + 1)] = v;
                        w[(k + 1, k)] = v;
                    }
                    WeightMatrix::new(w).unwrap()
                })
        })
    }

    /// Positive data matrix with `N` in `D+2..=D+20`.
    pub fn positive_data(dmin: usize, dmax: usize) -> impl Strategy<Value = DMatrix<f64>> {
        (dmin..=dmax).prop_flat_map(|d| {
            ((d + 2)..=(d + 20)).prop_flat_map(move |n| {
                prop::collection::vec(-2.0f64..2.0, n * d)
                    .prop_map(move |v| DMatrix::from_vec(n, d, v).map(f64::exp))
            })
        })
    }
}
