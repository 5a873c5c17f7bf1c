use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;

use super::PreprocessedData;
use crate::error::{Error, Result};
use crate::graph::WeightMatrix;
use crate::linalg::EigenDecomposition;
use crate::scalar::{lit, Scalar};

/// One selected log-ratio.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LearnedEdge<T> {
    pub i: usize,
    pub j: usize,
    /// Increase in explained variance when the edge was added.
    pub weight: T,
    /// Cumulative explained variance after the edge was added.
    pub r2: T,
}

/// Ordered edges produced by stepwise selection.
#[derive(Debug, Clone, PartialEq)]
pub struct LearnedGraph<T: Scalar> {
    dim: usize,
    edges: Vec<LearnedEdge<T>>,
}

impl<T: Scalar> LearnedGraph<T> {
    pub fn new(dim: usize, edges: Vec<LearnedEdge<T>>) -> Self {
        Self { dim, edges }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn edges(&self) -> &[LearnedEdge<T>] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// `R_0 = 0, R_1, ..., R_T`.
    pub fn trace(&self) -> Vec<T> {
        std::iter::once(T::zero())
            .chain(self.edges.iter().map(|e| e.r2))
            .collect()
    }

    /// The first `k` edges.
    pub fn prefix(&self, k: usize) -> Self {
        Self {
            dim: self.dim,
            edges: self.edges[..k.min(self.edges.len())].to_vec(),
        }
    }

    /// Weight matrix with `w_{e_t} = R_t − R_{t−1}`. Edges that added no
    /// variance do not appear.
    pub fn weight_matrix(&self) -> Result<WeightMatrix<T>> {
        let triples: Vec<_> = self
            .edges
            .iter()
            .filter(|e| e.weight > T::zero())
            .map(|e| (e.i, e.j, e.weight))
            .collect();
        WeightMatrix::from_edges(self.dim, &triples)
    }
}

/// Options for [`stepwise_select`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepwiseOptions<T> {
    /// Defaults to `D − 1`.
    pub max_edges: Option<usize>,
    pub stop_r2: T,
}

impl<T: Scalar> Default for StepwiseOptions<T> {
    fn default() -> Self {
        Self {
            max_edges: None,
            stop_r2: T::one() - lit::<T>(1e-10),
        }
    }
}

/// Gains closer than this (in R² units) count as ties.
const TIE_TOLERANCE: f64 = 1e-10;
/// Candidates whose residual is this small relative to the column are
/// treated as already spanned.
const SPAN_TOLERANCE: f64 = 1e-10;

/// Greedy selection of log-ratio columns `log(x_i/x_j)`: every step adds
/// the pair whose column most increases the R² of `Z` regressed onto the
/// selected columns. Ties go to the lexicographically smallest pair.
///
/// The selected columns are kept as an orthonormal basis `Q` together with
/// the residual `R = Z − QQᵀZ`. With `G = RᵀR` the gain of a candidate is
/// `‖G_i − G_j‖² / ‖R_i − R_j‖²`, so each step costs `O(N D²)`.
pub fn stepwise_select<T: Scalar>(data: &PreprocessedData<T>, options: &StepwiseOptions<T>) -> Result<LearnedGraph<T>> {
    let z = data.z();
    let (n, d) = z.shape();
    if n < 2 || d < 2 {
        return Err(Error::Degenerate(format!(
            "need at least 2 samples and 2 parts, got {n} × {d}"
        )));
    }
    let pairs = d * (d - 1) / 2;
    let max_edges = options.max_edges.unwrap_or(d - 1);
    if max_edges > pairs {
        return Err(Error::InvalidParameter {
            name: "max_edges",
            detail: format!("{max_edges} exceeds the {pairs} available pairs"),
        });
    }
    let total = z.norm_squared();
    if !(total > T::zero()) {
        return Err(Error::Degenerate("zero total variance".into()));
    }

    let candidates: Vec<(usize, usize)> = (0..d)
        .flat_map(|i| ((i + 1)..d).map(move |j| (i, j)))
        .collect();
    let column_norms: Vec<T> = candidates
        .iter()
        .map(|&(i, j)| (z.column(i) - z.column(j)).norm())
        .collect();

    let mut residual = z.clone();
    let mut basis: Vec<DVector<T>> = Vec::new();
    let mut selected = vec![false; candidates.len()];
    let mut edges = Vec::new();
    let mut r2_prev = T::zero();

    while edges.len() < max_edges && r2_prev < options.stop_r2 {
        let gram = residual.transpose() * &residual;
        let gains: Vec<Option<T>> = candidates
            .par_iter()
            .enumerate()
            .map(|(k, &(i, j))| {
                if selected[k] {
                    return None;
                }
                let r_norm = (residual.column(i) - residual.column(j)).norm();
                if r_norm <= lit::<T>(SPAN_TOLERANCE) * column_norms[k] || r_norm == T::zero() {
                    return None;
                }
                let proj = gram.column(i) - gram.column(j);
                Some(proj.norm_squared() / (r_norm * r_norm) / total)
            })
            .collect();
        let best = gains.iter().flatten().copied().fold(None, |acc: Option<T>, g| {
            Some(acc.map_or(g, |a| a.max(g)))
        });
        let Some(best) = best else { break };
        let k = gains
            .iter()
            .position(|g| matches!(g, Some(v) if *v >= best - lit::<T>(TIE_TOLERANCE)))
            .expect("maximum is attained");
        let (i, j) = candidates[k];
        selected[k] = true;

        let mut q = residual.column(i) - residual.column(j);
        for b in &basis {
            let c = b.dot(&q);
            q.axpy(-c, b, T::one());
        }
        let qn = q.norm();
        if qn == T::zero() {
            break;
        }
        q /= qn;
        let coeffs = residual.transpose() * &q;
        residual -= &q * coeffs.transpose();
        basis.push(q);

        let r2 = (T::one() - residual.norm_squared() / total).max(r2_prev).min(T::one());
        edges.push(LearnedEdge {
            i,
            j,
            weight: r2 - r2_prev,
            r2,
        });
        r2_prev = r2;
    }
    Ok(LearnedGraph::new(d, edges))
}

/// R² of `Z` regressed onto the ratio columns of every prefix of `edges`,
/// recomputed from scratch with a QR factorization.
pub fn explained_variance_trace<T: Scalar>(z: &DMatrix<T>, edges: &[(usize, usize)]) -> Vec<T> {
    let total = z.norm_squared();
    (1..=edges.len())
        .map(|k| {
            let x = DMatrix::from_fn(z.nrows(), k, |r, c| {
                let (i, j) = edges[c];
                z[(r, i)] - z[(r, j)]
            });
            let q = orthonormal_columns(&x);
            let fitted = &q * (q.transpose() * z);
            fitted.norm_squared() / total
        })
        .collect()
}

/// Orthonormal basis of the column space, dropping dependent columns.
fn orthonormal_columns<T: Scalar>(x: &DMatrix<T>) -> DMatrix<T> {
    let mut cols: Vec<DVector<T>> = Vec::new();
    for c in x.column_iter() {
        let mut v = c.clone_owned();
        for _ in 0..2 {
            for b in &cols {
                let p = b.dot(&v);
                v.axpy(-p, b, T::one());
            }
        }
        let nv = v.norm();
        if nv > lit::<T>(SPAN_TOLERANCE) * c.norm() && nv > T::zero() {
            cols.push(v / nv);
        }
    }
    if cols.is_empty() {
        DMatrix::zeros(x.nrows(), 0)
    } else {
        DMatrix::from_columns(&cols)
    }
}

/// Cumulative share of variance of the leading principal components of `Z`.
pub fn pca_cumulative_variance<T: Scalar>(z: &DMatrix<T>) -> Vec<T> {
    let cov = z.transpose() * z;
    let eig = EigenDecomposition::new(&cov);
    let total: T = eig.values().iter().map(|&v| v.max(T::zero())).fold(T::zero(), |a, b| a + b);
    let mut acc = T::zero();
    eig.values()
        .iter()
        .map(|&v| {
            acc += v.max(T::zero());
            acc / total
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::learning::double_center;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_data(n: usize, d: usize, seed: u64) -> PreprocessedData<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = DMatrix::from_fn(n, d, |_, _| rng.random_range(0.1..10.0));
        double_center(&x).unwrap()
    }

    #[test]
    fn single_direction_picks_that_ratio() {
        let t: [f64; 5] = [0.3, -1.2, 2.0, 0.7, -0.4];
        let x = DMatrix::from_fn(5, 3, |r, c| match c {
            0 => t[r].exp(),
            1 => (-t[r]).exp(),
            _ => 1.0,
        });
        let data = double_center(&x).unwrap();
        let g = stepwise_select(&data, &StepwiseOptions::default()).unwrap();
        assert_eq!((g.edges()[0].i, g.edges()[0].j), (0, 1));
        assert!((g.edges()[0].r2 - 1.0).abs() < 1e-12);
        assert_eq!(g.len(), 1);
    }

    #[test]
    fn full_rank_data_reaches_one() {
        let data = random_data(50, 4, 1);
        let g = stepwise_select(&data, &StepwiseOptions::default()).unwrap();
        assert_eq!(g.len(), 3);
        assert!((g.edges()[2].r2 - 1.0).abs() < 1e-8);
        let t = g.trace();
        assert!(t.windows(2).all(|w| w[1] >= w[0]));
        let w = g.weight_matrix().unwrap();
        assert!(w.edges().iter().all(|e| e.2 > 0.0));
    }

    #[test]
    fn matches_from_scratch_regression() {
        for seed in 0..5 {
            let data = random_data(30, 6, seed);
            let g = stepwise_select(
                &data,
                &StepwiseOptions {
                    max_edges: Some(8),
                    stop_r2: 2.0,
                },
            )
            .unwrap();
            let pairs: Vec<_> = g.edges().iter().map(|e| (e.i, e.j)).collect();
            let oracle = explained_variance_trace(data.z(), &pairs);
            for (e, r) in g.edges().iter().zip(&oracle) {
                assert!((e.r2 - r).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn zero_variance_is_degenerate() {
        let data = double_center(&DMatrix::from_element(4, 3, 2.0)).unwrap();
        assert!(matches!(
            stepwise_select(&data, &StepwiseOptions::default()),
            Err(Error::Degenerate(_))
        ));
    }

    #[test]
    fn too_many_edges_rejected() {
        let data = random_data(10, 3, 3);
        let opts = StepwiseOptions {
            max_edges: Some(4),
            stop_r2: 1.0,
        };
        assert!(stepwise_select(&data, &opts).is_err());
    }
}
