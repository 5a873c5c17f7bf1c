//! Weighted graphs, their Laplacians, incidence matrices and connected
//! components.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::linalg::{max_abs, EigenDecomposition};
use crate::scalar::{lit, Scalar};

/// Symmetric, nonnegative edge-weight matrix with zero diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightMatrix<T: Scalar> {
    w: DMatrix<T>,
}

impl<T: Scalar> WeightMatrix<T> {
    /// Validates `w` and stores it. Entries that differ from their mirror by
    /// less than the structural tolerance are averaged so the stored matrix
    /// is exactly symmetric.
    pub fn new(w: DMatrix<T>) -> Result<Self> {
        check_square(&w)?;
        check_entries(&w)?;
        let d = w.nrows();
        let tol = T::structural_tolerance();
        for i in 0..d {
            for j in (i + 1)..d {
                let (a, b) = (w[(i, j)], w[(j, i)]);
                if (a - b).abs() > tol * a.abs().max(b.abs()).max(T::one()) {
                    return Err(Error::InvalidWeights {
                        invariant: "symmetry",
                        detail: format!(
                            "w[{},{}] = {} differs from w[{},{}] = {}",
                            i + 1,
                            j + 1,
                            a,
                            j + 1,
                            i + 1,
                            b
                        ),
                    });
                }
            }
        }
        let w = (&w + w.transpose()) * lit::<T>(0.5);
        Ok(Self { w })
    }

    /// Graph without edges.
    pub fn zeros(d: usize) -> Self {
        Self {
            w: DMatrix::zeros(d, d),
        }
    }

    /// Complete graph with all weights `1/D`, the weights of the classical
    /// Aitchison geometry.
    pub fn aitchison(d: usize) -> Self {
        let v = T::one() / lit::<T>(d as f64);
        Self {
            w: DMatrix::from_fn(d, d, |i, j| if i == j { T::zero() } else { v }),
        }
    }

    /// Builds a graph from zero-based `(i, j, w)` triples.
    pub fn from_edges(d: usize, edges: &[(usize, usize, T)]) -> Result<Self> {
        let mut w = DMatrix::zeros(d, d);
        for &(i, j, v) in edges {
            if i >= d || j >= d {
                return Err(Error::InvalidWeights {
                    invariant: "vertex range",
                    detail: format!("edge ({}, {}) outside 1..={}", i + 1, j + 1, d),
                });
            }
            if i == j {
                return Err(Error::InvalidWeights {
                    invariant: "zero diagonal",
                    detail: format!("self-loop at vertex {}", i + 1),
                });
            }
            if w[(i, j)] != T::zero() {
                return Err(Error::InvalidWeights {
                    invariant: "unique edges",
                    detail: format!("edge ({}, {}) listed twice", i + 1, j + 1),
                });
            }
            w[(i, j)] = v;
            w[(j, i)] = v;
        }
        check_entries(&w)?;
        Ok(Self { w })
    }

    pub fn dim(&self) -> usize {
        self.w.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<T> {
        &self.w
    }

    pub fn get(&self, i: usize, j: usize) -> T {
        self.w[(i, j)]
    }

    /// Edges `(i, j, w_ij)` with `i < j` and nonzero weight, in
    /// lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize, T)> {
        let d = self.dim();
        let mut out = Vec::new();
        for i in 0..d {
            for j in (i + 1)..d {
                let v = self.w[(i, j)];
                if v != T::zero() {
                    out.push((i, j, v));
                }
            }
        }
        out
    }

    /// Weighted degrees `d_i = Σ_j w_ij`.
    pub fn degrees(&self) -> DVector<T> {
        DVector::from_iterator(self.dim(), self.w.row_iter().map(|r| r.sum()))
    }
}

fn check_square<T: Scalar>(w: &DMatrix<T>) -> Result<()> {
    if w.nrows() != w.ncols() {
        return Err(Error::InvalidWeights {
            invariant: "square shape",
            detail: format!("{} rows but {} columns", w.nrows(), w.ncols()),
        });
    }
    Ok(())
}

fn check_entries<T: Scalar>(w: &DMatrix<T>) -> Result<()> {
    for i in 0..w.nrows() {
        for j in 0..w.ncols() {
            let v = w[(i, j)];
            if !v.is_finite() {
                return Err(Error::InvalidWeights {
                    invariant: "finiteness",
                    detail: format!("entry at row {}, column {} is {}", i + 1, j + 1, v),
                });
            }
            if i == j && v != T::zero() {
                return Err(Error::InvalidWeights {
                    invariant: "zero diagonal",
                    detail: format!("diagonal entry {} is {}", i + 1, v),
                });
            }
            if v < T::zero() {
                return Err(Error::InvalidWeights {
                    invariant: "nonnegativity",
                    detail: format!("entry at row {}, column {} is {}", i + 1, j + 1, v),
                });
            }
        }
    }
    Ok(())
}

/// Symmetrizes a nonnegative, zero-diagonal matrix via `(u_ij + u_ji)/2`.
/// The quadratic form of the result equals that of `u`.
pub fn symmetrize<T: Scalar>(u: &DMatrix<T>) -> Result<WeightMatrix<T>> {
    check_square(u)?;
    check_entries(u)?;
    Ok(WeightMatrix {
        w: (u + u.transpose()) * lit::<T>(0.5),
    })
}

/// Partition of the vertex set into connected components.
///
/// Components are ordered by their smallest vertex and each lists its
/// vertices in ascending order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentPartition {
    components: Vec<Vec<usize>>,
    membership: Vec<usize>,
}

impl ComponentPartition {
    /// Builds a partition from explicit vertex sets.
    pub fn from_components(d: usize, mut components: Vec<Vec<usize>>) -> Result<Self> {
        let mut membership = vec![usize::MAX; d];
        for c in components.iter_mut() {
            c.sort_unstable();
        }
        components.sort_by_key(|c| c.first().copied().unwrap_or(usize::MAX));
        for (m, c) in components.iter().enumerate() {
            if c.is_empty() {
                return Err(Error::InvalidParameter {
                    name: "components",
                    detail: "empty component".into(),
                });
            }
            for &v in c {
                if v >= d || membership[v] != usize::MAX {
                    return Err(Error::InvalidParameter {
                        name: "components",
                        detail: format!("vertex {} out of range or repeated", v + 1),
                    });
                }
                membership[v] = m;
            }
        }
        if membership.contains(&usize::MAX) {
            return Err(Error::InvalidParameter {
                name: "components",
                detail: "components do not cover every vertex".into(),
            });
        }
        Ok(Self {
            components,
            membership,
        })
    }

    /// A single component holding every vertex.
    pub fn single(d: usize) -> Self {
        Self {
            components: vec![(0..d).collect()],
            membership: vec![0; d],
        }
    }

    pub fn dim(&self) -> usize {
        self.membership.len()
    }

    /// Number of components `M`.
    pub fn count(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[Vec<usize>] {
        &self.components
    }

    pub fn component(&self, m: usize) -> &[usize] {
        &self.components[m]
    }

    /// Index of the component containing vertex `v`.
    pub fn component_of(&self, v: usize) -> usize {
        self.membership[v]
    }

    /// Block ordering: entry `k` is the original vertex placed at position
    /// `k` when the components are laid out contiguously.
    pub fn permutation(&self) -> Vec<usize> {
        self.components.iter().flatten().copied().collect()
    }

    /// Indicator vector `1_{i ∈ V_m}`.
    pub fn indicator<T: Scalar>(&self, m: usize) -> DVector<T> {
        DVector::from_fn(self.dim(), |i, _| {
            if self.membership[i] == m {
                T::one()
            } else {
                T::zero()
            }
        })
    }

    /// Projects `v` onto the orthogonal complement of the component
    /// indicators, i.e. removes the per-component mean.
    pub fn remove_component_means<T: Scalar>(&self, v: &DVector<T>) -> DVector<T> {
        let mut out = v.clone();
        for c in &self.components {
            let mean = c.iter().fold(T::zero(), |a, &i| a + v[i]) / lit::<T>(c.len() as f64);
            for &i in c {
                out[i] -= mean;
            }
        }
        out
    }
}

/// Connected components by breadth-first search over nonzero weights.
pub fn connected_components<T: Scalar>(w: &WeightMatrix<T>) -> ComponentPartition {
    components_of_pattern(w.matrix(), |v| v != T::zero())
}

pub(crate) fn components_of_pattern<T: Scalar>(
    m: &DMatrix<T>,
    is_edge: impl Fn(T) -> bool,
) -> ComponentPartition {
    let d = m.nrows();
    let mut membership = vec![usize::MAX; d];
    let mut components = Vec::new();
    for start in 0..d {
        if membership[start] != usize::MAX {
            continue;
        }
        let id = components.len();
        let mut comp = vec![start];
        membership[start] = id;
        let mut head = 0;
        while head < comp.len() {
            let v = comp[head];
            head += 1;
            for u in 0..d {
                if u != v && membership[u] == usize::MAX && is_edge(m[(v, u)]) {
                    membership[u] = id;
                    comp.push(u);
                }
            }
        }
        comp.sort_unstable();
        components.push(comp);
    }
    ComponentPartition {
        components,
        membership,
    }
}

/// Graph Laplacian `L = diag(W1) - W` together with its component
/// structure and spectrum.
#[derive(Debug, Clone, PartialEq)]
pub struct Laplacian<T: Scalar> {
    weights: WeightMatrix<T>,
    matrix: DMatrix<T>,
    degrees: DVector<T>,
    partition: ComponentPartition,
    spectrum: EigenDecomposition<T>,
}

impl<T: Scalar> Laplacian<T> {
    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<T> {
        &self.matrix
    }

    pub fn weights(&self) -> &WeightMatrix<T> {
        &self.weights
    }

    pub fn degrees(&self) -> &DVector<T> {
        &self.degrees
    }

    pub fn partition(&self) -> &ComponentPartition {
        &self.partition
    }

    /// Number of connected components `M`.
    pub fn component_count(&self) -> usize {
        self.partition.count()
    }

    /// Indicator vectors of the components; they span the kernel.
    pub fn kernel_basis(&self) -> Vec<DVector<T>> {
        (0..self.partition.count())
            .map(|m| self.partition.indicator(m))
            .collect()
    }

    /// Eigendecomposition with the zero count fixed to `M`.
    pub fn spectrum(&self) -> &EigenDecomposition<T> {
        &self.spectrum
    }

    /// Count of eigenvalues at or below the shared zero threshold. Should
    /// agree with [`Self::component_count`].
    pub fn numerical_zero_count(&self) -> usize {
        let values = self.spectrum.values();
        let max = values.iter().fold(T::zero(), |a, &v| a.max(v));
        let thr = T::zero_tolerance() * max.max(T::one());
        values.iter().filter(|&&v| v <= thr).count()
    }

    /// Sub-matrix for component `m` with rows/columns in the given vertex
    /// order.
    pub fn block(&self, order: &[usize]) -> DMatrix<T> {
        DMatrix::from_fn(order.len(), order.len(), |a, b| {
            self.matrix[(order[a], order[b])]
        })
    }

    /// `P L Pᵀ` for the component-contiguous permutation.
    pub fn block_diagonal(&self) -> DMatrix<T> {
        self.block(&self.partition.permutation())
    }

    /// `L^m` by repeated multiplication.
    pub fn power(&self, m: u32) -> DMatrix<T> {
        let d = self.dim();
        let mut out = DMatrix::identity(d, d);
        for _ in 0..m {
            out = &out * &self.matrix;
        }
        out
    }

    /// Moore-Penrose pseudo-inverse `L⁺`.
    pub fn pseudo_inverse(&self) -> DMatrix<T> {
        self.spectrum.pseudo_inverse()
    }
}

/// Builds `L = diag(W1) - W`, its connected components and spectrum.
pub fn build_laplacian<T: Scalar>(w: &WeightMatrix<T>) -> Laplacian<T> {
    let degrees = w.degrees();
    let matrix = DMatrix::from_diagonal(&degrees) - w.matrix();
    let partition = connected_components(w);
    let spectrum = EigenDecomposition::with_zero_count(&matrix, partition.count());
    Laplacian {
        weights: w.clone(),
        matrix,
        degrees,
        partition,
        spectrum,
    }
}

impl<T: Scalar> From<&WeightMatrix<T>> for Laplacian<T> {
    fn from(w: &WeightMatrix<T>) -> Self {
        build_laplacian(w)
    }
}

/// Weighted incidence matrix with one row per ordered edge `(l, j)`,
/// `w_lj ≠ 0`, in lexicographic order. Row `(l, j)` holds `w^p` at column
/// `l` and `-w^p` at column `j`, so every undirected edge appears in both
/// orientations and `dᵀd = 2L` for `p = 1/2`.
#[derive(Debug, Clone, PartialEq)]
pub struct IncidenceMatrix<T: Scalar> {
    matrix: DMatrix<T>,
    edges: Vec<(usize, usize)>,
}

impl<T: Scalar> IncidenceMatrix<T> {
    pub fn matrix(&self) -> &DMatrix<T> {
        &self.matrix
    }

    /// Ordered edge of each row.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Weighted differences `(d f)_e`.
    pub fn apply(&self, f: &DVector<T>) -> DVector<T> {
        &self.matrix * f
    }
}

/// Incidence matrix `d_{W^p}` with the exponent applied entrywise.
pub fn incidence_matrix<T: Scalar>(w: &WeightMatrix<T>, exponent: T) -> IncidenceMatrix<T> {
    let d = w.dim();
    let mut edges = Vec::new();
    for l in 0..d {
        for j in 0..d {
            if l != j && w.get(l, j) != T::zero() {
                edges.push((l, j));
            }
        }
    }
    let mut matrix = DMatrix::zeros(edges.len(), d);
    for (e, &(l, j)) in edges.iter().enumerate() {
        let v = w.get(l, j).powf(exponent);
        matrix[(e, l)] = v;
        matrix[(e, j)] = -v;
    }
    IncidenceMatrix { matrix, edges }
}

/// `fᵀ L g`.
pub fn quadratic_form<T: Scalar>(l: &Laplacian<T>, f: &DVector<T>, g: &DVector<T>) -> Result<T> {
    let d = l.dim();
    for v in [f, g] {
        if v.len() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: v.len(),
            });
        }
    }
    Ok(f.dot(&(l.matrix() * g)))
}

/// Largest entry of `|P L Pᵀ|` that couples two different components.
/// Zero for every valid Laplacian.
pub fn off_block_coupling<T: Scalar>(l: &Laplacian<T>) -> T {
    let p = l.partition();
    let mut worst = T::zero();
    for i in 0..l.dim() {
        for j in 0..l.dim() {
            if p.component_of(i) != p.component_of(j) {
                worst = worst.max(l.matrix()[(i, j)].abs());
            }
        }
    }
    worst
}

/// Relative residual `‖dᵀd − 2L‖_max / ‖L‖_max` of the incidence identity.
pub fn incidence_residual<T: Scalar>(l: &Laplacian<T>) -> T {
    let d = incidence_matrix(l.weights(), lit(0.5));
    let lhs = d.matrix().transpose() * d.matrix();
    let scale = max_abs(l.matrix()).max(T::one());
    max_abs(&(lhs - l.matrix() * lit::<T>(2.0))) / scale
}
