//! Dense linear algebra helpers built on nalgebra.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::scalar::{lit, Scalar};

/// Spectral decomposition of a symmetric positive semi-definite matrix
/// with eigenvalues ordered from largest to smallest.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenDecomposition<T: Scalar> {
    values: DVector<T>,
    vectors: DMatrix<T>,
    zero_count: usize,
}

impl<T: Scalar> EigenDecomposition<T> {
    /// Decomposes `m`, counting eigenvalues below
    /// `zero_tolerance * max(1, lambda_max)` as zero. Slightly negative
    /// round-off eigenvalues are kept as computed.
    pub fn new(m: &DMatrix<T>) -> Self {
        let (values, vectors) = sorted_eigen(m);
        let threshold = zero_threshold(&values);
        let zero_count = values.iter().filter(|&&v| v <= threshold).count();
        Self {
            values,
            vectors,
            zero_count,
        }
    }

    /// Decomposes `m` but takes the number of zero eigenvalues from the
    /// caller (e.g. a combinatorial component count).
    pub fn with_zero_count(m: &DMatrix<T>, zero_count: usize) -> Self {
        let (values, vectors) = sorted_eigen(m);
        assert!(zero_count <= values.len());
        Self {
            values,
            vectors,
            zero_count,
        }
    }

    pub fn dim(&self) -> usize {
        self.values.len()
    }

    /// Eigenvalues, largest first.
    pub fn values(&self) -> &DVector<T> {
        &self.values
    }

    /// Orthonormal eigenvectors as columns, in the order of [`Self::values`].
    pub fn vectors(&self) -> &DMatrix<T> {
        &self.vectors
    }

    pub fn zero_count(&self) -> usize {
        self.zero_count
    }

    /// Number of eigenvalues treated as nonzero.
    pub fn rank(&self) -> usize {
        self.values.len() - self.zero_count
    }

    /// Eigenvectors of the nonzero eigenvalues (first `rank` columns).
    pub fn range_basis(&self) -> DMatrix<T> {
        self.vectors.columns(0, self.rank()).into_owned()
    }

    /// Eigenvectors spanning the numerical kernel.
    pub fn kernel_basis(&self) -> DMatrix<T> {
        let r = self.rank();
        self.vectors.columns(r, self.zero_count).into_owned()
    }

    pub fn reconstruct(&self) -> DMatrix<T> {
        let d = DMatrix::from_diagonal(&self.values);
        &self.vectors * d * self.vectors.transpose()
    }

    /// `U f(Σ) Uᵀ` over the nonzero eigenvalues; kernel directions map to 0.
    pub fn spectral_function(&self, f: impl Fn(T) -> T) -> DMatrix<T> {
        let n = self.dim();
        let mut out = DMatrix::zeros(n, n);
        for k in 0..self.rank() {
            let u = self.vectors.column(k);
            let s = f(self.values[k]);
            out += (u * u.transpose()) * s;
        }
        out
    }

    /// Moore-Penrose pseudo-inverse.
    pub fn pseudo_inverse(&self) -> DMatrix<T> {
        self.spectral_function(|v| T::one() / v)
    }

    /// Principal square root; kernel directions stay zero.
    pub fn sqrt(&self) -> DMatrix<T> {
        self.spectral_function(|v| v.sqrt())
    }

    /// Product of the nonzero eigenvalues.
    pub fn pseudo_determinant(&self) -> T {
        (0..self.rank()).fold(T::one(), |acc, k| acc * self.values[k])
    }

    /// Sum of logs of the nonzero eigenvalues.
    pub fn log_pseudo_determinant(&self) -> T {
        (0..self.rank()).fold(T::zero(), |acc, k| acc + self.values[k].ln())
    }
}

fn zero_threshold<T: Scalar>(values: &DVector<T>) -> T {
    let max = values.iter().fold(T::zero(), |acc, &v| acc.max(v));
    T::zero_tolerance() * max.max(T::one())
}

fn sorted_eigen<T: Scalar>(m: &DMatrix<T>) -> (DVector<T>, DMatrix<T>) {
    let n = m.nrows();
    assert_eq!(n, m.ncols(), "eigendecomposition of a non-square matrix");
    if n == 0 {
        return (DVector::zeros(0), DMatrix::zeros(0, 0));
    }
    let sym = (m + m.transpose()) * lit::<T>(0.5);
    let eig = sym.symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    // Stable sort keeps the solver's order for exactly equal eigenvalues.
    order.sort_by(|&a, &b| {
        eig.eigenvalues[b]
            .partial_cmp(&eig.eigenvalues[a])
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let values = DVector::from_iterator(n, order.iter().map(|&k| eig.eigenvalues[k]));
    let mut vectors = DMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        vectors.set_column(dst, &eig.eigenvectors.column(src));
    }
    (values, vectors)
}

/// Upper triangular `R` with `Rᵀ R = m` for a symmetric positive definite
/// matrix.
pub fn cholesky_upper<T: Scalar>(m: &DMatrix<T>) -> Result<DMatrix<T>> {
    let sym = (m + m.transpose()) * lit::<T>(0.5);
    let scale = sym.diagonal().amax().max(T::one());
    let chol = sym
        .cholesky()
        .ok_or_else(|| Error::Singular("matrix is not positive definite".into()))?;
    let r = chol.l().transpose();
    if r.diagonal().iter().any(|&p| p * p <= T::zero_tolerance() * scale) {
        return Err(Error::Singular("matrix is numerically singular".into()));
    }
    Ok(r)
}

/// Solves `a x = b` for symmetric positive definite `a`.
pub fn solve_spd<T: Scalar>(a: &DMatrix<T>, b: &DMatrix<T>) -> Option<DMatrix<T>> {
    let sym = (a + a.transpose()) * lit::<T>(0.5);
    sym.cholesky().map(|c| c.solve(b))
}

/// Largest absolute entry.
pub fn max_abs<T: Scalar>(m: &DMatrix<T>) -> T {
    m.iter().fold(T::zero(), |acc, &v| acc.max(v.abs()))
}

/// The Aitchison centering matrix `I - 11ᵀ/D`.
pub fn centering_matrix<T: Scalar>(d: usize) -> DMatrix<T> {
    let inv = T::one() / lit::<T>(d as f64);
    DMatrix::from_fn(d, d, |i, j| if i == j { T::one() - inv } else { -inv })
}
