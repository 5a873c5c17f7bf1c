//! Log-ratio transforms adapted to a graph: weighted clr, the
//! Cholesky-based (GILR1) and spectral (GILR2) isometric maps, the
//! classical pivot ilr and the graph Fourier transform.
//!
//! Every map is linear in `log x`. A [`GilrBasis`] stores the forward
//! matrix in the caller's vertex labels together with a right inverse, so
//! coordinates can be mapped back to compositions.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::geometry::{same_dim, Composition, GraphSimplexSpec};
use crate::graph::{components_of_pattern, ComponentPartition, Laplacian};
use crate::linalg::{cholesky_upper, solve_spd};
pub use crate::linalg::EigenDecomposition;
use crate::scalar::{lit, Scalar};

/// Which map a [`GilrBasis`] realizes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GilrKind {
    /// Cholesky-type factors with the last row of each block removed
    /// (`α = 0`, `D − M` coordinates).
    Gilr1Reduced,
    /// Ordinary Cholesky factors of `αI + P_m L_m P_mᵀ` (`α > 0`, `D`
    /// coordinates).
    Gilr1Full,
    /// Scaled projections onto the eigenvectors of `αI + L`.
    Gilr2,
    /// `(αI + L)^{1/2}`.
    WeightedClr,
}

/// Linear isometry `log x ↦ F log x` with a right inverse.
#[derive(Debug, Clone, PartialEq)]
pub struct GilrBasis<T: Scalar> {
    kind: GilrKind,
    alpha: T,
    forward: DMatrix<T>,
    inverse: DMatrix<T>,
    partition: ComponentPartition,
    orderings: Vec<Vec<usize>>,
    row_components: Option<Vec<usize>>,
    frequencies: Option<DVector<T>>,
}

impl<T: Scalar> GilrBasis<T> {
    /// GILR1 basis. `orderings[m]` lists the vertices of component `m` in
    /// the order the triangular factor is built; `None` keeps ascending
    /// order.
    pub fn gilr1(l: &Laplacian<T>, alpha: T, orderings: Option<&[Vec<usize>]>) -> Result<Self> {
        check_alpha(alpha)?;
        let partition = l.partition().clone();
        let orderings = match orderings {
            Some(o) => {
                validate_orderings(&partition, o)?;
                o.to_vec()
            }
            None => partition.components().to_vec(),
        };
        let reduced = alpha == T::zero();
        let d = l.dim();
        let rows = if reduced { d - partition.count() } else { d };
        let mut forward = DMatrix::zeros(rows, d);
        let mut row_components = Vec::with_capacity(rows);
        let mut row = 0;
        for (m, order) in orderings.iter().enumerate() {
            let block = l.block(order);
            let n = order.len();
            let (factor, keep) = if reduced {
                (laplacian_cholesky(&block)?, n - 1)
            } else {
                let shifted = block + DMatrix::identity(n, n) * alpha;
                (cholesky_upper(&shifted)?, n)
            };
            for r in 0..keep {
                for (c, &v) in order.iter().enumerate() {
                    forward[(row, v)] = factor[(r, c)];
                }
                row_components.push(m);
                row += 1;
            }
        }
        let inverse = if reduced {
            right_inverse(&forward)?
        } else {
            forward
                .clone()
                .try_inverse()
                .ok_or_else(|| Error::Singular("GILR1 factor is not invertible".into()))?
        };
        Ok(Self {
            kind: if reduced {
                GilrKind::Gilr1Reduced
            } else {
                GilrKind::Gilr1Full
            },
            alpha,
            forward,
            inverse,
            partition,
            orderings,
            row_components: Some(row_components),
            frequencies: None,
        })
    }

    /// GILR2 basis from the eigendecomposition of `αI + L`; coordinates are
    /// ordered by decreasing eigenvalue.
    pub fn gilr2(l: &Laplacian<T>, alpha: T) -> Result<Self> {
        check_alpha(alpha)?;
        let eig = shifted_spectrum(l, alpha);
        let rank = eig.rank();
        let d = l.dim();
        let mut forward = DMatrix::zeros(rank, d);
        let mut inverse = DMatrix::zeros(d, rank);
        for k in 0..rank {
            let s = eig.values()[k].sqrt();
            let u = eig.vectors().column(k);
            forward.set_row(k, &(u.transpose() * s));
            inverse.set_column(k, &(u / s));
        }
        let frequencies = DVector::from_iterator(rank, eig.values().iter().take(rank).copied());
        Ok(Self {
            kind: GilrKind::Gilr2,
            alpha,
            forward,
            inverse,
            partition: l.partition().clone(),
            orderings: Vec::new(),
            row_components: None,
            frequencies: Some(frequencies),
        })
    }

    /// Weighted clr basis `(αI + L)^{1/2}`; its inverse is the
    /// pseudo-inverse square root.
    pub fn weighted_clr(l: &Laplacian<T>, alpha: T) -> Result<Self> {
        check_alpha(alpha)?;
        let eig = shifted_spectrum(l, alpha);
        Ok(Self {
            kind: GilrKind::WeightedClr,
            alpha,
            forward: eig.sqrt(),
            inverse: eig.spectral_function(|v| T::one() / v.sqrt()),
            partition: l.partition().clone(),
            orderings: Vec::new(),
            row_components: None,
            frequencies: None,
        })
    }

    pub fn kind(&self) -> GilrKind {
        self.kind
    }

    pub fn alpha(&self) -> T {
        self.alpha
    }

    /// Forward matrix (coordinates × parts).
    pub fn forward(&self) -> &DMatrix<T> {
        &self.forward
    }

    /// Right inverse of the forward matrix (parts × coordinates).
    pub fn inverse(&self) -> &DMatrix<T> {
        &self.inverse
    }

    pub fn partition(&self) -> &ComponentPartition {
        &self.partition
    }

    /// Vertex order used for each component (GILR1 only).
    pub fn orderings(&self) -> &[Vec<usize>] {
        &self.orderings
    }

    /// Component of each coordinate (GILR1 only).
    pub fn row_components(&self) -> Option<&[usize]> {
        self.row_components.as_deref()
    }

    /// Eigenvalue of each coordinate (GILR2 only).
    pub fn frequencies(&self) -> Option<&DVector<T>> {
        self.frequencies.as_ref()
    }

    pub fn input_dim(&self) -> usize {
        self.forward.ncols()
    }

    pub fn output_dim(&self) -> usize {
        self.forward.nrows()
    }

    pub fn apply(&self, x: &Composition<T>) -> Result<DVector<T>> {
        same_dim(self.input_dim(), x.dim())?;
        Ok(&self.forward * x.log())
    }

    /// `exp(F⁺ z)`. For `α = 0` this is the representative whose log has
    /// zero mean on every component.
    pub fn invert(&self, z: &DVector<T>) -> Result<Composition<T>> {
        same_dim(self.output_dim(), z.len())?;
        Composition::from_log(&(&self.inverse * z))
    }

    /// Like [`Self::invert`] but, for `α = 0`, closes the result onto the
    /// given graph simplex. For `α > 0` the positive vector is returned
    /// unchanged.
    pub fn invert_on(&self, z: &DVector<T>, spec: &GraphSimplexSpec<T>) -> Result<Composition<T>> {
        let x = self.invert(z)?;
        if self.alpha == T::zero() {
            spec.close(x.values())
        } else {
            Ok(x)
        }
    }
}

fn check_alpha<T: Scalar>(alpha: T) -> Result<()> {
    if !(alpha >= T::zero()) || !alpha.is_finite() {
        return Err(Error::InvalidParameter {
            name: "alpha",
            detail: format!("must be finite and nonnegative, got {alpha}"),
        });
    }
    Ok(())
}

fn shifted_spectrum<T: Scalar>(l: &Laplacian<T>, alpha: T) -> EigenDecomposition<T> {
    if alpha == T::zero() {
        l.spectrum().clone()
    } else {
        let d = l.dim();
        let m = l.matrix() + DMatrix::identity(d, d) * alpha;
        EigenDecomposition::with_zero_count(&m, 0)
    }
}

/// `Fᵀ (F Fᵀ)⁻¹` for a matrix with full row rank.
fn right_inverse<T: Scalar>(f: &DMatrix<T>) -> Result<DMatrix<T>> {
    if f.nrows() == 0 {
        return Ok(DMatrix::zeros(f.ncols(), 0));
    }
    let gram = f * f.transpose();
    let x = solve_spd(&gram, &DMatrix::identity(f.nrows(), f.nrows()))
        .ok_or_else(|| Error::Singular("forward map does not have full row rank".into()))?;
    Ok(f.transpose() * x)
}

fn validate_orderings(partition: &ComponentPartition, orderings: &[Vec<usize>]) -> Result<()> {
    if orderings.len() != partition.count() {
        return Err(Error::InvalidPermutation {
            component: orderings.len().min(partition.count()),
            detail: format!(
                "expected {} orderings, got {}",
                partition.count(),
                orderings.len()
            ),
        });
    }
    for (m, order) in orderings.iter().enumerate() {
        let mut sorted = order.clone();
        sorted.sort_unstable();
        if sorted != partition.component(m) {
            return Err(Error::InvalidPermutation {
                component: m,
                detail: "ordering is not a permutation of the component's vertices".into(),
            });
        }
    }
    Ok(())
}

/// Orderings that rotate each given pivot vertex to the front of its
/// component. Components without a pivot keep ascending order.
pub fn pivot_orderings(partition: &ComponentPartition, pivots: &[usize]) -> Result<Vec<Vec<usize>>> {
    let mut orderings = partition.components().to_vec();
    let mut seen = vec![false; partition.count()];
    for &p in pivots {
        if p >= partition.dim() {
            return Err(Error::InvalidParameter {
                name: "pivot",
                detail: format!("vertex {} outside 1..={}", p + 1, partition.dim()),
            });
        }
        let m = partition.component_of(p);
        if seen[m] {
            return Err(Error::InvalidPermutation {
                component: m,
                detail: "more than one pivot in the component".into(),
            });
        }
        seen[m] = true;
        let pos = orderings[m].iter().position(|&v| v == p).unwrap();
        orderings[m].rotate_left(pos);
    }
    Ok(orderings)
}

/// Upper triangular `C` with `CᵀC = L_m`, zero last row, nonnegative
/// diagonal and `C1 = 0`, for the Laplacian block of one connected
/// component. Built from the QR factorization of the square root of the
/// block.
pub fn laplacian_cholesky<T: Scalar>(block: &DMatrix<T>) -> Result<DMatrix<T>> {
    let n = block.nrows();
    if n != block.ncols() {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: block.ncols(),
        });
    }
    let parts = components_of_pattern(block, |v| v != T::zero()).count();
    if parts > 1 {
        return Err(Error::Disconnected { components: parts });
    }
    if n <= 1 {
        return Ok(DMatrix::zeros(n, n));
    }
    let root = EigenDecomposition::with_zero_count(block, 1).sqrt();
    let mut r = root.qr().r();
    for i in 0..n {
        if r[(i, i)] < T::zero() {
            let neg = -r.row(i);
            r.set_row(i, &neg);
        }
    }
    for j in 0..n {
        r[(n - 1, j)] = T::zero();
    }
    Ok(r)
}

/// `(αI + L)^{1/2} log x`.
pub fn weighted_clr<T: Scalar>(x: &Composition<T>, l: &Laplacian<T>, alpha: T) -> Result<DVector<T>> {
    GilrBasis::weighted_clr(l, alpha)?.apply(x)
}

/// `(αI + L) log x`: each log-part centered by its weighted neighborhood,
/// entry `j` equal to `log(x_j^{α+d_j} / Π_{i∼j} x_i^{w_ij})`.
pub fn centered_neighborhood_map<T: Scalar>(
    x: &Composition<T>,
    l: &Laplacian<T>,
    alpha: T,
) -> Result<DVector<T>> {
    check_alpha(alpha)?;
    same_dim(l.dim(), x.dim())?;
    let lx = x.log();
    Ok(l.matrix() * &lx + lx * alpha)
}

/// GILR1 coordinates of `x`.
pub fn gilr1<T: Scalar>(
    x: &Composition<T>,
    l: &Laplacian<T>,
    alpha: T,
    orderings: Option<&[Vec<usize>]>,
) -> Result<DVector<T>> {
    GilrBasis::gilr1(l, alpha, orderings)?.apply(x)
}

/// Inverse of GILR1; on-simplex for `α = 0`.
pub fn gilr1_inverse<T: Scalar>(
    z: &DVector<T>,
    basis: &GilrBasis<T>,
    spec: &GraphSimplexSpec<T>,
) -> Result<Composition<T>> {
    if !matches!(basis.kind(), GilrKind::Gilr1Reduced | GilrKind::Gilr1Full) {
        return Err(Error::InvalidParameter {
            name: "basis",
            detail: format!("expected a GILR1 basis, got {:?}", basis.kind()),
        });
    }
    basis.invert_on(z, spec)
}

/// GILR2 coordinates `(√λ_i ⟨u_i, log x⟩)` over the nonzero eigenvalues of
/// `αI + L`, largest first.
pub fn gilr2<T: Scalar>(x: &Composition<T>, l: &Laplacian<T>, alpha: T) -> Result<DVector<T>> {
    GilrBasis::gilr2(l, alpha)?.apply(x)
}

/// Inverse of GILR2, `z ↦ Σ z_i λ_i^{-1/2} u_i` followed by `exp` and, for
/// `α = 0`, closure.
pub fn gilr2_inverse<T: Scalar>(
    z: &DVector<T>,
    basis: &GilrBasis<T>,
    spec: &GraphSimplexSpec<T>,
) -> Result<Composition<T>> {
    if basis.kind() != GilrKind::Gilr2 {
        return Err(Error::InvalidParameter {
            name: "basis",
            detail: format!("expected a GILR2 basis, got {:?}", basis.kind()),
        });
    }
    basis.invert_on(z, spec)
}

/// Compositions `v_i` with `F(v_i) = e_i`; they are orthonormal for the
/// `(W, α)` inner product.
pub fn orthonormal_basis<T: Scalar>(
    basis: &GilrBasis<T>,
    spec: &GraphSimplexSpec<T>,
) -> Result<Vec<Composition<T>>> {
    let k = basis.output_dim();
    (0..k)
        .map(|i| {
            let mut e = DVector::zeros(k);
            e[i] = T::one();
            basis.invert_on(&e, spec)
        })
        .collect()
}

/// Classical clr: log parts centered by the log geometric mean.
pub fn clr<T: Scalar>(x: &Composition<T>) -> DVector<T> {
    let lx = x.log();
    let mean = lx.sum() / lit::<T>(lx.len() as f64);
    lx.map(|v| v - mean)
}

/// Pivot ilr: coordinate `j` is
/// `√((D−j)/(D−j+1)) log(x_j / gm(x_{j+1..D}))` (one-based `j`).
pub fn pivot_ilr<T: Scalar>(x: &Composition<T>) -> DVector<T> {
    let d = x.dim();
    let lx = x.log();
    DVector::from_fn(d.saturating_sub(1), |j, _| {
        let rest = (d - j - 1) as f64;
        let mean = lx.rows(j + 1, d - j - 1).sum() / lit::<T>(rest);
        lit::<T>((rest / (rest + 1.0)).sqrt()) * (lx[j] - mean)
    })
}

/// One entry of a graph Fourier transform.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FourierCoefficient<T> {
    /// Laplacian eigenvalue.
    pub frequency: T,
    /// `⟨u_i, log x⟩`.
    pub projection: T,
}

/// Projections of `log x` onto the Laplacian eigenvectors, ordered by
/// increasing frequency. Kernel eigenvalues are reported as exactly zero.
pub fn graph_fourier<T: Scalar>(x: &Composition<T>, l: &Laplacian<T>) -> Result<Vec<FourierCoefficient<T>>> {
    same_dim(l.dim(), x.dim())?;
    let eig = l.spectrum();
    let lx = x.log();
    let d = l.dim();
    Ok((0..d)
        .rev()
        .map(|k| FourierCoefficient {
            frequency: if k >= eig.rank() { T::zero() } else { eig.values()[k] },
            projection: eig.vectors().column(k).dot(&lx),
        })
        .collect())
}
