//! Compositions modulo the kernel of a symmetric PSD matrix built from
//! arbitrary (possibly signed) log-contrasts.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::geometry::{same_dim, Composition};
use crate::linalg::{centering_matrix, cholesky_upper, max_abs, EigenDecomposition};
use crate::scalar::Scalar;

/// How a [`ContrastMatrix`] was assembled.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ContrastProvenance {
    WeightedCombinations,
    RatioSubsets,
    Explicit,
}

/// `K × D` matrix whose rows are log-contrasts (each row sums to zero).
#[derive(Debug, Clone, PartialEq)]
pub struct ContrastMatrix<T: Scalar> {
    rows: DMatrix<T>,
    provenance: ContrastProvenance,
}

impl<T: Scalar> ContrastMatrix<T> {
    /// Wraps an explicit matrix after checking that every row sums to zero.
    pub fn new(rows: DMatrix<T>) -> Result<Self> {
        Self::with_provenance(rows, ContrastProvenance::Explicit)
    }

    fn with_provenance(rows: DMatrix<T>, provenance: ContrastProvenance) -> Result<Self> {
        if rows.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidContrast("entries must be finite".into()));
        }
        for (k, row) in rows.row_iter().enumerate() {
            let scale = row.amax().max(T::one());
            if row.sum().abs() > T::conformance_tolerance() * scale {
                return Err(Error::InvalidContrast(format!(
                    "row {} sums to {}, not zero",
                    k + 1,
                    row.sum()
                )));
            }
        }
        Ok(Self { rows, provenance })
    }

    pub fn matrix(&self) -> &DMatrix<T> {
        &self.rows
    }

    pub fn provenance(&self) -> ContrastProvenance {
        self.provenance
    }

    pub fn dim(&self) -> usize {
        self.rows.ncols()
    }

    pub fn len(&self) -> usize {
        self.rows.nrows()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.nrows() == 0
    }

    /// Values of every contrast at `x`.
    pub fn evaluate(&self, x: &Composition<T>) -> Result<DVector<T>> {
        same_dim(self.dim(), x.dim())?;
        Ok(&self.rows * x.log())
    }
}

/// One weighted combination `Σ_j w_j log(x_anchor / x_j)`.
#[derive(Debug, Clone, PartialEq)]
pub struct AnchoredCombination<T> {
    pub anchor: usize,
    pub weights: Vec<(usize, T)>,
}

/// Rows with diagonal entry `Σ_j w_ij` at the anchor and `−w_ij` elsewhere.
pub fn contrast_from_weighted_combinations<T: Scalar>(
    d: usize,
    rows: &[AnchoredCombination<T>],
) -> Result<ContrastMatrix<T>> {
    let mut m = DMatrix::zeros(rows.len(), d);
    for (k, row) in rows.iter().enumerate() {
        if row.anchor >= d {
            return Err(Error::InvalidContrast(format!(
                "anchor {} outside 1..={d}",
                row.anchor + 1
            )));
        }
        for &(j, w) in &row.weights {
            if j >= d {
                return Err(Error::InvalidContrast(format!(
                    "index {} outside 1..={d}",
                    j + 1
                )));
            }
            m[(k, row.anchor)] += w;
            m[(k, j)] -= w;
        }
    }
    ContrastMatrix::with_provenance(m, ContrastProvenance::WeightedCombinations)
}

/// Each `D × D` weight matrix `w_k` gives the row
/// `(w_k)_i = Σ_j w_ijk − Σ_j w_jik`, so that the row applied to `log x`
/// equals `Σ_{i,j} log(x_i / x_j) w_ijk`.
pub fn contrast_from_ratio_subsets<T: Scalar>(d: usize, subsets: &[DMatrix<T>]) -> Result<ContrastMatrix<T>> {
    let mut m = DMatrix::zeros(subsets.len(), d);
    for (k, w) in subsets.iter().enumerate() {
        if w.nrows() != d || w.ncols() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: if w.nrows() != d { w.nrows() } else { w.ncols() },
            });
        }
        for i in 0..d {
            m[(k, i)] = w.row(i).sum() - w.column(i).sum();
        }
    }
    ContrastMatrix::with_provenance(m, ContrastProvenance::RatioSubsets)
}

/// Hilbert space of equivalence classes `[log x]` modulo `Ker(L)`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuotientSpace<T: Scalar> {
    matrix: DMatrix<T>,
    spectrum: EigenDecomposition<T>,
}

impl<T: Scalar> QuotientSpace<T> {
    /// `L = L̃ᵀ L̃`.
    pub fn from_contrast(c: &ContrastMatrix<T>) -> Self {
        let l = c.matrix().transpose() * c.matrix();
        Self::from_psd(symmetrized(&l))
    }

    /// Uses a supplied matrix, which must be symmetric PSD with `L 1 = 0`.
    pub fn from_matrix(l: DMatrix<T>) -> Result<Self> {
        check_signed_laplacian(&l)?;
        let space = Self::from_psd(symmetrized(&l));
        let scale = space.spectrum.values().amax().max(T::one());
        let min = space.spectrum.values().min();
        if min < -T::zero_tolerance() * scale {
            return Err(Error::InvalidParameter {
                name: "L",
                detail: format!("not positive semi-definite (eigenvalue {min})"),
            });
        }
        Ok(space)
    }

    fn from_psd(l: DMatrix<T>) -> Self {
        let spectrum = EigenDecomposition::new(&l);
        Self { matrix: l, spectrum }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<T> {
        &self.matrix
    }

    pub fn spectrum(&self) -> &EigenDecomposition<T> {
        &self.spectrum
    }

    /// Dimension of `Ker(L)`.
    pub fn kernel_dim(&self) -> usize {
        self.spectrum.zero_count()
    }

    /// Orthonormal columns spanning `Ker(L)`.
    pub fn kernel_basis(&self) -> DMatrix<T> {
        self.spectrum.kernel_basis()
    }

    pub fn pseudo_inverse(&self) -> DMatrix<T> {
        self.spectrum.pseudo_inverse()
    }

    /// Orthogonal projection of `v` onto `Ker(L)^⊥`.
    pub fn project(&self, v: &DVector<T>) -> DVector<T> {
        let u = self.spectrum.range_basis();
        &u * (u.transpose() * v)
    }

    /// Distance of `v` from `Ker(L)`.
    pub fn kernel_residual(&self, v: &DVector<T>) -> T {
        self.project(v).norm()
    }
}

fn symmetrized<T: Scalar>(m: &DMatrix<T>) -> DMatrix<T> {
    (m + m.transpose()) * nalgebra::convert::<f64, T>(0.5)
}

fn check_signed_laplacian<T: Scalar>(l: &DMatrix<T>) -> Result<()> {
    if !l.is_square() {
        return Err(Error::DimensionMismatch {
            expected: l.nrows(),
            found: l.ncols(),
        });
    }
    if l.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "L",
            detail: "entries must be finite".into(),
        });
    }
    let scale = max_abs(l).max(T::one());
    let tol = T::conformance_tolerance() * scale;
    if max_abs(&(l - l.transpose())) > tol {
        return Err(Error::InvalidParameter {
            name: "L",
            detail: "not symmetric".into(),
        });
    }
    let row_sums = l.column_sum();
    if row_sums.amax() > tol {
        return Err(Error::InvalidParameter {
            name: "L",
            detail: format!("L·1 = 0 violated (max |row sum| = {})", row_sums.amax()),
        });
    }
    Ok(())
}

fn log_of<T: Scalar>(s: &QuotientSpace<T>, x: &Composition<T>) -> Result<DVector<T>> {
    same_dim(s.dim(), x.dim())?;
    Ok(x.log())
}

/// `⟨log x, L log y⟩`.
pub fn quotient_inner_product<T: Scalar>(x: &Composition<T>, y: &Composition<T>, s: &QuotientSpace<T>) -> Result<T> {
    let lx = log_of(s, x)?;
    let ly = log_of(s, y)?;
    Ok(lx.dot(&(s.matrix() * ly)))
}

/// `exp` of the projection of `log x` onto `Ker(L)^⊥`.
pub fn class_representative<T: Scalar>(x: &Composition<T>, s: &QuotientSpace<T>) -> Result<Composition<T>> {
    Composition::from_log(&s.project(&log_of(s, x)?))
}

/// Class-level perturbation on canonical representatives.
pub fn quotient_perturb<T: Scalar>(x: &Composition<T>, y: &Composition<T>, s: &QuotientSpace<T>) -> Result<Composition<T>> {
    let v = s.project(&log_of(s, x)?) + s.project(&log_of(s, y)?);
    Composition::from_log(&v)
}

/// Class-level powering on canonical representatives.
pub fn quotient_power<T: Scalar>(a: T, x: &Composition<T>, s: &QuotientSpace<T>) -> Result<Composition<T>> {
    Composition::from_log(&(s.project(&log_of(s, x)?) * a))
}

/// `(√λ_i ⟨u_i, log x⟩)` over the nonzero eigenvalues, largest first.
pub fn quotient_gilr<T: Scalar>(x: &Composition<T>, s: &QuotientSpace<T>) -> Result<DVector<T>> {
    let lx = log_of(s, x)?;
    let eig = s.spectrum();
    Ok(DVector::from_fn(eig.rank(), |i, _| {
        eig.values()[i].sqrt() * eig.vectors().column(i).dot(&lx)
    }))
}

/// `exp(Σ z_i λ_i^{-1/2} u_i)`, the canonical representative of the class
/// with coordinates `z`.
pub fn quotient_gilr_inverse<T: Scalar>(z: &DVector<T>, s: &QuotientSpace<T>) -> Result<Composition<T>> {
    let eig = s.spectrum();
    same_dim(eig.rank(), z.len())?;
    let mut v = DVector::zeros(s.dim());
    for i in 0..eig.rank() {
        v += eig.vectors().column(i) * (z[i] / eig.values()[i].sqrt());
    }
    Composition::from_log(&v)
}

/// Signed weights `w_ij = −L_ij` (`i ≠ j`) with zero diagonal, so that
/// `L = diag(W 1) − W`.
pub fn signed_decomposition<T: Scalar>(l: &DMatrix<T>) -> Result<DMatrix<T>> {
    check_signed_laplacian(l)?;
    let l = symmetrized(l);
    Ok(DMatrix::from_fn(l.nrows(), l.ncols(), |i, j| {
        if i == j {
            T::zero()
        } else {
            -l[(i, j)]
        }
    }))
}

/// `½ Σ_{i,j} (f_i − f_j)(g_i − g_j) w_ij` for arbitrary signed weights.
pub fn signed_double_sum<T: Scalar>(w: &DMatrix<T>, f: &DVector<T>, g: &DVector<T>) -> Result<T> {
    same_dim(w.nrows(), f.len())?;
    same_dim(w.nrows(), g.len())?;
    let d = w.nrows();
    let mut acc = T::zero();
    for i in 0..d {
        for j in 0..d {
            acc += (f[i] - f[j]) * (g[i] - g[j]) * w[(i, j)];
        }
    }
    Ok(acc * nalgebra::convert::<f64, T>(0.5))
}

/// Quotient space with `L = L_A V Σ⁻¹ Vᵀ L_A` for a degenerate normal whose
/// ilr coordinates (basis `V`, `D × (D−1)`) have covariance `Σ`.
pub fn degenerate_gaussian_covariance<T: Scalar>(v: &DMatrix<T>, sigma: &DMatrix<T>) -> Result<QuotientSpace<T>> {
    let d = v.nrows();
    if d < 2 || v.ncols() != d - 1 {
        return Err(Error::DimensionMismatch {
            expected: d.saturating_sub(1),
            found: v.ncols(),
        });
    }
    if sigma.nrows() != d - 1 || sigma.ncols() != d - 1 {
        return Err(Error::DimensionMismatch {
            expected: d - 1,
            found: sigma.nrows(),
        });
    }
    let tol = T::conformance_tolerance();
    let gram = v.transpose() * v;
    if max_abs(&(gram - DMatrix::identity(d - 1, d - 1))) > tol || v.row_sum().amax() > tol {
        return Err(Error::InvalidParameter {
            name: "V",
            detail: "columns must be orthonormal and sum to zero".into(),
        });
    }
    if max_abs(&(sigma - sigma.transpose())) > tol * max_abs(sigma).max(T::one()) {
        return Err(Error::InvalidParameter {
            name: "Sigma",
            detail: "not symmetric".into(),
        });
    }
    let c = cholesky_upper(sigma).map_err(|_| Error::InvalidParameter {
        name: "Sigma",
        detail: "not positive definite".into(),
    })?;
    // Σ⁻¹ = C⁻¹ C⁻ᵀ with C upper triangular.
    let c_inv = c
        .solve_upper_triangular(&DMatrix::identity(d - 1, d - 1))
        .ok_or_else(|| Error::Singular("Cholesky factor of Sigma".into()))?;
    let sigma_inv = &c_inv * c_inv.transpose();
    let la = centering_matrix::<T>(d);
    let l = &la * v * sigma_inv * v.transpose() * &la;
    Ok(QuotientSpace::from_psd(symmetrized(&l)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn comp(v: &[f64]) -> Composition<f64> {
        Composition::from_slice(v).unwrap()
    }

    #[test]
    fn single_anchor_rows() {
        let c = contrast_from_weighted_combinations(
            3,
            &[AnchoredCombination {
                anchor: 0,
                weights: vec![(1, 1.0)],
            }],
        )
        .unwrap();
        assert_eq!(c.matrix().row(0).iter().copied().collect::<Vec<_>>(), vec![1.0, -1.0, 0.0]);
        let c = contrast_from_weighted_combinations(
            3,
            &[AnchoredCombination {
                anchor: 0,
                weights: vec![(1, 2.0), (2, -1.0)],
            }],
        )
        .unwrap();
        assert_eq!(c.matrix().row(0).iter().copied().collect::<Vec<_>>(), vec![1.0, -2.0, 1.0]);
        assert_eq!(c.provenance(), ContrastProvenance::WeightedCombinations);
    }

    #[test]
    fn anchor_out_of_range() {
        let r = contrast_from_weighted_combinations::<f64>(
            2,
            &[AnchoredCombination {
                anchor: 2,
                weights: vec![],
            }],
        );
        assert!(matches!(r, Err(Error::InvalidContrast(_))));
    }

    #[test]
    fn symmetric_tensor_gives_zero_row() {
        let w = DMatrix::from_fn(4, 4, |i, j| (i + j) as f64);
        let c = contrast_from_ratio_subsets(4, &[w]).unwrap();
        assert!(c.matrix().amax() == 0.0);
        let mut w = DMatrix::zeros(3, 3);
        w[(0, 1)] = 1.0;
        let c = contrast_from_ratio_subsets(3, &[w]).unwrap();
        assert_eq!(c.matrix().row(0).iter().copied().collect::<Vec<_>>(), vec![1.0, -1.0, 0.0]);
    }

    #[test]
    fn single_ratio_space() {
        let c = ContrastMatrix::new(DMatrix::from_row_slice(1, 3, &[1.0, -1.0, 0.0])).unwrap();
        let s = QuotientSpace::from_contrast(&c);
        assert_eq!(s.kernel_dim(), 2);
        let ones = DVector::from_element(3, 1.0);
        assert!(s.kernel_residual(&ones) < 1e-12);
        let e3 = DVector::from_vec(vec![0.0, 0.0, 1.0]);
        assert!(s.kernel_residual(&e3) < 1e-12);
        let x = comp(&[2.0, 0.5, 7.0]);
        let y = comp(&[0.3, 1.1, 4.0]);
        let v = quotient_inner_product(&x, &y, &s).unwrap();
        assert_relative_eq!(v, 4f64.ln() * (0.3f64 / 1.1).ln(), epsilon = 1e-12);
    }

    #[test]
    fn explicit_rows_must_sum_to_zero() {
        assert!(ContrastMatrix::new(DMatrix::from_row_slice(1, 2, &[1.0, 1.0])).is_err());
    }

    #[test]
    fn aitchison_representative_is_clr() {
        let s = QuotientSpace::from_matrix(centering_matrix::<f64>(4)).unwrap();
        let x = comp(&[1.0, 2.0, 4.0, 8.0]);
        let r = class_representative(&x, &s).unwrap();
        let gm = (1.0f64 * 2.0 * 4.0 * 8.0).powf(0.25);
        for i in 0..4 {
            assert_relative_eq!(r.values()[i], x.values()[i] / gm, epsilon = 1e-12);
        }
        let rr = class_representative(&r, &s).unwrap();
        assert_relative_eq!(rr.values(), r.values(), epsilon = 1e-12);
    }

    #[test]
    fn gilr_round_trip_and_kernel_zero() {
        let c = ContrastMatrix::new(DMatrix::from_row_slice(
            2,
            4,
            &[1.0, -1.0, 0.0, 0.0, 0.5, 0.5, -2.0, 1.0],
        ))
        .unwrap();
        let s = QuotientSpace::from_contrast(&c);
        assert_eq!(s.kernel_dim(), 2);
        let x = comp(&[0.2, 3.0, 1.5, 0.7]);
        let z = quotient_gilr(&x, &s).unwrap();
        assert_eq!(z.len(), 2);
        assert_relative_eq!(z.norm_squared(), quotient_inner_product(&x, &x, &s).unwrap(), epsilon = 1e-12);
        let back = quotient_gilr_inverse(&z, &s).unwrap();
        let diff = back.log() - x.log();
        assert!(s.kernel_residual(&diff) < 1e-10);
        let k = s.kernel_basis();
        let kx = Composition::from_log(&(k.column(0) * 2.5 - k.column(1))).unwrap();
        assert!(quotient_gilr(&kx, &s).unwrap().amax() < 1e-12);
    }

    #[test]
    fn signed_decomposition_of_centering() {
        let w = signed_decomposition(&centering_matrix::<f64>(5)).unwrap();
        for i in 0..5 {
            for j in 0..5 {
                let expected = if i == j { 0.0 } else { 0.2 };
                assert_relative_eq!(w[(i, j)], expected, epsilon = 1e-15);
            }
        }
        let bad = DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, 1.0]);
        assert!(signed_decomposition(&bad).is_err());
    }

    #[test]
    fn identity_covariance_gives_centering() {
        let d = 4;
        let la = centering_matrix::<f64>(d);
        let v = EigenDecomposition::with_zero_count(&la, 1).range_basis();
        let s = degenerate_gaussian_covariance(&v, &DMatrix::identity(d - 1, d - 1)).unwrap();
        assert!(max_abs(&(s.matrix() - &la)) < 1e-12);
        let bad = -DMatrix::<f64>::identity(d - 1, d - 1);
        assert!(degenerate_gaussian_covariance(&v, &bad).is_err());
    }
}
