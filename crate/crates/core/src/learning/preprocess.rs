use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::scalar::{lit, Scalar};

/// Log-data with every row and column mean removed.
#[derive(Debug, Clone, PartialEq)]
pub struct PreprocessedData<T: Scalar> {
    z: DMatrix<T>,
    names: Vec<String>,
    zero_replacements: usize,
}

impl<T: Scalar> PreprocessedData<T> {
    /// Wraps an already double-centered matrix. Fails if some row or column
    /// mean is not zero to `1e-8` (absolute, scaled by the largest entry).
    pub fn from_centered(z: DMatrix<T>, names: Option<Vec<String>>) -> Result<Self> {
        let names = resolve_names(names, z.ncols())?;
        let tol = lit::<T>(1e-8) * z.amax().max(T::one());
        let worst = z.row_sum().amax().max(z.column_sum().amax());
        if worst > tol * lit::<T>(z.nrows().max(z.ncols()) as f64) {
            return Err(Error::InvalidParameter {
                name: "Z",
                detail: format!("rows and columns must sum to zero (largest sum {worst})"),
            });
        }
        Ok(Self {
            z,
            names,
            zero_replacements: 0,
        })
    }

    /// Replaces zeros by `zero_value`, then double-centers the logs.
    pub fn from_counts(x: &DMatrix<T>, names: Option<Vec<String>>, zero_value: T) -> Result<Self> {
        let (positive, replaced) = zero_replace(x, zero_value)?;
        let mut data = double_center(&positive)?;
        data.names = resolve_names(names, x.ncols())?;
        data.zero_replacements = replaced;
        Ok(data)
    }

    /// `N × D` centered log-data.
    pub fn z(&self) -> &DMatrix<T> {
        &self.z
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn zero_replacements(&self) -> usize {
        self.zero_replacements
    }

    pub fn samples(&self) -> usize {
        self.z.nrows()
    }

    pub fn dim(&self) -> usize {
        self.z.ncols()
    }
}

fn resolve_names(names: Option<Vec<String>>, d: usize) -> Result<Vec<String>> {
    match names {
        Some(n) if n.len() != d => Err(Error::DimensionMismatch {
            expected: d,
            found: n.len(),
        }),
        Some(n) => Ok(n),
        None => Ok((1..=d).map(|i| format!("x{i}")).collect()),
    }
}

/// Replaces exact zeros by `value`; returns the new matrix and the number
/// of replaced entries.
pub fn zero_replace<T: Scalar>(x: &DMatrix<T>, value: T) -> Result<(DMatrix<T>, usize)> {
    if !(value > T::zero()) || !value.is_finite() {
        return Err(Error::InvalidParameter {
            name: "zero_value",
            detail: format!("must be positive and finite, got {value}"),
        });
    }
    let mut out = x.clone();
    let mut count = 0;
    for j in 0..x.ncols() {
        for i in 0..x.nrows() {
            let v = x[(i, j)];
            if !v.is_finite() || v < T::zero() {
                return Err(Error::InvalidParameter {
                    name: "X",
                    detail: format!("entry ({}, {}) is {v}; counts must be nonnegative", i + 1, j + 1),
                });
            }
            if v == T::zero() {
                out[(i, j)] = value;
                count += 1;
            }
        }
    }
    Ok((out, count))
}

/// Row-wise clr of a positive matrix.
pub fn clr_rows<T: Scalar>(x: &DMatrix<T>) -> Result<DMatrix<T>> {
    check_positive(x)?;
    let mut z = x.map(|v| v.ln());
    let means = z.column_mean();
    for (i, mut row) in z.row_iter_mut().enumerate() {
        row.add_scalar_mut(-means[i]);
    }
    Ok(z)
}

fn check_positive<T: Scalar>(x: &DMatrix<T>) -> Result<()> {
    let d = x.ncols();
    for j in 0..d {
        for i in 0..x.nrows() {
            let v = x[(i, j)];
            if !(v > T::zero()) || !v.is_finite() {
                return Err(Error::NonPositive {
                    index: i * d + j,
                    value: v.to_f64(),
                });
            }
        }
    }
    Ok(())
}

/// `log X` with row means and column means removed, repeated until both
/// vanish.
pub fn double_center<T: Scalar>(x: &DMatrix<T>) -> Result<PreprocessedData<T>> {
    let (n, d) = x.shape();
    check_positive(x)?;
    let mut z = x.map(|v| v.ln());
    if n > 0 && d > 0 {
        let tol = T::structural_tolerance() * z.amax().max(T::one());
        for _ in 0..100 {
            let row_means = z.column_mean();
            for (i, mut row) in z.row_iter_mut().enumerate() {
                row.add_scalar_mut(-row_means[i]);
            }
            let col_means = z.row_mean();
            for (j, mut col) in z.column_iter_mut().enumerate() {
                col.add_scalar_mut(-col_means[j]);
            }
            if z.column_mean().amax() <= tol && z.row_mean().amax() <= tol {
                break;
            }
        }
    }
    Ok(PreprocessedData {
        z,
        names: resolve_names(None, d)?,
        zero_replacements: 0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn zero_replacement_example() {
        let x = DMatrix::from_row_slice(2, 2, &[0.0, 2.0, 3.0, 0.0]);
        let (y, count) = zero_replace(&x, 0.5).unwrap();
        assert_eq!(y, DMatrix::from_row_slice(2, 2, &[0.5, 2.0, 3.0, 0.5]));
        assert_eq!(count, 2);
        let pos = DMatrix::from_row_slice(1, 2, &[1.0, 2.0]);
        assert_eq!(zero_replace(&pos, 0.5).unwrap(), (pos.clone(), 0));
        assert!(zero_replace(&DMatrix::from_row_slice(1, 1, &[-1.0]), 0.5).is_err());
        assert!(zero_replace(&pos, 0.0).is_err());
    }

    #[test]
    fn constant_matrix_centers_to_zero() {
        let x = DMatrix::from_element(3, 4, 7.0);
        let p = double_center(&x).unwrap();
        assert!(p.z().amax() < 1e-14);
    }

    #[test]
    fn row_centering_is_clr() {
        let x = DMatrix::from_row_slice(1, 3, &[1.0, 2.0, 4.0]);
        let r = clr_rows(&x).unwrap();
        for (j, v) in [1.0f64, 2.0, 4.0].iter().enumerate() {
            assert_relative_eq!(r[(0, j)], v.ln() - 2f64.ln(), epsilon = 1e-15);
        }
        // a single observation has nothing left after column centering
        assert!(double_center(&x).unwrap().z().amax() < 1e-15);
    }

    #[test]
    fn rows_and_columns_sum_to_zero() {
        let x = DMatrix::from_fn(5, 4, |i, j| 1.0 + ((i * 7 + j * 3) % 5) as f64);
        let p = double_center(&x).unwrap();
        assert!(p.z().row_sum().amax() < 1e-12);
        assert!(p.z().column_sum().amax() < 1e-12);
        let again = double_center(&p.z().map(f64::exp)).unwrap();
        assert_relative_eq!(again.z(), p.z(), epsilon = 1e-12);
        assert_eq!(p.names()[3], "x4");
    }
}
