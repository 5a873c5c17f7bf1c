use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;

use super::PreprocessedData;
use crate::error::{Error, Result};
use crate::graph::WeightMatrix;
use crate::linalg::solve_spd;
use crate::scalar::{lit, Scalar};

/// Coordinate descent settings for the lasso.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LassoOptions<T> {
    /// Largest coefficient change allowed at convergence.
    pub tolerance: T,
    pub max_sweeps: usize,
}

impl<T: Scalar> Default for LassoOptions<T> {
    fn default() -> Self {
        Self {
            tolerance: lit(1e-8),
            max_sweeps: 10_000,
        }
    }
}

fn soft_threshold<T: Scalar>(v: T, t: T) -> T {
    if v > t {
        v - t
    } else if v < -t {
        v + t
    } else {
        T::zero()
    }
}

/// Minimizes `(1/N)‖y − Xβ‖² + λ‖β‖₁` by cyclic coordinate descent.
pub fn lasso<T: Scalar>(x: &DMatrix<T>, y: &DVector<T>, lambda: T, options: &LassoOptions<T>) -> Result<DVector<T>> {
    let (n, p) = x.shape();
    if y.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: y.len(),
        });
    }
    if !(lambda >= T::zero()) {
        return Err(Error::InvalidParameter {
            name: "lambda",
            detail: format!("must be nonnegative, got {lambda}"),
        });
    }
    let scale = lit::<T>(2.0) / lit::<T>(n as f64);
    let curvature: Vec<T> = x.column_iter().map(|c| scale * c.norm_squared()).collect();
    let mut beta = DVector::zeros(p);
    let mut residual = y.clone();
    for _ in 0..options.max_sweeps {
        let mut max_change = T::zero();
        for j in 0..p {
            if curvature[j] == T::zero() {
                continue;
            }
            let col = x.column(j);
            let old = beta[j];
            let rho = scale * col.dot(&residual) + curvature[j] * old;
            let new = soft_threshold(rho, lambda) / curvature[j];
            if new != old {
                residual.axpy(old - new, &col, T::one());
                beta[j] = new;
                max_change = max_change.max((new - old).abs());
            }
        }
        if max_change <= options.tolerance {
            return Ok(polish(x, y, beta, lambda));
        }
    }
    let objective = lasso_objective(x, y, &beta, lambda);
    Err(Error::NonConvergence {
        iterations: options.max_sweeps,
        objective: objective.to_f64(),
    })
}

/// Re-solves the stationarity equations on the active set with the signs
/// found by coordinate descent; keeps the result only if the signs survive
/// and the optimality conditions improve.
fn polish<T: Scalar>(x: &DMatrix<T>, y: &DVector<T>, beta: DVector<T>, lambda: T) -> DVector<T> {
    let active: Vec<usize> = (0..beta.len()).filter(|&j| beta[j] != T::zero()).collect();
    if active.is_empty() {
        return beta;
    }
    let xa = x.select_columns(&active);
    let half_n = lit::<T>(x.nrows() as f64) * lit::<T>(0.5);
    let rhs = xa.transpose() * y
        - DVector::from_iterator(active.len(), active.iter().map(|&j| beta[j].signum() * lambda * half_n));
    let Some(sol) = solve_spd(&(xa.transpose() * &xa), &DMatrix::from_column_slice(active.len(), 1, rhs.as_slice())) else {
        return beta;
    };
    let mut candidate = DVector::zeros(beta.len());
    for (k, &j) in active.iter().enumerate() {
        if sol[(k, 0)].signum() != beta[j].signum() {
            return beta;
        }
        candidate[j] = sol[(k, 0)];
    }
    if lasso_kkt_residual(x, y, &candidate, lambda) <= lasso_kkt_residual(x, y, &beta, lambda) {
        candidate
    } else {
        beta
    }
}

pub fn lasso_objective<T: Scalar>(x: &DMatrix<T>, y: &DVector<T>, beta: &DVector<T>, lambda: T) -> T {
    let n = lit::<T>(x.nrows() as f64);
    (y - x * beta).norm_squared() / n + lambda * beta.lp_norm(1)
}

/// Largest violation of the lasso optimality conditions.
pub fn lasso_kkt_residual<T: Scalar>(x: &DMatrix<T>, y: &DVector<T>, beta: &DVector<T>, lambda: T) -> T {
    let scale = lit::<T>(2.0) / lit::<T>(x.nrows() as f64);
    let grad = x.transpose() * (y - x * beta) * scale;
    grad.iter()
        .zip(beta.iter())
        .map(|(&g, &b)| {
            if b > T::zero() {
                (g - lambda).abs()
            } else if b < T::zero() {
                (g + lambda).abs()
            } else {
                (g.abs() - lambda).max(T::zero())
            }
        })
        .fold(T::zero(), |a, v| a.max(v))
}

/// `max_j |(2/N) x_jᵀ y|`: the smallest `λ` giving `β = 0`.
pub fn lasso_lambda_max<T: Scalar>(x: &DMatrix<T>, y: &DVector<T>) -> T {
    let scale = lit::<T>(2.0) / lit::<T>(x.nrows() as f64);
    x.column_iter()
        .map(|c| (scale * c.dot(y)).abs())
        .fold(T::zero(), |a, v| a.max(v))
}

fn split_column<T: Scalar>(z: &DMatrix<T>, i: usize) -> (DMatrix<T>, DVector<T>) {
    (z.clone().remove_column(i), z.column(i).clone_owned())
}

/// Smallest `λ` for which every neighborhood regression is empty.
pub fn mb_lambda_max<T: Scalar>(data: &PreprocessedData<T>) -> T {
    (0..data.dim())
        .map(|i| {
            let (x, y) = split_column(data.z(), i);
            lasso_lambda_max(&x, &y)
        })
        .fold(T::zero(), |a, v| a.max(v))
}

/// Lasso coefficients `β_ij` of column `i` regressed on the other columns,
/// as a `D × D` matrix with zero diagonal.
pub fn neighborhood_coefficients<T: Scalar>(
    data: &PreprocessedData<T>,
    lambda: T,
    options: &LassoOptions<T>,
) -> Result<DMatrix<T>> {
    let d = data.dim();
    let rows: Vec<DVector<T>> = (0..d)
        .into_par_iter()
        .map(|i| {
            let (x, y) = split_column(data.z(), i);
            lasso(&x, &y, lambda, options)
        })
        .collect::<Result<_>>()?;
    let mut beta = DMatrix::zeros(d, d);
    for (i, b) in rows.iter().enumerate() {
        for (k, &v) in b.iter().enumerate() {
            let j = if k < i { k } else { k + 1 };
            beta[(i, j)] = v;
        }
    }
    Ok(beta)
}

/// Neighborhood selection: `w_ij = |(β_ij + β_ji) / 2|`.
pub fn mb_select<T: Scalar>(data: &PreprocessedData<T>, lambda: T) -> Result<WeightMatrix<T>> {
    let beta = neighborhood_coefficients(data, lambda, &LassoOptions::default())?;
    let half = lit::<T>(0.5);
    let d = data.dim();
    let w = DMatrix::from_fn(d, d, |i, j| {
        if i == j {
            T::zero()
        } else {
            ((beta[(i, j)] + beta[(j, i)]) * half).abs()
        }
    });
    WeightMatrix::new(w)
}
