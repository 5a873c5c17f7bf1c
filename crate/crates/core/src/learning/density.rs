use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::geometry::{same_dim, Composition};
use crate::graph::Laplacian;
use crate::linalg::EigenDecomposition;
use crate::scalar::{lit, Scalar};

fn squared_norm<T: Scalar>(x: &Composition<T>, l: &Laplacian<T>, alpha: T) -> Result<T> {
    same_dim(l.dim(), x.dim())?;
    let lx = x.log();
    Ok(lx.norm_squared() * alpha + lx.dot(&(l.matrix() * &lx)))
}

/// `−½ ‖x‖²_{W,α}`: the unnormalized log density. Allowed for `α = 0`,
/// where the density lives on the subspace orthogonal to `Ker(L)`.
pub fn log_kernel<T: Scalar>(x: &Composition<T>, l: &Laplacian<T>, alpha: T) -> Result<T> {
    if !(alpha >= T::zero()) {
        return Err(Error::InvalidParameter {
            name: "alpha",
            detail: format!("must be nonnegative, got {alpha}"),
        });
    }
    Ok(-squared_norm(x, l, alpha)? * lit::<T>(0.5))
}

/// Log density of the graph normal distribution: `log x` is Gaussian with
/// mean zero and precision `αI + L`, so
/// `log p(x) = −½‖x‖²_{W,α} − (D/2) log 2π + ½ log det(αI + L)`,
/// with respect to Lebesgue measure on `log x`.
pub fn log_density<T: Scalar>(x: &Composition<T>, l: &Laplacian<T>, alpha: T) -> Result<T> {
    if !(alpha > T::zero()) {
        return Err(Error::InvalidParameter {
            name: "alpha",
            detail: format!(
                "the normalized density needs alpha > 0 (got {alpha}); use the log kernel for alpha = 0"
            ),
        });
    }
    let q = squared_norm(x, l, alpha)?;
    let d = lit::<T>(l.dim() as f64);
    let log_det = l
        .spectrum()
        .values()
        .iter()
        .enumerate()
        .fold(T::zero(), |acc, (k, &v)| {
            let lam = if k >= l.spectrum().rank() { T::zero() } else { v };
            acc + (lam + alpha).ln()
        });
    let half = lit::<T>(0.5);
    Ok(-q * half - d * half * T::two_pi().ln() + log_det * half)
}

/// Draws `n` rows of `log x` from the graph normal with precision
/// `αI + L`. For `α = 0` the kernel directions get zero variance.
pub fn sample_log_normal<T: Scalar, R: Rng + ?Sized>(
    l: &Laplacian<T>,
    alpha: T,
    n: usize,
    rng: &mut R,
) -> Result<DMatrix<T>> {
    if !(alpha >= T::zero()) {
        return Err(Error::InvalidParameter {
            name: "alpha",
            detail: format!("must be nonnegative, got {alpha}"),
        });
    }
    let d = l.dim();
    let eig: &EigenDecomposition<T> = l.spectrum();
    let scales = DVector::from_fn(d, |k, _| {
        let lam = if k >= eig.rank() { T::zero() } else { eig.values()[k] } + alpha;
        if lam > T::zero() {
            T::one() / lam.sqrt()
        } else {
            T::zero()
        }
    });
    let factor = eig.vectors() * DMatrix::from_diagonal(&scales);
    let xi = DMatrix::from_fn(d, n, |_, _| {
        let v: f64 = rng.sample(StandardNormal);
        lit::<T>(v)
    });
    Ok((factor * xi).transpose())
}
