//! Linear models on log-ratios: a zero-sum lasso baseline, its projection
//! onto the geometry of a (learned) graph, the signed model graph, and
//! repeated train/test evaluation.

use nalgebra::{DMatrix, DVector};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::{same_dim, Composition};
use crate::graph::{build_laplacian, Laplacian, WeightMatrix};
use crate::learning::LearnedGraph;
use crate::scalar::{lit, Scalar};

/// `y ≈ βᵀ log x + c` with `Σ β = 0`. `β` is the clr vector of the
/// coefficient composition `a`.
#[derive(Debug, Clone, PartialEq)]
pub struct AitchisonModel<T: Scalar> {
    clr_coefficients: DVector<T>,
    intercept: T,
    sigma2: T,
    lambda: T,
}

impl<T: Scalar> AitchisonModel<T> {
    /// Builds a model from given coefficients, which must sum to zero.
    pub fn new(clr_coefficients: DVector<T>, intercept: T) -> Result<Self> {
        let scale = clr_coefficients.amax().max(T::one());
        if clr_coefficients.sum().abs() > lit::<T>(1e-10) * scale {
            return Err(Error::InvalidParameter {
                name: "coefficients",
                detail: format!("must sum to zero, sum is {}", clr_coefficients.sum()),
            });
        }
        Ok(Self {
            clr_coefficients,
            intercept,
            sigma2: T::zero(),
            lambda: T::zero(),
        })
    }

    pub fn clr_coefficients(&self) -> &DVector<T> {
        &self.clr_coefficients
    }

    /// The coefficient composition `a = exp(β)`.
    pub fn coefficient_composition(&self) -> Result<Composition<T>> {
        Composition::from_log(&self.clr_coefficients)
    }

    pub fn intercept(&self) -> T {
        self.intercept
    }

    /// Residual variance on the training data (denominator `N − 1`).
    pub fn sigma2(&self) -> T {
        self.sigma2
    }

    pub fn lambda(&self) -> T {
        self.lambda
    }

    pub fn dim(&self) -> usize {
        self.clr_coefficients.len()
    }

    pub fn predict(&self, x: &Composition<T>) -> Result<T> {
        same_dim(self.dim(), x.dim())?;
        Ok(self.clr_coefficients.dot(&x.log()) + self.intercept)
    }

    /// Predictions for every row of a positive matrix.
    pub fn predict_rows(&self, x: &DMatrix<T>) -> Result<DVector<T>> {
        same_dim(self.dim(), x.ncols())?;
        let lx = log_matrix(x)?;
        Ok((lx * &self.clr_coefficients).add_scalar(self.intercept))
    }
}

fn log_matrix<T: Scalar>(x: &DMatrix<T>) -> Result<DMatrix<T>> {
    let d = x.ncols();
    for (k, &v) in x.iter().enumerate() {
        if !(v > T::zero()) || !v.is_finite() {
            // column-major storage
            let (i, j) = (k % x.nrows(), k / x.nrows());
            return Err(Error::NonPositive {
                index: i * d + j,
                value: v.to_f64(),
            });
        }
    }
    Ok(x.map(|v| v.ln()))
}

/// Coordinate-pair descent settings for [`fit_zerosum`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZeroSumOptions<T> {
    /// Largest pair move allowed at convergence.
    pub tolerance: T,
    pub max_sweeps: usize,
}

impl<T: Scalar> Default for ZeroSumOptions<T> {
    fn default() -> Self {
        Self {
            tolerance: lit(1e-12),
            max_sweeps: 10_000,
        }
    }
}

/// Minimizer of `f(δ) = ½aδ² − bδ + λ(|p + δ| + |q − δ|)`.
fn pair_step<T: Scalar>(a: T, b: T, lambda: T, p: T, q: T) -> T {
    let f = |d: T| a * d * d * lit::<T>(0.5) - b * d + lambda * ((p + d).abs() + (q - d).abs());
    let mut candidates = vec![-p, q];
    let signs = [-T::one(), T::zero(), T::one()];
    for &s1 in &signs {
        for &s2 in &signs {
            candidates.push((b - lambda * (s1 - s2)) / a);
        }
    }
    let mut best = T::zero();
    let mut best_f = f(T::zero());
    for c in candidates {
        let fc = f(c);
        if fc < best_f {
            best = c;
            best_f = fc;
        }
    }
    best
}

/// Zero-sum lasso: minimizes `(1/2N)‖y − c − (log X) β‖² + λ‖β‖₁` subject to
/// `Σ β = 0`, by exact minimization over pair moves `β_j += δ, β_k −= δ`.
pub fn fit_zerosum<T: Scalar>(x: &DMatrix<T>, y: &DVector<T>, lambda: T) -> Result<AitchisonModel<T>> {
    fit_zerosum_with(x, y, lambda, &ZeroSumOptions::default())
}

pub fn fit_zerosum_with<T: Scalar>(
    x: &DMatrix<T>,
    y: &DVector<T>,
    lambda: T,
    options: &ZeroSumOptions<T>,
) -> Result<AitchisonModel<T>> {
    let (n, d) = x.shape();
    same_dim(n, y.len())?;
    if n < 2 {
        return Err(Error::Degenerate(format!("need at least 2 samples, got {n}")));
    }
    if !(lambda >= T::zero()) {
        return Err(Error::InvalidParameter {
            name: "lambda",
            detail: format!("must be nonnegative, got {lambda}"),
        });
    }
    let lx = log_matrix(x)?;
    let nf = lit::<T>(n as f64);
    let col_means = lx.row_mean();
    let y_mean = y.mean();
    let mut xc = lx.clone();
    for (j, mut col) in xc.column_iter_mut().enumerate() {
        col.add_scalar_mut(-col_means[j]);
    }
    let yc = y.add_scalar(-y_mean);

    // the zero-sum constraint only sees the row-centered (clr) design
    let mut clr = xc.clone();
    let row_means = clr.column_mean();
    for (i, mut row) in clr.row_iter_mut().enumerate() {
        row.add_scalar_mut(-row_means[i]);
    }
    if clr.amax() == T::zero() {
        return Err(Error::Degenerate("log-ratio design is identically zero".into()));
    }

    let gram = xc.transpose() * &xc / nf;
    let mut c = xc.transpose() * &yc / nf;
    let mut beta = DVector::<T>::zeros(d);
    let mut converged = false;
    for _ in 0..options.max_sweeps {
        let mut max_move = T::zero();
        for j in 0..d {
            for k in (j + 1)..d {
                let a = gram[(j, j)] + gram[(k, k)] - lit::<T>(2.0) * gram[(j, k)];
                if !(a > T::zero()) {
                    continue;
                }
                let b = c[j] - c[k];
                let delta = pair_step(a, b, lambda, beta[j], beta[k]);
                if delta != T::zero() {
                    beta[j] += delta;
                    beta[k] -= delta;
                    for m in 0..d {
                        c[m] -= delta * (gram[(m, j)] - gram[(m, k)]);
                    }
                    max_move = max_move.max(delta.abs());
                }
            }
        }
        if max_move <= options.tolerance * beta.amax().max(T::one()) {
            converged = true;
            break;
        }
    }
    let residual = &yc - &xc * &beta;
    if !converged {
        let obj = residual.norm_squared() / (lit::<T>(2.0) * nf) + lambda * beta.lp_norm(1);
        return Err(Error::NonConvergence {
            iterations: options.max_sweeps,
            objective: obj.to_f64(),
        });
    }
    let intercept = y_mean - col_means.iter().zip(beta.iter()).fold(T::zero(), |a, (&m, &b)| a + m * b);
    Ok(AitchisonModel {
        clr_coefficients: beta,
        intercept,
        sigma2: residual.norm_squared() / lit::<T>((n - 1) as f64),
        lambda,
    })
}

/// Largest violation of the optimality conditions of the zero-sum lasso
/// (with the multiplier of the constraint chosen optimally).
pub fn zerosum_kkt_residual<T: Scalar>(x: &DMatrix<T>, y: &DVector<T>, model: &AitchisonModel<T>) -> Result<T> {
    let lx = log_matrix(x)?;
    let n = lit::<T>(x.nrows() as f64);
    let pred = model.predict_rows(x)?;
    let r = y - pred;
    let mut xc = lx;
    let means = xc.row_mean();
    for (j, mut col) in xc.column_iter_mut().enumerate() {
        col.add_scalar_mut(-means[j]);
    }
    let c = xc.transpose() * r / n;
    let beta = model.clr_coefficients();
    let lambda = model.lambda();
    // stationarity: c_j − ν ∈ λ ∂|β_j|
    let mut lo = -T::max_value().unwrap();
    let mut hi = T::max_value().unwrap();
    for j in 0..beta.len() {
        if beta[j] == T::zero() {
            lo = lo.max(c[j] - lambda);
            hi = hi.min(c[j] + lambda);
        }
    }
    let active: Vec<T> = (0..beta.len())
        .filter(|&j| beta[j] != T::zero())
        .map(|j| c[j] - lambda * beta[j].signum())
        .collect();
    let nu = if active.is_empty() {
        (lo + hi) * lit::<T>(0.5)
    } else {
        active.iter().fold(T::zero(), |a, &v| a + v) / lit::<T>(active.len() as f64)
    };
    let mut worst = T::zero();
    for j in 0..beta.len() {
        let v = if beta[j] == T::zero() {
            ((c[j] - nu).abs() - lambda).max(T::zero())
        } else {
            (c[j] - lambda * beta[j].signum() - nu).abs()
        };
        worst = worst.max(v);
    }
    Ok(worst)
}

/// A baseline model re-expressed in the `(W, 0)` geometry:
/// `f(x) = ⟨b, x⟩_W + c = log(b)ᵀ L_W log(x) + c` with `log b = L_W⁺ β`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectedModel<T: Scalar> {
    laplacian: Laplacian<T>,
    log_b: DVector<T>,
    clr_target: DVector<T>,
    intercept: T,
}

/// Projects the clr coefficients onto the range of `L_W`:
/// `log b = L_W⁺ β` minimizes `‖β − L_W log b‖`.
pub fn project_coefficients<T: Scalar>(model: &AitchisonModel<T>, w: &WeightMatrix<T>) -> Result<ProjectedModel<T>> {
    same_dim(model.dim(), w.dim())?;
    let laplacian = build_laplacian(w);
    let log_b = laplacian.pseudo_inverse() * model.clr_coefficients();
    Ok(ProjectedModel {
        laplacian,
        log_b,
        clr_target: model.clr_coefficients().clone(),
        intercept: model.intercept(),
    })
}

impl<T: Scalar> ProjectedModel<T> {
    pub fn laplacian(&self) -> &Laplacian<T> {
        &self.laplacian
    }

    pub fn weights(&self) -> &WeightMatrix<T> {
        self.laplacian.weights()
    }

    /// `log b` (the representative orthogonal to `Ker(L_W)`).
    pub fn log_coefficients(&self) -> &DVector<T> {
        &self.log_b
    }

    pub fn coefficient_composition(&self) -> Result<Composition<T>> {
        Composition::from_log(&self.log_b)
    }

    pub fn intercept(&self) -> T {
        self.intercept
    }

    /// Effective clr coefficients `L_W log b`.
    pub fn effective_coefficients(&self) -> DVector<T> {
        self.laplacian.matrix() * &self.log_b
    }

    /// `‖L_W (β − L_W log b)‖_∞`: zero when the normal equations hold.
    pub fn normal_equation_residual(&self) -> T {
        let r = &self.clr_target - self.effective_coefficients();
        (self.laplacian.matrix() * r).amax()
    }

    pub fn predict(&self, x: &Composition<T>) -> Result<T> {
        same_dim(self.laplacian.dim(), x.dim())?;
        Ok(self.effective_coefficients().dot(&x.log()) + self.intercept)
    }

    pub fn predict_rows(&self, x: &DMatrix<T>) -> Result<DVector<T>> {
        same_dim(self.laplacian.dim(), x.ncols())?;
        let lx = log_matrix(x)?;
        Ok((lx * self.effective_coefficients()).add_scalar(self.intercept))
    }

    /// Signed edge weights `w̃_ij = log(b_i/b_j) w_ij`, so that
    /// `f(x) = Σ_{i<j} log(x_i/x_j) w̃_ij + c`.
    pub fn signed_weights(&self) -> Vec<(usize, usize, T)> {
        self.weights()
            .edges()
            .into_iter()
            .map(|(i, j, w)| (i, j, (self.log_b[i] - self.log_b[j]) * w))
            .collect()
    }

    /// The prediction written as a sum over edges of log-ratios.
    pub fn predict_pairwise(&self, x: &Composition<T>) -> Result<T> {
        same_dim(self.laplacian.dim(), x.dim())?;
        let lx = x.log();
        Ok(self
            .signed_weights()
            .iter()
            .fold(self.intercept, |acc, &(i, j, wt)| acc + (lx[i] - lx[j]) * wt))
    }
}

/// One edge of a model graph.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelEdge<T> {
    pub i: usize,
    pub j: usize,
    /// `w̃_ij`.
    pub weight: T,
    /// Standard deviation of `log(x_i/x_j)` in the data.
    pub sigma: T,
    /// `σ_ij |w̃_ij|`.
    pub display_weight: T,
    pub positive: bool,
}

/// Edges with nonzero signed weight; `log_data` holds the (centered or
/// raw) log-data used for the ratio standard deviations.
pub fn model_graph<T: Scalar>(model: &ProjectedModel<T>, log_data: &DMatrix<T>) -> Result<Vec<ModelEdge<T>>> {
    same_dim(model.laplacian.dim(), log_data.ncols())?;
    let n = log_data.nrows();
    let signed = model.signed_weights();
    let scale = signed.iter().fold(T::zero(), |a, e| a.max(e.2.abs()));
    let cutoff = T::structural_tolerance() * scale;
    Ok(signed
        .into_iter()
        .filter(|&(_, _, wt)| wt != T::zero() && wt.abs() > cutoff)
        .map(|(i, j, wt)| {
            let diff = log_data.column(i) - log_data.column(j);
            let sigma = if n > 1 {
                let mean = diff.mean();
                (diff.add_scalar(-mean).norm_squared() / lit::<T>((n - 1) as f64)).sqrt()
            } else {
                T::zero()
            };
            ModelEdge {
                i,
                j,
                weight: wt,
                sigma,
                display_weight: sigma * wt.abs(),
                positive: wt > T::zero(),
            }
        })
        .collect())
}

/// Settings for [`evaluate_splits`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SplitOptions<T> {
    pub repetitions: usize,
    pub train_fraction: T,
    pub lambda: T,
    pub seed: u64,
}

impl<T: Scalar> Default for SplitOptions<T> {
    fn default() -> Self {
        Self {
            repetitions: 100,
            train_fraction: lit(2.0 / 3.0),
            lambda: T::zero(),
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Baseline,
    Projected,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Baseline => "baseline",
            Method::Projected => "projected",
        }
    }
}

/// One test-set error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SplitRecord<T> {
    pub repetition: usize,
    pub k: usize,
    pub method: Method,
    pub mse: T,
}

/// Mean test errors for one edge count.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KSummary<T> {
    pub k: usize,
    pub baseline: T,
    pub projected: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SplitEvaluation<T> {
    pub repetitions: usize,
    pub train_fraction: T,
    pub records: Vec<SplitRecord<T>>,
    pub means: Vec<KSummary<T>>,
}

/// Random train/test index split of repetition `rep`. The generator is
/// ChaCha8 seeded with `seed` on stream `rep`, so repetitions are
/// independent of scheduling.
pub fn split_indices(n: usize, n_train: usize, seed: u64, rep: usize) -> (Vec<usize>, Vec<usize>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(rep as u64);
    let mut idx: Vec<usize> = (0..n).collect();
    idx.shuffle(&mut rng);
    let test = idx.split_off(n_train);
    (idx, test)
}

fn select_rows<T: Scalar>(x: &DMatrix<T>, rows: &[usize]) -> DMatrix<T> {
    DMatrix::from_fn(rows.len(), x.ncols(), |r, c| x[(rows[r], c)])
}

fn mse<T: Scalar>(pred: &DVector<T>, y: &DVector<T>) -> T {
    (pred - y).norm_squared() / lit::<T>(y.len() as f64)
}

/// Repeated random splits: fit the baseline on the training part, then for
/// every `k` project onto the graph of the first `k` learned edges and
/// record both test errors. All `k` share the split of a repetition.
pub fn evaluate_splits<T: Scalar>(
    x: &DMatrix<T>,
    y: &DVector<T>,
    learned: &LearnedGraph<T>,
    ks: &[usize],
    options: &SplitOptions<T>,
) -> Result<SplitEvaluation<T>> {
    let n = x.nrows();
    same_dim(n, y.len())?;
    same_dim(learned.dim(), x.ncols())?;
    if options.repetitions == 0 {
        return Err(Error::InvalidParameter {
            name: "repetitions",
            detail: "must be at least 1".into(),
        });
    }
    let f = options.train_fraction;
    if !(f > T::zero() && f < T::one()) {
        return Err(Error::InvalidParameter {
            name: "train_fraction",
            detail: format!("must lie strictly between 0 and 1, got {f}"),
        });
    }
    let n_train = (f * lit::<T>(n as f64)).round().to_f64() as usize;
    if n_train == 0 || n_train >= n {
        return Err(Error::InvalidParameter {
            name: "train_fraction",
            detail: format!("gives {n_train} training and {} test samples", n - n_train.min(n)),
        });
    }
    if let Some(&k) = ks.iter().find(|&&k| k > learned.len()) {
        return Err(Error::InvalidParameter {
            name: "k",
            detail: format!("{k} exceeds the {} learned edges", learned.len()),
        });
    }
    let graphs: Vec<WeightMatrix<T>> = ks
        .iter()
        .map(|&k| learned.prefix(k).weight_matrix())
        .collect::<Result<_>>()?;

    let per_rep: Vec<Vec<SplitRecord<T>>> = (0..options.repetitions)
        .into_par_iter()
        .map(|rep| {
            let (train, test) = split_indices(n, n_train, options.seed, rep);
            let x_train = select_rows(x, &train);
            let y_train = DVector::from_iterator(train.len(), train.iter().map(|&i| y[i]));
            let x_test = select_rows(x, &test);
            let y_test = DVector::from_iterator(test.len(), test.iter().map(|&i| y[i]));
            let model = fit_zerosum(&x_train, &y_train, options.lambda)?;
            let base = mse(&model.predict_rows(&x_test)?, &y_test);
            let mut out = Vec::with_capacity(2 * ks.len());
            for (&k, w) in ks.iter().zip(&graphs) {
                let projected = project_coefficients(&model, w)?;
                let proj = mse(&projected.predict_rows(&x_test)?, &y_test);
                out.push(SplitRecord {
                    repetition: rep,
                    k,
                    method: Method::Baseline,
                    mse: base,
                });
                out.push(SplitRecord {
                    repetition: rep,
                    k,
                    method: Method::Projected,
                    mse: proj,
                });
            }
            Ok(out)
        })
        .collect::<Result<_>>()?;
    let records: Vec<SplitRecord<T>> = per_rep.into_iter().flatten().collect();

    let reps = lit::<T>(options.repetitions as f64);
    let means = ks
        .iter()
        .map(|&k| {
            let (mut b, mut p) = (T::zero(), T::zero());
            for r in records.iter().filter(|r| r.k == k) {
                match r.method {
                    Method::Baseline => b += r.mse,
                    Method::Projected => p += r.mse,
                }
            }
            KSummary {
                k,
                baseline: b / reps,
                projected: p / reps,
            }
        })
        .collect();
    Ok(SplitEvaluation {
        repetitions: options.repetitions,
        train_fraction: f,
        records,
        means,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand::Rng;

    fn random_x(n: usize, d: usize, seed: u64) -> DMatrix<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        DMatrix::from_fn(n, d, |_, _| rng.random_range(0.2..5.0))
    }

    #[test]
    fn constant_response() {
        let x = random_x(10, 4, 1);
        let y = DVector::from_element(10, 3.5);
        let m = fit_zerosum(&x, &y, 0.1).unwrap();
        assert!(m.clr_coefficients().iter().all(|&v| v == 0.0));
        assert_relative_eq!(m.intercept(), 3.5, epsilon = 1e-14);
    }

    #[test]
    fn two_parts_is_simple_regression() {
        let x = random_x(30, 2, 2);
        let r: Vec<f64> = (0..30).map(|i| (x[(i, 0)] / x[(i, 1)]).ln()).collect();
        let y = DVector::from_fn(30, |i, _| 0.7 * r[i] + 0.1 * ((i * 7 % 5) as f64));
        let m = fit_zerosum(&x, &y, 0.0).unwrap();
        let rm = r.iter().sum::<f64>() / 30.0;
        let ym = y.mean();
        let sxy: f64 = (0..30).map(|i| (r[i] - rm) * (y[i] - ym)).sum();
        let sxx: f64 = r.iter().map(|v| (v - rm).powi(2)).sum();
        let slope = sxy / sxx;
        // β_1 log x_1 + β_2 log x_2 = β log(x_1/x_2) with β = β_1 = −β_2
        assert_relative_eq!(m.clr_coefficients()[0], slope, epsilon = 1e-9);
        assert_relative_eq!(m.clr_coefficients()[1], -slope, epsilon = 1e-9);
    }

    #[test]
    fn predictions_scale_invariant() {
        let x = random_x(20, 5, 3);
        let y = DVector::from_fn(20, |i, _| x[(i, 0)].ln() - x[(i, 3)].ln());
        let m = fit_zerosum(&x, &y, 0.01).unwrap();
        let mut scaled = x.clone();
        for (i, mut row) in scaled.row_iter_mut().enumerate() {
            row *= 1.0 + i as f64;
        }
        let a = m.predict_rows(&x).unwrap();
        let b = m.predict_rows(&scaled).unwrap();
        assert!((a - b).amax() < 1e-10);
        assert!(zerosum_kkt_residual(&x, &y, &m).unwrap() < 1e-8);
    }

    #[test]
    fn aitchison_projection_keeps_model() {
        let x = random_x(25, 4, 4);
        let y = DVector::from_fn(25, |i, _| 2.0 * x[(i, 1)].ln() - x[(i, 2)].ln() - x[(i, 0)].ln());
        let m = fit_zerosum(&x, &y, 0.0).unwrap();
        let p = project_coefficients(&m, &WeightMatrix::aitchison(4)).unwrap();
        let held = random_x(5, 4, 5);
        assert!((m.predict_rows(&held).unwrap() - p.predict_rows(&held).unwrap()).amax() < 1e-10);
        assert!(p.normal_equation_residual() < 1e-9);
    }

    #[test]
    fn pairwise_form_matches() {
        let m = AitchisonModel::new(DVector::from_vec(vec![1.0, -0.5, 0.25, -0.75]), 0.3).unwrap();
        let w = WeightMatrix::from_edges(4, &[(0, 1, 1.0), (1, 2, 0.5), (0, 3, 2.0)]).unwrap();
        let p = project_coefficients(&m, &w).unwrap();
        let x = Composition::from_slice(&[0.2, 1.7, 3.0, 0.9]).unwrap();
        assert_relative_eq!(p.predict(&x).unwrap(), p.predict_pairwise(&x).unwrap(), epsilon = 1e-11);
        assert_relative_eq!(p.predict(&Composition::ones(4)).unwrap(), 0.3, epsilon = 1e-15);
    }

    #[test]
    fn neutral_model_has_empty_graph() {
        let m = AitchisonModel::new(DVector::zeros(3), 1.0).unwrap();
        let w = WeightMatrix::aitchison(3);
        let p = project_coefficients(&m, &w).unwrap();
        assert!(model_graph(&p, &random_x(5, 3, 6)).unwrap().is_empty());
        let empty = project_coefficients(&m, &WeightMatrix::zeros(3)).unwrap();
        assert_eq!(empty.predict(&Composition::from_slice(&[1.0, 2.0, 3.0]).unwrap()).unwrap(), 1.0);
    }

    #[test]
    fn split_indices_are_a_partition() {
        let (a, b) = split_indices(10, 7, 42, 3);
        let mut all: Vec<_> = a.iter().chain(&b).copied().collect();
        all.sort();
        assert_eq!(all, (0..10).collect::<Vec<_>>());
        assert_eq!(split_indices(10, 7, 42, 3), (a, b));
        assert_ne!(split_indices(10, 7, 42, 4).0, split_indices(10, 7, 42, 3).0);
    }
}
