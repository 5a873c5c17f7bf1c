use nalgebra::{DMatrix, DVector};

use super::PreprocessedData;
use crate::error::{Error, Result};
use crate::graph::WeightMatrix;
use crate::scalar::{lit, Scalar};

/// Solver settings for [`smooth_graph_solve`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SmoothOptions<T> {
    /// Relative objective change at convergence.
    pub tolerance: T,
    /// Largest KKT residual accepted at convergence.
    pub kkt_tolerance: T,
    pub max_iterations: usize,
}

impl<T: Scalar> Default for SmoothOptions<T> {
    fn default() -> Self {
        Self {
            tolerance: lit(1e-9),
            kkt_tolerance: lit(1e-7),
            max_iterations: 200_000,
        }
    }
}

/// Result of the smooth-signal graph problem.
#[derive(Debug, Clone, PartialEq)]
pub struct SmoothSolution<T: Scalar> {
    pub weights: WeightMatrix<T>,
    pub objective: T,
    pub iterations: usize,
    pub kkt_residual: T,
}

/// Edge-vector form of the problem: `w` holds `w_ij` for `i < j` in
/// lexicographic order.
struct Problem<T: Scalar> {
    d: usize,
    pairs: Vec<(usize, usize)>,
    v: DVector<T>,
    alpha: T,
    beta: T,
}

impl<T: Scalar> Problem<T> {
    fn degrees(&self, w: &DVector<T>) -> Vec<T> {
        let mut deg = vec![T::zero(); self.d];
        for (k, &(i, j)) in self.pairs.iter().enumerate() {
            deg[i] += w[k];
            deg[j] += w[k];
        }
        deg
    }

    /// `Σ_{i≠j} v_ij w_ij − α Σ_i log d_i + β Σ_{i≠j} w_ij²`; infinite
    /// outside the barrier domain.
    fn objective(&self, w: &DVector<T>) -> T {
        let deg = self.degrees(w);
        if deg.iter().any(|&v| !(v > T::zero())) {
            return T::max_value().unwrap();
        }
        let two = lit::<T>(2.0);
        let barrier = deg.iter().fold(T::zero(), |a, &v| a + v.ln());
        two * self.v.dot(w) - self.alpha * barrier + two * self.beta * w.norm_squared()
    }

    fn gradient(&self, w: &DVector<T>) -> DVector<T> {
        let deg = self.degrees(w);
        let two = lit::<T>(2.0);
        let four = lit::<T>(4.0);
        DVector::from_fn(self.pairs.len(), |k, _| {
            let (i, j) = self.pairs[k];
            two * self.v[k] - self.alpha * (T::one() / deg[i] + T::one() / deg[j]) + four * self.beta * w[k]
        })
    }

    fn weight_matrix(&self, w: &DVector<T>) -> Result<WeightMatrix<T>> {
        let mut m = DMatrix::zeros(self.d, self.d);
        for (k, &(i, j)) in self.pairs.iter().enumerate() {
            m[(i, j)] = w[k];
            m[(j, i)] = w[k];
        }
        WeightMatrix::new(m)
    }
}

fn kkt<T: Scalar>(w: &DVector<T>, g: &DVector<T>) -> T {
    w.iter()
        .zip(g.iter())
        .fold(T::zero(), |a, (&wk, &gk)| a.max(wk.min(gk).abs()))
}

/// `max_e |min(w_e, ∂f/∂w_e)|` for the edge-vector objective; zero exactly
/// at a first-order stationary point of the constrained problem.
pub fn smooth_kkt_residual<T: Scalar>(v: &DMatrix<T>, w: &WeightMatrix<T>, alpha: T, beta: T) -> Result<T> {
    let p = problem(v, alpha, beta)?;
    let wv = DVector::from_iterator(p.pairs.len(), p.pairs.iter().map(|&(i, j)| w.get(i, j)));
    Ok(kkt(&wv, &p.gradient(&wv)))
}

fn problem<T: Scalar>(v: &DMatrix<T>, alpha: T, beta: T) -> Result<Problem<T>> {
    let d = v.nrows();
    if v.ncols() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: v.ncols(),
        });
    }
    if d < 2 {
        return Err(Error::Degenerate("need at least 2 parts".into()));
    }
    for (name, val) in [("alpha", alpha), ("beta", beta)] {
        if !(val > T::zero()) || !val.is_finite() {
            return Err(Error::InvalidParameter {
                name,
                detail: format!("must be positive, got {val}"),
            });
        }
    }
    let pairs: Vec<(usize, usize)> = (0..d)
        .flat_map(|i| ((i + 1)..d).map(move |j| (i, j)))
        .collect();
    let v = DVector::from_iterator(pairs.len(), pairs.iter().map(|&(i, j)| v[(i, j)]));
    if v.iter().any(|x| !x.is_finite() || *x < T::zero()) {
        return Err(Error::InvalidParameter {
            name: "v",
            detail: "distances must be finite and nonnegative".into(),
        });
    }
    Ok(Problem {
        d,
        pairs,
        v,
        alpha,
        beta,
    })
}

/// Mean squared differences `v_ij = (1/N) Σ_n (z_ni − z_nj)²`, the empirical
/// second moments of the log-ratios.
pub fn pairwise_smoothness<T: Scalar>(z: &DMatrix<T>) -> DMatrix<T> {
    let (n, d) = z.shape();
    let inv = T::one() / lit::<T>(n.max(1) as f64);
    DMatrix::from_fn(d, d, |i, j| (z.column(i) - z.column(j)).norm_squared() * inv)
}

/// Projected gradient descent with Barzilai–Borwein steps and Armijo
/// backtracking on `{w ≥ 0}`.
pub fn smooth_graph_solve<T: Scalar>(
    v: &DMatrix<T>,
    alpha: T,
    beta: T,
    options: &SmoothOptions<T>,
) -> Result<SmoothSolution<T>> {
    let p = problem(v, alpha, beta)?;
    let m = p.pairs.len();
    let mf = lit::<T>(m as f64);
    let df = lit::<T>(p.d as f64);
    let two = lit::<T>(2.0);
    let eight = lit::<T>(8.0);
    let sv = p.v.sum();
    // minimizer of the objective along the constant ray w = c 1
    let c = (-two * sv + (lit::<T>(4.0) * sv * sv + lit::<T>(16.0) * beta * mf * alpha * df).sqrt())
        / (eight * beta * mf);
    let mut w = DVector::from_element(m, c);
    let mut f = p.objective(&w);
    let mut g = p.gradient(&w);
    let mut step = T::one() / (lit::<T>(4.0) * beta + alpha * df);
    let sigma = lit::<T>(1e-4);

    for iter in 1..=options.max_iterations {
        let mut t = step;
        let (w_new, f_new) = loop {
            let cand = (&w - &g * t).map(|x| x.max(T::zero()));
            let fc = p.objective(&cand);
            if fc <= f + sigma * g.dot(&(&cand - &w)) {
                break (cand, fc);
            }
            t *= lit::<T>(0.5);
            if t < lit::<T>(1e-30) {
                return Err(Error::NonConvergence {
                    iterations: iter,
                    objective: f.to_f64(),
                });
            }
        };
        let g_new = p.gradient(&w_new);
        let s = &w_new - &w;
        let y = &g_new - &g;
        let sy = s.dot(&y);
        step = if sy > T::zero() {
            (s.norm_squared() / sy).min(lit(1e10))
        } else {
            t * two
        };
        let change = (f - f_new).abs() / f_new.abs().max(T::one());
        w = w_new;
        f = f_new;
        g = g_new;
        let r = kkt(&w, &g);
        if change < options.tolerance && r <= options.kkt_tolerance {
            return Ok(SmoothSolution {
                weights: p.weight_matrix(&w)?,
                objective: f,
                iterations: iter,
                kkt_residual: r,
            });
        }
    }
    Err(Error::NonConvergence {
        iterations: options.max_iterations,
        objective: f.to_f64(),
    })
}

/// Learns a graph on which the log-data varies smoothly.
pub fn smooth_graph_learn<T: Scalar>(data: &PreprocessedData<T>, alpha: T, beta: T) -> Result<WeightMatrix<T>> {
    let v = pairwise_smoothness(data.z());
    Ok(smooth_graph_solve(&v, alpha, beta, &SmoothOptions::default())?.weights)
}
