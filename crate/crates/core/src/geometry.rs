//! The graph simplex, its vector-space operations and the `(W, α)` inner
//! product and q-norm families.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::graph::{incidence_matrix, ComponentPartition, Laplacian, WeightMatrix};
use crate::scalar::{lit, Scalar};

/// Strictly positive, finite vector.
#[derive(Debug, Clone, PartialEq)]
pub struct Composition<T: Scalar>(DVector<T>);

impl<T: Scalar> Composition<T> {
    pub fn new(values: DVector<T>) -> Result<Self> {
        if let Some((index, &v)) = values
            .iter()
            .enumerate()
            .find(|(_, &v)| !(v > T::zero()) || !v.is_finite())
        {
            return Err(Error::NonPositive {
                index,
                value: v.to_f64(),
            });
        }
        Ok(Self(values))
    }

    pub fn from_slice(values: &[T]) -> Result<Self> {
        Self::new(DVector::from_column_slice(values))
    }

    /// The all-ones vector.
    pub fn ones(d: usize) -> Self {
        Self(DVector::from_element(d, T::one()))
    }

    /// `exp(v)` entrywise.
    pub fn from_log(v: &DVector<T>) -> Result<Self> {
        Self::new(v.map(|x| x.exp()))
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn values(&self) -> &DVector<T> {
        &self.0
    }

    pub fn into_inner(self) -> DVector<T> {
        self.0
    }

    pub fn log(&self) -> DVector<T> {
        self.0.map(|x| x.ln())
    }
}

/// Per-component closure constants of a graph simplex.
#[derive(Debug, Clone, PartialEq)]
pub struct GraphSimplexSpec<T: Scalar> {
    partition: ComponentPartition,
    kappas: Vec<T>,
}

impl<T: Scalar> GraphSimplexSpec<T> {
    pub fn new(partition: ComponentPartition, kappas: Vec<T>) -> Result<Self> {
        if kappas.len() != partition.count() {
            return Err(Error::DimensionMismatch {
                expected: partition.count(),
                found: kappas.len(),
            });
        }
        if kappas.iter().any(|&k| !(k > T::zero()) || !k.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "kappa",
                detail: "closure constants must be positive and finite".into(),
            });
        }
        Ok(Self { partition, kappas })
    }

    /// All closure constants equal to one.
    pub fn unit(partition: ComponentPartition) -> Self {
        let kappas = vec![T::one(); partition.count()];
        Self { partition, kappas }
    }

    pub fn for_laplacian(l: &Laplacian<T>) -> Self {
        Self::unit(l.partition().clone())
    }

    pub fn partition(&self) -> &ComponentPartition {
        &self.partition
    }

    pub fn kappas(&self) -> &[T] {
        &self.kappas
    }

    pub fn dim(&self) -> usize {
        self.partition.dim()
    }

    /// Neutral element: `κ_m / |V_m|` on every vertex of component `m`.
    pub fn neutral(&self) -> Composition<T> {
        let mut v = DVector::zeros(self.dim());
        for (m, c) in self.partition.components().iter().enumerate() {
            let val = self.kappas[m] / lit::<T>(c.len() as f64);
            for &i in c {
                v[i] = val;
            }
        }
        Composition(v)
    }

    /// Rescales every component of a positive vector to its closure
    /// constant.
    pub fn close(&self, x: &DVector<T>) -> Result<Composition<T>> {
        self.check_dim(x.len())?;
        let mut out = x.clone();
        for (m, c) in self.partition.components().iter().enumerate() {
            let s = c.iter().fold(T::zero(), |a, &i| a + x[i]);
            for &i in c {
                out[i] = x[i] * self.kappas[m] / s;
            }
        }
        Composition::new(out)
    }

    /// Fails unless every component of `x` sums to its closure constant
    /// within the conformance tolerance.
    pub fn check(&self, x: &Composition<T>) -> Result<()> {
        self.check_dim(x.dim())?;
        for (m, c) in self.partition.components().iter().enumerate() {
            let s = c.iter().fold(T::zero(), |a, &i| a + x.values()[i]);
            let k = self.kappas[m];
            if (s - k).abs() > T::conformance_tolerance() * k {
                return Err(Error::OffSimplex {
                    component: m,
                    sum: s.to_f64(),
                    kappa: k.to_f64(),
                });
            }
        }
        Ok(())
    }

    pub fn contains(&self, x: &Composition<T>) -> bool {
        self.check(x).is_ok()
    }

    fn check_dim(&self, n: usize) -> Result<()> {
        if n != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: n,
            });
        }
        Ok(())
    }
}

/// Plain perturbation `x ⊕ y` on the positive orthant.
pub fn perturb<T: Scalar>(x: &Composition<T>, y: &Composition<T>) -> Result<Composition<T>> {
    same_dim(x.dim(), y.dim())?;
    Composition::new(x.values().component_mul(y.values()))
}

/// Plain powering `a ⊙ x` on the positive orthant.
pub fn power<T: Scalar>(a: T, x: &Composition<T>) -> Result<Composition<T>> {
    Composition::new(x.values().map(|v| v.powf(a)))
}

/// Perturbation on the graph simplex: componentwise product renormalized
/// per component.
pub fn perturb_w<T: Scalar>(
    x: &Composition<T>,
    y: &Composition<T>,
    spec: &GraphSimplexSpec<T>,
) -> Result<Composition<T>> {
    spec.check(x)?;
    spec.check(y)?;
    spec.close(&x.values().component_mul(y.values()))
}

/// Powering on the graph simplex.
pub fn power_w<T: Scalar>(
    a: T,
    x: &Composition<T>,
    spec: &GraphSimplexSpec<T>,
) -> Result<Composition<T>> {
    spec.check(x)?;
    spec.close(&x.values().map(|v| v.powf(a)))
}

/// Parameters of the `(W, α)` inner product.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InnerProductParams<T: Scalar> {
    /// Weight of the absolute (non-ratio) information, `α ≥ 0`.
    pub alpha: T,
    /// Laplacian power `m`; for `m > 1` the term `⟨log x, L^m log y⟩` is
    /// added on top of the `m = 1` form.
    pub power: u32,
}

impl<T: Scalar> Default for InnerProductParams<T> {
    fn default() -> Self {
        Self {
            alpha: T::zero(),
            power: 1,
        }
    }
}

impl<T: Scalar> InnerProductParams<T> {
    pub fn with_alpha(alpha: T) -> Self {
        Self { alpha, power: 1 }
    }

    fn validate(&self) -> Result<()> {
        if !(self.alpha >= T::zero()) || !self.alpha.is_finite() {
            return Err(Error::InvalidParameter {
                name: "alpha",
                detail: format!("must be finite and nonnegative, got {}", self.alpha),
            });
        }
        if self.power == 0 || self.power > 4 {
            return Err(Error::InvalidParameter {
                name: "power",
                detail: format!("Laplacian power must be in 1..=4, got {}", self.power),
            });
        }
        Ok(())
    }
}

/// Matrix `G` with `⟨x, y⟩_{W,α} = log(x)ᵀ G log(y)`:
/// `αI + L`, plus `L^m` when `m > 1`.
pub fn metric_matrix<T: Scalar>(
    l: &Laplacian<T>,
    p: &InnerProductParams<T>,
) -> Result<DMatrix<T>> {
    p.validate()?;
    let d = l.dim();
    let mut g = l.matrix() + DMatrix::identity(d, d) * p.alpha;
    if p.power > 1 {
        g += l.power(p.power);
    }
    Ok(g)
}

/// `α⟨log x, log y⟩ + ⟨log x, L log y⟩` (plus the `L^m` term for `m > 1`).
pub fn inner_product<T: Scalar>(
    x: &Composition<T>,
    y: &Composition<T>,
    l: &Laplacian<T>,
    p: &InnerProductParams<T>,
) -> Result<T> {
    same_dim(l.dim(), x.dim())?;
    same_dim(l.dim(), y.dim())?;
    let g = metric_matrix(l, p)?;
    Ok(x.log().dot(&(g * y.log())))
}

/// `‖x‖_{W,α}`.
pub fn norm<T: Scalar>(
    x: &Composition<T>,
    l: &Laplacian<T>,
    p: &InnerProductParams<T>,
) -> Result<T> {
    Ok(inner_product(x, x, l, p)?.max(T::zero()).sqrt())
}

/// Exponent of a q-norm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum QExponent<T> {
    Finite(T),
    Infinite,
}

/// Graph q-norm built from the weighted incidence matrix:
/// `(α‖log x‖_q^q + ½‖d_{W^{1/q}} log x‖_q^q)^{1/q}` for finite `q` and
/// `max(α‖log x‖_∞, ½‖d_W log x‖_∞)` for `q = ∞`.
pub fn q_norm<T: Scalar>(
    x: &Composition<T>,
    w: &WeightMatrix<T>,
    q: QExponent<T>,
    alpha: T,
) -> Result<T> {
    same_dim(w.dim(), x.dim())?;
    if !(alpha >= T::zero()) {
        return Err(Error::InvalidParameter {
            name: "alpha",
            detail: format!("must be nonnegative, got {alpha}"),
        });
    }
    let f = x.log();
    let half = lit::<T>(0.5);
    match q {
        QExponent::Finite(q) => {
            if !(q >= T::one()) || !q.is_finite() {
                return Err(Error::InvalidParameter {
                    name: "q",
                    detail: format!("must be at least 1, got {q}"),
                });
            }
            let d = incidence_matrix(w, T::one() / q);
            let abs_part = f.iter().fold(T::zero(), |a, &v| a + v.abs().powf(q));
            let diff_part = d
                .apply(&f)
                .iter()
                .fold(T::zero(), |a, &v| a + v.abs().powf(q));
            Ok((alpha * abs_part + half * diff_part).powf(T::one() / q))
        }
        QExponent::Infinite => {
            let d = incidence_matrix(w, T::one());
            let abs_part = f.iter().fold(T::zero(), |a, &v| a.max(v.abs()));
            let diff_part = d.apply(&f).iter().fold(T::zero(), |a, &v| a.max(v.abs()));
            Ok((alpha * abs_part).max(half * diff_part))
        }
    }
}

/// Classical Aitchison inner product
/// `(1/2D) Σ_{i,j} log(x_i/x_j) log(y_i/y_j)`.
pub fn aitchison_inner<T: Scalar>(x: &Composition<T>, y: &Composition<T>) -> Result<T> {
    same_dim(x.dim(), y.dim())?;
    let (lx, ly) = (x.log(), y.log());
    let d = x.dim();
    let mut s = T::zero();
    for i in 0..d {
        for j in 0..d {
            s += (lx[i] - lx[j]) * (ly[i] - ly[j]);
        }
    }
    Ok(s / lit::<T>(2.0 * d as f64))
}

pub(crate) fn same_dim(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(Error::DimensionMismatch { expected, found });
    }
    Ok(())
}
