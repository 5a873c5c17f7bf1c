mod common;

use common::max_abs;
use common::strategies::positive_data;
use gcoda::geometry::Composition;
use gcoda::graph::WeightMatrix;
use gcoda::learning::{double_center, stepwise_select, StepwiseOptions};
use gcoda::quotient::{
    class_representative, contrast_from_ratio_subsets, quotient_gilr, quotient_gilr_inverse,
    quotient_inner_product, signed_decomposition, signed_double_sum, ContrastMatrix, QuotientSpace,
};
use gcoda::regression::{
    evaluate_splits, fit_zerosum, model_graph, project_coefficients, split_indices, zerosum_kkt_residual,
    SplitOptions,
};
use nalgebra::{DMatrix, DVector};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn response(x: &DMatrix<f64>, seed: u64) -> DVector<f64> {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    let mut b = DVector::from_fn(x.ncols(), |_, _| r.random_range(-1.0..1.0));
    b.add_scalar_mut(-b.mean());
    let noise = DVector::from_fn(x.nrows(), |_, _| r.random_range(-0.1..0.1));
    x.map(f64::ln) * b + noise
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn zerosum_fit_is_scale_invariant(x in positive_data(2, 7), seed in any::<u64>(), frac in 0.0f64..0.5) {
        let y = response(&x, seed);
        let model = fit_zerosum(&x, &y, frac).unwrap();
        let b = model.clr_coefficients();
        prop_assert!(b.sum().abs() <= 1e-10 * (1.0 + b.amax()));
        prop_assert!(zerosum_kkt_residual(&x, &y, &model).unwrap() <= 1e-6);
        let scaled = DMatrix::from_fn(x.nrows(), x.ncols(), |r, c| x[(r, c)] * (1.0 + r as f64));
        let (p1, p2) = (model.predict_rows(&x).unwrap(), model.predict_rows(&scaled).unwrap());
        prop_assert!((p1 - p2).amax() <= 1e-9 * (1.0 + y.amax()));
    }

    #[test]
    fn projection_satisfies_normal_equations(x in positive_data(3, 7), seed in any::<u64>()) {
        let w = common::random_connected(&mut ChaCha8Rng::seed_from_u64(seed), x.ncols());
        let y = response(&x, seed);
        let model = fit_zerosum(&x, &y, 0.0).unwrap();
        let p = project_coefficients(&model, &w).unwrap();
        let l = p.laplacian().matrix();
        let r = l * (model.clr_coefficients() - l * p.log_coefficients());
        prop_assert!(r.amax() <= 1e-9 * (1.0 + model.clr_coefficients().amax()));
        prop_assert!((p.normal_equation_residual() - r.amax()).abs() <= 1e-12);
        // A connected graph spans every zero-sum direction.
        prop_assert!((p.effective_coefficients() - model.clr_coefficients()).amax() <= 1e-8);
        let xc = Composition::new(x.row(0).transpose()).unwrap();
        let a = p.predict(&xc).unwrap();
        prop_assert!((a - p.predict_pairwise(&xc).unwrap()).abs() <= 1e-9 * (1.0 + a.abs()));
        let edges = model_graph(&p, &x.map(f64::ln)).unwrap();
        prop_assert!(edges.iter().all(|e| e.sigma >= 0.0 && e.display_weight >= 0.0 && e.positive == (e.weight > 0.0)));
    }

    #[test]
    fn aitchison_projection_is_identity(x in positive_data(2, 7), seed in any::<u64>()) {
        let y = response(&x, seed);
        let model = fit_zerosum(&x, &y, 0.0).unwrap();
        let p = project_coefficients(&model, &WeightMatrix::aitchison(x.ncols())).unwrap();
        prop_assert!((p.predict_rows(&x).unwrap() - model.predict_rows(&x).unwrap()).amax() <= 1e-10);
    }

    #[test]
    fn splits_partition_the_samples(n in 3usize..60, seed in any::<u64>(), rep in 0usize..200) {
        let n_train = (2 * n) / 3;
        let (train, test) = split_indices(n, n_train.max(1), seed, rep);
        let mut all: Vec<usize> = train.iter().chain(&test).copied().collect();
        all.sort_unstable();
        prop_assert_eq!(all, (0..n).collect::<Vec<_>>());
        prop_assert_eq!(split_indices(n, n_train.max(1), seed, rep), (train, test));
    }

    #[test]
    fn quotient_classes_are_kernel_cosets(seed in any::<u64>(), d in 3usize..9) {
        let mut r = ChaCha8Rng::seed_from_u64(seed);
        let k = r.random_range(1..d);
        let subsets: Vec<DMatrix<f64>> = (0..k)
            .map(|_| DMatrix::from_fn(d, d, |i, j| if i != j && r.random_bool(0.4) { r.random_range(0.1..1.0) } else { 0.0 }))
            .collect();
        let c = contrast_from_ratio_subsets(d, &subsets).unwrap();
        let s = QuotientSpace::from_contrast(&c);
        let x = common::random_composition(&mut r, d);
        let rep = class_representative(&x, &s).unwrap();
        prop_assert!((s.project(&rep.log()) - rep.log()).amax() <= 1e-9 * (1.0 + x.log().norm()));
        let a = quotient_inner_product(&x, &x, &s).unwrap();
        let b = quotient_inner_product(&rep, &rep, &s).unwrap();
        prop_assert!((a - b).abs() <= 1e-9 * (1.0 + a.abs()));
        let z = quotient_gilr(&x, &s).unwrap();
        prop_assert!((z.norm_squared() - a).abs() <= 1e-9 * (1.0 + a.abs()));
        let back = quotient_gilr_inverse(&z, &s).unwrap();
        prop_assert!((back.log() - rep.log()).amax() <= 1e-8 * (1.0 + x.log().norm()));
        let cx = c.evaluate(&x).unwrap();
        prop_assert!((cx.norm_squared() - a).abs() <= 1e-9 * (1.0 + a.abs()));
    }

    #[test]
    fn signed_weights_reproduce_the_form(seed in any::<u64>(), d in 2usize..8) {
        let mut r = ChaCha8Rng::seed_from_u64(seed);
        let rows = DMatrix::from_fn(r.random_range(1..d + 1), d, |_, _| r.random_range(-1.0..1.0));
        let centered = DMatrix::from_fn(rows.nrows(), d, |i, j| rows[(i, j)] - rows.row(i).mean());
        let c = ContrastMatrix::new(centered).unwrap();
        let s = QuotientSpace::from_contrast(&c);
        let w = signed_decomposition(s.matrix()).unwrap();
        let f = common::random_vector(&mut r, d, 2.0);
        let g = common::random_vector(&mut r, d, 2.0);
        let direct = f.dot(&(s.matrix() * &g));
        let sum = signed_double_sum(&w, &f, &g).unwrap();
        prop_assert!((direct - sum).abs() <= 1e-9 * (1.0 + direct.abs() + max_abs(s.matrix())));
    }
}

#[test]
fn split_evaluation_is_reproducible() {
    let mut r = ChaCha8Rng::seed_from_u64(11);
    let x = DMatrix::from_fn(45, 5, |_, _| r.random_range(-1.0f64..1.0).exp());
    let y = response(&x, 12);
    let learned = stepwise_select(&double_center(&x).unwrap(), &StepwiseOptions::default()).unwrap();
    let opts = SplitOptions {
        repetitions: 20,
        seed: 9,
        ..SplitOptions::default()
    };
    let a = evaluate_splits(&x, &y, &learned, &[1, 2, 4], &opts).unwrap();
    let b = evaluate_splits(&x, &y, &learned, &[1, 2, 4], &opts).unwrap();
    assert_eq!(a, b);
    assert_eq!(a.records.len(), 20 * 3 * 2);
    assert_eq!(a.means.len(), 3);
    assert!(evaluate_splits(&x, &y, &learned, &[5], &opts).is_err());
}
