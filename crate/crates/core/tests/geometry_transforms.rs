mod common;

use common::strategies::{connected_graph, graph_and_signals};
use common::{half_double_sum, max_abs};
use gcoda::geometry::{
    inner_product, metric_matrix, norm, perturb_w, power_w, q_norm, Composition, GraphSimplexSpec,
    InnerProductParams, QExponent,
};
use gcoda::graph::build_laplacian;
use gcoda::transforms::{clr, graph_fourier, orthonormal_basis, pivot_ilr, GilrBasis};
use nalgebra::{DMatrix, DVector};
use proptest::prelude::*;

fn comp(v: &DVector<f64>) -> Composition<f64> {
    Composition::from_log(v).unwrap()
}

proptest! {
    #[test]
    fn inner_product_ignores_component_scaling((w, f, g) in graph_and_signals(), shift in -3.0f64..3.0) {
        let l = build_laplacian(&w);
        let p = InnerProductParams::default();
        let base = inner_product(&comp(&f), &comp(&g), &l, &p).unwrap();
        let mut fs = f.clone();
        for &v in l.partition().component(0) {
            fs[v] += shift;
        }
        let shifted = inner_product(&comp(&fs), &comp(&g), &l, &p).unwrap();
        prop_assert!((base - shifted).abs() <= 1e-10 * (1.0 + base.abs()));
    }

    #[test]
    fn inner_product_matches_weighted_double_sum((w, f, g) in graph_and_signals(), alpha in 0.0f64..5.0) {
        let l = build_laplacian(&w);
        let ip = inner_product(&comp(&f), &comp(&g), &l, &InnerProductParams::with_alpha(alpha)).unwrap();
        let direct = alpha * f.dot(&g) + half_double_sum(w.matrix(), &f, &g);
        prop_assert!((ip - direct).abs() <= 1e-10 * (1.0 + direct.abs()));
    }

    #[test]
    fn higher_power_adds_power_term((w, f, g) in graph_and_signals(), power in 2u32..=3) {
        let l = build_laplacian(&w);
        let p = InnerProductParams { alpha: 0.0, power };
        let g_mat = metric_matrix(&l, &p).unwrap();
        let mut lm = DMatrix::identity(w.dim(), w.dim());
        for _ in 0..power {
            lm = &lm * l.matrix();
        }
        let expected = l.matrix() + lm;
        prop_assert!(max_abs(&(g_mat - &expected)) <= 1e-9 * (1.0 + max_abs(&expected)));
        let ip = inner_product(&comp(&f), &comp(&g), &l, &p).unwrap();
        prop_assert!((ip - f.dot(&(&expected * &g))).abs() <= 1e-8 * (1.0 + ip.abs()));
    }

    #[test]
    fn cauchy_schwarz((w, f, g) in graph_and_signals(), alpha in 0.0f64..2.0) {
        let l = build_laplacian(&w);
        let p = InnerProductParams::with_alpha(alpha);
        let (x, y) = (comp(&f), comp(&g));
        let ip = inner_product(&x, &y, &l, &p).unwrap();
        let bound = norm(&x, &l, &p).unwrap() * norm(&y, &l, &p).unwrap();
        prop_assert!(ip.abs() <= bound * (1.0 + 1e-10) + 1e-12);
    }

    #[test]
    fn perturbation_is_linear_in_coordinates(w in connected_graph(), seed in any::<u64>(), a in -2.0f64..2.0) {
        use rand::SeedableRng;
        let mut r = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let d = w.dim();
        let l = build_laplacian(&w);
        let spec = GraphSimplexSpec::for_laplacian(&l);
        let x = spec.close(common::random_composition(&mut r, d).values()).unwrap();
        let y = spec.close(common::random_composition(&mut r, d).values()).unwrap();
        let basis = GilrBasis::gilr1(&l, 0.0, None).unwrap();
        let sum = perturb_w(&x, &y, &spec).unwrap();
        let zs = basis.apply(&sum).unwrap();
        let expect = basis.apply(&x).unwrap() + basis.apply(&y).unwrap();
        prop_assert!((zs - expect).amax() <= 1e-9);
        let px = power_w(a, &x, &spec).unwrap();
        prop_assert!(spec.contains(&px));
        let zp = basis.apply(&px).unwrap();
        prop_assert!((zp - basis.apply(&x).unwrap() * a).amax() <= 1e-9);
    }

    #[test]
    fn q_norm_two_is_graph_norm((w, f, _g) in graph_and_signals(), alpha in 0.0f64..3.0) {
        let l = build_laplacian(&w);
        let x = comp(&f);
        let q2 = q_norm(&x, &w, QExponent::Finite(2.0), alpha).unwrap();
        let n2 = norm(&x, &l, &InnerProductParams::with_alpha(alpha)).unwrap();
        prop_assert!((q2 - n2).abs() <= 1e-9 * (1.0 + n2));
        let qi = q_norm(&x, &w, QExponent::Infinite, alpha).unwrap();
        prop_assert!(qi >= 0.0);
    }

    #[test]
    fn every_basis_is_an_isometry((w, f, g) in graph_and_signals(), alpha in prop::sample::select(vec![0.0, 0.1, 1.0, 10.0])) {
        let l = build_laplacian(&w);
        let p = InnerProductParams::with_alpha(alpha);
        let (x, y) = (comp(&f), comp(&g));
        let ip = inner_product(&x, &y, &l, &p).unwrap();
        for basis in [
            GilrBasis::gilr1(&l, alpha, None).unwrap(),
            GilrBasis::gilr2(&l, alpha).unwrap(),
            GilrBasis::weighted_clr(&l, alpha).unwrap(),
        ] {
            let dot = basis.apply(&x).unwrap().dot(&basis.apply(&y).unwrap());
            prop_assert!((dot - ip).abs() <= 1e-9 * (1.0 + f.norm() * g.norm() * (1.0 + max_abs(l.matrix()) + alpha)));
        }
    }

    #[test]
    fn inverse_returns_to_simplex((w, f, _g) in graph_and_signals()) {
        let l = build_laplacian(&w);
        let spec = GraphSimplexSpec::for_laplacian(&l);
        let x = comp(&f);
        for basis in [GilrBasis::gilr1(&l, 0.0, None).unwrap(), GilrBasis::gilr2(&l, 0.0).unwrap()] {
            let back = basis.invert_on(&basis.apply(&x).unwrap(), &spec).unwrap();
            prop_assert!(spec.contains(&back));
            let closed = spec.close(x.values()).unwrap();
            prop_assert!((back.log() - closed.log()).amax() <= 1e-9 * (1.0 + f.norm()));
        }
    }

    #[test]
    fn orthonormal_basis_has_identity_gram(w in connected_graph(), alpha in prop::sample::select(vec![0.0, 0.5, 4.0])) {
        let l = build_laplacian(&w);
        let spec = GraphSimplexSpec::for_laplacian(&l);
        let basis = GilrBasis::gilr2(&l, alpha).unwrap();
        let vs = orthonormal_basis(&basis, &spec).unwrap();
        let p = InnerProductParams::with_alpha(alpha);
        for (i, a) in vs.iter().enumerate() {
            for (j, b) in vs.iter().enumerate() {
                let ip = inner_product(a, b, &l, &p).unwrap();
                let target = if i == j { 1.0 } else { 0.0 };
                prop_assert!((ip - target).abs() <= 1e-9);
            }
        }
    }

    #[test]
    fn fourier_energy_matches_quadratic_form((w, f, _g) in graph_and_signals()) {
        let l = build_laplacian(&w);
        let coeffs = graph_fourier(&comp(&f), &l).unwrap();
        prop_assert!(coeffs.windows(2).all(|c| c[0].frequency <= c[1].frequency));
        let energy: f64 = coeffs.iter().map(|c| c.frequency * c.projection * c.projection).sum();
        let q = f.dot(&(l.matrix() * &f));
        prop_assert!((energy - q).abs() <= 1e-9 * (1.0 + q));
        let total: f64 = coeffs.iter().map(|c| c.projection * c.projection).sum();
        prop_assert!((total - f.norm_squared()).abs() <= 1e-9 * (1.0 + f.norm_squared()));
    }

    #[test]
    fn clr_and_ilr_norms_agree(v in prop::collection::vec(-3.0f64..3.0, 2..12)) {
        let x = comp(&DVector::from_vec(v));
        prop_assert!((clr(&x).norm() - pivot_ilr(&x).norm()).abs() <= 1e-10);
        prop_assert!(clr(&x).sum().abs() <= 1e-12 * (1.0 + x.log().norm()));
    }
}

#[test]
fn single_precision_gilr_round_trip() {
    let w = gcoda::WeightMatrix32::from_edges(3, &[(0, 1, 1.0), (1, 2, 0.5)]).unwrap();
    let l = build_laplacian(&w);
    let basis = gcoda::GilrBasis32::gilr1(&l, 0.0, None).unwrap();
    let x = gcoda::Composition32::from_slice(&[0.2, 0.3, 0.5]).unwrap();
    let z = basis.apply(&x).unwrap();
    let spec = GraphSimplexSpec::for_laplacian(&l);
    let back = basis.invert_on(&z, &spec).unwrap();
    let closed = spec.close(x.values()).unwrap();
    for (a, b) in back.values().iter().zip(closed.values().iter()) {
        assert!((a - b).abs() < 1e-5);
    }
}
