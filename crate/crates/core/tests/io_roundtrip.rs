mod common;

use common::strategies::{graph_and_signals, positive_data};
use gcoda::io::{read_learned_graph, read_weight_matrix, write_learned_graph, write_matrix};
use gcoda::learning::{double_center, stepwise_select, StepwiseOptions};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn weight_matrix_survives_csv((w, _f, _g) in graph_and_signals(), with_header in any::<bool>()) {
        let names: Vec<String> = (0..w.dim()).map(|i| format!("part{i}")).collect();
        let mut buf = Vec::new();
        write_matrix(&mut buf, with_header.then_some(names.as_slice()), w.matrix()).unwrap();
        let (header, back) = read_weight_matrix::<f64, _>(buf.as_slice()).unwrap();
        prop_assert_eq!(back.matrix(), w.matrix());
        prop_assert_eq!(header, with_header.then_some(names));
    }

    #[test]
    fn learned_graph_survives_csv(x in positive_data(3, 7)) {
        let data = double_center(&x).unwrap();
        let g = stepwise_select(&data, &StepwiseOptions::default()).unwrap();
        let mut buf = Vec::new();
        write_learned_graph(&mut buf, &g, data.names()).unwrap();
        let back = read_learned_graph::<f64, _>(buf.as_slice(), x.ncols()).unwrap();
        prop_assert_eq!(back, g);
    }
}
