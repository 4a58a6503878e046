use graph_pressure::catalog::{closed_form_eval, ExampleId, Quantity};
use graph_pressure::geometry::{brioschi_curvature, brioschi_curvature_with_step, default_step, ChartField};
use graph_pressure::moduli::MetricKind;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn interior_curvature_is_step_robust(x in 0.3f64..2.5, y in 0.3f64..2.5) {
        let id = ExampleId::BeltBuckle;
        prop_assume!(id.feasible(&[x, y]));
        let chart = id.chart();
        prop_assume!(chart.solve_dependent(&[x, y]).unwrap() > 0.05);
        let field = ChartField { chart: &chart, kind: MetricKind::Pressure };
        let h = default_step(x, y);
        let a = brioschi_curvature_with_step(&field, x, y, h).unwrap();
        let b = brioschi_curvature_with_step(&field, x, y, h / 2.0).unwrap();
        prop_assert!((a - b).abs() < 1e-4 * a.abs().max(1e-2), "{} vs {}", a, b);
    }
}

#[test]
fn dumbbell_pressure_curvature_is_constant() {
    let chart = ExampleId::Dumbbell.chart();
    let field = ChartField { chart: &chart, kind: MetricKind::Pressure };
    for p in [[0.2, 0.4], [0.7, 0.7], [0.3, 0.9]] {
        let k = brioschi_curvature(&field, p[0], p[1]).unwrap();
        let want = closed_form_eval(ExampleId::Dumbbell, Quantity::CurvatureP, &p).unwrap();
        assert!((k - want).abs() < 1e-6 * want.abs(), "{k} vs {want} at {p:?}");
    }
}

#[test]
fn rose_wp_curvature_changes_sign() {
    let chart = ExampleId::Rose.chart();
    let field = ChartField { chart: &chart, kind: MetricKind::WeilPetersson };
    assert!(brioschi_curvature(&field, 5.0, 15.0).unwrap() > 0.0);
    assert!(brioschi_curvature(&field, 19.0, 19.0).unwrap() < 0.0);
}
