use graph_pressure::catalog::ExampleId;
use graph_pressure::moduli::{coordinate_tangents, metric_tensor, MetricKind};
use graph_pressure::thermo::entropy;
use proptest::prelude::*;

fn point() -> impl Strategy<Value = (ExampleId, Vec<f64>)> {
    prop::sample::select(ExampleId::ALL.to_vec()).prop_flat_map(|id| {
        let (lo, hi) = id.sample_box();
        prop::collection::vec(lo..hi, id.dim()).prop_map(move |p| (id, p))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn chart_and_closed_form_feasibility_agree((id, p) in point()) {
        let chart = id.chart();
        let f = chart.feasible(&p).unwrap();
        // skip points within round-off of the boundary
        let near = f.margin.is_some_and(|z| z < 1e-8);
        if !near {
            prop_assert_eq!(f.feasible, id.feasible(&p), "{} at {:?}", id, p);
        }
    }

    #[test]
    fn surface_points_have_entropy_one((id, p) in point()) {
        prop_assume!(id.feasible(&p));
        let chart = id.chart();
        let z = chart.solve_dependent(&p).unwrap();
        prop_assume!(z > 1e-6);
        let l = chart.assemble(&p, z).unwrap();
        let h = entropy(chart.system(), &l).unwrap();
        prop_assert!((h - 1.0).abs() < 1e-10, "h = {}", h);
    }

    #[test]
    fn tangents_and_positive_metrics((id, p) in point()) {
        prop_assume!(id.feasible(&p));
        let chart = id.chart();
        prop_assume!(chart.solve_dependent(&p).unwrap() > 1e-6);
        prop_assert!(coordinate_tangents(&chart, &p).is_ok());
        for kind in [MetricKind::Pressure, MetricKind::WeilPetersson] {
            let m = metric_tensor(&chart, &p, kind).unwrap();
            prop_assert!(m.e() > 0.0);
            if let (Some(f), Some(g)) = (m.f(), m.g()) {
                prop_assert!(g > 0.0);
                prop_assert!(m.e() * g - f * f > 0.0);
            }
        }
    }

    #[test]
    fn analytic_slopes_match_differences((id, p) in point()) {
        prop_assume!(id.feasible(&p));
        let chart = id.chart();
        let pt = chart.point(&p).unwrap();
        prop_assume!(pt.dependent > 1e-3);
        let fd = chart.slopes_fd(&p).unwrap();
        for (a, b) in pt.slopes.iter().zip(&fd) {
            prop_assert!((a - b).abs() < 1e-6 * a.abs().max(1.0), "{} vs {}", a, b);
        }
    }
}

#[test]
fn weil_petersson_is_pressure_over_volume() {
    let chart = ExampleId::BeltBuckle.chart();
    let p = [0.9, 1.3];
    let pm = metric_tensor(&chart, &p, MetricKind::Pressure).unwrap();
    let wp = metric_tensor(&chart, &p, MetricKind::WeilPetersson).unwrap();
    let ratio = pm.e() / wp.e();
    assert!(ratio > 0.0);
    assert!((pm.gram.clone() / ratio - wp.gram).amax() < 1e-12 * pm.e());
}
