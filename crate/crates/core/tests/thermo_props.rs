use graph_pressure::catalog::ExampleId;
use graph_pressure::thermo::{entropy, perron_data, pressure, Potential};
use graph_pressure::{DirectedEdgeSystem, EdgeWeighting, UndirectedGraph};
use proptest::prelude::*;

fn example() -> impl Strategy<Value = ExampleId> {
    prop::sample::select(ExampleId::ALL.to_vec())
}

fn case() -> impl Strategy<Value = (DirectedEdgeSystem, EdgeWeighting)> {
    example().prop_flat_map(|id| {
        let k = id.graph().num_edges();
        prop::collection::vec(0.2f64..3.0, k)
            .prop_map(move |l| (id.system(), EdgeWeighting::new(l).unwrap()))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn equilibrium_is_stochastic_and_reversible((sys, l) in case()) {
        let pd = perron_data(&sys, &Potential::from_lengths(&sys, &l, 1.0).unwrap()).unwrap();
        let p = pd.stochastic();
        let n = sys.num_states();
        for j in 0..n {
            let col: f64 = (0..n).map(|i| p[(i, j)]).sum();
            prop_assert!((col - 1.0).abs() < 1e-12);
        }
        let mu = pd.stationary();
        prop_assert!((mu.sum() - 1.0).abs() < 1e-12);
        prop_assert!(((p * mu) - mu).amax() < 1e-12);
        for i in 0..n {
            prop_assert!(mu[i] > 0.0);
            prop_assert!((mu[i] - mu[sys.reversal(i)]).abs() < 1e-12);
        }
    }

    #[test]
    fn entropy_scales_inversely((sys, l) in case(), c in 0.1f64..10.0) {
        let h = entropy(&sys, &l).unwrap();
        let hc = entropy(&sys, &l.scaled(c).unwrap()).unwrap();
        prop_assert!((hc * c - h).abs() < 1e-12 * h.max(1.0));
        let f = Potential::from_lengths(&sys, &l, h).unwrap();
        prop_assert!(pressure(&sys, &f).unwrap().abs() < 1e-12);
    }

    #[test]
    fn pressure_decreases_in_s((sys, l) in case(), s in 0.05f64..3.0, ds in 0.01f64..1.0) {
        let p = |s: f64| pressure(&sys, &Potential::from_lengths(&sys, &l, s).unwrap()).unwrap();
        prop_assert!(p(s + ds) < p(s));
    }
}

#[test]
fn uniform_lengths_give_log_of_branching() {
    // a 3-regular graph of cycle rank k: each directed edge has 2 successors
    let sys = ExampleId::BeltBuckle.system();
    let h = entropy(&sys, &EdgeWeighting::new(vec![1.0; 3]).unwrap()).unwrap();
    assert!((h - 2f64.ln()).abs() < 1e-14);
    let rose = ExampleId::Rose.system();
    let h = entropy(&rose, &EdgeWeighting::new(vec![1.0; 3]).unwrap()).unwrap();
    assert!((h - 5f64.ln()).abs() < 1e-14);
}

#[test]
fn file_graph_behaves_like_catalog() {
    let g: UndirectedGraph = "# theta\nvertex p\nvertex q\nedge a p q\nedge b p q\nedge c q p\n".parse().unwrap();
    let sys = DirectedEdgeSystem::new(g).unwrap();
    let l = EdgeWeighting::new(vec![0.5, 1.0, 2.0]).unwrap();
    let h = entropy(&sys, &l).unwrap();
    let want = entropy(&ExampleId::BeltBuckle.system(), &l).unwrap();
    assert!((h - want).abs() < 1e-14);
}
