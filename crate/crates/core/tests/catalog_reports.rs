use graph_pressure::catalog::{verify, ExampleId, Tolerances};

#[test]
fn reports_match_the_closed_forms() {
    let tol = Tolerances::default();
    for id in [ExampleId::Figure8, ExampleId::Dumbbell, ExampleId::BeltBuckle] {
        let report = verify(id, &tol);
        let failed: Vec<_> = report.failures().map(|c| c.id.clone()).collect();
        assert!(report.all_pass(), "{id}: {failed:?}\n{}", report.to_table());
    }
}

#[test]
fn rose_fails_only_the_pressure_curvature_bracket() {
    let report = verify(ExampleId::Rose, &Tolerances::default());
    let failed: Vec<_> = report.failures().map(|c| c.id.as_str()).collect();
    assert_eq!(failed, ["rose.K_P.range"], "{}", report.to_table());
}

#[test]
fn csv_has_one_row_per_check() {
    let tol = Tolerances { points: 4, grids: false, ..Tolerances::default() };
    let report = verify(ExampleId::Figure8, &tol);
    let csv = report.to_csv();
    assert_eq!(csv.lines().count(), report.checks.len() + 1);
    assert!(csv.lines().skip(1).all(|l| l.ends_with(",PASS") || l.ends_with(",FAIL")));
}
