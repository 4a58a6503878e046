use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_graph-pressure")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf-8")
}

fn number(o: &Output) -> f64 {
    assert_eq!(o.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&o.stderr));
    stdout(o).trim().parse().expect("a number")
}

#[test]
fn entropy_of_uniform_figure8_is_log3() {
    let o = run(&["entropy", "--example", "figure8", "--lengths", "e1=1,e2=1"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "1.09861228866811\n");
}

#[test]
fn dumbbell_surface_at_log2_is_log2() {
    // the inputs are ln 2 rounded to 15 digits, which moves the answer by
    // about 1e-15
    let o = run(&["surface", "--example", "dumbbell", "--free", "e1=0.693147180559945,e2=0.693147180559945", "--dep", "e3"]);
    assert!((number(&o) - 2f64.ln()).abs() < 2e-15);
}

#[test]
fn graph_file_matches_catalog() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("belt.graph");
    std::fs::write(&path, "# belt buckle\nvertex a\nvertex b\nedge e1 a b\nedge e2 a b\nedge e3 a b\n").unwrap();
    let file = run(&["entropy", "--graph", path.to_str().unwrap(), "--lengths", "e1=1,e2=2,e3=0.5"]);
    let cat = run(&["entropy", "--example", "belt-buckle", "--lengths", "e1=1,e2=2,e3=0.5"]);
    assert_eq!(stdout(&file), stdout(&cat));
    assert_eq!(file.status.code(), Some(0));
}

#[test]
fn normalize_reaches_entropy_one() {
    let o = run(&["normalize", "--example", "rose", "--lengths", "e1=1,e2=2,e3=3"]);
    assert_eq!(o.status.code(), Some(0));
    let lengths = stdout(&o).lines().collect::<Vec<_>>().join(",");
    let h = run(&["entropy", "--example", "rose", "--lengths", &lengths]);
    assert!((number(&h) - 1.0).abs() < 1e-13);
}

#[test]
fn tensor_prints_gram_rows() {
    let o = run(&["tensor", "--example", "dumbbell", "--free", "e1=0.5,e2=0.8", "--metric", "WP"]);
    assert_eq!(o.status.code(), Some(0));
    let rows: Vec<Vec<f64>> =
        stdout(&o).lines().map(|l| l.split_whitespace().map(|v| v.parse().unwrap()).collect()).collect();
    assert_eq!(rows.len(), 2);
    assert_eq!(rows[0][1], rows[1][0]);
    assert!(rows[0][0] > 0.0 && rows[0][0] * rows[1][1] > rows[0][1] * rows[0][1]);
}

#[test]
fn rose_wp_grid_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("rose.csv");
    let args = ["curvature", "--example", "rose", "--metric", "WP", "--grid", "0.5:20:40,0.5:20:40", "--out"];
    let o = run(&[&args[..], &[out.to_str().unwrap()]].concat());
    assert_eq!(o.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&o.stderr));
    let csv = std::fs::read_to_string(&out).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("x,y,K"));
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 1600);
    assert!(rows.iter().any(|r| r[2] == "NA"));
    let at = rows.iter().find(|r| r[0] == "5" && r[1] == "15").expect("(5, 15) on the grid");
    assert!(at[2].parse::<f64>().unwrap() > 0.0);

    // identical invocations give identical bytes
    let again = dir.path().join("again.csv");
    let o = run(&[&args[..], &[again.to_str().unwrap()]].concat());
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(std::fs::read(&out).unwrap(), std::fs::read(&again).unwrap());
}

#[test]
fn curvature_at_a_point() {
    let o = run(&["curvature", "--example", "rose", "--metric", "WP", "--free", "e1=5,e2=15"]);
    assert!(number(&o) > 0.0);
    let o = run(&["curvature", "--example", "rose", "--metric", "WP", "--free", "e1=19,e2=19"]);
    assert!(number(&o) < 0.0);
}

#[test]
fn figure8_probes() {
    let o = run(&["probe", "--example", "figure8", "--metric", "P", "--from", "1", "--to", "0"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("finite "), "{}", stdout(&o));
    let o = run(&["probe", "--example", "figure8", "--metric", "WP", "--from", "1", "--to", "0"]);
    assert!(stdout(&o).starts_with("divergent "), "{}", stdout(&o));
    let o = run(&["probe", "--example", "figure8", "--metric", "WP", "--from", "1", "--to", "inf"]);
    assert!(stdout(&o).starts_with("divergent "), "{}", stdout(&o));
}

#[test]
fn verify_exit_status_follows_report() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("report.csv");
    let o = run(&["verify", "--example", "dumbbell", "--quick", "--out", csv.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).lines().skip(1).all(|l| l.ends_with("PASS")));
    let text = std::fs::read_to_string(&csv).unwrap();
    assert!(text.starts_with("check,expected,got,tolerance,deviation,result\n"));

    // an impossible tolerance turns a check into a failure
    let o = run(&["verify", "--example", "dumbbell", "--quick", "--tol", "surface=0,stationary=0"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("FAIL"));
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        &["entropy", "--example", "figure8"][..],
        &["entropy", "--example", "nope", "--lengths", "e1=1,e2=1"],
        &["entropy", "--example", "figure8", "--graph", "x.graph", "--lengths", "e1=1,e2=1"],
        &["entropy", "--graph", "/nonexistent/x.graph", "--lengths", "e1=1"],
        &["entropy", "--example", "figure8", "--lengths", "e1=1,e9=1"],
        &["entropy", "--example", "figure8", "--lengths", "e1=1,e2"],
        &["surface", "--example", "dumbbell", "--free", "e1=1"],
        &["surface", "--example", "dumbbell", "--free", "e1=1,e2=1", "--dep", "e7"],
        &["tensor", "--example", "dumbbell", "--free", "e1=1,e2=1", "--metric", "Q"],
        &["curvature", "--example", "figure8", "--metric", "P", "--free", "e1=1"],
        &["curvature", "--example", "rose", "--metric", "P", "--grid", "0:1"],
        &["probe", "--example", "figure8", "--metric", "P", "--from", "1", "--to", "2"],
        &["verify", "--example", "rose", "--tol", "speed=x"],
    ] {
        let o = run(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
        assert!(!o.stderr.is_empty());
    }
}

#[test]
fn usage_errors_name_the_flag() {
    let o = run(&["surface", "--example", "dumbbell", "--free", "e1=1"]);
    assert!(String::from_utf8_lossy(&o.stderr).contains("--free"));
}

#[test]
fn computational_errors_exit_1() {
    let o = run(&["surface", "--example", "rose", "--free", "e1=0.1,e2=0.1"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("infeasible"));
}
