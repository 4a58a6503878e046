//! Engine-versus-closed-form checks for one example.

use std::fmt::Write as _;

use super::{closed_form_eval, Component, ExampleId, Quantity, SpotCheck, SpotSite, SpotValue};
use crate::error::Result;
use crate::geometry::{brioschi_curvature, path_length, Axis, ChartField, CurvatureGrid, ProbeOptions, Toward};
use crate::moduli::{metric_tensor, EntropyChart, MetricKind};
use crate::numeric::format::fmt_sig15;
use crate::numeric::quad::{integrate, QuadOptions};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerances {
    pub surface: f64,
    pub stationary: f64,
    pub tensor: f64,
    pub curvature: f64,
    pub speed: f64,
    pub diagonal: f64,
    pub path_length: f64,
    /// Absolute bound on `F_P` where it vanishes identically.
    pub zero: f64,
    /// Sample points per pointwise check.
    pub points: usize,
    /// Also evaluate the grid spot values (the slow part).
    pub grids: bool,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            surface: 1e-9,
            stationary: 1e-9,
            tensor: 1e-6,
            curvature: 1e-6,
            speed: 1e-6,
            diagonal: 1e-8,
            path_length: 1e-6,
            zero: 1e-10,
            points: 20,
            grids: true,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub id: String,
    pub expected: String,
    pub got: String,
    pub tolerance: String,
    /// Worst deviation seen, for comparisons.
    pub deviation: Option<f64>,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub example: ExampleId,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }

    /// Aligned plain-text table.
    pub fn to_table(&self) -> String {
        let header = ["check", "expected", "got", "tolerance", "result"];
        let rows: Vec<[String; 5]> = self
            .checks
            .iter()
            .map(|c| {
                let result = if c.pass { "PASS" } else { "FAIL" };
                [c.id.clone(), c.expected.clone(), c.got.clone(), c.tolerance.clone(), result.to_string()]
            })
            .collect();
        let mut widths = header.map(str::len);
        for row in &rows {
            for (w, cell) in widths.iter_mut().zip(row) {
                *w = (*w).max(cell.chars().count());
            }
        }
        let mut out = String::new();
        let mut line = |cells: &[&str]| {
            let padded: Vec<String> = cells.iter().zip(&widths).map(|(c, w)| format!("{c:<w$}")).collect();
            let _ = writeln!(out, "{}", padded.join("  ").trim_end());
        };
        line(&header);
        for row in &rows {
            line(&row.iter().map(String::as_str).collect::<Vec<_>>());
        }
        out
    }

    /// CSV with header `check,expected,got,tolerance,deviation,result`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("check,expected,got,tolerance,deviation,result\n");
        for c in &self.checks {
            let dev = c.deviation.map(fmt_sig15).unwrap_or_default();
            let result = if c.pass { "PASS" } else { "FAIL" };
            let _ = writeln!(
                out,
                "{},{},{},{},{},{}",
                csv_field(&c.id),
                csv_field(&c.expected),
                csv_field(&c.got),
                csv_field(&c.tolerance),
                dev,
                result
            );
        }
        out
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn failed(id: String, expected: String, tolerance: String, err: impl std::fmt::Display) -> Check {
    Check { id, expected, got: format!("error: {err}"), tolerance, deviation: None, pass: false }
}

/// Largest relative deviation of `got` from `expected` over `points`.
fn compare<F>(id: String, points: &[Vec<f64>], tol: f64, mut pair: F) -> Check
where
    F: FnMut(&[f64]) -> Result<(f64, f64)>,
{
    let tolerance = format!("rel {}", fmt_sig15(tol));
    let mut worst: Option<(f64, f64, f64)> = None;
    for p in points {
        match pair(p) {
            Ok((expected, got)) => {
                let dev = (got - expected).abs() / expected.abs();
                let dev = if dev.is_nan() { f64::INFINITY } else { dev };
                if worst.is_none_or(|w| dev > w.2) {
                    worst = Some((expected, got, dev));
                }
            }
            Err(e) => return failed(id, format!("at {p:?}"), tolerance, e),
        }
    }
    match worst {
        Some((expected, got, dev)) => Check {
            id,
            expected: fmt_sig15(expected),
            got: fmt_sig15(got),
            tolerance,
            deviation: Some(dev),
            pass: dev <= tol,
        },
        None => failed(id, String::new(), tolerance, "no sample points"),
    }
}

fn adjacency_check(id: ExampleId) -> Check {
    let sys = id.system();
    let printed = id.printed_adjacency();
    let a = sys.adjacency();
    let n = printed.len();
    let mismatches = if a.nrows() != n {
        n * n
    } else {
        (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).filter(|&(i, j)| a[(i, j)] != printed[i][j] as f64).count()
    };
    Check {
        id: format!("{id}.adjacency"),
        expected: format!("{n}x{n} as printed"),
        got: format!("{mismatches} mismatched entries"),
        tolerance: "exact".into(),
        deviation: Some(mismatches as f64),
        pass: mismatches == 0,
    }
}

fn surface_check(id: ExampleId, chart: &EntropyChart, points: &[Vec<f64>], tol: &Tolerances) -> Check {
    compare(format!("{id}.surface"), points, tol.surface, |p| {
        Ok((closed_form_eval(id, Quantity::Surface, p)?, chart.solve_dependent(p)?))
    })
}

fn stationary_checks(id: ExampleId, chart: &EntropyChart, points: &[Vec<f64>], tol: &Tolerances) -> Vec<Check> {
    let k = chart.system().num_edges();
    let solved = match points.iter().map(|p| chart.point(p)).collect::<Result<Vec<_>>>() {
        Ok(s) => s,
        Err(e) => return vec![failed(format!("{id}.stationary"), "p".into(), format!("rel {}", fmt_sig15(tol.stationary)), e)],
    };
    let mut out = Vec::new();
    for i in 0..k {
        for reversed in [false, true] {
            let state = if reversed { i + k } else { i };
            let name = if reversed { format!("{id}.p{}(reversed)", i + 1) } else { format!("{id}.p{}", i + 1) };
            let mut it = solved.iter();
            out.push(compare(name, points, tol.stationary, |p| {
                let pt = it.next().expect("one solve per point");
                Ok((closed_form_eval(id, Quantity::Stationary(i), p)?, pt.perron.stationary()[state]))
            }));
        }
    }
    out
}

fn tensor_checks(id: ExampleId, chart: &EntropyChart, points: &[Vec<f64>], tol: &Tolerances) -> Vec<Check> {
    let mut out = Vec::new();
    for kind in [MetricKind::Pressure, MetricKind::WeilPetersson] {
        let samples = match points.iter().map(|p| metric_tensor(chart, p, kind)).collect::<Result<Vec<_>>>() {
            Ok(s) => s,
            Err(e) => {
                out.push(failed(format!("{id}.tensor_{kind}"), "E, F, G".into(), format!("rel {}", fmt_sig15(tol.tensor)), e));
                continue;
            }
        };
        for comp in [Component::E, Component::F, Component::G] {
            let name = format!("{id}.{comp:?}_{kind}");
            let value = |m: &crate::moduli::MetricTensorSample| match comp {
                Component::E => m.e(),
                Component::F => m.f().unwrap_or(0.0),
                Component::G => m.g().unwrap_or(0.0),
            };
            if id == ExampleId::Dumbbell && comp == Component::F {
                // vanishes identically; compared absolutely
                let w = samples.iter().map(|m| value(m).abs()).fold(0.0, f64::max);
                out.push(Check {
                    id: name,
                    expected: "0".into(),
                    got: fmt_sig15(w),
                    tolerance: format!("abs {}", fmt_sig15(tol.zero)),
                    deviation: Some(w),
                    pass: w <= tol.zero,
                });
                continue;
            }
            let mut it = samples.iter();
            out.push(compare(name, points, tol.tensor, |p| {
                let m = it.next().expect("one sample per point");
                Ok((closed_form_eval(id, Quantity::Tensor(kind, comp), p)?, value(m)))
            }));
        }
    }
    out
}

fn curvature_check(id: ExampleId, chart: &EntropyChart, points: &[Vec<f64>], tol: f64) -> Check {
    let field = ChartField { chart, kind: MetricKind::Pressure };
    compare(format!("{id}.K_P"), points, tol, |p| {
        Ok((closed_form_eval(id, Quantity::CurvatureP, p)?, brioschi_curvature(&field, p[0], p[1])?))
    })
}

/// Engine squared speed along the diagonal `t -> (t, t)`.
pub(crate) fn diagonal_speed_sq(chart: &EntropyChart, t: f64) -> Result<f64> {
    Ok(metric_tensor(chart, &[t, t], MetricKind::Pressure)?.norm_sq(&[1.0, 1.0]))
}

fn diagonal_check(id: ExampleId, chart: &EntropyChart, tol: &Tolerances) -> Check {
    let ts: Vec<Vec<f64>> = (0..tol.points).map(|i| vec![0.05 + 1.0 * i as f64 / tol.points as f64]).collect();
    compare(format!("{id}.diagonal-speed2_P"), &ts, tol.diagonal, |t| {
        Ok((closed_form_eval(id, Quantity::DiagonalSpeedSqP, t)?, diagonal_speed_sq(chart, t[0])?))
    })
}

fn probe_check(name: String, expect_finite: bool, result: Result<crate::geometry::PathLength>) -> Check {
    let expected = if expect_finite { "finite" } else { "divergent" };
    match result {
        Ok(r) => {
            let got = match r {
                crate::geometry::PathLength::Finite { length, exponent } => {
                    format!("finite ({}, exponent {})", fmt_sig15(length), fmt_sig15(exponent))
                }
                crate::geometry::PathLength::Divergent { exponent, .. } => {
                    format!("divergent (exponent {})", fmt_sig15(exponent))
                }
                crate::geometry::PathLength::Indeterminate { exponent, .. } => {
                    format!("indeterminate (exponent {})", fmt_sig15(exponent))
                }
            };
            let pass = if expect_finite { r.is_finite() } else { r.is_divergent() };
            Check { id: name, expected: expected.into(), got, tolerance: "classification".into(), deviation: None, pass }
        }
        Err(e) => failed(name, expected.into(), "classification".into(), e),
    }
}

fn figure8_checks(chart: &EntropyChart, tol: &Tolerances) -> Vec<Check> {
    let id = ExampleId::Figure8;
    let mut out = Vec::new();
    let xs: Vec<Vec<f64>> = (0..=60).map(|i| vec![0.05 + (6.0 - 0.05) * i as f64 / 60.0]).collect();
    for kind in [MetricKind::Pressure, MetricKind::WeilPetersson] {
        out.push(compare(format!("{id}.speed2_{kind}"), &xs, tol.speed, |x| {
            Ok((closed_form_eval(id, Quantity::SpeedSq(kind), x)?, metric_tensor(chart, x, kind)?.e()))
        }));
    }
    let x = 1e-4;
    match metric_tensor(chart, &[x], MetricKind::Pressure) {
        Ok(m) => {
            let s = m.e();
            let lead = x * s;
            let next = s - 1.0 / x;
            out.push(Check {
                id: format!("{id}.expansion.x*speed2_P"),
                expected: "1".into(),
                got: fmt_sig15(lead),
                tolerance: "rel 0.01".into(),
                deviation: Some((lead - 1.0).abs()),
                pass: (lead - 1.0).abs() <= 0.01,
            });
            out.push(Check {
                id: format!("{id}.expansion.speed2_P-1/x"),
                expected: "-1.25".into(),
                got: fmt_sig15(next),
                tolerance: "rel 0.01".into(),
                deviation: Some((next + 1.25).abs() / 1.25),
                pass: (next + 1.25).abs() <= 0.0125,
            });
        }
        Err(e) => out.push(failed(format!("{id}.expansion"), "1/x - 5/4".into(), "rel 0.01".into(), e)),
    }
    let opts = ProbeOptions::default();
    let speed = |kind: MetricKind| move |x: f64| metric_tensor(chart, &[x], kind).map(|m| m.e().sqrt());
    out.push(probe_check(
        format!("{id}.length_P(x->0)"),
        true,
        path_length(speed(MetricKind::Pressure), 1.0, Toward::Lower(0.0), &opts),
    ));
    out.push(probe_check(
        format!("{id}.length_WP(x->0)"),
        false,
        path_length(speed(MetricKind::WeilPetersson), 1.0, Toward::Lower(0.0), &opts),
    ));
    out.push(probe_check(
        format!("{id}.length_WP(x->inf)"),
        false,
        path_length(speed(MetricKind::WeilPetersson), 1.0, Toward::Infinity, &opts),
    ));
    out
}

fn dumbbell_extra(chart: &EntropyChart, tol: &Tolerances) -> Vec<Check> {
    let id = ExampleId::Dumbbell;
    let axis = Axis::new(0.1, 1.0, 10).expect("valid axis");
    let grid: Vec<Vec<f64>> = axis.values().flat_map(|x| axis.values().map(move |y| vec![x, y])).collect();
    let mut out = vec![curvature_check(id, chart, &grid, tol.curvature)];
    out.push(diagonal_check(id, chart, tol));

    let name = format!("{id}.diagonal-length(x->0)");
    let tolerance = format!("abs {}", fmt_sig15(tol.path_length));
    // the closed-form speed behaves like x^(-1/2); x = u^2 removes it
    let oracle = integrate(
        |u: f64| {
            let x = u * u;
            Ok(2.0 * u * closed_form_eval(id, Quantity::DiagonalSpeedSqP, &[x])?.sqrt())
        },
        0.0,
        1.0,
        QuadOptions { abs_tol: 1e-14, rel_tol: 1e-13, max_intervals: 500 },
    );
    let probe = path_length(
        |t: f64| diagonal_speed_sq(chart, t).map(f64::sqrt),
        1.0,
        Toward::Lower(0.0),
        &ProbeOptions::default(),
    );
    out.push(match (oracle, probe) {
        (Ok(q), Ok(crate::geometry::PathLength::Finite { length, .. })) => {
            let dev = (length - q.value).abs();
            Check {
                id: name,
                expected: fmt_sig15(q.value),
                got: fmt_sig15(length),
                tolerance,
                deviation: Some(dev),
                pass: dev <= tol.path_length,
            }
        }
        (Ok(q), Ok(other)) => failed(name, fmt_sig15(q.value), tolerance, format!("not finite: {other:?}")),
        (Err(e), _) | (_, Err(e)) => failed(name, "finite".into(), tolerance, e),
    });
    out
}

fn belt_extra(chart: &EntropyChart, points: &[Vec<f64>], tol: &Tolerances) -> Vec<Check> {
    let id = ExampleId::BeltBuckle;
    let mut out = vec![curvature_check(id, chart, points, tol.curvature)];
    out.push(diagonal_check(id, chart, tol));
    let dumbbell = ExampleId::Dumbbell.chart();
    let ts: Vec<Vec<f64>> = (0..tol.points).map(|i| vec![0.05 + 1.0 * i as f64 / tol.points as f64]).collect();
    out.push(compare(format!("{id}.diagonal-speed2_P=dumbbell"), &ts, tol.diagonal, |t| {
        Ok((diagonal_speed_sq(&dumbbell, t[0])?, diagonal_speed_sq(chart, t[0])?))
    }));
    if tol.grids {
        let axis = Axis::new(0.05, 3.0, 30).expect("valid axis");
        let grid = CurvatureGrid::evaluate(&ChartField { chart, kind: MetricKind::Pressure }, axis, axis);
        let min = grid.min();
        out.push(Check {
            id: format!("{id}.K_P>0(grid)"),
            expected: "> 0".into(),
            got: min.map(|m| fmt_sig15(m.2)).unwrap_or_else(|| "no feasible points".into()),
            tolerance: "sign".into(),
            deviation: None,
            pass: min.is_some_and(|m| m.2 > 0.0),
        });
    }
    out
}

fn spot_check(spot: &SpotValue, chart: &EntropyChart) -> Check {
    let field = ChartField { chart, kind: spot.metric };
    let (expected, tolerance) = match spot.check {
        SpotCheck::Near { value, tolerance } => (fmt_sig15(value), format!("abs {}", fmt_sig15(tolerance))),
        SpotCheck::Within { lo, hi } => (format!("({}, {})", fmt_sig15(lo), fmt_sig15(hi)), "bracket".into()),
        SpotCheck::Positive => ("> 0".into(), "sign".into()),
        SpotCheck::Negative => ("< 0".into(), "sign".into()),
    };
    let id = spot.id.to_string();
    let grid = |lo: f64, hi: f64, count: usize| {
        let axis = Axis::new(lo, hi, count).expect("valid axis");
        CurvatureGrid::evaluate(&field, axis, axis)
    };
    match spot.site {
        SpotSite::Point(x, y) => match brioschi_curvature(&field, x, y) {
            Ok(k) => Check { id, expected, got: fmt_sig15(k), tolerance, deviation: None, pass: spot.check.holds(k) },
            Err(e) => failed(id, expected, tolerance, e),
        },
        SpotSite::GridMin { lo, hi, count } => match grid(lo, hi, count).min() {
            Some((x, y, k)) => Check {
                id,
                expected,
                got: format!("{} at ({}, {})", fmt_sig15(k), fmt_sig15(x), fmt_sig15(y)),
                tolerance,
                deviation: None,
                pass: spot.check.holds(k),
            },
            None => failed(id, expected, tolerance, "no feasible grid points"),
        },
        SpotSite::GridAll { lo, hi, count } => {
            let g = grid(lo, hi, count);
            match (g.min(), g.max()) {
                (Some(min), Some(max)) => Check {
                    id,
                    expected,
                    got: format!(
                        "[{}, {}] over {} points",
                        fmt_sig15(min.2),
                        fmt_sig15(max.2),
                        g.feasible_count()
                    ),
                    tolerance,
                    deviation: None,
                    pass: spot.check.holds(min.2) && spot.check.holds(max.2),
                },
                _ => failed(id, expected, tolerance, "no feasible grid points"),
            }
        }
    }
}

/// Runs every check for `id`. Failures are report rows, never errors.
pub fn verify(id: ExampleId, tol: &Tolerances) -> Report {
    let chart = id.chart();
    let points = id.halton_points(tol.points);
    let mut checks = vec![adjacency_check(id), surface_check(id, &chart, &points, tol)];
    checks.extend(stationary_checks(id, &chart, &points, tol));
    match id {
        ExampleId::Figure8 => checks.extend(figure8_checks(&chart, tol)),
        _ => checks.extend(tensor_checks(id, &chart, &points, tol)),
    }
    match id {
        ExampleId::BeltBuckle => checks.extend(belt_extra(&chart, &points, tol)),
        ExampleId::Dumbbell => checks.extend(dumbbell_extra(&chart, tol)),
        _ => {}
    }
    for spot in id.spots() {
        let is_grid = !matches!(spot.site, SpotSite::Point(..));
        if is_grid && !tol.grids {
            continue;
        }
        checks.push(spot_check(spot, &chart));
    }
    Report { example: id, checks }
}
