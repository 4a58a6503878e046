//! Command-line front end for graph-pressure.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use graph_pressure::catalog::{verify, ExampleId, Tolerances};
use graph_pressure::geometry::{
    brioschi_curvature, path_length, Axis, ChartField, CurvatureGrid, PathLength, ProbeOptions, Toward,
};
use graph_pressure::moduli::{metric_tensor, normalize_entropy, EntropyChart, MetricKind};
use graph_pressure::numeric::format::fmt_sig15;
use graph_pressure::{thermo, DirectedEdgeSystem, EdgeWeighting, Error, UndirectedGraph};

#[derive(Parser)]
#[command(name = "graph-pressure", version, about = "Entropy, pressure metrics and curvature on metric graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Topological entropy of a length assignment.
    Entropy {
        #[command(flatten)]
        source: Source,
        /// Edge lengths as `id=value,...`.
        #[arg(long)]
        lengths: String,
    },
    /// Rescales a length assignment to entropy one.
    Normalize {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        lengths: String,
    },
    /// Solves the entropy-one surface for the dependent length.
    Surface {
        #[command(flatten)]
        chart: ChartArgs,
        /// Free lengths as `id=value,...`.
        #[arg(long)]
        free: String,
    },
    /// Metric tensor at a chart point.
    Tensor {
        #[command(flatten)]
        chart: ChartArgs,
        #[arg(long)]
        free: String,
        /// P or WP.
        #[arg(long)]
        metric: String,
    },
    /// Gaussian curvature at a point or on a grid.
    Curvature {
        #[command(flatten)]
        chart: ChartArgs,
        #[arg(long)]
        metric: String,
        /// Free lengths as `id=value,...` for a single point.
        #[arg(long, conflicts_with = "grid", required_unless_present = "grid")]
        free: Option<String>,
        /// Grid axes as `min:max:count,min:max:count`.
        #[arg(long)]
        grid: Option<String>,
        /// CSV output path for a grid (stdout otherwise).
        #[arg(long, requires = "grid")]
        out: Option<PathBuf>,
    },
    /// Length of the chart line `origin + t dir` from `t = from` toward `t = to`.
    Probe {
        #[command(flatten)]
        chart: ChartArgs,
        #[arg(long)]
        metric: String,
        /// Regular end of the path.
        #[arg(long)]
        from: f64,
        /// Singular end: a number below `from`, or `inf`.
        #[arg(long)]
        to: String,
        /// Line origin in chart coordinates (zero by default).
        #[arg(long)]
        origin: Option<String>,
        /// Line direction in chart coordinates (all ones by default).
        #[arg(long)]
        dir: Option<String>,
    },
    /// Checks a catalog example against its closed forms.
    Verify {
        #[arg(long)]
        example: ExampleId,
        /// Tolerance overrides as `name=value,...` (surface, stationary,
        /// tensor, curvature, speed, diagonal, path_length, zero, points).
        #[arg(long)]
        tol: Option<String>,
        /// Skip the curvature grids.
        #[arg(long)]
        quick: bool,
        /// CSV copy of the report.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct Source {
    /// Built-in example: figure8, belt-buckle, dumbbell or rose.
    #[arg(long)]
    example: Option<ExampleId>,
    /// Graph file.
    #[arg(long)]
    graph: Option<PathBuf>,
}

#[derive(Args)]
struct ChartArgs {
    #[command(flatten)]
    source: Source,
    /// Dependent edge (the example's own choice, or the last edge of a file).
    #[arg(long)]
    dep: Option<String>,
}

enum Failure {
    Usage(String),
    Compute(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Compute(e)
    }
}

type Outcome = Result<ExitCode, Failure>;

fn usage(flag: &str, message: impl std::fmt::Display) -> Failure {
    Failure::Usage(format!("--{flag}: {message}"))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Compute(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn run(command: Command) -> Outcome {
    match command {
        Command::Entropy { source, lengths } => {
            let sys = system(&source)?;
            let l = weighting(sys.graph(), &lengths)?;
            println!("{}", fmt_sig15(thermo::entropy(&sys, &l)?));
        }
        Command::Normalize { source, lengths } => {
            let sys = system(&source)?;
            let l = weighting(sys.graph(), &lengths)?;
            let n = normalize_entropy(&sys, &l)?;
            for (e, v) in sys.graph().edges().iter().zip(n.lengths()) {
                println!("{}={}", e.id, fmt_sig15(*v));
            }
        }
        Command::Surface { chart, free } => {
            let chart = entropy_chart(&chart)?;
            let p = free_point(&chart, &free)?;
            println!("{}", fmt_sig15(chart.solve_dependent(&p)?));
        }
        Command::Tensor { chart, free, metric } => {
            let chart = entropy_chart(&chart)?;
            let kind = metric_kind(&metric)?;
            let p = free_point(&chart, &free)?;
            let m = metric_tensor(&chart, &p, kind)?;
            for i in 0..m.gram.nrows() {
                let row: Vec<String> = m.gram.row(i).iter().map(|v| fmt_sig15(*v)).collect();
                println!("{}", row.join(" "));
            }
        }
        Command::Curvature { chart, metric, free, grid, out } => {
            let chart = entropy_chart(&chart)?;
            let kind = metric_kind(&metric)?;
            if chart.dim() != 2 {
                return Err(usage("example", format!("curvature needs a two-dimensional chart, got {}", chart.dim())));
            }
            let field = ChartField { chart: &chart, kind };
            match (free, grid) {
                (Some(free), _) => {
                    let p = free_point(&chart, &free)?;
                    println!("{}", fmt_sig15(brioschi_curvature(&field, p[0], p[1])?));
                }
                (None, Some(grid)) => {
                    let (x, y) = axes(&grid)?;
                    let g = CurvatureGrid::evaluate(&field, x, y);
                    match out {
                        Some(path) => g.write_csv(&path).map_err(|e| Failure::Compute(e.into()))?,
                        None => print!("{}", g.to_csv()),
                    }
                }
                (None, None) => return Err(usage("grid", "either --free or --grid is required")),
            }
        }
        Command::Probe { chart, metric, from, to, origin, dir } => {
            let chart = entropy_chart(&chart)?;
            let kind = metric_kind(&metric)?;
            let n = chart.dim();
            let origin = match origin {
                Some(s) => vector("origin", &s, n)?,
                None => vec![0.0; n],
            };
            let dir = match dir {
                Some(s) => vector("dir", &s, n)?,
                None => vec![1.0; n],
            };
            let toward = if to == "inf" {
                Toward::Infinity
            } else {
                let a: f64 = to.parse().map_err(|_| usage("to", format!("`{to}` is not a number or `inf`")))?;
                if !(a < from) {
                    return Err(usage("to", format!("endpoint {a} must lie below --from {from}")));
                }
                Toward::Lower(a)
            };
            let speed = |t: f64| {
                let p: Vec<f64> = origin.iter().zip(&dir).map(|(o, d)| o + t * d).collect();
                metric_tensor(&chart, &p, kind).map(|m| m.norm_sq(&dir).sqrt())
            };
            match path_length(speed, from, toward, &ProbeOptions::default())? {
                PathLength::Finite { length, exponent } => {
                    println!("finite {} exponent {}", fmt_sig15(length), fmt_sig15(exponent))
                }
                PathLength::Divergent { exponent, .. } => println!("divergent exponent {}", fmt_sig15(exponent)),
                PathLength::Indeterminate { exponent, log_exponent } => println!(
                    "indeterminate exponent {} log-exponent {}",
                    fmt_sig15(exponent),
                    fmt_sig15(log_exponent)
                ),
            }
        }
        Command::Verify { example, tol, quick, out } => {
            let mut t = Tolerances::default();
            if let Some(s) = tol {
                apply_overrides(&mut t, &s)?;
            }
            t.grids = !quick;
            let report = verify(example, &t);
            print!("{}", report.to_table());
            if let Some(path) = out {
                std::fs::write(&path, report.to_csv()).map_err(|e| Failure::Compute(e.into()))?;
            }
            return Ok(if report.all_pass() { ExitCode::SUCCESS } else { ExitCode::from(1) });
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn graph(source: &Source) -> Result<UndirectedGraph, Failure> {
    match (&source.example, &source.graph) {
        (Some(id), _) => Ok(id.graph()),
        (None, Some(path)) => {
            if !path.exists() {
                return Err(usage("graph", format!("no such file `{}`", path.display())));
            }
            UndirectedGraph::from_file(path).map_err(|e| usage("graph", e))
        }
        (None, None) => Err(usage("example", "one of --example or --graph is required")),
    }
}

fn system(source: &Source) -> Result<DirectedEdgeSystem, Failure> {
    DirectedEdgeSystem::new(graph(source)?).map_err(|e| usage("graph", e))
}

fn entropy_chart(args: &ChartArgs) -> Result<EntropyChart, Failure> {
    match (&args.dep, args.source.example) {
        (Some(dep), _) => EntropyChart::with_dependent(system(&args.source)?, dep).map_err(|e| usage("dep", e)),
        (None, Some(id)) => Ok(id.chart()),
        (None, None) => Ok(EntropyChart::new(system(&args.source)?)),
    }
}

fn metric_kind(s: &str) -> Result<MetricKind, Failure> {
    s.parse().map_err(|e| usage("metric", e))
}

/// Parses `id=value,...`.
fn assignments(flag: &str, s: &str) -> Result<Vec<(String, f64)>, Failure> {
    s.split(',')
        .map(|item| {
            let (id, v) = item.split_once('=').ok_or_else(|| usage(flag, format!("`{item}` is not id=value")))?;
            let v: f64 = v.trim().parse().map_err(|_| usage(flag, format!("`{v}` is not a number")))?;
            Ok((id.trim().to_string(), v))
        })
        .collect()
}

fn weighting(g: &UndirectedGraph, s: &str) -> Result<EdgeWeighting, Failure> {
    let pairs = assignments("lengths", s)?;
    EdgeWeighting::from_assignments(g, &pairs).map_err(|e| usage("lengths", e))
}

/// Free coordinates in chart order; every free edge must be assigned once.
fn free_point(chart: &EntropyChart, s: &str) -> Result<Vec<f64>, Failure> {
    let pairs = assignments("free", s)?;
    let ids = chart.free_ids();
    for (id, _) in &pairs {
        if !ids.contains(&id.as_str()) {
            return Err(usage("free", format!("`{id}` is not a free edge (free: {})", ids.join(", "))));
        }
    }
    ids.iter()
        .map(|id| {
            let mut hits = pairs.iter().filter(|(k, _)| k == id);
            match (hits.next(), hits.next()) {
                (Some((_, v)), None) => Ok(*v),
                (None, _) => Err(usage("free", format!("no value for `{id}`"))),
                (Some(_), Some(_)) => Err(usage("free", format!("`{id}` given twice"))),
            }
        })
        .collect()
}

fn vector(flag: &str, s: &str, n: usize) -> Result<Vec<f64>, Failure> {
    let v = s
        .split(',')
        .map(|x| x.trim().parse::<f64>().map_err(|_| usage(flag, format!("`{x}` is not a number"))))
        .collect::<Result<Vec<f64>, Failure>>()?;
    if v.len() != n {
        return Err(usage(flag, format!("expected {n} components, got {}", v.len())));
    }
    Ok(v)
}

fn axes(s: &str) -> Result<(Axis, Axis), Failure> {
    let parts: Vec<&str> = s.split(',').collect();
    let [x, y] = parts.as_slice() else {
        return Err(usage("grid", "expected two axes min:max:count,min:max:count"));
    };
    let axis = |a: &str| a.parse::<Axis>().map_err(|e| usage("grid", e));
    Ok((axis(x)?, axis(y)?))
}

fn apply_overrides(t: &mut Tolerances, s: &str) -> Result<(), Failure> {
    for (name, v) in assignments("tol", s)? {
        match name.as_str() {
            "surface" => t.surface = v,
            "stationary" => t.stationary = v,
            "tensor" => t.tensor = v,
            "curvature" => t.curvature = v,
            "speed" => t.speed = v,
            "diagonal" => t.diagonal = v,
            "path_length" => t.path_length = v,
            "zero" => t.zero = v,
            "points" if v >= 1.0 && v.fract() == 0.0 => t.points = v as usize,
            "points" => return Err(usage("tol", format!("points must be a positive integer, got {v}"))),
            other => return Err(usage("tol", format!("unknown tolerance `{other}`"))),
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_assignments() {
        let pairs = assignments("lengths", "e1=1, e2 = 2.5").ok().unwrap();
        assert_eq!(pairs, vec![("e1".to_string(), 1.0), ("e2".to_string(), 2.5)]);
        assert!(assignments("lengths", "e1").is_err());
        assert!(assignments("lengths", "e1=x").is_err());
    }

    #[test]
    fn free_point_follows_chart_order() {
        let chart = ExampleId::Dumbbell.chart();
        assert_eq!(free_point(&chart, "e2=2,e1=1").ok().unwrap(), vec![1.0, 2.0]);
        assert!(free_point(&chart, "e1=1,e1=2,e2=1").is_err());
        assert!(free_point(&chart, "e1=1,e2=1,e3=1").is_err());
    }

    #[test]
    fn parses_axes_and_overrides() {
        let (x, y) = axes("0.5:20:64,1:2:3").ok().unwrap();
        assert_eq!((x.value(63), y.value(1)), (20.0, 1.5));
        assert!(axes("0.5:20:64").is_err());
        let mut t = Tolerances::default();
        assert!(apply_overrides(&mut t, "tensor=1e-4,points=5").is_ok());
        assert_eq!((t.tensor, t.points), (1e-4, 5));
        assert!(apply_overrides(&mut t, "points=0.5").is_err());
        assert!(apply_overrides(&mut t, "bogus=1").is_err());
    }
}
