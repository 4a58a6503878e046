//! Seeded sampling helpers shared by the acceptance checks.

use graph_pressure::catalog::ExampleId;
use graph_pressure::moduli::{EntropyChart, TangentVector};
use graph_pressure::{DirectedEdgeSystem, EdgeWeighting, Result};
use rand::rngs::ChaCha8Rng;
use rand::{RngExt, SeedableRng};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `n` uniform points of the example's sample box that satisfy its
/// closed-form feasibility inequality.
pub fn feasible_points(id: ExampleId, n: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<f64>> {
    let (lo, hi) = id.sample_box();
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let p: Vec<f64> = (0..id.dim()).map(|_| rng.random_range(lo..hi)).collect();
        if id.feasible(&p) {
            out.push(p);
        }
    }
    out
}

/// Edge lengths drawn uniformly from `[0.2, 2]`.
pub fn weighting(sys: &DirectedEdgeSystem, rng: &mut ChaCha8Rng) -> EdgeWeighting {
    EdgeWeighting::new((0..sys.num_edges()).map(|_| rng.random_range(0.2..2.0)).collect()).expect("positive lengths")
}

/// A direction in chart coordinates with entries in `[-1, 1]`, rescaled
/// to unit length.
pub fn direction(dim: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    loop {
        let u: Vec<f64> = (0..dim).map(|_| rng.random_range(-1.0..1.0)).collect();
        let norm = u.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 0.1 {
            return u.into_iter().map(|x| x / norm).collect();
        }
    }
}

/// The tangent vector `sum u_i d/dx_i` at a chart point, with the
/// matching second derivative of the straight chart line through it.
pub struct ChartLine {
    pub tangent: TangentVector,
    /// `d^2/dt^2` of the edge lengths along `t -> free + t u`.
    pub lddot: Vec<f64>,
}

pub fn chart_line(chart: &EntropyChart, free: &[f64], u: &[f64]) -> Result<ChartLine> {
    let pt = chart.point(free)?;
    let sys = chart.system();
    let k = sys.num_edges();
    let mut per_edge = vec![0.0; k];
    for (&i, &ui) in chart.free().iter().zip(u) {
        per_edge[i] = ui;
    }
    per_edge[chart.dependent()] = pt.slopes.iter().zip(u).map(|(s, ui)| s * ui).sum();
    let n = chart.dim();
    let mut lddot = vec![0.0; k];
    lddot[chart.dependent()] =
        (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).map(|(i, j)| u[i] * pt.second[(i, j)] * u[j]).sum();
    let lifted = sys.lift(&per_edge)?;
    Ok(ChartLine { tangent: TangentVector { per_edge, lifted }, lddot })
}

/// Edge lengths at `free + t u` on the entropy-one surface.
pub fn line_weighting(chart: &EntropyChart, free: &[f64], u: &[f64], t: f64) -> Result<EdgeWeighting> {
    let p: Vec<f64> = free.iter().zip(u).map(|(x, ui)| x + t * ui).collect();
    let z = chart.solve_dependent(&p)?;
    chart.assemble(&p, z)
}
