//! The entropy-one moduli surface.
//!
//! An [`EntropyChart`] fixes one dependent edge and parametrizes the
//! surface `h(l) = 1` by the remaining free lengths. Chart derivatives come
//! from implicit differentiation of `P(-l(x, S(x))) = 0`: with
//! `q_a = p(a) + p(a')` the gradient of `l -> -P(-l)` and `H` its Hessian,
//!
//! ```text
//! dS/dx_i      = -q_i / q_d
//! d2S/dx_i dx_j = tau_i^T H tau_j / q_d,   tau_i = e_i + (dS/dx_i) e_d
//! ```
//!
//! Finite-difference versions are kept as cross-checks.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::graph::DirectedEdgeSystem;
use crate::numeric::diff::{richardson_first, richardson_second};
use crate::numeric::root::{newton_bisect, RootOptions};
use crate::thermo::{
    edge_pressure_hessian, entropy, perron_data, spectral_radius, variance_surface_route, weighted_matrix,
    EdgeWeighting, PerronData, Potential,
};

/// Pressure at zero dependent length below which a point counts as on the
/// boundary where the dependent length vanishes.
pub const BOUNDARY_TOL: f64 = 1e-9;
/// Free-edge pressure above `-FREE_EDGE_TOL` counts as on the boundary
/// where the dependent length diverges. This pressure is computed to near
/// machine precision and goes to zero only linearly in the free lengths, so
/// it gets a tighter margin.
pub const FREE_EDGE_TOL: f64 = 1e-12;
/// Dependent lengths below this are flagged as ill-conditioned.
pub const NEAR_BOUNDARY: f64 = 1e-6;
const TANGENT_TOL: f64 = 1e-8;
const MAX_DOUBLINGS: usize = 80;

/// `h(l) l`, which has entropy one.
pub fn normalize_entropy(sys: &DirectedEdgeSystem, l: &EdgeWeighting) -> Result<EdgeWeighting> {
    l.scaled(entropy(sys, l)?)
}

/// `V(l) = sum_e l(e) p(e)` over directed edges, with `pd` computed at `-l`.
pub fn volume_term(sys: &DirectedEdgeSystem, pd: &PerronData, l: &EdgeWeighting) -> Result<f64> {
    pd.mean(&sys.lift(l.lengths())?)
}

/// Why no positive dependent length exists.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Defect {
    /// Pressure with the dependent length at zero is not positive; the
    /// solution would need a nonpositive length.
    ZeroLength(f64),
    /// With the dependent edge removed the free edges alone already have
    /// nonnegative pressure; no finite dependent length reaches zero.
    FreeEdges(f64),
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Feasibility {
    pub feasible: bool,
    /// The solved dependent length when feasible.
    pub margin: Option<f64>,
    pub defect: Option<Defect>,
}

/// Chart of the entropy-one surface solving for one dependent edge.
#[derive(Clone, Debug)]
pub struct EntropyChart {
    sys: DirectedEdgeSystem,
    dependent: usize,
    free: Vec<usize>,
}

impl EntropyChart {
    /// Uses the last edge in file order as the dependent edge.
    pub fn new(sys: DirectedEdgeSystem) -> Self {
        let k = sys.num_edges();
        EntropyChart { dependent: k - 1, free: (0..k - 1).collect(), sys }
    }

    pub fn with_dependent(sys: DirectedEdgeSystem, id: &str) -> Result<Self> {
        let dependent = sys.graph().edge_index(id).ok_or_else(|| Error::UnknownEdge(id.to_string()))?;
        let free = (0..sys.num_edges()).filter(|&i| i != dependent).collect();
        Ok(EntropyChart { sys, dependent, free })
    }

    pub fn system(&self) -> &DirectedEdgeSystem {
        &self.sys
    }

    /// Index of the dependent edge.
    pub fn dependent(&self) -> usize {
        self.dependent
    }

    pub fn dependent_id(&self) -> &str {
        &self.sys.graph().edges()[self.dependent].id
    }

    /// Indices of the free edges, in chart-coordinate order.
    pub fn free(&self) -> &[usize] {
        &self.free
    }

    pub fn free_ids(&self) -> Vec<&str> {
        self.free.iter().map(|&i| self.sys.graph().edges()[i].id.as_str()).collect()
    }

    /// Chart dimension.
    pub fn dim(&self) -> usize {
        self.free.len()
    }

    fn check_free(&self, free: &[f64]) -> Result<()> {
        if free.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: free.len() });
        }
        if free.iter().any(|x| !(x.is_finite() && *x > 0.0)) {
            return Err(Error::InvalidWeighting(format!("free lengths must be strictly positive: {free:?}")));
        }
        Ok(())
    }

    fn lengths(&self, free: &[f64], dep: f64) -> Vec<f64> {
        let mut l = vec![0.0; self.sys.num_edges()];
        for (x, &i) in free.iter().zip(&self.free) {
            l[i] = *x;
        }
        l[self.dependent] = dep;
        l
    }

    /// The full weighting with the given dependent length.
    pub fn assemble(&self, free: &[f64], dep: f64) -> Result<EdgeWeighting> {
        self.check_free(free)?;
        EdgeWeighting::new(self.lengths(free, dep))
    }

    /// `P(-l)` as a function of the dependent length, with its derivative.
    fn pressure_in_dependent(&self, free: &[f64], z: f64) -> Result<(f64, f64, PerronData)> {
        let f = Potential::new(self.sys.lift(&self.lengths(free, z))?.into_iter().map(|x| -x).collect())?;
        let pd = perron_data(&self.sys, &f)?;
        let k = self.sys.num_edges();
        let q = pd.stationary()[self.dependent] + pd.stationary()[self.dependent + k];
        Ok((pd.pressure(), -q, pd))
    }

    /// Spectral radius with the dependent edge deleted (its length sent to
    /// infinity).
    fn free_edge_pressure(&self, free: &[f64]) -> Result<f64> {
        let k = self.sys.num_edges();
        let f = Potential::new(self.sys.lift(&self.lengths(free, 0.0))?.into_iter().map(|x| -x).collect())?;
        let mut m = weighted_matrix(&self.sys, &f)?;
        for row in [self.dependent, self.dependent + k] {
            m.row_mut(row).fill(0.0);
        }
        Ok(spectral_radius(&m)?.ln())
    }

    /// Whether a strictly positive dependent length exists. Points within
    /// the boundary tolerance count as infeasible.
    pub fn feasible(&self, free: &[f64]) -> Result<Feasibility> {
        self.check_free(free)?;
        let (p0, _, _) = self.pressure_in_dependent(free, 0.0)?;
        if p0 <= BOUNDARY_TOL {
            return Ok(Feasibility { feasible: false, margin: None, defect: Some(Defect::ZeroLength(p0)) });
        }
        let pinf = self.free_edge_pressure(free)?;
        if pinf >= -FREE_EDGE_TOL {
            return Ok(Feasibility { feasible: false, margin: None, defect: Some(Defect::FreeEdges(pinf)) });
        }
        let z = self.solve_inner(free)?;
        Ok(Feasibility { feasible: true, margin: Some(z), defect: None })
    }

    fn solve_inner(&self, free: &[f64]) -> Result<f64> {
        let mut hi = 1.0;
        let mut doublings = 0;
        while self.pressure_in_dependent(free, hi)?.0 > 0.0 {
            hi *= 2.0;
            doublings += 1;
            if doublings > MAX_DOUBLINGS {
                return Err(Error::Bracket(format!("no sign change for the dependent length up to {hi}")));
            }
        }
        let eval = |z: f64| -> Result<(f64, f64)> {
            let (p, dp, _) = self.pressure_in_dependent(free, z)?;
            Ok((p, dp))
        };
        let opts = RootOptions { residual_tol: 1e-15, x_tol: 1e-16, max_iter: 300 };
        newton_bisect(eval, 0.0, hi, 0.0, opts)
    }

    /// The dependent length `S(free)` with `h = 1`.
    pub fn solve_dependent(&self, free: &[f64]) -> Result<f64> {
        let feas = self.feasible(free)?;
        match feas.margin {
            Some(z) => Ok(z),
            None => {
                let reason = match feas.defect {
                    Some(Defect::ZeroLength(p)) => {
                        format!("pressure {p:e} at zero dependent length; the solved `{}` would be nonpositive", self.dependent_id())
                    }
                    Some(Defect::FreeEdges(p)) => {
                        format!("free edges alone have pressure {p:e} >= 0; `{}` would be infinite", self.dependent_id())
                    }
                    None => String::new(),
                };
                Err(Error::Infeasible { point: free.to_vec(), reason })
            }
        }
    }

    /// Solves the dependent length and collects the derivative data at a
    /// chart point.
    pub fn point(&self, free: &[f64]) -> Result<ChartPoint> {
        let z = self.solve_dependent(free)?;
        let lengths = EdgeWeighting::new(self.lengths(free, z))?;
        let (_, _, pd) = self.pressure_in_dependent(free, z)?;
        let k = self.sys.num_edges();
        let q: Vec<f64> = (0..k).map(|a| pd.stationary()[a] + pd.stationary()[a + k]).collect();
        let hessian = edge_pressure_hessian(&self.sys, &pd)?;
        let d = self.dependent;
        let qd = q[d];
        let slopes: Vec<f64> = self.free.iter().map(|&i| -q[i] / qd).collect();
        let tau: Vec<Vec<f64>> = (0..self.dim())
            .map(|i| {
                let mut t = vec![0.0; k];
                t[self.free[i]] = 1.0;
                t[d] = slopes[i];
                t
            })
            .collect();
        let quad = |a: &[f64], b: &[f64]| -> f64 {
            (0..k).flat_map(|r| (0..k).map(move |c| (r, c))).map(|(r, c)| a[r] * hessian[(r, c)] * b[c]).sum()
        };
        let curvature = DMatrix::from_fn(self.dim(), self.dim(), |i, j| quad(&tau[i], &tau[j]) / qd);
        Ok(ChartPoint {
            free: free.to_vec(),
            dependent: z,
            lengths,
            perron: pd,
            slopes,
            second: (&curvature + curvature.transpose()) * 0.5,
        })
    }

    /// `dS/dx_i` by central differences with one Richardson level.
    pub fn slopes_fd(&self, free: &[f64]) -> Result<Vec<f64>> {
        (0..self.dim())
            .map(|i| {
                let h = 1e-4 * free[i].abs().max(1.0);
                richardson_first(|t| self.solve_dependent(&shifted(free, i, t)), free[i], h)
            })
            .collect()
    }

    /// Second derivatives of `S` by central differences with step
    /// `1e-4 max(1, |x|)` and one Richardson level.
    pub fn second_fd(&self, free: &[f64]) -> Result<DMatrix<f64>> {
        let n = self.dim();
        let mut out = DMatrix::zeros(n, n);
        for i in 0..n {
            let hi = 1e-4 * free[i].abs().max(1.0);
            out[(i, i)] = richardson_second(|t| self.solve_dependent(&shifted(free, i, t)), free[i], hi)?;
            for j in 0..i {
                let hj = 1e-4 * free[j].abs().max(1.0);
                let mixed = |s: f64| -> Result<f64> {
                    let mut total = 0.0;
                    for (a, b, w) in [(1.0, 1.0, 1.0), (1.0, -1.0, -1.0), (-1.0, 1.0, -1.0), (-1.0, -1.0, 1.0)] {
                        let mut x = free.to_vec();
                        x[i] += a * s * hi;
                        x[j] += b * s * hj;
                        total += w * self.solve_dependent(&x)?;
                    }
                    Ok(total / (4.0 * s * s * hi * hj))
                };
                let value = (4.0 * mixed(0.5)? - mixed(1.0)?) / 3.0;
                out[(i, j)] = value;
                out[(j, i)] = value;
            }
        }
        Ok(out)
    }
}

fn shifted(free: &[f64], i: usize, t: f64) -> Vec<f64> {
    let mut x = free.to_vec();
    x[i] = t;
    x
}

/// Everything known at one chart point.
#[derive(Clone, Debug)]
pub struct ChartPoint {
    pub free: Vec<f64>,
    pub dependent: f64,
    pub lengths: EdgeWeighting,
    pub perron: PerronData,
    /// `dS/dx_i`.
    pub slopes: Vec<f64>,
    /// `d2S/dx_i dx_j`.
    pub second: DMatrix<f64>,
}

impl ChartPoint {
    pub fn near_boundary(&self) -> bool {
        self.dependent < NEAR_BOUNDARY
    }
}

/// A tangent vector to the surface, per undirected edge and lifted.
#[derive(Clone, Debug, PartialEq)]
pub struct TangentVector {
    pub per_edge: Vec<f64>,
    pub lifted: Vec<f64>,
}

impl TangentVector {
    pub fn potential(&self) -> Result<Potential> {
        Potential::new(self.lifted.clone())
    }
}

/// The coordinate vectors `d/dx_i = e_i + (dS/dx_i) e_d`, each checked
/// against the tangency condition `sum phi p = 0`.
pub fn coordinate_tangents(chart: &EntropyChart, free: &[f64]) -> Result<Vec<TangentVector>> {
    let pt = chart.point(free)?;
    let k = chart.system().num_edges();
    let mut out = Vec::with_capacity(chart.dim());
    for (i, &slope) in pt.slopes.iter().enumerate() {
        let mut per_edge = vec![0.0; k];
        per_edge[chart.free()[i]] = 1.0;
        per_edge[chart.dependent()] = slope;
        let lifted = chart.system().lift(&per_edge)?;
        let mean = pt.perron.mean(&lifted)?;
        let tolerance = TANGENT_TOL * slope.abs().max(1.0);
        if mean.abs() > tolerance {
            return Err(Error::NotTangent { mean, tolerance });
        }
        out.push(TangentVector { per_edge, lifted });
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MetricKind {
    Pressure,
    WeilPetersson,
}

impl std::str::FromStr for MetricKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "P" | "p" | "pressure" => Ok(MetricKind::Pressure),
            "WP" | "wp" | "weil-petersson" => Ok(MetricKind::WeilPetersson),
            other => Err(Error::InvalidArgument(format!("unknown metric `{other}` (expected P or WP)"))),
        }
    }
}

impl std::fmt::Display for MetricKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            MetricKind::Pressure => "P",
            MetricKind::WeilPetersson => "WP",
        })
    }
}

/// The first fundamental form at a chart point.
#[derive(Clone, Debug)]
pub struct MetricTensorSample {
    pub kind: MetricKind,
    pub base: Vec<f64>,
    /// Gram matrix of the coordinate vectors.
    pub gram: DMatrix<f64>,
    /// The dependent length is below [`NEAR_BOUNDARY`].
    pub near_boundary: bool,
}

impl MetricTensorSample {
    pub fn e(&self) -> f64 {
        self.gram[(0, 0)]
    }

    pub fn f(&self) -> Option<f64> {
        (self.gram.nrows() > 1).then(|| self.gram[(0, 1)])
    }

    pub fn g(&self) -> Option<f64> {
        (self.gram.nrows() > 1).then(|| self.gram[(1, 1)])
    }

    /// `|v|^2` for a vector in chart coordinates.
    pub fn norm_sq(&self, v: &[f64]) -> f64 {
        let n = self.gram.nrows();
        (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).map(|(i, j)| v[i] * self.gram[(i, j)] * v[j]).sum()
    }
}

/// `E`, `F`, `G` (or the full Gram matrix in higher dimension).
///
/// Each squared length is `sum l'' p` along the chart path in that
/// direction, whose only nonzero second derivative is on the dependent
/// edge. Off-diagonal entries follow by polarization. The Weil-Petersson
/// form divides by `V(l)`.
pub fn metric_tensor(chart: &EntropyChart, free: &[f64], kind: MetricKind) -> Result<MetricTensorSample> {
    let pt = chart.point(free)?;
    metric_tensor_at(chart, &pt, kind)
}

/// As [`metric_tensor`], reusing a solved chart point.
pub fn metric_tensor_at(chart: &EntropyChart, pt: &ChartPoint, kind: MetricKind) -> Result<MetricTensorSample> {
    let sys = chart.system();
    let k = sys.num_edges();
    let n = chart.dim();
    let along = |second: f64| -> Result<f64> {
        let mut lddot = vec![0.0; k];
        lddot[chart.dependent()] = second;
        variance_surface_route(&pt.perron, &sys.lift(&lddot)?)
    };
    let mut gram = DMatrix::zeros(n, n);
    for i in 0..n {
        gram[(i, i)] = along(pt.second[(i, i)])?;
    }
    for i in 0..n {
        for j in 0..i {
            let diagonal = along(pt.second[(i, i)] + 2.0 * pt.second[(i, j)] + pt.second[(j, j)])?;
            let value = 0.5 * (diagonal - gram[(i, i)] - gram[(j, j)]);
            gram[(i, j)] = value;
            gram[(j, i)] = value;
        }
    }
    if kind == MetricKind::WeilPetersson {
        gram /= volume_term(sys, &pt.perron, &pt.lengths)?;
    }
    Ok(MetricTensorSample { kind, base: pt.free.clone(), gram, near_boundary: pt.near_boundary() })
}
