//! Thermodynamic formalism for first-coordinate potentials on the
//! directed-edge shift.
//!
//! A potential `f` depending only on the current directed edge reduces the
//! transfer operator to the matrix `A_f(i, j) = A(i, j) e^{f(i)}`, so the
//! pressure is `log` of its spectral radius and the equilibrium state is a
//! Markov measure built from the Perron data.

mod counting;
mod perron;
mod variance;

pub use counting::{entropy_counting_oracle, CountingOracle};
pub use perron::{perron, spectral_radius, PerronData};
pub use variance::{
    admissible_words, asymptotic_covariance, covariance_matrix, edge_pressure_hessian, variance_cocycle_route, variance_hessian,
    variance_surface_route, variance_word_oracle, WordSum,
};

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::graph::{DirectedEdgeSystem, UndirectedGraph};
use crate::numeric::root::{newton_bisect, RootOptions};

/// Strictly positive lengths, one per undirected edge in file order.
#[derive(Clone, Debug, PartialEq)]
pub struct EdgeWeighting {
    lengths: Vec<f64>,
}

impl EdgeWeighting {
    pub fn new(lengths: Vec<f64>) -> Result<Self> {
        if lengths.is_empty() {
            return Err(Error::InvalidWeighting("no lengths given".into()));
        }
        if let Some(bad) = lengths.iter().find(|l| !(l.is_finite() && **l > 0.0)) {
            return Err(Error::InvalidWeighting(format!("length {bad} is not strictly positive")));
        }
        Ok(EdgeWeighting { lengths })
    }

    /// Builds a weighting from `(edge id, length)` pairs covering every edge.
    pub fn from_assignments(graph: &UndirectedGraph, pairs: &[(String, f64)]) -> Result<Self> {
        let mut lengths = vec![f64::NAN; graph.num_edges()];
        for (id, value) in pairs {
            let i = graph.edge_index(id).ok_or_else(|| Error::UnknownEdge(id.clone()))?;
            lengths[i] = *value;
        }
        if let Some(i) = lengths.iter().position(|l| l.is_nan()) {
            return Err(Error::InvalidWeighting(format!("no length for edge `{}`", graph.edges()[i].id)));
        }
        Self::new(lengths)
    }

    pub fn lengths(&self) -> &[f64] {
        &self.lengths
    }

    pub fn len(&self) -> usize {
        self.lengths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lengths.is_empty()
    }

    pub fn scaled(&self, c: f64) -> Result<Self> {
        Self::new(self.lengths.iter().map(|l| l * c).collect())
    }

    pub fn max(&self) -> f64 {
        self.lengths.iter().copied().fold(f64::MIN, f64::max)
    }

    pub fn min(&self) -> f64 {
        self.lengths.iter().copied().fold(f64::MAX, f64::min)
    }

    fn check(&self, sys: &DirectedEdgeSystem) -> Result<()> {
        if self.len() != sys.num_edges() {
            return Err(Error::DimensionMismatch { expected: sys.num_edges(), got: self.len() });
        }
        Ok(())
    }
}

/// A potential depending on the first coordinate only: one finite value per
/// directed edge.
#[derive(Clone, Debug, PartialEq)]
pub struct Potential {
    values: Vec<f64>,
}

impl Potential {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument("potential values must be finite".into()));
        }
        Ok(Potential { values })
    }

    pub fn zero(states: usize) -> Self {
        Potential { values: vec![0.0; states] }
    }

    pub fn constant(states: usize, c: f64) -> Self {
        Potential { values: vec![c; states] }
    }

    /// `-s * l`, lifted to directed edges.
    pub fn from_lengths(sys: &DirectedEdgeSystem, l: &EdgeWeighting, s: f64) -> Result<Self> {
        l.check(sys)?;
        Self::new(sys.lift(l.lengths())?.into_iter().map(|x| -s * x).collect())
    }

    /// Per-undirected-edge values, lifted symmetrically.
    pub fn from_edge_values(sys: &DirectedEdgeSystem, per_edge: &[f64]) -> Result<Self> {
        Self::new(sys.lift(per_edge)?)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `self + t * other`.
    pub fn add_scaled(&self, other: &Potential, t: f64) -> Result<Self> {
        if other.len() != self.len() {
            return Err(Error::DimensionMismatch { expected: self.len(), got: other.len() });
        }
        Self::new(self.values.iter().zip(&other.values).map(|(a, b)| a + t * b).collect())
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

/// `A_f(i, j) = A(i, j) e^{f(i)}`.
pub fn weighted_matrix(sys: &DirectedEdgeSystem, f: &Potential) -> Result<DMatrix<f64>> {
    let n = sys.num_states();
    if f.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: f.len() });
    }
    let a = sys.adjacency();
    Ok(DMatrix::from_fn(n, n, |i, j| a[(i, j)] * f.values[i].exp()))
}

pub fn perron_data(sys: &DirectedEdgeSystem, f: &Potential) -> Result<PerronData> {
    perron(&weighted_matrix(sys, f)?)
}

/// Equilibrium data of `-l`.
pub fn perron_of_lengths(sys: &DirectedEdgeSystem, l: &EdgeWeighting) -> Result<PerronData> {
    perron_data(sys, &Potential::from_lengths(sys, l, 1.0)?)
}

/// `P(f) = log` of the spectral radius of `A_f`.
pub fn pressure(sys: &DirectedEdgeSystem, f: &Potential) -> Result<f64> {
    Ok(perron_data(sys, f)?.pressure())
}

/// `(1/n) log trace(A_f^n)`: the periodic-point characterization of pressure,
/// exact at each `n` for first-coordinate potentials. Powers are rescaled at
/// every step so large `n` cannot overflow. Returns `-inf` when the trace
/// vanishes (e.g. odd `n` on a bipartite system).
pub fn pressure_trace_oracle(sys: &DirectedEdgeSystem, f: &Potential, n: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidArgument("word length n must be at least 1".into()));
    }
    let m = weighted_matrix(sys, f)?;
    let mut power = m.clone();
    let mut log_scale = 0.0;
    for _ in 1..n {
        power = &power * &m;
        let s = power.amax();
        if s > 0.0 {
            power /= s;
            log_scale += s.ln();
        }
    }
    let trace = power.trace();
    if trace <= 0.0 {
        return Ok(f64::NEG_INFINITY);
    }
    Ok((trace.ln() + log_scale) / n as f64)
}

/// The entropy `h(l)`: the unique `s > 0` with `P(-s l) = 0`.
///
/// `P(-s l)` is convex and strictly decreasing in `s` with derivative
/// `-sum_i l(i) p(i)`, so Newton from the left of the root converges
/// monotonically; bisection guards it. The bracket is found by doubling
/// from `1 / max l` rather than taken as `[eps, log(2k) / min l]`: with
/// widely spread lengths the far end of that interval underflows `e^(-s l)`.
pub fn entropy(sys: &DirectedEdgeSystem, l: &EdgeWeighting) -> Result<f64> {
    l.check(sys)?;
    let lifted = sys.lift(l.lengths())?;
    let eval = |s: f64| -> Result<(f64, f64)> {
        let pd = perron_data(sys, &Potential::from_lengths(sys, l, s)?)?;
        Ok((pd.pressure(), -pd.mean(&lifted)?))
    };
    let cap = (sys.num_states() as f64).ln() / l.min();
    let mut lo = 1e-12 / l.max();
    let mut hi = (1.0 / l.max()).min(cap);
    while hi < cap && eval(hi)?.0 > 0.0 {
        lo = hi;
        hi = (2.0 * hi).min(cap);
    }
    let opts = RootOptions { residual_tol: 1e-15, x_tol: 1e-16, max_iter: 200 };
    newton_bisect(eval, lo, hi, lo, opts)
}

/// Equilibrium mass of the cylinder `[i0, ..., in]`. Inadmissible words
/// have mass zero.
pub fn cylinder_measure(pd: &PerronData, word: &[usize]) -> Result<f64> {
    let n = pd.dim();
    let (&last, _) = word
        .split_last()
        .ok_or_else(|| Error::InvalidArgument("cylinder word must be nonempty".into()))?;
    if let Some(&bad) = word.iter().find(|&&i| i >= n) {
        return Err(Error::IndexOutOfRange { index: bad, len: n });
    }
    let p = pd.stochastic();
    let chain: f64 = word.windows(2).map(|w| p[(w[0], w[1])]).product();
    Ok(chain * pd.stationary()[last])
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::LN_2;

    fn system(text: &str) -> DirectedEdgeSystem {
        DirectedEdgeSystem::new(text.parse().unwrap()).unwrap()
    }

    fn figure8() -> DirectedEdgeSystem {
        system("edge e1 a a\nedge e2 a a")
    }

    fn ln3() -> f64 {
        3f64.ln()
    }

    #[test]
    fn zero_potential_gives_adjacency() {
        let sys = figure8();
        let m = weighted_matrix(&sys, &Potential::zero(4)).unwrap();
        assert_eq!(&m, sys.adjacency());
    }

    #[test]
    fn figure8_weighted_rows() {
        let sys = figure8();
        let (x, y) = (0.4, 1.7);
        let l = EdgeWeighting::new(vec![x, y]).unwrap();
        let m = weighted_matrix(&sys, &Potential::from_lengths(&sys, &l, 1.0).unwrap()).unwrap();
        let rows = [(-x).exp(), (-y).exp(), (-x).exp(), (-y).exp()];
        for i in 0..4 {
            for j in 0..4 {
                assert_eq!(m[(i, j)], sys.adjacency()[(i, j)] * rows[i]);
            }
        }
    }

    #[test]
    fn dimension_mismatch() {
        let sys = figure8();
        assert!(matches!(weighted_matrix(&sys, &Potential::zero(3)), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn pressure_values() {
        let sys = figure8();
        assert!((pressure(&sys, &Potential::zero(4)).unwrap() - ln3()).abs() < 1e-14);
        let s = 0.8;
        assert!((pressure(&sys, &Potential::constant(4, -s)).unwrap() - (ln3() - s)).abs() < 1e-14);
        let l = EdgeWeighting::new(vec![ln3(), ln3()]).unwrap();
        assert!(pressure(&sys, &Potential::from_lengths(&sys, &l, 1.0).unwrap()).unwrap().abs() < 1e-10);
    }

    #[test]
    fn trace_oracle() {
        let sys = figure8();
        let f = Potential::zero(4);
        assert!((pressure_trace_oracle(&sys, &f, 1).unwrap() - 4f64.ln()).abs() < 1e-15);
        // spectrum {3, 1, 1, -1}: trace(A^n) = 3^n + 2 + (-1)^n
        for n in 1..12u32 {
            let exact = (3f64.powi(n as i32) + 2.0 + (-1f64).powi(n as i32)).ln() / n as f64;
            assert!((pressure_trace_oracle(&sys, &f, n as usize).unwrap() - exact).abs() < 1e-14);
        }
        let g10 = (pressure_trace_oracle(&sys, &f, 10).unwrap() - ln3()).abs();
        let g20 = (pressure_trace_oracle(&sys, &f, 20).unwrap() - ln3()).abs();
        let g40 = (pressure_trace_oracle(&sys, &f, 40).unwrap() - ln3()).abs();
        assert!(g20 < g10 && g40 <= g20);
        // large n does not overflow
        let big = pressure_trace_oracle(&sys, &f, 2000).unwrap();
        assert!((big - ln3()).abs() < 1e-3);
        assert!(pressure_trace_oracle(&sys, &f, 0).is_err());
    }

    #[test]
    fn trace_oracle_vanishes_on_odd_bipartite_words() {
        let sys = system("edge e1 a b\nedge e2 a b\nedge e3 a b");
        assert_eq!(pressure_trace_oracle(&sys, &Potential::zero(6), 3).unwrap(), f64::NEG_INFINITY);
    }

    #[test]
    fn entropy_with_widely_spread_lengths() {
        let sys = system("edge e1 a a\nedge e2 a a\nedge e3 a a");
        let l = EdgeWeighting::new(vec![9.0, 11.0, 1e-7]).unwrap();
        let h = entropy(&sys, &l).unwrap();
        assert!(pressure(&sys, &Potential::from_lengths(&sys, &l, h).unwrap()).unwrap().abs() < 1e-12);
    }

    #[test]
    fn entropy_values() {
        let sys = figure8();
        let l = EdgeWeighting::new(vec![1.0, 1.0]).unwrap();
        assert!((entropy(&sys, &l).unwrap() - ln3()).abs() < 1e-12);
        let l = EdgeWeighting::new(vec![ln3(), ln3()]).unwrap();
        assert!((entropy(&sys, &l).unwrap() - 1.0).abs() < 1e-10);
        let l = EdgeWeighting::new(vec![0.3, 2.2]).unwrap();
        let h = entropy(&sys, &l).unwrap();
        for c in [0.5, 2.0, 7.0] {
            let hc = entropy(&sys, &l.scaled(c).unwrap()).unwrap();
            assert!((hc * c - h).abs() < 1e-10);
        }
        let p = pressure(&sys, &Potential::from_lengths(&sys, &l, h).unwrap()).unwrap();
        assert!(p.abs() <= 1e-12);
    }

    #[test]
    fn weighting_validation() {
        assert!(EdgeWeighting::new(vec![1.0, 0.0]).is_err());
        assert!(EdgeWeighting::new(vec![1.0, f64::NAN]).is_err());
        let g: UndirectedGraph = "edge e1 a a\nedge e2 a a".parse().unwrap();
        let l = EdgeWeighting::from_assignments(&g, &[("e2".into(), 2.0), ("e1".into(), LN_2)]).unwrap();
        assert_eq!(l.lengths(), &[LN_2, 2.0]);
        assert!(matches!(
            EdgeWeighting::from_assignments(&g, &[("e1".into(), 1.0)]),
            Err(Error::InvalidWeighting(_))
        ));
        assert!(matches!(EdgeWeighting::from_assignments(&g, &[("e9".into(), 1.0)]), Err(Error::UnknownEdge(_))));
    }

    #[test]
    fn cylinder_basics() {
        let sys = figure8();
        let l = EdgeWeighting::new(vec![0.5, 1.5]).unwrap();
        let pd = perron_of_lengths(&sys, &l).unwrap();
        for i in 0..4 {
            assert_eq!(cylinder_measure(&pd, &[i]).unwrap(), pd.stationary()[i]);
        }
        assert_eq!(cylinder_measure(&pd, &[0, 1, 3, 1]).unwrap(), 0.0);
        assert!(cylinder_measure(&pd, &[]).is_err());
        assert!(matches!(cylinder_measure(&pd, &[0, 4]), Err(Error::IndexOutOfRange { index: 4, len: 4 })));
    }
}
