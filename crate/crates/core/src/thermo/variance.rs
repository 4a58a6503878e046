//! Asymptotic variance of first-coordinate observables.
//!
//! Four independent routes: the second derivative of pressure along a
//! linear path, the surface route `sum l'' p`, the normalized cocycle
//! route `sum (g')^2 P p`, and a brute-force sum over cylinders. The
//! closed form through the fundamental matrix of the chain is used by the
//! moduli layer for exact chart derivatives.

use nalgebra::{DMatrix, DVector};

use super::{perron_data, EdgeWeighting, PerronData, Potential};
use crate::error::{Error, Result};
use crate::graph::DirectedEdgeSystem;
use crate::numeric::diff::richardson_second;
use crate::numeric::fit::fit_line;

const TANGENT_TOL: f64 = 1e-8;
const DRIFT_TOL: f64 = 1e-9;

/// Matrix `C` with `Var(phi) = phi^T C phi` for the equilibrium state `pd`.
///
/// With `T = P^T` (row stochastic, stationary row vector `p`), the
/// fundamental matrix `Z = (I - T + 1 p^T)^{-1}` and `D = diag(p)`,
/// the autocovariance series sums to `D Z + Z^T D - D` on centred
/// observables.
pub fn covariance_matrix(pd: &PerronData) -> Result<DMatrix<f64>> {
    let n = pd.dim();
    let p = pd.stationary();
    let ones = DVector::from_element(n, 1.0);
    let centre = DMatrix::identity(n, n) - &ones * p.transpose();
    let fundamental = (DMatrix::identity(n, n) - pd.stochastic().transpose() + &ones * p.transpose())
        .try_inverse()
        .ok_or(Error::InvalidMatrix)?;
    let d = DMatrix::from_diagonal(p);
    let core = &d * &fundamental + fundamental.transpose() * &d - &d;
    let c = centre.transpose() * core * &centre;
    Ok((&c + c.transpose()) * 0.5)
}

/// `Cov(phi, psi)` under the equilibrium state.
pub fn asymptotic_covariance(pd: &PerronData, phi: &[f64], psi: &[f64]) -> Result<f64> {
    let n = pd.dim();
    for v in [phi, psi] {
        if v.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: v.len() });
        }
    }
    let c = covariance_matrix(pd)?;
    let a = DVector::from_column_slice(phi);
    let b = DVector::from_column_slice(psi);
    Ok(a.dot(&(c * b)))
}

/// Hessian of `l -> P(-l)` in the undirected edge lengths, each length
/// acting on both orientations.
pub fn edge_pressure_hessian(sys: &DirectedEdgeSystem, pd: &PerronData) -> Result<DMatrix<f64>> {
    let k = sys.num_edges();
    if pd.dim() != 2 * k {
        return Err(Error::DimensionMismatch { expected: 2 * k, got: pd.dim() });
    }
    let c = covariance_matrix(pd)?;
    Ok(DMatrix::from_fn(k, k, |a, b| c[(a, b)] + c[(a + k, b)] + c[(a, b + k)] + c[(a + k, b + k)]))
}

fn check_tangent(pd: &PerronData, phi: &Potential) -> Result<()> {
    let mean = pd.mean(phi.values())?;
    let tolerance = TANGENT_TOL * phi.max_abs().max(1.0);
    if mean.abs() > tolerance {
        return Err(Error::NotTangent { mean, tolerance });
    }
    Ok(())
}

/// `d^2/dt^2 P(-l + t phi)` at `t = 0`, by a central second difference
/// with one Richardson level. Requires `sum phi p = 0`.
pub fn variance_hessian(sys: &DirectedEdgeSystem, l: &EdgeWeighting, phi: &Potential) -> Result<f64> {
    let base = Potential::from_lengths(sys, l, 1.0)?;
    let pd = perron_data(sys, &base)?;
    check_tangent(&pd, phi)?;
    if phi.max_abs() == 0.0 {
        return Ok(0.0);
    }
    // round-off in the pressure grows like eps / h^2 and truncation like
    // h^4 in units of 1 / |phi|; this step balances them for small variances
    let h = 1e-2 / phi.max_abs().max(1.0);
    let along = |t: f64| -> Result<f64> { Ok(perron_data(sys, &base.add_scaled(phi, t)?)?.pressure()) };
    richardson_second(along, 0.0, h)
}

/// `sum_i l''(i) p(i)` for the second derivative of a path on the
/// entropy-one surface.
pub fn variance_surface_route(pd: &PerronData, lddot: &[f64]) -> Result<f64> {
    pd.mean(lddot)
}

/// The normalized-cocycle route along a path `t -> l_t` on the
/// entropy-one surface, evaluated at `t = 0`.
///
/// `g_t(i, j) = log v_t(i) - log v_t(j) - l_t(i) - log beta_t` is the
/// normalized potential; its `t`-derivative is taken by central
/// differences and the result is `sum (g'(i, j))^2 P(i, j) p(j)` over
/// admissible pairs. The pressure at every sampled `t` must vanish.
pub fn variance_cocycle_route<F>(sys: &DirectedEdgeSystem, mut path: F) -> Result<f64>
where
    F: FnMut(f64) -> Result<EdgeWeighting>,
{
    let l0 = path(0.0)?;
    let pd = perron_data(sys, &Potential::from_lengths(sys, &l0, 1.0)?)?;
    let h = 1e-5 * l0.max().max(1.0);
    let n = sys.num_states();

    let mut cocycle = |t: f64| -> Result<DMatrix<f64>> {
        let lt = path(t)?;
        let f = Potential::from_lengths(sys, &lt, 1.0)?;
        let pdt = perron_data(sys, &f)?;
        let drift = pdt.pressure();
        if drift.abs() > DRIFT_TOL {
            return Err(Error::PressureDrift { drift, tolerance: DRIFT_TOL });
        }
        let v = pdt.left();
        Ok(DMatrix::from_fn(n, n, |i, j| v[i].ln() - v[j].ln() + f.values()[i] - drift))
    };

    let coarse = (cocycle(h)? - cocycle(-h)?) / (2.0 * h);
    let fine = (cocycle(h / 2.0)? - cocycle(-h / 2.0)?) / h;
    let gdot = (fine * 4.0 - coarse) / 3.0;

    let p = pd.stochastic();
    let stat = pd.stationary();
    let mut total = 0.0;
    for i in 0..n {
        for j in 0..n {
            if sys.allows(i, j) {
                total += gdot[(i, j)].powi(2) * p[(i, j)] * stat[j];
            }
        }
    }
    Ok(total)
}

/// Raw cylinder sums and their extrapolated limit.
#[derive(Clone, Debug, PartialEq)]
pub struct WordSum {
    /// `(n, a_n)` with `a_n = (1/n) sum_w (phi^n(w))^2 m[w]`.
    pub samples: Vec<(usize, f64)>,
    /// Limit of `a_n`.
    pub extrapolated: f64,
}

/// Number of admissible words of length `n`.
pub fn admissible_words(sys: &DirectedEdgeSystem, n: usize) -> u128 {
    let k = sys.num_states();
    if n == 0 {
        return 1;
    }
    let mut counts = vec![1u128; k];
    for _ in 1..n {
        let mut next = vec![0u128; k];
        for (i, c) in counts.iter().enumerate() {
            for j in sys.successors(i) {
                next[j] = next[j].saturating_add(*c);
            }
        }
        counts = next;
    }
    counts.iter().fold(0u128, |a, b| a.saturating_add(*b))
}

fn word_sum(sys: &DirectedEdgeSystem, pd: &PerronData, phi: &[f64], n: usize) -> f64 {
    fn walk(
        sys: &DirectedEdgeSystem,
        pd: &PerronData,
        phi: &[f64],
        remaining: usize,
        last: usize,
        sum: f64,
        mass: f64,
    ) -> f64 {
        if remaining == 0 {
            return sum * sum * mass * pd.stationary()[last];
        }
        sys.successors(last)
            .map(|j| walk(sys, pd, phi, remaining - 1, j, sum + phi[j], mass * pd.stochastic()[(last, j)]))
            .sum()
    }
    let total: f64 = (0..sys.num_states()).map(|i| walk(sys, pd, phi, n - 1, i, phi[i], 1.0)).sum();
    total / n as f64
}

/// Brute-force variance: `(1/n) sum_w (phi^n(w))^2 m[w]` over all
/// admissible words of lengths `n`, `n + 2`, `n + 4`.
///
/// For a mean-zero observable `a_n = sigma^2 - c/n` up to exponentially
/// small terms, so `n a_n` is affine in `n` and its slope is the limit.
pub fn variance_word_oracle(
    sys: &DirectedEdgeSystem,
    l: &EdgeWeighting,
    phi: &Potential,
    n: usize,
    budget: u128,
) -> Result<WordSum> {
    if n == 0 {
        return Err(Error::InvalidArgument("word length n must be at least 1".into()));
    }
    let pd = perron_data(sys, &Potential::from_lengths(sys, l, 1.0)?)?;
    check_tangent(&pd, phi)?;
    let lengths = [n, n + 2, n + 4];
    let needed: u128 = lengths.iter().map(|&m| admissible_words(sys, m)).sum();
    if needed > budget {
        return Err(Error::BudgetExceeded { needed, budget });
    }
    let samples: Vec<(usize, f64)> = lengths.iter().map(|&m| (m, word_sum(sys, &pd, phi.values(), m))).collect();
    let xs: Vec<f64> = samples.iter().map(|s| s.0 as f64).collect();
    let ys: Vec<f64> = samples.iter().map(|s| s.0 as f64 * s.1).collect();
    let extrapolated = fit_line(&xs, &ys).map(|f| f.slope).unwrap_or(samples[2].1);
    Ok(WordSum { samples, extrapolated })
}
