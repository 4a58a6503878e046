//! Perron-Frobenius data of a nonnegative irreducible matrix.
//!
//! For a weighted matrix `M = A_f` with Perron root `beta`, left eigenvector
//! `v` (`v^T M = beta v^T`) and right eigenvector `u`, the normalized matrix
//!
//! ```text
//! P(i, j) = M(i, j) v(i) / (beta v(j))
//! ```
//!
//! is column stochastic, and `p = v * u / <v, u>` satisfies `P p = p`. The
//! equilibrium state gives the cylinder `[i0 .. in]` mass
//! `P(i0, i1) ... P(i_{n-1}, in) p(in)`.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::graph::is_irreducible;

const MAX_ITER: usize = 200;
const GAP_TOL: f64 = 4.0 * f64::EPSILON;
const STEP_TOL: f64 = 1e-16;
const RESIDUAL_TOL: f64 = 1e-12;
/// Relative Collatz-Wielandt gap accepted once the iteration stops improving.
const STALL_GAP: f64 = 1e-10;
/// Iterations without a new smallest gap before accepting a stalled iterate.
const STALL_ITER: usize = 5;

#[derive(Clone, Debug)]
pub struct PerronData {
    beta: f64,
    left: DVector<f64>,
    right: DVector<f64>,
    stochastic: DMatrix<f64>,
    stationary: DVector<f64>,
}

impl PerronData {
    /// Spectral radius of the weighted matrix.
    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// `log beta`.
    pub fn pressure(&self) -> f64 {
        self.beta.ln()
    }

    /// Positive left eigenvector, largest component equal to one.
    pub fn left(&self) -> &DVector<f64> {
        &self.left
    }

    /// Positive right eigenvector, largest component equal to one.
    pub fn right(&self) -> &DVector<f64> {
        &self.right
    }

    /// The column-stochastic matrix `P`.
    pub fn stochastic(&self) -> &DMatrix<f64> {
        &self.stochastic
    }

    /// The stationary vector `p`: `P p = p`, entries summing to one.
    pub fn stationary(&self) -> &DVector<f64> {
        &self.stationary
    }

    pub fn dim(&self) -> usize {
        self.stationary.len()
    }

    /// `sum_i phi(i) p(i)`.
    pub fn mean(&self, phi: &[f64]) -> Result<f64> {
        if phi.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: phi.len() });
        }
        Ok(phi.iter().zip(self.stationary.iter()).map(|(a, b)| a * b).sum())
    }
}

/// Computes Perron data for a nonnegative irreducible matrix.
///
/// Both eigenvectors come from Noda iteration: inverse iteration whose
/// shift is the Collatz-Wielandt upper bound `max_i (M x)_i / x_i` of the
/// current iterate. The shift stays above the Perron root, so every iterate
/// is strictly positive, and convergence is superlinear even when the
/// subdominant eigenvalue is very close to the Perron root. The start vector
/// is all ones, so the result is deterministic.
pub fn perron(m: &DMatrix<f64>) -> Result<PerronData> {
    let n = m.nrows();
    if m.ncols() != n {
        return Err(Error::DimensionMismatch { expected: n, got: m.ncols() });
    }
    if m.iter().any(|x| !x.is_finite() || *x < 0.0) {
        return Err(Error::InvalidMatrix);
    }
    if !is_irreducible(m) {
        return Err(Error::Reducible);
    }

    let left = noda(&m.transpose())?;
    let right = noda(m)?;

    let row = left.transpose() * m;
    let beta = row.sum() / left.sum();
    // rounding in `left^T m` scales with the largest entry of `m`, which
    // can exceed `beta` by orders of magnitude when the weights are spread
    let residual = (row - left.transpose() * beta).amax();
    if !(beta > 0.0) || residual > RESIDUAL_TOL * beta.max(m.amax()) {
        return Err(Error::NonConvergence { iterations: MAX_ITER, residual });
    }

    let stochastic = DMatrix::from_fn(n, n, |i, j| m[(i, j)] * left[i] / (beta * left[j]));
    let mut stationary = left.component_mul(&right);
    stationary /= stationary.sum();

    Ok(PerronData { beta, left, right, stochastic, stationary })
}

/// Largest eigenvalue modulus of a nonnegative matrix, reducible or not:
/// the largest Perron root over its strongly connected blocks.
pub fn spectral_radius(m: &DMatrix<f64>) -> Result<f64> {
    let n = m.nrows();
    if m.ncols() != n {
        return Err(Error::DimensionMismatch { expected: n, got: m.ncols() });
    }
    if m.iter().any(|x| !x.is_finite() || *x < 0.0) {
        return Err(Error::InvalidMatrix);
    }
    let mut reach = DMatrix::from_fn(n, n, |i, j| i == j || m[(i, j)] > 0.0);
    for k in 0..n {
        for i in 0..n {
            if reach[(i, k)] {
                for j in 0..n {
                    if reach[(k, j)] {
                        reach[(i, j)] = true;
                    }
                }
            }
        }
    }
    let mut assigned = vec![false; n];
    let mut radius: f64 = 0.0;
    for i in 0..n {
        if assigned[i] {
            continue;
        }
        let block: Vec<usize> = (0..n).filter(|&j| reach[(i, j)] && reach[(j, i)]).collect();
        for &j in &block {
            assigned[j] = true;
        }
        let sub = DMatrix::from_fn(block.len(), block.len(), |a, b| m[(block[a], block[b])]);
        if sub.iter().any(|x| *x > 0.0) {
            let x = noda(&sub)?;
            radius = radius.max(collatz_wielandt(&sub, &x).1);
        }
    }
    Ok(radius)
}

/// Lower and upper Collatz-Wielandt bounds for a positive vector.
fn collatz_wielandt(m: &DMatrix<f64>, x: &DVector<f64>) -> (f64, f64) {
    let y = m * x;
    y.iter().zip(x.iter()).fold((f64::INFINITY, 0.0), |(lo, hi), (a, b)| (lo.min(a / b), hi.max(a / b)))
}

fn noda(m: &DMatrix<f64>) -> Result<DVector<f64>> {
    let n = m.nrows();
    let mut x = DVector::from_element(n, 1.0);
    let mut best = (f64::INFINITY, x.clone());
    let mut stalled = 0;
    for _ in 0..MAX_ITER {
        let (lo, hi) = collatz_wielandt(m, &x);
        let gap = hi - lo;
        if gap <= GAP_TOL * hi {
            return Ok(x);
        }
        if gap < best.0 {
            best = (gap, x.clone());
            stalled = 0;
        } else {
            stalled += 1;
        }
        // round-off floor: small components of a widely spread vector keep
        // the ratio bounds from meeting
        if stalled >= STALL_ITER && best.0 <= STALL_GAP * hi {
            return Ok(best.1);
        }
        let lu = (DMatrix::identity(n, n) * hi - m).lu();
        let mut y = match lu.solve(&x) {
            Some(y) if y.iter().all(|v| v.is_finite() && *v > 0.0) => y,
            // the shift hit the Perron root to machine precision
            _ => return Ok(x),
        };
        y /= y.max();
        let step = (&y - &x).amax();
        x = y;
        if step <= STEP_TOL {
            return Ok(x);
        }
    }
    Err(Error::NonConvergence { iterations: MAX_ITER, residual: best.0 })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn figure8_adjacency() -> DMatrix<f64> {
        DMatrix::from_row_slice(4, 4, &[1., 1., 0., 1., 1., 1., 1., 0., 0., 1., 1., 1., 1., 0., 1., 1.])
    }

    #[test]
    fn regular_matrix_has_row_sum_root() {
        let pd = perron(&figure8_adjacency()).unwrap();
        assert!((pd.beta() - 3.0).abs() < 1e-13);
        for i in 0..4 {
            assert!((pd.stationary()[i] - 0.25).abs() < 1e-14);
        }
    }

    #[test]
    fn periodic_matrix() {
        // Bipartite: eigenvalues +-beta share the spectral radius.
        let m = DMatrix::from_row_slice(2, 2, &[0.0, 2.0, 0.5, 0.0]);
        let pd = perron(&m).unwrap();
        assert!((pd.beta() - 1.0).abs() < 1e-14);
        let col_sums = pd.stochastic().row_sum();
        for s in col_sums.iter() {
            assert!((s - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn near_degenerate_spectrum() {
        // Two nearly decoupled self-loops: gap ~ 1e-9.
        let eps = 1e-9;
        let m = DMatrix::from_row_slice(2, 2, &[1.0, eps, eps, 1.0 - 1e-9]);
        let pd = perron(&m).unwrap();
        let p = pd.stationary();
        let pp = pd.stochastic() * p;
        assert!((pp - p).amax() < 1e-12);
        assert!((pd.stochastic().row_sum().add_scalar(-1.0)).amax() < 1e-12);
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(matches!(perron(&DMatrix::zeros(3, 3)), Err(Error::Reducible)));
        let neg = DMatrix::from_row_slice(2, 2, &[1.0, -1.0, 1.0, 1.0]);
        assert!(matches!(perron(&neg), Err(Error::InvalidMatrix)));
        assert!(matches!(perron(&DMatrix::zeros(2, 3)), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn spectral_radius_of_reducible() {
        let m = DMatrix::from_row_slice(2, 2, &[0.5, 1.0, 0.0, 0.25]);
        assert!((spectral_radius(&m).unwrap() - 0.5).abs() < 1e-15);
        assert_eq!(spectral_radius(&DMatrix::zeros(3, 3)).unwrap(), 0.0);
        let blocks = DMatrix::from_row_slice(3, 3, &[0.0, 2.0, 5.0, 0.5, 0.0, 0.0, 0.0, 0.0, 1.5]);
        assert!((spectral_radius(&blocks).unwrap() - 1.5).abs() < 1e-15);
    }
}
