//! Safeguarded Newton iteration for monotone scalar equations.

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug)]
pub struct RootOptions {
    /// Stop once `|f(x)|` falls below this.
    pub residual_tol: f64,
    /// Stop once the bracket is narrower than `x_tol * max(1, |x|)`.
    pub x_tol: f64,
    pub max_iter: usize,
}

impl Default for RootOptions {
    fn default() -> Self {
        RootOptions { residual_tol: 1e-14, x_tol: 1e-15, max_iter: 200 }
    }
}

/// Finds the root of `f` inside `[lo, hi]`, where `f(lo)` and `f(hi)` have
/// opposite signs. `f` returns the value and derivative. Newton steps that
/// leave the bracket, or fail to halve the residual, are replaced by
/// bisection.
pub fn newton_bisect<F>(mut f: F, mut lo: f64, mut hi: f64, start: f64, opts: RootOptions) -> Result<f64>
where
    F: FnMut(f64) -> Result<(f64, f64)>,
{
    let (f_lo, _) = f(lo)?;
    let (f_hi, _) = f(hi)?;
    if f_lo == 0.0 {
        return Ok(lo);
    }
    if f_hi == 0.0 {
        return Ok(hi);
    }
    if f_lo.signum() == f_hi.signum() {
        return Err(Error::Bracket(format!("f({lo}) = {f_lo:e} and f({hi}) = {f_hi:e} share a sign")));
    }
    let lo_sign = f_lo.signum();

    let mut x = if start > lo && start < hi { start } else { 0.5 * (lo + hi) };
    let mut last_residual = f64::INFINITY;
    let mut best = (x, f64::INFINITY);
    for _ in 0..opts.max_iter {
        let (fx, dfx) = f(x)?;
        if !fx.is_finite() {
            return Err(Error::Bracket(format!("non-finite residual at {x}")));
        }
        if fx.abs() < best.1 {
            best = (x, fx.abs());
        }
        if fx.abs() <= opts.residual_tol {
            return Ok(x);
        }
        if fx.signum() == lo_sign {
            lo = x;
        } else {
            hi = x;
        }
        if (hi - lo).abs() <= opts.x_tol * x.abs().max(1.0) {
            return Ok(best.0);
        }
        let newton = x - fx / dfx;
        let inside = newton.is_finite() && newton > lo.min(hi) && newton < lo.max(hi);
        x = if inside && fx.abs() <= 0.5 * last_residual {
            newton
        } else {
            0.5 * (lo + hi)
        };
        last_residual = fx.abs();
    }
    if best.1 <= opts.residual_tol * 1e2 {
        Ok(best.0)
    } else {
        Err(Error::Bracket(format!("no convergence after {} iterations (best residual {:e})", opts.max_iter, best.1)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solves_decreasing_convex() {
        let f = |x: f64| Ok(((-x).exp() - 0.25, -(-x).exp()));
        let root = newton_bisect(f, 0.0, 10.0, 0.0, RootOptions::default()).unwrap();
        assert!((root - 4f64.ln()).abs() < 1e-13);
    }

    #[test]
    fn survives_bad_derivative() {
        // Wrong derivative everywhere: bisection has to carry the iteration.
        let f = |x: f64| Ok((x * x * x - 2.0, 1e-9));
        let opts = RootOptions { max_iter: 500, ..Default::default() };
        let root = newton_bisect(f, 0.0, 3.0, 1.0, opts).unwrap();
        assert!((root - 2f64.cbrt()).abs() < 1e-13);
    }

    #[test]
    fn rejects_non_bracket() {
        let f = |x: f64| Ok((x * x + 1.0, 2.0 * x));
        assert!(matches!(newton_bisect(f, -1.0, 1.0, 0.0, RootOptions::default()), Err(Error::Bracket(_))));
    }
}
