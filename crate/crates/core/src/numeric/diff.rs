//! Central finite differences with one level of Richardson extrapolation.

use crate::error::Result;

pub fn central_first<F>(mut f: F, x: f64, h: f64) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    Ok((f(x + h)? - f(x - h)?) / (2.0 * h))
}

pub fn central_second<F>(mut f: F, x: f64, h: f64) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    Ok((f(x + h)? - 2.0 * f(x)? + f(x - h)?) / (h * h))
}

/// `(4 D(h/2) - D(h)) / 3`, cancelling the `h^2` error term.
pub fn richardson_first<F>(mut f: F, x: f64, h: f64) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    let coarse = central_first(&mut f, x, h)?;
    let fine = central_first(&mut f, x, h / 2.0)?;
    Ok((4.0 * fine - coarse) / 3.0)
}

pub fn richardson_second<F>(mut f: F, x: f64, h: f64) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    let centre = f(x)?;
    let mut second = |h: f64| -> Result<f64> { Ok((f(x + h)? - 2.0 * centre + f(x - h)?) / (h * h)) };
    let coarse = second(h)?;
    let fine = second(h / 2.0)?;
    Ok((4.0 * fine - coarse) / 3.0)
}
