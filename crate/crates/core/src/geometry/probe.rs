//! Length of a path running into a singular endpoint.
//!
//! The speed near the endpoint is fitted to `C t^alpha` (distance to the
//! endpoint `t`, or the parameter itself toward infinity). Clear exponents
//! decide the question directly; exponents near the critical value `-1`
//! are refined by fitting a logarithmic correction `C t^-1 |log t|^beta`.

use crate::error::{Error, Result};
use crate::numeric::fit::fit_line;
use crate::numeric::quad::{integrate, QuadOptions};

/// Which end of the path is singular.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Toward {
    /// The path runs over `(a, regular]` and degenerates as `t -> a`.
    Lower(f64),
    /// The path runs over `[regular, inf)`.
    Infinity,
}

#[derive(Clone, Copy, Debug)]
pub struct ProbeOptions {
    pub samples_per_decade: usize,
    pub decades: usize,
    /// Closest approach to a finite endpoint, relative to the path length
    /// in parameter space.
    pub offset: f64,
    /// Farthest parameter tried toward infinity, in decades past `regular`.
    pub max_decades: usize,
    /// `|alpha + 1|` below this triggers the logarithmic test.
    pub band: f64,
    /// `|beta + 1|` below this leaves the question open.
    pub log_band: f64,
    pub quad: QuadOptions,
}

impl Default for ProbeOptions {
    fn default() -> Self {
        ProbeOptions {
            samples_per_decade: 12,
            decades: 3,
            offset: 1e-9,
            max_decades: 6,
            band: 0.05,
            log_band: 0.1,
            quad: QuadOptions { abs_tol: 1e-13, rel_tol: 1e-12, max_intervals: 500 },
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum PathLength {
    Finite { length: f64, exponent: f64 },
    Divergent { exponent: f64, log_exponent: Option<f64> },
    Indeterminate { exponent: f64, log_exponent: f64 },
}

impl PathLength {
    pub fn is_finite(&self) -> bool {
        matches!(self, PathLength::Finite { .. })
    }

    pub fn is_divergent(&self) -> bool {
        matches!(self, PathLength::Divergent { .. })
    }

    pub fn exponent(&self) -> f64 {
        match *self {
            PathLength::Finite { exponent, .. }
            | PathLength::Divergent { exponent, .. }
            | PathLength::Indeterminate { exponent, .. } => exponent,
        }
    }
}

enum Verdict {
    Finite,
    Divergent(Option<f64>),
    Open(f64),
}

/// `log |s|` against `log t` and `log(|log t| s t)` against `log |log t|`.
fn classify(ts: &[f64], speeds: &[f64], opts: &ProbeOptions, toward_zero: bool) -> Result<(f64, Verdict, f64)> {
    let lx: Vec<f64> = ts.iter().map(|t| t.ln()).collect();
    let ly: Vec<f64> = speeds.iter().map(|s| s.ln()).collect();
    let fit = fit_line(&lx, &ly).ok_or_else(|| Error::InvalidArgument("too few speed samples".into()))?;
    let alpha = fit.slope;
    // integrability of t^alpha: at zero needs alpha > -1, at infinity alpha < -1
    let integrable = |a: f64| if toward_zero { a > -1.0 } else { a < -1.0 };
    if (alpha + 1.0).abs() > opts.band {
        let v = if integrable(alpha) { Verdict::Finite } else { Verdict::Divergent(None) };
        return Ok((alpha, v, f64::NAN));
    }
    let lx: Vec<f64> = ts.iter().map(|t| t.ln().abs().ln()).collect();
    let ly: Vec<f64> = ts.iter().zip(speeds).map(|(t, s)| (s * t).ln()).collect();
    let beta = fit_line(&lx, &ly).ok_or_else(|| Error::InvalidArgument("too few speed samples".into()))?.slope;
    let v = if beta > -1.0 + opts.log_band {
        Verdict::Divergent(Some(beta))
    } else if beta < -1.0 - opts.log_band {
        Verdict::Finite
    } else {
        Verdict::Open(beta)
    };
    Ok((alpha, v, beta))
}

/// Length of a path with speed `speed(t)` toward a singular endpoint.
pub fn path_length<F>(speed: F, regular: f64, toward: Toward, opts: &ProbeOptions) -> Result<PathLength>
where
    F: Fn(f64) -> Result<f64>,
{
    match toward {
        Toward::Lower(a) => toward_lower(&speed, a, regular, opts),
        Toward::Infinity => toward_infinity(&speed, regular, opts),
    }
}

fn toward_lower<F>(speed: &F, a: f64, b: f64, opts: &ProbeOptions) -> Result<PathLength>
where
    F: Fn(f64) -> Result<f64>,
{
    if !(b > a) {
        return Err(Error::InvalidArgument(format!("empty path ({a}, {b}]")));
    }
    let span = b - a;
    let eps = opts.offset;
    let n = opts.samples_per_decade * opts.decades;
    // distances to the endpoint, normalized by the span, from eps upward
    let us: Vec<f64> = (0..=n).map(|k| eps * 10f64.powf(k as f64 / opts.samples_per_decade as f64)).collect();
    let speeds = us.iter().map(|u| speed(a + u * span)).collect::<Result<Vec<f64>>>()?;
    let (alpha, verdict, beta) = classify(&us, &speeds, opts, true)?;
    match verdict {
        Verdict::Divergent(log_exponent) => Ok(PathLength::Divergent { exponent: alpha, log_exponent }),
        Verdict::Open(log_exponent) => Ok(PathLength::Indeterminate { exponent: alpha, log_exponent }),
        Verdict::Finite => {
            let mut length = 0.0;
            let mut lo = eps;
            while lo < 1.0 {
                let hi = (lo * 10.0).min(1.0);
                length += integrate(|u| Ok(speed(a + u * span)? * span), lo, hi, opts.quad)?.value;
                lo = hi;
            }
            // local behaviour over the first decade sets the tail
            let m = opts.samples_per_decade + 1;
            let lx: Vec<f64> = us[..m].iter().map(|u| u.ln()).collect();
            let ly: Vec<f64> = speeds[..m].iter().map(|s| s.ln()).collect();
            let local = fit_line(&lx, &ly).map(|f| f.slope).unwrap_or(alpha);
            let tail = if (local + 1.0).abs() > opts.band {
                speeds[0] * eps * span / (local + 1.0)
            } else if beta.is_finite() {
                speeds[0] * eps * span * eps.ln().abs() / (-beta - 1.0)
            } else {
                speeds[0] * eps * span / (alpha + 1.0)
            };
            Ok(PathLength::Finite { length: length + tail, exponent: alpha })
        }
    }
}

fn toward_infinity<F>(speed: &F, b: f64, opts: &ProbeOptions) -> Result<PathLength>
where
    F: Fn(f64) -> Result<f64>,
{
    if !(b > 0.0) {
        return Err(Error::InvalidArgument(format!("path toward infinity must start at a positive parameter, got {b}")));
    }
    let per = opts.samples_per_decade as f64;
    let mut ts = Vec::new();
    let mut speeds = Vec::new();
    for k in 0..=opts.samples_per_decade * opts.max_decades {
        let t = b * 10f64.powf(k as f64 / per);
        match speed(t) {
            Ok(s) if s.is_finite() && s > 0.0 => {
                ts.push(t);
                speeds.push(s);
            }
            _ => break,
        }
    }
    if ts.len() < opts.samples_per_decade / 2 + 1 {
        return Err(Error::InvalidArgument(format!("speed could only be sampled on [{b}, {}]", ts.last().unwrap_or(&b))));
    }
    let window = ts.len().saturating_sub(opts.samples_per_decade * opts.decades + 1);
    let (alpha, verdict, beta) = classify(&ts[window..], &speeds[window..], opts, false)?;
    match verdict {
        Verdict::Divergent(log_exponent) => Ok(PathLength::Divergent { exponent: alpha, log_exponent }),
        Verdict::Open(log_exponent) => Ok(PathLength::Indeterminate { exponent: alpha, log_exponent }),
        Verdict::Finite => {
            let last = *ts.last().expect("nonempty");
            let s_last = *speeds.last().expect("nonempty");
            let body = integrate(|u| Ok(speed(u.exp())? * u.exp()), b.ln(), last.ln(), opts.quad)?.value;
            let tail = if (alpha + 1.0).abs() > opts.band {
                s_last * last / (-alpha - 1.0)
            } else {
                s_last * last * last.ln() / (-beta - 1.0)
            };
            Ok(PathLength::Finite { length: body + tail, exponent: alpha })
        }
    }
}
